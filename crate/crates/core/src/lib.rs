//! Computational tools for Zariski-dense semigroups of SL(n, R): Cartan and
//! Jordan projections, proximality and Schottky certificates, and sampled
//! estimates of limit cones and limit sets.

pub mod cli;
pub mod error;
pub mod hull;
pub mod limits;
pub mod linalg;
pub mod projections;
pub mod projgeom;
pub mod proximality;
pub mod rng;
pub mod schottky;
pub mod words;

pub use error::{Error, Result};
pub use projgeom::{
    exterior_power, gap, hausdorff_distance, proj_distance, GroupElement, ProjectiveHyperplane,
    ProjectivePoint, Representation,
};
pub use projections::{
    cartan_projection, iterated_cartan, jordan_projection, opposition_involution, regularity_gaps,
    ChamberVector,
};
pub use proximality::{
    certify_eps_proximal, certify_theta_proximal, compose_certificates, top_eigendata, CheckOptions, Mode,
    ProximalityCertificate,
};
pub use words::{Kind, LetterSet, Reduction, Strategy, WordProduct, WordSampler};
pub use schottky::{
    forge_group, forge_semigroup, in_cone_semigroup, in_open_semigroup, verify_schottky, word_lyapunov_estimate,
    FacetFrame, ForgeOptions, ForgeReport, SchottkySystem, TargetCone,
};
pub use limits::{
    check_convexity, compare_mu_lambda, estimate_cone, estimate_facets, estimate_limit_set, ConeEstimate, LimitSetSample,
    Side,
};
