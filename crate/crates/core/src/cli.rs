//! Command-line front end. Every command that writes files also writes a
//! manifest `<output>.manifest.json` recording the command line, SHA-256
//! digests of the inputs, the seed, the crate version and the outputs.
//!
//! Exit codes: 0 success or certified, 1 refuted, 2 inconclusive, 3 usage or
//! I/O error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::limits::{self, Side};
use crate::projections::{
    cartan_projection, iterated_cartan, jordan_projection, opposition_involution, regularity_gaps, ChamberVector,
};
use crate::projgeom::{GroupElement, ProjectivePoint};
use crate::proximality::{certify_eps_proximal, CheckOptions, Mode, DEFAULT_SAMPLES};
use crate::schottky::{self, ForgeOptions, SystemDoc, TargetCone};
use crate::words::{Kind, LetterSet, WordSampler};

pub const THREADS_VAR: &str = "LIMITCONE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "limitcone", version, about = "Limit cones and Schottky systems in SL(n, R)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cartan and Jordan projections of a matrix.
    Project {
        #[arg(long)]
        matrix: PathBuf,
        /// Also print μ(g^N)/N.
        #[arg(long)]
        iterate: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify ε-proximality of Λ^K g.
    Certify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        epsilon: f64,
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify that a generating set is an ε-Schottky system.
    CertifySchottky {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Overrides the epsilons of the system file.
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a Schottky system whose limit cone follows the given rays.
    Forge {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rays: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        group: bool,
        #[arg(long, default_value_t = schottky::DEFAULT_MAX_POWER)]
        max_power: u64,
        #[arg(long, default_value = "out.json")]
        out: PathBuf,
    },
    /// Sample Jordan directions and their convex hull.
    EstimateCone {
        #[command(flatten)]
        words: WordArgs,
        /// Output directory.
        #[arg(long, default_value = "cone")]
        out: PathBuf,
    },
    /// Sample attracting points, one cloud per degree.
    LimitSet {
        #[command(flatten)]
        words: WordArgs,
        #[arg(long, value_enum, default_value_t = Side::Forward)]
        side: Side,
        #[arg(long, default_value_t = limits::DEFAULT_FILTER)]
        filter: f64,
        /// Output directory.
        #[arg(long, default_value = "limit-set")]
        out: PathBuf,
    },
    /// Largest ‖μ(w) − λ(w)‖∞ per word length.
    Compare {
        #[command(flatten)]
        words: WordArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, value_enum, default_value_t = Mode::Analytic)]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl CheckArgs {
    fn options(&self) -> CheckOptions {
        CheckOptions {
            mode: self.mode,
            samples: self.samples,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
struct WordArgs {
    #[arg(long)]
    system: PathBuf,
    #[arg(long)]
    depth: usize,
    /// Sample this many random words instead of enumerating.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl WordArgs {
    fn sampler(&self) -> Result<WordSampler> {
        let doc: SystemDoc = read_json(&self.system)?;
        let letters = LetterSet::new(&doc.generators, doc.kind)?;
        Ok(match self.random {
            Some(count) => WordSampler::random(letters, self.depth, count, self.seed),
            None => WordSampler::exhaustive(letters, self.depth),
        })
    }
}

#[derive(Debug, Serialize)]
struct Manifest {
    command: Vec<String>,
    inputs: Vec<InputDigest>,
    seed: u64,
    version: String,
    outputs: Vec<String>,
}

#[derive(Debug, Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RaysDoc {
    Plain(Vec<Vec<f64>>),
    Full { rays: Vec<Vec<f64>>, margin: Option<f64> },
}

/// Parse `argv` (including the program name), run the command and return
/// the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let rendered = e.to_string();
            let line = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
            eprintln!("{line}");
            return 3;
        }
    };
    configure_threads();
    match dispatch(cli.command, &argv[1..]) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()) {
        // A pool may already exist when run() is called more than once.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn dispatch(command: Command, args: &[String]) -> Result<i32> {
    match command {
        Command::Project { matrix, iterate, out } => {
            let g: GroupElement = read_json(&matrix)?;
            let text = project_report(&g, iterate)?;
            print!("{text}");
            if let Some(out) = out {
                write_file(&out, &text)?;
                write_manifest(&out, args, &[&matrix], 0, &[&out])?;
            }
            Ok(0)
        }
        Command::Certify {
            matrix,
            degree,
            epsilon,
            check,
            out,
        } => {
            let g: GroupElement = read_json(&matrix)?;
            let cert = certify_eps_proximal(&g, degree, epsilon, &check.options())?;
            let mut text = String::new();
            writeln!(text, "certified {}-proximal on degree {degree}", real(epsilon)).ok();
            writeln!(text, "log_top_modulus {}", real(cert.log_top_modulus)).ok();
            writeln!(text, "gap {}", real(cert.gap_value)).ok();
            writeln!(text, "lipschitz_bound {}", real(cert.lipschitz_bound)).ok();
            writeln!(text, "image_radius {}", real(cert.image_radius)).ok();
            writeln!(text, "mode {} samples {}", cert.mode, cert.sample_count).ok();
            writeln!(text, "attracting {}", reals(cert.attracting.rep().as_slice())).ok();
            writeln!(text, "repelling {}", reals(cert.repelling.covector().as_slice())).ok();
            print!("{text}");
            if let Some(out) = out {
                write_file(&out, &text)?;
                write_manifest(&out, args, &[&matrix], check.seed, &[&out])?;
            }
            Ok(0)
        }
        Command::CertifySchottky {
            system,
            kind,
            epsilon,
            check,
            out,
        } => {
            let doc: SystemDoc = read_json(&system)?;
            let kind = kind.unwrap_or(doc.kind);
            let epsilons = match epsilon {
                Some(e) => vec![e; doc.generators.len()],
                None => doc.epsilons.clone(),
            };
            if let Ok(letters) = LetterSet::new(&doc.generators, kind) {
                if let Ok(separation) = schottky::separation_matrix(&letters) {
                    print!("{}", separation_report(&separation));
                }
            }
            let verified = schottky::verify_schottky(&doc.generators, kind, &epsilons, &check.options())?;
            let text = system_report(&verified);
            print!("{text}");
            if let Some(out) = out {
                write_file(&out, &text)?;
                write_manifest(&out, args, &[&system], check.seed, &[&out])?;
            }
            Ok(0)
        }
        Command::Forge {
            n,
            rays,
            epsilon,
            seed,
            group,
            max_power,
            out,
        } => {
            let (ray_list, margin) = match read_json::<RaysDoc>(&rays)? {
                RaysDoc::Plain(r) => (r, 0.0),
                RaysDoc::Full { rays, margin } => (rays, margin.unwrap_or(0.0)),
            };
            let cone = TargetCone::new(ray_list, margin)?;
            let mut options = ForgeOptions::new(epsilon, seed);
            options.max_power = max_power;
            let report = if group {
                schottky::forge_group(n, &cone, &options)?
            } else {
                schottky::forge_semigroup(n, &cone, &options)?
            };
            let doc = report.system.to_doc();
            write_file(&out, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
            let summary_path = sibling(&out, ".certificate.txt");
            let mut summary = system_report(&report.system);
            writeln!(summary, "powers {}", join(report.powers.iter().map(|p| p.to_string()))).ok();
            writeln!(summary, "direction_slack_deg {}", real(report.direction_slack_deg)).ok();
            if let Some(m) = report.direction_margin {
                writeln!(summary, "direction_margin {}", real(m)).ok();
            }
            writeln!(
                summary,
                "regular {} non_commuting {} distinct_flags {}",
                report.proxies.regular, report.proxies.non_commuting, report.proxies.distinct_flags
            )
            .ok();
            write_file(&summary_path, &summary)?;
            print!("{summary}");
            write_manifest(&out, args, &[&rays], seed, &[&out, &summary_path])?;
            Ok(0)
        }
        Command::EstimateCone { words, out } => {
            let sampler = words.sampler()?;
            let estimate = limits::estimate_cone(&sampler)?;
            fs::create_dir_all(&out)?;
            let rays_path = out.join("rays.csv");
            let directions_path = out.join("directions.csv");
            let summary_path = out.join("summary.json");
            write_file(&rays_path, &vectors_csv(&estimate.hull_rays))?;
            write_file(&directions_path, &vectors_csv(&estimate.directions))?;
            let summary = serde_json::json!({
                "hull_dim": estimate.hull_dim,
                "rays": estimate.hull_rays.iter().map(|r| rounded(r.coords())).collect::<Vec<_>>(),
                "max_mu_lambda_gap": round12(estimate.max_mu_lambda_gap()),
                "directions": estimate.directions.len(),
            });
            write_file(&summary_path, &(serde_json::to_string_pretty(&summary)? + "\n"))?;
            println!("hull_dim {}", estimate.hull_dim);
            for r in &estimate.hull_rays {
                println!("ray {}", reals(r.coords()));
            }
            println!("max_mu_lambda_gap {}", real(estimate.max_mu_lambda_gap()));
            write_manifest(
                &summary_path,
                args,
                &[&words.system],
                words.seed,
                &[&summary_path, &rays_path, &directions_path],
            )?;
            Ok(0)
        }
        Command::LimitSet {
            words,
            side,
            filter,
            out,
        } => {
            let sampler = words.sampler()?;
            let sample = limits::estimate_limit_set(&sampler, side, filter)?;
            fs::create_dir_all(&out)?;
            let mut paths = Vec::new();
            for (i, cloud) in sample.points.iter().enumerate() {
                let path = out.join(format!("{side}_degree_{}.csv", i + 1));
                write_file(&path, &points_csv(cloud))?;
                println!("degree {} points {}", i + 1, cloud.len());
                paths.push(path);
            }
            let refs: Vec<&Path> = paths.iter().map(PathBuf::as_path).collect();
            write_manifest(&paths[0], args, &[&words.system], words.seed, &refs)?;
            Ok(0)
        }
        Command::Compare { words, out } => {
            let sampler = words.sampler()?;
            let gaps = limits::compare_mu_lambda(&sampler)?;
            let mut text = String::from("length,max_gap\n");
            for (l, g) in &gaps {
                writeln!(text, "{l},{}", real(*g)).ok();
            }
            print!("{text}");
            if let Some(out) = out {
                write_file(&out, &text)?;
                write_manifest(&out, args, &[&words.system], words.seed, &[&out])?;
            }
            Ok(0)
        }
    }
}

fn project_report(g: &GroupElement, iterate: Option<u64>) -> Result<String> {
    let lambda = jordan_projection(g)?;
    let mut text = String::new();
    writeln!(text, "mu {}", reals(cartan_projection(g)?.coords())).ok();
    writeln!(text, "lambda {}", reals(lambda.coords())).ok();
    writeln!(text, "iota_lambda {}", reals(opposition_involution(&lambda).coords())).ok();
    writeln!(text, "gaps {}", reals(&regularity_gaps(g)?)).ok();
    if let Some(steps) = iterate {
        writeln!(text, "iterated_mu {}", reals(iterated_cartan(g, steps)?.coords())).ok();
    }
    Ok(text)
}

fn separation_report(separation: &schottky::Separation) -> String {
    let mut text = String::new();
    for (d, m) in separation.by_degree.iter().enumerate() {
        writeln!(text, "separation degree {}", d + 1).ok();
        for row in m.row_iter() {
            writeln!(text, "  {}", reals(&row.iter().copied().collect::<Vec<_>>())).ok();
        }
    }
    text
}

fn system_report(system: &schottky::SchottkySystem) -> String {
    let mut text = String::new();
    writeln!(
        text,
        "certified {} system with {} letters",
        match system.kind() {
            Kind::Semigroup => "semigroup",
            Kind::Group => "group",
        },
        system.letters().len()
    )
    .ok();
    for (a, certs) in system.certificates().iter().enumerate() {
        for c in certs {
            writeln!(
                text,
                "letter {a} degree {} epsilon {} log_top_modulus {} lipschitz_bound {} image_radius {}",
                c.rep.k,
                real(c.epsilon),
                real(c.log_top_modulus),
                real(c.lipschitz_bound),
                real(c.image_radius)
            )
            .ok();
        }
    }
    text
}

/// Twelve significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.11e}")
}

fn round12(x: f64) -> f64 {
    real(x).parse().unwrap_or(x)
}

fn rounded(xs: &[f64]) -> Vec<f64> {
    xs.iter().copied().map(round12).collect()
}

fn reals(xs: &[f64]) -> String {
    join(xs.iter().map(|&x| real(x)))
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(" ")
}

fn vectors_csv(vs: &[ChamberVector]) -> String {
    vs.iter().map(|v| v.coords().iter().map(|&x| real(x)).collect::<Vec<_>>().join(",") + "\n").collect()
}

fn points_csv(ps: &[ProjectivePoint]) -> String {
    ps.iter().map(|p| p.rep().iter().map(|&x| real(x)).collect::<Vec<_>>().join(",") + "\n").collect()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_slice(&bytes).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn write_manifest(primary: &Path, args: &[String], inputs: &[&Path], seed: u64, outputs: &[&Path]) -> Result<()> {
    let manifest = Manifest {
        command: args.to_vec(),
        inputs: inputs
            .iter()
            .map(|p| {
                Ok(InputDigest {
                    path: p.display().to_string(),
                    sha256: digest(p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    write_file(&sibling(primary, ".manifest.json"), &(serde_json::to_string_pretty(&manifest)? + "\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_have_twelve_significant_digits() {
        assert_eq!(real(0.809896), "8.09896000000e-1");
        assert_eq!(real(-1.0 / 3.0), "-3.33333333333e-1");
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
    }

    #[test]
    fn usage_errors_exit_three() {
        assert_eq!(run(["limitcone", "frobnicate"]), 3);
        assert_eq!(run(["limitcone", "certify", "--degree", "1"]), 3);
        assert_eq!(run(["limitcone", "project", "--matrix", "/nonexistent/g.json"]), 3);
    }
}
