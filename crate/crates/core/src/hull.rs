//! Finite convex cones in the zero-sum hyperplane.
//!
//! Directions are expressed in an orthonormal basis of {x : Σ xᵢ = 0}, so a
//! cone in 𝔞 for SL(n) becomes a cone in R^(n−1). Membership is decided by
//! nonnegative least squares; extreme rays are found exactly in the plane
//! and by elimination in higher dimension.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{self, zero_sum_basis};

/// Directions closer than this (in radians) are treated as one.
pub const DUPLICATE_ANGLE: f64 = 1e-9;
const MEMBERSHIP_TOLERANCE: f64 = 1e-10;

pub fn to_coords(v: &DVector<f64>) -> DVector<f64> {
    zero_sum_basis(v.len()).transpose() * v
}

pub fn from_coords(c: &DVector<f64>) -> DVector<f64> {
    zero_sum_basis(c.len() + 1) * c
}

/// Lawson–Hanson nonnegative least squares: minimizes ‖Ax − b‖ over x ≥ 0.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let m = a.ncols();
    let mut x = DVector::zeros(m);
    if m == 0 {
        return x;
    }
    let scale = a.amax().max(b.amax()).max(1e-300);
    let tol = 1e-12 * scale * scale * (m as f64);
    let mut passive = vec![false; m];
    let solve_on = |passive: &[bool]| -> DVector<f64> {
        let cols: Vec<usize> = (0..m).filter(|&j| passive[j]).collect();
        let sub = DMatrix::from_fn(a.nrows(), cols.len(), |i, c| a[(i, cols[c])]);
        let z_sub = sub
            .svd(true, true)
            .solve(b, 1e-14)
            .unwrap_or_else(|_| DVector::zeros(cols.len()));
        let mut z = DVector::zeros(m);
        for (c, &j) in cols.iter().enumerate() {
            z[j] = z_sub[c];
        }
        z
    };
    for _outer in 0..(3 * m + 10) {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..m)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        passive[j] = true;
        for _inner in 0..(3 * m + 10) {
            let z = solve_on(&passive);
            let bad: Vec<usize> = (0..m).filter(|&i| passive[i] && z[i] <= 0.0).collect();
            if bad.is_empty() {
                x = z;
                break;
            }
            let alpha = bad
                .iter()
                .map(|&i| x[i] / (x[i] - z[i]))
                .fold(f64::INFINITY, f64::min);
            x = &x + (z - &x) * alpha;
            for i in 0..m {
                if passive[i] && x[i] <= 1e-15 * scale {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
    }
    x
}

fn columns(rays: &[DVector<f64>]) -> DMatrix<f64> {
    let d = rays.first().map_or(0, |r| r.len());
    DMatrix::from_fn(d, rays.len(), |i, j| rays[j][i])
}

/// Nearest point of cone(rays) to `v`.
pub fn project_to_cone(rays: &[DVector<f64>], v: &DVector<f64>) -> DVector<f64> {
    if rays.is_empty() {
        return DVector::zeros(v.len());
    }
    let a = columns(rays);
    let x = nnls(&a, v);
    a * x
}

/// Angle in radians between `v` and cone(rays); zero inside the cone.
pub fn angle_to_cone(rays: &[DVector<f64>], v: &DVector<f64>) -> f64 {
    let p = project_to_cone(rays, v);
    let residual = (v - &p).norm();
    if residual <= MEMBERSHIP_TOLERANCE * v.norm() {
        return 0.0;
    }
    residual.atan2(p.norm())
}

pub fn in_cone(rays: &[DVector<f64>], v: &DVector<f64>, tolerance: f64) -> bool {
    let p = project_to_cone(rays, v);
    (v - p).norm() <= tolerance * v.norm().max(1e-300)
}

/// Indices of the first representative of each distinct unit direction.
pub fn distinct_directions(dirs: &[DVector<f64>]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for (i, d) in dirs.iter().enumerate() {
        if !kept.iter().any(|&j| linalg::angle_between(&dirs[j], d) < DUPLICATE_ANGLE) {
            kept.push(i);
        }
    }
    kept
}

/// Rank of the matrix whose columns are the directions.
pub fn numerical_rank(dirs: &[DVector<f64>]) -> usize {
    if dirs.is_empty() {
        return 0;
    }
    let sv = linalg::singular_values(&columns(dirs)).unwrap_or_default();
    let top = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > 1e-9 * top).count()
}

/// Indices of extreme rays of cone(dirs). In the plane the rays come out in
/// counterclockwise order.
pub fn extreme_rays(dirs: &[DVector<f64>]) -> Vec<usize> {
    let distinct = distinct_directions(dirs);
    if distinct.len() <= 1 {
        return distinct;
    }
    let d = dirs[0].len();
    if d == 2 {
        if let Some(planar) = planar_extremes(dirs, &distinct) {
            return planar;
        }
    }
    distinct
        .iter()
        .copied()
        .filter(|&i| {
            let others: Vec<DVector<f64>> = distinct.iter().filter(|&&j| j != i).map(|&j| dirs[j].clone()).collect();
            !in_cone(&others, &dirs[i], 1e-9)
        })
        .collect()
}

// Endpoints of the widest angular gap, when that gap exceeds π; `None` if the
// directions are not contained in an open half-plane.
fn planar_extremes(dirs: &[DVector<f64>], distinct: &[usize]) -> Option<Vec<usize>> {
    let mut angles: Vec<(f64, usize)> = distinct.iter().map(|&i| (dirs[i][1].atan2(dirs[i][0]), i)).collect();
    angles.sort_by(|a, b| a.0.total_cmp(&b.0));
    let count = angles.len();
    let mut widest = (0.0, 0usize);
    for k in 0..count {
        let next = (k + 1) % count;
        let mut gap = angles[next].0 - angles[k].0;
        if next == 0 {
            gap += std::f64::consts::TAU;
        }
        if gap > widest.0 {
            widest = (gap, k);
        }
    }
    if widest.0 <= std::f64::consts::PI + 1e-12 {
        return None;
    }
    let start = angles[(widest.1 + 1) % count].1;
    let end = angles[widest.1].1;
    Some(if start == end { vec![start] } else { vec![start, end] })
}

/// Unit inward normals of the facets of a full-dimensional cone, or `None`
/// if the rays do not span their ambient space. An empty list means the
/// cone is the whole space.
pub fn cone_facets(rays: &[DVector<f64>]) -> Option<Vec<DVector<f64>>> {
    let d = rays.first()?.len();
    if numerical_rank(rays) < d {
        return None;
    }
    let extremes: Vec<DVector<f64>> = extreme_rays(rays).into_iter().map(|i| rays[i].clone()).collect();
    let mut normals: Vec<DVector<f64>> = Vec::new();
    for subset in linalg::k_subsets(extremes.len(), d - 1) {
        let normal = if d == 1 {
            DVector::from_element(1, 1.0)
        } else {
            let m = DMatrix::from_fn(d - 1, d, |i, j| extremes[subset[i]][j]);
            let svd = nalgebra::linalg::SVD::try_new(m.transpose() * &m, true, false, f64::EPSILON, 10_000)?;
            let u = svd.u?;
            let mut order: Vec<usize> = (0..d).collect();
            order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
            if svd.singular_values[order[1]] <= 1e-18 {
                continue;
            }
            let imin = order[0];
            u.column(imin).into_owned()
        };
        let dots: Vec<f64> = extremes.iter().map(|r| r.dot(&normal)).collect();
        let normal = if dots.iter().all(|&x| x >= -1e-10) {
            normal
        } else if dots.iter().all(|&x| x <= 1e-10) {
            -normal
        } else {
            continue;
        };
        if !normals.iter().any(|n| (n - &normal).norm() < 1e-9) {
            normals.push(normal);
        }
    }
    Some(normals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn nnls_recovers_nonnegative_combinations() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
        let x = nnls(&a, &v(&[2.0, 3.0]));
        assert!((&a * &x - v(&[2.0, 3.0])).norm() < 1e-12);
        assert!(x.iter().all(|&c| c >= 0.0));
        // Outside the cone the best fit is the projection onto a face.
        let x = nnls(&a, &v(&[-1.0, 1.0]));
        assert!((&a * x - v(&[0.0, 1.0])).norm() < 1e-12);
    }

    #[test]
    fn planar_extremes_of_a_fan() {
        let dirs: Vec<DVector<f64>> = [0.1f64, 0.5, 0.3, 0.9, 0.2]
            .iter()
            .map(|t| v(&[t.cos(), t.sin()]))
            .collect();
        assert_eq!(extreme_rays(&dirs), vec![0, 3]);
        assert_eq!(numerical_rank(&dirs), 2);
        assert!(angle_to_cone(&[dirs[0].clone(), dirs[3].clone()], &dirs[2]) == 0.0);
        let outside = v(&[1.0f64.cos(), 1.0f64.sin()]);
        let angle = angle_to_cone(&[dirs[0].clone(), dirs[3].clone()], &outside);
        assert!((angle - 0.1).abs() < 1e-9);
    }

    #[test]
    fn elimination_matches_planar_rule() {
        let dirs: Vec<DVector<f64>> = [0.1f64, 0.5, 0.3, 0.9, 0.2]
            .iter()
            .map(|t| v(&[t.cos(), t.sin(), 0.0]))
            .collect();
        let mut ext = extreme_rays(&dirs);
        ext.sort();
        assert_eq!(ext, vec![0, 3]);
    }

    #[test]
    fn facets_of_a_wedge() {
        let rays = vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        let mut facets = cone_facets(&rays).unwrap();
        facets.sort_by(|a, b| b[0].total_cmp(&a[0]));
        assert!((&facets[0] - v(&[1.0, 0.0])).norm() < 1e-12);
        assert!((&facets[1] - v(&[0.0, 1.0])).norm() < 1e-12);
        assert!(cone_facets(&[v(&[1.0, 0.0])]).is_none());
        assert_eq!(cone_facets(&[v(&[1.0])]).unwrap().len(), 1);
    }

    #[test]
    fn coordinates_round_trip() {
        let x = v(&[1.0, 0.5, -1.5]);
        assert!((from_coords(&to_coords(&x)) - &x).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn every_direction_lies_in_the_hull(angles in proptest::collection::vec(0.0f64..1.2, 1..40)) {
            let dirs: Vec<DVector<f64>> = angles.iter().map(|t| v(&[t.cos(), t.sin()])).collect();
            let rays: Vec<DVector<f64>> = extreme_rays(&dirs).into_iter().map(|i| dirs[i].clone()).collect();
            for d in &dirs {
                prop_assert!(in_cone(&rays, d, 1e-9));
            }
        }
    }
}
