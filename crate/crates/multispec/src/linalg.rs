//! Small dense complex linear algebra helpers shared by the numeric modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn determinant(m: &CMat) -> Complex64 {
    m.clone().lu().determinant()
}

pub fn solve(m: &CMat, rhs: &CVec) -> Option<CVec> {
    m.clone().lu().solve(rhs)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Eigenvalues of a square complex matrix. Sizes 1 and 2 use closed forms;
/// larger matrices go through the complex Schur decomposition.
pub fn eigenvalues(m: &CMat) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigenvalues of a non-square matrix");
    match n {
        0 => Ok(vec![]),
        1 => Ok(vec![m[(0, 0)]]),
        2 => {
            let tr = m[(0, 0)] + m[(1, 1)];
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            let disc = (tr * tr - 4.0 * det).sqrt();
            Ok(vec![(tr + disc) / 2.0, (tr - disc) / 2.0])
        }
        _ => {
            let schur = m
                .clone()
                .try_schur(1e-14, 10_000)
                .ok_or_else(|| Error::DegenerateBase("Schur iteration failed".into()))?;
            let (_, t) = schur.unpack();
            Ok((0..n).map(|i| t[(i, i)]).collect())
        }
    }
}

/// Eigenvalues sorted lexicographically by `(Re, Im)` — the canonical
/// reporting order.
pub fn eigenvalues_canonical(m: &CMat) -> Result<Vec<Complex64>> {
    let mut eigs = eigenvalues(m)?;
    sort_canonical(&mut eigs);
    Ok(eigs)
}

pub fn sort_canonical(values: &mut [Complex64]) {
    values.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

/// An eigenvector for a (simple) eigenvalue via one shifted inverse-iteration
/// sweep. Returns a unit vector.
pub fn eigenvector(m: &CMat, lambda: Complex64) -> Option<CVec> {
    let n = m.nrows();
    // tiny deterministic shift keeps the shifted matrix invertible
    let shift = lambda + Complex64::new(1e-10, 1e-10);
    let shifted = m - CMat::identity(n, n) * shift;
    let lu = shifted.lu();
    let mut v = CVec::from_element(n, Complex64::new(1.0, 0.0));
    for i in 0..n {
        v[i] += Complex64::new(0.0, 0.1 * (i as f64 + 1.0));
    }
    for _ in 0..4 {
        let next = lu.solve(&v)?;
        let norm = next.norm();
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        v = next / Complex64::new(norm, 0.0);
    }
    Some(v)
}

/// Best bijective matching of `new` onto `old` minimizing the total
/// distance; returns `perm` with `new[perm[i]]` matched to `old[i]`.
/// Sizes here are the ambient dimension, so brute force over permutations
/// is fine.
pub fn match_branches(old: &[Complex64], new: &[Complex64]) -> Vec<usize> {
    let n = old.len();
    assert_eq!(n, new.len());
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute_search(&mut perm, 0, old, new, &mut best);
    best.map(|(_, p)| p).unwrap_or_else(|| (0..n).collect())
}

fn permute_search(
    perm: &mut Vec<usize>,
    k: usize,
    old: &[Complex64],
    new: &[Complex64],
    best: &mut Option<(f64, Vec<usize>)>,
) {
    let n = old.len();
    if k == n {
        let cost: f64 = (0..n).map(|i| (new[perm[i]] - old[i]).norm()).sum();
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            *best = Some((cost, perm.clone()));
        }
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute_search(perm, k + 1, old, new, best);
        perm.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_and_solve() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let det = determinant(&m);
        assert!((det - c(3.0, -2.0)).norm() < 1e-12);
        let rhs = CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let x = solve(&m, &rhs).unwrap();
        let back = &m * &x;
        assert!((back - rhs).norm() < 1e-12);
    }

    #[test]
    fn eigen_2x2_closed_form() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(5.0, 0.0)]);
        let eigs = eigenvalues_canonical(&m).unwrap();
        assert!((eigs[0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((eigs[1] - c(5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn eigen_3x3_schur_matches_diagonal() {
        let mut m = CMat::zeros(3, 3);
        m[(0, 0)] = c(1.0, 1.0);
        m[(1, 1)] = c(-2.0, 0.5);
        m[(2, 2)] = c(0.25, -3.0);
        m[(0, 2)] = c(0.7, 0.1); // upper triangular: eigenvalues stay on diag
        let eigs = eigenvalues_canonical(&m).unwrap();
        let mut expect = vec![c(1.0, 1.0), c(-2.0, 0.5), c(0.25, -3.0)];
        sort_canonical(&mut expect);
        for (a, b) in eigs.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn eigenvector_residual_small() {
        let m = CMat::from_row_slice(2, 2, &[c(3.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let v = eigenvector(&m, c(3.0, 0.0)).unwrap();
        let resid = &m * &v - &v * c(3.0, 0.0);
        assert!(resid.norm() < 1e-8);
    }

    #[test]
    fn branch_matching_recovers_swap() {
        let old = [c(1.0, 0.0), c(-1.0, 0.0)];
        let new = [c(-1.01, 0.0), c(1.02, 0.0)];
        assert_eq!(match_branches(&old, &new), vec![1, 0]);
    }

    #[test]
    fn singular_values_descending() {
        let m = CMat::from_row_slice(2, 2, &[c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let sv = singular_values(&m);
        assert!((sv[0] - 3.0).abs() < 1e-12 && (sv[1] - 1.0).abs() < 1e-12);
    }
}
