//! Closed-form partial derivatives of the diagonal-entry maps `rho_{k,w0}`
//! at the power map, their `Q`-polynomial factorizations, and independent
//! finite-difference oracles.
//!
//! For a periodic point `w0` of period `p` with nonzero coordinates, the
//! derivative of `rho_{k,w0}` at `F0` in the direction of the monomial
//! perturbation `P_{m,I}` is
//!
//! * `0` when `m != k`, and
//! * `(i_k d^{p-1} - d^p) * sum_{i=0}^{p-1} (w0^{I_k})^{d^i} w_k^{d^i (i_k - d)}`
//!   when `m = k`,
//!
//! where `I_k` zeroes the `k`-th entry of `I`. The projective analogue adds
//! the case `m = 0` (perturbing the homogenizing coordinate) with value
//! `-i_k d^{p-1} sum_{i=0}^{p-1} (w0^I)^{d^i}`.
//!
//! All powers of roots of unity are evaluated as residue arithmetic on
//! exponents mod `d^p - 1` before a single complex exponential per term, so
//! sums of unit-modulus terms near zero can be trusted.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::combinatorics::{drop_k, MultiIndex, Setting};
use crate::config::{Caps, Tolerances};
use crate::continuation::{solve_cycle, PolyMapDense};
use crate::powerlattice::{mulmod, pow_checked, RootPoint};
use crate::{Error, Result};

/// Inputs for one derivative evaluation. `k` is the diagonal row in `1..=n`;
/// `m` is the direction coordinate (`0` only in the projective setting).
#[derive(Debug, Clone)]
pub struct DerivativeQuery {
    pub k: usize,
    pub m: usize,
    pub index: MultiIndex,
    pub point: RootPoint,
}

impl DerivativeQuery {
    pub fn new(k: usize, m: usize, index: MultiIndex, point: RootPoint) -> Result<Self> {
        let n = point.dim();
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!(
                "k={k} out of range 1..={n}"
            )));
        }
        match index.setting {
            Setting::Affine => {
                if m == 0 || m > n {
                    return Err(Error::InvalidArgument(format!(
                        "m={m} out of range 1..={n} in the affine setting"
                    )));
                }
                if index.entries.len() != n {
                    return Err(Error::InvalidArgument(
                        "affine multi-index length must equal the ambient dimension".into(),
                    ));
                }
            }
            Setting::Projective => {
                if m > n {
                    return Err(Error::InvalidArgument(format!(
                        "m={m} out of range 0..={n} in the projective setting"
                    )));
                }
                if index.entries.len() != n + 1 {
                    return Err(Error::InvalidArgument(
                        "projective multi-index needs n+1 entries".into(),
                    ));
                }
            }
        }
        Ok(DerivativeQuery { k, m, index, point })
    }
}

/// Angle numerators of the point's coordinates rescaled to the common
/// modulus `M = d^p - 1`.
fn scaled_numerators(point: &RootPoint, m_mod: u64) -> Result<Vec<u64>> {
    point
        .coords
        .iter()
        .map(|c| {
            if c.is_zero() {
                Err(Error::ZeroCoordinate(format!(
                    "point {point} has a zero coordinate; the closed form requires nonzero coordinates"
                )))
            } else {
                c.num_at_modulus(m_mod)
            }
        })
        .collect()
}

/// `sum_i exp(2 pi i theta_i / M)` where each `theta_i` is assembled from
/// residue exponents; `weights[i]` scales term `i`.
fn unit_sum(angles: &[u64], weights: Option<&[f64]>, m_mod: u64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for (i, &a) in angles.iter().enumerate() {
        let w = weights.map_or(1.0, |ws| ws[i]);
        let theta = 2.0 * std::f64::consts::PI * (a as f64) / (m_mod as f64);
        acc += Complex64::from_polar(w, theta);
    }
    acc
}

/// `(base * e) mod m` for a possibly negative multiplier `e`.
fn mulmod_signed(base: u64, e: i64, m: u64) -> u64 {
    let e_mod = e.rem_euclid(m as i64) as u64;
    mulmod(base, e_mod, m)
}

/// Lemma-level closed form for the affine setting. The multi-index need not
/// be admissible (entries up to and beyond `d` are allowed).
pub fn partial_rho_affine(q: &DerivativeQuery, caps: &Caps) -> Result<Complex64> {
    if q.index.setting != Setting::Affine {
        return Err(Error::InvalidArgument(
            "partial_rho_affine expects an affine multi-index".into(),
        ));
    }
    if q.m != q.k {
        return Ok(Complex64::ZERO);
    }
    let d = q.point.d;
    let p = q.point.period;
    let m_mod = pow_checked(d, p, caps)? - 1;
    let nums = scaled_numerators(&q.point, m_mod)?;
    let i_k = q.index.entry(q.k) as i64;
    let d_pow_p1 = (d as i64).pow(p - 1);
    let prefactor = (i_k * d_pow_p1 - (d as i64).pow(p)) as f64;

    let mut angles = Vec::with_capacity(p as usize);
    let mut d_i: i64 = 1;
    for _ in 0..p {
        let mut theta: u64 = 0;
        for (j, &a_j) in nums.iter().enumerate() {
            let e = if j + 1 == q.k {
                (i_k - d as i64) * d_i
            } else {
                q.index.entry(j + 1) as i64 * d_i
            };
            theta = (theta + mulmod_signed(a_j, e, m_mod)) % m_mod;
        }
        angles.push(theta);
        d_i *= d as i64;
    }
    Ok(unit_sum(&angles, None, m_mod) * prefactor)
}

/// Lemma-level closed form on projective space, in the affine chart. Cases:
/// `m` outside `{0, k}` vanish, `m = k` reduces to the affine formula, and
/// `m = 0` perturbs the homogenizing coordinate.
pub fn partial_rho_projective(q: &DerivativeQuery, caps: &Caps) -> Result<Complex64> {
    if q.index.setting != Setting::Projective {
        return Err(Error::InvalidArgument(
            "partial_rho_projective expects a projective multi-index".into(),
        ));
    }
    let affine_index = q.index.affine_part();
    if q.m != 0 {
        let affine_q = DerivativeQuery::new(q.k, q.m, affine_index, q.point.clone())?;
        return partial_rho_affine(&affine_q, caps);
    }
    let d = q.point.d;
    let p = q.point.period;
    let m_mod = pow_checked(d, p, caps)? - 1;
    let nums = scaled_numerators(&q.point, m_mod)?;
    let i_k = affine_index.entry(q.k) as i64;
    let prefactor = -(i_k as f64) * (d as f64).powi(p as i32 - 1);
    if i_k == 0 {
        return Ok(Complex64::ZERO);
    }
    let mut angles = Vec::with_capacity(p as usize);
    let mut d_i_exact: i64 = 1;
    for _ in 0..p {
        let mut theta: u64 = 0;
        for (j, &a_j) in nums.iter().enumerate() {
            let e = affine_index.entry(j + 1) as i64 * d_i_exact;
            theta = (theta + mulmod_signed(a_j, e, m_mod)) % m_mod;
        }
        angles.push(theta);
        d_i_exact *= d as i64;
    }
    Ok(unit_sum(&angles, None, m_mod) * prefactor)
}

/// Sparse polynomial with complex coefficients, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u64>, Complex64>,
}

impl SparsePoly {
    pub fn new(n: usize) -> Self {
        SparsePoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, exps: Vec<u64>, coeff: Complex64) {
        assert_eq!(exps.len(), self.n);
        if coeff == Complex64::ZERO {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert(Complex64::ZERO);
        *entry += coeff;
        if entry.norm() == 0.0 {
            self.terms.remove(&exps);
        }
    }

    pub fn degree_in(&self, j: usize) -> u64 {
        self.terms.keys().map(|e| e[j]).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (e, c) in &self.terms {
            let mut term = *c;
            for (j, &ej) in e.iter().enumerate() {
                term *= z[j].powu(ej as u32);
            }
            acc += term;
        }
        acc
    }
}

/// Exact integer-coefficient polynomial `Q` with its scalar prefactor kept
/// symbolic, so proportionality and support tests are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    pub n: usize,
    /// Scalar factor multiplying every term (`i_k d^{p-1} - d^p` affine,
    /// `-i_k d^{p-1}` projective `m = 0`).
    pub prefactor: i64,
    /// Exponent vector -> integer coefficient; no zero coefficients stored.
    pub terms: BTreeMap<Vec<u64>, i64>,
}

impl QPoly {
    pub fn is_zero(&self) -> bool {
        self.prefactor == 0 || self.terms.is_empty()
    }

    pub fn degree_in(&self, j: usize) -> u64 {
        if self.is_zero() {
            return 0;
        }
        self.terms.keys().map(|e| e[j - 1]).max().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<Vec<u64>> {
        if self.is_zero() {
            return vec![];
        }
        self.terms.keys().cloned().collect()
    }

    /// Exact evaluation at a lattice point: exponents are reduced mod the
    /// point's common modulus before a single exponential per term.
    pub fn eval_at_root(&self, point: &RootPoint, caps: &Caps) -> Result<Complex64> {
        let m_mod = pow_checked(point.d, point.period, caps)? - 1;
        let nums = scaled_numerators(point, m_mod)?;
        let mut acc = Complex64::ZERO;
        for (e, &c) in &self.terms {
            let mut theta: u64 = 0;
            for (j, &a_j) in nums.iter().enumerate() {
                theta = (theta + mulmod(a_j, e[j] % m_mod, m_mod)) % m_mod;
            }
            let angle = 2.0 * std::f64::consts::PI * theta as f64 / m_mod as f64;
            acc += Complex64::from_polar(c as f64, angle);
        }
        Ok(acc * self.prefactor as f64)
    }

    pub fn to_sparse(&self) -> SparsePoly {
        let mut out = SparsePoly::new(self.n);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), Complex64::new((c * self.prefactor) as f64, 0.0));
        }
        out
    }
}

/// The polynomial `Q` with `partial rho = w_k^{-d^{p-1}} Q(w0)` for every
/// valid `w0` of period `p`. Exponents of `z_k` are reduced mod `d^p - 1`
/// into `[0, d^p - 2]` using `w_k^{d^p - 1} = 1`, matching the stated
/// degree tables. Only admissible indices are accepted.
pub fn q_poly(
    d: u32,
    p: u32,
    k: usize,
    index: &MultiIndex,
    m: usize,
    caps: &Caps,
) -> Result<QPoly> {
    if !index.is_admissible(d) {
        return Err(Error::InvalidArgument(format!(
            "multi-index {:?} is not admissible for degree {d}",
            index.entries
        )));
    }
    let n = index.ambient_dim();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k={k} out of range 1..={n}"
        )));
    }
    let m_mod = pow_checked(d, p, caps)? - 1;
    let m_mod_i = m_mod as i64;
    let affine_index = index.affine_part();
    let i_k = affine_index.entry(k) as i64;
    let d_pow_p1 = (d as i64).pow(p - 1);

    let (prefactor, k_exp_base): (i64, i64) = match (index.setting, m) {
        (Setting::Affine, mm) if mm == k => (i_k * d_pow_p1 - (d as i64).pow(p), i_k - d as i64),
        (Setting::Affine, _) => (0, 0),
        (Setting::Projective, 0) => (-i_k * d_pow_p1, i_k),
        (Setting::Projective, mm) if mm == k => {
            (i_k * d_pow_p1 - (d as i64).pow(p), i_k - d as i64)
        }
        (Setting::Projective, _) => (0, 0),
    };
    let mut q = QPoly {
        n,
        prefactor,
        terms: BTreeMap::new(),
    };
    if prefactor == 0 {
        return Ok(q);
    }
    let i_k_zeroed = drop_k(&affine_index, k)?;
    let mut d_i: i64 = 1;
    for _ in 0..p {
        let mut exps = vec![0u64; n];
        for j in 1..=n {
            let e = if j == k {
                k_exp_base * d_i + d_pow_p1
            } else {
                i_k_zeroed.entry(j) as i64 * d_i
            };
            exps[j - 1] = e.rem_euclid(m_mod_i) as u64;
        }
        *q.terms.entry(exps).or_insert(0) += 1;
        d_i *= d as i64;
    }
    q.terms.retain(|_, c| *c != 0);
    Ok(q)
}

/// True when the two polynomials share no monomial support.
pub fn q_monomials_disjoint(a: &QPoly, b: &QPoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return true;
    }
    a.terms.keys().all(|e| !b.terms.contains_key(e))
}

/// Finite-difference oracle for `partial_{m,I} rho_{k,w0}` at an arbitrary
/// base map: re-solves the periodic point by Newton on the perturbed family
/// and reads the `(k,k)` entry of the cycle Jacobian, with a central
/// difference in the family parameter.
pub fn fd_partial_rho(
    q: &DerivativeQuery,
    base: &PolyMapDense,
    h: f64,
    tol: &Tolerances,
) -> Result<Complex64> {
    let rho = rho_family(q, base, tol)?;
    Ok((rho(h)? - rho(-h)?) / Complex64::new(2.0 * h, 0.0))
}

/// Richardson-extrapolated central difference over steps `h` and `h/2`.
pub fn fd_partial_rho_richardson(
    q: &DerivativeQuery,
    base: &PolyMapDense,
    h: f64,
    tol: &Tolerances,
) -> Result<Complex64> {
    let rho = rho_family(q, base, tol)?;
    let d_h = (rho(h)? - rho(-h)?) / Complex64::new(2.0 * h, 0.0);
    let d_h2 = (rho(h / 2.0)? - rho(-h / 2.0)?) / Complex64::new(h, 0.0);
    Ok((d_h2 * 4.0 - d_h) / 3.0)
}

/// Builds the evaluation `t -> rho_{k,w0}(base + t * direction)`, checking
/// the base cycle is nondegenerate first.
fn rho_family<'a>(
    q: &'a DerivativeQuery,
    base: &'a PolyMapDense,
    tol: &'a Tolerances,
) -> Result<impl Fn(f64) -> Result<Complex64> + 'a> {
    let p = q.point.period;
    let seed = q.point.to_complex();
    // rejects eigenvalue-1 degeneracy at the base point
    solve_cycle(base, p, &seed, tol)?;
    let k = q.k;
    let family = move |t: f64| -> PolyMapDense {
        match (q.index.setting, q.m) {
            (Setting::Affine, m) => base.plus_monomial(m, &q.index, Complex64::new(t, 0.0)),
            (Setting::Projective, 0) => {
                // affine chart of the homogenizing perturbation, first order:
                // every coordinate j gains -t * F_j(z) * z^I
                let dir = base.times_monomial_each_coord(&q.index.affine_part().entries);
                base.plus_scaled(&dir, Complex64::new(-t, 0.0))
            }
            (Setting::Projective, m) => {
                base.plus_monomial(m, &q.index.affine_part(), Complex64::new(t, 0.0))
            }
        }
    };
    Ok(move |t: f64| -> Result<Complex64> {
        let f_t = family(t);
        let track = solve_cycle(&f_t, p, &seed, tol)?;
        Ok(track.cycle_jacobian[(k - 1, k - 1)])
    })
}

/// Closed form for the `t`-velocity of the tracked orbit point `w_i` in
/// coordinate `k` along the family `F0 + t P_{k,I}`:
/// `w_{0,k}^{d^i} * sum_s d^{p-s-1} w_{0,k}^{-d^{s+i+1}} (w0^I)^{d^{s+i}} / (1 - d^p)`.
/// Coordinates other than `k` do not move.
pub fn cycle_velocity(
    k: usize,
    index: &MultiIndex,
    point: &RootPoint,
    orbit_index: u32,
    caps: &Caps,
) -> Result<Complex64> {
    if index.setting != Setting::Affine {
        return Err(Error::InvalidArgument(
            "cycle_velocity expects an affine multi-index".into(),
        ));
    }
    let d = point.d;
    let p = point.period;
    let m_mod = pow_checked(d, p, caps)? - 1;
    let nums = scaled_numerators(point, m_mod)?;
    let n = point.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k={k} out of range 1..={n}"
        )));
    }
    let i = orbit_index % p;
    let mut angles = Vec::with_capacity(p as usize);
    let mut weights = Vec::with_capacity(p as usize);
    for s in 0..p {
        // exponent of w_{0,k}: d^i - d^{s+i+1}; of each w_j: i_j d^{s+i}
        let d_i = pow_mod_exact(d, i, m_mod);
        let d_si1 = pow_mod_exact(d, s + i + 1, m_mod);
        let d_si = pow_mod_exact(d, s + i, m_mod);
        let mut theta: u64 = 0;
        for (j, &a_j) in nums.iter().enumerate() {
            let mut e: i64 = index.entry(j + 1) as i64 * d_si as i64;
            if j + 1 == k {
                e += d_i as i64 - d_si1 as i64;
            }
            theta = (theta + mulmod_signed(a_j, e, m_mod)) % m_mod;
        }
        angles.push(theta);
        weights.push((d as f64).powi((p - s - 1) as i32));
    }
    let numerator = unit_sum(&angles, Some(&weights), m_mod);
    Ok(numerator / (1.0 - (d as f64).powi(p as i32)))
}

fn pow_mod_exact(d: u32, e: u32, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    for _ in 0..e {
        acc = mulmod(acc, d as u64 % m, m);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_admissible;
    use crate::powerlattice::RootCoord;

    fn caps() -> Caps {
        Caps::default()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn pt(d: u32, coords: Vec<RootCoord>) -> RootPoint {
        RootPoint::new(d, coords).unwrap()
    }

    fn ones(d: u32, n: usize) -> RootPoint {
        pt(d, vec![RootCoord::angle(0, 1); n])
    }

    #[test]
    fn affine_zero_when_m_differs_from_k() {
        let q = DerivativeQuery::new(1, 2, MultiIndex::affine(vec![1, 0]), ones(2, 2)).unwrap();
        assert_eq!(partial_rho_affine(&q, &caps()).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn affine_hand_oracle_fixed_point() {
        // family (z1^2 + t z1, z2^2): fixed point z1 = 1 - t, rho1 = 2 - t
        let q = DerivativeQuery::new(1, 1, MultiIndex::affine(vec![1, 0]), ones(2, 2)).unwrap();
        let v = partial_rho_affine(&q, &caps()).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn affine_period_two_value() {
        let w0 = pt(2, vec![RootCoord::angle(1, 3), RootCoord::angle(0, 1)]);
        let q = DerivativeQuery::new(1, 1, MultiIndex::affine(vec![1, 0]), w0).unwrap();
        let v = partial_rho_affine(&q, &caps()).unwrap();
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-12, "{v}");
    }

    #[test]
    fn affine_rejects_zero_coordinate() {
        let w0 = pt(2, vec![RootCoord::Zero, RootCoord::angle(0, 1)]);
        let q = DerivativeQuery::new(1, 1, MultiIndex::affine(vec![1, 0]), w0).unwrap();
        assert!(matches!(
            partial_rho_affine(&q, &caps()),
            Err(Error::ZeroCoordinate(_))
        ));
    }

    #[test]
    fn projective_cases() {
        // m = 0 with I = (1,1): value -1 at the fixed point (1,1)
        let q =
            DerivativeQuery::new(1, 0, MultiIndex::projective(vec![0, 1, 1]), ones(2, 2)).unwrap();
        let v = partial_rho_projective(&q, &caps()).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

        // m not in {0, k} vanishes
        let q =
            DerivativeQuery::new(1, 2, MultiIndex::projective(vec![0, 1, 1]), ones(2, 2)).unwrap();
        assert_eq!(
            partial_rho_projective(&q, &caps()).unwrap(),
            Complex64::ZERO
        );

        // m = 0 with i_k = 0 vanishes
        let q =
            DerivativeQuery::new(1, 0, MultiIndex::projective(vec![1, 0, 1]), ones(2, 2)).unwrap();
        assert_eq!(
            partial_rho_projective(&q, &caps()).unwrap(),
            Complex64::ZERO
        );
    }

    #[test]
    fn projective_m0_equals_shifted_affine_formula() {
        // the chart reduction turns the m=0 derivative into the affine one
        // at the non-admissible index I + d*e_k, negated
        let w0 = pt(2, vec![RootCoord::angle(1, 15), RootCoord::angle(2, 15)]);
        let idx = MultiIndex::projective(vec![0, 1, 1]);
        let q = DerivativeQuery::new(1, 0, idx, w0.clone()).unwrap();
        let direct = partial_rho_projective(&q, &caps()).unwrap();
        let shifted = MultiIndex::affine(vec![1 + 2, 1]);
        let q2 = DerivativeQuery::new(1, 1, shifted, w0).unwrap();
        let via_affine = -partial_rho_affine(&q2, &caps()).unwrap();
        assert!((direct - via_affine).norm() < 1e-12);
    }

    #[test]
    fn q_poly_examples() {
        // d=2, p=2, k=1, I=(1,0): Q = -2(z1 + 1), degree 1 in z1
        let q = q_poly(2, 2, 1, &MultiIndex::affine(vec![1, 0]), 1, &caps()).unwrap();
        assert_eq!(q.prefactor, -2);
        assert_eq!(q.degree_in(1), 1);
        assert_eq!(q.support().len(), 2);

        // d=2, p=2, k=1, I=(1,1): degree in z2 is i2*d^{p-1} = 2
        let q = q_poly(2, 2, 1, &MultiIndex::affine(vec![1, 1]), 1, &caps()).unwrap();
        assert_eq!(q.degree_in(2), 2);

        // projective d=2, p=3, k=1, m=0, I~=(0,1,1): degree in z1 is d^p - d^{p-2} = 6
        let q = q_poly(2, 3, 1, &MultiIndex::projective(vec![0, 1, 1]), 0, &caps()).unwrap();
        assert_eq!(q.degree_in(1), 6);

        // non-admissible index rejected
        assert!(q_poly(2, 2, 1, &MultiIndex::affine(vec![2, 0]), 1, &caps()).is_err());
    }

    #[test]
    fn q_poly_matches_partial_rho() {
        // factorization: partial = w_k^{-d^{p-1}} Q(w0), exactly
        let caps = caps();
        for d in [2u32, 3] {
            for p in [1u32, 2, 3] {
                let m_mod = (d as u64).pow(p) - 1;
                let w0 = pt(
                    d,
                    vec![
                        RootCoord::angle(1 % m_mod.max(1), m_mod.max(1)),
                        RootCoord::angle(0, 1),
                    ],
                );
                assert_eq!(w0.period, p, "d={d} p={p}");
                for idx in enumerate_admissible(d, 2, Setting::Affine).unwrap() {
                    for k in 1..=2usize {
                        let q = DerivativeQuery::new(k, k, idx.clone(), w0.clone()).unwrap();
                        let direct = partial_rho_affine(&q, &caps).unwrap();
                        let qp = q_poly(d, p, k, &idx, k, &caps).unwrap();
                        let qval = qp.eval_at_root(&w0, &caps).unwrap();
                        let wk = w0.coords[k - 1].to_complex();
                        let factor = wk.powu((d as u64).pow(p - 1) as u32).inv();
                        let recon = factor * qval;
                        assert!(
                            (direct - recon).norm() <= 1e-10 * (1.0 + direct.norm()),
                            "d={d} p={p} k={k} I={:?}: {direct} vs {recon}",
                            idx.entries
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn disjoint_support_examples() {
        let caps = caps();
        let q10 = q_poly(2, 2, 1, &MultiIndex::affine(vec![1, 0]), 1, &caps).unwrap();
        let q01 = q_poly(2, 2, 1, &MultiIndex::affine(vec![0, 1]), 1, &caps).unwrap();
        let q11 = q_poly(2, 2, 1, &MultiIndex::affine(vec![1, 1]), 1, &caps).unwrap();
        assert!(q_monomials_disjoint(&q10, &q01));
        assert!(q_monomials_disjoint(&q10, &q11));
        assert!(!q_monomials_disjoint(&q10, &q10));
    }

    #[test]
    fn fd_matches_closed_form() {
        let tol = tol();
        let f0 = PolyMapDense::power_map(2, 2);

        // period-1 hand case
        let q = DerivativeQuery::new(1, 1, MultiIndex::affine(vec![1, 0]), ones(2, 2)).unwrap();
        let fd = fd_partial_rho(&q, &f0, 1e-5, &tol).unwrap();
        assert!((fd - Complex64::new(-1.0, 0.0)).norm() < 1e-8);

        // skew direction m != k is numerically zero
        let q = DerivativeQuery::new(1, 2, MultiIndex::affine(vec![1, 0]), ones(2, 2)).unwrap();
        let fd = fd_partial_rho(&q, &f0, 1e-5, &tol).unwrap();
        assert!(fd.norm() <= 1e-10);

        // Richardson on the period-2 example; the step is chosen large
        // enough that eigenvalue roundoff (~1e-15 / 2h) stays below 1e-10
        let w0 = pt(2, vec![RootCoord::angle(1, 3), RootCoord::angle(0, 1)]);
        let q = DerivativeQuery::new(1, 1, MultiIndex::affine(vec![1, 0]), w0).unwrap();
        let fd = fd_partial_rho_richardson(&q, &f0, 1e-3, &tol).unwrap();
        assert!((fd - Complex64::new(2.0, 0.0)).norm() < 1e-10, "{fd}");
    }

    #[test]
    fn velocity_examples() {
        let caps = caps();
        // d=2, p=1, k=1, I=(1,0), w0=(1,1): velocity -1 (the family z1 = 1 - t)
        let v = cycle_velocity(1, &MultiIndex::affine(vec![1, 0]), &ones(2, 2), 0, &caps).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn velocity_matches_fd_of_tracked_position() {
        let caps = caps();
        let tol = tol();
        let w0 = pt(2, vec![RootCoord::angle(1, 3), RootCoord::angle(0, 1)]);
        let idx = MultiIndex::affine(vec![1, 0]);
        let k = 1usize;
        let f0 = PolyMapDense::power_map(2, 2);
        let h = 1e-6;
        let seed = w0.to_complex();
        let track_at = |t: f64| {
            let f_t = f0.plus_monomial(k, &idx, Complex64::new(t, 0.0));
            solve_cycle(&f_t, w0.period, &seed, &tol).unwrap().points
        };
        let plus = track_at(h);
        let minus = track_at(-h);
        // coordinates other than k do not move under the perturbation
        for i in 0..w0.period as usize {
            let other = (plus[i][1] - minus[i][1]) / Complex64::new(2.0 * h, 0.0);
            assert!(other.norm() <= 1e-10, "coordinate 2 moved: {other}");
        }
        for i in 0..w0.period {
            let fd =
                (plus[i as usize][k - 1] - minus[i as usize][k - 1]) / Complex64::new(2.0 * h, 0.0);
            let v = cycle_velocity(k, &idx, &w0, i, &caps).unwrap();
            assert!((fd - v).norm() < 1e-8, "orbit index {i}: fd {fd} vs {v}");
        }
    }
}
