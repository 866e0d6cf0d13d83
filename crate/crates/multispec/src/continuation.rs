//! Numeric engine: dense polynomial maps, Newton solving of cycles,
//! predictor-corrector tracking of periodic points along parameter paths,
//! and finite-difference rank certificates for eigenvalue functions.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::combinatorics::{self, MultiIndex, Setting};
use crate::config::{Tolerances, PARABOLIC_ABORT};
use crate::linalg::{self, CMat, CVec};
use crate::witness::WitnessSet;
use crate::{Error, Result};

/// A degree-`d` polynomial self-map of `C^n`, stored densely over all
/// multi-indices of total degree at most `d`.
#[derive(Debug, Clone)]
pub struct PolyMapDense {
    n: usize,
    d: u32,
    exps: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
    coeffs: Vec<Vec<Complex64>>,
}

impl PolyMapDense {
    pub fn zeros(d: u32, n: usize) -> Self {
        assert!(n >= 1, "a polynomial map needs at least one coordinate");
        assert!(d >= 1, "a polynomial map needs degree at least 1");
        let exps: Vec<Vec<u32>> = combinatorics::enumerate_all(d, n as u32, Setting::Affine)
            .into_iter()
            .map(|i| i.entries)
            .collect();
        let index = exps
            .iter()
            .enumerate()
            .map(|(pos, e)| (e.clone(), pos))
            .collect();
        let coeffs = vec![vec![Complex64::ZERO; exps.len()]; n];
        PolyMapDense {
            n,
            d,
            exps,
            index,
            coeffs,
        }
    }

    /// The power map `F0(z) = (z_1^d,...,z_n^d)`.
    #[allow(clippy::needless_range_loop)]
    pub fn power_map(d: u32, n: usize) -> Self {
        let mut f = Self::zeros(d, n);
        for k in 0..n {
            let mut e = vec![0u32; n];
            e[k] = d;
            f.set_coeff(k + 1, &e, Complex64::ONE);
        }
        f
    }

    /// The family `F_c(z) = (z_1^d + c_1,..., z_n^d + c_n)`.
    pub fn fc(d: u32, c: &[Complex64]) -> Self {
        let n = c.len();
        let mut f = Self::power_map(d, n);
        for (k, &ck) in c.iter().enumerate() {
            f.set_coeff(k + 1, &vec![0u32; n], ck);
        }
        f
    }

    /// The unicritical polynomial `z^d + c` as a map of `C^1`.
    pub fn unicritical(d: u32, c: Complex64) -> Self {
        Self::fc(d, &[c])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Coefficient of `z^exps` in coordinate `coord` (1-based).
    pub fn coeff(&self, coord: usize, exps: &[u32]) -> Complex64 {
        match self.index.get(exps) {
            Some(&pos) => self.coeffs[coord - 1][pos],
            None => Complex64::ZERO,
        }
    }

    pub fn set_coeff(&mut self, coord: usize, exps: &[u32], value: Complex64) {
        let pos = *self
            .index
            .get(exps)
            .unwrap_or_else(|| panic!("monomial {exps:?} exceeds degree {}", self.d));
        self.coeffs[coord - 1][pos] = value;
    }

    pub fn add_coeff(&mut self, coord: usize, exps: &[u32], value: Complex64) {
        let pos = *self
            .index
            .get(exps)
            .unwrap_or_else(|| panic!("monomial {exps:?} exceeds degree {}", self.d));
        self.coeffs[coord - 1][pos] += value;
    }

    /// Re-embeds the map into the dense basis of a (larger) degree.
    pub fn with_degree(&self, new_d: u32) -> PolyMapDense {
        assert!(new_d >= self.d);
        let mut out = PolyMapDense::zeros(new_d, self.n);
        for coord in 0..self.n {
            for (pos, e) in self.exps.iter().enumerate() {
                let v = self.coeffs[coord][pos];
                if v != Complex64::ZERO {
                    out.add_coeff(coord + 1, e, v);
                }
            }
        }
        out
    }

    /// `F + t * P_{m,I}` where `P_{m,I}(z) = z^I e_m`; raises the degree if
    /// the monomial does not fit.
    pub fn plus_monomial(&self, m: usize, index: &MultiIndex, t: Complex64) -> PolyMapDense {
        let total: u32 = index.entries.iter().sum();
        let mut out = if total > self.d {
            self.with_degree(total)
        } else {
            self.clone()
        };
        out.add_coeff(m, &index.entries, t);
        out
    }

    /// The direction map `P` with `P_j = F_j * z^I` for every coordinate;
    /// this is the first-order affine-chart representation of a perturbation
    /// of the homogenizing coordinate.
    pub fn times_monomial_each_coord(&self, index_affine: &[u32]) -> PolyMapDense {
        let extra: u32 = index_affine.iter().sum();
        let mut out = PolyMapDense::zeros(self.d + extra, self.n);
        for coord in 0..self.n {
            for (pos, e) in self.exps.iter().enumerate() {
                let v = self.coeffs[coord][pos];
                if v != Complex64::ZERO {
                    let shifted: Vec<u32> =
                        e.iter().zip(index_affine).map(|(a, b)| a + b).collect();
                    out.add_coeff(coord + 1, &shifted, v);
                }
            }
        }
        out
    }

    /// Linear combination `self + t * dir` over a common degree basis.
    pub fn plus_scaled(&self, dir: &PolyMapDense, t: Complex64) -> PolyMapDense {
        assert_eq!(self.n, dir.n);
        let d = self.d.max(dir.d);
        let mut out = self.with_degree(d);
        for coord in 0..dir.n {
            for (pos, e) in dir.exps.iter().enumerate() {
                let v = dir.coeffs[coord][pos];
                if v != Complex64::ZERO {
                    out.add_coeff(coord + 1, e, v * t);
                }
            }
        }
        out
    }

    fn power_table(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        let mut pows = vec![vec![Complex64::ONE; self.d as usize + 1]; self.n];
        for j in 0..self.n {
            for e in 1..=self.d as usize {
                pows[j][e] = pows[j][e - 1] * z[j];
            }
        }
        pows
    }

    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(z.len(), self.n, "dimension mismatch");
        let pows = self.power_table(z);
        let mut out = vec![Complex64::ZERO; self.n];
        for (coord, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for (pos, e) in self.exps.iter().enumerate() {
                let c = self.coeffs[coord][pos];
                if c != Complex64::ZERO {
                    let mut term = c;
                    for (j, &ej) in e.iter().enumerate() {
                        if ej > 0 {
                            term *= pows[j][ej as usize];
                        }
                    }
                    acc += term;
                }
            }
            *slot = acc;
        }
        out
    }

    /// Analytic Jacobian matrix at `z`.
    pub fn jacobian(&self, z: &[Complex64]) -> CMat {
        let pows = self.power_table(z);
        let mut jac = CMat::zeros(self.n, self.n);
        for coord in 0..self.n {
            for (pos, e) in self.exps.iter().enumerate() {
                let c = self.coeffs[coord][pos];
                if c == Complex64::ZERO {
                    continue;
                }
                for j in 0..self.n {
                    let ej = e[j];
                    if ej == 0 {
                        continue;
                    }
                    let mut term = c * Complex64::new(ej as f64, 0.0) * pows[j][ej as usize - 1];
                    for (l, &el) in e.iter().enumerate() {
                        if l != j && el > 0 {
                            term *= pows[l][el as usize];
                        }
                    }
                    jac[(coord, j)] += term;
                }
            }
        }
        jac
    }

    /// Smallest norm of the top-degree homogeneous part sampled on the unit
    /// sphere (axes plus seeded random directions). Advisory regularity
    /// probe: a value below threshold flags a near-common-zero.
    pub fn top_part_min_on_sphere(&self, samples: usize, seed: u64) -> f64 {
        let mut top = PolyMapDense::zeros(self.d, self.n);
        for coord in 0..self.n {
            for (pos, e) in self.exps.iter().enumerate() {
                if e.iter().sum::<u32>() == self.d {
                    top.coeffs[coord][pos] = self.coeffs[coord][pos];
                }
            }
        }
        let mut points: Vec<Vec<Complex64>> = Vec::new();
        for j in 0..self.n {
            let mut axis = vec![Complex64::ZERO; self.n];
            axis[j] = Complex64::ONE;
            points.push(axis);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while points.len() < samples {
            let mut v: Vec<Complex64> = (0..self.n)
                .map(|_| {
                    let u1: f64 = rng.random::<f64>().max(1e-12);
                    let u2: f64 = rng.random();
                    let r = (-2.0 * u1.ln()).sqrt();
                    Complex64::new(
                        r * (2.0 * std::f64::consts::PI * u2).cos(),
                        r * (2.0 * std::f64::consts::PI * u2).sin(),
                    )
                })
                .collect();
            let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-9 {
                continue;
            }
            for c in &mut v {
                *c /= norm;
            }
            points.push(v);
        }
        points
            .iter()
            .map(|z| top.eval(z).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Advisory check that the top-degree part has no near-common-zero on the
/// sphere, so the map plausibly extends to projective space.
pub fn regularity_probe(f: &PolyMapDense, seed: u64) -> bool {
    f.top_part_min_on_sphere(2048, seed) >= 1e-8
}

/// A numerically tracked cycle.
#[derive(Debug, Clone, Serialize)]
pub struct CycleTrack {
    pub period: u32,
    /// Orbit points `points[i] = F^i(points[0])`.
    pub points: Vec<Vec<Complex64>>,
    #[serde(skip)]
    pub cycle_jacobian: CMat,
    /// Eigenvalues of the cycle Jacobian in canonical `(Re, Im)` order.
    pub eigenvalues: Vec<Complex64>,
    /// Columns are eigendirections matching `eigenvalues`, when computed.
    #[serde(skip)]
    pub eigendirection_basis: Option<CMat>,
    pub residual: f64,
}

impl CycleTrack {
    /// Smallest distance of any eigenvalue to 1.
    pub fn parabolic_gap(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| (l - Complex64::ONE).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest pairwise eigenvalue separation (infinity for 1x1).
    pub fn eigen_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for i in 0..self.eigenvalues.len() {
            for j in (i + 1)..self.eigenvalues.len() {
                gap = gap.min((self.eigenvalues[i] - self.eigenvalues[j]).norm());
            }
        }
        gap
    }

    /// Exact period: smallest divisor `q` of the stored period with
    /// `F^q(z) = z` up to `tol`.
    pub fn exact_period(&self, f: &PolyMapDense, tol: f64) -> u32 {
        for q in 1..=self.period {
            if !self.period.is_multiple_of(q) {
                continue;
            }
            let mut z = self.points[0].clone();
            for _ in 0..q {
                z = f.eval(&z);
            }
            let dist = sup_dist(&z, &self.points[0]);
            if dist <= tol {
                return q;
            }
        }
        self.period
    }
}

fn sup_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn orbit_points(f: &PolyMapDense, z0: &[Complex64], p: u32) -> Vec<Vec<Complex64>> {
    let mut pts = Vec::with_capacity(p as usize);
    let mut z = z0.to_vec();
    for _ in 0..p {
        pts.push(z.clone());
        z = f.eval(&z);
    }
    pts
}

fn cycle_jacobian(f: &PolyMapDense, pts: &[Vec<Complex64>]) -> CMat {
    let n = f.dim();
    let mut jac = CMat::identity(n, n);
    for z in pts {
        jac = f.jacobian(z) * jac;
    }
    jac
}

/// Newton iteration on `z -> F^p(z) - z`. Returns the corrected point and
/// the final residual, without any eigenvalue checks. The residual target
/// is relative to the orbit magnitude, and once it is met one extra polish
/// step is taken so downstream finite differences sit at machine precision.
fn newton_cycle(
    f: &PolyMapDense,
    p: u32,
    seed: &[Complex64],
    tol: f64,
    max_iters: u32,
) -> Result<(Vec<Complex64>, f64)> {
    let n = f.dim();
    let mut z = seed.to_vec();
    let mut residual = f64::INFINITY;
    let mut converged = false;
    for iter in 0..max_iters {
        let pts = orbit_points(f, &z, p);
        let fp = f.eval(&pts[p as usize - 1]);
        let g: Vec<Complex64> = (0..n).map(|i| fp[i] - z[i]).collect();
        let scale = 1.0
            + pts
                .iter()
                .flat_map(|pt| pt.iter())
                .map(|c| c.norm())
                .fold(0.0, f64::max);
        residual = g.iter().map(|c| c.norm()).fold(0.0, f64::max) / scale;
        if residual <= tol {
            if converged || residual <= 1e-15 {
                return Ok((z, residual));
            }
            converged = true; // one polish step
        }
        if !residual.is_finite() || residual > 1e12 {
            return Err(Error::NewtonDivergence {
                iters: iter,
                residual,
            });
        }
        let dg = cycle_jacobian(f, &pts) - CMat::identity(n, n);
        let rhs = CVec::from_vec(g.clone());
        let step = linalg::solve(&dg, &rhs).ok_or(Error::NewtonDivergence {
            iters: iter,
            residual,
        })?;
        for i in 0..n {
            z[i] -= step[i];
        }
    }
    if converged && residual <= tol {
        return Ok((z, residual));
    }
    Err(Error::NewtonDivergence {
        iters: max_iters,
        residual,
    })
}

fn build_track(
    f: &PolyMapDense,
    z: Vec<Complex64>,
    p: u32,
    residual: f64,
    with_directions: bool,
) -> Result<CycleTrack> {
    let pts = orbit_points(f, &z, p);
    let jac = cycle_jacobian(f, &pts);
    let eigenvalues = linalg::eigenvalues_canonical(&jac)?;
    let eigendirection_basis = if with_directions {
        let n = f.dim();
        let mut basis = CMat::zeros(n, n);
        for (i, lam) in eigenvalues.iter().enumerate() {
            let v = linalg::eigenvector(&jac, *lam).ok_or_else(|| {
                Error::DegenerateBase(format!("no eigendirection for eigenvalue {lam}"))
            })?;
            basis.set_column(i, &v);
        }
        Some(basis)
    } else {
        None
    };
    Ok(CycleTrack {
        period: p,
        points: pts,
        cycle_jacobian: jac,
        eigenvalues,
        eigendirection_basis,
        residual,
    })
}

/// Solves for a `p`-periodic point by Newton from `seed` and fills in the
/// cycle Jacobian and its spectrum. A cycle with an eigenvalue within
/// `tau_parab` of 1 is rejected as degenerate.
pub fn solve_cycle(
    f: &PolyMapDense,
    p: u32,
    seed: &[Complex64],
    tol: &Tolerances,
) -> Result<CycleTrack> {
    let (z, residual) = newton_cycle(f, p, seed, tol.tau_newton, 60)?;
    let track = build_track(f, z, p, residual, false)?;
    let gap = track.parabolic_gap();
    if gap < tol.tau_parab {
        return Err(Error::ParabolicCycle {
            gap,
            tol: tol.tau_parab,
        });
    }
    Ok(track)
}

/// Like [`solve_cycle`] but also fills the eigendirection basis.
pub fn solve_cycle_with_directions(
    f: &PolyMapDense,
    p: u32,
    seed: &[Complex64],
    tol: &Tolerances,
) -> Result<CycleTrack> {
    let (z, residual) = newton_cycle(f, p, seed, tol.tau_newton, 60)?;
    let track = build_track(f, z, p, residual, true)?;
    let gap = track.parabolic_gap();
    if gap < tol.tau_parab {
        return Err(Error::ParabolicCycle {
            gap,
            tol: tol.tau_parab,
        });
    }
    Ok(track)
}

/// Outcome of tracking a cycle along a parameter path, with eigenvalue
/// branches followed by continuity when requested.
#[derive(Debug, Clone)]
pub struct TrackedCycle {
    pub track: CycleTrack,
    /// Eigenvalues in branch order: entry `i` is the analytic continuation
    /// of the start track's canonically ordered eigenvalue `i`.
    pub branch_eigenvalues: Option<Vec<Complex64>>,
}

struct PathTracker<'a, F: Fn(Complex64) -> PolyMapDense> {
    family: &'a F,
    period: u32,
    tol: &'a Tolerances,
    z: Vec<Complex64>,
    prev: Option<(Complex64, Vec<Complex64>)>,
    branches: Option<Vec<Complex64>>,
    last_gap: f64,
}

impl<'a, F: Fn(Complex64) -> PolyMapDense> PathTracker<'a, F> {
    const MAX_DEPTH: u32 = 20;

    fn advance(&mut self, t0: Complex64, t1: Complex64, depth: u32) -> Result<()> {
        let predicted = match &self.prev {
            Some((tp, zp)) if (t0 - *tp).norm() > 1e-14 => {
                let ratio = (t1 - t0) / (t0 - tp);
                self.z
                    .iter()
                    .zip(zp)
                    .map(|(a, b)| a + (a - b) * ratio)
                    .collect()
            }
            _ => self.z.clone(),
        };
        let f1 = (self.family)(t1);
        let attempt = newton_cycle(&f1, self.period, &predicted, self.tol.tau_newton, 30).and_then(
            |(z, residual)| {
                self.accept(f1, z, residual, t0, depth)
                    .map(|needs_split| (needs_split, ()))
            },
        );
        match attempt {
            Ok((false, ())) => Ok(()),
            Ok((true, ())) | Err(Error::NewtonDivergence { .. }) => {
                if depth >= Self::MAX_DEPTH {
                    return Err(Error::NewtonDivergence {
                        iters: 0,
                        residual: f64::NAN,
                    });
                }
                let mid = (t0 + t1) / 2.0;
                self.advance(t0, mid, depth + 1)?;
                self.advance(mid, t1, depth + 1)
            }
            Err(e) => Err(e),
        }
    }

    /// Accepts a corrected point at parameter `t1`; returns `Ok(true)` when
    /// the step must be split instead (branch collision or parabolic zone).
    fn accept(
        &mut self,
        f1: PolyMapDense,
        z: Vec<Complex64>,
        _residual: f64,
        t0: Complex64,
        depth: u32,
    ) -> Result<bool> {
        let pts = orbit_points(&f1, &z, self.period);
        let jac = cycle_jacobian(&f1, &pts);
        let eigs = linalg::eigenvalues(&jac)?;
        let gap_to_one = eigs
            .iter()
            .map(|l| (l - Complex64::ONE).norm())
            .fold(f64::INFINITY, f64::min);
        if gap_to_one < PARABOLIC_ABORT {
            return Err(Error::ParabolicCycle {
                gap: gap_to_one,
                tol: PARABOLIC_ABORT,
            });
        }
        if gap_to_one < self.tol.tau_parab && depth < Self::MAX_DEPTH {
            return Ok(true);
        }
        let new_branches = if let Some(branches) = &self.branches {
            let perm = linalg::match_branches(branches, &eigs);
            let drift: f64 = (0..eigs.len())
                .map(|i| (eigs[perm[i]] - branches[i]).norm())
                .fold(0.0, f64::max);
            let mut pair_gap = f64::INFINITY;
            for i in 0..eigs.len() {
                for j in (i + 1)..eigs.len() {
                    pair_gap = pair_gap.min((eigs[i] - eigs[j]).norm());
                }
            }
            if eigs.len() > 1 && pair_gap <= 2.0 * drift {
                if depth < Self::MAX_DEPTH {
                    return Ok(true);
                }
                return Err(Error::EigenvalueCollision { gap: pair_gap });
            }
            self.last_gap = self.last_gap.min(pair_gap);
            Some(perm.iter().map(|&i| eigs[i]).collect())
        } else {
            None
        };
        self.prev = Some((t0, std::mem::replace(&mut self.z, z)));
        if let Some(b) = new_branches {
            self.branches = Some(b);
        }
        Ok(false)
    }
}

/// Tracks the cycle `start` along the discretized parameter path with a
/// secant predictor and Newton corrector, halving steps on divergence,
/// branch collision or parabolic proximity.
pub fn track_path<F: Fn(Complex64) -> PolyMapDense>(
    family: &F,
    path: &[Complex64],
    start: &CycleTrack,
    tol: &Tolerances,
) -> Result<CycleTrack> {
    Ok(track_path_impl(family, path, start, tol, false)?.track)
}

/// Tracks both the cycle and its eigenvalue branches; the returned
/// `branch_eigenvalues[i]` continues `start.eigenvalues[i]`.
pub fn track_path_with_eigen<F: Fn(Complex64) -> PolyMapDense>(
    family: &F,
    path: &[Complex64],
    start: &CycleTrack,
    tol: &Tolerances,
) -> Result<TrackedCycle> {
    track_path_impl(family, path, start, tol, true)
}

fn track_path_impl<F: Fn(Complex64) -> PolyMapDense>(
    family: &F,
    path: &[Complex64],
    start: &CycleTrack,
    tol: &Tolerances,
    with_eigen: bool,
) -> Result<TrackedCycle> {
    if path.is_empty() {
        return Err(Error::BadLoopSpec("empty parameter path".into()));
    }
    let f0 = family(path[0]);
    let (z0, _) = newton_cycle(&f0, start.period, &start.points[0], tol.tau_newton, 30)?;
    let drift = sup_dist(&z0, &start.points[0]);
    if drift > 1e-6 {
        return Err(Error::InvalidArgument(format!(
            "start cycle does not sit on the first path parameter (corrector moved it by {drift:.3e})"
        )));
    }
    let mut tracker = PathTracker {
        family,
        period: start.period,
        tol,
        z: z0,
        prev: None,
        branches: with_eigen.then(|| start.eigenvalues.clone()),
        last_gap: f64::INFINITY,
    };
    for w in path.windows(2) {
        if (w[0] - w[1]).norm() == 0.0 {
            continue;
        }
        tracker.advance(w[0], w[1], 0)?;
    }
    let f_end = family(*path.last().unwrap());
    let track = build_track(&f_end, tracker.z, start.period, 0.0, false)?;
    Ok(TrackedCycle {
        track,
        branch_eigenvalues: tracker.branches,
    })
}

/// Rank certificate for the eigenvalue-function Jacobian at `base`.
#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub size: usize,
    /// Row labels `(k, j)` and column labels `(m, index)` in matrix order.
    pub rows: Vec<(usize, usize)>,
    pub cols: Vec<(usize, Vec<u32>)>,
    #[serde(skip)]
    pub jacobian: CMat,
    pub singular_values: Vec<f64>,
    pub rank_at_tol: usize,
    pub certified_full_rank: bool,
    pub tau_rank: f64,
}

/// Evaluates the eigenvalue branch of `f` continuing `lambda_base` at the
/// cycle through `seed`.
fn eigen_branch_at(
    f: &PolyMapDense,
    p: u32,
    seed: &[Complex64],
    lambda_base: Complex64,
    min_gap: f64,
    tau_newton: f64,
) -> Result<Complex64> {
    let (z, _) = newton_cycle(f, p, seed, tau_newton, 40)?;
    let pts = orbit_points(f, &z, p);
    let jac = cycle_jacobian(f, &pts);
    let eigs = linalg::eigenvalues(&jac)?;
    let mut best = eigs[0];
    let mut best_dist = f64::INFINITY;
    let mut second = f64::INFINITY;
    for e in &eigs {
        let dist = (e - lambda_base).norm();
        if dist < best_dist {
            second = best_dist;
            best_dist = dist;
            best = *e;
        } else if dist < second {
            second = dist;
        }
    }
    if eigs.len() > 1 && second < 2.0 * best_dist {
        return Err(Error::EigenvalueCollision {
            gap: second - best_dist,
        });
    }
    if best_dist > 0.5 * min_gap && min_gap.is_finite() {
        return Err(Error::EigenvalueCollision { gap: best_dist });
    }
    Ok(best)
}

/// Builds the finite-difference Jacobian of the eigenvalue functions of the
/// witness cycles over all admissible monomial directions, and certifies its
/// rank by a full singular value decomposition.
///
/// `base` must have simple non-unit eigenvalues on every witness cycle (it
/// lies in the regular locus); the power map itself is rejected.
pub fn rank_certificate(
    base: &PolyMapDense,
    witnesses: &WitnessSet,
    h: f64,
    tol: &Tolerances,
) -> Result<RankReport> {
    if witnesses.projective {
        return Err(Error::InvalidArgument(
            "rank_certificate expects an affine witness set".into(),
        ));
    }
    let n = base.dim();
    let d = base.degree();
    if witnesses.n != n || witnesses.d != d {
        return Err(Error::InvalidArgument(format!(
            "witness set is for (d={}, n={}), base map has (d={d}, n={n})",
            witnesses.d, witnesses.n
        )));
    }
    let directions = combinatorics::enumerate_admissible(d, n as u32, Setting::Affine)?;
    let big_n = directions.len();
    let size = n * big_n;

    // designated eigenvalue branch per witness: the one continuing the
    // (k,k) diagonal entry of the cycle Jacobian at the base map
    let mut rows = Vec::with_capacity(size);
    let mut base_cycles = Vec::with_capacity(size);
    for k in 1..=n {
        for j in 1..=big_n {
            let w = &witnesses.points[k - 1][j - 1];
            let p = w.period;
            let seed = w.to_complex();
            let track = match newton_cycle(base, p, &seed, tol.tau_newton, 60) {
                Ok((z, residual)) => build_track(base, z, p, residual, false)?,
                Err(e) => {
                    return Err(Error::WitnessCycleLost(format!(
                        "witness (k={k}, j={j}): {e}"
                    )))
                }
            };
            let drift = sup_dist(&track.points[0], &seed);
            if drift > 0.5 {
                return Err(Error::WitnessCycleLost(format!(
                    "witness (k={k}, j={j}) moved by {drift:.3} under the base map"
                )));
            }
            let gap_one = track.parabolic_gap();
            let gap_pair = track.eigen_gap();
            let scale = 1.0
                + track
                    .eigenvalues
                    .iter()
                    .map(|l| l.norm())
                    .fold(0.0, f64::max);
            if gap_one < tol.tau_parab || (n > 1 && gap_pair < 1e-8 * scale) {
                return Err(Error::DegenerateBase(format!(
                    "witness cycle (k={k}, j={j}) has eigenvalue gap-to-1 {gap_one:.3e} and pairwise gap {gap_pair:.3e}"
                )));
            }
            let lambda = track.cycle_jacobian[(k - 1, k - 1)];
            rows.push((k, j));
            base_cycles.push((track, lambda, gap_pair));
        }
    }

    let mut jac = CMat::zeros(size, size);
    let mut cols = Vec::with_capacity(size);
    for m in 1..=n {
        for idx in &directions {
            cols.push((m, idx.entries.clone()));
        }
    }
    for (r, ((_, _), (track, lambda, gap))) in rows.iter().zip(&base_cycles).enumerate() {
        let p = track.period;
        let seed = &track.points[0];
        for (c, (m, idx_entries)) in cols.iter().enumerate() {
            let idx = MultiIndex::affine(idx_entries.clone());
            let diff = |step: f64| -> Result<Complex64> {
                let fp = base.plus_monomial(*m, &idx, Complex64::new(step, 0.0));
                let fm = base.plus_monomial(*m, &idx, Complex64::new(-step, 0.0));
                let lp = eigen_branch_at(&fp, p, seed, *lambda, *gap, tol.tau_newton)?;
                let lm = eigen_branch_at(&fm, p, seed, *lambda, *gap, tol.tau_newton)?;
                Ok((lp - lm) / Complex64::new(2.0 * step, 0.0))
            };
            let d_h = diff(h)?;
            let d_h2 = diff(h / 2.0)?;
            jac[(r, c)] = (d_h2 * 4.0 - d_h) / 3.0;
        }
    }

    let singular_values = linalg::singular_values(&jac);
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let smin = singular_values.last().copied().unwrap_or(0.0);
    let rank_at_tol = singular_values
        .iter()
        .filter(|&&s| s > tol.tau_rank * smax)
        .count();
    Ok(RankReport {
        size,
        rows,
        cols,
        jacobian: jac,
        singular_values,
        rank_at_tol,
        certified_full_rank: smax > 0.0 && smin > tol.tau_rank * smax,
        tau_rank: tol.tau_rank,
    })
}

/// Elementary symmetric functions `e_1,...,e_n` of the cycle eigenvalues,
/// one vector per cycle, sorted canonically as a multiset.
pub fn multiplier_spectrum(
    f: &PolyMapDense,
    p: u32,
    cycles: &[CycleTrack],
    tol: &Tolerances,
) -> Result<Vec<Vec<Complex64>>> {
    // pairwise-distinct orbits
    for (a, ca) in cycles.iter().enumerate() {
        if ca.exact_period(f, 1e-8) != p {
            return Err(Error::InvalidArgument(format!(
                "cycle {a} does not have exact period {p}"
            )));
        }
        for cb in cycles.iter().skip(a + 1) {
            let mut min_dist = f64::INFINITY;
            for x in &ca.points {
                for y in &cb.points {
                    min_dist = min_dist.min(sup_dist(x, y));
                }
            }
            if min_dist < 100.0 * tol.tau_newton {
                return Err(Error::DuplicateOrbit(format!(
                    "two cycles coincide within {min_dist:.3e}"
                )));
            }
        }
    }
    let n = f.dim();
    let mut out: Vec<Vec<Complex64>> = cycles
        .iter()
        .map(|c| elementary_symmetric(&c.eigenvalues, n))
        .collect();
    out.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            match (x.re, x.im).partial_cmp(&(y.re, y.im)) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(ord) => return ord,
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(out)
}

/// Enumerates all exact-period-`p` cycles of the product family `F_c` by
/// Newton-continuing the `d^p` solutions of each unicritical factor from
/// the power map, combining coordinates whose joint period is `p`, and
/// grouping index tuples into orbits through the exact per-coordinate
/// successor permutations.
pub fn enumerate_cycles_fc(
    d: u32,
    c: &[Complex64],
    p: u32,
    tol: &Tolerances,
    caps: &crate::config::Caps,
) -> Result<Vec<CycleTrack>> {
    let n = c.len();
    let dp = crate::powerlattice::pow_checked(d, p, caps)? as usize;
    if dp.pow(n as u32) > 200_000 {
        return Err(Error::Overflow(format!(
            "cycle enumeration would visit {} tuples",
            dp.pow(n as u32)
        )));
    }
    // per-coordinate roots of f^p(z) = z, continued from c = 0
    let mut roots: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut succ: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut coord_period: Vec<Vec<u32>> = Vec::with_capacity(n);
    for &cj in c {
        let f = PolyMapDense::unicritical(d, cj);
        let mut list: Vec<Complex64> = Vec::with_capacity(dp);
        let mut seeds: Vec<Complex64> = vec![Complex64::ZERO];
        let m = dp as u64 - 1;
        for a in 0..m {
            seeds.push(Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * a as f64 / m as f64,
            ));
        }
        for seed in seeds {
            let (z, _) = newton_cycle(&f, p, &[seed], tol.tau_newton, 60)?;
            list.push(z[0]);
        }
        for i in 0..list.len() {
            for j in (i + 1)..list.len() {
                if (list[i] - list[j]).norm() < 1e-8 {
                    return Err(Error::DegenerateBase(format!(
                        "periodic points of z^{d} + {cj} collide; parameter too close to a bifurcation"
                    )));
                }
            }
        }
        let step_of = |z: Complex64| -> usize {
            let fz = f.eval(&[z])[0];
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (i, r) in list.iter().enumerate() {
                let dist = (fz - r).norm();
                if dist < best_d {
                    best_d = dist;
                    best = i;
                }
            }
            best
        };
        let succ_j: Vec<usize> = list.iter().map(|&z| step_of(z)).collect();
        let period_j: Vec<u32> = (0..list.len())
            .map(|i| {
                let mut q = 1u32;
                let mut cur = succ_j[i];
                while cur != i {
                    cur = succ_j[cur];
                    q += 1;
                }
                q
            })
            .collect();
        roots.push(list);
        succ.push(succ_j);
        coord_period.push(period_j);
    }

    // assemble index tuples of joint exact period p and group into orbits
    let f = PolyMapDense::fc(d, c);
    let mut visited: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    let mut cycles: Vec<CycleTrack> = Vec::new();
    let mut odo = vec![0usize; n];
    loop {
        let joint = odo.iter().enumerate().fold(1u64, |acc, (j, &i)| {
            crate::powerlattice::lcm(acc, coord_period[j][i] as u64)
        });
        if joint == p as u64 && !visited.contains(&odo) {
            let mut cur = odo.clone();
            for _ in 0..p {
                visited.insert(cur.clone());
                cur = (0..n).map(|j| succ[j][cur[j]]).collect();
            }
            let rep: Vec<Complex64> = odo.iter().enumerate().map(|(j, &i)| roots[j][i]).collect();
            cycles.push(solve_cycle(&f, p, &rep, tol)?);
        }
        let limits = roots.iter().map(|r| r.len()).collect::<Vec<_>>();
        let mut advanced = false;
        for j in (0..n).rev() {
            odo[j] += 1;
            if odo[j] < limits[j] {
                advanced = true;
                break;
            }
            odo[j] = 0;
        }
        if !advanced {
            break;
        }
    }
    Ok(cycles)
}

fn elementary_symmetric(values: &[Complex64], n: usize) -> Vec<Complex64> {
    // e_k via the product expansion of prod (1 + x*lambda_i)
    let mut e = vec![Complex64::ZERO; n + 1];
    e[0] = Complex64::ONE;
    for &v in values {
        for k in (1..=n).rev() {
            let prev = e[k - 1];
            e[k] += prev * v;
        }
    }
    e.remove(0);
    e
}
