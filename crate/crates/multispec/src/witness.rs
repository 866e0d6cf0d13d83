//! Inductive witness selection: picks periodic orbits of the power map that
//! make the derivative Jacobian blocks nonsingular, with the counting gates
//! that guarantee the search space is large enough.
//!
//! Candidates for a row of requested period `p` are drawn from
//! `S = Per_p x Fix_p^{n-1}` (first coordinate of exact period `p`, the rest
//! arbitrary nonzero solutions of `w^{d^p} = w`), the same set the counting
//! lemma measures. Rows are added one at a time, maximizing the modulus of
//! the bordered leading minor; a common row factor `w_k^{d^{p-1}}` is pulled
//! out first so determinants are taken on exact `Q`-polynomial values.

use num_complex::Complex64;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

use crate::combinatorics::{enumerate_admissible, MultiIndex, Setting};
use crate::config::{RunConfig, TAU_EVAL};
use crate::derivatives::{
    partial_rho_affine, partial_rho_projective, q_poly, DerivativeQuery, QPoly, SparsePoly,
};
use crate::linalg::{self, CMat};
use crate::powerlattice::{fix_set, mulmod, per_set, pow_checked, RootCoord, RootPoint};
use crate::{Error, Result};

/// One certified Jacobian block.
#[derive(Debug, Clone)]
pub struct JacobianBlock {
    /// Row tier: `k` in `1..=n` for the affine blocks, `0` for the folded
    /// projective matrix.
    pub k: usize,
    pub entries: CMat,
    pub det: Complex64,
    pub smin_over_smax: f64,
    /// Hadamard scale (product of row norms) the determinant threshold is
    /// measured against.
    pub het_scale: f64,
}

impl JacobianBlock {
    pub fn passes(&self, tau_det: f64) -> bool {
        self.det.norm() > tau_det * self.het_scale
    }
}

/// Selected witness orbits plus their nonsingularity certificates.
#[derive(Debug, Clone)]
pub struct WitnessSet {
    pub d: u32,
    pub n: usize,
    pub projective: bool,
    /// Requested periods, row tier by row tier.
    pub periods: Vec<Vec<u32>>,
    /// Selected points: `points[tier][j]`. Affine tier `t` holds the
    /// witnesses for `rho_{t+1}`; projectively tier 0 is the homogenizing
    /// tier and tier `t >= 1` pairs with `rho_t`.
    pub points: Vec<Vec<RootPoint>>,
    /// Projective only: the diagonal-entry index `k_j` chosen per column of
    /// the homogenizing tier.
    pub k_choices: Option<Vec<usize>>,
    pub blocks: Vec<JacobianBlock>,
    pub warnings: Vec<String>,
    pub valid: bool,
    pub tau_det: f64,
}

/// Inequality gate variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateVariant {
    Affine,
    ProjectiveWeak,
}

/// Exact evaluation of a counting inequality.
#[derive(Debug, Clone, Serialize)]
pub struct GateReport {
    pub variant: GateVariant,
    pub d: u32,
    pub n: u32,
    pub p: u32,
    pub lhs: u128,
    pub rhs: u128,
    pub holds: bool,
    /// Whether `(d, n, p)` satisfies the hypotheses under which the
    /// inequality is claimed (`p >= 4`, and `n >= 2` for the affine gate).
    pub within_hypothesis: bool,
}

/// Evaluates the affine gate `p n N_{d,n} < (d^{p-1} - d^{[p/2]})(d^{p-1}-1)^{n-1}`
/// or the weak projective gate `p (n+1) N_{d,n} <= (d^p - d^{[p/2]})(d^p-1)^{n-1}`
/// in exact integer arithmetic.
pub fn counting_gate(d: u32, n: u32, p: u32, variant: GateVariant) -> Result<GateReport> {
    if d < 2 || n < 1 || p < 1 {
        return Err(Error::InvalidArgument(format!(
            "counting_gate requires d >= 2, n >= 1, p >= 1; got ({d},{n},{p})"
        )));
    }
    let n_dn = crate::combinatorics::space_dims(d, n)?.n_dn as u128;
    let dp = |e: u32| -> u128 { (d as u128).pow(e) };
    let (lhs, rhs, holds, within) = match variant {
        GateVariant::Affine => {
            let lhs = p as u128 * n as u128 * n_dn;
            let rhs = (dp(p - 1) - dp(p / 2)) * (dp(p - 1) - 1).pow(n - 1);
            (lhs, rhs, lhs < rhs, p >= 4 && n >= 2)
        }
        GateVariant::ProjectiveWeak => {
            let lhs = p as u128 * (n as u128 + 1) * n_dn;
            let rhs = (dp(p) - dp(p / 2)) * (dp(p) - 1).pow(n - 1);
            (lhs, rhs, lhs <= rhs, p >= 4)
        }
    };
    Ok(GateReport {
        variant,
        d,
        n,
        p,
        lhs,
        rhs,
        holds,
        within_hypothesis: within,
    })
}

/// Result of exhaustively counting nonvanishing lattice points.
#[derive(Debug, Clone, Serialize)]
pub struct SPolyCount {
    pub count: u64,
    pub bound: u64,
    pub set_size: u64,
    pub meets_bound: bool,
}

fn advance_odometer(odo: &mut [usize], limit: impl Fn(usize) -> usize) -> bool {
    for j in (0..odo.len()).rev() {
        odo[j] += 1;
        if odo[j] < limit(j) {
            return true;
        }
        odo[j] = 0;
    }
    false
}

/// Counts the points of `S = Per_p x Fix_p^{n-1}` at which `poly` does not
/// vanish (`|P| > TAU_EVAL`) and compares against the lower bound
/// `(d^{p-1} - d^{[p/2]})(d^{p-1} - 1)^{n-1}`. The polynomial must be an
/// `s`-polynomial for `s = d^p - d^{p-1}`.
pub fn s_poly_nonvanishing_count(
    poly: &SparsePoly,
    d: u32,
    p: u32,
    n: usize,
    cfg: &RunConfig,
) -> Result<SPolyCount> {
    if p < 2 {
        return Err(Error::InvalidArgument(
            "s-polynomial counting needs p >= 2".into(),
        ));
    }
    if poly.n != n {
        return Err(Error::InvalidArgument(format!(
            "polynomial has {} variables, expected {n}",
            poly.n
        )));
    }
    let s_cap = pow_checked(d, p, &cfg.caps)? - (d as u64).pow(p - 1);
    for j in 0..n {
        let deg = poly.degree_in(j);
        if deg > s_cap {
            return Err(Error::DegreeCapExceeded(format!(
                "degree {deg} in variable {} exceeds the s-polynomial cap {s_cap}",
                j + 1
            )));
        }
    }
    let per = per_set(d, p, &cfg.caps)?;
    let fix = fix_set(d, p, &cfg.caps)?;
    let set_size = per.len() as u64 * (fix.len() as u64).pow(n as u32 - 1);
    if set_size > 20_000_000 {
        return Err(Error::Overflow(format!(
            "candidate set of size {set_size} exceeds the exhaustive-count cap"
        )));
    }
    let dpow = (d as u64).pow(p - 1);
    let bound = dpow.saturating_sub((d as u64).pow(p / 2)) * (dpow - 1).pow(n as u32 - 1);
    let mut count = 0u64;
    let mut z = vec![Complex64::ZERO; n];
    let mut odo = vec![0usize; n];
    loop {
        for j in 0..n {
            let coord = if j == 0 { &per[odo[0]] } else { &fix[odo[j]] };
            z[j] = coord.to_complex();
        }
        if poly.eval(&z).norm() > TAU_EVAL {
            count += 1;
        }
        if !advance_odometer(&mut odo, |j| if j == 0 { per.len() } else { fix.len() }) {
            break;
        }
    }
    Ok(SPolyCount {
        count,
        bound,
        set_size,
        meets_bound: count >= bound,
    })
}

/// Row descriptor inside the greedy induction: which diagonal map `rho_k`
/// the row differentiates, at which period, labeled `(tier, j)` for errors.
struct RowSpec {
    k_fun: usize,
    period: u32,
    tier: usize,
    j: usize,
}

/// A column of the direction basis. Affine columns always differentiate
/// along the row's own `k`; projective columns carry their `m`.
#[derive(Clone)]
struct ColumnSpec {
    m: usize,
    index: MultiIndex,
}

impl ColumnSpec {
    fn m_for(&self, k: usize) -> usize {
        match self.index.setting {
            Setting::Affine => k,
            Setting::Projective => self.m,
        }
    }
}

/// `w_k^{d^{p-1}}` via residue arithmetic on the angle.
fn exact_row_scale(point: &RootPoint, k: usize, cfg: &RunConfig) -> Result<Complex64> {
    let d = point.d;
    let p = point.period;
    let m_mod = pow_checked(d, p, &cfg.caps)? - 1;
    let (a, m) = point.coords[k - 1]
        .canonical()
        .ok_or_else(|| Error::ZeroCoordinate("witness coordinate is zero".into()))?;
    let a_scaled = mulmod(a, m_mod / m, m_mod);
    let mut e: u64 = 1 % m_mod;
    for _ in 0..(p - 1) {
        e = mulmod(e, d as u64 % m_mod, m_mod);
    }
    let theta = mulmod(a_scaled, e, m_mod);
    Ok(Complex64::from_polar(
        1.0,
        2.0 * std::f64::consts::PI * theta as f64 / m_mod as f64,
    ))
}

struct GreedyState<'a> {
    d: u32,
    n: usize,
    cfg: &'a RunConfig,
    columns: Vec<ColumnSpec>,
    chosen: Vec<RootPoint>,
    matrix_rows: Vec<Vec<Complex64>>,
    used_orbits: BTreeSet<Vec<Vec<(u8, u64, u64)>>>,
    q_cache: BTreeMap<(u32, usize), Vec<QPoly>>,
}

impl GreedyState<'_> {
    fn q_row(&mut self, p: u32, k: usize) -> Result<Vec<QPoly>> {
        if let Some(hit) = self.q_cache.get(&(p, k)) {
            return Ok(hit.clone());
        }
        let polys: Vec<QPoly> = self
            .columns
            .iter()
            .map(|col| q_poly(self.d, p, k, &col.index, col.m_for(k), &self.cfg.caps))
            .collect::<Result<_>>()?;
        self.q_cache.insert((p, k), polys.clone());
        Ok(polys)
    }

    fn candidates(&self, p: u32) -> Result<Vec<RootPoint>> {
        let per = per_set(self.d, p, &self.cfg.caps)?;
        let fix = fix_set(self.d, p, &self.cfg.caps)?;
        let mut out = Vec::new();
        let mut odo = vec![0usize; self.n];
        loop {
            let coords: Vec<RootCoord> = (0..self.n)
                .map(|j| if j == 0 { per[odo[0]] } else { fix[odo[j]] })
                .collect();
            if !coords.iter().any(|c| c.is_zero()) {
                let pt = RootPoint::new(self.d, coords)?;
                debug_assert_eq!(pt.period, p);
                if !self.used_orbits.contains(&pt.orbit_key()) {
                    out.push(pt);
                }
            }
            if !advance_odometer(&mut odo, |j| if j == 0 { per.len() } else { fix.len() }) {
                break;
            }
        }
        Ok(out)
    }

    /// Adds the next row by scoring every remaining candidate against the
    /// cofactors of the current leading minor and keeping the determinant
    /// maximizer (first index wins ties, so runs are reproducible).
    fn add_row(&mut self, spec: &RowSpec) -> Result<()> {
        let r = self.matrix_rows.len() + 1;
        let tau_det = self.cfg.tolerances.tau_det;
        let minors: Vec<Complex64> = if r == 1 {
            vec![Complex64::ONE]
        } else {
            (0..r)
                .map(|c| {
                    let mut m = CMat::zeros(r - 1, r - 1);
                    for (i, row) in self.matrix_rows.iter().enumerate() {
                        let mut cc = 0;
                        for (col, v) in row.iter().enumerate().take(r) {
                            if col != c {
                                m[(i, cc)] = *v;
                                cc += 1;
                            }
                        }
                    }
                    linalg::determinant(&m)
                })
                .collect()
        };
        let qs = self.q_row(spec.period, spec.k_fun)?;
        let cands = self.candidates(spec.period)?;
        if cands.is_empty() {
            return Err(Error::WitnessExhausted {
                k: spec.tier,
                j: spec.j,
            });
        }
        let caps = &self.cfg.caps;
        let leading = &qs[..r];
        let score_one = |cand: &RootPoint| -> Result<(f64, Vec<Complex64>)> {
            let mut entries = Vec::with_capacity(r);
            for q in leading {
                entries.push(q.eval_at_root(cand, caps)?);
            }
            let det: Complex64 = entries
                .iter()
                .enumerate()
                .map(|(c, v)| {
                    let sign = if (r - 1 + c).is_multiple_of(2) {
                        1.0
                    } else {
                        -1.0
                    };
                    v * minors[c] * sign
                })
                .sum();
            Ok((det.norm(), entries))
        };
        let scored = score_candidates(&cands, &score_one, self.cfg.threads.unwrap_or(1))?;
        let mut best: Option<(f64, usize, Vec<Complex64>)> = None;
        for (i, (score, entries)) in scored.into_iter().enumerate() {
            if best.as_ref().is_none_or(|(s, _, _)| score > *s) {
                best = Some((score, i, entries));
            }
        }
        let (best_score, best_i, best_entries) = best.unwrap();

        // Hadamard scale of the leading r x r minor
        let row_norm: f64 = best_entries
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt();
        let scale: f64 = self
            .matrix_rows
            .iter()
            .map(|row| row[..r].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
            .product::<f64>()
            * row_norm.max(f64::MIN_POSITIVE);
        if best_score <= tau_det * scale {
            return Err(Error::WitnessExhausted {
                k: spec.tier,
                j: spec.j,
            });
        }

        let winner = cands[best_i].clone();
        let mut full_row = Vec::with_capacity(self.columns.len());
        for q in &qs {
            full_row.push(q.eval_at_root(&winner, caps)?);
        }
        self.used_orbits.insert(winner.orbit_key());
        self.chosen.push(winner);
        self.matrix_rows.push(full_row);
        Ok(())
    }
}

type ScoredRow = (f64, Vec<Complex64>);

fn score_candidates<F>(cands: &[RootPoint], score_one: &F, threads: usize) -> Result<Vec<ScoredRow>>
where
    F: Fn(&RootPoint) -> Result<ScoredRow> + Sync,
{
    if threads <= 1 || cands.len() < 256 {
        return cands.iter().map(score_one).collect();
    }
    let chunk = cands.len().div_ceil(threads);
    let results: Vec<Result<Vec<ScoredRow>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cands
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(score_one).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut out = Vec::with_capacity(cands.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn validate_periods(periods: &[Vec<u32>], tiers: usize, n_dn: usize) -> Result<Vec<String>> {
    if periods.len() != tiers {
        return Err(Error::InvalidArgument(format!(
            "expected {tiers} period rows, got {}",
            periods.len()
        )));
    }
    for row in periods {
        if row.len() != n_dn {
            return Err(Error::InvalidArgument(format!(
                "each period row must have N_dn = {n_dn} entries, got {}",
                row.len()
            )));
        }
        for &p in row {
            if p < 2 {
                return Err(Error::InvalidArgument(format!(
                    "requested period {p} < 2: the candidate lattice needs exact period at least 2"
                )));
            }
        }
    }
    let mut warnings = Vec::new();
    if periods.iter().flatten().any(|&p| p < 4) {
        warnings.push(
            "some requested periods are below 4; the existence guarantee only covers periods >= 4"
                .into(),
        );
    }
    Ok(warnings)
}

fn finish_block(k: usize, rows: &[Vec<Complex64>], ncols: usize) -> JacobianBlock {
    let nrows = rows.len();
    let mut m = CMat::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        for c in 0..ncols {
            m[(i, c)] = row[c];
        }
    }
    let det = linalg::determinant(&m);
    let sv = linalg::singular_values(&m);
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    let het_scale: f64 = rows
        .iter()
        .map(|r| r[..ncols].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
        .product();
    JacobianBlock {
        k,
        entries: m,
        det,
        smin_over_smax: if smax > 0.0 { smin / smax } else { 0.0 },
        het_scale,
    }
}

/// Affine witness selection: for each `k`, greedily picks `N_dn` orbits
/// making the block `J_k` nonsingular, avoiding every previously used orbit.
pub fn select_witnesses(
    d: u32,
    n: usize,
    periods: &[Vec<u32>],
    cfg: &RunConfig,
) -> Result<WitnessSet> {
    let dims = crate::combinatorics::space_dims(d, n as u32)?;
    let n_dn = dims.n_dn as usize;
    let warnings = validate_periods(periods, n, n_dn)?;
    let directions = enumerate_admissible(d, n as u32, Setting::Affine)?;
    let columns: Vec<ColumnSpec> = directions
        .into_iter()
        .map(|index| ColumnSpec { m: 0, index })
        .collect();

    let mut points: Vec<Vec<RootPoint>> = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(n);
    let mut used = BTreeSet::new();
    for k in 1..=n {
        let mut state = GreedyState {
            d,
            n,
            cfg,
            columns: columns.clone(),
            chosen: Vec::new(),
            matrix_rows: Vec::new(),
            used_orbits: std::mem::take(&mut used),
            q_cache: BTreeMap::new(),
        };
        for j in 1..=n_dn {
            state.add_row(&RowSpec {
                k_fun: k,
                period: periods[k - 1][j - 1],
                tier: k,
                j,
            })?;
        }
        blocks.push(finish_block(k, &state.matrix_rows, n_dn));
        points.push(state.chosen);
        used = state.used_orbits;
    }

    let tau = cfg.tolerances.tau_det;
    let valid = blocks.iter().all(|b| b.passes(tau));
    Ok(WitnessSet {
        d,
        n,
        projective: false,
        periods: periods.to_vec(),
        points,
        k_choices: None,
        blocks,
        warnings,
        valid,
        tau_det: tau,
    })
}

/// Projective witness selection: one folded `(n+1) N_dn` square Jacobian
/// whose first `N_dn` rows differentiate diagonal entries `rho_{k_j}`, with
/// `k_j` chosen so the `j`-th index has a nonzero entry there; the column
/// order puts the homogenizing (`m = 0`) block first.
pub fn select_witnesses_projective(
    d: u32,
    n: usize,
    periods: &[Vec<u32>],
    cfg: &RunConfig,
) -> Result<WitnessSet> {
    let dims = crate::combinatorics::space_dims(d, n as u32)?;
    let n_dn = dims.n_dn as usize;
    let mut warnings = validate_periods(periods, n + 1, n_dn)?;
    let needed = if d == 2 && n == 2 { 5 } else { 4 };
    if periods.iter().flatten().any(|&p| p < needed) {
        warnings.push(format!(
            "projective guarantee needs periods >= {needed} for (d,n)=({d},{n}); selection may still succeed"
        ));
    }
    let directions = enumerate_admissible(d, n as u32, Setting::Projective)?;
    let k_choices: Vec<usize> = directions
        .iter()
        .map(|idx| {
            (1..=n)
                .find(|&k| idx.entry(k) != 0)
                .expect("admissible projective index has a nonzero affine entry")
        })
        .collect();
    let mut columns: Vec<ColumnSpec> = Vec::with_capacity((n + 1) * n_dn);
    for m in 0..=n {
        for index in &directions {
            columns.push(ColumnSpec {
                m,
                index: index.clone(),
            });
        }
    }

    let mut state = GreedyState {
        d,
        n,
        cfg,
        columns,
        chosen: Vec::new(),
        matrix_rows: Vec::new(),
        used_orbits: BTreeSet::new(),
        q_cache: BTreeMap::new(),
    };
    for j in 1..=n_dn {
        state.add_row(&RowSpec {
            k_fun: k_choices[j - 1],
            period: periods[0][j - 1],
            tier: 0,
            j,
        })?;
    }
    for (k, tier_periods) in periods.iter().enumerate().skip(1) {
        for j in 1..=n_dn {
            state.add_row(&RowSpec {
                k_fun: k,
                period: tier_periods[j - 1],
                tier: k,
                j,
            })?;
        }
    }

    let total = (n + 1) * n_dn;
    let block = finish_block(0, &state.matrix_rows, total);
    let tau = cfg.tolerances.tau_det;
    let valid = block.passes(tau);
    let mut points: Vec<Vec<RootPoint>> = Vec::with_capacity(n + 1);
    for tier in 0..=n {
        points.push(state.chosen[tier * n_dn..(tier + 1) * n_dn].to_vec());
    }
    Ok(WitnessSet {
        d,
        n,
        projective: true,
        periods: periods.to_vec(),
        points,
        k_choices: Some(k_choices),
        blocks: vec![block],
        warnings,
        valid,
        tau_det: tau,
    })
}

/// Independent post-hoc verification: recomputes every matrix entry through
/// the direct derivative formulas (not the `Q`-polynomial route used during
/// construction), re-takes determinants, and re-checks periods and orbit
/// distinctness.
pub fn verify_witnesses(ws: &WitnessSet, cfg: &RunConfig) -> Result<bool> {
    let n_dn = crate::combinatorics::space_dims(ws.d, ws.n as u32)?.n_dn as usize;
    let setting = if ws.projective {
        Setting::Projective
    } else {
        Setting::Affine
    };
    let directions = enumerate_admissible(ws.d, ws.n as u32, setting)?;

    let mut seen = BTreeSet::new();
    for (tier, tier_points) in ws.points.iter().enumerate() {
        for (j, pt) in tier_points.iter().enumerate() {
            if pt.period != ws.periods[tier][j] {
                return Err(Error::InvalidArgument(format!(
                    "witness (tier {tier}, j {}) has period {} instead of {}",
                    j + 1,
                    pt.period,
                    ws.periods[tier][j]
                )));
            }
            if !seen.insert(pt.orbit_key()) {
                return Err(Error::DuplicateOrbit(format!(
                    "witness (tier {tier}, j {}) repeats an orbit",
                    j + 1
                )));
            }
        }
    }

    let recompute_row = |k_fun: usize, pt: &RootPoint| -> Result<Vec<Complex64>> {
        let scale = exact_row_scale(pt, k_fun, cfg)?;
        let mut row = Vec::new();
        if ws.projective {
            for m in 0..=ws.n {
                for idx in &directions {
                    let q = DerivativeQuery::new(k_fun, m, idx.clone(), pt.clone())?;
                    row.push(partial_rho_projective(&q, &cfg.caps)? * scale);
                }
            }
        } else {
            for idx in &directions {
                let q = DerivativeQuery::new(k_fun, k_fun, idx.clone(), pt.clone())?;
                row.push(partial_rho_affine(&q, &cfg.caps)? * scale);
            }
        }
        Ok(row)
    };

    for block in &ws.blocks {
        let tier_list: Vec<usize> = if ws.projective {
            (0..=ws.n).collect()
        } else {
            vec![block.k - 1]
        };
        let mut r = 0usize;
        for tier_idx in tier_list {
            for j in 0..n_dn {
                let pt = &ws.points[tier_idx][j];
                let k_fun = if ws.projective {
                    if tier_idx == 0 {
                        ws.k_choices.as_ref().unwrap()[j]
                    } else {
                        tier_idx
                    }
                } else {
                    block.k
                };
                let row = recompute_row(k_fun, pt)?;
                for (c, v) in row.iter().enumerate() {
                    let stored = block.entries[(r, c)];
                    if (stored - v).norm() > 1e-10 * (1.0 + stored.norm()) {
                        return Err(Error::InvalidArgument(format!(
                            "entry ({r},{c}) of block {} disagrees between routes: {stored} vs {v}",
                            block.k
                        )));
                    }
                }
                r += 1;
            }
        }
        let det = linalg::determinant(&block.entries);
        if (det - block.det).norm() > 1e-8 * (1.0 + det.norm()) {
            return Err(Error::InvalidArgument(
                "stored determinant does not match recomputation".into(),
            ));
        }
        if !block.passes(ws.tau_det) {
            return Ok(false);
        }
    }
    Ok(true)
}
