//! Command-line front end: argument parsing, dispatch, and JSON reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or a
//! computation aborts, 2 on usage errors.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::combinatorics::{enumerate_admissible, space_dims, MultiIndex, Setting};
use crate::config::RunConfig;
use crate::continuation::{
    enumerate_cycles_fc, multiplier_spectrum, rank_certificate, PolyMapDense,
};
use crate::derivatives::{
    fd_partial_rho_richardson, partial_rho_affine, partial_rho_projective, q_poly, DerivativeQuery,
};
use crate::monodromy::{
    disc_chain_certificate, hyperbolicity_bound, run_loop, ChainMode, FamilyId, LoopSpec,
};
use crate::powerlattice::{fix_set, parse_root_coord, per_count_formula, per_set, RootPoint};
use crate::report::{complex_json, point_json, Check, Report};
use crate::witness::{
    counting_gate, select_witnesses, select_witnesses_projective, verify_witnesses, GateVariant,
    WitnessSet,
};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "multispec",
    version,
    about = "Multiplier spectra, witness certificates and monodromy loops for polynomial endomorphisms near the power map"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// JSON file overriding the default tolerances and caps.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report here in addition to stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for sampled probes.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Dimension formulas and the admissible direction basis.
    Dims {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        projective: bool,
    },
    /// Periodic-point counts of the power map and sample orbits.
    Lattice {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// One closed-form derivative value, optionally cross-checked by the
    /// finite-difference oracle.
    Deriv {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Comma-separated exponents, e.g. 1,0 (affine) or 0,1,1 (projective).
        #[arg(long)]
        index: String,
        /// Comma-separated coordinates as a/m fractions, e.g. 1/3,0/1.
        #[arg(long)]
        point: String,
        #[arg(long)]
        projective: bool,
        #[arg(long)]
        fd_check: bool,
    },
    /// Witness selection with nonsingularity certificates.
    Witness {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: usize,
        /// Row-major periods: n*N_dn values (affine) or (n+1)*N_dn (projective).
        #[arg(long)]
        periods: String,
        #[arg(long)]
        projective: bool,
    },
    /// Finite-difference rank certificate for the eigenvalue Jacobian at F_c.
    VerifyRank {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: usize,
        /// 2n comma-separated reals: re,im per coordinate of c.
        #[arg(long)]
        c: String,
        /// n*N_dn witness periods, row-major.
        #[arg(long)]
        periods: String,
        #[arg(long)]
        fd_step: Option<f64>,
    },
    /// Track marked cycles along a loop file and print the permutation.
    Track {
        #[arg(long)]
        family: Option<String>,
        #[arg(long = "loop")]
        loop_file: PathBuf,
    },
    /// Full monodromy run: permutation plus commutation checks.
    Monodromy {
        #[arg(long = "loop")]
        loop_file: PathBuf,
    },
    /// Hyperbolicity certificate for a chain of shifted polynomials.
    CertifyHyperbolic {
        #[arg(long)]
        spec: PathBuf,
        /// Demand the literal disc inclusion instead of the chain inequality.
        #[arg(long)]
        strict_inclusion: bool,
    },
    /// Counting-inequality gates over a parameter grid.
    Gates {
        /// Grid like d=2..5,n=1..4,p=4..8.
        #[arg(long)]
        grid: String,
    },
    /// Multiplier spectra of all exact-period-p cycles of F_c.
    Spectrum {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: String,
        #[arg(long)]
        p: u32,
    },
}

/// Outcome of one dispatch: a report (exit 0/1) or a usage error (exit 2).
pub enum Outcome {
    Report(Box<Report>, i32),
    Usage(String),
    /// Help or version text that exits 0.
    Info(String),
}

/// Parses argv (the first element is the program name) and runs the
/// subcommand with the default configuration.
pub fn dispatch(argv: &[String]) -> Outcome {
    dispatch_with_default(argv, None)
}

/// Like [`dispatch`] but starting from a caller-provided configuration
/// (used by embedders); an explicit `--config` flag still wins.
pub fn dispatch_with_default(argv: &[String], default_cfg: Option<RunConfig>) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::Info(e.to_string()),
                _ => Outcome::Usage(e.to_string()),
            }
        }
    };
    let mut cfg = match load_config(&cli.global, default_cfg) {
        Ok(cfg) => cfg,
        Err(e) => return Outcome::Usage(format!("bad --config: {e}")),
    };
    if let Some(seed) = cli.global.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.global.output {
        cfg.output = Some(out.display().to_string());
    }
    if cfg.threads.is_none() {
        if let Ok(v) = std::env::var("MULTISPEC_THREADS") {
            cfg.threads = v.parse::<usize>().ok().filter(|&t| t >= 1);
        }
    }
    let echo: Vec<String> = argv.iter().skip(1).cloned().collect();
    match run_command(&cli.cmd, &cfg) {
        Ok((results, checks)) => {
            let report = Report::new(echo, cfg, results, checks);
            let code = if report.all_pass() { 0 } else { 1 };
            Outcome::Report(Box::new(report), code)
        }
        Err(e) => match e {
            Error::InvalidArgument(_) | Error::BadLoopSpec(_) | Error::Json(_) | Error::Io(_) => {
                Outcome::Usage(e.to_string())
            }
            other => {
                let report = Report::new(
                    echo,
                    cfg,
                    json!({"error": other.to_string()}),
                    vec![Check::new("completed", false, other.to_string())],
                );
                Outcome::Report(Box::new(report), 1)
            }
        },
    }
}

fn load_config(global: &GlobalArgs, default_cfg: Option<RunConfig>) -> Result<RunConfig> {
    match &global.config {
        None => Ok(default_cfg.unwrap_or_default()),
        Some(path) => RunConfig::from_json(&std::fs::read_to_string(path)?),
    }
}

fn run_command(cmd: &Cmd, cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    match cmd {
        Cmd::Dims { d, n, projective } => cmd_dims(*d, *n, *projective),
        Cmd::Lattice { d, p, n } => cmd_lattice(*d, *p, *n, cfg),
        Cmd::Deriv {
            d,
            n,
            p,
            k,
            m,
            index,
            point,
            projective,
            fd_check,
        } => cmd_deriv(
            *d,
            *n,
            *p,
            *k,
            *m,
            index,
            point,
            *projective,
            *fd_check,
            cfg,
        ),
        Cmd::Witness {
            d,
            n,
            periods,
            projective,
        } => cmd_witness(*d, *n, periods, *projective, cfg),
        Cmd::VerifyRank {
            d,
            n,
            c,
            periods,
            fd_step,
        } => cmd_verify_rank(*d, *n, c, periods, *fd_step, cfg),
        Cmd::Track { family, loop_file } => cmd_loop(family.as_deref(), loop_file, false, cfg),
        Cmd::Monodromy { loop_file } => cmd_loop(None, loop_file, true, cfg),
        Cmd::CertifyHyperbolic {
            spec,
            strict_inclusion,
        } => cmd_certify(spec, *strict_inclusion),
        Cmd::Gates { grid } => cmd_gates(grid),
        Cmd::Spectrum { d, n, c, p } => cmd_spectrum(*d, *n, c, *p, cfg),
    }
}

fn parse_u32_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidArgument(format!("bad integer {t:?}")))
        })
        .collect()
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number {t:?}")))
        })
        .collect()
}

fn parse_complex_vector(text: &str, n: usize) -> Result<Vec<Complex64>> {
    let vals = parse_f64_list(text)?;
    if vals.len() != 2 * n {
        return Err(Error::InvalidArgument(format!(
            "expected {} comma-separated reals (re,im per coordinate), got {}",
            2 * n,
            vals.len()
        )));
    }
    Ok(vals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

fn cmd_dims(d: u32, n: u32, projective: bool) -> Result<(Value, Vec<Check>)> {
    let dims = space_dims(d, n)?;
    let setting = if projective {
        Setting::Projective
    } else {
        Setting::Affine
    };
    let admissible = enumerate_admissible(d, n, setting)?;
    let moduli_dim = if projective {
        dims.proj_moduli_dim
    } else {
        dims.affine_moduli_dim
    };
    let results = json!({
        "d": d,
        "n": n,
        "N_dn": dims.n_dn,
        "moduli_dim": moduli_dim,
        "affine_moduli_dim": dims.affine_moduli_dim,
        "proj_moduli_dim": dims.proj_moduli_dim,
        "coeff_count": dims.coeff_count,
        "admissible": admissible.iter().map(|i| i.entries.clone()).collect::<Vec<_>>(),
    });
    let checks = vec![Check::new(
        "admissible_count",
        admissible.len() as u64 == dims.n_dn,
        format!("{} enumerated vs N_dn = {}", admissible.len(), dims.n_dn),
    )];
    Ok((results, checks))
}

fn cmd_lattice(d: u32, p: u32, n: u32, cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let fix = fix_set(d, p, &cfg.caps)?;
    let per = per_set(d, p, &cfg.caps)?;
    let dp = (d as u64).pow(p);
    let partition: u64 = (1..=p)
        .filter(|k| p.is_multiple_of(*k))
        .map(|k| per_set(d, k, &cfg.caps).map(|s| s.len() as u64))
        .sum::<Result<u64>>()?;
    let mut sample_orbits = Vec::new();
    for coord in per.iter().take(5) {
        let mut coords = vec![*coord];
        coords.extend(std::iter::repeat_n(
            crate::powerlattice::RootCoord::angle(0, 1),
            n as usize - 1,
        ));
        let pt = RootPoint::new(d, coords)?;
        sample_orbits.push(Value::Array(pt.orbit().iter().map(point_json).collect()));
    }
    let results = json!({
        "d": d, "p": p, "n": n,
        "fix_count": fix.len(),
        "per_count": per.len(),
        "per_count_formula": per_count_formula(d, p),
        "partition_sum": partition,
        "d_pow_p": dp,
        "sample_orbits": sample_orbits,
    });
    let lower = dp.saturating_sub((d as u64).pow(p / 2));
    let checks = vec![
        Check::new(
            "fix_count",
            fix.len() as u64 == dp - 1,
            format!("{} vs d^p - 1 = {}", fix.len(), dp - 1),
        ),
        Check::new(
            "partition_identity",
            partition == dp,
            format!("sum over divisors {partition} vs d^p = {dp}"),
        ),
        Check::new(
            "per_lower_bound",
            per.len() as u64 >= lower,
            format!("{} >= {}", per.len(), lower),
        ),
        Check::new(
            "per_moebius",
            per.len() as u64 == per_count_formula(d, p),
            "enumeration vs Moebius count",
        ),
    ];
    Ok((results, checks))
}

#[allow(clippy::too_many_arguments)]
fn cmd_deriv(
    d: u32,
    n: usize,
    p: u32,
    k: usize,
    m: usize,
    index: &str,
    point: &str,
    projective: bool,
    fd_check: bool,
    cfg: &RunConfig,
) -> Result<(Value, Vec<Check>)> {
    let entries = parse_u32_list(index)?;
    let idx = if projective {
        MultiIndex::projective(entries)
    } else {
        MultiIndex::affine(entries)
    };
    let coords = point
        .split(',')
        .map(parse_root_coord)
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != n {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates, expected {n}",
            coords.len()
        )));
    }
    let w0 = RootPoint::new(d, coords)?;
    if w0.period != p {
        return Err(Error::InvalidArgument(format!(
            "point has period {}, not the requested {p}",
            w0.period
        )));
    }
    let query = DerivativeQuery::new(k, m, idx.clone(), w0.clone())?;
    let value = if projective {
        partial_rho_projective(&query, &cfg.caps)?
    } else {
        partial_rho_affine(&query, &cfg.caps)?
    };
    let q_degrees: Value = if idx.is_admissible(d) {
        let qp = q_poly(d, p, k, &idx, m, &cfg.caps)?;
        json!((1..=n).map(|j| qp.degree_in(j)).collect::<Vec<_>>())
    } else {
        Value::Null
    };
    let mut results = json!({
        "value": complex_json(value),
        "q_degrees": q_degrees,
        "point": point_json(&w0),
    });
    let mut checks = Vec::new();
    if fd_check {
        let f0 = PolyMapDense::power_map(d, n);
        let fd = fd_partial_rho_richardson(&query, &f0, cfg.tolerances.fd_step, &cfg.tolerances)?;
        let delta = (fd - value).norm();
        let tol = 1e-6 * (1.0 + value.norm());
        results["fd_value"] = complex_json(fd);
        results["fd_delta"] = json!(delta);
        checks.push(Check::new(
            "fd_oracle",
            delta <= tol,
            format!("|closed - fd| = {delta:.3e} (tol {tol:.3e})"),
        ));
    }
    Ok((results, checks))
}

fn witness_json(ws: &WitnessSet) -> Value {
    json!({
        "d": ws.d,
        "n": ws.n,
        "projective": ws.projective,
        "valid": ws.valid,
        "warnings": ws.warnings,
        "k_choices": ws.k_choices,
        "points": ws.points.iter().map(|tier| {
            Value::Array(tier.iter().map(point_json).collect())
        }).collect::<Vec<_>>(),
        "blocks": ws.blocks.iter().map(|b| json!({
            "k": b.k,
            "det": complex_json(b.det),
            "abs_det": b.det.norm(),
            "het_scale": b.het_scale,
            "smin_over_smax": b.smin_over_smax,
        })).collect::<Vec<_>>(),
        "tau_det": ws.tau_det,
    })
}

fn cmd_witness(
    d: u32,
    n: usize,
    periods: &str,
    projective: bool,
    cfg: &RunConfig,
) -> Result<(Value, Vec<Check>)> {
    let n_dn = space_dims(d, n as u32)?.n_dn as usize;
    let tiers = if projective { n + 1 } else { n };
    let flat = parse_u32_list(periods)?;
    if flat.len() != tiers * n_dn {
        return Err(Error::InvalidArgument(format!(
            "expected {} periods ({} tiers x N_dn = {}), got {}",
            tiers * n_dn,
            tiers,
            n_dn,
            flat.len()
        )));
    }
    let rows: Vec<Vec<u32>> = flat.chunks(n_dn).map(|c| c.to_vec()).collect();
    let ws = if projective {
        select_witnesses_projective(d, n, &rows, cfg)?
    } else {
        select_witnesses(d, n, &rows, cfg)?
    };
    let verified = verify_witnesses(&ws, cfg)?;
    let checks = vec![
        Check::new(
            "witness_valid",
            ws.valid,
            "all block determinants exceed tau_det",
        ),
        Check::new(
            "independent_reverification",
            verified,
            "entry-by-entry recomputation through the direct formulas",
        ),
    ];
    Ok((witness_json(&ws), checks))
}

fn cmd_verify_rank(
    d: u32,
    n: usize,
    c: &str,
    periods: &str,
    fd_step: Option<f64>,
    cfg: &RunConfig,
) -> Result<(Value, Vec<Check>)> {
    let c = parse_complex_vector(c, n)?;
    let n_dn = space_dims(d, n as u32)?.n_dn as usize;
    let flat = parse_u32_list(periods)?;
    if flat.len() != n * n_dn {
        return Err(Error::InvalidArgument(format!(
            "expected {} periods, got {}",
            n * n_dn,
            flat.len()
        )));
    }
    let rows: Vec<Vec<u32>> = flat.chunks(n_dn).map(|r| r.to_vec()).collect();
    let ws = select_witnesses(d, n, &rows, cfg)?;
    let base = PolyMapDense::fc(d, &c);
    let h = fd_step.unwrap_or(cfg.tolerances.fd_step);
    let report = rank_certificate(&base, &ws, h, &cfg.tolerances)?;
    let results = json!({
        "c": c.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
        "size": report.size,
        "singular_values": report.singular_values,
        "rank_at_tol": report.rank_at_tol,
        "certified_full_rank": report.certified_full_rank,
        "tau_rank": report.tau_rank,
        "fd_step": h,
        "witnesses": witness_json(&ws),
    });
    let checks = vec![Check::new(
        "certified_full_rank",
        report.certified_full_rank,
        format!(
            "smin/smax = {:.3e} (threshold {:.1e})",
            report.singular_values.last().copied().unwrap_or(0.0)
                / report.singular_values.first().copied().unwrap_or(1.0),
            report.tau_rank
        ),
    )];
    Ok((results, checks))
}

fn cmd_loop(
    family_override: Option<&str>,
    loop_file: &PathBuf,
    with_checks: bool,
    cfg: &RunConfig,
) -> Result<(Value, Vec<Check>)> {
    let text = std::fs::read_to_string(loop_file)?;
    let spec: LoopSpec = serde_json::from_str(&text)?;
    if let Some(name) = family_override {
        let requested: FamilyId = serde_json::from_value(Value::String(name.to_string()))
            .map_err(|_| Error::InvalidArgument(format!("unknown family {name:?}")))?;
        if requested != spec.family {
            return Err(Error::InvalidArgument(format!(
                "--family {name:?} does not match the loop file"
            )));
        }
    }
    let result = run_loop(&spec, cfg)?;
    let results = serde_json::to_value(&result)?;
    let checks = if with_checks {
        vec![Check::new(
            "commutes_with_dynamics",
            result.commutes_with_dynamics,
            "monodromy must commute with the dynamics",
        )]
    } else {
        Vec::new()
    };
    Ok((results, checks))
}

#[derive(Debug, Deserialize)]
struct ChainSpecFile {
    /// Coefficients low-to-high, `[re, im]` pairs; must be monic.
    polys: Vec<Vec<[f64; 2]>>,
    alphas: Vec<[f64; 2]>,
    b: [f64; 2],
    eps: f64,
    #[serde(default = "default_expansion")]
    expansion: f64,
}

fn default_expansion() -> f64 {
    1.0
}

fn cmd_certify(spec_path: &PathBuf, strict: bool) -> Result<(Value, Vec<Check>)> {
    let text = std::fs::read_to_string(spec_path)?;
    let spec: ChainSpecFile = serde_json::from_str(&text)?;
    let polys: Vec<Vec<Complex64>> = spec
        .polys
        .iter()
        .map(|p| p.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    let alphas: Vec<Complex64> = spec
        .alphas
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    let mode = if strict {
        ChainMode::Inclusion
    } else {
        ChainMode::Chain
    };
    let b = Complex64::new(spec.b[0], spec.b[1]);
    let report = disc_chain_certificate(&polys, &alphas, b, spec.eps, spec.expansion, mode)?;
    let d = polys[0].len() as u32 - 1;
    let m_min = alphas
        .iter()
        .map(|a| a.norm())
        .fold(f64::INFINITY, f64::min);
    let m_max = alphas.iter().map(|a| a.norm()).fold(0.0f64, f64::max);
    let bound_a = hyperbolicity_bound(d, spec.eps, m_min, m_max)?;
    let mut results = serde_json::to_value(&report)?;
    results["bound_A"] = json!(bound_a);
    results["abs_b"] = json!(b.norm());
    let checks = vec![Check::new(
        "hyperbolic_chain_certified",
        report.certified,
        format!(
            "mode {:?}, |b| = {:.3} vs A = {bound_a:.3}, expansion_min {:.3}",
            report.mode,
            b.norm(),
            report.expansion_min
        ),
    )];
    Ok((results, checks))
}

fn parse_range(text: &str) -> Result<(u32, u32)> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| Error::InvalidArgument(format!("bad range {text:?}, want lo..hi")))?;
    let lo = a
        .parse::<u32>()
        .map_err(|_| Error::InvalidArgument(format!("bad range {text:?}")))?;
    let hi = b
        .parse::<u32>()
        .map_err(|_| Error::InvalidArgument(format!("bad range {text:?}")))?;
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty range {text:?}")));
    }
    Ok((lo, hi))
}

fn cmd_gates(grid: &str) -> Result<(Value, Vec<Check>)> {
    let mut d_range = (2, 5);
    let mut n_range = (1, 4);
    let mut p_range = (4, 8);
    for part in grid.split(',') {
        let (name, range) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("bad grid part {part:?}")))?;
        let range = parse_range(range)?;
        match name.trim() {
            "d" => d_range = range,
            "n" => n_range = range,
            "p" => p_range = range,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown grid variable {other:?}"
                )))
            }
        }
    }
    let mut affine_total = 0u32;
    let mut affine_hold = 0u32;
    let mut weak_total = 0u32;
    let mut weak_hold = 0u32;
    let mut outside = Vec::new();
    let mut failures = Vec::new();
    for d in d_range.0..=d_range.1 {
        for n in n_range.0..=n_range.1 {
            for p in p_range.0..=p_range.1 {
                let a = counting_gate(d, n, p, GateVariant::Affine)?;
                if a.within_hypothesis {
                    affine_total += 1;
                    if a.holds {
                        affine_hold += 1;
                    } else {
                        failures.push(json!({"variant": "affine", "d": d, "n": n, "p": p,
                                             "lhs": a.lhs as u64, "rhs": a.rhs as u64}));
                    }
                } else {
                    outside.push(json!({"variant": "affine", "d": d, "n": n, "p": p,
                                        "lhs": a.lhs as u64, "rhs": a.rhs as u64, "holds": a.holds}));
                }
                let w = counting_gate(d, n, p, GateVariant::ProjectiveWeak)?;
                weak_total += 1;
                if w.holds {
                    weak_hold += 1;
                } else {
                    failures.push(json!({"variant": "projective-weak", "d": d, "n": n, "p": p,
                                         "lhs": w.lhs as u64, "rhs": w.rhs as u64}));
                }
            }
        }
    }
    let anchor_a = counting_gate(2, 2, 4, GateVariant::Affine)?;
    let anchor_w = counting_gate(2, 2, 4, GateVariant::ProjectiveWeak)?;
    let results = json!({
        "grid": {"d": [d_range.0, d_range.1], "n": [n_range.0, n_range.1], "p": [p_range.0, p_range.1]},
        "affine": {"within_hypothesis": affine_total, "hold": affine_hold},
        "projective_weak": {"total": weak_total, "hold": weak_hold},
        "outside_hypothesis": outside,
        "failures": failures,
        "anchor_2_2_4": {
            "affine": {"lhs": anchor_a.lhs as u64, "rhs": anchor_a.rhs as u64},
            "projective_weak": {"lhs": anchor_w.lhs as u64, "rhs": anchor_w.rhs as u64},
        },
    });
    let checks = vec![
        Check::new(
            "affine_gate",
            affine_hold == affine_total,
            format!("{affine_hold}/{affine_total} grid points hold (hypothesis p>=4, n>=2)"),
        ),
        Check::new(
            "projective_weak_gate",
            weak_hold == weak_total,
            format!("{weak_hold}/{weak_total} grid points hold"),
        ),
        Check::new(
            "anchor_values",
            anchor_a.lhs == 24 && anchor_a.rhs == 28 && anchor_w.lhs == 36 && anchor_w.rhs == 180,
            "24 < 28 and 36 <= 180 at (d,n,p) = (2,2,4)",
        ),
    ];
    Ok((results, checks))
}

fn cmd_spectrum(d: u32, n: usize, c: &str, p: u32, cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    let c = parse_complex_vector(c, n)?;
    let f = PolyMapDense::fc(d, &c);
    let cycles = enumerate_cycles_fc(d, &c, p, &cfg.tolerances, &cfg.caps)?;
    let spectra = multiplier_spectrum(&f, p, &cycles, &cfg.tolerances)?;
    let results = json!({
        "d": d, "n": n, "p": p,
        "c": c.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
        "cycle_count": cycles.len(),
        "spectra": spectra.iter().map(|row| {
            Value::Array(row.iter().map(|z| complex_json(*z)).collect())
        }).collect::<Vec<_>>(),
    });
    Ok((results, vec![]))
}
