//! Run configuration: tolerances, caps and reproducibility knobs shared by
//! every subcommand. All thresholds live here so that reports can echo them.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Numeric tolerances. Every value carries its role in the pipeline.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Sup-norm residual target for Newton correction of cycles.
    pub tau_newton: f64,
    /// Parabolic proximity: a cycle with an eigenvalue closer than this to 1
    /// triggers substepping; below `PARABOLIC_ABORT` tracking aborts.
    pub tau_parab: f64,
    /// Witness determinant threshold, relative to the product of row norms.
    pub tau_det: f64,
    /// Relative rank threshold for the singular value ratio smin/smax.
    pub tau_rank: f64,
    /// Base step for central finite differences in the family parameter.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tau_newton: 1e-12,
            tau_parab: 1e-6,
            tau_det: 1e-8,
            tau_rank: 1e-7,
            fd_step: 1e-5,
        }
    }
}

/// Hard abort threshold for parabolic proximity during tracking.
pub const PARABOLIC_ABORT: f64 = 1e-10;

/// Absolute threshold below which a polynomial value at a lattice point is
/// treated as zero when counting nonvanishing points.
pub const TAU_EVAL: f64 = 1e-9;

/// Size and search caps.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    /// Largest period accepted by lattice enumeration and cycle solving.
    pub max_period: u32,
    /// Largest admissible d^p; beyond this residue arithmetic would overflow.
    pub max_dp: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_period: 24,
            max_dp: 1u64 << 62,
        }
    }
}

/// Configuration for one run. Deterministic outputs are guaranteed for a
/// fixed `(config, inputs, seed)` triple.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Seed for all sampled probes (fd sweeps, sphere sampling).
    pub seed: u64,
    pub tolerances: Tolerances,
    pub caps: Caps,
    /// Optional path the CLI writes the JSON report to.
    pub output: Option<String>,
    /// Maximum worker threads for candidate scoring; `None` means serial.
    /// Set from the `MULTISPEC_THREADS` environment variable by the CLI.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 17,
            tolerances: Tolerances::default(),
            caps: Caps::default(),
            output: None,
            threads: None,
        }
    }
}

impl RunConfig {
    /// Parses a JSON override file. Unknown fields are rejected so typos in
    /// tolerance names cannot silently fall back to defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("tau_newton", t.tau_newton),
            ("tau_parab", t.tau_parab),
            ("tau_det", t.tau_det),
            ("tau_rank", t.tau_rank),
            ("fd_step", t.fd_step),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "tolerance {name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.caps.max_period == 0 {
            return Err(Error::InvalidArgument("max_period must be >= 1".into()));
        }
        Ok(())
    }
}
