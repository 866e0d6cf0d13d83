//! Dimension formulas and enumeration of admissible perturbation directions.
//!
//! A monomial direction is indexed by a multi-index `I`: affine indices have
//! `n` entries and total degree at most `d`, projective indices have `n+1`
//! entries and total degree exactly `d`. Admissible indices are the ones
//! whose monomial perturbation keeps the normalized family normalized:
//! nonzero (affine) and with no entry equal to `d` (both settings). There
//! are exactly `N_{d,n} = binom(d+n, n) - n - 1` of them in either setting.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Whether a multi-index lives in the affine chart (`n` entries) or indexes
/// a homogeneous monomial on projective space (`n+1` entries, entry 0 is the
/// hyperplane coordinate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Affine,
    Projective,
}

/// Dimension data for degree-`d` regular polynomial endomorphisms of `C^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDims {
    pub d: u32,
    pub n: u32,
    /// `N_{d,n} = binom(d+n, n) - n - 1`.
    pub n_dn: u64,
    /// `n * N_{d,n}`, the dimension of the affine moduli space.
    pub affine_moduli_dim: u64,
    /// `(n+1) * N_{d,n}`, the dimension of the projective moduli space.
    pub proj_moduli_dim: u64,
    /// `n * binom(d+n, n)`, the raw coefficient count.
    pub coeff_count: u64,
}

/// Exponent vector of a monomial perturbation direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex {
    pub entries: Vec<u32>,
    pub setting: Setting,
}

impl MultiIndex {
    pub fn affine(entries: Vec<u32>) -> Self {
        MultiIndex {
            entries,
            setting: Setting::Affine,
        }
    }

    pub fn projective(entries: Vec<u32>) -> Self {
        MultiIndex {
            entries,
            setting: Setting::Projective,
        }
    }

    /// Total degree `|I|`.
    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// Ambient dimension `n` (for projective indices the entry count is `n+1`).
    pub fn ambient_dim(&self) -> usize {
        match self.setting {
            Setting::Affine => self.entries.len(),
            Setting::Projective => self.entries.len() - 1,
        }
    }

    /// Entry for the affine coordinate `j` (1-based). Projective indices
    /// expose entry 0 through [`MultiIndex::entry0`].
    pub fn entry(&self, j: usize) -> u32 {
        match self.setting {
            Setting::Affine => self.entries[j - 1],
            Setting::Projective => self.entries[j],
        }
    }

    pub fn entry0(&self) -> u32 {
        debug_assert_eq!(self.setting, Setting::Projective);
        self.entries[0]
    }

    /// The affine part `(i_1,...,i_n)` of a projective index.
    pub fn affine_part(&self) -> MultiIndex {
        match self.setting {
            Setting::Affine => self.clone(),
            Setting::Projective => MultiIndex::affine(self.entries[1..].to_vec()),
        }
    }

    /// Checks membership in the normalized perturbation basis: affine
    /// indices must be nonzero with `|I| <= d` and no entry equal to `d`;
    /// projective indices must have `|I| = d` and no entry equal to `d`.
    pub fn is_admissible(&self, d: u32) -> bool {
        let no_entry_d = self.entries.iter().all(|&e| e != d);
        match self.setting {
            Setting::Affine => self.total() <= d && self.total() > 0 && no_entry_d,
            Setting::Projective => self.total() == d && no_entry_d,
        }
    }
}

fn binom(a: u64, b: u64) -> Result<u64> {
    if b > a {
        return Ok(0);
    }
    let b = b.min(a - b);
    let mut acc: u64 = 1;
    for i in 0..b {
        acc = acc
            .checked_mul(a - i)
            .ok_or_else(|| Error::Overflow(format!("binom({a},{b})")))?
            / (i + 1);
    }
    Ok(acc)
}

/// Computes `N_{d,n}` and the derived moduli dimensions.
pub fn space_dims(d: u32, n: u32) -> Result<SpaceDims> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("degree d={d} must be >= 2")));
    }
    if n < 1 {
        return Err(Error::InvalidArgument(format!(
            "dimension n={n} must be >= 1"
        )));
    }
    let c = binom((d + n) as u64, n as u64)?;
    let n_dn = c - n as u64 - 1;
    Ok(SpaceDims {
        d,
        n,
        n_dn,
        affine_moduli_dim: n as u64 * n_dn,
        proj_moduli_dim: (n as u64 + 1) * n_dn,
        coeff_count: n as u64 * c,
    })
}

/// All exponent vectors of `len` entries with total degree exactly `total`,
/// in descending lexicographic order.
fn compositions(total: u32, len: usize, out: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>) {
    if len == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(total - first, len - 1, out, prefix);
        prefix.pop();
    }
}

/// All multi-indices of the given setting ordered by total degree, then
/// descending lexicographic. This is the fixed column order used everywhere
/// a Jacobian over directions is assembled, so it must never change.
pub fn enumerate_all(d: u32, n: u32, setting: Setting) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    match setting {
        Setting::Affine => {
            for total in 0..=d {
                let mut grade = Vec::new();
                compositions(total, n as usize, &mut grade, &mut Vec::new());
                out.extend(grade.into_iter().map(MultiIndex::affine));
            }
        }
        Setting::Projective => {
            let mut grade = Vec::new();
            compositions(d, n as usize + 1, &mut grade, &mut Vec::new());
            out.extend(grade.into_iter().map(MultiIndex::projective));
        }
    }
    out
}

/// The `N_{d,n}` admissible indices in the fixed deterministic order
/// (ascending total degree, descending lexicographic within a grade).
pub fn enumerate_admissible(d: u32, n: u32, setting: Setting) -> Result<Vec<MultiIndex>> {
    let dims = space_dims(d, n)?;
    let out: Vec<MultiIndex> = enumerate_all(d, n, setting)
        .into_iter()
        .filter(|i| i.is_admissible(d))
        .collect();
    debug_assert_eq!(out.len() as u64, dims.n_dn);
    Ok(out)
}

/// `I_k`: the index `I` with its `k`-th entry (1-based) replaced by zero.
pub fn drop_k(index: &MultiIndex, k: usize) -> Result<MultiIndex> {
    if index.setting != Setting::Affine {
        return Err(Error::InvalidArgument(
            "drop_k is defined for affine multi-indices".into(),
        ));
    }
    if k == 0 || k > index.entries.len() {
        return Err(Error::InvalidArgument(format!(
            "coordinate k={k} out of range 1..={}",
            index.entries.len()
        )));
    }
    let mut entries = index.entries.clone();
    entries[k - 1] = 0;
    Ok(MultiIndex::affine(entries))
}
