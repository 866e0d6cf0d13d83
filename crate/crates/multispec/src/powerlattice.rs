//! Exact arithmetic for periodic points of the power map
//! `F0(z_1,...,z_n) = (z_1^d,...,z_n^d)`.
//!
//! A nonzero periodic coordinate is a root of unity `exp(2*pi*i*a/m)` stored
//! as the residue pair `(a, m)`; the dynamics multiplies `a` by `d` mod `m`.
//! Points constructed for ambient period `p` keep the modulus `d^p - 1`
//! unreduced, and equality, hashing and ordering go through the gcd-reduced
//! canonical form, so cross-period comparisons are exact integer tests.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::{Error, Result};

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `d^p`, rejected when it exceeds the configured cap.
pub fn pow_checked(d: u32, p: u32, caps: &Caps) -> Result<u64> {
    if p > caps.max_period {
        return Err(Error::Overflow(format!(
            "period {p} exceeds cap {}",
            caps.max_period
        )));
    }
    let mut acc: u64 = 1;
    for _ in 0..p {
        acc = acc
            .checked_mul(d as u64)
            .filter(|&v| v <= caps.max_dp)
            .ok_or_else(|| Error::Overflow(format!("d^p = {d}^{p} exceeds cap {}", caps.max_dp)))?;
    }
    Ok(acc)
}

/// One coordinate of a periodic point of the power map: either 0 or the
/// root of unity `exp(2*pi*i*num/modulus)`.
#[derive(Debug, Clone, Copy)]
pub enum RootCoord {
    Zero,
    Angle { num: u64, modulus: u64 },
}

impl RootCoord {
    pub fn angle(num: u64, modulus: u64) -> Self {
        assert!(modulus > 0, "angle modulus must be positive");
        RootCoord::Angle {
            num: num % modulus,
            modulus,
        }
    }

    /// Reduced `(a, m)` with `gcd(a, m) = 1`; `Zero` has no angle.
    pub fn canonical(&self) -> Option<(u64, u64)> {
        match *self {
            RootCoord::Zero => None,
            RootCoord::Angle { num, modulus } => {
                if num == 0 {
                    Some((0, 1))
                } else {
                    let g = gcd(num, modulus);
                    Some((num / g, modulus / g))
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RootCoord::Zero)
    }

    /// One step of the coordinate dynamics `w -> w^d`.
    pub fn step(&self, d: u32) -> RootCoord {
        match *self {
            RootCoord::Zero => RootCoord::Zero,
            RootCoord::Angle { num, modulus } => RootCoord::Angle {
                num: mulmod(num, d as u64, modulus),
                modulus,
            },
        }
    }

    /// Exact period under multiplication of the angle by `d`.
    pub fn period(&self, d: u32) -> Result<u32> {
        match self.canonical() {
            None => Ok(1),
            Some((a, m)) => {
                if m == 1 {
                    return Ok(1);
                }
                let mut x = mulmod(a, d as u64 % m, m);
                for q in 1..=512u32 {
                    if x == a {
                        return Ok(q);
                    }
                    x = mulmod(x, d as u64 % m, m);
                }
                Err(Error::InvalidArgument(format!(
                    "coordinate {self} is not periodic under multiplication by {d}"
                )))
            }
        }
    }

    /// Rescales the angle numerator to a common modulus `m_target`,
    /// which the reduced modulus must divide.
    pub(crate) fn num_at_modulus(&self, m_target: u64) -> Result<u64> {
        match self.canonical() {
            None => Err(Error::ZeroCoordinate("zero coordinate has no angle".into())),
            Some((a, m)) => {
                if !m_target.is_multiple_of(m) {
                    return Err(Error::InvalidArgument(format!(
                        "angle modulus {m} does not divide target modulus {m_target}"
                    )));
                }
                Ok(mulmod(a, m_target / m, m_target))
            }
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self.canonical() {
            None => Complex64::new(0.0, 0.0),
            Some((a, m)) => {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * a as f64 / m as f64)
            }
        }
    }

    fn sort_key(&self) -> (u8, u64, u64) {
        match self.canonical() {
            None => (0, 0, 0),
            // fractions a/m compared as a*m' vs a'*m in PartialOrd below;
            // the key keeps Zero first and is only used for hashing/grouping
            Some((a, m)) => (1, a, m),
        }
    }
}

impl PartialEq for RootCoord {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}
impl Eq for RootCoord {}

impl std::hash::Hash for RootCoord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical().hash(state);
    }
}

impl Ord for RootCoord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.canonical(), other.canonical()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some((a1, m1)), Some((a2, m2))) => {
                // compare a1/m1 with a2/m2 exactly
                (a1 as u128 * m2 as u128).cmp(&(a2 as u128 * m1 as u128))
            }
        }
    }
}
impl PartialOrd for RootCoord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RootCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.canonical() {
            None => write!(f, "zero"),
            Some((a, m)) => write!(f, "{a}/{m}"),
        }
    }
}

impl Serialize for RootCoord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RootCoord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_root_coord(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses `"zero"` or `"a/m"`.
pub fn parse_root_coord(text: &str) -> Result<RootCoord> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("zero") || t == "0z" {
        return Ok(RootCoord::Zero);
    }
    let (a, m) = t
        .split_once('/')
        .ok_or_else(|| Error::InvalidArgument(format!("expected a/m or zero, got {text:?}")))?;
    let a: u64 = a
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad angle numerator in {text:?}")))?;
    let m: u64 = m
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad angle modulus in {text:?}")))?;
    if m == 0 {
        return Err(Error::InvalidArgument(
            "angle modulus must be positive".into(),
        ));
    }
    Ok(RootCoord::angle(a, m))
}

/// A periodic point of the power map of degree `d`, with its exact period
/// and per-coordinate periodic type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RootPoint {
    pub d: u32,
    pub coords: Vec<RootCoord>,
    pub period: u32,
    pub type_vector: Vec<u32>,
}

impl RootPoint {
    pub fn new(d: u32, coords: Vec<RootCoord>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("degree d={d} must be >= 2")));
        }
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "point needs at least one coordinate".into(),
            ));
        }
        let type_vector: Vec<u32> = coords.iter().map(|c| c.period(d)).collect::<Result<_>>()?;
        let period = type_vector.iter().fold(1u64, |acc, &p| lcm(acc, p as u64));
        Ok(RootPoint {
            d,
            coords,
            period: period as u32,
            type_vector,
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn has_zero_coord(&self) -> bool {
        self.coords.iter().any(|c| c.is_zero())
    }

    /// One step of `F0`.
    pub fn step(&self) -> RootPoint {
        let coords = self.coords.iter().map(|c| c.step(self.d)).collect();
        RootPoint {
            d: self.d,
            coords,
            period: self.period,
            type_vector: self.type_vector.clone(),
        }
    }

    /// Full orbit, starting from the lexicographically least residue vector.
    pub fn orbit(&self) -> Vec<RootPoint> {
        let mut orbit = Vec::with_capacity(self.period as usize);
        let mut cur = self.clone();
        for _ in 0..self.period {
            orbit.push(cur.clone());
            cur = cur.step();
        }
        let least = (0..orbit.len())
            .min_by(|&a, &b| orbit[a].coords.cmp(&orbit[b].coords))
            .unwrap_or(0);
        orbit.rotate_left(least);
        orbit
    }

    /// Canonical identifier of the orbit, shared by all points on it.
    pub fn orbit_key(&self) -> Vec<Vec<(u8, u64, u64)>> {
        self.orbit()
            .iter()
            .map(|pt| pt.coords.iter().map(|c| c.sort_key()).collect())
            .collect()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coords.iter().map(|c| c.to_complex()).collect()
    }
}

impl fmt::Display for RootPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All nonzero solutions of `w^{d^p} = w`: the `(d^p - 1)`-th roots of unity.
pub fn fix_set(d: u32, p: u32, caps: &Caps) -> Result<Vec<RootCoord>> {
    if d < 2 || p < 1 {
        return Err(Error::InvalidArgument(format!(
            "fix_set requires d >= 2 and p >= 1, got d={d}, p={p}"
        )));
    }
    let m = pow_checked(d, p, caps)? - 1;
    Ok((0..m).map(|a| RootCoord::angle(a, m)).collect())
}

/// Coordinates of exact period `p` under `w -> w^d`. For `p = 1` this
/// includes `Zero`; for `p > 1` zero is not periodic of period `p`.
pub fn per_set(d: u32, p: u32, caps: &Caps) -> Result<Vec<RootCoord>> {
    if p == 1 {
        let mut out = vec![RootCoord::Zero];
        out.extend(fix_set(d, 1, caps)?);
        return Ok(out);
    }
    let m = pow_checked(d, p, caps)? - 1;
    let mut out = Vec::new();
    for a in 0..m {
        // orbit length of a under multiplication by d divides p
        let mut x = mulmod(a, d as u64 % m, m);
        let mut q = 1u32;
        while x != a {
            x = mulmod(x, d as u64 % m, m);
            q += 1;
        }
        if q == p {
            out.push(RootCoord::angle(a, m));
        }
    }
    Ok(out)
}

/// `|Per_p|` by Moebius inversion of `d^p = sum_{k|p} |Per_k|`; used as an
/// independent oracle against the enumerating [`per_set`].
pub fn per_count_formula(d: u32, p: u32) -> u64 {
    fn moebius(mut n: u32) -> i64 {
        let mut mu = 1i64;
        let mut q = 2;
        while q * q <= n {
            if n.is_multiple_of(q) {
                n /= q;
                if n.is_multiple_of(q) {
                    return 0;
                }
                mu = -mu;
            }
            q += 1;
        }
        if n > 1 {
            mu = -mu;
        }
        mu
    }
    let mut total = 0i64;
    for k in 1..=p {
        if p.is_multiple_of(k) {
            total += moebius(p / k) * (d as i64).pow(k);
        }
    }
    total as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn is_prime_power(p: u32) -> bool {
        let mut q = 2;
        while q * q <= p {
            if p.is_multiple_of(q) {
                let mut r = p;
                while r.is_multiple_of(q) {
                    r /= q;
                }
                return r == 1;
            }
            q += 1;
        }
        true
    }

    #[test]
    fn fix_set_examples() {
        let f = fix_set(2, 2, &caps()).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f[1], RootCoord::angle(1, 3));
        assert_eq!(
            fix_set(2, 1, &caps()).unwrap(),
            vec![RootCoord::angle(0, 1)]
        );
        assert_eq!(fix_set(2, 4, &caps()).unwrap().len(), 15);
    }

    #[test]
    fn per_set_examples() {
        let p = per_set(2, 2, &caps()).unwrap();
        assert_eq!(p, vec![RootCoord::angle(1, 3), RootCoord::angle(2, 3)]);
        assert_eq!(per_set(2, 4, &caps()).unwrap().len(), 12);
        let p1 = per_set(2, 1, &caps()).unwrap();
        assert_eq!(p1, vec![RootCoord::Zero, RootCoord::angle(0, 1)]);
    }

    #[test]
    fn overflow_guard() {
        let mut c = caps();
        c.max_dp = 1 << 20;
        assert!(matches!(fix_set(2, 21, &c), Err(Error::Overflow(_))));
        assert!(pow_checked(2, 20, &c).is_ok());
    }

    #[test]
    fn point_period_examples() {
        let pt = RootPoint::new(2, vec![RootCoord::angle(1, 3), RootCoord::angle(0, 1)]).unwrap();
        assert_eq!(pt.period, 2);
        assert_eq!(pt.type_vector, vec![2, 1]);

        let pt = RootPoint::new(2, vec![RootCoord::angle(0, 1), RootCoord::angle(0, 1)]).unwrap();
        assert_eq!(pt.period, 1);

        let pt = RootPoint::new(2, vec![RootCoord::angle(1, 3), RootCoord::angle(1, 15)]).unwrap();
        assert_eq!(pt.period, 4);
        assert_eq!(pt.type_vector, vec![2, 4]);
    }

    #[test]
    fn orbit_examples() {
        let pt = RootPoint::new(2, vec![RootCoord::angle(1, 3), RootCoord::angle(0, 1)]).unwrap();
        let orbit = pt.orbit();
        assert_eq!(orbit.len(), 2);
        assert_eq!(orbit[0].coords[0], RootCoord::angle(1, 3));
        assert_eq!(orbit[1].coords[0], RootCoord::angle(2, 3));

        let fixed = RootPoint::new(2, vec![RootCoord::angle(0, 1)]).unwrap();
        assert_eq!(fixed.orbit().len(), 1);

        let pt = RootPoint::new(2, vec![RootCoord::angle(1, 15), RootCoord::angle(0, 1)]).unwrap();
        assert_eq!(pt.orbit().len(), 4);
    }

    #[test]
    fn orbit_key_is_rotation_invariant() {
        let pt = RootPoint::new(2, vec![RootCoord::angle(1, 15), RootCoord::angle(1, 3)]).unwrap();
        let key = pt.orbit_key();
        assert_eq!(pt.step().orbit_key(), key);
        assert_eq!(pt.step().step().orbit_key(), key);
    }

    #[test]
    fn to_complex_examples() {
        let one = RootCoord::angle(0, 1).to_complex();
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let minus_one = RootCoord::angle(1, 2).to_complex();
        assert!((minus_one - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let omega = RootCoord::angle(1, 3).to_complex();
        assert!((omega - Complex64::new(-0.5, 0.8660254037844386)).norm() < 1e-15);
        assert_eq!(RootCoord::Zero.to_complex(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn canonical_equality_across_periods() {
        // 2/6 and 1/3 are the same root of unity
        assert_eq!(RootCoord::angle(2, 6), RootCoord::angle(1, 3));
        assert_eq!(RootCoord::angle(0, 15), RootCoord::angle(0, 1));
        assert_ne!(RootCoord::angle(1, 3), RootCoord::angle(1, 15));
    }

    #[test]
    fn partition_identity_and_lower_bound() {
        for d in 2..=4u32 {
            for p in 1..=8u32 {
                let total: u64 = (1..=p)
                    .filter(|k| p % k == 0)
                    .map(|k| per_set(d, k, &caps()).unwrap().len() as u64)
                    .sum();
                assert_eq!(total, (d as u64).pow(p), "partition d={d} p={p}");
                let per_p = per_set(d, p, &caps()).unwrap().len() as u64;
                assert_eq!(per_p, per_count_formula(d, p), "moebius d={d} p={p}");
                if p >= 2 {
                    // the d^p - d^[p/2] bound is exact only when every proper
                    // divisor of p divides [p/2] (prime powers); inclusion-
                    // exclusion over maximal proper divisors is always valid
                    let sub: u64 = (1..=p / 2)
                        .filter(|k| p % k == 0)
                        .map(|k| (d as u64).pow(k))
                        .sum();
                    assert!(
                        per_p >= (d as u64).pow(p).saturating_sub(sub),
                        "lower bound d={d} p={p}"
                    );
                    if is_prime_power(p) {
                        let bound = (d as u64).pow(p) - (d as u64).pow(p / 2);
                        assert!(per_p >= bound, "stated bound d={d} p={p}");
                    } else {
                        // documented exception: at p with two distinct prime
                        // factors (p = 6 here) the stated bound can exceed the
                        // true count, e.g. d = 2: |Per_6| = 54 < 56
                        let bound = (d as u64).pow(p) - (d as u64).pow(p / 2);
                        assert!(
                            p == 6 && per_p + (d as u64).pow(p / 3) >= bound,
                            "unexpected composite-p count d={d} p={p}: {per_p} vs {bound}"
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn period_constant_along_orbit(d in 2u32..=3, p in 1u32..=6, a in 0u64..1000) {
            let m = (d as u64).pow(p) - 1;
            let pt = RootPoint::new(d, vec![RootCoord::angle(a % m, m)]).unwrap();
            let orbit = pt.orbit();
            prop_assert_eq!(orbit.len() as u32, pt.period);
            for q in &orbit {
                prop_assert_eq!(q.period, pt.period);
            }
            // orbit points are pairwise distinct
            for i in 0..orbit.len() {
                for j in (i + 1)..orbit.len() {
                    prop_assert_ne!(&orbit[i].coords, &orbit[j].coords);
                }
            }
        }
    }
}
