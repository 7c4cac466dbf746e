//! Orbits, critical integers and the decomposition of magnetisation
//! sectors into standard and projective modules when `q` is a root of
//! unity.
//!
//! With `ℓ` the smallest positive integer such that `q^{2ℓ} = 1`, the
//! critical lines sit at `d ≡ ℓ-1 (mod ℓ)`. Reflection through them
//! preserves `d + 1` up to sign modulo `2ℓ`, which is how orbits are keyed.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::exact::gram_rank;
use crate::standard::{binomial, module_dim};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ell {
    Generic,
    RootOfUnity(u32),
}

impl fmt::Display for Ell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ell::Generic => write!(f, "generic"),
            Ell::RootOfUnity(l) => write!(f, "{l}"),
        }
    }
}

impl FromStr for Ell {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("generic") {
            return Ok(Ell::Generic);
        }
        match s.parse::<u32>() {
            Ok(l) if l >= 1 => Ok(Ell::RootOfUnity(l)),
            _ => invalid(format!("ell must be a positive integer or \"generic\", got {s:?}")),
        }
    }
}

impl Serialize for Ell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ell::Generic => s.serialize_str("generic"),
            Ell::RootOfUnity(l) => s.serialize_u32(*l),
        }
    }
}

/// Whether `TL_n` is semisimple at this `ℓ`.
pub fn is_semisimple(n: usize, ell: Ell) -> bool {
    match ell {
        Ell::Generic => true,
        Ell::RootOfUnity(1) => true,
        Ell::RootOfUnity(2) => n % 2 == 1,
        Ell::RootOfUnity(l) => n < l as usize,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    pub n: usize,
    pub ell: Ell,
    pub critical: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
}

fn orbit_key(d: usize, l: usize) -> usize {
    let m = 2 * l;
    let r = (d + 1) % m;
    r.min((m - r) % m)
}

/// Splits `{d ≤ n, d ≡ n mod 2}` into critical integers and orbits. For
/// generic `q` every `d` is its own orbit.
pub fn orbit_partition(n: usize, ell: Ell) -> OrbitPartition {
    let ds: Vec<usize> = (n % 2..=n).step_by(2).collect();
    let Ell::RootOfUnity(l) = ell else {
        return OrbitPartition { n, ell, critical: vec![], orbits: ds.iter().map(|&d| vec![d]).collect() };
    };
    let l = l as usize;
    let critical: Vec<usize> = ds.iter().copied().filter(|d| (d + 1) % l == 0).collect();
    let mut orbits: Vec<(usize, Vec<usize>)> = Vec::new();
    for &d in ds.iter().filter(|d| (*d + 1) % l != 0) {
        let k = orbit_key(d, l);
        match orbits.iter_mut().find(|(key, _)| *key == k) {
            Some((_, o)) => o.push(d),
            None => orbits.push((k, vec![d])),
        }
    }
    OrbitPartition { n, ell, critical, orbits: orbits.into_iter().map(|(_, o)| o).collect() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SummandKind {
    Irreducible,
    Standard,
    Projective,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub kind: SummandKind,
    pub d: usize,
    /// Left partner `d₋` for a projective summand.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_minus: Option<usize>,
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            SummandKind::Irreducible => 'I',
            SummandKind::Standard => 'V',
            SummandKind::Projective => 'P',
        };
        write!(f, "{c}{}", self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub n: usize,
    pub twice_s: i64,
    pub ell: Ell,
    /// True when a root of unity falls in a semisimple case and the
    /// generic rule was used.
    pub semisimple: bool,
    pub summands: Vec<Summand>,
    /// Set at `ℓ = 2` with `n` even, where `V_{n,0}` and `I_{n,2}` are
    /// isomorphic and the listing does not distinguish them.
    pub beta_zero_identification: bool,
}

impl Decomposition {
    pub fn listing(&self) -> String {
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        parts.join(" + ")
    }
}

fn check_sector(n: usize, twice_s: i64) -> Result<usize> {
    let a = twice_s.unsigned_abs() as usize;
    if a > n || !(n - a).is_multiple_of(2) {
        return invalid(format!("no sector 2s = {twice_s} for n = {n}"));
    }
    Ok(a)
}

/// Decomposes the sector `S^z = s` of `(C²)^{⊗n}` as a `TL_n` module.
/// Negative `s` behaves like `-s`.
pub fn sector_decomposition(n: usize, twice_s: i64, ell: Ell) -> Result<Decomposition> {
    let lo = check_sector(n, twice_s)?;
    let semisimple = is_semisimple(n, ell);
    let summands = if semisimple {
        (lo..=n).step_by(2).map(|d| Summand { kind: SummandKind::Irreducible, d, d_minus: None }).collect()
    } else {
        let part = orbit_partition(n, ell);
        let mut out: Vec<Summand> = part
            .critical
            .iter()
            .filter(|&&d| d >= lo)
            .map(|&d| Summand { kind: SummandKind::Standard, d, d_minus: None })
            .collect();
        for orbit in &part.orbits {
            let kept: Vec<usize> = orbit.iter().copied().filter(|&d| d >= lo).collect();
            for pair in kept.chunks(2) {
                match *pair {
                    [a, b] => out.push(Summand { kind: SummandKind::Projective, d: b, d_minus: Some(a) }),
                    [a] => out.push(Summand { kind: SummandKind::Standard, d: a, d_minus: None }),
                    _ => unreachable!(),
                }
            }
        }
        out.sort_by_key(|s| s.d);
        out
    };
    Ok(Decomposition {
        n,
        twice_s,
        ell,
        semisimple,
        summands,
        beta_zero_identification: ell == Ell::RootOfUnity(2) && n.is_multiple_of(2),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub twice_s: i64,
    pub ell: Ell,
    pub sector_dim: u128,
    pub total: u128,
    pub passed: bool,
}

/// A value of β that is not of the form `2cos(π k/m)`.
pub fn generic_beta() -> BigRational {
    BigRational::new(BigInt::from(7), BigInt::from(3))
}

/// Compares the summed dimensions of a decomposition with `C(n, n/2 - s)`.
/// Irreducible dimensions come from the Gram rank at a generic β.
pub fn dimension_audit(dec: &Decomposition) -> Result<AuditReport> {
    let n = dec.n;
    let a = dec.twice_s.unsigned_abs() as i64;
    let sector_dim = binomial(n as i64, (n as i64 - a) / 2);
    let mut total: u128 = 0;
    for s in &dec.summands {
        total += match s.kind {
            SummandKind::Irreducible => gram_rank(n, s.d, &generic_beta())? as u128,
            SummandKind::Standard => module_dim(n, s.d) as u128,
            SummandKind::Projective => {
                let dm =
                    s.d_minus.ok_or_else(|| Error::InvalidParameters("projective summand without partner".into()))?;
                (module_dim(n, dm) + module_dim(n, s.d)) as u128
            }
        };
    }
    Ok(AuditReport { n, twice_s: dec.twice_s, ell: dec.ell, sector_dim, total, passed: total == sector_dim })
}
