//! Named groups of exact verifications, and the size caps applied before
//! anything is enumerated.

use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::gmap::{verify_gp_identity, verify_gp_recursion};
use crate::intertwiner::{verify_injectivity, verify_intertwining, verify_pseudo_hermitian};
use crate::report::VerificationReport;
use crate::special_links::special_link_formulas_check;
use crate::spectral::loop_indices;
use crate::standard::verify_gram_adjoint;
use crate::sufficient::verify_sufficient_ranges;

/// Largest `n` for exact constructions unless `TEMPLIE_MAX_N` is set.
pub const EXACT_CAP: usize = 12;
/// Largest `n` for verification and spectral sweeps unless
/// `TEMPLIE_MAX_N` is set.
pub const SWEEP_CAP: usize = 10;

fn cap_override() -> Result<Option<usize>> {
    match std::env::var("TEMPLIE_MAX_N") {
        Ok(v) => {
            v.trim().parse().map(Some).map_err(|_| {
                Error::InvalidParameters(format!("TEMPLIE_MAX_N must be a non-negative integer, got {v:?}"))
            })
        }
        Err(_) => Ok(None),
    }
}

/// Fails with [`Error::SizeCap`] when `n` exceeds the applicable cap.
pub fn check_cap(n: usize, sweep: bool) -> Result<()> {
    let cap = cap_override()?.unwrap_or(if sweep { SWEEP_CAP } else { EXACT_CAP });
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// `f H = ℍ f`.
    Intertwine,
    /// Pivot structure of `f` and the dimension gap.
    Inject,
    /// `S H = Hᵀ S`.
    Pseudo,
    /// The `g^p` identity and the recursive construction.
    Gp,
    /// The three local sufficient conditions.
    Suf,
    /// Closed forms of `g^p` on special links.
    Special,
    /// Self-adjointness of the Gram form.
    GramAdjoint,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Intertwine => "intertwine",
            Suite::Inject => "inject",
            Suite::Pseudo => "pseudo",
            Suite::Gp => "gp",
            Suite::Suf => "suf",
            Suite::Special => "special",
            Suite::GramAdjoint => "gram-adjoint",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let all = [
            Suite::Intertwine,
            Suite::Inject,
            Suite::Pseudo,
            Suite::Gp,
            Suite::Suf,
            Suite::Special,
            Suite::GramAdjoint,
            Suite::All,
        ];
        match all.into_iter().find(|x| x.name() == s.trim()) {
            Some(x) => Ok(x),
            None => invalid(format!("unknown suite {s:?}")),
        }
    }
}

/// Ranges for [`run_suite`]; unset fields take per-suite defaults.
#[derive(Clone, Debug, Default)]
pub struct SuiteParams {
    pub n_max: Option<usize>,
    /// Restrict the `(n, d)` sweeps to one module.
    pub single: Option<(usize, usize)>,
    pub p_max: Option<i64>,
    pub a_max: Option<i64>,
    pub b_max: Option<i64>,
    pub max_sub: Option<usize>,
}

fn run_cases(
    cases: Vec<(usize, usize)>,
    f: impl Fn(usize, usize) -> Result<VerificationReport> + Sync,
) -> Result<Vec<VerificationReport>> {
    cases.into_par_iter().map(|(n, d)| f(n, d)).collect()
}

/// Runs a suite, in parallel where cases are independent. Reports come
/// back in case order.
pub fn run_suite(suite: Suite, a: &SuiteParams) -> Result<Vec<VerificationReport>> {
    let single = a.single;
    if let Some((n, _)) = single {
        check_cap(n, false)?;
    }
    let cases = |default_max: usize| -> Result<Vec<(usize, usize)>> {
        match single {
            Some(nd) => Ok(vec![nd]),
            None => {
                let n_max = a.n_max.unwrap_or(default_max);
                check_cap(n_max, true)?;
                Ok(loop_indices(1, n_max))
            }
        }
    };
    Ok(match suite {
        Suite::Intertwine => run_cases(cases(9)?, verify_intertwining)?,
        Suite::Pseudo => run_cases(cases(9)?, verify_pseudo_hermitian)?,
        Suite::Inject => run_cases(cases(10)?, |n, d| Ok(verify_injectivity(n, d)?.report))?,
        Suite::GramAdjoint => run_cases(cases(8)?, verify_gram_adjoint)?,
        Suite::Gp => {
            let ns: Vec<usize> = match single {
                Some((n, _)) => vec![n],
                None => {
                    let n_max = a.n_max.unwrap_or(8);
                    check_cap(n_max, true)?;
                    (2..=n_max).step_by(2).collect()
                }
            };
            let jobs: Vec<(usize, Option<i64>)> = ns
                .iter()
                .flat_map(|&n| (0..=n as i64 / 2).map(move |p| (n, Some(p))).chain(std::iter::once((n, None))))
                .collect();
            jobs.into_par_iter()
                .map(|(n, p)| match p {
                    Some(p) => verify_gp_identity(n, p),
                    None => verify_gp_recursion(n),
                })
                .collect::<Result<_>>()?
        }
        Suite::Suf => {
            let m = |x: Option<i64>| x.unwrap_or(6);
            vec![verify_sufficient_ranges(m(a.p_max), m(a.a_max), m(a.b_max))?]
        }
        Suite::Special => {
            let n_max = a.n_max.unwrap_or(10);
            check_cap(n_max, true)?;
            vec![special_link_formulas_check(a.max_sub.unwrap_or(4), n_max)?]
        }
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::Intertwine,
                Suite::Inject,
                Suite::Pseudo,
                Suite::Gp,
                Suite::Suf,
                Suite::Special,
                Suite::GramAdjoint,
            ] {
                all.extend(run_suite(s, a)?);
            }
            all
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in ["intertwine", "gram-adjoint", "all"] {
            assert_eq!(s.parse::<Suite>().unwrap().name(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let p = SuiteParams { n_max: Some(4), p_max: Some(2), a_max: Some(2), b_max: Some(2), ..Default::default() };
        let r = run_suite(Suite::All, &p).unwrap();
        assert!(r.iter().all(|x| x.passed));
        assert!(r.len() > 10);
    }
}
