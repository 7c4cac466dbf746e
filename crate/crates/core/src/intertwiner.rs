//! The map `f_{n,d}: V_{n,d} → sector (n-1, (d-1)/2)` and its checks.
//!
//! A link `w` is sent to `Σ_s c_s(w) |s⟩` where the sum runs over spin
//! states on the `n - 1` gaps between nodes and `c_s(w)` multiplies the
//! q-numbers `{m}` of the arc depths.

use serde_json::json;

use crate::error::{Error, Result};
use crate::poly_matrix::PolyMatrix;
use crate::qnum::qnum;
use crate::report::VerificationReport;
use crate::scalar::ScalarPoly;
use crate::spin::{h_spin_on, SpinSector, SpinState};
use crate::standard::{binomial, check_nd, Link, StandardModule};

/// `½(1 - Σ_{k=i}^{j-1} s_k)` for 1-based nodes `i < j`; spin `k` sits
/// between nodes `k` and `k+1`.
pub fn arc_depth(s: &SpinState, i: usize, j: usize) -> i64 {
    let downs = (i..j).filter(|&k| s.is_down(k)).count() as i64;
    downs - ((j - i - 1) / 2) as i64
}

/// `c_s(w)`. Errors if some depth is negative while none vanishes, which
/// would contradict the vanishing lemma for these coefficients.
pub fn coefficient(w: &Link, s: &SpinState) -> Result<ScalarPoly> {
    debug_assert_eq!(s.len() + 1, w.n());
    let mut acc = ScalarPoly::constant(1);
    let mut negative = None;
    for (i, j) in w.arcs() {
        let m = arc_depth(s, i, j);
        if m == 0 {
            return Ok(ScalarPoly::default());
        }
        if m < 0 {
            negative.get_or_insert((i, j, m));
            continue;
        }
        acc = &acc * &qnum(m);
    }
    match negative {
        Some((i, j, depth)) => Err(Error::NegativeDepth { i, j, depth }),
        None => Ok(acc),
    }
}

/// `f_{n,d}` with its row and column bases.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub module: StandardModule,
    pub sector: SpinSector,
    pub matrix: PolyMatrix,
}

impl Intertwiner {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        check_nd(n, d)?;
        if n == 0 {
            return Err(Error::InvalidParameters("the intertwiner needs n >= 1".into()));
        }
        let module = StandardModule::new(n, d)?;
        let sector = SpinSector::new(n - 1, d as i64 - 1)?;
        let mut matrix = PolyMatrix::zeros(sector.dim(), module.dim());
        for (c, w) in module.basis().iter().enumerate() {
            for (r, s) in sector.states().iter().enumerate() {
                let v = coefficient(w, s)?;
                matrix.set(r, c, v);
            }
        }
        Ok(Intertwiner { module, sector, matrix })
    }

    /// `S = fᵀ f`.
    pub fn inner_product(&self) -> PolyMatrix {
        &self.matrix.transpose() * &self.matrix
    }
}

pub fn f_matrix(n: usize, d: usize) -> Result<PolyMatrix> {
    Ok(Intertwiner::new(n, d)?.matrix)
}

pub fn inner_product_s(n: usize, d: usize) -> Result<PolyMatrix> {
    Ok(Intertwiner::new(n, d)?.inner_product())
}

fn count_nonzero(m: &PolyMatrix) -> usize {
    (0..m.nrows()).map(|r| m.row(r).iter().filter(|x| !num_traits::Zero::is_zero(*x)).count()).sum()
}

/// `f H_{n,d} = ℍ_{n-1,d} f`, exactly.
pub fn verify_intertwining(n: usize, d: usize) -> Result<VerificationReport> {
    let f = Intertwiner::new(n, d)?;
    let h = f.module.hamiltonian();
    let hs = h_spin_on(&f.sector);
    let diff = &(&f.matrix * &h) - &(&hs * &f.matrix);
    let mut rep = VerificationReport::new("intertwining", &[("n", json!(n)), ("d", json!(d))]);
    rep.checked = diff.nrows() * diff.ncols();
    rep.failures = count_nonzero(&diff);
    rep.passed = rep.failures == 0;
    if !rep.passed {
        rep.detail = Some(format!("{} nonzero entries in f·H - ℍ·f", rep.failures));
    }
    Ok(rep)
}

/// `S H = Hᵀ S`, exactly.
pub fn verify_pseudo_hermitian(n: usize, d: usize) -> Result<VerificationReport> {
    let f = Intertwiner::new(n, d)?;
    let s = f.inner_product();
    let h = f.module.hamiltonian();
    let diff = &(&s * &h) - &(&h.transpose() * &s);
    let mut rep = VerificationReport::new("pseudo_hermitian", &[("n", json!(n)), ("d", json!(d))]);
    rep.checked = diff.nrows() * diff.ncols();
    rep.failures = count_nonzero(&diff);
    rep.passed = rep.failures == 0 && s.is_symmetric();
    if !rep.passed {
        rep.detail = Some(format!("{} nonzero entries in S·H - Hᵀ·S", rep.failures));
    }
    Ok(rep)
}

/// Per-column pivot data proving that `f_{n,d}` has full rank.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct InjectivityCertificate {
    pub n: usize,
    pub d: usize,
    /// `(column, pivot row)`; the pivot state is down exactly at the left
    /// ends of the column's link.
    pub pivots: Vec<(usize, usize)>,
    pub sector_dim: usize,
    pub module_dim: usize,
    pub report: VerificationReport,
}

/// Checks that every column of `f` has entry 1 at its pivot state and
/// nothing below it in the dyadic order, and that the dimension gap equals
/// `C(n-1, (n-d-4)/2)`.
pub fn verify_injectivity(n: usize, d: usize) -> Result<InjectivityCertificate> {
    let f = Intertwiner::new(n, d)?;
    let mut rep = VerificationReport::new("injectivity", &[("n", json!(n)), ("d", json!(d))]);
    let mut pivots = Vec::new();
    for (c, w) in f.module.basis().iter().enumerate() {
        let legs: Vec<usize> = w.left_ends().iter().map(|&i| i + 1).collect();
        let pivot = SpinState::from_down_legs(n - 1, &legs);
        let Some(r) = f.sector.index_of(&pivot) else {
            rep.record(false, || format!("pivot of column {c} lies outside the sector"));
            continue;
        };
        pivots.push((c, r));
        rep.record(*f.matrix.get(r, c) == ScalarPoly::constant(1), || format!("pivot entry of column {c} is not 1"));
        let below = (r + 1..f.sector.dim()).any(|k| !num_traits::Zero::is_zero(f.matrix.get(k, c)));
        rep.record(!below, || format!("column {c} has entries after its pivot"));
    }
    let gap = f.sector.dim() as i128 - f.module.dim() as i128;
    let expect = binomial(n as i64 - 1, (n as i64 - d as i64 - 4).div_euclid(2)) as i128;
    let expect = if n < d + 4 { 0 } else { expect };
    rep.record(gap == expect, || format!("dimension gap {gap}, expected {expect}"));
    Ok(InjectivityCertificate { n, d, pivots, sector_dim: f.sector.dim(), module_dim: f.module.dim(), report: rep })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_six_zero() {
        let f = f_matrix(6, 0).unwrap();
        let c = |x: i64| ScalarPoly::constant(x);
        let q2 = qnum(2);
        let rows: Vec<Vec<ScalarPoly>> = [
            [0, 0, 0, 0, 1],
            [0, 0, 0, 1, 0],
            [0, 0, 1, 0, 1],
            [0, 0, 0, 1, 2],
            [0, 1, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 1],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
            [0, 0, 0, 0, 1],
        ]
        .iter()
        .map(|r| r.iter().map(|&x| if x == 2 { q2.clone() } else { c(x) }).collect())
        .collect();
        assert_eq!(f, PolyMatrix::from_rows(&rows));
    }

    #[test]
    fn s_six_zero() {
        let s = inner_product_s(6, 0).unwrap();
        let c = |x: i64| ScalarPoly::constant(x);
        let mb = ScalarPoly::from_i64s(&[0, -1]);
        let expect = PolyMatrix::from_rows(&[
            vec![c(1), c(0), c(0), c(0), c(0)],
            vec![c(0), c(2), c(0), c(0), c(1)],
            vec![c(0), c(0), c(2), c(0), c(1)],
            vec![c(0), c(0), c(0), c(3), mb.clone()],
            vec![c(0), c(1), c(1), mb, ScalarPoly::from_i64s(&[4, 0, 1])],
        ]);
        assert_eq!(s, expect);
    }

    #[test]
    fn depths() {
        let s: SpinState = "+--+-".parse().unwrap();
        assert_eq!(arc_depth(&s, 1, 2), 0);
        assert_eq!(arc_depth(&s, 2, 3), 1);
        assert_eq!(arc_depth(&s, 1, 6), 3 - 2);
    }

    #[test]
    fn small_cases_hold() {
        for n in 1..=6 {
            for d in (n % 2..=n).step_by(2) {
                assert!(verify_intertwining(n, d).unwrap().passed, "({n},{d})");
                assert!(verify_pseudo_hermitian(n, d).unwrap().passed, "({n},{d})");
                assert!(verify_injectivity(n, d).unwrap().report.passed, "({n},{d})");
            }
        }
    }

    #[test]
    fn extreme_defects() {
        for n in 1..=6 {
            let f = f_matrix(n, n).unwrap();
            assert_eq!((f.nrows(), f.ncols()), (1, 1));
            assert_eq!(f.get(0, 0), &ScalarPoly::constant(1));
        }
    }
}
