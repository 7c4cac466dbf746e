//! The maps `g^p` on links without defects.
//!
//! `g^p(w)` is read off `f_{n+2p,0}` applied to `w` under `p` extra nested
//! arcs, keeping the states whose `p` outermost spins on each side are up,
//! and dividing by `{p}!`. It lives on `n - 1` spins at magnetisation
//! `-p - 1/2` and vanishes unless `0 <= p <= (n-2)/2`.
//!
//! [`g_recursive`] computes the same vectors from the single arc upward by
//! splitting a link either as an arc over a smaller link or as two links
//! side by side.

use std::collections::HashMap;

use serde_json::json;

use crate::error::{invalid, Result};
use crate::intertwiner::coefficient;
use crate::qnum::{qfactorial, qnum};
use crate::report::VerificationReport;
use crate::spin::{enumerate_sector, SpinState, SpinVector};
use crate::standard::{Link, StandardModule};

fn check_link(w: &Link) -> Result<()> {
    if w.defect_count() != 0 || w.n() < 2 {
        return invalid(format!("g^p needs a nonempty link without defects, got {w}"));
    }
    Ok(())
}

fn in_range(w: &Link, p: i64) -> bool {
    p >= 0 && p <= (w.n() as i64 - 2) / 2
}

/// `g^p(w)` from the intertwiner on `n + 2p` nodes.
pub fn g_direct(w: &Link, p: i64) -> Result<SpinVector> {
    check_link(w)?;
    let n = w.n();
    let mut out = SpinVector::zero(n - 1);
    if !in_range(w, p) {
        return Ok(out);
    }
    let pu = p as usize;
    let mut hat = w.clone();
    for _ in 0..pu {
        hat = hat.nest()?;
    }
    let pad = SpinState::all_up(pu);
    let downs = n / 2 + pu;
    let middle = enumerate_sector(n - 1, (n as i64 - 1) - 2 * downs as i64)?;
    let fact = qfactorial(pu);
    for s in middle {
        let full = pad.concat(&s).concat(&pad);
        let c = coefficient(&hat, &full)?;
        if !num_traits::Zero::is_zero(&c) {
            out.add_term(s, &c.div_exact(&fact)?);
        }
    }
    Ok(out)
}

/// A single spin as a vector: `+1` up, `-1` down.
pub(crate) fn spin1(z: i64) -> SpinVector {
    SpinVector::basis(SpinState::new(1, (z < 0) as u64))
}

/// Memoised recursive evaluation of `g^p`.
#[derive(Default)]
pub struct GRecursion {
    memo: HashMap<(Link, i64), SpinVector>,
}

impl GRecursion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, w: &Link, p: i64) -> Result<SpinVector> {
        check_link(w)?;
        if !in_range(w, p) {
            return Ok(SpinVector::zero(w.n() - 1));
        }
        if let Some(v) = self.memo.get(&(w.clone(), p)) {
            return Ok(v.clone());
        }
        let n = w.n();
        let v = if n == 2 {
            spin1(-1)
        } else if w.partner(0) == Some(n - 1) {
            // An arc over w1.
            let w1 = w.sublink(1, n - 1).expect("inner part is closed");
            let mut acc = SpinVector::zero(n - 1);
            for l in [1i64, -1] {
                for r in [1i64, -1] {
                    let inner = self.get(&w1, p + (l + r) / 2)?;
                    if inner.is_zero() {
                        continue;
                    }
                    acc.add_assign(&spin1(l).tensor(&inner).tensor(&spin1(r)));
                }
            }
            acc.scale(&qnum(p + 1))
        } else {
            // w1 w2 side by side, split after the first outer arc.
            let k = w.partner(0).expect("no defects") + 1;
            let w1 = w.sublink(0, k).expect("closed");
            let w2 = w.sublink(k, n).expect("closed");
            let mut acc = SpinVector::zero(n - 1);
            for a in 0..=p {
                let left = self.get(&w1, a)?;
                if left.is_zero() {
                    continue;
                }
                for s in [1i64, -1] {
                    let right = self.get(&w2, p - a + (s - 1) / 2)?;
                    if right.is_zero() {
                        continue;
                    }
                    acc.add_assign(&left.tensor(&spin1(s)).tensor(&right));
                }
            }
            acc
        };
        self.memo.insert((w.clone(), p), v.clone());
        Ok(v)
    }
}

pub fn g_recursive(w: &Link, p: i64) -> Result<SpinVector> {
    GRecursion::new().get(w, p)
}

/// `g^p` on every link of `B_{n,0}`.
#[derive(Clone, Debug)]
pub struct GpImage {
    pub n: usize,
    pub p: i64,
    pub columns: Vec<(Link, SpinVector)>,
}

pub fn g_image(n: usize, p: i64) -> Result<GpImage> {
    let m = StandardModule::new(n, 0)?;
    let columns = m.basis().iter().map(|w| Ok((w.clone(), g_direct(w, p)?))).collect::<Result<_>>()?;
    Ok(GpImage { n, p, columns })
}

/// Checks `ℍ g^p(w) - g^p(h w) = (σ⁻_1 + σ⁻_{n-1}) g^{p-1}(w)` on `B_{n,0}`.
pub fn verify_gp_identity(n: usize, p: i64) -> Result<VerificationReport> {
    if n < 2 || !n.is_multiple_of(2) {
        return invalid("the g^p identity needs even n >= 2");
    }
    let m = StandardModule::new(n, 0)?;
    let h = m.hamiltonian();
    let gp: Vec<SpinVector> = m.basis().iter().map(|w| g_direct(w, p)).collect::<Result<_>>()?;
    let mut rep = VerificationReport::new("gp_identity", &[("n", json!(n)), ("p", json!(p))]);
    for (j, w) in m.basis().iter().enumerate() {
        let mut lhs = gp[j].apply_h_spin();
        for (k, g) in gp.iter().enumerate() {
            let c = h.get(k, j);
            lhs.add_scaled(g, &-c);
        }
        let prev = g_direct(w, p - 1)?;
        let mut rhs = prev.sigma_minus(1);
        rhs.add_assign(&prev.sigma_minus(n - 1));
        rep.record(lhs == rhs, || format!("identity fails for w = {w}"));
    }
    Ok(rep)
}

/// Checks that the direct and recursive constructions agree on `B_{n,0}`
/// for every `p`.
pub fn verify_gp_recursion(n: usize) -> Result<VerificationReport> {
    let m = StandardModule::new(n, 0)?;
    let mut rec = GRecursion::new();
    let mut rep = VerificationReport::new("gp_recursion", &[("n", json!(n))]);
    for w in m.basis() {
        for p in -1..=(n as i64) / 2 {
            let ok = g_direct(w, p)? == rec.get(w, p)?;
            rep.record(ok, || format!("direct and recursive g^{p} differ on {w}"));
        }
    }
    Ok(rep)
}
