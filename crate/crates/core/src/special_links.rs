//! Closed forms of `g^p` on six families of links built from smaller ones.
//!
//! Writing `∩v` for an arc over `v` and `u·v` for links side by side, the
//! families are
//!
//! 1. `∩∩v`
//! 2. `∪·v·∪` (a lone arc at each end)
//! 3. `∩(∩v₁·v₂)`
//! 4. `∪·v₁·∩v₂`
//! 5. `∩v₁·∩v₂·v₃`
//! 6. `∩(v₁·∪·v₂)·v₃`
//!
//! Each closed form is a sum over the free spins next to the sublinks of
//! q-number weights times tensor products of `g^a` of the sublinks. The
//! sums over `a, b` run over every index at which the sublink's `g^a` can
//! be nonzero.

use serde::Serialize;
use serde_json::json;

use crate::error::{invalid, Result};
use crate::gmap::{g_direct, spin1};
use crate::qnum::qnum;
use crate::report::VerificationReport;
use crate::scalar::ScalarPoly;
use crate::spin::SpinVector;
use crate::standard::Link;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    DoubleArc,
    CupCup,
    ArcOverArcThen,
    CupThenArc,
    TwoArcsThen,
    ArcOverCupThen,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::DoubleArc,
        Family::CupCup,
        Family::ArcOverArcThen,
        Family::CupThenArc,
        Family::TwoArcsThen,
        Family::ArcOverCupThen,
    ];

    pub fn sublinks(self) -> usize {
        match self {
            Family::DoubleArc | Family::CupCup => 1,
            Family::ArcOverArcThen | Family::CupThenArc => 2,
            Family::TwoArcsThen | Family::ArcOverCupThen => 3,
        }
    }

    /// The link of this family built from the given sublinks.
    pub fn build(self, v: &[Link]) -> Result<Link> {
        if v.len() != self.sublinks() || v.iter().any(|x| x.n() == 0 || x.defect_count() > 0) {
            return invalid("wrong sublinks for this family");
        }
        let cup = Link::cup();
        Ok(match self {
            Family::DoubleArc => v[0].nest()?.nest()?,
            Family::CupCup => cup.concat(&v[0]).concat(&cup),
            Family::ArcOverArcThen => v[0].nest()?.concat(&v[1]).nest()?,
            Family::CupThenArc => cup.concat(&v[0]).concat(&v[1].nest()?),
            Family::TwoArcsThen => v[0].nest()?.concat(&v[1].nest()?).concat(&v[2]),
            Family::ArcOverCupThen => v[0].concat(&cup).concat(&v[1]).nest()?.concat(&v[2]),
        })
    }
}

const SPINS: [i64; 2] = [1, -1];

/// Calls `f` on every assignment of `k` spins.
fn for_spins(k: usize, f: &mut dyn FnMut(&[i64])) {
    let mut cur = vec![1i64; k];
    for bits in 0..(1u32 << k) {
        for (i, c) in cur.iter_mut().enumerate() {
            *c = SPINS[((bits >> i) & 1) as usize];
        }
        f(&cur);
    }
}

/// Factors of a tensor product, left to right.
struct Pieces {
    parts: Vec<SpinVector>,
}

impl Pieces {
    fn new() -> Self {
        Pieces { parts: Vec::new() }
    }
    fn spin(mut self, z: i64) -> Self {
        self.parts.push(spin1(z));
        self
    }
    fn g(mut self, v: &Link, a: i64) -> Result<Self> {
        self.parts.push(g_direct(v, a)?);
        Ok(self)
    }
    fn product(&self) -> Option<SpinVector> {
        if self.parts.iter().any(SpinVector::is_zero) {
            return None;
        }
        let mut it = self.parts.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, x| acc.tensor(x)))
    }
}

fn top(v: &Link) -> i64 {
    (v.n() as i64 - 2) / 2
}

/// Right-hand side of the closed form for `g^p` on `family.build(v)`.
pub fn closed_form(family: Family, p: i64, v: &[Link]) -> Result<SpinVector> {
    let w = family.build(v)?;
    let len = w.n() - 1;
    let mut acc = SpinVector::zero(len);
    let mut err = None;
    let mut add = |acc: &mut SpinVector, coeff: ScalarPoly, pieces: Result<Pieces>| match pieces {
        Ok(pc) => {
            if let Some(t) = pc.product() {
                acc.add_scaled(&t, &coeff);
            }
        }
        Err(e) => err = Some(e),
    };
    match family {
        Family::DoubleArc => for_spins(4, &mut |z| {
            let (r, s, t, u) = (z[0], z[1], z[2], z[3]);
            let lam = p + (r + s + t + u) / 2;
            let c = &qnum(p + 1) * &qnum(p + 1 + (r + u) / 2);
            add(&mut acc, c, Pieces::new().spin(r).spin(s).g(&v[0], lam).map(|x| x.spin(t).spin(u)));
        }),
        Family::CupCup => for_spins(4, &mut |z| {
            let (r, s, t, u) = (z[0], z[1], z[2], z[3]);
            let lam = p + (r + s + t + u) / 2;
            add(
                &mut acc,
                ScalarPoly::constant(1),
                Pieces::new().spin(r).spin(s).g(&v[0], lam - 2).map(|x| x.spin(t).spin(u)),
            );
        }),
        Family::ArcOverArcThen => for_spins(5, &mut |z| {
            let (l, r, s, t, u) = (z[0], z[1], z[2], z[3], z[4]);
            let lam = p + (l + r + s + t + u - 1) / 2;
            for a in 0..=top(&v[0]) {
                let c = &qnum(p + 1) * &qnum(a + 1 - (r + s) / 2);
                let pc = Pieces::new()
                    .spin(l)
                    .spin(r)
                    .g(&v[0], a)
                    .and_then(|x| x.spin(s).spin(t).g(&v[1], lam - a))
                    .map(|x| x.spin(u));
                add(&mut acc, c, pc);
            }
        }),
        Family::CupThenArc => for_spins(5, &mut |z| {
            let (l, r, s, t, u) = (z[0], z[1], z[2], z[3], z[4]);
            let lam = p + (l + r + s + t + u - 1) / 2;
            for a in 0..=top(&v[0]) {
                let c = qnum(p - a + (r + s) / 2);
                let pc = Pieces::new()
                    .spin(l)
                    .spin(r)
                    .g(&v[0], a)
                    .and_then(|x| x.spin(s).spin(t).g(&v[1], lam - a - 1))
                    .map(|x| x.spin(u));
                add(&mut acc, c, pc);
            }
        }),
        Family::TwoArcsThen | Family::ArcOverCupThen => for_spins(6, &mut |z| {
            let (k, l, r, s, t, u) = (z[0], z[1], z[2], z[3], z[4], z[5]);
            let lam = p + (k + l + r + s + t + u - 2) / 2;
            for a in 0..=top(&v[0]) {
                for b in 0..=top(&v[1]) {
                    let (c, last) = if family == Family::TwoArcsThen {
                        (&qnum(a - (k + l - 2) / 2) * &qnum(b - (s + t - 2) / 2), lam - a - b)
                    } else {
                        (qnum(a + b - (k + l + s + t - 4) / 2), lam - a - b - 1)
                    };
                    let pc = Pieces::new()
                        .spin(k)
                        .g(&v[0], a)
                        .and_then(|x| x.spin(l).spin(r).spin(s).g(&v[1], b))
                        .and_then(|x| x.spin(t).spin(u).g(&v[2], last));
                    add(&mut acc, c, pc);
                }
            }
        }),
    }
    if let Some(e) = err {
        return Err(e);
    }
    Ok(match family {
        Family::CupCup => acc.sigma_minus(1).sigma_minus(len),
        Family::CupThenArc => acc.sigma_minus(1),
        Family::ArcOverCupThen => acc.sigma_minus(v[0].n() + 2),
        _ => acc,
    })
}

/// Compares every closed form with the direct `g^p` on links assembled
/// from all defect-free sublinks of at most `max_sub` nodes, keeping the
/// total size at most `max_n`.
pub fn special_link_formulas_check(max_sub: usize, max_n: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("special_links", &[("max_sub", json!(max_sub)), ("max_n", json!(max_n))]);
    let mut pool = Vec::new();
    for m in (2..=max_sub).step_by(2) {
        pool.extend(Link::enumerate(m, 0)?);
    }
    for family in Family::ALL {
        let k = family.sublinks();
        let mut idx = vec![0usize; k];
        loop {
            let subs: Vec<Link> = idx.iter().map(|&i| pool[i].clone()).collect();
            let w = family.build(&subs)?;
            if w.n() <= max_n {
                for p in 0..=(w.n() as i64 - 2) / 2 {
                    let ok = closed_form(family, p, &subs)? == g_direct(&w, p)?;
                    rep.record(ok, || format!("{family:?} at p = {p} on {w}"));
                }
            }
            // Odometer over sublink choices.
            let mut pos = 0;
            while pos < k {
                idx[pos] += 1;
                if idx[pos] < pool.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
    }
    Ok(rep)
}
