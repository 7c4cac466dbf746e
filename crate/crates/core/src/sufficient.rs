//! Three local identities on 4, 5 and 6 spins which, together, imply the
//! `g^p` identity for every link.
//!
//! Each is an operator expression applied to `Ω_k`, the sum of all basis
//! states, and must vanish. Brackets like `{x + (σᶻ_a + σᶻ_b)/2}` are
//! diagonal: on a basis state they evaluate the q-number at the spins'
//! values. They act before the `σ` operators standing to their left.

use serde_json::json;

use crate::error::Result;
use crate::qnum::qnum;
use crate::report::VerificationReport;
use crate::scalar::ScalarPoly;
use crate::spin::{SpinState, SpinVector};

/// `ℍ_(i)`: the terms of `ℍ` touching spin `i`, negated, with factors
/// outside the chain dropped.
pub fn local_h(v: &SpinVector, i: usize) -> SpinVector {
    let len = v.len();
    let q2 = qnum(2);
    v.map(|s| {
        let mut out = Vec::new();
        let n = |k: usize| (k >= 1 && k <= len && s.is_down(k)) as i64;
        for (a, b) in [(i.wrapping_sub(1), i), (i, i + 1)] {
            if a >= 1 && b <= len && s.is_down(a) != s.is_down(b) {
                out.push((s.flipped(a).flipped(b), ScalarPoly::constant(1)));
            }
        }
        let diag = n(i.wrapping_sub(1)) * n(i) + n(i) * n(i + 1) - n(i);
        if diag != 0 {
            out.push((s, &q2 * &ScalarPoly::constant(diag)));
        }
        out
    })
}

/// Multiplies each basis state by `{f(state)}`.
pub fn bracket(v: &SpinVector, f: impl Fn(&SpinState) -> i64) -> SpinVector {
    v.map(|s| vec![(s, qnum(f(&s)))])
}

/// Half the sum of the given spins' `σᶻ` values.
fn half_z(s: &SpinState, legs: &[usize]) -> i64 {
    let t: i64 = legs.iter().map(|&l| s.spin(l)).sum();
    debug_assert!(t % 2 == 0);
    t / 2
}

/// First condition, on 4 spins.
pub fn condition_one(p: i64) -> SpinVector {
    let om = SpinVector::omega(4);
    let x = bracket(&om, |s| p + half_z(s, &[1, 4]));
    let mut acc = x.sigma_minus(2).scale(&qnum(p + 1));
    acc.add_scaled(&x.sigma_minus(1), &-qnum(p));
    let y = bracket(&om, |s| p + 1 + half_z(s, &[1, 4]));
    acc.add_scaled(&local_h(&y, 1), &-qnum(p + 1));
    acc.add_assign(&om.sigma_minus(4).sigma_minus(1));
    acc
}

/// Second condition, on 5 spins.
pub fn condition_two(p: i64, a: i64) -> SpinVector {
    let om = SpinVector::omega(5);
    let x = bracket(&om, |s| a + 1 - half_z(s, &[2, 3]));
    let mut acc = x.sigma_minus(2).sub(&local_h(&x, 1)).scale(&qnum(p + 1));
    acc.add_scaled(&x.sigma_minus(1), &-qnum(p));
    acc.add_assign(&bracket(&om, |s| p - a + half_z(s, &[2, 3])).sigma_minus(1));
    acc
}

/// Third condition, on 6 spins.
pub fn condition_three(a: i64, b: i64) -> SpinVector {
    let om = SpinVector::omega(6);
    let y = bracket(&bracket(&om, |s| b + 1 - half_z(s, &[4, 5])), |s| a + 1 - half_z(s, &[1, 2]));
    let mut acc = y.sigma_minus(2);
    acc.add_assign(&y.sigma_minus(4));
    acc = acc.sub(&local_h(&y, 3));
    acc.add_assign(&bracket(&om, |s| a + b - half_z(s, &[1, 2, 4, 5]) + 2).sigma_minus(3));
    acc
}

/// Checks all three conditions for `0 <= p, a, b <= max`.
pub fn verify_sufficient_conditions(max: i64) -> Result<VerificationReport> {
    verify_sufficient_ranges(max, max, max)
}

/// Checks the first condition for `p <= p_max`, the second for
/// `p <= p_max, a <= a_max` and the third for `a <= a_max, b <= b_max`.
pub fn verify_sufficient_ranges(p_max: i64, a_max: i64, b_max: i64) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(
        "sufficient_conditions",
        &[("p_max", json!(p_max)), ("a_max", json!(a_max)), ("b_max", json!(b_max))],
    );
    for p in 0..=p_max {
        rep.record(condition_one(p).is_zero(), || format!("first condition fails at p = {p}"));
        for a in 0..=a_max {
            rep.record(condition_two(p, a).is_zero(), || format!("second condition fails at p = {p}, a = {a}"));
        }
    }
    for a in 0..=a_max {
        for b in 0..=b_max {
            rep.record(condition_three(a, b).is_zero(), || format!("third condition fails at a = {a}, b = {b}"));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::h_spin_matrix;

    #[test]
    fn local_terms_sum_to_twice_the_hamiltonian_hops() {
        // Summing over i counts every two-site term twice: Σ ℍ_(i) = -2ℍ - β Σ n_i.
        let len = 4;
        let h = h_spin_matrix(len).unwrap();
        for m in 0..16u64 {
            let v = SpinVector::basis(SpinState::new(len, m));
            let mut sum = SpinVector::zero(len);
            for i in 1..=len {
                sum.add_assign(&local_h(&v, i));
            }
            let dense = sum.to_dense();
            let downs = m.count_ones() as i64;
            for r in 0..16 {
                let mut expect = &ScalarPoly::constant(-2) * h.get(r, m as usize);
                if r == m as usize {
                    expect += &ScalarPoly::from_i64s(&[0, -downs]);
                }
                assert_eq!(dense[r], expect, "state {m}, row {r}");
            }
        }
    }

    #[test]
    fn conditions_hold_for_small_parameters() {
        let r = verify_sufficient_conditions(3).unwrap();
        assert!(r.passed, "{:?}", r.detail);
    }
}
