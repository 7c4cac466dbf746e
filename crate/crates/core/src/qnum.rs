//! Sign-twisted q-numbers `{m}` and their factorials.
//!
//! `{0} = 0`, `{1} = 1`, `{m+1} = -β{m} - {m-1}`, extended to negative
//! arguments by `{-m} = -{m}`, which is what the same recursion gives when
//! run backwards.

use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::scalar::ScalarPoly;

/// Caches `{m}` for `m >= 0`.
#[derive(Clone, Debug)]
pub struct QNumTable {
    values: Vec<ScalarPoly>,
}

impl Default for QNumTable {
    fn default() -> Self {
        QNumTable { values: vec![ScalarPoly::zero(), ScalarPoly::one()] }
    }
}

impl QNumTable {
    pub fn new() -> Self {
        Self::default()
    }

    fn extend_to(&mut self, m: usize) {
        let minus_beta = -ScalarPoly::beta();
        while self.values.len() <= m {
            let k = self.values.len();
            let next = &(&minus_beta * &self.values[k - 1]) - &self.values[k - 2];
            self.values.push(next);
        }
    }

    pub fn get(&mut self, m: i64) -> ScalarPoly {
        let a = m.unsigned_abs() as usize;
        self.extend_to(a);
        if m < 0 {
            -&self.values[a]
        } else {
            self.values[a].clone()
        }
    }

    /// `{p}! = {1}{2}...{p}`; `{0}! = 1`.
    pub fn factorial(&mut self, p: usize) -> ScalarPoly {
        let mut acc = ScalarPoly::one();
        for k in 1..=p {
            acc = &acc * &self.get(k as i64);
        }
        acc
    }
}

fn shared() -> &'static Mutex<QNumTable> {
    static TABLE: OnceLock<Mutex<QNumTable>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(QNumTable::new()))
}

/// `{m}` as a polynomial in β.
pub fn qnum(m: i64) -> ScalarPoly {
    shared().lock().expect("q-number cache poisoned").get(m)
}

/// `{p}!`.
pub fn qfactorial(p: usize) -> ScalarPoly {
    shared().lock().expect("q-number cache poisoned").factorial(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn first_values() {
        assert!(qnum(0).is_zero());
        assert_eq!(qnum(1), ScalarPoly::one());
        assert_eq!(qnum(2), ScalarPoly::from_i64s(&[0, -1]));
        assert_eq!(qnum(3), ScalarPoly::from_i64s(&[-1, 0, 1]));
        assert_eq!(qnum(-1), ScalarPoly::constant(-1));
        assert_eq!(qnum(-3), -qnum(3));
        assert_eq!(qfactorial(0), ScalarPoly::one());
        assert_eq!(qfactorial(3), &qnum(2) * &qnum(3));
    }

    #[test]
    fn closed_form_in_q() {
        // {m} = (-1)^{m-1} (q^m - q^{-m}) / (q - q^{-1})
        for &q in &[Complex64::new(0.3, 0.9), Complex64::new(1.7, 0.0), Complex64::from_polar(1.0, 0.7)] {
            let beta = q + q.inv();
            for m in -8i64..=8 {
                let sign = if (m - 1).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let expect = sign * (q.powi(m as i32) - q.powi(-m as i32)) / (q - q.inv());
                let got = qnum(m).eval_complex(beta);
                assert!((got - expect).norm() < 1e-9 * (1.0 + expect.norm()), "m = {m}");
            }
        }
    }
}
