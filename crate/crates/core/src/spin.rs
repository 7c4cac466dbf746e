//! Spin-1/2 chains: basis states, magnetisation sectors and the two
//! Hamiltonians.
//!
//! Leg 1 is the leftmost tensor factor and the most significant bit of a
//! state's mask; a set bit is a down spin. Ordering by mask is therefore
//! ordering by the dyadic number `Σ 2^{-i}` over down legs `i`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::poly_matrix::PolyMatrix;
use crate::scalar::{QValue, ScalarPoly};
use crate::standard::reduce_dyadic;

pub const MAX_SPINS: usize = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinState {
    len: usize,
    mask: u64,
}

impl SpinState {
    pub fn new(len: usize, mask: u64) -> Self {
        debug_assert!(len <= MAX_SPINS && (len == 64 || mask >> len == 0));
        SpinState { len, mask }
    }

    pub fn all_up(len: usize) -> Self {
        SpinState { len, mask: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    fn bit(&self, leg: usize) -> u64 {
        1u64 << (self.len - leg)
    }

    /// `+1` for up, `-1` for down; `leg` is 1-based.
    pub fn spin(&self, leg: usize) -> i64 {
        if self.mask & self.bit(leg) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_down(&self, leg: usize) -> bool {
        self.mask & self.bit(leg) != 0
    }

    pub fn flipped(&self, leg: usize) -> Self {
        SpinState { len: self.len, mask: self.mask ^ self.bit(leg) }
    }

    pub fn down_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Twice the magnetisation.
    pub fn twice_s(&self) -> i64 {
        self.len as i64 - 2 * self.down_count() as i64
    }

    /// 1-based down legs.
    pub fn down_legs(&self) -> Vec<usize> {
        (1..=self.len).filter(|&i| self.is_down(i)).collect()
    }

    pub fn from_down_legs(len: usize, legs: &[usize]) -> Self {
        let mut s = Self::all_up(len);
        for &l in legs {
            s.mask |= s.bit(l);
        }
        s
    }

    /// `Σ 2^{-i}` over down legs, as a reduced fraction.
    pub fn dyadic(&self) -> (u64, u64) {
        reduce_dyadic(self.mask, self.len)
    }

    /// `|self, other⟩`.
    pub fn concat(&self, other: &SpinState) -> SpinState {
        SpinState { len: self.len + other.len, mask: (self.mask << other.len) | other.mask }
    }
}

impl fmt::Display for SpinState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for leg in 1..=self.len {
            f.write_str(if self.is_down(leg) { "-" } else { "+" })?;
        }
        Ok(())
    }
}

impl FromStr for SpinState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut st = SpinState::all_up(0);
        for ch in s.trim().chars() {
            let down = match ch {
                '+' | 'u' | 'U' => false,
                '-' | '−' | 'd' | 'D' => true,
                _ => return invalid(format!("bad spin character {ch:?}")),
            };
            st.len += 1;
            st.mask = (st.mask << 1) | down as u64;
        }
        if st.len > MAX_SPINS {
            return invalid("too many spins");
        }
        Ok(st)
    }
}

/// Number of down spins in the sector `(len, s)`.
pub fn sector_downs(len: usize, twice_s: i64) -> Result<usize> {
    let l = len as i64;
    if twice_s.abs() > l || (l - twice_s) % 2 != 0 {
        return invalid(format!("no sector with {len} spins and 2s = {twice_s}"));
    }
    Ok(((l - twice_s) / 2) as usize)
}

/// States of the sector in increasing dyadic order.
pub fn enumerate_sector(len: usize, twice_s: i64) -> Result<Vec<SpinState>> {
    if len > MAX_SPINS {
        return invalid("too many spins");
    }
    let k = sector_downs(len, twice_s)?;
    let mut out = Vec::new();
    if k == 0 {
        out.push(SpinState::all_up(len));
        return Ok(out);
    }
    // Gosper's hack walks k-subsets in increasing order.
    let mut m: u64 = (1u64 << k) - 1;
    let limit = 1u64 << len;
    while m < limit {
        out.push(SpinState::new(len, m));
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SpinSector {
    len: usize,
    twice_s: i64,
    states: Vec<SpinState>,
    index: HashMap<u64, usize>,
}

impl SpinSector {
    pub fn new(len: usize, twice_s: i64) -> Result<Self> {
        let states = enumerate_sector(len, twice_s)?;
        let index = states.iter().enumerate().map(|(i, s)| (s.mask, i)).collect();
        Ok(SpinSector { len, twice_s, states, index })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn twice_s(&self) -> i64 {
        self.twice_s
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[SpinState] {
        &self.states
    }

    pub fn index_of(&self, s: &SpinState) -> Option<usize> {
        if s.len != self.len {
            return None;
        }
        self.index.get(&s.mask).copied()
    }

    /// Dense coordinates of a sparse vector; `None` if it leaves the sector.
    pub fn coordinates(&self, v: &SpinVector) -> Option<Vec<ScalarPoly>> {
        let mut out = vec![ScalarPoly::zero(); self.dim()];
        for (s, c) in v.terms() {
            out[self.index_of(&s)?] = c.clone();
        }
        Some(out)
    }
}

/// Terms of `ℍ_L |s⟩` as `(state, constant part, β part)`.
fn h_spin_terms(s: SpinState) -> Vec<(SpinState, i64, i64)> {
    let len = s.len;
    let mut out = Vec::new();
    let full = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    let dd = (s.mask & (s.mask >> 1) & full).count_ones() as i64;
    let downs = s.mask.count_ones() as i64;
    out.push((s, 0, dd - downs));
    for j in 1..len {
        if s.is_down(j) != s.is_down(j + 1) {
            out.push((s.flipped(j).flipped(j + 1), -1, 0));
        }
    }
    out
}

/// `ℍ_L` on all `2^L` states.
pub fn h_spin_matrix(len: usize) -> Result<PolyMatrix> {
    if len > 12 {
        return Err(Error::SizeCap { n: len, cap: 12 });
    }
    let dim = 1usize << len;
    let mut m = PolyMatrix::zeros(dim, dim);
    for col in 0..dim {
        for (t, c0, c1) in h_spin_terms(SpinState::new(len, col as u64)) {
            m.add_to(t.mask as usize, col, &ScalarPoly::from_i64s(&[c0, c1]));
        }
    }
    Ok(m)
}

/// `ℍ_L` restricted to the sector `(len, s)`.
pub fn h_spin_sector(len: usize, twice_s: i64) -> Result<PolyMatrix> {
    let sector = SpinSector::new(len, twice_s)?;
    Ok(h_spin_on(&sector))
}

pub fn h_spin_on(sector: &SpinSector) -> PolyMatrix {
    let dim = sector.dim();
    let mut m = PolyMatrix::zeros(dim, dim);
    for (col, s) in sector.states.iter().enumerate() {
        for (t, c0, c1) in h_spin_terms(*s) {
            let row = sector.index_of(&t).expect("ℍ preserves magnetisation");
            m.add_to(row, col, &ScalarPoly::from_i64s(&[c0, c1]));
        }
    }
    m
}

/// Terms of `-χ̃(e_i)` summed over `i`, applied to `|s⟩`.
fn xxz_terms(s: SpinState, q: Complex64) -> Vec<(SpinState, Complex64)> {
    let beta = q + q.inv();
    let asym = q - q.inv();
    let mut diag = Complex64::zero();
    let mut out = Vec::new();
    for i in 1..s.len {
        let (zi, zj) = (s.spin(i) as f64, s.spin(i + 1) as f64);
        diag -= -0.25 * beta * (zi * zj - 1.0) + 0.25 * asym * (zi - zj);
        if zi != zj {
            out.push((s.flipped(i).flipped(i + 1), Complex64::new(-1.0, 0.0)));
        }
    }
    out.push((s, diag));
    out
}

/// `H_XXZ` on all `2^n` states.
pub fn h_xxz_matrix(n: usize, q: Complex64) -> Result<DMatrix<Complex64>> {
    if n > 12 {
        return Err(Error::SizeCap { n, cap: 12 });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        for (t, c) in xxz_terms(SpinState::new(n, col as u64), q) {
            m[(t.mask as usize, col)] += c;
        }
    }
    Ok(m)
}

/// `H_XXZ` restricted to the sector `(n, s)`.
pub fn h_xxz_sector(n: usize, twice_s: i64, q: Complex64) -> Result<DMatrix<Complex64>> {
    let sector = SpinSector::new(n, twice_s)?;
    let dim = sector.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for (col, s) in sector.states.iter().enumerate() {
        for (t, c) in xxz_terms(*s, q) {
            m[(sector.index_of(&t).expect("sector preserved"), col)] += c;
        }
    }
    Ok(m)
}

/// `τ(e_i) = σ⁻_{i-1}σ⁺_i + σ⁺_iσ⁻_{i+1}` on `n - 1` spins, with the
/// out-of-range factors dropped.
pub fn tau_matrix(n: usize, i: usize) -> Result<PolyMatrix> {
    if n < 2 || i == 0 || i >= n {
        return invalid(format!("τ(e_{i}) undefined for n = {n}"));
    }
    let len = n - 1;
    if len > 12 {
        return Err(Error::SizeCap { n, cap: 13 });
    }
    let dim = 1usize << len;
    let mut m = PolyMatrix::zeros(dim, dim);
    let one = ScalarPoly::constant(1);
    for col in 0..dim {
        let s = SpinState::new(len, col as u64);
        if !s.is_down(i) {
            continue;
        }
        if i > 1 && !s.is_down(i - 1) {
            m.add_to(s.flipped(i).flipped(i - 1).mask as usize, col, &one);
        }
        if i < len && !s.is_down(i + 1) {
            m.add_to(s.flipped(i).flipped(i + 1).mask as usize, col, &one);
        }
    }
    Ok(m)
}

/// Parameters of `-½(Σ(σˣσˣ + σʸσʸ + Δσᶻσᶻ) + pσᶻ_1 + p'σᶻ_L) - α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetheTuple {
    pub len: usize,
    pub delta: Complex64,
    pub p: Complex64,
    pub p_prime: Complex64,
    pub alpha: Complex64,
}

/// Tuples matching `H_XXZ` on `n` sites and `ℍ_{n-1}`.
pub fn bethe_parameter_map(n: usize, q: QValue) -> (BetheTuple, BetheTuple) {
    let beta = q.beta_complex();
    let asym = q.q - q.q.inv();
    let nf = n as f64;
    let xxz =
        BetheTuple { len: n, delta: -beta / 2.0, p: asym / 2.0, p_prime: -asym / 2.0, alpha: (nf - 1.0) * beta / 4.0 };
    let spin = BetheTuple {
        len: n.saturating_sub(1),
        delta: -beta / 2.0,
        p: -beta / 2.0,
        p_prime: -beta / 2.0,
        alpha: nf * beta / 4.0,
    };
    (xxz, spin)
}

/// Dense matrix of the open XXZ Hamiltonian described by a tuple.
pub fn bethe_hamiltonian(t: &BetheTuple) -> Result<DMatrix<Complex64>> {
    if t.len > 12 {
        return Err(Error::SizeCap { n: t.len, cap: 12 });
    }
    let dim = 1usize << t.len;
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let s = SpinState::new(t.len, col as u64);
        let mut diag = -t.alpha;
        for i in 1..t.len {
            let (zi, zj) = (s.spin(i) as f64, s.spin(i + 1) as f64);
            diag -= 0.5 * t.delta * zi * zj;
            if zi != zj {
                // σˣσˣ + σʸσʸ = 2(σ⁺σ⁻ + σ⁻σ⁺)
                m[(s.flipped(i).flipped(i + 1).mask as usize, col)] -= Complex64::new(1.0, 0.0);
            }
        }
        if t.len > 0 {
            diag -= 0.5 * (t.p * s.spin(1) as f64 + t.p_prime * s.spin(t.len) as f64);
        }
        m[(col, col)] += diag;
    }
    Ok(m)
}

/// Largest entrywise deviation of the two tuples' Hamiltonians from
/// `H_XXZ` and `ℍ_{n-1}` at the given `q`.
pub fn bethe_residuals(n: usize, q: QValue) -> Result<(f64, f64)> {
    let (tx, ts) = bethe_parameter_map(n, q);
    let a = bethe_hamiltonian(&tx)? - h_xxz_matrix(n, q.q)?;
    let hs = h_spin_matrix(n - 1)?.eval_complex(q.beta_complex());
    let b = bethe_hamiltonian(&ts)? - hs;
    let max = |m: DMatrix<Complex64>| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok((max(a), max(b)))
}

/// A sparse vector in `(C²)^{⊗len}` with coefficients in `Z[β]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpinVector {
    len: usize,
    terms: BTreeMap<u64, ScalarPoly>,
}

impl SpinVector {
    pub fn zero(len: usize) -> Self {
        SpinVector { len, terms: BTreeMap::new() }
    }

    pub fn basis(s: SpinState) -> Self {
        let mut v = Self::zero(s.len);
        v.add_term(s, &ScalarPoly::constant(1));
        v
    }

    /// The sum of every basis state, `Π (1 + σ⁻_i) |+...+⟩`.
    pub fn omega(len: usize) -> Self {
        let mut v = Self::zero(len);
        for m in 0..(1u64 << len) {
            v.add_term(SpinState::new(len, m), &ScalarPoly::constant(1));
        }
        v
    }

    /// Number of sites, not of terms; see [`SpinVector::is_zero`].
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (SpinState, &ScalarPoly)> + '_ {
        self.terms.iter().map(move |(&m, c)| (SpinState::new(self.len, m), c))
    }

    pub fn coefficient(&self, s: &SpinState) -> ScalarPoly {
        self.terms.get(&s.mask).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, s: SpinState, c: &ScalarPoly) {
        assert_eq!(s.len, self.len, "state length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s.mask) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &SpinVector) {
        for (s, c) in other.terms() {
            self.add_term(s, c);
        }
    }

    pub fn add_scaled(&mut self, other: &SpinVector, k: &ScalarPoly) {
        if k.is_zero() {
            return;
        }
        for (s, c) in other.terms() {
            self.add_term(s, &(c * k));
        }
    }

    pub fn sub(&self, other: &SpinVector) -> SpinVector {
        let mut out = self.clone();
        out.add_scaled(other, &ScalarPoly::constant(-1));
        out
    }

    pub fn scale(&self, k: &ScalarPoly) -> SpinVector {
        let mut out = SpinVector::zero(self.len);
        out.add_scaled(self, k);
        out
    }

    /// Tensor product `|self⟩ ⊗ |other⟩`.
    pub fn tensor(&self, other: &SpinVector) -> SpinVector {
        let mut out = SpinVector::zero(self.len + other.len);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.concat(&b), &(ca * cb));
            }
        }
        out
    }

    /// Applies a linear map given by its action on basis states.
    pub fn map(&self, f: impl Fn(SpinState) -> Vec<(SpinState, ScalarPoly)>) -> SpinVector {
        let mut out = SpinVector::zero(self.len);
        for (s, c) in self.terms() {
            for (t, k) in f(s) {
                out.add_term(t, &(c * &k));
            }
        }
        out
    }

    /// `σ⁻` on a 1-based leg: up becomes down, down is annihilated.
    pub fn sigma_minus(&self, leg: usize) -> SpinVector {
        self.map(|s| if s.is_down(leg) { vec![] } else { vec![(s.flipped(leg), ScalarPoly::constant(1))] })
    }

    /// `ℍ_len` applied to the vector.
    pub fn apply_h_spin(&self) -> SpinVector {
        self.map(|s| h_spin_terms(s).into_iter().map(|(t, c0, c1)| (t, ScalarPoly::from_i64s(&[c0, c1]))).collect())
    }

    /// Dense coordinates in the full `2^len` space.
    pub fn to_dense(&self) -> Vec<ScalarPoly> {
        let mut out = vec![ScalarPoly::zero(); 1 << self.len];
        for (&m, c) in &self.terms {
            out[m as usize] = c.clone();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_from_beta;

    #[test]
    fn sector_order_matches_dyadic() {
        let s = enumerate_sector(5, -1).unwrap();
        let shown: Vec<String> = s.iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, ["++---", "+-+--", "+--+-", "+---+", "-++--", "-+-+-", "-+--+", "--++-", "--+-+", "---++"]);
        let d: Vec<u64> = s.iter().map(|x| x.mask()).collect();
        assert_eq!(d, [7, 11, 13, 14, 19, 21, 22, 25, 26, 28]);
        assert_eq!(s[0].dyadic(), (7, 32));
        assert!(enumerate_sector(4, 1).is_err());
        assert_eq!(enumerate_sector(0, 0).unwrap().len(), 1);
    }

    #[test]
    fn parse_and_print() {
        let s: SpinState = "+−-+".parse().unwrap();
        assert_eq!(s.to_string(), "+--+");
        assert_eq!(s.down_legs(), vec![2, 3]);
        assert_eq!(s.twice_s(), 0);
        assert!("+x".parse::<SpinState>().is_err());
    }

    #[test]
    fn spin_hamiltonian_small() {
        let h = h_spin_sector(1, -1).unwrap();
        assert_eq!(h.get(0, 0), &ScalarPoly::from_i64s(&[0, -1]));
        let full = h_spin_matrix(4).unwrap();
        assert!(full.is_symmetric());
        // Sectors are invariant: every nonzero entry connects equal magnetisations.
        for r in 0..16 {
            for c in 0..16 {
                if !full.get(r, c).is_zero() {
                    assert_eq!((r as u64).count_ones(), (c as u64).count_ones());
                }
            }
        }
    }

    #[test]
    fn xxz_two_sites_at_q_i_is_nilpotent() {
        let q = q_from_beta(0.0, true).q;
        let h = h_xxz_matrix(2, q).unwrap();
        let sq = &h * &h;
        assert!(sq.iter().all(|z| z.norm() < 1e-14));
        assert!(h.iter().any(|z| z.norm() > 0.5));
    }

    #[test]
    fn tau_sum_is_spin_hamiltonian_at_zero() {
        for n in 2..=6 {
            let mut sum = PolyMatrix::zeros(1 << (n - 1), 1 << (n - 1));
            for i in 1..n {
                sum = &sum + &tau_matrix(n, i).unwrap();
            }
            let h0 = h_spin_matrix(n - 1).unwrap().eval_f64(0.0);
            let s = sum.eval_f64(0.0);
            assert!((h0 + s).iter().all(|x| x.abs() < 1e-15), "n = {n}");
        }
    }

    #[test]
    fn bethe_tuples_reproduce_both_hamiltonians() {
        for n in 2..=6 {
            for &b in &[-2.5, -1.0, 0.0, 0.7, 1.99, 3.0] {
                let (a, c) = bethe_residuals(n, q_from_beta(b, true)).unwrap();
                assert!(a < 1e-12 && c < 1e-12, "n = {n}, β = {b}: {a} {c}");
            }
        }
        let (x, s) = bethe_parameter_map(3, q_from_beta(1.0, true));
        assert_eq!(x.len, 3);
        assert!((x.delta.re + 0.5).abs() < 1e-15 && (x.alpha.re - 0.5).abs() < 1e-15);
        assert_eq!(s.len, 2);
        assert!((s.alpha.re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn spin_vector_ops() {
        let up = SpinVector::basis("+".parse().unwrap());
        let dn = SpinVector::basis("-".parse().unwrap());
        let v = up.tensor(&dn);
        assert_eq!(v.terms().next().unwrap().0.to_string(), "+-");
        assert!(v.sigma_minus(2).is_zero());
        assert_eq!(v.sigma_minus(1), SpinVector::basis("--".parse().unwrap()));
        assert_eq!(SpinVector::omega(3).terms().count(), 8);
        let h = h_spin_matrix(3).unwrap();
        let w = SpinVector::basis("+-+".parse().unwrap()).apply_h_spin();
        let dense = w.to_dense();
        for r in 0..8 {
            assert_eq!(&dense[r], h.get(r, 2));
        }
    }
}
