//! Exact rank, determinants over `Z[β]` and real roots of integer
//! polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly_matrix::PolyMatrix;
use crate::scalar::ScalarPoly;
use crate::standard::{Link, StandardModule};

/// A prime below `2^31`, so products fit in `u64`.
const PRIME: u64 = 2_147_483_647;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn to_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
}

/// Rank over `F_p` by Gaussian elimination.
pub fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for r in rank + 1..rows {
            if m[r][c] == 0 {
                continue;
            }
            let f = m[r][c] * inv % p;
            for k in c..cols {
                let sub = f * m[rank][k] % p;
                m[r][k] = (m[r][k] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn rank_integer(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = &m[rank][c] * &m[r][k] - &m[r][c] * &m[rank][k];
                m[r][k] = v / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Rank of a rational matrix.
pub fn rank_rational(m: &[Vec<BigRational>]) -> usize {
    let lcm = m.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = m
        .iter()
        .map(|r| r.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect())
        .collect();
    rank_integer(ints)
}

/// Exact rank of the Gram matrix of `V_{n,d}` at a rational β. A full
/// rank found modulo a prime is conclusive; otherwise the rank is computed
/// over the integers.
pub fn gram_rank(n: usize, d: usize, beta: &BigRational) -> Result<usize> {
    let module = StandardModule::new(n, d)?;
    let dim = module.dim();
    let loops: Vec<Vec<Option<u32>>> =
        module.basis().iter().map(|v| module.basis().iter().map(|w| Link::gram_loops(v, w)).collect()).collect();
    let den_mod = to_mod(beta.denom(), PRIME);
    if den_mod != 0 {
        let b = to_mod(beta.numer(), PRIME) * pow_mod(den_mod, PRIME - 2, PRIME) % PRIME;
        let m =
            loops.iter().map(|r| r.iter().map(|x| x.map_or(0, |k| pow_mod(b, k as u64, PRIME))).collect()).collect();
        if rank_mod_p(m, PRIME) == dim {
            return Ok(dim);
        }
    }
    let m: Vec<Vec<BigRational>> = loops
        .iter()
        .map(|r| {
            r.iter().map(|x| x.map_or_else(BigRational::zero, |k| num_traits::pow(beta.clone(), k as usize))).collect()
        })
        .collect();
    Ok(rank_rational(&m))
}

/// Determinant over `Z[β]` by Bareiss elimination.
pub fn det_poly(m: &PolyMatrix) -> Result<ScalarPoly> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(ScalarPoly::one());
    }
    let mut a: Vec<Vec<ScalarPoly>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut prev = ScalarPoly::one();
    let mut negate = false;
    for k in 0..n - 1 {
        let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(ScalarPoly::zero());
        };
        if piv != k {
            a.swap(piv, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = v.div_exact(&prev)?;
            }
            a[i][k] = ScalarPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

type QPoly = Vec<BigRational>;

fn qpoly(p: &ScalarPoly) -> QPoly {
    p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn qrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let top = r.len() - 1;
        let f = &r[top] / &b[db];
        for (k, bc) in b.iter().enumerate() {
            let v = &f * bc;
            r[top - db + k] -= v;
        }
        q[top - db] = f;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn monic(mut p: QPoly) -> QPoly {
    if let Some(l) = p.last().cloned() {
        for c in &mut p {
            *c /= &l;
        }
    }
    p
}

fn qgcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut x, mut y) = (monic(a.clone()), monic(b.clone()));
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = qrem(&x, &y);
        x = y;
        y = monic(r);
    }
    monic(x)
}

fn qeval(p: &QPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Squarefree part of an integer polynomial, as a rational polynomial.
fn squarefree(p: &ScalarPoly) -> QPoly {
    let a = qpoly(p);
    let g = qgcd(&a, &qpoly(&p.derivative()));
    if g.len() <= 1 {
        return a;
    }
    qrem(&a, &g).0
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Real roots of `p` in `[lo, hi]`, located on a grid of the given step
/// after removing repeated factors and refined by exact bisection to `tol`.
pub fn real_roots(p: &ScalarPoly, lo: f64, hi: f64, step: f64, tol: f64) -> Vec<f64> {
    if p.is_zero() || p.is_constant() {
        return vec![];
    }
    let sf = squarefree(p);
    let mut roots = Vec::new();
    let count = ((hi - lo) / step).ceil() as usize;
    let grid: Vec<BigRational> = (0..=count).map(|i| rational((lo + i as f64 * step).min(hi))).collect();
    let signs: Vec<i8> = grid
        .iter()
        .map(|x| {
            let v = qeval(&sf, x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .collect();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for i in 0..grid.len() {
        if signs[i] == 0 {
            roots.push(grid[i].to_f64().unwrap_or(f64::NAN));
            continue;
        }
        if i + 1 < grid.len() && signs[i + 1] != 0 && signs[i] != signs[i + 1] {
            let (mut a, mut b) = (grid[i].clone(), grid[i + 1].clone());
            let sa = signs[i];
            while (&b - &a).to_f64().unwrap_or(0.0) > tol {
                let mid = (&a + &b) * &half;
                let v = qeval(&sf, &mid);
                if v.is_zero() {
                    a = mid.clone();
                    b = mid;
                    break;
                }
                if (v.is_positive() as i8 * 2 - 1) == sa {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            roots.push(((&a + &b) * &half).to_f64().unwrap_or(f64::NAN));
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::gram_matrix;

    fn p(c: &[i64]) -> ScalarPoly {
        ScalarPoly::from_i64s(c)
    }

    #[test]
    fn determinant_small() {
        let g = gram_matrix(4, 0).unwrap();
        assert_eq!(det_poly(&g).unwrap(), p(&[0, 0, -1, 0, 1]));
        let id = PolyMatrix::identity(3);
        assert_eq!(det_poly(&id).unwrap(), ScalarPoly::one());
        let swap = PolyMatrix::from_rows(&[vec![p(&[0]), p(&[1])], vec![p(&[1]), p(&[0])]]);
        assert_eq!(det_poly(&swap).unwrap(), p(&[-1]));
    }

    #[test]
    fn roots_with_multiplicity() {
        // β²(β² - 1) has a double root at 0.
        let r = real_roots(&p(&[0, 0, -1, 0, 1]), -3.0, 3.0, 0.01, 1e-12);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-10, "{r:?}");
        }
        let r = real_roots(&p(&[-2, 0, 1]), 0.0, 3.0, 0.01, 1e-13);
        assert!((r[0] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ranks() {
        let b = BigRational::new(7.into(), 3.into());
        for n in 0..=8 {
            for d in (n % 2..=n).step_by(2) {
                assert_eq!(gram_rank(n, d, &b).unwrap(), crate::standard::module_dim(n, d));
            }
        }
        // At β = 0 the Gram matrix of V_{2,0} vanishes.
        assert_eq!(gram_rank(2, 0, &BigRational::zero()).unwrap(), 0);
        assert_eq!(gram_rank(4, 0, &BigRational::one()).unwrap(), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 4]], 7), 1);
        assert_eq!(rank_integer(vec![vec![2.into(), 4.into()], vec![1.into(), 2.into()]]), 1);
    }
}
