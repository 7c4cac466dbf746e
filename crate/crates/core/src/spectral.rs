//! Floating-point certification of spectra.
//!
//! Loop Hamiltonians are certified through the similarity `Lᵀ H L⁻ᵀ`,
//! where `S = L Lᵀ` is the Cholesky factor of the inner product: when `H`
//! is self-adjoint for `S` this matrix is symmetric and a symmetric
//! eigensolver applies. Everything else goes through a Schur
//! decomposition.
//!
//! Tolerances are relative to `max(1, spectral radius)` for eigenvalue
//! clustering and to `max(1, σ_max)` for numerical ranks. A quantity
//! falling between one and two tolerances is reported as inconclusive.

use nalgebra::{DMatrix, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::{det_poly, real_roots};
use crate::intertwiner::inner_product_s;
use crate::poly_matrix::PolyMatrix;
use crate::scalar::q_from_beta;
use crate::spin::{h_spin_matrix, h_xxz_sector};
use crate::standard::{gram_matrix, hamiltonian_matrix};

/// β samples used by the sweeps. They include the degenerate points
/// `β = 0` and `β = ±2`.
pub const BETA_GRID: [f64; 10] = [-2.5, -2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 1.99, 2.0, 3.0];

pub const DEFAULT_TOL: f64 = 1e-7;

const MAX_ITER: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    fn from_checks(ok: bool, inconclusive: bool) -> Self {
        if inconclusive {
            Verdict::Inconclusive
        } else if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A matrix evaluated at a numeric β or q.
#[derive(Clone, Debug)]
pub enum Evaluated {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl Evaluated {
    pub fn dim(&self) -> usize {
        match self {
            Evaluated::Real(m) => m.nrows(),
            Evaluated::Complex(m) => m.nrows(),
        }
    }

    fn is_square(&self) -> bool {
        match self {
            Evaluated::Real(m) => m.is_square(),
            Evaluated::Complex(m) => m.is_square(),
        }
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        match self {
            Evaluated::Real(m) => m.map(|x| Complex64::new(x, 0.0)),
            Evaluated::Complex(m) => m.clone(),
        }
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn numerical(what: &str) -> Error {
    Error::Numerical(format!("{what} did not converge"))
}

/// Eigenvalues from a Schur decomposition.
pub fn eigenvalues(m: &Evaluated) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("eigenvalues of a non-square matrix".into()));
    }
    if m.dim() == 0 {
        return Ok(vec![]);
    }
    match m {
        Evaluated::Real(a) => {
            let s = Schur::try_new(a.clone(), f64::EPSILON, MAX_ITER).ok_or_else(|| numerical("real Schur"))?;
            Ok(s.complex_eigenvalues().iter().copied().collect())
        }
        Evaluated::Complex(a) => {
            let n = a.nrows();
            let s = Schur::try_new(a.clone(), f64::EPSILON, MAX_ITER).ok_or_else(|| numerical("complex Schur"))?;
            let (_, t) = s.unpack();
            let mut out = Vec::with_capacity(n);
            let mut i = 0;
            while i < n {
                if i + 1 < n && t[(i + 1, i)] != Complex64::new(0.0, 0.0) {
                    // Leftover 2×2 block.
                    let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
                    let half = (a + d) / 2.0;
                    let disc = (half * half - (a * d - b * c)).sqrt();
                    out.push(half + disc);
                    out.push(half - disc);
                    i += 2;
                } else {
                    out.push(t[(i, i)]);
                    i += 1;
                }
            }
            Ok(out)
        }
    }
}

fn symmetric_eigenvalues(m: DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(vec![]);
    }
    let e = SymmetricEigen::try_new(m, f64::EPSILON, MAX_ITER).ok_or_else(|| numerical("symmetric eigensolver"))?;
    let mut v: Vec<f64> = e.eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn max_imag(eigs: &[Complex64]) -> f64 {
    eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// Groups eigenvalues by single linkage at distance `tol · max(1, ρ)`.
/// The flag is set when two eigenvalues in different groups are closer
/// than twice that distance.
pub fn cluster(eigs: &[Complex64], tol: f64) -> (Vec<Vec<usize>>, bool) {
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let eps = tol * scale;
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() <= eps {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut ambiguous = false;
    for i in 0..n {
        for j in i + 1..n {
            let d = (eigs[i] - eigs[j]).norm();
            if d > eps && d <= 2.0 * eps && find(&mut parent, i) != find(&mut parent, j) {
                ambiguous = true;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    let mut out: Vec<Vec<usize>> = groups.into_iter().map(|(_, g)| g).collect();
    let mean = |g: &Vec<usize>| g.iter().map(|&i| eigs[i]).sum::<Complex64>() / g.len() as f64;
    out.sort_by(|a, b| {
        let (x, y) = (mean(a), mean(b));
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
    (out, ambiguous)
}

/// Cluster means, which stay accurate even when the individual
/// eigenvalues of a defective cluster are not.
fn cluster_means(eigs: &[Complex64], tol: f64) -> (Vec<Complex64>, bool) {
    let (groups, ambiguous) = cluster(eigs, tol);
    let means = groups.iter().map(|g| g.iter().map(|&i| eigs[i]).sum::<Complex64>() / g.len() as f64).collect();
    (means, ambiguous)
}

/// Numerical rank: singular values below `tol · max(1, σ_max)` count as
/// zero; the flag marks any singular value within a further factor of 2.
pub fn numeric_rank(m: &DMatrix<Complex64>, tol: f64) -> Result<(usize, bool)> {
    if m.is_empty() {
        return Ok((0, false));
    }
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, MAX_ITER).ok_or_else(|| numerical("SVD"))?;
    let sv = svd.singular_values;
    let scale = sv.iter().copied().fold(1.0, f64::max);
    let cut = tol * scale;
    let rank = sv.iter().filter(|&&s| s > cut).count();
    let borderline = sv.iter().any(|&s| s > cut && s <= 2.0 * cut);
    Ok((rank, borderline))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JordanCluster {
    pub eigenvalue: [f64; 2],
    pub algebraic: usize,
    pub geometric: usize,
    /// Sizes of all Jordan blocks for this eigenvalue, largest first.
    pub blocks: Vec<usize>,
    /// Ranks of `(M - λ)^k` for `k = 1, 2, ...`.
    pub ranks: Vec<usize>,
    pub inconclusive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JordanAnalysis {
    pub clusters: Vec<JordanCluster>,
    pub diagonalisable: bool,
    pub inconclusive: bool,
    pub tolerance: f64,
}

impl JordanAnalysis {
    /// `(eigenvalue, size)` for every block of size at least 2.
    pub fn nontrivial_blocks(&self) -> Vec<([f64; 2], usize)> {
        self.clusters
            .iter()
            .flat_map(|c| c.blocks.iter().filter(|&&b| b > 1).map(move |&b| (c.eigenvalue, b)))
            .collect()
    }
}

/// Jordan structure from the rank sequence of `(M - λ)^k` for each
/// eigenvalue cluster.
pub fn jordan_detect(m: &Evaluated, tol: f64) -> Result<JordanAnalysis> {
    let eigs = eigenvalues(m)?;
    jordan_from_eigenvalues(m, &eigs, tol)
}

/// As [`jordan_detect`], with eigenvalues supplied by the caller.
pub fn jordan_from_eigenvalues(m: &Evaluated, eigs: &[Complex64], tol: f64) -> Result<JordanAnalysis> {
    let dim = m.dim();
    if eigs.len() != dim {
        return Err(Error::DimensionMismatch("one eigenvalue per row expected".into()));
    }
    let a = m.to_complex();
    let (groups, mut inconclusive) = cluster(eigs, tol);
    let mut clusters = Vec::with_capacity(groups.len());
    for g in groups {
        let alg = g.len();
        let lambda = g.iter().map(|&i| eigs[i]).sum::<Complex64>() / alg as f64;
        let shifted = &a - DMatrix::<Complex64>::identity(dim, dim) * lambda;
        let mut power = shifted.clone();
        let mut ranks = Vec::new();
        let mut borderline = false;
        for k in 1..=alg {
            if k > 1 {
                power = &power * &shifted;
            }
            let (r, b) = numeric_rank(&power, tol)?;
            borderline |= b;
            ranks.push(r);
            if r + alg <= dim {
                break;
            }
        }
        let last = *ranks.last().expect("at least one power");
        let consistent = last + alg == dim;
        // Blocks of size at least k number r_{k-1} - r_k.
        let at_least: Vec<usize> = (0..ranks.len())
            .map(|k| {
                let prev = if k == 0 { dim } else { ranks[k - 1] };
                prev.saturating_sub(ranks[k])
            })
            .collect();
        let mut blocks = Vec::new();
        for k in (0..at_least.len()).rev() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..at_least[k].saturating_sub(next) {
                blocks.push(k + 1);
            }
        }
        let bad = borderline || !consistent;
        inconclusive |= bad;
        clusters.push(JordanCluster {
            eigenvalue: pair(lambda),
            algebraic: alg,
            geometric: dim - ranks[0],
            blocks,
            ranks,
            inconclusive: bad,
        });
    }
    let diagonalisable = clusters.iter().all(|c| c.geometric == c.algebraic);
    Ok(JordanAnalysis { clusters, diagonalisable, inconclusive, tolerance: tol })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Symmetric eigensolve after the similarity by the Cholesky factor of `S`.
    Similarity,
    /// Schur decomposition of the matrix itself.
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub matrix_id: String,
    pub method: Method,
    /// `[re, im]` pairs.
    pub eigenvalues: Vec<[f64; 2]>,
    pub max_imag: f64,
    /// Largest imaginary part from a general eigensolver, when the
    /// similarity route was used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub general_max_imag: Option<f64>,
    /// Relative asymmetry of the similarity transform.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagonalisable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jordan: Option<JordanAnalysis>,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SpectralReport {
    fn from_eigs(id: String, method: Method, eigs: &[Complex64], tol: f64) -> Self {
        let mi = max_imag(eigs);
        SpectralReport {
            matrix_id: id,
            method,
            eigenvalues: eigs.iter().copied().map(pair).collect(),
            max_imag: mi,
            general_max_imag: None,
            symmetry_residual: None,
            diagonalisable: None,
            jordan: None,
            tolerance: tol,
            verdict: Verdict::from_checks(mi < tol, false),
            note: None,
        }
    }

    fn inconclusive(id: String, method: Method, tol: f64, note: String) -> Self {
        SpectralReport {
            matrix_id: id,
            method,
            eigenvalues: vec![],
            max_imag: f64::NAN,
            general_max_imag: None,
            symmetry_residual: None,
            diagonalisable: None,
            jordan: None,
            tolerance: tol,
            verdict: Verdict::Inconclusive,
            note: Some(note),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Passes iff every eigenvalue has `|Im λ| < tol`. Solver failure is
/// inconclusive.
pub fn check_reality(id: &str, m: &Evaluated, tol: f64) -> SpectralReport {
    match eigenvalues(m) {
        Ok(e) => SpectralReport::from_eigs(id.to_string(), Method::General, &e, tol),
        Err(e) => SpectralReport::inconclusive(id.to_string(), Method::General, tol, e.to_string()),
    }
}

/// `Lᵀ H L⁻ᵀ` for the lower Cholesky factor `L`.
fn similarity(h: &DMatrix<f64>, l: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    // B = H L⁻ᵀ, i.e. Bᵀ = L⁻¹ Hᵀ.
    let bt = l.solve_lower_triangular(&h.transpose())?;
    Some(l.transpose() * bt.transpose())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivitySample {
    pub beta: f64,
    /// Smallest pivot `L_ii²` of the Cholesky factorization, if it exists.
    pub min_pivot: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub samples: Vec<PositivitySample>,
    pub tolerance: f64,
    pub passed: bool,
}

fn cholesky_pivots(s: &DMatrix<f64>) -> Option<(DMatrix<f64>, f64)> {
    let c = s.clone().cholesky()?;
    let l = c.unpack();
    let min = l.diagonal().iter().map(|x| x * x).fold(f64::INFINITY, f64::min);
    Some((l, min))
}

fn positivity_sample(s: &DMatrix<f64>, beta: f64, tol: f64) -> (PositivitySample, Option<DMatrix<f64>>) {
    let scale = s.diagonal().iter().map(|x| x.abs()).fold(1.0, f64::max);
    match cholesky_pivots(s) {
        Some((l, min)) => {
            let ok = min > tol * scale;
            (PositivitySample { beta, min_pivot: Some(min), passed: ok }, ok.then_some(l))
        }
        None => (PositivitySample { beta, min_pivot: None, passed: false }, None),
    }
}

/// Cholesky factorization of `s` at each sample; passes iff every pivot
/// exceeds `tol` relative to the largest diagonal entry.
pub fn check_positive_definite(s: &PolyMatrix, samples: &[f64], tol: f64) -> Result<PositivityReport> {
    if !s.is_symmetric() {
        return invalid("positivity needs a symmetric matrix");
    }
    let samples: Vec<PositivitySample> = samples.iter().map(|&b| positivity_sample(&s.eval_f64(b), b, tol).0).collect();
    let passed = samples.iter().all(|x| x.passed);
    Ok(PositivityReport { samples, tolerance: tol, passed })
}

/// Exact loop Hamiltonian and inner product of one standard module, ready
/// to be evaluated at many β.
pub struct LoopCase {
    pub n: usize,
    pub d: usize,
    pub h: PolyMatrix,
    pub s: PolyMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopCertificate {
    pub n: usize,
    pub d: usize,
    pub beta: f64,
    pub reality: SpectralReport,
    pub positivity: PositivitySample,
}

impl LoopCertificate {
    pub fn passed(&self) -> bool {
        self.reality.passed() && self.positivity.passed
    }
}

impl LoopCase {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        Ok(LoopCase { n, d, h: hamiltonian_matrix(n, d)?, s: inner_product_s(n, d)? })
    }

    /// Reality, diagonalisability and positivity of `S` at one β. The
    /// general eigensolver is used only if `S` fails to factor.
    pub fn certify(&self, beta: f64, tol: f64, rank_tol: f64) -> LoopCertificate {
        let id = format!("loop n={} d={} beta={beta}", self.n, self.d);
        let h = self.h.eval_f64(beta);
        let (positivity, l) = positivity_sample(&self.s.eval_f64(beta), beta, tol);
        let general = eigenvalues(&Evaluated::Real(h.clone()));
        let mut report = match l.as_ref().and_then(|l| similarity(&h, l)) {
            Some(a) => {
                let norm = a.norm().max(1.0);
                let residual = (&a - a.transpose()).norm() / norm;
                match symmetric_eigenvalues((&a + a.transpose()) * 0.5) {
                    Ok(ev) => {
                        let eigs: Vec<Complex64> = ev.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                        let mut r = SpectralReport::from_eigs(id, Method::Similarity, &eigs, tol);
                        r.symmetry_residual = Some(residual);
                        r.general_max_imag = general.as_ref().ok().map(|g| max_imag(g));
                        match jordan_from_eigenvalues(&Evaluated::Real(h), &eigs, rank_tol) {
                            Ok(j) => {
                                let ok = r.max_imag < tol && residual < tol && j.diagonalisable;
                                r.verdict = Verdict::from_checks(ok, j.inconclusive);
                                r.diagonalisable = Some(j.diagonalisable);
                                r.jordan = Some(j);
                            }
                            Err(e) => {
                                r.verdict = Verdict::Inconclusive;
                                r.note = Some(e.to_string());
                            }
                        }
                        r
                    }
                    Err(e) => SpectralReport::inconclusive(id, Method::Similarity, tol, e.to_string()),
                }
            }
            None => {
                let mut r = check_reality(&id, &Evaluated::Real(h.clone()), tol);
                if let Ok(g) = &general {
                    if let Ok(j) = jordan_from_eigenvalues(&Evaluated::Real(h), g, rank_tol) {
                        r.diagonalisable = Some(j.diagonalisable);
                        if r.verdict == Verdict::Pass && (j.inconclusive || !j.diagonalisable) {
                            r.verdict = Verdict::from_checks(j.diagonalisable, j.inconclusive);
                        }
                        r.jordan = Some(j);
                    }
                }
                r.note = Some("S is not positive definite here; general eigensolver used".into());
                r
            }
        };
        if report.eigenvalues.len() != self.h.nrows() && report.verdict == Verdict::Pass {
            report.verdict = Verdict::Inconclusive;
        }
        LoopCertificate { n: self.n, d: self.d, beta, reality: report, positivity }
    }
}

/// All valid `(n, d)` with `n <= n_max`, in order.
pub fn loop_indices(n_min: usize, n_max: usize) -> Vec<(usize, usize)> {
    (n_min..=n_max).flat_map(|n| (n % 2..=n).step_by(2).map(move |d| (n, d))).collect()
}

/// Certifies every `H_{n,d}` with `n <= n_max` at every β, in parallel.
/// Results are ordered by `(n, d, β index)`.
pub fn reality_sweep(n_max: usize, betas: &[f64], tol: f64, rank_tol: f64) -> Result<Vec<LoopCertificate>> {
    let per_module: Vec<Vec<LoopCertificate>> = loop_indices(1, n_max)
        .into_par_iter()
        .map(|(n, d)| {
            let case = LoopCase::new(n, d)?;
            Ok(betas.iter().map(|&b| case.certify(b, tol, rank_tol)).collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_module.into_iter().flatten().collect())
}

/// Eigenvalues of `H_XXZ` at `q(β)`, sector by sector.
pub fn xxz_eigenvalues(n: usize, beta: f64) -> Result<Vec<Complex64>> {
    xxz_eigenvalues_at(n, q_from_beta(beta, true).q)
}

/// Eigenvalues of `H_XXZ` at a given `q`, sector by sector.
pub fn xxz_eigenvalues_at(n: usize, q: Complex64) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(1 << n);
    for twice_s in (-(n as i64)..=n as i64).step_by(2) {
        out.extend(eigenvalues(&Evaluated::Complex(h_xxz_sector(n, twice_s, q)?))?);
    }
    Ok(out)
}

/// Reality of the XXZ spectrum at `q(β)`.
pub fn xxz_reality(n: usize, beta: f64, tol: f64) -> SpectralReport {
    xxz_reality_at(n, q_from_beta(beta, true).q, &format!("xxz n={n} beta={beta}"), tol)
}

/// Reality of the XXZ spectrum at a given `q`.
pub fn xxz_reality_at(n: usize, q: Complex64, id: &str, tol: f64) -> SpectralReport {
    match xxz_eigenvalues_at(n, q) {
        Ok(e) => SpectralReport::from_eigs(id.to_string(), Method::General, &e, tol),
        Err(e) => SpectralReport::inconclusive(id.to_string(), Method::General, tol, e.to_string()),
    }
}

/// XXZ reality for `1 <= n <= n_max` at every β, ordered by `(n, β)`.
pub fn xxz_sweep(n_max: usize, betas: &[f64], tol: f64) -> Vec<SpectralReport> {
    let jobs: Vec<(usize, f64)> = (1..=n_max).flat_map(|n| betas.iter().map(move |&b| (n, b))).collect();
    jobs.into_par_iter().map(|(n, b)| xxz_reality(n, b, tol)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InclusionReport {
    pub n: usize,
    pub beta: f64,
    pub tolerance: f64,
    /// Distinct eigenvalues of `H_XXZ` (real parts of cluster means).
    pub xxz: Vec<f64>,
    pub xxz_max_imag: f64,
    /// Distinct eigenvalues of all `H_{n,d}` together.
    pub loop_union: Vec<f64>,
    /// Distinct eigenvalues of `ℍ_{n-1}`.
    pub spin: Vec<f64>,
    pub equality: bool,
    pub inclusion: bool,
    /// Some eigenvalue of `ℍ_{n-1}` lies outside the union.
    pub strict: bool,
    pub verdict: Verdict,
}

/// Nearest distance from `x` to the set, relative to the clustering scale.
fn nearest(x: Complex64, set: &[Complex64]) -> f64 {
    set.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)
}

/// Every element of `a` lies in `b`: `(holds, ambiguous)`.
fn contained(a: &[Complex64], b: &[Complex64], eps: f64) -> (bool, bool) {
    let mut holds = true;
    let mut ambiguous = false;
    for &x in a {
        let d = nearest(x, b);
        if d > eps {
            holds = false;
            ambiguous |= d <= 2.0 * eps;
        }
    }
    (holds, ambiguous)
}

/// Compares the distinct spectra of `H_XXZ`, of `⊕_d H_{n,d}` and of
/// `ℍ_{n-1}` at one β.
pub fn spectral_inclusion(n: usize, beta: f64, tol: f64) -> Result<InclusionReport> {
    if n < 2 {
        return invalid("spectral inclusion needs n >= 2");
    }
    let xxz_raw = xxz_eigenvalues(n, beta)?;
    let mut loops = Vec::new();
    for d in (n % 2..=n).step_by(2) {
        let c = LoopCase::new(n, d)?.certify(beta, tol, tol);
        if c.reality.eigenvalues.len() != module_len(n, d) {
            return Err(Error::Numerical(format!("no spectrum for H_{{{n},{d}}} at β = {beta}")));
        }
        loops.extend(c.reality.eigenvalues.iter().map(|p| Complex64::new(p[0], p[1])));
    }
    let spin_h = h_spin_matrix(n - 1)?.eval_f64(beta);
    let spin_raw: Vec<Complex64> = symmetric_eigenvalues(spin_h)?.into_iter().map(|x| Complex64::new(x, 0.0)).collect();

    let (xxz, a1) = cluster_means(&xxz_raw, tol);
    let (union, a2) = cluster_means(&loops, tol);
    let (spin, a3) = cluster_means(&spin_raw, tol);
    let scale = xxz_raw.iter().chain(&loops).chain(&spin_raw).map(|z| z.norm()).fold(1.0, f64::max);
    let eps = tol * scale;
    let (xu, b1) = contained(&xxz, &union, eps);
    let (ux, b2) = contained(&union, &xxz, eps);
    let (us, b3) = contained(&union, &spin, eps);
    let (xs, b4) = contained(&xxz, &spin, eps);
    let extra: Vec<f64> = spin.iter().map(|&x| nearest(x, &union)).collect();
    let strict = extra.iter().any(|&d| d > 2.0 * eps);
    let ambiguous = a1 || a2 || a3 || b1 || b2 || b3 || b4 || extra.iter().any(|&d| d > eps && d <= 2.0 * eps);
    let equality = xu && ux;
    let inclusion = us && xs;
    Ok(InclusionReport {
        n,
        beta,
        tolerance: tol,
        xxz: xxz.iter().map(|z| z.re).collect(),
        xxz_max_imag: max_imag(&xxz),
        loop_union: union.iter().map(|z| z.re).collect(),
        spin: spin.iter().map(|z| z.re).collect(),
        equality,
        inclusion,
        strict,
        verdict: Verdict::from_checks(equality && inclusion, ambiguous),
    })
}

fn module_len(n: usize, d: usize) -> usize {
    crate::standard::module_dim(n, d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramScan {
    pub n: usize,
    pub d: usize,
    pub window: [f64; 2],
    pub step: f64,
    /// Smallest grid point from which the Gram matrix stays positive
    /// definite up to the end of the window.
    pub positive_from: Option<f64>,
    /// Real zeros of `det G` in the window.
    pub det_zeros: Vec<f64>,
    /// Largest zero of `det G` in the window.
    pub largest_det_zero: Option<f64>,
    /// `det G` as coefficient strings, lowest degree first.
    pub det: Vec<String>,
}

/// Scans the smallest eigenvalue of `G_{n,d}` over a grid and locates the
/// real zeros of its determinant.
pub fn gram_positivity_scan(n: usize, d: usize, lo: f64, hi: f64, step: f64, tol: f64) -> Result<GramScan> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi && step > 0.0) {
        return invalid("the scan window must be finite with lo <= hi and a positive step");
    }
    let g = gram_matrix(n, d)?;
    let count = ((hi - lo) / step).round() as usize;
    let grid: Vec<f64> = (0..=count).map(|i| (lo + i as f64 * step).min(hi)).collect();
    let positive: Vec<bool> = grid
        .par_iter()
        .map(|&b| {
            let m = g.eval_f64(b);
            let scale = m.diagonal().iter().map(|x| x.abs()).fold(1.0, f64::max);
            symmetric_eigenvalues(m).map(|ev| ev.first().is_none_or(|&x| x > tol * scale))
        })
        .collect::<Result<_>>()?;
    let mut positive_from = None;
    for (i, &ok) in positive.iter().enumerate().rev() {
        if !ok {
            break;
        }
        positive_from = Some(grid[i]);
    }
    let det = det_poly(&g)?;
    let det_zeros = real_roots(&det, lo, hi, step.min(1e-3), 1e-12);
    Ok(GramScan {
        n,
        d,
        window: [lo, hi],
        step,
        positive_from,
        largest_det_zero: det_zeros.last().copied(),
        det_zeros,
        det: det.to_coeff_strings(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::h_xxz_matrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn clustering() {
        let e = [c(0.0, 0.0), c(1e-9, 0.0), c(1.0, 0.0), c(1.0 + 1.5e-7, 0.0)];
        let (g, amb) = cluster(&e, 1e-7);
        assert_eq!(g.len(), 3);
        assert!(amb);
        let (g, amb) = cluster(&e[..3], 1e-7);
        assert_eq!(g, vec![vec![0, 1], vec![2]]);
        assert!(!amb);
    }

    #[test]
    fn jordan_block_of_two_sites_at_q_i() {
        let m = Evaluated::Complex(h_xxz_matrix(2, c(0.0, 1.0)).unwrap());
        let j = jordan_detect(&m, DEFAULT_TOL).unwrap();
        assert!(!j.inconclusive);
        assert_eq!(j.clusters.len(), 1);
        let z = &j.clusters[0];
        assert_eq!((z.algebraic, z.geometric), (4, 3));
        assert_eq!(j.nontrivial_blocks().len(), 1);
        assert_eq!(j.nontrivial_blocks()[0].1, 2);
        assert!(z.eigenvalue[0].abs() < 1e-7 && z.eigenvalue[1].abs() < 1e-7);
    }

    #[test]
    fn symmetric_has_no_blocks() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 3.0]);
        let j = jordan_detect(&Evaluated::Real(m), DEFAULT_TOL).unwrap();
        assert!(j.diagonalisable && !j.inconclusive);
        assert_eq!(j.clusters.iter().map(|c| c.algebraic).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn loop_six_zero() {
        let case = LoopCase::new(6, 0).unwrap();
        let r = case.certify(1.3, 1e-9, DEFAULT_TOL);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.reality.method, Method::Similarity);
        let r = case.certify(1.0, DEFAULT_TOL, DEFAULT_TOL);
        assert_eq!(r.reality.diagonalisable, Some(true));
    }

    #[test]
    fn xxz_four_sites() {
        let q = c(0.4f64.cos(), 0.4f64.sin());
        let m = Evaluated::Complex(h_xxz_matrix(4, q).unwrap());
        assert!(check_reality("xxz", &m, 1e-8).passed());
        let spin = Evaluated::Real(h_spin_matrix(4).unwrap().eval_f64(-2.0));
        assert!(check_reality("spin", &spin, 1e-12).passed());
    }

    #[test]
    fn positivity() {
        let s = inner_product_s(6, 0).unwrap();
        let r = check_positive_definite(&s, &[-2.5, -1.0, 0.0, 1.0, 2.0, 3.0], 1e-10).unwrap();
        assert!(r.passed);
        let s = inner_product_s(8, 2).unwrap();
        assert!(check_positive_definite(&s, &[-2.5, -1.0, 0.0, 1.0, 2.0, 3.0], 1e-10).unwrap().passed);
        let one = inner_product_s(5, 5).unwrap();
        assert!(check_positive_definite(&one, &[0.0], 1e-10).unwrap().passed);
    }

    #[test]
    fn inclusion_small() {
        let r = spectral_inclusion(4, 1.7, 1e-8).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        let r = spectral_inclusion(2, 0.6, 1e-8).unwrap();
        assert_eq!(r.xxz.len(), 2);
        assert!((r.xxz[0] + 0.6).abs() < 1e-12 && r.xxz[1].abs() < 1e-12);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn gram_scan() {
        let s = gram_positivity_scan(4, 0, -3.0, 3.0, 0.01, 1e-10).unwrap();
        assert_eq!(s.det_zeros.len(), 3);
        assert!((s.largest_det_zero.unwrap() - 1.0).abs() < 1e-10);
        assert!((s.positive_from.unwrap() - 1.01).abs() < 1e-9);
        let s = gram_positivity_scan(3, 3, -3.0, 3.0, 0.5, 1e-10).unwrap();
        assert_eq!(s.det, vec!["1"]);
        assert_eq!(s.positive_from, Some(-3.0));
    }
}
