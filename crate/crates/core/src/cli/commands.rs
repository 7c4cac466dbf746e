use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::output::{decimal, grid, Output, Status, Table};
use super::parse::{beta_grid, q_value, twice_half_integer, window};
use super::{check_cap, BasisArgs, DecomposeArgs, MatrixArgs, MatrixKind, SpectrumCommand, Target, VerifyArgs};
use crate::error::{invalid, Result};
use crate::intertwiner::{inner_product_s, Intertwiner};
use crate::poly_matrix::PolyMatrix;
use crate::spectral::{
    check_positive_definite, check_reality, gram_positivity_scan, jordan_detect, reality_sweep, spectral_inclusion,
    xxz_reality, xxz_reality_at, Evaluated, LoopCase, LoopCertificate, SpectralReport, Verdict,
};
use crate::spin::{h_spin_matrix, h_spin_on, h_xxz_matrix, h_xxz_sector, SpinSector, SpinState};
use crate::standard::StandardModule;
use crate::structure::{dimension_audit, sector_decomposition, Ell, SummandKind};
use crate::suites::{run_suite, SuiteParams};

const DECOMPOSE_CAP: usize = 60;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

fn verdict_status(v: Verdict) -> Status {
    match v {
        Verdict::Pass => Status::Pass,
        Verdict::Fail => Status::Fail,
        Verdict::Inconclusive => Status::Inconclusive,
    }
}

fn dyadic_string((num, den): (u64, u64)) -> String {
    format!("{num}/{den}")
}

pub fn basis(a: &BasisArgs) -> Result<Output> {
    let mut table = Table::new(&["index", "label", "dyadic"]);
    let record;
    if let Some(v) = &a.links {
        let (n, d) = (v[0], v[1]);
        check_cap(n, false)?;
        let m = StandardModule::new(n, d)?;
        let items: Vec<Value> = m
            .basis()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                table.push(vec![(i + 1).to_string(), l.to_string(), dyadic_string(l.dyadic())]);
                json!({"index": i + 1, "label": l.to_string(), "arcs": l.arcs(), "defects": l.defects(), "dyadic": dyadic_string(l.dyadic())})
            })
            .collect();
        record = json!({"kind": "links", "n": n, "d": d, "dim": m.dim(), "basis": items});
    } else {
        let v = a.spins.as_ref().expect("one of the group is required");
        let len: usize = v[0].parse().or_else(|_| invalid(format!("bad length {:?}", v[0])))?;
        check_cap(len, false)?;
        let twice_s = twice_half_integer(&v[1])?;
        let sector = SpinSector::new(len, twice_s)?;
        let items: Vec<Value> = sector
            .states()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                table.push(vec![(i + 1).to_string(), s.to_string(), dyadic_string(s.dyadic())]);
                json!({"index": i + 1, "label": s.to_string(), "down_legs": s.down_legs(), "dyadic": dyadic_string(s.dyadic())})
            })
            .collect();
        record = json!({"kind": "spins", "length": len, "twice_s": twice_s, "dim": sector.dim(), "basis": items});
    }
    let pretty = grid(&table.header, &table.rows);
    Ok(Output { command: "basis", status: Status::Info, records: vec![record], stream: false, table, pretty })
}

enum Entries {
    Exact(PolyMatrix),
    Real(nalgebra::DMatrix<f64>),
    Complex(nalgebra::DMatrix<Complex64>),
}

fn link_labels(m: &StandardModule) -> Vec<String> {
    m.basis().iter().map(|l| l.to_string()).collect()
}

fn state_labels(states: &[SpinState]) -> Vec<String> {
    states.iter().map(|s| s.to_string()).collect()
}

fn full_states(len: usize) -> Vec<SpinState> {
    (0..1u64 << len).map(|m| SpinState::new(len, m)).collect()
}

fn need_d(a: &MatrixArgs) -> Result<usize> {
    a.d.ok_or_else(|| crate::Error::InvalidParameters("this matrix needs both n and d".into()))
}

pub fn matrix(a: &MatrixArgs, precision: usize) -> Result<Output> {
    check_cap(a.n, false)?;
    let n = a.n;
    let sector = a.sector.as_deref().map(twice_half_integer).transpose()?;
    let (exact, rows, cols) = match a.kind {
        MatrixKind::Loop | MatrixKind::Gram | MatrixKind::S => {
            let m = StandardModule::new(n, need_d(a)?)?;
            let labels = link_labels(&m);
            let x = match a.kind {
                MatrixKind::Loop => m.hamiltonian(),
                MatrixKind::Gram => m.gram(),
                _ => inner_product_s(n, m.d())?,
            };
            (Some(x), labels.clone(), labels)
        }
        MatrixKind::F => {
            let f = Intertwiner::new(n, need_d(a)?)?;
            let rows = state_labels(f.sector.states());
            (Some(f.matrix.clone()), rows, link_labels(&f.module))
        }
        MatrixKind::Spin => match sector {
            Some(ts) => {
                let s = SpinSector::new(n, ts)?;
                let labels = state_labels(s.states());
                (Some(h_spin_on(&s)), labels.clone(), labels)
            }
            None => {
                let labels = state_labels(&full_states(n));
                (Some(h_spin_matrix(n)?), labels.clone(), labels)
            }
        },
        MatrixKind::Xxz => {
            let labels = match sector {
                Some(ts) => state_labels(SpinSector::new(n, ts)?.states()),
                None => state_labels(&full_states(n)),
            };
            (None, labels.clone(), labels)
        }
    };
    let q = match (&a.q, a.beta) {
        (Some(q), _) => Some(q_value(q)?),
        (None, Some(b)) => Some(crate::scalar::q_from_beta(b, true).q),
        _ => None,
    };
    let entries = match exact {
        Some(x) => match a.beta {
            Some(b) => Entries::Real(x.eval_f64(b)),
            None => Entries::Exact(x),
        },
        None => {
            let q = q.ok_or_else(|| crate::Error::InvalidParameters("the XXZ matrix needs --q or --beta".into()))?;
            Entries::Complex(match sector {
                Some(ts) => h_xxz_sector(n, ts, q)?,
                None => h_xxz_matrix(n, q)?,
            })
        }
    };
    let kind = format!("{:?}", a.kind).to_lowercase();
    let cell = |r: usize, c: usize| -> (Value, String, String) {
        match &entries {
            Entries::Exact(m) => {
                let p = m.get(r, c);
                (
                    json!(p.to_coeff_strings()),
                    serde_json::to_string(&p.to_coeff_strings()).expect("strings"),
                    p.to_string(),
                )
            }
            Entries::Real(m) => {
                let s = decimal(m[(r, c)], precision);
                (json!(s), s.clone(), s)
            }
            Entries::Complex(m) => {
                let z = m[(r, c)];
                let (re, im) = (decimal(z.re, precision), decimal(z.im, precision));
                let text = format!("{re}{}{}i", if z.im < 0.0 { "" } else { "+" }, im);
                (json!([re, im]), text.clone(), text)
            }
        }
    };
    let mut table = Table::new(&["row", "col", "row_label", "col_label", "value"]);
    let mut json_rows = Vec::with_capacity(rows.len());
    let mut text_rows = Vec::with_capacity(rows.len());
    for r in 0..rows.len() {
        let mut jr = Vec::with_capacity(cols.len());
        let mut tr = vec![rows[r].clone()];
        for c in 0..cols.len() {
            let (j, csv_text, text) = cell(r, c);
            jr.push(j);
            table.push(vec![(r + 1).to_string(), (c + 1).to_string(), rows[r].clone(), cols[c].clone(), csv_text]);
            tr.push(text);
        }
        json_rows.push(Value::Array(jr));
        text_rows.push(tr);
    }
    let mut record = json!({
        "kind": kind,
        "n": n,
        "exact": matches!(entries, Entries::Exact(_)),
        "rows": rows,
        "cols": cols,
        "entries": json_rows,
    });
    if let Some(d) = a.d {
        record["d"] = json!(d);
    }
    if let Some(ts) = sector {
        record["twice_s"] = json!(ts);
    }
    if let Some(b) = a.beta {
        record["beta"] = json!(decimal(b, precision));
    }
    if let (Some(q), MatrixKind::Xxz) = (q, a.kind) {
        record["q"] = json!([decimal(q.re, precision), decimal(q.im, precision)]);
    }
    let mut header = vec![String::new()];
    header.extend(cols.iter().cloned());
    let pretty = grid(&header, &text_rows);
    Ok(Output { command: "matrix", status: Status::Info, records: vec![record], stream: false, table, pretty })
}

pub fn verify(a: &VerifyArgs) -> Result<Output> {
    let params = SuiteParams {
        n_max: a.n_max,
        single: a.n.zip(a.d),
        p_max: a.p_max,
        a_max: a.a_max,
        b_max: a.b_max,
        max_sub: a.max_sub,
    };
    let reports = run_suite(a.suite, &params)?;
    let passed = reports.iter().all(|r| r.passed);
    let status = if passed { Status::Pass } else { Status::Fail };
    let mut table = Table::new(&["check", "params", "passed", "failures", "checked", "detail"]);
    let mut pretty = String::new();
    for r in &reports {
        let params = serde_json::to_string(&r.params).expect("json");
        table.push(vec![
            r.check.clone(),
            params.clone(),
            r.passed.to_string(),
            r.failures.to_string(),
            r.checked.to_string(),
            r.detail.clone().unwrap_or_default(),
        ]);
        let flag = if r.passed { "PASS" } else { "FAIL" };
        pretty.push_str(&format!("{flag} {} {} ({} checked)", r.check, params, r.checked));
        if let Some(d) = &r.detail {
            pretty.push_str(&format!(": {d}"));
        }
        pretty.push('\n');
    }
    pretty.push_str(&format!("{} of {} reports passed\n", reports.iter().filter(|r| r.passed).count(), reports.len()));
    let suite = a.suite.name();
    let record = json!({"suite": suite, "passed": passed, "reports": reports});
    Ok(Output { command: "verify", status, records: vec![record], stream: false, table, pretty })
}

struct Stream {
    status: Status,
    records: Vec<Value>,
    table: Table,
    pretty: String,
}

impl Stream {
    fn new() -> Self {
        Stream {
            status: Status::Info,
            records: Vec::new(),
            table: Table::new(&["kind", "id", "verdict", "max_imag", "detail"]),
            pretty: String::new(),
        }
    }

    fn push(&mut self, kind: &str, id: String, status: Status, max_imag: Option<f64>, detail: String, value: Value) {
        self.status = self.status.and(status);
        let mi = max_imag.map(|x| format!("{x:e}")).unwrap_or_default();
        let flag = format!("{status:?}").to_uppercase();
        self.pretty.push_str(&format!("{flag:<12} {kind} {id}"));
        if !mi.is_empty() {
            self.pretty.push_str(&format!(" max|Im|={mi}"));
        }
        if !detail.is_empty() {
            self.pretty.push_str(&format!(" {detail}"));
        }
        self.pretty.push('\n');
        self.table.push(vec![kind.to_string(), id, format!("{status:?}").to_lowercase(), mi, detail]);
        let mut v = json!({"kind": kind});
        v["report"] = value;
        self.records.push(v);
    }

    fn reality(&mut self, r: &SpectralReport) {
        let detail = match r.diagonalisable {
            Some(true) => "diagonalisable".to_string(),
            Some(false) => "not diagonalisable".to_string(),
            None => r.note.clone().unwrap_or_default(),
        };
        self.push("reality", r.matrix_id.clone(), verdict_status(r.verdict), Some(r.max_imag), detail, to_value(r));
    }

    /// Reality of a loop Hamiltonian, plus a failure line if `S` was not
    /// positive definite.
    fn certificate(&mut self, c: &LoopCertificate) {
        self.reality(&c.reality);
        if !c.positivity.passed {
            let id = format!("S n={} d={} beta={}", c.n, c.d, c.beta);
            self.push("positivity", id, Status::Fail, None, "not positive definite".into(), to_value(&c.positivity));
        }
    }

    fn finish(self) -> Output {
        Output {
            command: "spectrum",
            status: self.status,
            records: self.records,
            stream: true,
            table: self.table,
            pretty: self.pretty,
        }
    }
}

fn single_target(t: &Target) -> Result<()> {
    if t.sweep.is_some() {
        return invalid("--sweep applies to reality only");
    }
    Ok(())
}

pub fn spectrum(c: &SpectrumCommand, tol: f64) -> Result<Output> {
    let mut out = Stream::new();
    match c {
        SpectrumCommand::Reality { target, beta, q } => {
            let betas = beta_grid(beta)?;
            if let Some(v) = &target.loop_module {
                let (n, d) = (v[0], v[1]);
                check_cap(n, false)?;
                let case = LoopCase::new(n, d)?;
                let certs: Vec<_> = betas.par_iter().map(|&b| case.certify(b, tol, tol)).collect();
                for cert in &certs {
                    out.certificate(cert);
                }
            } else if let Some(n) = target.xxz {
                check_cap(n, false)?;
                match q {
                    Some(q) => {
                        let q = q_value(q)?;
                        out.reality(&xxz_reality_at(n, q, &format!("xxz n={n} q={},{}", q.re, q.im), tol));
                    }
                    None => {
                        let reps: Vec<SpectralReport> = betas.par_iter().map(|&b| xxz_reality(n, b, tol)).collect();
                        for r in &reps {
                            out.reality(r);
                        }
                    }
                }
            } else if let Some(len) = target.spin {
                check_cap(len, false)?;
                let h = h_spin_matrix(len)?;
                for &b in &betas {
                    out.reality(&check_reality(
                        &format!("spin L={len} beta={b}"),
                        &Evaluated::Real(h.eval_f64(b)),
                        tol,
                    ));
                }
            } else if let Some(n_max) = target.sweep {
                check_cap(n_max, true)?;
                for cert in &reality_sweep(n_max, &betas, tol, tol)? {
                    out.certificate(cert);
                }
            }
        }
        SpectrumCommand::Positivity { n, d, beta } => {
            check_cap(*n, false)?;
            let betas = beta_grid(beta)?;
            let r = check_positive_definite(&inner_product_s(*n, *d)?, &betas, tol)?;
            let status = if r.passed { Status::Pass } else { Status::Fail };
            let worst = r.samples.iter().filter_map(|s| s.min_pivot).fold(f64::INFINITY, f64::min);
            out.push(
                "positivity",
                format!("S n={n} d={d}"),
                status,
                None,
                format!("min pivot {worst:e}"),
                to_value(&r),
            );
        }
        SpectrumCommand::Inclusion { n, beta } => {
            check_cap(*n, false)?;
            let betas = beta_grid(beta)?;
            let reps: Vec<_> = betas.par_iter().map(|&b| spectral_inclusion(*n, b, tol)).collect::<Result<_>>()?;
            for r in reps {
                let detail = format!("equality={} inclusion={} strict={}", r.equality, r.inclusion, r.strict);
                out.push(
                    "inclusion",
                    format!("n={n} beta={}", r.beta),
                    verdict_status(r.verdict),
                    Some(r.xxz_max_imag),
                    detail,
                    to_value(&r),
                );
            }
        }
        SpectrumCommand::Jordan { target, beta, q } => {
            single_target(target)?;
            let (id, m) = if let Some(v) = &target.loop_module {
                check_cap(v[0], false)?;
                let b = beta.ok_or_else(|| crate::Error::InvalidParameters("--beta is required".into()))?;
                (
                    format!("loop n={} d={} beta={b}", v[0], v[1]),
                    Evaluated::Real(StandardModule::new(v[0], v[1])?.hamiltonian().eval_f64(b)),
                )
            } else if let Some(n) = target.xxz {
                check_cap(n, false)?;
                let qv = match (q, beta) {
                    (Some(q), _) => q_value(q)?,
                    (None, Some(b)) => crate::scalar::q_from_beta(*b, true).q,
                    _ => return invalid("--q or --beta is required"),
                };
                (format!("xxz n={n} q={},{}", qv.re, qv.im), Evaluated::Complex(h_xxz_matrix(n, qv)?))
            } else {
                let len = target.spin.expect("target group is required");
                check_cap(len, false)?;
                let b = beta.ok_or_else(|| crate::Error::InvalidParameters("--beta is required".into()))?;
                (format!("spin L={len} beta={b}"), Evaluated::Real(h_spin_matrix(len)?.eval_f64(b)))
            };
            let j = jordan_detect(&m, tol)?;
            let blocks = j.nontrivial_blocks();
            let detail = if blocks.is_empty() {
                "no nontrivial blocks".to_string()
            } else {
                let parts: Vec<String> = blocks
                    .iter()
                    .map(|(z, k)| format!("size {k} at ({}, {})", decimal(z[0], 9), decimal(z[1], 9)))
                    .collect();
                parts.join(", ")
            };
            let status = if j.inconclusive { Status::Inconclusive } else { Status::Info };
            out.push("jordan", id, status, None, detail, to_value(&j));
        }
        SpectrumCommand::GramScan { n, d, window: w, step } => {
            check_cap(*n, false)?;
            let (lo, hi) = window(w)?;
            let s = gram_positivity_scan(*n, *d, lo, hi, *step, tol)?;
            let detail = format!(
                "positive from {} ; largest det zero {}",
                s.positive_from.map_or("never".into(), |x| x.to_string()),
                s.largest_det_zero.map_or("none".into(), |x| x.to_string())
            );
            out.push("gram-scan", format!("G n={n} d={d}"), Status::Info, None, detail, to_value(&s));
        }
    }
    Ok(out.finish())
}

pub fn decompose(a: &DecomposeArgs) -> Result<Output> {
    // Standard and projective dimensions are binomials; only irreducible
    // summands need a Gram matrix.
    if a.n > DECOMPOSE_CAP {
        return Err(crate::Error::SizeCap { n: a.n, cap: DECOMPOSE_CAP });
    }
    let twice_s = twice_half_integer(&a.s)?;
    let ell: Ell = a.ell.parse()?;
    let dec = sector_decomposition(a.n, twice_s, ell)?;
    if dec.summands.iter().any(|s| s.kind == SummandKind::Irreducible) {
        check_cap(a.n, false)?;
    }
    let audit = dimension_audit(&dec)?;
    let status = if audit.passed { Status::Pass } else { Status::Fail };
    let mut table = Table::new(&["kind", "d", "d_minus"]);
    for s in &dec.summands {
        table.push(vec![
            format!("{:?}", s.kind).to_lowercase(),
            s.d.to_string(),
            s.d_minus.map(|x| x.to_string()).unwrap_or_default(),
        ]);
    }
    let mut pretty = format!("n = {}, 2s = {}, ell = {}\n{}\n", dec.n, dec.twice_s, dec.ell, dec.listing());
    pretty.push_str(&format!(
        "audit: {} (sector dimension {}, summed {})\n",
        if audit.passed { "pass" } else { "FAIL" },
        audit.sector_dim,
        audit.total
    ));
    if dec.semisimple && ell != Ell::Generic {
        pretty.push_str("semisimple at this root of unity; generic rule used\n");
    }
    if dec.beta_zero_identification {
        pretty.push_str("note: at β = 0 with n even, V_{n,0} and I_{n,2} are isomorphic\n");
    }
    let record = json!({"decomposition": dec, "listing": dec.listing(), "audit": audit});
    Ok(Output { command: "decompose", status, records: vec![record], stream: false, table, pretty })
}
