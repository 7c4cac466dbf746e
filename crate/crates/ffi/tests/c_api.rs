use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use templie_ffi::*;

fn last_error() -> String {
    let p = templie_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    templie_string_free(s);
    out
}

#[test]
fn loop_hamiltonian_round_trip() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(templie_loop_hamiltonian(4, 0, &mut m), TemplieStatus::Ok);
        assert!(templie_last_error().is_null());
        assert_eq!(templie_matrix_rows(m), 2);
        assert_eq!(templie_matrix_cols(m), 2);

        let mut buf = [0.0; 4];
        assert_eq!(templie_matrix_eval(m, 2.0, buf.as_mut_ptr(), 4), TemplieStatus::Ok);
        let exact = templie::standard::hamiltonian_matrix(4, 0).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(buf[r * 2 + c], exact.get(r, c).eval_f64(2.0));
                let mut deg = 0i64;
                assert_eq!(templie_matrix_entry_degree(m, r, c, &mut deg), TemplieStatus::Ok);
                assert_eq!(deg, exact.get(r, c).degree().map_or(-1, |k| k as i64));
                let mut s = ptr::null_mut();
                assert_eq!(templie_matrix_entry_string(m, r, c, &mut s), TemplieStatus::Ok);
                let parsed: Vec<String> = serde_json::from_str(&take_string(s)).unwrap();
                assert_eq!(parsed, exact.get(r, c).to_coeff_strings());
                for k in 0..3 {
                    let mut v = 0i64;
                    assert_eq!(templie_matrix_entry_coefficient(m, r, c, k, &mut v), TemplieStatus::Ok);
                    let want = exact.get(r, c).coeffs().get(k).map_or(0, |b| i64::try_from(b).unwrap());
                    assert_eq!(v, want);
                }
            }
        }
        templie_matrix_free(m);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(templie_loop_hamiltonian(4, 1, &mut m), TemplieStatus::InvalidArgument);
        assert!(m.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(templie_gram(40, 0, &mut m), TemplieStatus::SizeCap);
        assert_eq!(templie_gram(4, 0, ptr::null_mut()), TemplieStatus::NullPointer);

        assert_eq!(templie_gram(4, 0, &mut m), TemplieStatus::Ok);
        assert!(templie_last_error().is_null());
        let mut buf = [0.0; 3];
        assert_eq!(templie_matrix_eval(m, 1.0, buf.as_mut_ptr(), 3), TemplieStatus::BufferTooSmall);
        let mut deg = 0;
        assert_eq!(templie_matrix_entry_degree(m, 2, 0, &mut deg), TemplieStatus::OutOfRange);
        assert_eq!(templie_matrix_entry_degree(ptr::null(), 0, 0, &mut deg), TemplieStatus::NullPointer);
        templie_matrix_free(m);
        templie_matrix_free(ptr::null_mut());
        templie_string_free(ptr::null_mut());
        assert_eq!(templie_matrix_rows(ptr::null()), 0);
    }
}

#[test]
fn intertwiner_shapes() {
    unsafe {
        let mut f = ptr::null_mut();
        let mut s = ptr::null_mut();
        assert_eq!(templie_intertwiner(6, 2, &mut f), TemplieStatus::Ok);
        assert_eq!(templie_inner_product(6, 2, &mut s), TemplieStatus::Ok);
        assert_eq!(templie_matrix_rows(f), 10);
        assert_eq!(templie_matrix_cols(f), 9);
        assert_eq!(templie_matrix_rows(s), 9);
        templie_matrix_free(f);
        templie_matrix_free(s);

        let mut h = ptr::null_mut();
        assert_eq!(templie_spin_sector_hamiltonian(4, 0, &mut h), TemplieStatus::Ok);
        assert_eq!(templie_matrix_rows(h), 6);
        templie_matrix_free(h);
        assert_eq!(templie_spin_hamiltonian(3, &mut h), TemplieStatus::Ok);
        assert_eq!(templie_matrix_cols(h), 8);
        templie_matrix_free(h);
    }
}

#[test]
fn json_entry_points() {
    unsafe {
        let suite = CString::new("intertwine").unwrap();
        let mut passed = -1;
        let mut json = ptr::null_mut();
        assert_eq!(templie_verify(suite.as_ptr(), 5, &mut passed, &mut json), TemplieStatus::Ok);
        assert_eq!(passed, 1);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["suite"], "intertwine");

        let bad = CString::new("nonsense").unwrap();
        assert_eq!(templie_verify(bad.as_ptr(), 0, &mut passed, &mut json), TemplieStatus::InvalidArgument);

        let mut verdict = TemplieVerdict::Fail;
        assert_eq!(templie_loop_reality(6, 0, 0.5, 1e-7, &mut verdict, &mut json), TemplieStatus::Ok);
        assert_eq!(verdict, TemplieVerdict::Pass);
        templie_string_free(json);

        assert_eq!(templie_xxz_reality(4, 0.0, 0.0, 1e-7, &mut verdict, &mut json), TemplieStatus::InvalidArgument);
        assert_eq!(templie_xxz_reality(4, 0.8, 0.6, 1e-7, &mut verdict, &mut json), TemplieStatus::Ok);
        assert_eq!(verdict, TemplieVerdict::Pass);
        templie_string_free(json);

        assert_eq!(templie_decompose(20, 6, 5, &mut passed, &mut json), TemplieStatus::Ok);
        assert_eq!(passed, 1);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["listing"], "P10 + P12 + V14 + V16 + P20");
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(templie_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/templie.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["templie_loop_hamiltonian", "templie_matrix_eval", "templie_decompose", "TEMPLIE_STATUS_SIZE_CAP"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).status() else {
        eprintln!("cc not found; skipping compile check");
        return;
    };
    assert!(status.success());
}
