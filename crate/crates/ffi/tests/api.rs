use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::ffi::{CStr, CString};
use std::ptr;

use boseq_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(boseq_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn coherent(n: usize, sites: &[[f64; 4]]) -> *mut BoseqState {
    let flat: Vec<f64> = sites.iter().flatten().copied().collect();
    let mut out = ptr::null_mut();
    let st = unsafe { boseq_state_coherent(n, sites.len(), flat.as_ptr(), &mut out) };
    assert_eq!(st, BoseqStatus::Ok, "{}", last_error());
    out
}

fn spin(axis: BoseqAxis, site: usize, n_sites: usize, n: usize) -> *mut BoseqOperator {
    let mut out = ptr::null_mut();
    let st = unsafe { boseq_operator_spin(axis as u32, site, n_sites, n, &mut out) };
    assert_eq!(st, BoseqStatus::Ok, "{}", last_error());
    out
}

const PLUS: [f64; 4] = [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0];

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(boseq_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn fock_state_amplitudes() {
    let mut s = ptr::null_mut();
    let ks = [1usize, 0];
    assert_eq!(
        unsafe { boseq_state_fock(2, 2, ks.as_ptr(), &mut s) },
        BoseqStatus::Ok
    );
    let dim = unsafe { boseq_state_dim(s) };
    assert_eq!(dim, 9);
    let mut buf = vec![0.0; 2 * dim];
    assert_eq!(
        unsafe { boseq_state_amplitudes(s, buf.as_mut_ptr(), buf.len()) },
        BoseqStatus::Ok
    );
    // site 1 varies slowest: k1 = 1, k2 = 0 sits at 1 * 3 + 0
    let mut expect = vec![0.0; 18];
    expect[2 * 3] = 1.0;
    assert_eq!(buf, expect);
    assert_eq!(
        unsafe { boseq_state_amplitudes(s, buf.as_mut_ptr(), 4) },
        BoseqStatus::DimensionMismatch
    );
    unsafe { boseq_state_free(s) };
}

#[test]
fn precession_under_sz() {
    // e^{-i S^z t} on an S^x eigenstate: <S^x> = N cos(2t)
    let n = 3;
    let psi = coherent(n, &[PLUS]);
    let sz = spin(BoseqAxis::Z, 1, 1, n);
    let sx = spin(BoseqAxis::X, 1, 1, n);
    let t = 0.37;
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { boseq_evolve(psi, sz, t, &mut out) },
        BoseqStatus::Ok
    );
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { boseq_expectation(out, sx, &mut re, &mut im) },
        BoseqStatus::Ok
    );
    assert!((re - n as f64 * (2.0 * t).cos()).abs() < 1e-10, "{re}");
    assert!(im.abs() < 1e-12);
    unsafe {
        boseq_state_free(psi);
        boseq_state_free(out);
        boseq_operator_free(sz);
        boseq_operator_free(sx);
    }
}

#[test]
fn entangler_entropy_through_handles() {
    // pi/4 under S^z S^z for N = 1 gives a maximally entangled pair
    let n = 1;
    let psi = coherent(n, &[PLUS, PLUS]);
    let z1 = spin(BoseqAxis::Z, 1, 2, n);
    let z2 = spin(BoseqAxis::Z, 2, 2, n);
    let mut zz = ptr::null_mut();
    assert_eq!(
        unsafe { boseq_operator_multiply(z1, z2, &mut zz) },
        BoseqStatus::Ok
    );
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { boseq_evolve(psi, zz, PI / 4.0, &mut out) },
        BoseqStatus::Ok
    );
    let keep = [1usize];
    let mut s = f64::NAN;
    assert_eq!(
        unsafe { boseq_entanglement_entropy(out, keep.as_ptr(), 1, &mut s) },
        BoseqStatus::Ok
    );
    assert!((s - 1.0).abs() < 1e-10, "{s}");

    let mut f = 0.0;
    assert_eq!(
        unsafe { boseq_state_fidelity(psi, psi, &mut f) },
        BoseqStatus::Ok
    );
    assert!((f - 1.0).abs() < 1e-14);
    unsafe {
        for st in [psi, out] {
            boseq_state_free(st);
        }
        for op in [z1, z2, zz] {
            boseq_operator_free(op);
        }
    }
}

#[test]
fn combine_checks_dimensions() {
    let a = spin(BoseqAxis::Z, 1, 1, 2);
    let b = spin(BoseqAxis::Z, 1, 2, 2);
    let mut out = ptr::null_mut();
    let st = unsafe { boseq_operator_combine(a, 1.0, b, 1.0, &mut out) };
    assert_eq!(st, BoseqStatus::DimensionMismatch);
    assert!(out.is_null());
    assert!(!last_error().is_empty());
    let mut id = ptr::null_mut();
    assert_eq!(
        unsafe { boseq_operator_identity(3, &mut id) },
        BoseqStatus::Ok
    );
    assert_eq!(
        unsafe { boseq_operator_combine(a, 2.0, id, -1.0, &mut out) },
        BoseqStatus::Ok
    );
    assert_eq!(unsafe { boseq_operator_dim(out) }, 3);
    unsafe {
        for op in [a, b, id, out] {
            boseq_operator_free(op);
        }
    }
}

#[test]
fn deutsch_classifies_and_reports_ambiguity() {
    let n = 2;
    let mut r = BoseqDeutschResult::default();
    let t = PI / (2.0 * n as f64);
    assert_eq!(
        unsafe { boseq_deutsch(BoseqOracle::Bal10 as u32, n, t, &mut r) },
        BoseqStatus::Ok
    );
    assert_eq!(r.classification, 1);
    assert!(r.overlap_minus > 0.99);
    assert_eq!(
        unsafe { boseq_deutsch(BoseqOracle::Const1 as u32, n, t, &mut r) },
        BoseqStatus::Ok
    );
    assert_eq!(r.classification, 0);

    let st = unsafe { boseq_deutsch(BoseqOracle::Bal01 as u32, n, t / 2.0, &mut r) };
    assert_eq!(st, BoseqStatus::Ambiguous);
    assert_eq!(r.classification, -1);
    assert!((r.overlap_plus - 0.25).abs() < 1e-12);
    assert!((r.overlap_minus - 0.25).abs() < 1e-12);
    assert!(last_error().contains("ambiguous"));

    assert_eq!(
        unsafe { boseq_deutsch(7, n, t, &mut r) },
        BoseqStatus::InvalidArgument
    );
}

#[test]
fn schedule_compiles_to_text() {
    let src = CString::new("qubits 2\nterm 1.0 Z1 Z2\nevolve pi/4\n").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { boseq_compile_schedule(src.as_ptr(), 3, &mut out) },
        BoseqStatus::Ok,
        "{}",
        last_error()
    );
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { boseq_string_free(out) };
    assert!(text.contains("bosons 3"), "{text}");
    assert!(text.contains("/N"), "{text}");

    let bad = CString::new("qubits 2\nterm 1.0 Z1 Z3\n").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { boseq_compile_schedule(bad.as_ptr(), 3, &mut out) },
        BoseqStatus::Schedule
    );
    assert!(out.is_null());
    assert!(last_error().contains("line 2"), "{}", last_error());
}

#[test]
fn null_and_oversized_inputs_are_refused() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { boseq_state_coherent(1, 1, ptr::null(), &mut out) },
        BoseqStatus::NullPointer
    );
    assert_eq!(unsafe { boseq_state_dim(ptr::null()) }, 0);
    unsafe { boseq_state_free(ptr::null_mut()) };
    unsafe { boseq_string_free(ptr::null_mut()) };
    let mut f = 0.0;
    assert_eq!(
        unsafe { boseq_state_fidelity(ptr::null(), ptr::null(), &mut f) },
        BoseqStatus::NullPointer
    );
    assert_eq!(
        unsafe { boseq_operator_spin(9, 1, 1, 1, &mut ptr::null_mut()) },
        BoseqStatus::InvalidArgument
    );

    let ks = [0usize; 4];
    let mut s = ptr::null_mut();
    // 101^4 amplitudes exceed the default cap
    let st = unsafe { boseq_state_fock(100, 4, ks.as_ptr(), &mut s) };
    assert_eq!(st, BoseqStatus::NumericalCap);
    assert!(last_error().contains("cap"));
}
