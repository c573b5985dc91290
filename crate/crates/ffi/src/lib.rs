//! C ABI over the `boseq` simulator.
//!
//! States and operators are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns a
//! [`BoseqStatus`]; on failure [`boseq_last_error`] describes what went wrong
//! on the calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use boseq::algolab::{run_deutsch, Classification, OracleKind};
use boseq::dynamics::evolve_unitary;
use boseq::entanglement::entanglement_entropy;
use boseq::schedc::{compile_to_bosonic, parse_schedule, pretty_print};
use boseq::spin::{
    coherent_qubit_state, embed, expectation, spin_operator, Axis, Operator, RegisterState,
};
use boseq::{Error, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoseqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    /// Dimension cap or truncation limit exceeded.
    NumericalCap = 4,
    NonHermitian = 5,
    /// Deutsch measurement without a decisive outcome; overlaps are still reported.
    Ambiguous = 6,
    Schedule = 7,
    NumericalFailure = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoseqAxis {
    X = 0,
    Y = 1,
    Z = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoseqOracle {
    Const0 = 0,
    Const1 = 1,
    Bal01 = 2,
    Bal10 = 3,
}

/// Outcome of [`boseq_deutsch`]. `classification` is 0 for constant, 1 for
/// balanced and -1 when ambiguous.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BoseqDeutschResult {
    pub classification: i32,
    pub overlap_plus: f64,
    pub overlap_minus: f64,
}

/// A multi-site register state.
pub struct BoseqState {
    inner: RegisterState,
}

/// A linear operator on a register.
pub struct BoseqOperator {
    inner: Operator,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(BoseqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            _ if e.is_numerical_cap() => BoseqStatus::NumericalCap,
            Error::Dimension { .. } => BoseqStatus::DimensionMismatch,
            Error::NonHermitian(_) => BoseqStatus::NonHermitian,
            Error::AmbiguousOutcome { .. } => BoseqStatus::Ambiguous,
            Error::Schedule(_) => BoseqStatus::Schedule,
            Error::NegativeEigenvalue(_) | Error::Fit(_) | Error::NoPeak | Error::StepSize(_) => {
                BoseqStatus::NumericalFailure
            }
            _ => BoseqStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(BoseqStatus::InvalidArgument, msg.into())
}

fn null(name: &str) -> Failure {
    Failure(BoseqStatus::NullPointer, format!("{name} is null"))
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BoseqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            BoseqStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BoseqStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn axis(a: u32) -> Result<Axis, Failure> {
    match a {
        0 => Ok(Axis::X),
        1 => Ok(Axis::Y),
        2 => Ok(Axis::Z),
        _ => Err(invalid(format!("unknown axis {a}"))),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn boseq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn boseq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Largest register dimension any call may allocate.
#[no_mangle]
pub extern "C" fn boseq_set_dim_cap(cap: usize) {
    boseq::spin::set_dim_cap(cap);
}

#[no_mangle]
pub extern "C" fn boseq_dim_cap() -> usize {
    boseq::spin::dim_cap()
}

/// Product of coherent bosonic qubits. `amps` holds `4 * n_sites` doubles:
/// `re(alpha), im(alpha), re(beta), im(beta)` for each site in order.
///
/// # Safety
/// `amps` must point to `4 * n_sites` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_state_coherent(
    n_bosons: usize,
    n_sites: usize,
    amps: *const f64,
    out: *mut *mut BoseqState,
) -> BoseqStatus {
    guard(|| {
        if n_sites == 0 {
            return Err(invalid("n_sites must be at least 1"));
        }
        let a = slice(amps, 4 * n_sites, "amps")?;
        let sites = a
            .chunks_exact(4)
            .map(|c| coherent_qubit_state(C64::new(c[0], c[1]), C64::new(c[2], c[3]), n_bosons))
            .collect::<Result<Vec<_>, _>>()?;
        store(
            out,
            BoseqState {
                inner: RegisterState::product(&sites)?,
            },
        )
    })
}

/// Fock basis state with `ks[n]` bosons in mode `a` on site `n + 1`.
///
/// # Safety
/// `ks` must point to `n_sites` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_state_fock(
    n_bosons: usize,
    n_sites: usize,
    ks: *const usize,
    out: *mut *mut BoseqState,
) -> BoseqStatus {
    guard(|| {
        let ks = slice(ks, n_sites, "ks")?;
        store(
            out,
            BoseqState {
                inner: RegisterState::fock(n_bosons, ks)?,
            },
        )
    })
}

/// # Safety
/// `state` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn boseq_state_free(state: *mut BoseqState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of amplitudes, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn boseq_state_dim(state: *const BoseqState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.dim())
}

/// Copies amplitudes as interleaved `re, im` pairs into `out`, which must hold
/// `2 * dim` doubles.
///
/// # Safety
/// `state` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn boseq_state_amplitudes(
    state: *const BoseqState,
    out: *mut f64,
    len: usize,
) -> BoseqStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let need = 2 * s.inner.dim();
        if len < need {
            return Err(Failure(
                BoseqStatus::DimensionMismatch,
                format!("buffer holds {len} doubles, need {need}"),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let buf = std::slice::from_raw_parts_mut(out, need);
        for (pair, a) in buf.chunks_exact_mut(2).zip(s.inner.amps()) {
            pair[0] = a.re;
            pair[1] = a.im;
        }
        Ok(())
    })
}

/// `|<a|b>|`.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_state_fidelity(
    a: *const BoseqState,
    b: *const BoseqState,
    out: *mut f64,
) -> BoseqStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        if a.inner.dim() != b.inner.dim() {
            return Err(Failure(
                BoseqStatus::DimensionMismatch,
                format!("dimensions {} and {} differ", a.inner.dim(), b.inner.dim()),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = a.inner.fidelity(&b.inner);
        Ok(())
    })
}

/// `S^axis` on `site` (1-based) of an `n_sites` register; `axis` is a [`BoseqAxis`] value.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_operator_spin(
    axis_code: u32,
    site: usize,
    n_sites: usize,
    n_bosons: usize,
    out: *mut *mut BoseqOperator,
) -> BoseqStatus {
    guard(|| {
        let op = embed(
            &spin_operator(axis(axis_code)?, n_bosons)?,
            site,
            n_sites,
            n_bosons,
        )?;
        store(out, BoseqOperator { inner: op })
    })
}

/// Identity on a `dim`-dimensional space.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_operator_identity(
    dim: usize,
    out: *mut *mut BoseqOperator,
) -> BoseqStatus {
    guard(|| {
        if dim == 0 || dim > boseq::spin::dim_cap() {
            return Err(invalid(format!("identity dimension {dim} is out of range")));
        }
        store(
            out,
            BoseqOperator {
                inner: Operator::identity(dim),
            },
        )
    })
}

/// `ca * a + cb * b`.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_operator_combine(
    a: *const BoseqOperator,
    ca: f64,
    b: *const BoseqOperator,
    cb: f64,
    out: *mut *mut BoseqOperator,
) -> BoseqStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        let sum = a
            .inner
            .scaled(C64::new(ca, 0.0))
            .add(&b.inner.scaled(C64::new(cb, 0.0)))?;
        store(out, BoseqOperator { inner: sum })
    })
}

/// Matrix product `a * b`.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_operator_multiply(
    a: *const BoseqOperator,
    b: *const BoseqOperator,
    out: *mut *mut BoseqOperator,
) -> BoseqStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        store(
            out,
            BoseqOperator {
                inner: a.inner.matmul(&b.inner)?,
            },
        )
    })
}

/// # Safety
/// `op` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn boseq_operator_dim(op: *const BoseqOperator) -> usize {
    op.as_ref().map_or(0, |o| o.inner.dim())
}

/// # Safety
/// `op` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn boseq_operator_free(op: *mut BoseqOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// `e^{-iHt} |state>` as a new handle.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_evolve(
    state: *const BoseqState,
    hamiltonian: *const BoseqOperator,
    t: f64,
    out: *mut *mut BoseqState,
) -> BoseqStatus {
    guard(|| {
        let (s, h) = (deref(state, "state")?, deref(hamiltonian, "hamiltonian")?);
        if !t.is_finite() {
            return Err(invalid("time must be finite"));
        }
        store(
            out,
            BoseqState {
                inner: evolve_unitary(&s.inner, &h.inner, t)?,
            },
        )
    })
}

/// `<state| op |state>`.
///
/// # Safety
/// Handles must be live; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_expectation(
    state: *const BoseqState,
    op: *const BoseqOperator,
    re: *mut f64,
    im: *mut f64,
) -> BoseqStatus {
    guard(|| {
        let (s, o) = (deref(state, "state")?, deref(op, "op")?);
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let v = expectation(&s.inner, &o.inner)?;
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// Von Neumann entropy in bits of the sites listed in `keep` (1-based).
///
/// # Safety
/// `state` must be live, `keep` must hold `n_keep` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_entanglement_entropy(
    state: *const BoseqState,
    keep: *const usize,
    n_keep: usize,
    out: *mut f64,
) -> BoseqStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let keep = slice(keep, n_keep, "keep")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = entanglement_entropy(&s.inner, keep)?;
        Ok(())
    })
}

/// Deutsch's algorithm with oracle `oracle` (a [`BoseqOracle`] value) applied
/// for `t_oracle`. On [`BoseqStatus::Ambiguous`] the overlaps are still filled.
///
/// # Safety
/// `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_deutsch(
    oracle: u32,
    n_bosons: usize,
    t_oracle: f64,
    result: *mut BoseqDeutschResult,
) -> BoseqStatus {
    guard(|| {
        if result.is_null() {
            return Err(null("result"));
        }
        let kind = match oracle {
            0 => OracleKind::Const0,
            1 => OracleKind::Const1,
            2 => OracleKind::Bal01,
            3 => OracleKind::Bal10,
            _ => return Err(invalid(format!("unknown oracle {oracle}"))),
        };
        match run_deutsch(kind, n_bosons, t_oracle) {
            Ok(o) => {
                *result = BoseqDeutschResult {
                    classification: match o.classification {
                        Classification::Constant => 0,
                        Classification::Balanced => 1,
                    },
                    overlap_plus: o.overlap_plus,
                    overlap_minus: o.overlap_minus,
                };
                Ok(())
            }
            Err(Error::AmbiguousOutcome {
                overlap_plus,
                overlap_minus,
            }) => {
                *result = BoseqDeutschResult {
                    classification: -1,
                    overlap_plus,
                    overlap_minus,
                };
                Err(Failure(
                    BoseqStatus::Ambiguous,
                    format!("ambiguous outcome: overlaps {overlap_plus}, {overlap_minus}"),
                ))
            }
            Err(e) => Err(e.into()),
        }
    })
}

/// Parses a qubit schedule and compiles it for `n_bosons`; the normalized
/// result is returned in `out` and must be released with [`boseq_string_free`].
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn boseq_compile_schedule(
    text: *const c_char,
    n_bosons: usize,
    out: *mut *mut c_char,
) -> BoseqStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let src = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| invalid("schedule text is not UTF-8"))?;
        let schedule = parse_schedule(src).map_err(Error::from)?;
        let compiled = compile_to_bosonic(&schedule, n_bosons).map_err(Error::from)?;
        let c = CString::new(pretty_print(&compiled)).map_err(|_| invalid("embedded NUL"))?;
        *out = c.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn boseq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
