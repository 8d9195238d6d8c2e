//! C ABI over the `fdslab` core.
//!
//! Every fallible function returns an [`FdsStatus`]. On failure a message is
//! stored per thread and can be read with [`fds_last_error_message`]. Objects
//! cross the boundary as opaque handles that the caller releases with the
//! matching `*_free` function; strings returned by the library are released
//! with [`fds_string_free`].
//!
//! Field elements are passed as `uint32_t` codes: residues `0..p` for prime
//! fields and, for GF(4), `0`, `1 = a`, `2 = a^2`, `3 = 1`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fdslab::dynamics::{phase_space, FiniteDynamicalSystem, PhaseSpace};
use fdslab::inference::{infer_ls, TimeSeries};
use fdslab::ncf::{is_ncf_by_definition, BooleanFunctionTable};
use fdslab::{Error, Field, TermOrder};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnsupportedField = 4,
    TooLarge = 5,
    ArityMismatch = 6,
    InconsistentData = 7,
    NotEssentialArity = 8,
    InvalidArgument = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// A polynomial dynamical system `f: k^n -> k^n`.
pub struct FdsSystem {
    inner: FiniteDynamicalSystem,
}

/// The enumerated state-transition graph of a system.
pub struct FdsPhaseSpace {
    inner: PhaseSpace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(status: FdsStatus, message: impl Into<String>) -> FdsStatus {
    set_last_error(message.into());
    status
}

fn status_of(e: &Error) -> FdsStatus {
    match e {
        Error::Parse { .. } => FdsStatus::ParseError,
        Error::UnsupportedField(_) => FdsStatus::UnsupportedField,
        Error::TooLarge { .. } => FdsStatus::TooLarge,
        Error::ArityError { .. } | Error::ShapeError { .. } => FdsStatus::ArityMismatch,
        Error::InconsistentData(_) | Error::DuplicatePoint(_) => FdsStatus::InconsistentData,
        Error::NotEssentialArity(_) => FdsStatus::NotEssentialArity,
        _ => FdsStatus::InvalidArgument,
    }
}

fn from_error(e: Error) -> FdsStatus {
    fail(status_of(&e), e.to_string())
}

/// Run `body`, turning a panic into [`FdsStatus::Panic`].
fn guarded(body: impl FnOnce() -> Result<(), FdsStatus>) -> FdsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            FdsStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(FdsStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, FdsStatus> {
    if s.is_null() {
        return Err(fail(FdsStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(FdsStatus::InvalidUtf8, "string argument is not UTF-8"))
}

/// `0` means "not given"; anything else must be a prime or 4.
fn field_arg(order: u32) -> Result<Option<Field>, FdsStatus> {
    match order {
        0 => Ok(None),
        q => Field::with_order(q as u64).map(Some).map_err(from_error),
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), FdsStatus> {
    if p.is_null() {
        Err(fail(FdsStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Copy `values` into a caller buffer of capacity `cap`; `*len` always
/// receives the required length.
unsafe fn write_slice<T: Copy>(
    values: &[T],
    out: *mut T,
    cap: usize,
    len: *mut usize,
) -> Result<(), FdsStatus> {
    non_null(len, "length pointer")?;
    *len = values.len();
    if values.is_empty() {
        return Ok(());
    }
    if out.is_null() || cap < values.len() {
        return Err(fail(
            FdsStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn fds_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fds_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn fds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a system from text (one `fi = ...` line per coordinate, optional
/// `field: q` directive). A nonzero `field_order` overrides the directive.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fds_system_parse(
    text: *const c_char,
    field_order: u32,
    out: *mut *mut FdsSystem,
) -> FdsStatus {
    guarded(|| {
        non_null(out, "output handle")?;
        let text = read_str(text)?;
        let field = field_arg(field_order)?;
        let inner = fdslab::io::parse_system(text, field).map_err(from_error)?;
        *out = Box::into_raw(Box::new(FdsSystem { inner }));
        Ok(())
    })
}

/// Release a system handle. Null is ignored.
///
/// # Safety
/// `sys` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn fds_system_free(sys: *mut FdsSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fds_system_nvars(sys: *const FdsSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.inner.nvars())
}

/// Field order, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fds_system_field_order(sys: *const FdsSystem) -> u32 {
    sys.as_ref().map_or(0, |s| s.inner.field().order())
}

/// Apply the system once: `out = f(state)`. Both arrays hold `len` values,
/// which must equal the number of variables.
///
/// # Safety
/// `sys` must be a live handle; `state` and `out` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn fds_system_step(
    sys: *const FdsSystem,
    state: *const u32,
    len: usize,
    out: *mut u32,
) -> FdsStatus {
    guarded(|| {
        non_null(sys, "system handle")?;
        non_null(state, "state")?;
        non_null(out, "output buffer")?;
        let sys = &(*sys).inner;
        let input = std::slice::from_raw_parts(state, len);
        let next = sys.step(input).map_err(from_error)?;
        ptr::copy_nonoverlapping(next.as_ptr(), out, next.len());
        Ok(())
    })
}

/// Render the system as text with its field directive. Free the result with
/// [`fds_string_free`].
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fds_system_to_string(
    sys: *const FdsSystem,
    out: *mut *mut c_char,
) -> FdsStatus {
    guarded(|| {
        non_null(sys, "system handle")?;
        non_null(out, "output string")?;
        let text = fdslab::io::format_system(&(*sys).inner);
        *out = CString::new(text)
            .map_err(|_| fail(FdsStatus::InvalidArgument, "text contains NUL"))?
            .into_raw();
        Ok(())
    })
}

/// Enumerate the phase space. `bound` caps the number of states; 0 selects
/// the default of one million.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fds_phase_space_new(
    sys: *const FdsSystem,
    bound: u64,
    out: *mut *mut FdsPhaseSpace,
) -> FdsStatus {
    guarded(|| {
        non_null(sys, "system handle")?;
        non_null(out, "output handle")?;
        let bound = if bound == 0 { fdslab::dynamics::DEFAULT_BOUND } else { bound };
        let inner = phase_space(&(*sys).inner, bound).map_err(from_error)?;
        *out = Box::into_raw(Box::new(FdsPhaseSpace { inner }));
        Ok(())
    })
}

/// Release a phase-space handle. Null is ignored.
///
/// # Safety
/// `ps` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn fds_phase_space_free(ps: *mut FdsPhaseSpace) {
    if !ps.is_null() {
        drop(Box::from_raw(ps));
    }
}

/// # Safety
/// `ps` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fds_phase_space_total_states(ps: *const FdsPhaseSpace) -> u64 {
    ps.as_ref().map_or(0, |p| p.inner.total_states())
}

/// # Safety
/// `ps` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fds_phase_space_num_components(ps: *const FdsPhaseSpace) -> usize {
    ps.as_ref().map_or(0, |p| p.inner.num_components())
}

/// # Safety
/// `ps` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fds_phase_space_max_transient_height(ps: *const FdsPhaseSpace) -> u64 {
    ps.as_ref().map_or(0, |p| p.inner.max_transient_height())
}

/// Limit-cycle lengths in ascending order, one per component. `*len`
/// receives the count; pass a null `out` to query it.
///
/// # Safety
/// `ps` must be a live handle, `len` valid, and `out` null or `cap` values long.
#[no_mangle]
pub unsafe extern "C" fn fds_phase_space_cycle_lengths(
    ps: *const FdsPhaseSpace,
    out: *mut u64,
    cap: usize,
    len: *mut usize,
) -> FdsStatus {
    guarded(|| {
        non_null(ps, "phase-space handle")?;
        let lengths: Vec<u64> = (*ps).inner.cycle_lengths().iter().map(|&l| l as u64).collect();
        write_slice(&lengths, out, cap, len)
    })
}

/// Decide whether the Boolean function with truth table `table` (a string
/// of `2^n` bits, bit `v` being the value at the input whose bit `i` is
/// `x_{i+1}`) is nested canalyzing. On success `*is_ncf` is 0 or 1;
/// functions ignoring a variable give [`FdsStatus::NotEssentialArity`].
///
/// # Safety
/// `table` must be a NUL-terminated string and `is_ncf` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fds_ncf_check(table: *const c_char, is_ncf: *mut i32) -> FdsStatus {
    guarded(|| {
        non_null(is_ncf, "result pointer")?;
        let table = BooleanFunctionTable::parse(read_str(table)?).map_err(from_error)?;
        let cert = is_ncf_by_definition(&table).map_err(from_error)?;
        *is_ncf = cert.is_some() as i32;
        Ok(())
    })
}

/// Infer a system from time-series CSV (header `x1,...,xn`, blank lines
/// separating segments) over the field of order `field_order`, using the
/// degrevlex order. The result fits every observed transition.
///
/// # Safety
/// `csv` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fds_infer_from_csv(
    csv: *const c_char,
    field_order: u32,
    out: *mut *mut FdsSystem,
) -> FdsStatus {
    guarded(|| {
        non_null(out, "output handle")?;
        let csv = read_str(csv)?;
        let field = field_arg(field_order)?
            .ok_or_else(|| fail(FdsStatus::InvalidArgument, "a field order is required"))?;
        let ts = TimeSeries::from_csv(csv, field).map_err(from_error)?;
        let model = infer_ls(&ts, &TermOrder::degrevlex()).map_err(from_error)?;
        *out = Box::into_raw(Box::new(FdsSystem {
            inner: model.system,
        }));
        Ok(())
    })
}
