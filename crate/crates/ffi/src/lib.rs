//! C ABI for the `h2ion` solver.
//!
//! Every entry point returns an [`H2ionStatus`]; values come back through
//! out-pointers. Solve results live behind an opaque handle that the caller
//! releases with [`h2ion_result_free`]. After a non-OK status,
//! [`h2ion_last_error`] returns a message for the calling thread.
//!
//! State labels are the ASCII names `"1ssg"` and `"2psu"`. Energies are in
//! Rydbergs, lengths in Bohr.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use h2ion::observables::{oscillator_strength, transition_with, GapSource};
use h2ion::oracle::solve_exact;
use h2ion::{minimize, Error, Geometry, SolveResult, SolverConfig, StateLabel};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum H2ionStatus {
    Ok = 0,
    /// Null pointer, non-UTF-8 string, non-positive R or similar.
    InvalidArgument = 1,
    /// Label parsed but not solvable, or unknown label.
    UnsupportedState = 2,
    /// The minimizer ran out of budget; the handle still holds the best point.
    NotConverged = 3,
    /// Root bracketing, quadrature or other numerical failure.
    NumericalError = 4,
    /// A Rust panic was caught at the boundary.
    Internal = 5,
}

/// Opaque solve result.
pub struct H2ionResult {
    inner: SolveResult,
}

/// Outcome of the shooting solver.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct H2ionExact {
    pub p: f64,
    pub separation_constant: f64,
    pub total_energy: f64,
}

/// Transition data for the 1ssg -> 2psu pair.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct H2ionTransition {
    pub r: f64,
    pub energy_g: f64,
    pub energy_u: f64,
    pub delta_e: f64,
    pub q_z: f64,
    pub f01: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_for(err: &Error) -> H2ionStatus {
    match err {
        Error::Usage(_) | Error::Domain(_) | Error::Parse(_) => H2ionStatus::InvalidArgument,
        Error::UnsupportedState(_) => H2ionStatus::UnsupportedState,
        Error::IterationLimit { .. } => H2ionStatus::NotConverged,
        _ => H2ionStatus::NumericalError,
    }
}

fn fail(status: H2ionStatus, msg: String) -> H2ionStatus {
    set_error(msg);
    status
}

/// Run `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<H2ionStatus, (H2ionStatus, String)>) -> H2ionStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => fail(s, msg),
        Err(_) => fail(H2ionStatus::Internal, "panic inside h2ion".into()),
    }
}

fn lib_err(e: Error) -> (H2ionStatus, String) {
    (status_for(&e), e.to_string())
}

unsafe fn read_state(state: *const c_char) -> Result<StateLabel, (H2ionStatus, String)> {
    if state.is_null() {
        return Err((H2ionStatus::InvalidArgument, "state label is null".into()));
    }
    let s = CStr::from_ptr(state)
        .to_str()
        .map_err(|_| (H2ionStatus::InvalidArgument, "state label is not UTF-8".into()))?;
    let label: StateLabel = s.parse().map_err(|e: Error| (H2ionStatus::UnsupportedState, e.to_string()))?;
    label.ensure_supported().map_err(lib_err)?;
    Ok(label)
}

fn config(quad_order: u32, budget: u64) -> Result<SolverConfig, (H2ionStatus, String)> {
    let mut c = SolverConfig::default();
    if quad_order != 0 {
        if quad_order < 8 {
            return Err((H2ionStatus::InvalidArgument, format!("quadrature order {quad_order} < 8")));
        }
        c.quad_order = quad_order as usize;
    }
    if budget != 0 {
        c.max_evaluations = budget as usize;
    }
    Ok(c)
}

fn check_out<T>(p: *mut T) -> Result<(), (H2ionStatus, String)> {
    if p.is_null() {
        Err((H2ionStatus::InvalidArgument, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn h2ion_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread, or null. Valid until the next
/// call into the library from the same thread.
#[no_mangle]
pub extern "C" fn h2ion_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Minimize the energy of `state` at distance `r`.
///
/// `quad_order` and `budget` may be zero for the defaults. On `Ok` and on
/// `NotConverged` `*out` receives a handle that must be released with
/// [`h2ion_result_free`]; otherwise `*out` is set to null.
///
/// # Safety
/// `state` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn h2ion_solve(state: *const c_char, r: f64, quad_order: u32, budget: u64, out: *mut *mut H2ionResult) -> H2ionStatus {
    guard(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        let label = read_state(state)?;
        let geometry = Geometry::new(r).map_err(lib_err)?;
        let cfg = config(quad_order, budget)?;
        match minimize(geometry, label, None, &cfg) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(H2ionResult { inner: s }));
                Ok(H2ionStatus::Ok)
            }
            Err(Error::IterationLimit { best, evaluations }) => {
                *out = Box::into_raw(Box::new(H2ionResult { inner: *best }));
                set_error(format!("budget exhausted after {evaluations} evaluations"));
                Ok(H2ionStatus::NotConverged)
            }
            Err(e) => Err(lib_err(e)),
        }
    })
}

/// Release a handle; null is ignored.
///
/// # Safety
/// `result` must come from [`h2ion_solve`] and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn h2ion_result_free(result: *mut H2ionResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

unsafe fn with_result<T>(result: *const H2ionResult, out: *mut T, f: impl FnOnce(&SolveResult) -> T) -> H2ionStatus {
    guard(|| {
        check_out(out)?;
        let r = result
            .as_ref()
            .ok_or((H2ionStatus::InvalidArgument, "result handle is null".to_string()))?;
        *out = f(&r.inner);
        Ok(H2ionStatus::Ok)
    })
}

/// Total energy (Ry).
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn h2ion_result_total_energy(result: *const H2ionResult, out: *mut f64) -> H2ionStatus {
    with_result(result, out, |s| s.e_total)
}

/// Electronic energy `E_total - 2/R` (Ry).
///
/// # Safety
/// As [`h2ion_result_total_energy`].
#[no_mangle]
pub unsafe extern "C" fn h2ion_result_electronic_energy(result: *const H2ionResult, out: *mut f64) -> H2ionStatus {
    with_result(result, out, |s| s.e_prime)
}

/// Optimized `p`.
///
/// # Safety
/// As [`h2ion_result_total_energy`].
#[no_mangle]
pub unsafe extern "C" fn h2ion_result_p(result: *const H2ionResult, out: *mut f64) -> H2ionStatus {
    with_result(result, out, |s| s.p_opt)
}

/// First-order separation constants from the ξ and η equations.
///
/// # Safety
/// `result` must be a live handle; both out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn h2ion_result_separation_constants(result: *const H2ionResult, a1_xi: *mut f64, a1_eta: *mut f64) -> H2ionStatus {
    if a1_eta.is_null() {
        set_error("output pointer is null".into());
        return H2ionStatus::InvalidArgument;
    }
    let mut pair = (0.0, 0.0);
    let status = with_result(result, &mut pair, |s| (s.a1x, s.a1y));
    if status == H2ionStatus::Ok {
        if a1_xi.is_null() {
            set_error("output pointer is null".into());
            return H2ionStatus::InvalidArgument;
        }
        *a1_xi = pair.0;
        *a1_eta = pair.1;
    }
    status
}

/// Trial parameters in the order alpha, gamma, a1, a2, b2, b3, p.
///
/// # Safety
/// `result` must be a live handle and `out` point to 7 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn h2ion_result_params(result: *const H2ionResult, out: *mut f64) -> H2ionStatus {
    let mut values = [0.0; 7];
    let status = with_result(result, &mut values, |s| s.params.to_vec());
    if status == H2ionStatus::Ok {
        if out.is_null() {
            set_error("output pointer is null".into());
            return H2ionStatus::InvalidArgument;
        }
        ptr::copy_nonoverlapping(values.as_ptr(), out, 7);
    }
    status
}

/// Oscillator strength from two handles at the same `R` (gerade first).
///
/// # Safety
/// Both handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn h2ion_result_transition(gerade: *const H2ionResult, ungerade: *const H2ionResult, out: *mut H2ionTransition) -> H2ionStatus {
    guard(|| {
        check_out(out)?;
        let (g, u) = match (gerade.as_ref(), ungerade.as_ref()) {
            (Some(g), Some(u)) => (g, u),
            _ => return Err((H2ionStatus::InvalidArgument, "result handle is null".into())),
        };
        let t = oscillator_strength(&g.inner, &u.inner).map_err(lib_err)?;
        *out = transition_to_c(&t);
        Ok(H2ionStatus::Ok)
    })
}

fn transition_to_c(t: &h2ion::observables::TransitionResult) -> H2ionTransition {
    H2ionTransition {
        r: t.r,
        energy_g: t.e_g,
        energy_u: t.e_u,
        delta_e: t.delta_e,
        q_z: t.q_z,
        f01: t.f01,
    }
}

/// Solve both states at `r` and compute the oscillator strength. A non-zero
/// `oracle_gap` takes the energy gap from the shooting solver.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn h2ion_oscillator(r: f64, oracle_gap: i32, out: *mut H2ionTransition) -> H2ionStatus {
    guard(|| {
        check_out(out)?;
        Geometry::new(r).map_err(lib_err)?;
        let gap = if oracle_gap != 0 { GapSource::Oracle } else { GapSource::Variational };
        let t = transition_with(r, &SolverConfig::default(), gap).map_err(lib_err)?;
        *out = transition_to_c(&t);
        Ok(H2ionStatus::Ok)
    })
}

/// Exact `(p, A, E_total)` from the shooting solver. `p_hint <= 0` uses the
/// built-in seed table.
///
/// # Safety
/// `state` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn h2ion_exact(state: *const c_char, r: f64, p_hint: f64, out: *mut H2ionExact) -> H2ionStatus {
    guard(|| {
        check_out(out)?;
        let label = read_state(state)?;
        let geometry = Geometry::new(r).map_err(lib_err)?;
        let hint = (p_hint > 0.0).then_some(p_hint);
        let s = solve_exact(geometry, label, hint).map_err(lib_err)?;
        *out = H2ionExact {
            p: s.p,
            separation_constant: s.a,
            total_energy: s.e_total,
        };
        Ok(H2ionStatus::Ok)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        let p = h2ion_last_error();
        if p.is_null() {
            String::new()
        } else {
            unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
        }
    }

    #[test]
    fn solve_round_trip() {
        let mut handle = ptr::null_mut();
        let status = unsafe { h2ion_solve(c"1ssg".as_ptr(), 2.0, 0, 0, &mut handle) };
        assert_eq!(status, H2ionStatus::Ok);
        let mut e = 0.0;
        let mut params = [0.0; 7];
        let (mut ax, mut ay) = (0.0, 0.0);
        unsafe {
            assert_eq!(h2ion_result_total_energy(handle, &mut e), H2ionStatus::Ok);
            assert_eq!(h2ion_result_params(handle, params.as_mut_ptr()), H2ionStatus::Ok);
            assert_eq!(h2ion_result_separation_constants(handle, &mut ax, &mut ay), H2ionStatus::Ok);
            h2ion_result_free(handle);
        }
        assert!((e + 1.20526842899).abs() < 1e-9);
        assert!((params[6] - 1.485015).abs() < 1e-6);
        assert!((ax - 0.811729585).abs() < 1e-6 && (ay - ax).abs() < 1e-7);
    }

    #[test]
    fn errors_are_reported() {
        let mut handle = ptr::null_mut();
        let s = unsafe { h2ion_solve(c"3dsg".as_ptr(), 2.0, 0, 0, &mut handle) };
        assert_eq!(s, H2ionStatus::UnsupportedState);
        assert!(handle.is_null());
        assert!(last_error().contains("3dsg"));
        let s = unsafe { h2ion_solve(c"1ssg".as_ptr(), -1.0, 0, 0, &mut handle) };
        assert_eq!(s, H2ionStatus::InvalidArgument);
        let s = unsafe { h2ion_solve(ptr::null(), 2.0, 0, 0, &mut handle) };
        assert_eq!(s, H2ionStatus::InvalidArgument);
        let s = unsafe { h2ion_result_total_energy(ptr::null(), &mut 0.0) };
        assert_eq!(s, H2ionStatus::InvalidArgument);
        unsafe { h2ion_result_free(ptr::null_mut()) };
    }

    #[test]
    fn exact_and_transition() {
        let mut x = H2ionExact::default();
        assert_eq!(unsafe { h2ion_exact(c"2psu".as_ptr(), 2.0, 0.0, &mut x) }, H2ionStatus::Ok);
        assert!((x.total_energy + 0.3350687844).abs() < 1e-10);
        let mut t = H2ionTransition::default();
        assert_eq!(unsafe { h2ion_oscillator(2.0, 0, &mut t) }, H2ionStatus::Ok);
        assert!(((t.f01 - 0.639527) / 0.639527).abs() < 1e-4);
        assert!(last_error().is_empty());
    }

    #[test]
    fn version_is_a_c_string() {
        let v = unsafe { CStr::from_ptr(h2ion_version()) }.to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}
