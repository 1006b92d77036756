//! C ABI for the gollgr library.
//!
//! Every fallible function returns a [`GollgrStatus`] and writes results
//! through out-pointers. On failure the message is available from
//! [`gollgr_last_error`] on the same thread. Handles are opaque and must be
//! released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gollgr::inference::{fit_mle, FitOptions, FitResult};
use gollgr::regression::{fit_regression, quantile_residuals, RegressionFit, SurvivalDataset};
use gollgr::{Error, GollgrParams, Submodel};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GollgrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Numerical = 4,
    NonConvergence = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GollgrSubmodel {
    Gollgr = 0,
    Ollgr = 1,
    Egr = 2,
    Gr = 3,
}

impl From<GollgrSubmodel> for Submodel {
    fn from(s: GollgrSubmodel) -> Self {
        match s {
            GollgrSubmodel::Gollgr => Submodel::Gollgr,
            GollgrSubmodel::Ollgr => Submodel::Ollgr,
            GollgrSubmodel::Egr => Submodel::Egr,
            GollgrSubmodel::Gr => Submodel::Gr,
        }
    }
}

/// Opaque parameter set.
pub struct GollgrParamsHandle(GollgrParams);

/// Opaque result of a distribution fit.
pub struct GollgrFitHandle(FitResult);

/// Opaque regression fit together with the data it was fitted to.
pub struct GollgrRegressionHandle {
    fit: RegressionFit,
    data: SurvivalDataset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> GollgrStatus {
    match e {
        Error::Domain { .. } | Error::Dimension { .. } | Error::Comparison(_) => GollgrStatus::Domain,
        Error::NonConvergence { .. } | Error::StudyAborted(_) => GollgrStatus::NonConvergence,
        Error::Numerical { .. } | Error::AmbiguousShape(_) => GollgrStatus::Numerical,
    }
}

struct Failure(GollgrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(GollgrStatus::NullPointer, format!("{name} is null"))
}

/// Runs `f`, records any failure or panic and maps it to a status.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> GollgrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GollgrStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GollgrStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, n: usize, name: &str) -> Result<&'a [T], Failure> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn params<'a>(p: *const GollgrParamsHandle) -> Result<&'a GollgrParams, Failure> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null("params"))
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gollgr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `out_handle` must be writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn gollgr_params_new(
    alpha: f64,
    beta: f64,
    delta: f64,
    theta: f64,
    out_handle: *mut *mut GollgrParamsHandle,
) -> GollgrStatus {
    guard(|| {
        let o = out(out_handle, "out_handle")?;
        let p = GollgrParams::new(alpha, beta, delta, theta)?;
        *o = Box::into_raw(Box::new(GollgrParamsHandle(p)));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from `gollgr_params_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gollgr_params_free(handle: *mut GollgrParamsHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

unsafe fn pointwise(
    handle: *const GollgrParamsHandle,
    out_value: *mut f64,
    f: impl FnOnce(&GollgrParams) -> f64,
) -> GollgrStatus {
    guard(|| {
        let p = params(handle)?;
        *out(out_value, "out_value")? = f(p);
        Ok(())
    })
}

/// Density at x.
///
/// # Safety
/// `handle` must be a live parameter handle and `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn gollgr_pdf(handle: *const GollgrParamsHandle, x: f64, out_value: *mut f64) -> GollgrStatus {
    pointwise(handle, out_value, |p| p.pdf(x))
}

/// Distribution function at x.
///
/// # Safety
/// `handle` must be a live parameter handle and `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn gollgr_cdf(handle: *const GollgrParamsHandle, x: f64, out_value: *mut f64) -> GollgrStatus {
    pointwise(handle, out_value, |p| p.cdf(x))
}

/// Survival function at x.
///
/// # Safety
/// `handle` must be a live parameter handle and `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn gollgr_sf(handle: *const GollgrParamsHandle, x: f64, out_value: *mut f64) -> GollgrStatus {
    pointwise(handle, out_value, |p| p.sf(x))
}

/// Hazard rate at x.
///
/// # Safety
/// `handle` must be a live parameter handle and `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn gollgr_hrf(handle: *const GollgrParamsHandle, x: f64, out_value: *mut f64) -> GollgrStatus {
    pointwise(handle, out_value, |p| p.hrf(x))
}

/// Quantile at probability u in (0, 1).
///
/// # Safety
/// `handle` must be a live parameter handle and `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn gollgr_quantile(
    handle: *const GollgrParamsHandle,
    u: f64,
    out_value: *mut f64,
) -> GollgrStatus {
    guard(|| {
        let p = params(handle)?;
        *out(out_value, "out_value")? = p.quantile(u)?;
        Ok(())
    })
}

/// Writes n seeded draws into `out_values`.
///
/// # Safety
/// `out_values` must have room for `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gollgr_sample(
    handle: *const GollgrParamsHandle,
    n: usize,
    seed: u64,
    out_values: *mut f64,
) -> GollgrStatus {
    guard(|| {
        let p = params(handle)?;
        if n > 0 && out_values.is_null() {
            return Err(null("out_values"));
        }
        let xs = p.sample(n, seed)?;
        if n > 0 {
            std::slice::from_raw_parts_mut(out_values, n).copy_from_slice(&xs);
        }
        Ok(())
    })
}

/// Maximum-likelihood fit of an uncensored sample. A fit that did not
/// converge is still returned; check the flag from `gollgr_fit_summary`.
///
/// # Safety
/// `x` must point to `n` doubles and `out_handle` be writable.
#[no_mangle]
pub unsafe extern "C" fn gollgr_fit(
    x: *const f64,
    n: usize,
    submodel: GollgrSubmodel,
    out_handle: *mut *mut GollgrFitHandle,
) -> GollgrStatus {
    guard(|| {
        let o = out(out_handle, "out_handle")?;
        let data = slice(x, n, "x")?;
        let fit = fit_mle(data, None, submodel.into(), &FitOptions::default())?;
        *o = Box::into_raw(Box::new(GollgrFitHandle(fit)));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from `gollgr_fit` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gollgr_fit_free(handle: *mut GollgrFitHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Estimates (alpha, beta, delta, theta), their standard errors (NaN when
/// unavailable or pinned by the submodel) and log-likelihood.
///
/// # Safety
/// `estimates` and `std_errors` must have room for 4 doubles each; any
/// out-pointer may be NULL to skip it.
#[no_mangle]
pub unsafe extern "C" fn gollgr_fit_summary(
    handle: *const GollgrFitHandle,
    estimates: *mut f64,
    std_errors: *mut f64,
    loglik: *mut f64,
    converged: *mut bool,
) -> GollgrStatus {
    guard(|| {
        let f = &handle.as_ref().ok_or_else(|| null("handle"))?.0;
        if !estimates.is_null() {
            std::slice::from_raw_parts_mut(estimates, 4).copy_from_slice(&f.estimates.to_array());
        }
        if !std_errors.is_null() {
            let se = f.std_errors.as_ref();
            let v = [
                se.and_then(|s| s.alpha).unwrap_or(f64::NAN),
                se.and_then(|s| s.beta).unwrap_or(f64::NAN),
                se.map_or(f64::NAN, |s| s.delta),
                se.map_or(f64::NAN, |s| s.theta),
            ];
            std::slice::from_raw_parts_mut(std_errors, 4).copy_from_slice(&v);
        }
        if let Some(l) = loglik.as_mut() {
            *l = f.loglik;
        }
        if let Some(c) = converged.as_mut() {
            *c = f.converged;
        }
        Ok(())
    })
}

/// Censored regression. `covariates` is row-major n × q without the
/// intercept column, which is added; `status` is 1 for a failure and 0 for
/// a censored time.
///
/// # Safety
/// `times` and `status` must point to `n` elements and `covariates` to
/// `n * q` doubles (or be NULL when q = 0).
#[no_mangle]
pub unsafe extern "C" fn gollgr_regression_fit(
    times: *const f64,
    status: *const u8,
    covariates: *const f64,
    n: usize,
    q: usize,
    submodel: GollgrSubmodel,
    out_handle: *mut *mut GollgrRegressionHandle,
) -> GollgrStatus {
    guard(|| {
        let o = out(out_handle, "out_handle")?;
        let t = slice(times, n, "times")?;
        let s = slice(status, n, "status")?;
        let cov = slice(
            covariates,
            n.checked_mul(q)
                .ok_or_else(|| Failure(GollgrStatus::InvalidArgument, "n * q overflows".into()))?,
            "covariates",
        )?;
        if let Some(bad) = s.iter().find(|&&v| v > 1) {
            return Err(Failure(
                GollgrStatus::InvalidArgument,
                format!("status must be 0 or 1, got {bad}"),
            ));
        }
        let rows: Vec<Vec<f64>> = (0..n).map(|i| cov[i * q..(i + 1) * q].to_vec()).collect();
        let data = SurvivalDataset::with_intercept(t.to_vec(), s.iter().map(|&v| v == 1).collect(), &rows)?;
        let fit = fit_regression(&data, submodel.into(), None, &FitOptions::default())?;
        *o = Box::into_raw(Box::new(GollgrRegressionHandle { fit, data }));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from `gollgr_regression_fit` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gollgr_regression_free(handle: *mut GollgrRegressionHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Coefficients in the order alpha, beta, delta-link (q + 1), theta-link
/// (q + 1). With `out_values` NULL only the required length is written.
///
/// # Safety
/// `out_values` must have room for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn gollgr_regression_coefficients(
    handle: *const GollgrRegressionHandle,
    out_values: *mut f64,
    capacity: usize,
    out_len: *mut usize,
    loglik: *mut f64,
    converged: *mut bool,
) -> GollgrStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let v = h.fit.coefficients.to_vec();
        if let Some(l) = out_len.as_mut() {
            *l = v.len();
        }
        if let Some(l) = loglik.as_mut() {
            *l = h.fit.loglik;
        }
        if let Some(c) = converged.as_mut() {
            *c = h.fit.converged;
        }
        if out_values.is_null() {
            return Ok(());
        }
        if capacity < v.len() {
            return Err(Failure(
                GollgrStatus::BufferTooSmall,
                format!("need {} values, capacity is {capacity}", v.len()),
            ));
        }
        std::slice::from_raw_parts_mut(out_values, v.len()).copy_from_slice(&v);
        Ok(())
    })
}

/// Quantile residuals of the fitted rows; requires a converged fit.
///
/// # Safety
/// `out_values` must have room for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn gollgr_regression_residuals(
    handle: *const GollgrRegressionHandle,
    out_values: *mut f64,
    capacity: usize,
) -> GollgrStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        if out_values.is_null() {
            return Err(null("out_values"));
        }
        if capacity < h.data.len() {
            return Err(Failure(
                GollgrStatus::BufferTooSmall,
                format!("need {} values, capacity is {capacity}", h.data.len()),
            ));
        }
        let r = quantile_residuals(&h.data, &h.fit)?;
        std::slice::from_raw_parts_mut(out_values, r.len()).copy_from_slice(&r);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(gollgr_last_error()) }
            .to_string_lossy()
            .into_owned()
    }

    #[test]
    fn params_roundtrip_and_errors() {
        unsafe {
            let mut h = ptr::null_mut();
            assert_eq!(gollgr_params_new(0.35, 0.55, -0.55, 0.11, &mut h), GollgrStatus::Ok);
            let mut x = 0.0;
            assert_eq!(gollgr_quantile(h, 0.5, &mut x), GollgrStatus::Ok);
            let mut c = 0.0;
            assert_eq!(gollgr_cdf(h, x, &mut c), GollgrStatus::Ok);
            assert!((c - 0.5).abs() < 1e-12);
            assert_eq!(gollgr_quantile(h, 1.5, &mut x), GollgrStatus::Domain);
            assert!(last_error().contains("domain"));
            assert_eq!(gollgr_pdf(h, 1.0, ptr::null_mut()), GollgrStatus::NullPointer);
            gollgr_params_free(h);

            let mut bad = ptr::null_mut();
            assert_eq!(gollgr_params_new(-1.0, 1.0, 0.0, 1.0, &mut bad), GollgrStatus::Domain);
            assert!(bad.is_null());
            assert_eq!(gollgr_cdf(ptr::null(), 1.0, &mut c), GollgrStatus::NullPointer);
        }
    }

    #[test]
    fn sample_then_fit() {
        unsafe {
            let mut h = ptr::null_mut();
            gollgr_params_new(1.0, 1.0, 0.5, 2.0, &mut h);
            let mut xs = vec![0.0; 500];
            assert_eq!(gollgr_sample(h, xs.len(), 3, xs.as_mut_ptr()), GollgrStatus::Ok);
            gollgr_params_free(h);
            let mut fit = ptr::null_mut();
            assert_eq!(
                gollgr_fit(xs.as_ptr(), xs.len(), GollgrSubmodel::Gr, &mut fit),
                GollgrStatus::Ok
            );
            let (mut est, mut se, mut ll, mut conv) = ([0.0; 4], [0.0; 4], 0.0, false);
            assert_eq!(
                gollgr_fit_summary(fit, est.as_mut_ptr(), se.as_mut_ptr(), &mut ll, &mut conv),
                GollgrStatus::Ok
            );
            assert!(conv && ll.is_finite());
            assert_eq!((est[0], est[1]), (1.0, 1.0));
            assert!(se[0].is_nan() && se[2] > 0.0);
            assert!((est[2] - 0.5).abs() < 4.0 * se[2]);
            gollgr_fit_free(fit);
        }
    }

    #[test]
    fn regression_and_residuals() {
        unsafe {
            let mut h = ptr::null_mut();
            gollgr_params_new(1.0, 1.0, 0.3, 1.0, &mut h);
            let n = 300;
            let mut times = vec![0.0; n];
            gollgr_sample(h, n, 8, times.as_mut_ptr());
            gollgr_params_free(h);
            let status: Vec<u8> = (0..n).map(|i| u8::from(i % 6 != 0)).collect();
            let cov: Vec<f64> = (0..n).map(|i| (i % 2) as f64).collect();
            let mut reg = ptr::null_mut();
            let s = gollgr_regression_fit(
                times.as_ptr(),
                status.as_ptr(),
                cov.as_ptr(),
                n,
                1,
                GollgrSubmodel::Gr,
                &mut reg,
            );
            assert_eq!(s, GollgrStatus::Ok);
            let mut len = 0;
            let (mut ll, mut conv) = (0.0, false);
            gollgr_regression_coefficients(reg, ptr::null_mut(), 0, &mut len, &mut ll, &mut conv);
            assert_eq!(len, 6);
            assert!(conv);
            let mut small = [0.0; 3];
            assert_eq!(
                gollgr_regression_coefficients(
                    reg,
                    small.as_mut_ptr(),
                    3,
                    ptr::null_mut(),
                    ptr::null_mut(),
                    ptr::null_mut()
                ),
                GollgrStatus::BufferTooSmall
            );
            let mut r = vec![0.0; n];
            assert_eq!(gollgr_regression_residuals(reg, r.as_mut_ptr(), n), GollgrStatus::Ok);
            assert!(r.iter().all(|v| v.is_finite()));
            gollgr_regression_free(reg);

            let bad_status = vec![2u8; n];
            let s = gollgr_regression_fit(
                times.as_ptr(),
                bad_status.as_ptr(),
                cov.as_ptr(),
                n,
                1,
                GollgrSubmodel::Gr,
                &mut reg,
            );
            assert_eq!(s, GollgrStatus::InvalidArgument);
        }
    }
}
