//! C interface to `nilcoh`.
//!
//! Every function returns an [`NcStatus`]; on failure a message is kept per
//! thread and read with [`nc_last_error`]. Handles are opaque and owned by
//! the caller, who releases them with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nilcoh::catalog;
use nilcoh::coeff::ParameterContext;
use nilcoh::cohomology::{de_rham, morse_novikov, CohomologyTable, Theory};
use nilcoh::complex::ComplexStructureInput;
use nilcoh::exterior::parse_element;
use nilcoh::lie::{parse_salamon_auto, StructureConstants};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    NotLieAlgebra = 4,
    Computation = 5,
    OutOfRange = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcTheory {
    DeRham = 0,
    Dolbeault = 1,
    BottChern = 2,
    Aeppli = 3,
}

/// A Lie algebra given by its structure constants.
pub struct NcAlgebra(StructureConstants);

/// Cohomology dimensions in each total degree.
pub struct NcTable(CohomologyTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type FfiResult<T> = Result<T, (NcStatus, String)>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> NcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NcStatus::Ok,
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            NcStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err((NcStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (NcStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> FfiResult<&'a T> {
    p.as_ref()
        .ok_or_else(|| (NcStatus::NullPointer, "null handle".into()))
}

unsafe fn write<T>(out: *mut T, v: T) -> FfiResult<()> {
    if out.is_null() {
        return Err((NcStatus::NullPointer, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

fn invalid(e: impl ToString) -> (NcStatus, String) {
    (NcStatus::InvalidInput, e.to_string())
}

fn failed(e: impl ToString) -> (NcStatus, String) {
    (NcStatus::Computation, e.to_string())
}

fn checked(s: StructureConstants) -> FfiResult<*mut NcAlgebra> {
    s.ensure_jacobi()
        .map_err(|e| (NcStatus::NotLieAlgebra, e.to_string()))?;
    Ok(Box::into_raw(Box::new(NcAlgebra(s))))
}

/// Message of the last failure on this thread, or null. Valid until the next call that fails.
#[no_mangle]
pub extern "C" fn nc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Look up a catalog entry by name or alias.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_algebra_from_catalog(
    name: *const c_char,
    out: *mut *mut NcAlgebra,
) -> NcStatus {
    guard(|| {
        let name = text(name)?;
        let e = catalog::find(name)
            .map_err(failed)?
            .ok_or_else(|| invalid(format!("unknown algebra '{name}'")))?;
        write(out, checked(e.structure.clone())?)
    })
}

/// Parse Salamon shorthand such as `(0,0,12)`.
///
/// # Safety
/// `code` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_algebra_from_salamon(
    code: *const c_char,
    out: *mut *mut NcAlgebra,
) -> NcStatus {
    guard(|| {
        let s = parse_salamon_auto(text(code)?).map_err(invalid)?;
        write(out, checked(s)?)
    })
}

/// Parse the JSON structure-constant document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_algebra_from_json(
    json: *const c_char,
    out: *mut *mut NcAlgebra,
) -> NcStatus {
    guard(|| {
        let v: serde_json::Value = serde_json::from_str(text(json)?).map_err(invalid)?;
        let s = StructureConstants::from_json(&v).map_err(invalid)?;
        write(out, checked(s)?)
    })
}

/// # Safety
/// `a` must come from an `nc_algebra_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nc_algebra_free(a: *mut NcAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_algebra_dim(a: *const NcAlgebra, out: *mut usize) -> NcStatus {
    guard(|| write(out, handle(a)?.0.dim()))
}

/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_algebra_is_unimodular(a: *const NcAlgebra, out: *mut bool) -> NcStatus {
    guard(|| write(out, handle(a)?.0.unimodularity_check().holds))
}

/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_algebra_is_nilpotent(a: *const NcAlgebra, out: *mut bool) -> NcStatus {
    guard(|| write(out, handle(a)?.0.is_nilpotent()))
}

/// The structure constants as a JSON document; release with [`nc_string_free`].
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_algebra_to_json(
    a: *const NcAlgebra,
    out: *mut *mut c_char,
) -> NcStatus {
    guard(|| {
        let s = handle(a)?.0.to_json().to_string();
        write(out, CString::new(s).map_err(failed)?.into_raw())
    })
}

fn table(t: CohomologyTable) -> *mut NcTable {
    Box::into_raw(Box::new(NcTable(t)))
}

/// De Rham cohomology of the algebra.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_betti(a: *const NcAlgebra, out: *mut *mut NcTable) -> NcStatus {
    guard(|| {
        let s = &handle(a)?.0;
        if s.has_params() {
            return Err(invalid("parametric algebras are not supported here"));
        }
        write(out, table(de_rham(s).map_err(failed)?))
    })
}

/// Cohomology of `d − θ∧` for a 1-form `theta` such as `-2*e3`.
///
/// # Safety
/// `a` must be a live handle, `theta` a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_morse_novikov(
    a: *const NcAlgebra,
    theta: *const c_char,
    out: *mut *mut NcTable,
) -> NcStatus {
    guard(|| {
        let s = &handle(a)?.0;
        let th = parse_element(text(theta)?, s.dim(), &ParameterContext::new()).map_err(invalid)?;
        if th.pure_degree().is_some_and(|k| k != 1) {
            return Err(invalid("theta must be a 1-form"));
        }
        write(out, table(morse_novikov(s, &th).map_err(failed)?))
    })
}

/// Cohomology of a complex structure on `a` given as a JSON document: either
/// `{"J": [[…]], "chosen": […]}` or direct equations `{"m": …, "d": {…}}`.
///
/// # Safety
/// `a` must be a live handle, `json` a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_complex_cohomology(
    a: *const NcAlgebra,
    json: *const c_char,
    theory: NcTheory,
    out: *mut *mut NcTable,
) -> NcStatus {
    guard(|| {
        let s = &handle(a)?.0;
        let v: serde_json::Value = serde_json::from_str(text(json)?).map_err(invalid)?;
        let input = ComplexStructureInput::from_json(&v, s.ctx()).map_err(invalid)?;
        let b = input.resolve(s).map_err(invalid)?;
        if b.has_params() {
            return Err(invalid(
                "parametric complex structures are not supported here",
            ));
        }
        let theory = match theory {
            NcTheory::DeRham => Theory::DeRham,
            NcTheory::Dolbeault => Theory::Dolbeault,
            NcTheory::BottChern => Theory::BottChern,
            NcTheory::Aeppli => Theory::Aeppli,
        };
        write(out, table(b.cohomology(theory).map_err(failed)?))
    })
}

/// # Safety
/// `t` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nc_table_free(t: *mut NcTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Highest degree; degrees run from 0 to this value.
///
/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_table_top_degree(t: *const NcTable, out: *mut usize) -> NcStatus {
    guard(|| write(out, handle(t)?.0.totals().len().saturating_sub(1)))
}

/// Total dimension in `degree`.
///
/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_table_dim(
    t: *const NcTable,
    degree: usize,
    out: *mut usize,
) -> NcStatus {
    guard(|| {
        let totals = handle(t)?.0.totals();
        let d = totals.get(degree).copied().ok_or_else(|| {
            (
                NcStatus::OutOfRange,
                format!("degree {degree} beyond {}", totals.len().saturating_sub(1)),
            )
        })?;
        write(out, d)
    })
}

/// Dimension in bidegree `(p, q)`; only for Dolbeault, Bott-Chern and Aeppli tables.
///
/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_table_bidegree_dim(
    t: *const NcTable,
    p: usize,
    q: usize,
    out: *mut usize,
) -> NcStatus {
    guard(|| {
        let bi = handle(t)?
            .0
            .bigraded
            .as_ref()
            .ok_or_else(|| invalid("table is not bigraded"))?;
        let d = bi
            .get(&(p, q))
            .copied()
            .ok_or_else(|| (NcStatus::OutOfRange, format!("no bidegree ({p},{q})")))?;
        write(out, d)
    })
}

/// Poincaré polynomial such as `x^3 + 2*x^2 + 2*x + 1`; release with [`nc_string_free`].
///
/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_table_poincare(t: *const NcTable, out: *mut *mut c_char) -> NcStatus {
    guard(|| {
        let s = handle(t)?.0.render_poincare();
        write(out, CString::new(s).map_err(failed)?.into_raw())
    })
}
