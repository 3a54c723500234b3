//! C bindings for `permsym`.
//!
//! Every function returns a [`PermsymStatus`] and writes results through out
//! pointers. Objects are opaque handles created by `*_new`/`*_run` functions
//! and released with the matching `*_free`. After a failure,
//! [`permsym_last_error`] describes what went wrong on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use permsym::ci::{missing_levels_experiment, run_ci, CiResult, ComparisonReport};
use permsym::oscillator::{make_model, OscillatorModel};
use permsym::spin::{allowed_spatial_irreps, HalfInt};
use permsym::symgroup::{character_table, CharacterTable};
use permsym::Error;

/// Status codes; the first four match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermsymStatus {
    Ok = 0,
    /// Invalid argument or a precondition violated by the input.
    Usage = 1,
    /// Numerical integrity, convergence or internal consistency failure.
    Numerical = 2,
    /// The missing-level comparison ran but did not verify.
    VerificationFailed = 3,
    NullPointer = 4,
    IndexOutOfRange = 5,
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> PermsymStatus {
    set_error(e.to_string());
    if e.is_usage() {
        PermsymStatus::Usage
    } else {
        PermsymStatus::Numerical
    }
}

fn guard(f: impl FnOnce() -> PermsymStatus) -> PermsymStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == PermsymStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => {
            set_error("internal panic");
            PermsymStatus::Panic
        }
    }
}

macro_rules! deref {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(v) => v,
            None => {
                set_error(concat!("null pointer: ", stringify!($p)));
                return PermsymStatus::NullPointer;
            }
        }
    };
}

macro_rules! out {
    ($p:expr, $v:expr) => {{
        if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return PermsymStatus::NullPointer;
        }
        unsafe { $p.write($v) };
    }};
}

/// Message for the most recent failure on this thread; empty after success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn permsym_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn permsym_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn permsym_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Coupled oscillator model with `N` particles and coupling `ξ`.
pub struct PermsymModel(OscillatorModel);

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn permsym_model_new(n: usize, xi: f64, out: *mut *mut PermsymModel) -> PermsymStatus {
    guard(|| match make_model(n, xi) {
        Ok(m) => {
            out!(out, Box::into_raw(Box::new(PermsymModel(m))));
            PermsymStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// # Safety
/// `model` must be null or a handle from [`permsym_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn permsym_model_free(model: *mut PermsymModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Force constants `k` and `k′` of the degenerate and symmetric modes.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_model_force_constants(
    model: *const PermsymModel,
    k: *mut f64,
    k_prime: *mut f64,
) -> PermsymStatus {
    guard(|| {
        let m = &deref!(model).0;
        out!(k, m.k);
        out!(k_prime, m.k_prime);
        PermsymStatus::Ok
    })
}

/// Exact energy of the level with `n_sym` degenerate-mode quanta and `n_last`
/// symmetric-mode quanta.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_model_level_energy(
    model: *const PermsymModel,
    n_sym: usize,
    n_last: usize,
    energy: *mut f64,
) -> PermsymStatus {
    guard(|| {
        let m = &deref!(model).0;
        out!(energy, m.level_energy(n_sym, n_last));
        PermsymStatus::Ok
    })
}

/// Character table of `S_N` with labels kept alive for C callers.
pub struct PermsymCharacterTable {
    table: CharacterTable,
    irrep_labels: Vec<CString>,
    class_labels: Vec<CString>,
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn permsym_table_new(n: usize, out: *mut *mut PermsymCharacterTable) -> PermsymStatus {
    guard(|| match character_table(n) {
        Ok(table) => {
            let irrep_labels = table.irreps.iter().map(|g| CString::new(g.label.clone()).unwrap()).collect();
            let class_labels = table.classes.iter().map(|c| CString::new(c.alias.clone()).unwrap()).collect();
            out!(out, Box::into_raw(Box::new(PermsymCharacterTable { table, irrep_labels, class_labels })));
            PermsymStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn permsym_table_free(table: *mut PermsymCharacterTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_table_shape(
    table: *const PermsymCharacterTable,
    irreps: *mut usize,
    classes: *mut usize,
) -> PermsymStatus {
    guard(|| {
        let t = &deref!(table).table;
        out!(irreps, t.irreps.len());
        out!(classes, t.classes.len());
        PermsymStatus::Ok
    })
}

/// Character of irrep `irrep` on class `class`, both zero-based.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_table_character(
    table: *const PermsymCharacterTable,
    irrep: usize,
    class: usize,
    value: *mut i64,
) -> PermsymStatus {
    guard(|| {
        let t = &deref!(table).table;
        match t.chars.get(irrep).and_then(|row| row.get(class)) {
            Some(&x) => {
                out!(value, x);
                PermsymStatus::Ok
            }
            None => {
                set_error(format!("no character at ({irrep}, {class})"));
                PermsymStatus::IndexOutOfRange
            }
        }
    })
}

/// Label and dimension of irrep `irrep`. The label lives as long as the table.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_table_irrep(
    table: *const PermsymCharacterTable,
    irrep: usize,
    label: *mut *const c_char,
    dim: *mut usize,
) -> PermsymStatus {
    guard(|| {
        let t = deref!(table);
        match (t.irrep_labels.get(irrep), t.table.irreps.get(irrep)) {
            (Some(l), Some(g)) => {
                out!(label, l.as_ptr());
                out!(dim, g.dim);
                PermsymStatus::Ok
            }
            _ => {
                set_error(format!("no irrep {irrep}"));
                PermsymStatus::IndexOutOfRange
            }
        }
    })
}

/// Point-group name and size of class `class`. The name lives as long as the
/// table.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_table_class(
    table: *const PermsymCharacterTable,
    class: usize,
    label: *mut *const c_char,
    size: *mut usize,
) -> PermsymStatus {
    guard(|| {
        let t = deref!(table);
        match (t.class_labels.get(class), t.table.classes.get(class)) {
            (Some(l), Some(c)) => {
                out!(label, l.as_ptr());
                out!(size, c.size);
                PermsymStatus::Ok
            }
            _ => {
                set_error(format!("no class {class}"));
                PermsymStatus::IndexOutOfRange
            }
        }
    })
}

/// Total spins allowed with spatial irrep `label`, as `2S`, in decreasing
/// order. Writes at most `capacity` values and always the full count; a
/// count of zero means the irrep is forbidden.
///
/// # Safety
/// `label` must be a NUL-terminated string; `twice_spins` must hold
/// `capacity` values (it may be null when `capacity` is zero).
#[no_mangle]
pub unsafe extern "C" fn permsym_allowed_spins(
    n: usize,
    label: *const c_char,
    twice_spins: *mut i32,
    capacity: usize,
    count: *mut usize,
) -> PermsymStatus {
    guard(|| {
        if label.is_null() {
            set_error("null pointer: label");
            return PermsymStatus::NullPointer;
        }
        let Ok(label) = CStr::from_ptr(label).to_str() else {
            set_error("label is not UTF-8");
            return PermsymStatus::Usage;
        };
        let map = match allowed_spatial_irreps(n, None) {
            Ok(m) => m,
            Err(e) => return status_of(&e),
        };
        let Some(entry) = map.get(label) else {
            set_error(format!("no irrep {label} for N = {n}"));
            return PermsymStatus::Usage;
        };
        if capacity > 0 && twice_spins.is_null() {
            set_error("null pointer: twice_spins");
            return PermsymStatus::NullPointer;
        }
        for (i, s) in entry.spins.iter().take(capacity).enumerate() {
            twice_spins.add(i).write(s.0);
        }
        out!(count, entry.spins.len());
        PermsymStatus::Ok
    })
}

/// One CI eigenstate. Spins are stored doubled so they stay integral.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PermsymCiState {
    pub energy: f64,
    pub s_squared: f64,
    pub twice_s: i32,
    pub twice_ms: i32,
    pub parity: i32,
}

pub struct PermsymCiResult(CiResult);

/// Full CI in `orbitals` oscillator orbitals. When `has_ms` is nonzero only
/// determinants with `2M_s = twice_ms` are included.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_ci_run(
    model: *const PermsymModel,
    orbitals: usize,
    has_ms: i32,
    twice_ms: i32,
    out: *mut *mut PermsymCiResult,
) -> PermsymStatus {
    guard(|| {
        let m = &deref!(model).0;
        let ms = (has_ms != 0).then_some(HalfInt(twice_ms));
        match run_ci(m, orbitals, ms) {
            Ok(r) => {
                out!(out, Box::into_raw(Box::new(PermsymCiResult(r))));
                PermsymStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn permsym_ci_free(result: *mut PermsymCiResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_ci_len(result: *const PermsymCiResult, len: *mut usize) -> PermsymStatus {
    guard(|| {
        let r = &deref!(result).0;
        out!(len, r.states.len());
        PermsymStatus::Ok
    })
}

/// State `index` in ascending energy.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_ci_state(
    result: *const PermsymCiResult,
    index: usize,
    state: *mut PermsymCiState,
) -> PermsymStatus {
    guard(|| {
        let r = &deref!(result).0;
        let Some(s) = r.states.get(index) else {
            set_error(format!("no state {index}"));
            return PermsymStatus::IndexOutOfRange;
        };
        out!(
            state,
            PermsymCiState {
                energy: s.energy,
                s_squared: s.s_squared,
                twice_s: s.s.0,
                twice_ms: s.ms.0,
                parity: s.parity,
            }
        );
        PermsymStatus::Ok
    })
}

/// Exact level that no CI state reached.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PermsymMissingLevel {
    pub n_sym: usize,
    pub n_last: usize,
    pub energy: f64,
    /// Nonzero when every irrep in the level is forbidden.
    pub forbidden_only: i32,
}

pub struct PermsymReport(ComparisonReport);

/// Runs CI and compares it with the exact spectrum up to `max_quanta`.
/// Returns [`PermsymStatus::Ok`] whenever the comparison completes, whether or
/// not it verified; query [`permsym_report_verified`] for the outcome.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn permsym_compare_run(
    n: usize,
    xi: f64,
    orbitals: usize,
    max_quanta: usize,
    tol: f64,
    out: *mut *mut PermsymReport,
) -> PermsymStatus {
    guard(|| match missing_levels_experiment(n, xi, orbitals, max_quanta, tol, None) {
        Ok(r) => {
            out!(out, Box::into_raw(Box::new(PermsymReport(r))));
            PermsymStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn permsym_report_free(report: *mut PermsymReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// [`PermsymStatus::Ok`] if the comparison verified, otherwise
/// [`PermsymStatus::VerificationFailed`].
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn permsym_report_verified(report: *const PermsymReport) -> PermsymStatus {
    guard(|| {
        if deref!(report).0.verified() {
            PermsymStatus::Ok
        } else {
            set_error("missing-level verification failed");
            PermsymStatus::VerificationFailed
        }
    })
}

/// Counts of matched states, missing levels and spurious states, plus the
/// convergence horizon.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_report_counts(
    report: *const PermsymReport,
    matched: *mut usize,
    missing: *mut usize,
    spurious: *mut usize,
    horizon: *mut f64,
) -> PermsymStatus {
    guard(|| {
        let r = &deref!(report).0;
        out!(matched, r.matched.len());
        out!(missing, r.missing.len());
        out!(spurious, r.spurious.len());
        out!(horizon, r.horizon);
        PermsymStatus::Ok
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_report_missing(
    report: *const PermsymReport,
    index: usize,
    level: *mut PermsymMissingLevel,
) -> PermsymStatus {
    guard(|| {
        let r = &deref!(report).0;
        let Some(l) = r.missing.get(index) else {
            set_error(format!("no missing level {index}"));
            return PermsymStatus::IndexOutOfRange;
        };
        out!(
            level,
            PermsymMissingLevel {
                n_sym: l.quanta_key.0,
                n_last: l.quanta_key.1,
                energy: l.energy,
                forbidden_only: l.forbidden_only as i32,
            }
        );
        PermsymStatus::Ok
    })
}

/// The whole report as JSON. Release with [`permsym_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn permsym_report_json(report: *const PermsymReport, json: *mut *mut c_char) -> PermsymStatus {
    guard(|| {
        let r = &deref!(report).0;
        match serde_json::to_string(r) {
            Ok(s) => {
                out!(json, into_c_string(s));
                PermsymStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                PermsymStatus::Numerical
            }
        }
    })
}
