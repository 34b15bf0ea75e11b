use std::ffi::{CStr, CString};
use std::ptr;

use nilcoh_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(nc_last_error())
            .to_string_lossy()
            .into_owned()
    }
}

unsafe fn dims(t: *const NcTable) -> Vec<usize> {
    let mut top = 0;
    assert_eq!(nc_table_top_degree(t, &mut top), NcStatus::Ok);
    (0..=top)
        .map(|k| {
            let mut d = 0;
            assert_eq!(nc_table_dim(t, k, &mut d), NcStatus::Ok);
            d
        })
        .collect()
}

#[test]
fn catalog_betti_and_poincare() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(
            nc_algebra_from_catalog(c("g_{3.1}+3g_1").as_ptr(), &mut a),
            NcStatus::Ok
        );
        let mut n = 0;
        assert_eq!(nc_algebra_dim(a, &mut n), NcStatus::Ok);
        assert_eq!(n, 6);
        let mut t = ptr::null_mut();
        assert_eq!(nc_betti(a, &mut t), NcStatus::Ok);
        assert_eq!(dims(t), vec![1, 5, 11, 14, 11, 5, 1]);
        let mut s = ptr::null_mut();
        assert_eq!(nc_table_poincare(t, &mut s), NcStatus::Ok);
        assert_eq!(
            CStr::from_ptr(s).to_str().unwrap(),
            "x^6 + 5*x^5 + 11*x^4 + 14*x^3 + 11*x^2 + 5*x + 1"
        );
        let mut d = 0;
        assert_eq!(nc_table_dim(t, 7, &mut d), NcStatus::OutOfRange);
        assert_eq!(
            nc_table_bidegree_dim(t, 0, 0, &mut d),
            NcStatus::InvalidInput
        );
        nc_string_free(s);
        nc_table_free(t);
        nc_algebra_free(a);
    }
}

#[test]
fn checks_and_errors() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(
            nc_algebra_from_salamon(c("(14+24,24+34,34,0)").as_ptr(), &mut a),
            NcStatus::Ok
        );
        let (mut uni, mut nil) = (true, true);
        assert_eq!(nc_algebra_is_unimodular(a, &mut uni), NcStatus::Ok);
        assert_eq!(nc_algebra_is_nilpotent(a, &mut nil), NcStatus::Ok);
        assert!(!uni && !nil);
        let mut t = ptr::null_mut();
        assert_eq!(
            nc_morse_novikov(a, c("-2*e3").as_ptr(), &mut t),
            NcStatus::Ok
        );
        assert_eq!(dims(t), vec![0, 0, 1, 1, 0]);
        nc_table_free(t);
        assert_eq!(
            nc_morse_novikov(a, c("e0^e1").as_ptr(), &mut t),
            NcStatus::InvalidInput
        );
        nc_algebra_free(a);

        let mut b = ptr::null_mut();
        assert_eq!(
            nc_algebra_from_salamon(c("(0,0,12,13,24)").as_ptr(), &mut b),
            NcStatus::NotLieAlgebra
        );
        assert!(b.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(
            nc_algebra_from_catalog(c("nope").as_ptr(), &mut b),
            NcStatus::InvalidInput
        );
        assert!(last_error().contains("nope"));
        assert_eq!(
            nc_algebra_from_catalog(ptr::null(), &mut b),
            NcStatus::NullPointer
        );
        assert_eq!(
            nc_algebra_dim(ptr::null(), ptr::null_mut()),
            NcStatus::NullPointer
        );
    }
}

#[test]
fn json_round_trip_and_complex_structure() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(
            nc_algebra_from_catalog(c("h8").as_ptr(), &mut a),
            NcStatus::Ok
        );
        let mut s = ptr::null_mut();
        assert_eq!(nc_algebra_to_json(a, &mut s), NcStatus::Ok);
        let mut b = ptr::null_mut();
        assert_eq!(nc_algebra_from_json(s, &mut b), NcStatus::Ok);
        nc_string_free(s);
        let j = c(
            r#"{"J": [[0,-1,0,0,0,0],[1,0,0,0,0,0],[0,0,0,-1,0,0],[0,0,1,0,0,0],[0,0,0,0,0,-1],[0,0,0,0,1,0]], "chosen": [0,2,4]}"#,
        );
        let mut t = ptr::null_mut();
        assert_eq!(
            nc_complex_cohomology(b, j.as_ptr(), NcTheory::BottChern, &mut t),
            NcStatus::Ok
        );
        assert_eq!(dims(t), vec![1, 4, 10, 16, 14, 6, 1]);
        let mut d = 0;
        assert_eq!(nc_table_bidegree_dim(t, 1, 1, &mut d), NcStatus::Ok);
        assert_eq!(d, 6);
        nc_table_free(t);
        assert_eq!(
            nc_complex_cohomology(b, c("{\"J\": [[1]]}").as_ptr(), NcTheory::Aeppli, &mut t),
            NcStatus::InvalidInput
        );
        nc_algebra_free(a);
        nc_algebra_free(b);
    }
}

#[test]
fn header_is_valid_c() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/nilcoh.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "nc_last_error",
        "nc_algebra_from_catalog",
        "nc_betti",
        "nc_complex_cohomology",
        "nc_table_poincare",
    ] {
        assert!(text.contains(f), "{f}");
    }
    let out = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99"])
        .arg(&header)
        .output();
    match out {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(e) => panic!("C compiler unavailable: {e}"),
    }
}
