use std::ffi::{CStr, CString};
use std::ptr;

use origami_spectrum_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    os_string_free(p);
    s
}

#[test]
fn orbit_statistics() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(os_orbit_b7(&mut g), OsStatus::Ok);
        let mut n = 0usize;
        assert_eq!(os_orbit_vertex_count(g, &mut n), OsStatus::Ok);
        assert_eq!(n, 36);
        let mut widths = Vec::new();
        let mut m2 = 0;
        for v in 0..n {
            let (mut w, mut m) = (0usize, 0u32);
            assert_eq!(os_orbit_cusp_width(g, v, &mut w), OsStatus::Ok);
            assert_eq!(os_orbit_multiplicity(g, v, &mut m), OsStatus::Ok);
            widths.push(w);
            if m == 2 {
                m2 += 1;
                assert_eq!(w, 7);
            }
        }
        assert_eq!(m2, 7);
        assert_eq!(widths.iter().filter(|&&w| w == 7).count(), 21);
        let mut w = 0usize;
        assert_eq!(
            os_orbit_cusp_width(g, 36, &mut w),
            OsStatus::InvalidArgument
        );
        os_orbit_free(g);
    }
}

#[test]
fn minimum_value() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(os_orbit_b7(&mut g), OsStatus::Ok);
        let alpha = cstr("[;(1,3)]");
        let mut start = usize::MAX;
        let mut v = ptr::null_mut();
        assert_eq!(
            os_lagrange_min(g, alpha.as_ptr(), &mut start, &mut v),
            OsStatus::Ok
        );
        assert!(start < 36);
        assert_eq!(take_string(os_value_surd_string(v)), "7*sqrt(21)/3");
        assert_eq!(take_string(os_value_decimal_string(v, 6)), "10.692677±5e-7");
        let mut x = 0.0;
        assert_eq!(os_value_to_f64(v, &mut x), OsStatus::Ok);
        assert!((x - 7.0 * 21f64.sqrt() / 3.0).abs() < 1e-12);

        let mut same = ptr::null_mut();
        assert_eq!(
            os_lagrange(g, start, alpha.as_ptr(), &mut same),
            OsStatus::Ok
        );
        let mut c = 7;
        assert_eq!(os_value_compare(v, same, &mut c), OsStatus::Ok);
        assert_eq!(c, 0);
        os_value_free(same);
        os_value_free(v);
        os_orbit_free(g);
    }
}

#[test]
fn torus_and_errors() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(os_orbit_torus(&mut t), OsStatus::Ok);
        let mut v = ptr::null_mut();
        let golden = cstr("[;(1)]");
        assert_eq!(os_lagrange(t, 0, golden.as_ptr(), &mut v), OsStatus::Ok);
        assert_eq!(take_string(os_value_surd_string(v)), "sqrt(5)");
        os_value_free(v);

        let bad = cstr("[;(1,3");
        let mut v = ptr::null_mut();
        assert_eq!(
            os_lagrange(t, 0, bad.as_ptr(), &mut v),
            OsStatus::ParseError
        );
        assert!(v.is_null());
        let msg = CStr::from_ptr(os_last_error_message()).to_str().unwrap();
        assert!(!msg.is_empty());

        let rational = cstr("[2,3]");
        assert_eq!(
            os_lagrange(t, 0, rational.as_ptr(), &mut v),
            OsStatus::InvalidArgument
        );
        assert_eq!(
            os_lagrange(ptr::null(), 0, golden.as_ptr(), &mut v),
            OsStatus::NullPointer
        );
        assert_eq!(
            os_lagrange(t, 0, golden.as_ptr(), ptr::null_mut()),
            OsStatus::NullPointer
        );
        os_orbit_free(t);
        os_orbit_free(ptr::null_mut());
        os_value_free(ptr::null_mut());
        os_string_free(ptr::null_mut());
    }
}

#[test]
fn subshift_values() {
    unsafe {
        let (mut l, mut r) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(os_gap_first(0, &mut l, &mut r), OsStatus::Ok);
        assert_eq!(take_string(os_value_surd_string(l)), "7*sqrt(21)/3");
        assert_eq!(take_string(os_value_surd_string(r)), "7+sqrt(21)");
        os_value_free(l);
        os_value_free(r);

        let a = cstr("a");
        let mut v = ptr::null_mut();
        assert_eq!(os_l_sigma(a.as_ptr(), &mut v), OsStatus::Ok);
        assert_eq!(take_string(os_value_decimal_string(v, 6)), "11.593101±5e-7");
        os_value_free(v);

        let b = cstr("b^2");
        assert_eq!(os_l_sigma(b.as_ptr(), &mut v), OsStatus::InvalidArgument);

        let (mut l, mut r) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(os_gap_second(2, 3, &mut l, &mut r), OsStatus::Ok);
        let mut c = 0;
        assert_eq!(os_value_compare(l, r, &mut c), OsStatus::Ok);
        assert_eq!(c, -1);
        os_value_free(l);
        os_value_free(r);
        assert_eq!(
            os_gap_second(0, 1, &mut l, &mut r),
            OsStatus::InvalidArgument
        );
    }
}

#[test]
fn header_lists_every_function() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/origami_spectrum.h"
    ))
    .unwrap();
    for f in [
        "os_orbit_b7",
        "os_orbit_torus",
        "os_orbit_free",
        "os_orbit_vertex_count",
        "os_orbit_multiplicity",
        "os_orbit_cusp_width",
        "os_lagrange",
        "os_lagrange_min",
        "os_l_sigma",
        "os_gap_first",
        "os_gap_second",
        "os_value_to_f64",
        "os_value_compare",
        "os_value_surd_string",
        "os_value_decimal_string",
        "os_value_free",
        "os_string_free",
        "os_last_error_message",
        "typedef struct OsOrbit OsOrbit",
        "OS_STATUS_OK = 0",
    ] {
        assert!(header.contains(f), "missing {f}");
    }
}
