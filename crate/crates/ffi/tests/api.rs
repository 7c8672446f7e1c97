use std::ffi::{CStr, CString};
use std::ptr;

use toric_whb_ffi::*;

fn last_error() -> String {
    let p = twhb_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn catalog_fan(name: &str, d: i64, alpha: i64) -> *mut TwhbFan {
    let name = CString::new(name).unwrap();
    let mut fan = ptr::null_mut();
    let st = unsafe { twhb_fan_from_catalog(name.as_ptr(), d, -1, -1, alpha, &mut fan) };
    assert_eq!(st, TwhbStatus::Ok);
    fan
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    twhb_string_free(p);
    s
}

#[test]
fn fan_roundtrip_and_shape() {
    let text = CString::new(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[0,2]]}"#).unwrap();
    let mut fan = ptr::null_mut();
    unsafe {
        assert_eq!(twhb_fan_from_json(text.as_ptr(), &mut fan), TwhbStatus::Ok);
        let (mut d, mut n, mut rho) = (0, 0, 0);
        assert_eq!(twhb_fan_shape(fan, &mut d, &mut n, &mut rho), TwhbStatus::Ok);
        assert_eq!((d, n, rho), (2, 3, 1));
        let mut valid = false;
        assert_eq!(twhb_fan_is_valid(fan, &mut valid), TwhbStatus::Ok);
        assert!(valid);
        let mut out = ptr::null_mut();
        assert_eq!(twhb_fan_to_json(fan, &mut out), TwhbStatus::Ok);
        let json = take_string(out);
        let mut again = ptr::null_mut();
        let c = CString::new(json).unwrap();
        assert_eq!(twhb_fan_from_json(c.as_ptr(), &mut again), TwhbStatus::Ok);
        twhb_fan_free(again);
        twhb_fan_free(fan);
    }
}

#[test]
fn errors_set_status_and_message() {
    let bad = CString::new(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,7]]}"#).unwrap();
    let mut fan = ptr::null_mut();
    unsafe {
        assert_eq!(twhb_fan_from_json(bad.as_ptr(), &mut fan), TwhbStatus::Input);
        assert!(fan.is_null());
        assert!(last_error().contains("ray 7"));
        let junk = CString::new("{not json").unwrap();
        assert_eq!(twhb_fan_from_json(junk.as_ptr(), &mut fan), TwhbStatus::Parse);
        assert_eq!(twhb_fan_from_json(ptr::null(), &mut fan), TwhbStatus::NullPointer);
        assert_eq!(twhb_fan_shape(ptr::null(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()), TwhbStatus::NullPointer);
        let unknown = CString::new("nope").unwrap();
        assert_eq!(twhb_fan_from_catalog(unknown.as_ptr(), -1, -1, -1, -1, &mut fan), TwhbStatus::Input);
    }
    // A successful call clears the message.
    let fan = catalog_fan("S7", -1, -1);
    assert!(twhb_last_error().is_null());
    unsafe { twhb_fan_free(fan) };
}

#[test]
fn invalid_fan_reports_reason() {
    // Two cones of P^2 only: not complete.
    let text = CString::new(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2]]}"#).unwrap();
    let mut fan = ptr::null_mut();
    unsafe {
        assert_eq!(twhb_fan_from_json(text.as_ptr(), &mut fan), TwhbStatus::Ok);
        let mut valid = true;
        assert_eq!(twhb_fan_is_valid(fan, &mut valid), TwhbStatus::Ok);
        assert!(!valid);
        assert!(last_error().contains("unpaired facets"));
        let mut fano = false;
        assert_eq!(twhb_fan_is_fano(fan, &mut fano), TwhbStatus::InvalidFan);
        twhb_fan_free(fan);
    }
}

#[test]
fn relations_and_primes() {
    let s6 = catalog_fan("S6", -1, -1);
    let k43 = catalog_fan("kleinschmidt", 4, 3);
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(twhb_fan_relations_json(s6, &mut out), TwhbStatus::Ok);
        let rels: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(rels.as_array().unwrap().len(), 9);
        let mut fano = false;
        assert_eq!(twhb_fan_is_fano(s6, &mut fano), TwhbStatus::Ok);
        assert!(fano);

        let mut buf = [0u64; 4];
        let mut len = 0;
        assert_eq!(twhb_fan_admissible_primes(k43, 7, buf.as_mut_ptr(), buf.len(), &mut len), TwhbStatus::Ok);
        assert_eq!(&buf[..len], &[2]);
        // Too small a buffer still reports the length.
        assert_eq!(twhb_fan_admissible_primes(k43, 7, ptr::null_mut(), 0, &mut len), TwhbStatus::BufferTooSmall);
        assert_eq!(len, 1);
        twhb_fan_free(s6);
        twhb_fan_free(k43);
    }
}

#[test]
fn bundle_from_coefficients() {
    let p1 = catalog_fan("projective-space", 1, -1);
    unsafe {
        let coeffs = [1i64, 0];
        let mut bundle = ptr::null_mut();
        assert_eq!(twhb_bundle_new(p1, coeffs.as_ptr(), 1, &mut bundle), TwhbStatus::Ok);
        let mut r = 0;
        assert_eq!(twhb_bundle_rank(bundle, &mut r), TwhbStatus::Ok);
        assert_eq!(r, 1);
        let mut total = ptr::null_mut();
        assert_eq!(twhb_bundle_total_fan(bundle, &mut total), TwhbStatus::Ok);
        let (mut d, mut n, mut rho) = (0, 0, 0);
        twhb_fan_shape(total, &mut d, &mut n, &mut rho);
        assert_eq!((d, n, rho), (2, 4, 2));
        twhb_fan_free(total);
        twhb_bundle_free(bundle);
        assert_eq!(twhb_bundle_new(p1, coeffs.as_ptr(), 0, &mut bundle), TwhbStatus::Input);
        twhb_fan_free(p1);
    }
}

#[test]
fn catalog_bundle_equation_checks() {
    let name = CString::new("S7-bundle").unwrap();
    let mut bundle = ptr::null_mut();
    let mut eq = ptr::null_mut();
    unsafe {
        assert_eq!(twhb_bundle_from_catalog(name.as_ptr(), -1, -1, -1, &mut bundle, &mut eq), TwhbStatus::Ok);
        let eq = CString::new(take_string(eq)).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(twhb_bundle_check_equation(bundle, eq.as_ptr(), 2, &mut out), TwhbStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["homogeneous"], true);
        assert_eq!(v["wildness"]["verdict"], "wild");
        assert_eq!(v["smoothness"]["outcome"], "smooth");

        // Dropping the last term leaves a singular, non-wild hypersurface.
        let cut = CString::new("X3*X4*Y1^2+X1*X5*Y2^2").unwrap();
        assert_eq!(twhb_bundle_check_equation(bundle, cut.as_ptr(), 2, &mut out), TwhbStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["wildness"]["verdict"], "not-wild");
        assert_eq!(v["smoothness"]["outcome"], "singular");

        let garbage = CString::new("X1**").unwrap();
        assert_eq!(twhb_bundle_check_equation(bundle, garbage.as_ptr(), 2, &mut out), TwhbStatus::Parse);
        twhb_bundle_free(bundle);
    }
}
