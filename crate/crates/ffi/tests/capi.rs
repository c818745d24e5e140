use std::ffi::CStr;
use std::ptr;

use fastgh_ffi::*;

#[test]
fn hermite_roundtrip() {
    let mut h = ptr::null_mut();
    let s = unsafe { fastgh_hermite_rule(7, false, &mut h) };
    assert_eq!(s, FastghStatus::Ok);
    let len = unsafe { fastgh_rule_len(h) };
    assert_eq!(len, 7);
    let mut x = vec![0.0; len];
    let mut w = vec![0.0; len];
    assert_eq!(unsafe { fastgh_rule_copy(h, x.as_mut_ptr(), w.as_mut_ptr(), len) }, FastghStatus::Ok);
    let total: f64 = w.iter().sum();
    assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    assert_eq!(x[3], 0.0);
    assert_eq!(
        unsafe { fastgh_rule_copy(h, x.as_mut_ptr(), ptr::null_mut(), 3) },
        FastghStatus::BufferTooSmall
    );
    unsafe { fastgh_rule_free(h) };
}

#[test]
fn errors_carry_messages() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { fastgh_hermite_rule(0, false, &mut h) }, FastghStatus::InvalidArgument);
    let msg = unsafe { CStr::from_ptr(fastgh_last_error()) }.to_str().unwrap();
    assert!(!msg.is_empty());
    assert!(h.is_null());
    assert_eq!(unsafe { fastgh_hermite_rule(3, false, ptr::null_mut()) }, FastghStatus::NullPointer);
    let bad = [0.0, 0.0, 0.0, 1.0];
    assert_eq!(
        unsafe { fastgh_freud_rule(bad.as_ptr(), bad.len(), 4, false, &mut h) },
        FastghStatus::InvalidArgument
    );
    unsafe { fastgh_rule_free(ptr::null_mut()) };
}

#[test]
fn freud_and_interp() {
    let v = [0.0, 0.0, 0.0, 0.0, 1.0];
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { fastgh_freud_rule(v.as_ptr(), v.len(), 6, false, &mut h) }, FastghStatus::Ok);
    let mut x = vec![0.0; 6];
    unsafe { fastgh_rule_copy(h, x.as_mut_ptr(), ptr::null_mut(), 6) };
    unsafe { fastgh_rule_free(h) };
    let f: Vec<f64> = x.iter().map(|t| t * t).collect();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { fastgh_interp_new(x.as_ptr(), f.as_ptr(), 6, v.as_ptr(), v.len(), &mut p) },
        FastghStatus::Ok
    );
    let mut y = 0.0;
    assert_eq!(unsafe { fastgh_interp_eval(p, 0.3, false, &mut y) }, FastghStatus::Ok);
    assert!((y - 0.09).abs() < 1e-13);
    unsafe { fastgh_interp_eval(p, 0.3, true, &mut y) };
    assert!((y - 0.09 * (-0.5 * 0.3f64.powi(4)).exp()).abs() < 1e-13);
    unsafe { fastgh_interp_free(p) };
}

#[test]
fn airy_values() {
    let (mut a, mut d) = (0.0, 0.0);
    assert_eq!(unsafe { fastgh_airy(0.0, &mut a, &mut d) }, FastghStatus::Ok);
    assert!((a - 0.3550280538878172).abs() < 1e-15);
    assert!((d + 0.2588194037928068).abs() < 1e-15);
    assert_eq!(unsafe { fastgh_airy(f64::NAN, &mut a, ptr::null_mut()) }, FastghStatus::InvalidArgument);
}

#[test]
fn header_declares_entry_points() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fastgh.h")).unwrap();
    for name in ["fastgh_hermite_rule", "fastgh_freud_rule", "fastgh_rule_free", "fastgh_interp_eval", "FastghStatus"] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
