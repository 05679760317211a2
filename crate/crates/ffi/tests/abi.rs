use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qextend_ffi::*;

fn field(q: u32) -> *mut QxField {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { qx_field_new(q, &mut f) }, QxStatus::Ok);
    f
}

fn last_error() -> String {
    let p = qx_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn field_errors_map_to_codes() {
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(qx_field_new(9, &mut f), QxStatus::NotPrime);
        assert!(last_error().contains('9'));
        assert_eq!(qx_field_new(2, &mut f), QxStatus::EvenCharacteristic);
        assert_eq!(qx_field_new(10007, &mut f), QxStatus::FieldTooLarge);
        assert_eq!(qx_field_new(7, ptr::null_mut()), QxStatus::NullPointer);
    }
    assert!(f.is_null());
}

#[test]
fn status_names_are_static() {
    let name = unsafe { CStr::from_ptr(qx_status_name(QxStatus::DegenerateForm)) };
    assert_eq!(name.to_str().unwrap(), "degenerate_form");
}

#[test]
fn scalar_sums() {
    let f = field(7);
    let (mut re, mut im) = (0.0, 0.0);
    unsafe {
        assert_eq!(qx_field_q(f), 7);
        assert_eq!(qx_gauss_sum(f, 1, 1, &mut re, &mut im), QxStatus::Ok);
        // q = 3 mod 4, so G = i√q
        assert!(re.abs() < 1e-12 && (im - 7f64.sqrt()).abs() < 1e-12);
        assert_eq!(qx_gauss_sum(f, 0, 1, &mut re, &mut im), QxStatus::ZeroCoefficient);
        assert_eq!(qx_kloosterman_sum(f, 0, 0, &mut re, &mut im), QxStatus::Ok);
        assert!((re - 6.0).abs() < 1e-12 && im.abs() < 1e-12);
        assert_eq!(qx_salie_sum(f, 1, 2, &mut re, &mut im), QxStatus::Ok);
        assert!((re * re + im * im).sqrt() <= 2.0 * 7f64.sqrt() + 1e-9);
        assert_eq!(qx_salie_sum(f, 1, 2, ptr::null_mut(), &mut im), QxStatus::NullPointer);
        qx_field_free(f);
    }
}

#[test]
fn circle_over_f3_round_trip() {
    let f = field(3);
    let entries = [1i64, 0, 0, 1];
    let mut form = ptr::null_mut();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(qx_form_new(f, 2, entries.as_ptr(), &mut form), QxStatus::Ok);
        assert!(qx_form_is_nondegenerate(form));
        assert_eq!(qx_surface_new(form, 0, &mut s), QxStatus::ZeroLevel);
        assert_eq!(qx_surface_new(form, 1, &mut s), QxStatus::Ok);
        assert_eq!(qx_surface_cardinality(s), 4);
        assert_eq!(qx_surface_dim(s), 2);

        let mut pts = [0u32; 8];
        assert_eq!(qx_surface_points(s, pts.as_mut_ptr(), 7), QxStatus::BufferTooSmall);
        assert_eq!(qx_surface_points(s, pts.as_mut_ptr(), 8), QxStatus::Ok);
        assert_eq!(pts, [0, 1, 0, 2, 1, 0, 2, 0]);

        let (mut re, mut im) = ([0.0; 9], [0.0; 9]);
        let (mut dre, mut dim) = ([0.0; 9], [0.0; 9]);
        assert_eq!(qx_surface_ft(s, true, re.as_mut_ptr(), im.as_mut_ptr(), 9), QxStatus::Ok);
        assert_eq!(qx_surface_ft(s, false, dre.as_mut_ptr(), dim.as_mut_ptr(), 9), QxStatus::Ok);
        for k in 0..9 {
            assert!((re[k] - dre[k]).abs() < 1e-12 && (im[k] - dim[k]).abs() < 1e-12);
        }
        // Ŝ(0) = #S / q^d
        assert!((re[0] - 4.0 / 9.0).abs() < 1e-12);

        // extension of the constant 1 is the normalized surface transform scaled by q^d/#S
        let ones = [1.0; 4];
        let zeros = [0.0; 4];
        let (mut ere, mut eim) = ([0.0; 9], [0.0; 9]);
        assert_eq!(
            qx_extension_transform(s, ones.as_ptr(), zeros.as_ptr(), 4, ere.as_mut_ptr(), eim.as_mut_ptr(), 9),
            QxStatus::Ok
        );
        for k in 0..9 {
            assert!((ere[k] - re[k] * 9.0 / 4.0).abs() < 1e-12);
        }
        assert_eq!(
            qx_extension_transform(s, ones.as_ptr(), zeros.as_ptr(), 3, ere.as_mut_ptr(), eim.as_mut_ptr(), 9),
            QxStatus::DimensionMismatch
        );

        let all = [0usize, 1, 2, 3];
        let mut energy = 0u64;
        assert_eq!(qx_additive_energy(s, all.as_ptr(), 4, &mut energy), QxStatus::Ok);
        assert_eq!(energy, 36);
        let bad = [1usize, 0];
        assert_eq!(qx_additive_energy(s, bad.as_ptr(), 2, &mut energy), QxStatus::BadSubset);

        qx_surface_free(s);
        qx_form_free(form);
        qx_field_free(f);
    }
}

#[test]
fn degenerate_and_asymmetric_forms() {
    let f = field(5);
    let mut form = ptr::null_mut();
    unsafe {
        let asym = [1i64, 2, 0, 1];
        assert_eq!(qx_form_new(f, 2, asym.as_ptr(), &mut form), QxStatus::NotSymmetric);
        let sing = [1i64, 1, 1, 1];
        assert_eq!(qx_form_new(f, 2, sing.as_ptr(), &mut form), QxStatus::Ok);
        assert!(!qx_form_is_nondegenerate(form));
        let mut s = ptr::null_mut();
        assert_eq!(qx_surface_new(form, 1, &mut s), QxStatus::DegenerateForm);
        qx_form_free(form);
        qx_field_free(f);
    }
}

#[test]
fn exponent_pairs() {
    let mut out = QxExponentPair {
        p_num: 0,
        p_den: 0,
        r_num: 0,
        r_den: 0,
    };
    unsafe {
        assert_eq!(qx_incidence3_exponents(3, 4, 1, false, &mut out), QxStatus::Ok);
        assert!(out.p_den > 0 && out.r_den > 0);
        assert_eq!(qx_incidence3_exponents(2, 4, 1, true, &mut out), QxStatus::DegenerateDenominator);
        assert_eq!(qx_incidence3_exponents(3, 1, 1, false, &mut out), QxStatus::BadExponent);
        assert_eq!(qx_incidence3_exponents(3, 4, 0, false, &mut out), QxStatus::BadExponent);
    }
}

#[test]
fn header_is_current_and_compiles() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/qextend.h")).unwrap();
    for name in [
        "qx_field_new",
        "qx_surface_ft",
        "qx_extension_transform",
        "qx_additive_energy",
        "qx_last_error_message",
        "QX_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(dir.join("include/qextend.h"))
        .output()
    else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
