use std::ffi::{CStr, CString};
use std::ptr;

use fdslab_ffi::*;

const EXAMPLE1: &str = "field: 3\nf1 = 1 - x1*x2\nf2 = 1 + 2*x2\n";

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = fds_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn parse(text: &str, field: u32) -> *mut FdsSystem {
    let mut sys = ptr::null_mut();
    let status = unsafe { fds_system_parse(cstr(text).as_ptr(), field, &mut sys) };
    assert_eq!(status, FdsStatus::Ok, "{}", last_error());
    sys
}

#[test]
fn system_round_trip_and_step() {
    let sys = parse(EXAMPLE1, 0);
    unsafe {
        assert_eq!(fds_system_nvars(sys), 2);
        assert_eq!(fds_system_field_order(sys), 3);
        let mut out = [9u32; 2];
        assert_eq!(fds_system_step(sys, [1, 1].as_ptr(), 2, out.as_mut_ptr()), FdsStatus::Ok);
        assert_eq!(out, [0, 0]);
        assert_eq!(
            fds_system_step(sys, [1, 1, 1].as_ptr(), 3, out.as_mut_ptr()),
            FdsStatus::ArityMismatch
        );

        let mut text = ptr::null_mut();
        assert_eq!(fds_system_to_string(sys, &mut text), FdsStatus::Ok);
        let rendered = CStr::from_ptr(text).to_str().unwrap().to_owned();
        fds_string_free(text);
        let again = parse(&rendered, 0);
        for s in 0..9u32 {
            let x = [s / 3, s % 3];
            let (mut a, mut b) = ([0u32; 2], [0u32; 2]);
            fds_system_step(sys, x.as_ptr(), 2, a.as_mut_ptr());
            fds_system_step(again, x.as_ptr(), 2, b.as_mut_ptr());
            assert_eq!(a, b);
        }
        fds_system_free(again);
        fds_system_free(sys);
    }
}

#[test]
fn phase_space_of_example1() {
    let sys = parse(EXAMPLE1, 0);
    unsafe {
        let mut ps = ptr::null_mut();
        assert_eq!(fds_phase_space_new(sys, 0, &mut ps), FdsStatus::Ok);
        assert_eq!(fds_phase_space_total_states(ps), 9);
        assert_eq!(fds_phase_space_num_components(ps), 2);

        let mut len = 0usize;
        assert_eq!(
            fds_phase_space_cycle_lengths(ps, ptr::null_mut(), 0, &mut len),
            FdsStatus::BufferTooSmall
        );
        assert_eq!(len, 2);
        let mut lengths = vec![0u64; len];
        assert_eq!(
            fds_phase_space_cycle_lengths(ps, lengths.as_mut_ptr(), lengths.len(), &mut len),
            FdsStatus::Ok
        );
        assert_eq!(lengths, [2, 3]);
        fds_phase_space_free(ps);

        let mut ps = ptr::null_mut();
        assert_eq!(fds_phase_space_new(sys, 8, &mut ps), FdsStatus::TooLarge);
        assert!(ps.is_null());
        assert!(last_error().contains("above the enumeration bound"));
        fds_system_free(sys);
    }
}

#[test]
fn parse_errors_are_reported() {
    let mut sys = ptr::null_mut();
    unsafe {
        let status = fds_system_parse(cstr("field: 3\nf1 = x1 +\n").as_ptr(), 0, &mut sys);
        assert_eq!(status, FdsStatus::ParseError);
        assert!(sys.is_null());
        assert!(last_error().contains("line 2"));

        let status = fds_system_parse(cstr("x1\n").as_ptr(), 6, &mut sys);
        assert_eq!(status, FdsStatus::UnsupportedField);

        let status = fds_system_parse(ptr::null(), 2, &mut sys);
        assert_eq!(status, FdsStatus::NullPointer);

        let bad = [0xffu8, 0];
        let status = fds_system_parse(bad.as_ptr().cast(), 2, &mut sys);
        assert_eq!(status, FdsStatus::InvalidUtf8);
    }
    let sys = parse("x2\nx1\n", 2);
    assert!(fds_last_error_message().is_null());
    unsafe { fds_system_free(sys) };
}

#[test]
fn ncf_check() {
    let cases = [("0001", Some(1)), ("0110", Some(0)), ("00000100", Some(1)), ("0011", None)];
    for (table, expected) in cases {
        let mut flag = -1;
        let status = unsafe { fds_ncf_check(cstr(table).as_ptr(), &mut flag) };
        match expected {
            Some(v) => {
                assert_eq!(status, FdsStatus::Ok, "{table}");
                assert_eq!(flag, v, "{table}");
            }
            None => assert_eq!(status, FdsStatus::NotEssentialArity, "{table}"),
        }
    }
    let mut flag = 0;
    let status = unsafe { fds_ncf_check(cstr("012").as_ptr(), &mut flag) };
    assert_eq!(status, FdsStatus::ParseError);
}

#[test]
fn infer_reproduces_transitions() {
    let truth = parse(EXAMPLE1, 0);
    let mut csv = String::from("x1,x2\n");
    for s in 0..9u32 {
        let x = [s / 3, s % 3];
        let mut y = [0u32; 2];
        unsafe { fds_system_step(truth, x.as_ptr(), 2, y.as_mut_ptr()) };
        csv.push_str(&format!("{},{}\n{},{}\n\n", x[0], x[1], y[0], y[1]));
    }
    let mut model = ptr::null_mut();
    unsafe {
        assert_eq!(fds_infer_from_csv(cstr(&csv).as_ptr(), 3, &mut model), FdsStatus::Ok, "{}", last_error());
        for s in 0..9u32 {
            let x = [s / 3, s % 3];
            let (mut a, mut b) = ([0u32; 2], [0u32; 2]);
            fds_system_step(truth, x.as_ptr(), 2, a.as_mut_ptr());
            fds_system_step(model, x.as_ptr(), 2, b.as_mut_ptr());
            assert_eq!(a, b);
        }
        fds_system_free(model);

        let mut model = ptr::null_mut();
        assert_eq!(
            fds_infer_from_csv(cstr(&csv).as_ptr(), 0, &mut model),
            FdsStatus::InvalidArgument
        );
        let conflicting = "x1\n0\n1\n\n0\n2\n";
        assert_eq!(
            fds_infer_from_csv(cstr(conflicting).as_ptr(), 3, &mut model),
            FdsStatus::InconsistentData
        );
        fds_system_free(truth);
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        fds_system_free(ptr::null_mut());
        fds_phase_space_free(ptr::null_mut());
        fds_string_free(ptr::null_mut());
        assert_eq!(fds_system_nvars(ptr::null()), 0);
        assert_eq!(fds_phase_space_num_components(ptr::null()), 0);
        let mut out = [0u32; 1];
        assert_eq!(
            fds_system_step(ptr::null(), [0].as_ptr(), 1, out.as_mut_ptr()),
            FdsStatus::NullPointer
        );
    }
    let v = unsafe { CStr::from_ptr(fds_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fdslab.h"))
        .expect("header generated by the build script");
    for name in [
        "typedef struct FdsSystem FdsSystem",
        "typedef struct FdsPhaseSpace FdsPhaseSpace",
        "FDS_STATUS_OK = 0",
        "FDS_STATUS_PANIC",
        "fds_system_parse",
        "fds_system_step",
        "fds_phase_space_cycle_lengths",
        "fds_ncf_check",
        "fds_infer_from_csv",
        "fds_last_error_message",
        "fds_string_free",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
