use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use htensor_ffi::*;

const REAL_POSITIVE_INDEFINITE: &str = include_str!("../../core/tests/fixtures/real_positive_indefinite.json");
const CPS_SPECTRUM: &str = include_str!("../../core/tests/fixtures/cps_spectrum.json");

fn tensor(json: &str) -> *mut HtTensor {
    let text = CString::new(json).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { ht_tensor_from_json(text.as_ptr(), &mut t) }, HtStatus::Ok);
    assert!(!t.is_null());
    t
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ht_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn handle_lifecycle_and_queries() {
    let t = tensor(CPS_SPECTRUM);
    let (mut m, mut n, mut nnz) = (0, 0, 0);
    let (mut herm, mut cps) = (false, false);
    unsafe {
        assert_eq!(ht_tensor_dims(t, &mut m, &mut n), HtStatus::Ok);
        assert_eq!(ht_tensor_nnz(t, &mut nnz), HtStatus::Ok);
        assert_eq!(ht_tensor_is_hermitian(t, &mut herm), HtStatus::Ok);
        assert_eq!(ht_tensor_is_cps(t, &mut cps), HtStatus::Ok);
    }
    assert_eq!((m, n, nnz, herm, cps), (2, 2, 4, true, true));

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ht_tensor_to_json(t, &mut json) }, HtStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { ht_string_free(json) };
    assert_eq!(
        htensor::io::parse_tensor(&text).unwrap(),
        htensor::io::parse_tensor(CPS_SPECTRUM).unwrap()
    );
    unsafe { ht_tensor_free(t) };
    unsafe { ht_tensor_free(ptr::null_mut()) };
}

#[test]
fn build_from_arrays_and_evaluate() {
    let indices = [1usize, 1, 1, 1, 2, 2, 2, 2, 1, 1, 2, 2, 2, 2, 1, 1];
    let values = [1.0, 1.0, 2.0, 2.0].map(|re| HtComplex { re, im: 0.0 });
    let mut t = ptr::null_mut();
    let status = unsafe { ht_tensor_new(2, 2, indices.as_ptr(), values.as_ptr(), 4, &mut t) };
    assert_eq!(status, HtStatus::Ok);
    let x = [HtComplex { re: 0.0, im: 1.0 }, HtComplex { re: 1.0, im: 0.0 }];
    let mut f = HtComplex { re: 0.0, im: 0.0 };
    assert_eq!(unsafe { ht_eval_form(t, x.as_ptr(), 2, &mut f) }, HtStatus::Ok);
    assert_eq!(f, HtComplex { re: -2.0, im: 0.0 });

    let mut s = ptr::null_mut();
    let mut herm = false;
    unsafe {
        assert_eq!(ht_symmetrize(t, &mut s), HtStatus::Ok);
        assert_eq!(ht_tensor_is_hermitian(s, &mut herm), HtStatus::Ok);
    }
    assert!(herm);

    assert_eq!(
        unsafe { ht_eval_form(t, x.as_ptr(), 1, &mut f) },
        HtStatus::InvalidArgument
    );
    assert!(last_error().starts_with("DimensionMismatch"), "{}", last_error());
    unsafe {
        ht_tensor_free(s);
        ht_tensor_free(t);
    }
}

#[test]
fn eigenvalues_and_certificates() {
    let t = tensor(CPS_SPECTRUM);
    let cfg = HtSolverConfig {
        starts: 60,
        ..ht_solver_config_default()
    };
    let (mut lo, mut hi) = (f64::NAN, f64::NAN);
    assert_eq!(unsafe { ht_extremal(t, &cfg, &mut lo, &mut hi) }, HtStatus::Ok);
    assert!(lo.abs() < 1e-8 && (hi - 2.0).abs() < 1e-8, "{lo} {hi}");

    let mut count = 0;
    let status = unsafe { ht_enumerate(t, &cfg, ptr::null_mut(), 0, &mut count) };
    assert_eq!(status, HtStatus::BufferTooSmall);
    assert_eq!(count, 3);
    let mut buf = [0.0; 3];
    assert_eq!(
        unsafe { ht_enumerate(t, &cfg, buf.as_mut_ptr(), 3, &mut count) },
        HtStatus::Ok
    );
    for (got, want) in buf.iter().zip([0.0, 1.0, 2.0]) {
        assert!((got - want).abs() < 1e-8, "{buf:?}");
    }

    let mut cert = HtCertificate {
        verdict: HtVerdict::Inconclusive,
        rule: HtRule::Dd,
        slack: 0.0,
    };
    assert_eq!(unsafe { ht_certify(t, ptr::null(), &mut cert) }, HtStatus::Ok);
    assert_eq!(cert.verdict, HtVerdict::PositiveSemidefinite);
    unsafe { ht_tensor_free(t) };

    let t = tensor(REAL_POSITIVE_INDEFINITE);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ht_certify_json(t, ptr::null(), &mut json) }, HtStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    unsafe { ht_string_free(json) };
    assert_eq!(v["verdict"], "INDEFINITE_OR_NEGATIVE");
    assert_eq!(v["witness"]["kind"], "negative_vector");

    let mut inside = false;
    let z = HtComplex { re: 1.0, im: 0.0 };
    assert_eq!(
        unsafe { ht_inclusion_contains(t, HtInclusionSet::Gershgorin, z, &mut inside) },
        HtStatus::Ok
    );
    assert!(inside);
    unsafe { ht_tensor_free(t) };
}

#[test]
fn errors_are_reported() {
    let mut t = ptr::null_mut();
    let bad = CString::new("{").unwrap();
    assert_eq!(unsafe { ht_tensor_from_json(bad.as_ptr(), &mut t) }, HtStatus::Parse);
    assert!(t.is_null());
    assert!(last_error().starts_with("Parse"));

    assert_eq!(
        unsafe { ht_tensor_from_json(ptr::null(), &mut t) },
        HtStatus::NullPointer
    );
    let mut n = 0;
    assert_eq!(unsafe { ht_tensor_nnz(ptr::null(), &mut n) }, HtStatus::NullPointer);

    let out_of_range = CString::new(r#"{"m":1,"n":2,"entries":[[[1,3],1,0]]}"#).unwrap();
    assert_eq!(
        unsafe { ht_tensor_from_json(out_of_range.as_ptr(), &mut t) },
        HtStatus::InvalidArgument
    );

    let t = tensor(CPS_SPECTRUM);
    let cfg = HtSolverConfig {
        starts: 0,
        ..ht_solver_config_default()
    };
    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(
        unsafe { ht_extremal(t, &cfg, &mut lo, &mut hi) },
        HtStatus::InvalidArgument
    );
    assert!(last_error().starts_with("InvalidConfig"));

    // A successful call clears the message.
    assert_eq!(unsafe { ht_tensor_nnz(t, &mut n) }, HtStatus::Ok);
    assert_eq!(last_error(), "");
    unsafe { ht_tensor_free(t) };
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("htensor.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "typedef struct HtTensor HtTensor;",
        "HT_STATUS_OK = 0",
        "ht_tensor_from_json",
        "ht_tensor_free",
        "ht_certify_json",
        "ht_last_error_message",
        "size_t",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

/// Compiles and runs a small C program against the header and static library.
#[test]
fn c_program_links_and_runs() {
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libhtensor_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "htensor.h"

int main(void) {
    const char *json = "{\"m\":1,\"n\":2,\"entries\":[[[1,1],2,0],[[1,2],1,0],[[2,1],1,0],[[2,2],2,0]]}";
    HtTensor *t = NULL;
    if (ht_tensor_from_json(json, &t) != HT_STATUS_OK) return 1;
    HtCertificate cert;
    if (ht_certify(t, NULL, &cert) != HT_STATUS_OK) return 2;
    ht_tensor_free(t);
    if (ht_tensor_from_json("{", &t) != HT_STATUS_PARSE) return 3;
    printf("%d %d %s\n", (int)cert.verdict, (int)cert.rule, ht_last_error_message()[0] ? "err" : "none");
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let compiled = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("a C compiler named cc");
    assert!(
        compiled.status.success(),
        "{}",
        String::from_utf8_lossy(&compiled.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status);
    assert_eq!(String::from_utf8(run.stdout).unwrap(), "0 0 err\n");
}
