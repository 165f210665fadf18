use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use h2ion_ffi::*;

#[test]
fn budget_exhaustion_still_returns_a_handle() {
    let mut handle = ptr::null_mut();
    let status = unsafe { h2ion_solve(c"1ssg".as_ptr(), 2.0, 0, 5, &mut handle) };
    assert_eq!(status, H2ionStatus::NotConverged);
    assert!(!handle.is_null());
    let msg = unsafe { CStr::from_ptr(h2ion_last_error()) }.to_string_lossy().into_owned();
    assert!(msg.contains("budget"));
    let mut e = 0.0;
    assert_eq!(unsafe { h2ion_result_total_energy(handle, &mut e) }, H2ionStatus::Ok);
    assert!(e.is_finite());
    unsafe { h2ion_result_free(handle) };
}

#[test]
fn transition_rejects_swapped_states() {
    let (mut g, mut u) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(h2ion_solve(c"1ssg".as_ptr(), 3.0, 0, 0, &mut g), H2ionStatus::Ok);
        assert_eq!(h2ion_solve(c"2psu".as_ptr(), 3.0, 0, 0, &mut u), H2ionStatus::Ok);
        let mut t = H2ionTransition::default();
        assert_eq!(h2ion_result_transition(u, g, &mut t), H2ionStatus::InvalidArgument);
        assert_eq!(h2ion_result_transition(g, u, &mut t), H2ionStatus::Ok);
        assert!(t.delta_e > 0.0 && t.q_z.abs() > 0.5);
        h2ion_result_free(g);
        h2ion_result_free(u);
    }
}

#[test]
fn small_quadrature_order_is_rejected() {
    let mut handle = ptr::null_mut();
    let status = unsafe { h2ion_solve(c"1ssg".as_ptr(), 2.0, 4, 0, &mut handle) };
    assert_eq!(status, H2ionStatus::InvalidArgument);
    assert!(handle.is_null());
}

/// Compile a C program against the generated header and the static library.
#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libh2ion_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("h2ion_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "exit {:?}: {}", run.status.code(), String::from_utf8_lossy(&run.stdout));
}
