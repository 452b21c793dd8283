use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use selmon::cli::{render, run, Bounds, RunConfig};
use selmon_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(selmon_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    selmon_string_free(s);
    out
}

fn generate(seed: u64, case: u64) -> *mut SelmonInstance {
    let mut inst = ptr::null_mut();
    let st =
        unsafe { selmon_instance_generate(seed, case, selmon_dns_bounds_default(), &mut inst) };
    assert_eq!(st, SelmonStatus::Ok, "{}", last_error());
    inst
}

#[test]
fn generate_verify_and_round_trip() {
    unsafe {
        let inst = generate(42, 0);
        let mut v = SelmonVerdict::default();
        let mut detail = ptr::null_mut();
        assert_eq!(
            selmon_verify_dns(inst, &mut v, &mut detail),
            SelmonStatus::Ok
        );
        assert!(v.holds);
        let detail = take(detail);
        assert!(detail.contains("\"premise\""));

        let mut json = ptr::null_mut();
        assert_eq!(selmon_instance_to_json(inst, &mut json), SelmonStatus::Ok);
        let json = CString::new(take(json)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(
            selmon_instance_from_json(json.as_ptr(), &mut back),
            SelmonStatus::Ok
        );
        let mut w = SelmonVerdict::default();
        assert_eq!(
            selmon_verify_dns(back, &mut w, ptr::null_mut()),
            SelmonStatus::Ok
        );
        assert_eq!(v, w);
        assert_eq!(last_error(), "");
        selmon_instance_free(inst);
        selmon_instance_free(back);
    }
}

#[test]
fn generation_is_deterministic() {
    unsafe {
        let dump = |inst: *mut SelmonInstance| {
            let mut json = ptr::null_mut();
            assert_eq!(selmon_instance_to_json(inst, &mut json), SelmonStatus::Ok);
            selmon_instance_free(inst);
            take(json)
        };
        assert_eq!(dump(generate(5, 9)), dump(generate(5, 9)));
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut inst = ptr::null_mut();
        let cut = CString::new(r#"{"X": 2,"#).unwrap();
        assert_eq!(
            selmon_instance_from_json(cut.as_ptr(), &mut inst),
            SelmonStatus::Parse
        );
        assert!(inst.is_null());
        assert!(last_error().contains("parse error"));

        let wrong = CString::new("[1, 2]").unwrap();
        assert_eq!(
            selmon_instance_from_json(wrong.as_ptr(), &mut inst),
            SelmonStatus::Schema
        );

        let bad_utf8 = [0xffu8, 0];
        assert_eq!(
            selmon_instance_from_json(bad_utf8.as_ptr().cast(), &mut inst),
            SelmonStatus::InvalidUtf8
        );

        assert_eq!(
            selmon_instance_from_json(ptr::null(), &mut inst),
            SelmonStatus::NullPointer
        );
        assert_eq!(
            selmon_instance_from_json(cut.as_ptr(), ptr::null_mut()),
            SelmonStatus::NullPointer
        );
        let mut v = SelmonVerdict::default();
        assert_eq!(
            selmon_verify_dns(ptr::null(), &mut v, ptr::null_mut()),
            SelmonStatus::NullPointer
        );
        assert!(last_error().contains("inst"));

        let zero = SelmonDnsBounds {
            moves: 0,
            ..selmon_dns_bounds_default()
        };
        assert_eq!(
            selmon_instance_generate(1, 0, zero, &mut inst),
            SelmonStatus::Invariant
        );
        assert!(inst.is_null());

        selmon_instance_free(ptr::null_mut());
        selmon_string_free(ptr::null_mut());
    }
}

#[test]
fn out_of_range_phi_is_an_invariant_error() {
    unsafe {
        let mut json = ptr::null_mut();
        let mut found = false;
        for case in 0..50 {
            let inst = generate(3, case);
            assert_eq!(selmon_instance_to_json(inst, &mut json), SelmonStatus::Ok);
            selmon_instance_free(inst);
            let mut j: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
            if j["phi"].as_array().unwrap().is_empty() {
                continue;
            }
            let big = j["B"].as_u64().unwrap() + 1;
            j["phi"][0]["table"][0][1] = serde_json::json!({"set": [big]});
            let text = CString::new(j.to_string()).unwrap();
            let mut out = ptr::null_mut();
            assert_eq!(
                selmon_instance_from_json(text.as_ptr(), &mut out),
                SelmonStatus::Invariant
            );
            assert!(last_error().contains("$.phi[0]"), "{}", last_error());
            found = true;
            break;
        }
        assert!(found);
    }
}

#[test]
fn suite_report_matches_the_library_renderer() {
    unsafe {
        let cmd = CString::new("dns-random").unwrap();
        let small = CString::new("small").unwrap();
        let mut report = ptr::null_mut();
        let mut passed = false;
        assert_eq!(
            selmon_run_suite(cmd.as_ptr(), 11, small.as_ptr(), &mut report, &mut passed),
            SelmonStatus::Ok,
            "{}",
            last_error()
        );
        assert!(passed);
        let text = take(report);
        let cfg = RunConfig {
            command: selmon::cli::Command::DnsRandom,
            bounds: Bounds::load("small").unwrap(),
            seed: 11,
            timings: false,
        };
        assert_eq!(text, render(&run(&cfg).unwrap()));
        let j: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(j["seed"], 11);

        let unknown = CString::new("dns-verify").unwrap();
        assert_eq!(
            selmon_run_suite(unknown.as_ptr(), 0, ptr::null(), &mut report, &mut passed),
            SelmonStatus::Invariant
        );
        let missing = CString::new("/nonexistent/bounds.json").unwrap();
        assert_eq!(
            selmon_run_suite(cmd.as_ptr(), 0, missing.as_ptr(), &mut report, &mut passed),
            SelmonStatus::Schema
        );
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_header_and_static_library() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libselmon_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let bin = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("selmon_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("run cc");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.1.0"));
}
