use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use bpp_ffi::*;
use serde_json::Value;

unsafe fn take(s: *mut c_char) -> String {
    let v = CStr::from_ptr(s).to_str().unwrap().to_string();
    bpp_string_free(s);
    v
}

unsafe fn last_error() -> String {
    CStr::from_ptr(bpp_last_error()).to_str().unwrap().to_string()
}

#[test]
fn numeric_calls() {
    unsafe {
        let mut d = 0u64;
        assert_eq!(bpp_weyl_dim([2i64, 1, 0].as_ptr(), 3, &mut d), BppStatus::Ok);
        assert_eq!(d, 8);
        assert!(bpp_last_error().is_null());
        assert_eq!(bpp_weyl_dim([0i64, 1].as_ptr(), 2, &mut d), BppStatus::InvalidArgument);
        assert!(last_error().contains("weakly decreasing"));
        assert_eq!(bpp_weyl_dim(ptr::null(), 2, &mut d), BppStatus::NullPointer);

        let mut c = 0u64;
        let id = [1u32, 2, 3, 4];
        let cyc = [2u32, 3, 4, 1];
        assert_eq!(bpp_count_monotone_walks(id.as_ptr(), cyc.as_ptr(), 4, 3, &mut c), BppStatus::Ok);
        assert_eq!(c, 5);
        let bad = [1u32, 1, 3, 4];
        assert_eq!(bpp_count_monotone_walks(id.as_ptr(), bad.as_ptr(), 4, 3, &mut c), BppStatus::InvalidArgument);
        assert!(!CStr::from_ptr(bpp_version()).to_bytes().is_empty());
    }
}

#[test]
fn json_calls() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(bpp_wg_json([1u32, 1, 1].as_ptr(), 3, &mut out), BppStatus::Ok);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["value"], "(N^2 - 2)/(N^5 - 5*N^3 + 4*N)");

        let perm = CString::new("(1 3 2)").unwrap();
        assert_eq!(bpp_biasimir_json(perm.as_ptr(), [2u32, 1, 1].as_ptr(), 3, &mut out), BppStatus::Ok);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["classical"]["C4"], "1");
        assert_eq!(v["quantum"]["C3"], "-N");

        let mut w = ptr::null_mut();
        assert_eq!(bpp_word_new([1u32, 1, 1].as_ptr(), [2u32, 1, 1].as_ptr(), 3, &mut w), BppStatus::Ok);
        assert_eq!(bpp_tau_json(w, 1, &mut out), BppStatus::Ok);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["limit"]["a2*b3*hbar^2"], "1");
        bpp_word_free(w);
        assert_eq!(bpp_tau_json(ptr::null(), 0, &mut out), BppStatus::NullPointer);

        let hbar = CString::new("1/2").unwrap();
        assert_eq!(bpp_power_sum([1i64, 0].as_ptr(), 2, hbar.as_ptr(), 1, 0, &mut out), BppStatus::Ok);
        assert_eq!(take(out), "1/2");
    }
}

#[test]
fn measure_handle() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(bpp_measure_new([1i64, 0].as_ptr(), [1i64, 0].as_ptr(), 2, &mut m), BppStatus::Ok);
        let mut n = 0usize;
        assert_eq!(bpp_measure_len(m, &mut n), BppStatus::Ok);
        assert_eq!(n, 2);
        let mut out = ptr::null_mut();
        assert_eq!(bpp_measure_json(m, &mut out), BppStatus::Ok);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["(2,0)"], "3/4");
        assert_eq!(bpp_measure_sample_json(m, 11, 5, &mut out), BppStatus::Ok);
        let first = take(out);
        assert_eq!(bpp_measure_sample_json(m, 11, 5, &mut out), BppStatus::Ok);
        assert_eq!(first, take(out));
        bpp_measure_free(m);
        bpp_measure_free(ptr::null_mut());
    }
}

#[test]
fn run_cli() {
    unsafe {
        let args: Vec<CString> = ["lr", "--lambda", "1,0", "--mu", "1,0"].iter().map(|s| CString::new(*s).unwrap()).collect();
        let ptrs: Vec<*const c_char> = args.iter().map(|s| s.as_ptr()).collect();
        let mut code = -1;
        let mut out = ptr::null_mut();
        assert_eq!(bpp_run(ptrs.len(), ptrs.as_ptr(), &mut code, &mut out), BppStatus::Ok);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["result"]["dimension_check"], true);

        let bad = [CString::new("frobnicate").unwrap()];
        let ptrs: Vec<*const c_char> = bad.iter().map(|s| s.as_ptr()).collect();
        assert_eq!(bpp_run(1, ptrs.as_ptr(), &mut code, &mut out), BppStatus::Ok);
        assert_eq!(code, 2);
        bpp_string_free(out);
    }
}
