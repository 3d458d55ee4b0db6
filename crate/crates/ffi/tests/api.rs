use std::ffi::CStr;
use std::ptr;

use lrmc_ffi::*;

fn last_error() -> String {
    let p = lrmc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn generate(rows: usize, rank: usize, seed: u64) -> *mut LrmcMap {
    let mut map = ptr::null_mut();
    let status = unsafe { lrmc_map_generate(rows, rows, rank, 2, seed, &mut map) };
    assert_eq!(status, LrmcStatus::Ok);
    map
}

#[test]
fn serialize_parse_round_trip() {
    let map = generate(40, 5, 3);
    unsafe {
        let (mut bytes, mut len) = (ptr::null_mut(), 0usize);
        assert_eq!(lrmc_map_serialize(map, &mut bytes, &mut len), LrmcStatus::Ok);
        let text = std::slice::from_raw_parts(bytes, len).to_vec();
        assert!(text.starts_with(b"lrmcmap v1 40 40"));
        let mut back = ptr::null_mut();
        assert_eq!(lrmc_map_parse(bytes, len, &mut back), LrmcStatus::Ok);
        lrmc_bytes_free(bytes, len);
        assert_eq!(lrmc_map_rows(back), 40);
        assert_eq!(lrmc_map_cols(back), 40);
        for r in 0..40 {
            for c in 0..40 {
                let (mut a, mut b) = (LrmcCell::Unknown, LrmcCell::Unknown);
                assert_eq!(lrmc_map_get(map, r, c, &mut a), LrmcStatus::Ok);
                assert_eq!(lrmc_map_get(back, r, c, &mut b), LrmcStatus::Ok);
                assert_eq!(a, b);
                assert_ne!(a, LrmcCell::Unknown);
            }
        }
        lrmc_map_free(back);
        lrmc_map_free(map);
    }
}

#[test]
fn parse_errors_carry_messages() {
    let junk = b"not a map";
    let mut out = ptr::null_mut();
    let status = unsafe { lrmc_map_parse(junk.as_ptr(), junk.len(), &mut out) };
    assert_eq!(status, LrmcStatus::Parse);
    assert!(out.is_null());
    assert!(last_error().contains("line 1"), "{}", last_error());
}

#[test]
fn null_and_range_checks() {
    unsafe {
        let mut cell = LrmcCell::Free;
        assert_eq!(lrmc_map_get(ptr::null(), 0, 0, &mut cell), LrmcStatus::NullPointer);
        assert_eq!(lrmc_map_rows(ptr::null()), 0);
        let map = generate(20, 3, 1);
        assert_eq!(lrmc_map_get(map, 20, 0, &mut cell), LrmcStatus::InvalidArgument);
        assert_eq!(lrmc_map_set(map, 0, 0, 7), LrmcStatus::InvalidArgument);
        assert_eq!(lrmc_map_structure(map, ptr::null_mut(), ptr::null_mut()), LrmcStatus::NullPointer);
        lrmc_map_free(map);
        lrmc_map_free(ptr::null_mut());
        let mut out = ptr::null_mut();
        assert_eq!(lrmc_map_generate(20, 20, 1000, 2, 0, &mut out), LrmcStatus::InvalidArgument);
        assert!(last_error().contains("target_rank"));
    }
}

#[test]
fn sample_bound_matches_library() {
    let mut m = 0u64;
    assert_eq!(unsafe { lrmc_sample_bound(200, 11, 2.0, &mut m) }, LrmcStatus::Ok);
    assert_eq!(m, 29214);
    assert_eq!(unsafe { lrmc_sample_bound(1, 11, 2.0, &mut m) }, LrmcStatus::InvalidArgument);
}

#[test]
fn complete_hidden_cells() {
    unsafe {
        let truth = generate(60, 5, 2);
        let (mut bytes, mut len) = (ptr::null_mut(), 0usize);
        assert_eq!(lrmc_map_serialize(truth, &mut bytes, &mut len), LrmcStatus::Ok);
        let mut partial = ptr::null_mut();
        assert_eq!(lrmc_map_parse(bytes, len, &mut partial), LrmcStatus::Ok);
        lrmc_bytes_free(bytes, len);
        // hide a scattered third of the cells
        for k in 0..3600usize {
            if (k.wrapping_mul(2654435761) >> 16) % 3 == 0 {
                assert_eq!(lrmc_map_set(partial, k / 60, k % 60, 2), LrmcStatus::Ok);
            }
        }
        let mut completion = ptr::null_mut();
        let opts = lrmc_solver_options_default();
        assert!(opts.lambda_is_fraction);
        assert_eq!(lrmc_map_complete(partial, &opts, &mut completion), LrmcStatus::Ok);
        assert!(lrmc_completion_iterations(completion) >= 1);
        assert!(lrmc_completion_objective(completion).is_finite());
        let mut value = f64::NAN;
        assert_eq!(lrmc_completion_value(completion, 59, 59, &mut value), LrmcStatus::Ok);
        assert!(value.is_finite());
        assert_eq!(lrmc_completion_value(completion, 60, 0, &mut value), LrmcStatus::InvalidArgument);
        let mut predicted = ptr::null_mut();
        assert_eq!(lrmc_completion_classify(completion, &mut predicted), LrmcStatus::Ok);
        let mut hits = 0;
        for r in 0..60 {
            for c in 0..60 {
                let (mut a, mut b) = (LrmcCell::Unknown, LrmcCell::Unknown);
                lrmc_map_get(predicted, r, c, &mut a);
                lrmc_map_get(truth, r, c, &mut b);
                hits += (a == b) as usize;
            }
        }
        assert!(hits as f64 / 3600.0 > 0.9, "hits {hits}");
        let (mut rank, mut coherence) = (0usize, 0.0f64);
        assert_eq!(lrmc_map_structure(truth, &mut rank, &mut coherence), LrmcStatus::Ok);
        assert!((2..=8).contains(&rank));
        assert!(coherence > 0.0 && coherence <= 1.0);
        lrmc_map_free(predicted);
        lrmc_completion_free(completion);
        lrmc_map_free(partial);
        lrmc_map_free(truth);
    }
}

#[test]
fn fully_unknown_map_is_degenerate() {
    unsafe {
        let mut map = ptr::null_mut();
        assert_eq!(lrmc_map_new(5, 5, 0.1, 2, &mut map), LrmcStatus::Ok);
        let mut completion = ptr::null_mut();
        assert_eq!(lrmc_map_complete(map, ptr::null(), &mut completion), LrmcStatus::Degenerate);
        assert!(completion.is_null());
        lrmc_map_free(map);
    }
}
