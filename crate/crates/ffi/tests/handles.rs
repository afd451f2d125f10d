use std::ffi::{CStr, CString};
use std::ptr;

use starmoments_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sm_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn parse(s: &str) -> *mut SmWord {
    let c = CString::new(s).unwrap();
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { sm_word_parse(c.as_ptr(), &mut w) }, SmStatus::Ok);
    w
}

#[test]
fn parse_error_names_position() {
    let c = CString::new("1x*").unwrap();
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { sm_word_parse(c.as_ptr(), &mut w) },
        SmStatus::ParseError
    );
    assert!(w.is_null());
    assert!(last_error().contains("position 2"), "{}", last_error());
}

#[test]
fn moments_and_paths_agree() {
    for (s, d, m) in [
        ("", 2, 1),
        ("1*", 4, 4),
        ("1**1", 3, 9),
        ("1*1*", 2, 6),
        ("11*", 3, 0),
    ] {
        let w = parse(s);
        let (mut a, mut b) = (0u64, 0u64);
        unsafe {
            assert_eq!(sm_star_moment_u64(w, d, &mut a), SmStatus::Ok);
            assert_eq!(sm_count_paths(w, d, &mut b), SmStatus::Ok);
            sm_word_free(w);
        }
        assert_eq!((a, b), (m, m), "{s}");
    }
}

#[test]
fn large_moment_overflows_u64_but_not_string() {
    let w = parse(&"1*".repeat(10));
    let mut v = 0u64;
    assert_eq!(
        unsafe { sm_star_moment_u64(w, 64, &mut v) },
        SmStatus::Overflow
    );
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sm_star_moment(w, 64, &mut s) }, SmStatus::Ok);
    let digits = unsafe { CStr::from_ptr(s) }.to_str().unwrap().len();
    assert!(digits > 19);
    unsafe {
        sm_string_free(s);
        sm_word_free(w);
    }
}

#[test]
fn degree_and_cap_errors() {
    let w = parse("1*");
    let mut v = 0u64;
    assert_eq!(
        unsafe { sm_star_moment_u64(w, 0, &mut v) },
        SmStatus::InvalidArgument
    );
    unsafe { sm_word_free(w) };
    let w = parse(&"1*".repeat(11));
    assert_eq!(
        unsafe { sm_star_moment_u64(w, 2, &mut v) },
        SmStatus::CapExceeded
    );
    unsafe { sm_word_free(w) };
}

#[test]
fn graph_round_trip_and_queries() {
    // Directed 3-cycle plus a loop at vertex 0.
    let tails = [0usize, 1, 2, 0];
    let heads = [1usize, 2, 0, 0];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(
            sm_graph_from_arcs(3, tails.as_ptr(), heads.as_ptr(), 4, &mut g),
            SmStatus::Ok
        );
        assert_eq!(sm_graph_vertex_count(g), 3);
        assert_eq!(sm_graph_arc_count(g), 4);
        let mut c = 0u64;
        assert_eq!(sm_graph_cycle_count(g, 1, &mut c), SmStatus::Ok);
        assert_eq!(c, 1);
        assert_eq!(sm_graph_cycle_count(g, 3, &mut c), SmStatus::Ok);
        assert_eq!(c, 1);

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("g.txt").to_str().unwrap()).unwrap();
        assert_eq!(sm_graph_write(g, path.as_ptr(), 1), SmStatus::Ok);
        let mut h = ptr::null_mut();
        let mut d = 0usize;
        assert_eq!(sm_graph_read(path.as_ptr(), &mut h, &mut d), SmStatus::Ok);
        assert_eq!(d, 1);
        let w = parse("1*");
        let (mut t1, mut t2) = (0u64, 0u64);
        assert_eq!(sm_graph_trace(g, w, &mut t1), SmStatus::Ok);
        assert_eq!(sm_graph_trace(h, w, &mut t2), SmStatus::Ok);
        assert_eq!((t1, t2), (4, 4));
        sm_word_free(w);
        sm_graph_free(h);
        sm_graph_free(g);
    }
}

#[test]
fn bad_arc_and_missing_file() {
    let tails = [0usize];
    let heads = [5usize];
    let mut g = ptr::null_mut();
    unsafe {
        assert_ne!(
            sm_graph_from_arcs(2, tails.as_ptr(), heads.as_ptr(), 1, &mut g),
            SmStatus::Ok
        );
        let path = CString::new("/nonexistent/graph.txt").unwrap();
        assert_eq!(
            sm_graph_read(path.as_ptr(), &mut g, ptr::null_mut()),
            SmStatus::Io
        );
    }
}

#[test]
fn sampling_is_seeded_and_checked() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            sm_graph_sample(200, 2, 5, SmModel::Uniform, 0, &mut g),
            SmStatus::Ok
        );
        assert_eq!(sm_graph_arc_count(g), 400);
        let mut v = usize::MAX;
        assert_eq!(sm_graph_tree_violations(g, 2, 3, &mut v), SmStatus::Ok);
        assert_eq!(v, 0);
        sm_graph_free(g);

        let mut g = ptr::null_mut();
        assert_eq!(
            sm_graph_sample(2, 3, 5, SmModel::Uniform, 0, &mut g),
            SmStatus::SamplingFailed
        );
        assert!(g.is_null());
    }
}
