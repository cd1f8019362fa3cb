//! The small named contexts used throughout the tests and examples.
//!
//! Each one also ships as a Burmeister file under `fixtures/` at the
//! repository root; the tests check that the two agree.

use crate::context::FormalContext;

/// Two objects, two features, diagonal incidence (the 2x2 Boolean lattice).
pub fn diag2() -> FormalContext {
    FormalContext::from_pairs(&["a1", "a2"], &["x1", "x2"], &[("a1", "x1"), ("a2", "x2")])
        .expect("fixture")
}

/// Three objects, three features, diagonal incidence (the lattice M3).
pub fn diag3() -> FormalContext {
    FormalContext::from_pairs(
        &["a1", "a2", "a3"],
        &["x1", "x2", "x3"],
        &[("a1", "x1"), ("a2", "x2"), ("a3", "x3")],
    )
    .expect("fixture")
}

/// Soft drinks with vitamin A, vitamin C, and "vitamin A and C".
pub fn vitamin() -> FormalContext {
    FormalContext::from_pairs(
        &["p1", "p2", "p3"],
        &["vA", "vC", "vAC"],
        &[
            ("p1", "vA"),
            ("p2", "vC"),
            ("p3", "vA"),
            ("p3", "vC"),
            ("p3", "vAC"),
        ],
    )
    .expect("fixture")
}
