//! Holds the `acceptance` test target, one check per acceptance criterion.
//!
//! ```text
//! cargo test -p chenciner-verification --test acceptance
//! ```
//!
//! It lives in its own package so that the rest of the workspace suite runs
//! before it.
