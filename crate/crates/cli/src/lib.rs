//! Command line and HTTP front end for `arrangeline-core`.

pub mod api;
pub mod ops;
