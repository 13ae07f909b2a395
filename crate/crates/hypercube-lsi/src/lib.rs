//! File formats, parallel verification suites and the command-line front
//! end for `hypercube-lsi-core`.

#![forbid(unsafe_code)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod io;
pub mod suites;

pub use hypercube_lsi_core as core;
