//! Command-line front end and IO layer for the Igusa class polynomial
//! pipeline: thread pool, file formats, and the self-test oracle suites.

pub mod formats;
pub mod runner;
pub mod selftest;
pub mod threads;

pub use igusacm_core as core;
