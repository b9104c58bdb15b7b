//! Support library for the `geocards` binary: the JSON documents it reads
//! and writes, and plain-text rendering for terminal output.

pub mod files;
pub mod render;
