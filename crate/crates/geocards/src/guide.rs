//! The user guide, embedded chapter by chapter.
//!
//! Each submodule's documentation is one chapter of the rendered book under
//! `book/`; including the markdown here means every code block in the guide
//! compiles and runs as a doc-test, so the prose can never drift from the
//! library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/finite-fields.md")]
pub mod finite_fields {}

#[doc = include_str!("../../../book/src/geometry.md")]
pub mod geometry {}

#[doc = include_str!("../../../book/src/protocol.md")]
pub mod protocol {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/parameters.md")]
pub mod parameters {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
