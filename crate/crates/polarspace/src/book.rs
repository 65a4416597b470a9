//! The user guide, embedded chapter by chapter so that every code snippet
//! in the book compiles and runs as a doc-test.
//!
//! The rendered guide is built with `mdbook build book/` from the same
//! markdown files included here, so the prose on the web and the tested
//! snippets in CI can never drift apart.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}

#[doc = include_str!("../../../book/src/spaces.md")]
pub mod spaces {}

#[doc = include_str!("../../../book/src/scheme.md")]
pub mod scheme {}

#[doc = include_str!("../../../book/src/eigenvalues.md")]
pub mod eigenvalues {}

#[doc = include_str!("../../../book/src/cl-sets.md")]
pub mod cl_sets {}

#[doc = include_str!("../../../book/src/ovoids.md")]
pub mod ovoids {}

#[doc = include_str!("../../../book/src/klein.md")]
pub mod klein {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/formats.md")]
pub mod formats {}
