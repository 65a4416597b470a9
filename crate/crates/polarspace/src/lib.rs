//! Exact arithmetic for finite classical polar spaces: construction over
//! small fields, canonical enumeration of totally isotropic subspaces, the
//! association scheme of ordered pairs, closed-form eigenvalues, and the
//! special substructures (Cameron–Liebler sets and (m,a)-ovoids) together
//! with independent certification of their defining properties.
//!
//! Everything is computed over the integers (or exact rationals where an
//! intermediate value demands it); no floating point is involved anywhere.

pub mod book;
pub mod codec;
pub mod exactlin;
pub mod geometry;
pub mod gf;
pub mod klein;
pub mod qnum;
pub mod scheme;
pub mod sets;
pub mod spectra;
