//! Independent spectrum certification: a relation matrix C with predicted
//! distinct eigenvalues μ₁ < … < μ_m is certified by checking the exact
//! annihilation Π_t (C − μ_t·I) = 0 with integer arithmetic. Entries of the
//! partial products are bounded by Π_t (valency + |μ_t|), which picks the
//! narrowest machine integer that provably cannot overflow.

use super::eigenvalue_table;
use crate::geometry::{GeometryError, PolarSpace};
use crate::scheme::{relation_matrix, Binary01, PairClass};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("dense annihilation of a {n}×{n} matrix needs {bytes} bytes, over the limit {limit}")]
    MatrixTooLarge { n: usize, bytes: u64, limit: u64 },
    #[error("entry bound {bound} exceeds 128-bit integers")]
    EntriesTooLarge { bound: BigInt },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Outcome of an annihilation check.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub n: usize,
    /// The distinct eigenvalues used, ascending.
    pub eigenvalues: Vec<BigInt>,
    pub annihilated: bool,
    /// A nonzero cell of the product when the check fails.
    pub witness: Option<(usize, usize)>,
}

macro_rules! annihilate_impl {
    ($name:ident, $t:ty) => {
        fn $name(matrix: &Binary01, eigenvalues: &[BigInt]) -> (bool, Option<(usize, usize)>) {
            let n = matrix.rows;
            let mus: Vec<$t> = eigenvalues
                .iter()
                .map(|m| <$t>::try_from(m.clone()).expect("eigenvalue fits by bound check"))
                .collect();
            // M = C − μ₀·I
            let mut m: Vec<$t> = vec![0; n * n];
            for (i, row) in matrix.row_support.iter().enumerate() {
                for &j in row {
                    m[i * n + j as usize] = 1;
                }
                m[i * n + i] -= mus[0];
            }
            let mut next: Vec<$t> = vec![0; n * n];
            for &mu in &mus[1..] {
                next.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
                    // out = (C·M − μ·M) row i
                    for x in out.iter_mut() {
                        *x = 0;
                    }
                    for &j in &matrix.row_support[i] {
                        let src = &m[j as usize * n..(j as usize + 1) * n];
                        for (o, &s) in out.iter_mut().zip(src) {
                            *o += s;
                        }
                    }
                    let diag = &m[i * n..(i + 1) * n];
                    for (o, &s) in out.iter_mut().zip(diag) {
                        *o -= mu * s;
                    }
                });
                std::mem::swap(&mut m, &mut next);
            }
            match m.iter().position(|&x| x != 0) {
                None => (true, None),
                Some(pos) => (false, Some((pos / n, pos % n))),
            }
        }
    };
}

annihilate_impl!(annihilate_i64, i64);
annihilate_impl!(annihilate_i128, i128);

/// Check Π (C − μ·I) = 0 over the distinct values of `eigenvalues`.
/// `memory_limit` bounds the two dense work buffers together, in bytes.
pub fn spectrum_check(
    matrix: &Binary01,
    eigenvalues: &[BigInt],
    memory_limit: u64,
) -> Result<SpectrumReport, SpectrumError> {
    assert_eq!(matrix.rows, matrix.cols, "annihilation needs a square matrix");
    let n = matrix.rows;
    let mut distinct: Vec<BigInt> = eigenvalues.to_vec();
    distinct.sort();
    distinct.dedup();

    let valency = BigInt::from(matrix.row_sums().into_iter().max().unwrap_or(0));
    let mut bound = BigInt::from(1);
    for mu in &distinct {
        bound *= &valency + mu.abs();
    }
    let cell_bytes: u64 = if bound.to_i64().is_some() {
        8
    } else if bound.to_i128().is_some() {
        16
    } else {
        return Err(SpectrumError::EntriesTooLarge { bound });
    };
    let bytes = 2 * (n as u64) * (n as u64) * cell_bytes;
    if bytes > memory_limit {
        return Err(SpectrumError::MatrixTooLarge { n, bytes, limit: memory_limit });
    }

    let (annihilated, witness) = if cell_bytes == 8 {
        annihilate_i64(matrix, &distinct)
    } else {
        annihilate_i128(matrix, &distinct)
    };
    Ok(SpectrumReport { n, eigenvalues: distinct, annihilated, witness })
}

/// Build the relation matrix of (a-spaces, class), predict its spectrum from
/// the closed-form eigenvalue table, and certify by annihilation.
pub fn relation_spectrum_verified(
    space: &PolarSpace,
    a: u16,
    class: PairClass,
    memory_limit: u64,
) -> Result<SpectrumReport, SpectrumError> {
    let matrix = relation_matrix(space, a, a, class)?;
    let table = eigenvalue_table(space.into(), a as i64, class);
    let eigenvalues: Vec<BigInt> = table.into_values().collect();
    spectrum_check(&matrix, &eigenvalues, memory_limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_space;

    const LIMIT: u64 = 1 << 30;

    #[test]
    fn quadrangle_relations_annihilate() {
        let space = parse_space("Q:4:2").unwrap();
        for (s, k) in [(0u16, 1u16), (0, 2), (1, 1)] {
            let report = relation_spectrum_verified(&space, 1, PairClass { s, k }, LIMIT).unwrap();
            assert!(report.annihilated, "class ({s},{k})");
        }
    }

    #[test]
    fn wrong_spectrum_is_rejected_with_witness() {
        let space = parse_space("Q:4:2").unwrap();
        let matrix = relation_matrix(&space, 1, 1, PairClass { s: 0, k: 2 }).unwrap();
        let wrong = vec![BigInt::from(6), BigInt::from(1), BigInt::from(-2)];
        let report = spectrum_check(&matrix, &wrong, LIMIT).unwrap();
        assert!(!report.annihilated);
        assert!(report.witness.is_some());
        // Dropping a genuine eigenvalue also fails.
        let missing = vec![BigInt::from(6), BigInt::from(1)];
        assert!(!spectrum_check(&matrix, &missing, LIMIT).unwrap().annihilated);
    }

    #[test]
    fn memory_limit_is_enforced() {
        let space = parse_space("Q:4:2").unwrap();
        let err = relation_spectrum_verified(&space, 1, PairClass { s: 0, k: 2 }, 64).unwrap_err();
        assert!(matches!(err, SpectrumError::MatrixTooLarge { .. }));
    }

    #[test]
    fn duplicate_predictions_are_deduplicated() {
        let space = parse_space("W:3:2").unwrap();
        let matrix = relation_matrix(&space, 1, 1, PairClass { s: 0, k: 2 }).unwrap();
        let eigs = vec![
            BigInt::from(6),
            BigInt::from(6),
            BigInt::from(1),
            BigInt::from(-3),
            BigInt::from(1),
        ];
        let report = spectrum_check(&matrix, &eigs, LIMIT).unwrap();
        assert!(report.annihilated);
        assert_eq!(report.eigenvalues.len(), 3);
    }
}
