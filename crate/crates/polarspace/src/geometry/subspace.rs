//! Subspaces of F_q^n in canonical reduced-row-echelon form.
//!
//! The RREF basis of a row space is unique, so two `Subspace` values are
//! equal exactly when their byte representations are equal, and sorting by
//! bytes gives the canonical enumeration order used for indices and files.

use crate::geometry::GeometryError;
use crate::gf::FieldSpec;

/// A subspace of F_q^n: `dim` rows of length `n`, in RREF with strictly
/// increasing pivot columns. `dim = 0` is the zero space.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    n: u16,
    dim: u16,
    rows: Vec<u8>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace{}x{}{:?}", self.dim, self.n, self.rows)
    }
}

/// Row-reduce `data` (rows of length `n`, flattened) in place to RREF and
/// return the rank. Rows beyond the rank are zero afterwards.
pub fn rank_in_place(field: &FieldSpec, data: &mut [u8], n: usize) -> usize {
    let rows = if n == 0 { 0 } else { data.len() / n };
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pivot) = (rank..rows).find(|&r| data[r * n + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in 0..n {
                data.swap(pivot * n + j, rank * n + j);
            }
        }
        let inv = field.inv(data[rank * n + col]).expect("pivot entry is nonzero");
        if inv != 1 {
            for j in col..n {
                data[rank * n + j] = field.mul(data[rank * n + j], inv);
            }
        }
        for r in 0..rows {
            let c = data[r * n + col];
            if r != rank && c != 0 {
                for j in col..n {
                    let t = field.mul(c, data[rank * n + j]);
                    data[r * n + j] = field.sub(data[r * n + j], t);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

impl Subspace {
    /// The zero subspace of F_q^n.
    pub fn zero(n: u16) -> Self {
        Subspace { n, dim: 0, rows: Vec::new() }
    }

    /// The full space F_q^n (identity basis).
    pub fn identity(n: u16) -> Self {
        let mut rows = vec![0u8; n as usize * n as usize];
        for i in 0..n as usize {
            rows[i * n as usize + i] = 1;
        }
        Subspace { n, dim: n, rows }
    }

    /// Canonicalize a flattened generating set (any number of rows of length
    /// `n`, dependent or unsorted) into the unique RREF basis.
    pub fn from_rows(field: &FieldSpec, n: u16, rows: &[u8]) -> Self {
        assert!(n > 0 && rows.len() % n as usize == 0, "rows must be a multiple of the ambient dimension");
        let mut data = rows.to_vec();
        let rank = rank_in_place(field, &mut data, n as usize);
        data.truncate(rank * n as usize);
        Subspace { n, dim: rank as u16, rows: data }
    }

    /// Canonicalize a list of generating vectors.
    pub fn from_vectors(field: &FieldSpec, n: u16, vectors: &[Vec<u8>]) -> Self {
        let mut flat = Vec::with_capacity(vectors.len() * n as usize);
        for v in vectors {
            assert_eq!(v.len(), n as usize);
            flat.extend_from_slice(v);
        }
        Self::from_rows(field, n, &flat)
    }

    /// Ambient vector-space dimension n.
    pub fn ambient(&self) -> u16 {
        self.n
    }

    /// Vector-space dimension of the subspace.
    pub fn dim(&self) -> u16 {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// Basis row `i` (RREF order).
    pub fn row(&self, i: usize) -> &[u8] {
        let n = self.n as usize;
        &self.rows[i * n..(i + 1) * n]
    }

    /// All rows, flattened row-major.
    pub fn rows_flat(&self) -> &[u8] {
        &self.rows
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.rows.chunks_exact(self.n as usize)
    }

    /// Reduce `v` against the RREF basis; returns the residue.
    fn reduce_vector(&self, field: &FieldSpec, v: &[u8]) -> Vec<u8> {
        let n = self.n as usize;
        let mut w = v.to_vec();
        for r in 0..self.dim as usize {
            let pivot = self.row(r).iter().position(|&x| x != 0).expect("RREF rows are nonzero");
            let c = w[pivot];
            if c != 0 {
                for j in pivot..n {
                    let t = field.mul(c, self.rows[r * n + j]);
                    w[j] = field.sub(w[j], t);
                }
            }
        }
        w
    }

    /// Membership test for a single vector.
    pub fn contains_vector(&self, field: &FieldSpec, v: &[u8]) -> bool {
        assert_eq!(v.len(), self.n as usize);
        self.reduce_vector(field, v).iter().all(|&x| x == 0)
    }

    /// Containment test `other ⊆ self`.
    pub fn contains(&self, field: &FieldSpec, other: &Subspace) -> bool {
        other.n == self.n && other.iter_rows().all(|r| self.contains_vector(field, r))
    }

    /// Canonical sum ⟨self, other⟩.
    pub fn span(&self, field: &FieldSpec, other: &Subspace) -> Result<Subspace, GeometryError> {
        if self.n != other.n {
            return Err(GeometryError::DimensionMismatch { expected: self.n, got: other.n });
        }
        let mut flat = Vec::with_capacity((self.dim + other.dim) as usize * self.n as usize);
        flat.extend_from_slice(&self.rows);
        flat.extend_from_slice(&other.rows);
        Ok(Subspace::from_rows(field, self.n, &flat))
    }

    /// Canonical intersection self ∩ other.
    ///
    /// Stack the two bases with an identity tracker on the right, eliminate
    /// on the original coordinates only, and read intersection vectors off
    /// the tracker rows whose coordinate part vanished.
    pub fn intersect(&self, field: &FieldSpec, other: &Subspace) -> Result<Subspace, GeometryError> {
        if self.n != other.n {
            return Err(GeometryError::DimensionMismatch { expected: self.n, got: other.n });
        }
        let n = self.n as usize;
        let (ra, rb) = (self.dim as usize, other.dim as usize);
        if ra == 0 || rb == 0 {
            return Ok(Subspace::zero(self.n));
        }
        let m = ra + rb;
        let width = n + m;
        let mut data = vec![0u8; m * width];
        for i in 0..ra {
            data[i * width..i * width + n].copy_from_slice(self.row(i));
            data[i * width + n + i] = 1;
        }
        for j in 0..rb {
            let r = ra + j;
            data[r * width..r * width + n].copy_from_slice(other.row(j));
            data[r * width + n + r] = 1;
        }
        // Eliminate with pivots restricted to the first n columns.
        let mut rank = 0usize;
        for col in 0..n {
            let Some(pivot) = (rank..m).find(|&r| data[r * width + col] != 0) else {
                continue;
            };
            if pivot != rank {
                for j in 0..width {
                    data.swap(pivot * width + j, rank * width + j);
                }
            }
            let inv = field.inv(data[rank * width + col]).expect("pivot entry is nonzero");
            if inv != 1 {
                for j in 0..width {
                    data[rank * width + j] = field.mul(data[rank * width + j], inv);
                }
            }
            for r in 0..m {
                let c = data[r * width + col];
                if r != rank && c != 0 {
                    for j in 0..width {
                        let t = field.mul(c, data[rank * width + j]);
                        data[r * width + j] = field.sub(data[r * width + j], t);
                    }
                }
            }
            rank += 1;
            if rank == m {
                break;
            }
        }
        // Rows past `rank` satisfy Σ xᵢ aᵢ + Σ yⱼ bⱼ = 0; then Σ xᵢ aᵢ ∈ A ∩ B.
        let mut members = Vec::new();
        for r in rank..m {
            debug_assert!(data[r * width..r * width + n].iter().all(|&x| x == 0));
            let mut v = vec![0u8; n];
            for (i, _) in (0..ra).enumerate() {
                let c = data[r * width + n + i];
                if c != 0 {
                    for j in 0..n {
                        let t = field.mul(c, self.rows[i * n + j]);
                        v[j] = field.add(v[j], t);
                    }
                }
            }
            members.extend_from_slice(&v);
        }
        Ok(Subspace::from_rows(field, self.n, &members))
    }
}

/// All `a`-dimensional subspaces of `sub`, sorted in canonical order.
/// Breadth-first over projective extension vectors, like the isotropic
/// enumeration but with no form to respect (a subspace of a totally
/// isotropic space is itself totally isotropic, so callers filtering by
/// isotropy get it for free).
pub fn subspaces_within(field: &FieldSpec, sub: &Subspace, a: u16) -> Vec<Subspace> {
    let n = sub.ambient();
    if a > sub.dim() {
        return Vec::new();
    }
    let mut level = vec![Subspace::zero(n)];
    for _ in 0..a {
        let mut next = std::collections::HashSet::new();
        for prev in &level {
            crate::geometry::for_each_projective_vector(field, sub.rows_flat(), n as usize, |v| {
                if !prev.contains_vector(field, v) {
                    let mut flat = prev.rows_flat().to_vec();
                    flat.extend_from_slice(v);
                    next.insert(Subspace::from_rows(field, n, &flat));
                }
            });
        }
        level = next.into_iter().collect();
    }
    level.sort_unstable();
    level
}

/// Basis of the solution space of `functionals · x = 0` (functionals are
/// `m` rows of length `n`, flattened), as a canonical subspace.
pub fn nullspace(field: &FieldSpec, functionals: &[u8], n: u16) -> Subspace {
    let nu = n as usize;
    let mut mat = functionals.to_vec();
    let rank = rank_in_place(field, &mut mat, nu);
    mat.truncate(rank * nu);
    let mut pivots = Vec::with_capacity(rank);
    for r in 0..rank {
        let p = mat[r * nu..(r + 1) * nu].iter().position(|&x| x != 0).expect("nonzero row");
        pivots.push(p);
    }
    let mut basis = Vec::new();
    for fc in 0..nu {
        if pivots.contains(&fc) {
            continue;
        }
        let mut v = vec![0u8; nu];
        v[fc] = 1;
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(mat[r * nu + fc]);
        }
        basis.extend_from_slice(&v);
    }
    Subspace::from_rows(field, n, &basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::create_field;

    #[test]
    fn rref_is_canonical_under_permutation_and_scaling() {
        let f = create_field(5, 1).unwrap();
        let a = Subspace::from_vectors(&f, 4, &[vec![2, 1, 0, 3], vec![0, 0, 4, 1]]);
        let b = Subspace::from_vectors(&f, 4, &[vec![0, 0, 3, 2], vec![4, 2, 0, 1]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn dimension_identity_for_span_and_intersection() {
        let f = create_field(3, 1).unwrap();
        // Deterministic pseudo-random generating sets.
        let mut state = 11u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 3) as u8
        };
        for _ in 0..200 {
            let mk = |next: &mut dyn FnMut() -> u8, rows: usize| {
                let flat: Vec<u8> = (0..rows * 6).map(|_| next()).collect();
                Subspace::from_rows(&f, 6, &flat)
            };
            let u = mk(&mut next, 3);
            let v = mk(&mut next, 2);
            let s = u.span(&f, &v).unwrap();
            let i = u.intersect(&f, &v).unwrap();
            assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
            assert!(u.contains(&f, &i) && v.contains(&f, &i));
            assert!(s.contains(&f, &u) && s.contains(&f, &v));
        }
    }

    #[test]
    fn intersection_with_self_is_identity() {
        let f = create_field(2, 1).unwrap();
        let u = Subspace::from_vectors(&f, 5, &[vec![1, 0, 1, 0, 1], vec![0, 1, 1, 1, 0]]);
        assert_eq!(u.intersect(&f, &u).unwrap(), u);
        assert_eq!(u.span(&f, &u).unwrap(), u);
    }

    #[test]
    fn nullspace_solves_conditions() {
        let f = create_field(3, 1).unwrap();
        let functionals = [1u8, 0, 2, 0, 0, 1, 1, 1];
        let ns = nullspace(&f, &functionals, 4);
        assert_eq!(ns.dim(), 2);
        for row in ns.iter_rows() {
            let c1 = f.add(row[0], f.mul(2, row[2]));
            let c2 = f.add(f.add(row[1], row[2]), row[3]);
            assert_eq!((c1, c2), (0, 0));
        }
    }

    #[test]
    fn zero_and_identity_edges() {
        let f = create_field(2, 1).unwrap();
        let z = Subspace::zero(4);
        let id = Subspace::identity(4);
        assert!(id.contains(&f, &z));
        assert_eq!(z.span(&f, &id).unwrap(), id);
        assert_eq!(z.intersect(&f, &id).unwrap(), z);
        let mismatched = Subspace::zero(5);
        assert!(matches!(
            id.span(&f, &mismatched),
            Err(GeometryError::DimensionMismatch { expected: 4, got: 5 })
        ));
    }

    #[test]
    fn byte_order_is_total_on_same_shape() {
        let f = create_field(2, 1).unwrap();
        let a = Subspace::from_vectors(&f, 3, &[vec![1, 0, 0]]);
        let b = Subspace::from_vectors(&f, 3, &[vec![1, 0, 1]]);
        assert!(a < b);
    }
}
