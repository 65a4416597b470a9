//! Similitudes between nondegenerate classical forms: a linear bijection T
//! with Q_to(vT) = s·Q_from(v) (pairings matching with the same factor s)
//! for a fixed nonzero scalar s. Over a finite field two nondegenerate
//! forms of the same kind and dimension are always similar: even-dimensional
//! quadratic, Hermitian, and symplectic forms are already isometric (s = 1),
//! while odd-dimensional quadratic forms in odd characteristic need s in the
//! square class of the discriminant ratio. Witt's extension theorem makes
//! the vector-by-vector search below effectively backtrack-free once s is
//! right.
//!
//! The use case is transporting a set given in a space's standard
//! coordinates into an isomorphic copy cut out by linear conditions (a
//! hyperplane section in its internal chart); totally isotropic subspaces
//! map to totally isotropic subspaces under any similitude.

use super::form::FormSpec;
use super::subspace::{rank_in_place, Subspace};
use crate::gf::FieldSpec;

/// A linear map v ↦ v·M (rows of `matrix` are the images of the standard
/// basis) carrying `from` onto `scale`·`to` in the sense above.
pub struct Similitude {
    n: u16,
    matrix: Vec<u8>,
    scale: u8,
}

impl Similitude {
    pub fn scale(&self) -> u8 {
        self.scale
    }

    pub fn apply(&self, field: &FieldSpec, v: &[u8]) -> Vec<u8> {
        let nu = self.n as usize;
        assert_eq!(v.len(), nu);
        let mut out = vec![0u8; nu];
        for i in 0..nu {
            if v[i] == 0 {
                continue;
            }
            for j in 0..nu {
                let m = self.matrix[i * nu + j];
                if m != 0 {
                    out[j] = field.add(out[j], field.mul(v[i], m));
                }
            }
        }
        out
    }

    pub fn map_subspace(&self, field: &FieldSpec, sub: &Subspace) -> Subspace {
        let mut flat = Vec::with_capacity(sub.dim() as usize * self.n as usize);
        for row in sub.iter_rows() {
            flat.extend_from_slice(&self.apply(field, row));
        }
        Subspace::from_rows(field, self.n, &flat)
    }
}

/// Determinant of an n×n matrix over GF(q) by Gaussian elimination.
fn determinant(field: &FieldSpec, mat: &[u8], n: usize) -> u8 {
    let mut m = mat.to_vec();
    let mut det = 1u8;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return 0;
        };
        if pivot != col {
            for j in 0..n {
                m.swap(pivot * n + j, col * n + j);
            }
            det = field.neg(det);
        }
        det = field.mul(det, m[col * n + col]);
        let inv = field.inv(m[col * n + col]).expect("nonzero pivot");
        for r in (col + 1)..n {
            let c = field.mul(m[r * n + col], inv);
            if c != 0 {
                for j in col..n {
                    let t = field.mul(c, m[col * n + j]);
                    m[r * n + j] = field.sub(m[r * n + j], t);
                }
            }
        }
    }
    det
}

/// The scalar s that makes `from` and s·`to` isometric. Only odd-dimensional
/// quadratic forms in odd characteristic have two proportionality classes;
/// there the ratio of polarization discriminants decides (dimension odd, so
/// scaling the form by s scales the discriminant's square class by s).
fn required_scale(field: &FieldSpec, from: &FormSpec, to: &FormSpec) -> Option<u8> {
    let n = from.ambient() as usize;
    if !(from.kind().is_quadratic() && n % 2 == 1 && field.char_p() != 2) {
        return Some(1);
    }
    let disc = |f: &FormSpec| {
        let nu = f.ambient() as usize;
        let mut polar = Vec::with_capacity(nu * nu);
        for i in 0..nu {
            let mut e = vec![0u8; nu];
            e[i] = 1;
            polar.extend_from_slice(&f.pairing_functional(field, &e));
        }
        determinant(field, &polar, nu)
    };
    let (da, db) = (disc(from), disc(to));
    if da == 0 || db == 0 {
        return None;
    }
    let ratio = field.mul(db, field.inv(da).ok()?);
    if field.is_square(ratio) {
        Some(1)
    } else {
        // Any nonsquare works; take the first one in element order.
        field.elements().find(|&x| x != 0 && !field.is_square(x))
    }
}

/// Solve `rows · x = rhs` over GF(q): returns a particular solution and a
/// basis of the homogeneous solution space, or None if inconsistent.
fn solve_affine(
    field: &FieldSpec,
    rows: &[u8],
    rhs: &[u8],
    n: usize,
) -> Option<(Vec<u8>, Vec<Vec<u8>>)> {
    let k = rhs.len();
    debug_assert_eq!(rows.len(), k * n);
    let width = n + 1;
    let mut aug = vec![0u8; k * width];
    for r in 0..k {
        aug[r * width..r * width + n].copy_from_slice(&rows[r * n..(r + 1) * n]);
        aug[r * width + n] = rhs[r];
    }
    let rank = rank_in_place(field, &mut aug, width);
    let mut pivots = Vec::with_capacity(rank);
    for r in 0..rank {
        let p = aug[r * width..(r + 1) * width].iter().position(|&x| x != 0).expect("nonzero row");
        if p == n {
            return None;
        }
        pivots.push(p);
    }
    let mut particular = vec![0u8; n];
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = aug[r * width + n];
    }
    let mut basis = Vec::new();
    for fc in 0..n {
        if pivots.contains(&fc) {
            continue;
        }
        let mut v = vec![0u8; n];
        v[fc] = 1;
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(aug[r * width + fc]);
        }
        basis.push(v);
    }
    Some((particular, basis))
}

struct Search<'a> {
    field: &'a FieldSpec,
    from: &'a FormSpec,
    to: &'a FormSpec,
    scale: u8,
    n: usize,
    /// Images chosen so far, flattened.
    chosen: Vec<u8>,
    /// Running RREF of the chosen images, for independence checks.
    span: Vec<u8>,
    span_rank: usize,
}

impl Search<'_> {
    fn diagonal_target(&self, i: usize) -> u8 {
        let mut e = vec![0u8; self.n];
        e[i] = 1;
        if self.from.kind().is_quadratic() {
            self.field.mul(self.scale, self.from.eval_quadratic(self.field, &e))
        } else {
            self.field.mul(self.scale, self.from.pairing(self.field, &e, &e))
        }
    }

    fn diagonal_value(&self, w: &[u8]) -> u8 {
        if self.to.kind().is_quadratic() {
            self.to.eval_quadratic(self.field, w)
        } else {
            self.to.pairing(self.field, w, w)
        }
    }

    fn run(&mut self, level: usize) -> bool {
        if level == self.n {
            return true;
        }
        // Linear conditions: pairing_to(w, w_j) = s·pairing_from(e_level, e_j),
        // linear in the unknown first slot.
        let mut rows = Vec::with_capacity(level * self.n);
        let mut rhs = Vec::with_capacity(level);
        let mut e_level = vec![0u8; self.n];
        e_level[level] = 1;
        for j in 0..level {
            let wj = self.chosen[j * self.n..(j + 1) * self.n].to_vec();
            for t in 0..self.n {
                let mut e_t = vec![0u8; self.n];
                e_t[t] = 1;
                rows.push(self.to.pairing(self.field, &e_t, &wj));
            }
            let mut e_j = vec![0u8; self.n];
            e_j[j] = 1;
            rhs.push(self.field.mul(self.scale, self.from.pairing(self.field, &e_level, &e_j)));
        }
        let Some((particular, basis)) = solve_affine(self.field, &rows, &rhs, self.n) else {
            return false;
        };
        let want = self.diagonal_target(level);
        let q = self.field.order() as u64;
        let free = basis.len();
        let mut digits = vec![0u64; free];
        loop {
            let mut w = particular.clone();
            for (d, b) in digits.iter().zip(&basis) {
                if *d != 0 {
                    for t in 0..self.n {
                        if b[t] != 0 {
                            w[t] = self.field.add(w[t], self.field.mul(*d as u8, b[t]));
                        }
                    }
                }
            }
            if self.diagonal_value(&w) == want && self.is_independent(&w) {
                self.push(&w);
                if self.run(level + 1) {
                    return true;
                }
                self.pop();
            }
            // Odometer over the free coefficients.
            let mut carry = 0usize;
            while carry < free {
                digits[carry] += 1;
                if digits[carry] < q {
                    break;
                }
                digits[carry] = 0;
                carry += 1;
            }
            if carry == free {
                return false;
            }
        }
    }

    fn is_independent(&self, w: &[u8]) -> bool {
        let mut trial = self.span.clone();
        trial.truncate(self.span_rank * self.n);
        trial.extend_from_slice(w);
        rank_in_place(self.field, &mut trial, self.n) > self.span_rank
    }

    fn push(&mut self, w: &[u8]) {
        self.chosen.extend_from_slice(w);
        self.span.truncate(self.span_rank * self.n);
        self.span.extend_from_slice(w);
        self.span_rank = rank_in_place(self.field, &mut self.span, self.n);
    }

    fn pop(&mut self) {
        self.chosen.truncate(self.chosen.len() - self.n);
        let mut span = self.chosen.clone();
        self.span_rank = rank_in_place(self.field, &mut span, self.n);
        self.span = span;
    }
}

/// Find a similitude carrying `from` onto a scalar multiple of `to`, or None
/// when kinds/dimensions differ or either pairing is too degenerate to fix a
/// scale. Deterministic: the candidate images are scanned in a fixed order.
pub fn similitude(field: &FieldSpec, from: &FormSpec, to: &FormSpec) -> Option<Similitude> {
    if from.kind() != to.kind() || from.ambient() != to.ambient() {
        return None;
    }
    let n = from.ambient() as usize;
    let scale = required_scale(field, from, to)?;
    let mut search = Search {
        field,
        from,
        to,
        scale,
        n,
        chosen: Vec::with_capacity(n * n),
        span: Vec::new(),
        span_rank: 0,
    };
    if !search.run(0) {
        return None;
    }
    let matrix = search.chosen;
    let sim = Similitude { n: from.ambient(), matrix, scale };
    if cfg!(debug_assertions) {
        let mut e = vec![vec![0u8; n]; n];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = 1;
        }
        for i in 0..n {
            let wi = sim.apply(field, &e[i]);
            for ej in e.iter() {
                let wj = sim.apply(field, ej);
                let lhs = to.pairing(field, &wi, &wj);
                let rhs = field.mul(scale, from.pairing(field, &e[i], ej));
                debug_assert_eq!(lhs, rhs, "pairing must transform by the scale");
            }
            if from.kind().is_quadratic() {
                debug_assert_eq!(
                    to.eval_quadratic(field, &wi),
                    field.mul(scale, from.eval_quadratic(field, &e[i]))
                );
            }
        }
    }
    Some(sim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{standard_polar_space, FormKind, Section};
    use crate::gf::field_of_order;

    fn check_roundtrip(space: &crate::geometry::PolarSpace, section: &Section) {
        let field = space.field();
        let standard = crate::geometry::standard_polar_space(
            section.space().form().kind(),
            section.space().ambient() - 1,
            field.order(),
        )
        .unwrap();
        let sim = similitude(field, standard.form(), section.space().form())
            .expect("isomorphic section admits a similitude");
        // Points of the standard space map onto exactly the section's points.
        let std_points = standard.enumerate_isotropic(1).unwrap();
        let mut mapped: Vec<_> =
            std_points.iter().map(|p| sim.map_subspace(field, p)).collect();
        mapped.sort_unstable();
        mapped.dedup();
        assert_eq!(mapped.len(), std_points.len(), "similitude is injective on points");
        let sec_points = section.space().enumerate_isotropic(1).unwrap();
        assert_eq!(mapped, sec_points.to_vec());
    }

    #[test]
    fn standard_parabolic_maps_onto_hyperplane_section() {
        // Non-tangent hyperplane of the rank-3 hyperbolic space is a rank-2
        // parabolic space in non-standard coordinates.
        let space = standard_polar_space(crate::geometry::FormKind::Hyperbolic, 5, 3).unwrap();
        let section = crate::geometry::find_section(&space, 2, 2).unwrap();
        check_roundtrip(&space, &section);
    }

    #[test]
    fn odd_dimensional_discriminant_twist_is_handled() {
        // Scan every parabolic hyperplane section of the rank-2 elliptic
        // space; both discriminant classes occur among them, and a
        // similitude must be found for each.
        let space = standard_polar_space(crate::geometry::FormKind::Elliptic, 5, 3).unwrap();
        let field = space.field();
        let standard = standard_polar_space(crate::geometry::FormKind::Parabolic, 4, 3).unwrap();
        let mut scales_seen = std::collections::BTreeSet::new();
        let mut tried = 0;
        crate::geometry::for_each_projective_vector(
            field,
            Subspace::identity(6).rows_flat(),
            6,
            |c| {
                if tried >= 8 {
                    return;
                }
                if let Ok(section) = crate::geometry::section(&space, &[c.to_vec()]) {
                    if section.space().rank() == 2
                        && section.space().form().kind() == crate::geometry::FormKind::Parabolic
                    {
                        tried += 1;
                        let sim = similitude(field, standard.form(), section.space().form())
                            .expect("every parabolic section is similar to the standard one");
                        scales_seen.insert(field.is_square(sim.scale()));
                    }
                }
            },
        );
        assert!(tried >= 8);
        assert_eq!(scales_seen.len(), 2, "both square classes of sections occur");
    }

    #[test]
    fn hermitian_and_even_characteristic_sections() {
        let h = standard_polar_space(crate::geometry::FormKind::HermitianOdd, 3, 4).unwrap();
        let section = crate::geometry::find_section(&h, 1, 3).unwrap();
        let standard =
            standard_polar_space(crate::geometry::FormKind::HermitianEven, 2, 4).unwrap();
        let sim = similitude(h.field(), standard.form(), section.space().form()).unwrap();
        let std_points = standard.enumerate_isotropic(1).unwrap();
        let mut mapped: Vec<_> =
            std_points.iter().map(|p| sim.map_subspace(h.field(), p)).collect();
        mapped.sort_unstable();
        assert_eq!(mapped, section.space().enumerate_isotropic(1).unwrap().to_vec());

        // Even characteristic, odd ambient dimension: the nucleus direction
        // must not break the search.
        let space = standard_polar_space(crate::geometry::FormKind::Hyperbolic, 5, 2).unwrap();
        let section = crate::geometry::find_section(&space, 2, 2).unwrap();
        check_roundtrip(&space, &section);
    }

    #[test]
    fn mismatched_kinds_or_dimensions_are_rejected() {
        let f = field_of_order(3).unwrap();
        let a = FormSpec::standard(FormKind::Hyperbolic, 4, &f).unwrap();
        let b = FormSpec::standard(FormKind::Elliptic, 4, &f).unwrap();
        assert!(similitude(&f, &a, &b).is_none());
        let c = FormSpec::standard(FormKind::Hyperbolic, 6, &f).unwrap();
        assert!(similitude(&f, &a, &c).is_none());
    }
}
