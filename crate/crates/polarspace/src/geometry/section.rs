//! Non-degenerate sections: restrict a polar space to the intersection of
//! linear hyperplanes, classify the restricted form, and move subspaces
//! between section coordinates and ambient coordinates.

use super::form::{FormKind, FormSpec};
use super::subspace::{nullspace, rank_in_place, Subspace};
use super::{for_each_projective_vector, GeometryError, PolarSpace};
use crate::gf::FieldSpec;

/// A polar space arising as a linear section of an ambient polar space,
/// together with the change of coordinates.
pub struct Section {
    space: PolarSpace,
    basis: Vec<u8>,
    pivots: Vec<usize>,
    ambient_n: u16,
}

impl std::fmt::Debug for Section {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Section({} in ambient dim {})", self.space.name(), self.ambient_n)
    }
}

/// Intersect `ambient` with the kernels of the given independent linear
/// conditions (each of length n). Fails with `DegenerateSection` when the
/// restricted form is degenerate, i.e. the section is tangent.
pub fn section(ambient: &PolarSpace, conditions: &[Vec<u8>]) -> Result<Section, GeometryError> {
    let field = ambient.field();
    let n = ambient.ambient();
    let nu = n as usize;
    for c in conditions {
        if c.len() != nu {
            return Err(GeometryError::DimensionMismatch { expected: n, got: c.len() as u16 });
        }
    }
    let mut stacked: Vec<u8> = conditions.iter().flatten().copied().collect();
    let rank = rank_in_place(field, &mut stacked, nu);
    assert_eq!(rank, conditions.len(), "section conditions must be linearly independent");

    let flat: Vec<u8> = conditions.iter().flatten().copied().collect();
    let basis = nullspace(field, &flat, n);
    let m = basis.dim();
    let mu = m as usize;

    // Restrict the form to the section basis.
    let kind = ambient.form().kind();
    let (quad, gram) = if kind.is_quadratic() {
        let mut c = vec![0u8; mu * mu];
        for i in 0..mu {
            let bi = basis.row(i);
            c[i * mu + i] = ambient.form().eval_quadratic(field, bi);
            for j in (i + 1)..mu {
                c[i * mu + j] = ambient.form().pairing(field, bi, basis.row(j));
            }
        }
        (Some(c), None)
    } else {
        let mut g = vec![0u8; mu * mu];
        for i in 0..mu {
            for j in 0..mu {
                g[i * mu + j] = ambient.form().pairing(field, basis.row(i), basis.row(j));
            }
        }
        (None, Some(g))
    };
    let provisional_kind = match kind {
        k if k.is_quadratic() => FormKind::Hyperbolic,
        k if k.is_hermitian() => FormKind::HermitianOdd,
        _ => FormKind::Symplectic,
    };
    let form = FormSpec::from_parts(provisional_kind, m, quad.clone(), gram.clone(), field)?;

    // Degeneracy test. For quadratic kinds a nonzero radical is tolerable
    // exactly when it carries no singular point (the nucleus of a parabolic
    // form in characteristic two); sesquilinear kinds admit no radical.
    let radical = form.pairing_radical(field);
    if !radical.is_zero() {
        if kind.is_quadratic() {
            let mut singular = false;
            for_each_projective_vector(field, radical.rows_flat(), mu, |v| {
                if form.eval_quadratic(field, v) == 0 {
                    singular = true;
                }
            });
            if singular {
                return Err(GeometryError::DegenerateSection);
            }
        } else {
            return Err(GeometryError::DegenerateSection);
        }
    }

    let d = super::witt_index(field, &form);
    let gap = m - 2 * d;
    let final_kind = if kind.is_quadratic() {
        match gap {
            0 => FormKind::Hyperbolic,
            1 => FormKind::Parabolic,
            2 => FormKind::Elliptic,
            _ => unreachable!("non-degenerate quadratic forms have defect at most 2"),
        }
    } else if kind.is_hermitian() {
        match gap {
            0 => FormKind::HermitianOdd,
            1 => FormKind::HermitianEven,
            _ => unreachable!("non-degenerate Hermitian forms have defect at most 1"),
        }
    } else {
        assert_eq!(gap, 0, "non-degenerate alternating forms have even dimension");
        FormKind::Symplectic
    };
    let final_form = FormSpec::from_parts(final_kind, m, quad, gram, field)?;
    let space = PolarSpace::from_form(field.clone(), final_form, Some(d))?;

    let pivots = (0..mu)
        .map(|i| {
            basis
                .row(i)
                .iter()
                .position(|&x| x != 0)
                .expect("nullspace basis rows are nonzero")
        })
        .collect();
    Ok(Section { space, basis: basis.rows_flat().to_vec(), pivots, ambient_n: n })
}

/// Search the canonical ordering of hyperplanes for the first non-degenerate
/// section with the requested rank and doubled parameter.
pub fn find_section(ambient: &PolarSpace, want_rank: u16, want_e2: i64) -> Result<Section, GeometryError> {
    let n = ambient.ambient();
    let identity = Subspace::identity(n);
    let mut found: Option<Vec<u8>> = None;
    let mut hyperplanes: Vec<Vec<u8>> = Vec::new();
    for_each_projective_vector(ambient.field(), identity.rows_flat(), n as usize, |c| {
        hyperplanes.push(c.to_vec());
    });
    hyperplanes.sort_unstable();
    for c in hyperplanes {
        match section(ambient, &[c.clone()]) {
            Ok(s) if s.space.rank() == want_rank && s.space.e2() == want_e2 => {
                found = Some(c);
                break;
            }
            Ok(_) => {}
            Err(GeometryError::DegenerateSection) => {}
            Err(e) => return Err(e),
        }
    }
    match found {
        Some(c) => section(ambient, &[c]),
        None => Err(GeometryError::NoSuchSection),
    }
}

/// The three standard conditions cutting a codimension-3 section of rank two
/// less and doubled parameter two more out of an eligible ambient space
/// (hyperbolic, parabolic, or Hermitian on even vector dimension).
pub fn lift_conditions(ambient: &PolarSpace) -> Result<Vec<Vec<u8>>, GeometryError> {
    let field = ambient.field();
    let n = ambient.ambient() as usize;
    if ambient.rank() < 3 {
        return Err(GeometryError::NoSuchSection);
    }
    let mut conds = vec![vec![0u8; n], vec![0u8; n], vec![0u8; n]];
    conds[1][n - 2] = 1;
    conds[2][n - 1] = 1;
    match ambient.form().kind() {
        FormKind::Hyperbolic => {
            // Fuse the first hyperbolic pair: x₀ = x₁ leaves the square term
            // Y² with Y the fused coordinate.
            conds[0][0] = 1;
            conds[0][1] = field.neg(1);
        }
        FormKind::Parabolic if field.char_p() != 2 => {
            // x₁ = c·x₂ turns X₀² + X₁X₂ into X₀² + cY²; anisotropic exactly
            // when −c is a non-square.
            let c = (1..field.order() as u64)
                .map(|v| v as u8)
                .find(|&v| !field.is_square(field.neg(v)))
                .expect("finite fields of odd order have non-squares");
            conds[0][1] = 1;
            conds[0][2] = field.neg(c);
        }
        FormKind::Parabolic => {
            // Characteristic two: x₀ + x₁ + γ·x₂ = 0 restricts X₀² + X₁X₂ to
            // α² + αβ + γ²β², anisotropic exactly when Tr(γ²) = 1.
            let h = field.degree();
            let trace = |x: u8| -> u8 {
                let mut acc = 0u8;
                let mut t = x;
                for _ in 0..h {
                    acc = field.add(acc, t);
                    t = field.mul(t, t);
                }
                acc
            };
            let gamma = field
                .elements()
                .find(|&g| trace(field.mul(g, g)) == 1)
                .expect("the absolute trace is onto the prime field");
            conds[0][0] = 1;
            conds[0][1] = 1;
            conds[0][2] = gamma;
        }
        FormKind::HermitianOdd => {
            conds[0][n - 3] = 1;
        }
        _ => return Err(GeometryError::NoSuchSection),
    }
    Ok(conds)
}

impl Section {
    /// The restricted polar space, in section coordinates.
    pub fn space(&self) -> &PolarSpace {
        &self.space
    }

    pub fn ambient_dim(&self) -> u16 {
        self.ambient_n
    }

    /// Section dimension m = n − (number of conditions).
    pub fn dim(&self) -> u16 {
        self.pivots.len() as u16
    }

    pub fn basis_rows(&self) -> &[u8] {
        &self.basis
    }

    /// The section itself as a subspace of the ambient space.
    pub fn as_ambient_subspace(&self, field: &FieldSpec) -> Subspace {
        Subspace::from_rows(field, self.ambient_n, &self.basis)
    }

    /// Map a coordinate vector of the section to the ambient space.
    pub fn ambient_vector(&self, coeffs: &[u8]) -> Vec<u8> {
        let field = self.space.field();
        let n = self.ambient_n as usize;
        let m = self.pivots.len();
        let mut v = vec![0u8; n];
        for i in 0..m {
            if coeffs[i] != 0 {
                let row = &self.basis[i * n..(i + 1) * n];
                for j in 0..n {
                    if row[j] != 0 {
                        v[j] = field.add(v[j], field.mul(coeffs[i], row[j]));
                    }
                }
            }
        }
        v
    }

    /// Map a subspace given in section coordinates to the ambient space.
    pub fn embed(&self, sub: &Subspace) -> Subspace {
        let field = self.space.field();
        let n = self.ambient_n as usize;
        let mut flat = Vec::with_capacity(sub.dim() as usize * n);
        for row in sub.iter_rows() {
            flat.extend_from_slice(&self.ambient_vector(row));
        }
        Subspace::from_rows(field, self.ambient_n, &flat)
    }

    /// Express an ambient vector in section coordinates, if it lies in the
    /// section. The basis is in reduced row-echelon form, so the coefficient
    /// on basis row i can be read off at its pivot column.
    pub fn restrict_vector(&self, v: &[u8]) -> Option<Vec<u8>> {
        let coeffs: Vec<u8> = self.pivots.iter().map(|&p| v[p]).collect();
        if self.ambient_vector(&coeffs) == v {
            Some(coeffs)
        } else {
            None
        }
    }

    /// Express an ambient subspace in section coordinates, if contained in
    /// the section.
    pub fn restrict(&self, sub: &Subspace) -> Option<Subspace> {
        let m = self.dim();
        let mut flat = Vec::with_capacity(sub.dim() as usize * m as usize);
        for row in sub.iter_rows() {
            flat.extend_from_slice(&self.restrict_vector(row)?);
        }
        Some(Subspace::from_rows(self.space.field(), m, &flat))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_space;

    #[test]
    fn hyperplane_section_of_hyperbolic_space_is_parabolic() {
        let ambient = parse_space("Q+:5:2").unwrap();
        let s = find_section(&ambient, 2, 2).unwrap();
        assert_eq!(s.space().rank(), 2);
        assert_eq!(s.space().e2(), 2);
        assert_eq!(s.dim(), 5);
        assert_eq!(s.space().enumerate_isotropic(1).unwrap().len(), 15);
        // Every section point embeds to a totally isotropic ambient point.
        for p in s.space().enumerate_isotropic(1).unwrap() {
            let amb = s.embed(p);
            assert_eq!(amb.dim(), 1);
            assert!(ambient.evaluate(&amb).unwrap().totally_isotropic);
            assert_eq!(&s.restrict(&amb).unwrap(), p);
        }
    }

    #[test]
    fn tangent_hyperplane_is_rejected() {
        let ambient = parse_space("Q+:5:2").unwrap();
        // The kernel of x₅ contains the radical point e₄ of the restriction.
        let c = vec![0, 0, 0, 0, 0, 1];
        assert!(matches!(section(&ambient, &[c]), Err(GeometryError::DegenerateSection)));
    }

    #[test]
    fn lift_sections_across_kinds() {
        // Hyperbolic ambient: parabolic section two ranks down.
        let a = parse_space("Q+:7:2").unwrap();
        let s = section(&a, &lift_conditions(&a).unwrap()).unwrap();
        assert_eq!((s.space().rank(), s.space().e2()), (2, 2));
        assert_eq!(s.space().enumerate_isotropic(1).unwrap().len(), 15);

        // Parabolic ambient, odd characteristic: elliptic section.
        let a = parse_space("Q:6:3").unwrap();
        let s = section(&a, &lift_conditions(&a).unwrap()).unwrap();
        assert_eq!((s.space().rank(), s.space().e2()), (1, 4));
        assert_eq!(s.space().enumerate_isotropic(1).unwrap().len(), 10);

        // Parabolic ambient, characteristic two: elliptic section.
        let a = parse_space("Q:6:2").unwrap();
        let s = section(&a, &lift_conditions(&a).unwrap()).unwrap();
        assert_eq!((s.space().rank(), s.space().e2()), (1, 4));
        assert_eq!(s.space().enumerate_isotropic(1).unwrap().len(), 5);

        // Hermitian ambient on even vector dimension.
        let a = parse_space("H:5:4").unwrap();
        let s = section(&a, &lift_conditions(&a).unwrap()).unwrap();
        assert_eq!((s.space().rank(), s.space().e2()), (1, 3));
        assert_eq!(s.space().enumerate_isotropic(1).unwrap().len(), 9);
    }

    #[test]
    fn ineligible_ambients_have_no_lift_conditions() {
        for name in ["Q-:5:2", "W:5:2", "H:4:4", "Q:4:3"] {
            let a = parse_space(name).unwrap();
            assert!(
                matches!(lift_conditions(&a), Err(GeometryError::NoSuchSection)),
                "{name} should not admit the standard lift section"
            );
        }
        // Minimum eligible rank: a rank-3 hyperbolic space drops to rank 1.
        let a = parse_space("Q+:5:2").unwrap();
        let s = section(&a, &lift_conditions(&a).unwrap()).unwrap();
        assert_eq!((s.space().rank(), s.space().e2()), (1, 2));
        assert_eq!(s.space().enumerate_isotropic(1).unwrap().len(), 3);
    }

    #[test]
    fn hermitian_hyperplane_section() {
        // A non-tangent hyperplane drops H(3,4) to the unital H(2,4).
        let ambient = parse_space("H:3:4").unwrap();
        let s = find_section(&ambient, 1, 3).unwrap();
        assert_eq!(s.space().enumerate_isotropic(1).unwrap().len(), 9);
    }

    #[test]
    fn dependent_conditions_panic() {
        let ambient = parse_space("Q+:5:2").unwrap();
        let c1 = vec![1, 0, 0, 0, 0, 1];
        let c2 = vec![1, 0, 0, 0, 0, 1];
        let result =
            std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| section(&ambient, &[c1, c2])));
        assert!(result.is_err());
    }
}
