//! Finite classical polar spaces: the six standard forms, canonical
//! enumeration of totally isotropic subspaces, tangent spaces, and the
//! exact counting formulas.
//!
//! All dimensions are vector-space dimensions. The CLI naming scheme
//! `TYPE:projdim:q` (e.g. `Q+:5:3`, `H:4:4`, `W:3:2`) uses projective
//! dimensions for construction only.

pub mod form;
pub mod isometry;
pub mod section;
pub mod subspace;

pub use form::{FormKind, FormSpec};
pub use isometry::{similitude, Similitude};
pub use section::{find_section, lift_conditions, section, Section};
pub use subspace::{nullspace, rank_in_place, subspaces_within, Subspace};

use crate::gf::{field_of_order, FieldError, FieldSpec};
use crate::qnum::{gaussian_binomial, prod_qpow_plus_one, rational_to_int};
use num_bigint::BigInt;
use std::sync::OnceLock;
use thiserror::Error;

/// Errors from space construction and subspace geometry.
#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("no polar space of kind {kind:?} has projective dimension {projective_dimension}")]
    IllegalCombination { kind: FormKind, projective_dimension: u16 },
    #[error("GF({q}) is not a square order; Hermitian spaces need one")]
    NeedSquareField { q: u16 },
    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: u16, got: u16 },
    #[error("requested isotropic dimension {a} exceeds the rank {d}")]
    RankExceeded { a: u16, d: u16 },
    #[error("subspace is not totally isotropic")]
    NotIsotropic,
    #[error("section is degenerate (tangent): the restricted form has a singular radical point")]
    DegenerateSection,
    #[error("no section with the requested rank and parameter exists for this space")]
    NoSuchSection,
    #[error("cannot parse space name {0:?}: expected TYPE:projdim:q with TYPE in {{Q+, Q-, Q, H, W}}")]
    BadSpaceName(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Verdict of [`PolarSpace::evaluate`]. The violation, if any, names the
/// offending basis rows and the nonzero form value: `(i, i, Q(rowᵢ))` for a
/// non-singular point, `(i, j, f(rowᵢ, rowⱼ))` for a non-orthogonal pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsotropyReport {
    pub totally_isotropic: bool,
    pub violation: Option<(u16, u16, u8)>,
}

/// A finite classical polar space with cached canonical enumerations.
pub struct PolarSpace {
    field: FieldSpec,
    form: FormSpec,
    d: u16,
    e2: i64,
    levels: Vec<OnceLock<Vec<Subspace>>>,
    disk_cache: Option<std::path::PathBuf>,
}

impl std::fmt::Debug for PolarSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PolarSpace({})", self.name())
    }
}

/// Visit one representative of every projective point of the row space of
/// `basis` (rows of length `n`): exactly the combinations whose first
/// nonzero coefficient is 1, so each 1-space is visited once.
pub fn for_each_projective_vector(
    field: &FieldSpec,
    basis: &[u8],
    n: usize,
    mut visit: impl FnMut(&[u8]),
) {
    let m = if n == 0 { 0 } else { basis.len() / n };
    let q = field.order() as u64;
    let mut v = vec![0u8; n];
    let mut digits: Vec<u8> = Vec::new();
    for lead in 0..m {
        let free = m - lead - 1;
        digits.clear();
        digits.resize(free, 0);
        loop {
            // v = basis[lead] + Σ digits[t] · basis[lead+1+t]
            v.copy_from_slice(&basis[lead * n..(lead + 1) * n]);
            for (t, &c) in digits.iter().enumerate() {
                if c != 0 {
                    let row = &basis[(lead + 1 + t) * n..(lead + 2 + t) * n];
                    for j in 0..n {
                        if row[j] != 0 {
                            v[j] = field.add(v[j], field.mul(c, row[j]));
                        }
                    }
                }
            }
            visit(&v);
            // Odometer over base-q digits.
            let mut pos = 0;
            loop {
                if pos == free {
                    break;
                }
                let next = digits[pos] as u64 + 1;
                if next < q {
                    digits[pos] = next as u8;
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if free == 0 || pos == free {
                break;
            }
        }
    }
}

/// Construct the polar space of the standard equation for `(kind, projdim, q)`.
pub fn standard_polar_space(kind: FormKind, projective_dimension: u16, q: u16) -> Result<PolarSpace, GeometryError> {
    let field = field_of_order(q)?;
    let n = projective_dimension + 1;
    let d = match kind {
        FormKind::Hyperbolic | FormKind::Symplectic | FormKind::HermitianOdd => n / 2,
        FormKind::Parabolic | FormKind::HermitianEven => (n.saturating_sub(1)) / 2,
        FormKind::Elliptic => (n.saturating_sub(2)) / 2,
    };
    if d == 0 {
        return Err(GeometryError::IllegalCombination { kind, projective_dimension });
    }
    let form = FormSpec::standard(kind, n, &field)?;
    PolarSpace::from_form(field, form, Some(d))
}

/// Parse a `TYPE:projdim:q` space name.
pub fn parse_space(name: &str) -> Result<PolarSpace, GeometryError> {
    let parts: Vec<&str> = name.split(':').collect();
    let bad = || GeometryError::BadSpaceName(name.to_string());
    if parts.len() != 3 {
        return Err(bad());
    }
    let projdim: u16 = parts[1].parse().map_err(|_| bad())?;
    let q: u16 = parts[2].parse().map_err(|_| bad())?;
    let kind = match parts[0] {
        "Q+" => FormKind::Hyperbolic,
        "Q-" => FormKind::Elliptic,
        "Q" => FormKind::Parabolic,
        "W" => FormKind::Symplectic,
        "H" => {
            if projdim % 2 == 1 {
                FormKind::HermitianOdd
            } else {
                FormKind::HermitianEven
            }
        }
        _ => return Err(bad()),
    };
    standard_polar_space(kind, projdim, q)
}

impl PolarSpace {
    /// Build a polar space from an explicit form. `rank` may be supplied when
    /// known (standard equations); otherwise it is computed by growing one
    /// maximal totally isotropic chain, which is exact because all maximal
    /// totally isotropic subspaces of a non-degenerate form share the Witt
    /// index.
    pub fn from_form(field: FieldSpec, form: FormSpec, rank: Option<u16>) -> Result<PolarSpace, GeometryError> {
        let n = form.ambient();
        if form.kind().is_hermitian() && field.sqrt_order().is_none() {
            return Err(GeometryError::NeedSquareField { q: field.order() });
        }
        // Degeneracy guard: a singular radical point breaks everything below.
        let radical = form.pairing_radical(&field);
        if !radical.is_zero() {
            let mut singular_found = false;
            for_each_projective_vector(&field, radical.rows_flat(), n as usize, |v| {
                if form.is_singular_vector(&field, v) {
                    singular_found = true;
                }
            });
            if singular_found {
                return Err(GeometryError::DegenerateSection);
            }
        }
        let e2 = form.kind().e2();
        let d = match rank {
            Some(d) => d,
            None => witt_index(&field, &form),
        };
        let levels = (0..=d as usize).map(|_| OnceLock::new()).collect();
        let space = PolarSpace { field, form, d, e2, levels, disk_cache: None };
        debug_assert_eq!(space.d, witt_index(&space.field, &space.form), "declared rank must match the Witt index");
        Ok(space)
    }

    /// Route enumerations through an on-disk cache directory.
    pub fn with_disk_cache(mut self, dir: std::path::PathBuf) -> Self {
        self.disk_cache = Some(dir);
        self
    }

    pub fn disk_cache_dir(&self) -> Option<&std::path::Path> {
        self.disk_cache.as_deref()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn form(&self) -> &FormSpec {
        &self.form
    }

    /// Rank d: the common dimension of the generators.
    pub fn rank(&self) -> u16 {
        self.d
    }

    /// Doubled parameter 2e ∈ {0, 1, 2, 3, 4}.
    pub fn e2(&self) -> i64 {
        self.e2
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn sqrt_q(&self) -> Option<u64> {
        self.field.sqrt_order().map(u64::from)
    }

    /// Ambient vector dimension n.
    pub fn ambient(&self) -> u16 {
        self.form.ambient()
    }

    /// Canonical `TYPE:projdim:q` name.
    pub fn name(&self) -> String {
        let t = match self.form.kind() {
            FormKind::Hyperbolic => "Q+",
            FormKind::Elliptic => "Q-",
            FormKind::Parabolic => "Q",
            FormKind::HermitianOdd | FormKind::HermitianEven => "H",
            FormKind::Symplectic => "W",
        };
        format!("{}:{}:{}", t, self.ambient() - 1, self.field.order())
    }

    /// Isotropy check with a witness for failures.
    pub fn evaluate(&self, sub: &Subspace) -> Result<IsotropyReport, GeometryError> {
        if sub.ambient() != self.ambient() {
            return Err(GeometryError::DimensionMismatch { expected: self.ambient(), got: sub.ambient() });
        }
        for i in 0..sub.dim() {
            let ri = sub.row(i as usize);
            if self.form.kind().is_quadratic() {
                let v = self.form.eval_quadratic(&self.field, ri);
                if v != 0 {
                    return Ok(IsotropyReport { totally_isotropic: false, violation: Some((i, i, v)) });
                }
            } else if self.form.kind().is_hermitian() {
                let v = self.form.pairing(&self.field, ri, ri);
                if v != 0 {
                    return Ok(IsotropyReport { totally_isotropic: false, violation: Some((i, i, v)) });
                }
            }
            for j in (i + 1)..sub.dim() {
                let v = self.form.pairing(&self.field, ri, sub.row(j as usize));
                if v != 0 {
                    return Ok(IsotropyReport { totally_isotropic: false, violation: Some((i, j, v)) });
                }
            }
        }
        Ok(IsotropyReport { totally_isotropic: true, violation: None })
    }

    /// Tangent space π^⊥ of a totally isotropic subspace (the whole space for
    /// π = 0). Each basis row contributes one orthogonality functional; for
    /// quadratic kinds that functional is the formal gradient at the row,
    /// which is well-defined in every characteristic.
    pub fn tangent_space(&self, sub: &Subspace) -> Result<Subspace, GeometryError> {
        if sub.ambient() != self.ambient() {
            return Err(GeometryError::DimensionMismatch { expected: self.ambient(), got: sub.ambient() });
        }
        if !self.evaluate(sub)?.totally_isotropic {
            return Err(GeometryError::NotIsotropic);
        }
        self.perp(sub)
    }

    /// Polar subspace π^⊥ of an arbitrary subspace under the form's pairing
    /// (the whole space for π = 0). Unlike [`Self::tangent_space`] this does
    /// not require the input to be totally isotropic, so the result need not
    /// contain the input.
    pub fn perp(&self, sub: &Subspace) -> Result<Subspace, GeometryError> {
        if sub.ambient() != self.ambient() {
            return Err(GeometryError::DimensionMismatch { expected: self.ambient(), got: sub.ambient() });
        }
        if sub.is_zero() {
            return Ok(Subspace::identity(self.ambient()));
        }
        let n = self.ambient() as usize;
        let mut functionals = Vec::with_capacity(sub.dim() as usize * n);
        for row in sub.iter_rows() {
            functionals.extend_from_slice(&self.form.pairing_functional(&self.field, row));
        }
        Ok(nullspace(&self.field, &functionals, self.ambient()))
    }

    /// The complete sorted list of totally isotropic a-spaces. Computed once
    /// per dimension (optionally via the disk cache) and shared thereafter.
    pub fn enumerate_isotropic(&self, a: u16) -> Result<&[Subspace], GeometryError> {
        if a > self.d {
            return Err(GeometryError::RankExceeded { a, d: self.d });
        }
        for level in 0..=a {
            self.levels[level as usize].get_or_init(|| self.compute_level(level));
        }
        Ok(self.levels[a as usize].get().expect("level just initialized"))
    }

    fn compute_level(&self, a: u16) -> Vec<Subspace> {
        let n = self.ambient();
        if a == 0 {
            return vec![Subspace::zero(n)];
        }
        if let Some(dir) = &self.disk_cache {
            if let Some(list) = crate::codec::load_enumeration(dir, self, a) {
                return list;
            }
        }
        let prev = self.levels[(a - 1) as usize].get().expect("previous level computed first");
        let mut seen = std::collections::HashSet::new();
        let nu = n as usize;
        for s in prev {
            let tangent = if s.is_zero() {
                Subspace::identity(n)
            } else {
                self.tangent_space(s).expect("enumerated subspaces are totally isotropic")
            };
            for_each_projective_vector(&self.field, tangent.rows_flat(), nu, |v| {
                if !self.form.is_singular_vector(&self.field, v) {
                    return;
                }
                if s.contains_vector(&self.field, v) {
                    return;
                }
                let mut flat = Vec::with_capacity((s.dim() as usize + 1) * nu);
                flat.extend_from_slice(s.rows_flat());
                flat.extend_from_slice(v);
                let candidate = Subspace::from_rows(&self.field, n, &flat);
                debug_assert_eq!(candidate.dim(), a);
                seen.insert(candidate);
            });
        }
        let mut list: Vec<Subspace> = seen.into_iter().collect();
        list.sort_unstable();
        if let Some(dir) = &self.disk_cache {
            crate::codec::store_enumeration(dir, self, a, &list);
        }
        list
    }

    /// Position of a subspace in the canonical enumeration of its dimension.
    pub fn index_of(&self, sub: &Subspace) -> Result<Option<usize>, GeometryError> {
        let list = self.enumerate_isotropic(sub.dim())?;
        Ok(list.binary_search(sub).ok())
    }

    /// Number of totally isotropic b-spaces containing a fixed totally
    /// isotropic a-space: `[d−a choose b−a]_q · Π_{i=1}^{b−a} (q^{d−a+e−i}+1)`.
    /// Totals are the a = 0 case; `a = b` counts the space itself.
    pub fn count_subspaces(&self, a: u16, b: u16) -> Result<BigInt, GeometryError> {
        assert!(a <= b, "count_subspaces needs a ≤ b (through = containing)");
        if b > self.d {
            return Err(GeometryError::RankExceeded { a: b, d: self.d });
        }
        if self.e2 % 2 != 0 && self.sqrt_q().is_none() {
            return Err(GeometryError::NeedSquareField { q: self.field.order() });
        }
        let (da, ba) = ((self.d - a) as i64, (b - a) as i64);
        let binom = gaussian_binomial(da, ba, self.q());
        let prod = prod_qpow_plus_one(self.q(), self.sqrt_q(), 1, ba, -2, 2 * da + self.e2);
        let total = prod * num_rational::BigRational::from_integer(binom);
        Ok(rational_to_int(&total).expect("subspace counts are integers"))
    }
}

/// Witt index of a non-degenerate form: grow one maximal chain greedily.
fn witt_index(field: &FieldSpec, form: &FormSpec) -> u16 {
    let n = form.ambient();
    let nu = n as usize;
    let mut s = Subspace::zero(n);
    loop {
        let tangent = if s.is_zero() {
            Subspace::identity(n)
        } else {
            let mut functionals = Vec::with_capacity(s.dim() as usize * nu);
            for row in s.iter_rows() {
                functionals.extend_from_slice(&form.pairing_functional(field, row));
            }
            nullspace(field, &functionals, n)
        };
        let mut extension: Option<Vec<u8>> = None;
        for_each_projective_vector(field, tangent.rows_flat(), nu, |v| {
            if extension.is_none()
                && form.is_singular_vector(field, v)
                && !s.contains_vector(field, v)
            {
                extension = Some(v.to_vec());
            }
        });
        match extension {
            Some(v) => {
                let mut flat = s.rows_flat().to_vec();
                flat.extend_from_slice(&v);
                s = Subspace::from_rows(field, n, &flat);
            }
            None => return s.dim(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(name: &str) -> PolarSpace {
        parse_space(name).unwrap()
    }

    #[test]
    fn table_of_ranks_and_parameters() {
        let cases = [
            ("Q+:5:2", 3, 0),
            ("Q:4:3", 2, 2),
            ("Q-:5:2", 2, 4),
            ("W:3:3", 2, 2),
            ("H:3:4", 2, 1),
            ("H:4:4", 2, 3),
        ];
        for (name, d, e2) in cases {
            let s = space(name);
            assert_eq!((s.rank(), s.e2()), (d, e2), "{name}");
            assert_eq!(s.name(), name);
        }
    }

    #[test]
    fn small_enumerations_match_counts() {
        for name in ["Q+:5:2", "Q:4:2", "Q:4:3", "W:3:2", "Q-:5:2", "H:3:4"] {
            let s = space(name);
            for a in 0..=s.rank() {
                let listed = s.enumerate_isotropic(a).unwrap().len();
                let counted = s.count_subspaces(0, a).unwrap();
                assert_eq!(BigInt::from(listed), counted, "{name} a={a}");
            }
        }
    }

    #[test]
    fn known_small_counts() {
        assert_eq!(space("Q+:5:2").enumerate_isotropic(3).unwrap().len(), 30);
        assert_eq!(space("Q:4:2").enumerate_isotropic(1).unwrap().len(), 15);
        assert_eq!(space("W:3:2").enumerate_isotropic(2).unwrap().len(), 15);
        assert_eq!(space("Q:4:3").enumerate_isotropic(1).unwrap().len(), 40);
    }

    #[test]
    fn generators_of_hyperbolic_space_are_self_perp() {
        let s = space("Q+:5:2");
        for g in s.enumerate_isotropic(3).unwrap() {
            let t = s.tangent_space(g).unwrap();
            assert_eq!(&t, g);
        }
    }

    #[test]
    fn tangent_dimensions_and_inclusion_reversal() {
        let s = space("Q:4:2");
        let points = s.enumerate_isotropic(1).unwrap();
        let lines = s.enumerate_isotropic(2).unwrap();
        for line in lines.iter().take(5) {
            let tl = s.tangent_space(line).unwrap();
            assert_eq!(tl.dim(), s.ambient() - 2);
            for p in points.iter().filter(|p| line.contains(s.field(), p)) {
                let tp = s.tangent_space(p).unwrap();
                assert_eq!(tp.dim(), s.ambient() - 1);
                assert!(tp.contains(s.field(), &tl), "P ⊆ L must give L^⊥ ⊆ P^⊥");
            }
        }
    }

    #[test]
    fn evaluate_reports_violations() {
        let s = space("Q+:5:2");
        let good = Subspace::from_vectors(s.field(), 6, &[vec![1, 0, 0, 0, 0, 0]]);
        assert!(s.evaluate(&good).unwrap().totally_isotropic);
        let bad = Subspace::from_vectors(s.field(), 6, &[vec![1, 1, 0, 0, 0, 0]]);
        let rep = s.evaluate(&bad).unwrap();
        assert_eq!(rep.violation, Some((0, 0, 1)));
        let zero = Subspace::zero(6);
        assert!(s.evaluate(&zero).unwrap().totally_isotropic);
    }

    #[test]
    fn counting_through_a_fixed_subspace() {
        let s = space("Q+:5:2");
        let points = s.enumerate_isotropic(1).unwrap();
        let generators = s.enumerate_isotropic(3).unwrap();
        let through = s.count_subspaces(1, 3).unwrap();
        for p in points.iter().step_by(7) {
            let observed = generators.iter().filter(|g| g.contains(s.field(), p)).count();
            assert_eq!(BigInt::from(observed), through);
        }
        assert_eq!(s.count_subspaces(2, 2).unwrap(), BigInt::from(1));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_space("X:5:2"), Err(GeometryError::BadSpaceName(_))));
        assert!(matches!(parse_space("Q+:5"), Err(GeometryError::BadSpaceName(_))));
        assert!(matches!(parse_space("Q+:4:2"), Err(GeometryError::IllegalCombination { .. })));
        assert!(matches!(parse_space("H:3:3"), Err(GeometryError::NeedSquareField { q: 3 })));
        assert!(matches!(
            space("Q:4:2").enumerate_isotropic(3),
            Err(GeometryError::RankExceeded { a: 3, d: 2 })
        ));
    }

    #[test]
    fn projective_visitor_counts_points() {
        let f = field_of_order(3).unwrap();
        let basis = Subspace::identity(4);
        let mut count = 0usize;
        for_each_projective_vector(&f, basis.rows_flat(), 4, |_| count += 1);
        assert_eq!(count, 40); // (3⁴−1)/2
    }
}
