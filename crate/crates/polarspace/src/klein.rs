//! The Klein correspondence for odd q: lines of PG(3,q) map bijectively to
//! the points of the rank-3 hyperbolic quadric via Plücker coordinates, and
//! the two families of generator planes ("latin" ↔ points of PG(3,q),
//! "greek" ↔ planes of PG(3,q)) inherit a classification relative to a fixed
//! hyperbolic quadric Q: X₀X₁ + X₂X₃ = 0 in PG(3,q).
//!
//! Lines fall into five classes by their intersection with Q (tangent with
//! square or non-square off-contact values, secant, external, contained),
//! and generator planes into six (family × {square, non-square, tangent}).
//! The class-vs-class incidence counts form a 5×6 tactical matrix whose
//! exact shape depends only on q mod 4; unions of generator classes give
//! the derived generator sets this module constructs.

use crate::geometry::{
    for_each_projective_vector, nullspace, FormKind, FormSpec, GeometryError, PolarSpace,
    Subspace,
};
use crate::gf::{FieldError, FieldSpec};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KleinError {
    #[error("the square/non-square classification needs odd q, got {q}")]
    EvenCharacteristic { q: u16 },
    #[error("incidence counts are not tactical: line class {line_class:?}, column {column}: first line gave {expected}, another gave {got}")]
    NotTactical { line_class: LineClass, column: usize, expected: u64, got: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Class of a line of PG(3,q) relative to the quadric Q. Tangent lines are
/// split by the square class of the (constant) value class of Q off the
/// contact point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineClass {
    TangentSquare,
    TangentNonsquare,
    Secant,
    External,
    OnQuadric,
}

impl LineClass {
    pub const ALL: [LineClass; 5] = [
        LineClass::TangentSquare,
        LineClass::TangentNonsquare,
        LineClass::Secant,
        LineClass::External,
        LineClass::OnQuadric,
    ];

    pub fn index(self) -> usize {
        match self {
            LineClass::TangentSquare => 0,
            LineClass::TangentNonsquare => 1,
            LineClass::Secant => 2,
            LineClass::External => 3,
            LineClass::OnQuadric => 4,
        }
    }
}

/// Column order of the tactical matrix: interleaved families,
/// [square latin, square greek, non-square latin, non-square greek,
///  tangent latin, tangent greek].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneClass {
    SquareLatin,
    SquareGreek,
    NonsquareLatin,
    NonsquareGreek,
    TangentLatin,
    TangentGreek,
}

impl PlaneClass {
    pub fn column(self) -> usize {
        match self {
            PlaneClass::SquareLatin => 0,
            PlaneClass::SquareGreek => 1,
            PlaneClass::NonsquareLatin => 2,
            PlaneClass::NonsquareGreek => 3,
            PlaneClass::TangentLatin => 4,
            PlaneClass::TangentGreek => 5,
        }
    }
}

/// The three derived generator sets: the two square-class sets of
/// parameter q(q−1)/2, and the tangent-class set of parameter q+1, which
/// decomposes into q+1 pencils with vertices on a conic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KleinSetKind {
    Squares,
    Nonsquares,
    Conics,
}

impl KleinSetKind {
    pub fn name(self) -> &'static str {
        match self {
            KleinSetKind::Squares => "squares",
            KleinSetKind::Nonsquares => "nonsquares",
            KleinSetKind::Conics => "conics",
        }
    }
}

/// Which family a generator of the target quadric belongs to, together
/// with the witness recovered from the line preimages: latin generators
/// collect the lines through a vertex, greek generators the lines inside
/// a plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorFamily {
    Latin { vertex: Subspace },
    Greek { plane: Subspace },
}

pub type TacticalMatrix = [[u64; 6]; 5];

pub struct KleinContext {
    field: FieldSpec,
    quadric: FormSpec,
    /// The rank-3 hyperbolic polar space receiving the Plücker images.
    pub target: PolarSpace,
    lines: Vec<Subspace>,
}

/// All projective points (as 1-spaces) of the full space F_q^n.
fn projective_points(field: &FieldSpec, n: u16) -> Vec<Subspace> {
    let identity = Subspace::identity(n);
    let mut out = Vec::new();
    for_each_projective_vector(field, identity.rows_flat(), n as usize, |v| {
        out.push(Subspace::from_vectors(field, n, &[v.to_vec()]));
    });
    out.sort_unstable();
    out
}

impl KleinContext {
    pub fn new(q: u16) -> Result<KleinContext, KleinError> {
        let field = crate::gf::field_of_order(q)?;
        if field.char_p() == 2 {
            return Err(KleinError::EvenCharacteristic { q });
        }
        let quadric = FormSpec::standard(FormKind::Hyperbolic, 4, &field)?;
        let target = crate::geometry::standard_polar_space(FormKind::Hyperbolic, 5, q)?;

        // Every line of PG(3,q): spans of point pairs, deduplicated.
        let points = projective_points(&field, 4);
        let mut seen = std::collections::HashSet::new();
        for (i, p) in points.iter().enumerate() {
            for r in points.iter().skip(i + 1) {
                let mut flat = p.rows_flat().to_vec();
                flat.extend_from_slice(r.rows_flat());
                let line = Subspace::from_rows(&field, 4, &flat);
                debug_assert_eq!(line.dim(), 2);
                seen.insert(line);
            }
        }
        let mut lines: Vec<Subspace> = seen.into_iter().collect();
        lines.sort_unstable();
        Ok(KleinContext { field, quadric, target, lines })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    /// Route the target space's enumerations through a disk cache.
    pub fn with_disk_cache(mut self, dir: std::path::PathBuf) -> Self {
        self.target = self.target.with_disk_cache(dir);
        self
    }

    /// Plücker image of a line: with p_ij the 2×2 minors of a spanning pair,
    /// the coordinates (p₀₁, p₂₃, p₀₂, −p₁₃, p₀₃, p₁₂) satisfy the standard
    /// hyperbolic equation Y₀Y₁ + Y₂Y₃ + Y₄Y₅ = 0.
    pub fn plucker(&self, line: &Subspace) -> Subspace {
        assert_eq!(line.dim(), 2, "Plücker coordinates take a line");
        let f = &self.field;
        let x = line.row(0);
        let y = line.row(1);
        let minor = |i: usize, j: usize| f.sub(f.mul(x[i], y[j]), f.mul(x[j], y[i]));
        let v = vec![
            minor(0, 1),
            minor(2, 3),
            minor(0, 2),
            f.neg(minor(1, 3)),
            minor(0, 3),
            minor(1, 2),
        ];
        let image = Subspace::from_vectors(f, 6, &[v]);
        debug_assert!(self.target.evaluate(&image).unwrap().totally_isotropic);
        image
    }

    /// Inverse of the Plücker map: rebuild the antisymmetric rank-2 matrix
    /// (M = x·yᵀ − y·xᵀ has entries M_ij = p_ij) and take its row space.
    pub fn line_from_point(&self, point: &Subspace) -> Subspace {
        assert_eq!(point.dim(), 1);
        let f = &self.field;
        let v = point.row(0);
        let (p01, p23, p02, p13, p03, p12) = (v[0], v[1], v[2], f.neg(v[3]), v[4], v[5]);
        let mut m = vec![0u8; 16];
        let pairs = [(0usize, 1usize, p01), (0, 2, p02), (0, 3, p03), (1, 2, p12), (1, 3, p13), (2, 3, p23)];
        for (i, j, p) in pairs {
            m[i * 4 + j] = p;
            m[j * 4 + i] = f.neg(p);
        }
        let line = Subspace::from_rows(f, 4, &m);
        debug_assert_eq!(line.dim(), 2, "Plücker points come from genuine lines");
        line
    }

    fn square_class_split(&self, value: u8) -> PlaneClass {
        // Latin-side split; the greek side is mapped by the caller.
        if value == 0 {
            PlaneClass::TangentLatin
        } else if self.field.is_square(value) {
            PlaneClass::SquareLatin
        } else {
            PlaneClass::NonsquareLatin
        }
    }

    /// Class of the latin generator attached to a point of PG(3,q): the
    /// square class of Q at the point.
    pub fn latin_class(&self, point: &Subspace) -> PlaneClass {
        assert_eq!(point.dim(), 1);
        self.square_class_split(self.quadric.eval_quadratic(&self.field, point.row(0)))
    }

    /// Class of the greek generator attached to a plane of PG(3,q): the
    /// square class of Q at the pole of the plane. The polarization of
    /// X₀X₁ + X₂X₃ swaps the coordinate pairs and is its own inverse, so the
    /// pole of the plane {x : c·x = 0} is (c₁, c₀, c₃, c₂).
    pub fn greek_class(&self, plane: &Subspace) -> PlaneClass {
        assert_eq!(plane.dim(), 3);
        let c = nullspace(&self.field, plane.rows_flat(), 4);
        debug_assert_eq!(c.dim(), 1);
        let w = c.row(0);
        let pole = [w[1], w[0], w[3], w[2]];
        match self.square_class_split(self.quadric.eval_quadratic(&self.field, &pole)) {
            PlaneClass::SquareLatin => PlaneClass::SquareGreek,
            PlaneClass::NonsquareLatin => PlaneClass::NonsquareGreek,
            PlaneClass::TangentLatin => PlaneClass::TangentGreek,
            _ => unreachable!(),
        }
    }

    /// Class of a line by its intersection with the quadric.
    pub fn line_class(&self, line: &Subspace) -> LineClass {
        let mut zeros = 0u64;
        let mut sample_nonzero = 0u8;
        for_each_projective_vector(&self.field, line.rows_flat(), 4, |v| {
            let val = self.quadric.eval_quadratic(&self.field, v);
            if val == 0 {
                zeros += 1;
            } else {
                sample_nonzero = val;
            }
        });
        let q = self.field.order() as u64;
        match zeros {
            0 => LineClass::External,
            2 => LineClass::Secant,
            1 => {
                if self.field.is_square(sample_nonzero) {
                    LineClass::TangentSquare
                } else {
                    LineClass::TangentNonsquare
                }
            }
            z if z == q + 1 => LineClass::OnQuadric,
            z => unreachable!("a line meets a quadric in 0, 1, 2, or q+1 points, got {z}"),
        }
    }

    /// The 5×6 incidence matrix: entry (r, c) is the number of latin/greek
    /// planes of class c through a line of class r (q+1 points on the line
    /// on the latin side, q+1 planes through it on the greek side). Errors
    /// if the counts fail to be constant on a class.
    pub fn tactical_matrix(&self) -> Result<TacticalMatrix, KleinError> {
        let mut rows: [Option<[u64; 6]>; 5] = [None; 5];
        for line in &self.lines {
            let mut counts = [0u64; 6];
            for_each_projective_vector(&self.field, line.rows_flat(), 4, |v| {
                let val = self.quadric.eval_quadratic(&self.field, v);
                counts[self.square_class_split(val).column()] += 1;
            });
            let functionals = nullspace(&self.field, line.rows_flat(), 4);
            debug_assert_eq!(functionals.dim(), 2);
            for_each_projective_vector(&self.field, functionals.rows_flat(), 4, |w| {
                let pole = [w[1], w[0], w[3], w[2]];
                let val = self.quadric.eval_quadratic(&self.field, &pole);
                let col = match self.square_class_split(val) {
                    PlaneClass::SquareLatin => PlaneClass::SquareGreek,
                    PlaneClass::NonsquareLatin => PlaneClass::NonsquareGreek,
                    _ => PlaneClass::TangentGreek,
                };
                counts[col.column()] += 1;
            });
            let class = self.line_class(line);
            match &rows[class.index()] {
                None => rows[class.index()] = Some(counts),
                Some(expected) => {
                    if expected != &counts {
                        let column = (0..6).find(|&c| expected[c] != counts[c]).unwrap();
                        return Err(KleinError::NotTactical {
                            line_class: class,
                            column,
                            expected: expected[column],
                            got: counts[column],
                        });
                    }
                }
            }
        }
        Ok(std::array::from_fn(|r| rows[r].expect("all five line classes occur for odd q ≥ 3")))
    }

    /// The latin generator attached to a point P of PG(3,q): the span of the
    /// Plücker images of the lines through P.
    pub fn latin_plane(&self, point: &Subspace) -> Subspace {
        assert_eq!(point.dim(), 1);
        let mut flat: Vec<u8> = Vec::new();
        let mut current = Subspace::zero(6);
        let identity = Subspace::identity(4);
        let mut done = false;
        for_each_projective_vector(&self.field, identity.rows_flat(), 4, |v| {
            if done || point.contains_vector(&self.field, v) {
                return;
            }
            let mut rows = point.rows_flat().to_vec();
            rows.extend_from_slice(v);
            let line = Subspace::from_rows(&self.field, 4, &rows);
            let image = self.plucker(&line);
            if !current.contains(&self.field, &image) {
                flat.extend_from_slice(image.rows_flat());
                current = Subspace::from_rows(&self.field, 6, &flat);
                if current.dim() == 3 {
                    done = true;
                }
            }
        });
        assert_eq!(current.dim(), 3, "the lines through a point span a generator");
        debug_assert!(self.target.evaluate(&current).unwrap().totally_isotropic);
        current
    }

    /// The greek generator attached to a plane of PG(3,q): the span of the
    /// Plücker images of the lines inside the plane.
    pub fn greek_plane(&self, plane: &Subspace) -> Subspace {
        assert_eq!(plane.dim(), 3);
        let mut flat: Vec<u8> = Vec::new();
        let mut current = Subspace::zero(6);
        let b: Vec<&[u8]> = (0..3).map(|i| plane.row(i)).collect();
        let f = &self.field;
        let mut candidates: Vec<Vec<u8>> = Vec::new();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let mut rows = b[i].to_vec();
                rows.extend_from_slice(b[j]);
                candidates.push(rows);
            }
        }
        // One extra line in case three concurrent images are dependent.
        let mut extra = b[0].to_vec();
        let sum: Vec<u8> = (0..4).map(|t| f.add(b[1][t], b[2][t])).collect();
        extra.extend_from_slice(&sum);
        candidates.push(extra);
        for rows in candidates {
            let line = Subspace::from_rows(f, 4, &rows);
            let image = self.plucker(&line);
            if !current.contains(f, &image) {
                flat.extend_from_slice(image.rows_flat());
                current = Subspace::from_rows(f, 6, &flat);
                if current.dim() == 3 {
                    break;
                }
            }
        }
        assert_eq!(current.dim(), 3, "the lines of a plane span a generator");
        debug_assert!(self.target.evaluate(&current).unwrap().totally_isotropic);
        current
    }

    /// Construct one of the derived generator sets as sorted indices into
    /// the canonical enumeration of the target's generators. The pairing of
    /// latin and greek square classes flips with q mod 4, matching the
    /// tactical matrix.
    pub fn derived_set(&self, kind: KleinSetKind) -> Result<Vec<usize>, KleinError> {
        let q = self.field.order() as u64;
        let square_pairs_with_square = q % 4 == 1;
        let (latin_want, greek_want) = match kind {
            KleinSetKind::Squares => (
                PlaneClass::SquareLatin,
                if square_pairs_with_square { PlaneClass::SquareGreek } else { PlaneClass::NonsquareGreek },
            ),
            KleinSetKind::Nonsquares => (
                PlaneClass::NonsquareLatin,
                if square_pairs_with_square { PlaneClass::NonsquareGreek } else { PlaneClass::SquareGreek },
            ),
            KleinSetKind::Conics => (PlaneClass::TangentLatin, PlaneClass::TangentGreek),
        };
        let mut indices = Vec::new();
        for point in projective_points(&self.field, 4) {
            if self.latin_class(&point) == latin_want {
                let gen = self.latin_plane(&point);
                indices.push(self.target.index_of(&gen)?.expect("latin planes are generators"));
            }
        }
        // Planes of PG(3,q) as kernels of projective functionals.
        let identity = Subspace::identity(4);
        let mut functionals = Vec::new();
        for_each_projective_vector(&self.field, identity.rows_flat(), 4, |w| {
            functionals.push(w.to_vec());
        });
        for w in functionals {
            let plane = nullspace(&self.field, &w, 4);
            if self.greek_class(&plane) == greek_want {
                let gen = self.greek_plane(&plane);
                indices.push(self.target.index_of(&gen)?.expect("greek planes are generators"));
            }
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(indices)
    }

    /// Package a derived set as an interchange set of generators of the
    /// target space.
    pub fn build_cl_set(&self, kind: KleinSetKind) -> Result<crate::sets::SubspaceSet, KleinError> {
        let q = self.field.order() as u64;
        let indices = self.derived_set(kind)?;
        let x = match kind {
            KleinSetKind::Squares | KleinSetKind::Nonsquares => q * (q - 1) / 2,
            KleinSetKind::Conics => q + 1,
        };
        let label = format!("Klein {} set; parameter {x}", kind.name());
        Ok(crate::sets::SubspaceSet::from_indices(&self.target, 3, &indices, Some(label)))
    }

    /// Classify a point of the target quadric by pulling its line of
    /// PG(3,q) back through the correspondence.
    pub fn classify_point(&self, point: &Subspace) -> LineClass {
        self.line_class(&self.line_from_point(point))
    }

    /// Decide the family of a target generator from its line preimages:
    /// the preimages of three independent points either all pass through
    /// one vertex (latin) or all lie in one plane (greek).  Three
    /// independent points never pull back to a pencil, so exactly one of
    /// the two happens.
    pub fn classify_generator(&self, gen: &Subspace) -> GeneratorFamily {
        assert_eq!(gen.dim(), 3, "generators of the target are 3-spaces");
        let f = &self.field;
        let pulled: Vec<Subspace> = (0..3)
            .map(|i| self.line_from_point(&Subspace::from_vectors(f, 6, &[gen.row(i).to_vec()])))
            .collect();
        let meet = pulled[0]
            .intersect(f, &pulled[1])
            .expect("lines live in the same space");
        if meet.dim() == 1 && pulled[2].contains(f, &meet) {
            return GeneratorFamily::Latin { vertex: meet };
        }
        let plane = pulled[0].span(f, &pulled[1]).expect("lines live in the same space");
        debug_assert_eq!(plane.dim(), 3);
        debug_assert!(plane.contains(f, &pulled[2]));
        GeneratorFamily::Greek { plane }
    }

    /// The polar line ℓ^⊥ of a line of PG(3,q) under the polarity of Q.
    pub fn perp_line(&self, line: &Subspace) -> Subspace {
        assert_eq!(line.dim(), 2);
        let mut functionals = self.quadric.pairing_functional(&self.field, line.row(0));
        functionals.extend(self.quadric.pairing_functional(&self.field, line.row(1)));
        let perp = nullspace(&self.field, &functionals, 4);
        debug_assert_eq!(perp.dim(), 2);
        perp
    }

    /// The two reguli of lines contained in Q: lines of one regulus are
    /// pairwise skew, lines of opposite reguli meet in a point.
    pub fn quadric_reguli(&self) -> (Vec<Subspace>, Vec<Subspace>) {
        let on_quadric: Vec<&Subspace> = self
            .lines
            .iter()
            .filter(|l| self.line_class(l) == LineClass::OnQuadric)
            .collect();
        let first = on_quadric.first().expect("a hyperbolic quadric carries lines");
        let mut a = Vec::new();
        let mut b = Vec::new();
        for line in &on_quadric {
            let meet = line.intersect(&self.field, first).expect("same ambient space");
            if meet.dim() == 0 || meet.dim() == 2 {
                a.push((*line).clone());
            } else {
                b.push((*line).clone());
            }
        }
        (a, b)
    }
}

/// The expected tactical matrix: one shape for q ≡ 1 (mod 4), one for
/// q ≡ 3 (mod 4); they differ only in how tangent-line classes pair with
/// greek square classes.
pub fn expected_tactical_matrix(q: u64) -> TacticalMatrix {
    assert!(q % 2 == 1);
    let h_minus = (q - 1) / 2;
    let h_plus = (q + 1) / 2;
    if q % 4 == 1 {
        [
            [q, q, 0, 0, 1, 1],
            [0, 0, q, q, 1, 1],
            [h_minus, h_minus, h_minus, h_minus, 2, 2],
            [h_plus, h_plus, h_plus, h_plus, 0, 0],
            [0, 0, 0, 0, q + 1, q + 1],
        ]
    } else {
        [
            [q, 0, 0, q, 1, 1],
            [0, q, q, 0, 1, 1],
            [h_minus, h_minus, h_minus, h_minus, 2, 2],
            [h_plus, h_plus, h_plus, h_plus, 0, 0],
            [0, 0, 0, 0, q + 1, q + 1],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_characteristic_is_rejected() {
        assert!(matches!(KleinContext::new(4), Err(KleinError::EvenCharacteristic { q: 4 })));
    }

    #[test]
    fn plucker_is_a_bijection_onto_the_quadric_points() {
        let ctx = KleinContext::new(3).unwrap();
        assert_eq!(ctx.lines().len(), 130);
        let mut images: Vec<Subspace> = ctx.lines().iter().map(|l| ctx.plucker(l)).collect();
        images.sort_unstable();
        images.dedup();
        assert_eq!(images.len(), 130);
        assert_eq!(ctx.target.enumerate_isotropic(1).unwrap().len(), 130);
        for (line, image) in ctx.lines().iter().zip(ctx.lines().iter().map(|l| ctx.plucker(l))) {
            assert_eq!(&ctx.line_from_point(&image), line);
        }
    }

    #[test]
    fn tactical_matrix_at_q3() {
        let ctx = KleinContext::new(3).unwrap();
        assert_eq!(ctx.tactical_matrix().unwrap(), expected_tactical_matrix(3));
    }

    #[test]
    fn latin_and_greek_planes_cover_all_generators() {
        let ctx = KleinContext::new(3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for p in projective_points(ctx.field(), 4) {
            seen.insert(ctx.latin_plane(&p));
        }
        assert_eq!(seen.len(), 40, "one latin generator per point");
        let identity = Subspace::identity(4);
        let mut functionals = Vec::new();
        for_each_projective_vector(ctx.field(), identity.rows_flat(), 4, |w| {
            functionals.push(w.to_vec());
        });
        for w in functionals {
            let plane = nullspace(ctx.field(), &w, 4);
            seen.insert(ctx.greek_plane(&plane));
        }
        assert_eq!(seen.len(), 80, "latin and greek families are disjoint and cover");
        assert_eq!(ctx.target.enumerate_isotropic(3).unwrap().len(), 80);
    }

    #[test]
    fn derived_set_sizes_at_q3() {
        let ctx = KleinContext::new(3).unwrap();
        let squares = ctx.derived_set(KleinSetKind::Squares).unwrap();
        let nonsquares = ctx.derived_set(KleinSetKind::Nonsquares).unwrap();
        let conics = ctx.derived_set(KleinSetKind::Conics).unwrap();
        assert_eq!(squares.len(), 24);
        assert_eq!(nonsquares.len(), 24);
        assert_eq!(conics.len(), 32);
        // The three sets and the two split classes are pairwise disjoint.
        let mut all: Vec<usize> = squares.iter().chain(&nonsquares).chain(&conics).copied().collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 80);
    }

    #[test]
    fn polarity_swaps_tangent_classes_when_q_is_3_mod_4() {
        let ctx = KleinContext::new(3).unwrap();
        for line in ctx.lines() {
            let perp = ctx.perp_line(line);
            assert_eq!(ctx.perp_line(&perp), *line, "the polarity is an involution");
            let before = ctx.line_class(line);
            let expected = match before {
                LineClass::TangentSquare => LineClass::TangentNonsquare,
                LineClass::TangentNonsquare => LineClass::TangentSquare,
                other => other,
            };
            assert_eq!(ctx.line_class(&perp), expected);
            if before == LineClass::OnQuadric {
                assert_eq!(perp, *line, "totally singular lines are self-polar");
            }
        }
    }

    #[test]
    fn polarity_preserves_tangent_classes_when_q_is_1_mod_4() {
        let ctx = KleinContext::new(5).unwrap();
        for line in ctx.lines() {
            assert_eq!(ctx.line_class(&ctx.perp_line(line)), ctx.line_class(line));
        }
    }

    #[test]
    fn reguli_map_to_conics_spanning_mutually_polar_planes() {
        for q in [3u16, 5] {
            let ctx = KleinContext::new(q).unwrap();
            let (ra, rb) = ctx.quadric_reguli();
            assert_eq!(ra.len(), q as usize + 1);
            assert_eq!(rb.len(), q as usize + 1);
            for (this, other) in [(&ra, &rb), (&rb, &ra)] {
                let images: Vec<Vec<u8>> =
                    this.iter().map(|l| ctx.plucker(l).row(0).to_vec()).collect();
                // Any three of the q + 1 image points are independent: the
                // image is a conic, not a line or a degenerate batch.
                for i in 0..images.len() {
                    for j in i + 1..images.len() {
                        for k in j + 1..images.len() {
                            let triple = Subspace::from_vectors(
                                ctx.field(),
                                6,
                                &[images[i].clone(), images[j].clone(), images[k].clone()],
                            );
                            assert_eq!(triple.dim(), 3, "three conic points are independent");
                        }
                    }
                }
                let span = Subspace::from_vectors(ctx.field(), 6, &images);
                assert_eq!(span.dim(), 3, "a regulus image lies in a plane");
                let other_images: Vec<Vec<u8>> =
                    other.iter().map(|l| ctx.plucker(l).row(0).to_vec()).collect();
                let other_span = Subspace::from_vectors(ctx.field(), 6, &other_images);
                assert_eq!(
                    ctx.target.perp(&span).unwrap(),
                    other_span,
                    "the two conic planes are mutually polar"
                );
            }
        }
    }

    #[test]
    fn conics_set_decomposes_into_pencils_over_a_regulus_image() {
        let ctx = KleinContext::new(3).unwrap();
        let set = ctx.build_cl_set(KleinSetKind::Conics).unwrap();
        assert_eq!(set.len(), 32);
        let verts = crate::sets::pencil_decomposition(&ctx.target, &set)
            .unwrap()
            .expect("the conics set splits into point-pencils");
        assert_eq!(verts.len(), 4, "q + 1 pencils");
        let points = ctx.target.enumerate_isotropic(1).unwrap();
        let vert_points: std::collections::BTreeSet<Subspace> =
            verts.iter().map(|&v| points[v].clone()).collect();
        let (ra, rb) = ctx.quadric_reguli();
        let image = |r: &[Subspace]| -> std::collections::BTreeSet<Subspace> {
            r.iter().map(|l| ctx.plucker(l)).collect()
        };
        assert!(
            vert_points == image(&ra) || vert_points == image(&rb),
            "the pencil vertices are the image of one regulus"
        );
    }

    #[test]
    fn square_sets_contain_no_pencil_and_generators_classify_back() {
        let ctx = KleinContext::new(3).unwrap();
        for kind in [KleinSetKind::Squares, KleinSetKind::Nonsquares] {
            let set = ctx.build_cl_set(kind).unwrap();
            assert_eq!(
                crate::sets::contains_point_pencil(&ctx.target, &set).unwrap(),
                None,
                "square-type sets contain no full point-pencil"
            );
        }
        for p in projective_points(ctx.field(), 4) {
            match ctx.classify_generator(&ctx.latin_plane(&p)) {
                GeneratorFamily::Latin { vertex } => assert_eq!(vertex, p),
                GeneratorFamily::Greek { .. } => panic!("latin generator misclassified"),
            }
        }
        let identity = Subspace::identity(4);
        let mut functionals = Vec::new();
        for_each_projective_vector(ctx.field(), identity.rows_flat(), 4, |w| {
            functionals.push(w.to_vec());
        });
        for w in functionals {
            let plane = nullspace(ctx.field(), &w, 4);
            match ctx.classify_generator(&ctx.greek_plane(&plane)) {
                GeneratorFamily::Greek { plane: found } => assert_eq!(found, plane),
                GeneratorFamily::Latin { .. } => panic!("greek generator misclassified"),
            }
        }
    }

    #[test]
    fn point_classification_matches_the_line_classes() {
        let ctx = KleinContext::new(3).unwrap();
        for line in ctx.lines() {
            assert_eq!(ctx.classify_point(&ctx.plucker(line)), ctx.line_class(line));
        }
    }
}
