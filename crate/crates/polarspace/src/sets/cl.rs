//! Degree-one and Cameron–Liebler sets of generators: three verification
//! engines (intersection counts, inclusion-matrix image, opposition-matrix
//! eigenvector), point-pencil probes, the trivial and lifted constructions,
//! and parameter-composing set algebra.

use super::{CLReport, SetError, SubspaceSet};
use crate::exactlin::BigMatrix;
use crate::geometry::{
    find_section, lift_conditions, section, similitude, standard_polar_space, subspaces_within,
    FormKind, PolarSpace, Subspace,
};
use crate::qnum::{binom2, gaussian_binomial, pow_half, prod_qpow_plus_one, rational_to_int};
use crate::scheme::{inclusion_matrix, member_class_counts, opposition_matrix, PairClass};
use crate::spectra::{mu_general, SpaceParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use std::collections::BTreeMap;
use std::collections::HashSet;

fn rat(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

/// Which verification engine to run, and what it certifies on success:
/// counts and image certify degree one, eigen certifies the (weaker)
/// Cameron–Liebler property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClMethod {
    /// Compare, for every generator π, the number of members meeting π in a
    /// (d−i)-space against the two-case closed formula.
    Counts { i: u16 },
    /// Exact rank test: the characteristic vector lies in the image of the
    /// point-to-generator inclusion matrix.
    Image,
    /// Exact eigenvector test against the opposition matrix.
    Eigen,
}

/// The parameter x = |L| / Π_{i=0}^{d−2}(q^{e+i}+1) of a set of generators.
/// `Err` reports a non-integral parameter, which already falsifies the set.
fn parameter(space: &PolarSpace, size: u64) -> Result<(BigRational, BigInt), SetError> {
    let d = space.rank() as i64;
    let denom = prod_qpow_plus_one(space.q(), space.sqrt_q(), 0, d - 2, 2, space.e2());
    let x = rat(BigInt::from(size)) / denom;
    match rational_to_int(&x) {
        Some(int) => Ok((x, int)),
        None => Err(SetError::NotIntegerParameter { size, x: x.to_string() }),
    }
}

/// Whether intersection counts with this i are a sufficient certificate of
/// degree one in this space: always for i = 1; hyperbolic spaces need i
/// odd; parabolic and symplectic spaces of odd rank need i ≠ d.
fn counts_certify(space: &PolarSpace, i: u16) -> bool {
    let d = space.rank();
    if i == 0 || i > d {
        return false;
    }
    match space.form().kind() {
        FormKind::Hyperbolic => i % 2 == 1,
        FormKind::Parabolic | FormKind::Symplectic => d % 2 == 0 || i != d,
        _ => true,
    }
}

/// Verify a set of generators as degree-one (counts, image) or
/// Cameron–Liebler (eigen).  Every engine is exact; the report records the
/// parameter, the verdict, and the triviality probes.
pub fn verify_cl(space: &PolarSpace, s: &SubspaceSet, method: ClMethod) -> Result<CLReport, SetError> {
    let d = space.rank();
    if s.dim != d {
        return Err(SetError::WrongDimension { expected: d, got: s.dim });
    }
    s.resolve(space)?;
    let size = s.len() as u64;
    let (x, x_int) = parameter(space, size)?;
    let p = SpaceParams::from(space);
    let q = space.q();

    let mut member_histogram = BTreeMap::new();
    let mut nonmember_histogram = BTreeMap::new();
    let (method_name, certifies, i_used, verified) = match method {
        ClMethod::Counts { i } => {
            if !counts_certify(space, i) {
                return Err(SetError::MethodRestriction { i, space: space.name() });
            }
            let ii = i as i64;
            let (classes, counts) = member_class_counts(space, d, &s.members)?;
            let pos = classes
                .iter()
                .position(|c| *c == PairClass { s: d - i, k: d })
                .expect("meeting a generator in a (d-i)-space is a legal class for 1 <= i <= d");
            // Common factor q^{C(i−1,2)+(i−1)e}; the member branch adds the
            // q^{i+e−1} [d−1 choose i] term.
            let common = pow_half(q, space.sqrt_q(), 2 * binom2(ii - 1) + (ii - 1) * p.e2);
            let member_expected = (rat(&x_int - BigInt::one())
                * rat(gaussian_binomial(p.d - 1, ii - 1, q))
                + pow_half(q, space.sqrt_q(), 2 * (ii - 1) + p.e2)
                    * rat(gaussian_binomial(p.d - 1, ii, q)))
                * common.clone();
            let nonmember_expected =
                rat(x_int.clone()) * rat(gaussian_binomial(p.d - 1, ii - 1, q)) * common;
            let mut ok = true;
            for (idx, row) in counts.iter().enumerate() {
                let got = row[pos];
                let (expected, histogram) = if s.contains_index(idx) {
                    (&member_expected, &mut member_histogram)
                } else {
                    (&nonmember_expected, &mut nonmember_histogram)
                };
                *histogram.entry(got).or_insert(0) += 1;
                ok &= &rat(BigInt::from(got)) == expected;
            }
            ("counts", "degree-one", Some(i), ok)
        }
        ClMethod::Image => {
            let incl = inclusion_matrix(space, 1, d)?;
            let (rows, cols) = (incl.rows, incl.cols);
            let aug = BigMatrix::from_fn(rows, cols + 1, |r, c| {
                if c < cols {
                    BigInt::from(u8::from(incl.entry(r, c)))
                } else {
                    BigInt::from(u8::from(s.contains_index(r)))
                }
            });
            let (rank_plain, rank_aug) = aug.echelon_ranks(cols);
            ("image", "degree-one", None, rank_plain == rank_aug)
        }
        ClMethod::Eigen => {
            let opp = opposition_matrix(space)?;
            let n_plus_one = rational_to_int(
                &(pow_half(q, space.sqrt_q(), p.e2 + 2 * (p.d - 1)) + BigRational::one()),
            )
            .expect("q^{e+d-1}+1 is an integer");
            let w: Vec<BigInt> = (0..opp.cols)
                .map(|idx| {
                    if s.contains_index(idx) { &n_plus_one - &x_int } else { -x_int.clone() }
                })
                .collect();
            let cw = opp.mul_vec_big(&w);
            let lambda = mu_general(p, p.d, (0, p.d), (1, 0));
            let ok = cw.iter().zip(&w).all(|(cwi, wi)| cwi == &(&lambda * wi));
            ("eigen", "cameron-liebler", None, ok)
        }
    };

    Ok(CLReport {
        space: space.name(),
        size,
        x: x.to_string(),
        x_integral: true,
        method: method_name.into(),
        certifies: certifies.into(),
        i: i_used,
        verified,
        member_histogram,
        nonmember_histogram,
        pencil_vertex: contains_point_pencil(space, s)?,
        pencil_decomposition: pencil_decomposition(space, s)?,
    })
}

/// Per-point tallies of how many members pass through each point, plus the
/// constant number of generators through any point.
fn point_tallies(space: &PolarSpace, s: &SubspaceSet) -> Result<(Vec<u64>, u64), SetError> {
    let d = space.rank();
    if s.dim != d {
        return Err(SetError::WrongDimension { expected: d, got: s.dim });
    }
    let members = s.resolve(space)?;
    let npoints = space.enumerate_isotropic(1)?.len();
    let mut tally = vec![0u64; npoints];
    for g in members {
        for point in subspaces_within(space.field(), g, 1) {
            let idx = space
                .index_of(&point)?
                .expect("points of a totally isotropic space are singular");
            tally[idx] += 1;
        }
    }
    let pencil_size = space
        .count_subspaces(1, d)?
        .to_u64()
        .expect("pencil size fits in u64 at desk scale");
    Ok((tally, pencil_size))
}

/// First point (in canonical order) whose full pencil of generators lies in
/// the set, or None.
pub fn contains_point_pencil(space: &PolarSpace, s: &SubspaceSet) -> Result<Option<usize>, SetError> {
    let (tally, pencil_size) = point_tallies(space, s)?;
    Ok(tally.iter().position(|&t| t == pencil_size))
}

/// Vertices of a partition of the set into full point-pencils, if the
/// probe finds one: the candidate vertices are the points whose whole
/// pencil lies in the set (there may be more candidates than a partition
/// uses), and a bounded exact-cover search looks for a sub-family of
/// pairwise disjoint pencils covering the set.  Best-effort: the search is
/// capped, so None means "none found", not a proof of indecomposability.
pub fn pencil_decomposition(
    space: &PolarSpace,
    s: &SubspaceSet,
) -> Result<Option<Vec<usize>>, SetError> {
    let (tally, pencil_size) = point_tallies(space, s)?;
    let vertices: Vec<usize> =
        (0..tally.len()).filter(|&idx| tally[idx] == pencil_size).collect();
    if s.is_empty() {
        return Ok(Some(Vec::new()));
    }
    if vertices.is_empty() || s.len() as u64 % pencil_size != 0 {
        return Ok(None);
    }
    // Pencils of the candidate vertices, as positions within the member list.
    let field = space.field();
    let points = space.enumerate_isotropic(1)?;
    let members = s.resolve(space)?;
    let pencils: Vec<Vec<usize>> = vertices
        .iter()
        .map(|&v| {
            (0..members.len())
                .filter(|&gm| members[gm].contains(field, &points[v]))
                .collect()
        })
        .collect();

    fn cover(
        pencils: &[Vec<usize>],
        covered: &mut [bool],
        uncovered: usize,
        chosen: &mut Vec<usize>,
        nodes: &mut u32,
    ) -> bool {
        if uncovered == 0 {
            return true;
        }
        *nodes += 1;
        if *nodes > 10_000 {
            return false;
        }
        let first = covered.iter().position(|&c| !c).unwrap();
        for (vi, pencil) in pencils.iter().enumerate() {
            if pencil.binary_search(&first).is_err()
                || pencil.iter().any(|&gm| covered[gm])
            {
                continue;
            }
            pencil.iter().for_each(|&gm| covered[gm] = true);
            chosen.push(vi);
            if cover(pencils, covered, uncovered - pencil.len(), chosen, nodes) {
                return true;
            }
            chosen.pop();
            pencil.iter().for_each(|&gm| covered[gm] = false);
        }
        false
    }

    let mut covered = vec![false; members.len()];
    let mut chosen = Vec::new();
    let mut nodes = 0;
    if cover(&pencils, &mut covered, members.len(), &mut chosen, &mut nodes) {
        let mut result: Vec<usize> = chosen.iter().map(|&vi| vertices[vi]).collect();
        result.sort_unstable();
        Ok(Some(result))
    } else {
        Ok(None)
    }
}

/// The two trivial degree-one constructions.
#[derive(Clone, Debug)]
pub enum TrivialKind {
    /// All generators through a given singular point; parameter 1.
    Pencil(Vec<u8>),
    /// All generators of an embedded same-rank polar space of parameter
    /// e−1; parameter q^{e−1}+1.
    Embedded,
}

pub fn construct_trivial_cl(space: &PolarSpace, kind: TrivialKind) -> Result<SubspaceSet, SetError> {
    let d = space.rank();
    let field = space.field();
    match kind {
        TrivialKind::Pencil(point) => {
            let sub = Subspace::from_vectors(field, space.ambient(), &[point]);
            if sub.dim() != 1 {
                return Err(SetError::BadElement { position: 0, reason: "vertex must be a nonzero point".into() });
            }
            if space.index_of(&sub)?.is_none() {
                return Err(SetError::BadElement { position: 0, reason: "vertex is not a singular point of the space".into() });
            }
            let indices: Vec<usize> = space
                .enumerate_isotropic(d)?
                .iter()
                .enumerate()
                .filter_map(|(idx, g)| g.contains(field, &sub).then_some(idx))
                .collect();
            let label = format!("point-pencil; parameter 1; vertex {:?}", sub.row(0));
            Ok(SubspaceSet::from_indices(space, d, &indices, Some(label)))
        }
        TrivialKind::Embedded => {
            if space.form().kind() == FormKind::Symplectic || space.e2() < 2 {
                return Err(SetError::IllegalEmbedding);
            }
            let sec = find_section(space, d, space.e2() - 2).map_err(|_| SetError::IllegalEmbedding)?;
            let mut indices = Vec::new();
            for sub in sec.space().enumerate_isotropic(d)? {
                let ambient_sub = sec.embed(sub);
                let idx = space
                    .index_of(&ambient_sub)?
                    .expect("generators of a section stay totally isotropic");
                indices.push(idx);
            }
            let x = rational_to_int(&(pow_half(space.q(), space.sqrt_q(), space.e2() - 2) + BigRational::one()))
                .expect("q^{e-1}+1 is an integer");
            let label = format!("generators of an embedded {} section; parameter {x}", sec.space().name());
            Ok(SubspaceSet::from_indices(space, d, &indices, Some(label)))
        }
    }
}

/// Lift a regular (m, d−1)-ovoid of type (1,1) living in a rank-d section
/// of co-rank 2 to a degree-one set of generators of the ambient rank-(d+2)
/// space, of parameter m·q^{e+1}(q−1): take every generator meeting the
/// section in a member.  The section is recomputed and its rank and
/// parameter verified; the ovoid hypothesis is checked, never assumed.
pub fn construct_lift_cl(
    ambient: &PolarSpace,
    conditions: Option<&[Vec<u8>]>,
    m_set: &SubspaceSet,
) -> Result<SubspaceSet, SetError> {
    let rank = ambient.rank();
    if ambient.form().kind() == FormKind::Symplectic {
        return Err(SetError::BadSection {
            detail: "symplectic spaces admit no section of co-rank 2 with parameter e+1".into(),
        });
    }
    if rank < 4 || ambient.e2() > 2 {
        return Err(SetError::BadSection {
            detail: format!("lift needs rank >= 4 and e <= 1, got {}", ambient.name()),
        });
    }
    let owned;
    let conds: &[Vec<u8>] = match conditions {
        Some(c) => c,
        None => {
            owned = lift_conditions(ambient)?;
            &owned
        }
    };
    let sec = section(ambient, conds)?;
    if sec.space().rank() != rank - 2 || sec.space().e2() != ambient.e2() + 2 {
        return Err(SetError::BadSection {
            detail: format!(
                "section is {} of rank {}, need rank {} with doubled parameter {}",
                sec.space().name(),
                sec.space().rank(),
                rank - 2,
                ambient.e2() + 2
            ),
        });
    }
    let d = rank - 2;
    let standard = standard_polar_space(
        sec.space().form().kind(),
        sec.space().ambient() - 1,
        ambient.q() as u16,
    )?;
    if m_set.space != standard.name() {
        return Err(SetError::SpaceMismatch { expected: standard.name(), got: m_set.space.clone() });
    }
    if m_set.dim != d - 1 {
        return Err(SetError::WrongDimension { expected: d - 1, got: m_set.dim });
    }
    let report = super::check_regular_ovoid(&standard, m_set)?;
    let regularity = report.regularity.as_ref().expect("regular check always reports");
    let hypothesis = regularity.regular
        && regularity.eigenvector_consistent
        && regularity.profile_ok
        && (regularity.trivial || regularity.submodule == Some((1, 1)));
    if !hypothesis {
        return Err(SetError::OvoidNotRegularType1 { found: regularity.submodule });
    }
    let m = report.m.expect("verified ovoid has a constant m");

    let field = ambient.field();
    let sim = similitude(field, standard.form(), sec.space().form()).ok_or_else(|| {
        SetError::BadSection { detail: "no similitude onto the recomputed section".into() }
    })?;
    let mapped: HashSet<Subspace> = m_set
        .resolve(&standard)?
        .iter()
        .map(|sub| sec.embed(&sim.map_subspace(field, sub)))
        .collect();

    let alpha = sec.as_ambient_subspace(field);
    let mut indices = Vec::new();
    for (idx, g) in ambient.enumerate_isotropic(rank)?.iter().enumerate() {
        let meet = g.intersect(field, &alpha)?;
        if meet.dim() == d - 1 && mapped.contains(&meet) {
            indices.push(idx);
        }
    }
    let x = rational_to_int(
        &(rat(BigInt::from(m) * BigInt::from(ambient.q() - 1))
            * pow_half(ambient.q(), ambient.sqrt_q(), ambient.e2() + 2)),
    )
    .expect("m q^{e+1} (q-1) is an integer");
    let label = format!("lift of a regular ({m}, {})-ovoid of {}; parameter {x}", d - 1, standard.name());
    Ok(SubspaceSet::from_indices(ambient, rank, &indices, Some(label)))
}

/// Parameter-composing operations on sets of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetAlgebraOp {
    /// Parameter becomes q^{e+d−1}+1−x.
    Complement,
    /// Operands must be disjoint; parameters add.
    Union,
    /// Second operand must be contained in the first; parameters subtract.
    Difference,
}

pub fn cl_set_algebra(
    space: &PolarSpace,
    op: SetAlgebraOp,
    s1: &SubspaceSet,
    s2: Option<&SubspaceSet>,
) -> Result<SubspaceSet, SetError> {
    let d = space.rank();
    for s in [Some(s1), s2].into_iter().flatten() {
        if s.dim != d {
            return Err(SetError::WrongDimension { expected: d, got: s.dim });
        }
        s.resolve(space)?;
    }
    let count = space.enumerate_isotropic(d)?.len();
    let describe = |indices: &[usize], name: &str| -> String {
        match parameter(space, indices.len() as u64) {
            Ok((x, _)) => format!("{name}; parameter {x}"),
            Err(_) => format!("{name}; parameter not integral"),
        }
    };
    match op {
        SetAlgebraOp::Complement => {
            let indices: Vec<usize> = (0..count).filter(|i| !s1.contains_index(*i)).collect();
            let label = describe(&indices, "complement");
            Ok(SubspaceSet::from_indices(space, d, &indices, Some(label)))
        }
        SetAlgebraOp::Union => {
            let s2 = s2.ok_or_else(|| SetError::BadFile { detail: "union needs two sets".into() })?;
            if let Some(&witness) = s1.members.iter().find(|m| s2.contains_index(**m)) {
                return Err(SetError::NotDisjoint { witness });
            }
            let mut indices = s1.members.clone();
            indices.extend_from_slice(&s2.members);
            let label = describe(&indices, "disjoint union");
            Ok(SubspaceSet::from_indices(space, d, &indices, Some(label)))
        }
        SetAlgebraOp::Difference => {
            let s2 = s2.ok_or_else(|| SetError::BadFile { detail: "difference needs two sets".into() })?;
            if let Some(&witness) = s2.members.iter().find(|m| !s1.contains_index(**m)) {
                return Err(SetError::NotContained { witness });
            }
            let indices: Vec<usize> =
                s1.members.iter().copied().filter(|m| !s2.contains_index(*m)).collect();
            let label = describe(&indices, "difference");
            Ok(SubspaceSet::from_indices(space, d, &indices, Some(label)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_space;

    fn pencil_at_first_point(space: &PolarSpace) -> SubspaceSet {
        let vertex = space.enumerate_isotropic(1).unwrap()[0].row(0).to_vec();
        construct_trivial_cl(space, TrivialKind::Pencil(vertex)).unwrap()
    }

    #[test]
    fn pencil_passes_all_three_engines_with_parameter_one() {
        let space = parse_space("Q+:5:2").unwrap();
        let pencil = pencil_at_first_point(&space);
        assert_eq!(pencil.len(), 6); // 2(q+1) generators through a point
        for method in [ClMethod::Counts { i: 1 }, ClMethod::Image, ClMethod::Eigen] {
            let report = verify_cl(&space, &pencil, method).unwrap();
            assert!(report.verified, "{} failed", report.method);
            assert_eq!(report.x, "1");
            assert_eq!(report.pencil_vertex, Some(0));
            assert_eq!(report.pencil_decomposition, Some(vec![0]));
        }
        let counts = verify_cl(&space, &pencil, ClMethod::Counts { i: 1 }).unwrap();
        // π outside a pencil meets it in exactly x = 1 member.
        assert_eq!(counts.nonmember_histogram, std::iter::once((1, 24)).collect());
        assert_eq!(counts.certifies, "degree-one");
        let eigen = verify_cl(&space, &pencil, ClMethod::Eigen).unwrap();
        assert_eq!(eigen.certifies, "cameron-liebler");
    }

    #[test]
    fn embedded_generators_in_a_parabolic_space_have_parameter_two() {
        let space = parse_space("Q:4:2").unwrap();
        let set = construct_trivial_cl(&space, TrivialKind::Embedded).unwrap();
        assert_eq!(set.len(), 6); // generators of a rank-2 hyperbolic section
        for method in [ClMethod::Counts { i: 1 }, ClMethod::Image, ClMethod::Eigen] {
            let report = verify_cl(&space, &set, method).unwrap();
            assert!(report.verified);
            assert_eq!(report.x, "2");
        }
        // Hyperbolic spaces admit no same-rank embedding one step down.
        let hyper = parse_space("Q+:5:2").unwrap();
        assert!(matches!(
            construct_trivial_cl(&hyper, TrivialKind::Embedded),
            Err(SetError::IllegalEmbedding)
        ));
    }

    #[test]
    fn complement_union_and_difference_compose_parameters() {
        let space = parse_space("Q+:5:2").unwrap();
        let pencil = pencil_at_first_point(&space);
        let complement = cl_set_algebra(&space, SetAlgebraOp::Complement, &pencil, None).unwrap();
        assert_eq!(complement.len(), 24);
        let report = verify_cl(&space, &complement, ClMethod::Eigen).unwrap();
        assert!(report.verified);
        assert_eq!(report.x, "4"); // q^{e+d−1}+1−1

        // A second pencil with a non-perpendicular vertex is disjoint.
        let points = space.enumerate_isotropic(1).unwrap();
        let form = space.form();
        let far = points
            .iter()
            .position(|p| form.pairing(space.field(), points[0].row(0), p.row(0)) != 0)
            .unwrap();
        let other = construct_trivial_cl(
            &space,
            TrivialKind::Pencil(points[far].row(0).to_vec()),
        )
        .unwrap();
        let union = cl_set_algebra(&space, SetAlgebraOp::Union, &pencil, Some(&other)).unwrap();
        assert_eq!(union.len(), 12);
        let report = verify_cl(&space, &union, ClMethod::Counts { i: 1 }).unwrap();
        assert!(report.verified);
        assert_eq!(report.x, "2");
        assert_eq!(report.pencil_decomposition.as_ref().map(Vec::len), Some(2));

        let back = cl_set_algebra(&space, SetAlgebraOp::Difference, &union, Some(&other)).unwrap();
        assert_eq!(back.members, pencil.members);
        assert!(matches!(
            cl_set_algebra(&space, SetAlgebraOp::Union, &pencil, Some(&pencil)),
            Err(SetError::NotDisjoint { .. })
        ));
        assert!(matches!(
            cl_set_algebra(&space, SetAlgebraOp::Difference, &pencil, Some(&union)),
            Err(SetError::NotContained { .. })
        ));
    }

    #[test]
    fn lift_of_the_elliptic_ovoid_gives_sixty_generators_of_parameter_two() {
        let ambient = parse_space("Q+:7:2").unwrap();
        let standard = parse_space("Q:4:2").unwrap();
        let ovoid = super::super::construct_embedded_ovoid(&standard, 1).unwrap();
        assert_eq!(ovoid.len(), 5);
        let lift = construct_lift_cl(&ambient, None, &ovoid).unwrap();
        assert_eq!(lift.len(), 60);
        let report = verify_cl(&ambient, &lift, ClMethod::Counts { i: 1 }).unwrap();
        assert!(report.verified);
        assert_eq!(report.x, "2");
        // The lift of an embedded ovoid decomposes into q(q−1) pencils.
        assert_eq!(report.pencil_decomposition.as_ref().map(Vec::len), Some(2));
        assert!(report.pencil_vertex.is_some());
    }

    #[test]
    fn counts_engine_enforces_the_certifying_exponents() {
        let space = parse_space("Q+:5:2").unwrap();
        let pencil = pencil_at_first_point(&space);
        // Hyperbolic: even i never certifies.
        assert!(matches!(
            verify_cl(&space, &pencil, ClMethod::Counts { i: 2 }),
            Err(SetError::MethodRestriction { i: 2, .. })
        ));
        assert!(verify_cl(&space, &pencil, ClMethod::Counts { i: 3 }).unwrap().verified);

        // Parabolic of odd rank: i = d is excluded.
        let odd = parse_space("Q:6:2").unwrap();
        let pencil = pencil_at_first_point(&odd);
        assert!(matches!(
            verify_cl(&odd, &pencil, ClMethod::Counts { i: 3 }),
            Err(SetError::MethodRestriction { i: 3, .. })
        ));
        assert!(verify_cl(&odd, &pencil, ClMethod::Counts { i: 2 }).unwrap().verified);
    }

    #[test]
    fn non_integral_parameter_is_a_falsification() {
        let space = parse_space("Q+:5:2").unwrap();
        let single = SubspaceSet::from_indices(&space, 3, &[0], None);
        match verify_cl(&space, &single, ClMethod::Eigen) {
            Err(SetError::NotIntegerParameter { size: 1, x }) => assert_eq!(x, "1/6"),
            other => panic!("expected NotIntegerParameter, got {other:?}"),
        }
    }
}
