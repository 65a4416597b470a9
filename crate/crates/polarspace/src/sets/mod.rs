//! Distinguished sets of totally isotropic subspaces: (m, a)-ovoids with
//! their regularity types, and degree-one / Cameron–Liebler sets of
//! generators, together with constructions, verification certificates,
//! set algebra, and a JSON interchange format.

pub mod cl;
pub mod ovoid;
pub mod search;

pub use cl::{
    cl_set_algebra, construct_lift_cl, construct_trivial_cl, contains_point_pencil,
    pencil_decomposition, verify_cl, ClMethod, SetAlgebraOp, TrivialKind,
};
pub use ovoid::{
    check_m_ovoid, check_regular_ovoid, codim1_type1_profile, construct_embedded_ovoid,
    hemisystem_regular_ovoid,
};
pub use search::{search_all_m_ovoids, search_m_ovoid};

use crate::geometry::{GeometryError, PolarSpace, Subspace};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// Errors arising from set constructions and verifications.
#[derive(Debug, Error)]
pub enum SetError {
    #[error("set members must have dimension {expected}, found {got}")]
    WrongDimension { expected: u16, got: u16 },
    #[error("set belongs to space {got}, expected {expected}")]
    SpaceMismatch { expected: String, got: String },
    #[error("element {position} is invalid: {reason}")]
    BadElement { position: usize, reason: String },
    #[error("not an (m, a)-ovoid: {detail}")]
    NotAnOvoid { detail: String },
    #[error("not a hemisystem: {detail}")]
    NotAHemisystem { detail: String },
    #[error("bad set file: {detail}")]
    BadFile { detail: String },
    #[error("this space has no hyperplane section of co-rank one, so no embedded ovoid")]
    NoEmbedding,
    #[error("this space admits no embedded polar space of the same rank")]
    IllegalEmbedding,
    #[error("section unsuitable for the lift: {detail}")]
    BadSection { detail: String },
    #[error("input set is not a regular ovoid of type (1,1): found {found:?}")]
    OvoidNotRegularType1 { found: Option<(i64, i64)> },
    #[error("set of size {size} has a non-integral parameter {x}; falsified")]
    NotIntegerParameter { size: u64, x: String },
    #[error("intersection counts with i = {i} do not certify degree one in {space}")]
    MethodRestriction { i: u16, space: String },
    #[error("operands are not disjoint (shared member index {witness})")]
    NotDisjoint { witness: usize },
    #[error("second operand is not contained in the first (member index {witness})")]
    NotContained { witness: usize },
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A duplicate-free, sorted set of totally isotropic `dim`-spaces of one
/// polar space, stored by canonical enumeration index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceSet {
    /// Name of the space the members live in, e.g. "Q+:5:3".
    pub space: String,
    /// Common vector-space dimension of the members.
    pub dim: u16,
    /// Sorted, duplicate-free canonical indices into the enumeration of
    /// totally isotropic `dim`-spaces.
    pub members: Vec<usize>,
    /// Free-form provenance note.
    pub label: Option<String>,
}

/// Version tag carried by every set file; bump on incompatible changes.
const SET_FORMAT: &str = "polarspace-set/1";

fn set_format_tag() -> String {
    SET_FORMAT.to_string()
}

/// On-disk form: members are written out as row bases so that files stay
/// meaningful without access to the enumeration order.
#[derive(Serialize, Deserialize)]
struct SetFile {
    #[serde(default)]
    format: String,
    space: String,
    dim: u16,
    elements: Vec<Vec<Vec<u8>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl SubspaceSet {
    /// Build a set from enumeration indices (sorted and deduplicated here).
    pub fn from_indices(
        space: &PolarSpace,
        dim: u16,
        indices: &[usize],
        label: Option<String>,
    ) -> SubspaceSet {
        let mut members = indices.to_vec();
        members.sort_unstable();
        members.dedup();
        SubspaceSet { space: space.name(), dim, members, label }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Check that this set belongs to `space` with the expected member
    /// dimension, and return the member subspaces themselves.
    pub fn resolve<'s>(&self, space: &'s PolarSpace) -> Result<Vec<&'s Subspace>, SetError> {
        if self.space != space.name() {
            return Err(SetError::SpaceMismatch { expected: space.name(), got: self.space.clone() });
        }
        let all = space.enumerate_isotropic(self.dim)?;
        self.members
            .iter()
            .map(|&i| {
                all.get(i).ok_or_else(|| SetError::BadElement {
                    position: i,
                    reason: format!("index out of range (only {} elements)", all.len()),
                })
            })
            .collect()
    }

    /// Serialize to the interchange JSON, writing canonical row bases.
    pub fn to_json(&self, space: &PolarSpace) -> Result<String, SetError> {
        let elements = self
            .resolve(space)?
            .iter()
            .map(|sub| sub.iter_rows().map(<[u8]>::to_vec).collect())
            .collect();
        let file = SetFile {
            format: set_format_tag(),
            space: self.space.clone(),
            dim: self.dim,
            elements,
            label: self.label.clone(),
        };
        serde_json::to_string_pretty(&file).map_err(|e| SetError::BadFile { detail: e.to_string() })
    }

    pub fn save(&self, space: &PolarSpace, path: &Path) -> Result<(), SetError> {
        let mut text = self.to_json(space)?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| SetError::BadFile { detail: e.to_string() })
    }

    /// Read a set file, reconstruct its space from the header, and resolve
    /// every element to a canonical index.  Elements must be bases of
    /// distinct totally isotropic `dim`-spaces.
    pub fn load(path: &Path, cache_dir: Option<std::path::PathBuf>) -> Result<(PolarSpace, SubspaceSet), SetError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SetError::BadFile { detail: format!("{}: {e}", path.display()) })?;
        let file: SetFile = serde_json::from_str(&text)
            .map_err(|e| SetError::BadFile { detail: e.to_string() })?;
        if file.format != SET_FORMAT {
            return Err(SetError::BadFile {
                detail: format!(
                    "format version {:?} is not {SET_FORMAT:?}",
                    file.format
                ),
            });
        }
        let mut space = crate::geometry::parse_space(&file.space)?;
        if let Some(dir) = cache_dir {
            space = space.with_disk_cache(dir);
        }
        let set = SubspaceSet::resolve_elements(&space, file.dim, &file.elements, file.label)?;
        Ok((space, set))
    }

    /// Resolve explicit row bases against a space.
    pub fn resolve_elements(
        space: &PolarSpace,
        dim: u16,
        elements: &[Vec<Vec<u8>>],
        label: Option<String>,
    ) -> Result<SubspaceSet, SetError> {
        let n = space.ambient();
        let mut members = Vec::with_capacity(elements.len());
        for (position, rows) in elements.iter().enumerate() {
            let bad = |reason: String| SetError::BadElement { position, reason };
            if rows.iter().any(|r| r.len() != n as usize) {
                return Err(bad(format!("rows must have length {n}")));
            }
            let q = space.q() as u8;
            if rows.iter().flatten().any(|&c| c >= q) {
                return Err(bad(format!("coordinates must be field elements below {q}")));
            }
            let sub = Subspace::from_vectors(space.field(), n, rows);
            if sub.dim() != dim {
                return Err(bad(format!("spans a {}-space, expected dimension {dim}", sub.dim())));
            }
            match space.index_of(&sub)? {
                Some(idx) => members.push(idx),
                None => return Err(bad("not a totally isotropic subspace of the space".into())),
            }
        }
        let mut sorted = members.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != members.len() {
            let mut seen = std::collections::HashSet::new();
            let position = members.iter().position(|m| !seen.insert(*m)).unwrap();
            return Err(SetError::BadElement { position, reason: "duplicate element".into() });
        }
        Ok(SubspaceSet { space: space.name(), dim, members: sorted, label })
    }

    /// Membership test against a sorted member list.
    pub fn contains_index(&self, idx: usize) -> bool {
        self.members.binary_search(&idx).is_ok()
    }
}

/// Verdict of the constant-count ovoid test, with the regularity
/// refinement when requested.
#[derive(Clone, Debug, Serialize)]
pub struct OvoidReport {
    pub space: String,
    pub member_dim: u16,
    pub size: u64,
    /// Fewest and most members contained in any single generator; these
    /// agree exactly when the set is an (m, a)-ovoid.
    pub count_min: u64,
    pub count_max: u64,
    pub m: Option<u64>,
    /// Whether |M| = m · Π_{i=1}^{a} (q^{d+e−i}+1) holds.
    pub size_identity: bool,
    pub is_ovoid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regularity: Option<RegularityReport>,
}

/// Two-constant regularity of an (m, a)-ovoid on the distance-one relation
/// with non-isotropic span, together with its submodule type and the full
/// intersection profile.
#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    /// Members at distance one from a member (None when not constant).
    pub c1: Option<u64>,
    /// Members at distance one from a non-member (None when not constant).
    pub c2: Option<u64>,
    pub regular: bool,
    /// Empty set or all of Ω_a.
    pub trivial: bool,
    pub lambda: Option<i64>,
    /// c2 · [d choose a]_q = m · (valency − λ): the two constants organize
    /// into an actual eigenvector of the relation matrix.
    pub eigenvector_consistent: bool,
    pub submodule: Option<(i64, i64)>,
    pub profile: Vec<ProfileRow>,
    pub profile_ok: bool,
    /// Set when the next-to-maximal closed-form profile was also checked
    /// (a = d−1, type (1,1)) and agreed.
    pub closed_form_checked: bool,
}

/// Predicted versus observed member counts in one relation class.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileRow {
    pub s: u16,
    pub k: u16,
    /// Exact predicted count through members / non-members (rationals
    /// rendered as strings; counts must match after clearing denominators).
    pub expected_member: String,
    pub expected_nonmember: String,
    pub ok: bool,
}

/// Certificate from one of the three verification engines for degree-one /
/// Cameron–Liebler sets of generators.
#[derive(Clone, Debug, Serialize)]
pub struct CLReport {
    pub space: String,
    pub size: u64,
    /// Parameter x = |L| / Π_{i=0}^{d−2}(q^{e+i}+1), exact.
    pub x: String,
    pub x_integral: bool,
    pub method: String,
    /// Which notion this method certifies when it passes:
    /// "degree-one" (counts, image) or "cameron-liebler" (eigen).
    pub certifies: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<u16>,
    pub verified: bool,
    /// count ↦ number of generators attaining it, split by membership
    /// (counts method only).
    pub member_histogram: BTreeMap<u64, u64>,
    pub nonmember_histogram: BTreeMap<u64, u64>,
    /// Vertex of some point-pencil entirely inside the set, if any.
    pub pencil_vertex: Option<usize>,
    /// Vertices of a partition of the set into full point-pencils, if one
    /// exists.
    pub pencil_decomposition: Option<Vec<usize>>,
}

/// Outcome of deriving the line ovoid of a parabolic space from a
/// hemisystem of its small elliptic section.
#[derive(Clone, Debug, Serialize)]
pub struct HemisystemReport {
    /// The derived set of lines.
    #[serde(skip)]
    pub set: SubspaceSet,
    pub hemisystem_size: u64,
    pub line_count: u64,
    pub m: u64,
    /// Members at distance one from a non-member line inside the section.
    pub count_inside: u64,
    /// Members at distance one from a non-member line crossing the section.
    pub count_crossing: u64,
    /// Both of the above must equal q²(q+1)(q−1)/2.
    pub expected_count: u64,
    pub verified: bool,
    pub ovoid: OvoidReport,
}
