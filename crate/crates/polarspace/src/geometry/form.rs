//! The six classical forms on F_q^n with their standard equations.
//!
//! Quadratic kinds store the upper-triangular coefficient matrix of Q and the
//! polarized bilinear form B(u,v) = Q(u+v) − Q(u) − Q(v); sesquilinear and
//! alternating kinds store a Gram matrix. Evaluation works in every
//! characteristic; the characteristic-2 parabolic nucleus (the radical of B,
//! which carries no singular point) is tolerated and recorded.

use crate::geometry::GeometryError;
use crate::gf::FieldSpec;

/// The six kinds of classical polar space. "Odd"/"even" on the Hermitian
/// kinds refers to the parity of the projective dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
    HermitianOdd,
    HermitianEven,
    Symplectic,
}

impl FormKind {
    pub fn is_quadratic(self) -> bool {
        matches!(self, FormKind::Hyperbolic | FormKind::Parabolic | FormKind::Elliptic)
    }

    pub fn is_hermitian(self) -> bool {
        matches!(self, FormKind::HermitianOdd | FormKind::HermitianEven)
    }

    /// Doubled parameter 2e of the polar space this form defines.
    pub fn e2(self) -> i64 {
        match self {
            FormKind::Hyperbolic => 0,
            FormKind::HermitianOdd => 1,
            FormKind::Parabolic | FormKind::Symplectic => 2,
            FormKind::HermitianEven => 3,
            FormKind::Elliptic => 4,
        }
    }
}

/// A concrete form on F_q^n, ready for evaluation.
#[derive(Clone, PartialEq, Eq)]
pub struct FormSpec {
    kind: FormKind,
    n: u16,
    /// Upper-triangular coefficients of Q (quadratic kinds), flattened n×n.
    quad: Option<Vec<u8>>,
    /// Gram matrix (sesquilinear/alternating kinds), flattened n×n.
    gram: Option<Vec<u8>>,
    /// Polarization of Q: B = C + Cᵀ (quadratic kinds), flattened n×n.
    polar: Option<Vec<u8>>,
}

impl std::fmt::Debug for FormSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FormSpec({:?}, n={})", self.kind, self.n)
    }
}

/// Lexicographically first (c1, then c0 in encoding order) monic irreducible
/// binary quadratic x² + c1·xy + c0·y² over GF(q); irreducible ⇔ rootless.
fn first_irreducible_binary(field: &FieldSpec) -> (u8, u8) {
    let q = field.order();
    for c1 in 0..q as u8 {
        for c0 in 0..q as u8 {
            let rootless = (0..q as u8).all(|t| {
                let val = field.add(field.add(field.mul(t, t), field.mul(c1, t)), c0);
                val != 0
            });
            if rootless {
                return (c1, c0);
            }
        }
    }
    unreachable!("every finite field admits an irreducible quadratic");
}

impl FormSpec {
    /// The standard equation of the given kind on F_q^n.
    ///
    /// Quadratic kinds: hyperbolic X₀X₁+…+X_{n−2}X_{n−1}; parabolic
    /// X₀²+X₁X₂+…; elliptic g(X₀,X₁)+X₂X₃+… with g the first irreducible
    /// binary quadratic. Hermitian: Σ Xᵢ^{√q+1} (identity Gram, conjugation
    /// x ↦ x^√q). Symplectic: Gram blocks [[0,1],[−1,0]] on coordinate pairs.
    pub fn standard(kind: FormKind, n: u16, field: &FieldSpec) -> Result<FormSpec, GeometryError> {
        let nu = n as usize;
        let legal = match kind {
            FormKind::Hyperbolic | FormKind::Symplectic => n >= 2 && n % 2 == 0,
            FormKind::Parabolic => n >= 3 && n % 2 == 1,
            FormKind::Elliptic => n >= 4 && n % 2 == 0,
            FormKind::HermitianOdd => n >= 2 && n % 2 == 0,
            FormKind::HermitianEven => n >= 3 && n % 2 == 1,
        };
        if !legal {
            return Err(GeometryError::IllegalCombination { kind, projective_dimension: n.wrapping_sub(1) });
        }
        if kind.is_hermitian() && field.sqrt_order().is_none() {
            return Err(GeometryError::NeedSquareField { q: field.order() });
        }
        let mut quad = None;
        let mut gram = None;
        match kind {
            FormKind::Hyperbolic => {
                let mut c = vec![0u8; nu * nu];
                for i in (0..nu).step_by(2) {
                    c[i * nu + i + 1] = 1;
                }
                quad = Some(c);
            }
            FormKind::Parabolic => {
                let mut c = vec![0u8; nu * nu];
                c[0] = 1;
                for i in (1..nu).step_by(2) {
                    c[i * nu + i + 1] = 1;
                }
                quad = Some(c);
            }
            FormKind::Elliptic => {
                let (c1, c0) = first_irreducible_binary(field);
                let mut c = vec![0u8; nu * nu];
                c[0] = 1;
                c[1] = c1;
                c[nu + 1] = c0;
                for i in (2..nu).step_by(2) {
                    c[i * nu + i + 1] = 1;
                }
                quad = Some(c);
            }
            FormKind::HermitianOdd | FormKind::HermitianEven => {
                let mut g = vec![0u8; nu * nu];
                for i in 0..nu {
                    g[i * nu + i] = 1;
                }
                gram = Some(g);
            }
            FormKind::Symplectic => {
                let mut g = vec![0u8; nu * nu];
                for i in (0..nu).step_by(2) {
                    g[i * nu + i + 1] = 1;
                    g[(i + 1) * nu + i] = field.neg(1);
                }
                gram = Some(g);
            }
        }
        FormSpec::from_parts(kind, n, quad, gram, field)
    }

    /// Assemble a form from raw coefficient data (used for standard equations
    /// and for restricted forms on sections) and precompute the polarization.
    pub fn from_parts(
        kind: FormKind,
        n: u16,
        quad: Option<Vec<u8>>,
        gram: Option<Vec<u8>>,
        field: &FieldSpec,
    ) -> Result<FormSpec, GeometryError> {
        let nu = n as usize;
        let polar = quad.as_ref().map(|c| {
            let mut b = vec![0u8; nu * nu];
            for i in 0..nu {
                for j in 0..nu {
                    b[i * nu + j] = field.add(c[i * nu + j], c[j * nu + i]);
                }
            }
            b
        });
        debug_assert_eq!(kind.is_quadratic(), quad.is_some());
        debug_assert_eq!(!kind.is_quadratic(), gram.is_some());
        Ok(FormSpec { kind, n, quad, gram, polar })
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn ambient(&self) -> u16 {
        self.n
    }

    /// Q(v) for quadratic kinds.
    pub fn eval_quadratic(&self, field: &FieldSpec, v: &[u8]) -> u8 {
        let nu = self.n as usize;
        let c = self.quad.as_ref().expect("quadratic kind");
        let mut acc = 0u8;
        for i in 0..nu {
            if v[i] == 0 {
                continue;
            }
            for j in i..nu {
                let cij = c[i * nu + j];
                if cij != 0 && v[j] != 0 {
                    acc = field.add(acc, field.mul(cij, field.mul(v[i], v[j])));
                }
            }
        }
        acc
    }

    /// The pairing that defines orthogonality: the polarization B(u,v) for
    /// quadratic kinds, f(u,v) = u·G·(v^θ)ᵀ for Hermitian kinds, u·G·vᵀ for
    /// the symplectic kind.
    pub fn pairing(&self, field: &FieldSpec, u: &[u8], v: &[u8]) -> u8 {
        let nu = self.n as usize;
        match self.kind {
            FormKind::Hyperbolic | FormKind::Parabolic | FormKind::Elliptic => {
                let b = self.polar.as_ref().expect("polarization precomputed");
                let mut acc = 0u8;
                for i in 0..nu {
                    if u[i] == 0 {
                        continue;
                    }
                    for j in 0..nu {
                        let bij = b[i * nu + j];
                        if bij != 0 && v[j] != 0 {
                            acc = field.add(acc, field.mul(u[i], field.mul(bij, v[j])));
                        }
                    }
                }
                acc
            }
            FormKind::HermitianOdd | FormKind::HermitianEven => {
                let g = self.gram.as_ref().expect("gram");
                let mut acc = 0u8;
                for i in 0..nu {
                    if u[i] == 0 {
                        continue;
                    }
                    for j in 0..nu {
                        let gij = g[i * nu + j];
                        if gij != 0 && v[j] != 0 {
                            let vj = field.frobenius_sqrt(v[j]).expect("hermitian over square field");
                            acc = field.add(acc, field.mul(u[i], field.mul(gij, vj)));
                        }
                    }
                }
                acc
            }
            FormKind::Symplectic => {
                let g = self.gram.as_ref().expect("gram");
                let mut acc = 0u8;
                for i in 0..nu {
                    if u[i] == 0 {
                        continue;
                    }
                    for j in 0..nu {
                        let gij = g[i * nu + j];
                        if gij != 0 && v[j] != 0 {
                            acc = field.add(acc, field.mul(u[i], field.mul(gij, v[j])));
                        }
                    }
                }
                acc
            }
        }
    }

    /// The functional v ↦ (pairing(u, v) = 0) as explicit coefficients:
    /// returns w with pairing(u, v) = Σ wⱼ vⱼ′ where vⱼ′ = vⱼ except for
    /// Hermitian kinds, where the conjugation is folded into w so the
    /// condition is linear in v.
    pub fn pairing_functional(&self, field: &FieldSpec, u: &[u8]) -> Vec<u8> {
        let nu = self.n as usize;
        let mut w = vec![0u8; nu];
        match self.kind {
            FormKind::Hyperbolic | FormKind::Parabolic | FormKind::Elliptic => {
                let b = self.polar.as_ref().expect("polarization precomputed");
                for j in 0..nu {
                    let mut acc = 0u8;
                    for i in 0..nu {
                        if u[i] != 0 && b[i * nu + j] != 0 {
                            acc = field.add(acc, field.mul(u[i], b[i * nu + j]));
                        }
                    }
                    w[j] = acc;
                }
            }
            FormKind::Symplectic => {
                let g = self.gram.as_ref().expect("gram");
                for j in 0..nu {
                    let mut acc = 0u8;
                    for i in 0..nu {
                        if u[i] != 0 && g[i * nu + j] != 0 {
                            acc = field.add(acc, field.mul(u[i], g[i * nu + j]));
                        }
                    }
                    w[j] = acc;
                }
            }
            FormKind::HermitianOdd | FormKind::HermitianEven => {
                // f(u,v) = Σⱼ (Σᵢ uᵢ gᵢⱼ) vⱼ^θ = 0 ⇔ Σⱼ (Σᵢ uᵢ gᵢⱼ)^θ vⱼ = 0.
                let g = self.gram.as_ref().expect("gram");
                for j in 0..nu {
                    let mut acc = 0u8;
                    for i in 0..nu {
                        if u[i] != 0 && g[i * nu + j] != 0 {
                            acc = field.add(acc, field.mul(u[i], g[i * nu + j]));
                        }
                    }
                    w[j] = field.frobenius_sqrt(acc).expect("hermitian over square field");
                }
            }
        }
        w
    }

    /// True iff the single vector is singular/isotropic for this form:
    /// Q(v) = 0 (quadratic), f(v,v) = 0 (Hermitian), always (symplectic).
    pub fn is_singular_vector(&self, field: &FieldSpec, v: &[u8]) -> bool {
        match self.kind {
            FormKind::Hyperbolic | FormKind::Parabolic | FormKind::Elliptic => {
                self.eval_quadratic(field, v) == 0
            }
            FormKind::HermitianOdd | FormKind::HermitianEven => self.pairing(field, v, v) == 0,
            FormKind::Symplectic => true,
        }
    }

    /// Radical of the pairing: {v : pairing(u, v) = 0 for all u}. For
    /// quadratic kinds this is the radical of the polarization (the nucleus
    /// in characteristic-2 parabolic spaces).
    pub fn pairing_radical(&self, field: &FieldSpec) -> super::subspace::Subspace {
        let nu = self.n as usize;
        let mut functionals = Vec::with_capacity(nu * nu);
        for i in 0..nu {
            let mut e = vec![0u8; nu];
            e[i] = 1;
            functionals.extend_from_slice(&self.pairing_functional(field, &e));
        }
        super::subspace::nullspace(field, &functionals, self.n)
    }

    /// Raw quadratic coefficients (for serialization and sections).
    pub fn quad_coeffs(&self) -> Option<&[u8]> {
        self.quad.as_deref()
    }

    /// Raw Gram matrix (for serialization and sections).
    pub fn gram(&self) -> Option<&[u8]> {
        self.gram.as_deref()
    }
}
