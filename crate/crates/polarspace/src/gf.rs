//! Exact arithmetic in the finite fields GF(q) = GF(p^k) for small prime powers.
//!
//! Elements travel as their canonical integer encoding `value = Σ cᵢ pⁱ`
//! (little-endian digits of the polynomial basis modulo a fixed irreducible
//! polynomial). The modulus for each (p, k) is a built-in constant, never a
//! runtime search, so encodings are byte-stable across runs and machines —
//! file formats depend on that. All arithmetic is table-driven; the size
//! bound keeps the tables tiny.

use thiserror::Error;

/// Largest supported field order. Enumeration scales are tuned for small q;
/// anything larger is rejected loudly instead of running forever.
pub const MAX_Q: u16 = 128;

/// Errors from field construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    /// The requested characteristic is not a prime number.
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    /// The requested field order exceeds [`MAX_Q`].
    #[error("field order {q} exceeds the supported bound {MAX_Q}")]
    FieldTooLarge { q: u64 },
    /// Multiplicative inversion of zero.
    #[error("division by zero in GF({q})")]
    DivisionByZero { q: u16 },
    /// Two operands belong to different fields.
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u16, u16),
    /// `x ↦ x^√q` requested over a field whose order is not a square.
    #[error("GF({q}) is not a square-order field; x ↦ x^√q is undefined")]
    NotASquareField { q: u16 },
}

/// An element of a specific GF(q), tagged with the field order so that
/// cross-field arithmetic is rejected instead of silently misread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u8,
    q: u16,
}

impl FieldElement {
    /// Canonical integer encoding `Σ cᵢ pⁱ` of the element.
    pub fn value(self) -> u8 {
        self.value
    }

    /// Order of the field the element lives in.
    pub fn field_order(self) -> u16 {
        self.q
    }
}

/// Arithmetic operations dispatched by [`FieldSpec::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Mul,
    Neg,
    Inv,
    /// Raise to a nonnegative integer power (square-and-multiply).
    Pow(u64),
}

/// A fully tabulated finite field GF(p^k), q = p^k ≤ [`MAX_Q`].
///
/// Immutable after construction; all operations are pure lookups and safe to
/// share between threads.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u16,
    k: u32,
    q: u16,
    /// Monic irreducible modulus, little-endian coefficients in F_p, length k+1.
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    square: Vec<bool>,
    frob_sqrt: Option<Vec<u8>>,
}

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldSpec(GF({}) = GF({}^{}))", self.q, self.p, self.k)
    }
}

/// The fixed modulus for GF(p^k). Complete for every prime power ≤ [`MAX_Q`]
/// with k ≥ 2; prime fields use the degree-1 modulus x.
fn fixed_modulus(p: u16, k: u32) -> Option<Vec<u8>> {
    let m: &[u8] = match (p, k) {
        (_, 1) => &[0, 1],
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 5) => &[1, 0, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 1, 1, 0, 1],
        (2, 7) => &[1, 1, 0, 0, 0, 0, 0, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (3, 4) => &[2, 0, 0, 2, 1],
        (5, 2) => &[2, 4, 1],
        (5, 3) => &[3, 3, 0, 1],
        (7, 2) => &[3, 6, 1],
        (11, 2) => &[2, 7, 1],
        _ => return None,
    };
    Some(m.to_vec())
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of polynomial division over F_p (little-endian coefficients).
fn poly_rem(mut a: Vec<u16>, b: &[u16], p: u16) -> Vec<u16> {
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    while a.len() > db {
        let da = a.len() - 1;
        let c = (a[da] * lead_inv) % p;
        if c != 0 {
            for i in 0..=db {
                let idx = da - db + i;
                a[idx] = (a[idx] + p * p - (c * b[i]) % p) % p;
            }
        }
        a.pop();
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
    }
    a
}

fn inv_mod_p(a: u16, p: u16) -> u16 {
    // p ≤ 127: brute scan is instant and obviously correct.
    (1..p).find(|&x| (a * x) % p == 1).expect("unit mod prime")
}

/// True iff the monic polynomial (little-endian, over F_p) has no monic
/// divisor of degree 1..=deg/2. Sound because any factorization contains
/// such a divisor.
fn poly_is_irreducible(m: &[u8], p: u16) -> bool {
    let deg = m.len() - 1;
    if deg == 1 {
        return true;
    }
    let mu: Vec<u16> = m.iter().map(|&c| c as u16).collect();
    for dd in 1..=deg / 2 {
        // All monic divisors of degree dd: dd free coefficients below the top.
        let count = (p as u64).pow(dd as u32);
        for code in 0..count {
            let mut div = vec![0u16; dd + 1];
            let mut c = code;
            for coeff in div.iter_mut().take(dd) {
                *coeff = (c % p as u64) as u16;
                c /= p as u64;
            }
            div[dd] = 1;
            let r = poly_rem(mu.clone(), &div, p);
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Construct the unique [`FieldSpec`] for GF(p^k). Deterministic across runs.
pub fn create_field(p: u16, k: u32) -> Result<FieldSpec, FieldError> {
    assert!(k >= 1, "extension degree must be at least 1");
    if !is_prime(p as u64) {
        return Err(FieldError::NotPrime(p as u64));
    }
    let q = (p as u64).checked_pow(k).ok_or(FieldError::FieldTooLarge { q: u64::MAX })?;
    if q > MAX_Q as u64 {
        return Err(FieldError::FieldTooLarge { q });
    }
    let q = q as u16;
    let modulus = fixed_modulus(p, k).expect("modulus table covers every prime power within bound");
    debug_assert_eq!(modulus.len() as u32, k + 1);
    debug_assert_eq!(*modulus.last().unwrap(), 1, "modulus must be monic");
    assert!(
        poly_is_irreducible(&modulus, p),
        "built-in modulus for GF({p}^{k}) must be irreducible"
    );

    let qs = q as usize;
    let digits = |v: u16| -> Vec<u16> {
        let mut out = vec![0u16; k as usize];
        let mut v = v;
        for d in out.iter_mut() {
            *d = v % p;
            v /= p;
        }
        out
    };
    let encode = |ds: &[u16]| -> u8 {
        let mut v = 0u16;
        for &d in ds.iter().rev() {
            v = v * p + d;
        }
        v as u8
    };

    let mut add = vec![0u8; qs * qs];
    let mut mul = vec![0u8; qs * qs];
    let mut neg = vec![0u8; qs];
    let mu: Vec<u16> = modulus.iter().map(|&c| c as u16).collect();
    for a in 0..q {
        let da = digits(a);
        let nd: Vec<u16> = da.iter().map(|&x| (p - x) % p).collect();
        neg[a as usize] = encode(&nd);
        for b in 0..q {
            let db = digits(b);
            let sum: Vec<u16> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
            add[a as usize * qs + b as usize] = encode(&sum);
            // Polynomial product, then reduction by the modulus.
            let mut prod = vec![0u16; 2 * k as usize - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut r = poly_rem(prod, &mu, p);
            r.resize(k as usize, 0);
            mul[a as usize * qs + b as usize] = encode(&r);
        }
    }

    let mut inv = vec![0u8; qs];
    for a in 1..q {
        let found = (1..q).find(|&b| mul[a as usize * qs + b as usize] == 1);
        inv[a as usize] = found.expect("every nonzero element has an inverse") as u8;
    }

    // Ground truth for squareness: enumerate all squares.
    let mut square = vec![false; qs];
    for a in 0..q {
        square[mul[a as usize * qs + a as usize] as usize] = true;
    }
    if p != 2 {
        // Cross-check against Euler's criterion while we have everything at hand.
        let pow = |mut a: u8, mut e: u64| -> u8 {
            let mut acc = 1u8;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul[acc as usize * qs + a as usize];
                }
                a = mul[a as usize * qs + a as usize];
                e >>= 1;
            }
            acc
        };
        for a in 1..q {
            let euler = pow(a as u8, (q as u64 - 1) / 2) == 1;
            debug_assert_eq!(square[a as usize], euler, "Euler criterion mismatch at {a}");
        }
    }

    let frob_sqrt = if k % 2 == 0 {
        let e = (p as u64).pow(k / 2);
        let pow = |mut a: u8, mut e: u64| -> u8 {
            let mut acc = 1u8;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul[acc as usize * qs + a as usize];
                }
                a = mul[a as usize * qs + a as usize];
                e >>= 1;
            }
            acc
        };
        let table: Vec<u8> = (0..q).map(|a| pow(a as u8, e)).collect();
        for a in 0..qs {
            debug_assert_eq!(table[table[a] as usize] as usize, a, "x ↦ x^√q must be an involution");
        }
        Some(table)
    } else {
        None
    };

    Ok(FieldSpec { p, k, q, modulus, add, mul, neg, inv, square, frob_sqrt })
}

/// Construct GF(q) from its order, factoring q = p^k. Errors mirror
/// [`create_field`]; a q that is not a prime power reports `NotPrime`.
pub fn field_of_order(q: u16) -> Result<FieldSpec, FieldError> {
    if q > MAX_Q {
        return Err(FieldError::FieldTooLarge { q: q as u64 });
    }
    let p = (2..=q).find(|&p| q % p == 0 && is_prime(p as u64)).ok_or(FieldError::NotPrime(q as u64))?;
    let mut k = 0u32;
    let mut m = q;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    if m != 1 {
        return Err(FieldError::NotPrime(q as u64));
    }
    create_field(p, k)
}

impl FieldSpec {
    /// Characteristic p.
    pub fn char_p(&self) -> u16 {
        self.p
    }

    /// Extension degree k.
    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Field order q = p^k.
    pub fn order(&self) -> u16 {
        self.q
    }

    /// √q when q is a square, else `None`.
    pub fn sqrt_order(&self) -> Option<u16> {
        (self.k % 2 == 0).then(|| (self.p as u32).pow(self.k / 2) as u16)
    }

    /// Little-endian coefficients of the fixed modulus.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// Short name for reports: "q" for prime fields, "p^k" otherwise.
    pub fn name(&self) -> String {
        if self.k == 1 {
            format!("{}", self.p)
        } else {
            format!("{}^{}", self.p, self.k)
        }
    }

    /// All element encodings in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = u8> + '_ {
        0..self.q as u8
    }

    /// Wrap a canonical encoding as a tagged element. Panics on out-of-range
    /// values (programming error); file decoders validate before calling.
    pub fn element(&self, value: u8) -> FieldElement {
        assert!((value as u16) < self.q, "encoding {value} out of range for GF({})", self.q);
        FieldElement { value, q: self.q }
    }

    /// Checked wrap of an untrusted encoding.
    pub fn try_element(&self, value: u64) -> Option<FieldElement> {
        (value < self.q as u64).then(|| FieldElement { value: value as u8, q: self.q })
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        debug_assert!((a as u16) < self.q && (b as u16) < self.q);
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        debug_assert!((a as u16) < self.q && (b as u16) < self.q);
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        debug_assert!((a as u16) < self.q);
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; zero is an error.
    pub fn inv(&self, a: u8) -> Result<u8, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero { q: self.q });
        }
        debug_assert!((a as u16) < self.q);
        Ok(self.inv[a as usize])
    }

    /// a / b; b = 0 is an error.
    pub fn div(&self, a: u8, b: u8) -> Result<u8, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e by square-and-multiply; a^0 = 1 for every a.
    pub fn pow(&self, a: u8, mut e: u64) -> u8 {
        let mut base = a;
        let mut acc = 1u8;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Square test. Zero counts as a square; in characteristic 2 everything
    /// is a square; for odd q this agrees with Euler's criterion
    /// a^((q−1)/2) = 1.
    pub fn is_square(&self, a: u8) -> bool {
        debug_assert!((a as u16) < self.q);
        self.square[a as usize]
    }

    /// The automorphism x ↦ x^√q of a square-order field (an involution).
    pub fn frobenius_sqrt(&self, a: u8) -> Result<u8, FieldError> {
        debug_assert!((a as u16) < self.q);
        self.frob_sqrt
            .as_ref()
            .map(|t| t[a as usize])
            .ok_or(FieldError::NotASquareField { q: self.q })
    }

    /// Checked, element-tagged arithmetic entry point.
    pub fn arith(&self, op: Op, a: FieldElement, b: Option<FieldElement>) -> Result<FieldElement, FieldError> {
        if a.q != self.q {
            return Err(FieldError::FieldMismatch(self.q, a.q));
        }
        if let Some(b) = b {
            if b.q != self.q {
                return Err(FieldError::FieldMismatch(self.q, b.q));
            }
        }
        let need_b = || b.map(|x| x.value).ok_or(FieldError::FieldMismatch(self.q, 0));
        let value = match op {
            Op::Add => self.add(a.value, need_b()?),
            Op::Mul => self.mul(a.value, need_b()?),
            Op::Neg => self.neg(a.value),
            Op::Inv => self.inv(a.value)?,
            Op::Pow(e) => self.pow(a.value, e),
        };
        Ok(FieldElement { value, q: self.q })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_polynomial_basis() {
        // Modulus x²+x+1: the element x (encoding 2) squares to x+1 (encoding 3).
        let f = create_field(2, 2).unwrap();
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.add(2, 3), 1);
        assert_eq!(f.order(), 4);
    }

    #[test]
    fn prime_field_inverse() {
        let f = create_field(5, 1).unwrap();
        assert_eq!(f.inv(2).unwrap(), 3);
        assert_eq!(f.inv(0), Err(FieldError::DivisionByZero { q: 5 }));
    }

    #[test]
    fn squares_mod_five() {
        let f = create_field(5, 1).unwrap();
        assert!(f.is_square(4));
        assert!(!f.is_square(2));
        assert!(f.is_square(0));
        let squares = (1..5).filter(|&a| f.is_square(a)).count();
        assert_eq!(squares, 2);
    }

    #[test]
    fn frobenius_is_involution_on_gf9() {
        let f = create_field(3, 2).unwrap();
        for a in f.elements().collect::<Vec<_>>() {
            let fa = f.frobenius_sqrt(a).unwrap();
            assert_eq!(f.frobenius_sqrt(fa).unwrap(), a);
            // Trace a + a^√q lands in the prime subfield {0,1,2}.
            let tr = f.add(a, fa);
            assert!(tr < 3, "trace {tr} outside prime subfield");
        }
        assert_eq!(f.frobenius_sqrt(1).unwrap(), 1);
    }

    #[test]
    fn frobenius_rejected_on_non_square_field() {
        let f = create_field(2, 3).unwrap();
        assert_eq!(f.frobenius_sqrt(1), Err(FieldError::NotASquareField { q: 8 }));
    }

    #[test]
    fn deterministic_reconstruction() {
        let a = create_field(3, 2).unwrap();
        let b = create_field(3, 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(create_field(6, 1), Err(FieldError::NotPrime(6)));
        assert_eq!(create_field(2, 8), Err(FieldError::FieldTooLarge { q: 256 }));
        assert!(field_of_order(12).is_err());
        assert_eq!(field_of_order(49).unwrap().sqrt_order(), Some(7));
    }

    #[test]
    fn arith_dispatch_and_mismatch() {
        let f4 = create_field(2, 2).unwrap();
        let f9 = create_field(3, 2).unwrap();
        let a = f4.element(2);
        let alien = f9.element(2);
        assert_eq!(f4.arith(Op::Mul, a, Some(a)).unwrap().value(), 3);
        assert_eq!(f4.arith(Op::Pow(3), a, None).unwrap().value(), 1);
        assert_eq!(f4.arith(Op::Add, a, Some(alien)), Err(FieldError::FieldMismatch(4, 9)));
    }

    #[test]
    fn pow_edge_cases() {
        let f = create_field(7, 1).unwrap();
        assert_eq!(f.pow(0, 0), 1);
        assert_eq!(f.pow(3, 6), 1);
        assert_eq!(f.pow(3, 2), 2);
    }
}
