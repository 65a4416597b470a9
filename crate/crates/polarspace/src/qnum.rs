//! Exact q-arithmetic: Gaussian binomials, q-integers, and q-powers, with
//! support for the half-integer parameter values of Hermitian spaces.
//!
//! Every formula in the eigenvalue machinery is a sum of terms
//! `± q^ν · Π [·choose·]_q · Π (q^{…}+1)` where ν can be a *half*-integer
//! (Hermitian spaces track e ∈ {1/2, 3/2}) and occasionally negative in
//! intermediate terms. Exponents therefore travel **doubled** (`e2 = 2e`
//! convention) and powers are evaluated in [`pow_half`], which switches to
//! base √q for odd doubled exponents and to rationals for negative ones.
//! Final results are asserted integral by the callers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `C(x, 2) = x(x−1)/2`, defined for every integer.
pub fn binom2(x: i64) -> i64 {
    x * (x - 1) / 2
}

/// Exact integer power `q^e`, `e ≥ 0`.
pub fn pow_u(q: u64, e: u64) -> BigInt {
    BigInt::from(q).pow(e as u32)
}

/// Exact rational power `q^e` for any integer `e`.
pub fn pow_i(q: u64, e: i64) -> BigRational {
    let p = pow_u(q, e.unsigned_abs());
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `q^{e2/2}` given the doubled exponent `e2`: integral powers stay in base
/// q, odd doubled exponents require √q. Panics if √q is needed but absent —
/// space construction guarantees it for every half-integer-parameter space.
pub fn pow_half(q: u64, sqrt_q: Option<u64>, e2: i64) -> BigRational {
    if e2 % 2 == 0 {
        pow_i(q, e2 / 2)
    } else {
        let s = sqrt_q.expect("half-integer exponent requires a square field order");
        debug_assert_eq!(s * s, q);
        pow_i(s, e2)
    }
}

/// The q-integer `[n]₁ = 1 + q + … + q^{n−1}` (so `[0]₁ = 0`).
pub fn q_int(n: i64, q: u64) -> BigInt {
    assert!(n >= 0, "q-integer of negative index is never needed: [{n}]");
    let mut acc = BigInt::zero();
    let mut p = BigInt::one();
    for _ in 0..n {
        acc += &p;
        p *= q;
    }
    acc
}

/// Gaussian binomial `[n choose k]_q`, exactly. Zero whenever `k < 0` or
/// `k > n` (the degenerate-range convention the closed formulas rely on).
pub fn gaussian_binomial(n: i64, k: i64, q: u64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= pow_u(q, (n - i) as u64) - 1;
        den *= pow_u(q, (i + 1) as u64) - 1;
    }
    let (quot, rem) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(rem.is_zero(), "Gaussian binomial must divide exactly");
    quot
}

/// Converts an exact rational that is known to be integral. `None` reports a
/// genuine non-integer, which callers treat as a falsified identity.
pub fn rational_to_int(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// Product `Π_{i=m0}^{m1} (q^{(a·i + b)/2} + 1)` with doubled exponent steps —
/// the ubiquitous “product of (q^{…+e}+1)” factor. Empty range gives 1.
pub fn prod_qpow_plus_one(q: u64, sqrt_q: Option<u64>, m0: i64, m1: i64, a2: i64, b2: i64) -> BigRational {
    let mut acc = BigRational::one();
    for i in m0..=m1 {
        acc *= pow_half(q, sqrt_q, a2 * i + b2) + BigRational::one();
    }
    acc
}

/// Sign `(−1)^x` as an exact rational.
pub fn sign_pow(x: i64) -> BigRational {
    if x.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// True iff the rational is a nonnegative integer — handy for count checks.
pub fn is_count(r: &BigRational) -> bool {
    r.is_integer() && !r.is_negative()
}
