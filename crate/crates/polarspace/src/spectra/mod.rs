//! Exact eigenvalues of the relation matrices on the module of a-spaces.
//!
//! The space of functions on totally isotropic n-spaces decomposes into
//! irreducible submodules V_{r,i} indexed by 0 ≤ r ≤ n, 0 ≤ i ≤ min(r, d−n);
//! every relation matrix acts on each V_{r,i} as an exact integer scalar.
//! This module evaluates those scalars three independent ways where the
//! theory provides them — closed forms, recursions, and assembled double
//! sums — so the test suite can play the routes against each other and
//! against brute-force matrix arithmetic.
//!
//! All q-exponents are carried doubled so that spaces with half-integer
//! parameter e (the Hermitian ones) stay exact; intermediate values live in
//! `BigRational` and every exported quantity is asserted integral.

pub mod annihilate;

use crate::geometry::PolarSpace;
use crate::qnum::{
    binom2, gaussian_binomial, pow_half, pow_i, q_int, rational_to_int, sign_pow,
    prod_qpow_plus_one,
};
use crate::scheme::{alpha_pair, gamma, PairClass};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// The numeric parameters of a polar space: order q (with its square root
/// when one exists), the doubled parameter 2e, and the rank d.
#[derive(Clone, Copy, Debug)]
pub struct SpaceParams {
    pub q: u64,
    pub sqrt_q: Option<u64>,
    pub e2: i64,
    pub d: i64,
}

impl From<&PolarSpace> for SpaceParams {
    fn from(space: &PolarSpace) -> Self {
        SpaceParams {
            q: space.q(),
            sqrt_q: space.sqrt_q(),
            e2: space.e2(),
            d: space.rank() as i64,
        }
    }
}

fn rat(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

fn expect_int(x: &BigRational, what: &str) -> BigInt {
    rational_to_int(x).unwrap_or_else(|| panic!("{what} must be an integer, got {x}"))
}

fn psi_in_domain(p: SpaceParams, r: i64, i: i64, s: i64, k: i64) -> bool {
    0 <= i && i <= r && 0 <= s && s <= r && r <= p.d - i && p.d - i <= k && k <= p.d.min(p.d - i + r - s)
}

/// Leaf scalar ψ_{d,r,i,s,k} by its closed form: a single alternating sum.
/// Zero outside the domain 0 ≤ s ≤ r ≤ d−i ≤ k ≤ min(d, d−i+r−s).
pub fn psi(p: SpaceParams, r: i64, i: i64, s: i64, k: i64) -> BigInt {
    if !psi_in_domain(p, r, i, s, k) {
        return BigInt::zero();
    }
    let SpaceParams { q, sqrt_q, e2, d } = p;
    let front_binom = gaussian_binomial(i, d - k, q);
    if front_binom.is_zero() {
        return BigInt::zero();
    }
    let j = k - d + i; // depth along the anti-diagonal direction
    let w = r - k + d - i - s; // remaining width of the summation
    let nu1 = binom2(j) + binom2(w) + i * w;
    let front = sign_pow(r - s)
        * pow_half(q, sqrt_q, 2 * nu1)
        * prod_qpow_plus_one(q, sqrt_q, 1, j, -2, 2 * i + e2)
        * rat(front_binom);
    let mut total = BigRational::zero();
    for l in 0..=w {
        let b1 = gaussian_binomial(d - k, l, q);
        let b2 = gaussian_binomial(r - i, k - d + s + l, q);
        if b1.is_zero() || b2.is_zero() {
            continue;
        }
        let nu2_doubled = l * (e2 - 2 + 2 * (k - d + i + s + l - r));
        total += sign_pow(l) * pow_half(q, sqrt_q, nu2_doubled) * rat(b1 * b2);
    }
    expect_int(&(front * total), "psi")
}

/// The same leaf scalar by a completely different route: seed the
/// anti-diagonal k − (d−i) = r − s with its product formula and fill the
/// rest of the grid by the three-term recursion
/// −[d−i+r−s−k] ψ(s,k) = q^{r−s−1}[s+1] ψ(s+1,k) + q^{d−i+r−s−k−1}[k−d+i+1] ψ(s,k+1).
pub fn psi_recursive(p: SpaceParams, r: i64, i: i64, s: i64, k: i64) -> BigInt {
    if !psi_in_domain(p, r, i, s, k) {
        return BigInt::zero();
    }
    let SpaceParams { q, sqrt_q, e2, d } = p;
    let anti_diagonal = |j: i64| -> BigRational {
        // ψ at s = r − j, k = d − i + j.
        sign_pow(j)
            * pow_half(q, sqrt_q, 2 * binom2(j))
            * rat(gaussian_binomial(i, j, q))
            * prod_qpow_plus_one(q, sqrt_q, 1, j, -2, 2 * i + e2)
    };
    // table[(s, k)] built from s = r downward, k descending from the diagonal.
    let mut table: BTreeMap<(i64, i64), BigRational> = BTreeMap::new();
    for ss in (s..=r).rev() {
        let kmax = p.d.min(d - i + r - ss);
        for kk in (k..=kmax).rev() {
            let value = if kk == d - i + r - ss {
                anti_diagonal(r - ss)
            } else {
                let up = table.get(&(ss + 1, kk)).cloned().unwrap_or_else(BigRational::zero);
                let right = table.get(&(ss, kk + 1)).cloned().unwrap_or_else(BigRational::zero);
                let lead = rat(q_int(d - i + r - ss - kk, q));
                let term_up = pow_i(q, r - ss - 1) * rat(q_int(ss + 1, q)) * up;
                let term_right = pow_i(q, d - i + r - ss - kk - 1) * rat(q_int(kk - d + i + 1, q)) * right;
                -(term_up + term_right) / lead
            };
            table.insert((ss, kk), value);
        }
    }
    expect_int(&table[&(s, k)], "psi (recursive)")
}

fn chi_in_domain(p: SpaceParams, i: i64, r: i64, n: i64, t: i64, l: i64) -> bool {
    0 <= t && t <= r && r <= n && n <= l && l <= p.d.min(r + n - t) && 0 <= i && i <= r.min(p.d - n)
}

/// Intermediate scalar χ_{d,i,r,n,t,ℓ}, zero outside its domain
/// 0 ≤ t ≤ r ≤ n ≤ ℓ ≤ min(d, r+n−t), 0 ≤ i ≤ min(r, d−n).
/// Base layer n = r is assembled from γ·ψ; higher layers follow the
/// recursion in n, solved ascending in ℓ.
pub fn chi(p: SpaceParams, i: i64, r: i64, n: i64, t: i64, l: i64) -> BigInt {
    if !chi_in_domain(p, i, r, n, t, l) {
        return BigInt::zero();
    }
    let SpaceParams { q, sqrt_q: _, e2: _, d } = p;
    // layer[m] maps (t, ℓ) to χ_{d,i,r,m,t,ℓ}.
    let mut layer: BTreeMap<(i64, i64), BigRational> = BTreeMap::new();
    for tt in 0..=r {
        for ll in r..=d.min(2 * r - tt) {
            let mut acc = BigRational::zero();
            for s in tt..=(d - i + tt - r) {
                for k in (d - i).max(ll)..=d.min(d - i + ll - r + tt - s) {
                    let g = gamma(q, r, d - i, s, k, r, tt, ll);
                    if g.is_zero() {
                        continue;
                    }
                    acc += rat(g * psi(p, r, i, s, k));
                }
            }
            layer.insert((tt, ll), acc);
        }
    }
    for m in (r + 1)..=n {
        let mut next: BTreeMap<(i64, i64), BigRational> = BTreeMap::new();
        for ll in m..=d.min(r + m) {
            for tt in 0..=r {
                if ll > d.min(r + m - tt) {
                    continue;
                }
                let prev_layer = layer.get(&(tt, ll - 1)).cloned().unwrap_or_else(BigRational::zero);
                let same_tplus = next.get(&(tt + 1, ll - 1)).cloned().unwrap_or_else(BigRational::zero);
                let same_t = next.get(&(tt, ll - 1)).cloned().unwrap_or_else(BigRational::zero);
                let rhs = rat(q_int(m - r, q)) * prev_layer
                    - pow_i(q, m - tt - 1) * rat(q_int(tt + 1, q)) * same_tplus
                    - rat(q_int(m + r - tt - ll + 1, q)) * same_t;
                let value = pow_i(q, tt + ll - r - m) / rat(q_int(ll - r, q)) * rhs;
                next.insert((tt, ll), value);
            }
        }
        layer = next;
    }
    expect_int(&layer[&(t, l)], "chi")
}

/// Closed form of χ at the corner (t, ℓ) = (r−1, n):
/// q^{d−i−n}([i](q^{i−1+e}+1) − [r]).
pub fn chi_corner_closed(p: SpaceParams, i: i64, r: i64, n: i64) -> BigInt {
    let SpaceParams { q, sqrt_q, e2, d } = p;
    let bracket = rat(q_int(i, q)) * (pow_half(q, sqrt_q, 2 * (i - 1) + e2) + BigRational::one())
        - rat(q_int(r, q));
    expect_int(&(pow_i(q, d - i - n) * bracket), "chi corner")
}

/// Closed form of χ for i = 1 at ℓ = n:
/// (−1)^{r−t} q^{C(r−t,2)+(r−t)(d−n−1)} ([r choose t] − (q^e+1)[r−1 choose t]).
pub fn chi_i1_at_n(p: SpaceParams, r: i64, n: i64, t: i64) -> BigInt {
    let SpaceParams { q, sqrt_q, e2, d } = p;
    let qe1 = pow_half(q, sqrt_q, e2) + BigRational::one();
    let bracket = rat(gaussian_binomial(r, t, q)) - qe1 * rat(gaussian_binomial(r - 1, t, q));
    let power = pow_half(q, sqrt_q, 2 * (binom2(r - t) + (r - t) * (d - n - 1)));
    expect_int(&(sign_pow(r - t) * power * bracket), "chi i=1 at n")
}

/// Closed form of χ for i = 1 at ℓ = n+1:
/// (−1)^{r−t} q^{C(r−t,2)+(r−t−1)(d−n−2)} [r−1 choose t] ·
/// ((q^e+1)(q^{d−t−2−n+r} + (q^{r−t−1}−1)[d−n−1]) − (q^r−1)[d−n−1]).
pub fn chi_i1_at_n_plus_1(p: SpaceParams, r: i64, n: i64, t: i64) -> BigInt {
    let SpaceParams { q, sqrt_q, e2, d } = p;
    let qe1 = pow_half(q, sqrt_q, e2) + BigRational::one();
    let dn1 = rat(q_int(d - n - 1, q));
    let inner = qe1 * (pow_i(q, d - t - 2 - n + r) + (pow_i(q, r - t - 1) - BigRational::one()) * dn1.clone())
        - (pow_i(q, r) - BigRational::one()) * dn1;
    let power = pow_i(q, binom2(r - t)) * pow_i(q, (r - t - 1) * (d - n - 2));
    let total = sign_pow(r - t) * power * rat(gaussian_binomial(r - 1, t, q)) * inner;
    expect_int(&total, "chi i=1 at n+1")
}

/// Eigenvalue of the relation matrix C_{n,n}^{s,k} on the submodule V_{r,i}
/// of the module of n-spaces, assembled as Σ_{t,ℓ} α·χ.
pub fn mu_general(p: SpaceParams, n: i64, (s, k): (i64, i64), (r, i): (i64, i64)) -> BigInt {
    let mut acc = BigInt::zero();
    for t in 0..=s {
        for l in (s + r - t)..=k.min(n + r - t) {
            let a = alpha_pair(p.q, p.sqrt_q, p.e2, p.d, (n, r), (t, l), n, (s, k));
            if a.is_zero() {
                continue;
            }
            acc += a * chi(p, i, r, n, t, l);
        }
    }
    acc
}

/// Eigenvalue on V_{r,i} of one of the two distance-one relations of
/// a-spaces, the ones with s = a−1. `span_isotropic` selects
/// k = a+1 (the span of the pair is again totally isotropic) over k = a.
pub fn mu_distance_one(p: SpaceParams, a: i64, r: i64, i: i64, span_isotropic: bool) -> BigInt {
    let SpaceParams { q, sqrt_q, e2, d } = p;
    let qe_im1 = pow_half(q, sqrt_q, 2 * (i - 1) + e2) + BigRational::one(); // q^{i−1+e}+1
    if span_isotropic {
        let first = rat(q_int(a - r, q) * q_int(d - a, q))
            * pow_i(q, 1)
            * (pow_half(q, sqrt_q, 2 * (d - a - 1) + e2) + BigRational::one());
        let inner = rat(q_int(r, q)) * (pow_i(q, d - a - i) - BigRational::one())
            - rat(q_int(i, q)) * pow_i(q, d - a - i) * qe_im1;
        expect_int(&(first + rat(q_int(a - r + 1, q)) * inner), "distance-one eigenvalue")
    } else {
        let first = rat(q_int(a - r, q)) * pow_half(q, sqrt_q, 2 * (2 * d - 2 * a) + e2);
        let second = (rat(q_int(r, q)) - rat(q_int(i, q)) * qe_im1) * pow_i(q, d - a - i);
        expect_int(&(first - second), "distance-one eigenvalue")
    }
}

/// Eigenvalues μ_{d,d−1,s,k,r,1} on V_{r,1} for the relations of
/// next-to-maximal spaces with k ∈ {d−1, d}, via the single-sum closed form.
pub fn mu_codim1(p: SpaceParams, s: i64, k: i64, r: i64) -> BigInt {
    let SpaceParams { q, sqrt_q, e2, d } = p;
    assert!(k == d - 1 || k == d, "closed form covers k = d−1 and k = d only");
    assert!((1..=d - 1).contains(&r));
    let qe1 = pow_half(q, sqrt_q, e2) + BigRational::one();
    let mut acc = BigRational::zero();
    for t in 0..=s {
        let outer = rat(gaussian_binomial(d - r - 1, s - t, q));
        if outer.is_zero() {
            continue;
        }
        let mu_prime = if k == d - 1 {
            rat(gaussian_binomial(r, t, q)) - qe1.clone() * rat(gaussian_binomial(r - 1, t, q))
        } else {
            qe1.clone() * rat(gaussian_binomial(r - 1, t, q))
        };
        let power = pow_half(
            q,
            sqrt_q,
            2 * (binom2(r - t) + binom2(d - r - s + t + 1)) + e2 * t - 2,
        );
        acc += outer * sign_pow(r - t) * power * mu_prime;
    }
    let front = pow_half(q, sqrt_q, e2 * (d - r - s - 1));
    expect_int(&(front * acc), "next-to-maximal eigenvalue")
}

/// Identify the submodule V_{r,i} of the a-space module from the eigenvalue
/// of the distance-one relation with non-isotropic span. The normalized
/// quantity ((q−1)λ + q^{2d−2a+e} − q^{d−a} + q^{d−a−1+e}) q^{a−d}
/// equals q^{d−r+e} − q^{r−i} + q^{i+e−1}, which separates all (r, i) pairs,
/// so the match is unique when it exists.
pub fn submodule_from_eigenvalue(p: SpaceParams, a: i64, lambda: &BigInt) -> Option<(i64, i64)> {
    let mut hit = None;
    for r in 0..=a {
        for i in 0..=r.min(p.d - a) {
            if &mu_distance_one(p, a, r, i, false) == lambda {
                debug_assert!(hit.is_none(), "distance-one eigenvalues separate the submodules");
                hit = Some((r, i));
                if !cfg!(debug_assertions) {
                    return hit;
                }
            }
        }
    }
    hit
}

/// The full eigenvalue table of one relation matrix on the module of
/// n-spaces: (r, i) → exact eigenvalue on V_{r,i}.
pub fn eigenvalue_table(p: SpaceParams, n: i64, class: PairClass) -> BTreeMap<(i64, i64), BigInt> {
    let mut out = BTreeMap::new();
    for r in 0..=n {
        for i in 0..=r.min(p.d - n) {
            out.insert((r, i), mu_general(p, n, (class.s as i64, class.k as i64), (r, i)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(q: u64, sqrt_q: Option<u64>, e2: i64, d: i64) -> SpaceParams {
        SpaceParams { q, sqrt_q, e2, d }
    }

    #[test]
    fn psi_worked_values() {
        // d=3, r=1, i=1: ψ(0,2) = q^e; d=3, r=2, i=1: ψ(0,2) = −q^{e+1}.
        for (q, sq, e2) in [(2, None, 0i64), (2, None, 2), (3, None, 2), (4, Some(2), 1), (2, None, 4)] {
            let p = params(q, sq, e2, 3);
            let qe = expect_int(&pow_half(q, sq, e2), "q^e");
            assert_eq!(psi(p, 1, 1, 0, 2), qe.clone(), "q={q} e2={e2}");
            assert_eq!(psi(p, 2, 1, 0, 2), -(qe * BigInt::from(q)), "q={q} e2={e2}");
        }
    }

    #[test]
    fn psi_base_cell_is_one() {
        for e2 in [0i64, 1, 2, 3, 4] {
            let sq = if e2 % 2 == 1 { Some(2) } else { None };
            let q = if e2 % 2 == 1 { 4 } else { 3 };
            for d in 2..=4 {
                for i in 0..=1i64 {
                    for r in i..=(d - i) {
                        let p = params(q, sq, e2, d);
                        assert_eq!(psi(p, r, i, r, d - i), BigInt::one(), "r={r} i={i} d={d} e2={e2}");
                    }
                }
            }
        }
    }

    #[test]
    fn psi_closed_equals_recursive_everywhere() {
        for (q, sq, e2) in [(2u64, None, 0i64), (3, None, 2), (4, Some(2), 1), (4, Some(2), 3), (2, None, 4)] {
            for d in 2..=4i64 {
                for i in 0..=d {
                    for r in i..=(d - i) {
                        for s in 0..=r {
                            for k in (d - i)..=d.min(d - i + r - s) {
                                let p = params(q, sq, e2, d);
                                assert_eq!(
                                    psi(p, r, i, s, k),
                                    psi_recursive(p, r, i, s, k),
                                    "q={q} e2={e2} d={d} r={r} i={i} s={s} k={k}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn psi_satisfies_recursion_identity() {
        // −[d−i+r−s−k]ψ(s,k) = q^{r−s−1}[s+1]ψ(s+1,k) + q^{d−i+r−s−k−1}[k−d+i+1]ψ(s,k+1)
        for (q, sq, e2) in [(2u64, None, 2i64), (3, None, 0), (4, Some(2), 1)] {
            let d = 4i64;
            let p = params(q, sq, e2, d);
            for i in 0..=2i64 {
                for r in i.max(1)..=(d - i) {
                    for s in 0..r {
                        for k in (d - i)..(d.min(d - i + r - s)) {
                            let lhs = -rat(q_int(d - i + r - s - k, q)) * rat(psi(p, r, i, s, k));
                            let rhs = pow_i(q, r - s - 1) * rat(q_int(s + 1, q)) * rat(psi(p, r, i, s + 1, k))
                                + pow_i(q, d - i + r - s - k - 1)
                                    * rat(q_int(k - d + i + 1, q))
                                    * rat(psi(p, r, i, s, k + 1));
                            assert_eq!(lhs, rhs, "q={q} e2={e2} r={r} i={i} s={s} k={k}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chi_worked_values() {
        let p = params(2, None, 2, 3);
        assert_eq!(chi(p, 1, 1, 2, 0, 2), BigInt::from(2));
        assert_eq!(chi(p, 1, 1, 1, 0, 1), BigInt::from(4));
    }

    #[test]
    fn chi_base_layer_matches_corner_closed_form() {
        for (q, sq, e2) in [(2u64, None, 0i64), (2, None, 2), (3, None, 2), (4, Some(2), 1), (3, None, 4)] {
            for d in 2..=4i64 {
                for n in 1..=(d - 1) {
                    for r in 1..=n {
                        for i in 0..=r.min(d - n) {
                            let p = params(q, sq, e2, d);
                            // Corner (t, ℓ) = (r−1, n) is inside the χ domain.
                            assert_eq!(
                                chi(p, i, r, n, r - 1, n),
                                chi_corner_closed(p, i, r, n),
                                "q={q} e2={e2} d={d} n={n} r={r} i={i}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chi_matches_i1_closed_forms() {
        for (q, sq, e2) in [(2u64, None, 0i64), (3, None, 2), (4, Some(2), 1)] {
            for d in 3..=4i64 {
                for n in 1..=(d - 1) {
                    for r in 1..=n {
                        if 1 > r.min(d - n) {
                            continue;
                        }
                        for t in 0..=r {
                            let p = params(q, sq, e2, d);
                            assert_eq!(
                                chi(p, 1, r, n, t, n),
                                chi_i1_at_n(p, r, n, t),
                                "ℓ=n q={q} e2={e2} d={d} n={n} r={r} t={t}"
                            );
                            if n + 1 <= d.min(r + n - t) {
                                assert_eq!(
                                    chi(p, 1, r, n, t, n + 1),
                                    chi_i1_at_n_plus_1(p, r, n, t),
                                    "ℓ=n+1 q={q} e2={e2} d={d} n={n} r={r} t={t}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quadrangle_point_eigenvalues() {
        // GQ(2,2): opposition has spectrum {8, −2, 2}, collinearity {6, 1, −3}.
        let p = params(2, None, 2, 2);
        let opp = eigenvalue_table(p, 1, PairClass { s: 0, k: 1 });
        assert_eq!(opp[&(0, 0)], BigInt::from(8));
        assert_eq!(opp[&(1, 0)], BigInt::from(-2));
        assert_eq!(opp[&(1, 1)], BigInt::from(2));
        let col = eigenvalue_table(p, 1, PairClass { s: 0, k: 2 });
        assert_eq!(col[&(0, 0)], BigInt::from(6));
        assert_eq!(col[&(1, 0)], BigInt::from(1));
        assert_eq!(col[&(1, 1)], BigInt::from(-3));
        // Identity relation acts as 1 everywhere.
        let id = eigenvalue_table(p, 1, PairClass { s: 1, k: 1 });
        assert!(id.values().all(|v| v.is_one()));
    }

    #[test]
    fn distance_one_closed_forms_match_mu_general() {
        for (q, sq, e2) in [(2u64, None, 0i64), (2, None, 2), (3, None, 2), (4, Some(2), 1), (2, None, 4)] {
            for d in 2..=3i64 {
                for a in 1..=d {
                    for r in 0..=a {
                        for i in 0..=r.min(d - a) {
                            let p = params(q, sq, e2, d);
                            if a + 1 <= d {
                                assert_eq!(
                                    mu_distance_one(p, a, r, i, true),
                                    mu_general(p, a, (a - 1, a + 1), (r, i)),
                                    "isotropic-span q={q} e2={e2} d={d} a={a} r={r} i={i}"
                                );
                            }
                            if a >= 1 {
                                assert_eq!(
                                    mu_distance_one(p, a, r, i, false),
                                    mu_general(p, a, (a - 1, a), (r, i)),
                                    "rigid-span q={q} e2={e2} d={d} a={a} r={r} i={i}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn isotropic_span_eigenvalue_on_v_r1_of_submax_spaces() {
        // On V_{r,1} of (d−1)-spaces the isotropic-span relation always acts
        // as −(q^e + 1).
        for (q, sq, e2) in [(2u64, None, 0i64), (3, None, 2), (4, Some(2), 1), (9, Some(3), 3), (2, None, 4)] {
            for d in 3..=5i64 {
                let p = params(q, sq, e2, d);
                let expected = -expect_int(
                    &(pow_half(q, sq, e2) + BigRational::one()),
                    "q^e+1",
                );
                for r in 1..=(d - 1) {
                    assert_eq!(mu_distance_one(p, d - 1, r, 1, true), expected, "q={q} e2={e2} d={d} r={r}");
                }
            }
        }
    }

    #[test]
    fn submax_closed_form_matches_mu_general() {
        for (q, sq, e2) in [(2u64, None, 0i64), (3, None, 2), (4, Some(2), 1)] {
            for d in 3..=4i64 {
                let p = params(q, sq, e2, d);
                for r in 1..=(d - 1) {
                    for s in 0..=(d - 1) {
                        for k in [d - 1, d] {
                            if k > d.min(2 * (d - 1) - s) || s > d - 1 || k < d - 1 {
                                continue;
                            }
                            if s == d - 1 {
                                continue; // identity class needs k = d−1 = s + ... skip degenerate
                            }
                            assert_eq!(
                                mu_codim1(p, s, k, r),
                                mu_general(p, d - 1, (s, k), (r, 1)),
                                "q={q} e2={e2} d={d} s={s} k={k} r={r}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn submodule_recovery_from_eigenvalue() {
        for (q, sq, e2) in [(2u64, None, 2i64), (3, None, 2), (4, Some(2), 1)] {
            for d in 2..=4i64 {
                for a in 1..=d {
                    let p = params(q, sq, e2, d);
                    for r in 0..=a {
                        for i in 0..=r.min(d - a) {
                            let lambda = mu_distance_one(p, a, r, i, false);
                            assert_eq!(
                                submodule_from_eigenvalue(p, a, &lambda),
                                Some((r, i)),
                                "q={q} e2={e2} d={d} a={a} r={r} i={i}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn valency_consistency_between_mu_and_counting() {
        // The eigenvalue on the trivial module V_{0,0} is the valency.
        use crate::scheme::alpha_counting;
        for (q, sq, e2) in [(2u64, None, 0i64), (3, None, 2), (4, Some(2), 1)] {
            for d in 2..=3i64 {
                for n in 1..=d {
                    for s in 0..=n {
                        for k in n..=d.min(2 * n - s) {
                            let p = params(q, sq, e2, d);
                            assert_eq!(
                                mu_general(p, n, (s, k), (0, 0)),
                                alpha_counting(q, sq, e2, d, n, n, s, k),
                                "q={q} e2={e2} d={d} n={n} s={s} k={k}"
                            );
                        }
                    }
                }
            }
        }
    }
}
