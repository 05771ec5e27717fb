//! Arithmetic in small finite fields GF(p^k) of odd characteristic.
//!
//! The toolkit works over GF(q) with q = p^k, p an odd prime, k <= 2 and
//! q <= 169.  Prime fields are residues mod p; quadratic extensions are
//! represented on the basis {1, t} where t is a root of a fixed irreducible
//! monic quadratic chosen from an internal table (and re-verified at
//! construction time).
//!
//! Elements are stored as a raw code in `0..q`: the residue itself for k = 1,
//! and `a0 + a1*p` for `a0 + a1*t` when k = 2.  [`FieldSpec`] carries the raw
//! arithmetic; [`FieldElem`] pairs a code with its spec for self-contained use.
//!
//! Also here: binomial coefficients mod p by Lucas' theorem, base-q digit
//! sums, and the Catalan-number congruence used by the middle-coefficient
//! construction at m = 2.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field size.
pub const MAX_Q: u32 = 169;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("extension degree {0} unsupported (need 1 or 2)")]
    BadExtension(u32),
    #[error("field size {0} exceeds the supported bound {MAX_Q}")]
    TooLarge(u64),
}

/// Table of irreducible quadratics t^2 + c over GF(p) for the supported p.
/// `c` is chosen so that -c is a non-square mod p; verified in `FieldSpec::new`.
const QUADRATIC_TABLE: [(u16, u16); 5] = [(3, 1), (5, 2), (7, 1), (11, 1), (13, 2)];

/// A finite field GF(p^k), p odd, k <= 2.  Copyable and cheap to pass around;
/// all arithmetic on raw element codes lives here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    p: u16,
    k: u8,
    q: u16,
    /// Constant coefficient c of the modulus t^2 + c (0 for prime fields).
    modulus_c0: u16,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^k).  Fails unless p is an odd prime, k is 1 or 2, and
    /// p^k <= 169.  For k = 2 the modulus comes from the internal table and is
    /// re-checked for irreducibility (no roots in GF(p)).
    pub fn new(p: u64, k: u32) -> Result<FieldSpec, GfError> {
        if !is_prime(p) || p == 2 {
            return Err(GfError::NotOddPrime(p));
        }
        if k == 0 || k > 2 {
            return Err(GfError::BadExtension(k));
        }
        let q = p.pow(k);
        if q > MAX_Q as u64 {
            return Err(GfError::TooLarge(q));
        }
        let modulus_c0 = if k == 1 {
            0
        } else {
            let c = QUADRATIC_TABLE
                .iter()
                .find(|&&(tp, _)| tp as u64 == p)
                .map(|&(_, c)| c)
                .expect("every p with p^2 <= 169 has a table entry");
            // t^2 + c must have no root: r^2 = -c mod p has no solution.
            let neg_c = (p - c as u64 % p) % p;
            assert!(
                (0..p).all(|r| r * r % p != neg_c),
                "table modulus t^2+{c} reducible over GF({p})"
            );
            c
        };
        Ok(FieldSpec {
            p: p as u16,
            k: k as u8,
            q: q as u16,
            modulus_c0,
        })
    }

    /// Prime field GF(p).
    pub fn prime(p: u64) -> Result<FieldSpec, GfError> {
        FieldSpec::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.p as u32
    }

    pub fn k(&self) -> u32 {
        self.k as u32
    }

    /// Field size q = p^k.
    pub fn q(&self) -> u32 {
        self.q as u32
    }

    /// All raw element codes, 0..q.
    pub fn raw_elems(&self) -> impl Iterator<Item = u16> {
        0..self.q
    }

    /// Embeds an integer via the prime subfield (least nonnegative residue).
    pub fn raw_from_int(&self, c: i64) -> u16 {
        let p = self.p as i64;
        (((c % p) + p) % p) as u16
    }

    /// Element from coordinates (a0 + a1*t); a1 must be 0 for prime fields.
    pub fn raw_from_coords(&self, a0: u32, a1: u32) -> u16 {
        assert!(self.k == 2 || a1 % self.p() == 0, "a1 != 0 in a prime field");
        (a0 % self.p() + (a1 % self.p()) * self.p()) as u16
    }

    fn coords(&self, a: u16) -> (u32, u32) {
        debug_assert!(a < self.q);
        (a as u32 % self.p(), a as u32 / self.p())
    }

    pub fn add_raw(&self, a: u16, b: u16) -> u16 {
        let p = self.p() as u32;
        let (a0, a1) = self.coords(a);
        let (b0, b1) = self.coords(b);
        ((a0 + b0) % p + ((a1 + b1) % p) * p) as u16
    }

    pub fn neg_raw(&self, a: u16) -> u16 {
        let p = self.p();
        let (a0, a1) = self.coords(a);
        ((p - a0) % p + ((p - a1) % p) * p) as u16
    }

    pub fn sub_raw(&self, a: u16, b: u16) -> u16 {
        self.add_raw(a, self.neg_raw(b))
    }

    pub fn mul_raw(&self, a: u16, b: u16) -> u16 {
        let p = self.p();
        if self.k == 1 {
            return (a as u32 * b as u32 % p) as u16;
        }
        // (a0 + a1 t)(b0 + b1 t) with t^2 = -c0.
        let (a0, a1) = self.coords(a);
        let (b0, b1) = self.coords(b);
        let c = self.modulus_c0 as u32;
        let r0 = (a0 * b0 + (p - c % p) % p * (a1 * b1 % p)) % p;
        let r1 = (a0 * b1 + a1 * b0) % p;
        (r0 + r1 * p) as u16
    }

    /// Scales by an integer (prime-subfield scalar).
    pub fn scale_raw(&self, a: u16, c: i64) -> u16 {
        self.mul_raw(a, self.raw_from_int(c))
    }

    pub fn pow_raw(&self, a: u16, mut e: u64) -> u16 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        // a^(q-1) = 1 for a != 0.
        e %= (self.q - 1) as u64;
        let mut base = a;
        let mut acc = 1u16;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse.  Panics on zero (caller contract).
    pub fn inv_raw(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero");
        self.pow_raw(a, (self.q - 2) as u64)
    }

    pub fn div_raw(&self, a: u16, b: u16) -> u16 {
        self.mul_raw(a, self.inv_raw(b))
    }

    /// q^i-power map.  On GF(q) itself this is the identity (Fermat); kept for
    /// interface symmetry with the polynomial-level Frobenius.
    pub fn frobenius_raw(&self, a: u16, _i: u32) -> u16 {
        a
    }

    /// p-power map (the generator of the Galois group for k = 2).
    pub fn char_frobenius_raw(&self, a: u16) -> u16 {
        self.pow_raw(a, self.p as u64)
    }

    /// Smallest raw code that generates the multiplicative group.
    pub fn primitive_root_raw(&self) -> u16 {
        for a in 1..self.q {
            let mut x = a;
            let mut ord = 1u32;
            while x != 1 {
                x = self.mul_raw(x, a);
                ord += 1;
            }
            if ord == (self.q - 1) as u32 {
                return a;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    /// Embeds a raw code of the prime field GF(p) into this field.
    pub fn embed_prime_raw(&self, a: u16) -> u16 {
        debug_assert!((a as u32) < self.p());
        a
    }

    pub fn elem(&self, c: i64) -> FieldElem {
        FieldElem {
            spec: *self,
            raw: self.raw_from_int(c),
        }
    }

    pub fn elem_from_raw(&self, raw: u16) -> FieldElem {
        assert!(raw < self.q, "raw code {} out of range for q={}", raw, self.q);
        FieldElem { spec: *self, raw }
    }

    /// Renders a raw code: the residue for prime fields, `a1*t+a0` for k = 2.
    pub fn render_raw(&self, a: u16) -> String {
        if self.k == 1 {
            return a.to_string();
        }
        let (a0, a1) = self.coords(a);
        match (a0, a1) {
            (_, 0) => a0.to_string(),
            (0, 1) => "t".to_string(),
            (0, _) => format!("{a1}*t"),
            (_, 1) => format!("t+{a0}"),
            _ => format!("{a1}*t+{a0}"),
        }
    }
}

/// A field element carrying its spec.  Arithmetic panics on mixed specs
/// (caller bug); construction of the spec itself is the fallible step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    spec: FieldSpec,
    raw: u16,
}

impl FieldElem {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn raw(&self) -> u16 {
        self.raw
    }

    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }

    fn same(&self, other: &FieldElem) -> FieldSpec {
        assert!(self.spec == other.spec, "mixed-field arithmetic");
        self.spec
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        let spec = self.same(other);
        spec.elem_from_raw(spec.add_raw(self.raw, other.raw))
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        let spec = self.same(other);
        spec.elem_from_raw(spec.sub_raw(self.raw, other.raw))
    }

    pub fn neg(&self) -> FieldElem {
        self.spec.elem_from_raw(self.spec.neg_raw(self.raw))
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        let spec = self.same(other);
        spec.elem_from_raw(spec.mul_raw(self.raw, other.raw))
    }

    pub fn inv(&self) -> FieldElem {
        self.spec.elem_from_raw(self.spec.inv_raw(self.raw))
    }

    pub fn div(&self, other: &FieldElem) -> FieldElem {
        let spec = self.same(other);
        spec.elem_from_raw(spec.div_raw(self.raw, other.raw))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.spec.elem_from_raw(self.spec.pow_raw(self.raw, e))
    }

    /// q^i-power map (identity on GF(q) by Fermat).
    pub fn frobenius(&self, i: u32) -> FieldElem {
        self.spec.elem_from_raw(self.spec.frobenius_raw(self.raw, i))
    }
}

impl std::fmt::Display for FieldElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.spec.render_raw(self.raw))
    }
}

/// Exact binomial coefficient for small arguments (digits below a prime <= 13).
fn small_binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u64 = 1;
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// C(n, r) mod p by Lucas' theorem: the digit-wise product of base-p binomials.
pub fn binomial_mod_p(n: u64, r: u64, p: u64) -> u64 {
    debug_assert!(is_prime(p));
    if r > n {
        return 0;
    }
    let (mut n, mut r) = (n, r);
    let mut acc = 1u64;
    while r > 0 || n > 0 {
        let (nd, rd) = (n % p, r % p);
        if rd > nd {
            return 0;
        }
        acc = acc * (small_binomial(nd, rd) % p) % p;
        n /= p;
        r /= p;
    }
    acc
}

/// Multinomial coefficient (sum parts)! / prod parts_i! mod p, as a product of
/// binomials.
pub fn multinomial_mod_p(parts: &[u64], p: u64) -> u64 {
    let mut total = 0u64;
    let mut acc = 1u64;
    for &part in parts {
        total += part;
        acc = acc * binomial_mod_p(total, part, p) % p;
        if acc == 0 {
            return 0;
        }
    }
    acc
}

/// Base-b digit sum (the q-weight of an exponent).
pub fn digit_sum(mut n: u64, b: u64) -> u64 {
    debug_assert!(b >= 2);
    let mut s = 0;
    while n > 0 {
        s += n % b;
        n /= b;
    }
    s
}

/// Base-p digits, least significant first.
pub fn digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % p);
        n /= p;
    }
    out
}

/// Exact Catalan number C(2j, j)/(j + 1); j <= 33 fits in u64 comfortably
/// for our range (j <= 6).
pub fn catalan(j: u64) -> u64 {
    small_binomial_u128(2 * j, j) / (j + 1)
}

fn small_binomial_u128(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Both sides of the mod-p Catalan congruence at field size q = p^k:
///
///   Cat(j)  ==  (-1)^j (q-1) (q-2-j)! / (j! (q-1-2j)!)   (mod p)
///
/// for 0 <= j <= (q-1)/2.  Returns (catalan side, closed-form side) as
/// residues in 0..p.  The closed form is evaluated exactly in integers first
/// (the quotient is integral) and reduced afterwards, so no modular division
/// by p-divisible factors can occur.
pub fn catalan_congruence(spec: &FieldSpec, j: u64) -> (u64, u64) {
    let q = spec.q() as u64;
    let p = spec.p() as u64;
    assert!(2 * j <= q - 1, "j out of range for q={q}");
    let lhs = catalan(j) % p;

    let fact = |n: u64| -> u128 { (1..=n).map(|i| i as u128).product::<u128>().max(1) };
    let num = (q - 1) as u128 * fact(q - 2 - j);
    let den = fact(j) * fact(q - 1 - 2 * j);
    assert!(num % den == 0, "closed form is not integral");
    let mut rhs = ((num / den) % p as u128) as u64;
    if j % 2 == 1 {
        rhs = (p - rhs) % p;
    }
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn specs() -> Vec<FieldSpec> {
        vec![
            FieldSpec::prime(3).unwrap(),
            FieldSpec::prime(5).unwrap(),
            FieldSpec::prime(7).unwrap(),
            FieldSpec::prime(13).unwrap(),
            FieldSpec::new(3, 2).unwrap(),
            FieldSpec::new(5, 2).unwrap(),
            FieldSpec::new(13, 2).unwrap(),
        ]
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldSpec::prime(2), Err(GfError::NotOddPrime(2)));
        assert_eq!(FieldSpec::prime(9), Err(GfError::NotOddPrime(9)));
        assert_eq!(FieldSpec::new(3, 3), Err(GfError::BadExtension(3)));
        assert_eq!(FieldSpec::new(17, 2), Err(GfError::TooLarge(289)));
        assert!(FieldSpec::new(13, 2).is_ok());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        // Full associativity/distributivity sweep for GF(9) and GF(13).
        for spec in [FieldSpec::new(3, 2).unwrap(), FieldSpec::prime(13).unwrap()] {
            for a in spec.raw_elems() {
                for b in spec.raw_elems() {
                    assert_eq!(spec.add_raw(a, b), spec.add_raw(b, a));
                    assert_eq!(spec.mul_raw(a, b), spec.mul_raw(b, a));
                    for c in spec.raw_elems() {
                        assert_eq!(
                            spec.add_raw(spec.add_raw(a, b), c),
                            spec.add_raw(a, spec.add_raw(b, c))
                        );
                        assert_eq!(
                            spec.mul_raw(spec.mul_raw(a, b), c),
                            spec.mul_raw(a, spec.mul_raw(b, c))
                        );
                        assert_eq!(
                            spec.mul_raw(a, spec.add_raw(b, c)),
                            spec.add_raw(spec.mul_raw(a, b), spec.mul_raw(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn inverses_and_units() {
        for spec in specs() {
            for a in spec.raw_elems().skip(1) {
                let inv = spec.inv_raw(a);
                assert_eq!(spec.mul_raw(a, inv), 1, "a={a} in q={}", spec.q());
            }
            assert_eq!(spec.neg_raw(0), 0);
            for a in spec.raw_elems() {
                assert_eq!(spec.add_raw(a, spec.neg_raw(a)), 0);
            }
        }
    }

    #[test]
    fn frobenius_fixes_field_elements() {
        for spec in specs() {
            for a in spec.raw_elems() {
                assert_eq!(spec.frobenius_raw(a, 1), a);
                assert_eq!(spec.pow_raw(a, spec.q() as u64), a);
            }
        }
    }

    #[test]
    fn char_frobenius_is_an_involution_on_quadratic_extensions() {
        let spec = FieldSpec::new(3, 2).unwrap();
        for a in spec.raw_elems() {
            let fa = spec.char_frobenius_raw(a);
            assert_eq!(spec.char_frobenius_raw(fa), a);
            // Additive: (a+b)^p = a^p + b^p.
            for b in spec.raw_elems() {
                assert_eq!(
                    spec.char_frobenius_raw(spec.add_raw(a, b)),
                    spec.add_raw(fa, spec.char_frobenius_raw(b))
                );
            }
        }
    }

    #[test]
    fn primitive_roots_generate() {
        for spec in specs() {
            let g = spec.primitive_root_raw();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1u16;
            for _ in 0..spec.q() - 1 {
                x = spec.mul_raw(x, g);
                seen.insert(x);
            }
            assert_eq!(seen.len() as u32, spec.q() - 1);
        }
        assert_eq!(FieldSpec::prime(3).unwrap().primitive_root_raw(), 2);
        assert_eq!(FieldSpec::prime(5).unwrap().primitive_root_raw(), 2);
        assert_eq!(FieldSpec::prime(7).unwrap().primitive_root_raw(), 3);
    }

    #[test]
    fn binomial_matches_bigint_oracle_up_to_200() {
        for p in [3u64, 5, 7, 13] {
            for n in 0..=200u64 {
                // C(n, r) row by exact big-integer recurrence.
                let mut row = BigUint::from(1u32);
                for r in 0..=n {
                    let expect = (&row % p).to_u64_digits().first().copied().unwrap_or(0);
                    assert_eq!(
                        binomial_mod_p(n, r, p),
                        expect,
                        "C({n},{r}) mod {p}"
                    );
                    if r < n {
                        row = row * (n - r) / (r + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn binomial_vanishing_below_p_powers() {
        // C(p^s, i) = 0 mod p for 0 < i < p^s: the freshman's-dream exponents.
        for p in [3u64, 5, 7] {
            for s in 1..=3u32 {
                let n = p.pow(s);
                for i in 1..n {
                    assert_eq!(binomial_mod_p(n, i, p), 0, "C({n},{i}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn multinomial_agrees_with_binomial_products() {
        assert_eq!(multinomial_mod_p(&[2, 1], 3), binomial_mod_p(3, 1, 3));
        assert_eq!(multinomial_mod_p(&[4], 5), 1);
        assert_eq!(multinomial_mod_p(&[], 7), 1);
        // 6!/(2!2!2!) = 90; 90 mod 7 = 6.
        assert_eq!(multinomial_mod_p(&[2, 2, 2], 7), 6);
    }

    #[test]
    fn digit_utilities() {
        assert_eq!(digit_sum(80, 3), 8); // 80 = (2,2,2,2) base 3
        assert_eq!(digit_sum(81, 3), 1);
        assert_eq!(digits(80, 3), vec![2, 2, 2, 2]);
        assert_eq!(digits(0, 3), Vec::<u64>::new());
    }

    #[test]
    fn catalan_values() {
        assert_eq!(
            (0..7).map(catalan).collect::<Vec<_>>(),
            vec![1, 1, 2, 5, 14, 42, 132]
        );
    }

    #[test]
    fn catalan_congruence_holds_across_supported_fields() {
        for (p, k) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let spec = FieldSpec::new(p, k).unwrap();
            let q = spec.q() as u64;
            for j in 0..=(q - 1) / 2 {
                let (lhs, rhs) = catalan_congruence(&spec, j);
                assert_eq!(lhs, rhs, "q={q} j={j}");
            }
        }
    }

    #[test]
    fn catalan_congruence_worked_instance() {
        // q = 7, j = 1: Cat(1) = 1; (-1)(6)(4!)/(1!4!) = -6 = 1 mod 7.
        let spec = FieldSpec::prime(7).unwrap();
        assert_eq!(catalan_congruence(&spec, 1), (1, 1));
    }

    #[test]
    fn rendering_quadratic_extension() {
        let spec = FieldSpec::new(3, 2).unwrap();
        assert_eq!(spec.render_raw(0), "0");
        assert_eq!(spec.render_raw(2), "2");
        assert_eq!(spec.render_raw(3), "t");
        assert_eq!(spec.render_raw(5), "t+2");
        assert_eq!(spec.render_raw(7), "2*t+1");
    }

    proptest! {
        #[test]
        fn prop_pow_matches_repeated_multiplication(a in 0u16..13, e in 0u64..40) {
            let spec = FieldSpec::prime(13).unwrap();
            let mut acc = 1u16;
            for _ in 0..e {
                acc = spec.mul_raw(acc, a);
            }
            prop_assert_eq!(spec.pow_raw(a, e), acc);
        }

        #[test]
        fn prop_sub_then_add_roundtrips(a in 0u16..25, b in 0u16..25) {
            let spec = FieldSpec::new(5, 2).unwrap();
            let d = spec.sub_raw(a, b);
            prop_assert_eq!(spec.add_raw(d, b), a);
        }
    }
}
