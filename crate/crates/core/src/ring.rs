//! Sparse multivariate polynomial arithmetic over GF(q).
//!
//! Two polynomial flavours live here.  [`Polynomial`] is the working algebra
//! S_m = F_q[y_1..y_m, x_m..x_1] on a hyperbolic frame of n = 2m variables
//! ordered y_1 > ... > y_m > x_m > ... > x_1 (optionally extended by auxiliary
//! variables that sort below x_1).  [`TPolynomial`] is the presentation side
//! F_q[T_0..T_k], where T_i stands for the i-th invariant and carries the
//! S-degree weight q^i + 1; its lead terms are taken in weighted grevlex.
//!
//! Monomials are packed into a single `u64` key, most significant variable in
//! the high bits, so integer order on keys is exactly lex and monomial
//! products are integer additions.  Terms are kept as a vector sorted by key:
//! the last entry is the lex lead term, addition is a linear merge,
//! multiplication accumulates into a hash map and re-sorts, and exact
//! division runs a heap-merge over quotient-times-divisor streams.  This keeps
//! the orbit-product constructions (hundreds of thousands of terms at m = 3)
//! inside the acceptance-time budgets on a single core.  The exponent-vector
//! type [`Monomial`] stays on the public surface; packing is internal.

use crate::gf::FieldSpec;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("division failed: lead term {remainder_lt} of the remainder is not divisible by {divisor_lt}")]
    NotDivisible {
        remainder_lt: String,
        divisor_lt: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Multiplicative hash for u64 monomial keys; the polynomial multiplier is
/// the hot path and the default hasher is measurably too slow for it.
#[derive(Default)]
pub(crate) struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x517c_c1b7_2722_0a95);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = (self.0 ^ x).wrapping_mul(0x517c_c1b7_2722_0a95);
        self.0 = self.0.rotate_left(26);
    }
}

pub(crate) type KeyMap<V> = HashMap<u64, V, BuildHasherDefault<KeyHasher>>;

/// The variable frame of S_m: y_1..y_m at positions 0..m, then x_m..x_1 at
/// positions m..2m, then any auxiliary variables.  Position 0 holds the
/// largest variable.  The frame also fixes the exponent packing: 10 bits per
/// variable up to six slots, 8 bits up to eight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarFrame {
    m: u32,
    aux: Vec<String>,
    bits: u32,
}

impl VarFrame {
    pub fn new(m: u32) -> VarFrame {
        assert!(m >= 1, "need at least one hyperbolic pair");
        let mut f = VarFrame {
            m,
            aux: Vec::new(),
            bits: 0,
        };
        f.bits = f.pick_bits();
        f
    }

    fn pick_bits(&self) -> u32 {
        let len = (2 * self.m) as usize + self.aux.len();
        assert!(len <= 8, "at most eight variable slots are supported");
        if len <= 6 {
            10
        } else {
            8
        }
    }

    /// Extends the frame with auxiliary variables ranked below x_1.
    pub fn with_aux(&self, names: &[&str]) -> VarFrame {
        let mut aux = self.aux.clone();
        aux.extend(names.iter().map(|s| s.to_string()));
        let mut f = VarFrame {
            m: self.m,
            aux,
            bits: 0,
        };
        f.bits = f.pick_bits();
        f
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        2 * self.m
    }

    /// Total number of variable slots including auxiliaries.
    pub fn len(&self) -> usize {
        (2 * self.m) as usize + self.aux.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest representable exponent under the packing.
    pub fn max_exponent(&self) -> u32 {
        (1 << self.bits) - 1
    }

    /// Position of y_i (1-based i <= m).
    pub fn pos_y(&self, i: u32) -> usize {
        assert!((1..=self.m).contains(&i));
        (i - 1) as usize
    }

    /// Position of x_i (1-based i <= m).
    pub fn pos_x(&self, i: u32) -> usize {
        assert!((1..=self.m).contains(&i));
        (2 * self.m - i) as usize
    }

    /// Position of an auxiliary variable by name.
    pub fn pos_aux(&self, name: &str) -> usize {
        (2 * self.m) as usize
            + self
                .aux
                .iter()
                .position(|a| a == name)
                .unwrap_or_else(|| panic!("no auxiliary variable {name}"))
    }

    pub fn var_name(&self, pos: usize) -> String {
        let m = self.m as usize;
        if pos < m {
            format!("y{}", pos + 1)
        } else if pos < 2 * m {
            format!("x{}", 2 * m - pos)
        } else {
            self.aux[pos - 2 * m].clone()
        }
    }

    /// Resolves a variable name to its position.
    pub fn pos_of_name(&self, name: &str) -> Option<usize> {
        (0..self.len()).find(|&p| self.var_name(p) == name)
    }

    #[inline]
    pub(crate) fn shift(&self, pos: usize) -> u32 {
        self.bits * (self.len() - 1 - pos) as u32
    }

    #[inline]
    pub(crate) fn field_mask(&self) -> u64 {
        (1u64 << self.bits) - 1
    }

    #[inline]
    pub(crate) fn pack_slice(&self, exps: &[u32]) -> u64 {
        debug_assert_eq!(exps.len(), self.len());
        let mut key = 0u64;
        for (pos, &e) in exps.iter().enumerate() {
            assert!(e <= self.max_exponent(), "exponent {e} overflows the packing");
            key |= (e as u64) << self.shift(pos);
        }
        key
    }

    #[inline]
    pub(crate) fn exp_at(&self, key: u64, pos: usize) -> u32 {
        ((key >> self.shift(pos)) & self.field_mask()) as u32
    }

    #[inline]
    pub(crate) fn unpack(&self, key: u64) -> Monomial {
        Monomial((0..self.len()).map(|p| self.exp_at(key, p)).collect())
    }

    #[inline]
    pub(crate) fn key_degree(&self, key: u64) -> u64 {
        (0..self.len()).map(|p| self.exp_at(key, p) as u64).sum()
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.var_name(i)
                } else {
                    format!("{}^{}", self.var_name(i), e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// An exponent vector, most significant variable first.  The derived `Ord` is
/// lex for vectors of equal length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(len: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, len))
    }

    pub fn var(len: usize, pos: usize, e: u32) -> Monomial {
        let mut v = SmallVec::from_elem(0, len);
        v[pos] = e;
        Monomial(v)
    }

    pub fn from_exps(exps: &[u32]) -> Monomial {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn deg(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_deg(&self, weights: &[u64]) -> u64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b)
    }

    /// other / self, when divisible.
    pub fn div_into(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(
                other
                    .0
                    .iter()
                    .zip(&self.0)
                    .map(|(&b, &a)| b - a)
                    .collect(),
            ))
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial(self.0.iter().map(|&a| a * e).collect())
    }
}

/// Monomial orders on exponent vectors stored most-significant-variable
/// first.  Grevlex breaks total-degree ties at the smallest variable: the
/// monomial with the smaller exponent at the last differing position wins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    Grevlex,
    /// Grevlex on weighted degree; the weight vector matches the frame.
    WeightedGrevlex(Vec<u64>),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => match a.deg().cmp(&b.deg()) {
                Ordering::Equal => grevlex_tiebreak(a, b),
                c => c,
            },
            MonomialOrder::WeightedGrevlex(w) => {
                match a.weighted_deg(w).cmp(&b.weighted_deg(w)) {
                    Ordering::Equal => grevlex_tiebreak(a, b),
                    c => c,
                }
            }
        }
    }
}

/// On equal (weighted) degree: scan from the smallest variable; at the first
/// difference the smaller exponent belongs to the larger monomial.
fn grevlex_tiebreak(a: &Monomial, b: &Monomial) -> Ordering {
    for (ea, eb) in a.0.iter().rev().zip(b.0.iter().rev()) {
        match ea.cmp(eb) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// A sparse polynomial over GF(q) on a [`VarFrame`].  Terms are held as a
/// vector of (packed monomial, coefficient) sorted ascending by key, i.e. in
/// increasing lex order; the last entry is the lex lead term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    frame: VarFrame,
    spec: FieldSpec,
    terms: Vec<(u64, u16)>,
}

impl Polynomial {
    pub fn zero(frame: &VarFrame, spec: &FieldSpec) -> Polynomial {
        Polynomial {
            frame: frame.clone(),
            spec: *spec,
            terms: Vec::new(),
        }
    }

    pub fn constant(frame: &VarFrame, spec: &FieldSpec, c: i64) -> Polynomial {
        let mut p = Polynomial::zero(frame, spec);
        let raw = spec.raw_from_int(c);
        if raw != 0 {
            p.terms.push((0, raw));
        }
        p
    }

    pub fn one(frame: &VarFrame, spec: &FieldSpec) -> Polynomial {
        Polynomial::constant(frame, spec, 1)
    }

    /// The variable at `pos` as a polynomial.
    pub fn var(frame: &VarFrame, spec: &FieldSpec, pos: usize) -> Polynomial {
        Polynomial::from_term(frame, spec, Monomial::var(frame.len(), pos, 1), 1)
    }

    pub fn from_term(frame: &VarFrame, spec: &FieldSpec, mono: Monomial, raw: u16) -> Polynomial {
        let mut p = Polynomial::zero(frame, spec);
        if raw != 0 {
            p.terms.push((frame.pack_slice(&mono.0), raw));
        }
        p
    }

    /// Builds from unnormalized (key, coefficient) pairs: sorts, combines
    /// duplicates mod p, drops zeros.
    pub(crate) fn from_raw_terms(
        frame: &VarFrame,
        spec: &FieldSpec,
        mut raw: Vec<(u64, u16)>,
    ) -> Polynomial {
        raw.sort_unstable_by_key(|&(k, _)| k);
        let mut terms: Vec<(u64, u16)> = Vec::with_capacity(raw.len());
        for (k, c) in raw {
            if let Some(last) = terms.last_mut() {
                if last.0 == k {
                    last.1 = spec.add_raw(last.1, c);
                    continue;
                }
            }
            terms.push((k, c));
        }
        terms.retain(|&(_, c)| c != 0);
        Polynomial {
            frame: frame.clone(),
            spec: *spec,
            terms,
        }
    }

    pub(crate) fn from_key_map(frame: &VarFrame, spec: &FieldSpec, map: KeyMap<u16>) -> Polynomial {
        let mut terms: Vec<(u64, u16)> = map.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable_by_key(|&(k, _)| k);
        Polynomial {
            frame: frame.clone(),
            spec: *spec,
            terms,
        }
    }

    pub fn frame(&self) -> &VarFrame {
        &self.frame
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn packed_terms(&self) -> &[(u64, u16)] {
        &self.terms
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, u16)> + '_ {
        self.terms.iter().map(|&(k, c)| (self.frame.unpack(k), c))
    }

    /// Total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms
            .iter()
            .map(|&(k, _)| self.frame.key_degree(k))
            .max()
    }

    /// Some(d) when every term has total degree d.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut degs = self.terms.iter().map(|&(k, _)| self.frame.key_degree(k));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    fn assert_compatible(&self, other: &Polynomial) {
        assert!(
            self.frame == other.frame && self.spec == other.spec,
            "mixed frames or fields in polynomial arithmetic"
        );
    }

    /// Guards against packed-field overflow in a product: the per-variable
    /// maxima of the factors must sum below the field capacity.
    fn assert_product_fits(&self, other: &Polynomial) {
        let cap = self.frame.max_exponent();
        for pos in 0..self.frame.len() {
            let ma = self
                .terms
                .iter()
                .map(|&(k, _)| self.frame.exp_at(k, pos))
                .max()
                .unwrap_or(0);
            let mb = other
                .terms
                .iter()
                .map(|&(k, _)| other.frame.exp_at(k, pos))
                .max()
                .unwrap_or(0);
            assert!(
                ma + mb <= cap,
                "product exponent {} + {} overflows packing at {}",
                ma,
                mb,
                self.frame.var_name(pos)
            );
        }
    }

    /// Adds `raw * mono` in place (sorted insert; fine for incremental
    /// construction of small polynomials).
    pub fn add_term(&mut self, mono: Monomial, raw: u16) {
        if raw == 0 {
            return;
        }
        let key = self.frame.pack_slice(&mono.0);
        match self.terms.binary_search_by_key(&key, |&(k, _)| k) {
            Ok(i) => {
                let c = self.spec.add_raw(self.terms[i].1, raw);
                if c == 0 {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = c;
                }
            }
            Err(i) => self.terms.insert(i, (key, raw)),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_compatible(other);
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ka, ca) = self.terms[i];
            let (kb, cb) = other.terms[j];
            match ka.cmp(&kb) {
                Ordering::Less => {
                    terms.push((ka, ca));
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push((kb, cb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.spec.add_raw(ca, cb);
                    if c != 0 {
                        terms.push((ka, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        Polynomial {
            frame: self.frame.clone(),
            spec: self.spec,
            terms,
        }
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for (_, c) in out.terms.iter_mut() {
            *c = self.spec.neg_raw(*c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> Polynomial {
        self.scale_raw(self.spec.raw_from_int(c))
    }

    pub fn scale_raw(&self, raw: u16) -> Polynomial {
        if raw == 0 {
            return Polynomial::zero(&self.frame, &self.spec);
        }
        let mut out = self.clone();
        for (_, c) in out.terms.iter_mut() {
            *c = self.spec.mul_raw(*c, raw);
        }
        out
    }

    pub fn mul_term(&self, mono: &Monomial, raw: u16) -> Polynomial {
        if raw == 0 {
            return Polynomial::zero(&self.frame, &self.spec);
        }
        let shift = self.frame.pack_slice(&mono.0);
        let mut out = self.clone();
        for (k, c) in out.terms.iter_mut() {
            *k += shift;
            *c = self.spec.mul_raw(*c, raw);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_compatible(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.frame, &self.spec);
        }
        self.assert_product_fits(other);
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.terms.len() == 1 {
            let (k, c) = small.terms[0];
            let mut out = big.clone();
            for (bk, bc) in out.terms.iter_mut() {
                *bk += k;
                *bc = self.spec.mul_raw(*bc, c);
            }
            return out;
        }
        let spec = self.spec;
        let mut map: KeyMap<u16> =
            KeyMap::with_capacity_and_hasher(big.terms.len() * 2, Default::default());
        for &(ks, cs) in &small.terms {
            for &(kb, cb) in &big.terms {
                let prod = spec.mul_raw(cs, cb);
                let e = map.entry(ks + kb).or_insert(0);
                *e = spec.add_raw(*e, prod);
            }
        }
        Polynomial::from_key_map(&self.frame, &spec, map)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.frame, &self.spec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Lead term (monomial, coefficient) under an order; None when zero.
    pub fn lead_term(&self, order: &MonomialOrder) -> Option<(Monomial, u16)> {
        match order {
            MonomialOrder::Lex => self.lead_term_lex(),
            _ => self
                .terms
                .iter()
                .map(|&(k, c)| (self.frame.unpack(k), c))
                .max_by(|(a, _), (b, _)| order.cmp(a, b)),
        }
    }

    pub fn lead_term_lex(&self) -> Option<(Monomial, u16)> {
        self.terms
            .last()
            .map(|&(k, c)| (self.frame.unpack(k), c))
    }

    /// Exact division under lex via a heap merge of the remainder streams:
    /// total work is |f| + |quotient| * |divisor| term operations.  Errors
    /// with the offending lead term if `divisor` does not divide `self`.
    pub fn exact_divide(&self, divisor: &Polynomial) -> Result<Polynomial, RingError> {
        self.assert_compatible(divisor);
        let &(glt_key, glt_coeff) = divisor
            .terms
            .last()
            .expect("division by the zero polynomial");
        let glt_inv = self.spec.inv_raw(glt_coeff);
        let g_rest = &divisor.terms[..divisor.terms.len() - 1];
        let frame = &self.frame;
        let spec = self.spec;

        // Streams: id 0 walks self (descending); id i >= 1 walks quotient
        // term i-1 times g_rest (descending).  Each stream keeps at most one
        // entry in the heap.
        struct QStream {
            q_key: u64,
            q_coeff: u16,
            /// Next index into g_rest, walking downward; usize::MAX = done.
            next: usize,
        }
        let mut streams: Vec<QStream> = Vec::new();
        let mut quotient_desc: Vec<(u64, u16)> = Vec::new();
        let mut heap: BinaryHeap<(u64, u32)> = BinaryHeap::new();
        let mut f_next = self.terms.len();
        if f_next > 0 {
            f_next -= 1;
            heap.push((self.terms[f_next].0, 0));
        }

        while let Some(&(key, _)) = heap.peek() {
            // Drain every stream entry carrying this monomial.
            let mut coeff: u16 = 0;
            while let Some(&(k, sid)) = heap.peek() {
                if k != key {
                    break;
                }
                heap.pop();
                if sid == 0 {
                    coeff = spec.add_raw(coeff, self.terms[f_next].1);
                    if f_next > 0 {
                        f_next -= 1;
                        heap.push((self.terms[f_next].0, 0));
                    }
                } else {
                    let s = &mut streams[(sid - 1) as usize];
                    let (gk, gc) = g_rest[s.next];
                    debug_assert_eq!(s.q_key + gk, k);
                    coeff = spec.sub_raw(coeff, spec.mul_raw(s.q_coeff, gc));
                    if s.next > 0 {
                        s.next -= 1;
                        heap.push((s.q_key + g_rest[s.next].0, sid));
                    }
                }
            }
            if coeff == 0 {
                continue;
            }
            // The surviving monomial must be divisible by the divisor's lt.
            let divisible = (0..frame.len())
                .all(|p| frame.exp_at(key, p) >= frame.exp_at(glt_key, p));
            if !divisible {
                return Err(RingError::NotDivisible {
                    remainder_lt: frame.render_monomial(&frame.unpack(key)),
                    divisor_lt: frame.render_monomial(&frame.unpack(glt_key)),
                });
            }
            let q_key = key - glt_key;
            let q_coeff = spec.mul_raw(coeff, glt_inv);
            quotient_desc.push((q_key, q_coeff));
            if !g_rest.is_empty() {
                let next = g_rest.len() - 1;
                streams.push(QStream {
                    q_key,
                    q_coeff,
                    next,
                });
                heap.push((q_key + g_rest[next].0, streams.len() as u32));
            }
        }
        quotient_desc.reverse();
        Ok(Polynomial {
            frame: frame.clone(),
            spec,
            terms: quotient_desc,
        })
    }

    /// Divides by a product of factors, smallest first, so that division by
    /// an orbit product costs a chain of near-linear passes instead of one
    /// quadratic one.
    pub fn exact_divide_factors(&self, factors: &[Polynomial]) -> Result<Polynomial, RingError> {
        let mut order: Vec<&Polynomial> = factors.iter().collect();
        order.sort_by_key(|f| f.num_terms());
        let mut cur = self.clone();
        for f in order {
            cur = cur.exact_divide(f)?;
        }
        Ok(cur)
    }

    /// Simultaneous substitution: variable at position i is replaced by
    /// `images[i]`.  Images live in a common frame (may differ from self's).
    /// Powers of the images are cached per exponent chain.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.frame.len(), "one image per variable");
        let tframe = images[0].frame.clone();
        let tspec = images[0].spec;
        for im in images {
            assert!(
                im.frame == tframe && im.spec == tspec,
                "images in mixed frames"
            );
        }
        // cache[i] holds successive powers images[i]^0, ^1, ^2, ...
        let mut cache: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|_| vec![Polynomial::one(&tframe, &tspec)])
            .collect();
        let mut acc_terms: Vec<(u64, u16)> = Vec::new();
        let mut out = Polynomial::zero(&tframe, &tspec);
        for &(key, c) in &self.terms {
            let mut acc = Polynomial::constant(&tframe, &tspec, 0);
            acc.terms.push((0, c));
            for pos in 0..self.frame.len() {
                let e = self.frame.exp_at(key, pos);
                if e == 0 {
                    continue;
                }
                while cache[pos].len() <= e as usize {
                    let next = cache[pos].last().unwrap().mul(&images[pos]);
                    cache[pos].push(next);
                }
                acc = acc.mul(&cache[pos][e as usize]);
                if acc.is_zero() {
                    break;
                }
            }
            acc_terms.extend_from_slice(&acc.terms);
            if acc_terms.len() > 1 << 20 {
                out = out.add(&Polynomial::from_raw_terms(&tframe, &tspec, acc_terms));
                acc_terms = Vec::new();
            }
        }
        out.add(&Polynomial::from_raw_terms(&tframe, &tspec, acc_terms))
    }

    /// q^i-power map: raises the polynomial to the q^i power by scaling all
    /// exponents (coefficients are fixed by Fermat).
    pub fn frobenius(&self, i: u32) -> Polynomial {
        let qi = self.spec.q().checked_pow(i).expect("q^i fits in u32");
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(k, c) in &self.terms {
            let mono: Vec<u32> = (0..self.frame.len())
                .map(|p| self.frame.exp_at(k, p) * qi)
                .collect();
            terms.push((self.frame.pack_slice(&mono), c));
        }
        Polynomial {
            frame: self.frame.clone(),
            spec: self.spec,
            terms,
        }
    }

    /// Evaluates at a point with coordinates in `point_spec` (an extension of
    /// the coefficient field's prime field; coefficients embed via residues).
    pub fn eval_raw(&self, point: &[u16], point_spec: &FieldSpec) -> u16 {
        assert_eq!(point.len(), self.frame.len());
        assert_eq!(self.spec.p(), point_spec.p());
        assert_eq!(self.spec.k(), 1, "evaluation embeds prime-field coefficients");
        let mut acc = 0u16;
        for &(k, c) in &self.terms {
            let mut t = point_spec.embed_prime_raw(c);
            for (pos, &pv) in point.iter().enumerate() {
                let e = self.frame.exp_at(k, pos);
                if e > 0 {
                    t = point_spec.mul_raw(t, point_spec.pow_raw(pv, e as u64));
                }
            }
            acc = point_spec.add_raw(acc, t);
        }
        acc
    }

    /// Collects coefficients by the exponent of the variable at `pos`: the
    /// entry at key e is the coefficient of var^e (with that slot zeroed).
    pub fn coeffs_by_var(&self, pos: usize) -> BTreeMap<u32, Polynomial> {
        let mask = self.frame.field_mask() << self.frame.shift(pos);
        let mut buckets: BTreeMap<u32, Vec<(u64, u16)>> = BTreeMap::new();
        for &(k, c) in &self.terms {
            let e = self.frame.exp_at(k, pos);
            buckets.entry(e).or_default().push((k & !mask, c));
        }
        buckets
            .into_iter()
            .map(|(e, raw)| (e, Polynomial::from_raw_terms(&self.frame, &self.spec, raw)))
            .collect()
    }

    /// Minimum exponent of the variable at `pos` across terms; None if zero.
    pub fn min_var_exponent(&self, pos: usize) -> Option<u32> {
        self.terms
            .iter()
            .map(|&(k, _)| self.frame.exp_at(k, pos))
            .min()
    }

    /// Maximum exponent of the variable at `pos` across terms; None if zero.
    pub fn max_var_exponent(&self, pos: usize) -> Option<u32> {
        self.terms
            .iter()
            .map(|&(k, _)| self.frame.exp_at(k, pos))
            .max()
    }

    /// Re-expresses the polynomial over a frame that is a prefix of the
    /// current one (dropping trailing auxiliary slots, which must all carry
    /// zero exponents).
    pub fn restrict_to(&self, target: &VarFrame) -> Polynomial {
        assert!(target.len() <= self.frame.len());
        for pos in 0..target.len() {
            assert_eq!(
                target.var_name(pos),
                self.frame.var_name(pos),
                "target frame is not a prefix"
            );
        }
        let mut out = Polynomial::zero(target, &self.spec);
        let mut raw = Vec::with_capacity(self.terms.len());
        for &(k, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for pos in 0..self.frame.len() {
                let e = self.frame.exp_at(k, pos);
                if pos < target.len() {
                    exps[pos] = e;
                } else {
                    assert_eq!(e, 0, "dropped slot carries a nonzero exponent");
                }
            }
            raw.push((target.pack_slice(&exps), c));
        }
        out.terms = {
            raw.sort_unstable_by_key(|&(k, _)| k);
            raw
        };
        out
    }

    /// The homogeneous part of total degree d.
    pub fn homogeneous_part(&self, d: u64) -> Polynomial {
        Polynomial {
            frame: self.frame.clone(),
            spec: self.spec,
            terms: self
                .terms
                .iter()
                .filter(|&&(k, _)| self.frame.key_degree(k) == d)
                .copied()
                .collect(),
        }
    }

    /// Canonical text form: terms in decreasing lex order, coefficients as
    /// least nonnegative residues, `*` for products and `^` for powers.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|&(k, c)| render_term(&self.frame, &self.spec, &self.frame.unpack(k), c))
            .collect();
        parts.join(" + ")
    }

    /// Parses the text form produced by [`render`](Self::render); also accepts
    /// `-` separators, arbitrary term order, and repeated variables.
    pub fn parse(frame: &VarFrame, spec: &FieldSpec, text: &str) -> Result<Polynomial, RingError> {
        parse_poly(text, &mut |name| frame.pos_of_name(name), frame.len(), spec).map(|terms| {
            let mut p = Polynomial::zero(frame, spec);
            for (m, c) in terms {
                p.add_term(m, c);
            }
            p
        })
    }

    /// Canonical JSON form.
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            q: self.spec.q(),
            m: self.frame.m(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|&(k, c)| TermJson {
                    c: c as u32,
                    e: self.frame.unpack(k).0.to_vec(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PolyJson) -> Result<Polynomial, RingError> {
        let spec = spec_for_q(json.q).map_err(RingError::Parse)?;
        let frame = VarFrame::new(json.m);
        let mut p = Polynomial::zero(&frame, &spec);
        for t in &json.terms {
            if t.e.len() != frame.len() {
                return Err(RingError::Parse(format!(
                    "exponent vector of length {} in a frame of {} variables",
                    t.e.len(),
                    frame.len()
                )));
            }
            if t.c >= spec.q() {
                return Err(RingError::Parse(format!("coefficient {} out of range", t.c)));
            }
            p.add_term(Monomial::from_exps(&t.e), t.c as u16);
        }
        Ok(p)
    }
}

/// Reconstructs a FieldSpec from a field size q = p^k (k <= 2).
pub fn spec_for_q(q: u32) -> Result<FieldSpec, String> {
    for p in 3..=13u64 {
        if FieldSpec::prime(p).is_ok() {
            if p * p == q as u64 {
                return FieldSpec::new(p, 2).map_err(|e| e.to_string());
            }
            if p == q as u64 {
                return FieldSpec::prime(p).map_err(|e| e.to_string());
            }
        }
    }
    // Larger primes up to 169.
    if q <= 169 {
        if let Ok(s) = FieldSpec::prime(q as u64) {
            return Ok(s);
        }
    }
    Err(format!("no supported field of size {q}"))
}

fn render_term(frame: &VarFrame, spec: &FieldSpec, m: &Monomial, c: u16) -> String {
    let mono = frame.render_monomial(m);
    let coeff = spec.render_raw(c);
    let coeff = if spec.k() == 2 && c >= spec.p() as u16 {
        format!("({coeff})")
    } else {
        coeff
    };
    if mono == "1" {
        coeff
    } else if c == 1 {
        mono
    } else {
        format!("{coeff}*{mono}")
    }
}

/// Shared term-list parser for S- and T-side text forms.
fn parse_poly(
    text: &str,
    resolve: &mut dyn FnMut(&str) -> Option<usize>,
    width: usize,
    spec: &FieldSpec,
) -> Result<Vec<(Monomial, u16)>, RingError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(RingError::Parse("empty input".to_string()));
    }
    // Split into signed chunks at top-level + and - (respecting parentheses).
    let mut chunks: Vec<(i64, String)> = Vec::new();
    let mut depth = 0usize;
    let mut sign = 1i64;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| RingError::Parse("unbalanced ')'".to_string()))?;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.trim().is_empty() {
                    chunks.push((sign, cur.trim().to_string()));
                }
                sign = if ch == '-' { -1 } else { 1 };
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(RingError::Parse("unbalanced '('".to_string()));
    }
    if !cur.trim().is_empty() {
        chunks.push((sign, cur.trim().to_string()));
    }
    if chunks.is_empty() {
        return Err(RingError::Parse("no terms".to_string()));
    }

    let mut out = Vec::new();
    for (sgn, chunk) in chunks {
        if chunk == "0" {
            continue;
        }
        let mut exps = vec![0u32; width];
        let mut coeff: u16 = spec.raw_from_int(sgn);
        for factor in split_top_level(&chunk, '*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(RingError::Parse(format!("empty factor in '{chunk}'")));
            }
            if let Some(inner) = factor.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                // Parenthesized extension-field coefficient like (t+2).
                let c = parse_ext_coeff(inner, spec)?;
                coeff = spec.mul_raw(coeff, c);
            } else if factor.chars().next().unwrap().is_ascii_digit() {
                let v: u64 = factor
                    .parse()
                    .map_err(|_| RingError::Parse(format!("bad integer '{factor}'")))?;
                coeff = spec.mul_raw(coeff, spec.raw_from_int(v as i64));
            } else {
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n.trim(),
                        e.trim()
                            .parse::<u32>()
                            .map_err(|_| RingError::Parse(format!("bad exponent in '{factor}'")))?,
                    ),
                    None => (factor, 1),
                };
                let pos = resolve(name)
                    .ok_or_else(|| RingError::Parse(format!("unknown variable '{name}'")))?;
                exps[pos] += e;
            }
        }
        out.push((Monomial::from_exps(&exps), coeff));
    }
    Ok(out)
}

fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            c if c == sep && depth == 0 => {
                parts.push(cur.clone());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    parts.push(cur);
    parts
}

/// Parses `a1*t+a0`-style extension coefficients.
fn parse_ext_coeff(s: &str, spec: &FieldSpec) -> Result<u16, RingError> {
    if spec.k() != 2 {
        return Err(RingError::Parse(format!(
            "parenthesized coefficient '{s}' in a prime field"
        )));
    }
    let mut acc = 0u16;
    for (sgn, part) in s
        .replace('-', "+-")
        .split('+')
        .filter(|p| !p.is_empty())
        .map(|p| {
            if let Some(rest) = p.strip_prefix('-') {
                (-1i64, rest)
            } else {
                (1i64, p)
            }
        })
    {
        let part = part.trim();
        let v = if part == "t" {
            spec.raw_from_coords(0, 1)
        } else if let Some(c) = part.strip_suffix("*t") {
            let c: u32 = c
                .trim()
                .parse()
                .map_err(|_| RingError::Parse(format!("bad coefficient '{s}'")))?;
            spec.raw_from_coords(0, c)
        } else {
            let c: u32 = part
                .parse()
                .map_err(|_| RingError::Parse(format!("bad coefficient '{s}'")))?;
            spec.raw_from_coords(c, 0)
        };
        let v = if sgn < 0 { spec.neg_raw(v) } else { v };
        acc = spec.add_raw(acc, v);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolyJson {
    pub q: u32,
    pub m: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub c: u32,
    pub e: Vec<u32>,
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

/// A polynomial in the presentation variables T_0..T_k, where T_i carries the
/// S-degree weight q^i + 1.  Exponent vectors are stored largest variable
/// first (slot 0 is T_k), so the shared grevlex tie-break applies unchanged;
/// accessors take logical indices i of T_i.  T-polynomials stay small, so a
/// plain map representation is fine here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPolynomial {
    spec: FieldSpec,
    /// Number of T-variables, k + 1.
    width: usize,
    terms: BTreeMap<Monomial, u16>,
}

impl TPolynomial {
    pub fn zero(spec: &FieldSpec, k: u32) -> TPolynomial {
        TPolynomial {
            spec: *spec,
            width: (k + 1) as usize,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(spec: &FieldSpec, k: u32, c: i64) -> TPolynomial {
        let mut t = TPolynomial::zero(spec, k);
        t.add_term_logical(&vec![0; t.width], spec.raw_from_int(c));
        t
    }

    /// The variable T_i.
    pub fn var(spec: &FieldSpec, k: u32, i: u32) -> TPolynomial {
        assert!(i <= k);
        let mut t = TPolynomial::zero(spec, k);
        let mut exps = vec![0u32; t.width];
        exps[i as usize] = 1;
        t.add_term_logical(&exps, 1);
        t
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Largest T-index, k.
    pub fn k(&self) -> u32 {
        self.width as u32 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// S-degree weights (q^i + 1) in storage order (T_k first).
    pub fn weights(&self) -> Vec<u64> {
        let q = self.spec.q() as u64;
        (0..self.width)
            .map(|slot| q.pow((self.width - 1 - slot) as u32) + 1)
            .collect()
    }

    fn storage_from_logical(&self, exps: &[u32]) -> Monomial {
        assert_eq!(exps.len(), self.width);
        Monomial(exps.iter().rev().copied().collect())
    }

    fn logical_from_storage(&self, m: &Monomial) -> Vec<u32> {
        m.0.iter().rev().copied().collect()
    }

    /// Adds `c * prod T_i^exps[i]` (logical indexing: exps[i] is T_i's power).
    pub fn add_term_logical(&mut self, exps: &[u32], raw: u16) {
        let mono = self.storage_from_logical(exps);
        self.add_term_storage(mono, raw);
    }

    fn add_term_storage(&mut self, mono: Monomial, raw: u16) {
        if raw == 0 {
            return;
        }
        let spec = self.spec;
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(raw);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = spec.add_raw(*o.get(), raw);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Terms as (logical exponent vector, coefficient).
    pub fn terms_logical(&self) -> Vec<(Vec<u32>, u16)> {
        self.terms
            .iter()
            .map(|(m, &c)| (self.logical_from_storage(m), c))
            .collect()
    }

    fn assert_compatible(&self, other: &TPolynomial) {
        assert!(
            self.spec == other.spec && self.width == other.width,
            "mixed T-rings"
        );
    }

    pub fn add(&self, other: &TPolynomial) -> TPolynomial {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term_storage(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> TPolynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.spec.neg_raw(*c);
        }
        out
    }

    pub fn sub(&self, other: &TPolynomial) -> TPolynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> TPolynomial {
        let raw = self.spec.raw_from_int(c);
        let mut out = TPolynomial::zero(&self.spec, self.k());
        if raw == 0 {
            return out;
        }
        for (m, &cc) in &self.terms {
            out.terms.insert(m.clone(), self.spec.mul_raw(cc, raw));
        }
        out
    }

    pub fn mul(&self, other: &TPolynomial) -> TPolynomial {
        self.assert_compatible(other);
        let mut out = TPolynomial::zero(&self.spec, self.k());
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                out.add_term_storage(m1.mul(m2), self.spec.mul_raw(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> TPolynomial {
        let mut acc = TPolynomial::constant(&self.spec, self.k(), 1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Weighted S-degree; None for zero.
    pub fn weighted_degree(&self) -> Option<u64> {
        let w = self.weights();
        self.terms.keys().map(|m| m.weighted_deg(&w)).max()
    }

    /// The valuation: minimum total T-degree over terms; None for zero
    /// (semantically +infinity).
    pub fn valuation(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.deg()).min()
    }

    /// Maximum exponent of T_i over terms (0 when absent or zero).
    pub fn max_exp_of(&self, i: u32) -> u32 {
        let slot = self.width - 1 - i as usize;
        self.terms.keys().map(|m| m.0[slot]).max().unwrap_or(0)
    }

    /// Minimum exponent of T_i over terms; None for the zero polynomial.
    pub fn min_exp_of(&self, i: u32) -> Option<u32> {
        let slot = self.width - 1 - i as usize;
        self.terms.keys().map(|m| m.0[slot]).min()
    }

    /// Lead term under weighted grevlex: (logical exponents, coefficient).
    pub fn lead_term_wgrevlex(&self) -> Option<(Vec<u32>, u16)> {
        let order = MonomialOrder::WeightedGrevlex(self.weights());
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp(a, b))
            .map(|(m, &c)| (self.logical_from_storage(m), c))
    }

    /// Canonical text form with terms in decreasing weighted grevlex order.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let order = MonomialOrder::WeightedGrevlex(self.weights());
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| order.cmp(b, a));
        let parts: Vec<String> = keys
            .iter()
            .map(|m| {
                let c = self.terms[*m];
                let mono_parts: Vec<String> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(slot, &e)| {
                        let i = self.width - 1 - slot;
                        if e == 1 {
                            format!("T{i}")
                        } else {
                            format!("T{i}^{e}")
                        }
                    })
                    .collect();
                let mono = if mono_parts.is_empty() {
                    "1".to_string()
                } else {
                    mono_parts.join("*")
                };
                if mono == "1" {
                    self.spec.render_raw(c)
                } else if c == 1 {
                    mono
                } else {
                    format!("{}*{}", self.spec.render_raw(c), mono)
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses `T`-polynomials in the rendered format.
    pub fn parse(spec: &FieldSpec, k: u32, text: &str) -> Result<TPolynomial, RingError> {
        let width = (k + 1) as usize;
        let terms = parse_poly(
            text,
            &mut |name| {
                name.strip_prefix('T')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&i| i < width)
                    // storage order: slot 0 is T_k
                    .map(|i| width - 1 - i)
            },
            width,
            spec,
        )?;
        let mut t = TPolynomial::zero(spec, k);
        for (m, c) in terms {
            t.add_term_storage(m, c);
        }
        Ok(t)
    }
}

impl fmt::Display for TPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn setup() -> (VarFrame, FieldSpec) {
        (VarFrame::new(2), FieldSpec::prime(3).unwrap())
    }

    fn parse(frame: &VarFrame, spec: &FieldSpec, s: &str) -> Polynomial {
        Polynomial::parse(frame, spec, s).unwrap()
    }

    #[test]
    fn frame_positions_and_names() {
        let f = VarFrame::new(3);
        assert_eq!(f.n(), 6);
        let names: Vec<String> = (0..f.len()).map(|p| f.var_name(p)).collect();
        assert_eq!(names, vec!["y1", "y2", "y3", "x3", "x2", "x1"]);
        assert_eq!(f.pos_y(1), 0);
        assert_eq!(f.pos_x(3), 3);
        assert_eq!(f.pos_x(1), 5);
        let g = f.with_aux(&["t", "u"]);
        assert_eq!(g.var_name(6), "t");
        assert_eq!(g.pos_aux("u"), 7);
        assert_eq!(g.max_exponent(), 255);
        assert_eq!(f.max_exponent(), 1023);
    }

    #[test]
    fn packing_roundtrip_and_lex_order() {
        let f = VarFrame::new(3);
        let m1 = Monomial::from_exps(&[81, 27, 9, 9, 3, 1]);
        let key = f.pack_slice(&m1.0);
        assert_eq!(f.unpack(key), m1);
        assert_eq!(f.key_degree(key), 130);
        // Packed integer order is lex order.
        let m2 = Monomial::from_exps(&[81, 27, 9, 9, 3, 0]);
        let m3 = Monomial::from_exps(&[82, 0, 0, 0, 0, 0]);
        let (k2, k3) = (f.pack_slice(&m2.0), f.pack_slice(&m3.0));
        assert!(k2 < key && key < k3);
        assert_eq!(MonomialOrder::Lex.cmp(&m2, &m1), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&m3, &m1), Ordering::Greater);
    }

    #[test]
    fn lex_order_matches_variable_ranking() {
        // y1 > y2 > x2 > x1 at m = 2: any positive power of y1 dominates.
        let (frame, spec) = setup();
        let a = parse(&frame, &spec, "y1^2");
        let b = parse(&frame, &spec, "y1*x1^5");
        let (ma, _) = a.lead_term_lex().unwrap();
        let (mb, _) = b.lead_term_lex().unwrap();
        assert_eq!(MonomialOrder::Lex.cmp(&ma, &mb), Ordering::Greater);
        let f = parse(&frame, &spec, "y1^2 + y1*x1^5 + y2*x2");
        let (lt, _) = f.lead_term_lex().unwrap();
        assert_eq!(frame.render_monomial(&lt), "y1^2");
    }

    #[test]
    fn grevlex_tiebreak_prefers_smaller_last_exponent() {
        let (frame, spec) = setup();
        let a = parse(&frame, &spec, "y1*x1^2").lead_term_lex().unwrap().0;
        let b = parse(&frame, &spec, "y2^3").lead_term_lex().unwrap().0;
        assert_eq!(MonomialOrder::Grevlex.cmp(&a, &b), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&a, &b), Ordering::Greater);
    }

    #[test]
    fn arithmetic_basics() {
        let (frame, spec) = setup();
        let f = parse(&frame, &spec, "y1 + x1");
        let g = parse(&frame, &spec, "y1 + 2*x1");
        assert_eq!((&f + &g).render(), "2*y1");
        assert_eq!((&f - &g).render(), "2*x1");
        let sq = f.mul(&f);
        assert_eq!(sq.render(), "y1^2 + 2*y1*x1 + x1^2");
        assert_eq!(f.pow(3).render(), "y1^3 + x1^3");
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn freshman_dream_via_frobenius() {
        let (frame, spec) = setup();
        let f = parse(&frame, &spec, "y1 + 2*y2*x2 + x1^2");
        assert_eq!(f.pow(3), f.frobenius(1));
        assert_eq!(f.pow(9), f.frobenius(2));
    }

    #[test]
    fn exact_divide_recovers_factor() {
        let (frame, spec) = setup();
        let f = parse(&frame, &spec, "y1^2 + y2*x1 + 2");
        let g = parse(&frame, &spec, "y1*x2 + x1^3 + 1");
        let prod = f.mul(&g);
        assert_eq!(prod.exact_divide(&g).unwrap(), f);
        assert_eq!(prod.exact_divide(&f).unwrap(), g);
        let bad = prod.add(&Polynomial::one(&frame, &spec));
        assert!(matches!(
            bad.exact_divide(&g),
            Err(RingError::NotDivisible { .. })
        ));
    }

    #[test]
    fn exact_divide_factor_chain() {
        let (frame, spec) = setup();
        let factors = [
            parse(&frame, &spec, "x1"),
            parse(&frame, &spec, "y1 + x1"),
            parse(&frame, &spec, "y2 + 2*x1"),
            parse(&frame, &spec, "y1 + x2 + 1"),
        ];
        let mut prod = parse(&frame, &spec, "y1^2 + y2 + 2*x2");
        for f in &factors {
            prod = prod.mul(f);
        }
        let q = prod.exact_divide_factors(&factors).unwrap();
        assert_eq!(q, parse(&frame, &spec, "y1^2 + y2 + 2*x2"));
    }

    #[test]
    fn substitute_linear_images() {
        let (frame, spec) = setup();
        let f = parse(&frame, &spec, "y1^3 + y2");
        let images: Vec<Polynomial> = (0..frame.len())
            .map(|p| {
                if p == frame.pos_y(1) {
                    parse(&frame, &spec, "y1 + x2")
                } else {
                    Polynomial::var(&frame, &spec, p)
                }
            })
            .collect();
        assert_eq!(
            f.substitute(&images),
            parse(&frame, &spec, "y1^3 + x2^3 + y2")
        );
    }

    #[test]
    fn coeffs_by_var_and_min_exponent() {
        let (frame, spec) = setup();
        let f = parse(&frame, &spec, "y1^3*x1 + y1^3*x2 + y1*x1^2 + x2");
        let by_y1 = f.coeffs_by_var(frame.pos_y(1));
        assert_eq!(by_y1.len(), 3);
        assert_eq!(by_y1[&3].render(), "x2 + x1");
        assert_eq!(by_y1[&1].render(), "x1^2");
        assert_eq!(by_y1[&0].render(), "x2");
        assert_eq!(f.min_var_exponent(frame.pos_x(1)), Some(0));
        assert_eq!(by_y1[&1].min_var_exponent(frame.pos_x(1)), Some(2));
    }

    #[test]
    fn eval_in_prime_and_extension_fields() {
        let (frame, spec) = setup();
        let f = parse(&frame, &spec, "y1*x1 + y2*x2");
        assert_eq!(f.eval_raw(&[1, 2, 1, 1], &spec), 0);
        let ext = FieldSpec::new(3, 2).unwrap();
        // t * t + 0 = t^2 = -1 = 2 in GF(9) with modulus t^2 + 1.
        let t = ext.raw_from_coords(0, 1);
        assert_eq!(f.eval_raw(&[t, 0, 0, t], &ext), 2);
    }

    #[test]
    fn render_parse_roundtrip_examples() {
        let (frame, spec) = setup();
        for s in [
            "y1^9*x1 + 2*y1^3*x1^3",
            "y1 + 2*y2*x2 + 1",
            "0",
            "y1*y2*x2*x1",
        ] {
            let f = parse(&frame, &spec, s);
            assert_eq!(f.render(), s);
            assert_eq!(parse(&frame, &spec, &f.render()), f);
        }
        assert_eq!(parse(&frame, &spec, "y1 - x1").render(), "y1 + 2*x1");
    }

    #[test]
    fn json_roundtrip() {
        let (frame, spec) = setup();
        let f = parse(&frame, &spec, "y1^9*x1 + 2*y1^3*x1^3");
        let j = f.to_json();
        assert_eq!(j.q, 3);
        assert_eq!(j.m, 2);
        assert_eq!(j.terms[0].e, vec![9, 0, 0, 1]);
        let back = Polynomial::from_json(&j).unwrap();
        assert_eq!(back, f);
        let text = serde_json::to_string(&j).unwrap();
        let j2: PolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Polynomial::from_json(&j2).unwrap(), f);
    }

    #[test]
    fn tpoly_weighted_grevlex_lead_term() {
        let spec = FieldSpec::prime(3).unwrap();
        // q=3, k=2: weights are (2, 4, 10) for (T0, T1, T2).
        // T0^3*T2 and T1^4 both have weighted degree 16; T1^4 leads.
        let f = TPolynomial::parse(&spec, 2, "T0^3*T2 + T1^4").unwrap();
        let (lt, c) = f.lead_term_wgrevlex().unwrap();
        assert_eq!(lt, vec![0, 4, 0]);
        assert_eq!(c, 1);
        assert_eq!(f.weighted_degree(), Some(16));
    }

    #[test]
    fn tpoly_valuation_rules() {
        let spec = FieldSpec::prime(3).unwrap();
        let f = TPolynomial::parse(&spec, 3, "T3*T1^3 + T2^4 + T0^9").unwrap();
        assert_eq!(f.valuation(), Some(4));
        let g = TPolynomial::parse(&spec, 3, "T0^2").unwrap();
        assert_eq!(f.mul(&g).valuation(), Some(6));
        assert_eq!(TPolynomial::zero(&spec, 3).valuation(), None);
        let h = f.add(&TPolynomial::parse(&spec, 3, "2*T0^9").unwrap());
        assert!(h.valuation().unwrap() >= 4);
    }

    #[test]
    fn tpoly_render_parse_roundtrip() {
        let spec = FieldSpec::prime(3).unwrap();
        for s in ["T2*T0^3 + 2*T1^4", "T3 + T2*T1 + 2", "0"] {
            let f = TPolynomial::parse(&spec, 3, s).unwrap();
            assert_eq!(TPolynomial::parse(&spec, 3, &f.render()).unwrap(), f);
        }
    }

    #[test]
    fn tpoly_mul_matches_weighted_degrees() {
        let spec = FieldSpec::prime(3).unwrap();
        let a = TPolynomial::parse(&spec, 2, "T2 + T1*T0").unwrap();
        let b = TPolynomial::parse(&spec, 2, "T2 + 2*T1*T0").unwrap();
        let prod = a.mul(&b);
        assert_eq!(prod.render(), "T2^2 + 2*T1^2*T0^2");
        assert_eq!(prod.weighted_degree(), Some(20));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prop_mul_commutes_and_distributes(
            ta in proptest::collection::vec((0u32..4, 0u32..4, 0u32..4, 0u32..4, 1u16..3), 0..6),
            tb in proptest::collection::vec((0u32..4, 0u32..4, 0u32..4, 0u32..4, 1u16..3), 0..6),
            tc in proptest::collection::vec((0u32..4, 0u32..4, 0u32..4, 0u32..4, 1u16..3), 0..6),
        ) {
            let (frame, spec) = setup();
            let build = |ts: &[(u32, u32, u32, u32, u16)]| {
                let mut p = Polynomial::zero(&frame, &spec);
                for &(a, b, c, d, co) in ts {
                    p.add_term(Monomial::from_exps(&[a, b, c, d]), co);
                }
                p
            };
            let (fa, fb, fc) = (build(&ta), build(&tb), build(&tc));
            prop_assert_eq!(fa.mul(&fb), fb.mul(&fa));
            prop_assert_eq!(fa.mul(&fb.add(&fc)), fa.mul(&fb).add(&fa.mul(&fc)));
            prop_assert_eq!(fa.mul(&fb).mul(&fc), fa.mul(&fb.mul(&fc)));
        }

        #[test]
        fn prop_exact_division_roundtrip(
            ta in proptest::collection::vec((0u32..3, 0u32..3, 0u32..3, 0u32..3, 1u16..3), 1..5),
            tb in proptest::collection::vec((0u32..3, 0u32..3, 0u32..3, 0u32..3, 1u16..3), 1..5),
        ) {
            let (frame, spec) = setup();
            let build = |ts: &[(u32, u32, u32, u32, u16)]| {
                let mut p = Polynomial::zero(&frame, &spec);
                for &(a, b, c, d, co) in ts {
                    p.add_term(Monomial::from_exps(&[a, b, c, d]), co);
                }
                p
            };
            let (fa, fb) = (build(&ta), build(&tb));
            prop_assume!(!fa.is_zero() && !fb.is_zero());
            prop_assert_eq!(fa.mul(&fb).exact_divide(&fb).unwrap(), fa);
        }

        #[test]
        fn prop_render_parse_roundtrip(
            ts in proptest::collection::vec((0u32..5, 0u32..5, 0u32..5, 0u32..5, 1u16..3), 0..8),
        ) {
            let (frame, spec) = setup();
            let mut f = Polynomial::zero(&frame, &spec);
            for (a, b, c, d, co) in ts {
                f.add_term(Monomial::from_exps(&[a, b, c, d]), co);
            }
            prop_assert_eq!(Polynomial::parse(&frame, &spec, &f.render()).unwrap(), f);
        }
    }
}
