//! Polynomials over differential words with exact rational coefficients.
//!
//! Every [`DiffPoly`] holds a shared [`Ring`]: the generator table, the
//! multiplication rule and the weight `λ` of the derivation. Arithmetic
//! between polynomials of different rings panics through the operator
//! traits and returns [`Error::ContextMismatch`] through the `checked_*`
//! methods.
//!
//! The derivation extends `x^(n) ↦ x^(n+1)` to words by
//!
//! ```text
//! d(u₁u₂⋯u_k) = d(u₁)u₂⋯u_k + u₁d(u₂⋯u_k) + λ d(u₁)d(u₂⋯u_k),   d(1) = 0
//! ```
//!
//! and to polynomials by linearity.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::diffmon::{DiffVar, GenTable, MonOrder, Variant, Word};
use crate::error::Error;

/// Exact coefficient.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Shared ambient data for a family of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    table: GenTable,
    variant: Variant,
    weight: Scalar,
}

impl Ring {
    pub fn new(table: GenTable, variant: Variant, weight: Scalar) -> Arc<Ring> {
        Arc::new(Ring {
            table,
            variant,
            weight,
        })
    }

    pub fn table(&self) -> &GenTable {
        &self.table
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    pub fn is_commutative(&self) -> bool {
        self.variant.is_commutative()
    }

    /// Fails unless `o` compares words of this ring's variant.
    pub fn check_order(&self, o: MonOrder) -> Result<(), Error> {
        if o.variant() == self.variant {
            Ok(())
        } else {
            Err(Error::OrderMismatch(o.name()))
        }
    }

    /// The default deg-lex order for this ring's variant.
    pub fn deg_lex(&self) -> MonOrder {
        match self.variant {
            Variant::NonCommutative => MonOrder::DegLexNc,
            Variant::Commutative => MonOrder::DegLexC,
        }
    }
}

fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Leading word and coefficient of a nonzero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingData {
    pub word: Word,
    pub coeff: Scalar,
}

/// A sparse linear combination of words. No stored coefficient is zero.
#[derive(Clone)]
pub struct DiffPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Word, Scalar>,
}

impl PartialEq for DiffPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for DiffPoly {}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffPoly({self})")
    }
}

impl DiffPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Scalar::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Self {
        Self::monomial(ring, Word::one(), c)
    }

    pub fn var(ring: &Arc<Ring>, v: DiffVar) -> Self {
        Self::monomial(ring, Word::letter(v), Scalar::one())
    }

    /// `c * w`; a commutative ring puts `w` into canonical form.
    pub fn monomial(ring: &Arc<Ring>, w: Word, c: Scalar) -> Self {
        let w = canonical(ring.variant, w);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms<I>(ring: &Arc<Ring>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Word, Scalar)>,
    {
        let mut p = Self::zero(ring);
        for (w, c) in terms {
            p.add_term(canonical(ring.variant, w), c);
        }
        p
    }

    pub(crate) fn from_map(ring: &Arc<Ring>, terms: BTreeMap<Word, Scalar>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest word degree in the support; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    /// Largest derivative order of any letter.
    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(Word::max_order).max().unwrap_or(0)
    }

    /// Adds `c * w` in place. `w` must already be canonical for the ring.
    pub(crate) fn add_term(&mut self, w: Word, c: Scalar) {
        add_into(&mut self.terms, w, c);
    }

    pub fn checked_add(&self, other: &DiffPoly) -> Result<DiffPoly, Error> {
        self.ensure_same(other)?;
        let mut out = self.terms.clone();
        for (w, c) in &other.terms {
            add_into(&mut out, w.clone(), c.clone());
        }
        Ok(Self::from_map(&self.ring, out))
    }

    pub fn checked_sub(&self, other: &DiffPoly) -> Result<DiffPoly, Error> {
        self.ensure_same(other)?;
        let mut out = self.terms.clone();
        for (w, c) in &other.terms {
            add_into(&mut out, w.clone(), -c.clone());
        }
        Ok(Self::from_map(&self.ring, out))
    }

    pub fn checked_mul(&self, other: &DiffPoly) -> Result<DiffPoly, Error> {
        self.ensure_same(other)?;
        let variant = self.ring.variant;
        let mut out = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                add_into(&mut out, u.mul(v, variant), a * b);
            }
        }
        Ok(Self::from_map(&self.ring, out))
    }

    pub fn scale(&self, c: &Scalar) -> DiffPoly {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(w, a)| (w.clone(), a * c))
            .collect();
        Self::from_map(&self.ring, terms)
    }

    /// `left * self * right` for words `left`, `right`.
    pub fn mul_words(&self, left: &Word, right: &Word) -> DiffPoly {
        let variant = self.ring.variant;
        let mut out = BTreeMap::new();
        for (w, c) in &self.terms {
            let m = left.mul(w, variant).mul(right, variant);
            add_into(&mut out, m, c.clone());
        }
        Self::from_map(&self.ring, out)
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut acc = Self::one(&self.ring);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn ensure_same(&self, other: &DiffPoly) -> Result<(), Error> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// One application of the weight-`λ` derivation.
    pub fn derive(&self) -> DiffPoly {
        let mut out = BTreeMap::new();
        for (w, c) in &self.terms {
            for (dw, dc) in derive_word(&self.ring, w) {
                add_into(&mut out, dw, dc * c);
            }
        }
        Self::from_map(&self.ring, out)
    }

    /// `n`-fold derivative; `derive_n(0)` is the identity.
    pub fn derive_n(&self, n: u32) -> DiffPoly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derive();
        }
        p
    }

    /// The `o`-largest word and its coefficient.
    pub fn leading(&self, o: MonOrder) -> Result<LeadingData, Error> {
        self.ring.check_order(o)?;
        self.terms
            .iter()
            .max_by(|a, b| o.compare(a.0, b.0))
            .map(|(w, c)| LeadingData {
                word: w.clone(),
                coeff: c.clone(),
            })
            .ok_or(Error::ZeroPolynomial)
    }

    /// `lc(f)⁻¹ f`.
    pub fn monic(&self, o: MonOrder) -> Result<DiffPoly, Error> {
        let lead = self.leading(o)?;
        Ok(self.scale(&lead.coeff.recip()))
    }

    /// Terms sorted from largest to smallest under `o`.
    pub fn sorted_terms(&self, o: MonOrder) -> Vec<(&Word, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| o.compare(b.0, a.0));
        v
    }

    /// Canonical text form with terms in decreasing `o` order.
    pub fn display_with(&self, o: MonOrder) -> String {
        let table = self.ring.table();
        let mut s = String::new();
        if self.terms.is_empty() {
            return "0".to_string();
        }
        for (i, (w, c)) in self.sorted_terms(o).into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if w.is_one() {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&mag.to_string());
                    s.push('*');
                }
                s.push_str(&w.display(table).to_string());
            }
        }
        s
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(self.ring.deg_lex()))
    }
}

fn canonical(variant: Variant, w: Word) -> Word {
    match variant {
        Variant::Commutative if !w.is_canonical_commutative() => {
            Word::commutative(w.into_letters())
        }
        _ => w,
    }
}

pub(crate) fn add_into(map: &mut BTreeMap<Word, Scalar>, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get() + c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// `d(w)` as a term map, from the right-nested recursion on the letters.
fn derive_word(ring: &Ring, w: &Word) -> BTreeMap<Word, Scalar> {
    let letters = w.letters();
    let Some((&last, init)) = letters.split_last() else {
        return BTreeMap::new();
    };
    let variant = ring.variant;
    let lambda = &ring.weight;
    let mut tail = Word::letter(last);
    let mut d_tail: BTreeMap<Word, Scalar> = BTreeMap::new();
    d_tail.insert(Word::letter(last.raised(1)), Scalar::one());
    for &u in init.iter().rev() {
        let head = Word::letter(u);
        let d_head = Word::letter(u.raised(1));
        let mut next = BTreeMap::new();
        add_into(&mut next, d_head.mul(&tail, variant), Scalar::one());
        for (m, c) in &d_tail {
            add_into(&mut next, head.mul(m, variant), c.clone());
            if !lambda.is_zero() {
                add_into(&mut next, d_head.mul(m, variant), c * lambda);
            }
        }
        tail = head.mul(&tail, variant);
        d_tail = next;
    }
    d_tail
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `m! / (j! k! l!)` with `j + k + l = m`.
fn trinomial(j: u32, k: u32, l: u32) -> BigInt {
    binomial(j + k + l, j) * binomial(k + l, k)
}

fn lambda_pow(ring: &Ring, e: u32) -> Scalar {
    Pow::pow(ring.weight.clone(), e)
}

/// `dⁿ(xy)` from the closed double sum over binomial coefficients.
pub fn leibniz_closed_2(x: &DiffPoly, y: &DiffPoly, n: u32) -> Result<DiffPoly, Error> {
    x.ensure_same(y)?;
    let ring = x.ring.clone();
    let dx: Vec<DiffPoly> = derivatives(x, n);
    let dy: Vec<DiffPoly> = derivatives(y, n);
    let mut acc = DiffPoly::zero(&ring);
    for j in 0..=n {
        for k in 0..=(n - j) {
            let c = Scalar::from_integer(binomial(n, j) * binomial(n - j, k)) * lambda_pow(&ring, j);
            if c.is_zero() {
                continue;
            }
            let term = &dx[(n - k) as usize] * &dy[(j + k) as usize];
            acc = &acc + &term.scale(&c);
        }
    }
    Ok(acc)
}

/// `dⁿ(x₁x₂⋯x_{r+1})` from the closed multi-factor formula: a sum over
/// index triples `(j_t, k_t, l_t)` with `j₁+k₁+l₁ = n` and
/// `j_t+k_t = j_{t+1}+k_{t+1}+l_{t+1}`.
pub fn leibniz_closed_multi(xs: &[DiffPoly], n: u32) -> Result<DiffPoly, Error> {
    assert!(xs.len() >= 2, "need at least two factors");
    for x in &xs[1..] {
        xs[0].ensure_same(x)?;
    }
    let ring = xs[0].ring.clone();
    let r = xs.len() - 1;
    let ders: Vec<Vec<DiffPoly>> = xs.iter().map(|x| derivatives(x, n)).collect();
    let mut acc = DiffPoly::zero(&ring);
    let mut orders = vec![0u32; r + 1];
    multi_rec(
        &ring,
        &ders,
        1,
        n,
        BigInt::one(),
        0,
        &mut orders,
        &mut acc,
    );
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
fn multi_rec(
    ring: &Arc<Ring>,
    ders: &[Vec<DiffPoly>],
    t: usize,
    m_prev: u32,
    coeff: BigInt,
    j_sum: u32,
    orders: &mut [u32],
    acc: &mut DiffPoly,
) {
    let r = ders.len() - 1;
    if t > r {
        orders[r] = m_prev;
        let c = Scalar::from_integer(coeff) * lambda_pow(ring, j_sum);
        if c.is_zero() {
            return;
        }
        let mut prod = DiffPoly::one(ring);
        for (f, &e) in ders.iter().zip(orders.iter()) {
            prod = &prod * &f[e as usize];
        }
        *acc = &*acc + &prod.scale(&c);
        return;
    }
    for j in 0..=m_prev {
        for k in 0..=(m_prev - j) {
            let l = m_prev - j - k;
            orders[t - 1] = m_prev - k;
            multi_rec(
                ring,
                ders,
                t + 1,
                j + k,
                &coeff * trinomial(j, k, l),
                j_sum + j,
                orders,
                acc,
            );
        }
    }
}

fn derivatives(x: &DiffPoly, upto: u32) -> Vec<DiffPoly> {
    let mut out = Vec::with_capacity(upto as usize + 1);
    out.push(x.clone());
    for i in 0..upto as usize {
        let next = out[i].derive();
        out.push(next);
    }
    out
}

/// Leading word and coefficient of `dⁱ(u)` without expanding the derivative.
///
/// * `λ ≠ 0`: every letter raised by `i`, coefficient `λ^{(r-1)i}`.
/// * `λ = 0`, noncommutative: the first letter raised by `i`, coefficient 1.
/// * `λ = 0`, commutative: the largest letter raised by `i`, coefficient its
///   multiplicity in `u`.
pub fn leading_of_derivative(
    u: &Word,
    i: u32,
    ring: &Ring,
    o: MonOrder,
) -> Result<LeadingData, Error> {
    ring.check_order(o)?;
    if !o.is_deg_lex() {
        return Err(Error::LexUnsupported);
    }
    if u.is_one() {
        return Err(Error::UnitWord);
    }
    let u = canonical(ring.variant, u.clone());
    if i == 0 {
        return Ok(LeadingData {
            word: u,
            coeff: Scalar::one(),
        });
    }
    let r = u.degree() as u32;
    if !ring.weight.is_zero() {
        return Ok(LeadingData {
            word: u.raised(i),
            coeff: lambda_pow(ring, (r - 1) * i),
        });
    }
    let mut letters = u.letters().to_vec();
    let first = letters[0];
    letters[0] = first.raised(i);
    let coeff = match ring.variant {
        Variant::NonCommutative => Scalar::one(),
        Variant::Commutative => int(u.letters().iter().filter(|&&v| v == first).count() as i64),
    };
    Ok(LeadingData {
        word: canonical(ring.variant, Word::nc(letters)),
        coeff,
    })
}

/// Substitutes `x ↦ x^(n)` in a polynomial over order-0 variables.
pub fn hat_embed(f: &DiffPoly, n: u32) -> Result<DiffPoly, Error> {
    if f.max_order() > 0 {
        return Err(Error::PositiveOrder);
    }
    Ok(DiffPoly::from_terms(
        &f.ring,
        f.terms.iter().map(|(w, c)| (w.raised(n), c.clone())),
    ))
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&DiffPoly> for &DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: &DiffPoly) -> DiffPoly {
                self.$checked(rhs).expect("polynomials from different rings")
            }
        }
        impl $tr<DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&-Scalar::one())
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}
