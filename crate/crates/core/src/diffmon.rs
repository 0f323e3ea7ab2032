//! Differential variables, words over them, divisibility and monomial orders.
//!
//! A differential variable `x^(n)` pairs a generator with a derivative order.
//! Variables are compared by order first and generator rank second, so every
//! `x^(1)` sits above every `y^(0)`.
//!
//! Words are finite letter sequences. Noncommutative words keep the sequence
//! as written; commutative words are always stored sorted in weakly
//! decreasing letter order, which makes the sequence a canonical
//! representative of the exponent map.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;

/// The ordered generator set. Position in the list is the rank under `<`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenTable {
    names: Vec<String>,
}

impl GenTable {
    pub fn new<I, S>(names: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidGenerator(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(Error::DuplicateGenerator(name.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, gen: u32) -> &str {
        &self.names[gen as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    /// `x^(order)` for the generator called `name`.
    pub fn var(&self, name: &str, order: u32) -> Result<DiffVar, Error> {
        self.rank(name)
            .map(|gen| DiffVar::new(gen, order))
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn contains(&self, v: DiffVar) -> bool {
        (v.gen as usize) < self.names.len()
    }
}

/// A differential variable `x^(n)`.
///
/// The derived ordering compares `order` before `gen`, which is exactly the
/// variable order: lower derivative order first, then generator rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffVar {
    pub order: u32,
    pub gen: u32,
}

impl DiffVar {
    pub const fn new(gen: u32, order: u32) -> Self {
        Self { order, gen }
    }

    /// `x^(n)` becomes `x^(n + by)`.
    pub const fn raised(self, by: u32) -> Self {
        Self {
            order: self.order + by,
            gen: self.gen,
        }
    }
}

/// Compare two differential variables.
pub fn cmp_var(a: DiffVar, b: DiffVar) -> Ordering {
    a.cmp(&b)
}

/// Multiplication rule for words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    NonCommutative,
    Commutative,
}

impl Variant {
    pub fn is_commutative(self) -> bool {
        matches!(self, Variant::Commutative)
    }
}

/// A monomial over the differential variables; the empty word is `1`.
///
/// The derived ordering (length first, then letters left to right) is only a
/// storage order. Use [`MonOrder`] for monomial comparisons.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<DiffVar>,
}

impl Word {
    pub fn one() -> Self {
        Self::default()
    }

    /// A word whose letters are taken as written.
    pub fn nc(letters: Vec<DiffVar>) -> Self {
        Self { letters }
    }

    /// A commutative word; the letters are sorted into canonical form.
    pub fn commutative(mut letters: Vec<DiffVar>) -> Self {
        letters.sort_unstable_by(|a, b| b.cmp(a));
        Self { letters }
    }

    pub fn new(letters: Vec<DiffVar>, variant: Variant) -> Self {
        match variant {
            Variant::NonCommutative => Self::nc(letters),
            Variant::Commutative => Self::commutative(letters),
        }
    }

    pub fn letter(v: DiffVar) -> Self {
        Self { letters: vec![v] }
    }

    pub fn letters(&self) -> &[DiffVar] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<DiffVar> {
        self.letters
    }

    pub fn is_one(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of letters, counted with multiplicity.
    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    /// Sum of the derivative orders of all letters.
    pub fn weight(&self) -> u64 {
        self.letters.iter().map(|v| u64::from(v.order)).sum()
    }

    pub fn max_order(&self) -> u32 {
        self.letters.iter().map(|v| v.order).max().unwrap_or(0)
    }

    /// True when the letters are in weakly decreasing order.
    pub fn is_canonical_commutative(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] >= w[1])
    }

    /// `(letter, multiplicity)` runs. For a commutative word this is the
    /// exponent map in decreasing letter order.
    pub fn exponents(&self) -> Vec<(DiffVar, usize)> {
        let mut out: Vec<(DiffVar, usize)> = Vec::new();
        for &v in &self.letters {
            match out.last_mut() {
                Some((last, n)) if *last == v => *n += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    pub fn mul(&self, other: &Word, variant: Variant) -> Word {
        match variant {
            Variant::NonCommutative => {
                let mut letters = Vec::with_capacity(self.degree() + other.degree());
                letters.extend_from_slice(&self.letters);
                letters.extend_from_slice(&other.letters);
                Word { letters }
            }
            Variant::Commutative => merge_desc(&self.letters, &other.letters),
        }
    }

    /// Every letter raised by `by` derivative orders.
    pub fn raised(&self, by: u32) -> Word {
        Word {
            letters: self.letters.iter().map(|v| v.raised(by)).collect(),
        }
    }

    /// Letters `range` of the sequence as a word.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word {
            letters: self.letters[range].to_vec(),
        }
    }

    /// Renders the word with generator names, e.g. `x^(1)*y^(0)`; `1` for the unit.
    pub fn display<'a>(&'a self, table: &'a GenTable) -> WordDisplay<'a> {
        WordDisplay { word: self, table }
    }
}

fn merge_desc(a: &[DiffVar], b: &[DiffVar]) -> Word {
    let mut letters = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] >= b[j] {
            letters.push(a[i]);
            i += 1;
        } else {
            letters.push(b[j]);
            j += 1;
        }
    }
    letters.extend_from_slice(&a[i..]);
    letters.extend_from_slice(&b[j..]);
    Word { letters }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    table: &'a GenTable,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_one() {
            return f.write_str("1");
        }
        for (i, v) in self.word.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{}^({})", self.table.name(v.gen), v.order)?;
        }
        Ok(())
    }
}

/// The three monomial orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonOrder {
    /// Degree first, then letters left to right. Noncommutative words.
    DegLexNc,
    /// Degree first, then the decreasing letter sequences left to right.
    DegLexC,
    /// Increasing letter sequences compared left to right, a strict prefix
    /// being smaller. Commutative words. Not degree-compatible.
    LexC,
}

/// Sort key realising a [`MonOrder`]: comparing keys compares words.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey {
    degree: usize,
    letters: Vec<DiffVar>,
}

impl MonOrder {
    pub fn variant(self) -> Variant {
        match self {
            MonOrder::DegLexNc => Variant::NonCommutative,
            MonOrder::DegLexC | MonOrder::LexC => Variant::Commutative,
        }
    }

    pub fn is_deg_lex(self) -> bool {
        !matches!(self, MonOrder::LexC)
    }

    pub fn key(self, w: &Word) -> OrderKey {
        match self {
            MonOrder::DegLexNc | MonOrder::DegLexC => OrderKey {
                degree: w.degree(),
                letters: w.letters.clone(),
            },
            MonOrder::LexC => OrderKey {
                degree: 0,
                letters: w.letters.iter().rev().copied().collect(),
            },
        }
    }

    /// Inverse of [`MonOrder::key`].
    pub fn word(self, key: &OrderKey) -> Word {
        match self {
            MonOrder::DegLexNc | MonOrder::DegLexC => Word::nc(key.letters.clone()),
            MonOrder::LexC => Word::nc(key.letters.iter().rev().copied().collect()),
        }
    }

    /// Compares two words already in the form this order expects.
    pub fn compare(self, u: &Word, v: &Word) -> Ordering {
        match self {
            MonOrder::DegLexNc | MonOrder::DegLexC => u
                .degree()
                .cmp(&v.degree())
                .then_with(|| u.letters.cmp(&v.letters)),
            MonOrder::LexC => u.letters.iter().rev().cmp(v.letters.iter().rev()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonOrder::DegLexNc | MonOrder::DegLexC => "deglex",
            MonOrder::LexC => "lex",
        }
    }
}

impl fmt::Display for MonOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Compare `u` and `v` under `o`, rejecting commutative orders applied to
/// words that are not in canonical form.
pub fn cmp_word(u: &Word, v: &Word, o: MonOrder) -> Result<Ordering, Error> {
    if o.variant().is_commutative()
        && !(u.is_canonical_commutative() && v.is_canonical_commutative())
    {
        return Err(Error::VariantMismatch);
    }
    Ok(o.compare(u, v))
}

/// All factorisations `u = left * pat * right`, leftmost occurrence first.
pub fn divides_nc(pat: &Word, u: &Word) -> Vec<(Word, Word)> {
    let (p, s) = (pat.letters(), u.letters());
    if p.is_empty() {
        return (0..=s.len())
            .map(|i| (u.slice(0..i), u.slice(i..s.len())))
            .collect();
    }
    if p.len() > s.len() {
        return Vec::new();
    }
    s.windows(p.len())
        .enumerate()
        .filter(|(_, win)| *win == p)
        .map(|(i, _)| (u.slice(0..i), u.slice(i + p.len()..s.len())))
        .collect()
}

/// Leftmost occurrence of `pat` in `u`, if any.
pub fn find_nc(pat: &Word, u: &Word) -> Option<(Word, Word)> {
    let (p, s) = (pat.letters(), u.letters());
    if p.len() > s.len() {
        return None;
    }
    if p.is_empty() {
        return Some((Word::one(), u.clone()));
    }
    s.windows(p.len())
        .position(|win| win == p)
        .map(|i| (u.slice(0..i), u.slice(i + p.len()..s.len())))
}

/// Rightmost occurrence of `pat` in `u`, if any.
pub fn rfind_nc(pat: &Word, u: &Word) -> Option<(Word, Word)> {
    let (p, s) = (pat.letters(), u.letters());
    if p.len() > s.len() {
        return None;
    }
    if p.is_empty() {
        return Some((u.clone(), Word::one()));
    }
    s.windows(p.len())
        .rposition(|win| win == p)
        .map(|i| (u.slice(0..i), u.slice(i + p.len()..s.len())))
}

/// The cofactor `c` with `u = pat * c`, when every exponent of `pat` is
/// bounded by the matching exponent of `u`. Both words must be canonical.
pub fn divides_c(pat: &Word, u: &Word) -> Option<Word> {
    let (p, s) = (pat.letters(), u.letters());
    let mut rest = Vec::with_capacity(s.len().saturating_sub(p.len()));
    let mut i = 0;
    for &v in s {
        if i < p.len() && p[i] == v {
            i += 1;
        } else if i < p.len() && p[i] > v {
            // p[i] is larger than everything left in u
            return None;
        } else {
            rest.push(v);
        }
    }
    (i == p.len()).then(|| Word::nc(rest))
}

/// Exponent-wise maximum of two canonical commutative words.
pub fn lcm_c(a: &Word, b: &Word) -> Word {
    let (x, y) = (a.letters(), b.letters());
    let mut letters = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            Ordering::Equal => {
                letters.push(x[i]);
                i += 1;
                j += 1;
            }
            Ordering::Greater => {
                letters.push(x[i]);
                i += 1;
            }
            Ordering::Less => {
                letters.push(y[j]);
                j += 1;
            }
        }
    }
    letters.extend_from_slice(&x[i..]);
    letters.extend_from_slice(&y[j..]);
    Word::nc(letters)
}

/// A proper overlap `w = p * u = v * q` with both `u` and `v` nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub w: Word,
    pub u: Word,
    pub v: Word,
}

/// Suffix/prefix overlaps of `p` followed by `q`, shortest `w` first.
///
/// Only overlaps with `|w| < |p| + |q|` and nonempty cofactors are returned;
/// containment of one word in the other is an inclusion, not an overlap.
pub fn overlaps_nc(p: &Word, q: &Word) -> Vec<Overlap> {
    let (a, b) = (p.letters(), q.letters());
    let max = a.len().min(b.len());
    let mut out = Vec::new();
    for k in (1..max.max(1)).rev() {
        if k >= a.len() || k >= b.len() {
            continue;
        }
        if a[a.len() - k..] == b[..k] {
            let w = Word::nc([a, &b[k..]].concat());
            let u = q.slice(k..b.len());
            let v = p.slice(0..a.len() - k);
            out.push(Overlap { w, u, v });
        }
    }
    out
}

/// All words of degree `<= max_degree` whose letters have order `<= max_order`.
///
/// Commutative words come out canonical. The result is unsorted.
pub fn words_within(
    gens: usize,
    max_degree: usize,
    max_order: u32,
    variant: Variant,
) -> Vec<Word> {
    let mut alphabet: Vec<DiffVar> = (0..=max_order)
        .flat_map(|o| (0..gens as u32).map(move |g| DiffVar::new(g, o)))
        .collect();
    alphabet.sort_unstable();
    let mut out = vec![Word::one()];
    let mut frontier = vec![Word::one()];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for w in &frontier {
            for &v in &alphabet {
                // commutative words are generated in decreasing letter order
                if variant.is_commutative() && w.letters().last().is_some_and(|&l| v > l) {
                    continue;
                }
                let mut letters = w.letters().to_vec();
                letters.push(v);
                next.push(Word::nc(letters));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: u32) -> DiffVar {
        DiffVar::new(0, n)
    }
    fn y(n: u32) -> DiffVar {
        DiffVar::new(1, n)
    }

    #[test]
    fn var_order_compares_derivative_order_first() {
        assert_eq!(cmp_var(x(0), x(0)), Ordering::Equal);
        assert_eq!(cmp_var(x(1), y(0)), Ordering::Greater);
        assert_eq!(cmp_var(y(1), x(0)), Ordering::Greater);
        assert_eq!(cmp_var(x(2), y(2)), Ordering::Less);
    }

    #[test]
    fn word_order_examples() {
        let a = Word::commutative(vec![x(1), x(1)]);
        let b = Word::commutative(vec![x(2), x(0)]);
        assert_eq!(cmp_word(&a, &b, MonOrder::DegLexC).unwrap(), Ordering::Less);

        let a = Word::commutative(vec![x(0), x(2)]);
        let b = Word::commutative(vec![x(1), x(1)]);
        assert_eq!(cmp_word(&a, &b, MonOrder::LexC).unwrap(), Ordering::Less);

        let a = Word::nc(vec![x(1)]);
        let b = Word::nc(vec![x(0), x(0)]);
        assert_eq!(cmp_word(&a, &b, MonOrder::DegLexNc).unwrap(), Ordering::Less);
    }

    #[test]
    fn lex_prefix_is_smaller_and_one_is_minimal() {
        let o = MonOrder::LexC;
        let a = Word::commutative(vec![x(0)]);
        let b = Word::commutative(vec![x(0), x(0)]);
        assert_eq!(o.compare(&a, &b), Ordering::Less);
        assert_eq!(o.compare(&Word::one(), &a), Ordering::Less);
    }

    #[test]
    fn commutative_order_rejects_noncanonical_words() {
        let a = Word::nc(vec![x(0), x(1)]);
        let b = Word::commutative(vec![x(0)]);
        assert_eq!(cmp_word(&a, &b, MonOrder::DegLexC), Err(Error::VariantMismatch));
    }

    #[test]
    fn keys_round_trip() {
        let w = Word::commutative(vec![x(0), y(3), x(1)]);
        for o in [MonOrder::DegLexC, MonOrder::LexC] {
            assert_eq!(o.word(&o.key(&w)), w);
        }
    }

    #[test]
    fn nc_division() {
        let pat = Word::nc(vec![x(0), x(0)]);
        let u = Word::nc(vec![x(0), x(0), x(0)]);
        let x0 = Word::letter(x(0));
        assert_eq!(
            divides_nc(&pat, &u),
            vec![(Word::one(), x0.clone()), (x0, Word::one())]
        );
        assert!(divides_nc(&Word::letter(y(1)), &Word::nc(vec![x(0), x(0)])).is_empty());
        assert_eq!(divides_nc(&u, &u), vec![(Word::one(), Word::one())]);
    }

    #[test]
    fn commutative_division() {
        let u = Word::commutative(vec![x(1), x(1), x(0)]);
        assert_eq!(
            divides_c(&Word::letter(x(1)), &u),
            Some(Word::commutative(vec![x(1), x(0)]))
        );
        let u = Word::commutative(vec![x(1), x(0)]);
        assert_eq!(divides_c(&Word::letter(x(2)), &u), None);
        assert_eq!(divides_c(&Word::one(), &u), Some(u.clone()));
    }

    #[test]
    fn overlap_examples() {
        let sq = Word::nc(vec![x(0), x(0)]);
        let o = overlaps_nc(&sq, &sq);
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].w, Word::nc(vec![x(0), x(0), x(0)]));
        assert_eq!(o[0].u, Word::letter(x(0)));
        assert_eq!(o[0].v, Word::letter(x(0)));

        let yx = Word::nc(vec![y(0), x(0)]);
        assert!(overlaps_nc(&yx, &yx).is_empty());

        let xy = Word::nc(vec![x(0), y(0)]);
        let o = overlaps_nc(&xy, &yx);
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].w, Word::nc(vec![x(0), y(0), x(0)]));
    }

    #[test]
    fn lcm_takes_exponentwise_max() {
        let a = Word::commutative(vec![x(2), x(0)]);
        let b = Word::commutative(vec![x(1), x(0)]);
        assert_eq!(lcm_c(&a, &b), Word::commutative(vec![x(2), x(1), x(0)]));
    }

    #[test]
    fn word_enumeration_counts() {
        // 1 + 4 + 16
        assert_eq!(words_within(2, 2, 1, Variant::NonCommutative).len(), 21);
        // 1 + 4 + 10
        assert_eq!(words_within(2, 2, 1, Variant::Commutative).len(), 15);
        assert!(words_within(2, 3, 2, Variant::Commutative)
            .iter()
            .all(Word::is_canonical_commutative));
    }

    #[test]
    fn gen_table_rejects_duplicates() {
        assert!(GenTable::new(["x", "x"]).is_err());
        assert!(GenTable::new([""]).is_err());
        let t = GenTable::new(["y", "x"]).unwrap();
        assert_eq!(t.rank("x"), Some(1));
    }
}
