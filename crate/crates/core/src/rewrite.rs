//! Rewriting modulo the differential ideal generated by a monic set `S`.
//!
//! The ideal is spanned by the instances `q|_{dᵏ(s)}` for `s ∈ S`, `k ≥ 0`
//! and one-hole contexts `q`. A [`RuleSet`] materialises the monic
//! derivatives `dᵏ(s)♮` lazily: a rule whose leading word could divide `u`
//! must have `k` bounded by the largest derivative order in `u` (deg-lex) or
//! by the total derivative weight of `u` (any order), so reducing a fixed
//! polynomial only ever needs finitely many rules and never misses one.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::Zero;

use crate::diffmon::{divides_c, find_nc, rfind_nc, GenTable, MonOrder, OrderKey, Variant, Word};
use crate::diffpoly::{add_into, DiffPoly, Ring, Scalar};
use crate::error::Error;

/// A one-hole context: `left ⋆ right` (noncommutative) or `⋆ · cofactor`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StarWord {
    Nc { left: Word, right: Word },
    C { cofactor: Word },
}

impl StarWord {
    /// The empty context `⋆`.
    pub fn hole(variant: Variant) -> Self {
        match variant {
            Variant::NonCommutative => StarWord::Nc {
                left: Word::one(),
                right: Word::one(),
            },
            Variant::Commutative => StarWord::C {
                cofactor: Word::one(),
            },
        }
    }

    pub fn is_hole(&self) -> bool {
        match self {
            StarWord::Nc { left, right } => left.is_one() && right.is_one(),
            StarWord::C { cofactor } => cofactor.is_one(),
        }
    }

    /// `q|_w` for a word `w`.
    pub fn apply(&self, w: &Word) -> Word {
        match self {
            StarWord::Nc { left, right } => left
                .mul(w, Variant::NonCommutative)
                .mul(right, Variant::NonCommutative),
            StarWord::C { cofactor } => w.mul(cofactor, Variant::Commutative),
        }
    }

    pub fn display<'a>(&'a self, table: &'a GenTable) -> StarDisplay<'a> {
        StarDisplay { q: self, table }
    }
}

pub struct StarDisplay<'a> {
    q: &'a StarWord,
    table: &'a GenTable,
}

impl fmt::Display for StarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.q {
            StarWord::Nc { left, right } => {
                if !left.is_one() {
                    write!(f, "{}*", left.display(self.table))?;
                }
                f.write_str("[]")?;
                if !right.is_one() {
                    write!(f, "*{}", right.display(self.table))?;
                }
                Ok(())
            }
            StarWord::C { cofactor } => {
                f.write_str("[]")?;
                if !cofactor.is_one() {
                    write!(f, "*{}", cofactor.display(self.table))?;
                }
                Ok(())
            }
        }
    }
}

/// `q|_f`: the hole filled with `f`, expanded by linearity.
pub fn subst(q: &StarWord, f: &DiffPoly) -> DiffPoly {
    match q {
        StarWord::Nc { left, right } => f.mul_words(left, right),
        StarWord::C { cofactor } => f.mul_words(&Word::one(), cofactor),
    }
}

/// Identifies the rule `dᵏ(S[basis])♮`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleId {
    pub basis: usize,
    pub k: u32,
}

/// A materialised rule: the monic derivative and its leading word.
#[derive(Clone, Debug)]
pub struct Rule {
    pub id: RuleId,
    pub poly: DiffPoly,
    pub lead: Word,
}

/// Which divisor wins when several rules apply to a word.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Lowest basis index, then lowest `k`, then leftmost occurrence.
    #[default]
    LeftmostFirst,
    /// Highest basis index, then highest `k`, then rightmost occurrence.
    Reversed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: RuleId,
    pub position: StarWord,
    pub coeff: Scalar,
    /// The monomial rewritten by this step, `position|_{lead}`.
    pub monomial: Word,
}

/// Every rewrite performed by a reduction, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<Step>,
}

impl ReductionTrace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// `input − Σ c · q|_{rule}`: equals the normal form when the trace came
    /// from reducing `input`.
    pub fn replay(&self, input: &DiffPoly, rs: &RuleSet) -> DiffPoly {
        let mut acc = input.clone();
        for step in &self.steps {
            let rule = rs.rule(step.rule.basis, step.rule.k).expect("rule in trace");
            acc = &acc - &subst(&step.position, &rule.poly).scale(&step.coeff);
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub normal_form: DiffPoly,
    pub trace: ReductionTrace,
}

/// A reduction ran out of its step budget.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("reduction stopped after {steps} steps")]
pub struct BudgetExhausted {
    pub steps: usize,
    pub partial: DiffPoly,
    pub trace: ReductionTrace,
}

/// Outcome of a triviality test modulo `(S, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Triviality {
    /// Reduced to zero with every rewrite strictly below `w`; the trace is
    /// the certificate.
    Trivial(ReductionTrace),
    /// Did not reduce to zero.
    Nontrivial { normal_form: DiffPoly, trace: ReductionTrace },
    /// Reduced to zero, but some rewrite happened at a monomial not below `w`.
    /// Only possible under an order that is not compatible with multiplication.
    AboveAmbiguity { trace: ReductionTrace },
    Exhausted(BudgetExhausted),
}

impl Triviality {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Triviality::Trivial(_))
    }
}

struct BasisCache {
    latest: DiffPoly,
    rules: Vec<Option<Arc<Rule>>>,
}

/// Default step budget for reductions under the lexicographic order.
pub const DEFAULT_LEX_BUDGET: usize = 200_000;

/// A monic generating set together with its derivative rules.
pub struct RuleSet {
    ring: Arc<Ring>,
    order: MonOrder,
    basis: Vec<DiffPoly>,
    cap: u32,
    budget: Option<usize>,
    cache: RwLock<Vec<BasisCache>>,
}

impl fmt::Debug for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RuleSet")
            .field("order", &self.order)
            .field("basis", &self.basis)
            .field("cap", &self.cap)
            .finish()
    }
}

impl Clone for RuleSet {
    fn clone(&self) -> Self {
        let cache = self.cache.read().unwrap();
        let cache = cache
            .iter()
            .map(|c| BasisCache {
                latest: c.latest.clone(),
                rules: c.rules.clone(),
            })
            .collect();
        Self {
            ring: self.ring.clone(),
            order: self.order,
            basis: self.basis.clone(),
            cap: self.cap,
            budget: self.budget,
            cache: RwLock::new(cache),
        }
    }
}

impl RuleSet {
    /// Normalises every element to be monic; rejects zero elements and
    /// orders that do not match the ring.
    pub fn new(ring: &Arc<Ring>, basis: Vec<DiffPoly>, order: MonOrder) -> Result<Self, Error> {
        ring.check_order(order)?;
        let mut monic = Vec::with_capacity(basis.len());
        for f in basis {
            if !Arc::ptr_eq(f.ring(), ring) && f.ring().as_ref() != ring.as_ref() {
                return Err(Error::ContextMismatch);
            }
            monic.push(f.monic(order)?);
        }
        let budget = (!order.is_deg_lex()).then_some(DEFAULT_LEX_BUDGET);
        let cache = monic
            .iter()
            .map(|s| BasisCache {
                latest: s.clone(),
                rules: Vec::new(),
            })
            .collect();
        Ok(Self {
            ring: ring.clone(),
            order,
            basis: monic,
            cap: 0,
            budget,
            cache: RwLock::new(cache),
        })
    }

    /// Materialise `dᵏ(s)` for every `k <= cap` up front.
    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self.ensure(cap);
        self
    }

    /// Step budget for reductions; `None` means unlimited.
    pub fn with_budget(mut self, budget: Option<usize>) -> Self {
        self.budget = budget;
        self
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn order(&self) -> MonOrder {
        self.order
    }

    pub fn basis(&self) -> &[DiffPoly] {
        &self.basis
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    /// Largest `k` such that some `dᵏ(s)` could have a leading word dividing `u`.
    pub fn derivative_bound(&self, u: &Word) -> u32 {
        let needed = if self.order.is_deg_lex() {
            u.max_order()
        } else {
            u32::try_from(u.weight()).unwrap_or(u32::MAX)
        };
        needed.max(self.cap)
    }

    fn ensure(&self, k: u32) {
        let want = k as usize + 1;
        {
            let cache = self.cache.read().unwrap();
            if cache.iter().all(|c| c.rules.len() >= want) {
                return;
            }
        }
        let mut cache = self.cache.write().unwrap();
        for (basis, c) in cache.iter_mut().enumerate() {
            while c.rules.len() < want {
                let k = c.rules.len() as u32;
                if k > 0 {
                    c.latest = c.latest.derive();
                }
                let rule = if c.latest.is_zero() {
                    None
                } else {
                    let poly = c.latest.monic(self.order).expect("nonzero");
                    let lead = poly.leading(self.order).expect("nonzero").word;
                    c.latest = poly.clone();
                    Some(Arc::new(Rule {
                        id: RuleId { basis, k },
                        poly,
                        lead,
                    }))
                };
                c.rules.push(rule);
            }
        }
    }

    /// The rule `dᵏ(S[basis])♮`, or `None` when that derivative vanishes.
    pub fn rule(&self, basis: usize, k: u32) -> Option<Arc<Rule>> {
        self.ensure(k);
        self.cache.read().unwrap()[basis].rules[k as usize].clone()
    }

    /// All rules with `k <= upto`, ordered by basis index then `k`.
    pub fn rules_upto(&self, upto: u32) -> Vec<Arc<Rule>> {
        self.ensure(upto);
        let cache = self.cache.read().unwrap();
        cache
            .iter()
            .flat_map(|c| c.rules[..=upto as usize].iter().flatten().cloned())
            .collect()
    }

    fn position_in(&self, lead: &Word, u: &Word, tie: TieBreak) -> Option<StarWord> {
        match self.ring.variant() {
            Variant::NonCommutative => {
                let found = match tie {
                    TieBreak::LeftmostFirst => find_nc(lead, u),
                    TieBreak::Reversed => rfind_nc(lead, u),
                };
                found.map(|(left, right)| StarWord::Nc { left, right })
            }
            Variant::Commutative => divides_c(lead, u).map(|cofactor| StarWord::C { cofactor }),
        }
    }

    /// First rule (under the default tie-break) whose leading word divides `u`.
    pub fn find_reduction(&self, u: &Word) -> Option<(Arc<Rule>, StarWord)> {
        self.find_reduction_with(u, TieBreak::LeftmostFirst)
    }

    pub fn find_reduction_with(&self, u: &Word, tie: TieBreak) -> Option<(Arc<Rule>, StarWord)> {
        let bound = self.derivative_bound(u);
        let rules = self.rules_upto(bound);
        let pick = |r: &Arc<Rule>| {
            if r.lead.degree() > u.degree() {
                return None;
            }
            self.position_in(&r.lead, u, tie).map(|q| (r.clone(), q))
        };
        match tie {
            TieBreak::LeftmostFirst => rules.iter().find_map(pick),
            TieBreak::Reversed => rules.iter().rev().find_map(pick),
        }
    }

    /// True when no rule's leading word divides `u`.
    pub fn is_irreducible(&self, u: &Word) -> bool {
        self.find_reduction(u).is_none()
    }

    pub fn reduce(&self, f: &DiffPoly) -> Result<Reduced, BudgetExhausted> {
        self.reduce_with(f, TieBreak::LeftmostFirst)
    }

    /// Rewrites the largest reducible monomial until none is left.
    pub fn reduce_with(&self, f: &DiffPoly, tie: TieBreak) -> Result<Reduced, BudgetExhausted> {
        let o = self.order;
        let mut work: BTreeMap<OrderKey, (Word, Scalar)> = f
            .terms()
            .iter()
            .map(|(w, c)| (o.key(w), (w.clone(), c.clone())))
            .collect();
        let mut done: BTreeMap<Word, Scalar> = BTreeMap::new();
        let mut trace = ReductionTrace::default();
        while let Some((_, (word, c))) = work.pop_last() {
            let Some((rule, q)) = self.find_reduction_with(&word, tie) else {
                add_into(&mut done, word, c);
                continue;
            };
            if self.budget.is_some_and(|b| trace.len() >= b) {
                add_into(&mut done, word, c);
                for (_, (w, a)) in work {
                    add_into(&mut done, w, a);
                }
                return Err(BudgetExhausted {
                    steps: trace.len(),
                    partial: DiffPoly::from_map(&self.ring, done),
                    trace,
                });
            }
            for (m, a) in rule.poly.terms() {
                if *m == rule.lead {
                    continue;
                }
                let m = q.apply(m);
                let delta = -(&c * a);
                let key = o.key(&m);
                match work.get_mut(&key) {
                    Some(slot) => {
                        slot.1 += delta;
                        if slot.1.is_zero() {
                            work.remove(&key);
                        }
                    }
                    None => {
                        work.insert(key, (m, delta));
                    }
                }
            }
            trace.steps.push(Step {
                rule: rule.id,
                position: q,
                coeff: c,
                monomial: word,
            });
        }
        Ok(Reduced {
            normal_form: DiffPoly::from_map(&self.ring, done),
            trace,
        })
    }

    /// Tests `f ≡ 0 mod (S, w)`. Every monomial of `f` must lie below `w`.
    pub fn is_trivial_mod(&self, f: &DiffPoly, w: &Word) -> Result<Triviality, Error> {
        let o = self.order;
        if let Some(m) = f.terms().keys().find(|m| o.compare(m, w).is_ge()) {
            return Err(Error::NotBelow(m.display(self.ring.table()).to_string()));
        }
        Ok(match self.reduce(f) {
            Err(e) => Triviality::Exhausted(e),
            Ok(Reduced { normal_form, trace }) if !normal_form.is_zero() => {
                Triviality::Nontrivial { normal_form, trace }
            }
            Ok(Reduced { trace, .. }) => {
                if trace.steps.iter().all(|s| o.compare(&s.monomial, w).is_lt()) {
                    Triviality::Trivial(trace)
                } else {
                    Triviality::AboveAmbiguity { trace }
                }
            }
        })
    }
}
