//! Compositions, bounded Gröbner-Shirshov checks, completion, and the
//! irreducible-word basis of a quotient.
//!
//! Every check here is bounded: derivative orders `i, j <= N` and ambiguity
//! words of degree `<= D`. A passing [`GsbVerdict`] is evidence within those
//! bounds, never an unconditional proof, and it always carries the bounds it
//! was computed under.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;

use crate::diffmon::{
    divides_c, divides_nc, lcm_c, overlaps_nc, words_within, MonOrder, OrderKey, Variant, Word,
};
use crate::diffpoly::{hat_embed, leading_of_derivative, DiffPoly, Ring, Scalar};
use crate::error::Error;
use crate::rewrite::{
    subst, BudgetExhausted, ReductionTrace, Rule, RuleId, RuleSet, StarWord, Triviality,
};

/// Defaults shared with the command-line front end.
pub const DEFAULT_MAX_ORDER: u32 = 3;
pub const DEFAULT_MAX_DEGREE: usize = 6;
pub const DEFAULT_ROUNDS: usize = 8;

/// An algebra `k⟨X⟩/(R)` or `k[X]/(R)` given by relations in order-0 variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    ring: Arc<Ring>,
    relations: Vec<DiffPoly>,
}

impl Presentation {
    pub fn new(ring: &Arc<Ring>, relations: Vec<DiffPoly>) -> Result<Self, Error> {
        for r in &relations {
            if r.ring().as_ref() != ring.as_ref() {
                return Err(Error::ContextMismatch);
            }
            if r.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            if r.max_order() > 0 {
                return Err(Error::PositiveOrder);
            }
        }
        Ok(Self {
            ring: ring.clone(),
            relations,
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn relations(&self) -> &[DiffPoly] {
        &self.relations
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CompositionKind {
    /// `f·u − v·g` at an overlap `w = f̄u = vḡ`.
    Intersection,
    /// `f − a·g·b` where `f̄ = a ḡ b`.
    Inclusion,
    /// `f·u − g·v` at `w = lcm(f̄, ḡ)`.
    Commutative,
}

impl CompositionKind {
    pub fn name(self) -> &'static str {
        match self {
            CompositionKind::Intersection => "intersection",
            CompositionKind::Inclusion => "inclusion",
            CompositionKind::Commutative => "commutative",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CompositionStatus {
    Trivial,
    Nontrivial,
    /// Reduction hit its step budget (lexicographic order only).
    BudgetExhausted,
    /// Some monomial of the composition, or some rewrite used to reduce it,
    /// is not below `w`. Only possible under an order that is not compatible
    /// with multiplication.
    OrderViolation,
}

impl CompositionStatus {
    pub fn name(self) -> &'static str {
        match self {
            CompositionStatus::Trivial => "trivial",
            CompositionStatus::Nontrivial => "nontrivial",
            CompositionStatus::BudgetExhausted => "budget-exhausted",
            CompositionStatus::OrderViolation => "order-violation",
        }
    }
}

/// One composition `left|_{dⁱ(S[lhs])♮} − right|_{dʲ(S[rhs])♮}` and its fate.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionReport {
    pub kind: CompositionKind,
    pub lhs: usize,
    pub rhs: usize,
    pub i: u32,
    pub j: u32,
    pub w: Word,
    pub left: StarWord,
    pub right: StarWord,
    pub composition: DiffPoly,
    pub normal_form: DiffPoly,
    pub status: CompositionStatus,
    pub certificate: ReductionTrace,
}

impl CompositionReport {
    pub fn is_trivial(&self) -> bool {
        self.status == CompositionStatus::Trivial
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub max_order: u32,
    pub max_degree: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_MAX_ORDER,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GsbVerdict {
    pub all_trivial: bool,
    pub bounds: Bounds,
    /// Number of compositions examined.
    pub examined: usize,
    pub failures: Vec<CompositionReport>,
}

fn context_poly(q: &StarWord, rule: &Rule) -> DiffPoly {
    subst(q, &rule.poly)
}

fn finish(
    rs: &RuleSet,
    kind: CompositionKind,
    (f, g): (&Rule, &Rule),
    w: Word,
    left: StarWord,
    right: StarWord,
) -> CompositionReport {
    let composition = &context_poly(&left, f) - &context_poly(&right, g);
    let (status, normal_form, certificate) = match rs.is_trivial_mod(&composition, &w) {
        Err(_) => (
            CompositionStatus::OrderViolation,
            composition.clone(),
            ReductionTrace::default(),
        ),
        Ok(Triviality::Trivial(trace)) => {
            (CompositionStatus::Trivial, DiffPoly::zero(rs.ring()), trace)
        }
        Ok(Triviality::Nontrivial { normal_form, trace }) => {
            (CompositionStatus::Nontrivial, normal_form, trace)
        }
        Ok(Triviality::AboveAmbiguity { trace }) => (
            CompositionStatus::OrderViolation,
            DiffPoly::zero(rs.ring()),
            trace,
        ),
        Ok(Triviality::Exhausted(BudgetExhausted { partial, trace, .. })) => {
            (CompositionStatus::BudgetExhausted, partial, trace)
        }
    };
    CompositionReport {
        kind,
        lhs: f.id.basis,
        rhs: g.id.basis,
        i: f.id.k,
        j: g.id.k,
        w,
        left,
        right,
        composition,
        normal_form,
        status,
        certificate,
    }
}

fn nc_ctx(left: Word, right: Word) -> StarWord {
    StarWord::Nc { left, right }
}

/// All compositions of `(f, g)` for one ordered pair of rules.
fn pair_compositions(rs: &RuleSet, f: &Rule, g: &Rule, max_degree: usize) -> Vec<CompositionReport> {
    let mut out = Vec::new();
    match rs.ring().variant() {
        Variant::NonCommutative => {
            for ov in overlaps_nc(&f.lead, &g.lead) {
                if ov.w.degree() > max_degree {
                    continue;
                }
                out.push(finish(
                    rs,
                    CompositionKind::Intersection,
                    (f, g),
                    ov.w,
                    nc_ctx(Word::one(), ov.u),
                    nc_ctx(ov.v, Word::one()),
                ));
            }
            // inclusions: ḡ inside f̄, never a rule against its own derivatives,
            // and equal leading words only once per unordered pair
            let same_lead_dup = f.lead == g.lead && f.id >= g.id;
            if f.id.basis != g.id.basis && !same_lead_dup && f.lead.degree() <= max_degree {
                for (a, b) in divides_nc(&g.lead, &f.lead) {
                    out.push(finish(
                        rs,
                        CompositionKind::Inclusion,
                        (f, g),
                        f.lead.clone(),
                        StarWord::hole(Variant::NonCommutative),
                        nc_ctx(a, b),
                    ));
                }
            }
        }
        Variant::Commutative => {
            let w = lcm_c(&f.lead, &g.lead);
            let proper = w.degree() < f.lead.degree() + g.lead.degree();
            if proper && w.degree() <= max_degree {
                let u = divides_c(&f.lead, &w).expect("lcm is a multiple");
                let v = divides_c(&g.lead, &w).expect("lcm is a multiple");
                out.push(finish(
                    rs,
                    CompositionKind::Commutative,
                    (f, g),
                    w,
                    StarWord::C { cofactor: u },
                    StarWord::C { cofactor: v },
                ));
            }
        }
    }
    out
}

/// Every composition among `dⁱ(s)♮, dʲ(t)♮` with `i, j <= max_order` whose
/// ambiguity word has degree `<= max_degree`.
///
/// Commutative compositions are symmetric up to sign, so each unordered pair
/// of rules appears once, oriented with the higher derivative order (then
/// higher basis index) on the left. Results come out ordered by
/// `(lhs, rhs, i, j)` regardless of scheduling.
pub fn compositions(rs: &RuleSet, max_order: u32, max_degree: usize) -> Vec<CompositionReport> {
    let rules = rs.rules_upto(max_order);
    let commutative = rs.ring().is_commutative();
    let mut tasks: Vec<(&Arc<Rule>, &Arc<Rule>)> = Vec::new();
    for f in &rules {
        for g in &rules {
            if f.id == g.id && commutative {
                continue;
            }
            if commutative && (f.id.k, f.id.basis) < (g.id.k, g.id.basis) {
                continue;
            }
            tasks.push((f, g));
        }
    }
    tasks.sort_by_key(|(f, g)| (f.id.basis, g.id.basis, f.id.k, g.id.k));
    tasks
        .par_iter()
        .map(|(f, g)| pair_compositions(rs, f, g, max_degree))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// The single composition named by `(lhs, i)` and `(rhs, j)`, all ambiguity
/// words included.
pub fn compositions_of(
    rs: &RuleSet,
    (lhs, i): (usize, u32),
    (rhs, j): (usize, u32),
    max_degree: usize,
) -> Vec<CompositionReport> {
    match (rs.rule(lhs, i), rs.rule(rhs, j)) {
        (Some(f), Some(g)) if f.id != g.id || !rs.ring().is_commutative() => {
            pair_compositions(rs, &f, &g, max_degree)
        }
        _ => Vec::new(),
    }
}

/// Runs [`compositions`] and keeps the failures.
pub fn check_gsb(rs: &RuleSet, max_order: u32, max_degree: usize) -> GsbVerdict {
    let all = compositions(rs, max_order, max_degree);
    let examined = all.len();
    let failures: Vec<_> = all.into_iter().filter(|r| !r.is_trivial()).collect();
    GsbVerdict {
        all_trivial: failures.is_empty(),
        bounds: Bounds {
            max_order,
            max_degree,
        },
        examined,
        failures,
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LiftError {
    #[error(transparent)]
    Invalid(#[from] Error),
    #[error("relations fail the order-0 composition check at {} composition(s)", .0.len())]
    NotClassical(Vec<CompositionReport>),
}

/// Lifts the relations of `p` to order-0 differential relations after
/// confirming they already form a Gröbner-Shirshov basis of the algebra
/// (the same composition check with no derivatives).
pub fn lift_presentation(p: &Presentation, order: MonOrder) -> Result<RuleSet, LiftError> {
    let lifted = p
        .relations
        .iter()
        .map(|r| hat_embed(r, 0))
        .collect::<Result<Vec<_>, _>>()?;
    let rs = RuleSet::new(&p.ring, lifted, order)?;
    let classical = check_gsb(&rs, 0, usize::MAX);
    if !classical.all_trivial {
        return Err(LiftError::NotClassical(classical.failures));
    }
    Ok(rs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionOutcome {
    /// Every composition within bounds is trivial.
    Complete,
    /// Nontrivial compositions remain after the last allowed round.
    RoundsExhausted,
    /// Failures remain but none yields a new element (budget or order issues).
    Stalled,
}

impl CompletionOutcome {
    pub fn name(self) -> &'static str {
        match self {
            CompletionOutcome::Complete => "complete",
            CompletionOutcome::RoundsExhausted => "rounds-exhausted",
            CompletionOutcome::Stalled => "stalled",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Completion {
    pub rules: RuleSet,
    pub verdict: GsbVerdict,
    pub rounds: usize,
    pub outcome: CompletionOutcome,
    /// Elements adjoined in each round, in order.
    pub history: Vec<Vec<DiffPoly>>,
}

/// Bounded Buchberger-style completion: adjoins the monic normal forms of
/// nontrivial compositions until the bounded check passes or `max_rounds`
/// rounds have been used.
pub fn complete(rs: &RuleSet, max_order: u32, max_degree: usize, max_rounds: usize) -> Completion {
    let mut current = rs.clone();
    let mut history = Vec::new();
    loop {
        let verdict = check_gsb(&current, max_order, max_degree);
        let rounds = history.len();
        if verdict.all_trivial {
            return Completion {
                rules: current,
                verdict,
                rounds,
                outcome: CompletionOutcome::Complete,
                history,
            };
        }
        if rounds >= max_rounds {
            return Completion {
                rules: current,
                verdict,
                rounds,
                outcome: CompletionOutcome::RoundsExhausted,
                history,
            };
        }
        let mut basis = current.basis().to_vec();
        let mut adjoined = Vec::new();
        for report in &verdict.failures {
            if report.status != CompositionStatus::Nontrivial {
                continue;
            }
            // inter-reduce against everything adjoined so far this round
            let probe = RuleSet::new(current.ring(), basis.clone(), current.order())
                .expect("basis is valid")
                .with_budget(current.budget());
            let Ok(red) = probe.reduce(&report.normal_form) else {
                continue;
            };
            if red.normal_form.is_zero() {
                continue;
            }
            let new = red.normal_form.monic(current.order()).expect("nonzero");
            basis.push(new.clone());
            adjoined.push(new);
        }
        if adjoined.is_empty() {
            return Completion {
                rules: current,
                verdict,
                rounds,
                outcome: CompletionOutcome::Stalled,
                history,
            };
        }
        current = RuleSet::new(current.ring(), basis, current.order())
            .expect("basis is valid")
            .with_cap(current.cap())
            .with_budget(current.budget());
        history.push(adjoined);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrrMode {
    /// Words avoiding the closed-form leading words `s̄^[n]`.
    Pattern,
    /// Words on which no materialised rule fires.
    Filter,
}

/// The pattern closed form applies to order-0 bases under a deg-lex order.
pub fn irr_mode(rs: &RuleSet) -> IrrMode {
    if rs.order().is_deg_lex() && rs.basis().iter().all(|s| s.max_order() == 0) {
        IrrMode::Pattern
    } else {
        IrrMode::Filter
    }
}

fn divides(variant: Variant, pat: &Word, u: &Word) -> bool {
    match variant {
        Variant::NonCommutative => !divides_nc(pat, u).is_empty(),
        Variant::Commutative => divides_c(pat, u).is_some(),
    }
}

/// Irreducible words of degree `<= max_degree` over variables of order
/// `<= max_order`, ascending under the rule set's order.
pub fn diff_irr(rs: &RuleSet, max_degree: usize, max_order: u32) -> Vec<Word> {
    let ring = rs.ring();
    let o = rs.order();
    let mut words = words_within(ring.table().len(), max_degree, max_order, ring.variant());
    match irr_mode(rs) {
        IrrMode::Pattern => {
            let mut patterns = Vec::new();
            for s in rs.basis() {
                let lead = s.leading(o).expect("basis is nonzero").word;
                if lead.is_one() {
                    patterns.push(lead);
                    continue;
                }
                for n in 0..=max_order {
                    let p = leading_of_derivative(&lead, n, ring, o).expect("deg-lex order");
                    patterns.push(p.word);
                }
            }
            words.retain(|u| !patterns.iter().any(|p| divides(ring.variant(), p, u)));
        }
        IrrMode::Filter => words.retain(|u| rs.is_irreducible(u)),
    }
    words.sort_by(|a, b| o.compare(a, b));
    words
}

/// Dimension of the truncated quotient, as an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleDim {
    /// Words of degree `<= D` over variables of order `<= M`.
    pub words: usize,
    pub lower: usize,
    pub upper: usize,
}

impl OracleDim {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, n: usize) -> bool {
        self.lower <= n && n <= self.upper
    }
}

/// Largest number of candidate rows [`quotient_dim_oracle`] will build.
pub const ORACLE_ROW_LIMIT: usize = 400_000;

/// Incremental row echelon form over the rationals. Rows are keyed by the
/// order key of their words, so a row's leading column is its last entry.
#[derive(Default)]
struct Echelon {
    pivots: HashMap<OrderKey, BTreeMap<OrderKey, Scalar>>,
}

impl Echelon {
    /// Adds a row; returns whether the rank grew.
    fn insert(&mut self, mut row: BTreeMap<OrderKey, Scalar>) -> bool {
        while let Some((lead, c)) = row.last_key_value() {
            let Some(pivot) = self.pivots.get(lead) else {
                let c = c.clone();
                let lead = lead.clone();
                for v in row.values_mut() {
                    *v /= &c;
                }
                self.pivots.insert(lead, row);
                return true;
            };
            let c = c.clone();
            for (w, a) in pivot {
                let e = row.entry(w.clone()).or_insert_with(Scalar::zero);
                *e -= &c * a;
                if e.is_zero() {
                    row.remove(w);
                }
            }
        }
        false
    }
}

/// Brute-force dimension of `V / (I ∩ V)`, where `V` is spanned by the words
/// within `(max_degree, max_order)` and `I` is the differential ideal of the
/// rule set's basis.
///
/// Generators `q|_{dᵏ(s)}` lying entirely inside `V` span a subspace of
/// `I ∩ V`, giving the upper end of the interval. Every element of `I ∩ V` is
/// a combination of generators that touch `V`, so the projections of those
/// generators onto `V` span a superspace of `I ∩ V`, giving the lower end.
/// Only these finitely many generators can touch `V`: a nonconstant term of
/// `dᵏ(s)` has total derivative weight at least `k`.
pub fn quotient_dim_oracle(
    rs: &RuleSet,
    max_degree: usize,
    max_order: u32,
) -> Result<OracleDim, Error> {
    let ring = rs.ring();
    let variant = ring.variant();
    let o = rs.order();
    let box_words: BTreeSet<Word> =
        words_within(ring.table().len(), max_degree, max_order, variant)
            .into_iter()
            .collect();
    let in_box = |w: &Word| w.degree() <= max_degree && w.max_order() <= max_order;

    // contexts whose words fit in the box
    let contexts: Vec<StarWord> = match variant {
        Variant::Commutative => box_words
            .iter()
            .map(|w| StarWord::C { cofactor: w.clone() })
            .collect(),
        Variant::NonCommutative => box_words
            .iter()
            .flat_map(|w| {
                (0..=w.degree()).map(move |cut| StarWord::Nc {
                    left: w.slice(0..cut),
                    right: w.slice(cut..w.degree()),
                })
            })
            .collect(),
    };
    let ctx_degree = |q: &StarWord| match q {
        StarWord::Nc { left, right } => left.degree() + right.degree(),
        StarWord::C { cofactor } => cofactor.degree(),
    };

    let max_k = u32::try_from(max_degree)
        .unwrap_or(u32::MAX)
        .saturating_mul(max_order.max(1));
    let rules: Vec<Arc<Rule>> = rs.rules_upto(max_k);
    let mut rows = 0usize;
    let mut inside = Vec::new();
    let mut straddling = Vec::new();
    for rule in &rules {
        let min_deg = rule.poly.terms().keys().map(Word::degree).min().unwrap_or(0);
        for q in &contexts {
            if ctx_degree(q) + min_deg > max_degree {
                continue;
            }
            let p = subst(q, &rule.poly);
            let mut kept = BTreeMap::new();
            let mut straddles = false;
            for (w, c) in p.into_terms() {
                if in_box(&w) {
                    kept.insert(o.key(&w), c);
                } else {
                    straddles = true;
                }
            }
            if kept.is_empty() {
                continue;
            }
            rows += 1;
            if rows > ORACLE_ROW_LIMIT {
                return Err(Error::BoundOverflow(rows, ORACLE_ROW_LIMIT));
            }
            if !straddles {
                inside.push(kept);
            } else {
                straddling.push(kept);
            }
        }
    }
    let mut ech = Echelon::default();
    let mut rank_inside = 0;
    for row in inside {
        rank_inside += usize::from(ech.insert(row));
    }
    let mut rank_touch = rank_inside;
    for row in straddling {
        rank_touch += usize::from(ech.insert(row));
    }
    let words = box_words.len();
    Ok(OracleDim {
        words,
        lower: words - rank_touch,
        upper: words - rank_inside,
    })
}

/// Result of a bounded membership test.
#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// Reduces to zero; the trace writes `f` as a combination of rules.
    Yes(ReductionTrace),
    /// The nonzero normal form. This certifies non-membership only when the
    /// rule set passes the composition check at bounds covering `f`.
    Irreducible(DiffPoly),
    BudgetExhausted(BudgetExhausted),
}

pub fn member_bounded(f: &DiffPoly, rs: &RuleSet) -> Membership {
    match rs.reduce(f) {
        Ok(r) if r.normal_form.is_zero() => Membership::Yes(r.trace),
        Ok(r) => Membership::Irreducible(r.normal_form),
        Err(e) => Membership::BudgetExhausted(e),
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}, D={}", self.max_order, self.max_degree)
    }
}

/// Identifies a rule in reports.
pub fn rule_label(id: RuleId) -> String {
    format!("d^{}(s{})", id.k, id.basis)
}
