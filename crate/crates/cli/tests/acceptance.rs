//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Expected values come from oracles written here, independently of the
//! library code paths they check: brute-force expansion, explicit sums,
//! exhaustive enumeration of exponent vectors. Time limits are part of each
//! criterion.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use diffgsb::diffmon::{DiffVar, GenTable, MonOrder, Variant, Word};
use diffgsb::diffpoly::{
    int, leading_of_derivative, leibniz_closed_2, leibniz_closed_multi, ratio, DiffPoly, Ring,
    Scalar,
};
use diffgsb::gsb::{
    check_gsb, complete, diff_irr, lift_presentation, quotient_dim_oracle, CompletionOutcome,
    Presentation,
};
use diffgsb::rewrite::{RuleSet, TieBreak};
use diffgsb_cli::parse::parse_poly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn variant(commutative: bool) -> Variant {
    if commutative {
        Variant::Commutative
    } else {
        Variant::NonCommutative
    }
}

fn deglex(v: Variant) -> MonOrder {
    match v {
        Variant::NonCommutative => MonOrder::DegLexNc,
        Variant::Commutative => MonOrder::DegLexC,
    }
}

fn ring(gens: &[&str], v: Variant, lambda: Scalar) -> Arc<Ring> {
    Ring::new(GenTable::new(gens.iter().copied()).unwrap(), v, lambda)
}

fn random_letters(r: &mut ChaCha8Rng, gens: u32, len: usize, max_order: u32) -> Vec<DiffVar> {
    (0..len)
        .map(|_| DiffVar::new(r.gen_range(0..gens), r.gen_range(0..=max_order)))
        .collect()
}

fn random_poly(r: &mut ChaCha8Rng, ring: &Arc<Ring>, terms: usize, max_deg: usize, max_order: u32) -> DiffPoly {
    let gens = ring.table().len() as u32;
    let mut f = DiffPoly::zero(ring);
    for _ in 0..r.gen_range(1..=terms) {
        let len = r.gen_range(0..=max_deg);
        let w = Word::new(random_letters(r, gens, len, max_order), ring.variant());
        let c = ratio(r.gen_range(-5..=5), r.gen_range(1..=3));
        f = &f + &DiffPoly::monomial(ring, w, c);
    }
    f
}

fn binom(n: u32, k: u32) -> Scalar {
    let mut acc = int(1);
    for t in 0..k {
        acc = acc * int(i64::from(n - t)) / int(i64::from(t + 1));
    }
    acc
}

fn lambda_pow(lambda: &Scalar, e: u32) -> Scalar {
    (0..e).fold(int(1), |acc, _| acc * lambda)
}

/// `dⁿ(x·y)` as the explicit double sum over `(j, k)`.
fn two_factor_sum(x: &DiffPoly, y: &DiffPoly, n: u32) -> DiffPoly {
    let lambda = x.ring().weight().clone();
    let mut acc = DiffPoly::zero(x.ring());
    for j in 0..=n {
        for k in 0..=n - j {
            let c = binom(n, j) * binom(n - j, k) * lambda_pow(&lambda, j);
            acc = &acc + &(&x.derive_n(n - k) * &y.derive_n(j + k)).scale(&c);
        }
    }
    acc
}

/// `dⁿ(x₁⋯x_r)` by peeling off the first factor with the two-factor sum.
fn multi_factor_sum(xs: &[DiffPoly], n: u32) -> DiffPoly {
    if xs.len() == 1 {
        return xs[0].derive_n(n);
    }
    let lambda = xs[0].ring().weight().clone();
    let mut acc = DiffPoly::zero(xs[0].ring());
    for j in 0..=n {
        for k in 0..=n - j {
            let c = binom(n, j) * binom(n - j, k) * lambda_pow(&lambda, j);
            let tail = multi_factor_sum(&xs[1..], j + k);
            acc = &acc + &(&xs[0].derive_n(n - k) * &tail).scale(&c);
        }
    }
    acc
}

const WEIGHTS: [(i64, i64); 4] = [(0, 1), (1, 1), (-2, 1), (3, 2)];

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let mut checked = 0;
    for (n, d) in WEIGHTS {
        for commutative in [false, true] {
            let ring = ring(&["x", "y"], variant(commutative), ratio(n, d));
            let lambda = ring.weight().clone();
            for _ in 0..500 {
                let f = random_poly(&mut r, &ring, 3, 3, 2);
                let g = random_poly(&mut r, &ring, 3, 3, 2);
                let lhs = (&f * &g).derive();
                let rhs = &(&(&f.derive() * &g) + &(&f * &g.derive()))
                    + &(&f.derive() * &g.derive()).scale(&lambda);
                if lhs != rhs {
                    return Err(format!("Leibniz rule fails for f = {f}, g = {g}, weight {lambda}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} random pairs, exact"))
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let mut checked = 0;
    for (n, d) in WEIGHTS {
        for commutative in [false, true] {
            let ring = ring(&["x", "y"], variant(commutative), ratio(n, d));
            for _ in 0..3 {
                let x = random_poly(&mut r, &ring, 2, 2, 1);
                let y = random_poly(&mut r, &ring, 2, 2, 1);
                for n in 0..=6 {
                    let want = two_factor_sum(&x, &y, n);
                    if (&x * &y).derive_n(n) != want || leibniz_closed_2(&x, &y, n).unwrap() != want {
                        return Err(format!("two-factor closed form fails at n = {n}"));
                    }
                    checked += 1;
                }
            }
            for factors in 2..=4 {
                let xs: Vec<DiffPoly> = (0..factors)
                    .map(|_| random_poly(&mut r, &ring, 2, 1, 1))
                    .collect();
                let product = xs[1..].iter().fold(xs[0].clone(), |acc, f| &acc * f);
                for n in 0..=4 {
                    let want = multi_factor_sum(&xs, n);
                    if product.derive_n(n) != want || leibniz_closed_multi(&xs, n).unwrap() != want {
                        return Err(format!("{factors}-factor closed form fails at n = {n}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} closed-form identities, exact"))
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut checked = 0;
    for lambda in [int(0), ratio(3, 2)] {
        for commutative in [false, true] {
            let ring = ring(&["x", "y"], variant(commutative), lambda.clone());
            let o = deglex(ring.variant());
            for _ in 0..200 {
                let len = r.gen_range(1..=4);
                let u = Word::new(random_letters(&mut r, 2, len, 2), ring.variant());
                let i = r.gen_range(0..=4);
                // brute force: expand and take the leading term
                let expanded = DiffPoly::monomial(&ring, u.clone(), int(1)).derive_n(i);
                let brute = expanded.leading(o).map_err(|e| e.to_string())?;
                // explicit rule
                let rank = u.degree() as u32;
                let (word, coeff) = if i == 0 {
                    (u.clone(), int(1))
                } else if lambda != int(0) {
                    (u.raised(i), lambda_pow(&lambda, (rank - 1) * i))
                } else {
                    let first = u.letters()[0];
                    let mut letters = u.letters().to_vec();
                    letters[0] = first.raised(i);
                    let mult = u.letters().iter().filter(|&&v| v == first).count() as i64;
                    let c = if commutative { int(mult) } else { int(1) };
                    (Word::new(letters, ring.variant()), c)
                };
                let lib = leading_of_derivative(&u, i, &ring, o).map_err(|e| e.to_string())?;
                if brute.word != word || brute.coeff != coeff || lib.word != word || lib.coeff != coeff {
                    return Err(format!(
                        "leading term of d^{i}({}) disagrees (weight {lambda})",
                        u.display(ring.table())
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} random words across weight regimes and variants, exact"))
}

fn lifted(gens: &[&str], commutative: bool, lambda: Scalar, rels: &[&str], order: MonOrder) -> RuleSet {
    let ring = ring(gens, variant(commutative), lambda);
    let relations = rels.iter().map(|s| parse_poly(&ring, s).unwrap()).collect();
    let p = Presentation::new(&ring, relations).unwrap();
    lift_presentation(&p, order).unwrap()
}

fn commutative_x(exponents: &[usize]) -> Word {
    let mut letters = Vec::new();
    for (order, &a) in exponents.iter().enumerate() {
        letters.extend(std::iter::repeat_n(DiffVar::new(0, order as u32), a));
    }
    Word::commutative(letters)
}

fn criterion_4() -> Outcome {
    let deg = lifted(&["x"], true, int(0), &["x^2"], MonOrder::DegLexC);
    let v = check_gsb(&deg, 2, 6);
    let ring = deg.ring();
    let cube = DiffPoly::var(ring, DiffVar::new(0, 1)).pow(3);
    let w21 = commutative_x(&[1, 1, 1]);
    let found = v
        .failures
        .iter()
        .any(|f| (f.i, f.j) == (2, 1) && f.w == w21 && f.composition == cube);
    if v.all_trivial || !found {
        return Err("deglex check did not report (x^(1))^3 at x^(2)*x^(1)*x^(0)".into());
    }
    let lex = lifted(&["x"], true, int(0), &["x^2"], MonOrder::LexC);
    let lv = check_gsb(&lex, 4, 6);
    if !lv.all_trivial {
        return Err(format!("lex check reports {} failure(s)", lv.failures.len()));
    }
    // exponent vectors (a_0..a_4) of total degree <= 4 with a_r + a_{r+1} < 2
    let mut alpha = Vec::new();
    let mut stack = vec![Vec::new()];
    while let Some(a) = stack.pop() {
        if a.len() == 5 {
            alpha.push(commutative_x(&a));
            continue;
        }
        for e in 0..=4usize {
            let total: usize = a.iter().sum::<usize>() + e;
            let ok = total <= 4 && a.last().map_or(e < 2, |&p| p + e < 2);
            if ok {
                let mut b = a.clone();
                b.push(e);
                stack.push(b);
            }
        }
    }
    let mut got = diff_irr(&lex, 4, 4);
    got.sort();
    alpha.sort();
    if got != alpha {
        return Err(format!("lex basis has {} words, alpha-terms {}", got.len(), alpha.len()));
    }
    Ok(format!(
        "deglex fails at (2,1) with (x^(1))^3; lex passes ({} compositions); {} alpha-terms match",
        lv.examined,
        alpha.len()
    ))
}

fn criterion_5() -> Outcome {
    for n in 2..=4usize {
        let rel = format!("x^{n} - 1");
        let rs = lifted(&["x"], true, int(0), &[&rel], MonOrder::DegLexC);
        let ring = rs.ring().clone();
        let x1 = DiffPoly::var(&ring, DiffVar::new(0, 1));
        let v = check_gsb(&rs, 3, 6);
        let w = commutative_x(&[n, 1]);
        if !v.failures.iter().any(|f| (f.i, f.j) == (1, 0) && f.w == w && f.composition == x1) {
            return Err(format!("n = {n}: composition x^(1) at x^(1)*x^(0)^{n} not reported"));
        }
        let done = complete(&rs, 3, 6, 8);
        if done.outcome != CompletionOutcome::Complete || done.history.first() != Some(&vec![x1.clone()]) {
            return Err(format!("n = {n}: completion did not adjoin exactly x^(1) first"));
        }
        for (d, m) in [(1, 0), (2, 1), (4, 2), (6, 3), (8, 4)] {
            let want: Vec<Word> = (0..n.min(d + 1)).map(|e| commutative_x(&[e])).collect();
            if diff_irr(&done.rules, d, m) != want {
                return Err(format!("n = {n}: basis at ({d},{m}) is not the powers of x^(0)"));
            }
        }
        if !done.rules.reduce(&x1).unwrap().normal_form.is_zero() {
            return Err(format!("n = {n}: x^(1) does not reduce to 0"));
        }
    }
    Ok("n = 2, 3, 4: x^(1) found, adjoined, basis {1, ..., x^(0)^(n-1)} at five bounds".into())
}

struct Setting {
    label: String,
    rules: RuleSet,
}

fn evidence_settings() -> Vec<Setting> {
    let mut out = Vec::new();
    let mut push = |gens: &[&str], commutative: bool, lambda: i64, rel: &str| {
        let v = variant(commutative);
        out.push(Setting {
            label: format!(
                "{{{rel}}} {} weight {lambda}",
                if commutative { "commutative" } else { "noncommutative" }
            ),
            rules: lifted(gens, commutative, int(lambda), &[rel], deglex(v)),
        });
    };
    for lambda in [0, 1, -2] {
        push(&["x", "y"], false, lambda, "y*x - x*y - 1");
        push(&["y", "x"], false, lambda, "x + y + 1");
        push(&["x"], false, lambda, "x^2");
        for n in 2..=4 {
            push(&["x"], false, lambda, &format!("x^{n} - 1"));
        }
    }
    for lambda in [1, -2] {
        push(&["y", "x"], true, lambda, "x + y + 1");
        push(&["x"], true, lambda, "x^2");
        for n in 2..=4 {
            push(&["x"], true, lambda, &format!("x^{n} - 1"));
        }
    }
    push(&["y", "x"], true, 0, "x + y + 1");
    out
}

fn criterion_6(settings: &[Setting]) -> Outcome {
    let mut examined = 0;
    for s in settings {
        let v = check_gsb(&s.rules, 3, 6);
        if !v.all_trivial {
            return Err(format!("{}: {} nontrivial composition(s)", s.label, v.failures.len()));
        }
        examined += v.examined;
    }
    Ok(format!(
        "{} presentations all trivial at N=3, D=6 ({examined} compositions)",
        settings.len()
    ))
}

fn criterion_7(settings: &[Setting]) -> Outcome {
    let mut exact = 0;
    let mut total = 0;
    for s in settings {
        for (d, m) in [(2, 1), (3, 2), (4, 3)] {
            let count = diff_irr(&s.rules, d, m).len();
            let dim = quotient_dim_oracle(&s.rules, d, m).map_err(|e| format!("{}: {e}", s.label))?;
            if !dim.contains(count) {
                return Err(format!(
                    "{} at ({d},{m}): {count} irreducible words outside [{}, {}]",
                    s.label, dim.lower, dim.upper
                ));
            }
            // under deg-lex every rewrite of a word in the box stays in the box
            if dim.upper != count {
                return Err(format!(
                    "{} at ({d},{m}): in-box generators leave {} dimensions, basis has {count}",
                    s.label, dim.upper
                ));
            }
            exact += usize::from(dim.is_exact());
            total += 1;
        }
    }
    Ok(format!(
        "{total} (presentation, bound) pairs contained and upper-tight; {exact} exact intervals"
    ))
}

fn criterion_8(settings: &[Setting]) -> Outcome {
    let mut r = rng(8);
    let mut checked = 0;
    for s in settings {
        for _ in 0..100 {
            let f = random_poly(&mut r, s.rules.ring(), 4, 4, 3);
            let a = s.rules.reduce_with(&f, TieBreak::LeftmostFirst).unwrap();
            let b = s.rules.reduce_with(&f, TieBreak::Reversed).unwrap();
            if a.normal_form != b.normal_form {
                return Err(format!("{}: normal forms differ for {f}", s.label));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} random polynomials, identical normal forms"))
}

fn criterion_9() -> Outcome {
    let bad = common::golden_mismatches();
    if !bad.is_empty() {
        return Err(format!("reports differ from golden files: {bad:?}"));
    }
    for case in common::CASES {
        if common::run(case) != common::run(case) {
            return Err(format!("{}: output differs between runs", case.name));
        }
    }
    Ok(format!("{} fixtures byte-identical to golden reports and across runs", common::CASES.len()))
}

fn main() {
    let mut all_pass = true;
    let mut report = |id: u32, title: &str, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {took:.2?}, limit {limit:?}")),
            Err(e) => (false, e),
        };
        all_pass &= pass;
        println!(
            "criterion {id}: {} {title}: {detail} ({:.2} s)",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    };
    let secs = Duration::from_secs;
    report(1, "weighted Leibniz rule", secs(10), &mut criterion_1);
    report(2, "closed-form derivatives", secs(30), &mut criterion_2);
    report(3, "leading terms of derivatives", secs(10), &mut criterion_3);
    report(4, "dual numbers", secs(5), &mut criterion_4);
    report(5, "cyclic groups and completion", secs(10), &mut criterion_5);
    let settings = evidence_settings();
    report(6, "lifted bases stay Gröbner-Shirshov", secs(60), &mut || criterion_6(&settings));
    report(7, "basis size agrees with the quotient oracle", secs(120), &mut || criterion_7(&settings));
    report(8, "confluence under two tie-break policies", secs(30), &mut || criterion_8(&settings));
    report(9, "CLI golden reports", secs(60), &mut criterion_9);
    if !all_pass {
        std::process::exit(1);
    }
}
