//! Subcommands. Each returns the text to print and the process exit code.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use diffgsb::diffpoly::DiffPoly;
use diffgsb::gsb::{
    check_gsb, complete, compositions_of, diff_irr, irr_mode, lift_presentation, member_bounded,
    quotient_dim_oracle, CompletionOutcome, CompositionReport, CompositionStatus, GsbVerdict,
    IrrMode, LiftError, Membership, DEFAULT_MAX_DEGREE, DEFAULT_MAX_ORDER, DEFAULT_ROUNDS,
};
use diffgsb::rewrite::RuleSet;

use crate::file::{load_path, Loaded};
use crate::parse::parse_poly;
use crate::report::{self, *};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NONTRIVIAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "diffgsb",
    version,
    about = "Gröbner-Shirshov bases for free differential algebras of weight λ"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Presentation file (TOML).
    #[arg(long)]
    pub file: PathBuf,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
    /// Reduction step budget (defaults to unlimited for deglex and a fixed
    /// budget for lex).
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the derivation n times to an expression.
    Derive {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Reduce an expression to normal form modulo the lifted relations.
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u32,
    },
    /// Bounded membership in the differential ideal of the relations.
    Member {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u32,
    },
    /// The compositions of d^i(relation lhs) with d^j(relation rhs).
    Compose {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        lhs: usize,
        #[arg(long, default_value_t = 0)]
        rhs: usize,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// Bounded Gröbner-Shirshov check of the lifted relations.
    CheckGs {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// Bounded completion of the lifted relations.
    Complete {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
        #[arg(long, default_value_t = DEFAULT_ROUNDS)]
        rounds: usize,
    },
    /// Irreducible words within degree and order bounds.
    Basis {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u32,
        /// Cross-check the count against a brute-force quotient dimension.
        #[arg(long)]
        verify: bool,
    },
}

/// What a command prints and how it exits.
#[derive(Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String, code: i32) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn invalid(msg: impl std::fmt::Display) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_INVALID,
        }
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Derive { common, .. }
            | Command::Reduce { common, .. }
            | Command::Member { common, .. }
            | Command::Compose { common, .. }
            | Command::CheckGs { common, .. }
            | Command::Complete { common, .. }
            | Command::Basis { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Derive { .. } => "derive",
            Command::Reduce { .. } => "reduce",
            Command::Member { .. } => "member",
            Command::Compose { .. } => "compose",
            Command::CheckGs { .. } => "check-gs",
            Command::Complete { .. } => "complete",
            Command::Basis { .. } => "basis",
        }
    }
}

pub fn run(cli: &Cli) -> Output {
    let cmd = &cli.command;
    let common = cmd.common();
    let loaded = match load_path(&common.file) {
        Ok(l) => l,
        Err(e) => return Output::invalid(e),
    };
    if let Command::Derive { expr, n, .. } = cmd {
        return derive(&loaded, common, expr, *n);
    }
    let rs = match lift_presentation(&loaded.presentation, loaded.order) {
        Ok(rs) => rs,
        Err(LiftError::Invalid(e)) => return Output::invalid(e),
        Err(LiftError::NotClassical(failures)) => {
            return precheck_failed(cmd.name(), &loaded, common, &failures)
        }
    };
    let rs = match common.budget {
        Some(b) => rs.with_budget(Some(b)),
        None => rs,
    };
    match cmd {
        Command::Derive { .. } => unreachable!("handled above"),
        Command::Reduce { expr, max_order, .. } => reduce(&loaded, common, rs, expr, *max_order),
        Command::Member { expr, max_order, .. } => member(&loaded, common, rs, expr, *max_order),
        Command::Compose {
            lhs,
            rhs,
            i,
            j,
            max_degree,
            ..
        } => compose(&loaded, common, rs, (*lhs, *i), (*rhs, *j), *max_degree),
        Command::CheckGs {
            max_order,
            max_degree,
            ..
        } => check(&loaded, common, rs, *max_order, *max_degree),
        Command::Complete {
            max_order,
            max_degree,
            rounds,
            ..
        } => run_complete(&loaded, common, rs, *max_order, *max_degree, *rounds),
        Command::Basis {
            max_degree,
            max_order,
            verify,
            ..
        } => basis(&loaded, common, rs, *max_degree, *max_order, *verify),
    }
}

fn describe(loaded: &Loaded) -> String {
    let p = PresentationJson::new(loaded);
    let mut s = format!(
        "presentation: {} ({}, weight {}, {})\n",
        p.generators.join(", "),
        if p.commutative { "commutative" } else { "noncommutative" },
        p.weight,
        p.order
    );
    for (k, r) in p.relations.iter().enumerate() {
        let _ = writeln!(s, "  s{k} = {r}");
    }
    s
}

fn parse_expr(loaded: &Loaded, expr: &str) -> Result<DiffPoly, Output> {
    parse_poly(loaded.ring(), expr).map_err(|e| Output::invalid(format!("--expr: {e}")))
}

fn composition_line(r: &CompositionReport, loaded: &Loaded) -> String {
    let c = CompositionJson::new(r, loaded);
    format!(
        "  [{}] d^{}(s{}) with d^{}(s{}) at w = {}: {}  -> {} ({})\n",
        c.kind, c.i, c.lhs, c.j, c.rhs, c.w, c.composition, c.normal_form, c.status
    )
}

fn verdict_code(v: &GsbVerdict) -> i32 {
    if v.all_trivial {
        EXIT_OK
    } else if v
        .failures
        .iter()
        .all(|f| f.status == CompositionStatus::BudgetExhausted)
    {
        EXIT_BUDGET
    } else {
        EXIT_NONTRIVIAL
    }
}

fn verdict_text(v: &GsbVerdict, loaded: &Loaded) -> String {
    let mut s = format!(
        "bounds: {}\nexamined {} compositions, {} not trivial\n",
        v.bounds,
        v.examined,
        v.failures.len()
    );
    for f in &v.failures {
        s.push_str(&composition_line(f, loaded));
    }
    s.push_str(if v.all_trivial {
        "all compositions trivial within bounds\n"
    } else {
        "not a Gröbner-Shirshov basis within bounds\n"
    });
    s
}

fn precheck_failed(
    command: &'static str,
    loaded: &Loaded,
    common: &Common,
    failures: &[CompositionReport],
) -> Output {
    let stdout = if common.json {
        to_json(&PrecheckJson {
            header: Header::new(command, loaded),
            precheck: "failed",
            failures: failures
                .iter()
                .map(|f| CompositionJson::new(f, loaded))
                .collect(),
        })
    } else {
        let mut s = describe(loaded);
        s.push_str("the relations are not a Gröbner-Shirshov basis of the algebra itself:\n");
        for f in failures {
            s.push_str(&composition_line(f, loaded));
        }
        s
    };
    Output::ok(stdout, EXIT_INVALID)
}

fn derive(loaded: &Loaded, common: &Common, expr: &str, n: u32) -> Output {
    let f = match parse_expr(loaded, expr) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let result = report::poly(&f.derive_n(n), loaded.order);
    let stdout = if common.json {
        to_json(&DeriveJson {
            header: Header::new("derive", loaded),
            input: report::poly(&f, loaded.order),
            n,
            result,
        })
    } else {
        format!("{result}\n")
    };
    Output::ok(stdout, EXIT_OK)
}

fn reduce(loaded: &Loaded, common: &Common, rs: RuleSet, expr: &str, max_order: u32) -> Output {
    let f = match parse_expr(loaded, expr) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let rs = rs.with_cap(max_order);
    let (nf, trace, exhausted) = match rs.reduce(&f) {
        Ok(r) => (r.normal_form, r.trace, false),
        Err(e) => (e.partial, e.trace, true),
    };
    let code = if exhausted { EXIT_BUDGET } else { EXIT_OK };
    let stdout = if common.json {
        to_json(&ReduceJson {
            header: Header::new("reduce", loaded),
            input: report::poly(&f, loaded.order),
            max_order,
            exhausted,
            normal_form: report::poly(&nf, loaded.order),
            steps: steps(&trace, loaded),
        })
    } else if exhausted {
        format!(
            "step budget exhausted after {} steps; partial result:\n{}\n",
            trace.len(),
            report::poly(&nf, loaded.order)
        )
    } else {
        format!("{}\n", report::poly(&nf, loaded.order))
    };
    Output::ok(stdout, code)
}

fn member(loaded: &Loaded, common: &Common, rs: RuleSet, expr: &str, max_order: u32) -> Output {
    let f = match parse_expr(loaded, expr) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let rs = rs.with_cap(max_order);
    let zero = DiffPoly::zero(loaded.ring());
    let (verdict, nf, trace, code) = match member_bounded(&f, &rs) {
        Membership::Yes(t) => ("yes", zero, t, EXIT_OK),
        Membership::Irreducible(nf) => ("irreducible", nf, Default::default(), EXIT_NONTRIVIAL),
        Membership::BudgetExhausted(e) => ("budget-exhausted", e.partial, e.trace, EXIT_BUDGET),
    };
    let stdout = if common.json {
        to_json(&MemberJson {
            header: Header::new("member", loaded),
            input: report::poly(&f, loaded.order),
            max_order,
            verdict,
            normal_form: report::poly(&nf, loaded.order),
            certificate: steps(&trace, loaded),
        })
    } else {
        match verdict {
            "yes" => format!("member: yes ({} rewriting steps)\n", trace.len()),
            "irreducible" => format!(
                "member: no reduction to zero; normal form {}\n",
                report::poly(&nf, loaded.order)
            ),
            _ => "member: step budget exhausted\n".to_string(),
        }
    };
    Output::ok(stdout, code)
}

fn compose(
    loaded: &Loaded,
    common: &Common,
    rs: RuleSet,
    (lhs, i): (usize, u32),
    (rhs, j): (usize, u32),
    max_degree: usize,
) -> Output {
    let n = rs.basis().len();
    if lhs >= n || rhs >= n {
        return Output::invalid(format!("relation index out of range (have {n})"));
    }
    let reports = compositions_of(&rs, (lhs, i), (rhs, j), max_degree);
    let code = if reports.iter().all(|r| r.is_trivial()) {
        EXIT_OK
    } else if reports
        .iter()
        .any(|r| matches!(r.status, CompositionStatus::Nontrivial | CompositionStatus::OrderViolation))
    {
        EXIT_NONTRIVIAL
    } else {
        EXIT_BUDGET
    };
    let stdout = if common.json {
        to_json(&ComposeJson {
            header: Header::new("compose", loaded),
            lhs,
            rhs,
            i,
            j,
            max_degree,
            compositions: reports
                .iter()
                .map(|r| CompositionJson::new(r, loaded))
                .collect(),
        })
    } else if reports.is_empty() {
        "no compositions: the leading words do not overlap\n".to_string()
    } else {
        let mut s = String::new();
        for r in &reports {
            let table = loaded.ring().table();
            let _ = write!(
                s,
                "{} composition at w = {}\n  {} |d^{}(s{}) - {} |d^{}(s{})\n  = {}\n  normal form {} ({})\n",
                r.kind.name(),
                report::word(&r.w, loaded),
                r.left.display(table),
                r.i,
                r.lhs,
                r.right.display(table),
                r.j,
                r.rhs,
                report::poly(&r.composition, loaded.order),
                report::poly(&r.normal_form, loaded.order),
                r.status.name()
            );
        }
        s
    };
    Output::ok(stdout, code)
}

fn check(loaded: &Loaded, common: &Common, rs: RuleSet, max_order: u32, max_degree: usize) -> Output {
    let rs = rs.with_cap(max_order);
    let v = check_gsb(&rs, max_order, max_degree);
    let stdout = if common.json {
        to_json(&CheckJson {
            header: Header::new("check-gs", loaded),
            verdict: VerdictJson::new(&v, loaded),
        })
    } else {
        describe(loaded) + &verdict_text(&v, loaded)
    };
    Output::ok(stdout, verdict_code(&v))
}

fn run_complete(
    loaded: &Loaded,
    common: &Common,
    rs: RuleSet,
    max_order: u32,
    max_degree: usize,
    rounds: usize,
) -> Output {
    let rs = rs.with_cap(max_order);
    let done = complete(&rs, max_order, max_degree, rounds);
    let o = loaded.order;
    let code = match done.outcome {
        CompletionOutcome::Complete => EXIT_OK,
        CompletionOutcome::RoundsExhausted => EXIT_NONTRIVIAL,
        CompletionOutcome::Stalled => verdict_code(&done.verdict),
    };
    let stdout = if common.json {
        to_json(&CompleteJson {
            header: Header::new("complete", loaded),
            max_rounds: rounds,
            outcome: done.outcome.name(),
            rounds: done.rounds,
            history: done
                .history
                .iter()
                .map(|round| round.iter().map(|f| report::poly(f, o)).collect())
                .collect(),
            basis: done.rules.basis().iter().map(|f| report::poly(f, o)).collect(),
            verdict: VerdictJson::new(&done.verdict, loaded),
        })
    } else {
        let mut s = describe(loaded);
        for (k, round) in done.history.iter().enumerate() {
            let _ = writeln!(s, "round {}:", k + 1);
            for f in round {
                let _ = writeln!(s, "  adjoined {}", report::poly(f, o));
            }
        }
        let _ = writeln!(s, "outcome: {} after {} round(s)", done.outcome.name(), done.rounds);
        s.push_str("basis:\n");
        for (k, f) in done.rules.basis().iter().enumerate() {
            let _ = writeln!(s, "  s{k} = {}", report::poly(f, o));
        }
        s + &verdict_text(&done.verdict, loaded)
    };
    Output::ok(stdout, code)
}

fn basis(
    loaded: &Loaded,
    common: &Common,
    rs: RuleSet,
    max_degree: usize,
    max_order: u32,
    verify: bool,
) -> Output {
    let words = diff_irr(&rs, max_degree, max_order);
    let mode = match irr_mode(&rs) {
        IrrMode::Pattern => "pattern",
        IrrMode::Filter => "filter",
    };
    let oracle = if verify {
        match quotient_dim_oracle(&rs, max_degree, max_order) {
            Ok(d) => Some(OracleJson::new(&d, words.len())),
            Err(e) => return Output::invalid(e),
        }
    } else {
        None
    };
    let code = match &oracle {
        Some(o) if !o.agrees => EXIT_NONTRIVIAL,
        _ => EXIT_OK,
    };
    let rendered: Vec<String> = words.iter().map(|w| report::word(w, loaded)).collect();
    let stdout = if common.json {
        to_json(&BasisJson {
            header: Header::new("basis", loaded),
            max_degree,
            max_order,
            mode,
            count: words.len(),
            words: rendered,
            oracle,
        })
    } else {
        let mut s = String::new();
        for w in &rendered {
            let _ = writeln!(s, "{w}");
        }
        let _ = writeln!(
            s,
            "{} irreducible word(s) of degree <= {max_degree} and order <= {max_order}",
            words.len()
        );
        if let Some(o) = oracle {
            let _ = writeln!(
                s,
                "quotient dimension within bounds: {} (lower {}, upper {}), {}",
                if o.exact { "exact" } else { "interval" },
                o.lower,
                o.upper,
                if o.agrees { "agrees" } else { "DISAGREES" }
            );
        }
        s
    };
    Output::ok(stdout, code)
}
