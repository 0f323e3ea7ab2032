//! Machine-readable reports. Every document carries `schema: 1`; field order
//! is fixed by declaration order, so output is byte-stable for fixed inputs.

use diffgsb::diffmon::{MonOrder, Word};
use diffgsb::diffpoly::DiffPoly;
use diffgsb::gsb::{rule_label, Bounds, CompositionReport, GsbVerdict, OracleDim};
use diffgsb::rewrite::ReductionTrace;
use serde::Serialize;

use crate::file::Loaded;

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct Header {
    pub schema: u32,
    pub command: &'static str,
    pub presentation: PresentationJson,
}

impl Header {
    pub fn new(command: &'static str, loaded: &Loaded) -> Self {
        Self {
            schema: SCHEMA,
            command,
            presentation: PresentationJson::new(loaded),
        }
    }
}

#[derive(Serialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub commutative: bool,
    pub weight: String,
    pub order: &'static str,
    pub relations: Vec<String>,
}

impl PresentationJson {
    pub fn new(loaded: &Loaded) -> Self {
        let ring = loaded.ring();
        Self {
            generators: ring.table().names().to_vec(),
            commutative: ring.is_commutative(),
            weight: ring.weight().to_string(),
            order: loaded.order.name(),
            relations: loaded
                .presentation
                .relations()
                .iter()
                .map(|r| r.display_with(loaded.order))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct BoundsJson {
    pub max_order: u32,
    pub max_degree: usize,
}

impl From<Bounds> for BoundsJson {
    fn from(b: Bounds) -> Self {
        Self {
            max_order: b.max_order,
            max_degree: b.max_degree,
        }
    }
}

#[derive(Serialize)]
pub struct StepJson {
    pub rule: String,
    pub basis: usize,
    pub k: u32,
    pub position: String,
    pub coeff: String,
    pub monomial: String,
}

pub fn steps(trace: &ReductionTrace, loaded: &Loaded) -> Vec<StepJson> {
    let table = loaded.ring().table();
    trace
        .steps
        .iter()
        .map(|s| StepJson {
            rule: rule_label(s.rule),
            basis: s.rule.basis,
            k: s.rule.k,
            position: s.position.display(table).to_string(),
            coeff: s.coeff.to_string(),
            monomial: s.monomial.display(table).to_string(),
        })
        .collect()
}

pub fn word(w: &Word, loaded: &Loaded) -> String {
    w.display(loaded.ring().table()).to_string()
}

pub fn poly(f: &DiffPoly, o: MonOrder) -> String {
    f.display_with(o)
}

#[derive(Serialize)]
pub struct CompositionJson {
    pub kind: &'static str,
    pub lhs: usize,
    pub rhs: usize,
    pub i: u32,
    pub j: u32,
    pub w: String,
    pub left: String,
    pub right: String,
    pub composition: String,
    pub normal_form: String,
    pub status: &'static str,
    pub certificate: Vec<StepJson>,
}

impl CompositionJson {
    pub fn new(r: &CompositionReport, loaded: &Loaded) -> Self {
        let table = loaded.ring().table();
        Self {
            kind: r.kind.name(),
            lhs: r.lhs,
            rhs: r.rhs,
            i: r.i,
            j: r.j,
            w: word(&r.w, loaded),
            left: r.left.display(table).to_string(),
            right: r.right.display(table).to_string(),
            composition: poly(&r.composition, loaded.order),
            normal_form: poly(&r.normal_form, loaded.order),
            status: r.status.name(),
            certificate: steps(&r.certificate, loaded),
        }
    }
}

#[derive(Serialize)]
pub struct VerdictJson {
    pub all_trivial: bool,
    pub bounds: BoundsJson,
    pub examined: usize,
    pub failures: Vec<CompositionJson>,
}

impl VerdictJson {
    pub fn new(v: &GsbVerdict, loaded: &Loaded) -> Self {
        Self {
            all_trivial: v.all_trivial,
            bounds: v.bounds.into(),
            examined: v.examined,
            failures: v
                .failures
                .iter()
                .map(|r| CompositionJson::new(r, loaded))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct OracleJson {
    pub words: usize,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub agrees: bool,
}

impl OracleJson {
    pub fn new(d: &OracleDim, count: usize) -> Self {
        Self {
            words: d.words,
            lower: d.lower,
            upper: d.upper,
            exact: d.is_exact(),
            agrees: d.contains(count),
        }
    }
}

#[derive(Serialize)]
pub struct DeriveJson {
    #[serde(flatten)]
    pub header: Header,
    pub input: String,
    pub n: u32,
    pub result: String,
}

#[derive(Serialize)]
pub struct ReduceJson {
    #[serde(flatten)]
    pub header: Header,
    pub input: String,
    pub max_order: u32,
    pub exhausted: bool,
    pub normal_form: String,
    pub steps: Vec<StepJson>,
}

#[derive(Serialize)]
pub struct MemberJson {
    #[serde(flatten)]
    pub header: Header,
    pub input: String,
    pub max_order: u32,
    pub verdict: &'static str,
    pub normal_form: String,
    pub certificate: Vec<StepJson>,
}

#[derive(Serialize)]
pub struct ComposeJson {
    #[serde(flatten)]
    pub header: Header,
    pub lhs: usize,
    pub rhs: usize,
    pub i: u32,
    pub j: u32,
    pub max_degree: usize,
    pub compositions: Vec<CompositionJson>,
}

#[derive(Serialize)]
pub struct CheckJson {
    #[serde(flatten)]
    pub header: Header,
    pub verdict: VerdictJson,
}

#[derive(Serialize)]
pub struct PrecheckJson {
    #[serde(flatten)]
    pub header: Header,
    pub precheck: &'static str,
    pub failures: Vec<CompositionJson>,
}

#[derive(Serialize)]
pub struct CompleteJson {
    #[serde(flatten)]
    pub header: Header,
    pub max_rounds: usize,
    pub outcome: &'static str,
    pub rounds: usize,
    pub history: Vec<Vec<String>>,
    pub basis: Vec<String>,
    pub verdict: VerdictJson,
}

#[derive(Serialize)]
pub struct BasisJson {
    #[serde(flatten)]
    pub header: Header,
    pub max_degree: usize,
    pub max_order: u32,
    pub mode: &'static str,
    pub count: usize,
    pub words: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
