use crate::spec::VarietySpec;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "logfrob.report.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIPPED")]
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Self { name: "logfrob", version: env!("CARGO_PKG_VERSION") }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub artifact: Value,
}

impl CheckResult {
    pub fn new(name: &'static str, pass: bool, artifact: Value) -> Self {
        Self { name, status: if pass { Status::Pass } else { Status::Fail }, reason: None, artifact }
    }

    pub fn fail(name: &'static str, reason: String, artifact: Value) -> Self {
        Self { name, status: Status::Fail, reason: Some(reason), artifact }
    }

    pub fn skipped(name: &'static str, reason: String, artifact: Value) -> Self {
        Self { name, status: Status::Skipped, reason: Some(reason), artifact }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HodgeNumber {
    pub i: usize,
    pub j: usize,
    pub h: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelDims {
    pub level: usize,
    pub de_rham: Vec<usize>,
    pub higgs: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologySection {
    pub de_rham: Vec<usize>,
    pub higgs: Vec<usize>,
    pub hodge_numbers: Vec<HodgeNumber>,
    pub weight_filtered: Vec<LevelDims>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpotEntry {
    pub p: i64,
    pub q: i64,
    pub value: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PageSummary {
    pub r: usize,
    pub dims: Vec<SpotEntry>,
    pub d_ranks: Vec<SpotEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SsSummary {
    pub along: &'static str,
    pub degeneration: usize,
    pub pages: Vec<PageSummary>,
    pub infinity: Vec<SpotEntry>,
    pub abutment: Vec<usize>,
    pub recursion_ok: bool,
    pub convergence_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiEntry {
    pub higgs_weight: Vec<i64>,
    pub de_rham_weight: Vec<i64>,
    pub degree: usize,
    pub hodge_degrees: Vec<usize>,
    pub matrix: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool: Tool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub input: VarietySpec,
    pub prime: u64,
    pub dimension: usize,
    pub weight_radius: i64,
    /// Characters with nonzero de Rham or Higgs cohomology.
    pub weights: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_ss: Option<SsSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hodge_ss: Option<SsSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub psi: Vec<PsiEntry>,
    pub checks: Vec<CheckResult>,
    pub status: Status,
}

impl Report {
    pub fn any_fail(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GalleryReport {
    pub schema: &'static str,
    pub tool: Tool,
    pub members: Vec<Report>,
    pub status: Status,
}

impl GalleryReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Tab-separated dimension tables, one record per line.
pub fn to_tsv(r: &Report) -> String {
    let mut out = String::from("id\ttable\tkey\tvalue\n");
    let id = r.id.as_deref().unwrap_or("-");
    if let Some(c) = &r.cohomology {
        for (q, d) in c.de_rham.iter().enumerate() {
            out += &format!("{id}\tde_rham\tq={q}\t{d}\n");
        }
        for (q, d) in c.higgs.iter().enumerate() {
            out += &format!("{id}\thiggs\tq={q}\t{d}\n");
        }
        for h in &c.hodge_numbers {
            out += &format!("{id}\thodge\ti={},j={}\t{}\n", h.i, h.j, h.h);
        }
        for l in &c.weight_filtered {
            for (q, (a, b)) in l.de_rham.iter().zip(&l.higgs).enumerate() {
                out += &format!("{id}\tweight_level\tl={},q={q}\t{a},{b}\n", l.level);
            }
        }
    }
    for ss in [&r.weight_ss, &r.hodge_ss].into_iter().flatten() {
        for page in &ss.pages {
            for s in &page.dims {
                out += &format!("{id}\t{}_page\tr={},p={},q={}\t{}\n", ss.along, page.r, s.p, s.q, s.value);
            }
        }
        out += &format!("{id}\t{}_degeneration\t-\t{}\n", ss.along, ss.degeneration);
    }
    for c in &r.checks {
        let status = serde_json::to_value(c.status).expect("status serializes");
        out += &format!("{id}\tcheck\t{}\t{}\n", c.name, status.as_str().unwrap_or("?"));
    }
    out
}
