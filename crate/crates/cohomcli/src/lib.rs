//! Orchestration for the `logfrob` tool: input specs, the gallery, report
//! assembly and the verification suites.

pub mod checks;
pub mod compute;
pub mod gallery;
pub mod report;
pub mod spec;

use compute::{cohomology_section, psi_blocks, psi_entry, ss_sections, Analysis};
use report::{GalleryReport, Report, Status, Tool, SCHEMA};
use spec::{Problem, SpecParseError};

/// Which parts of the report to fill.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sections {
    Cohomology,
    WeightSs,
    Full,
}

pub fn run(problem: &Problem, id: Option<&str>, sections: Sections) -> Report {
    let analysis = Analysis::new(problem);
    let suite = checks::Suite::new(problem, &analysis);
    let full = sections == Sections::Full;
    let cohomology = matches!(sections, Sections::Cohomology | Sections::Full).then(|| cohomology_section(problem, &analysis));
    let (weight_ss, hodge_ss) = if matches!(sections, Sections::WeightSs | Sections::Full) {
        let (w, h) = ss_sections(problem, &analysis);
        (Some(w), Some(h))
    } else {
        (None, None)
    };
    let psi = if full && problem.dim_below_p() {
        suite.split().and_then(|s| psi_blocks(problem, &analysis, s)).map(|b| b.iter().map(psi_entry).collect()).unwrap_or_default()
    } else {
        Vec::new()
    };
    let results = if full { problem.checks.iter().map(|&c| suite.run(c)).collect() } else { Vec::new() };
    let mut report = Report {
        schema: SCHEMA,
        tool: Tool::default(),
        id: id.map(str::to_string),
        input: problem.spec.clone(),
        prime: problem.field().p() as u64,
        dimension: problem.rank(),
        weight_radius: problem.radius,
        weights: analysis.weights(),
        cohomology,
        weight_ss,
        hodge_ss,
        psi,
        checks: results,
        status: Status::Pass,
    };
    if report.any_fail() {
        report.status = Status::Fail;
    }
    report
}

/// Every gallery member (or the listed ids) with the full report.
pub fn run_gallery(ids: Option<&[String]>, radius: Option<i64>, checks: Option<&[String]>) -> Result<GalleryReport, SpecParseError> {
    let mut members = Vec::new();
    for (id, spec) in gallery::gallery() {
        if ids.is_some_and(|list| !list.iter().any(|x| x == id)) {
            continue;
        }
        let problem = spec.validate(radius, checks)?;
        members.push(run(&problem, Some(id), Sections::Full));
    }
    if let Some(list) = ids {
        if let Some(bad) = list.iter().find(|x| !members.iter().any(|m| m.id.as_deref() == Some(x.as_str()))) {
            return Err(SpecParseError::UnknownGalleryId(bad.clone()));
        }
    }
    let status = if members.iter().any(Report::any_fail) { Status::Fail } else { Status::Pass };
    Ok(GalleryReport { schema: SCHEMA, tool: Tool::default(), members, status })
}

/// Sizes the global rayon pool. `None` keeps rayon's default.
pub fn init_threads(n: Option<usize>) -> Result<(), rayon::ThreadPoolBuildError> {
    match n {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global(),
        None => Ok(()),
    }
}
