use crate::compute::{cohomology_section, mflc_for_weight, psi_blocks, scaled, sheaf_table, Analysis};
use crate::report::CheckResult;
use crate::spec::{Check, Problem};
use cech::{chart_tuples, de_rham_complex, higgs_complex, higgs_hypercohomology, hypercohomology, sheaf_cohomology, support_with, Selector};
use exactlin::{Direction, Flag, Matrix, Subspace};
use flmod::{kernel_cokernel, validate};
use frobsplit::{homotopy_eta, psi_chain_map, FrobLift, SplitData};
use itertools::Itertools;
use logdr::{gr_weight_decompose, truncation_mu_check, weight_residue, weight_subspace, FormSum};
use rayon::prelude::*;
use serde_json::{json, Value};
use specseq::{fl_structure_on_h, mfl_pages, page_fl_morphisms, weight_subobjects, MFLComplex, MflPages};
use std::collections::BTreeSet;
use std::sync::OnceLock;
use toricgeom::{weight_box, Character, Context, GeomError};

const LIFT_SEEDS: [u64; 3] = [101, 102, 103];
const LAW_SEEDS: [u64; 3] = [201, 202, 203];
const MAX_FAILURES: usize = 5;

type MflcEntry = (Character, Result<(MFLComplex, MflPages), String>);

/// Shared state for one run of the verification suites.
pub struct Suite<'a> {
    problem: &'a Problem,
    analysis: &'a Analysis,
    split: Result<SplitData, String>,
    mflc: OnceLock<Vec<MflcEntry>>,
}

fn skip_dim(name: &'static str, p: &Problem) -> CheckResult {
    let (n, q) = (p.rank(), p.field().p());
    CheckResult::skipped(name, format!("dimension {n} is not below p = {q}"), json!({ "dimension": n, "p": q }))
}

fn contexts(p: &Problem) -> Vec<Context> {
    let fan = p.fan();
    let set: BTreeSet<Context> = chart_tuples(p.atlas.charts()).iter().map(|t| Context::of_charts(fan, t)).collect();
    set.into_iter().collect()
}

fn note(failures: &mut Vec<String>, msg: String) {
    if failures.len() < MAX_FAILURES {
        failures.push(msg);
    }
}

impl<'a> Suite<'a> {
    pub fn new(problem: &'a Problem, analysis: &'a Analysis) -> Self {
        let split = split_for(problem, &problem.lift);
        Self { problem, analysis, split, mflc: OnceLock::new() }
    }

    pub fn split(&self) -> Result<&SplitData, String> {
        self.split.as_ref().map_err(Clone::clone)
    }

    pub fn run(&self, check: Check) -> CheckResult {
        match check {
            Check::Shell => self.shell(),
            Check::Decomposition => self.decomposition(),
            Check::LiftIndependence => self.lift_independence(),
            Check::SplittingLaws => self.splitting_laws(),
            Check::Functoriality => self.functoriality(),
            Check::Vanishing => self.vanishing(),
            Check::Residue => self.residue(),
            Check::Truncation => self.truncation(),
            Check::Mflc => self.mflc_check(),
            Check::Strictness => self.strictness(),
        }
    }

    fn shell(&self) -> CheckResult {
        let (p, a) = (self.problem, self.analysis);
        let base = json!({ "radius": p.radius, "box_points": a.box_weights.len(), "retained": a.weights().len() });
        match &a.shell {
            Ok(_) => CheckResult::new("shell", true, base),
            Err(GeomError::RadiusTooSmall { witness, .. }) => {
                CheckResult::fail("shell", "outer shell carries cohomology".into(), json!({ "radius": p.radius, "witness": witness }))
            }
            Err(e) => CheckResult::fail("shell", e.to_string(), base),
        }
    }

    fn decomposition(&self) -> CheckResult {
        let (p, a) = (self.problem, self.analysis);
        if !p.dim_below_p() {
            return skip_dim("decomposition", p);
        }
        let n = p.rank();
        let hig: Vec<Character> = a.hig.iter().map(|w| w.m.clone()).collect();
        let coh = cohomology_section(p, a);
        let whole = sheaf_table(&p.atlas, &hig, None);
        let mut ok = true;
        let mut degrees = Vec::new();
        for (m, &dr) in coh.de_rham.iter().enumerate() {
            let sum: usize = (0..=m.min(n)).map(|i| whole.get(&(i, m - i)).copied().unwrap_or(0)).sum();
            ok &= dr == sum;
            degrees.push(json!({ "m": m, "de_rham": dr, "hodge_sum": sum }));
        }
        let mut levels = Vec::new();
        for l in 0..=n {
            let t = sheaf_table(&p.atlas, &hig, Some(l));
            for (m, &dr) in coh.weight_filtered[l].de_rham.iter().enumerate() {
                let sum: usize = (0..=m.min(n)).map(|i| t.get(&(i, m - i)).copied().unwrap_or(0)).sum();
                ok &= dr == sum;
                levels.push(json!({ "l": l, "m": m, "de_rham": dr, "sheaf_sum": sum }));
            }
        }
        // W-compatibility of ψ: H(W_l Higgs(m′)) and H(W_l dR(p·m′)) agree per character.
        let pr = p.field().p() as i64;
        let mut level_mismatch = Vec::new();
        for m in &a.paired {
            for l in 0..=n {
                let h = higgs_hypercohomology(&p.atlas, m, Selector::Weight(l)).dims;
                let d = hypercohomology(&p.atlas, &scaled(m, pr), Selector::Weight(l)).dims;
                if h != d {
                    level_mismatch.push(json!({ "weight": m, "l": l, "higgs": h, "de_rham": d }));
                }
            }
        }
        ok &= level_mismatch.is_empty();
        let psi = self.split().and_then(|s| psi_blocks(p, a, s));
        let (psi_blocks_n, psi_error) = match &psi {
            Ok(b) => (b.len(), None),
            Err(e) => (0, Some(e.clone())),
        };
        ok &= psi_error.is_none();
        let artifact = json!({
            "degrees": degrees,
            "levels": levels,
            "psi_blocks": psi_blocks_n,
            "psi_error": psi_error,
            "level_mismatch": level_mismatch,
        });
        CheckResult::new("decomposition", ok, artifact)
    }

    fn lift_independence(&self) -> CheckResult {
        let (p, a) = (self.problem, self.analysis);
        if !p.dim_below_p() {
            return skip_dim("lift_independence", p);
        }
        let f = p.field();
        let mut lifts = vec![("canonical".to_string(), FrobLift::canonical(p.fan())), ("input".to_string(), p.lift.clone())];
        for s in LIFT_SEEDS {
            lifts.push((format!("random:{s}"), FrobLift::random(f, p.fan(), s, 3)));
        }
        let results: Vec<(String, Result<Vec<frobsplit::PsiBlock>, String>)> = lifts
            .iter()
            .map(|(label, lift)| (label.clone(), split_for(p, lift).and_then(|s| psi_blocks(p, a, &s))))
            .collect();
        let reference = match &results[0].1 {
            Ok(r) => r.clone(),
            Err(e) => return CheckResult::fail("lift_independence", e.clone(), json!({ "lift": "canonical" })),
        };
        let mut mismatches = Vec::new();
        let mut labels = Vec::new();
        for (label, r) in &results[1..] {
            labels.push(label.clone());
            match r {
                Err(e) => mismatches.push(json!({ "lift": label, "error": e })),
                Ok(blocks) => {
                    for (x, y) in reference.iter().zip(blocks) {
                        if x.matrix != y.matrix || x.higgs_weight != y.higgs_weight || x.degree != y.degree {
                            mismatches.push(json!({ "lift": label, "weight": x.higgs_weight, "degree": x.degree, "reference": x.matrix.to_rows(), "got": y.matrix.to_rows() }));
                        }
                    }
                    if blocks.len() != reference.len() {
                        mismatches.push(json!({ "lift": label, "blocks": blocks.len() }));
                    }
                }
            }
        }
        let entries: usize = reference.iter().map(|b| b.matrix.rows() * b.matrix.cols()).sum();
        let artifact = json!({ "compared": labels, "blocks": reference.len(), "matrix_entries": entries, "mismatches": mismatches });
        CheckResult::new("lift_independence", mismatches.is_empty(), artifact)
    }

    fn splitting_laws(&self) -> CheckResult {
        let (p, a) = (self.problem, self.analysis);
        let f = p.field();
        let mut lifts = vec![("input".to_string(), p.lift.clone()), ("canonical".to_string(), FrobLift::canonical(p.fan()))];
        for s in LAW_SEEDS {
            lifts.push((format!("random:{s}"), FrobLift::random(f, p.fan(), s, 3)));
        }
        let mut ok = true;
        let mut laws = Vec::new();
        for (label, lift) in &lifts {
            match split_for(p, lift) {
                Ok(s) => {
                    let r = s.check_laws();
                    ok &= r.pass();
                    laws.push(json!({ "lift": label, "closed": r.closed, "transition": r.transition, "cocycle": r.cocycle, "checked": r.checked }));
                }
                Err(e) => {
                    ok = false;
                    laws.push(json!({ "lift": label, "error": e }));
                }
            }
        }
        let mut chain = json!(null);
        if p.dim_below_p() {
            let split = match self.split() {
                Ok(s) => s,
                Err(e) => return CheckResult::fail("splitting_laws", e, json!({ "laws": laws })),
            };
            let pr = f.p() as i64;
            let per: Vec<(usize, usize, Vec<String>)> = a
                .paired
                .par_iter()
                .map(|m| {
                    let mut fails = Vec::new();
                    let psi = match psi_chain_map(&p.atlas, split, m) {
                        Ok(x) => x,
                        Err(e) => return (0, 0, vec![e.to_string()]),
                    };
                    let hig = higgs_complex(&p.atlas, m);
                    let dr = de_rham_complex(&p.atlas, &scaled(m, pr));
                    let (mut c, mut w) = (0, 0);
                    for (q, x) in psi.iter().enumerate() {
                        let qi = q as i64;
                        if q + 1 < psi.len() {
                            let lhs = dr.complex.complex().d(qi).mul(f, x);
                            let rhs = psi[q + 1].mul(f, &hig.complex.complex().d(qi));
                            if lhs == rhs {
                                c += 1;
                            } else {
                                fails.push(format!("D∘φ ≠ φ∘δ at {m:?}, degree {q}"));
                            }
                        }
                        if Flag::is_filtered_map(f, x, &hig.weight_flags[q], &dr.weight_flags[q]) {
                            w += 1;
                        } else {
                            fails.push(format!("φ leaves W at {m:?}, degree {q}"));
                        }
                    }
                    (c, w, fails)
                })
                .collect();
            let mut failures = Vec::new();
            for (_, _, fl) in &per {
                for x in fl {
                    note(&mut failures, x.clone());
                }
            }
            ok &= per.iter().all(|x| x.2.is_empty());
            chain = json!({
                "weights": a.paired.len(),
                "chain_squares": per.iter().map(|x| x.0).sum::<usize>(),
                "filtered_degrees": per.iter().map(|x| x.1).sum::<usize>(),
                "failures": failures,
            });
        }
        CheckResult::new("splitting_laws", ok, json!({ "laws": laws, "phi": chain }))
    }

    fn functoriality(&self) -> CheckResult {
        let p = self.problem;
        let Some(m) = &p.morphism else {
            return CheckResult::skipped("functoriality", "no morphism in the input".into(), json!({}));
        };
        let f = p.field();
        let mut ok = true;
        let mut certs = Vec::new();
        for i in 0..f.p() as usize {
            match homotopy_eta(f, &m.map, (&p.atlas.divisor, &p.lift), (&m.target_divisor, &m.target_lift), i) {
                Ok(c) => certs.push(json!({
                    "i": i,
                    "checked": c.checked,
                    "filtered_checked": c.filtered_checked,
                    "eta_zero": c.eta_is_zero(),
                    "eta_entries": c.eta.iter().map(|(_, e)| e.entries().count()).sum::<usize>(),
                })),
                Err(e) => {
                    ok = false;
                    certs.push(json!({ "i": i, "error": e.to_string() }));
                }
            }
        }
        CheckResult::new("functoriality", ok, json!({ "certificates": certs }))
    }

    fn vanishing(&self) -> CheckResult {
        let p = self.problem;
        let Some(twisted) = p.twisted_atlas() else {
            return CheckResult::skipped("vanishing", "no twist in the input".into(), json!({}));
        };
        let tw = p.twist.as_ref().expect("twisted atlas has a twist");
        let n = p.rank();
        let levels: Vec<Option<usize>> = (0..=n).map(Some).chain([None]).collect();
        let exact = |m: &[i64]| (0..=n).all(|i| sheaf_cohomology(&twisted, m, i, None).iter().all(|&h| h == 0));
        let shell = support_with(&twisted, p.radius, exact);
        let points = weight_box(p.fan(), Some(tw), p.radius).points();
        let rows: Vec<Vec<Value>> = points
            .par_iter()
            .map(|m| {
                let mut out = Vec::new();
                for i in 0..=n {
                    for l in &levels {
                        for (j, &h) in sheaf_cohomology(&twisted, m, i, *l).iter().enumerate() {
                            if i + j > n && h > 0 {
                                out.push(json!({ "weight": m, "i": i, "j": j, "level": l, "dim": h }));
                            }
                        }
                    }
                }
                out
            })
            .collect();
        let nonzero: Vec<Value> = rows.into_iter().flatten().collect();
        let ample = tw.is_ample(p.fan());
        let artifact = json!({
            "twist": tw.coeffs(),
            "ample": ample,
            "characters": points.len(),
            "groups_checked": points.len() * (n + 1) * levels.len(),
            "nonzero": nonzero,
        });
        if let Err(e) = shell {
            return CheckResult::fail("vanishing", e.to_string(), artifact);
        }
        if !ample {
            return CheckResult::skipped("vanishing", "L is not ample; vanishing is not asserted".into(), artifact);
        }
        CheckResult::new("vanishing", nonzero.is_empty(), artifact)
    }

    fn residue(&self) -> CheckResult {
        let p = self.problem;
        let (f, fan, d, n) = (p.field(), p.fan(), &p.atlas.divisor, p.rank());
        let ctxs = contexts(p);
        let points = weight_box(fan, None, p.radius).points();
        let jobs: Vec<(&Context, &Character)> = ctxs.iter().cartesian_product(points.iter()).collect();
        let per: Vec<(usize, usize, usize, Vec<String>)> = jobs
            .par_iter()
            .map(|(ctx, m)| {
                let (mut slices, mut graded, mut kills) = (0, 0, 0);
                let mut fails = Vec::new();
                let log_rays: Vec<usize> = ctx.rays.iter().copied().filter(|&r| d.contains(r)).collect();
                for i in 0..=n {
                    for l in 0..=i {
                        slices += 1;
                        match gr_weight_decompose(f, fan, ctx, d, m, i, l) {
                            Ok(dec) => graded += dec.source_dim,
                            Err(e) => fails.push(e.to_string()),
                        }
                        if l == 0 {
                            continue;
                        }
                        for w in weight_subspace(f, fan, ctx, m, i, l - 1, d, None).basis_vectors() {
                            let omega = FormSum::from_vector(f, n, m, i, &w);
                            for face in log_rays.iter().copied().combinations(l) {
                                kills += 1;
                                match weight_residue(f, fan, ctx, d, &omega, &face) {
                                    Ok(r) if r.is_zero() => {}
                                    Ok(_) => fails.push(format!("Res along {face:?} is nonzero on W_{} at {m:?}", l - 1)),
                                    Err(e) => fails.push(e.to_string()),
                                }
                            }
                        }
                    }
                }
                (slices, graded, kills, fails)
            })
            .collect();
        let mut failures = Vec::new();
        for x in &per {
            for s in &x.3 {
                note(&mut failures, s.clone());
            }
        }
        let ok = per.iter().all(|x| x.3.is_empty());
        let artifact = json!({
            "contexts": ctxs.len(),
            "characters": points.len(),
            "slices": per.iter().map(|x| x.0).sum::<usize>(),
            "graded_dim": per.iter().map(|x| x.1).sum::<usize>(),
            "kill_checks": per.iter().map(|x| x.2).sum::<usize>(),
            "failures": failures,
        });
        CheckResult::new("residue", ok, artifact)
    }

    fn truncation(&self) -> CheckResult {
        let p = self.problem;
        let (f, fan, d, n) = (p.field(), p.fan(), &p.atlas.divisor, p.rank());
        let pr = f.p() as i64;
        let ctxs = contexts(p);
        let points = weight_box(fan, None, p.radius).points();
        let jobs: Vec<(&Context, &Character)> = ctxs.iter().cartesian_product(points.iter()).collect();
        let per: Vec<Vec<(usize, usize, usize, Option<String>)>> = jobs
            .par_iter()
            .map(|(ctx, m)| {
                (0..=n)
                    .map(|l| {
                        let r = truncation_mu_check(f, fan, ctx, m, d, l, pr);
                        let (a, b) = r.dims.iter().find(|x| x.0 == pr - 1).map_or((0, 0), |x| (x.1, x.2));
                        let fail = (!r.pass()).then(|| format!("μ is not a quasi-isomorphism on {:?} at {m:?}, l = {l}", ctx.rays));
                        (l, a, b, fail)
                    })
                    .collect()
            })
            .collect();
        let mut failures = Vec::new();
        let mut sums = vec![(0usize, 0usize); n + 1];
        for row in &per {
            for (l, a, b, fl) in row {
                sums[*l].0 += a;
                sums[*l].1 += b;
                if let Some(s) = fl {
                    note(&mut failures, s.clone());
                }
            }
        }
        let ok = per.iter().flatten().all(|x| x.3.is_none());
        let levels: Vec<Value> =
            sums.iter().enumerate().map(|(l, (a, b))| json!({ "l": l, "gr_of_truncation": a, "truncation_of_gr": b })).collect();
        let artifact = json!({
            "p": pr,
            "degree": pr - 1,
            "slices": per.iter().map(Vec::len).sum::<usize>(),
            "levels": levels,
            "failures": failures,
        });
        CheckResult::new("truncation", ok, artifact)
    }

    fn mflc_entries(&self) -> &[MflcEntry] {
        self.mflc.get_or_init(|| {
            let p = self.problem;
            let Ok(split) = self.split() else {
                return Vec::new();
            };
            self.analysis
                .paired
                .par_iter()
                .map(|m| {
                    let r = mflc_for_weight(p, split, m).and_then(|mc| {
                        let pages = mfl_pages(p.field(), &mc, p.rank() + 2).map_err(|e| e.to_string())?;
                        Ok((mc, pages))
                    });
                    (m.clone(), r)
                })
                .collect()
        })
    }

    fn mflc_check(&self) -> CheckResult {
        let p = self.problem;
        if !p.dim_below_p() {
            return skip_dim("mflc", p);
        }
        if let Err(e) = self.split() {
            return CheckResult::fail("mflc", e, json!({}));
        }
        let f = p.field();
        let mut ok = true;
        let mut per = Vec::new();
        for (m, r) in self.mflc_entries() {
            let (mc, mp) = match r {
                Ok(x) => x,
                Err(e) => {
                    ok = false;
                    per.push(json!({ "weight": m, "error": e }));
                    continue;
                }
            };
            ok &= mp.pass();
            let pages: Vec<Value> = mp
                .facts
                .iter()
                .map(|fa| {
                    let total: usize = mp.dr.pages[fa.r].dims().values().sum();
                    let psi_rank: usize = mp.psi[fa.r].values().map(|x| x.rank(f)).sum();
                    json!({
                        "r": fa.r,
                        "dim": total,
                        "psi_rank": psi_rank,
                        "containment": fa.containment,
                        "coincide": fa.coincide,
                        "strict": fa.strict,
                        "psi_iso": fa.psi_iso,
                        "psi_intertwines": fa.psi_intertwines,
                        "mu_iso": fa.mu_iso,
                        "mu_intertwines": fa.mu_intertwines,
                    })
                })
                .collect();
            let mut h = Vec::new();
            for q in mc.dr().complex().degrees() {
                match fl_structure_on_h(f, mc, q) {
                    Ok(module) => {
                        let valid = validate(f, &module).pass();
                        let subs = weight_subobjects(f, mc, q, &module);
                        ok &= valid && subs.is_ok();
                        if module.dim() > 0 {
                            h.push(json!({
                                "q": q,
                                "dim": module.dim(),
                                "hodge": module.hodge_numbers(f).into_iter().filter(|x| x.1 > 0).collect::<Vec<_>>(),
                                "psi": module.psi().to_rows(),
                                "valid": valid,
                                "weight_subobjects": subs.map(|s| s.iter().map(|(l, x)| (*l, x.dim())).collect::<Vec<_>>()).map_err(|e| e.to_string()),
                            }));
                        }
                    }
                    Err(e) => {
                        ok = false;
                        h.push(json!({ "q": q, "error": e.to_string() }));
                    }
                }
            }
            per.push(json!({ "weight": m, "de_rham_weight": scaled(m, f.p() as i64), "pages": pages, "cohomology": h }));
        }
        CheckResult::new("mflc", ok, json!({ "weights": per }))
    }

    fn strictness(&self) -> CheckResult {
        let p = self.problem;
        if !p.dim_below_p() {
            return skip_dim("strictness", p);
        }
        if let Err(e) = self.split() {
            return CheckResult::fail("strictness", e, json!({}));
        }
        let f = p.field();
        let mut ok = true;
        let mut maps = Vec::new();
        let mut count = 0;
        for (m, r) in self.mflc_entries() {
            let Ok((_, mp)) = r else {
                ok = false;
                continue;
            };
            for r in 1..mp.dr.pages.len() {
                match page_fl_morphisms(f, mp, r) {
                    Err(e) => {
                        ok = false;
                        maps.push(json!({ "weight": m, "r": r, "error": e.to_string() }));
                    }
                    Ok(list) => {
                        for (key, phi) in list {
                            count += 1;
                            let strict = phi.strictness(f).is_ok();
                            let kc = kernel_cokernel(f, &phi);
                            let (kd, cd, valid) = match &kc {
                                Ok((k, c)) => (k.dim(), c.dim(), validate(f, k).pass() && validate(f, c).pass()),
                                Err(_) => (0, 0, false),
                            };
                            ok &= strict && valid;
                            let rank = phi.map.rank(f);
                            if rank > 0 || !strict || !valid {
                                maps.push(json!({ "weight": m, "r": r, "p": key.0, "q": key.1, "rank": rank, "kernel": kd, "cokernel": cd, "strict": strict, "valid": valid }));
                            }
                        }
                    }
                }
            }
        }
        // Control: a filtered projection that is not strict must be rejected.
        let fe = p.field();
        let diag = Flag::new(fe, Direction::Decreasing, 0, vec![Subspace::full(2), Subspace::span(fe, 2, &[vec![1, 1]]), Subspace::zero(2)])
            .expect("monotone");
        let line = Flag::new(fe, Direction::Decreasing, 0, vec![Subspace::full(1), Subspace::full(1), Subspace::full(1), Subspace::zero(1)])
            .expect("monotone");
        let proj = Matrix::from_columns(1, &[vec![1], vec![0]]);
        let rejected = Flag::strictness(fe, &proj, &diag, &line).is_err();
        ok &= rejected;
        CheckResult::new("strictness", ok, json!({ "morphisms": count, "nonzero": maps, "control_rejected": rejected }))
    }
}

pub fn split_for(p: &Problem, lift: &FrobLift) -> Result<SplitData, String> {
    SplitData::new(p.field(), p.fan(), &p.atlas.divisor, lift).map_err(|e| e.to_string())
}
