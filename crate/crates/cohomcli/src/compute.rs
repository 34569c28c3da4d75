use crate::report::{CohomologySection, HodgeNumber, LevelDims, PageSummary, PsiEntry, SpotEntry, SsSummary};
use crate::spec::Problem;
use cech::{de_rham_complex, higgs_complex, sheaf_cohomology, support, Atlas, FilteredWeightComplex};
use exactlin::{FpScalar, Matrix, PrimeField};
use frobsplit::{psi_chain_map, psi_on_cohomology, PsiBlock, SplitData};
use rayon::prelude::*;
use specseq::{gr_fil, pages, Along, FilteredComplexFp, GradedPiece, MFLComplex, SpectralSequence};
use std::collections::{BTreeMap, BTreeSet};
use toricgeom::{weight_box, Character, GeomError};

pub fn to_filtered(f: PrimeField, fwc: &FilteredWeightComplex) -> FilteredComplexFp {
    FilteredComplexFp::new(f, fwc.complex.complex().clone(), fwc.weight_flags.clone(), fwc.hodge_flags.clone())
        .expect("Čech flags are exhaustive and d-stable")
}

/// One character with both spectral sequences of its complex.
#[derive(Clone, Debug)]
pub struct WeightData {
    pub m: Character,
    pub complex: FilteredComplexFp,
    pub weight_ss: SpectralSequence,
    pub hodge_ss: SpectralSequence,
}

impl WeightData {
    fn new(f: PrimeField, m: Character, fwc: &FilteredWeightComplex, r_max: usize) -> Self {
        let complex = to_filtered(f, fwc);
        let weight_ss = pages(f, &complex, Along::Weight, r_max);
        let hodge_ss = pages(f, &complex, Along::Hodge, r_max);
        Self { m, complex, weight_ss, hodge_ss }
    }

    /// Nonzero `E_1` along either filtration.
    fn visible(&self) -> bool {
        !self.weight_ss.pages[1].support().is_empty() || !self.hodge_ss.pages[1].support().is_empty()
    }

    fn sub_dims(&self, f: PrimeField, level: usize) -> Vec<usize> {
        let c = self.complex.complex();
        c.degrees().map(|q| c.sub_cohomology(f, q, &|n| self.complex.weight(n).get(level as i64)).dim()).collect()
    }
}

/// Everything per character that the report and the checks share.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub box_weights: Vec<Character>,
    pub shell: Result<usize, GeomError>,
    /// De Rham characters from the box and its `p`-multiples with nonzero `E_1`.
    pub dr: Vec<WeightData>,
    /// Higgs characters from the box with nonzero `E_1`.
    pub hig: Vec<WeightData>,
    /// Higgs characters `m′` for which `Higgs(m′)` or `dR(p·m′)` is visible.
    pub paired: Vec<Character>,
}

pub fn scaled(m: &[i64], p: i64) -> Character {
    m.iter().map(|x| p * x).collect()
}

impl Analysis {
    pub fn new(problem: &Problem) -> Self {
        let f = problem.field();
        let atlas = &problem.atlas;
        let n = problem.rank();
        let r_max = n + 2;
        let box_weights = weight_box(problem.fan(), None, problem.radius).points();
        let shell = support(atlas, problem.radius).map(|w| w.len()).map_err(|e| match e {
            cech::CechError::Geometry(g) => g,
            other => GeomError::NotComplete(other.to_string()),
        });
        let p = f.p() as i64;
        let candidates: BTreeSet<Character> = box_weights.iter().flat_map(|m| [m.clone(), scaled(m, p)]).collect();
        let candidates: Vec<Character> = candidates.into_iter().collect();
        let dr: Vec<WeightData> = candidates
            .par_iter()
            .map(|m| WeightData::new(f, m.clone(), &de_rham_complex(atlas, m), r_max))
            .filter(WeightData::visible)
            .collect();
        let hig: Vec<WeightData> = box_weights
            .par_iter()
            .map(|m| WeightData::new(f, m.clone(), &higgs_complex(atlas, m), r_max))
            .filter(WeightData::visible)
            .collect();
        let dr_set: BTreeSet<&Character> = dr.iter().map(|w| &w.m).collect();
        let hig_set: BTreeSet<&Character> = hig.iter().map(|w| &w.m).collect();
        let paired = box_weights
            .iter()
            .filter(|m| hig_set.contains(m) || dr_set.contains(&scaled(m, p)))
            .cloned()
            .collect();
        Self { box_weights, shell, dr, hig, paired }
    }

    /// Characters reported as carrying something.
    pub fn weights(&self) -> Vec<Character> {
        let all: BTreeSet<Character> = self.dr.iter().chain(&self.hig).map(|w| w.m.clone()).collect();
        all.into_iter().collect()
    }

    pub fn top(&self) -> usize {
        self.dr.iter().chain(&self.hig).map(|w| w.complex.complex().hi() as usize + 1).max().unwrap_or(1)
    }
}

fn sum_dims(list: impl Iterator<Item = Vec<usize>>, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for v in list {
        for (o, x) in out.iter_mut().zip(v) {
            *o += x;
        }
    }
    out
}

/// `h^j(Ω^i(log D))` (or of `W_l Ω^i(log D)`) summed over Higgs characters.
pub fn sheaf_table(atlas: &Atlas, weights: &[Character], level: Option<usize>) -> BTreeMap<(usize, usize), usize> {
    let n = atlas.rank();
    let per: Vec<Vec<Vec<usize>>> = weights
        .par_iter()
        .map(|m| (0..=n).map(|i| sheaf_cohomology(atlas, m, i, level)).collect())
        .collect();
    let mut out = BTreeMap::new();
    for w in &per {
        for (i, js) in w.iter().enumerate() {
            for (j, &h) in js.iter().enumerate() {
                *out.entry((i, j)).or_insert(0) += h;
            }
        }
    }
    out
}

pub fn cohomology_section(problem: &Problem, a: &Analysis) -> CohomologySection {
    let f = problem.field();
    let n = problem.rank();
    let top = a.top();
    let total = |ws: &[WeightData]| sum_dims(ws.iter().map(|w| w.complex.complex().cohomology_dims(f).into_iter().map(|x| x.1).collect()), top);
    let hig_weights: Vec<Character> = a.hig.iter().map(|w| w.m.clone()).collect();
    let table = sheaf_table(&problem.atlas, &hig_weights, None);
    let hodge_numbers = (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .map(|(i, j)| HodgeNumber { i, j, h: table.get(&(i, j)).copied().unwrap_or(0) })
        .collect();
    let weight_filtered = (0..=n)
        .map(|level| LevelDims {
            level,
            de_rham: sum_dims(a.dr.iter().map(|w| w.sub_dims(f, level)), top),
            higgs: sum_dims(a.hig.iter().map(|w| w.sub_dims(f, level)), top),
        })
        .collect();
    CohomologySection { de_rham: total(&a.dr), higgs: total(&a.hig), hodge_numbers, weight_filtered }
}

fn entries(map: BTreeMap<(i64, i64), usize>) -> Vec<SpotEntry> {
    map.into_iter().filter(|&(_, v)| v > 0).map(|((p, q), value)| SpotEntry { p, q, value }).collect()
}

/// Spectral sequences of several characters merged spot by spot.
pub fn merge_ss(f: PrimeField, along: Along, list: &[&SpectralSequence], top: usize) -> SsSummary {
    let degeneration = list.iter().map(|s| s.degeneration).max().unwrap_or(0);
    let last = degeneration.max(1);
    let mut pages = Vec::new();
    for r in 0..=last {
        let mut dims = BTreeMap::new();
        let mut ranks = BTreeMap::new();
        for ss in list {
            let page = ss.pages.get(r).unwrap_or(&ss.infinity);
            for (k, v) in page.dims() {
                *dims.entry(k).or_insert(0) += v;
            }
            for (k, d) in &page.d {
                *ranks.entry(*k).or_insert(0) += d.rank(f);
            }
        }
        pages.push(PageSummary { r, dims: entries(dims), d_ranks: entries(ranks) });
    }
    let mut inf = BTreeMap::new();
    let mut abutment = vec![0; top];
    for ss in list {
        for (k, v) in ss.infinity.dims() {
            *inf.entry(k).or_insert(0) += v;
        }
        for (&q, &v) in &ss.abutment {
            if let Some(slot) = abutment.get_mut(q as usize) {
                *slot += v;
            }
        }
    }
    SsSummary {
        along: match along {
            Along::Weight => "weight",
            Along::Hodge => "hodge",
        },
        degeneration,
        pages,
        infinity: entries(inf),
        abutment,
        recursion_ok: list.iter().all(|s| s.recursion_ok),
        convergence_ok: list.iter().all(|s| s.convergence_ok),
    }
}

pub fn ss_sections(problem: &Problem, a: &Analysis) -> (SsSummary, SsSummary) {
    let f = problem.field();
    let w: Vec<&SpectralSequence> = a.dr.iter().map(|x| &x.weight_ss).collect();
    let h: Vec<&SpectralSequence> = a.dr.iter().map(|x| &x.hodge_ss).collect();
    (merge_ss(f, Along::Weight, &w, a.top()), merge_ss(f, Along::Hodge, &h, a.top()))
}

pub fn psi_entry(b: &PsiBlock) -> PsiEntry {
    PsiEntry {
        higgs_weight: b.higgs_weight.clone(),
        de_rham_weight: b.de_rham_weight.clone(),
        degree: b.degree,
        hodge_degrees: b.hodge_degrees.clone(),
        matrix: b.matrix.to_rows(),
    }
}

/// `ψ` on cohomology for every paired character, with the given lift.
pub fn psi_blocks(problem: &Problem, a: &Analysis, split: &SplitData) -> Result<Vec<PsiBlock>, String> {
    let per: Vec<Result<Vec<PsiBlock>, String>> = a
        .paired
        .par_iter()
        .map(|m| psi_on_cohomology(&problem.atlas, split, std::slice::from_ref(m)).map_err(|e| e.to_string()))
        .collect();
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}

fn graded_coords(pieces: &[GradedPiece], dim: usize, level: i64, v: &[FpScalar], f: PrimeField) -> Option<Vec<FpScalar>> {
    let mut out = vec![0; dim];
    if let Some(piece) = pieces.iter().find(|p| p.level == level) {
        let c = piece.quotient.coords(f, v)?;
        out[piece.offset..piece.offset + c.len()].copy_from_slice(&c);
    }
    Some(out)
}

/// The MFLC `(dR(p·m′), W, Fil, ψ)` at Higgs character `m′`.
///
/// `Higgs(m′)` and `Gr_Fil dR(p·m′)` have the same blocks (the section
/// conditions only see signs of pairings), so block coordinates of the
/// former convert to graded coordinates of the latter by a matrix `J`
/// indexed by form degree; `ψ` is then passed as `ψ_chain ∘ J⁻¹`.
pub fn mflc_for_weight(problem: &Problem, split: &SplitData, m: &[i64]) -> Result<MFLComplex, String> {
    let f = problem.field();
    let atlas = &problem.atlas;
    let pm = scaled(m, f.p() as i64);
    let hig = higgs_complex(atlas, m);
    let dr = de_rham_complex(atlas, &pm);
    let k = to_filtered(f, &dr);
    let (gr, pieces) = gr_fil(f, &k);
    let psi = psi_chain_map(atlas, split, m).map_err(|e| e.to_string())?;
    let mut j = Vec::new();
    for q in 0..=hig.complex.top() {
        let (hb, db) = (hig.complex.blocks(q), dr.complex.blocks(q));
        let same = hb.len() == db.len()
            && hb.iter().zip(db).all(|(a, b)| a.tuple == b.tuple && a.form_degree == b.form_degree && a.quotient == b.quotient);
        if !same {
            return Err(format!("Higgs({m:?}) and dR({pm:?}) blocks differ in degree {q}"));
        }
        let dim = hig.complex.dim(q);
        let mut cols = Vec::with_capacity(dim);
        for b in hb {
            for idx in b.offset..b.offset + b.dim() {
                let mut e = vec![0; dim];
                e[idx] = 1;
                let c = graded_coords(&pieces[q], gr.complex().dim(q as i64), b.form_degree as i64, &e, f)
                    .ok_or_else(|| format!("block vector {idx} in degree {q} is not in Fil^{}", b.form_degree))?;
                cols.push(c);
            }
        }
        j.push(Matrix::from_columns(gr.complex().dim(q as i64), &cols));
    }
    for (q, jq) in j.iter().enumerate() {
        if q + 1 < j.len() {
            let lhs = gr.complex().d(q as i64).mul(f, jq);
            let rhs = j[q + 1].mul(f, &hig.complex.complex().d(q as i64));
            if lhs != rhs {
                return Err(format!("graded conversion does not commute with d in degree {q}"));
            }
        }
    }
    let psi_gr = psi
        .iter()
        .zip(&j)
        .enumerate()
        .map(|(q, (p, jq))| {
            jq.inverse(f).map(|ji| p.mul(f, &ji)).ok_or_else(|| format!("graded conversion is singular in degree {q}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    MFLComplex::new(f, k, psi_gr).map_err(|e| e.to_string())
}
