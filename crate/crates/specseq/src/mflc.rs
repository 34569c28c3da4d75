use crate::filtrations::{strictness_check, three_filtrations, ThreeFiltrations};
use crate::pages::{pages, SpectralSequence};
use crate::{gr_fil, Along, FilteredComplexFp, GradedPiece, SeqError};
use exactlin::{solve, subquotient_map, FpScalar, Matrix, PrimeField, Subspace};
use flmod::{gr_map, FLModule, FLMorphism};
use std::collections::BTreeMap;

/// `(K_dR, W, Fil)` with `K_Hig = Gr_Fil K_dR` (graded coordinates) and a
/// `W`-filtered quasi-isomorphism `ψ : K_Hig → K_dR`.
#[derive(Clone, Debug)]
pub struct MFLComplex {
    dr: FilteredComplexFp,
    hig: FilteredComplexFp,
    pieces: Vec<Vec<GradedPiece>>,
    psi: Vec<Matrix>,
}

fn violation(axiom: &str, degree: i64) -> SeqError {
    SeqError::AxiomViolation { axiom: axiom.into(), degree }
}

impl MFLComplex {
    /// `psi[k]` maps degree `lo + k` of `Gr_Fil dr` (graded coordinates) to
    /// `dr`. Checks the chain-map, `W`-filtered and per-level
    /// quasi-isomorphism axioms.
    pub fn new(f: PrimeField, dr: FilteredComplexFp, psi: Vec<Matrix>) -> Result<Self, SeqError> {
        let (hig, pieces) = gr_fil(f, &dr);
        let c = dr.complex();
        let lo = c.lo();
        if psi.len() != c.degrees().count() {
            return Err(violation("one ψ per degree", lo));
        }
        for (k, q) in c.degrees().enumerate() {
            if psi[k].rows() != c.dim(q) || psi[k].cols() != hig.complex().dim(q) {
                return Err(violation("ψ shape", q));
            }
            if k + 1 < psi.len() && c.d(q).mul(f, &psi[k]) != psi[k + 1].mul(f, &hig.complex().d(q)) {
                return Err(violation("ψ is a chain map", q));
            }
            if !exactlin::Flag::is_filtered_map(f, &psi[k], &hig.weight(q), &dr.weight(q)) {
                return Err(violation("ψ respects W", q));
            }
        }
        let wlo = c.degrees().map(|q| dr.weight(q).lo()).min().unwrap_or(0);
        let whi = c.degrees().map(|q| dr.weight(q).hi()).max().unwrap_or(0);
        for l in wlo..=whi {
            for (k, q) in c.degrees().enumerate() {
                let hh = hig.complex().sub_cohomology(f, q, &|n| hig.weight(n).get(l));
                let hd = c.sub_cohomology(f, q, &|n| dr.weight(n).get(l));
                let m = subquotient_map(f, &psi[k], &hh, &hd).map_err(|_| violation("ψ respects W", q))?;
                if m.rows() != m.cols() || m.inverse(f).is_none() {
                    return Err(violation(&format!("ψ is a quasi-isomorphism on W_{l}"), q));
                }
            }
        }
        Ok(Self { dr, hig, pieces, psi })
    }

    pub fn dr(&self) -> &FilteredComplexFp {
        &self.dr
    }

    pub fn hig(&self) -> &FilteredComplexFp {
        &self.hig
    }

    pub fn psi(&self, q: i64) -> &Matrix {
        &self.psi[(q - self.dr.complex().lo()) as usize]
    }

    /// Graded coordinates of the class of `v ∈ Fil^level` in degree `q`.
    pub fn graded(&self, f: PrimeField, q: i64, level: i64, v: &[FpScalar]) -> Option<Vec<FpScalar>> {
        let k = (q - self.dr.complex().lo()) as usize;
        let mut out = vec![0; self.hig.complex().dim(q)];
        let Some(piece) = self.pieces.get(k)?.iter().find(|p| p.level == level) else {
            // Gr^level is zero here.
            return self.dr.hodge(q).get(level).contains(f, v).then_some(out);
        };
        let c = piece.quotient.coords(f, v)?;
        out[piece.offset..piece.offset + c.len()].copy_from_slice(&c);
        Some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PageFacts {
    pub r: usize,
    /// `F_d ⊆ F_rec ⊆ F_{d*}` on the de Rham page.
    pub containment: bool,
    /// `F_d = F_rec = F_{d*}` on the de Rham page.
    pub coincide: bool,
    /// Every `d_r` is strict for `F_rec`.
    pub strict: bool,
    pub psi_iso: bool,
    pub psi_intertwines: bool,
    pub mu_iso: bool,
    pub mu_intertwines: bool,
}

impl PageFacts {
    pub fn pass(&self) -> bool {
        self.containment
            && self.coincide
            && self.strict
            && self.psi_iso
            && self.psi_intertwines
            && self.mu_iso
            && self.mu_intertwines
    }
}

type SpotMaps = BTreeMap<(i64, i64), Matrix>;

/// De Rham and Higgs weight spectral sequences paired by `ψ_r`, with the
/// comparison `μ : Gr_{F_rec} E_{r,dR} → E_{r,Hig}`.
#[derive(Clone, Debug)]
pub struct MflPages {
    pub dr: SpectralSequence,
    pub hig: SpectralSequence,
    pub filtrations: Vec<ThreeFiltrations>,
    pub psi: Vec<SpotMaps>,
    /// `None` where `μ` is not defined (`F_d ≠ F_rec` or a lift leaves `Z_r`).
    pub mu: Vec<BTreeMap<(i64, i64), Option<Matrix>>>,
    pub facts: Vec<PageFacts>,
}

impl MflPages {
    pub fn pass(&self) -> bool {
        self.facts.iter().all(PageFacts::pass)
    }

    /// `(spot, FL module)` on page `r`: `F_rec` with `ψ_r ∘ μ`.
    pub fn fl_module(&self, f: PrimeField, r: usize, key: (i64, i64)) -> Option<FLModule> {
        let fil = self.filtrations[r].spots.get(&key)?.recursive.clone();
        let mu = self.mu[r].get(&key)?.as_ref()?;
        FLModule::new(fil, self.psi[r][&key].mul(f, mu)).ok()
    }
}

fn mu_at(
    f: PrimeField,
    m: &MFLComplex,
    ss_dr: &SpectralSequence,
    ss_hig: &SpectralSequence,
    fil: &ThreeFiltrations,
    r: usize,
    key: (i64, i64),
) -> Option<Matrix> {
    let spot = &ss_dr.pages[r].spots[&key];
    let hspot = &ss_hig.pages[r].spots[&key];
    let n = spot.degree();
    let c = m.dr.complex();
    let rec = &fil.spots[&key].recursive;
    let module = FLModule::new(rec.clone(), Matrix::identity(spot.dim())).ok()?;
    let wt = |p: i64, q: i64| m.dr.decreasing(f, Along::Weight, q).get(p);
    let zr = wt(spot.p, n).intersect(f, &wt(spot.p + r as i64, n + 1).preimage_under(f, &c.d(n)));
    let mut cols = Vec::new();
    for piece in module.graded(f).into_iter().filter(|p| p.quotient.dim() > 0) {
        let l = piece.level;
        let lifts = zr.intersect(f, &m.dr.hodge(n).get(l)).basis_vectors();
        let a_cols: Vec<Vec<FpScalar>> = lifts.iter().map(|v| spot.space.coords(f, v).expect("in Z_r")).collect();
        let a = Matrix::from_columns(spot.dim(), &a_cols);
        let mut m_cols = Vec::new();
        for v in &lifts {
            let g = m.graded(f, n, l, v)?;
            m_cols.push(hspot.space.coords(f, &g)?);
        }
        let mm = Matrix::from_columns(hspot.dim(), &m_cols);
        // Lifts whose class lies in F_rec^{l+1} must map to zero.
        let deeper = rec.get(l + 1).preimage_under(f, &a);
        if deeper.basis_vectors().iter().any(|x| mm.apply(f, x).iter().any(|&y| y != 0)) {
            return None;
        }
        for rep in piece.quotient.representatives().row_vecs() {
            let coef = solve(f, &a, &rep)?;
            cols.push(mm.apply(f, &coef));
        }
    }
    Some(Matrix::from_columns(hspot.dim(), &cols))
}

/// Both weight spectral sequences, `ψ_r`, `μ`, and the page facts.
pub fn mfl_pages(f: PrimeField, m: &MFLComplex, r_max: usize) -> Result<MflPages, SeqError> {
    let first_dr = pages(f, &m.dr, Along::Weight, r_max);
    let first_hig = pages(f, &m.hig, Along::Weight, r_max);
    let depth = first_dr.pages.len().max(first_hig.pages.len()) - 1;
    let dr = pages(f, &m.dr, Along::Weight, depth);
    let hig = pages(f, &m.hig, Along::Weight, depth);
    let filtrations = three_filtrations(f, &m.dr, &dr, depth);
    let mut psi = Vec::new();
    let mut mu = Vec::new();
    let mut facts = Vec::new();
    for r in 0..=depth {
        let (pd, ph) = (&dr.pages[r], &hig.pages[r]);
        let mut psi_r = SpotMaps::new();
        for (key, sd) in &pd.spots {
            let sh = &ph.spots[key];
            let map = subquotient_map(f, m.psi(sd.degree()), &sh.space, &sd.space)
                .map_err(|_| violation("ψ maps Z_r and B_r", sd.degree()))?;
            psi_r.insert(*key, map);
        }
        let psi_iso = psi_r.values().all(|a| a.rows() == a.cols() && a.inverse(f).is_some());
        let psi_intertwines = pd.spots.keys().all(|key| {
            let t = pd.target(*key);
            match (psi_r.get(&t), pd.spots.contains_key(&t)) {
                (Some(pt), true) => pd.d[key].mul(f, &psi_r[key]) == pt.mul(f, &ph.d[key]),
                _ => true,
            }
        });
        let fr = &filtrations[r];
        let strict = pd.spots.keys().all(|key| {
            let t = pd.target(*key);
            match fr.spots.get(&t) {
                Some(dst) => strictness_check(f, &pd.d[key], &fr.spots[key].recursive, &dst.recursive).passed(),
                None => true,
            }
        });
        let mu_r: BTreeMap<(i64, i64), Option<Matrix>> =
            pd.spots.keys().map(|key| (*key, mu_at(f, m, &dr, &hig, fr, r, *key))).collect();
        let mu_iso = mu_r.values().all(|x| x.as_ref().is_some_and(|a| a.rows() == a.cols() && a.inverse(f).is_some()));
        let mu_intertwines = mu_iso
            && pd.spots.keys().all(|key| {
                let t = pd.target(*key);
                let (Some(src), Some(dst)) = (fr.spots.get(key), fr.spots.get(&t)) else {
                    return true;
                };
                let ms = FLModule::new(src.recursive.clone(), Matrix::identity(src.recursive.ambient())).unwrap();
                let md = FLModule::new(dst.recursive.clone(), Matrix::identity(dst.recursive.ambient())).unwrap();
                let Ok(gr) = gr_map(f, &ms, &md, &pd.d[key]) else {
                    return false;
                };
                let (mus, mut_) = (mu_r[key].as_ref().unwrap(), mu_r[&t].as_ref().unwrap());
                mut_.mul(f, &gr) == ph.d[key].mul(f, mus)
            });
        facts.push(PageFacts {
            r,
            containment: fr.contained(f),
            coincide: fr.coincide(f),
            strict,
            psi_iso,
            psi_intertwines,
            mu_iso,
            mu_intertwines,
        });
        psi.push(psi_r);
        mu.push(mu_r);
    }
    Ok(MflPages { dr, hig, filtrations, psi, mu, facts })
}

/// Each `d_r` of the de Rham weight spectral sequence on page `r` as a
/// morphism of FL modules, for spots where source or target is nonzero.
pub fn page_fl_morphisms(f: PrimeField, mp: &MflPages, r: usize) -> Result<Vec<((i64, i64), FLMorphism)>, SeqError> {
    let page = &mp.dr.pages[r];
    let mut out = Vec::new();
    for (key, spot) in &page.spots {
        let t = page.target(*key);
        let Some(dst) = page.spots.get(&t) else { continue };
        if spot.dim() == 0 && dst.dim() == 0 {
            continue;
        }
        let undefined = || violation("μ defined on the page", spot.degree());
        let src_m = mp.fl_module(f, r, *key).ok_or_else(undefined)?;
        let dst_m = mp.fl_module(f, r, t).ok_or_else(undefined)?;
        out.push((*key, FLMorphism::new(f, src_m, dst_m, page.d[key].clone())?));
    }
    Ok(out)
}

fn fil_on_h(f: PrimeField, k: &FilteredComplexFp, q: i64, h: &exactlin::Quotient, sub: &dyn Fn(i64) -> Subspace) -> Subspace {
    let z = k.complex().cycles(f, q).intersect(f, &sub(q));
    let vecs: Vec<Vec<FpScalar>> = z.basis_vectors().iter().map(|v| h.coords(f, v).expect("cycle")).collect();
    Subspace::span(f, h.dim(), &vecs)
}

/// `H^q(K_dR)` with the induced `Fil` and `ψ_H : Gr_Fil H → H`, the latter
/// through `Gr^l_Fil H ≅ H^q(Gr^l_Fil K)`.
pub fn fl_structure_on_h(f: PrimeField, m: &MFLComplex, q: i64) -> Result<FLModule, SeqError> {
    let k = &m.dr;
    let c = k.complex();
    let h = c.cohomology(f, q);
    if m.hig.complex().cohomology(f, q).dim() != h.dim() {
        return Err(SeqError::NoDegeneration { degree: q });
    }
    let hf = k.hodge(q);
    let (lo, hi) = (hf.lo(), hf.hi());
    let steps: Vec<Subspace> = (lo..=hi).map(|l| fil_on_h(f, k, q, &h, &|n| k.hodge(n).get(l))).collect();
    let fil = exactlin::Flag::new(f, exactlin::Direction::Decreasing, lo, steps).map_err(|_| SeqError::NoDegeneration { degree: q })?;
    let shell = FLModule::new(fil.clone(), Matrix::identity(h.dim()))?;
    let mut cols = Vec::new();
    for piece in shell.graded(f) {
        let l = piece.level;
        let cycles = c.cycles(f, q).intersect(f, &k.hodge(q).get(l)).basis_vectors();
        let a_cols: Vec<Vec<FpScalar>> = cycles.iter().map(|v| h.coords(f, v).expect("cycle")).collect();
        let a = Matrix::from_columns(h.dim(), &a_cols);
        for rep in piece.quotient.representatives().row_vecs() {
            let coef = solve(f, &a, &rep).ok_or(SeqError::NoDegeneration { degree: q })?;
            let mut z = vec![0; c.dim(q)];
            for (j, v) in cycles.iter().enumerate() {
                for (x, y) in z.iter_mut().zip(v) {
                    *x = f.add(*x, f.mul(coef[j], *y));
                }
            }
            let g = m.graded(f, q, l, &z).expect("cycle of Fil^l");
            let image = m.psi(q).apply(f, &g);
            cols.push(h.coords(f, &image).ok_or_else(|| violation("ψ maps cycles to cycles", q))?);
        }
    }
    Ok(FLModule::new(fil, Matrix::from_columns(h.dim(), &cols))?)
}

/// `W_l H^q` for every weight level, each as an FL submodule of `module`
/// (checked through the inclusion morphism).
pub fn weight_subobjects(f: PrimeField, m: &MFLComplex, q: i64, module: &FLModule) -> Result<Vec<(i64, FLModule)>, SeqError> {
    let k = &m.dr;
    let h = k.complex().cohomology(f, q);
    let w = k.weight(q);
    let mut out = Vec::new();
    for l in w.lo()..=w.hi() {
        let s = fil_on_h(f, k, q, &h, &|n| k.weight(n).get(l));
        let fil = module.fil().restrict_to(f, &s);
        let shell = FLModule::new(fil.clone(), Matrix::identity(s.dim()))?;
        let mut cols = Vec::new();
        for piece in shell.graded(f) {
            for rep in piece.quotient.representatives().row_vecs() {
                let v = s.combine(f, &rep);
                let gr = module.gr_coords(f, piece.level, &v).expect("restricted step");
                let image = module.psi().apply(f, &gr);
                cols.push(s.coords(f, &image).ok_or_else(|| violation(&format!("W_{l} H is ψ-stable"), q))?);
            }
        }
        let sub = FLModule::new(fil, Matrix::from_columns(s.dim(), &cols))?;
        let inclusion = s.basis().transpose();
        FLMorphism::new(f, sub.clone(), module.clone(), inclusion)?;
        out.push((l, sub));
    }
    Ok(out)
}
