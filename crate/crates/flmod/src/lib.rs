//! Fontaine–Laffaille modules over `F_p`: a space `V` with a finite
//! decreasing filtration and an isomorphism `ψ : Gr V → V`.
//!
//! `Gr V` is coordinatized as the concatenation of `Fil^l / Fil^{l+1}` in
//! increasing `l`, each with its quotient basis.

use exactlin::{
    rank_kernel_image, subquotient_map, Direction, FpScalar, Flag, Matrix, PrimeField, Quotient, StrictnessWitness,
    Subspace,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not an FL morphism: {0}")]
    NotAnFLMorphism(String),
    #[error("filtered map is not strict at level {}", .0.level)]
    NotStrict(StrictnessWitness),
}

/// One graded piece `Fil^level / Fil^{level+1}` and its position in `Gr V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrPiece {
    pub level: i64,
    pub quotient: Quotient,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FLModule {
    fil: Flag,
    psi: Matrix,
}

impl FLModule {
    pub fn new(fil: Flag, psi: Matrix) -> Result<Self, FlError> {
        if fil.direction() != Direction::Decreasing {
            return Err(FlError::Shape("Fil must be decreasing".into()));
        }
        if psi.rows() != fil.ambient() || psi.cols() != fil.ambient() {
            return Err(FlError::Shape(format!("ψ is {}x{} on a space of dim {}", psi.rows(), psi.cols(), fil.ambient())));
        }
        Ok(Self { fil, psi })
    }

    /// `(F_p, Fil^0 = F_p ⊋ Fil^1 = 0, ψ = 1)` shifted to Hodge level `level`.
    pub fn unit(level: i64) -> Self {
        let fil = Flag::trivial(1, Direction::Decreasing, level);
        Self { fil, psi: Matrix::identity(1) }
    }

    pub fn zero() -> Self {
        Self { fil: Flag::trivial(0, Direction::Decreasing, 0), psi: Matrix::zeros(0, 0) }
    }

    pub fn dim(&self) -> usize {
        self.fil.ambient()
    }

    pub fn fil(&self) -> &Flag {
        &self.fil
    }

    pub fn psi(&self) -> &Matrix {
        &self.psi
    }

    pub fn graded(&self, f: PrimeField) -> Vec<GrPiece> {
        let mut out = Vec::new();
        let mut offset = 0;
        for level in self.fil.lo()..=self.fil.hi() {
            let q = Quotient::new(f, self.fil.get(level), self.fil.get(level + 1)).expect("decreasing flag");
            let d = q.dim();
            out.push(GrPiece { level, quotient: q, offset });
            offset += d;
        }
        out
    }

    /// `(level, dim Gr^level)` for nonzero pieces.
    pub fn hodge_numbers(&self, f: PrimeField) -> Vec<(i64, usize)> {
        self.graded(f).iter().filter(|g| g.quotient.dim() > 0).map(|g| (g.level, g.quotient.dim())).collect()
    }

    /// Coordinates in `Gr V` of the class of `v ∈ Fil^level`.
    pub fn gr_coords(&self, f: PrimeField, level: i64, v: &[FpScalar]) -> Option<Vec<FpScalar>> {
        let pieces = self.graded(f);
        let piece = pieces.iter().find(|g| g.level == level)?;
        let c = piece.quotient.coords(f, v)?;
        let mut out = vec![0; self.dim()];
        out[piece.offset..piece.offset + c.len()].copy_from_slice(&c);
        Some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlReport {
    /// `Fil^lo = V` and `Fil^{hi+1} = 0`.
    pub exhaustive: bool,
    pub psi_invertible: bool,
}

impl FlReport {
    pub fn pass(&self) -> bool {
        self.exhaustive && self.psi_invertible
    }
}

pub fn validate(f: PrimeField, m: &FLModule) -> FlReport {
    FlReport { exhaustive: m.fil.is_exhaustive(f), psi_invertible: m.psi.inverse(f).is_some() }
}

/// `Gr(A) : Gr V₁ → Gr V₂` as a block matrix.
pub fn gr_map(f: PrimeField, src: &FLModule, dst: &FLModule, a: &Matrix) -> Result<Matrix, FlError> {
    let mut out = Matrix::zeros(dst.dim(), src.dim());
    let dst_pieces = dst.graded(f);
    for s in src.graded(f) {
        if s.quotient.dim() == 0 {
            continue;
        }
        let target = match dst_pieces.iter().find(|g| g.level == s.level) {
            Some(t) => t.clone(),
            None => {
                let q = Quotient::new(f, dst.fil.get(s.level), dst.fil.get(s.level + 1)).expect("decreasing flag");
                if q.dim() != 0 {
                    return Err(FlError::Shape("graded piece outside the stored range".into()));
                }
                GrPiece { level: s.level, quotient: q, offset: 0 }
            }
        };
        let block = subquotient_map(f, a, &s.quotient, &target.quotient)
            .map_err(|e| FlError::NotAnFLMorphism(format!("not filtered at level {}: {e}", s.level)))?;
        for r in 0..block.rows() {
            for c in 0..block.cols() {
                out.set(target.offset + r, s.offset + c, block.get(r, c));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FLMorphism {
    pub src: FLModule,
    pub dst: FLModule,
    pub map: Matrix,
}

impl FLMorphism {
    /// Checks that `map` is filtered and `map ∘ ψ₁ = ψ₂ ∘ Gr(map)`.
    pub fn new(f: PrimeField, src: FLModule, dst: FLModule, map: Matrix) -> Result<Self, FlError> {
        if map.rows() != dst.dim() || map.cols() != src.dim() {
            return Err(FlError::Shape(format!("map is {}x{}, need {}x{}", map.rows(), map.cols(), dst.dim(), src.dim())));
        }
        if !Flag::is_filtered_map(f, &map, &src.fil, &dst.fil) {
            return Err(FlError::NotAnFLMorphism("map does not respect Fil".into()));
        }
        let gr = gr_map(f, &src, &dst, &map)?;
        if map.mul(f, &src.psi) != dst.psi.mul(f, &gr) {
            return Err(FlError::NotAnFLMorphism("ψ square does not commute".into()));
        }
        Ok(Self { src, dst, map })
    }

    pub fn strictness(&self, f: PrimeField) -> Result<(), StrictnessWitness> {
        Flag::strictness(f, &self.map, &self.src.fil, &self.dst.fil)
    }
}

/// Kernel and cokernel with induced `Fil` and `ψ`. Requires strictness.
pub fn kernel_cokernel(f: PrimeField, phi: &FLMorphism) -> Result<(FLModule, FLModule), FlError> {
    phi.strictness(f).map_err(FlError::NotStrict)?;
    let (_, ker, img) = rank_kernel_image(f, &phi.map);
    Ok((kernel(f, phi, &ker), cokernel(f, phi, &img)))
}

fn kernel(f: PrimeField, phi: &FLMorphism, ker: &Subspace) -> FLModule {
    let src = &phi.src;
    let fil = src.fil.restrict_to(f, ker);
    let pieces = FLModule { fil: fil.clone(), psi: Matrix::identity(ker.dim()) }.graded(f);
    let mut cols = Vec::new();
    for g in &pieces {
        for rep in g.quotient.representatives().row_vecs() {
            let v = ker.combine(f, &rep);
            let gr = src.gr_coords(f, g.level, &v).expect("kernel step lies in the source step");
            let image = src.psi.apply(f, &gr);
            cols.push(ker.coords(f, &image).expect("ψ maps Gr ker into ker"));
        }
    }
    FLModule { fil, psi: Matrix::from_columns(ker.dim(), &cols) }
}

fn cokernel(f: PrimeField, phi: &FLMorphism, img: &Subspace) -> FLModule {
    let dst = &phi.dst;
    let n = dst.dim();
    let q = Quotient::new(f, Subspace::full(n), img.clone()).expect("image is a subspace");
    let proj_cols: Vec<Vec<FpScalar>> = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            q.coords(f, &e).expect("every vector lies in the full space")
        })
        .collect();
    let proj = Matrix::from_columns(q.dim(), &proj_cols);
    let fil = dst.fil.image_under(f, &proj);
    let pieces = FLModule { fil: fil.clone(), psi: Matrix::identity(q.dim()) }.graded(f);
    let mut cols = Vec::new();
    for g in &pieces {
        let step = dst.fil.get(g.level);
        let through = proj.mul(f, &step.basis().transpose());
        for rep in g.quotient.representatives().row_vecs() {
            let c = exactlin::solve(f, &through, &rep).expect("cokernel step is the image of the target step");
            let v = step.combine(f, &c);
            let gr = dst.gr_coords(f, g.level, &v).expect("lift lies in the target step");
            cols.push(proj.apply(f, &dst.psi.apply(f, &gr)));
        }
    }
    FLModule { fil, psi: Matrix::from_columns(q.dim(), &cols) }
}
