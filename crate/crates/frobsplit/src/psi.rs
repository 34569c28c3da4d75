use crate::{SplitData, SplitError};
use cech::{de_rham_complex, higgs_complex, Atlas, FilteredWeightComplex};
use exactlin::{rank_kernel_image, FpScalar, Matrix, Subspace};
use toricgeom::Character;

/// `ψ : H^q(Higgs, m') → H^q(dR, p·m')` in the Hodge-graded Higgs basis of
/// [`higgs_basis`] and the quotient basis of de Rham cohomology.
#[derive(Clone, Debug)]
pub struct PsiBlock {
    pub higgs_weight: Character,
    pub de_rham_weight: Character,
    pub degree: usize,
    /// `dim H^q(dR) × dim H^q(Higgs)`.
    pub matrix: Matrix,
    /// Form degree of each Higgs basis class.
    pub hodge_degrees: Vec<usize>,
}

/// Representatives of a basis of `H^q` of the Higgs complex, grouped by the
/// form degree of the sheaf they come from.
pub fn higgs_basis(atlas: &Atlas, hig: &FilteredWeightComplex, q: usize) -> (Vec<Vec<FpScalar>>, Vec<usize>) {
    let f = atlas.field;
    let wc = &hig.complex;
    let mut reps = Vec::new();
    let mut grades = Vec::new();
    for s in 0..=atlas.rank() {
        let block = |k: i64| {
            if k < 0 {
                return Subspace::zero(0);
            }
            let idx: Vec<usize> = wc
                .blocks(k as usize)
                .iter()
                .filter(|b| b.form_degree == s)
                .flat_map(|b| b.offset..b.offset + b.dim())
                .collect();
            Subspace::coordinate(wc.dim(k as usize), &idx)
        };
        let h = wc.complex().sub_cohomology(f, q as i64, &block);
        for r in h.representatives().to_rows() {
            reps.push(r);
            grades.push(s);
        }
    }
    (reps, grades)
}

fn scaled(m: &[i64], p: i64) -> Character {
    m.iter().map(|x| p * x).collect()
}

/// `ψ` at one Higgs character and degree. Every other character reached by
/// `Φ` must carry the zero class.
pub fn psi_block(atlas: &Atlas, split: &SplitData, m: &[i64], q: usize) -> Result<PsiBlock, SplitError> {
    let f = atlas.field;
    let target = scaled(m, f.p() as i64);
    let hig = higgs_complex(atlas, m);
    let dr = de_rham_complex(atlas, &target);
    let (reps, grades) = higgs_basis(atlas, &hig, q);
    let h_dr = dr.complex.complex().cohomology(f, q as i64);
    let mut cols = Vec::new();
    for r in &reps {
        let image = split.apply(&hig.complex.to_cochain(f, q, r))?;
        for w in image.weights() {
            if w == target {
                continue;
            }
            let other = de_rham_complex(atlas, &w);
            let v = other.complex.to_vector(f, q, &image.component(&w))?;
            if other.complex.class_of(f, q, &v)?.coords.iter().any(|&x| x != 0) {
                return Err(SplitError::ClassLeak { degree: q, weight: w });
            }
        }
        let v = dr.complex.to_vector(f, q, &image.component(&target))?;
        cols.push(dr.complex.class_of(f, q, &v)?.coords);
    }
    let matrix = Matrix::from_columns(h_dr.dim(), &cols);
    let rank = rank_kernel_image(f, &matrix).0;
    if matrix.rows() != matrix.cols() || rank != matrix.rows() {
        return Err(SplitError::NotInvertible {
            degree: q,
            weight: m.to_vec(),
            rows: matrix.rows(),
            cols: matrix.cols(),
            rank,
        });
    }
    Ok(PsiBlock { higgs_weight: m.to_vec(), de_rham_weight: target, degree: q, matrix, hodge_degrees: grades })
}

/// [`psi_block`] for every listed character and every degree in which either
/// side is nonzero.
pub fn psi_on_cohomology(
    atlas: &Atlas,
    split: &SplitData,
    weights: &[Character],
) -> Result<Vec<PsiBlock>, SplitError> {
    let mut out = Vec::new();
    for m in weights {
        let hig = higgs_complex(atlas, m);
        let dr = de_rham_complex(atlas, &scaled(m, atlas.field.p() as i64));
        for q in 0..=hig.complex.top() {
            let a = hig.complex.complex().cohomology(atlas.field, q as i64).dim();
            let b = dr.complex.complex().cohomology(atlas.field, q as i64).dim();
            if a + b > 0 {
                out.push(psi_block(atlas, split, m, q)?);
            }
        }
    }
    Ok(out)
}

/// The chain map `Higgs(m') → dR(p·m')` given by the weight-`p·m'` part of
/// `Φ`, one matrix per total degree.
pub fn psi_chain_map(atlas: &Atlas, split: &SplitData, m: &[i64]) -> Result<Vec<Matrix>, SplitError> {
    let f = atlas.field;
    let target = scaled(m, f.p() as i64);
    let hig = higgs_complex(atlas, m);
    let dr = de_rham_complex(atlas, &target);
    let mut out = Vec::new();
    for q in 0..=hig.complex.top() {
        let n = hig.complex.dim(q);
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut e = vec![0; n];
            e[k] = 1;
            let image = split.apply(&hig.complex.to_cochain(f, q, &e))?;
            cols.push(dr.complex.to_vector(f, q, &image.component(&target))?);
        }
        out.push(Matrix::from_columns(dr.complex.dim(q), &cols));
    }
    Ok(out)
}
