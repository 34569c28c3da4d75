use crate::filtrations::subsets_of_size;
use crate::{weight_subspace, FormSum, LogError};
use exactlin::{bits, FpScalar, Matrix, PrimeField, Quotient, Subspace};
use toricgeom::{kernel_of_contractions, pair, Context, DivisorSet, Fan};

/// `ι_v e_J = Σ_k (-1)^{k} v_{j_k} e_{J∖j_k}` (positions from 0).
fn contract_mask(f: PrimeField, mask: u32, v: &[i64]) -> Vec<(u32, FpScalar)> {
    bits(mask)
        .into_iter()
        .enumerate()
        .filter_map(|(pos, k)| {
            let c = f.reduce(v[k]);
            if c == 0 {
                return None;
            }
            let c = if pos % 2 == 0 { c } else { f.neg(c) };
            Some((mask & !(1 << k), c))
        })
        .collect()
}

fn check_face(fan: &Fan, d: &DivisorSet, face: &[usize]) -> Result<Vec<usize>, LogError> {
    let mut i = face.to_vec();
    i.sort_unstable();
    i.dedup();
    if i.iter().any(|&r| !d.contains(r)) || fan.cone_containing(&i).is_none() {
        return Err(LogError::BadFace(i));
    }
    Ok(i)
}

/// Poincaré residue `Res_{D_I}` on a context, by the local formula
/// `dlog x^{v_{i_1}} ∧ … ∧ dlog x^{v_{i_l}} ∧ ω′ + η ↦ ω′|_{D_I}`.
///
/// Contracts along the rays of `I` left to right in increasing ray order,
/// then keeps the terms whose character is orthogonal to the rays of `I`
/// (the others vanish on `D_I`). Forms outside `W_{|I|}` are allowed and land
/// in log forms on `D_I`; [`weight_residue`] enforces the weight level.
/// Returns zero when `D_I` misses the context.
pub fn residue(
    f: PrimeField,
    fan: &Fan,
    ctx: &Context,
    d: &DivisorSet,
    omega: &FormSum,
    face: &[usize],
) -> Result<FormSum, LogError> {
    let i = check_face(fan, d, face)?;
    if !i.iter().all(|r| ctx.rays.contains(r)) {
        return Ok(FormSum::zero());
    }
    let mut out = FormSum::zero();
    for (m, mask, c) in omega.terms() {
        if i.iter().any(|&r| pair(m, fan.ray(r)) != 0) {
            continue;
        }
        let mut cur: Vec<(u32, FpScalar)> = vec![(mask, c)];
        for &r in &i {
            cur = cur
                .into_iter()
                .flat_map(|(mk, ck)| {
                    contract_mask(f, mk, fan.ray(r)).into_iter().map(move |(m2, c2)| (m2, f.mul(ck, c2)))
                })
                .collect();
        }
        for (mk, ck) in cur {
            out.add_term(f, m.clone(), mk, ck);
        }
    }
    Ok(out)
}

/// `Res_{D_I} : W_{|I|} Ω^q(log D) → Ω^{q-|I|}_{D_I}`; rejects forms outside
/// `W_{|I|}`.
pub fn weight_residue(
    f: PrimeField,
    fan: &Fan,
    ctx: &Context,
    d: &DivisorSet,
    omega: &FormSum,
    face: &[usize],
) -> Result<FormSum, LogError> {
    let i = check_face(fan, d, face)?;
    let n = fan.rank();
    for m in omega.weights() {
        let part = omega.component(&m);
        for q in part.degrees() {
            let w = weight_subspace(f, fan, ctx, &m, q, i.len(), d, None);
            if !w.contains(f, &part.vector_at(n, &m, q)) {
                return Err(LogError::NotInWeightLevel { level: i.len(), weight: m.clone() });
            }
        }
    }
    residue(f, fan, ctx, d, omega, &i)
}

/// Weight-`m` slice of `Γ(U_τ ∩ D_I, Ω^q_{D_I})` inside `Λ^q(M ⊗ F_p)`.
pub fn residue_target(f: PrimeField, fan: &Fan, ctx: &Context, m: &[i64], q: usize, face: &[usize]) -> Subspace {
    let len = exactlin::ExteriorBasis::new(fan.rank(), q).len();
    if !face.iter().all(|r| ctx.rays.contains(r)) || face.iter().any(|&r| pair(m, fan.ray(r)) != 0) {
        return Subspace::zero(len);
    }
    let mut constrained = face.to_vec();
    for &r in ctx.rays.iter().filter(|r| !face.contains(r)) {
        let b = pair(m, fan.ray(r));
        if b < 0 {
            return Subspace::zero(len);
        }
        if b == 0 {
            constrained.push(r);
        }
    }
    kernel_of_contractions(f, fan, q, &constrained)
}

/// The matrix of `⊕_{|I|=l} Res_{D_I}` on one `Gr^W_l` slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrDecomposition {
    pub matrix: Matrix,
    pub source_dim: usize,
    /// Faces `I` with the dimension of their target slice, in order.
    pub faces: Vec<(Vec<usize>, usize)>,
}

/// Builds and certifies the residue isomorphism on `Gr^W_l` of degree `i`.
pub fn gr_weight_decompose(
    f: PrimeField,
    fan: &Fan,
    ctx: &Context,
    d: &DivisorSet,
    m: &[i64],
    i: usize,
    l: usize,
) -> Result<GrDecomposition, LogError> {
    let n = fan.rank();
    let wl = weight_subspace(f, fan, ctx, m, i, l, d, None);
    let wl1 = if l == 0 {
        Subspace::zero(wl.ambient())
    } else {
        weight_subspace(f, fan, ctx, m, i, l - 1, d, None)
    };
    let gr = Quotient::new(f, wl, wl1).expect("weight filtration is increasing");
    let log_rays: Vec<usize> = ctx.rays.iter().copied().filter(|&r| d.contains(r)).collect();
    let faces = if l > i { Vec::new() } else { subsets_of_size(&log_rays, l) };
    let targets: Vec<Subspace> =
        faces.iter().map(|face| residue_target(f, fan, ctx, m, i - l.min(i), face)).collect();
    let total: usize = targets.iter().map(|t| t.dim()).sum();
    let fail = |detail: String| LogError::DecompositionFailure { weight: m.to_vec(), degree: i, level: l, detail };
    let mut cols = Vec::new();
    for rep in gr.representatives().row_vecs() {
        let omega = FormSum::from_vector(f, n, m, i, &rep);
        let mut col = Vec::with_capacity(total);
        for (face, t) in faces.iter().zip(&targets) {
            let res = weight_residue(f, fan, ctx, d, &omega, face).map_err(|e| fail(e.to_string()))?;
            let v = res.vector_at(n, m, i - l);
            let c = t.coords(f, &v).ok_or_else(|| fail(format!("residue along {face:?} leaves its target")))?;
            col.extend(c);
        }
        cols.push(col);
    }
    let matrix = Matrix::from_columns(total, &cols);
    let square = matrix.rows() == matrix.cols();
    if !square || (total > 0 && matrix.inverse(f).is_none()) {
        return Err(fail(format!("residue matrix is {}x{} of rank {}", matrix.rows(), matrix.cols(), matrix.rank(f))));
    }
    Ok(GrDecomposition {
        matrix,
        source_dim: gr.dim(),
        faces: faces.into_iter().zip(targets.iter().map(|t| t.dim())).collect(),
    })
}
