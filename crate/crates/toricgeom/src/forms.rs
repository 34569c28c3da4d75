use crate::{pair, DivisorSet, Fan, Twist};
use exactlin::{contraction_matrix, ExteriorBasis, Matrix, PrimeField, Subspace};

/// An affine open `U_τ`, identified by the ray set of the cone `τ`.
///
/// A maximal cone is a chart; a common face of several maximal cones is
/// their overlap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    pub rays: Vec<usize>,
}

impl Context {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Self { rays }
    }

    pub fn of_charts(fan: &Fan, charts: &[usize]) -> Self {
        Self { rays: fan.common_face(charts) }
    }
}

/// How the rays of a context constrain forms of a fixed weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceConditions {
    /// Some ray has negative order: no sections in this weight.
    pub empty: bool,
    /// Rays of order zero outside `D`: no `dlog` factor allowed.
    pub nolog: Vec<usize>,
    /// Rays of order zero inside `D`: each `dlog` factor along them is a log pole.
    pub log: Vec<usize>,
}

/// Orders `⟨m, v_ρ⟩ + a_ρ` of `x^m` (times the local generator of `L`) along
/// the rays of the context, sorted into [`SliceConditions`].
pub fn form_space_conditions(
    fan: &Fan,
    ctx: &Context,
    m: &[i64],
    d: &DivisorSet,
    twist: Option<&Twist>,
) -> SliceConditions {
    let mut out = SliceConditions { empty: false, nolog: Vec::new(), log: Vec::new() };
    for &r in &ctx.rays {
        let b = pair(m, fan.ray(r)) + twist.map_or(0, |t| t.coeff(r));
        if b < 0 {
            out.empty = true;
        } else if b == 0 {
            if d.contains(r) {
                out.log.push(r);
            } else {
                out.nolog.push(r);
            }
        }
    }
    out
}

/// Weight-`m` slice of `Γ(U_τ, Ω^i(log D) ⊗ L)` inside `Λ^i(M ⊗ F_p)`:
/// `x^m ⊗ w` is a section iff no ray has negative order and `ι_{v_ρ} w = 0`
/// for every order-zero ray outside `D`.
pub fn form_space(
    f: PrimeField,
    fan: &Fan,
    ctx: &Context,
    m: &[i64],
    i: usize,
    d: &DivisorSet,
    twist: Option<&Twist>,
) -> Subspace {
    let n = fan.rank();
    let len = ExteriorBasis::new(n, i).len();
    let cond = form_space_conditions(fan, ctx, m, d, twist);
    if cond.empty {
        return Subspace::zero(len);
    }
    kernel_of_contractions(f, fan, i, &cond.nolog)
}

/// `{w ∈ Λ^i : ι_{v_ρ} w = 0 for all listed rays}`.
pub fn kernel_of_contractions(f: PrimeField, fan: &Fan, i: usize, rays: &[usize]) -> Subspace {
    let n = fan.rank();
    let len = ExteriorBasis::new(n, i).len();
    if rays.is_empty() || i == 0 {
        return Subspace::full(len);
    }
    let mut stacked = Matrix::zeros(0, len);
    for &r in rays {
        stacked = stacked.vstack(&contraction_matrix(f, n, i, fan.ray(r)));
    }
    exactlin::rank_kernel_image(f, &stacked).1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn affine_line_examples() {
        let f = f5();
        let p1 = Fan::projective_space(1);
        let chart = Context::new(vec![0]);
        let with_d = DivisorSet::new(&p1, &[0]).unwrap();
        let no_d = DivisorSet::empty();
        assert_eq!(form_space(f, &p1, &chart, &[0], 1, &with_d, None).dim(), 1);
        assert_eq!(form_space(f, &p1, &chart, &[0], 1, &no_d, None).dim(), 0);
        assert_eq!(form_space(f, &p1, &chart, &[1], 1, &no_d, None).dim(), 1);
        assert_eq!(form_space(f, &p1, &chart, &[-1], 0, &with_d, None).dim(), 0);
    }

    #[test]
    fn twist_shifts_thresholds() {
        let f = f5();
        let p1 = Fan::projective_space(1);
        let t = Twist::new(&p1, vec![2, 0]).unwrap();
        let chart = Context::new(vec![0]);
        assert_eq!(form_space(f, &p1, &chart, &[-2], 0, &DivisorSet::empty(), Some(&t)).dim(), 1);
        assert_eq!(form_space(f, &p1, &chart, &[-3], 0, &DivisorSet::empty(), Some(&t)).dim(), 0);
    }

    #[test]
    fn torus_overlap_has_everything() {
        let f = f5();
        let p2 = Fan::projective_space(2);
        let torus = Context::of_charts(&p2, &[0, 1, 2]);
        assert!(torus.rays.is_empty());
        assert_eq!(form_space(f, &p2, &torus, &[-3, 7], 1, &DivisorSet::empty(), None).dim(), 2);
    }
}
