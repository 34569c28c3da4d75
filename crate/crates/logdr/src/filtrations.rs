use exactlin::{contraction_matrix, rank_kernel_image, ExteriorBasis, Matrix, PrimeField, Subspace};
use toricgeom::{form_space, form_space_conditions, Context, DivisorSet, Fan, Twist};

/// Weight-`m` slice of `W_l Ω^i(log D) ⊗ L` on a context.
///
/// A term of `w` may carry at most `l` dlog factors along order-zero rays of
/// `D`; equivalently every `(l+1)`-fold contraction by such rays kills `w`.
#[allow(clippy::too_many_arguments)]
pub fn weight_subspace(
    f: PrimeField,
    fan: &Fan,
    ctx: &Context,
    m: &[i64],
    i: usize,
    l: usize,
    d: &DivisorSet,
    twist: Option<&Twist>,
) -> Subspace {
    let fs = form_space(f, fan, ctx, m, i, d, twist);
    if l >= i || fs.is_zero() {
        return fs;
    }
    let log = form_space_conditions(fan, ctx, m, d, twist).log;
    if log.len() <= l {
        return fs;
    }
    let n = fan.rank();
    let len = ExteriorBasis::new(n, i).len();
    let mut stacked = Matrix::zeros(0, len);
    for subset in subsets_of_size(&log, l + 1) {
        let mut comp = Matrix::identity(len);
        for (k, &r) in subset.iter().enumerate() {
            comp = contraction_matrix(f, n, i - k, fan.ray(r)).mul(f, &comp);
        }
        stacked = stacked.vstack(&comp);
    }
    fs.intersect(f, &rank_kernel_image(f, &stacked).1)
}

/// Weight-`m` slice of the stupid filtration: everything in degree `i ≥ l`.
#[allow(clippy::too_many_arguments)]
pub fn hodge_subspace(
    f: PrimeField,
    fan: &Fan,
    ctx: &Context,
    m: &[i64],
    i: usize,
    l: usize,
    d: &DivisorSet,
    twist: Option<&Twist>,
) -> Subspace {
    let fs = form_space(f, fan, ctx, m, i, d, twist);
    if i >= l {
        fs
    } else {
        Subspace::zero(fs.ambient())
    }
}

pub(crate) fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (pos, &x) in items.iter().enumerate() {
        for mut rest in subsets_of_size(&items[pos + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_with_both_axes_needs_two_log_factors() {
        let f = PrimeField::new(5).unwrap();
        let p2 = Fan::projective_space(2);
        let d = DivisorSet::new(&p2, &[0, 1]).unwrap();
        let chart = Context::new(vec![0, 1]);
        let dims: Vec<usize> =
            (0..3).map(|l| weight_subspace(f, &p2, &chart, &[0, 0], 2, l, &d, None).dim()).collect();
        assert_eq!(dims, vec![0, 0, 1]);
    }

    #[test]
    fn affine_line_log_form() {
        let f = PrimeField::new(5).unwrap();
        let p1 = Fan::projective_space(1);
        let d = DivisorSet::new(&p1, &[0]).unwrap();
        let chart = Context::new(vec![0]);
        assert_eq!(weight_subspace(f, &p1, &chart, &[0], 1, 0, &d, None).dim(), 0);
        assert_eq!(weight_subspace(f, &p1, &chart, &[0], 1, 1, &d, None).dim(), 1);
        // With positive order the same wedge is dt, a regular form.
        assert_eq!(weight_subspace(f, &p1, &chart, &[1], 1, 0, &d, None).dim(), 1);
    }

    #[test]
    fn hodge_levels() {
        let f = PrimeField::new(5).unwrap();
        let p1 = Fan::projective_space(1);
        let d = DivisorSet::full(&p1);
        let torus = Context::new(vec![]);
        assert_eq!(hodge_subspace(f, &p1, &torus, &[3], 1, 0, &d, None).dim(), 1);
        assert_eq!(hodge_subspace(f, &p1, &torus, &[3], 1, 2, &d, None).dim(), 0);
    }

    #[test]
    fn subsets_are_lex() {
        assert_eq!(subsets_of_size(&[1, 4, 7], 2), vec![vec![1, 4], vec![1, 7], vec![4, 7]]);
    }
}
