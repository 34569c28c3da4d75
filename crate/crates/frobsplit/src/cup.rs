use exactlin::{FpScalar, PrimeField};
use itertools::Itertools;
use logdr::FormSum;

/// A Čech cochain of total degree `vertex_degree` given by its values on
/// single charts and, optionally, on ordered chart pairs.
pub(crate) struct Factor<'a> {
    pub vertex: Box<dyn Fn(usize) -> FormSum + 'a>,
    pub vertex_degree: usize,
    pub edge: Option<Box<dyn Fn(usize, usize) -> FormSum + 'a>>,
    pub edge_degree: usize,
}

/// `(a_1 ∪ … ∪ a_k)` on an ordered tuple, repeats allowed. Each factor
/// advances along the tuple by zero (vertex) or one (edge) step; an edge
/// factor picks up `(−1)^{form degree of the factors before it}`.
pub(crate) fn eval_cup(f: PrimeField, rank: usize, factors: &[Factor], tuple: &[usize]) -> FormSum {
    let n = tuple.len();
    if n == 0 || n > factors.len() + 1 {
        return FormSum::zero();
    }
    let mut out = FormSum::zero();
    walk(f, factors, tuple, 0, 0, 0, false, FormSum::monomial(f, 1, vec![0; rank], 0), &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    f: PrimeField,
    factors: &[Factor],
    tuple: &[usize],
    k: usize,
    pos: usize,
    seen_degree: usize,
    negative: bool,
    acc: FormSum,
    out: &mut FormSum,
) {
    if acc.is_zero() {
        return;
    }
    if k == factors.len() {
        if pos + 1 == tuple.len() {
            let term = if negative { acc.scale(f, f.neg(1)) } else { acc };
            *out = out.add(f, &term);
        }
        return;
    }
    let remaining_steps = tuple.len() - 1 - pos;
    let fa = &factors[k];
    if remaining_steps < factors.len() - k {
        let next = acc.wedge(f, &(fa.vertex)(tuple[pos]));
        walk(f, factors, tuple, k + 1, pos, seen_degree + fa.vertex_degree, negative, next, out);
    }
    if let Some(edge) = &fa.edge {
        if remaining_steps > 0 {
            let next = acc.wedge(f, &edge(tuple[pos], tuple[pos + 1]));
            let flip = negative ^ (seen_degree % 2 == 1);
            walk(f, factors, tuple, k + 1, pos + 1, seen_degree + fa.edge_degree, flip, next, out);
        }
    }
}

/// `(1/k!) Σ_σ sgn σ · build(σ)`; needs `k < p`.
pub(crate) fn antisymmetrize(
    f: PrimeField,
    k: usize,
    build: impl Fn(&[usize]) -> FormSum,
) -> FormSum {
    let mut out = FormSum::zero();
    for perm in (0..k).permutations(k) {
        let v = build(&perm);
        out = if is_odd(&perm) { out.sub(f, &v) } else { out.add(f, &v) };
    }
    out.scale(f, inverse_factorial(f, k))
}

fn is_odd(perm: &[usize]) -> bool {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    inversions % 2 == 1
}

fn inverse_factorial(f: PrimeField, k: usize) -> FpScalar {
    let fact = (1..=k as i64).fold(1 % f.p(), |acc, x| f.mul(acc, f.reduce(x)));
    f.inv(fact)
}
