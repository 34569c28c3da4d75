use crate::weight_subspace;
use exactlin::{induced_on_cohomology, left_wedge_matrix, Complex, Matrix, PrimeField, Subspace};
use toricgeom::{form_space, Context, DivisorSet, Fan, Twist};

/// The weight-`m` log de Rham complex of a context, embedded in the ambient
/// complex `(Λ^•(M ⊗ F_p), m̄ ∧ −)`.
#[derive(Clone, Debug)]
pub struct LocalDeRham {
    pub ambient: Complex,
    /// Section space in each degree `0..=n`.
    pub sections: Vec<Subspace>,
}

impl LocalDeRham {
    pub fn subspace(&self, q: i64) -> Subspace {
        if q < 0 || q as usize >= self.sections.len() {
            Subspace::zero(self.ambient.dim(q))
        } else {
            self.sections[q as usize].clone()
        }
    }
}

pub fn local_de_rham(
    f: PrimeField,
    fan: &Fan,
    ctx: &Context,
    m: &[i64],
    d: &DivisorSet,
    twist: Option<&Twist>,
) -> LocalDeRham {
    let n = fan.rank();
    let mbar: Vec<u32> = m.iter().map(|&x| f.reduce(x)).collect();
    let dims = (0..=n).map(|i| exactlin::ExteriorBasis::new(n, i).len()).collect();
    let diffs = (0..n).map(|i| left_wedge_matrix(f, n, i, &mbar)).collect();
    let ambient = Complex::new(f, 0, dims, diffs).expect("m̄∧m̄ = 0");
    let sections = (0..=n).map(|i| form_space(f, fan, ctx, m, i, d, twist)).collect();
    LocalDeRham { ambient, sections }
}

/// `τ_{<p} K`.
pub fn truncate(f: PrimeField, k: &Complex, p: i64) -> Complex {
    k.truncate_below(f, p).0
}

/// Cohomology comparison for `μ : Gr_l τ_{<p} K → τ_{<p} Gr_l K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuReport {
    /// `(j, dim H^j(Gr τK), dim H^j(τ Gr K))`.
    pub dims: Vec<(i64, usize, usize)>,
    /// Whether `μ` induces an isomorphism in every degree.
    pub iso: bool,
}

impl MuReport {
    pub fn pass(&self) -> bool {
        self.iso && self.dims.iter().all(|&(_, a, b)| a == b)
    }
}

/// Builds both sides of `μ` inside an ambient complex from the filtration
/// steps `big = W_l`, `small = W_{l-1}` (both `d`-stable) and compares them.
pub fn two_sided_mu(
    f: PrimeField,
    ambient: &Complex,
    big: &dyn Fn(i64) -> Subspace,
    small: &dyn Fn(i64) -> Subspace,
    p: i64,
) -> MuReport {
    let top = p - 1;
    let zero = |q: i64| Subspace::zero(ambient.dim(q));
    let left = |q: i64| {
        if q < top {
            (big(q), small(q))
        } else if q == top {
            let z = ambient.cycles(f, q);
            (big(q).intersect(f, &z), small(q).intersect(f, &z))
        } else {
            (zero(q), zero(q))
        }
    };
    // Above the cut the quotient `big/big` is zero and absorbs `d`.
    let right = |q: i64| {
        if q < top {
            (big(q), small(q))
        } else if q == top {
            let z = small(q + 1).preimage_under(f, &ambient.d(q));
            (big(q).intersect(f, &z), small(q))
        } else {
            (big(q), big(q))
        }
    };
    let (lc, lq) = ambient.subquotient(f, &left).expect("Gr τ is a complex");
    let (rc, rq) = ambient.subquotient(f, &right).expect("τ Gr is a complex");
    let mut dims = Vec::new();
    let mut iso = true;
    for (k, q) in ambient.degrees().enumerate() {
        let comp = exactlin::subquotient_map(f, &Matrix::identity(ambient.dim(q)), &lq[k], &rq[k])
            .expect("μ is induced by the identity");
        let (hl, hr) = (lc.cohomology(f, q), rc.cohomology(f, q));
        let h = induced_on_cohomology(f, &comp, &hl, &hr).expect("μ is a chain map");
        iso &= hl.dim() == hr.dim() && (hl.dim() == 0 || h.inverse(f).is_some());
        dims.push((q, hl.dim(), hr.dim()));
    }
    MuReport { dims, iso }
}

/// `μ` on the weight-`m` slice of `Gr^W_l` over one context.
#[allow(clippy::too_many_arguments)]
pub fn truncation_mu_check(
    f: PrimeField,
    fan: &Fan,
    ctx: &Context,
    m: &[i64],
    d: &DivisorSet,
    l: usize,
    p: i64,
) -> MuReport {
    let k = local_de_rham(f, fan, ctx, m, d, None);
    let w = |lev: Option<usize>, q: i64| match lev {
        _ if q < 0 || q as usize > fan.rank() => Subspace::zero(k.ambient.dim(q)),
        None => Subspace::zero(k.ambient.dim(q)),
        Some(lev) => weight_subspace(f, fan, ctx, m, q as usize, lev, d, None),
    };
    let below = l.checked_sub(1);
    two_sided_mu(f, &k.ambient, &|q| w(Some(l), q), &|q| w(below, q), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_examples() {
        let f = PrimeField::new(5).unwrap();
        let p2 = Fan::projective_space(2);
        let k = local_de_rham(f, &p2, &Context::new(vec![]), &[1, 2], &DivisorSet::empty(), None);
        assert_eq!(truncate(f, &k.ambient, 9), k.ambient);
        let t1 = truncate(f, &k.ambient, 1);
        assert_eq!((t1.hi(), t1.dim(0)), (0, k.ambient.cycles(f, 0).dim()));
    }

    #[test]
    fn mu_on_the_line_at_two() {
        let f = PrimeField::new(2).unwrap();
        let p1 = Fan::projective_space(1);
        let d = DivisorSet::full(&p1);
        for ctx in [Context::new(vec![0]), Context::new(vec![1]), Context::new(vec![])] {
            for m in -3..=3 {
                for l in 0..=2 {
                    let r = truncation_mu_check(f, &p1, &ctx, &[m], &d, l, 2);
                    assert!(r.pass(), "{ctx:?} m={m} l={l}: {r:?}");
                }
            }
        }
        let r = truncation_mu_check(f, &p1, &Context::new(vec![0]), &[0], &d, 1, 2);
        assert_eq!(r.dims, vec![(0, 0, 0), (1, 1, 1)]);
    }

    #[test]
    fn mu_on_the_square_at_two() {
        let f = PrimeField::new(2).unwrap();
        let p1 = Fan::projective_space(1);
        let sq = p1.product(&p1);
        let d = DivisorSet::full(&sq);
        for (c, cone) in sq.max_cones().iter().enumerate() {
            let ctx = Context::new(cone.clone());
            for a in -2..=2 {
                for b in -2..=2 {
                    for l in 0..=2 {
                        let r = truncation_mu_check(f, &sq, &ctx, &[a, b], &d, l, 2);
                        assert!(r.pass(), "chart {c} m=({a},{b}) l={l}: {r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn large_prime_makes_mu_an_isomorphism() {
        let f = PrimeField::new(5).unwrap();
        let p2 = Fan::projective_space(2);
        let d = DivisorSet::full(&p2);
        let r = truncation_mu_check(f, &p2, &Context::new(vec![0, 1]), &[0, 0], &d, 2, 5);
        assert!(r.pass());
        assert_eq!(r.dims.last(), Some(&(2, 1, 1)));
    }
}
