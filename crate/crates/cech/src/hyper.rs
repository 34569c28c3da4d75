use crate::{CechCochain, CechError, WeightComplex};
use exactlin::{Direction, Flag, PrimeField, Quotient, Subspace};
use logdr::weight_subspace;
use rayon::prelude::*;
use toricgeom::{form_space, weight_support, Character, Context, DivisorSet, Fan, Twist};

/// The data fixing a run: field, fan (charts in input order), boundary, twist.
#[derive(Clone, Debug)]
pub struct Atlas {
    pub field: PrimeField,
    pub fan: Fan,
    pub divisor: DivisorSet,
    pub twist: Option<Twist>,
}

impl Atlas {
    pub fn new(field: PrimeField, fan: Fan, divisor: DivisorSet, twist: Option<Twist>) -> Self {
        Self { field, fan, divisor, twist }
    }

    pub fn charts(&self) -> usize {
        self.fan.max_cones().len()
    }

    pub fn rank(&self) -> usize {
        self.fan.rank()
    }
}

/// Which subcomplex of the log de Rham complex to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    All,
    Weight(usize),
    Hodge(usize),
    WeightHodge(usize, usize),
}

/// A weight complex with its `W` (increasing, levels `0..=n`) and `Fil`
/// (decreasing, levels `0..=n`) flags in every total degree.
#[derive(Clone, Debug)]
pub struct FilteredWeightComplex {
    pub complex: WeightComplex,
    pub weight_flags: Vec<Flag>,
    pub hodge_flags: Vec<Flag>,
}

impl FilteredWeightComplex {
    pub fn selected(&self, f: PrimeField, q: i64, sel: Selector) -> Subspace {
        if q < 0 || q as usize > self.complex.top() {
            return Subspace::zero(0);
        }
        let k = q as usize;
        match sel {
            Selector::All => Subspace::full(self.complex.dim(k)),
            Selector::Weight(l) => self.weight_flags[k].get(l as i64),
            Selector::Hodge(l) => self.hodge_flags[k].get(l as i64),
            Selector::WeightHodge(l, h) => {
                self.weight_flags[k].get(l as i64).intersect(f, &self.hodge_flags[k].get(h as i64))
            }
        }
    }
}

fn filtered(atlas: &Atlas, m: &[i64], de_rham: bool) -> FilteredWeightComplex {
    let f = atlas.field;
    let (fan, d) = (&atlas.fan, &atlas.divisor);
    let n = fan.rank();
    let sections = |ctx: &Context, s: usize| {
        let fs = form_space(f, fan, ctx, m, s, d, None);
        let amb = fs.ambient();
        (fs, Subspace::zero(amb))
    };
    let complex = WeightComplex::assemble(f, fan, m, de_rham, &sections);
    let mut weight_flags = Vec::new();
    let mut hodge_flags = Vec::new();
    for q in 0..=complex.top() {
        let w: Vec<Subspace> = (0..=n)
            .map(|l| complex.subspace(f, q, &|ctx, s| weight_subspace(f, fan, ctx, m, s, l, d, None)))
            .collect();
        let h: Vec<Subspace> = (0..=n)
            .map(|l| {
                complex.subspace(f, q, &|ctx, s| {
                    let fs = form_space(f, fan, ctx, m, s, d, None);
                    if s >= l {
                        fs
                    } else {
                        Subspace::zero(fs.ambient())
                    }
                })
            })
            .collect();
        weight_flags.push(Flag::new(f, Direction::Increasing, 0, w).expect("W is increasing"));
        hodge_flags.push(Flag::new(f, Direction::Decreasing, 0, h).expect("Fil is decreasing"));
    }
    FilteredWeightComplex { complex, weight_flags, hodge_flags }
}

/// The weight-`m` Čech–de Rham complex of `Ω^•(log D)` with `W` and `Fil`.
pub fn de_rham_complex(atlas: &Atlas, m: &[i64]) -> FilteredWeightComplex {
    filtered(atlas, m, true)
}

/// `Gr_Fil` of [`de_rham_complex`]: the same blocks with only the Čech
/// differential, i.e. the Čech complex of `⊕ Ω^i(log D)[−i]`.
pub fn higgs_complex(atlas: &Atlas, m: &[i64]) -> FilteredWeightComplex {
    filtered(atlas, m, false)
}

#[derive(Clone, Debug)]
pub struct HyperCohomology {
    pub weight: Character,
    /// `dim H^q` for `q = 0..=top`.
    pub dims: Vec<usize>,
    /// `H^q` as cycles of the selected subcomplex modulo its boundaries.
    pub spaces: Vec<Quotient>,
}

/// Hypercohomology of the selected subcomplex at one character.
pub fn hypercohomology(atlas: &Atlas, m: &[i64], sel: Selector) -> HyperCohomology {
    selected_cohomology(atlas, &de_rham_complex(atlas, m), m, sel)
}

/// As [`hypercohomology`] for the Čech complex of `⊕ Ω^i(log D)[−i]`.
pub fn higgs_hypercohomology(atlas: &Atlas, m: &[i64], sel: Selector) -> HyperCohomology {
    selected_cohomology(atlas, &higgs_complex(atlas, m), m, sel)
}

fn selected_cohomology(atlas: &Atlas, fc: &FilteredWeightComplex, m: &[i64], sel: Selector) -> HyperCohomology {
    let f = atlas.field;
    let sub = |q: i64| fc.selected(f, q, sel);
    let spaces: Vec<Quotient> =
        (0..=fc.complex.top() as i64).map(|q| fc.complex.complex().sub_cohomology(f, q, &sub)).collect();
    HyperCohomology { weight: m.to_vec(), dims: spaces.iter().map(Quotient::dim).collect(), spaces }
}

/// `Σ_m dim H^q` over the given characters, computed in parallel and merged
/// in input order.
pub fn total_hypercohomology(atlas: &Atlas, weights: &[Character], sel: Selector) -> Vec<usize> {
    let per: Vec<Vec<usize>> = weights.par_iter().map(|m| hypercohomology(atlas, m, sel).dims).collect();
    let len = per.iter().map(Vec::len).max().unwrap_or(0);
    (0..len).map(|q| per.iter().map(|d| d.get(q).copied().unwrap_or(0)).sum()).collect()
}

/// Whether every entry of `c` is a section of `W_l Ω(log D)` on its overlap
/// (`level = None`: of `Ω(log D)`).
pub fn cochain_in_level(atlas: &Atlas, c: &CechCochain, level: Option<usize>) -> bool {
    let f = atlas.field;
    let (fan, d) = (&atlas.fan, &atlas.divisor);
    c.entries().all(|((t, s), w)| {
        let ctx = Context::of_charts(fan, t);
        w.degrees().iter().all(|k| k == s)
            && w.weights().iter().all(|m| {
                let space = match level {
                    Some(l) => weight_subspace(f, fan, &ctx, m, *s, l, d, None),
                    None => form_space(f, fan, &ctx, m, *s, d, None),
                };
                space.contains(f, &w.vector_at(fan.rank(), m, *s))
            })
    })
}

/// `dim H^j(X, W_l Ω^i(log D) ⊗ L)` at character `m` for `j = 0..charts`;
/// `level = None` takes the whole sheaf.
pub fn sheaf_cohomology(atlas: &Atlas, m: &[i64], i: usize, level: Option<usize>) -> Vec<usize> {
    let f = atlas.field;
    let (fan, d, tw) = (&atlas.fan, &atlas.divisor, atlas.twist.as_ref());
    let sections = |ctx: &Context, s: usize| {
        let amb = exactlin::ExteriorBasis::new(fan.rank(), s).len();
        let big = if s != i {
            Subspace::zero(amb)
        } else {
            match level {
                Some(l) => weight_subspace(f, fan, ctx, m, s, l, d, tw),
                None => form_space(f, fan, ctx, m, s, d, tw),
            }
        };
        (big, Subspace::zero(amb))
    };
    let wc = WeightComplex::assemble(f, fan, m, false, &sections);
    (0..atlas.charts()).map(|j| wc.complex().cohomology(f, (i + j) as i64).dim()).collect()
}

/// Search characters whose two outermost shells pass `exact`.
pub fn support_with(
    atlas: &Atlas,
    radius: i64,
    exact: impl Fn(&[i64]) -> bool + Sync,
) -> Result<Vec<Character>, CechError> {
    Ok(weight_support(&atlas.fan, atlas.twist.as_ref(), radius, exact)?)
}

/// Search characters for the untwisted de Rham and Higgs complexes.
pub fn support(atlas: &Atlas, radius: i64) -> Result<Vec<Character>, CechError> {
    let f = atlas.field;
    support_with(atlas, radius, |m| {
        [de_rham_complex(atlas, m), higgs_complex(atlas, m)]
            .iter()
            .all(|c| c.complex.complex().cohomology_dims(f).iter().all(|&(_, h)| h == 0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gm() -> Atlas {
        let p1 = Fan::projective_space(1);
        let d = DivisorSet::full(&p1);
        Atlas::new(PrimeField::new(5).unwrap(), p1, d, None)
    }

    #[test]
    fn multiplicative_group_totals() {
        let a = gm();
        let ws = support(&a, 4).unwrap();
        assert_eq!(total_hypercohomology(&a, &ws, Selector::All), vec![1, 1, 0]);
    }

    #[test]
    fn projective_line_totals() {
        let p1 = Fan::projective_space(1);
        let a = Atlas::new(PrimeField::new(5).unwrap(), p1, DivisorSet::empty(), None);
        let ws = support(&a, 4).unwrap();
        assert_eq!(total_hypercohomology(&a, &ws, Selector::All), vec![1, 0, 1]);
        assert_eq!(total_hypercohomology(&a, &ws, Selector::Hodge(1)), vec![0, 0, 1]);
    }

    #[test]
    fn far_weight_is_acyclic() {
        let a = gm();
        assert_eq!(hypercohomology(&a, &[7], Selector::All).dims, vec![0, 0, 0]);
    }
}
