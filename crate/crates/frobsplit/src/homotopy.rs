use crate::cup::{antisymmetrize, eval_cup, Factor};
use crate::{FrobLift, SplitData, SplitError};
use cech::{chart_tuples, cochain_in_level, total_differential, Atlas, CechCochain};
use exactlin::{bits, ExteriorBasis, PrimeField};
use logdr::{weight_subspace, FormSum};
use toricgeom::{Context, DivisorSet, ToricMorphism};

/// `f^*` on weighted forms: `x^m ⊗ e_K ↦ x^{Aᵀm} ⊗ ∧_{k∈K} Aᵀe_k`.
pub fn pull_back_form(f: PrimeField, morph: &ToricMorphism, omega: &FormSum) -> FormSum {
    let n = morph.source.rank();
    let zero = vec![0; n];
    let mut out = FormSum::zero();
    for (m, mask, c) in omega.terms() {
        let mut term = FormSum::monomial(f, c, morph.pull_back(m), 0);
        for k in bits(mask) {
            let mut e = FormSum::zero();
            for (j, &a) in morph.lattice_map[k].iter().enumerate() {
                e.add_term(f, zero.clone(), 1 << j, f.reduce(a));
            }
            term = term.wedge(f, &e);
        }
        out = out.add(f, &term);
    }
    out
}

/// The homotopy `η_i δ_i` on each basis section `e_J` of `Λ^i M_Y`, checked
/// against `f^*φ_Y − φ_X f^* = D(η_i δ_i)`.
#[derive(Clone, Debug)]
pub struct EtaCertificate {
    pub degree: usize,
    /// `(J, η_i δ_i(e_J))`.
    pub eta: Vec<(u32, CechCochain)>,
    /// Number of `(section, tuple)` pairs on which the identity was compared.
    pub checked: usize,
    /// Basis sections of `W_l` whose homotopy was tested to stay in `W_l`.
    pub filtered_checked: usize,
}

impl EtaCertificate {
    pub fn eta_is_zero(&self) -> bool {
        self.eta.iter().all(|(_, c)| c.is_zero())
    }
}

struct Sides<'a> {
    f: PrimeField,
    morph: &'a ToricMorphism,
    chi: &'a [usize],
    x: &'a SplitData,
    y: &'a SplitData,
}

impl Sides<'_> {
    /// `φ¹_X f^*` at `dlog y^w`.
    fn a(&self, w: Vec<i64>) -> Factor<'_> {
        self.x.phi_one(self.morph.pull_back(&w))
    }

    /// `f^* φ¹_Y` at `dlog y^w`.
    fn b(&self, w: Vec<i64>) -> Factor<'_> {
        let w2 = w.clone();
        Factor {
            vertex: Box::new(move |a| pull_back_form(self.f, self.morph, &self.y.zeta(self.chi[a], &w))),
            vertex_degree: 1,
            edge: Some(Box::new(move |a, b| {
                pull_back_form(self.f, self.morph, &self.y.h(self.chi[a], self.chi[b], &w2))
            })),
            edge_degree: 0,
        }
    }

    /// `η₁(dlog y^w)_α = f^*G^Y_{χα}(w) − G^X_α(Aᵀw)`.
    fn eta_one(&self, w: Vec<i64>) -> Factor<'_> {
        Factor {
            vertex: Box::new(move |a| {
                let gy = pull_back_form(self.f, self.morph, &self.y.g(self.chi[a], &w));
                gy.sub(self.f, &self.x.g(a, &self.morph.pull_back(&w)))
            }),
            vertex_degree: 0,
            edge: None,
            edge_degree: 0,
        }
    }

    fn side(&self, ws: &[Vec<i64>], tuple: &[usize], pull_first: bool) -> FormSum {
        let n = self.x.rank();
        antisymmetrize(self.f, ws.len(), |perm| {
            let factors: Vec<Factor> = perm
                .iter()
                .map(|&k| if pull_first { self.a(ws[k].clone()) } else { self.b(ws[k].clone()) })
                .collect();
            eval_cup(self.f, n, &factors, tuple)
        })
    }

    /// `η_i δ_i (dlog y^{w_1} ∧ … ∧ dlog y^{w_i})` on a tuple.
    fn eta(&self, ws: &[Vec<i64>], tuple: &[usize]) -> FormSum {
        let n = self.x.rank();
        let i = ws.len();
        antisymmetrize(self.f, i, |perm| {
            let mut out = FormSum::zero();
            for j in 0..i {
                let factors: Vec<Factor> = perm
                    .iter()
                    .enumerate()
                    .map(|(pos, &k)| match pos.cmp(&j) {
                        std::cmp::Ordering::Less => self.a(ws[k].clone()),
                        std::cmp::Ordering::Equal => self.eta_one(ws[k].clone()),
                        std::cmp::Ordering::Greater => self.b(ws[k].clone()),
                    })
                    .collect();
                let v = eval_cup(self.f, n, &factors, tuple);
                out = if j % 2 == 1 { out.sub(self.f, &v) } else { out.add(self.f, &v) };
            }
            out
        })
    }
}

/// Builds `η_i δ_i` for a toric morphism `f : (X, D) → (Y, E)` with lifts on
/// both sides, verifies the homotopy identity on every basis section and
/// every increasing chart tuple of `X`, and checks that `η` preserves `W`
/// over each chart of `Y`.
pub fn homotopy_eta(
    f: PrimeField,
    morph: &ToricMorphism,
    source: (&DivisorSet, &FrobLift),
    target: (&DivisorSet, &FrobLift),
    i: usize,
) -> Result<EtaCertificate, SplitError> {
    if i >= f.p() as usize {
        return Err(SplitError::DegreeTooHigh { degree: i, p: f.p() });
    }
    let chi = morph.chart_assignment()?;
    morph.check_divisors(source.0, target.0, &chi)?;
    let x = SplitData::new(f, &morph.source, source.0, source.1)?;
    let y = SplitData::new(f, &morph.target, target.0, target.1)?;
    let sides = Sides { f, morph, chi: &chi, x: &x, y: &y };
    let ny = morph.target.rank();
    let tuples = chart_tuples(x.charts());
    let mut eta = Vec::new();
    let mut checked = 0;
    for &mask in ExteriorBasis::new(ny, i).masks() {
        let ws: Vec<Vec<i64>> = bits(mask).into_iter().map(|k| (0..ny).map(|j| i64::from(j == k)).collect()).collect();
        let mut c = CechCochain::zero();
        for t in tuples.iter().filter(|t| t.len() <= i) {
            c.insert(f, t.clone(), i - t.len(), sides.eta(&ws, t));
        }
        let dc = total_differential(f, x.charts(), &c);
        for t in tuples.iter().filter(|t| t.len() <= i + 1) {
            let lhs = sides.side(&ws, t, false).sub(f, &sides.side(&ws, t, true));
            if lhs != dc.get(t, i + 1 - t.len()) {
                return Err(SplitError::HomotopyMismatch { section: bits(mask), tuple: t.clone() });
            }
            checked += 1;
        }
        eta.push((mask, c));
    }
    let filtered_checked = check_filtered(f, morph, &chi, source.0, target.0, i, &eta)?;
    Ok(EtaCertificate { degree: i, eta, checked, filtered_checked })
}

/// For each chart `V_β` and level `l`, every weight-zero section of
/// `W_l Ω^i_Y(log E)` on `V_β` has `η` in `W_l Ω_X(log D)` on the overlaps
/// of charts mapping into `V_β`.
#[allow(clippy::too_many_arguments)]
fn check_filtered(
    f: PrimeField,
    morph: &ToricMorphism,
    chi: &[usize],
    d: &DivisorSet,
    e: &DivisorSet,
    i: usize,
    eta: &[(u32, CechCochain)],
) -> Result<usize, SplitError> {
    let ny = morph.target.rank();
    let basis = ExteriorBasis::new(ny, i);
    let atlas = Atlas::new(f, morph.source.clone(), d.clone(), None);
    let zero = vec![0; ny];
    let mut count = 0;
    for beta in 0..morph.target.max_cones().len() {
        let ctx = Context::new(morph.target.max_cones()[beta].clone());
        for l in 0..=i {
            let sub = weight_subspace(f, &morph.target, &ctx, &zero, i, l, e, None);
            for w in sub.basis_vectors() {
                let mut c = CechCochain::zero();
                for (k, &coef) in w.iter().enumerate() {
                    if coef == 0 {
                        continue;
                    }
                    let mask = basis.mask(k);
                    let part = &eta.iter().find(|(m, _)| *m == mask).expect("every basis mask").1;
                    c = c.add(f, &part.scale(f, coef));
                }
                let mut local = CechCochain::zero();
                for ((t, s), form) in c.entries() {
                    if t.iter().any(|&a| chi[a] == beta) {
                        local.insert(f, t.clone(), *s, form.clone());
                    }
                }
                if !cochain_in_level(&atlas, &local, Some(l)) {
                    return Err(SplitError::NotFiltered { chart: beta, level: l });
                }
                count += 1;
            }
        }
    }
    Ok(count)
}
