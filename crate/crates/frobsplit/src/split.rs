use crate::{validate_lift, FrobLift, SplitError};
use exactlin::PrimeField;
use logdr::{d, FormSum};
use toricgeom::{dual_basis, DivisorSet, Fan};

/// The functions `G_α(e_k)` of a lift, one set per chart, from which the
/// splitting data is read off.
#[derive(Clone, Debug)]
pub struct SplitData {
    field: PrimeField,
    rank: usize,
    /// `g[α][k] = G_α(e_k)`.
    g: Vec<Vec<FormSum>>,
}

impl SplitData {
    pub fn new(f: PrimeField, fan: &Fan, divisor: &DivisorSet, lift: &FrobLift) -> Result<Self, SplitError> {
        validate_lift(fan, lift)?;
        let n = fan.rank();
        let p = f.p() as i64;
        let mut g = Vec::new();
        for (alpha, cone) in fan.max_cones().iter().enumerate() {
            let duals = dual_basis(fan, alpha);
            // g_ρ = u_ρ on log rays, λ_ρ t_ρ^{-p} otherwise.
            let g_rho: Vec<FormSum> = cone
                .iter()
                .zip(&duals)
                .map(|(&ray, m_rho)| {
                    let pert = lift.perturbation(alpha, ray);
                    if divisor.contains(ray) {
                        pert
                    } else {
                        pert.shift_weight(&m_rho.iter().map(|x| -p * x).collect::<Vec<_>>())
                    }
                })
                .collect();
            let per_basis = (0..n)
                .map(|k| {
                    let mut out = FormSum::zero();
                    for (&ray, g) in cone.iter().zip(&g_rho) {
                        let c = fan.ray(ray)[k];
                        if c != 0 {
                            out = out.add(f, &g.scale(f, f.reduce(c)));
                        }
                    }
                    out
                })
                .collect();
            g.push(per_basis);
        }
        Ok(Self { field: f, rank: n, g })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn charts(&self) -> usize {
        self.g.len()
    }

    /// `G_α(v)`, linear in `v ∈ M`.
    pub fn g(&self, alpha: usize, v: &[i64]) -> FormSum {
        let f = self.field;
        let mut out = FormSum::zero();
        for (k, &c) in v.iter().enumerate() {
            if f.reduce(c) != 0 {
                out = out.add(f, &self.g[alpha][k].scale(f, f.reduce(c)));
            }
        }
        out
    }

    /// `ζ_α(dlog x^v) = dlog x^v + dG_α(v)`.
    pub fn zeta(&self, alpha: usize, v: &[i64]) -> FormSum {
        let f = self.field;
        let mut out = d(f, &self.g(alpha, v));
        for (k, &c) in v.iter().enumerate() {
            out.add_term(f, vec![0; self.rank], 1 << k, f.reduce(c));
        }
        out
    }

    /// `h_αβ(dlog x^v) = G_β(v) − G_α(v)`.
    pub fn h(&self, alpha: usize, beta: usize, v: &[i64]) -> FormSum {
        self.g(beta, v).sub(self.field, &self.g(alpha, v))
    }

    /// `ζ_α` extended `p`-linearly to weighted one-forms `Σ c x^m ⊗ e_k`.
    pub fn zeta_form(&self, alpha: usize, omega: &FormSum) -> FormSum {
        self.one_form_map(omega, |v| self.zeta(alpha, v))
    }

    pub fn h_form(&self, alpha: usize, beta: usize, omega: &FormSum) -> FormSum {
        self.one_form_map(omega, |v| self.h(alpha, beta, v))
    }

    fn one_form_map(&self, omega: &FormSum, g: impl Fn(&[i64]) -> FormSum) -> FormSum {
        let f = self.field;
        let p = f.p() as i64;
        let mut out = FormSum::zero();
        for (m, mask, c) in omega.terms() {
            assert_eq!(mask.count_ones(), 1, "expects a one-form");
            let k = mask.trailing_zeros() as usize;
            let unit: Vec<i64> = (0..self.rank).map(|j| i64::from(j == k)).collect();
            let shift: Vec<i64> = m.iter().map(|x| p * x).collect();
            out = out.add(f, &g(&unit).shift_weight(&shift).scale(f, c));
        }
        out
    }

    /// Checks `dζ_α = 0`, `ζ_β − ζ_α = dh_αβ` and `h_αβ + h_βγ = h_αγ` on
    /// the basis of `M`.
    pub fn check_laws(&self) -> SplitLawReport {
        let f = self.field;
        let c = self.charts();
        let units: Vec<Vec<i64>> =
            (0..self.rank).map(|k| (0..self.rank).map(|j| i64::from(j == k)).collect()).collect();
        let mut r = SplitLawReport { closed: true, transition: true, cocycle: true, checked: 0 };
        for v in &units {
            for a in 0..c {
                r.closed &= d(f, &self.zeta(a, v)).is_zero();
                r.checked += 1;
                for b in 0..c {
                    let lhs = self.zeta(b, v).sub(f, &self.zeta(a, v));
                    r.transition &= lhs == d(f, &self.h(a, b, v));
                    r.checked += 1;
                    for g in 0..c {
                        r.cocycle &= self.h(a, b, v).add(f, &self.h(b, g, v)) == self.h(a, g, v);
                        r.checked += 1;
                    }
                }
            }
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitLawReport {
    pub closed: bool,
    pub transition: bool,
    pub cocycle: bool,
    pub checked: usize,
}

impl SplitLawReport {
    pub fn pass(&self) -> bool {
        self.closed && self.transition && self.cocycle
    }
}
