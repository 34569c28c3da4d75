use exactlin::{wedge_sign, ExteriorBasis, FpScalar, PrimeField};
use std::collections::{BTreeMap, BTreeSet};
use toricgeom::{Character, Context};

/// One term `coeff · x^weight ⊗ e_wedge` on a context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialLogForm {
    pub coeff: FpScalar,
    pub weight: Character,
    /// Bit mask of the basis wedge `e_J`.
    pub wedge: u32,
    pub context: Context,
}

impl MonomialLogForm {
    pub fn degree(&self) -> usize {
        self.wedge.count_ones() as usize
    }

    pub fn to_sum(&self, f: PrimeField) -> FormSum {
        FormSum::monomial(f, self.coeff, self.weight.clone(), self.wedge)
    }
}

/// A finite sum of monomial forms, keyed by `(weight, wedge mask)`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct FormSum {
    terms: BTreeMap<(Character, u32), FpScalar>,
}

impl FormSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(f: PrimeField, coeff: FpScalar, weight: Character, wedge: u32) -> Self {
        let mut s = Self::zero();
        s.add_term(f, weight, wedge, coeff);
        s
    }

    /// The function `x^m`.
    pub fn character(f: PrimeField, m: Character) -> Self {
        Self::monomial(f, 1, m, 0)
    }

    pub fn add_term(&mut self, f: PrimeField, weight: Character, wedge: u32, c: FpScalar) {
        if c == 0 {
            return;
        }
        let key = (weight, wedge);
        let v = f.add(self.terms.get(&key).copied().unwrap_or(0), c);
        if v == 0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Character, u32, FpScalar)> {
        self.terms.iter().map(|((m, w), &c)| (m, *w, c))
    }

    pub fn weights(&self) -> BTreeSet<Character> {
        self.terms.keys().map(|(m, _)| m.clone()).collect()
    }

    pub fn degrees(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|(_, w)| w.count_ones() as usize).collect()
    }

    pub fn add(&self, f: PrimeField, other: &FormSum) -> FormSum {
        let mut out = self.clone();
        for (m, w, c) in other.terms() {
            out.add_term(f, m.clone(), w, c);
        }
        out
    }

    pub fn sub(&self, f: PrimeField, other: &FormSum) -> FormSum {
        self.add(f, &other.scale(f, f.neg(1)))
    }

    pub fn scale(&self, f: PrimeField, s: FpScalar) -> FormSum {
        let mut out = FormSum::zero();
        for (m, w, c) in self.terms() {
            out.add_term(f, m.clone(), w, f.mul(c, s));
        }
        out
    }

    /// Terms of the given weight.
    pub fn component(&self, weight: &[i64]) -> FormSum {
        FormSum {
            terms: self
                .terms
                .iter()
                .filter(|((m, _), _)| m.as_slice() == weight)
                .map(|(k, &v)| (k.clone(), v))
                .collect(),
        }
    }

    /// Coordinates of the weight-`m`, degree-`i` part in the lex basis of `Λ^i`.
    pub fn vector_at(&self, n: usize, weight: &[i64], degree: usize) -> Vec<FpScalar> {
        let basis = ExteriorBasis::new(n, degree);
        let mut v = vec![0; basis.len()];
        for ((m, w), &c) in &self.terms {
            if m.as_slice() == weight && w.count_ones() as usize == degree {
                v[basis.index_of(*w).expect("wedge inside rank")] = c;
            }
        }
        v
    }

    pub fn from_vector(f: PrimeField, n: usize, weight: &[i64], degree: usize, v: &[FpScalar]) -> FormSum {
        let basis = ExteriorBasis::new(n, degree);
        let mut out = FormSum::zero();
        for (k, &c) in v.iter().enumerate() {
            out.add_term(f, weight.to_vec(), basis.mask(k), c);
        }
        out
    }

    /// Product `a ∧ b`; weights add.
    pub fn wedge(&self, f: PrimeField, other: &FormSum) -> FormSum {
        let mut out = FormSum::zero();
        for (ma, wa, ca) in self.terms() {
            for (mb, wb, cb) in other.terms() {
                if let Some(s) = wedge_sign(wa, wb) {
                    let m: Character = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                    out.add_term(f, m, wa | wb, f.mul(f.mul(ca, cb), f.reduce(s)));
                }
            }
        }
        out
    }

    /// `p`-th power of a function (degree-0 sum): `Σ c x^{pm}`.
    pub fn frobenius_function(&self, f: PrimeField) -> FormSum {
        let p = f.p() as i64;
        let mut out = FormSum::zero();
        for (m, w, c) in self.terms() {
            assert_eq!(w, 0, "frobenius_function expects a function");
            out.add_term(f, m.iter().map(|x| p * x).collect(), 0, c);
        }
        out
    }

    /// Multiplies every term by `x^shift`.
    pub fn shift_weight(&self, shift: &[i64]) -> FormSum {
        FormSum {
            terms: self
                .terms
                .iter()
                .map(|((m, w), &c)| ((m.iter().zip(shift).map(|(a, b)| a + b).collect(), *w), c))
                .collect(),
        }
    }
}

/// The differential `d(x^m ⊗ e_J) = x^m ⊗ (m̄ ∧ e_J)`.
pub fn d(f: PrimeField, w: &FormSum) -> FormSum {
    let mut out = FormSum::zero();
    for (m, mask, c) in w.terms() {
        for (k, &mk) in m.iter().enumerate() {
            let mk = f.reduce(mk);
            if mk == 0 {
                continue;
            }
            if let Some(s) = wedge_sign(1 << k, mask) {
                out.add_term(f, m.clone(), mask | (1 << k), f.mul(f.mul(mk, c), f.reduce(s)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn d_of_constant_vanishes() {
        let f = f5();
        assert!(d(f, &FormSum::character(f, vec![0, 0])).is_zero());
    }

    #[test]
    fn d_of_t1_dlog_t2() {
        let f = f5();
        // t₁ dlog t₂ = x^{(1,0)} ⊗ e₂; its d is x^{(1,0)} ⊗ e₁∧e₂.
        let w = FormSum::monomial(f, 1, vec![1, 0], 0b10);
        assert_eq!(d(f, &w), FormSum::monomial(f, 1, vec![1, 0], 0b11));
    }

    #[test]
    fn d_squared_vanishes_on_x11() {
        let f = f5();
        let w = FormSum::character(f, vec![1, 1]);
        assert!(!d(f, &w).is_zero());
        assert!(d(f, &d(f, &w)).is_zero());
    }

    #[test]
    fn wedge_is_graded_commutative() {
        let f = f5();
        let a = FormSum::monomial(f, 2, vec![1, 0], 0b01);
        let b = FormSum::monomial(f, 3, vec![0, 1], 0b10);
        assert_eq!(a.wedge(f, &b), b.wedge(f, &a).scale(f, f.neg(1)));
    }

    #[test]
    fn frobenius_multiplies_weights() {
        let f = f5();
        let g = FormSum::character(f, vec![1, -2]);
        assert_eq!(g.frobenius_function(f), FormSum::character(f, vec![5, -10]));
    }
}
