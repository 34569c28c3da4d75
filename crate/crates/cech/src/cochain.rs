use exactlin::{FpScalar, PrimeField};
use logdr::{d, FormSum};
use std::collections::{BTreeMap, BTreeSet};
use toricgeom::Character;

/// A Čech–de Rham cochain: a form on each overlap, keyed by the increasing
/// chart tuple and the form degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CechCochain {
    entries: BTreeMap<(Vec<usize>, usize), FormSum>,
}

impl CechCochain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(tuple: Vec<usize>, form_degree: usize, form: FormSum) -> Self {
        let mut c = Self::zero();
        if !form.is_zero() {
            c.entries.insert((tuple, form_degree), form);
        }
        c
    }

    /// Adds `form` to the entry at `(tuple, form_degree)`.
    pub fn insert(&mut self, f: PrimeField, tuple: Vec<usize>, form_degree: usize, form: FormSum) {
        let key = (tuple, form_degree);
        let sum = match self.entries.remove(&key) {
            Some(old) => old.add(f, &form),
            None => form,
        };
        if !sum.is_zero() {
            self.entries.insert(key, sum);
        }
    }

    pub fn get(&self, tuple: &[usize], form_degree: usize) -> FormSum {
        self.entries.get(&(tuple.to_vec(), form_degree)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Vec<usize>, usize), &FormSum)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, f: PrimeField, other: &CechCochain) -> CechCochain {
        let mut out = self.clone();
        for ((t, s), w) in &other.entries {
            out.insert(f, t.clone(), *s, w.clone());
        }
        out
    }

    pub fn sub(&self, f: PrimeField, other: &CechCochain) -> CechCochain {
        self.add(f, &other.scale(f, f.neg(1)))
    }

    pub fn scale(&self, f: PrimeField, s: FpScalar) -> CechCochain {
        let mut out = CechCochain::zero();
        for ((t, k), w) in &self.entries {
            out.insert(f, t.clone(), *k, w.scale(f, s));
        }
        out
    }

    /// Characters occurring in any entry.
    pub fn weights(&self) -> BTreeSet<Character> {
        self.entries.values().flat_map(|w| w.weights()).collect()
    }

    /// The weight-`m` part.
    pub fn component(&self, m: &[i64]) -> CechCochain {
        let mut out = CechCochain::zero();
        for ((t, s), w) in &self.entries {
            let part = w.component(m);
            if !part.is_zero() {
                out.entries.insert((t.clone(), *s), part);
            }
        }
        out
    }

    /// Total degrees `r + s` of the nonzero entries.
    pub fn total_degrees(&self) -> BTreeSet<usize> {
        self.entries.keys().map(|(t, s)| t.len() - 1 + s).collect()
    }

    pub fn map_forms(&self, f: PrimeField, g: impl Fn(&FormSum) -> FormSum) -> CechCochain {
        let mut out = CechCochain::zero();
        for ((t, s), w) in &self.entries {
            out.insert(f, t.clone(), *s, g(w));
        }
        out
    }
}

/// `D = δ + (−1)^r d` on a cochain over `charts` charts.
pub fn total_differential(f: PrimeField, charts: usize, c: &CechCochain) -> CechCochain {
    let mut out = CechCochain::zero();
    for ((t, s), w) in c.entries() {
        for beta in (0..charts).filter(|x| !t.contains(x)) {
            let mut t2 = t.clone();
            let pos = t2.partition_point(|&x| x < beta);
            t2.insert(pos, beta);
            let sign = if pos % 2 == 0 { 1 } else { f.neg(1) };
            out.insert(f, t2, *s, w.scale(f, sign));
        }
        let sign = if (t.len() - 1) % 2 == 0 { 1 } else { f.neg(1) };
        out.insert(f, t.clone(), s + 1, d(f, w).scale(f, sign));
    }
    out
}

/// Alexander–Whitney cup product
/// `(a ∪ b)_{α₀…α_{r+r′}} = (−1)^{s·r′} a_{α₀…α_r} ∧ b_{α_r…α_{r+r′}}`,
/// the Koszul sign for `D = δ + (−1)^r d`, so `D(a ∪ b) = Da ∪ b ± a ∪ Db`.
pub fn cup(f: PrimeField, a: &CechCochain, b: &CechCochain) -> CechCochain {
    let mut out = CechCochain::zero();
    for ((ta, sa), wa) in a.entries() {
        for ((tb, sb), wb) in b.entries() {
            let rb = tb.len() - 1;
            if ta.last() != tb.first() {
                continue;
            }
            let mut t = ta.clone();
            t.extend_from_slice(&tb[1..]);
            let sign = if (sa * rb) % 2 == 0 { 1 } else { f.neg(1) };
            out.insert(f, t, sa + sb, wa.wedge(f, wb).scale(f, sign));
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
    fn constant_on_the_line_is_closed() {
        let f = f5();
        let mut c = CechCochain::zero();
        c.insert(f, vec![0], 0, FormSum::character(f, vec![0]));
        c.insert(f, vec![1], 0, FormSum::character(f, vec![0]));
        assert!(total_differential(f, 2, &c).is_zero());
    }

    #[test]
    fn two_chart_hand_computation() {
        // c = (t on U₀, 0 on U₁): Dc = (dt on U₀, −t on U₀₁).
        let f = f5();
        let c = CechCochain::single(vec![0], 0, FormSum::character(f, vec![1]));
        let dc = total_differential(f, 2, &c);
        assert_eq!(dc.get(&[0], 1), FormSum::monomial(f, 1, vec![1], 0b1));
        assert_eq!(dc.get(&[0, 1], 0), FormSum::character(f, vec![1]).scale(f, f.neg(1)));
        assert_eq!(dc.entries().count(), 2);
    }
}
