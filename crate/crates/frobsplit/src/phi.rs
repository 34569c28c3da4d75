use crate::cup::{antisymmetrize, eval_cup, Factor};
use crate::{SplitData, SplitError};
use cech::CechCochain;
use exactlin::bits;
use logdr::FormSum;
use std::collections::HashMap;

impl SplitData {
    /// `φ¹` at `dlog x^v` as a cup factor: `ζ(v)` on charts, `h(v)` on pairs.
    pub(crate) fn phi_one(&self, v: Vec<i64>) -> Factor<'_> {
        let w = v.clone();
        Factor {
            vertex: Box::new(move |a| self.zeta(a, &v)),
            vertex_degree: 1,
            edge: Some(Box::new(move |a, b| self.h(a, b, &w))),
            edge_degree: 0,
        }
    }

    /// `φ^i(dlog x^{v_1} ∧ … ∧ dlog x^{v_i})` on an ordered chart tuple:
    /// the antisymmetrized cup power of `φ¹`.
    pub fn phi_dlog(&self, vs: &[Vec<i64>], tuple: &[usize]) -> Result<FormSum, SplitError> {
        let f = self.field();
        let i = vs.len();
        if i >= f.p() as usize {
            return Err(SplitError::DegreeTooHigh { degree: i, p: f.p() });
        }
        Ok(antisymmetrize(f, i, |perm| {
            let factors: Vec<Factor> = perm.iter().map(|&k| self.phi_one(vs[k].clone())).collect();
            eval_cup(f, self.rank(), &factors, tuple)
        }))
    }

    fn phi_mask(&self, mask: u32, tuple: &[usize]) -> Result<FormSum, SplitError> {
        let n = self.rank();
        let vs: Vec<Vec<i64>> =
            bits(mask).into_iter().map(|k| (0..n).map(|j| i64::from(j == k)).collect()).collect();
        self.phi_dlog(&vs, tuple)
    }

    /// `φ^i(ω)` for the degree-`i` part of a weighted form, as a Čech cochain
    /// of total degree `i` on increasing tuples of charts.
    pub fn phi(&self, i: usize, omega: &FormSum) -> Result<CechCochain, SplitError> {
        let f = self.field();
        if i >= f.p() as usize {
            return Err(SplitError::DegreeTooHigh { degree: i, p: f.p() });
        }
        let p = f.p() as i64;
        let mut out = CechCochain::zero();
        for t in cech::chart_tuples(self.charts()).into_iter().filter(|t| t.len() <= i + 1) {
            let s = i + 1 - t.len();
            for (m, mask, c) in omega.terms() {
                if mask.count_ones() as usize != i {
                    continue;
                }
                let shift: Vec<i64> = m.iter().map(|x| p * x).collect();
                let v = self.phi_mask(mask, &t)?.shift_weight(&shift).scale(f, c);
                out.insert(f, t.clone(), s, v);
            }
        }
        Ok(out)
    }

    /// `Φ` on a cochain of the Higgs complex: each entry `c_t` of form degree
    /// `s` contributes `c_t ∪ φ^s`, whose value on `t ++ u` (with `u` starting
    /// at the last chart of `t`) is `F^*(c_t) · φ^s(u)`.
    pub fn apply(&self, c: &CechCochain) -> Result<CechCochain, SplitError> {
        let f = self.field();
        let p = f.p() as i64;
        let charts = self.charts();
        let mut cache: HashMap<(u32, Vec<usize>), FormSum> = HashMap::new();
        let mut out = CechCochain::zero();
        for ((t, s), form) in c.entries() {
            if *s >= f.p() as usize && !form.is_zero() {
                return Err(SplitError::DegreeTooHigh { degree: *s, p: f.p() });
            }
            let last = *t.last().expect("nonempty tuple");
            let tails = increasing_from(last, charts, *s);
            for (m, mask, coeff) in form.terms() {
                let shift: Vec<i64> = m.iter().map(|x| p * x).collect();
                for u in &tails {
                    let key = (mask, u.clone());
                    if !cache.contains_key(&key) {
                        let v = self.phi_mask(mask, u)?;
                        cache.insert(key.clone(), v);
                    }
                    let v = &cache[&key];
                    if v.is_zero() {
                        continue;
                    }
                    let mut tuple = t.clone();
                    tuple.extend_from_slice(&u[1..]);
                    out.insert(f, tuple, s + 1 - u.len(), v.shift_weight(&shift).scale(f, coeff));
                }
            }
        }
        Ok(out)
    }
}

/// Increasing tuples starting at `first`, of length `1..=max_steps + 1`.
fn increasing_from(first: usize, charts: usize, max_steps: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![first]];
    let mut frontier = vec![vec![first]];
    for _ in 0..max_steps {
        let mut next = Vec::new();
        for u in &frontier {
            for b in u.last().unwrap() + 1..charts {
                let mut w = u.clone();
                w.push(b);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
