//! Cross-check of the character-graded form spaces against a direct chart
//! computation: enumerate monomial forms `t^a dt_J ∧ dlog t_S` with `a ≥ 0`,
//! `S ⊆ D`, and compare spans weight by weight.

use exactlin::{left_wedge_matrix, ExteriorBasis, PrimeField, Subspace};
use toricgeom::{dual_basis, form_space, pair, validate, Context, DivisorSet, Fan};

fn subsets(k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << k)).map(|m| (0..k).filter(|b| m & (1 << b) != 0).collect()).collect()
}

fn wedge_of(f: PrimeField, n: usize, vecs: &[Vec<i64>]) -> Vec<u32> {
    let mut w = vec![1u32];
    for (deg, v) in vecs.iter().enumerate() {
        let vr: Vec<u32> = v.iter().map(|&x| f.reduce(x)).collect();
        w = left_wedge_matrix(f, n, deg, &vr).apply(f, &w);
    }
    // Built as v_last ∧ … ∧ v_first; reverse the order sign.
    let k = vecs.len();
    if (k * k.saturating_sub(1) / 2) % 2 == 1 {
        w = w.iter().map(|&x| f.neg(x)).collect();
    }
    w
}

fn oracle(f: PrimeField, fan: &Fan, cone: usize, m: &[i64], i: usize, d: &DivisorSet) -> Subspace {
    let n = fan.rank();
    let rays = &fan.max_cones()[cone];
    let basis = dual_basis(fan, cone);
    let order: Vec<i64> = rays.iter().map(|&r| pair(m, fan.ray(r))).collect();
    let mut gens = Vec::new();
    for j in subsets(n) {
        for s in subsets(n) {
            if j.len() + s.len() != i || j.iter().any(|x| s.contains(x)) {
                continue;
            }
            if s.iter().any(|&k| !d.contains(rays[k])) {
                continue;
            }
            // Exponent a_k = order_k - [k ∈ J] must be nonnegative.
            if (0..n).any(|k| order[k] - i64::from(j.contains(&k)) < 0) {
                continue;
            }
            let mut factors: Vec<Vec<i64>> = j.iter().map(|&k| basis[k].clone()).collect();
            factors.extend(s.iter().map(|&k| basis[k].clone()));
            gens.push(wedge_of(f, n, &factors));
        }
    }
    Subspace::span(f, ExteriorBasis::new(n, i).len(), &gens)
}

fn fans() -> Vec<Fan> {
    let p1 = Fan::projective_space(1);
    vec![p1.clone(), Fan::projective_space(2), p1.product(&p1), Fan::hirzebruch(1), Fan::hirzebruch(2)]
}

fn chars(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| (-r..=r).map(move |x| {
                let mut w = v.clone();
                w.push(x);
                w
            }))
            .collect();
    }
    out
}

#[test]
fn chart_spaces_match_coordinate_enumeration() {
    for p in [2u64, 3, 5] {
        let f = PrimeField::new(p).unwrap();
        for fan in fans() {
            validate(&fan, p as u32).unwrap();
            let n = fan.rank();
            for dmask in 0u32..(1 << fan.rays().len()) {
                let drays: Vec<usize> = (0..fan.rays().len()).filter(|b| dmask & (1 << b) != 0).collect();
                let d = DivisorSet::new(&fan, &drays).unwrap();
                for cone in 0..fan.max_cones().len() {
                    let ctx = Context::new(fan.max_cones()[cone].clone());
                    for m in chars(n, 2) {
                        for i in 0..=n {
                            let got = form_space(f, &fan, &ctx, &m, i, &d, None);
                            let want = oracle(f, &fan, cone, &m, i, &d);
                            assert_eq!(got, want, "p={p} fan={fan:?} D={drays:?} cone={cone} m={m:?} i={i}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn top_log_forms_are_a_line_on_the_dual_cone() {
    let f = PrimeField::new(5).unwrap();
    for fan in fans() {
        let n = fan.rank();
        let d = DivisorSet::full(&fan);
        for cone in 0..fan.max_cones().len() {
            let ctx = Context::new(fan.max_cones()[cone].clone());
            for m in chars(n, 2) {
                let in_dual = fan.max_cones()[cone].iter().all(|&r| pair(&m, fan.ray(r)) >= 0);
                let dim = form_space(f, &fan, &ctx, &m, n, &d, None).dim();
                assert_eq!(dim, usize::from(in_dual), "m={m:?}");
            }
        }
    }
}
