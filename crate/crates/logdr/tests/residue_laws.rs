use exactlin::PrimeField;
use logdr::{d, gr_weight_decompose, residue, weight_residue, weight_subspace, FormSum};
use proptest::prelude::*;
use toricgeom::{Context, DivisorSet, Fan};

fn fans() -> Vec<Fan> {
    let p1 = Fan::projective_space(1);
    vec![p1.clone(), Fan::projective_space(2), p1.product(&p1), Fan::hirzebruch(1)]
}

fn contexts(fan: &Fan) -> Vec<Context> {
    let mut out = vec![Context::new(vec![])];
    for cone in fan.max_cones() {
        for k in 0..cone.len() {
            out.push(Context::new(vec![cone[k]]));
        }
        out.push(Context::new(cone.clone()));
    }
    out.sort();
    out.dedup();
    out
}

fn divisor_sets(fan: &Fan) -> Vec<DivisorSet> {
    let r = fan.rays().len();
    (0u32..1 << r)
        .map(|mask| {
            let rays: Vec<usize> = (0..r).filter(|k| mask & (1 << k) != 0).collect();
            DivisorSet::new(fan, &rays).unwrap()
        })
        .collect()
}

fn weights(n: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| (-radius..=radius).map(move |x| [w.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

#[test]
fn residues_biject_on_every_graded_slice() {
    for p in [2, 3, 5] {
        let f = PrimeField::new(p).unwrap();
        for fan in fans() {
            let n = fan.rank();
            for dset in divisor_sets(&fan) {
                for ctx in contexts(&fan) {
                    for m in weights(n, 2) {
                        for i in 0..=n {
                            for l in 0..=n + 1 {
                                if let Err(e) = gr_weight_decompose(f, &fan, &ctx, &dset, &m, i, l) {
                                    panic!("p={p} {ctx:?} m={m:?} i={i} l={l}: {e}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn residue_kills_the_lower_weight_step() {
    let f = PrimeField::new(5).unwrap();
    for fan in fans() {
        let n = fan.rank();
        let dset = DivisorSet::full(&fan);
        for cone in fan.max_cones() {
            let ctx = Context::new(cone.clone());
            for face in [vec![cone[0]], cone.clone()] {
                let l = face.len();
                for m in weights(n, 2) {
                    for q in l..=n {
                        let lower = weight_subspace(f, &fan, &ctx, &m, q, l - 1, &dset, None);
                        for v in lower.basis_vectors() {
                            let w = FormSum::from_vector(f, n, &m, q, &v);
                            assert!(weight_residue(f, &fan, &ctx, &dset, &w, &face).unwrap().is_zero());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn global_sections_on_the_line_inject_into_the_two_points() {
    // Γ(P¹, W₁ Ω¹(log D)) / Γ(W₀) at m = 0 is spanned by dlog t; its residues
    // at the two boundary points form a 2 × 1 matrix of rank 1.
    let f = PrimeField::new(5).unwrap();
    let p1 = Fan::projective_space(1);
    let dset = DivisorSet::full(&p1);
    let dlog = FormSum::monomial(f, 1, vec![0], 0b1);
    let mut column = Vec::new();
    for (c, cone) in p1.max_cones().iter().enumerate() {
        let r = residue(f, &p1, &Context::new(cone.clone()), &dset, &dlog, &[c]).unwrap();
        column.push(r.vector_at(1, &[0], 0)[0]);
    }
    assert_eq!(column, vec![1, f.neg(1)]);
}

proptest! {
    #[test]
    fn residue_commutes_with_d_up_to_level_sign(
        fan_idx in 0usize..4,
        cone_idx in 0usize..4,
        full_face in any::<bool>(),
        m in proptest::collection::vec(-3i64..=3, 2),
        coeffs in proptest::collection::vec(0u32..5, 4),
    ) {
        let f = PrimeField::new(5).unwrap();
        let fan = &fans()[fan_idx];
        let n = fan.rank();
        let m = &m[..n];
        let cone = &fan.max_cones()[cone_idx % fan.max_cones().len()];
        let ctx = Context::new(cone.clone());
        let face = if full_face { cone.clone() } else { vec![cone[0]] };
        let l = face.len();
        let dset = DivisorSet::full(fan);
        for q in l..n {
            let wl = weight_subspace(f, fan, &ctx, m, q, l, &dset, None);
            let c: Vec<u32> = coeffs.iter().copied().cycle().take(wl.dim()).collect();
            let omega = FormSum::from_vector(f, n, m, q, &wl.combine(f, &c));
            let lhs = weight_residue(f, fan, &ctx, &dset, &d(f, &omega), &face).unwrap();
            let rhs = d(f, &weight_residue(f, fan, &ctx, &dset, &omega, &face).unwrap());
            let sign = if l % 2 == 0 { 1 } else { f.neg(1) };
            prop_assert_eq!(lhs, rhs.scale(f, sign));
        }
    }
}
