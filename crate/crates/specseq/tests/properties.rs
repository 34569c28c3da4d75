use exactlin::{Complex, Direction, Flag, Matrix, PrimeField, Subspace};
use proptest::prelude::*;
use specseq::*;

const P: u32 = 3;

/// Coordinate-adapted bifiltered two-term complex: basis vector `i` of
/// degree `q` sits at weight `w` and Hodge level `s`; `d` only has entries
/// that respect both flags. Conjugated by `h0`, `h1` to move the flags off
/// the coordinate axes.
#[derive(Clone, Debug)]
struct Input {
    levels: [Vec<(i64, i64)>; 2],
    d: Vec<u32>,
    h: [Vec<u32>; 2],
}

fn input() -> impl Strategy<Value = Input> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(n0, n1)| {
            let lv = |n| prop::collection::vec((0i64..=2, 0i64..=2), n);
            (lv(n0), lv(n1), prop::collection::vec(0..P, n0 * n1), prop::collection::vec(0..P, n0 * n0), prop::collection::vec(0..P, n1 * n1))
        })
        .prop_map(|(l0, l1, d, h0, h1)| Input { levels: [l0, l1], d, h: [h0, h1] })
}

fn invertible(f: PrimeField, n: usize, raw: &[u32]) -> Matrix {
    let m = Matrix::from_rows_i64(f, n, &raw.chunks(n).map(|r| r.iter().map(|&x| x as i64).collect()).collect::<Vec<_>>()).unwrap();
    if m.inverse(f).is_some() {
        m
    } else {
        Matrix::identity(n)
    }
}

fn build(f: PrimeField, inp: &Input) -> FilteredComplexFp {
    let (n0, n1) = (inp.levels[0].len(), inp.levels[1].len());
    let mut d = Matrix::zeros(n1, n0);
    for j in 0..n0 {
        for i in 0..n1 {
            let (ws, ss) = inp.levels[0][j];
            let (wt, st) = inp.levels[1][i];
            if wt <= ws && st >= ss {
                d.set(i, j, inp.d[i * n0 + j]);
            }
        }
    }
    let h = [invertible(f, n0, &inp.h[0]), invertible(f, n1, &inp.h[1])];
    let d = h[1].mul(f, &d).mul(f, &h[0].inverse(f).unwrap());
    let flags = |q: usize, weight: bool| {
        let lv = &inp.levels[q];
        let n = lv.len();
        let steps: Vec<Subspace> = (0..=2)
            .map(|l| {
                let coords: Vec<usize> =
                    (0..n).filter(|&i| if weight { lv[i].0 <= l } else { lv[i].1 >= l }).collect();
                Subspace::coordinate(n, &coords).image_under(f, &h[q])
            })
            .collect();
        let dir = if weight { Direction::Increasing } else { Direction::Decreasing };
        let mut steps = steps;
        if !weight {
            steps.push(Subspace::zero(n));
        } else {
            steps.insert(0, Subspace::zero(n));
        }
        let lo = if weight { -1 } else { 0 };
        Flag::new(f, dir, lo, steps).unwrap()
    };
    let c = Complex::new(f, 0, vec![n0, n1], vec![d]).unwrap();
    FilteredComplexFp::new(f, c, vec![flags(0, true), flags(1, true)], vec![flags(0, false), flags(1, false)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn recursion_and_convergence(inp in input()) {
        let f = PrimeField::new(P as u64).unwrap();
        let k = build(f, &inp);
        for along in [Along::Weight, Along::Hodge] {
            let ss = pages(f, &k, along, 3);
            prop_assert!(ss.recursion_ok && ss.convergence_ok);
            // Independent audit of the abutment.
            let totals = ss.infinity.totals();
            for q in 0..=1 {
                prop_assert_eq!(totals.get(&q).copied().unwrap_or(0), k.complex().cohomology(f, q).dim());
            }
            // E_1^{p,q} = H^{p+q}(Gr^p) computed by a subquotient complex.
            for (key, spot) in &ss.pages[1].spots {
                let p = key.0;
                let (gr, _) = k
                    .complex()
                    .subquotient(f, &|n| (k.decreasing(f, along, n).get(p), k.decreasing(f, along, n).get(p + 1)))
                    .unwrap();
                prop_assert_eq!(spot.dim(), gr.cohomology(f, spot.degree()).dim());
            }
        }
    }

    #[test]
    fn filtrations_are_nested_and_agree_on_e0(inp in input()) {
        let f = PrimeField::new(P as u64).unwrap();
        let k = build(f, &inp);
        let ss = pages(f, &k, Along::Weight, 3);
        let fil = three_filtrations(f, &k, &ss, 3);
        prop_assert!(fil[0].coincide(f));
        for t in &fil {
            prop_assert!(t.contained(f));
        }
    }
}
