use exactlin::{Direction, Flag, Matrix, PrimeField, Subspace};
use flmod::{gr_map, kernel_cokernel, validate, FLModule, FLMorphism, FlError};
use proptest::prelude::*;

fn field() -> PrimeField {
    PrimeField::new(5).unwrap()
}

/// `⊕ F_p(−l_i)` with `ψ = 1` on the standard basis.
fn split_module(levels: &[i64]) -> FLModule {
    let f = field();
    let n = levels.len();
    let lo = levels.iter().copied().min().unwrap_or(0);
    let hi = levels.iter().copied().max().unwrap_or(0);
    let steps: Vec<Subspace> = (lo..=hi)
        .map(|l| {
            let idx: Vec<usize> = (0..n).filter(|&i| levels[i] >= l).collect();
            Subspace::coordinate(n, &idx)
        })
        .collect();
    let m = FLModule::new(Flag::new(f, Direction::Decreasing, lo, steps).unwrap(), Matrix::identity(n)).unwrap();
    // ψ sends each graded basis class to its representative.
    let mut cols = Vec::new();
    for g in m.graded(f) {
        for rep in g.quotient.representatives().row_vecs() {
            cols.push(rep);
        }
    }
    FLModule::new(m.fil().clone(), Matrix::from_columns(n, &cols)).unwrap()
}

/// Transports a module along an invertible `t`.
fn transport(m: &FLModule, t: &Matrix) -> FLModule {
    let f = field();
    let fil = m.fil().image_under(f, t);
    let shell = FLModule::new(fil, Matrix::identity(m.dim())).unwrap();
    let gr_t = gr_map(f, m, &shell, t).unwrap();
    let psi = t.mul(f, m.psi()).mul(f, &gr_t.inverse(f).unwrap());
    FLModule::new(shell.fil().clone(), psi).unwrap()
}

fn invertible(n: usize, seed: &[u32]) -> Matrix {
    let f = field();
    // Unit lower times invertible upper triangular.
    let mut m = Matrix::identity(n);
    let mut k = 0;
    for r in 0..n {
        for c in 0..r {
            m.set(r, c, seed[k % seed.len()] % 5);
            k += 1;
        }
    }
    let mut u = Matrix::identity(n);
    for r in 0..n {
        u.set(r, r, 1 + seed[(k + r) % seed.len()] % 4);
        for c in r + 1..n {
            u.set(r, c, seed[(k + r * n + c) % seed.len()] % 5);
        }
    }
    m.mul(f, &u)
}

#[test]
fn unit_module_and_bad_psi() {
    let f = field();
    assert!(validate(f, &split_module(&[0])).pass());
    let zero_psi = FLModule::new(Flag::trivial(1, Direction::Decreasing, 0), Matrix::zeros(1, 1)).unwrap();
    assert!(!validate(f, &zero_psi).psi_invertible);
}

#[test]
fn non_strict_projection_is_rejected() {
    let f = field();
    let diag = Subspace::span(f, 2, &[vec![1, 1]]);
    let src_fil = Flag::new(f, Direction::Decreasing, 0, vec![Subspace::full(2), diag, Subspace::zero(2)]).unwrap();
    let dst_fil = Flag::new(f, Direction::Decreasing, 0, vec![Subspace::full(1); 3]).unwrap();
    let proj = Matrix::from_rows_i64(f, 2, &[vec![1, 0]]).unwrap();
    for s in 1..5u32 {
        let psi_src = Matrix::from_rows(2, &[vec![1, 0], vec![0, s]]);
        let src = FLModule::new(src_fil.clone(), psi_src).unwrap();
        let dst = FLModule::new(dst_fil.clone(), Matrix::identity(1)).unwrap();
        match FLMorphism::new(f, src, dst, proj.clone()) {
            Err(FlError::NotAnFLMorphism(_)) => {}
            Ok(m) => assert!(matches!(kernel_cokernel(f, &m), Err(FlError::NotStrict(_)))),
            Err(e) => panic!("unexpected {e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernels_and_cokernels_are_fl_modules(
        levels1 in proptest::collection::vec(0i64..3, 1..4),
        levels2 in proptest::collection::vec(0i64..3, 1..4),
        entries in proptest::collection::vec(0u32..5, 16),
        s1 in proptest::collection::vec(0u32..25, 8),
        s2 in proptest::collection::vec(0u32..25, 8),
    ) {
        let f = field();
        let (n1, n2) = (levels1.len(), levels2.len());
        // Level-preserving maps between split modules are FL morphisms.
        let mut a = Matrix::zeros(n2, n1);
        for r in 0..n2 {
            for c in 0..n1 {
                if levels1[c] == levels2[r] {
                    a.set(r, c, entries[(r * 4 + c) % 16]);
                }
            }
        }
        let (m1, m2) = (split_module(&levels1), split_module(&levels2));
        let (t1, t2) = (invertible(n1, &s1), invertible(n2, &s2));
        let (x1, x2) = (transport(&m1, &t1), transport(&m2, &t2));
        prop_assert!(validate(f, &x1).pass() && validate(f, &x2).pass());
        let map = t2.mul(f, &a).mul(f, &t1.inverse(f).unwrap());
        let phi = FLMorphism::new(f, x1.clone(), x2.clone(), map.clone()).unwrap();
        prop_assert!(phi.strictness(f).is_ok());
        let (k, c) = kernel_cokernel(f, &phi).unwrap();
        prop_assert!(validate(f, &k).pass());
        prop_assert!(validate(f, &c).pass());
        let rank = map.rank(f);
        prop_assert_eq!(k.dim(), n1 - rank);
        prop_assert_eq!(c.dim(), n2 - rank);
        // Gr(ker φ) = ker Gr(φ), level by level.
        let gr = gr_map(f, &x1, &x2, &map).unwrap();
        for (level, dk) in k.hodge_numbers(f) {
            let piece = x1.graded(f).into_iter().find(|g| g.level == level).unwrap();
            let idx: Vec<usize> = (piece.offset..piece.offset + piece.quotient.dim()).collect();
            let sub = Subspace::coordinate(n1, &idx);
            let ker_gr = exactlin::rank_kernel_image(f, &gr).1.intersect(f, &sub);
            prop_assert_eq!(ker_gr.dim(), dk);
        }
    }
}
