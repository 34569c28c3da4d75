use crate::{FpScalar, Matrix, PrimeField};

/// The standard basis `e_J` of `Λ^i(F_p^n)`, subsets `J` in lex order.
///
/// Subsets are bit masks; bit `k` stands for `e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorBasis {
    n: usize,
    degree: usize,
    masks: Vec<u32>,
}

impl ExteriorBasis {
    pub fn new(n: usize, degree: usize) -> Self {
        assert!(n < 32, "rank too large for mask encoding");
        let mut masks = Vec::new();
        if degree <= n {
            let mut idx: Vec<usize> = (0..degree).collect();
            loop {
                masks.push(idx.iter().fold(0u32, |m, &k| m | (1 << k)));
                // Advance to the next combination in lex order.
                let mut k = degree;
                let mut advanced = false;
                while k > 0 {
                    k -= 1;
                    if idx[k] < n - degree + k {
                        idx[k] += 1;
                        for j in k + 1..degree {
                            idx[j] = idx[j - 1] + 1;
                        }
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    break;
                }
            }
        }
        Self { n, degree, masks }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn mask(&self, idx: usize) -> u32 {
        self.masks[idx]
    }

    pub fn index_of(&self, mask: u32) -> Option<usize> {
        self.masks.binary_search_by(|probe| lex_cmp(*probe, mask)).ok()
    }
}

/// Lex order on masks of equal popcount, reading indices from low to high.
fn lex_cmp(a: u32, b: u32) -> std::cmp::Ordering {
    let ia = bits(a);
    let ib = bits(b);
    ia.cmp(&ib)
}

/// Indices of set bits, ascending.
pub fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|k| mask & (1 << k) != 0).collect()
}

/// Sign of `e_A ∧ e_B` relative to `e_{A∪B}`, or `None` when they overlap.
pub fn wedge_sign(a: u32, b: u32) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    for k in bits(b) {
        inversions += (a >> (k + 1)).count_ones();
    }
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Matrix of `w ↦ v ∧ w` from `Λ^i` to `Λ^{i+1}` for `v ∈ F_p^n`.
pub fn left_wedge_matrix(f: PrimeField, n: usize, i: usize, v: &[FpScalar]) -> Matrix {
    let src = ExteriorBasis::new(n, i);
    let dst = ExteriorBasis::new(n, i + 1);
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (c, &mask) in src.masks().iter().enumerate() {
        for (k, &vk) in v.iter().enumerate() {
            if vk == 0 {
                continue;
            }
            if let Some(s) = wedge_sign(1 << k, mask) {
                let r = dst.index_of(mask | (1 << k)).unwrap();
                let val = f.mul(vk, f.reduce(s));
                m.set(r, c, f.add(m.get(r, c), val));
            }
        }
    }
    m
}

/// Matrix of the contraction `ι_v` from `Λ^i` to `Λ^{i-1}`:
/// `ι_v(e_{j_1}∧…∧e_{j_i}) = Σ_k (-1)^{k-1} v_{j_k} e_{J∖j_k}`.
pub fn contraction_matrix(f: PrimeField, n: usize, i: usize, v: &[i64]) -> Matrix {
    let src = ExteriorBasis::new(n, i);
    if i == 0 {
        return Matrix::zeros(0, src.len());
    }
    let dst = ExteriorBasis::new(n, i - 1);
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (c, &mask) in src.masks().iter().enumerate() {
        for (pos, k) in bits(mask).into_iter().enumerate() {
            let coeff = f.reduce(v[k]);
            if coeff == 0 {
                continue;
            }
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            let r = dst.index_of(mask & !(1 << k)).unwrap();
            let val = f.mul(coeff, f.reduce(sign));
            m.set(r, c, f.add(m.get(r, c), val));
        }
    }
    m
}

/// Matrix of `Λ^i(A)` for `A : F_p^n → F_p^k` given as a `k × n` matrix.
pub fn exterior_power(f: PrimeField, a: &Matrix, i: usize) -> Matrix {
    let n = a.cols();
    let k = a.rows();
    let src = ExteriorBasis::new(n, i);
    let dst = ExteriorBasis::new(k, i);
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (c, &smask) in src.masks().iter().enumerate() {
        let cols = bits(smask);
        for (r, &dmask) in dst.masks().iter().enumerate() {
            let rows = bits(dmask);
            let mut minor = Matrix::zeros(i, i);
            for (a_r, &rr) in rows.iter().enumerate() {
                for (a_c, &cc) in cols.iter().enumerate() {
                    minor.set(a_r, a_c, a.get(rr, cc));
                }
            }
            m.set(r, c, determinant(f, &minor));
        }
    }
    m
}

/// Determinant over `F_p` by elimination.
pub fn determinant(f: PrimeField, a: &Matrix) -> FpScalar {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    let mut m = a.clone();
    let mut det: FpScalar = 1 % f.p();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m.get(r, col) != 0) else {
            return 0;
        };
        if piv != col {
            for c in 0..n {
                let (x, y) = (m.get(piv, c), m.get(col, c));
                m.set(piv, c, y);
                m.set(col, c, x);
            }
            det = f.neg(det);
        }
        let pv = m.get(col, col);
        det = f.mul(det, pv);
        let inv = f.inv(pv);
        for r in col + 1..n {
            let factor = f.mul(m.get(r, col), inv);
            if factor == 0 {
                continue;
            }
            for c in col..n {
                let v = f.sub(m.get(r, c), f.mul(factor, m.get(col, c)));
                m.set(r, c, v);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_of_two_subsets() {
        let b = ExteriorBasis::new(3, 2);
        assert_eq!(b.masks(), &[0b011, 0b101, 0b110]);
        assert_eq!(b.index_of(0b101), Some(1));
        assert_eq!(ExteriorBasis::new(2, 0).masks(), &[0]);
        assert!(ExteriorBasis::new(2, 3).is_empty());
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0b01, 0b10), Some(1));
        assert_eq!(wedge_sign(0b10, 0b01), Some(-1));
        assert_eq!(wedge_sign(0b01, 0b01), None);
    }

    #[test]
    fn contraction_undoes_wedge_on_dual_pair() {
        let f = PrimeField::new(5).unwrap();
        // ι_{e_0^*}(e_0 ∧ w) + e_0 ∧ ι_{e_0^*} w = w.
        let n = 3;
        for i in 0..n {
            let wedge = left_wedge_matrix(f, n, i, &[1, 0, 0]);
            let contract_up = contraction_matrix(f, n, i + 1, &[1, 0, 0]);
            let lhs = contract_up.mul(f, &wedge);
            let rhs = if i == 0 {
                Matrix::zeros(1, 1)
            } else {
                left_wedge_matrix(f, n, i - 1, &[1, 0, 0]).mul(f, &contraction_matrix(f, n, i, &[1, 0, 0]))
            };
            assert_eq!(lhs.add(f, &rhs), Matrix::identity(ExteriorBasis::new(n, i).len()));
        }
    }

    #[test]
    fn top_power_is_determinant() {
        let f = PrimeField::new(7).unwrap();
        let a = Matrix::from_rows_i64(f, 2, &[vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(exterior_power(f, &a, 2).get(0, 0), 1);
        assert_eq!(determinant(f, &a), 1);
    }
}
