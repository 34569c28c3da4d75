use crate::{FpScalar, LinError, Matrix, PrimeField};

/// A linear subspace of `F_p^ambient`, stored by its RREF basis (rows).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Matrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: Matrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the rows of `m`.
    pub fn row_span(f: PrimeField, m: &Matrix) -> Self {
        let (basis, pivots) = m.rref(f);
        Self { ambient: m.cols(), basis, pivots }
    }

    pub fn span(f: PrimeField, ambient: usize, vectors: &[Vec<FpScalar>]) -> Self {
        Self::row_span(f, &Matrix::from_rows(ambient, vectors))
    }

    /// The coordinate subspace spanned by the listed unit vectors.
    pub fn coordinate(ambient: usize, coords: &[usize]) -> Self {
        let mut idx: Vec<usize> = coords.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let mut basis = Matrix::zeros(idx.len(), ambient);
        for (r, &c) in idx.iter().enumerate() {
            basis.set(r, c, 1);
        }
        Self { ambient, basis, pivots: idx }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<FpScalar>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the pivot coordinates.
    pub fn reduce(&self, f: PrimeField, v: &[FpScalar]) -> Vec<FpScalar> {
        let mut out = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc];
            if c == 0 {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                let b = self.basis.get(r, j);
                if b != 0 {
                    *slot = f.sub(*slot, f.mul(c, b));
                }
            }
        }
        out
    }

    pub fn contains(&self, f: PrimeField, v: &[FpScalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        self.reduce(f, v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coords(&self, f: PrimeField, v: &[FpScalar]) -> Option<Vec<FpScalar>> {
        if !self.contains(f, v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// The vector with the given coordinates in the echelon basis.
    pub fn combine(&self, f: PrimeField, coords: &[FpScalar]) -> Vec<FpScalar> {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec![0; self.ambient];
        for (r, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = f.add(*slot, f.mul(c, self.basis.get(r, j)));
            }
        }
        out
    }

    pub fn is_subspace_of(&self, f: PrimeField, other: &Subspace) -> bool {
        self.basis.row_vecs().iter().all(|v| other.contains(f, v))
    }

    pub fn sum(&self, f: PrimeField, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::row_span(f, &self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, f: PrimeField, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // Combinations c of other's basis whose reduction modulo self vanishes.
        let reduced: Vec<Vec<FpScalar>> =
            other.basis.row_vecs().iter().map(|v| self.reduce(f, v)).collect();
        let red = Matrix::from_rows(self.ambient, &reduced).transpose();
        let ker = kernel(f, &red);
        let vecs: Vec<Vec<FpScalar>> =
            ker.basis.row_vecs().iter().map(|c| other.combine(f, c)).collect();
        Subspace::span(f, self.ambient, &vecs)
    }

    /// Image `A(self)`; `A` acts on columns.
    pub fn image_under(&self, f: PrimeField, a: &Matrix) -> Subspace {
        assert_eq!(a.cols(), self.ambient, "image_under shape mismatch");
        let imgs: Vec<Vec<FpScalar>> = self.basis.row_vecs().iter().map(|v| a.apply(f, v)).collect();
        Subspace::span(f, a.rows(), &imgs)
    }

    /// Preimage `{x : A x ∈ self}`.
    pub fn preimage_under(&self, f: PrimeField, a: &Matrix) -> Subspace {
        assert_eq!(a.rows(), self.ambient, "preimage_under shape mismatch");
        let cols: Vec<Vec<FpScalar>> =
            (0..a.cols()).map(|c| self.reduce(f, &a.column(c))).collect();
        kernel(f, &Matrix::from_columns(self.ambient, &cols))
    }

    /// Basis of a complement of `small` inside `self`, reduced modulo `small`.
    pub fn complement_of(&self, f: PrimeField, small: &Subspace) -> Matrix {
        let reduced: Vec<Vec<FpScalar>> =
            self.basis.row_vecs().iter().map(|v| small.reduce(f, v)).collect();
        Matrix::from_rows(self.ambient, &reduced).rref(f).0
    }
}

/// A subquotient `big / small` with fixed coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub big: Subspace,
    pub small: Subspace,
    complement: Matrix,
    comp_pivots: Vec<usize>,
}

impl Quotient {
    pub fn new(f: PrimeField, big: Subspace, small: Subspace) -> Result<Self, LinError> {
        if !small.is_subspace_of(f, &big) {
            return Err(LinError::NotCompatible("small is not contained in big".into()));
        }
        let complement = big.complement_of(f, &small);
        let comp_pivots = complement.rref(f).1;
        Ok(Self { big, small, complement, comp_pivots })
    }

    pub fn dim(&self) -> usize {
        self.complement.rows()
    }

    pub fn ambient(&self) -> usize {
        self.big.ambient()
    }

    /// Representatives of the quotient basis (rows).
    pub fn representatives(&self) -> &Matrix {
        &self.complement
    }

    pub fn lift(&self, f: PrimeField, coords: &[FpScalar]) -> Vec<FpScalar> {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec![0; self.ambient()];
        for (r, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = f.add(*slot, f.mul(c, self.complement.get(r, j)));
            }
        }
        out
    }

    /// Quotient coordinates of `v ∈ big`, or `None` if `v ∉ big`.
    pub fn coords(&self, f: PrimeField, v: &[FpScalar]) -> Option<Vec<FpScalar>> {
        let y = self.small.reduce(f, v);
        let c: Vec<FpScalar> = self.comp_pivots.iter().map(|&j| y[j]).collect();
        let back = self.lift(f, &c);
        if back == y {
            Some(c)
        } else {
            None
        }
    }
}

/// Kernel of `A` acting on column vectors.
pub(crate) fn kernel(f: PrimeField, a: &Matrix) -> Subspace {
    let n = a.cols();
    let (r, pivots) = a.rref(f);
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut vecs = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; n];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(row, free));
        }
        vecs.push(v);
    }
    Subspace::span(f, n, &vecs)
}

/// Rank, kernel and column-space image of `A`.
pub fn rank_kernel_image(f: PrimeField, a: &Matrix) -> (usize, Subspace, Subspace) {
    let ker = kernel(f, a);
    let img = Subspace::row_span(f, &a.transpose());
    (img.dim(), ker, img)
}

/// Matrix of the map `src.0/src.1 → dst.0/dst.1` induced by `A`.
pub fn subquotient_map(
    f: PrimeField,
    a: &Matrix,
    src: &Quotient,
    dst: &Quotient,
) -> Result<Matrix, LinError> {
    if a.cols() != src.ambient() || a.rows() != dst.ambient() {
        return Err(LinError::DimensionMismatch(format!(
            "map is {}x{}, subquotients live in {} and {}",
            a.rows(),
            a.cols(),
            src.ambient(),
            dst.ambient()
        )));
    }
    if !src.big.image_under(f, a).is_subspace_of(f, &dst.big) {
        return Err(LinError::NotCompatible("A(src.big) is not inside dst.big".into()));
    }
    if !src.small.image_under(f, a).is_subspace_of(f, &dst.small) {
        return Err(LinError::NotCompatible("A(src.small) is not inside dst.small".into()));
    }
    let cols: Vec<Vec<FpScalar>> = src
        .representatives()
        .row_vecs()
        .iter()
        .map(|v| dst.coords(f, &a.apply(f, v)).expect("image lies in dst.big"))
        .collect();
    Ok(Matrix::from_columns(dst.dim(), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let f = f5();
        let a = Matrix::from_rows_i64(f, 2, &[vec![1, 2], vec![2, 4]]).unwrap();
        let (rank, ker, img) = rank_kernel_image(f, &a);
        assert_eq!(rank, 1);
        assert_eq!(ker.dim(), 1);
        assert!(ker.contains(f, &[3, 1]));
        assert!(img.contains(f, &[1, 2]));
    }

    #[test]
    fn identity_and_zero() {
        let f = f5();
        let (rank, ker, _) = rank_kernel_image(f, &Matrix::identity(2));
        assert_eq!((rank, ker.dim()), (2, 0));
        let (rank, ker, img) = rank_kernel_image(f, &Matrix::zeros(3, 2));
        assert_eq!((rank, ker.dim(), img.dim()), (0, 2, 0));
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        let f = f5();
        let (rank, ker, img) = rank_kernel_image(f, &Matrix::zeros(0, 0));
        assert_eq!((rank, ker.dim(), img.dim()), (0, 0, 0));
    }

    #[test]
    fn nilpotent_induces_zero_on_quotient() {
        let f = f5();
        let a = Matrix::from_rows_i64(f, 2, &[vec![0, 1], vec![0, 0]]).unwrap();
        let q = Quotient::new(f, Subspace::full(2), Subspace::coordinate(2, &[0])).unwrap();
        let m = subquotient_map(f, &a, &q, &q).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert!(m.is_zero());
        let q2 = Quotient::new(f, Subspace::full(2), Subspace::zero(2)).unwrap();
        assert_eq!(subquotient_map(f, &Matrix::identity(2), &q2, &q2).unwrap(), Matrix::identity(2));
        let id1 = subquotient_map(f, &Matrix::identity(2), &q, &q).unwrap();
        assert_eq!(id1, Matrix::identity(1));
    }

    #[test]
    fn incompatible_pair_is_rejected() {
        let f = f5();
        let a = Matrix::from_rows_i64(f, 2, &[vec![0, 0], vec![1, 0]]).unwrap();
        let q = Quotient::new(f, Subspace::full(2), Subspace::coordinate(2, &[0])).unwrap();
        assert!(matches!(subquotient_map(f, &a, &q, &q), Err(LinError::NotCompatible(_))));
    }

    #[test]
    fn preimage_and_intersection() {
        let f = f5();
        let a = Matrix::from_rows_i64(f, 2, &[vec![1, 1], vec![0, 0]]).unwrap();
        let line = Subspace::coordinate(2, &[1]);
        let pre = line.preimage_under(f, &a);
        assert_eq!(pre.dim(), 1);
        assert!(pre.contains(f, &[1, 4]));
        let diag = Subspace::span(f, 2, &[vec![1, 1]]);
        assert_eq!(diag.intersect(f, &line).dim(), 0);
        assert_eq!(diag.sum(f, &line).dim(), 2);
    }
}
