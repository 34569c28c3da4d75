use crate::{LinError, Matrix, PrimeField, Quotient, Subspace};

/// A bounded cochain complex of finite-dimensional `F_p` spaces, living in
/// degrees `lo .. lo + dims.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    lo: i64,
    dims: Vec<usize>,
    /// `diffs[k] : C^{lo+k} → C^{lo+k+1}`; one fewer than `dims`.
    diffs: Vec<Matrix>,
}

impl Complex {
    pub fn new(f: PrimeField, lo: i64, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self, LinError> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(LinError::DimensionMismatch(format!(
                "{} spaces need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(LinError::DimensionMismatch(format!("differential {k} has wrong shape")));
            }
        }
        for (k, w) in diffs.windows(2).enumerate() {
            if !w[1].mul(f, &w[0]).is_zero() {
                return Err(LinError::DimensionMismatch(format!("d∘d ≠ 0 at degree {}", lo + k as i64)));
            }
        }
        Ok(Self { lo, dims, diffs })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn dim(&self, q: i64) -> usize {
        if q < self.lo || q > self.hi() {
            0
        } else {
            self.dims[(q - self.lo) as usize]
        }
    }

    /// `d : C^q → C^{q+1}`, zero outside the stored range.
    pub fn d(&self, q: i64) -> Matrix {
        if q >= self.lo && q < self.hi() {
            self.diffs[(q - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.dim(q + 1), self.dim(q))
        }
    }

    pub fn cycles(&self, f: PrimeField, q: i64) -> Subspace {
        Subspace::zero(self.dim(q + 1)).preimage_under(f, &self.d(q))
    }

    pub fn boundaries(&self, f: PrimeField, q: i64) -> Subspace {
        Subspace::full(self.dim(q - 1)).image_under(f, &self.d(q - 1))
    }

    pub fn cohomology(&self, f: PrimeField, q: i64) -> Quotient {
        Quotient::new(f, self.cycles(f, q), self.boundaries(f, q)).expect("d∘d = 0")
    }

    /// `(degree, dim H^q)` for every stored degree.
    pub fn cohomology_dims(&self, f: PrimeField) -> Vec<(i64, usize)> {
        self.degrees().map(|q| (q, self.cohomology(f, q).dim())).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|q| if q.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(q) as i64).sum()
    }

    /// Cohomology of a subcomplex given by one subspace per degree
    /// (`sub(q)` must satisfy `d(sub(q)) ⊆ sub(q+1)`).
    pub fn sub_cohomology(&self, f: PrimeField, q: i64, sub: &dyn Fn(i64) -> Subspace) -> Quotient {
        let s = sub(q);
        let z = self.cycles(f, q).intersect(f, &s);
        let b = sub(q - 1).image_under(f, &self.d(q - 1));
        Quotient::new(f, z, b).expect("subcomplex is d-stable")
    }

    /// The complex `C^q = big_q / small_q` induced on subquotients, in
    /// quotient coordinates. Fails if `d` does not respect the pairs.
    pub fn subquotient(
        &self,
        f: PrimeField,
        pairs: &dyn Fn(i64) -> (Subspace, Subspace),
    ) -> Result<(Complex, Vec<Quotient>), LinError> {
        let quots: Vec<Quotient> = self
            .degrees()
            .map(|q| {
                let (b, s) = pairs(q);
                Quotient::new(f, b, s)
            })
            .collect::<Result<_, _>>()?;
        let mut diffs = Vec::new();
        for k in 0..quots.len().saturating_sub(1) {
            let q = self.lo + k as i64;
            diffs.push(crate::subquotient_map(f, &self.d(q), &quots[k], &quots[k + 1])?);
        }
        let dims = quots.iter().map(|q| q.dim()).collect();
        Ok((Complex::new(f, self.lo, dims, diffs)?, quots))
    }

    /// Canonical truncation `τ_{<t}`: `C^q` for `q < t-1`, `ker d` in degree
    /// `t-1`, zero above. Returns the complex and, per degree, the subspace of
    /// the original space it occupies.
    pub fn truncate_below(&self, f: PrimeField, t: i64) -> (Complex, Vec<Subspace>) {
        let top = t - 1;
        let hi = self.hi().min(top);
        if hi < self.lo {
            return (Complex { lo: self.lo, dims: vec![0], diffs: vec![] }, vec![Subspace::zero(self.dim(self.lo))]);
        }
        let spaces: Vec<Subspace> = (self.lo..=hi)
            .map(|q| if q == top { self.cycles(f, q) } else { Subspace::full(self.dim(q)) })
            .collect();
        let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
        let mut diffs = Vec::new();
        for k in 0..spaces.len().saturating_sub(1) {
            let q = self.lo + k as i64;
            let d = self.d(q);
            let cols: Vec<Vec<u32>> = spaces[k]
                .basis_vectors()
                .iter()
                .map(|v| spaces[k + 1].coords(f, &d.apply(f, v)).expect("image of d is a cycle"))
                .collect();
            diffs.push(Matrix::from_columns(dims[k + 1], &cols));
        }
        (Complex::new(f, self.lo, dims, diffs).expect("truncation is a complex"), spaces)
    }
}

/// Matrix of the map on `H^q` induced by a chain map with component `a`.
pub fn induced_on_cohomology(
    f: PrimeField,
    a: &Matrix,
    src: &Quotient,
    dst: &Quotient,
) -> Result<Matrix, LinError> {
    crate::subquotient_map(f, a, src, dst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn acyclic_two_term_complex() {
        let f = f5();
        let c = Complex::new(f, 0, vec![1, 1], vec![Matrix::identity(1)]).unwrap();
        assert_eq!(c.cohomology_dims(f), vec![(0, 0), (1, 0)]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn rejects_non_complex() {
        let f = f5();
        let r = Complex::new(f, 0, vec![1, 1, 1], vec![Matrix::identity(1), Matrix::identity(1)]);
        assert!(r.is_err());
    }

    #[test]
    fn truncation_keeps_low_cohomology() {
        let f = f5();
        let d0 = Matrix::from_rows_i64(f, 1, &[vec![1], vec![0]]).unwrap();
        let d1 = Matrix::from_rows_i64(f, 2, &[vec![0, 1]]).unwrap();
        let c = Complex::new(f, 0, vec![1, 2, 1], vec![d0, d1]).unwrap();
        assert_eq!(c.cohomology_dims(f), vec![(0, 0), (1, 0), (2, 0)]);
        let (t, spaces) = c.truncate_below(f, 2);
        assert_eq!(t.hi(), 1);
        assert_eq!(spaces[1].dim(), 1);
        assert_eq!(t.cohomology_dims(f), vec![(0, 0), (1, 0)]);
        // Truncating at 1 leaves ker d⁰ in degree 0.
        let (t1, _) = c.truncate_below(f, 1);
        assert_eq!(t1.dim(0), 0);
        // A long truncation changes nothing.
        let (t9, _) = c.truncate_below(f, 9);
        assert_eq!(t9, c);
    }
}
