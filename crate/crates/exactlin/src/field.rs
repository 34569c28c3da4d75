use crate::LinError;

/// A residue in `[0, p)`. The modulus lives in the [`PrimeField`] context.
pub type FpScalar = u32;

/// Arithmetic context for `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LinError> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(LinError::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn reduce(self, x: i64) -> FpScalar {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn add(self, a: FpScalar, b: FpScalar) -> FpScalar {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    pub fn sub(self, a: FpScalar, b: FpScalar) -> FpScalar {
        self.add(a, self.neg(b))
    }

    pub fn neg(self, a: FpScalar) -> FpScalar {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: FpScalar, b: FpScalar) -> FpScalar {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: FpScalar, mut e: u64) -> FpScalar {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: FpScalar) -> FpScalar {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// `a` as a signed representative in `(-p/2, p/2]`, for display.
    pub fn signed(self, a: FpScalar) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(2).is_ok());
    }

    #[test]
    fn inverses_mod_seven() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.reduce(-1), 6);
        assert_eq!(f.signed(6), -1);
    }
}
