/// A residue modulo `p²`.
pub type ZpSqScalar = u64;

/// Arithmetic context for `Z/p²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZpSqRing {
    p: u64,
}

impl ZpSqRing {
    pub fn new(p: u32) -> Self {
        Self { p: p as u64 }
    }

    pub fn modulus(self) -> u64 {
        self.p * self.p
    }

    pub fn reduce(self, x: i64) -> ZpSqScalar {
        x.rem_euclid(self.modulus() as i64) as u64
    }

    pub fn add(self, a: ZpSqScalar, b: ZpSqScalar) -> ZpSqScalar {
        (a + b) % self.modulus()
    }

    pub fn sub(self, a: ZpSqScalar, b: ZpSqScalar) -> ZpSqScalar {
        (a + self.modulus() - b % self.modulus()) % self.modulus()
    }

    pub fn mul(self, a: ZpSqScalar, b: ZpSqScalar) -> ZpSqScalar {
        (a * b) % self.modulus()
    }

    /// The reduction `Z/p² → F_p`.
    pub fn to_fp(self, a: ZpSqScalar) -> u32 {
        (a % self.p) as u32
    }

    /// The element `p·a` for a residue `a` mod `p`.
    pub fn times_p(self, a: u32) -> ZpSqScalar {
        (a as u64 % self.p) * self.p
    }

    /// Divides an element of `pZ/p²` by `p`; `None` if it is not divisible.
    pub fn div_p(self, a: ZpSqScalar) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            Some((a / self.p) as u32)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_is_a_ring_map() {
        let r = ZpSqRing::new(5);
        for a in 0..25 {
            for b in 0..25 {
                let (fa, fb) = (r.to_fp(a) as u64, r.to_fp(b) as u64);
                assert_eq!(r.to_fp(r.mul(a, b)) as u64, fa * fb % 5);
                assert_eq!(r.to_fp(r.add(a, b)) as u64, (fa + fb) % 5);
            }
        }
    }

    #[test]
    fn divide_by_p() {
        let r = ZpSqRing::new(3);
        assert_eq!(r.div_p(r.times_p(2)), Some(2));
        assert_eq!(r.div_p(4), None);
    }
}
