use crate::{dual_basis, pair, Character, DivisorSet, Fan, GeomError};

/// A toric morphism given by a lattice map `N_src → N_dst`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricMorphism {
    /// `dst_rank × src_rank` integer matrix.
    pub lattice_map: Vec<Vec<i64>>,
    pub source: Fan,
    pub target: Fan,
}

impl ToricMorphism {
    pub fn new(lattice_map: Vec<Vec<i64>>, source: Fan, target: Fan) -> Result<Self, GeomError> {
        let rows = lattice_map.len();
        let cols = lattice_map.first().map_or(source.rank(), |r| r.len());
        if rows != target.rank() || cols != source.rank() || lattice_map.iter().any(|r| r.len() != cols) {
            return Err(GeomError::BadLatticeMap {
                rows,
                cols,
                want_rows: target.rank(),
                want_cols: source.rank(),
            });
        }
        Ok(Self { lattice_map, source, target })
    }

    pub fn identity(fan: &Fan) -> Self {
        let n = fan.rank();
        let a = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Self { lattice_map: a, source: fan.clone(), target: fan.clone() }
    }

    /// `A v` for `v ∈ N_src`.
    pub fn push_forward(&self, v: &[i64]) -> Vec<i64> {
        self.lattice_map.iter().map(|row| pair(row, v)).collect()
    }

    /// `Aᵀ m`: the character `f^* x^m` of the source torus.
    pub fn pull_back(&self, m: &[i64]) -> Character {
        (0..self.source.rank())
            .map(|j| self.lattice_map.iter().zip(m).map(|(row, &x)| row[j] * x).sum())
            .collect()
    }

    /// Coordinates of `A v_ρ` in the ray basis of target cone `beta`.
    fn coefficients(&self, ray: usize, beta: usize) -> Vec<i64> {
        let img = self.push_forward(self.source.ray(ray));
        dual_basis(&self.target, beta).iter().map(|m| pair(m, &img)).collect()
    }

    /// For each source chart `α`, the first target chart `χ(α)` whose cone
    /// contains the image of `σ_α`, so that `f(U_α) ⊆ V_{χ(α)}`.
    pub fn chart_assignment(&self) -> Result<Vec<usize>, GeomError> {
        (0..self.source.max_cones().len())
            .map(|alpha| {
                (0..self.target.max_cones().len())
                    .find(|&beta| {
                        self.source.max_cones()[alpha]
                            .iter()
                            .all(|&r| self.coefficients(r, beta).iter().all(|&c| c >= 0))
                    })
                    .ok_or(GeomError::NoChartAssignment(alpha))
            })
            .collect()
    }

    /// Checks `f^{-1}(E) ⊆ D`: a source ray outside `D` may not map onto a
    /// cone involving a ray of `E`.
    pub fn check_divisors(&self, d: &DivisorSet, e: &DivisorSet, chi: &[usize]) -> Result<(), GeomError> {
        for (alpha, &beta) in chi.iter().enumerate() {
            for &r in &self.source.max_cones()[alpha] {
                if d.contains(r) {
                    continue;
                }
                let coeffs = self.coefficients(r, beta);
                for (k, &t) in self.target.max_cones()[beta].iter().enumerate() {
                    if e.contains(t) && coeffs[k] != 0 {
                        return Err(GeomError::DivisorIncompatible { src_ray: r, dst_ray: t });
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_assigns_charts() {
        let p1 = Fan::projective_space(1);
        let q = p1.product(&p1);
        let f = ToricMorphism::new(vec![vec![1, 0]], q.clone(), p1.clone()).unwrap();
        let chi = f.chart_assignment().unwrap();
        assert_eq!(chi, vec![0, 0, 1, 1]);
        assert_eq!(f.pull_back(&[3]), vec![3, 0]);
        let full_src = DivisorSet::full(&q);
        let full_dst = DivisorSet::full(&p1);
        assert!(f.check_divisors(&full_src, &full_dst, &chi).is_ok());
        let fiber = DivisorSet::new(&q, &[2]).unwrap();
        assert!(matches!(
            f.check_divisors(&fiber, &full_dst, &chi),
            Err(GeomError::DivisorIncompatible { .. })
        ));
    }

    #[test]
    fn missing_target_cone() {
        let p1 = Fan::projective_space(1);
        let half = Fan::new(1, vec![vec![1]], vec![vec![0]]).unwrap();
        let f = ToricMorphism::new(vec![vec![1]], p1, half).unwrap();
        assert_eq!(f.chart_assignment(), Err(GeomError::NoChartAssignment(1)));
    }
}
