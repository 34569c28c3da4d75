use crate::{FpScalar, LinError, Matrix, PrimeField, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `F_l ⊆ F_{l+1}`.
    Increasing,
    /// `F^l ⊇ F^{l+1}`.
    Decreasing,
}

/// A finite flag of subspaces indexed by `lo ..= lo + steps.len() - 1`.
///
/// Outside the stored range an increasing flag is zero below and equal to
/// its last step above; a decreasing flag equals its first step below and is
/// zero above.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flag {
    direction: Direction,
    lo: i64,
    steps: Vec<Subspace>,
    ambient: usize,
}

/// Evidence that a filtered map is not strict at level `level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictnessWitness {
    pub level: i64,
    /// A vector of `f(V) ∩ F^level W` outside `f(F^level V)`.
    pub target: Vec<FpScalar>,
    /// A preimage of `target`, chosen in the deepest source step that has one.
    pub source: Vec<FpScalar>,
    /// The filtration level of `source`.
    pub source_level: i64,
}

impl Flag {
    pub fn new(
        f: PrimeField,
        direction: Direction,
        lo: i64,
        steps: Vec<Subspace>,
    ) -> Result<Self, LinError> {
        let ambient = steps.first().map(|s| s.ambient()).unwrap_or(0);
        for (k, w) in steps.windows(2).enumerate() {
            if w[0].ambient() != w[1].ambient() {
                return Err(LinError::DimensionMismatch("flag steps in different spaces".into()));
            }
            let ok = match direction {
                Direction::Increasing => w[0].is_subspace_of(f, &w[1]),
                Direction::Decreasing => w[1].is_subspace_of(f, &w[0]),
            };
            if !ok {
                return Err(LinError::NotMonotone(k));
            }
        }
        Ok(Self { direction, lo, steps, ambient })
    }

    /// The flag with a single jump: everything at level `l ≥ at` (increasing)
    /// or `l ≤ at` (decreasing).
    pub fn trivial(ambient: usize, direction: Direction, at: i64) -> Self {
        Self { direction, lo: at, steps: vec![Subspace::full(ambient)], ambient }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Lowest stored index.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored index.
    pub fn hi(&self) -> i64 {
        self.lo + self.steps.len() as i64 - 1
    }

    pub fn steps(&self) -> &[Subspace] {
        &self.steps
    }

    pub fn get(&self, l: i64) -> Subspace {
        if self.steps.is_empty() {
            return Subspace::zero(self.ambient);
        }
        if l < self.lo {
            return match self.direction {
                Direction::Increasing => Subspace::zero(self.ambient),
                Direction::Decreasing => self.steps[0].clone(),
            };
        }
        if l > self.hi() {
            return match self.direction {
                Direction::Increasing => self.steps.last().unwrap().clone(),
                Direction::Decreasing => Subspace::zero(self.ambient),
            };
        }
        self.steps[(l - self.lo) as usize].clone()
    }

    /// True when the flag starts at zero/full and ends at full/zero.
    pub fn is_exhaustive(&self, _f: PrimeField) -> bool {
        match self.direction {
            Direction::Increasing => {
                self.get(self.lo - 1).is_zero() && self.get(self.hi()).dim() == self.ambient
            }
            Direction::Decreasing => {
                self.get(self.lo).dim() == self.ambient && self.get(self.hi() + 1).is_zero()
            }
        }
    }

    /// Levels at which the flag can change, padded by one on each side.
    pub fn level_range(&self) -> std::ops::RangeInclusive<i64> {
        (self.lo - 1)..=(self.hi() + 1)
    }

    /// The flag induced on a subspace `S`: steps `F ∩ S`, in coordinates of `S`.
    pub fn restrict_to(&self, f: PrimeField, s: &Subspace) -> Flag {
        let steps = self
            .steps
            .iter()
            .map(|st| {
                let inter = st.intersect(f, s);
                let coords: Vec<Vec<FpScalar>> = inter
                    .basis_vectors()
                    .iter()
                    .map(|v| s.coords(f, v).expect("intersection lies in S"))
                    .collect();
                Subspace::span(f, s.dim(), &coords)
            })
            .collect();
        Flag { direction: self.direction, lo: self.lo, steps, ambient: s.dim() }
    }

    /// The image flag under `A`: steps `A(F)`.
    pub fn image_under(&self, f: PrimeField, a: &Matrix) -> Flag {
        let steps = self.steps.iter().map(|st| st.image_under(f, a)).collect();
        Flag { direction: self.direction, lo: self.lo, steps, ambient: a.rows() }
    }

    /// Whether `A(F_src) ⊆ F_dst` at every level.
    pub fn is_filtered_map(f: PrimeField, a: &Matrix, src: &Flag, dst: &Flag) -> bool {
        let lo = src.lo.min(dst.lo) - 1;
        let hi = src.hi().max(dst.hi()) + 1;
        (lo..=hi).all(|l| src.get(l).image_under(f, a).is_subspace_of(f, &dst.get(l)))
    }

    /// Checks `A(F^l src) = A(src) ∩ F^l dst` for every `l`.
    pub fn strictness(
        f: PrimeField,
        a: &Matrix,
        src: &Flag,
        dst: &Flag,
    ) -> Result<(), StrictnessWitness> {
        let lo = src.lo.min(dst.lo) - 1;
        let hi = src.hi().max(dst.hi()) + 1;
        let whole = Subspace::full(a.cols()).image_under(f, a);
        for l in lo..=hi {
            let hit = src.get(l).image_under(f, a);
            let allowed = whole.intersect(f, &dst.get(l));
            if hit.dim() == allowed.dim() && hit.is_subspace_of(f, &allowed) {
                continue;
            }
            let target = allowed
                .basis_vectors()
                .into_iter()
                .find(|v| !hit.contains(f, v))
                .unwrap_or_else(|| vec![0; a.rows()]);
            let (source, source_level) = deepest_preimage(f, a, src, &target, lo, hi);
            return Err(StrictnessWitness { level: l, target, source, source_level });
        }
        Ok(())
    }
}

fn deepest_preimage(
    f: PrimeField,
    a: &Matrix,
    src: &Flag,
    target: &[FpScalar],
    lo: i64,
    hi: i64,
) -> (Vec<FpScalar>, i64) {
    let levels: Vec<i64> = match src.direction {
        Direction::Decreasing => (lo..=hi).rev().collect(),
        Direction::Increasing => (lo..=hi).collect(),
    };
    for l in levels {
        let step = src.get(l);
        if step.is_zero() {
            continue;
        }
        // Solve A B c = target over the step basis B.
        let b = step.basis().transpose();
        let ab = a.mul(f, &b);
        if let Some(c) = solve(f, &ab, target) {
            return (step.combine(f, &c), l);
        }
    }
    (vec![0; a.cols()], lo)
}

/// Some solution of `M c = y`, if any.
pub fn solve(f: PrimeField, m: &Matrix, y: &[FpScalar]) -> Option<Vec<FpScalar>> {
    let col = Matrix::from_columns(m.rows(), &[y.to_vec()]);
    let aug = m.hstack(&col);
    let (r, piv) = aug.rref(f);
    if piv.last() == Some(&m.cols()) {
        return None;
    }
    let mut c = vec![0; m.cols()];
    for (row, &pc) in piv.iter().enumerate() {
        c[pc] = r.get(row, m.cols());
    }
    Some(c)
}
