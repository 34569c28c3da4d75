use crate::SplitError;
use exactlin::PrimeField;
use logdr::FormSum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use toricgeom::{dual_basis, pair, Character, Fan};

/// Per chart, the perturbation polynomial of each chart coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobLift {
    charts: Vec<BTreeMap<usize, FormSum>>,
}

impl FrobLift {
    /// All perturbations zero: `F̃(x^m) = x^{pm}` on every chart.
    pub fn canonical(fan: &Fan) -> Self {
        Self { charts: vec![BTreeMap::new(); fan.max_cones().len()] }
    }

    pub fn with(mut self, chart: usize, ray: usize, poly: FormSum) -> Self {
        self.set(chart, ray, poly);
        self
    }

    pub fn set(&mut self, chart: usize, ray: usize, poly: FormSum) {
        if chart >= self.charts.len() {
            self.charts.resize(chart + 1, BTreeMap::new());
        }
        if poly.is_zero() {
            self.charts[chart].remove(&ray);
        } else {
            self.charts[chart].insert(ray, poly);
        }
    }

    pub fn perturbation(&self, chart: usize, ray: usize) -> FormSum {
        self.charts.get(chart).and_then(|c| c.get(&ray)).cloned().unwrap_or_default()
    }

    /// `(chart, ray, polynomial)` for every nonzero perturbation.
    pub fn perturbations(&self) -> impl Iterator<Item = (usize, usize, &FormSum)> {
        self.charts.iter().enumerate().flat_map(|(c, m)| m.iter().map(move |(r, p)| (c, *r, p)))
    }

    pub fn charts(&self) -> usize {
        self.charts.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.charts.iter().all(BTreeMap::is_empty)
    }

    /// Random regular perturbations of total degree `≤ max_degree` in the
    /// chart coordinates, reproducible from `seed`.
    pub fn random(f: PrimeField, fan: &Fan, seed: u64, max_degree: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lift = Self::canonical(fan);
        for (chart, cone) in fan.max_cones().iter().enumerate() {
            let basis = dual_basis(fan, chart);
            let exps = exponents(cone.len(), max_degree);
            for &ray in cone {
                let mut poly = FormSum::zero();
                for e in &exps {
                    if rng.gen_bool(0.4) {
                        let c = rng.gen_range(0..f.p());
                        let m: Character = (0..fan.rank())
                            .map(|k| e.iter().zip(&basis).map(|(a, b)| *a as i64 * b[k]).sum())
                            .collect();
                        poly.add_term(f, m, 0, c);
                    }
                }
                lift.set(chart, ray, poly);
            }
        }
        lift
    }
}

fn exponents(n: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u32 = e.iter().sum();
                (0..=max_degree - used).map(move |x| [e.clone(), vec![x]].concat())
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    pub charts: usize,
    pub perturbed_coordinates: usize,
    pub canonical: bool,
}

/// Checks that every perturbation is a regular function on its chart.
pub fn validate_lift(fan: &Fan, lift: &FrobLift) -> Result<LiftReport, SplitError> {
    let want = fan.max_cones().len();
    if lift.charts() != want {
        return Err(SplitError::ChartCount { got: lift.charts(), want });
    }
    for (chart, ray, poly) in lift.perturbations() {
        let cone = &fan.max_cones()[chart];
        if !cone.contains(&ray) {
            return Err(SplitError::NotInChart { chart, ray });
        }
        if poly.degrees().iter().any(|&d| d != 0) {
            return Err(SplitError::NotAFunction { chart, ray });
        }
        if let Some(m) = poly.weights().into_iter().find(|m| cone.iter().any(|&r| pair(m, fan.ray(r)) < 0)) {
            return Err(SplitError::NotRegular { chart, ray, weight: m });
        }
    }
    Ok(LiftReport {
        charts: want,
        perturbed_coordinates: lift.perturbations().count(),
        canonical: lift.is_canonical(),
    })
}
