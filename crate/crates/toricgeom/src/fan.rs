use crate::{pair, Character, GeomError};
use std::collections::{BTreeMap, BTreeSet};

/// A fan in `N ≅ Z^n` given by primitive rays and maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub rank: usize,
    pub rays: usize,
    pub max_cones: usize,
    /// `dim X < p`; when false the truncation `τ_{<p}` is not the identity.
    pub dim_below_p: bool,
}

impl Fan {
    /// Checks shapes, ray primitivity and index ranges. Smoothness and
    /// completeness are checked by [`validate`].
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self, GeomError> {
        for (index, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(GeomError::BadRayLength { index, got: r.len(), rank });
            }
            if r.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
                return Err(GeomError::NotPrimitive { index, ray: r.clone() });
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (cone, c) in max_cones.iter().enumerate() {
            if let Some(&ray) = c.iter().find(|&&r| r >= rays.len()) {
                return Err(GeomError::BadRayIndex { cone, ray });
            }
            let mut s = c.clone();
            s.sort_unstable();
            s.dedup();
            cones.push(s);
        }
        Ok(Self { rank, rays, max_cones: cones })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Ray set of the common face of the listed maximal cones.
    pub fn common_face(&self, charts: &[usize]) -> Vec<usize> {
        let mut it = charts.iter();
        let Some(&first) = it.next() else {
            return Vec::new();
        };
        let mut acc: BTreeSet<usize> = self.max_cones[first].iter().copied().collect();
        for &c in it {
            let other: BTreeSet<usize> = self.max_cones[c].iter().copied().collect();
            acc = acc.intersection(&other).copied().collect();
        }
        acc.into_iter().collect()
    }

    /// Index of the first maximal cone containing every listed ray.
    pub fn cone_containing(&self, rays: &[usize]) -> Option<usize> {
        self.max_cones.iter().position(|c| rays.iter().all(|r| c.contains(r)))
    }

    /// `P^n` with rays `e_1, …, e_n, -(e_1+…+e_n)`. Cone `k` omits ray
    /// `(k + n) mod (n + 1)`, so cone 0 is the positive orthant.
    pub fn projective_space(n: usize) -> Self {
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n)
            .map(|c| {
                let skip = (c + n) % (n + 1);
                (0..=n).filter(|&k| k != skip).collect()
            })
            .collect();
        Self::new(n, rays, cones).expect("standard fan")
    }

    /// The Hirzebruch surface with rays `(1,0), (0,1), (-1,a), (0,-1)`.
    pub fn hirzebruch(a: i64) -> Self {
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]];
        let cones = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
        Self::new(2, rays, cones).expect("standard fan")
    }

    /// Product fan; rays of `self` come first.
    pub fn product(&self, other: &Fan) -> Self {
        let n = self.rank + other.rank;
        let mut rays = Vec::new();
        for r in &self.rays {
            let mut v = r.clone();
            v.resize(n, 0);
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = vec![0; self.rank];
            v.extend_from_slice(r);
            rays.push(v);
        }
        let off = self.rays.len();
        let mut cones = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                let mut c = a.clone();
                c.extend(b.iter().map(|x| x + off));
                cones.push(c);
            }
        }
        Self::new(n, rays, cones).expect("product of valid fans")
    }
}

/// The dual basis `m_ρ` (`⟨m_ρ, v_ρ'⟩ = δ`) of a maximal cone, in the
/// cone's ray order. Panics if the cone is not unimodular.
pub fn dual_basis(fan: &Fan, cone: usize) -> Vec<Character> {
    let rays = &fan.max_cones[cone];
    let n = fan.rank;
    let cols: Vec<&[i64]> = rays.iter().map(|&r| fan.ray(r)).collect();
    // V has the rays as columns; the dual basis is the rows of V^{-1}.
    let v: Vec<Vec<i128>> = (0..n).map(|i| cols.iter().map(|c| c[i] as i128).collect()).collect();
    let det = det_i128(&v);
    assert!(det == 1 || det == -1, "cone {cone} is not unimodular");
    let mut out = vec![vec![0i64; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            // (V^{-1})_{ij} = cofactor_{ji} / det.
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| v[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            *slot = (sign * det_i128(&minor) * det) as i64;
        }
    }
    for (a, m) in out.iter().enumerate() {
        for (b, c) in cols.iter().enumerate() {
            debug_assert_eq!(pair(m, c), i64::from(a == b));
        }
    }
    out
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut acc = 0;
    for c in 0..n {
        if m[0][c] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect()).collect();
        let sign = if c % 2 == 0 { 1 } else { -1 };
        acc += sign * m[0][c] * det_i128(&minor);
    }
    acc
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Confirms smoothness and the facet-pairing completeness proxy.
pub fn validate(fan: &Fan, p: u32) -> Result<ValidityReport, GeomError> {
    let n = fan.rank;
    for (cone, c) in fan.max_cones.iter().enumerate() {
        if c.len() != n {
            return Err(GeomError::NotSmooth { cone, det: 0 });
        }
        let v: Vec<Vec<i128>> =
            (0..n).map(|i| c.iter().map(|&r| fan.rays[r][i] as i128).collect()).collect();
        let det = det_i128(&v);
        if det.abs() != 1 {
            return Err(GeomError::NotSmooth { cone, det: det as i64 });
        }
    }
    if fan.max_cones.is_empty() {
        return Err(GeomError::NotComplete("no maximal cones".into()));
    }
    let mut facets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, c) in fan.max_cones.iter().enumerate() {
        for skip in 0..c.len() {
            let facet: Vec<usize> = c.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &r)| r).collect();
            facets.entry(facet).or_default().push(ci);
        }
    }
    let mut adj = vec![Vec::new(); fan.max_cones.len()];
    for (facet, owners) in &facets {
        if owners.len() != 2 {
            return Err(GeomError::NotComplete(format!(
                "facet {facet:?} lies in {} maximal cones, expected 2",
                owners.len()
            )));
        }
        adj[owners[0]].push(owners[1]);
        adj[owners[1]].push(owners[0]);
    }
    let mut seen = vec![false; fan.max_cones.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for &d in &adj[c] {
            if !seen[d] {
                seen[d] = true;
                stack.push(d);
            }
        }
    }
    if let Some(lost) = seen.iter().position(|&s| !s) {
        return Err(GeomError::NotComplete(format!("cone {lost} is not connected to cone 0")));
    }
    Ok(ValidityReport {
        rank: n,
        rays: fan.rays.len(),
        max_cones: fan.max_cones.len(),
        dim_below_p: (n as u64) < p as u64,
    })
}

/// The boundary divisor `D`, a set of ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DivisorSet {
    rays: BTreeSet<usize>,
}

impl DivisorSet {
    pub fn new(fan: &Fan, rays: &[usize]) -> Result<Self, GeomError> {
        if let Some(&bad) = rays.iter().find(|&&r| r >= fan.rays.len()) {
            return Err(GeomError::BadDivisorRay(bad));
        }
        Ok(Self { rays: rays.iter().copied().collect() })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(fan: &Fan) -> Self {
        Self { rays: (0..fan.rays.len()).collect() }
    }

    pub fn contains(&self, ray: usize) -> bool {
        self.rays.contains(&ray)
    }

    pub fn rays(&self) -> Vec<usize> {
        self.rays.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }
}

/// The divisor `E = Σ a_ρ D_ρ` of the line bundle `L = O(E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twist {
    coeffs: Vec<i64>,
}

impl Twist {
    pub fn new(fan: &Fan, coeffs: Vec<i64>) -> Result<Self, GeomError> {
        if coeffs.len() != fan.rays.len() {
            return Err(GeomError::BadTwist { got: coeffs.len(), rays: fan.rays.len() });
        }
        Ok(Self { coeffs })
    }

    pub fn zero(fan: &Fan) -> Self {
        Self { coeffs: vec![0; fan.rays.len()] }
    }

    pub fn coeff(&self, ray: usize) -> i64 {
        self.coeffs[ray]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0)
    }

    pub fn max_abs(&self) -> i64 {
        self.coeffs.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    /// Characters `m_σ` with `⟨m_σ, v_ρ⟩ = -a_ρ` for `ρ ∈ σ`, one per maximal cone.
    pub fn local_characters(&self, fan: &Fan) -> Vec<Character> {
        (0..fan.max_cones.len())
            .map(|ci| {
                let basis = dual_basis(fan, ci);
                let mut m = vec![0; fan.rank];
                for (k, &r) in fan.max_cones[ci].iter().enumerate() {
                    for (slot, b) in m.iter_mut().zip(&basis[k]) {
                        *slot -= self.coeffs[r] * b;
                    }
                }
                m
            })
            .collect()
    }

    /// Strict convexity of the support function on a complete fan.
    pub fn is_ample(&self, fan: &Fan) -> bool {
        let locals = self.local_characters(fan);
        fan.max_cones.iter().zip(&locals).all(|(cone, m)| {
            (0..fan.rays.len())
                .filter(|r| !cone.contains(r))
                .all(|r| pair(m, &fan.rays[r]) > -self.coeffs[r])
        })
    }
}
