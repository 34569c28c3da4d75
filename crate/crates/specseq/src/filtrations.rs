use crate::pages::Spot;
use crate::{FilteredComplexFp, SpectralSequence};
use exactlin::{Direction, Flag, FpScalar, Matrix, PrimeField, StrictnessWitness, Subspace};
use std::collections::BTreeMap;

/// The direct, dual and recursive filtrations induced on one spot by the
/// second filtration, in the spot's quotient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpotFiltrations {
    pub direct: Flag,
    pub dual: Flag,
    pub recursive: Flag,
}

impl SpotFiltrations {
    fn levels(&self) -> std::ops::RangeInclusive<i64> {
        self.direct.lo()..=self.direct.hi() + 1
    }

    /// `F_d ⊆ F_rec ⊆ F_{d*}` at every level.
    pub fn contained(&self, f: PrimeField) -> bool {
        self.levels().all(|l| {
            self.direct.get(l).is_subspace_of(f, &self.recursive.get(l))
                && self.recursive.get(l).is_subspace_of(f, &self.dual.get(l))
        })
    }

    /// First level where the three differ.
    pub fn first_difference(&self, f: PrimeField) -> Option<i64> {
        let same = |a: &Subspace, b: &Subspace| a.dim() == b.dim() && a.is_subspace_of(f, b);
        self.levels().find(|&l| {
            let (d, s, r) = (self.direct.get(l), self.dual.get(l), self.recursive.get(l));
            !(same(&d, &s) && same(&d, &r))
        })
    }
}

#[derive(Clone, Debug)]
pub struct ThreeFiltrations {
    pub r: usize,
    pub spots: BTreeMap<(i64, i64), SpotFiltrations>,
}

impl ThreeFiltrations {
    pub fn contained(&self, f: PrimeField) -> bool {
        self.spots.values().all(|s| s.contained(f))
    }

    pub fn coincide(&self, f: PrimeField) -> bool {
        self.spots.values().all(|s| s.first_difference(f).is_none())
    }

    /// `(spot, level)` of the first disagreement.
    pub fn first_difference(&self, f: PrimeField) -> Option<((i64, i64), i64)> {
        self.spots.iter().find_map(|(k, s)| s.first_difference(f).map(|l| (*k, l)))
    }
}

fn image_in_spot(f: PrimeField, spot: &Spot, s: &Subspace) -> Subspace {
    let vecs: Vec<Vec<FpScalar>> =
        s.basis_vectors().iter().map(|v| spot.space.coords(f, v).expect("vector of Z_r")).collect();
    Subspace::span(f, spot.dim(), &vecs)
}

fn level_range(k: &FilteredComplexFp, f: PrimeField, along: crate::Along) -> (i64, i64) {
    let flags: Vec<Flag> = k.complex().degrees().map(|n| k.second(f, along, n)).collect();
    let lo = flags.iter().map(Flag::lo).min().unwrap_or(0);
    let hi = flags.iter().map(Flag::hi).max().unwrap_or(0);
    (lo, hi)
}

fn flag_from(f: PrimeField, lo: i64, steps: Vec<Subspace>) -> Flag {
    Flag::new(f, Direction::Decreasing, lo, steps).expect("induced steps decrease")
}

/// `F_d`, `F_{d*}` and `F_rec` on every page `0..=r` of `ss`.
pub fn three_filtrations(f: PrimeField, k: &FilteredComplexFp, ss: &SpectralSequence, r: usize) -> Vec<ThreeFiltrations> {
    let along = ss.along;
    let (lo, hi) = level_range(k, f, along);
    let c = k.complex();
    let fil = |p: i64, n: i64| {
        if c.degrees().contains(&n) {
            k.decreasing(f, along, n).get(p)
        } else {
            Subspace::zero(c.dim(n))
        }
    };
    let second = |l: i64, n: i64| k.second(f, along, n).get(l);
    let z = |r: i64, p: i64, n: i64| -> Subspace {
        if r < 0 {
            return fil(p, n);
        }
        fil(p, n).intersect(f, &fil(p + r, n + 1).preimage_under(f, &c.d(n)))
    };
    let mut out: Vec<ThreeFiltrations> = Vec::new();
    for page in ss.pages.iter().take(r + 1) {
        let rr = page.r as i64;
        let mut spots = BTreeMap::new();
        for (&key, spot) in &page.spots {
            let (p, n) = (spot.p, spot.degree());
            let zr = z(rr, p, n);
            let beyond = fil(p + 1, n).sum(f, &z(rr - 1, p - rr + 1, n - 1).image_under(f, &c.d(n - 1)));
            let direct: Vec<Subspace> =
                (lo..=hi).map(|l| image_in_spot(f, spot, &zr.intersect(f, &second(l, n)))).collect();
            let dual: Vec<Subspace> = (lo..=hi)
                .map(|l| {
                    let allowed = second(l, n).intersect(f, &fil(p, n)).sum(f, &beyond);
                    image_in_spot(f, spot, &zr.intersect(f, &allowed))
                })
                .collect();
            let recursive = if page.r == 0 {
                direct.clone()
            } else {
                recurse(f, &ss.pages[page.r - 1], &out[page.r - 1], key, spot, lo, hi)
            };
            spots.insert(
                key,
                SpotFiltrations {
                    direct: flag_from(f, lo, direct),
                    dual: flag_from(f, lo, dual),
                    recursive: flag_from(f, lo, recursive),
                },
            );
        }
        out.push(ThreeFiltrations { r: page.r, spots });
    }
    out
}

/// `F_rec` on `E_{r+1} = ker d_r / im d_r` induced from `F_rec` on `E_r`.
fn recurse(
    f: PrimeField,
    prev: &crate::Page,
    prev_fil: &ThreeFiltrations,
    key: (i64, i64),
    spot: &Spot,
    lo: i64,
    hi: i64,
) -> Vec<Subspace> {
    let old = &prev.spots[&key];
    let iota_cols: Vec<Vec<FpScalar>> = spot
        .space
        .representatives()
        .row_vecs()
        .iter()
        .map(|v| old.space.coords(f, v).expect("Z_{r+1} ⊆ Z_r"))
        .collect();
    let iota = Matrix::from_columns(old.dim(), &iota_cols);
    let kernel = exactlin::rank_kernel_image(f, &prev.d[&key]).1;
    let src_key = (key.0 - prev.r as i64, key.1 + prev.r as i64 - 1);
    let image = prev
        .d
        .get(&src_key)
        .map_or_else(|| Subspace::zero(old.dim()), |m| Subspace::full(m.cols()).image_under(f, m));
    let rec = &prev_fil.spots[&key].recursive;
    (lo..=hi)
        .map(|l| rec.get(l).intersect(f, &kernel).sum(f, &image).preimage_under(f, &iota))
        .collect()
}

/// Outcome of a strictness test: `Fail` carries the witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strictness {
    Pass,
    Fail(StrictnessWitness),
}

impl Strictness {
    pub fn passed(&self) -> bool {
        matches!(self, Strictness::Pass)
    }
}

/// `A(Fil^l src) = A(src) ∩ Fil^l dst` for all `l`.
pub fn strictness_check(f: PrimeField, a: &Matrix, src: &Flag, dst: &Flag) -> Strictness {
    match Flag::strictness(f, a, src, dst) {
        Ok(()) => Strictness::Pass,
        Err(w) => Strictness::Fail(w),
    }
}
