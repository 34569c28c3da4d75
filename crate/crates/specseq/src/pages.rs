use crate::{Along, FilteredComplexFp};
use exactlin::{rank_kernel_image, subquotient_map, Flag, Matrix, PrimeField, Quotient, Subspace};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// `E_r^{p,q} = Z_r / (Z_{r−1}^{p+1} + d Z_{r−1}^{p−r+1})` inside `K^{p+q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spot {
    pub p: i64,
    pub q: i64,
    pub space: Quotient,
}

impl Spot {
    pub fn degree(&self) -> i64 {
        self.p + self.q
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub spots: BTreeMap<(i64, i64), Spot>,
    /// `d_r : E_r^{p,q} → E_r^{p+r, q−r+1}`, keyed by source.
    pub d: BTreeMap<(i64, i64), Matrix>,
}

impl Page {
    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.spots.iter().map(|(k, s)| (*k, s.dim())).collect()
    }

    /// Nonzero spots only.
    pub fn support(&self) -> BTreeMap<(i64, i64), usize> {
        self.dims().into_iter().filter(|(_, d)| *d > 0).collect()
    }

    pub fn target(&self, spot: (i64, i64)) -> (i64, i64) {
        (spot.0 + self.r as i64, spot.1 - self.r as i64 + 1)
    }

    pub fn differentials_vanish(&self) -> bool {
        self.d.values().all(Matrix::is_zero)
    }

    /// `(total degree, Σ dim)` over spots.
    pub fn totals(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for s in self.spots.values() {
            *out.entry(s.degree()).or_insert(0) += s.dim();
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub along: Along,
    /// Pages `E_0 ..= E_{r_max}` (at least up to stabilization).
    pub pages: Vec<Page>,
    /// `E_∞`, the page at `r = ` filtration length, where all `d_r` vanish.
    pub infinity: Page,
    /// Smallest `r` with `d_s = 0` for every `s ≥ r`.
    pub degeneration: usize,
    /// `dim E_{r+1} = dim ker d_r − rank d_r` at every spot.
    pub recursion_ok: bool,
    /// `Σ_p dim E_∞^{p, n−p} = dim H^n` for every `n`.
    pub convergence_ok: bool,
    pub abutment: BTreeMap<i64, usize>,
}

struct Engine<'a> {
    f: PrimeField,
    k: &'a FilteredComplexFp,
    flags: BTreeMap<i64, Flag>,
}

impl Engine<'_> {
    fn fil(&self, p: i64, n: i64) -> Subspace {
        match self.flags.get(&n) {
            Some(fl) => fl.get(p),
            None => Subspace::zero(self.k.complex().dim(n)),
        }
    }

    /// `Z_r^p` in degree `n`; `Z_{−1}^p = F^p`.
    fn z(&self, r: i64, p: i64, n: i64) -> Subspace {
        let fp = self.fil(p, n);
        if r < 0 {
            return fp;
        }
        let target = self.fil(p + r, n + 1);
        fp.intersect(self.f, &target.preimage_under(self.f, &self.k.complex().d(n)))
    }

    fn denominator(&self, r: i64, p: i64, n: i64) -> Subspace {
        let d = self.k.complex().d(n - 1);
        let boundary = self.z(r - 1, p - r + 1, n - 1).image_under(self.f, &d);
        self.z(r - 1, p + 1, n).sum(self.f, &boundary)
    }

    fn spot(&self, r: usize, p: i64, n: i64) -> Spot {
        let r = r as i64;
        let space = Quotient::new(self.f, self.z(r, p, n), self.denominator(r, p, n)).expect("B_r ⊆ Z_r");
        Spot { p, q: n - p, space }
    }
}

fn p_range(flags: &BTreeMap<i64, Flag>) -> (i64, i64) {
    let lo = flags.values().map(Flag::lo).min().unwrap_or(0);
    let hi = flags.values().map(Flag::hi).max().unwrap_or(0);
    (lo, hi)
}

fn compute_page(e: &Engine, r: usize, prange: (i64, i64)) -> Page {
    let c = e.k.complex();
    let keys: Vec<(i64, i64)> =
        c.degrees().flat_map(|n| (prange.0..=prange.1).map(move |p| (p, n))).collect();
    let spots: BTreeMap<(i64, i64), Spot> = keys
        .par_iter()
        .map(|&(p, n)| ((p, n - p), e.spot(r, p, n)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let mut page = Page { r, spots, d: BTreeMap::new() };
    let d: BTreeMap<(i64, i64), Matrix> = page
        .spots
        .par_iter()
        .map(|(&key, src)| {
            let tkey = page.target(key);
            let m = match page.spots.get(&tkey) {
                Some(dst) => subquotient_map(e.f, &c.d(src.degree()), &src.space, &dst.space).expect("d maps Z_r into Z_r"),
                None => Matrix::zeros(0, src.dim()),
            };
            (key, m)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    page.d = d;
    page
}

fn recursion_holds(f: PrimeField, cur: &Page, next: &Page) -> bool {
    cur.spots.keys().all(|&key| {
        let out = &cur.d[&key];
        let kernel = out.cols() - out.rank(f);
        let src_key = (key.0 - cur.r as i64, key.1 + cur.r as i64 - 1);
        let incoming = cur.d.get(&src_key).map_or(0, |m| rank_kernel_image(f, m).0);
        next.spots.get(&key).map_or(0, Spot::dim) == kernel - incoming
    })
}

/// The spectral sequence of `K` along `W` or `Fil`, with pages up to
/// `max(r_max, stabilization)`.
pub fn pages(f: PrimeField, k: &FilteredComplexFp, along: Along, r_max: usize) -> SpectralSequence {
    let flags: BTreeMap<i64, Flag> = k.complex().degrees().map(|n| (n, k.decreasing(f, along, n))).collect();
    let prange = p_range(&flags);
    let length = (prange.1 - prange.0 + 1).max(1) as usize;
    let engine = Engine { f, k, flags };
    let last = r_max.max(length);
    let all: Vec<Page> = (0..=last).map(|r| compute_page(&engine, r, prange)).collect();
    let recursion_ok = all.windows(2).all(|w| recursion_holds(f, &w[0], &w[1]));
    let degeneration = (0..=last).rev().take_while(|&r| all[r].differentials_vanish()).last().unwrap_or(last + 1);
    let infinity = all[length].clone();
    let abutment: BTreeMap<i64, usize> =
        k.complex().degrees().map(|n| (n, k.complex().cohomology(f, n).dim())).collect();
    let totals = infinity.totals();
    let convergence_ok = abutment.iter().all(|(n, d)| totals.get(n).copied().unwrap_or(0) == *d);
    let kept = all.into_iter().take(r_max.max(degeneration) + 1).collect();
    SpectralSequence { along, pages: kept, infinity, degeneration, recursion_ok, convergence_ok, abutment }
}
