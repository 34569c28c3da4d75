use crate::SeqError;
use exactlin::{subquotient_map, Complex, Direction, Flag, Matrix, PrimeField, Quotient, Subspace};

/// Which filtration a spectral sequence is taken along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Along {
    Weight,
    Hodge,
}

/// A complex with an increasing `W` and a decreasing `Fil` in every degree,
/// both respected by `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplexFp {
    complex: Complex,
    weight: Vec<Flag>,
    hodge: Vec<Flag>,
}

impl FilteredComplexFp {
    pub fn new(f: PrimeField, complex: Complex, weight: Vec<Flag>, hodge: Vec<Flag>) -> Result<Self, SeqError> {
        let n = complex.degrees().count();
        if weight.len() != n || hodge.len() != n {
            return Err(SeqError::Invalid(format!("{n} degrees but {} W and {} Fil flags", weight.len(), hodge.len())));
        }
        for (k, q) in complex.degrees().enumerate() {
            let (w, h) = (&weight[k], &hodge[k]);
            if w.direction() != Direction::Increasing || h.direction() != Direction::Decreasing {
                return Err(SeqError::Invalid(format!("flag directions in degree {q}")));
            }
            if w.ambient() != complex.dim(q) || h.ambient() != complex.dim(q) {
                return Err(SeqError::Invalid(format!("flag ambient in degree {q}")));
            }
            if !w.is_exhaustive(f) || !h.is_exhaustive(f) {
                return Err(SeqError::Invalid(format!("flag not exhaustive in degree {q}")));
            }
        }
        for (k, q) in complex.degrees().enumerate().take(n.saturating_sub(1)) {
            let d = complex.d(q);
            if !Flag::is_filtered_map(f, &d, &weight[k], &weight[k + 1])
                || !Flag::is_filtered_map(f, &d, &hodge[k], &hodge[k + 1])
            {
                return Err(SeqError::Invalid(format!("d is not filtered in degree {q}")));
            }
        }
        Ok(Self { complex, weight, hodge })
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    fn index(&self, q: i64) -> Option<usize> {
        self.complex.degrees().contains(&q).then(|| (q - self.complex.lo()) as usize)
    }

    /// `W` in degree `q`; the zero flag outside the complex.
    pub fn weight(&self, q: i64) -> Flag {
        self.index(q).map_or_else(|| Flag::trivial(0, Direction::Increasing, 0), |k| self.weight[k].clone())
    }

    pub fn hodge(&self, q: i64) -> Flag {
        self.index(q).map_or_else(|| Flag::trivial(0, Direction::Decreasing, 0), |k| self.hodge[k].clone())
    }

    /// The filtration `along` as a decreasing flag (`W̃^p = W_{−p}`).
    pub fn decreasing(&self, f: PrimeField, along: Along, q: i64) -> Flag {
        match along {
            Along::Hodge => self.hodge(q),
            Along::Weight => negate(f, &self.weight(q)),
        }
    }

    /// The other filtration, also decreasing.
    pub fn second(&self, f: PrimeField, along: Along, q: i64) -> Flag {
        match along {
            Along::Hodge => negate(f, &self.weight(q)),
            Along::Weight => self.hodge(q),
        }
    }
}

/// `W̃^p = W_{−p}` for an increasing flag.
fn negate(f: PrimeField, w: &Flag) -> Flag {
    let steps: Vec<Subspace> = w.steps().iter().rev().cloned().collect();
    if steps.is_empty() {
        return Flag::trivial(w.ambient(), Direction::Decreasing, 0);
    }
    Flag::new(f, Direction::Decreasing, -w.hi(), steps).expect("reversed steps decrease")
}

/// `Fil^level / Fil^{level+1}` in one degree and its offset in graded coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub level: i64,
    pub quotient: Quotient,
    pub offset: usize,
}

fn graded_pieces(f: PrimeField, fil: &Flag) -> Vec<GradedPiece> {
    let mut out = Vec::new();
    let mut offset = 0;
    for level in fil.lo()..=fil.hi() {
        let quotient = Quotient::new(f, fil.get(level), fil.get(level + 1)).expect("decreasing flag");
        let d = quotient.dim();
        out.push(GradedPiece { level, quotient, offset });
        offset += d;
    }
    out
}

/// `Gr_Fil K` with induced `W` and the split graded `Fil`, in graded
/// coordinates: per degree, the quotient bases of `Fil^l/Fil^{l+1}`
/// concatenated in increasing `l`. Also returns the pieces per degree.
pub fn gr_fil(f: PrimeField, k: &FilteredComplexFp) -> (FilteredComplexFp, Vec<Vec<GradedPiece>>) {
    let c = k.complex();
    let pieces: Vec<Vec<GradedPiece>> = c.degrees().map(|q| graded_pieces(f, &k.hodge(q))).collect();
    let dims: Vec<usize> = pieces.iter().map(|ps| ps.iter().map(|p| p.quotient.dim()).sum()).collect();
    let mut diffs = Vec::new();
    for (i, q) in c.degrees().enumerate().take(dims.len() - 1) {
        let d = c.d(q);
        let mut m = Matrix::zeros(dims[i + 1], dims[i]);
        for src in &pieces[i] {
            let Some(dst) = pieces[i + 1].iter().find(|p| p.level == src.level) else {
                continue;
            };
            let block = subquotient_map(f, &d, &src.quotient, &dst.quotient).expect("d respects Fil");
            for r in 0..block.rows() {
                for col in 0..block.cols() {
                    m.set(dst.offset + r, src.offset + col, block.get(r, col));
                }
            }
        }
        diffs.push(m);
    }
    let complex = Complex::new(f, c.lo(), dims.clone(), diffs).expect("graded pieces of a complex");
    let mut weight = Vec::new();
    let mut hodge = Vec::new();
    for (i, q) in c.degrees().enumerate() {
        let w = k.weight(q);
        let fil = k.hodge(q);
        let steps: Vec<Subspace> = w
            .steps()
            .iter()
            .map(|wl| {
                let mut vecs = Vec::new();
                for p in &pieces[i] {
                    for v in wl.intersect(f, &fil.get(p.level)).basis_vectors() {
                        let c = p.quotient.coords(f, &v).expect("vector of Fil^l");
                        let mut g = vec![0; dims[i]];
                        g[p.offset..p.offset + c.len()].copy_from_slice(&c);
                        vecs.push(g);
                    }
                }
                Subspace::span(f, dims[i], &vecs)
            })
            .collect();
        weight.push(if steps.is_empty() {
            Flag::trivial(dims[i], Direction::Increasing, 0)
        } else {
            Flag::new(f, Direction::Increasing, w.lo(), steps).expect("images of an increasing flag")
        });
        hodge.push(split_hodge(f, &pieces[i], dims[i]));
    }
    (FilteredComplexFp::new(f, complex, weight, hodge).expect("graded complex is bifiltered"), pieces)
}

fn split_hodge(f: PrimeField, pieces: &[GradedPiece], dim: usize) -> Flag {
    if pieces.is_empty() {
        return Flag::trivial(dim, Direction::Decreasing, 0);
    }
    let steps = pieces
        .iter()
        .map(|p| {
            let idx: Vec<usize> = pieces.iter().filter(|x| x.level >= p.level).flat_map(|x| x.offset..x.offset + x.quotient.dim()).collect();
            Subspace::coordinate(dim, &idx)
        })
        .collect();
    Flag::new(f, Direction::Decreasing, pieces[0].level, steps).expect("coordinate steps decrease")
}
