use crate::{CechCochain, CechError};
use exactlin::{
    left_wedge_matrix, solve, subquotient_map, Complex, ExteriorBasis, FpScalar, Matrix, PrimeField, Quotient,
    Subspace,
};
use logdr::FormSum;
use std::collections::HashMap;
use toricgeom::{Character, Context, Fan};

/// Nonempty strictly increasing tuples of `0..charts`, by length then lex.
pub fn chart_tuples(charts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for len in 1..=charts {
        let mut idx: Vec<usize> = (0..len).collect();
        loop {
            out.push(idx.clone());
            let mut k = len;
            let mut advanced = false;
            while k > 0 {
                k -= 1;
                if idx[k] < charts - len + k {
                    idx[k] += 1;
                    for j in k + 1..len {
                        idx[j] = idx[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    out
}

/// One `(tuple, form degree)` summand of a total degree.
#[derive(Clone, Debug)]
pub struct Block {
    pub tuple: Vec<usize>,
    pub form_degree: usize,
    pub context: Context,
    /// First coordinate of the block inside its total degree.
    pub offset: usize,
    /// The section subquotient of `Λ^s` carried by the block.
    pub quotient: Quotient,
}

impl Block {
    pub fn cech_degree(&self) -> usize {
        self.tuple.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }
}

/// A cohomology class with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    /// Coordinates in the basis of `H^q` given by the quotient representatives.
    pub coords: Vec<FpScalar>,
    /// A primitive `x` with `Dx = c` when the class vanishes.
    pub primitive: Option<Vec<FpScalar>>,
}

/// The weight-`m` total Čech complex of a family of per-context section
/// subquotients, in quotient coordinates.
#[derive(Clone, Debug)]
pub struct WeightComplex {
    weight: Character,
    rank: usize,
    charts: usize,
    blocks: Vec<Vec<Block>>,
    complex: Complex,
}

/// Per-context sections `(big, small)` of `Λ^s`, with `small ⊆ big` and both
/// shrinking under passage to a face.
pub type SectionFn<'a> = dyn Fn(&Context, usize) -> (Subspace, Subspace) + Sync + 'a;

impl WeightComplex {
    /// Assembles the total complex. With `de_rham` the vertical differential
    /// is `m̄ ∧ −`; otherwise it is zero.
    pub fn assemble(f: PrimeField, fan: &Fan, m: &[i64], de_rham: bool, sections: &SectionFn) -> Self {
        let n = fan.rank();
        let charts = fan.max_cones().len();
        let tuples = chart_tuples(charts);
        let top = charts - 1 + n;
        let mut cache: HashMap<(Context, usize), Quotient> = HashMap::new();
        let mut blocks: Vec<Vec<Block>> = vec![Vec::new(); top + 1];
        for t in &tuples {
            let ctx = Context::of_charts(fan, t);
            for s in 0..=n {
                let quotient = cache
                    .entry((ctx.clone(), s))
                    .or_insert_with(|| {
                        let (big, small) = sections(&ctx, s);
                        Quotient::new(f, big, small).expect("sections contain their small part")
                    })
                    .clone();
                let q = t.len() - 1 + s;
                let offset = blocks[q].iter().map(Block::dim).sum();
                blocks[q].push(Block { tuple: t.clone(), form_degree: s, context: ctx.clone(), offset, quotient });
            }
        }
        let index: HashMap<(Vec<usize>, usize), usize> = blocks
            .iter()
            .flat_map(|bs| bs.iter().enumerate().map(|(k, b)| ((b.tuple.clone(), b.form_degree), k)))
            .collect();
        let mbar: Vec<FpScalar> = m.iter().map(|&x| f.reduce(x)).collect();
        let wedges: Vec<Matrix> = (0..n).map(|s| left_wedge_matrix(f, n, s, &mbar)).collect();
        let dims: Vec<usize> = blocks.iter().map(|bs| bs.iter().map(Block::dim).sum()).collect();
        let mut restrictions: HashMap<(Context, Context, usize), Matrix> = HashMap::new();
        let mut diffs = Vec::new();
        for q in 0..top {
            let mut dq = Matrix::zeros(dims[q + 1], dims[q]);
            for b in &blocks[q] {
                if b.dim() == 0 {
                    continue;
                }
                let s = b.form_degree;
                for beta in (0..charts).filter(|x| !b.tuple.contains(x)) {
                    let mut t2 = b.tuple.clone();
                    let pos = t2.partition_point(|&x| x < beta);
                    t2.insert(pos, beta);
                    let target = &blocks[q + 1][index[&(t2, s)]];
                    if target.dim() == 0 {
                        continue;
                    }
                    let key = (b.context.clone(), target.context.clone(), s);
                    let res = restrictions.entry(key).or_insert_with(|| {
                        subquotient_map(f, &Matrix::identity(ExteriorBasis::new(n, s).len()), &b.quotient, &target.quotient)
                            .expect("restriction respects sections")
                    });
                    let sign = if pos % 2 == 0 { 1 } else { f.neg(1) };
                    add_block(f, &mut dq, target.offset, b.offset, res, sign);
                }
                if de_rham && s < n {
                    let target = &blocks[q + 1][index[&(b.tuple.clone(), s + 1)]];
                    if target.dim() > 0 {
                        let dm = subquotient_map(f, &wedges[s], &b.quotient, &target.quotient)
                            .expect("d respects sections");
                        let sign = if b.cech_degree() % 2 == 0 { 1 } else { f.neg(1) };
                        add_block(f, &mut dq, target.offset, b.offset, &dm, sign);
                    }
                }
            }
            diffs.push(dq);
        }
        let complex = Complex::new(f, 0, dims, diffs).expect("D∘D = 0");
        Self { weight: m.to_vec(), rank: n, charts, blocks, complex }
    }

    pub fn weight(&self) -> &[i64] {
        &self.weight
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn charts(&self) -> usize {
        self.charts
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// Highest total degree.
    pub fn top(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn blocks(&self, q: usize) -> &[Block] {
        self.blocks.get(q).map_or(&[], |b| b.as_slice())
    }

    pub fn dim(&self, q: usize) -> usize {
        self.complex.dim(q as i64)
    }

    /// The subspace of total degree `q` spanned blockwise by `sub(ctx, s)`,
    /// which must lie in the block's big space.
    pub fn subspace(&self, f: PrimeField, q: usize, sub: &dyn Fn(&Context, usize) -> Subspace) -> Subspace {
        let dim = self.dim(q);
        let mut vecs = Vec::new();
        for b in self.blocks(q) {
            if b.dim() == 0 {
                continue;
            }
            for v in sub(&b.context, b.form_degree).basis_vectors() {
                let c = b.quotient.coords(f, &v).expect("sub lies in the sections");
                let mut w = vec![0; dim];
                w[b.offset..b.offset + b.dim()].copy_from_slice(&c);
                vecs.push(w);
            }
        }
        Subspace::span(f, dim, &vecs)
    }

    /// Coordinates of the weight-`m` part of a cochain of total degree `q`.
    pub fn to_vector(&self, f: PrimeField, q: usize, c: &CechCochain) -> Result<Vec<FpScalar>, CechError> {
        let mut v = vec![0; self.dim(q)];
        for ((tuple, s), form) in c.entries() {
            let part = form.component(&self.weight);
            if part.is_zero() {
                continue;
            }
            let mismatch = CechError::DegreeMismatch { tuple: tuple.clone(), form_degree: *s, degree: q };
            if tuple.len() - 1 + s != q || part.degrees().iter().any(|&d| d != *s) {
                return Err(mismatch);
            }
            let b = self
                .blocks(q)
                .iter()
                .find(|b| &b.tuple == tuple && b.form_degree == *s)
                .ok_or(mismatch)?;
            let coords = b.quotient.coords(f, &part.vector_at(self.rank, &self.weight, *s)).ok_or_else(|| {
                CechError::NotASection { tuple: tuple.clone(), form_degree: *s, weight: self.weight.clone() }
            })?;
            for (k, x) in coords.into_iter().enumerate() {
                v[b.offset + k] = f.add(v[b.offset + k], x);
            }
        }
        Ok(v)
    }

    /// The cochain with coordinates `v` in total degree `q`, lifted through
    /// the quotient representatives.
    pub fn to_cochain(&self, f: PrimeField, q: usize, v: &[FpScalar]) -> CechCochain {
        let mut c = CechCochain::zero();
        for b in self.blocks(q) {
            if b.dim() == 0 {
                continue;
            }
            let lifted = b.quotient.lift(f, &v[b.offset..b.offset + b.dim()]);
            let form = FormSum::from_vector(f, self.rank, &self.weight, b.form_degree, &lifted);
            c.insert(f, b.tuple.clone(), b.form_degree, form);
        }
        c
    }

    /// The class of a cocycle in `H^q`, with a primitive when it vanishes.
    pub fn class_of(&self, f: PrimeField, q: usize, v: &[FpScalar]) -> Result<Class, CechError> {
        let q = q as i64;
        if !self.complex.d(q).apply(f, v).iter().all(|&x| x == 0) {
            return Err(CechError::NotACocycle { degree: q as usize, weight: self.weight.clone() });
        }
        let h = self.complex.cohomology(f, q);
        let coords = h.coords(f, v).expect("cocycles lie in the cycle space");
        let primitive = if coords.iter().all(|&x| x == 0) {
            Some(solve(f, &self.complex.d(q - 1), v).expect("a null class is a boundary"))
        } else {
            None
        };
        Ok(Class { coords, primitive })
    }
}

fn add_block(f: PrimeField, dst: &mut Matrix, row0: usize, col0: usize, src: &Matrix, sign: FpScalar) {
    for r in 0..src.rows() {
        for c in 0..src.cols() {
            let x = src.get(r, c);
            if x != 0 {
                let cur = dst.get(row0 + r, col0 + c);
                dst.set(row0 + r, col0 + c, f.add(cur, f.mul(sign, x)));
            }
        }
    }
}
