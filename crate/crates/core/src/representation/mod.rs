//! Block bi-unitaries, representations of the game algebra on a graph pair,
//! and the verifier for the orthogonality relations.

mod construct;
mod generators;

pub use construct::{
    build_diagonal, build_k1k2, build_k2_onedim, build_k3_matrix_units, build_mercedes_p3,
    build_permutation, mercedes_unitaries, OneDimKind,
};
pub use generators::{
    assemble_from_generators, build_free_group_rep, extract_magic_unitary, MagicUnitaryData,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Permutation};
use crate::linalg::{is_partial_isometry, is_unitary, ComplexMatrix, Tolerance};
use crate::report::{CheckResult, Report, Severity};

/// `n x n` grid of `d x d` blocks; block `(a, x)` is `u_{a,x}` with `a` the
/// output vertex and `x` the input vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockBiUnitary {
    n: usize,
    d: usize,
    blocks: Vec<ComplexMatrix>,
}

impl BlockBiUnitary {
    /// Blocks in row-major order. Only shapes are validated here.
    pub fn new(n: usize, d: usize, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} blocks for an {n}x{n} grid",
                blocks.len()
            )));
        }
        if let Some(bad) = blocks.iter().find(|b| b.rows() != d || b.cols() != d) {
            return Err(Error::DimensionMismatch(format!(
                "block of shape {}x{}, expected {d}x{d}",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(BlockBiUnitary { n, d, blocks })
    }

    pub fn from_fn(n: usize, d: usize, mut f: impl FnMut(usize, usize) -> ComplexMatrix) -> Result<Self> {
        let blocks = (0..n).flat_map(|a| (0..n).map(move |x| (a, x))).map(|(a, x)| f(a, x)).collect();
        Self::new(n, d, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn block(&self, a: usize, x: usize) -> &ComplexMatrix {
        &self.blocks[a * self.n + x]
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// The `nd x nd` matrix `U`.
    pub fn flatten(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.n * self.d, self.n * self.d);
        for a in 0..self.n {
            for x in 0..self.n {
                m.set_submatrix(a * self.d, x * self.d, self.block(a, x));
            }
        }
        m
    }

    /// Block transpose `U^t = (u_{x,a})`; the blocks themselves are not transposed.
    pub fn block_transpose(&self) -> BlockBiUnitary {
        let blocks = (0..self.n)
            .flat_map(|a| (0..self.n).map(move |x| (a, x)))
            .map(|(a, x)| self.block(x, a).clone())
            .collect();
        BlockBiUnitary { n: self.n, d: self.d, blocks }
    }

    /// Unitarity residuals of `U` and `U^t`.
    pub fn bi_unitarity(&self, tol: &Tolerance) -> (f64, f64) {
        let u = is_unitary(&self.flatten(), tol).expect("square").residual;
        let ut = is_unitary(&self.block_transpose().flatten(), tol).expect("square").residual;
        (u, ut)
    }

    /// Block `(perm[a], perm[x])` of the result is block `(a, x)` of `self`.
    pub fn relabel(&self, perm: &Permutation) -> BlockBiUnitary {
        assert_eq!(perm.len(), self.n);
        let inv = perm.inverse();
        BlockBiUnitary::from_fn(self.n, self.d, |a, x| self.block(inv.apply(a), inv.apply(x)).clone())
            .expect("same shape")
    }
}

/// A block bi-unitary on a graph pair: `g1` is the input side (indices `x, y`),
/// `g2` the output side (indices `a, b`).
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub g1: Graph,
    pub g2: Graph,
    pub u: BlockBiUnitary,
    pub label: String,
}

impl Representation {
    pub fn new(g1: Graph, g2: Graph, u: BlockBiUnitary, label: impl Into<String>) -> Result<Self> {
        for (side, g) in [("input", &g1), ("output", &g2)] {
            if g.vertex_count() != u.n() {
                return Err(Error::DimensionMismatch(format!(
                    "{side} graph has {} vertices but the block grid is {}x{}",
                    g.vertex_count(),
                    u.n(),
                    u.n()
                )));
            }
        }
        Ok(Representation { g1, g2, u, label: label.into() })
    }

    pub fn n(&self) -> usize {
        self.u.n()
    }

    pub fn d(&self) -> usize {
        self.u.d()
    }

    pub fn block(&self, a: usize, x: usize) -> &ComplexMatrix {
        self.u.block(a, x)
    }

    /// Degree-two word `u*_{a,x} u_{b,y}`.
    pub fn word2(&self, a: usize, x: usize, b: usize, y: usize) -> ComplexMatrix {
        &self.block(a, x).adjoint() * self.block(b, y)
    }

    /// Same representation with vertices renamed by `perm` on both sides.
    pub fn relabel(&self, perm: &Permutation) -> Representation {
        Representation {
            g1: self.g1.relabel(perm),
            g2: self.g2.relabel(perm),
            u: self.u.relabel(perm),
            label: self.label.clone(),
        }
    }

    /// Same blocks, checked against other graphs.
    pub fn with_graphs(&self, g1: Graph, g2: Graph) -> Result<Representation> {
        Representation::new(g1, g2, self.u.clone(), self.label.clone())
    }
}

/// Block-diagonal direct sum over a shared graph pair.
pub fn direct_sum(reps: &[Representation]) -> Result<Representation> {
    let first = reps.first().ok_or_else(|| Error::DimensionMismatch("empty direct sum".into()))?;
    if reps.iter().any(|r| r.g1 != first.g1 || r.g2 != first.g2) {
        return Err(Error::DimensionMismatch("direct summands on different graphs".into()));
    }
    let d: usize = reps.iter().map(Representation::d).sum();
    let u = BlockBiUnitary::from_fn(first.n(), d, |a, x| {
        let mut m = ComplexMatrix::zeros(d, d);
        let mut offset = 0;
        for r in reps {
            m.set_submatrix(offset, offset, r.block(a, x));
            offset += r.d();
        }
        m
    })?;
    let label = reps.iter().map(|r| r.label.as_str()).collect::<Vec<_>>().join(" + ");
    Representation::new(first.g1.clone(), first.g2.clone(), u, label)
}

/// Checks a representation against the game-algebra relations:
///
/// 1. `U` and `U^t` are unitary;
/// 2. `u_{a,x} u*_{b,y} = 0` whenever adjacency of `(a, b)` in `g2` differs from
///    adjacency of `(x, y)` in `g1` (no vertex is adjacent to itself);
/// 3. `u_{a,x} = 0` whenever the degrees of `x` and `a` differ (derived);
/// 4. for complete graphs, every block is a partial isometry and the
///    products `u*_{i,m} u_{j,m}`, `u*_{m,i} u_{m,j}` vanish for `i != j` (derived).
pub fn verify_representation(rep: &Representation, tol: &Tolerance) -> Result<Report> {
    let n = rep.n();
    if rep.g1.vertex_count() != n || rep.g2.vertex_count() != n {
        return Err(Error::DimensionMismatch("graphs and block grid disagree".into()));
    }
    let eps = tol.eps_eq;
    let mut report = Report::new(format!("verification of '{}'", rep.label));

    let (ru, rut) = rep.u.bi_unitarity(tol);
    report.push(CheckResult::single("U unitary", Severity::Hard, ru, eps));
    report.push(CheckResult::single("U^t unitary", Severity::Hard, rut, eps));

    let adjoints: Vec<ComplexMatrix> = rep.u.blocks().iter().map(ComplexMatrix::adjoint).collect();
    let mut orth = CheckResult::new("orthogonality u[a,x] u*[b,y] = 0", Severity::Hard);
    for a in 0..n {
        for b in 0..n {
            let out_adj = rep.g2.adjacent(a, b);
            for x in 0..n {
                let left = rep.block(a, x);
                if left.is_zero() {
                    continue;
                }
                for y in 0..n {
                    if rep.g1.adjacent(x, y) == out_adj {
                        continue;
                    }
                    let r = (left * &adjoints[b * n + y]).frobenius_norm();
                    orth.record(r, eps, &[a, b, x, y]);
                }
            }
        }
    }
    report.push(orth);

    let deg1 = rep.g1.degrees();
    let deg2 = rep.g2.degrees();
    let mut degree = CheckResult::new("u[a,x] = 0 when deg(a) != deg(x)", Severity::Derived);
    for (a, da) in deg2.iter().enumerate() {
        for (x, dx) in deg1.iter().enumerate() {
            if da != dx {
                degree.record(rep.block(a, x).frobenius_norm(), eps, &[a, x]);
            }
        }
    }
    report.push(degree);

    if rep.g1.is_complete() && rep.g2.is_complete() {
        let mut partial = CheckResult::new("blocks are partial isometries", Severity::Derived);
        let mut cross = CheckResult::new("u*[i,m] u[j,m] = u*[m,i] u[m,j] = 0, i != j", Severity::Derived);
        for a in 0..n {
            for x in 0..n {
                let r = is_partial_isometry(rep.block(a, x), tol)?.residual;
                partial.record(r, eps, &[a, x]);
            }
        }
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let col = (&adjoints[i * n + m] * rep.block(j, m)).frobenius_norm();
                    cross.record(col, eps, &[i, j, m]);
                    let row = (&adjoints[m * n + i] * rep.block(m, j)).frobenius_norm();
                    cross.record(row, eps, &[m, i, j]);
                }
            }
        }
        report.push(partial);
        report.push(cross);
    }
    Ok(report)
}

#[derive(Serialize, Deserialize)]
struct RepresentationRecord {
    n: usize,
    d: usize,
    g1: Graph,
    g2: Graph,
    label: String,
    blocks: Vec<Vec<ComplexMatrix>>,
}

impl Serialize for Representation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.n();
        RepresentationRecord {
            n,
            d: self.d(),
            g1: self.g1.clone(),
            g2: self.g2.clone(),
            label: self.label.clone(),
            blocks: (0..n).map(|a| (0..n).map(|x| self.block(a, x).clone()).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Representation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = RepresentationRecord::deserialize(d)?;
        if r.blocks.len() != r.n || r.blocks.iter().any(|row| row.len() != r.n) {
            return Err(D::Error::custom(format!("blocks must form an {0}x{0} grid", r.n)));
        }
        let u = BlockBiUnitary::new(r.n, r.d, r.blocks.into_iter().flatten().collect())
            .map_err(D::Error::custom)?;
        Representation::new(r.g1, r.g2, u, r.label).map_err(D::Error::custom)
    }
}
