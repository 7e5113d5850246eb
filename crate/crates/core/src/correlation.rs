//! The correlation `Γ(ε_{x,x'} ⊗ ε_{y,y'})_{a,a',b,b'} = τ(u*_{a,x} u_{a',x'} u*_{b',y'} u_{b,y})`
//! of a representation, with `τ` the normalized trace, and its channel checks.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, Tolerance, ZERO};
use crate::representation::{verify_representation, Representation};
use crate::report::{CheckResult, Report, Severity};

pub const INDEX_ORDER: &str = "x,x',y,y',a,a',b,b'";

/// Dense `n^8` tensor indexed `[x][x'][y][y'][a][a'][b][b']`, 0-based, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTensor {
    n: usize,
    values: Vec<Complex64>,
}

/// One coordinate: `(x, x', y, y', a, a', b, b')`.
pub type Coord = [usize; 8];

impl CorrelationTensor {
    pub fn from_values(n: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != n.pow(8) {
            return Err(Error::DimensionMismatch(format!(
                "{} values for n = {n}, expected {}",
                values.len(),
                n.pow(8)
            )));
        }
        Ok(CorrelationTensor { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn offset(&self, c: Coord) -> usize {
        c.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn coord(&self, mut offset: usize) -> Coord {
        let mut c = [0; 8];
        for slot in c.iter_mut().rev() {
            *slot = offset % self.n;
            offset /= self.n;
        }
        c
    }

    pub fn get(&self, c: Coord) -> Complex64 {
        self.values[self.offset(c)]
    }

    pub fn set(&mut self, c: Coord, v: Complex64) {
        let o = self.offset(c);
        self.values[o] = v;
    }

    /// `t * self + (1 - t) * other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let values = self.values.iter().zip(&other.values).map(|(p, q)| p * t + q * (1.0 - t)).collect();
        Ok(CorrelationTensor { n: self.n, values })
    }

    /// Coordinates whose modulus exceeds `threshold`.
    pub fn nonzero(&self, threshold: f64) -> Vec<(Coord, Complex64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > threshold)
            .map(|(i, &v)| (self.coord(i), v))
            .collect()
    }
}

/// Evaluates the correlation of a verified representation.
pub fn compute_gamma(rep: &Representation, tol: &Tolerance) -> Result<CorrelationTensor> {
    let report = verify_representation(rep, tol)?;
    if !report.passed() {
        return Err(Error::PreconditionFailed(format!(
            "representation does not verify:\n{}",
            report.render()
        )));
    }
    Ok(gamma_unchecked(rep))
}

/// The trace formula without the verification precondition.
pub fn gamma_unchecked(rep: &Representation) -> CorrelationTensor {
    let n = rep.n();
    let d = rep.d();
    let pairs = n * n;
    // words[(a*n + x) * pairs + (b*n + y)] = u*_{a,x} u_{b,y}
    let words: Vec<Option<ComplexMatrix>> = (0..pairs * pairs)
        .map(|i| {
            let (p, q) = (i / pairs, i % pairs);
            let w = rep.word2(p / n, p % n, q / n, q % n);
            (!w.is_zero()).then_some(w)
        })
        .collect();
    let word = |a: usize, x: usize, b: usize, y: usize| words[(a * n + x) * pairs + b * n + y].as_ref();
    let scale = 1.0 / d as f64;
    let slice = n.pow(7);
    let mut values = vec![ZERO; n.pow(8)];
    values.par_chunks_mut(slice).enumerate().for_each(|(x, out)| {
        let mut i = 0;
        for x2 in 0..n {
            for y in 0..n {
                for y2 in 0..n {
                    for a in 0..n {
                        for a2 in 0..n {
                            let left = word(a, x, a2, x2);
                            for b in 0..n {
                                for b2 in 0..n {
                                    if let (Some(l), Some(r)) = (left, word(b2, y2, b, y)) {
                                        out[i] = trace_of_product(l, r) * scale;
                                    }
                                    i += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    });
    CorrelationTensor { n, values }
}

fn trace_of_product(l: &ComplexMatrix, r: &ComplexMatrix) -> Complex64 {
    let d = l.rows();
    let mut t = ZERO;
    for i in 0..d {
        for j in 0..d {
            t += l[(i, j)] * r[(j, i)];
        }
    }
    t
}

/// Choi matrix with rows `(x, y, a, b)` and columns `(x', y', a', b')`, row-major.
pub fn choi_matrix(t: &CorrelationTensor) -> ComplexMatrix {
    let n = t.n;
    let m = n.pow(4);
    let mut c = ComplexMatrix::zeros(m, m);
    for (off, &v) in t.values.iter().enumerate() {
        if v == ZERO {
            continue;
        }
        let [x, x2, y, y2, a, a2, b, b2] = t.coord(off);
        let row = ((x * n + y) * n + a) * n + b;
        let col = ((x2 * n + y2) * n + a2) * n + b2;
        c[(row, col)] = v;
    }
    c
}

/// Smallest eigenvalue of a Hermitian matrix, diagonalizing each connected
/// component of its nonzero pattern separately. Exact zero rows contribute
/// the eigenvalue 0.
pub fn min_eigenvalue_by_components(m: &ComplexMatrix) -> Result<f64> {
    let size = m.rows();
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut active = vec![false; size];
    for r in 0..size {
        for c in 0..size {
            if m[(r, c)] != ZERO || m[(c, r)] != ZERO {
                active[r] = true;
                active[c] = true;
                let (pr, pc) = (find(&mut parent, r), find(&mut parent, c));
                if pr != pc {
                    parent[pr] = pc;
                }
            }
        }
    }
    let mut min: f64 = if active.iter().all(|&a| a) { f64::INFINITY } else { 0.0 };
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in (0..size).filter(|&i| active[i]) {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    for members in groups.values() {
        let mut sub = ComplexMatrix::zeros(members.len(), members.len());
        for (i, &r) in members.iter().enumerate() {
            for (j, &c) in members.iter().enumerate() {
                sub[(i, j)] = m[(r, c)];
            }
        }
        let eig = hermitian_eigenvalues(&sub)?;
        min = min.min(eig[0]);
    }
    Ok(if min.is_finite() { min } else { 0.0 })
}

/// Complete positivity (Choi matrix PSD up to `eps_psd`), conjugate symmetry,
/// and trace preservation `Σ_{a,b} Γ[x][x'][y][y'][a][a][b][b] = δ_{x,x'} δ_{y,y'}`.
pub fn check_cptp(t: &CorrelationTensor, tol: &Tolerance) -> Result<Report> {
    let n = t.n;
    let eps = tol.eps_eq;
    let mut report = Report::new("complete positivity and trace preservation");

    let mut herm = CheckResult::new("conjugate symmetry", Severity::Hard);
    for (off, &v) in t.values.iter().enumerate() {
        let [x, x2, y, y2, a, a2, b, b2] = t.coord(off);
        let mirrored = t.get([x2, x, y2, y, a2, a, b2, b]);
        let r = (v.conj() - mirrored).norm();
        if r > 0.0 {
            herm.record(r, eps, &[x, x2, y, y2, a, a2, b, b2]);
        }
    }
    report.push(herm);

    let min_eig = min_eigenvalue_by_components(&choi_matrix(t))?;
    let mut cp = CheckResult::new("Choi matrix PSD (residual = max(0, -min eig))", Severity::Hard);
    cp.record((-min_eig).max(0.0), tol.eps_psd, &[]);
    report.push(cp);

    let mut tp = CheckResult::new("trace preserving", Severity::Hard);
    for x in 0..n {
        for x2 in 0..n {
            for y in 0..n {
                for y2 in 0..n {
                    let mut s = ZERO;
                    for a in 0..n {
                        for b in 0..n {
                            s += t.get([x, x2, y, y2, a, a, b, b]);
                        }
                    }
                    let target = if x == x2 && y == y2 { 1.0 } else { 0.0 };
                    tp.record((s - target).norm(), eps, &[x, x2, y, y2]);
                }
            }
        }
    }
    report.push(tp);
    Ok(report)
}

/// Smallest Choi eigenvalue, for reporting.
pub fn choi_min_eigenvalue(t: &CorrelationTensor) -> Result<f64> {
    min_eigenvalue_by_components(&choi_matrix(t))
}

/// No-signalling marginals. Tracing out Alice's output gives
/// `Σ_a Γ[x][x'][y][y'][a][a][b][b']`, which must vanish for `x != x'` and not
/// depend on `x` when `x = x'`; symmetrically for Bob.
pub fn check_qns(t: &CorrelationTensor, tol: &Tolerance) -> Result<Report> {
    let n = t.n;
    let eps = tol.eps_eq;
    let mut report = Report::new("quantum no-signalling marginals");
    let marginal_a = |x: usize, x2: usize, y: usize, y2: usize, b: usize, b2: usize| -> Complex64 {
        (0..n).map(|a| t.get([x, x2, y, y2, a, a, b, b2])).sum()
    };
    let marginal_b = |x: usize, x2: usize, y: usize, y2: usize, a: usize, a2: usize| -> Complex64 {
        (0..n).map(|b| t.get([x, x2, y, y2, a, a2, b, b])).sum()
    };
    let mut alice = CheckResult::new("Alice marginal (trace over a)", Severity::Hard);
    let mut bob = CheckResult::new("Bob marginal (trace over b)", Severity::Hard);
    for x in 0..n {
        for x2 in 0..n {
            for y in 0..n {
                for y2 in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let ma = marginal_a(x, x2, y, y2, i, j);
                            let ra = if x != x2 { ma.norm() } else { (ma - marginal_a(0, 0, y, y2, i, j)).norm() };
                            alice.record(ra, eps, &[x, x2, y, y2, i, j]);
                            let mb = marginal_b(x, x2, y, y2, i, j);
                            let rb = if y != y2 { mb.norm() } else { (mb - marginal_b(x, x2, 0, 0, i, j)).norm() };
                            bob.record(rb, eps, &[x, x2, y, y2, i, j]);
                        }
                    }
                }
            }
        }
    }
    report.push(alice);
    report.push(bob);
    Ok(report)
}

/// Perfectness for the isomorphism game of `(g1, g2)`: a coordinate vanishes
/// whenever adjacency of `(a', b')` in `g2` differs from adjacency of `(x', y')`
/// in `g1`, or the same holds for `(a, b)` and `(x, y)`.
pub fn check_perfect(t: &CorrelationTensor, g1: &Graph, g2: &Graph, tol: &Tolerance) -> Result<Report> {
    let n = t.n;
    if g1.vertex_count() != n || g2.vertex_count() != n {
        return Err(Error::DimensionMismatch("graphs and tensor disagree".into()));
    }
    let eps = tol.eps_eq;
    let mut report = Report::new("perfect strategy");
    let mut primed = CheckResult::new("vanishing on mismatched (x',y',a',b')", Severity::Hard);
    let mut unprimed = CheckResult::new("vanishing on mismatched (x,y,a,b)", Severity::Hard);
    for (off, v) in t.values.iter().enumerate() {
        let [x, x2, y, y2, a, a2, b, b2] = t.coord(off);
        let r = v.norm();
        if g2.adjacent(a2, b2) != g1.adjacent(x2, y2) {
            primed.record(r, eps, &[x, x2, y, y2, a, a2, b, b2]);
        }
        if g2.adjacent(a, b) != g1.adjacent(x, y) {
            unprimed.record(r, eps, &[x, x2, y, y2, a, a2, b, b2]);
        }
    }
    report.push(primed);
    report.push(unprimed);
    Ok(report)
}

#[derive(Serialize, Deserialize)]
struct DenseRecord {
    n: usize,
    order: String,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct SparseEntry {
    idx: Coord,
    v: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct SparseRecord {
    n: usize,
    order: String,
    nonzero: Vec<SparseEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyRecord {
    Dense(DenseRecord),
    Sparse(SparseRecord),
}

impl CorrelationTensor {
    /// Dense JSON `{"n", "order", "values"}`, or with `nonzero_only` the
    /// coordinates above `threshold` as `{"idx": [8 ints], "v": [re, im]}`.
    pub fn to_json(&self, nonzero_only: bool, threshold: f64) -> serde_json::Value {
        let order = INDEX_ORDER.to_string();
        if nonzero_only {
            let nonzero = self
                .nonzero(threshold)
                .into_iter()
                .map(|(idx, v)| SparseEntry { idx, v: [v.re, v.im] })
                .collect();
            serde_json::to_value(SparseRecord { n: self.n, order, nonzero })
        } else {
            let values = self.values.iter().map(|v| [v.re, v.im]).collect();
            serde_json::to_value(DenseRecord { n: self.n, order, values })
        }
        .expect("plain data serializes")
    }

    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let record: AnyRecord = serde_json::from_value(value)?;
        let (n, order) = match &record {
            AnyRecord::Dense(r) => (r.n, &r.order),
            AnyRecord::Sparse(r) => (r.n, &r.order),
        };
        if order != INDEX_ORDER {
            return Err(Error::Parse(format!("unsupported index order '{order}'")));
        }
        match record {
            AnyRecord::Dense(r) => {
                CorrelationTensor::from_values(n, r.values.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            }
            AnyRecord::Sparse(r) => {
                let mut t = CorrelationTensor { n, values: vec![ZERO; n.pow(8)] };
                for e in r.nonzero {
                    if e.idx.iter().any(|&i| i >= n) {
                        return Err(Error::Parse(format!("index {:?} out of range", e.idx)));
                    }
                    t.set(e.idx, Complex64::new(e.v[0], e.v[1]));
                }
                Ok(t)
            }
        }
    }
}
