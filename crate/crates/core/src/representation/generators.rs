//! Magic-unitary presentation for complete graphs: every representation on
//! `K_n` is `u_{a,x} = v_a^* p_{a,x}` for a magic unitary `P` and unitaries `v_a`.

use super::{verify_representation, BlockBiUnitary, Representation};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{is_projection, is_unitary, ComplexMatrix, Tolerance};
use crate::report::{CheckResult, Report, Severity};

/// `v_a = Σ_x u*_{a,x}` and `p_{a,x} = v_a u_{a,x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MagicUnitaryData {
    pub n: usize,
    pub v: Vec<ComplexMatrix>,
    /// Row-major `n x n` grid of projections.
    pub p: Vec<ComplexMatrix>,
}

impl MagicUnitaryData {
    pub fn p(&self, a: usize, x: usize) -> &ComplexMatrix {
        &self.p[a * self.n + x]
    }

    /// Chain unitaries `u_i = v_i v*_{i+1}`, `i = 0..n-1`.
    pub fn chain_unitaries(&self) -> Vec<ComplexMatrix> {
        self.v.windows(2).map(|w| &w[0] * &w[1].adjoint()).collect()
    }

    /// Unitarity of each `v_a`, projection property of each `p_{a,x}`, and
    /// row/column sums of `P`.
    pub fn check(&self, tol: &Tolerance) -> Report {
        let eps = tol.eps_eq;
        let mut report = Report::new("magic unitary data");
        let mut unitary = CheckResult::new("v[a] unitary", Severity::Hard);
        for (a, v) in self.v.iter().enumerate() {
            unitary.record(is_unitary(v, tol).expect("square").residual, eps, &[a]);
        }
        let mut proj = CheckResult::new("p[a,x] projection", Severity::Hard);
        for a in 0..self.n {
            for x in 0..self.n {
                proj.record(is_projection(self.p(a, x), tol).expect("square").residual, eps, &[a, x]);
            }
        }
        report.push(unitary);
        report.push(proj);
        report.push(magic_sums(self.n, &self.p, eps));
        report
    }
}

fn magic_sums(n: usize, p: &[ComplexMatrix], eps: f64) -> CheckResult {
    let d = p[0].rows();
    let id = ComplexMatrix::identity(d);
    let mut sums = CheckResult::new("row and column sums of P equal I", Severity::Hard);
    for i in 0..n {
        let row = (0..n).fold(ComplexMatrix::zeros(d, d), |acc, x| &acc + &p[i * n + x]);
        let col = (0..n).fold(ComplexMatrix::zeros(d, d), |acc, a| &acc + &p[a * n + i]);
        sums.record(row.distance(&id), eps, &[i]);
        sums.record(col.distance(&id), eps, &[i]);
    }
    sums
}

/// Builds the representation on `K_n` from a magic unitary `P` and chain
/// unitaries `u_1..u_{n-1}`: `v_1 = I`, `v_a = u*_{a-1}...u*_1`, `u_{a,x} = v*_a p_{a,x}`.
///
/// Requires `p_{b,x} u_b...u_{a-1} p_{a,x} = 0` for all `b < a`.
pub fn assemble_from_generators(
    n: usize,
    p: &[ComplexMatrix],
    chain: &[ComplexMatrix],
    tol: &Tolerance,
) -> Result<Representation> {
    if n == 0 || p.len() != n * n {
        return Err(Error::DimensionMismatch(format!("{} projections for an {n}x{n} grid", p.len())));
    }
    if chain.len() + 1 != n {
        return Err(Error::DimensionMismatch(format!(
            "{} chain unitaries for {n} vertices, expected {}",
            chain.len(),
            n - 1
        )));
    }
    let d = p[0].rows();
    if p.iter().chain(chain).any(|m| m.rows() != d || m.cols() != d) {
        return Err(Error::DimensionMismatch(format!("all generators must be {d}x{d}")));
    }
    let eps = tol.eps_eq;
    for (i, m) in p.iter().enumerate() {
        let check = is_projection(m, tol)?;
        if !check.pass {
            return Err(Error::NotMagicUnitary(format!(
                "p[{},{}] is not a projection (residual {:e})",
                i / n,
                i % n,
                check.residual
            )));
        }
    }
    let sums = magic_sums(n, p, eps);
    if !sums.pass {
        return Err(Error::NotMagicUnitary(format!(
            "row/column sums differ from I (residual {:e})",
            sums.residual
        )));
    }
    for (i, u) in chain.iter().enumerate() {
        let check = is_unitary(u, tol)?;
        if !check.pass {
            return Err(Error::NotUnitary { what: format!("u[{i}]"), residual: check.residual });
        }
    }
    for b in 0..n {
        // Running product u_b ... u_{a-1}.
        let mut word = ComplexMatrix::identity(d);
        for a in b + 1..n {
            word = &word * &chain[a - 1];
            for x in 0..n {
                let r = (&(&p[b * n + x] * &word) * &p[a * n + x]).frobenius_norm();
                if r > eps {
                    return Err(Error::RelationViolated { b, a, x, residual: r });
                }
            }
        }
    }
    let mut v = vec![ComplexMatrix::identity(d)];
    for a in 1..n {
        let next = &chain[a - 1].adjoint() * &v[a - 1];
        v.push(next);
    }
    let u = BlockBiUnitary::from_fn(n, d, |a, x| &v[a].adjoint() * &p[a * n + x])?;
    Representation::new(Graph::complete(n), Graph::complete(n), u, "assembled from generators")
}

/// Recovers `v_a` and the magic unitary `P` from a verified representation on `K_n`.
pub fn extract_magic_unitary(rep: &Representation, tol: &Tolerance) -> Result<MagicUnitaryData> {
    if !(rep.g1.is_complete() && rep.g2.is_complete()) {
        return Err(Error::PreconditionFailed("magic unitary extraction needs complete graphs".into()));
    }
    let report = verify_representation(rep, tol)?;
    if !report.passed() {
        return Err(Error::PreconditionFailed(format!(
            "representation does not verify:\n{}",
            report.render()
        )));
    }
    let (n, d) = (rep.n(), rep.d());
    let v: Vec<ComplexMatrix> = (0..n)
        .map(|a| (0..n).fold(ComplexMatrix::zeros(d, d), |acc, x| &acc + &rep.block(a, x).adjoint()))
        .collect();
    let p = (0..n)
        .flat_map(|a| (0..n).map(move |x| (a, x)))
        .map(|(a, x)| &v[a] * rep.block(a, x))
        .collect();
    Ok(MagicUnitaryData { n, v, p })
}

/// Image of the free-group quotient: `p_{a,x} = δ_{a,x} I`, `u_i = w_i`.
pub fn build_free_group_rep(n: usize, w: &[ComplexMatrix], tol: &Tolerance) -> Result<Representation> {
    let d = w.first().map_or(1, ComplexMatrix::rows);
    let p: Vec<ComplexMatrix> = (0..n * n)
        .map(|i| if i / n == i % n { ComplexMatrix::identity(d) } else { ComplexMatrix::zeros(d, d) })
        .collect();
    let mut rep = assemble_from_generators(n, &p, w, tol)?;
    rep.label = format!("free group F_{}", n - 1);
    Ok(rep)
}
