//! Explicit representations on small graphs.

use num_complex::Complex64;

use super::{BlockBiUnitary, Representation};
use crate::error::{Error, Result};
use crate::graph::{Graph, Permutation};
use crate::linalg::{is_unitary, ComplexMatrix, Tolerance, ONE, ZERO};

/// `u_{a,x} = δ_{a,σ(x)}` with `d = 1`; the classical strategy of an automorphism.
pub fn build_permutation(g: &Graph, sigma: &Permutation) -> Result<Representation> {
    if !g.is_automorphism(sigma) {
        return Err(Error::NotAutomorphism);
    }
    let n = g.vertex_count();
    let u = BlockBiUnitary::from_fn(n, 1, |a, x| {
        ComplexMatrix::diag(&[if sigma.apply(x) == a { ONE } else { ZERO }])
    })?;
    let label = if *sigma == Permutation::identity(n) {
        "identity permutation".to_string()
    } else {
        format!("permutation {:?}", sigma.images())
    };
    Representation::new(g.clone(), g.clone(), u, label)
}

/// The 3x3 matrix-unit bi-unitary on `K3`; its flattening is a 9x9 permutation matrix.
pub fn build_k3_matrix_units() -> Representation {
    // (a, x) -> E_{ij}, all 1-based as in the table of the construction.
    const TABLE: [[(usize, usize); 3]; 3] = [
        [(1, 1), (2, 3), (3, 2)],
        [(2, 2), (3, 1), (1, 3)],
        [(3, 3), (1, 2), (2, 1)],
    ];
    let u = BlockBiUnitary::from_fn(3, 3, |a, x| {
        let (i, j) = TABLE[a][x];
        ComplexMatrix::unit(3, i - 1, j - 1)
    })
    .expect("3x3 grid");
    Representation::new(Graph::complete(3), Graph::complete(3), u, "K3 matrix units")
        .expect("consistent sizes")
}

/// The three self-adjoint unitaries summing to zero (trine / "Mercedes" frame):
/// `diag(1, -1)` and its rotations by ±120°.
pub fn mercedes_unitaries() -> [ComplexMatrix; 3] {
    let h = 3f64.sqrt() / 2.0;
    [
        ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]),
        ComplexMatrix::from_real(&[&[-0.5, h], &[h, 0.5]]),
        ComplexMatrix::from_real(&[&[-0.5, -h], &[-h, 0.5]]),
    ]
}

/// Two-dimensional representation on the path with centre `0`:
///
/// ```text
/// U = 1/√2 [ √2 I   0      0    ]
///          [ 0      π(u1)  π(u2) ]
///          [ 0      π(u2) -π(u3) ]
/// ```
pub fn build_mercedes_p3() -> Representation {
    let [p1, p2, p3] = mercedes_unitaries();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let u = BlockBiUnitary::from_fn(3, 2, |a, x| match (a, x) {
        (0, 0) => ComplexMatrix::identity(2),
        (1, 1) => p1.scale_real(s),
        (1, 2) | (2, 1) => p2.scale_real(s),
        (2, 2) => p3.scale_real(-s),
        _ => ComplexMatrix::zeros(2, 2),
    })
    .expect("3x3 grid");
    Representation::new(Graph::path3(), Graph::path3(), u, "Mercedes P3").expect("consistent sizes")
}

/// Two-dimensional representation on `K1 + K2` (vertex `0` isolated).
pub fn build_k1k2() -> Representation {
    let u = BlockBiUnitary::from_fn(3, 2, |a, x| match (a, x) {
        (0, 0) => ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]),
        (1, 1) | (2, 2) => ComplexMatrix::unit(2, 0, 0),
        (1, 2) | (2, 1) => ComplexMatrix::unit(2, 1, 1),
        _ => ComplexMatrix::zeros(2, 2),
    })
    .expect("3x3 grid");
    Representation::new(Graph::k1_k2(), Graph::k1_k2(), u, "K1+K2").expect("consistent sizes")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OneDimKind {
    /// `u11 = 1`, `u22 = z`.
    Diagonal,
    /// `u12 = 1`, `u21 = z`.
    Antidiagonal,
}

/// One-dimensional representations of the `K2` algebra.
pub fn build_k2_onedim(z: Complex64, kind: OneDimKind, tol: &Tolerance) -> Result<Representation> {
    let modulus = z.norm();
    if (modulus - 1.0).abs() > tol.eps_eq {
        return Err(Error::NotUnitModulus { modulus });
    }
    let scalar = |v: Complex64| ComplexMatrix::diag(&[v]);
    let (diag, off) = match kind {
        OneDimKind::Diagonal => ([ONE, z], [ZERO, ZERO]),
        OneDimKind::Antidiagonal => ([ZERO, ZERO], [ONE, z]),
    };
    let u = BlockBiUnitary::new(
        2,
        1,
        vec![scalar(diag[0]), scalar(off[0]), scalar(off[1]), scalar(diag[1])],
    )?;
    let name = match kind {
        OneDimKind::Diagonal => "pi_z",
        OneDimKind::Antidiagonal => "rho_z",
    };
    Representation::new(
        Graph::complete(2),
        Graph::complete(2),
        u,
        format!("K2 {name}, z = {}{:+}i", z.re, z.im),
    )
}

/// `U = diag(v_1, ..., v_n)`, valid for every simple graph on `n` vertices.
pub fn build_diagonal(g: &Graph, v: &[ComplexMatrix], tol: &Tolerance) -> Result<Representation> {
    let n = g.vertex_count();
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!("{} unitaries for {n} vertices", v.len())));
    }
    let d = v[0].rows();
    for (i, m) in v.iter().enumerate() {
        if m.rows() != d || m.cols() != d {
            return Err(Error::DimensionMismatch(format!("v[{i}] is not {d}x{d}")));
        }
        let check = is_unitary(m, tol)?;
        if !check.pass {
            return Err(Error::NotUnitary { what: format!("v[{i}]"), residual: check.residual });
        }
    }
    let u = BlockBiUnitary::from_fn(n, d, |a, x| {
        if a == x {
            v[a].clone()
        } else {
            ComplexMatrix::zeros(d, d)
        }
    })?;
    Representation::new(g.clone(), g.clone(), u, "diagonal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_unitary, root_of_unity, I};
    use crate::representation::verify_representation;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn k3_table_entries() {
        let rep = build_k3_matrix_units();
        assert_eq!(rep.block(0, 0), &ComplexMatrix::unit(3, 0, 0));
        assert_eq!(rep.block(1, 2), &ComplexMatrix::unit(3, 0, 2));
        assert_eq!(rep.block(2, 2), &ComplexMatrix::unit(3, 1, 0));
    }

    #[test]
    fn k3_flattening_is_a_permutation_matrix() {
        let flat = build_k3_matrix_units().u.flatten();
        for r in 0..9 {
            let ones = (0..9).filter(|&c| flat[(r, c)] == ONE).count();
            let zeros = (0..9).filter(|&c| flat[(r, c)] == ZERO).count();
            assert_eq!((ones, zeros), (1, 8));
        }
        for c in 0..9 {
            assert_eq!((0..9).filter(|&r| flat[(r, c)] == ONE).count(), 1);
        }
    }

    #[test]
    fn mercedes_identities() {
        let [p1, p2, p3] = mercedes_unitaries();
        let sum = &(&p1 + &p2) + &p3;
        assert!(sum.frobenius_norm() <= 1e-12);
        assert!((&p1 * &p2).distance(&(&p2 * &p3)) <= 1e-12);
        for p in [&p1, &p2, &p3] {
            assert!(p.distance(&p.adjoint()) == 0.0);
            assert!((p * p).distance(&ComplexMatrix::identity(2)) <= 1e-12);
        }
        let report = verify_representation(&build_mercedes_p3(), &tol()).unwrap();
        assert!(report.passed(), "{}", report.render());
        assert!(report.max_residual() <= 1e-12);
    }

    #[test]
    fn k1k2_blocks_and_words() {
        let rep = build_k1k2();
        assert!(rep.block(0, 1).is_zero() && rep.block(1, 0).is_zero());
        assert!(rep.block(0, 2).is_zero() && rep.block(2, 0).is_zero());
        assert_eq!(rep.word2(1, 1, 0, 0), ComplexMatrix::unit(2, 0, 1));
        let report = verify_representation(&rep, &tol()).unwrap();
        assert!(report.passed());
        assert_eq!(report.max_residual(), 0.0);
    }

    #[test]
    fn k2_onedim_examples() {
        let trivial = build_k2_onedim(ONE, OneDimKind::Diagonal, &tol()).unwrap();
        assert_eq!(trivial.u.flatten(), ComplexMatrix::identity(2));
        let z = Complex64::from_polar(1.0, 0.7);
        let pi = build_k2_onedim(z, OneDimKind::Diagonal, &tol()).unwrap();
        assert!((pi.word2(0, 0, 1, 1)[(0, 0)] - z).norm() < 1e-15);
        let rho = build_k2_onedim(I, OneDimKind::Antidiagonal, &tol()).unwrap();
        assert!((rho.word2(0, 1, 1, 0)[(0, 0)] - I).norm() < 1e-15);
        for rep in [&trivial, &pi, &rho] {
            assert!(verify_representation(rep, &tol()).unwrap().passed());
        }
        assert!(matches!(
            build_k2_onedim(Complex64::new(2.0, 0.0), OneDimKind::Diagonal, &tol()),
            Err(Error::NotUnitModulus { .. })
        ));
    }

    #[test]
    fn diagonal_consecutive_products_recover_mercedes() {
        let [p1, p2, p3] = mercedes_unitaries();
        let v2 = p1.clone();
        let v3 = &v2 * &p2;
        let v4 = &v3 * &p3;
        let v = vec![ComplexMatrix::identity(2), v2, v3, v4];
        let rep = build_diagonal(&Graph::cycle(4), &v, &tol()).unwrap();
        for (a, p) in [p1, p2, p3].iter().enumerate() {
            assert!(rep.word2(a, a, a + 1, a + 1).distance(p) <= 1e-12);
        }
        assert!(verify_representation(&rep, &tol()).unwrap().passed());
    }

    #[test]
    fn diagonal_rejects_non_unitary() {
        let v = vec![ComplexMatrix::identity(2), ComplexMatrix::diag(&[ONE, ZERO])];
        assert!(matches!(build_diagonal(&Graph::complete(2), &v, &tol()), Err(Error::NotUnitary { .. })));
        let w = vec![ComplexMatrix::identity(2)];
        assert!(build_diagonal(&Graph::complete(2), &w, &tol()).is_err());
    }

    #[test]
    fn diagonal_with_same_unitaries_verifies_on_all_three_vertex_graphs() {
        let v = vec![
            ComplexMatrix::diag(&[ONE, root_of_unity(3, 1)]),
            ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]),
            ComplexMatrix::identity(2),
        ];
        for g in crate::graph::isomorphism_classes(3).unwrap() {
            let rep = build_diagonal(&g, &v, &tol()).unwrap();
            assert!(verify_representation(&rep, &tol()).unwrap().passed());
            assert!(is_unitary(&rep.u.flatten(), &tol()).unwrap().pass);
        }
    }

    #[test]
    fn permutation_requires_automorphism() {
        let not_aut = Permutation::new(vec![1, 0, 2]).unwrap();
        assert!(matches!(build_permutation(&Graph::path3(), &not_aut), Err(Error::NotAutomorphism)));
    }
}
