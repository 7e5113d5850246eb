//! Flat unitaries (complex Hadamard matrices) and the Latin-square style
//! bi-unitary `w_{jk} = ψ_{jk} φ*_{jk}` built from four of them.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{is_unitary, random_phase, root_of_unity, ComplexMatrix, Tolerance};
use crate::representation::BlockBiUnitary;

/// A unitary whose entries all have modulus `1/√n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatUnitary(ComplexMatrix);

impl FlatUnitary {
    pub fn new(m: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let check = is_unitary(&m, tol)?;
        if !check.pass {
            return Err(Error::NotUnitary { what: "flat candidate".into(), residual: check.residual });
        }
        let expected = 1.0 / (m.rows() as f64).sqrt();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let modulus = m[(r, c)].norm();
                if (modulus - expected).abs() > tol.eps_eq {
                    return Err(Error::NotFlat { row: r, col: c, modulus, expected });
                }
            }
        }
        Ok(FlatUnitary(m))
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Fourier matrix `F_n[j][k] = ε^{jk}/√n`, `ε = exp(2πi/n)`.
pub fn fourier_flat(n: usize) -> FlatUnitary {
    assert!(n >= 1);
    let s = 1.0 / (n as f64).sqrt();
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            m[(j, k)] = root_of_unity(n, ((j * k) % n) as i64) * s;
        }
    }
    FlatUnitary(m)
}

/// `D1 F_n D2` with independent random diagonal phases.
pub fn random_phased_fourier<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FlatUnitary {
    let d1: Vec<Complex64> = (0..n).map(|_| random_phase(rng)).collect();
    let d2: Vec<Complex64> = (0..n).map(|_| random_phase(rng)).collect();
    let f = fourier_flat(n);
    FlatUnitary(&(&ComplexMatrix::diag(&d1) * &f.0) * &ComplexMatrix::diag(&d2))
}

/// `√n (x_{1j} y_{1k}, ..., x_{nj} y_{nk})^T`.
pub fn product_vector(x: &FlatUnitary, y: &FlatUnitary, j: usize, k: usize) -> ComplexMatrix {
    let n = x.size();
    let s = (n as f64).sqrt();
    let entries: Vec<Complex64> = (0..n).map(|i| x.0[(i, j)] * y.0[(i, k)] * s).collect();
    ComplexMatrix::column(&entries)
}

/// Block matrix `W = (w_{jk})` with `w_{jk} = ψ_{jk} φ*_{jk}`, where `ψ` is built
/// from `(A, B)` and `φ` from `(C, D)`.
pub fn latin_square_biunitary(
    a: &FlatUnitary,
    b: &FlatUnitary,
    c: &FlatUnitary,
    d: &FlatUnitary,
) -> Result<BlockBiUnitary> {
    let n = a.size();
    for m in [b, c, d] {
        if m.size() != n {
            return Err(Error::SizeMismatch { left: n, right: m.size() });
        }
    }
    BlockBiUnitary::from_fn(n, n, |j, k| {
        let psi = product_vector(a, b, j, k);
        let phi = product_vector(c, d, j, k);
        &psi * &phi.adjoint()
    })
}

/// The `n = 3` instance reproducing the matrix-unit representation of `K3`,
/// together with the basis `(e_1, e_2, e_3)` as columns. Conjugating each
/// block by that basis gives the matrix units.
pub fn paper_instance() -> (BlockBiUnitary, ComplexMatrix) {
    let f = fourier_flat(3);
    // D is F_3 with its last two columns swapped (equivalently, conjugated).
    let mut dm = ComplexMatrix::zeros(3, 3);
    for j in 0..3 {
        for k in 0..3 {
            dm[(j, k)] = f.0[(j, k)].conj();
        }
    }
    let d = FlatUnitary(dm);
    let w = latin_square_biunitary(&f, &f, &f, &d).expect("equal sizes");
    // Columns of F_3 are exactly e_1, e_2, e_3.
    (w, f.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_partial_isometry, ONE};
    use crate::representation::build_k3_matrix_units;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn fourier_examples() {
        assert_eq!(fourier_flat(1).matrix(), &ComplexMatrix::identity(1));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::from_real(&[&[s, s], &[s, -s]]);
        assert!(fourier_flat(2).matrix().distance(&h) < 1e-15);
        let eps = root_of_unity(3, 1);
        let f3 = fourier_flat(3);
        let t = 1.0 / 3f64.sqrt();
        assert!((f3.matrix()[(1, 1)] - eps * t).norm() < 1e-15);
        assert!((f3.matrix()[(1, 2)] - eps * eps * t).norm() < 1e-15);
        assert!((f3.matrix()[(2, 2)] - eps * t).norm() < 1e-15);
        for n in 1..8 {
            assert!(FlatUnitary::new(fourier_flat(n).matrix().clone(), &tol()).is_ok());
        }
    }

    #[test]
    fn non_flat_unitary_is_rejected() {
        let err = FlatUnitary::new(ComplexMatrix::identity(2), &tol()).unwrap_err();
        assert!(matches!(err, Error::NotFlat { .. }));
        let m = ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(matches!(FlatUnitary::new(m, &tol()), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn size_mismatch() {
        let (f2, f3) = (fourier_flat(2), fourier_flat(3));
        assert!(matches!(latin_square_biunitary(&f2, &f2, &f3, &f2), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn f2_quadruple_is_bi_unitary() {
        let f = fourier_flat(2);
        let w = latin_square_biunitary(&f, &f, &f, &f).unwrap();
        let (u, ut) = w.bi_unitarity(&tol());
        assert!(u <= 1e-12 && ut <= 1e-12);
    }

    #[test]
    fn paper_instance_reproduces_matrix_units() {
        let (w, basis) = paper_instance();
        let reference = build_k3_matrix_units();
        let basis_adj = basis.adjoint();
        for a in 0..3 {
            for x in 0..3 {
                let conj = &(&basis_adj * w.block(a, x)) * &basis;
                assert!(conj.distance(reference.block(a, x)) <= 1e-12, "block ({a},{x})");
            }
        }
        let e1 = ComplexMatrix::column(&[ONE / 3f64.sqrt(); 3]);
        let f = fourier_flat(3);
        assert!(product_vector(&f, &f, 0, 0).distance(&e1) <= 1e-15);
    }

    proptest! {
        #[test]
        fn random_flat_quadruples_give_bi_unitaries(seed in any::<u64>(), n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fs: Vec<FlatUnitary> = (0..4).map(|_| random_phased_fourier(&mut rng, n)).collect();
            for f in &fs {
                prop_assert!(FlatUnitary::new(f.matrix().clone(), &tol()).is_ok());
            }
            let w = latin_square_biunitary(&fs[0], &fs[1], &fs[2], &fs[3]).unwrap();
            let (u, ut) = w.bi_unitarity(&tol());
            prop_assert!(u <= 1e-9 && ut <= 1e-9);
            for block in w.blocks() {
                prop_assert!(is_partial_isometry(block, &tol()).unwrap().pass);
            }
        }
    }
}
