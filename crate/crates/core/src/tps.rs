//! Tensor product structures on `C^n`, stored as a grid basis.
//!
//! A [`Tps`] of shape `(k, l)` fixes an invertible basis `x_{ji}` of the
//! n-dimensional space (`n = k·l`); column `j·l + i` of [`Tps::basis`] is the
//! product vector `e_j ⊗ e_i`. A vector `w` then has a unique `k × l`
//! coefficient matrix `C` with `w = Σ C_{ji} x_{ji}`, and its rank relative to
//! the structure is the rank of `C`.

use serde::Serialize;

use crate::algebra::{span_equal, tps_to_tpp};
use crate::error::{Error, Result};
use crate::linalg::{
    c, check_finite, identity, inverse, svd, unitarity_residual, ComplexMatrix, ComplexVector,
    Tolerance, C64,
};

#[derive(Debug, Clone)]
pub struct Tps {
    k: usize,
    l: usize,
    basis: ComplexMatrix,
    inverse: ComplexMatrix,
}

impl PartialEq for Tps {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.l == other.l && self.basis == other.basis
    }
}

impl Tps {
    /// Validates with the default rank cutoff.
    pub fn new(k: usize, l: usize, basis: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(k, l, basis, &Tolerance::default())
    }

    pub fn with_tolerance(k: usize, l: usize, basis: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::DimensionMismatch(format!(
                "factor dimensions must be positive, got {k}x{l}"
            )));
        }
        let n = k * l;
        if basis.nrows() != n || basis.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "shape {k}x{l} needs a {n}x{n} basis, got {}x{}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        check_finite(&basis)?;
        let s = svd(&basis)?;
        let top = s.sigma[0];
        let bottom = s.sigma[n - 1];
        let ratio = if top > 0.0 { bottom / top } else { 0.0 };
        if ratio <= tol.rank_rel {
            return Err(Error::SingularBasis { ratio });
        }
        let inverse = inverse(&basis).ok_or(Error::SingularBasis { ratio })?;
        Ok(Tps {
            k,
            l,
            basis,
            inverse,
        })
    }

    /// The structure whose grid basis is the computational basis.
    pub fn god_given(k: usize, l: usize) -> Self {
        assert!(k > 0 && l > 0, "factor dimensions must be positive");
        let n = k * l;
        Tps {
            k,
            l,
            basis: identity(n),
            inverse: identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.k * self.l
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.k, self.l)
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn basis_inverse(&self) -> &ComplexMatrix {
        &self.inverse
    }

    /// Grid vector `x_{ji}`.
    pub fn column(&self, j: usize, i: usize) -> ComplexVector {
        self.basis.column(j * self.l + i).into_owned()
    }

    /// One factor is one-dimensional, so every vector is a product vector.
    pub fn is_trivial(&self) -> bool {
        self.k == 1 || self.l == 1
    }

    fn check_state(&self, w: &ComplexVector) -> Result<()> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has dimension {}, structure has dimension {}",
                w.len(),
                self.dim()
            )));
        }
        check_finite(&ComplexMatrix::from_column_slice(w.len(), 1, w.as_slice()))
    }

    /// Solves `w = Σ C_{ji} x_{ji}` for the `k × l` matrix `C`.
    pub fn coefficient_matrix(&self, w: &ComplexVector) -> Result<ComplexMatrix> {
        self.check_state(w)?;
        let flat = &self.inverse * w;
        Ok(ComplexMatrix::from_fn(self.k, self.l, |j, i| flat[j * self.l + i]))
    }

    /// Inverse of [`Tps::coefficient_matrix`]: `basis · vec(C)`.
    pub fn compose(&self, coeffs: &ComplexMatrix) -> Result<ComplexVector> {
        if coeffs.shape() != (self.k, self.l) {
            return Err(Error::DimensionMismatch(format!(
                "coefficient matrix must be {}x{}, got {}x{}",
                self.k,
                self.l,
                coeffs.nrows(),
                coeffs.ncols()
            )));
        }
        let flat = ComplexVector::from_fn(self.dim(), |p, _| coeffs[(p / self.l, p % self.l)]);
        Ok(&self.basis * flat)
    }

    /// `u ⊗ v` for `u ∈ C^k`, `v ∈ C^l`.
    pub fn product_vector(&self, u: &ComplexVector, v: &ComplexVector) -> Result<ComplexVector> {
        if u.len() != self.k || v.len() != self.l {
            return Err(Error::DimensionMismatch(format!(
                "factors must have lengths {} and {}",
                self.k, self.l
            )));
        }
        self.compose(&(u * v.transpose()))
    }

    pub fn schmidt(&self, w: &ComplexVector, tol: &Tolerance) -> Result<SchmidtReport> {
        self.check_state(w)?;
        let norm = w.norm();
        if norm <= tol.residual {
            return Err(Error::ZeroState { norm });
        }
        let coeffs = self.coefficient_matrix(w)?;
        let s = svd(&coeffs)?;
        let rank = s.rank(tol);
        Ok(SchmidtReport {
            rank,
            coefficients: s.sigma[..rank].to_vec(),
            left_vectors: s.u.columns(0, rank).into_owned(),
            right_vectors: s.v.columns(0, rank).map(|z| z.conj()),
        })
    }

    pub fn is_product(&self, w: &ComplexVector, tol: &Tolerance) -> Result<bool> {
        Ok(self.schmidt(w, tol)?.rank == 1)
    }

    /// Compatible with the ambient inner product iff the grid basis is
    /// orthonormal.
    pub fn is_inner_product_compatible(&self, tol: &Tolerance) -> bool {
        unitarity_residual(&self.basis) <= tol.residual * (self.dim() as f64).sqrt().max(1.0)
    }

    /// Exchanges the factors: shape `(l, k)`, column `i·k + j` is the old
    /// column `j·l + i`.
    pub fn swap_factors(&self) -> Tps {
        let (k, l) = (self.k, self.l);
        let n = self.dim();
        let mut basis = ComplexMatrix::zeros(n, n);
        let mut inv = ComplexMatrix::zeros(n, n);
        for j in 0..k {
            for i in 0..l {
                basis.set_column(i * k + j, &self.basis.column(j * l + i));
                inv.set_row(i * k + j, &self.inverse.row(j * l + i));
            }
        }
        Tps {
            k: l,
            l: k,
            basis,
            inverse: inv,
        }
    }
}

/// Singular value data of a state's coefficient matrix.
#[derive(Debug, Clone, Serialize)]
pub struct SchmidtReport {
    pub rank: usize,
    /// Nonzero singular values, descending.
    pub coefficients: Vec<f64>,
    /// `k × rank`, orthonormal columns.
    #[serde(with = "crate::json::matrix_serde")]
    pub left_vectors: ComplexMatrix,
    /// `l × rank`, orthonormal columns.
    #[serde(with = "crate::json::matrix_serde")]
    pub right_vectors: ComplexMatrix,
}

impl SchmidtReport {
    /// `Σ_m σ_m u_m v_mᵀ`, which equals the coefficient matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.left_vectors.nrows(), self.right_vectors.nrows());
        for (m, &s) in self.coefficients.iter().enumerate() {
            out += self.left_vectors.column(m) * self.right_vectors.column(m).transpose() * c(s, 0.0);
        }
        out
    }

    pub fn norm_squared(&self) -> f64 {
        self.coefficients.iter().map(|s| s * s).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// The match pairs the first factor of one structure with the second
    /// factor of the other.
    pub swapped: bool,
}

/// Decides equivalence by comparing the induced algebra pairs: the two
/// structures are equivalent exactly when their partitions agree, either
/// factor by factor or crosswise.
pub fn tps_equivalent(t1: &Tps, t2: &Tps, _tol: &Tolerance) -> Result<EquivalenceVerdict> {
    if t1.dim() != t2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "structures live on dimensions {} and {}",
            t1.dim(),
            t2.dim()
        )));
    }
    if t1.is_trivial() && t2.is_trivial() {
        let same = t1.shape() == t2.shape();
        let crossed = (t1.k, t1.l) == (t2.l, t2.k);
        return Ok(EquivalenceVerdict {
            equivalent: same || crossed,
            swapped: !same && crossed,
        });
    }
    let (a1, a2) = tps_to_tpp(t1);
    let (b1, b2) = tps_to_tpp(t2);
    if span_equal(&a1, &b1) && span_equal(&a2, &b2) {
        return Ok(EquivalenceVerdict {
            equivalent: true,
            swapped: false,
        });
    }
    if span_equal(&a1, &b2) && span_equal(&a2, &b1) {
        return Ok(EquivalenceVerdict {
            equivalent: true,
            swapped: true,
        });
    }
    Ok(EquivalenceVerdict {
        equivalent: false,
        swapped: false,
    })
}

/// Convenience for building states from real or complex literals.
pub fn state_from(entries: &[C64]) -> ComplexVector {
    ComplexVector::from_column_slice(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn r(v: &[f64]) -> ComplexVector {
        ComplexVector::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0)))
    }

    fn psi_plus() -> ComplexVector {
        r(&[0.0, H, H, 0.0])
    }

    fn bell_tps() -> Tps {
        // Grid (0,0)=ψ⁺, (0,1)=φ⁺, (1,0)=ψ⁻, (1,1)=φ⁻.
        let cols = [
            r(&[0.0, H, H, 0.0]),
            r(&[H, 0.0, 0.0, H]),
            r(&[0.0, H, -H, 0.0]),
            r(&[H, 0.0, 0.0, -H]),
        ];
        Tps::new(2, 2, ComplexMatrix::from_columns(&cols)).unwrap()
    }

    #[test]
    fn construction_errors() {
        let mut basis = identity(4);
        basis.set_column(1, &basis.column(0).into_owned());
        assert!(matches!(Tps::new(2, 2, basis), Err(Error::SingularBasis { .. })));
        assert!(matches!(Tps::new(2, 3, identity(4)), Err(Error::DimensionMismatch(_))));
        assert_eq!(Tps::new(2, 2, identity(4)).unwrap(), Tps::god_given(2, 2));
    }

    #[test]
    fn coefficient_matrix_examples() {
        let t = Tps::god_given(2, 2);
        let cm = t.coefficient_matrix(&psi_plus()).unwrap();
        let expected = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(H, 0.0), c(H, 0.0), c(0.0, 0.0)]);
        assert!((cm - expected).norm() < 1e-15);
        let e0 = r(&[1.0, 0.0, 0.0, 0.0]);
        let cm = t.coefficient_matrix(&e0).unwrap();
        assert_eq!(cm[(0, 0)], c(1.0, 0.0));
        assert!(cm.iter().skip(1).all(|z| *z == c(0.0, 0.0)));

        let mut g = random::rng(5);
        let tr = Tps::new(2, 3, random::invertible(6, 1e3, &mut g)).unwrap();
        let w = random::state(6, &mut g);
        let back = tr.compose(&tr.coefficient_matrix(&w).unwrap()).unwrap();
        assert!((back - w).norm() < 1e-12);
    }

    #[test]
    fn schmidt_examples() {
        let t = Tps::god_given(2, 2);
        for v in [
            r(&[0.0, H, H, 0.0]),
            r(&[0.0, H, -H, 0.0]),
            r(&[H, 0.0, 0.0, H]),
            r(&[H, 0.0, 0.0, -H]),
        ] {
            let s = t.schmidt(&v, &tol()).unwrap();
            assert_eq!(s.rank, 2);
            assert!(s.coefficients.iter().all(|x| (x - H).abs() < 1e-12));
        }
        let bell = bell_tps();
        for j in 0..2 {
            for i in 0..2 {
                assert_eq!(bell.schmidt(&bell.column(j, i), &tol()).unwrap().rank, 1);
            }
        }
        let w = t.compose(&ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)])).unwrap();
        let s = t.schmidt(&w, &tol()).unwrap();
        assert_eq!(s.rank, 2);
        // Symmetric, so σ = |λ| with λ = (1.5 ± √4.25)/2.
        let root = 4.25f64.sqrt();
        assert!((s.coefficients[0] - (1.5 + root) / 2.0).abs() < 1e-13);
        assert!((s.coefficients[1] - (root - 1.5) / 2.0).abs() < 1e-13);
        assert!((s.reconstruct() - t.coefficient_matrix(&w).unwrap()).norm() < 1e-13);

        assert!(matches!(
            t.schmidt(&ComplexVector::zeros(4), &tol()),
            Err(Error::ZeroState { .. })
        ));
    }

    #[test]
    fn product_verdicts() {
        let god = Tps::god_given(2, 2);
        assert!(god.is_product(&r(&[1.0, 0.0, 0.0, 0.0]), &tol()).unwrap());
        assert!(!god.is_product(&psi_plus(), &tol()).unwrap());
        assert!(bell_tps().is_product(&psi_plus(), &tol()).unwrap());
    }

    #[test]
    fn compatibility() {
        assert!(Tps::god_given(2, 2).is_inner_product_compatible(&tol()));
        let mut d = identity(4);
        d[(3, 3)] = c(2.0, 0.0);
        assert!(!Tps::new(2, 2, d).unwrap().is_inner_product_compatible(&tol()));
        assert!(bell_tps().is_inner_product_compatible(&tol()));
    }

    #[test]
    fn swapping() {
        let god = Tps::god_given(2, 2);
        let s = god.swap_factors();
        let mut expected = identity(4);
        expected.swap_columns(1, 2);
        assert_eq!(s.basis(), &expected);
        assert_eq!(s.swap_factors(), god);

        let mut g = random::rng(11);
        let t = Tps::new(3, 2, random::invertible(6, 1e3, &mut g)).unwrap();
        let st = t.swap_factors();
        assert_eq!(st.shape(), (2, 3));
        assert_eq!(st.swap_factors(), t);
        let w = random::state(6, &mut g);
        let c1 = t.coefficient_matrix(&w).unwrap();
        let c2 = st.coefficient_matrix(&w).unwrap();
        assert!((c1.transpose() - c2).norm() < 1e-12);
    }

    #[test]
    fn equivalence_examples() {
        let mut g = random::rng(3);
        let t = Tps::new(2, 3, random::unitary(6, &mut g)).unwrap();
        assert_eq!(
            tps_equivalent(&t, &t, &tol()).unwrap(),
            EquivalenceVerdict { equivalent: true, swapped: false }
        );
        assert_eq!(
            tps_equivalent(&t, &t.swap_factors(), &tol()).unwrap(),
            EquivalenceVerdict { equivalent: true, swapped: true }
        );
        let god = Tps::god_given(2, 2);
        let bell = bell_tps();
        // ψ⁺ is entangled in one and a product in the other, so the product sets differ.
        assert_ne!(
            god.is_product(&psi_plus(), &tol()).unwrap(),
            bell.is_product(&psi_plus(), &tol()).unwrap()
        );
        assert!(!tps_equivalent(&god, &bell, &tol()).unwrap().equivalent);
        assert!(matches!(
            tps_equivalent(&god, &Tps::god_given(2, 3), &tol()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn local_rescaling_preserves_equivalence() {
        // (A ⊗ B) applied to the grid gives the same partition.
        let mut g = random::rng(8);
        let base = random::invertible(6, 1e3, &mut g);
        let a = random::invertible(2, 1e2, &mut g);
        let b = random::invertible(3, 1e2, &mut g);
        let t1 = Tps::new(2, 3, base.clone()).unwrap();
        let t2 = Tps::new(2, 3, &base * a.kronecker(&b)).unwrap();
        let v = tps_equivalent(&t1, &t2, &tol()).unwrap();
        assert!(v.equivalent && !v.swapped);
    }

    #[test]
    fn trivial_shapes() {
        let a = Tps::god_given(1, 4);
        let b = Tps::new(4, 1, random::unitary(4, &mut random::rng(1))).unwrap();
        assert!(a.is_trivial() && b.is_trivial());
        assert_eq!(
            tps_equivalent(&a, &b, &tol()).unwrap(),
            EquivalenceVerdict { equivalent: true, swapped: true }
        );
        assert!(a.is_product(&random::state(4, &mut random::rng(2)), &tol()).unwrap());
    }
}
