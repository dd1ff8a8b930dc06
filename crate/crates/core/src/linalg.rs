//! Dense complex kernels shared by every other module: Hermitian and general
//! eigendecomposition with eigenvalue clustering, SVD, numeric rank, null
//! spaces and orthonormal completion.
//!
//! Matrices are plain `nalgebra` dynamic matrices over `Complex64`. The
//! decompositions themselves come from `nalgebra`; this module adds the
//! tolerance policy (clustering, rank cutoffs) and the canonicalization
//! (ordering, phases) the rest of the crate relies on.

use std::cmp::Ordering;
use std::ops::Range;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Relative tolerance for span membership and span equality of operator sets.
pub const SPAN_TOL: f64 = 1e-8;

/// Relative magnitude window inside which two entries count as tied for the
/// phase convention.
const PHASE_TIE: f64 = 1e-9;

const MAX_SWEEPS: usize = 20_000;

/// Deflation thresholds tried in turn by the complex Schur iteration.
const SCHUR_EPS: [f64; 4] = [f64::EPSILON, 1e-15, 1e-14, 1e-13];

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Numerical thresholds used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Relative gap below which neighbouring eigenvalues are merged.
    pub eig_cluster: f64,
    /// Singular values below `rank_rel * sigma_max` count as zero.
    pub rank_rel: f64,
    /// Absolute bound on verification residuals.
    pub residual: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eig_cluster: 1e-8,
            rank_rel: 1e-10,
            residual: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(eig_cluster: f64, rank_rel: f64, residual: f64) -> Result<Self> {
        let tol = Tolerance {
            eig_cluster,
            rank_rel,
            residual,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eig_cluster", self.eig_cluster),
            ("rank_rel", self.rank_rel),
            ("residual", self.residual),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        if self.rank_rel >= 1.0 {
            return Err(Error::InvalidTolerance(format!(
                "rank_rel must be < 1, got {}",
                self.rank_rel
            )));
        }
        Ok(())
    }
}

pub fn check_finite(m: &ComplexMatrix) -> Result<()> {
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let z = m[(row, col)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { row, col });
            }
        }
    }
    Ok(())
}

pub fn require_square(m: &ComplexMatrix, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// Largest entrywise deviation `max |m - m^H|`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// Kronecker product with `a` as the outer (slow) factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Frobenius inner product `tr(a^H b)`.
pub fn frobenius_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `‖m^H m - I‖_F`.
pub fn unitarity_residual(m: &ComplexMatrix) -> f64 {
    let gram = m.adjoint() * m;
    (gram - identity(m.ncols())).norm()
}

pub fn inverse(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    m.clone().try_inverse()
}

/// Rescales `v` so its largest-magnitude entry is real and positive. Ties
/// (within a relative window of 1e-9) go to the lowest index. Zero vectors
/// are returned unchanged.
pub fn phase_normalized(v: &ComplexVector) -> ComplexVector {
    let phase = phase_factor(v);
    v.map(|x| x * phase)
}

/// Unit-modulus factor that [`phase_normalized`] multiplies by.
pub fn phase_factor(v: &ComplexVector) -> C64 {
    let max = v.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    if max == 0.0 {
        return c(1.0, 0.0);
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - PHASE_TIE))
        .expect("max is attained");
    let z = v[pivot];
    z.conj() / z.norm()
}

/// Unit vector along `v` under the phase convention.
pub fn canonical_unit(v: &ComplexVector) -> ComplexVector {
    let norm = v.norm();
    phase_normalized(&(v / C64::from(norm)))
}

// ---------------------------------------------------------------------------
// Eigendecomposition

/// Eigenvalues in ascending order together with a unitary matrix of
/// eigenvectors (column `p` belongs to `values[p]`).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn clusters(&self, tol: &Tolerance) -> Vec<Range<usize>> {
        cluster_sorted(&self.values, tol)
    }
}

pub fn hermitian_eigendecompose(m: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianEigen> {
    let n = require_square(m, "Hermitian eigenproblem input")?;
    check_finite(m)?;
    let deviation = hermitian_deviation(m);
    if deviation > tol.residual {
        return Err(Error::NotHermitian { deviation });
    }
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    symmetrized_eigen(m)
}

/// Eigendecomposition of the Hermitian part `(m + m^H)/2`, without the
/// Hermiticity check.
pub fn symmetrized_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = m.nrows();
    let sym = (m + m.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::ConvergenceFailure("Hermitian eigendecomposition"))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&p| eig.eigenvalues[p]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |row, col| eig.eigenvectors[(row, order[col])]);
    Ok(HermitianEigen { values, vectors })
}

/// Single-linkage grouping of ascending values: a new cluster starts wherever
/// the gap exceeds `eig_cluster * (max - min + 1)`.
pub fn cluster_sorted(values: &[f64], tol: &Tolerance) -> Vec<Range<usize>> {
    if values.is_empty() {
        return Vec::new();
    }
    let spread = values[values.len() - 1] - values[0];
    let gap = tol.eig_cluster * (spread + 1.0);
    let mut out = Vec::new();
    let mut start = 0;
    for p in 1..values.len() {
        if values[p] - values[p - 1] > gap {
            out.push(start..p);
            start = p;
        }
    }
    out.push(start..values.len());
    out
}

/// One eigenvalue cluster of a diagonalizable operator.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    /// Mean of the clustered eigenvalues.
    pub value: C64,
    /// Orthonormal basis of the eigenspace (n x multiplicity).
    pub basis: ComplexMatrix,
}

impl Eigenspace {
    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }
}

/// Eigenspaces of a diagonalizable matrix, ordered by eigenvalue (real part,
/// then imaginary part). The Hermitian route uses the symmetric solver; the
/// general route takes eigenvalues from a complex Schur form and eigenspaces
/// as null spaces of `m - λ`, and refuses matrices whose eigenvector matrix
/// has condition number ≥ `max_condition`.
pub fn eigenspaces(
    m: &ComplexMatrix,
    hermitian: bool,
    max_condition: f64,
    tol: &Tolerance,
) -> Result<Vec<Eigenspace>> {
    let n = require_square(m, "eigenproblem input")?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if hermitian {
        let eig = hermitian_eigendecompose(m, tol)?;
        return Ok(eig
            .clusters(tol)
            .into_iter()
            .map(|r| {
                let mean = eig.values[r.clone()].iter().sum::<f64>() / r.len() as f64;
                Eigenspace {
                    value: c(mean, 0.0),
                    basis: eig.vectors.columns(r.start, r.len()).into_owned(),
                }
            })
            .collect());
    }

    check_finite(m)?;
    // The QR iteration can stall at a deflation threshold of machine epsilon
    // on strongly non-normal inputs; a slightly looser one converges. The
    // eigenspaces below are validated independently of this threshold.
    let schur = SCHUR_EPS
        .iter()
        .find_map(|&eps| Schur::try_new(m.clone(), eps, MAX_SWEEPS))
        .ok_or(Error::ConvergenceFailure("complex Schur decomposition"))?;
    let values = schur
        .eigenvalues()
        .ok_or(Error::ConvergenceFailure("Schur form is not triangular"))?;
    let values: Vec<C64> = values.iter().copied().collect();
    let (groups, threshold) = cluster_complex(&values, tol);

    let scale = 1.0 + max_abs(m);
    let cut = threshold.max(tol.residual * scale);
    let mut spaces = Vec::with_capacity(groups.len());
    let mut all_columns = 0;
    for group in groups {
        let value = group.iter().map(|&p| values[p]).sum::<C64>() / C64::from(group.len() as f64);
        let shifted = m - identity(n) * value;
        let basis = null_space_abs(&shifted, cut)?;
        if basis.ncols() != group.len() {
            return Err(Error::NotDiagonalizable(format!(
                "eigenvalue {value} has algebraic multiplicity {} but geometric multiplicity {}",
                group.len(),
                basis.ncols()
            )));
        }
        all_columns += basis.ncols();
        spaces.push(Eigenspace { value, basis });
    }
    if all_columns != n {
        return Err(Error::NotDiagonalizable(format!(
            "eigenvectors span {all_columns} of {n} dimensions"
        )));
    }
    let stacked = ComplexMatrix::from_columns(
        &spaces
            .iter()
            .flat_map(|s| s.basis.column_iter().map(|c| c.into_owned()))
            .collect::<Vec<_>>(),
    );
    let cond = condition_number(&stacked)?;
    if !(cond < max_condition) {
        return Err(Error::NotDiagonalizable(format!(
            "eigenvector matrix condition number {cond:e} exceeds {max_condition:e}"
        )));
    }
    Ok(spaces)
}

/// Groups complex values by single linkage at distance
/// `eig_cluster * (diameter + 1)`; returns groups sorted by their centers and
/// the linkage threshold.
pub fn cluster_complex(values: &[C64], tol: &Tolerance) -> (Vec<Vec<usize>>, f64) {
    let n = values.len();
    let mut diameter = 0.0f64;
    for a in 0..n {
        for b in a + 1..n {
            diameter = diameter.max((values[a] - values[b]).norm());
        }
    }
    let threshold = tol.eig_cluster * (diameter + 1.0);

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..n {
        for b in a + 1..n {
            if (values[a] - values[b]).norm() <= threshold {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for p in 0..n {
        let root = find(&mut parent, p);
        if root_slot[root] == usize::MAX {
            root_slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[root]].push(p);
    }
    let center =
        |g: &Vec<usize>| g.iter().map(|&p| values[p]).sum::<C64>() / C64::from(g.len() as f64);
    groups.sort_by(|a, b| compare_complex(center(a), center(b), threshold));
    (groups, threshold)
}

/// Orders by real part, falling back to the imaginary part when the real
/// parts agree within `eps`.
pub fn compare_complex(a: C64, b: C64, eps: f64) -> Ordering {
    if (a.re - b.re).abs() > eps {
        a.re.total_cmp(&b.re)
    } else {
        a.im.total_cmp(&b.im)
    }
}

// ---------------------------------------------------------------------------
// SVD and rank

/// Full singular value decomposition `m = u diag(sigma) v^H` with square
/// unitary `u`, `v` and `sigma` descending of length `min(rows, cols)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (rows, cols) = (self.u.nrows(), self.v.nrows());
        let mut s = ComplexMatrix::zeros(rows, cols);
        for (p, &x) in self.sigma.iter().enumerate() {
            s[(p, p)] = c(x, 0.0);
        }
        &self.u * s * self.v.adjoint()
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        rank_from_sigma(&self.sigma, tol.rank_rel)
    }
}

fn rank_from_sigma(sigma: &[f64], rel: f64) -> usize {
    match sigma.first() {
        Some(&top) if top > 0.0 => sigma.iter().filter(|&&s| s > rel * top).count(),
        _ => 0,
    }
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    check_finite(m)?;
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(Svd {
            u: identity(rows),
            sigma: Vec::new(),
            v: identity(cols),
        });
    }
    let dec = SVD::try_new(m.clone(), true, true, f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::ConvergenceFailure("singular value decomposition"))?;
    let u_thin = dec.u.ok_or(Error::ConvergenceFailure("SVD left vectors"))?;
    let v_thin = dec
        .v_t
        .ok_or(Error::ConvergenceFailure("SVD right vectors"))?
        .adjoint();
    let mut order: Vec<usize> = (0..dec.singular_values.len()).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    let sigma: Vec<f64> = order.iter().map(|&p| dec.singular_values[p]).collect();
    let u_cols: Vec<ComplexVector> = order.iter().map(|&p| u_thin.column(p).into_owned()).collect();
    let v_cols: Vec<ComplexVector> = order.iter().map(|&p| v_thin.column(p).into_owned()).collect();
    Ok(Svd {
        u: extend_to_unitary(u_cols, rows),
        sigma,
        v: extend_to_unitary(v_cols, cols),
    })
}

/// Number of singular values above `tol.rank_rel * sigma_max`; zero for the
/// zero matrix.
pub fn numeric_rank(m: &ComplexMatrix, tol: &Tolerance) -> usize {
    match svd(m) {
        Ok(s) => s.rank(tol),
        Err(_) => 0,
    }
}

pub fn condition_number(m: &ComplexMatrix) -> Result<f64> {
    let s = svd(m)?;
    let (Some(&top), Some(&bottom)) = (s.sigma.first(), s.sigma.last()) else {
        return Ok(1.0);
    };
    Ok(if bottom > 0.0 { top / bottom } else { f64::INFINITY })
}

/// Orthonormal basis of `ker m`: right singular vectors whose singular value
/// is at most `rel * sigma_max` (every vector when `m` is zero).
pub fn null_space(m: &ComplexMatrix, rel: f64) -> Result<ComplexMatrix> {
    let s = svd(m)?;
    let top = s.sigma.first().copied().unwrap_or(0.0);
    Ok(kernel_columns(&s, rel * top))
}

/// Like [`null_space`] with an absolute singular-value cutoff.
pub fn null_space_abs(m: &ComplexMatrix, cut: f64) -> Result<ComplexMatrix> {
    let s = svd(m)?;
    Ok(kernel_columns(&s, cut))
}

fn kernel_columns(s: &Svd, cut: f64) -> ComplexMatrix {
    let cols = s.v.ncols();
    let rank = s.sigma.iter().filter(|&&x| x > cut).count();
    s.v.columns(rank, cols - rank).into_owned()
}

/// Orthonormal basis of the column space at the rank cutoff.
pub fn range_basis(m: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let s = svd(m)?;
    let r = s.rank(tol);
    Ok(s.u.columns(0, r).into_owned())
}

/// Sine of the largest principal angle between two subspaces given by
/// orthonormal column bases; 1 when the dimensions differ.
pub fn subspace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.ncols() != b.ncols() || a.nrows() != b.nrows() {
        return 1.0;
    }
    let resid = |x: &ComplexMatrix, y: &ComplexMatrix| {
        let r = x - y * (y.adjoint() * x);
        svd(&r).map(|s| s.sigma.first().copied().unwrap_or(0.0)).unwrap_or(f64::INFINITY)
    };
    resid(a, b).max(resid(b, a))
}

// ---------------------------------------------------------------------------
// Orthonormal completion

/// Extends orthonormal columns `vs` (n x m, m ≤ n) to an n x n unitary whose
/// first m columns are exactly `vs`. New columns are drawn from the standard
/// basis, always taking the candidate with the largest residual after
/// projecting out the current span (lowest index on ties).
pub fn complete_orthonormal(vs: &ComplexMatrix, n: usize, tol: &Tolerance) -> Result<ComplexMatrix> {
    if vs.nrows() != n || vs.ncols() > n {
        return Err(Error::DimensionMismatch(format!(
            "cannot complete a {}x{} column bundle to a {n}x{n} unitary",
            vs.nrows(),
            vs.ncols()
        )));
    }
    check_finite(vs)?;
    let residual = unitarity_residual(vs);
    if residual > tol.residual {
        return Err(Error::NotOrthonormal { residual });
    }
    let cols: Vec<ComplexVector> = vs.column_iter().map(|c| c.into_owned()).collect();
    Ok(extend_to_unitary(cols, n))
}

/// Re-orthonormalizes the given columns (dropping any that are numerically
/// dependent) and fills up with standard basis vectors.
fn extend_to_unitary(cols: Vec<ComplexVector>, n: usize) -> ComplexMatrix {
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(n);
    for v in cols {
        if let Some(q) = orthogonal_residual(&basis, &v) {
            if q.norm() > 0.5 * v.norm().max(f64::MIN_POSITIVE) {
                let norm = q.norm();
                basis.push(q / C64::from(norm));
            }
        }
        if basis.len() == n {
            break;
        }
    }
    while basis.len() < n {
        let mut best: Option<(f64, ComplexVector)> = None;
        for p in 0..n {
            let mut e = ComplexVector::zeros(n);
            e[p] = c(1.0, 0.0);
            let r = orthogonal_residual(&basis, &e).expect("unit vector");
            let norm = r.norm();
            if best.as_ref().map_or(true, |(b, _)| norm > *b * (1.0 + 1e-12)) {
                best = Some((norm, r));
            }
        }
        let (norm, r) = best.expect("n > 0");
        basis.push(r / C64::from(norm));
    }
    ComplexMatrix::from_columns(&basis)
}

/// `v` minus its projection onto the orthonormal `basis`, with one pass of
/// re-orthogonalization.
pub fn orthogonal_residual(basis: &[ComplexVector], v: &ComplexVector) -> Option<ComplexVector> {
    let mut r = v.clone();
    for _ in 0..2 {
        for q in basis {
            let coeff = q.dotc(&r);
            r -= q * coeff;
        }
    }
    if r.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Some(r)
    } else {
        None
    }
}

/// Gram–Schmidt over `vectors`, keeping those whose residual exceeds
/// `rel * ‖v‖`. Returns orthonormal vectors.
pub fn orthonormalize(vectors: &[ComplexVector], rel: f64) -> Vec<ComplexVector> {
    let mut basis: Vec<ComplexVector> = Vec::new();
    for v in vectors {
        let norm_v = v.norm();
        if norm_v == 0.0 {
            continue;
        }
        if let Some(r) = orthogonal_residual(&basis, v) {
            let norm = r.norm();
            if norm > rel * norm_v {
                basis.push(r / C64::from(norm));
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_row_slice(rows, cols, &data.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(1e-8, 1e-10, 1e-10).is_ok());
        assert!(Tolerance::new(0.0, 1e-10, 1e-10).is_err());
        assert!(Tolerance::new(1e-8, 1.0, 1e-10).is_err());
        assert!(Tolerance::new(1e-8, 1e-10, f64::NAN).is_err());
    }

    #[test]
    fn diagonal_eigendecomposition_is_permuted_identity() {
        let m = real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let eig = hermitian_eigendecompose(&m, &tol()).unwrap();
        assert_eq!(eig.values.len(), 2);
        assert!((eig.values[0] + 1.0).abs() < 1e-14 && (eig.values[1] - 1.0).abs() < 1e-14);
        // |entries| form the swap permutation
        assert!((eig.vectors[(1, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((eig.vectors[(0, 1)].norm() - 1.0).abs() < 1e-14);
        assert!(eig.vectors[(0, 0)].norm() < 1e-14);
    }

    #[test]
    fn pauli_x_eigenvectors() {
        // Characteristic polynomial λ² - 1: λ = ∓1 with vectors (1, ∓1)/√2.
        let m = real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let eig = hermitian_eigendecompose(&m, &tol()).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14 && (eig.values[1] - 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = canonical_unit(&eig.vectors.column(0).into_owned());
        let v1 = canonical_unit(&eig.vectors.column(1).into_owned());
        assert!((v0 - ComplexVector::from_vec(vec![c(h, 0.0), c(-h, 0.0)])).norm() < 1e-14);
        assert!((v1 - ComplexVector::from_vec(vec![c(h, 0.0), c(h, 0.0)])).norm() < 1e-14);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            hermitian_eigendecompose(&m, &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn clustering_merges_close_values() {
        let t = tol();
        let groups = cluster_sorted(&[-1.0, -1.0 + 1e-12, 1.0, 1.0, 3.0], &t);
        assert_eq!(groups, vec![0..2, 2..4, 4..5]);
    }

    #[test]
    fn svd_examples() {
        let zero = ComplexMatrix::zeros(3, 2);
        let s = svd(&zero).unwrap();
        assert!(s.sigma.iter().all(|&x| x == 0.0));
        assert!(unitarity_residual(&s.u) < 1e-12 && unitarity_residual(&s.v) < 1e-12);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = svd(&real(2, 2, &[0.0, h, h, 0.0])).unwrap();
        assert!((s.sigma[0] - h).abs() < 1e-14 && (s.sigma[1] - h).abs() < 1e-14);

        // mᵀm = [[2, 1.5], [1.5, 1.25]]: σ² = (3.25 ± √(3.25² - 4·0.25)) / 2.
        let m = real(2, 2, &[1.0, 1.0, 1.0, 0.5]);
        let s = svd(&m).unwrap();
        let disc = (3.25f64 * 3.25 - 1.0).sqrt();
        let expected = [((3.25 + disc) / 2.0).sqrt(), ((3.25 - disc) / 2.0).sqrt()];
        assert!((s.sigma[0] - expected[0]).abs() < 1e-13);
        assert!((s.sigma[1] - expected[1]).abs() < 1e-13);
        assert!((s.reconstruct() - m).norm() < 1e-13);
    }

    #[test]
    fn rank_examples() {
        let t = tol();
        assert_eq!(numeric_rank(&identity(3), &t), 3);
        assert_eq!(numeric_rank(&real(2, 2, &[1.0, 1.0, 1.0, 1.0]), &t), 1);
        assert_eq!(numeric_rank(&real(2, 2, &[1.0, 1.0, 1.0, 0.5]), &t), 2);
        assert_eq!(numeric_rank(&ComplexMatrix::zeros(2, 3), &t), 0);
    }

    #[test]
    fn completion_examples() {
        let t = tol();
        let e0 = real(2, 1, &[1.0, 0.0]);
        assert!((complete_orthonormal(&e0, 2, &t).unwrap() - identity(2)).norm() < 1e-15);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = complete_orthonormal(&real(2, 1, &[h, h]), 2, &t).unwrap();
        assert!(unitarity_residual(&u) < 1e-14);
        let second = canonical_unit(&u.column(1).into_owned());
        assert!((second - ComplexVector::from_vec(vec![c(h, 0.0), c(-h, 0.0)])).norm() < 1e-14);

        let u = complete_orthonormal(&ComplexMatrix::zeros(3, 0), 3, &t).unwrap();
        assert!(unitarity_residual(&u) < 1e-14);

        assert!(matches!(
            complete_orthonormal(&real(2, 1, &[1.0, 1.0]), 2, &t),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn general_eigenspaces_of_non_normal_matrix() {
        let m = real(2, 2, &[1.0, -2.0, 0.0, -1.0]);
        let spaces = eigenspaces(&m, false, 1e6, &tol()).unwrap();
        assert_eq!(spaces.len(), 2);
        assert!((spaces[0].value - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((spaces[1].value - c(1.0, 0.0)).norm() < 1e-12);
        let jordan = real(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(
            eigenspaces(&jordan, false, 1e6, &tol()),
            Err(Error::NotDiagonalizable(_))
        ));
    }

    #[test]
    fn phase_convention_prefers_lowest_index_on_ties() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = ComplexVector::from_vec(vec![c(0.0, 0.0), c(0.0, h), c(0.0, -h), c(0.0, 0.0)]);
        let p = phase_normalized(&v);
        assert!((p[1] - c(h, 0.0)).norm() < 1e-15);
        assert!((p[2] - c(-h, 0.0)).norm() < 1e-15);
    }
}
