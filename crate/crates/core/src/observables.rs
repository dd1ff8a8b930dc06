//! Standard complete sets of commuting operators.
//!
//! A commuting pair `(r, t)` whose joint eigenspaces are one-dimensional and
//! form a `k × l` grid determines a grid basis, and with it a tensor product
//! structure in which `r` acts on the first factor and `t` on the second.
//! Two such pairs sharing one family of characteristic subspaces, and acting
//! irreducibly on it, pin the partition down uniquely.

use crate::algebra::{tps_to_tpp, OperatorAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{
    c, canonical_unit, check_finite, commutator, condition_number, eigenspaces, hermitian_deviation,
    identity, kron, max_abs, null_space, phase_factor, require_square, subspace_distance,
    ComplexMatrix, ComplexVector, Eigenspace, Tolerance, C64, SPAN_TOL,
};
use crate::tps::Tps;

/// Eigenvector matrices with a larger condition number are treated as
/// numerically defective.
pub const MAX_EIGEN_CONDITION: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct ObservablePair {
    pub r: ComplexMatrix,
    pub t: ComplexMatrix,
    /// Both operators are self-adjoint.
    pub hermitian: bool,
}

impl ObservablePair {
    /// Checks shapes, finiteness and commutation; `hermitian` is detected.
    pub fn new(r: ComplexMatrix, t: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let hermitian =
            hermitian_deviation(&r) <= tol.residual && hermitian_deviation(&t) <= tol.residual;
        Self::from_parts(r, t, hermitian, tol)
    }

    /// Like [`ObservablePair::new`] with an explicit flag. Claiming
    /// `hermitian` for a non-self-adjoint operator is an error.
    pub fn from_parts(r: ComplexMatrix, t: ComplexMatrix, hermitian: bool, tol: &Tolerance) -> Result<Self> {
        tol.validate()?;
        let n = require_square(&r, "r")?;
        if require_square(&t, "t")? != n {
            return Err(Error::DimensionMismatch(format!(
                "r is {n}x{n} but t is {}x{}",
                t.nrows(),
                t.ncols()
            )));
        }
        check_finite(&r)?;
        check_finite(&t)?;
        if hermitian {
            let deviation = hermitian_deviation(&r).max(hermitian_deviation(&t));
            if deviation > tol.residual {
                return Err(Error::NotHermitian { deviation });
            }
        }
        let deviation = max_abs(&commutator(&r, &t));
        if deviation > commute_bound(&r, &t, tol) {
            return Err(Error::NotCommuting { deviation });
        }
        Ok(ObservablePair { r, t, hermitian })
    }

    pub fn dim(&self) -> usize {
        self.r.nrows()
    }
}

/// `tol.residual`, scaled up for operators with entries beyond unit size so
/// that rounding in the product does not count as non-commutation.
fn commute_bound(r: &ComplexMatrix, t: &ComplexMatrix, tol: &Tolerance) -> f64 {
    tol.residual * max_abs(r).max(1.0) * max_abs(t).max(1.0)
}

/// The characteristic subspaces of a standard complete set and its grid of
/// joint eigenvectors.
#[derive(Debug, Clone)]
pub struct CharacteristicSets {
    pub k: usize,
    pub l: usize,
    /// Eigenvalue clusters of `r`, ordered by real then imaginary part.
    pub r_eigenvalues: Vec<C64>,
    pub t_eigenvalues: Vec<C64>,
    /// `M_i`: eigenspace of `t` for `μ_i`, as `n × k` orthonormal columns.
    pub m_spaces: Vec<ComplexMatrix>,
    /// `N_j`: eigenspace of `r` for `λ_j`, as `n × l` orthonormal columns.
    pub n_spaces: Vec<ComplexMatrix>,
    /// Unit joint eigenvectors; column `j·l + i` spans `N_j ∩ M_i`.
    pub grid: ComplexMatrix,
}

impl CharacteristicSets {
    /// Same data with the roles of `r` and `t` exchanged.
    pub fn transposed(&self) -> CharacteristicSets {
        let n = self.grid.nrows();
        let mut grid = ComplexMatrix::zeros(n, n);
        for j in 0..self.k {
            for i in 0..self.l {
                grid.set_column(i * self.k + j, &self.grid.column(j * self.l + i));
            }
        }
        CharacteristicSets {
            k: self.l,
            l: self.k,
            r_eigenvalues: self.t_eigenvalues.clone(),
            t_eigenvalues: self.r_eigenvalues.clone(),
            m_spaces: self.n_spaces.clone(),
            n_spaces: self.m_spaces.clone(),
            grid,
        }
    }

    pub fn joint_vector(&self, j: usize, i: usize) -> ComplexVector {
        self.grid.column(j * self.l + i).into_owned()
    }
}

/// Diagonalizes `r` and `t`, checks that eigenvalue multiplicities form a
/// `k × l` grid, and resolves each eigenspace of `r` into one-dimensional
/// joint eigenspaces by diagonalizing `t` on it.
pub fn verify_standard_complete(p: &ObservablePair, tol: &Tolerance) -> Result<CharacteristicSets> {
    let n = p.dim();
    let r_spaces = eigenspaces(&p.r, p.hermitian, MAX_EIGEN_CONDITION, tol)?;
    let t_spaces = eigenspaces(&p.t, p.hermitian, MAX_EIGEN_CONDITION, tol)?;
    let (k, l) = (r_spaces.len(), t_spaces.len());
    if k * l != n {
        return Err(Error::MultiplicityViolation(format!(
            "r has {k} distinct eigenvalues and t has {l}, but the dimension is {n}"
        )));
    }
    if let Some(s) = r_spaces.iter().find(|s| s.multiplicity() != l) {
        return Err(Error::MultiplicityViolation(format!(
            "eigenvalue {} of r has multiplicity {}, expected {l}",
            s.value,
            s.multiplicity()
        )));
    }
    if let Some(s) = t_spaces.iter().find(|s| s.multiplicity() != k) {
        return Err(Error::MultiplicityViolation(format!(
            "eigenvalue {} of t has multiplicity {}, expected {k}",
            s.value,
            s.multiplicity()
        )));
    }

    let mut grid = ComplexMatrix::zeros(n, n);
    for (j, nj) in r_spaces.iter().enumerate() {
        let q = &nj.basis;
        let restricted = q.adjoint() * &p.t * q;
        let parts = eigenspaces(&restricted, p.hermitian, MAX_EIGEN_CONDITION, tol)?;
        if parts.len() != l || parts.iter().any(|s| s.multiplicity() != 1) {
            return Err(Error::JointDegeneracy(format!(
                "t does not split the eigenspace of r for {} into {l} lines",
                nj.value
            )));
        }
        let mut seen = vec![false; l];
        for part in &parts {
            let i = nearest(&t_spaces, part.value);
            if seen[i] {
                return Err(Error::JointDegeneracy(format!(
                    "two joint eigenvectors in the eigenspace of r for {} share t-eigenvalue {}",
                    nj.value, t_spaces[i].value
                )));
            }
            seen[i] = true;
            let x = q * part.basis.column(0);
            grid.set_column(j * l + i, &canonical_unit(&x));
        }
    }

    Ok(CharacteristicSets {
        k,
        l,
        r_eigenvalues: r_spaces.iter().map(|s| s.value).collect(),
        t_eigenvalues: t_spaces.iter().map(|s| s.value).collect(),
        m_spaces: t_spaces.into_iter().map(|s| s.basis).collect(),
        n_spaces: r_spaces.into_iter().map(|s| s.basis).collect(),
        grid,
    })
}

fn nearest(spaces: &[Eigenspace], value: C64) -> usize {
    spaces
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| (a.value - value).norm().total_cmp(&(b.value - value).norm()))
        .map(|(i, _)| i)
        .expect("at least one eigenspace")
}

/// The tensor product structure whose product basis is the joint
/// eigenvector grid: `r` acts as `diag(λ) ⊗ 1` and `t` as `1 ⊗ diag(μ)`.
pub fn tps_from_observables(p: &ObservablePair, tol: &Tolerance) -> Result<Tps> {
    let cs = verify_standard_complete(p, tol)?;
    Tps::with_tolerance(cs.k, cs.l, cs.grid, tol)
}

/// A second pair sharing `t` whose `r̃` acts irreducibly on every `M_i`.
///
/// On each `M_i`, in the joint eigenvector coordinates, `r̃` is the upper
/// triangular matrix with `r̃ e_0 = λ_0 e_0` and
/// `r̃ (e_{j-1} + e_j) = λ_j (e_{j-1} + e_j)`.
pub fn complementary_pair(p: &ObservablePair, cs: &CharacteristicSets) -> ObservablePair {
    let k = cs.k;
    let mut block = ComplexMatrix::zeros(k, k);
    if k > 0 {
        block[(0, 0)] = cs.r_eigenvalues[0];
    }
    for j in 1..k {
        let lambda = cs.r_eigenvalues[j];
        let prev = block.column(j - 1).into_owned();
        let mut col = -prev;
        col[j - 1] += lambda;
        col[j] += lambda;
        block.set_column(j, &col);
    }
    let lifted = kron(&block, &identity(cs.l));
    let inverse = cs
        .grid
        .clone()
        .try_inverse()
        .expect("joint eigenvector grid of a standard complete set is invertible");
    let r = &cs.grid * lifted * inverse;
    let hermitian = k <= 1 && p.hermitian;
    ObservablePair {
        r,
        t: p.t.clone(),
        hermitian,
    }
}

/// Which clause of the complementarity definition holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Complementarity {
    /// Shared `M`-sets, with the `r` operators irreducible on each `M_i`.
    SharedM,
    /// Shared `N`-sets, with the `t` operators irreducible on each `N_j`.
    SharedN,
}

/// True if the pairs are complementary (either clause).
pub fn verify_complementary(p1: &ObservablePair, p2: &ObservablePair, tol: &Tolerance) -> Result<bool> {
    Ok(complementarity(p1, p2, tol)?.is_some())
}

/// Checks the shared-`M` clause first, then the shared-`N` clause.
pub fn complementarity(
    p1: &ObservablePair,
    p2: &ObservablePair,
    tol: &Tolerance,
) -> Result<Option<Complementarity>> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "pairs act on dimensions {} and {}",
            p1.dim(),
            p2.dim()
        )));
    }
    let cs1 = verify_standard_complete(p1, tol)?;
    let cs2 = verify_standard_complete(p2, tol)?;
    if intertwiners(&cs1, &cs2, &p1.r, &p2.r, tol)?.is_some() {
        return Ok(Some(Complementarity::SharedM));
    }
    if intertwiners(&cs1.transposed(), &cs2.transposed(), &p1.t, &p2.t, tol)?.is_some() {
        return Ok(Some(Complementarity::SharedN));
    }
    Ok(None)
}

/// Shared-`M` clause. On success returns, for every `i`, the matrix `X_i`
/// (in the coordinates of the `M`-bases of `cs1`) intertwining the two
/// operators on `M_0` with those on `M_i`; `X_0 = 1`.
fn intertwiners(
    cs1: &CharacteristicSets,
    cs2: &CharacteristicSets,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<Option<Vec<ComplexMatrix>>> {
    if cs1.k != cs2.k || cs1.l != cs2.l {
        return Ok(None);
    }
    let mut used = vec![false; cs2.l];
    for m in &cs1.m_spaces {
        let hit = (0..cs2.l).find(|&q| !used[q] && subspace_distance(m, &cs2.m_spaces[q]) <= SPAN_TOL);
        match hit {
            Some(q) => used[q] = true,
            None => return Ok(None),
        }
    }

    let k = cs1.k;
    let restrict = |q: &ComplexMatrix| (q.adjoint() * a * q, q.adjoint() * b * q);
    let (a0, b0) = restrict(&cs1.m_spaces[0]);
    let mut out = Vec::with_capacity(cs1.l);
    for q in &cs1.m_spaces {
        let (ai, bi) = restrict(q);
        if sylvester_kernel(&[(&ai, &ai), (&bi, &bi)], tol)?.ncols() != 1 {
            return Ok(None);
        }
        let kernel = sylvester_kernel(&[(&ai, &a0), (&bi, &b0)], tol)?;
        if kernel.ncols() != 1 {
            return Ok(None);
        }
        let x = ComplexMatrix::from_column_slice(k, k, kernel.column(0).as_slice());
        if !condition_number(&x).is_ok_and(|cond| cond < MAX_EIGEN_CONDITION) {
            return Ok(None);
        }
        out.push(x);
    }
    // Normalize so that X_0 is exactly the identity.
    let x0_inv = out[0].clone().try_inverse().expect("conditioned above");
    for x in &mut out {
        *x = &*x * &x0_inv;
    }
    out[0] = identity(k);
    Ok(Some(out))
}

/// Solutions `X` of `p X = X q` for every `(p, q)` in `pairs`, as vectorized
/// (column-major) orthonormal columns.
fn sylvester_kernel(pairs: &[(&ComplexMatrix, &ComplexMatrix)], tol: &Tolerance) -> Result<ComplexMatrix> {
    let k = pairs[0].0.nrows();
    let id = identity(k);
    let mut stacked = ComplexMatrix::zeros(pairs.len() * k * k, k * k);
    for (s, (p, q)) in pairs.iter().enumerate() {
        let block = kron(&id, p) - kron(&q.transpose(), &id);
        stacked.view_mut((s * k * k, 0), (k * k, k * k)).copy_from(&block);
    }
    null_space(&stacked, kernel_rel(tol))
}

fn kernel_rel(tol: &Tolerance) -> f64 {
    tol.rank_rel.max(1e-9)
}

/// The unique partition determined by two complementary pairs, together
/// with a grid basis for it. Basis vectors in `M_0` are the joint
/// eigenvectors of the first pair; those in `M_i` are their images under the
/// intertwiner `M_0 → M_i`, scaled by one phase-normalizing scalar per `i`.
pub fn tpp_from_complementary(
    p1: &ObservablePair,
    p2: &ObservablePair,
    tol: &Tolerance,
) -> Result<(OperatorAlgebra, OperatorAlgebra, Tps)> {
    let cs1 = verify_standard_complete(p1, tol)?;
    let cs2 = verify_standard_complete(p2, tol)?;
    let tps = if let Some(xs) = intertwiners(&cs1, &cs2, &p1.r, &p2.r, tol)? {
        synchronic(&cs1, &xs, tol)?
    } else {
        let (t1, t2) = (cs1.transposed(), cs2.transposed());
        match intertwiners(&t1, &t2, &p1.t, &p2.t, tol)? {
            Some(xs) => synchronic(&t1, &xs, tol)?.swap_factors(),
            None => return Err(Error::NotComplementary),
        }
    };
    let (a1, a2) = tps_to_tpp(&tps);
    Ok((a1, a2, tps))
}

fn synchronic(cs: &CharacteristicSets, xs: &[ComplexMatrix], tol: &Tolerance) -> Result<Tps> {
    let (k, l) = (cs.k, cs.l);
    let n = k * l;
    let q0 = &cs.m_spaces[0];
    let mut basis = ComplexMatrix::zeros(n, n);
    for (i, x) in xs.iter().enumerate() {
        let map = &cs.m_spaces[i] * x * q0.adjoint();
        let images: Vec<ComplexVector> = (0..k).map(|j| &map * cs.joint_vector(j, 0)).collect();
        let scale = if i == 0 {
            c(1.0, 0.0)
        } else {
            phase_factor(&images[0]) / C64::from(images[0].norm())
        };
        for (j, y) in images.iter().enumerate() {
            basis.set_column(j * l + i, &(y * scale));
        }
    }
    Tps::with_tolerance(k, l, basis, tol)
}
