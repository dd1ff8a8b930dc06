//! Finite-dimensional operator algebras and tensor product partitions.
//!
//! An [`OperatorAlgebra`] is a multiplication-closed subspace of `M_n`, kept
//! as a Frobenius-orthonormal spanning set. On top of that this module
//! computes closures, commutants, joins and intersections, certifies pairs of
//! algebras as tensor product partitions ([`is_tpp`]), and converts between
//! partitions and grid bases ([`tps_to_tpp`], [`tpp_to_tps`]).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    c, check_finite, commutator, identity, phase_factor, svd, symmetrized_eigen, ComplexMatrix,
    ComplexVector, Tolerance, C64, SPAN_TOL,
};
use crate::observables::{verify_standard_complete, ObservablePair};
use crate::random;
use crate::tps::Tps;

/// Singular values of the stacked commutator map are recovered from its Gram
/// matrix, so anything below this relative level (about the square root of
/// machine precision, squared) is indistinguishable from zero.
const GRAM_KERNEL_REL: f64 = 1e-5;

/// Redraw budget for generic observables in [`tpp_to_tps`].
pub const GENERIC_DRAWS: usize = 16;

#[derive(Debug, Clone)]
pub struct OperatorAlgebra {
    n: usize,
    basis: Vec<ComplexMatrix>,
    unital: bool,
}

fn flatten(m: &ComplexMatrix) -> ComplexVector {
    ComplexVector::from_column_slice(m.as_slice())
}

fn unflatten(n: usize, v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_column_slice(n, n, v)
}

/// Incremental Frobenius-orthonormal span.
struct SpanBuilder {
    n: usize,
    vecs: Vec<ComplexVector>,
}

impl SpanBuilder {
    fn new(n: usize) -> Self {
        SpanBuilder { n, vecs: Vec::new() }
    }

    fn is_full(&self) -> bool {
        self.vecs.len() == self.n * self.n
    }

    /// Adds `m` if it is not already in the span (relative residual above
    /// `SPAN_TOL`). Returns whether the span grew.
    fn push(&mut self, m: &ComplexMatrix) -> bool {
        if self.is_full() {
            return false;
        }
        let v = flatten(m);
        let norm = v.norm();
        if norm == 0.0 {
            return false;
        }
        let mut r = v;
        for _ in 0..2 {
            for q in &self.vecs {
                let coeff = q.dotc(&r);
                r.axpy(-coeff, q, c(1.0, 0.0));
            }
        }
        let rn = r.norm();
        if rn > SPAN_TOL * norm {
            self.vecs.push(r / C64::from(rn));
            true
        } else {
            false
        }
    }

    fn finish(self) -> OperatorAlgebra {
        let n = self.n;
        let basis = self.vecs.iter().map(|v| unflatten(n, v.as_slice())).collect();
        OperatorAlgebra::assemble(n, basis)
    }
}

impl OperatorAlgebra {
    fn assemble(n: usize, basis: Vec<ComplexMatrix>) -> Self {
        let mut a = OperatorAlgebra {
            n,
            basis,
            unital: false,
        };
        a.unital = n > 0 && a.contains(&identity(n));
        a
    }

    /// Orthonormalizes the given matrices without closing under products.
    /// Use [`algebra_generate`] when closure is not already guaranteed.
    pub fn from_span(n: usize, mats: &[ComplexMatrix]) -> Result<Self> {
        let mut builder = SpanBuilder::new(n);
        for m in mats {
            check_dims(n, m)?;
            check_finite(m)?;
            builder.push(m);
        }
        Ok(builder.finish())
    }

    pub fn scalars(n: usize) -> Self {
        let basis = vec![identity(n) / C64::from((n as f64).sqrt())];
        OperatorAlgebra {
            n,
            basis,
            unital: true,
        }
    }

    /// All of `M_n`, spanned by the matrix units.
    pub fn full(n: usize) -> Self {
        let mut basis = Vec::with_capacity(n * n);
        for col in 0..n {
            for row in 0..n {
                let mut e = ComplexMatrix::zeros(n, n);
                e[(row, col)] = c(1.0, 0.0);
                basis.push(e);
            }
        }
        OperatorAlgebra {
            n,
            basis,
            unital: true,
        }
    }

    pub fn dim_space(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn span_basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn project(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for g in &self.basis {
            let coeff: C64 = g.iter().zip(m.iter()).map(|(x, y)| x.conj() * y).sum();
            out += g * coeff;
        }
        out
    }

    /// `‖m - P(m)‖_F / ‖m‖_F` (absolute residual for `m = 0`).
    pub fn residual(&self, m: &ComplexMatrix) -> f64 {
        let r = (m - self.project(m)).norm();
        let norm = m.norm();
        if norm > 0.0 {
            r / norm
        } else {
            r
        }
    }

    pub fn contains(&self, m: &ComplexMatrix) -> bool {
        m.shape() == (self.n, self.n) && self.residual(m) <= SPAN_TOL
    }

    pub fn is_star_closed(&self) -> bool {
        self.basis.iter().all(|g| self.contains(&g.adjoint()))
    }

    /// Worst relative residual of pairwise basis products against the span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.basis {
            for b in &self.basis {
                worst = worst.max(self.residual(&(a * b)));
            }
        }
        worst
    }

    fn stacked(&self) -> ComplexMatrix {
        let cols: Vec<ComplexVector> = self.basis.iter().map(flatten).collect();
        if cols.is_empty() {
            ComplexMatrix::zeros(self.n * self.n, 0)
        } else {
            ComplexMatrix::from_columns(&cols)
        }
    }
}

fn check_dims(n: usize, m: &ComplexMatrix) -> Result<()> {
    if m.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "expected a {n}x{n} operator, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Smallest multiplication-closed span containing `generators` (and the
/// identity when requested). The span is grown by left-multiplying every new
/// element by every generator until nothing new appears, which enumerates
/// all words in the generators.
pub fn algebra_generate(
    generators: &[ComplexMatrix],
    include_identity: bool,
    _tol: &Tolerance,
) -> Result<OperatorAlgebra> {
    let Some(first) = generators.first() else {
        return Err(Error::DimensionMismatch(
            "at least one generator is required".into(),
        ));
    };
    let n = first.nrows();
    for g in generators {
        check_dims(n, g)?;
        check_finite(g)?;
    }
    let mut builder = SpanBuilder::new(n);
    if include_identity {
        builder.push(&identity(n));
    }
    for g in generators {
        builder.push(g);
    }
    let mut next = 0;
    while next < builder.vecs.len() && !builder.is_full() {
        let current = unflatten(n, builder.vecs[next].as_slice());
        next += 1;
        for g in generators {
            builder.push(&(g * &current));
            if builder.is_full() {
                break;
            }
        }
    }
    Ok(builder.finish())
}

/// `{X : [g, X] = 0 for all g in a}`.
///
/// The kernel of the stacked map `X ↦ (gX − Xg)_g` is read off the Gram
/// operator `Σ_g L_g^H L_g`, assembled in closed form from Kronecker
/// products (vec is column-major, so `L_g = I ⊗ g − gᵀ ⊗ I`).
pub fn commutant(a: &OperatorAlgebra, tol: &Tolerance) -> OperatorAlgebra {
    let n = a.n;
    let big = n * n;
    let mut gram = ComplexMatrix::zeros(big, big);
    let mut left = ComplexMatrix::zeros(n, n); // Σ g^H g
    let mut right = ComplexMatrix::zeros(n, n); // Σ conj(g g^H)
    for g in &a.basis {
        left += g.adjoint() * g;
        right += (g * g.adjoint()).map(|z| z.conj());
        // −(gᵀ ⊗ g^H) − (conj(g) ⊗ g)
        for p in 0..n {
            for r in 0..n {
                let gt = g[(r, p)]; // gᵀ[p, r]
                let gb = g[(p, r)].conj(); // conj(g)[p, r]
                for q in 0..n {
                    for s in 0..n {
                        let term = gt * g[(s, q)].conj() + gb * g[(q, s)];
                        gram[(p * n + q, r * n + s)] -= term;
                    }
                }
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for s in 0..n {
                // I ⊗ left
                gram[(p * n + q, p * n + s)] += left[(q, s)];
                // right ⊗ I
                gram[(q * n + p, s * n + p)] += right[(q, s)];
            }
        }
    }

    let eig = symmetrized_eigen(&gram).expect("Hermitian eigendecomposition of a Gram matrix");
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let rel = tol.rank_rel.max(GRAM_KERNEL_REL);
    let cut = rel * rel * top;
    let basis: Vec<ComplexMatrix> = eig
        .values
        .iter()
        .enumerate()
        .take_while(|(_, &v)| v <= cut)
        .map(|(p, _)| unflatten(n, eig.vectors.column(p).as_slice()))
        .collect();
    OperatorAlgebra {
        n,
        basis,
        unital: true,
    }
}

/// The algebra generated by `a1 ∪ a2`.
pub fn join(a1: &OperatorAlgebra, a2: &OperatorAlgebra, tol: &Tolerance) -> Result<OperatorAlgebra> {
    if a1.n != a2.n {
        return Err(Error::DimensionMismatch(format!(
            "algebras act on dimensions {} and {}",
            a1.n, a2.n
        )));
    }
    let gens: Vec<ComplexMatrix> = a1.basis.iter().chain(a2.basis.iter()).cloned().collect();
    if gens.is_empty() {
        return Ok(OperatorAlgebra::assemble(a1.n, Vec::new()));
    }
    algebra_generate(&gens, false, tol)
}

/// `a ∩ b`: directions of `a` with principal angle zero to `b`.
pub fn intersection(a: &OperatorAlgebra, b: &OperatorAlgebra) -> OperatorAlgebra {
    let n = a.n;
    if a.basis.is_empty() || b.basis.is_empty() {
        return OperatorAlgebra::assemble(n, Vec::new());
    }
    let qa = a.stacked();
    let qb = b.stacked();
    let overlap = qa.adjoint() * &qb;
    let s = svd(&overlap).expect("finite overlap matrix");
    let basis = s
        .sigma
        .iter()
        .enumerate()
        .take_while(|(_, &x)| x >= 1.0 - SPAN_TOL)
        .map(|(m, _)| {
            let v = &qa * s.u.column(m);
            unflatten(n, v.as_slice())
        })
        .collect();
    OperatorAlgebra::assemble(n, basis)
}

/// `a ∩ a'`.
pub fn center(a: &OperatorAlgebra, tol: &Tolerance) -> OperatorAlgebra {
    intersection(a, &commutant(a, tol))
}

/// Root-sum-square residual of projecting `a`'s orthonormal basis onto `b`.
pub fn span_residual(a: &OperatorAlgebra, b: &OperatorAlgebra) -> f64 {
    a.basis
        .iter()
        .map(|g| (g - b.project(g)).norm_squared())
        .sum::<f64>()
        .sqrt()
}

/// Same dimension and mutual projection residual ≤ `1e-8·√dim`.
pub fn span_equal(a: &OperatorAlgebra, b: &OperatorAlgebra) -> bool {
    if a.n != b.n || a.dim() != b.dim() {
        return false;
    }
    let bound = SPAN_TOL * (a.dim() as f64).sqrt().max(1.0);
    span_residual(a, b) <= bound && span_residual(b, a) <= bound
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TppChecks {
    pub commute: bool,
    pub join_full: bool,
    pub mutual_commutant: bool,
    pub trivial_center: bool,
    pub star_closed: bool,
    pub dims_square: bool,
}

impl TppChecks {
    pub fn all(&self) -> bool {
        self.commute
            && self.join_full
            && self.mutual_commutant
            && self.trivial_center
            && self.star_closed
            && self.dims_square
    }

    pub fn failing(&self) -> Vec<&'static str> {
        [
            ("commute", self.commute),
            ("join_full", self.join_full),
            ("mutual_commutant", self.mutual_commutant),
            ("trivial_center", self.trivial_center),
            ("star_closed", self.star_closed),
            ("dims_square", self.dims_square),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name)
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TppVerdict {
    pub is_tpp: bool,
    pub k: usize,
    pub l: usize,
    /// One of the factors is one-dimensional.
    pub trivial_shape: bool,
    pub checks: TppChecks,
}

fn exact_sqrt(x: usize) -> Option<usize> {
    let r = (x as f64).sqrt().round() as usize;
    (r * r == x).then_some(r)
}

/// Certifies `(a1, a2)` as a tensor product partition of `M_n`.
///
/// Only star-closed pairs can be certified; for other inputs the necessary
/// conditions are still evaluated and reported, but `is_tpp` stays false.
pub fn is_tpp(a1: &OperatorAlgebra, a2: &OperatorAlgebra, tol: &Tolerance) -> Result<TppVerdict> {
    if a1.n != a2.n {
        return Err(Error::DimensionMismatch(format!(
            "algebras act on dimensions {} and {}",
            a1.n, a2.n
        )));
    }
    if !a1.unital || !a2.unital {
        return Err(Error::NonUnital);
    }
    let n = a1.n;
    let commute_bound = tol.residual * (n as f64).max(1.0);
    let commute = a1.basis.iter().all(|g| {
        a2.basis
            .iter()
            .all(|h| commutator(g, h).norm() <= commute_bound)
    });
    let join_full = join(a1, a2, tol)?.dim() == n * n;
    let c1 = commutant(a1, tol);
    let c2 = commutant(a2, tol);
    let mutual_commutant = span_equal(&c1, a2) && span_equal(&c2, a1);
    let trivial_center = intersection(a1, &c1).dim() == 1;
    let star_closed = a1.is_star_closed() && a2.is_star_closed();
    let (k, l) = (exact_sqrt(a1.dim()), exact_sqrt(a2.dim()));
    let dims_square = matches!((k, l), (Some(k), Some(l)) if k * l == n);
    let checks = TppChecks {
        commute,
        join_full,
        mutual_commutant,
        trivial_center,
        star_closed,
        dims_square,
    };
    let k = k.unwrap_or(0);
    let l = l.unwrap_or(0);
    Ok(TppVerdict {
        is_tpp: checks.all(),
        k,
        l,
        trivial_shape: checks.dims_square && (k == 1 || l == 1),
        checks,
    })
}

/// The partition induced by a grid basis `B`: `A1 = B (M_k ⊗ 1) B⁻¹` and
/// `A2 = B (1 ⊗ M_l) B⁻¹`.
pub fn tps_to_tpp(t: &Tps) -> (OperatorAlgebra, OperatorAlgebra) {
    let (k, l) = t.shape();
    let n = t.dim();
    let b = t.basis();
    let binv = t.basis_inverse();
    // B (E_ab ⊗ 1) B⁻¹ = Σ_i B[:, a·l+i] B⁻¹[b·l+i, :]
    let mut first = SpanBuilder::new(n);
    for a in 0..k {
        for bb in 0..k {
            let mut m = ComplexMatrix::zeros(n, n);
            for i in 0..l {
                m += b.column(a * l + i) * binv.row(bb * l + i);
            }
            first.push(&m);
        }
    }
    let mut second = SpanBuilder::new(n);
    for cc in 0..l {
        for d in 0..l {
            let mut m = ComplexMatrix::zeros(n, n);
            for j in 0..k {
                m += b.column(j * l + cc) * binv.row(j * l + d);
            }
            second.push(&m);
        }
    }
    (first.finish(), second.finish())
}

/// Self-adjoint elements spanning the real form of a star-closed algebra.
fn hermitian_parts(a: &OperatorAlgebra) -> Vec<ComplexMatrix> {
    let half = C64::from(0.5);
    let mut out = Vec::with_capacity(2 * a.dim());
    for g in &a.basis {
        let h1 = (g + g.adjoint()) * half;
        let h2 = (g - g.adjoint()) * c(0.0, -0.5);
        for h in [h1, h2] {
            if h.norm() > SPAN_TOL {
                out.push(h);
            }
        }
    }
    out
}

fn random_real_combination(parts: &[ComplexMatrix], n: usize, rng: &mut random::SeededRng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for h in parts {
        m += h * c(random::uniform(rng, -1.0, 1.0), 0.0);
    }
    m
}

/// Builds a grid basis for a certified partition.
///
/// Draws generic self-adjoint `r ∈ a1`, `t ∈ a2` (seeded, up to
/// [`GENERIC_DRAWS`] attempts) forming a standard complete set, takes the
/// joint eigenvectors `x_{j0}` in the first eigenspace `M_0` of `t`, and
/// transports them to every other eigenspace `M_i` with one element of `a2`
/// followed by the spectral projector, rescaled by a single scalar per `i`.
pub fn tpp_to_tps(a1: &OperatorAlgebra, a2: &OperatorAlgebra, seed: u64, tol: &Tolerance) -> Result<Tps> {
    let verdict = is_tpp(a1, a2, tol)?;
    if !verdict.is_tpp {
        return Err(Error::NotATpp(format!(
            "failed checks: {}",
            verdict.checks.failing().join(", ")
        )));
    }
    let (k, l) = (verdict.k, verdict.l);
    let n = a1.n;
    let parts1 = hermitian_parts(a1);
    let parts2 = hermitian_parts(a2);
    let mut rng = random::rng(seed);

    for _ in 0..GENERIC_DRAWS {
        let r = random_real_combination(&parts1, n, &mut rng);
        let t = random_real_combination(&parts2, n, &mut rng);
        let sets = ObservablePair::from_parts(r, t, true, tol)
            .and_then(|pair| verify_standard_complete(&pair, tol));
        let cs = match sets {
            Ok(cs) if cs.k == k && cs.l == l => cs,
            Ok(_)
            | Err(Error::MultiplicityViolation(_))
            | Err(Error::JointDegeneracy(_))
            | Err(Error::NotCommuting { .. }) => continue,
            Err(e) => return Err(e),
        };

        let mut basis = ComplexMatrix::zeros(n, n);
        let seeds: Vec<ComplexVector> = (0..k).map(|j| cs.grid.column(j * l).into_owned()).collect();
        for (j, x) in seeds.iter().enumerate() {
            basis.set_column(j * l, x);
        }
        for i in 1..l {
            let q = &cs.m_spaces[i];
            let project = |v: &ComplexVector| q * (q.adjoint() * v);
            let transport = a2
                .basis
                .iter()
                .max_by(|x, y| {
                    let nx = project(&(*x * &seeds[0])).norm();
                    let ny = project(&(*y * &seeds[0])).norm();
                    nx.total_cmp(&ny)
                })
                .expect("a2 is nonempty");
            let images: Vec<ComplexVector> = seeds.iter().map(|x| project(&(transport * x))).collect();
            let head = &images[0];
            let scale = phase_factor(head) / C64::from(head.norm());
            for (j, y) in images.iter().enumerate() {
                basis.set_column(j * l + i, &(y * scale));
            }
        }
        return Tps::with_tolerance(k, l, basis, tol);
    }
    Err(Error::GenericElementFailure {
        attempts: GENERIC_DRAWS,
    })
}
