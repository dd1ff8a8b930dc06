//! Two-variable polynomials on a truncated exponent grid.
//!
//! A [`PolyState`] of degree `d` stores the coefficient of `u^j v^i` at
//! `(j, i)` for `0 ≤ j, i < d`; as a vector of `C^{d²}` that is coordinate
//! `j·d + i`, the same cell numbering a `(d, d)` [`Tps`] uses.

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{c, check_finite, max_abs, ComplexMatrix, ComplexVector, C64};
use crate::tps::Tps;

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyState {
    pub variables: (String, String),
    pub coeffs: ComplexMatrix,
}

impl PolyState {
    pub fn new(variables: (&str, &str), coeffs: ComplexMatrix) -> Result<Self> {
        if coeffs.nrows() != coeffs.ncols() || coeffs.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "coefficient grid must be square and nonempty, got {}x{}",
                coeffs.nrows(),
                coeffs.ncols()
            )));
        }
        check_finite(&coeffs)?;
        Ok(PolyState {
            variables: (variables.0.to_owned(), variables.1.to_owned()),
            coeffs,
        })
    }

    pub fn zero(variables: (&str, &str), degree: usize) -> Result<Self> {
        Self::new(variables, ComplexMatrix::zeros(degree, degree))
    }

    /// Sum of unit monomials `u^j v^i`.
    pub fn from_monomials(variables: (&str, &str), degree: usize, terms: &[(usize, usize)]) -> Result<Self> {
        let mut p = Self::zero(variables, degree)?;
        for &(j, i) in terms {
            if j >= degree || i >= degree {
                return Err(Error::DimensionMismatch(format!(
                    "monomial ({j}, {i}) lies outside the {degree}x{degree} grid"
                )));
            }
            p.coeffs[(j, i)] += c(1.0, 0.0);
        }
        Ok(p)
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.nrows()
    }

    /// Coordinates in `C^{d²}` (row-major flattening of the grid).
    pub fn to_vector(&self) -> ComplexVector {
        let d = self.max_degree();
        ComplexVector::from_fn(d * d, |p, _| self.coeffs[(p / d, p % d)])
    }

    pub fn from_vector(variables: (&str, &str), degree: usize, w: &ComplexVector) -> Result<Self> {
        if w.len() != degree * degree {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} does not fit a {degree}x{degree} grid",
                w.len()
            )));
        }
        Self::new(variables, ComplexMatrix::from_fn(degree, degree, |j, i| w[j * degree + i]))
    }
}

/// A linear substitution of two variables by two new ones:
/// `old₁ = a₀₀ new₁ + a₀₁ new₂`, `old₂ = a₁₀ new₁ + a₁₁ new₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    pub from: (String, String),
    pub to: (String, String),
    pub matrix: [[Rational; 2]; 2],
}

impl Substitution {
    /// `x₁ = X + x/2`, `x₂ = X − x/2`: from particle coordinates to the
    /// center-of-mass coordinate `X = (x₁ + x₂)/2` and relative coordinate
    /// `x = x₁ − x₂`.
    pub fn center_of_mass() -> Self {
        let half = Rational::new(1, 2);
        Substitution {
            from: ("x1".into(), "x2".into()),
            to: ("X".into(), "x".into()),
            matrix: [[Rational::one(), half], [Rational::one(), -half]],
        }
    }

    /// The substitution expressing the new variables through the old ones.
    pub fn inverse(&self) -> Self {
        let [[a, b], [cc, d]] = self.matrix;
        let det = a * d - b * cc;
        assert!(!det.is_zero(), "substitution matrix is singular");
        Substitution {
            from: self.to.clone(),
            to: self.from.clone(),
            matrix: [[d / det, -b / det], [-cc / det, a / det]],
        }
    }
}

fn binomials(n: usize) -> Vec<i128> {
    let mut row = vec![1i128; n + 1];
    for m in 1..n {
        row[m] = row[m - 1] * (n - m + 1) as i128 / m as i128;
    }
    row
}

/// Exact expansion of `(p u + q v)^e`: coefficient of `u^a v^(e-a)` at `a`.
fn power(p: Rational, q: Rational, e: usize) -> Vec<Rational> {
    let binom = binomials(e);
    (0..=e)
        .map(|a| {
            let pa = (0..a).fold(Rational::one(), |acc, _| acc * p);
            let qb = (0..e - a).fold(Rational::one(), |acc, _| acc * q);
            Rational::from_integer(binom[a]) * pa * qb
        })
        .collect()
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational coefficients stay in f64 range")
}

/// Rewrites `p` in new variables on a `target_degree` grid.
///
/// Each monomial is expanded exactly over the rationals; only the final
/// combination with `p`'s coefficients happens in floating point. Any
/// monomial outside the target grid whose accumulated coefficient exceeds
/// `1e-12 · (1 + max |p|)` is reported as [`Error::GridOverflow`].
pub fn change_of_variables(p: &PolyState, sub: &Substitution, target_degree: usize) -> Result<PolyState> {
    if p.variables != sub.from {
        return Err(Error::Input(format!(
            "polynomial is in ({}, {}) but the substitution expects ({}, {})",
            p.variables.0, p.variables.1, sub.from.0, sub.from.1
        )));
    }
    if target_degree == 0 {
        return Err(Error::DimensionMismatch("target grid must be nonempty".into()));
    }
    let d = p.max_degree();
    let span = 2 * d - 1;
    let size = span.max(target_degree);
    let mut acc = ComplexMatrix::zeros(size, size);
    let [[a00, a01], [a10, a11]] = sub.matrix;
    for j in 0..d {
        let first = power(a00, a01, j);
        for i in 0..d {
            let coeff = p.coeffs[(j, i)];
            if coeff == C64::from(0.0) {
                continue;
            }
            let second = power(a10, a11, i);
            // u^j v^i = Σ_a first[a] N^a M^(j-a) · Σ_b second[b] N^b M^(i-b)
            for (a, fa) in first.iter().enumerate() {
                for (b, sb) in second.iter().enumerate() {
                    let weight = to_f64(&(fa * sb));
                    acc[(a + b, (j - a) + (i - b))] += coeff * weight;
                }
            }
        }
    }

    let threshold = 1e-12 * (1.0 + max_abs(&p.coeffs));
    for total in 0..2 * size - 1 {
        for a in 0..size.min(total + 1) {
            let b = total - a;
            if b >= size || (a < target_degree && b < target_degree) {
                continue;
            }
            if acc[(a, b)].norm() > threshold {
                return Err(Error::GridOverflow {
                    var1: sub.to.0.clone(),
                    var2: sub.to.1.clone(),
                    a,
                    b,
                    degree: target_degree,
                });
            }
        }
    }
    let coeffs = acc.view((0, 0), (target_degree, target_degree)).into_owned();
    PolyState::new((&sub.to.0, &sub.to.1), coeffs)
}

/// The monomial grid structure: `u^j ⊗ v^i = u^j v^i`.
pub fn poly_tps(degree: usize) -> Result<Tps> {
    if degree < 2 {
        return Err(Error::DimensionMismatch(format!(
            "a monomial grid needs degree >= 2, got {degree}"
        )));
    }
    Ok(Tps::god_given(degree, degree))
}

/// The deformed grid structure `u^j ⊗′ v^i = α_{ji} u^j v^i`.
pub fn deformed_poly_tps(alpha: &ComplexMatrix) -> Result<Tps> {
    let d = alpha.nrows();
    if alpha.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "deformation grid must be square, got {}x{}",
            d,
            alpha.ncols()
        )));
    }
    check_finite(alpha)?;
    let mut diag = ComplexVector::zeros(d * d);
    for j in 0..d {
        for i in 0..d {
            let a = alpha[(j, i)];
            if a == C64::from(0.0) {
                return Err(Error::ZeroAlpha { j, i });
            }
            diag[j * d + i] = a;
        }
    }
    Tps::new(d, d, ComplexMatrix::from_diagonal(&diag))
}

/// `X·∂_X` and `x·∂_x` on the truncated grid: `diag(j)` and `diag(i)`.
pub fn euler_operators(degree: usize) -> (ComplexMatrix, ComplexMatrix) {
    let n = degree * degree;
    let first = ComplexVector::from_fn(n, |p, _| c((p / degree) as f64, 0.0));
    let second = ComplexVector::from_fn(n, |p, _| c((p % degree) as f64, 0.0));
    (ComplexMatrix::from_diagonal(&first), ComplexMatrix::from_diagonal(&second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Tolerance;
    use crate::random;

    fn com() -> Substitution {
        Substitution::center_of_mass()
    }

    fn poly(terms: &[(usize, usize)], d: usize) -> PolyState {
        PolyState::from_monomials(("x1", "x2"), d, terms).unwrap()
    }

    #[test]
    fn binomial_rows() {
        assert_eq!(binomials(0), vec![1]);
        assert_eq!(binomials(4), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn single_variable() {
        let q = change_of_variables(&poly(&[(1, 0)], 3), &com(), 3).unwrap();
        assert_eq!(q.variables, ("X".to_owned(), "x".to_owned()));
        assert_eq!(q.coeffs[(1, 0)], c(1.0, 0.0));
        assert_eq!(q.coeffs[(0, 1)], c(0.5, 0.0));
        assert_eq!(q.coeffs.iter().filter(|z| z.norm() > 0.0).count(), 2);
    }

    #[test]
    fn product_becomes_difference_of_squares() {
        let q = change_of_variables(&poly(&[(1, 1)], 4), &com(), 4).unwrap();
        assert_eq!(q.coeffs[(2, 0)], c(1.0, 0.0));
        assert_eq!(q.coeffs[(0, 2)], c(-0.25, 0.0));
        assert!(q.coeffs[(1, 1)].norm() < 1e-15);
        assert_eq!(q.coeffs.iter().filter(|z| z.norm() > 1e-15).count(), 2);
    }

    #[test]
    fn overflow_is_reported() {
        // x1² x2² = (X² − x²/4)² contains X⁴.
        let err = change_of_variables(&poly(&[(2, 2)], 3), &com(), 3).unwrap_err();
        assert_eq!(
            err,
            Error::GridOverflow {
                var1: "X".into(),
                var2: "x".into(),
                a: 0,
                b: 4,
                degree: 3
            }
        );
        let ok = change_of_variables(&poly(&[(2, 2)], 3), &com(), 5).unwrap();
        // (X² − x²/4)² = X⁴ − X²x²/2 + x⁴/16
        assert_eq!(ok.coeffs[(4, 0)], c(1.0, 0.0));
        assert_eq!(ok.coeffs[(2, 2)], c(-0.5, 0.0));
        assert_eq!(ok.coeffs[(0, 4)], c(1.0 / 16.0, 0.0));
    }

    #[test]
    fn inverse_substitution_round_trips() {
        let mut g = random::rng(21);
        let d = 4;
        for _ in 0..10 {
            // Total degree < d keeps both directions inside the grid.
            let mut coeffs = ComplexMatrix::zeros(d, d);
            for j in 0..d {
                for i in 0..d - j {
                    coeffs[(j, i)] = random::complex(&mut g);
                }
            }
            let p = PolyState::new(("x1", "x2"), coeffs).unwrap();
            let q = change_of_variables(&p, &com(), d).unwrap();
            let back = change_of_variables(&q, &com().inverse(), d).unwrap();
            assert!((back.coeffs - &p.coeffs).camax() <= 1e-10);
        }
    }

    #[test]
    fn substitution_is_linear() {
        let mut g = random::rng(22);
        let d = 3;
        let p = PolyState::new(("x1", "x2"), random::matrix(d, d, &mut g)).unwrap();
        let q = PolyState::new(("x1", "x2"), random::matrix(d, d, &mut g)).unwrap();
        let sum = PolyState::new(("x1", "x2"), &p.coeffs + &q.coeffs).unwrap();
        let target = 2 * d - 1;
        let lhs = change_of_variables(&sum, &com(), target).unwrap().coeffs;
        let rhs = change_of_variables(&p, &com(), target).unwrap().coeffs
            + change_of_variables(&q, &com(), target).unwrap().coeffs;
        assert!((lhs - rhs).camax() <= 1e-12);
    }

    #[test]
    fn wrong_variables_rejected() {
        let p = PolyState::from_monomials(("X", "x"), 2, &[(0, 0)]).unwrap();
        assert!(matches!(change_of_variables(&p, &com(), 2), Err(Error::Input(_))));
    }

    #[test]
    fn grids_and_deformations() {
        let tol = Tolerance::default();
        assert_eq!(poly_tps(2).unwrap(), Tps::god_given(2, 2));
        assert_eq!(poly_tps(4).unwrap().shape(), (4, 4));
        let ones = ComplexMatrix::from_element(3, 3, c(1.0, 0.0));
        assert_eq!(deformed_poly_tps(&ones).unwrap(), poly_tps(3).unwrap());
        let mut alpha = ones.clone();
        alpha[(1, 2)] = c(0.0, 0.0);
        assert_eq!(deformed_poly_tps(&alpha).unwrap_err(), Error::ZeroAlpha { j: 1, i: 2 });

        let x1x2 = poly(&[(1, 1)], 4);
        assert_eq!(poly_tps(4).unwrap().schmidt(&x1x2.to_vector(), &tol).unwrap().rank, 1);
    }

    #[test]
    fn deformation_divides_coefficients() {
        let mut g = random::rng(23);
        let alpha = random::matrix(3, 3, &mut g);
        let t = deformed_poly_tps(&alpha).unwrap();
        let p = PolyState::new(("x1", "x2"), random::matrix(3, 3, &mut g)).unwrap();
        let cm = t.coefficient_matrix(&p.to_vector()).unwrap();
        let expected = p.coeffs.component_div(&alpha);
        assert!((cm - expected).camax() < 1e-12);
    }

    #[test]
    fn vector_round_trip() {
        let p = poly(&[(0, 1), (2, 0)], 3);
        let w = p.to_vector();
        assert_eq!(w[1], c(1.0, 0.0));
        assert_eq!(w[6], c(1.0, 0.0));
        assert_eq!(PolyState::from_vector(("x1", "x2"), 3, &w).unwrap(), p);
    }
}
