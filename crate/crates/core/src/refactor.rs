//! Man-made tensor product structures.
//!
//! Any basis of a composite space can be declared a product basis, so any
//! given state can be made a product state, or an entangled one, by choosing
//! the structure to suit it.

use crate::error::{Error, Result};
use crate::linalg::{c, check_finite, complete_orthonormal, orthogonal_residual, ComplexMatrix, ComplexVector, Tolerance, C64, SPAN_TOL};
use crate::tps::Tps;

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn check_shape(n: usize, k: usize, l: usize) -> Result<()> {
    if is_prime(n) && k != 1 && l != 1 {
        return Err(Error::NonCompositeDim { n });
    }
    if k * l != n || k == 0 {
        return Err(Error::DimensionMismatch(format!(
            "shape {k}x{l} does not factor dimension {n}"
        )));
    }
    Ok(())
}

fn check_state(w: &ComplexVector, tol: &Tolerance) -> Result<f64> {
    check_finite(&ComplexMatrix::from_column_slice(w.len(), 1, w.as_slice()))?;
    let norm = w.norm();
    if norm <= tol.residual {
        return Err(Error::ZeroState { norm });
    }
    Ok(norm)
}

/// Declares `basis` a product basis: column `j·l + i` becomes `x_j ⊗ y_i`.
pub fn tps_making_basis_product(basis: &ComplexMatrix, k: usize, l: usize, tol: &Tolerance) -> Result<Tps> {
    if basis.nrows() != basis.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "basis must be square, got {}x{}",
            basis.nrows(),
            basis.ncols()
        )));
    }
    check_shape(basis.nrows(), k, l)?;
    Tps::with_tolerance(k, l, basis.clone(), tol)
}

/// A structure in which `w` is the product vector `x_0 ⊗ y_0`.
///
/// With `orthonormal`, the basis starts with `w/‖w‖` and is completed to a
/// unitary; otherwise it is `w` followed by the standard basis vectors except
/// the one at `w`'s largest-magnitude coordinate.
pub fn tps_making_state_product(
    w: &ComplexVector,
    k: usize,
    l: usize,
    orthonormal: bool,
    tol: &Tolerance,
) -> Result<Tps> {
    let n = w.len();
    let norm = check_state(w, tol)?;
    check_shape(n, k, l)?;
    let basis = if orthonormal {
        let unit = ComplexMatrix::from_column_slice(n, 1, (w / C64::from(norm)).as_slice());
        complete_orthonormal(&unit, n, tol)?
    } else {
        let pivot = w.icamax();
        let mut basis = ComplexMatrix::zeros(n, n);
        basis.set_column(0, w);
        let mut col = 1;
        for p in (0..n).filter(|&p| p != pivot) {
            basis[(p, col)] = c(1.0, 0.0);
            col += 1;
        }
        basis
    };
    tps_making_basis_product(&basis, k, l, tol)
}

/// A structure in which `w` has Schmidt rank exactly 2.
///
/// `w` is split as `w₁ + w₂` with `w₁ = u‖w‖/√2` for the first standard
/// basis vector `u` not parallel to `w`; the two parts become `x_0 ⊗ y_1` and
/// `x_1 ⊗ y_0`. With `orthonormal`, those two cells hold `q± = (ŵ ± v)/√2`
/// instead, where `v` is `u` orthonormalized against `ŵ`; then
/// `w = ‖w‖(q₊ + q₋)/√2`.
pub fn tps_making_state_entangled(
    w: &ComplexVector,
    k: usize,
    l: usize,
    orthonormal: bool,
    tol: &Tolerance,
) -> Result<Tps> {
    let n = w.len();
    let norm = check_state(w, tol)?;
    check_shape(n, k, l)?;
    if k < 2 || l < 2 {
        return Err(Error::ShapeTooSmall { k, l });
    }
    let u = (0..n)
        .map(|p| {
            let mut e = ComplexVector::zeros(n);
            e[p] = c(1.0, 0.0);
            e
        })
        .find(|e| {
            let along = e.dotc(w);
            (w - e * along).norm() > SPAN_TOL * norm
        })
        .expect("a composite dimension has at least two coordinates");

    let (first, second) = if orthonormal {
        let what = w / C64::from(norm);
        let v = orthogonal_residual(std::slice::from_ref(&what), &u).expect("finite");
        let v = &v / C64::from(v.norm());
        let s = C64::from(std::f64::consts::FRAC_1_SQRT_2);
        ((&what + &v) * s, (&what - &v) * s)
    } else {
        let w1 = &u * C64::from(norm * std::f64::consts::FRAC_1_SQRT_2);
        let w2 = w - &w1;
        (w1, w2)
    };

    let rest = if orthonormal {
        let pair = ComplexMatrix::from_columns(&[first.clone(), second.clone()]);
        let full = complete_orthonormal(&pair, n, tol)?;
        full.columns(2, n - 2).column_iter().map(|c| c.into_owned()).collect()
    } else {
        pivoted_completion(&[first.clone(), second.clone()], n)
    };

    let mut basis = ComplexMatrix::zeros(n, n);
    basis.set_column(1, &first);
    basis.set_column(l, &second);
    let mut remaining = rest.into_iter();
    for col in (0..n).filter(|&col| col != 1 && col != l) {
        basis.set_column(col, &remaining.next().expect("n - 2 completion vectors"));
    }
    tps_making_basis_product(&basis, k, l, tol)
}

/// Standard basis vectors that, appended to `start`, give a basis. Each step
/// takes the candidate farthest from the current span (lowest index on
/// ties).
fn pivoted_completion(start: &[ComplexVector], n: usize) -> Vec<ComplexVector> {
    let mut span: Vec<ComplexVector> = Vec::with_capacity(n);
    for v in start {
        let r = orthogonal_residual(&span, v).expect("finite");
        let norm = r.norm();
        span.push(r / C64::from(norm));
    }
    let mut chosen = Vec::with_capacity(n - start.len());
    let mut used = vec![false; n];
    while span.len() < n {
        let mut best: Option<(usize, f64, ComplexVector)> = None;
        for p in (0..n).filter(|&p| !used[p]) {
            let mut e = ComplexVector::zeros(n);
            e[p] = c(1.0, 0.0);
            let r = orthogonal_residual(&span, &e).expect("unit vector");
            let norm = r.norm();
            if best.as_ref().map_or(true, |(_, b, _)| norm > *b * (1.0 + 1e-12)) {
                best = Some((p, norm, r));
            }
        }
        let (p, norm, r) = best.expect("candidates remain while the span is incomplete");
        used[p] = true;
        span.push(r / C64::from(norm));
        let mut e = ComplexVector::zeros(n);
        e[p] = c(1.0, 0.0);
        chosen.push(e);
    }
    chosen
}

/// One structure in which `w` is a product and one in which it is entangled.
pub fn dual_verdict(
    w: &ComplexVector,
    k: usize,
    l: usize,
    orthonormal: bool,
    tol: &Tolerance,
) -> Result<(Tps, Tps)> {
    let product = tps_making_state_product(w, k, l, orthonormal, tol)?;
    let entangled = tps_making_state_entangled(w, k, l, orthonormal, tol)?;
    Ok((product, entangled))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use crate::random;
    use crate::tps::tps_equivalent;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn unit(n: usize, p: usize) -> ComplexVector {
        let mut e = ComplexVector::zeros(n);
        e[p] = c(1.0, 0.0);
        e
    }

    fn bell_basis() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // ψ+, ψ-, φ+, φ-
        ComplexMatrix::from_row_slice(
            4,
            4,
            &[0.0, 0.0, h, h, h, h, 0.0, 0.0, h, -h, 0.0, 0.0, 0.0, 0.0, h, -h].map(|x| c(x, 0.0)),
        )
    }

    #[test]
    fn bell_basis_becomes_product() {
        let b = bell_basis();
        let t = tps_making_basis_product(&b, 2, 2, &tol()).unwrap();
        assert_eq!(t.basis(), &b);
        for p in 0..4 {
            assert!(t.is_product(&b.column(p).into_owned(), &tol()).unwrap());
        }
        assert!(t.is_inner_product_compatible(&tol()));
    }

    #[test]
    fn standard_basis_is_god_given() {
        let t = tps_making_basis_product(&identity(4), 2, 2, &tol()).unwrap();
        assert_eq!(t, Tps::god_given(2, 2));
    }

    #[test]
    fn random_basis_columns_are_products() {
        let mut g = random::rng(5);
        let b = random::invertible(6, 1e3, &mut g);
        let t = tps_making_basis_product(&b, 2, 3, &tol()).unwrap();
        for p in 0..6 {
            assert_eq!(t.schmidt(&b.column(p).into_owned(), &tol()).unwrap().rank, 1);
        }
    }

    #[test]
    fn shape_errors() {
        let t = tol();
        assert!(matches!(
            tps_making_basis_product(&identity(5), 5, 1, &t),
            Ok(ref x) if x.is_trivial()
        ));
        assert!(matches!(
            tps_making_state_product(&unit(5, 0), 2, 3, false, &t),
            Err(Error::NonCompositeDim { n: 5 })
        ));
        assert!(matches!(
            tps_making_basis_product(&identity(6), 2, 2, &t),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            tps_making_state_entangled(&unit(4, 0), 4, 1, false, &t),
            Err(Error::ShapeTooSmall { k: 4, l: 1 })
        ));
        assert!(matches!(
            tps_making_state_product(&ComplexVector::zeros(4), 2, 2, false, &t),
            Err(Error::ZeroState { .. })
        ));
        let mut singular = identity(4);
        singular.set_column(3, &unit(4, 0));
        assert!(matches!(
            tps_making_basis_product(&singular, 2, 2, &t),
            Err(Error::SingularBasis { .. })
        ));
    }

    #[test]
    fn product_maker_examples() {
        let t = tol();
        let e0 = unit(4, 0);
        let made = tps_making_state_product(&e0, 2, 2, false, &t).unwrap();
        assert_eq!(made, Tps::god_given(2, 2));
        let psi = bell_basis().column(0).into_owned();
        for orthonormal in [false, true] {
            let made = tps_making_state_product(&psi, 2, 2, orthonormal, &t).unwrap();
            assert_eq!(made.schmidt(&psi, &t).unwrap().rank, 1);
            if orthonormal {
                assert!(made.is_inner_product_compatible(&t));
            }
        }
    }

    #[test]
    fn entangle_maker_examples() {
        let t = tol();
        let psi = bell_basis().column(0).into_owned();
        for w in [unit(4, 0), unit(4, 3), psi] {
            for orthonormal in [false, true] {
                let made = tps_making_state_entangled(&w, 2, 2, orthonormal, &t).unwrap();
                assert_eq!(made.schmidt(&w, &t).unwrap().rank, 2);
                if orthonormal {
                    assert!(made.is_inner_product_compatible(&t));
                }
            }
        }
    }

    #[test]
    fn plain_entangle_split_is_literal() {
        let t = tol();
        let w = unit(4, 0);
        let made = tps_making_state_entangled(&w, 2, 2, false, &t).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // u = e_1 is the first coordinate vector not parallel to e_0.
        let w1 = unit(4, 1) * c(h, 0.0);
        assert_eq!(made.column(0, 1), w1);
        assert_eq!(made.column(1, 0), &w - &w1);
    }

    #[test]
    fn dual_verdicts_disagree() {
        let t = tol();
        let mut g = random::rng(8);
        let w = random::state(16, &mut g);
        for orthonormal in [false, true] {
            let (p, e) = dual_verdict(&w, 4, 4, orthonormal, &t).unwrap();
            assert!(p.is_product(&w, &t).unwrap());
            assert!(!e.is_product(&w, &t).unwrap());
            assert!(!tps_equivalent(&p, &e, &t).unwrap().equivalent);
        }
    }
}
