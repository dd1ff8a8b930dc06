//! The three worked examples: two spins, deformed polynomial products, and
//! center-of-mass coordinates.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::algebra::{is_tpp, tps_to_tpp};
use crate::error::{Error, Result};
use crate::json::{MatrixJson, TpsJson};
use crate::linalg::{c, identity, kron, subspace_distance, ComplexMatrix, ComplexVector, Tolerance};
use crate::observables::{tps_from_observables, verify_standard_complete, ObservablePair};
use crate::tps::{tps_equivalent, Tps};

use super::poly::{change_of_variables, deformed_poly_tps, euler_operators, poly_tps, PolyState, Substitution};
use super::report::ExampleReport;

/// Exact identities are checked at this level.
const EXACT: f64 = 1e-12;

/// Subspace agreement threshold (sine of the largest principal angle).
const ANGLE: f64 = 1e-10;

/// Membership in constructed algebras.
const MEMBER: f64 = 1e-8;

pub const DEFAULT_DEGREE: usize = 4;

fn real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(rows, cols, &data.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
}

fn vec4(v: [f64; 4]) -> ComplexVector {
    ComplexVector::from_iterator(4, v.iter().map(|&x| c(x, 0.0)))
}

/// `|ψ+⟩, |ψ−⟩, |φ+⟩, |φ−⟩` in the basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.
pub fn bell_states() -> [ComplexVector; 4] {
    let h = FRAC_1_SQRT_2;
    [
        vec4([0.0, h, h, 0.0]),
        vec4([0.0, h, -h, 0.0]),
        vec4([h, 0.0, 0.0, h]),
        vec4([h, 0.0, 0.0, -h]),
    ]
}

pub const BELL_NAMES: [&str; 4] = ["psi+", "psi-", "phi+", "phi-"];

pub fn sigma_x() -> ComplexMatrix {
    real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn sigma_z() -> ComplexMatrix {
    real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// Rotation of both spins by π about the x axis: `(iσx) ⊗ (iσx)`.
pub fn rotation_x_pi() -> ComplexMatrix {
    let isx = sigma_x() * c(0.0, 1.0);
    kron(&isx, &isx)
}

/// Square of the total spin `S_z = (σz ⊗ 1 + 1 ⊗ σz)/2`.
pub fn total_sz_squared() -> ComplexMatrix {
    let sz = (kron(&sigma_z(), &identity(2)) + kron(&identity(2), &sigma_z())) * c(0.5, 0.0);
    &sz * &sz
}

/// The grid `x_{ji}` built from `(R_x(π), S_z²)`: columns
/// `|ψ+⟩, |φ+⟩, |ψ−⟩, |φ−⟩`.
pub fn bell_tps() -> Tps {
    let [pp, pm, fp, fm] = bell_states();
    Tps::new(2, 2, ComplexMatrix::from_columns(&[pp, fp, pm, fm])).expect("Bell basis is unitary")
}

fn span(vs: &[&ComplexVector]) -> ComplexMatrix {
    ComplexMatrix::from_columns(&vs.iter().map(|v| (*v).clone()).collect::<Vec<_>>())
}

pub fn example_bell(tol: &Tolerance) -> Result<ExampleReport> {
    let mut report = ExampleReport::new("bell");
    let states = bell_states();
    let [pp, pm, fp, fm] = &states;
    let rx = rotation_x_pi();
    let sz2 = total_sz_squared();

    // Eigenrelations.
    report.residual("rx_psi+", (&rx * pp + pp).norm(), EXACT);
    report.residual("rx_psi-", (&rx * pm - pm).norm(), EXACT);
    report.residual("rx_phi+", (&rx * fp + fp).norm(), EXACT);
    report.residual("rx_phi-", (&rx * fm - fm).norm(), EXACT);
    report.residual("sz2_psi+", (&sz2 * pp).norm(), EXACT);
    report.residual("sz2_psi-", (&sz2 * pm).norm(), EXACT);
    report.residual("sz2_phi+", (&sz2 * fp - fp).norm(), EXACT);
    report.residual("sz2_phi-", (&sz2 * fm - fm).norm(), EXACT);

    // Maximal entanglement in the spin product basis.
    let god = Tps::god_given(2, 2);
    for (name, w) in BELL_NAMES.iter().zip(&states) {
        let s = god.schmidt(w, tol)?;
        report.count(&format!("god_given_rank_{name}"), s.rank, 2);
        let spread = s
            .coefficients
            .iter()
            .map(|x| (x - FRAC_1_SQRT_2).abs())
            .fold(0.0, f64::max);
        report.residual(&format!("god_given_coefficients_{name}"), spread, 1e-10);
    }

    // Characteristic sets and the induced structure.
    let pair = ObservablePair::new(rx.clone(), sz2.clone(), tol)?;
    report.verdict("observables_hermitian", pair.hermitian, true);
    let cs = verify_standard_complete(&pair, tol)?;
    report.count("k", cs.k, 2);
    report.count("l", cs.l, 2);
    let m = [span(&[pp, pm]), span(&[fp, fm])];
    let n = [span(&[pp, fp]), span(&[pm, fm])];
    for i in 0..2 {
        report.residual(&format!("M{}", i + 1), subspace_distance(&cs.m_spaces[i], &m[i]), ANGLE);
        report.residual(&format!("N{}", i + 1), subspace_distance(&cs.n_spaces[i], &n[i]), ANGLE);
    }
    let built = tps_from_observables(&pair, tol)?;
    report.residual("grid_matches_bell_basis", (built.basis() - bell_tps().basis()).norm(), EXACT);
    report.verdict("inner_product_compatible", built.is_inner_product_compatible(tol), true);
    for (name, w) in BELL_NAMES.iter().zip(&states) {
        report.count(&format!("constructed_rank_{name}"), built.schmidt(w, tol)?.rank, 1);
    }

    let (a1, a2) = tps_to_tpp(&built);
    report.verdict("tpp", is_tpp(&a1, &a2, tol)?.is_tpp, true);
    report.residual("rx_in_A1", a1.residual(&rx), MEMBER);
    report.residual("sz2_in_A2", a2.residual(&sz2), MEMBER);

    // A second complete set with the same characteristic subspaces.
    let sxx = kron(&sigma_x(), &sigma_x());
    let szz = kron(&sigma_z(), &sigma_z());
    let other = ObservablePair::new(sxx.clone(), szz.clone(), tol)?;
    let cs2 = verify_standard_complete(&other, tol)?;
    // σx⊗σx has eigenvalue -1 on N2, so its clusters come in the opposite order.
    let angle = (0..2)
        .map(|i| {
            subspace_distance(&cs2.m_spaces[i], &cs.m_spaces[i])
                .max(subspace_distance(&cs2.n_spaces[i], &cs.n_spaces[1 - i]))
        })
        .fold(0.0, f64::max);
    report.residual("same_characteristic_sets", angle, ANGLE);
    let built2 = tps_from_observables(&other, tol)?;
    report.verdict("equivalent_complete_sets", tps_equivalent(&built, &built2, tol)?.equivalent, true);
    report.residual("sxx_in_A1", a1.residual(&sxx), MEMBER);
    report.residual("szz_in_A2", a2.residual(&szz), MEMBER);

    report.artifact("constructed_tps", TpsJson::from(&built));
    Ok(report)
}

fn require_degree(degree: usize) -> Result<()> {
    if degree < 3 {
        return Err(Error::Input(format!("example needs degree >= 3, got {degree}")));
    }
    Ok(())
}

/// `α = 2` on `x₁²x₂²` and 1 elsewhere; the state
/// `x₁x₂ + x₁x₂² + x₁²x₂ + x₁²x₂²` is a product under the plain monomial
/// structure and entangled under the deformed one.
pub fn example_bargmann(degree: usize, tol: &Tolerance) -> Result<ExampleReport> {
    require_degree(degree)?;
    let mut report = ExampleReport::new("bargmann");
    let state = PolyState::from_monomials(("x1", "x2"), degree, &[(1, 1), (1, 2), (2, 1), (2, 2)])?;
    let w = state.to_vector();
    let plain = poly_tps(degree)?;
    let mut alpha = ComplexMatrix::from_element(degree, degree, c(1.0, 0.0));
    alpha[(2, 2)] = c(2.0, 0.0);
    let deformed = deformed_poly_tps(&alpha)?;

    report.count("plain_rank", plain.schmidt(&w, tol)?.rank, 1);
    report.count("deformed_rank", deformed.schmidt(&w, tol)?.rank, 2);
    let coeffs = deformed.coefficient_matrix(&w)?;
    let block = coeffs.view((1, 1), (2, 2)).into_owned();
    let expected = real(2, 2, &[1.0, 1.0, 1.0, 0.5]);
    report.residual("deformed_block", (&block - &expected).camax(), EXACT);
    let mut outside = coeffs.clone();
    outside.view_mut((1, 1), (2, 2)).fill(c(0.0, 0.0));
    report.residual("deformed_outside_block", outside.camax(), EXACT);
    report.info(
        "equivalent_to_undeformed",
        tps_equivalent(&plain, &deformed, tol)?.equivalent,
    );
    report.artifact("deformed_coefficients", MatrixJson::from(&coeffs));
    Ok(report)
}

/// `x₁x₂` is a product in particle coordinates and `X² − x²/4` is entangled
/// in center-of-mass / relative coordinates.
pub fn example_center_of_mass(degree: usize, tol: &Tolerance) -> Result<ExampleReport> {
    require_degree(degree)?;
    let mut report = ExampleReport::new("center_of_mass");
    let grid = poly_tps(degree)?;
    let x1x2 = PolyState::from_monomials(("x1", "x2"), degree, &[(1, 1)])?;
    report.count("particle_rank", grid.schmidt(&x1x2.to_vector(), tol)?.rank, 1);

    let moved = change_of_variables(&x1x2, &Substitution::center_of_mass(), degree)?;
    let mut expected = ComplexMatrix::zeros(degree, degree);
    expected[(2, 0)] = c(1.0, 0.0);
    expected[(0, 2)] = c(-0.25, 0.0);
    report.residual("relative_coefficients", (&moved.coeffs - &expected).camax(), EXACT);
    report.count(
        "relative_nonzero_entries",
        moved.coeffs.iter().filter(|z| z.norm() > EXACT).count(),
        2,
    );
    let schmidt = grid.schmidt(&moved.to_vector(), tol)?;
    report.count("relative_rank", schmidt.rank, 2);
    report.residual("schmidt_reconstruction", (schmidt.reconstruct() - &moved.coeffs).camax(), EXACT);
    let coeff_error = if schmidt.coefficients.len() == 2 {
        (schmidt.coefficients[0] - 1.0).abs().max((schmidt.coefficients[1] - 0.25).abs())
    } else {
        f64::INFINITY
    };
    report.residual("schmidt_coefficients", coeff_error, EXACT);

    // Euler operators X∂_X and x∂_x on the truncated grid.
    let (ex, ey) = euler_operators(degree);
    let mut worst: f64 = 0.0;
    for j in 0..degree {
        for i in 0..degree {
            let mut e = ComplexVector::zeros(degree * degree);
            e[j * degree + i] = c(1.0, 0.0);
            worst = worst
                .max((&ex * &e - &e * c(j as f64, 0.0)).norm())
                .max((&ey * &e - &e * c(i as f64, 0.0)).norm());
        }
    }
    report.residual("euler_eigenrelations", worst, EXACT);
    let pair = ObservablePair::from_parts(ex, ey, false, tol)?;
    let cs = verify_standard_complete(&pair, tol)?;
    report.count("euler_k", cs.k, degree);
    report.count("euler_l", cs.l, degree);
    let mut angle: f64 = 0.0;
    for i in 0..cs.l.min(degree) {
        let monomials = ComplexMatrix::from_fn(degree * degree, degree, |row, j| {
            if row == j * degree + i {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        angle = angle.max(subspace_distance(&cs.m_spaces[i], &monomials));
    }
    report.residual("euler_characteristic_sets", angle, ANGLE);
    report.artifact("relative_coefficients", MatrixJson::from(&moved.coeffs));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn assert_passes(r: &ExampleReport) {
        assert!(r.passed, "failed checks: {:#?}", r.failures());
    }

    #[test]
    fn bell_example_passes() {
        let r = example_bell(&tol()).unwrap();
        assert_passes(&r);
        assert!(r.check("rx_psi+").is_some());
    }

    #[test]
    fn bell_tps_is_the_observable_grid() {
        let pair = ObservablePair::new(rotation_x_pi(), total_sz_squared(), &tol()).unwrap();
        let built = tps_from_observables(&pair, &tol()).unwrap();
        assert!((built.basis() - bell_tps().basis()).norm() < 1e-14);
    }

    #[test]
    fn bargmann_example_passes() {
        for d in [3, 4, 5] {
            let r = example_bargmann(d, &tol()).unwrap();
            assert_passes(&r);
        }
    }

    #[test]
    fn center_of_mass_example_passes() {
        for d in [3, 4, 6] {
            assert_passes(&example_center_of_mass(d, &tol()).unwrap());
        }
    }

    #[test]
    fn small_degrees_rejected() {
        assert!(matches!(example_bargmann(2, &tol()), Err(Error::Input(_))));
        assert!(matches!(example_center_of_mass(1, &tol()), Err(Error::Input(_))));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&example_bell(&tol()).unwrap()).unwrap();
        let b = serde_json::to_string(&example_bell(&tol()).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
