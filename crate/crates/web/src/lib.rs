//! Browser front end: three small explorers over the tpskit examples.
//!
//! Every export takes plain numbers and returns a JSON string, either the
//! result or `{"error": ..., "code": ...}`, so the page never has to catch.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

use tpskit::json::MatrixJson;
use tpskit::linalg::c;
use tpskit::observables::tps_from_observables;
use tpskit::workbench::examples::{rotation_x_pi, total_sz_squared};
use tpskit::workbench::{analyze, change_of_variables, deformed_poly_tps, poly_tps, PolyState, Substitution};
use tpskit::{ComplexMatrix, ComplexVector, ObservablePair, Tolerance, Tps};

fn respond<T: Serialize>(result: tpskit::Result<T>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).expect("serializable"),
        Err(e) => json!({ "error": e.to_string(), "code": e.code() }).to_string(),
    }
}

fn schmidt_summary(w: &ComplexVector, tps: &Tps, tol: &Tolerance) -> tpskit::Result<serde_json::Value> {
    let r = analyze(w, tps, tol)?;
    Ok(json!({
        "rank": r.schmidt.rank,
        "coefficients": r.schmidt.coefficients,
        "product": r.product,
    }))
}

/// `cos θ |00⟩ + e^{iφ} sin θ |11⟩` seen by the qubit split and by the split
/// induced from `R_x(π)` and `S_z²`.
#[wasm_bindgen]
pub fn bell_explorer(theta: f64, phi: f64) -> String {
    respond((|| {
        let tol = Tolerance::default();
        let mut w = ComplexVector::zeros(4);
        w[0] = c(theta.cos(), 0.0);
        w[3] = c(phi.cos(), phi.sin()) * theta.sin();
        let pair = ObservablePair::new(rotation_x_pi(), total_sz_squared(), &tol)?;
        let induced = tps_from_observables(&pair, &tol)?;
        Ok(json!({
            "state": w.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "qubits": schmidt_summary(&w, &Tps::god_given(2, 2), &tol)?,
            "observables": schmidt_summary(&w, &induced, &tol)?,
        }))
    })())
}

/// `x₁x₂ + x₁x₂² + x₁²x₂ + x₁²x₂²` under the monomial grid deformed by
/// `α` on `x₁²x₂²` only.
#[wasm_bindgen]
pub fn bargmann_deformation(alpha: f64) -> String {
    respond((|| {
        let tol = Tolerance::default();
        let d = 3;
        let state = PolyState::from_monomials(("x1", "x2"), d, &[(1, 1), (1, 2), (2, 1), (2, 2)])?;
        let w = state.to_vector();
        let mut grid = ComplexMatrix::from_element(d, d, c(1.0, 0.0));
        grid[(2, 2)] = c(alpha, 0.0);
        let deformed = deformed_poly_tps(&grid)?;
        Ok(json!({
            "alpha": alpha,
            "plain": schmidt_summary(&w, &poly_tps(d)?, &tol)?,
            "deformed": schmidt_summary(&w, &deformed, &tol)?,
            "coefficients": MatrixJson::from(&deformed.coefficient_matrix(&w)?),
        }))
    })())
}

/// `x₁^a x₂^b` rewritten in center-of-mass coordinates `X`, `x`.
#[wasm_bindgen]
pub fn center_of_mass(a: usize, b: usize, degree: usize) -> String {
    respond((|| {
        let tol = Tolerance::default();
        let grid = poly_tps(degree)?;
        let p = PolyState::from_monomials(("x1", "x2"), degree, &[(a, b)])?;
        let moved = change_of_variables(&p, &Substitution::center_of_mass(), degree)?;
        Ok(json!({
            "particles": schmidt_summary(&p.to_vector(), &grid, &tol)?,
            "center_of_mass": schmidt_summary(&moved.to_vector(), &grid, &tol)?,
            "coefficients": MatrixJson::from(&moved.coeffs),
        }))
    })())
}
