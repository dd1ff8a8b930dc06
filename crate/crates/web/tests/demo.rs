use std::f64::consts::FRAC_PI_4;

use serde_json::Value;
use tpskit_web::{bargmann_deformation, bell_explorer, center_of_mass};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn bell_state_is_a_product_for_the_observables() {
    let v = parse(bell_explorer(FRAC_PI_4, 0.0));
    assert_eq!(v["qubits"]["rank"], 2);
    assert_eq!(v["observables"]["rank"], 1);

    // |00⟩ and |11⟩ both lie in the span of φ±, a single column of the
    // induced grid, so the whole family is a product there.
    for theta in [0.0, 0.3, 1.1] {
        let v = parse(bell_explorer(theta, 0.7));
        assert_eq!(v["qubits"]["rank"], if theta == 0.0 { 1 } else { 2 });
        assert_eq!(v["observables"]["rank"], 1);
    }
}

#[test]
fn deformation_entangles_unless_trivial() {
    let v = parse(bargmann_deformation(2.0));
    assert_eq!(v["plain"]["rank"], 1);
    assert_eq!(v["deformed"]["rank"], 2);
    assert_eq!(v["coefficients"]["data"][8], serde_json::json!([0.5, 0.0]));

    assert_eq!(parse(bargmann_deformation(1.0))["deformed"]["rank"], 1);
    assert_eq!(parse(bargmann_deformation(0.0))["code"], "ZeroAlpha");
}

#[test]
fn center_of_mass_changes_the_rank() {
    let v = parse(center_of_mass(1, 1, 4));
    assert_eq!(v["particles"]["rank"], 1);
    assert_eq!(v["center_of_mass"]["rank"], 2);
    assert_eq!(parse(center_of_mass(2, 2, 3))["code"], "GridOverflow");
    assert_eq!(parse(center_of_mass(5, 0, 4))["code"], "DimensionMismatch");
}
