//! File formats, reports and the worked examples.

pub mod examples;
pub mod json;
pub mod poly;
pub mod report;

pub use examples::{example_bargmann, example_bell, example_center_of_mass};
pub use poly::{change_of_variables, deformed_poly_tps, poly_tps, PolyState, Substitution};
pub use report::{analyze, AnalysisReport, ExampleReport};
