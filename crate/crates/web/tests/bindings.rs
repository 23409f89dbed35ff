use abel_air_web::{classify_json, level_phase_grid, solve_json};
use serde_json::Value;

#[test]
fn classify_reports_class_and_parameters() {
    let v: Value = serde_json::from_str(&classify_json("y' = 1/(x*y + x^2 + 7)").unwrap()).unwrap();
    assert_eq!(v["class"], "C5");
    assert!((v["parameters"]["b"]["re"].as_f64().unwrap() - 7.0).abs() < 1e-12);
}

#[test]
fn solve_returns_a_passing_path() {
    let v: Value = serde_json::from_str(&solve_json("y' = 1/(y + x^2)", 1e-6).unwrap()).unwrap();
    assert_eq!(v["verification"]["pass"], true);
    let path = v["verification"]["path"].as_array().unwrap();
    assert!(path.len() > 2);
    assert_eq!(path[0][0].as_f64(), v["verification"]["x0"].as_f64());
}

#[test]
fn phase_grid_has_the_requested_shape() {
    let g = level_phase_grid("y' = 1/(y + x^2)", (-1.0, 1.0), (-1.0, 1.0), 7, 5).unwrap();
    assert_eq!(g.len(), 35);
    assert!(g.iter().filter(|p| p.is_finite()).all(|p| p.abs() <= std::f64::consts::PI));
    assert!(g.iter().any(|p| p.is_finite()));
}

#[test]
fn errors_keep_their_codes() {
    assert_eq!(classify_json("y' = (y").unwrap_err().code(), "parse_syntax");
    assert_eq!(solve_json("y' = y*(y - 1)/(y + x)", 1e-6).unwrap_err().code(), "unsupported_class");
    assert!(level_phase_grid("y' = 1/(y + x^2)", (0.0, 1.0), (0.0, 1.0), 1, 4).is_err());
}
