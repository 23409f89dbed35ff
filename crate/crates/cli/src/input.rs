//! Reading an equation from an expression, a text file or a JSON document.

use std::path::Path;

use abel_air::parse::parse_ode;
use abel_air::{AbelError, RationalAir, C64};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Number {
    Real(f64),
    Complex {
        re: f64,
        #[serde(default)]
        im: f64,
    },
}

impl From<&Number> for C64 {
    fn from(n: &Number) -> C64 {
        match *n {
            Number::Real(v) => C64::new(v, 0.0),
            Number::Complex { re, im } => C64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Coeffs {
    #[serde(default)]
    a0: Option<Number>,
    #[serde(default)]
    a1: Option<Number>,
    #[serde(default)]
    a2: Option<Number>,
    #[serde(default)]
    a3: Option<Number>,
    #[serde(default)]
    s0: Option<Number>,
    #[serde(default)]
    s1: Option<Number>,
    #[serde(default)]
    s2: Option<Number>,
    #[serde(default)]
    r0: Option<Number>,
    #[serde(default)]
    r1: Option<Number>,
    #[serde(default)]
    r2: Option<Number>,
}

/// `{"expr": "..."}` or `{"coeffs": {"a0": .., "s1": .., ...}}`; absent
/// coefficients are zero.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputDoc {
    expr: Option<String>,
    coeffs: Option<Coeffs>,
}

fn coeff(n: &Option<Number>) -> C64 {
    n.as_ref().map(C64::from).unwrap_or_default()
}

/// Parse a JSON input document.
pub fn parse_doc(text: &str) -> Result<RationalAir, AbelError> {
    let doc: InputDoc =
        serde_json::from_str(text).map_err(|e| AbelError::InvalidArgument(format!("input document: {e}")))?;
    match (doc.expr, doc.coeffs) {
        (Some(expr), None) => parse_ode(&expr),
        (None, Some(c)) => RationalAir::from_coeffs([
            coeff(&c.a0),
            coeff(&c.a1),
            coeff(&c.a2),
            coeff(&c.a3),
            coeff(&c.s0),
            coeff(&c.s1),
            coeff(&c.s2),
            coeff(&c.r0),
            coeff(&c.r1),
            coeff(&c.r2),
        ]),
        _ => Err(AbelError::InvalidArgument("input document needs exactly one of \"expr\" or \"coeffs\"".into())),
    }
}

/// File contents: JSON when it starts with `{`, otherwise an expression.
pub fn parse_text(text: &str) -> Result<RationalAir, AbelError> {
    let t = text.trim();
    if t.starts_with('{') {
        parse_doc(t)
    } else {
        parse_ode(t)
    }
}

/// `-` reads standard input; an existing file is read; anything else is
/// parsed as an expression.
pub fn load(arg: &str) -> Result<RationalAir, AbelError> {
    if arg == "-" {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)
            .map_err(|e| AbelError::InvalidArgument(format!("stdin: {e}")))?;
        return parse_text(&text);
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AbelError::InvalidArgument(format!("{}: {e}", path.display())))?;
        return parse_text(&text);
    }
    parse_ode(arg)
}
