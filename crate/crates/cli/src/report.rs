//! Output document and its serialization.
//!
//! Every number is written with 17 significant digits; complex numbers as
//! `{"re": .., "im": ..}`.

use std::collections::BTreeMap;

use abel_air::C64;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A real number serialized with 17 significant digits (`null` if not finite).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cplx {
    pub re: Num,
    pub im: Num,
}

impl From<C64> for Cplx {
    fn from(z: C64) -> Self {
        Cplx { re: Num(z.re), im: Num(z.im) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootDoc {
    /// `null` for the root at infinity.
    pub value: Option<Cplx>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionDoc {
    pub family: String,
    pub description: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointDoc {
    pub x: Num,
    pub y: Cplx,
}

#[derive(Clone, Debug, Serialize)]
pub struct PathDoc {
    pub from: Num,
    pub to: Num,
    /// `"automatic"` or `"user"`.
    pub selection: &'static str,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationDoc {
    pub initial_point: PointDoc,
    pub path: PathDoc,
    pub level: Cplx,
    pub drift: Num,
    pub tolerance: Num,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorDoc {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ReportDoc {
    /// The input as parsed, rendered back to text.
    pub equation: Option<String>,
    pub class: Option<String>,
    pub parameters: BTreeMap<String, Cplx>,
    pub numerator_roots: Vec<RootDoc>,
    pub transform_chain: Vec<String>,
    pub solution: Option<SolutionDoc>,
    pub verification: Option<VerificationDoc>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorDoc>,
}

impl ReportDoc {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &str| out.push_str(&format!("{k:<14}{v}\n"));
        if let Some(eq) = &self.equation {
            line("equation", eq);
        }
        if let Some(c) = &self.class {
            line("class", c);
        }
        for (name, v) in &self.parameters {
            line(&format!("  {name}"), &fmt_c(v));
        }
        for (i, step) in self.transform_chain.iter().enumerate() {
            line(if i == 0 { "chain" } else { "" }, step);
        }
        if let Some(s) = &self.solution {
            line("solution", &s.description);
        }
        if let Some(v) = &self.verification {
            line(
                "path",
                &format!(
                    "x = {:?} -> {:?}, y0 = {} ({})",
                    v.path.from.0,
                    v.path.to.0,
                    fmt_c(&v.initial_point.y),
                    v.path.selection
                ),
            );
            line("drift", &format!("{:.3e} (tolerance {:.1e})", v.drift.0, v.tolerance.0));
            line("verdict", if v.pass { "pass" } else { "FAIL" });
        }
        for w in &self.warnings {
            line("warning", w);
        }
        if let Some(n) = &self.note {
            line("note", n);
        }
        if let Some(e) = &self.error {
            line("error", &format!("[{}] {}", e.code, e.message));
        }
        out
    }
}

fn fmt_c(z: &Cplx) -> String {
    let (re, im) = (z.re.0, z.im.0);
    if im == 0.0 {
        format!("{re:?}")
    } else {
        format!("{re:?}{}{:?}i", if im < 0.0 { "-" } else { "+" }, im.abs())
    }
}
