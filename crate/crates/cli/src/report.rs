//! Deterministic report emission: JSON with stable key order, rationals as
//! `p/q` strings, floats at 17 significant digits; CSV and plot-data files.
//!
//! Emission is hand-rolled so that the float formatting contract holds
//! byte-for-byte across runs.

use std::fmt::Write as _;

use nilcycle_core::focal::{FocalReport, Stability, Thm19Case};
use nilcycle_core::polar::fmt_f64;
use nilcycle_core::rational::rational_str;
use nilcycle_core::cycles::CycleSet;
use nilcycle_core::fit::FittedFocal;

use crate::unfold::UnfoldingPlan;

pub fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

pub fn json_str(s: &str) -> String {
    format!("\"{}\"", json_escape(s))
}

fn stability_str(s: Stability) -> &'static str {
    match s {
        Stability::Stable => "stable",
        Stability::Unstable => "unstable",
        Stability::Undetermined => "undetermined",
        Stability::CenterCandidate => "center-candidate",
    }
}

fn thm19_str(c: Thm19Case) -> &'static str {
    match c {
        Thm19Case::N2Focus => "n2-focus",
        Thm19Case::Symmetric => "symmetric",
        Thm19Case::None => "none",
    }
}

fn opt_usize(v: Option<usize>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "null".to_string(),
    }
}

pub fn focal_report_json(r: &FocalReport) -> String {
    let b_list = r
        .b
        .iter()
        .map(|c| json_str(&rational_str(c)))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "{{\n  \"n\": {},\n  \"p_n\": {},\n  \"B\": [{}],\n  \"first_odd_nonzero\": {},\n  \"focus_order\": {},\n  \"stability\": {},\n  \"node_range\": {},\n  \"symmetric_center\": {},\n  \"thm19_case\": {}\n}}\n",
        r.n,
        r.p_n,
        b_list,
        opt_usize(r.first_odd_nonzero),
        opt_usize(r.focus_order),
        json_str(stability_str(r.stability)),
        r.node_range,
        r.symmetric_center,
        json_str(thm19_str(r.thm19_case)),
    )
}

pub fn fitted_json(f: &FittedFocal) -> String {
    let v = f
        .v
        .iter()
        .map(|x| fmt_f64(*x))
        .collect::<Vec<_>>()
        .join(", ");
    let s = f
        .sigma
        .iter()
        .map(|x| fmt_f64(*x))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "{{\"v\": [{v}], \"sigma\": [{s}], \"residual\": {}, \"condition\": {}, \"ill_conditioned\": {}}}",
        fmt_f64(f.residual),
        fmt_f64(f.condition),
        f.ill_conditioned
    )
}

pub fn cycle_set_json(c: &CycleSet) -> String {
    let mut out = String::from("{\n  \"count\": ");
    let _ = write!(out, "{}", c.count);
    out.push_str(",\n  \"brackets\": [");
    for (i, b) in c.brackets.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(
            out,
            "{{\"x_lo\": {}, \"x_hi\": {}, \"direction\": {}}}",
            fmt_f64(b.x_lo),
            fmt_f64(b.x_hi),
            json_str(if b.falling { "+to-" } else { "-to+" })
        );
    }
    out.push_str("],\n  \"roots\": [");
    for (i, r) in c.roots.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let partner = match r.partner {
            Some(p) => fmt_f64(p),
            None => "null".into(),
        };
        let pres = match r.partner_residual {
            Some(p) => fmt_f64(p),
            None => "null".into(),
        };
        let _ = write!(
            out,
            "{{\"x\": {}, \"d\": {}, \"partner\": {partner}, \"partner_residual\": {pres}, \"confirmed\": {}}}",
            fmt_f64(r.x),
            fmt_f64(r.d_at_root),
            r.confirmed
        );
    }
    out.push_str("],\n  \"warnings\": [");
    for (i, w) in c.warnings.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&json_str(w));
    }
    out.push_str("]\n}\n");
    out
}

pub fn unfolding_plan_json(p: &UnfoldingPlan) -> String {
    let mut out = String::from("{\n");
    let _ = write!(out, "  \"target_count\": {},\n", p.target_count);
    let _ = write!(out, "  \"eps\": {},\n", json_str(&rational_str(&p.eps)));
    let _ = write!(out, "  \"ratio\": {},\n", json_str(&rational_str(&p.ratio)));
    let _ = write!(out, "  \"top_sign\": {},\n", p.top_sign);
    out.push_str("  \"assignments\": {");
    for (i, (name, v)) in p.assignments.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{}: {}", json_str(name), json_str(&rational_str(v)));
    }
    out.push_str("},\n  \"realized_B\": {");
    for (i, (idx, v)) in p.realized_b.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "\"B_{idx}\": {}", json_str(&rational_str(v)));
    }
    out.push_str("},\n");
    let _ = write!(out, "  \"jacobian_rank\": {}\n", opt_usize(p.jacobian_rank));
    out.push_str("}\n");
    out
}

/// One pass/fail line of an experiment, tied to the acceptance criterion it
/// checks (`id = None` for supplementary diagnostics).
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: Option<String>,
    pub name: String,
    pub pass: bool,
    pub details: String,
}

impl CriterionResult {
    pub fn new(id: Option<&str>, name: &str, pass: bool, details: String) -> Self {
        CriterionResult {
            id: id.map(|s| s.to_string()),
            name: name.to_string(),
            pass,
            details,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentReport {
    pub experiment: String,
    /// Echo of the effective configuration, sorted by key.
    pub inputs: Vec<(String, String)>,
    pub checks: Vec<CriterionResult>,
    pub artifacts: Vec<String>,
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            ..Default::default()
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn push(&mut self, c: CriterionResult) {
        self.checks.push(c);
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        let _ = write!(out, "  \"experiment\": {},\n", json_str(&self.experiment));
        out.push_str("  \"inputs\": {");
        let mut inputs = self.inputs.clone();
        inputs.sort();
        for (i, (k, v)) in inputs.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{}: {}", json_str(k), json_str(v));
        }
        out.push_str("},\n  \"checks\": [\n");
        for (i, c) in self.checks.iter().enumerate() {
            let id = match &c.id {
                Some(s) => json_str(s),
                None => "null".into(),
            };
            let _ = write!(
                out,
                "    {{\"criterion\": {id}, \"name\": {}, \"pass\": {}, \"details\": {}}}{}\n",
                json_str(&c.name),
                c.pass,
                json_str(&c.details),
                if i + 1 < self.checks.len() { "," } else { "" }
            );
        }
        out.push_str("  ],\n  \"artifacts\": [");
        for (i, a) in self.artifacts.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&json_str(a));
        }
        let _ = write!(
            out,
            "],\n  \"all_pass\": {}\n}}\n",
            self.all_pass()
        );
        out
    }

    /// The one-line-per-criterion console view.
    pub fn console_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = c.id.as_deref().unwrap_or("----");
            let _ = writeln!(
                out,
                "[{}] {tag} {} :: {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.details
            );
        }
        out
    }
}
