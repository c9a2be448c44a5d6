//! Output formatting. Every format carries a provenance header with the tool
//! version, the command and the full effective config.

use std::fmt::Write;

use clap::ValueEnum;
use serde::Serialize;

use semipos_core::api::SolveResponse;
use semipos_core::bounds::HarnessOutput;
use semipos_core::config::Config;
use semipos_core::eigen::SpectrumSummary;
use semipos_core::norms::NormReport;
use semipos_core::spositivity::{BetaResult, Classification};
use semipos_core::tcp::VerifyReport;

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Serialize)]
struct Provenance<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a Config,
}

#[derive(Serialize)]
struct Document<'a, T> {
    provenance: Provenance<'a>,
    result: &'a T,
}

pub struct Output<'a> {
    format: Format,
    provenance: Provenance<'a>,
}

impl<'a> Output<'a> {
    pub fn new(format: Format, command: &'a str, config: &'a Config) -> Self {
        Output {
            format,
            provenance: Provenance { tool: "semipos", version: env!("CARGO_PKG_VERSION"), command, config },
        }
    }

    fn header(&self) -> String {
        let cfg = serde_json::to_string(self.provenance.config).unwrap_or_default();
        format!("# {} {} {} config={cfg}\n", self.provenance.tool, self.provenance.version, self.provenance.command)
    }

    pub fn render<T: Serialize>(
        &self,
        value: &T,
        text: impl FnOnce() -> String,
        csv: impl FnOnce() -> String,
    ) -> String {
        match self.format {
            Format::Json => {
                let doc = Document { provenance: self.provenance, result: value };
                let mut s = serde_json::to_string_pretty(&doc).expect("results serialize");
                s.push('\n');
                s
            }
            Format::Text => self.header() + &text(),
            Format::Csv => self.header() + &csv(),
        }
    }
}

/// Shortest round-trip form, with a trailing `.0` on integers.
fn num(v: f64) -> String {
    format!("{v:?}")
}

/// Rounded for reading; JSON output keeps full precision.
fn approx(v: f64) -> String {
    let r = (v * 1e9).round() / 1e9;
    num(if r == 0.0 { 0.0 } else { r })
}

fn vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| approx(x)).collect();
    format!("({})", parts.join(", "))
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn one_based(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn classification(c: &Classification) -> String {
    let mut s = format!("{}, beta={}\n", c.verdict.as_str(), approx(c.beta.value));
    let _ = writeln!(s, "argmin={} certified_by={}", vec(&c.beta.argmin), tag(&c.beta.certified_by));
    if let Some(x) = &c.counterexample {
        let _ = write!(s, "counterexample={}", vec(x));
        if let Some(v) = c.counterexample_value {
            let _ = write!(s, " max_i x_i(Ax^(m-1))_i={}", approx(v));
        }
        s.push('\n');
    }
    s
}

pub fn classification_csv(c: &Classification) -> String {
    let ce = c.counterexample.as_deref().map(|x| x.iter().map(|v| num(*v)).collect::<Vec<_>>().join(";"));
    format!(
        "verdict,beta,certified_by,counterexample\n{},{},{},{}\n",
        c.verdict.as_str(),
        num(c.beta.value),
        tag(&c.beta.certified_by),
        ce.unwrap_or_default()
    )
}

pub fn beta(b: &BetaResult) -> String {
    let mut s = format!("beta={}\nargmin={}\ncertified_by={}", approx(b.value), vec(&b.argmin), tag(&b.certified_by));
    if let Some(g) = b.grid_value {
        let _ = write!(s, " grid={} grid_value={}", b.grid_resolution, approx(g));
    }
    s.push('\n');
    s
}

pub fn beta_csv(b: &BetaResult) -> String {
    format!(
        "beta,certified_by,grid_resolution,grid_value\n{},{},{},{}\n",
        num(b.value),
        tag(&b.certified_by),
        b.grid_resolution,
        opt(b.grid_value)
    )
}

pub fn spectrum(sp: &SpectrumSummary) -> String {
    let vals: Vec<String> = sp.values.iter().map(|&v| approx(v)).collect();
    let mut s =
        format!("kind={} values=[{}] completeness={}\n", sp.kind.as_str(), vals.join(", "), tag(&sp.completeness));
    for (name, v) in [
        ("delta_h_plus", sp.delta_h_plus),
        ("delta_z_plus", sp.delta_z_plus),
        ("lambda_min_pareto_h", sp.lambda_min_pareto_h),
        ("mu_min_pareto_z", sp.mu_min_pareto_z),
    ] {
        if let Some(v) = v {
            let _ = writeln!(s, "{name}={}", approx(v));
        }
    }
    for r in &sp.records {
        let _ = writeln!(
            s,
            "  value={} support={} vector={} residual={:.1e}",
            approx(r.value),
            one_based(r.support.indices()),
            vec(&r.vector),
            r.residual
        );
    }
    s
}

pub fn spectrum_csv(sp: &SpectrumSummary) -> String {
    let mut s = String::from("kind,value,support,vector,residual\n");
    for r in &sp.records {
        let support: Vec<String> = r.support.indices().iter().map(|i| (i + 1).to_string()).collect();
        let vector: Vec<String> = r.vector.iter().map(|&v| num(v)).collect();
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            sp.kind.as_str(),
            num(r.value),
            support.join(";"),
            vector.join(";"),
            num(r.residual)
        );
    }
    s
}

pub fn norms(rs: &[NormReport]) -> String {
    let mut s = String::new();
    for r in rs {
        let _ = writeln!(
            s,
            "op={} p={} empirical={} bound={} witness={}",
            tag(&r.op),
            r.p.label(),
            approx(r.empirical_norm),
            approx(r.closed_form_bound),
            vec(&r.witness)
        );
    }
    s
}

pub fn norms_csv(rs: &[NormReport]) -> String {
    let mut s = String::from("op,p,empirical,bound\n");
    for r in rs {
        let _ = writeln!(s, "{},{},{},{}", tag(&r.op), r.p.label(), num(r.empirical_norm), num(r.closed_form_bound));
    }
    s
}

pub fn solve(r: &SolveResponse) -> String {
    let mut s = format!("status={} method={} ({})\n", tag(&r.status), tag(&r.method), r.message);
    for sol in &r.solutions {
        let _ = writeln!(
            s,
            "x={} support={} residuals: primal={:.1e} dual={:.1e} compl={:.1e}",
            vec(&sol.x),
            one_based(&sol.support),
            sol.residuals.primal,
            sol.residuals.dual,
            sol.residuals.compl
        );
    }
    s
}

pub fn solve_csv(r: &SolveResponse) -> String {
    let n = r.solutions.first().map_or(0, |s| s.x.len());
    let mut s = String::from("solution");
    for i in 1..=n {
        let _ = write!(s, ",x{i}");
    }
    s.push_str(",primal,dual,compl\n");
    for (k, sol) in r.solutions.iter().enumerate() {
        let _ = write!(s, "{k}");
        for &v in &sol.x {
            let _ = write!(s, ",{}", num(v));
        }
        let _ = writeln!(s, ",{},{},{}", num(sol.residuals.primal), num(sol.residuals.dual), num(sol.residuals.compl));
    }
    s
}

pub fn verify(r: &VerifyReport) -> String {
    let mut s = format!(
        "{} primal={} dual={} compl={}\nw={}\n",
        if r.pass { "pass" } else { "fail" },
        num(r.residuals.primal),
        num(r.residuals.dual),
        num(r.residuals.compl),
        vec(&r.w)
    );
    for f in &r.failures {
        let _ = writeln!(s, "  {f}");
    }
    s
}

pub fn verify_csv(r: &VerifyReport) -> String {
    format!(
        "pass,primal,dual,compl\n{},{},{},{}\n",
        r.pass,
        num(r.residuals.primal),
        num(r.residuals.dual),
        num(r.residuals.compl)
    )
}

pub fn harness(h: &HarnessOutput) -> String {
    let mut s = String::new();
    for r in &h.reports {
        let applicable = r.entries.iter().filter(|e| e.applicable).count();
        let worst = r
            .entries
            .iter()
            .filter(|e| e.applicable)
            .filter_map(|e| e.upper_bound.map(|u| u - e.achieved))
            .fold(f64::INFINITY, f64::min);
        let _ = write!(
            s,
            "instance {} m={} n={} beta={} solutions={} applicable={} {}",
            r.instance_id,
            r.m,
            r.n,
            approx(r.quantities.beta),
            r.solutions.len(),
            applicable,
            if r.pass { "pass" } else { "FAIL" }
        );
        if worst.is_finite() {
            let _ = write!(s, " min_upper_slack={worst:.3e}");
        }
        if let Some(note) = &r.note {
            let _ = write!(s, " note={note}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "{} reports, {} violations", h.reports.len(), h.violations.len());
    s
}
