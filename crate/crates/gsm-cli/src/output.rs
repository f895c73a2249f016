//! Multivector printing, suite reports, and CSV emission.
//!
//! Reports are deterministic: identical config and seed produce
//! byte-identical files for any worker count, so they can be diffed in CI.
//! Wall time is therefore reported on stderr only and the report's
//! `elapsed_ms` field is null.

use gsm_core::clifford::Multivector;
use serde::Serialize;

/// Blade label: `1` for the scalar, else `e` followed by ascending
/// generator indices, dot-separated when an index needs two digits.
pub fn blade_label(mask: usize) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let indices: Vec<usize> = (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect();
    let sep = if indices.iter().any(|&i| i > 9) { "." } else { "" };
    format!(
        "e{}",
        indices
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(sep)
    )
}

/// `re+im i` with default shortest-roundtrip float formatting.
pub fn format_complex(c: num_complex::Complex64) -> String {
    if c.im >= 0.0 || c.im.is_nan() {
        format!("{}+{}i", c.re, c.im)
    } else {
        format!("{}-{}i", c.re, -c.im)
    }
}

/// One line per blade, nonzero only unless `all` is set.
pub fn multivector_lines(mv: &Multivector, all: bool) -> Vec<String> {
    (0..mv.sig().dim())
        .filter(|&mask| {
            let c = mv.coeff(mask);
            all || c.re != 0.0 || c.im != 0.0
        })
        .map(|mask| format!("{}: {}", blade_label(mask), format_complex(mv.coeff(mask))))
        .collect()
}

/// Rows of `blade,re,im` for CSV output.
pub fn multivector_csv(mv: &Multivector, all: bool) -> String {
    let mut out = String::from("blade,re,im\n");
    for mask in 0..mv.sig().dim() {
        let c = mv.coeff(mask);
        if all || c.re != 0.0 || c.im != 0.0 {
            out.push_str(&format!("{},{},{}\n", blade_label(mask), c.re, c.im));
        }
    }
    out
}

#[derive(Serialize, Clone)]
pub struct BladeEntry {
    pub blade: String,
    pub re: f64,
    pub im: f64,
}

pub fn multivector_json(mv: &Multivector, all: bool) -> serde_json::Value {
    let blades: Vec<BladeEntry> = (0..mv.sig().dim())
        .filter(|&mask| {
            let c = mv.coeff(mask);
            all || c.re != 0.0 || c.im != 0.0
        })
        .map(|mask| BladeEntry {
            blade: blade_label(mask),
            re: mv.coeff(mask).re,
            im: mv.coeff(mask).im,
        })
        .collect();
    serde_json::json!({ "blades": blades })
}

/// Echo of the run configuration embedded in every report.
#[derive(Serialize, Clone)]
pub struct ConfigEcho {
    pub p: usize,
    pub q: usize,
    pub max_degree: u32,
    pub x_order: usize,
    pub xi_order: usize,
    pub radial_order: usize,
    pub sphere_order: usize,
    pub tol: Option<f64>,
    pub seed: u64,
    pub generator: String,
}

/// One verified identity.
#[derive(Serialize, Clone)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(name: &str, anchor: &str, deviation: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            anchor: anchor.to_string(),
            deviation,
            tol,
            pass: deviation <= tol,
        }
    }
}

/// Machine-diffable suite report. `elapsed_ms` is always null so that
/// identical runs are byte-identical; wall time goes to stderr.
#[derive(Serialize, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub config: ConfigEcho,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    pub elapsed_ms: Option<u64>,
}

impl SuiteReport {
    pub fn new(suite: &str, config: ConfigEcho, checks: Vec<CheckRecord>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            suite: suite.to_string(),
            config,
            checks,
            pass,
            elapsed_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,p,q,seed,check,anchor,deviation,tol,pass\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                self.suite,
                self.config.p,
                self.config.q,
                self.config.seed,
                c.name,
                c.anchor,
                c.deviation,
                c.tol,
                c.pass
            ));
        }
        out
    }
}
