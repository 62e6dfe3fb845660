//! Certificate files and the catalog report.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{
    gamma_bound, omega_bound_for_certificate, cube_sum_check, GammaBound, OmegaBound, CubeSumTest,
};
use crate::chardeg::{degrees_formula, degrees_numeric, CharacterDegrees, DegreeSource, NUMERIC_CAP};
use crate::constructions::{catalog, CatalogEntry};
use crate::group::{parse_descriptor, Element, GroupError};
use crate::tpp::{reverify, Certificate, TppError, TppOutcome};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("declared shape {declared:?} does not match subsets {actual:?}")]
    ShapeMismatch { declared: [usize; 3], actual: [usize; 3] },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Tpp(#[from] TppError),
}

/// On-disk form of a certificate. Elements use the canonical strings of
/// their group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: u32,
    pub group: String,
    pub subsets: [Vec<String>; 3],
    pub shape: [usize; 3],
    pub alpha_upper: Option<f64>,
    pub verified: bool,
    pub subgroup: [bool; 3],
    pub construction: String,
}

impl CertificateFile {
    pub fn from_certificate(cert: &Certificate) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            group: cert.group.descriptor().to_string(),
            subsets: std::array::from_fn(|i| cert.subsets[i].iter().map(|e| cert.group.format_elem(e)).collect()),
            shape: cert.shape(),
            alpha_upper: cert.alpha_upper(),
            verified: cert.verified,
            subgroup: cert.subgroup,
            construction: cert.construction.clone(),
        }
    }

    /// Parses the group and elements. The result is unverified.
    pub fn to_certificate(&self) -> Result<Certificate, ReportError> {
        if self.schema != SCHEMA_VERSION {
            return Err(ReportError::Schema(self.schema));
        }
        let group = parse_descriptor(&self.group)?;
        let mut subsets: [Vec<Element>; 3] = Default::default();
        for (out, strs) in subsets.iter_mut().zip(&self.subsets) {
            *out = strs.iter().map(|s| group.parse_elem(s)).collect::<Result<_, _>>()?;
        }
        let actual = [subsets[0].len(), subsets[1].len(), subsets[2].len()];
        if actual != self.shape {
            return Err(ReportError::ShapeMismatch { declared: self.shape, actual });
        }
        Ok(Certificate {
            group,
            subsets,
            subgroup: self.subgroup,
            verified: false,
            construction: self.construction.clone(),
        })
    }
}

pub fn certificate_to_json(cert: &Certificate) -> String {
    serde_json::to_string_pretty(&CertificateFile::from_certificate(cert)).expect("certificate serializes")
}

/// Parses a certificate and re-runs verification on it.
pub fn load_certificate(json: &str) -> Result<TppOutcome, ReportError> {
    let file: CertificateFile = serde_json::from_str(json)?;
    Ok(reverify(&file.to_certificate()?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeSummary {
    /// `formula` or `numeric`.
    pub source: &'static str,
    /// Seed of the numeric method.
    pub seed: Option<u64>,
    pub complete: bool,
    /// `(degree, multiplicity)` pairs; only the largest degree when incomplete.
    pub counts: Vec<(u64, u64)>,
}

impl DegreeSummary {
    fn new(d: &CharacterDegrees) -> Self {
        let (source, seed) = match d.source() {
            DegreeSource::Formula => ("formula", None),
            DegreeSource::Numeric { seed } => ("numeric", Some(seed)),
        };
        Self { source, seed, complete: d.is_complete(), counts: d.counts().to_vec() }
    }
}

/// One line of the catalog report. Fields a row could not compute hold
/// `None` with the reason in `errors`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub label: String,
    pub construction: String,
    pub group: String,
    pub order: u64,
    pub shape: Option<[usize; 3]>,
    pub nmp: Option<u128>,
    pub alpha_upper: Option<f64>,
    pub verified: bool,
    pub degrees: Option<DegreeSummary>,
    /// `None` for infinite `γ` as well as for missing degrees.
    pub gamma: Option<f64>,
    pub gamma_infinite: bool,
    pub cube_sum: Option<CubeSumTest>,
    pub omega: Option<OmegaBound>,
    pub gamma_bound: Option<GammaBound>,
    pub verify_seconds: Option<f64>,
    pub errors: Vec<String>,
}

/// Formula degrees when complete, otherwise numeric ones if the group is
/// small enough, otherwise whatever the formula gives.
pub fn degrees_for(g: &crate::group::FiniteGroup, seed: u64) -> Result<CharacterDegrees, String> {
    let formula = degrees_formula(g);
    match formula {
        Ok(d) if d.is_complete() => Ok(d),
        other => {
            if g.order() <= NUMERIC_CAP {
                degrees_numeric(g, seed).map_err(|e| e.to_string())
            } else {
                other.map_err(|e| e.to_string())
            }
        }
    }
}

/// Re-verifies `cert` and evaluates every bound on it.
pub fn report_row(label: &str, cert: &Certificate, seed: u64, timings: bool) -> ReportRow {
    let mut errors = Vec::new();
    let start = Instant::now();
    let verified = match reverify(cert) {
        Ok(out) => out.is_verified(),
        Err(e) => {
            errors.push(format!("verify: {e}"));
            false
        }
    };
    let verify_seconds = timings.then(|| start.elapsed().as_secs_f64());
    let mut row = ReportRow {
        label: label.to_string(),
        construction: cert.construction.clone(),
        group: cert.group.descriptor().to_string(),
        order: cert.group.order(),
        shape: Some(cert.shape()),
        nmp: Some(cert.nmp()),
        alpha_upper: cert.alpha_upper(),
        verified,
        degrees: None,
        gamma: None,
        gamma_infinite: false,
        cube_sum: None,
        omega: None,
        gamma_bound: None,
        verify_seconds,
        errors,
    };
    if !verified {
        row.errors.push("certificate does not verify".into());
        return row;
    }
    let deg = match degrees_for(&cert.group, seed) {
        Ok(d) => d,
        Err(e) => {
            row.errors.push(format!("degrees: {e}"));
            return row;
        }
    };
    let gamma = deg.gamma();
    row.gamma_infinite = gamma.is_infinite();
    row.gamma = gamma.is_finite().then_some(gamma);
    row.degrees = Some(DegreeSummary::new(&deg));
    let checked = Certificate { verified: true, ..cert.clone() };
    match cube_sum_check(&checked, &deg) {
        Ok(q) => row.cube_sum = Some(q),
        Err(e) => row.errors.push(format!("cube_sum: {e}")),
    }
    match omega_bound_for_certificate(&checked, &deg) {
        Ok(o) => row.omega = Some(o),
        Err(e) => row.errors.push(format!("omega: {e}")),
    }
    if let Some(alpha) = row.alpha_upper {
        row.gamma_bound = Some(gamma_bound(alpha, gamma));
    }
    row
}

fn failed_row(entry: &CatalogEntry, err: String) -> ReportRow {
    ReportRow {
        label: entry.label(),
        construction: String::new(),
        group: String::new(),
        order: 0,
        shape: None,
        nmp: None,
        alpha_upper: None,
        verified: false,
        degrees: None,
        gamma: None,
        gamma_infinite: false,
        cube_sum: None,
        omega: None,
        gamma_bound: None,
        verify_seconds: None,
        errors: vec![err],
    }
}

/// Rows for `entries`, in order. A failing construction yields a row with
/// its error instead of aborting.
pub fn report_for(entries: &[CatalogEntry], seed: u64, timings: bool) -> Vec<ReportRow> {
    entries
        .iter()
        .map(|entry| match entry.build() {
            Ok(cert) => report_row(&entry.label(), &cert, seed, timings),
            Err(e) => failed_row(entry, format!("construct: {e}")),
        })
        .collect()
}

/// The report over the whole catalog.
pub fn full_report(seed: u64, timings: bool) -> Vec<ReportRow> {
    report_for(&catalog(), seed, timings)
}

fn fmt_opt(x: Option<f64>, digits: usize) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.digits$}"))
}

/// Fixed-width text rendering of report rows.
pub fn render_text(rows: &[ReportRow]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(
        out,
        "{:<22} {:>12} {:<16} {:>9} {:>9} {:>12} {:>12} {:<5} {:<16} {:<16}",
        "construction", "|G|", "shape", "alpha", "gamma", "nmp", "sum d^3", "beats", "omega", "gamma bound"
    )
    .unwrap();
    for r in rows {
        let shape = r.shape.map_or("-".into(), |s| format!("<{},{},{}>", s[0], s[1], s[2]));
        let gamma = if r.gamma_infinite { "inf".into() } else { fmt_opt(r.gamma, 6) };
        let (sum_d3, q1) = match &r.cube_sum {
            Some(q) => (format!("{}{}", if q.sum_d3_exact { "" } else { ">=" }, q.sum_d3), q.satisfied.to_string()),
            None => ("-".into(), "-".into()),
        };
        let omega = match &r.omega {
            Some(o) => match o.outcome {
                crate::bounds::OmegaOutcome::Bound(w) => format!("{w:.6}"),
                crate::bounds::OmegaOutcome::Trivial => "trivial".into(),
            },
            None => "-".into(),
        };
        let cor = match r.gamma_bound {
            Some(GammaBound::Bound(w)) => format!("{w:.6}"),
            Some(GammaBound::Inapplicable) => "inapplicable".into(),
            None => "-".into(),
        };
        let nmp = r.nmp.map_or("-".into(), |n| n.to_string());
        writeln!(
            out,
            "{:<22} {:>12} {:<16} {:>9} {:>9} {:>12} {:>12} {:<5} {:<16} {:<16}",
            r.label,
            r.order,
            shape,
            fmt_opt(r.alpha_upper, 6),
            gamma,
            nmp,
            sum_d3,
            q1,
            omega,
            cor
        )
        .unwrap();
        if !r.verified {
            writeln!(out, "  NOT VERIFIED").unwrap();
        }
        if let Some(t) = r.verify_seconds {
            writeln!(out, "  verify time {t:.3}s").unwrap();
        }
        for e in &r.errors {
            writeln!(out, "  error: {e}").unwrap();
        }
    }
    out
}
