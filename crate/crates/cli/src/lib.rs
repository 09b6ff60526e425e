//! Driver behind the `newton-milnor` binary: input parsing, dispatch and
//! serialization of reports.

pub mod parse;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use milnor_core::lattice_geometry::IntVec;
use milnor_core::milnor_invariants::Milnor;
use milnor_core::newton_polyhedron::{NewtonPolyhedron, Support, ZetaFactorization};
use milnor_core::numbers::fmt_rational;
use milnor_core::poly::{LaurentPoly2, PuiseuxPoly};
use milnor_core::{Error, RotationNumber};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

pub use parse::{parse_json, parse_polynomial};

/// An error as reported to the user: `{"error": code, "detail": ...}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: String,
    pub detail: String,
    pub internal: bool,
}

impl CliError {
    pub fn user(code: &str, detail: impl Into<String>) -> Self {
        CliError { code: code.to_string(), detail: detail.into(), internal: false }
    }

    pub fn exit_code(&self) -> i32 {
        if self.internal {
            2
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": self.code, "detail": self.detail })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidSupport(_) => "invalid-support",
            Error::Parse { .. } => "syntax",
            Error::Precondition { code, .. } => code,
            Error::UndefinedDistance(_) => "undefined-distance",
            Error::Internal(_) => "internal",
        };
        let detail = match &e {
            Error::Precondition { detail, .. } => detail.clone(),
            other => other.to_string(),
        };
        CliError { code: code.to_string(), detail, internal: !e.is_user_error() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Faces,
    Zeta,
    Rf,
    Epoly,
    Jordan,
    Spectrum,
    FullSpectrum,
    Report,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    /// Nothing given on the command line.
    Unspecified,
    AllGood,
    Thetas(Vec<RotationNumber>),
}

#[derive(Clone, Debug)]
pub struct Job {
    pub support: Support,
    pub command: Command,
    pub selector: Selector,
}

#[derive(Clone, Debug)]
pub struct FaceRow {
    pub dim: i32,
    pub vertices: Vec<IntVec>,
    pub distance: i64,
    pub extremal: bool,
}

#[derive(Clone, Debug, Default)]
pub struct EigenRow {
    pub theta: Option<RotationNumber>,
    pub multiplicity: Option<i64>,
    pub e: Option<LaurentPoly2>,
    pub jordan: Option<BTreeMap<usize, i64>>,
    pub spectrum: Option<PuiseuxPoly>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub n: usize,
    pub support: Vec<IntVec>,
    pub convenient: bool,
    pub dim_p: i32,
    pub faces: Option<Vec<FaceRow>>,
    pub zeta: Option<ZetaFactorization>,
    pub rf: Option<Vec<RotationNumber>>,
    pub eigenvalues: Option<Vec<EigenRow>>,
    pub full_spectrum: Option<PuiseuxPoly>,
    pub warnings: Vec<String>,
}

fn selected(job: &Job, np: &NewtonPolyhedron) -> Result<Vec<RotationNumber>, CliError> {
    let mut out = match &job.selector {
        Selector::Thetas(t) => t.clone(),
        Selector::AllGood => np.good_eigenvalues(),
        Selector::Unspecified if job.command == Command::Report => np.good_eigenvalues(),
        Selector::Unspecified => {
            return Err(CliError::user("no-eigenvalues", "give --theta a/b (repeatable) or --all-good"))
        }
    };
    out.sort();
    out.dedup();
    Ok(out)
}

fn eigen_row(m: &Milnor, command: Command, l: RotationNumber) -> Result<EigenRow, CliError> {
    let mut row = EigenRow { theta: Some(l), ..EigenRow::default() };
    match command {
        Command::Epoly => {
            // E is defined for every λ; the multiplicity only off R_f
            if !m.newton().bad_eigenvalues().contains(&l) {
                row.multiplicity = Some(m.newton().multiplicity(l)?);
            }
            row.e = Some(m.e_poly(l)?.coeffs);
        }
        Command::Jordan => row.jordan = Some(m.jordan_blocks(l)?.counts),
        Command::Spectrum => row.spectrum = Some(m.spectrum_lambda(l.theta())?),
        _ => {
            let r = m.eigenvalue_report(l)?;
            row.multiplicity = Some(r.multiplicity);
            row.e = Some(r.e.coeffs);
            row.jordan = r.jordan.map(|j| j.counts);
            row.spectrum = r.spectrum;
        }
    }
    Ok(row)
}

/// Runs one job. Eigenvalues are processed in parallel on the current
/// rayon pool; the output order does not depend on scheduling.
pub fn run(job: &Job) -> Result<Report, CliError> {
    let np = NewtonPolyhedron::build(&job.support)?;
    let mut report = Report {
        n: np.n(),
        support: job.support.monomials().to_vec(),
        convenient: np.is_convenient(),
        dim_p: np.dim_p(),
        faces: None,
        zeta: None,
        rf: None,
        eigenvalues: None,
        full_spectrum: None,
        warnings: Vec::new(),
    };
    let cmd = job.command;
    if cmd == Command::Faces {
        let mut rows: Vec<FaceRow> = np
            .compact_faces()
            .iter()
            .map(|f| FaceRow {
                dim: f.dim(),
                vertices: f.vertices().to_vec(),
                distance: f.lattice_distance,
                extremal: f.extremal,
            })
            .collect();
        rows.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        report.faces = Some(rows);
    }
    if matches!(cmd, Command::Zeta | Command::Report) {
        report.zeta = Some(np.zeta());
    }
    if matches!(cmd, Command::Rf | Command::Report) {
        report.rf = Some(np.bad_eigenvalues().into_iter().collect());
    }
    let needs_milnor = matches!(cmd, Command::Epoly | Command::Jordan | Command::Spectrum | Command::FullSpectrum | Command::Report);
    if !needs_milnor {
        return Ok(report);
    }
    let lambdas = if cmd == Command::FullSpectrum { Vec::new() } else { selected(job, &np)? };
    let m = Milnor::new(np)?;
    if !lambdas.is_empty() || cmd == Command::Report {
        let rows: Vec<Result<EigenRow, CliError>> = lambdas.par_iter().map(|&l| eigen_row(&m, cmd, l)).collect();
        let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
        if cmd == Command::Epoly && rows.iter().any(|r| r.multiplicity.is_none()) {
            report.warnings.push("eigenvalues in R_f: only the alternating sum E is reported".into());
        }
        report.eigenvalues = Some(rows);
    }
    if cmd == Command::Report && report.convenient {
        report.warnings.push("convenient input: Jordan blocks and the eigenvalue spectra are not reported".into());
    }
    if matches!(cmd, Command::FullSpectrum | Command::Report) {
        report.full_spectrum = Some(m.full_spectrum()?);
    }
    Ok(report)
}

fn puiseux_json(p: &PuiseuxPoly) -> Value {
    Value::Array(p.terms().map(|(a, &c)| json!([fmt_rational(a), c])).collect())
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut o = Map::new();
        o.insert("n".into(), json!(self.n));
        o.insert("support".into(), json!(self.support));
        o.insert("convenient".into(), json!(self.convenient));
        o.insert("dimP".into(), json!(self.dim_p));
        if let Some(faces) = &self.faces {
            let rows: Vec<Value> = faces
                .iter()
                .map(|f| json!({"dim": f.dim, "vertices": f.vertices, "distance": f.distance, "extremal": f.extremal}))
                .collect();
            o.insert("faces".into(), Value::Array(rows));
        }
        if let Some(z) = &self.zeta {
            let factors: Map<String, Value> = z.factors.iter().map(|(d, e)| (d.to_string(), json!(e))).collect();
            o.insert("zeta".into(), json!({ "factors": factors }));
        }
        if let Some(rf) = &self.rf {
            o.insert("Rf".into(), Value::Array(rf.iter().map(|r| json!(fmt_rational(&r.theta()))).collect()));
        }
        if let Some(rows) = &self.eigenvalues {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut e = Map::new();
                    if let Some(t) = r.theta {
                        e.insert("theta".into(), json!(fmt_rational(&t.theta())));
                    }
                    if let Some(m) = r.multiplicity {
                        e.insert("multiplicity".into(), json!(m));
                    }
                    if let Some(p) = &r.e {
                        e.insert("E".into(), Value::Array(p.terms().map(|(x, &c)| json!([x[0], x[1], c])).collect()));
                    }
                    if let Some(j) = &r.jordan {
                        let j: Map<String, Value> = j.iter().map(|(k, c)| (k.to_string(), json!(c))).collect();
                        e.insert("jordan".into(), Value::Object(j));
                    }
                    if let Some(s) = &r.spectrum {
                        e.insert("spectrum".into(), puiseux_json(s));
                    }
                    Value::Object(e)
                })
                .collect();
            o.insert("eigenvalues".into(), Value::Array(rows));
        }
        if let Some(s) = &self.full_spectrum {
            o.insert("full_spectrum".into(), puiseux_json(s));
        }
        o.insert("warnings".into(), json!(self.warnings));
        Value::Object(o)
    }

    pub fn to_human(&self) -> String {
        let mut s = String::new();
        let fmt_pt = |v: &IntVec| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        let line = |s: &mut String, k: &str, v: String| {
            let _ = writeln!(s, "{k:<14}{v}");
        };
        line(&mut s, "n", self.n.to_string());
        line(&mut s, "support", self.support.iter().map(fmt_pt).collect::<Vec<_>>().join(" "));
        line(&mut s, "convenient", if self.convenient { "yes" } else { "no" }.into());
        line(&mut s, "dim P", self.dim_p.to_string());
        if let Some(faces) = &self.faces {
            let _ = writeln!(s, "\n{:<5}{:<10}{:<10}vertices", "dim", "distance", "extremal");
            for f in faces {
                let verts = f.vertices.iter().map(fmt_pt).collect::<Vec<_>>().join(" ");
                let _ = writeln!(s, "{:<5}{:<10}{:<10}{verts}", f.dim, f.distance, if f.extremal { "yes" } else { "no" });
            }
        }
        if let Some(z) = &self.zeta {
            line(&mut s, "zeta", z.to_string());
        }
        if let Some(rf) = &self.rf {
            let v = if rf.is_empty() { "(empty)".to_string() } else { rf.iter().map(|r| fmt_rational(&r.theta())).collect::<Vec<_>>().join(" ") };
            line(&mut s, "R_f", v);
        }
        if let Some(rows) = &self.eigenvalues {
            let table: Vec<[String; 5]> = rows
                .iter()
                .map(|r| {
                    let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
                    [
                        opt(r.theta.map(|t| fmt_rational(&t.theta()))),
                        opt(r.multiplicity.map(|m| m.to_string())),
                        opt(r.e.as_ref().map(|e| e.to_string())),
                        opt(r.jordan.as_ref().map(|j| {
                            if j.is_empty() {
                                "none".into()
                            } else {
                                j.iter().map(|(k, c)| format!("{k}:{c}")).collect::<Vec<_>>().join(" ")
                            }
                        })),
                        opt(r.spectrum.as_ref().map(|p| p.to_string())),
                    ]
                })
                .collect();
            let head = ["theta", "mult", "E(u,v)", "jordan size:count", "spectrum"];
            let mut w = head.map(|h| h.len());
            for row in &table {
                for (k, c) in row.iter().enumerate() {
                    w[k] = w[k].max(c.chars().count());
                }
            }
            let _ = writeln!(s);
            let mut put = |cells: Vec<&str>| {
                let mut l = String::new();
                for (k, c) in cells.iter().enumerate() {
                    let _ = write!(l, "{c:<width$}  ", width = w[k]);
                }
                let _ = writeln!(s, "{}", l.trim_end());
            };
            put(head.to_vec());
            for row in &table {
                put(row.iter().map(String::as_str).collect());
            }
        }
        if let Some(sp) = &self.full_spectrum {
            line(&mut s, "full spectrum", sp.to_string());
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}
