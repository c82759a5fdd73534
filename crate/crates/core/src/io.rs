//! File formats: sample CSV, landmark CSV, JSON report, DOT graph, arrow CSV.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{AdmissiblePair, CellComplex};
use crate::cost::build_cost_model;
use crate::datagen::FieldSample;
use crate::dynamics::{analyze, FlowRole};
use crate::pipeline::{Analysis, PipelineConfig};
use crate::solver::{objective_decomposition, verify_arrows, Matching};
use crate::vectors::VectorAssignment;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn parse_err(line: u64, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

fn csv_error(e: csv::Error) -> IoError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => IoError::Io(io),
        other => parse_err(line, format!("{other:?}")),
    }
}

/// Reads a numeric CSV whose header must be `<prefix>1..<prefix>d` for each
/// prefix in turn. Returns one row of `prefixes.len() · d` values per record.
fn read_columns(reader: impl Read, prefixes: &[&str]) -> Result<(usize, Vec<Vec<f64>>), IoError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.is_empty() || header.iter().all(str::is_empty) {
        return Err(parse_err(1, "missing header"));
    }
    if header.len() % prefixes.len() != 0 {
        return Err(parse_err(
            1,
            format!("expected columns {}", expected_header(prefixes, 2)),
        ));
    }
    let d = header.len() / prefixes.len();
    let want = expected_header(prefixes, d);
    if header.iter().collect::<Vec<_>>().join(",") != want {
        return Err(parse_err(1, format!("expected header `{want}`")));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| parse_err(line, format!("not a finite number: `{f}`")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(2, "no data rows"));
    }
    Ok((d, rows))
}

fn expected_header(prefixes: &[&str], d: usize) -> String {
    prefixes
        .iter()
        .flat_map(|p| (1..=d).map(move |i| format!("{p}{i}")))
        .collect::<Vec<_>>()
        .join(",")
}

/// Sample CSV with header `x1..xd,v1..vd`.
pub fn read_field_csv(reader: impl Read) -> Result<FieldSample, IoError> {
    let (d, rows) = read_columns(reader, &["x", "v"])?;
    Ok(FieldSample {
        points: rows.iter().map(|r| r[..d].to_vec()).collect(),
        vectors: rows.iter().map(|r| r[d..].to_vec()).collect(),
    })
}

pub fn write_field_csv(sample: &FieldSample, writer: impl Write) -> Result<(), IoError> {
    let d = sample.dim();
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(expected_header(&["x", "v"], d).split(','))
        .map_err(csv_error)?;
    for (p, v) in sample.points.iter().zip(&sample.vectors) {
        w.write_record(p.iter().chain(v).map(|x| fmt_float(*x)))
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Landmark CSV with header `y1..yd`.
pub fn read_landmarks_csv(reader: impl Read) -> Result<Vec<Vec<f64>>, IoError> {
    Ok(read_columns(reader, &["y"])?.1)
}

/// A 0/1 relation matrix without header; row `j` lists landmark `j`.
pub fn read_relation_csv(reader: impl Read) -> Result<Vec<Vec<bool>>, IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .map(|f| match f {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(parse_err(line, format!("expected 0 or 1, got `{other}`"))),
            })
            .collect::<Result<Vec<bool>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Rounds to 9 significant digits.
pub fn round9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x + 0.0;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

fn fmt_float(x: f64) -> String {
    let r = round9(x);
    format!("{r}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSummary {
    pub cells: usize,
    /// Cells per dimension.
    pub counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSummary {
    #[serde(rename = "N")]
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSummary {
    pub total: f64,
    pub matched: usize,
    pub cosine_sum: f64,
    pub critical: usize,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SccEntry {
    pub id: usize,
    pub size: usize,
    pub d: usize,
    pub self_intersections: usize,
    pub cells: Vec<usize>,
}

/// The JSON report of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config_echo: PipelineConfig,
    pub complex: ComplexSummary,
    pub problem: ProblemSummary,
    pub objective: ObjectiveSummary,
    pub matching: Vec<AdmissiblePair>,
    pub critical: Vec<usize>,
    /// Multi-cell strongly connected components of the multi-flow.
    pub scc: Vec<SccEntry>,
    /// Critical cells per dimension.
    pub census: Vec<usize>,
}

impl Report {
    pub fn new(config: &PipelineConfig, a: &Analysis) -> Self {
        Self {
            config_echo: config.clone(),
            complex: ComplexSummary {
                cells: a.complex.len(),
                counts: a.complex.counts_by_dim(),
            },
            problem: ProblemSummary {
                n: a.complex.len(),
                m: a.num_variables,
            },
            objective: ObjectiveSummary {
                total: round9(a.matching.objective),
                matched: a.decomposition.matched,
                cosine_sum: round9(a.decomposition.cosine_sum),
                critical: a.decomposition.critical,
                alpha: round9(a.alpha),
            },
            matching: a.matching.pairs.clone(),
            critical: a.matching.critical.clone(),
            scc: scc_entries(&a.report),
            census: a.report.census.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String, IoError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .matching
            .iter()
            .map(|p| (p.lower, p.upper))
            .chain(self.critical.iter().map(|&c| (c, c)))
            .collect();
        out.sort_unstable();
        out
    }
}

impl Report {
    pub fn to_matching(&self) -> Matching {
        Matching {
            pairs: self.matching.clone(),
            critical: self.critical.clone(),
            objective: self.objective.total,
            units: 0,
            selected: Vec::new(),
        }
    }

    /// Checks the serialized matching against the complex it claims to
    /// come from and re-derives the objective, census and SCC list.
    /// Returns the list of problems found.
    pub fn check(&self, complex: &CellComplex, vectors: &VectorAssignment) -> Vec<String> {
        let mut problems = Vec::new();
        if self.complex.cells != complex.len() || self.complex.counts != complex.counts_by_dim() {
            problems.push(format!(
                "complex has counts {:?}, report says {:?}",
                complex.counts_by_dim(),
                self.complex.counts
            ));
            return problems;
        }
        if let Err(vs) = verify_arrows(complex, &self.arrows()) {
            problems.extend(vs.iter().map(|v| format!("{v:?}")));
            return problems;
        }
        let matching = self.to_matching();
        let (_, report) = analyze(complex, &matching).expect("arrows verified");
        if report.census != self.census {
            problems.push(format!("census {:?} != reported {:?}", report.census, self.census));
        }
        if scc_entries(&report) != self.scc {
            problems.push("SCC list differs from the re-derived one".into());
        }
        match build_cost_model(complex, vectors, self.objective.alpha) {
            Ok(model) => {
                let d = objective_decomposition(&matching, &model);
                if (d.total() - self.objective.total).abs() > 1e-6 * d.total().abs().max(1.0) {
                    problems.push(format!("objective {} != reported {}", d.total(), self.objective.total));
                }
                if d.matched != self.objective.matched || d.critical != self.objective.critical {
                    problems.push("matched/critical counts disagree".into());
                }
            }
            Err(e) => problems.push(e.to_string()),
        }
        problems
    }
}

pub fn scc_entries(report: &crate::dynamics::CycleReport) -> Vec<SccEntry> {
    report
        .multi_cell()
        .enumerate()
        .map(|(id, s)| SccEntry {
            id,
            size: s.size,
            d: s.d,
            self_intersections: s.self_intersections,
            cells: s.cells.clone(),
        })
        .collect()
}

/// The multi-flow as a DOT digraph, one node per cell.
pub fn export_dot(a: &Analysis) -> String {
    let mut s = String::from("digraph multiflow {\n");
    for c in a.complex.cells() {
        let role = match a.flow.role(c.id) {
            FlowRole::Critical => "critical",
            FlowRole::Upper => "upper",
            FlowRole::Lower => "lower",
        };
        let _ = writeln!(s, "  c{} [label=\"{}\", dim={}, role={}];", c.id, c.id, c.dim, role);
    }
    for c in a.complex.cells() {
        for &t in a.flow.successors(c.id) {
            let _ = writeln!(s, "  c{} -> c{};", c.id, t);
        }
    }
    s.push_str("}\n");
    s
}

/// One row per matched pair: barycenter of the lower cell to barycenter of
/// the upper cell.
pub fn export_arrows(a: &Analysis) -> String {
    let d = a.complex.ambient_dim();
    let mut s = String::new();
    let header: Vec<String> = ["lower".to_string(), "upper".to_string()]
        .into_iter()
        .chain((1..=d).map(|i| format!("from{i}")))
        .chain((1..=d).map(|i| format!("to{i}")))
        .collect();
    s.push_str(&header.join(","));
    s.push('\n');
    for p in &a.matching.pairs {
        let from = a.complex.barycenter(p.lower);
        let to = a.complex.barycenter(p.upper);
        let cols: Vec<String> = [p.lower.to_string(), p.upper.to_string()]
            .into_iter()
            .chain(from.iter().chain(&to).map(|x| fmt_float(*x)))
            .collect();
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

/// Critical cells with their dimension and barycenter.
pub fn export_critical(a: &Analysis) -> String {
    let d = a.complex.ambient_dim();
    let mut s = String::from("cell,dim");
    for i in 1..=d {
        let _ = write!(s, ",b{i}");
    }
    s.push('\n');
    for &c in &a.matching.critical {
        let _ = write!(s, "{},{}", c, a.complex.dim_of(c));
        for x in a.complex.barycenter(c) {
            let _ = write!(s, ",{}", fmt_float(x));
        }
        s.push('\n');
    }
    s
}
