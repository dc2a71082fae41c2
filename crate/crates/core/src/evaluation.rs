//! Grouping accuracy metrics against LogHub-style ground truth.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ground-truth event per line, plus template text per event when known.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    pub assignments: BTreeMap<usize, String>,
    pub templates: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
struct StructuredRow {
    #[serde(rename = "LineId")]
    line_id: usize,
    #[serde(rename = "EventId")]
    event_id: String,
    #[serde(rename = "EventTemplate", default)]
    event_template: Option<String>,
}

impl GroundTruth {
    /// Reads a `_structured.csv` file (columns `LineId`, `EventId`, and
    /// optionally `EventTemplate`; other columns are ignored).
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(file)
    }

    pub fn from_csv_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
        let mut gt = GroundTruth::default();
        for row in rdr.deserialize::<StructuredRow>() {
            let row = row?;
            if let Some(t) = row.event_template.filter(|t| !t.is_empty()) {
                gt.templates.entry(row.event_id.clone()).or_insert(t);
            }
            if gt.assignments.insert(row.line_id, row.event_id).is_some() {
                return Err(Error::Input(format!(
                    "duplicate LineId {} in ground truth",
                    row.line_id
                )));
            }
        }
        Ok(gt)
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

/// Template-level counts: ground-truth groups, parsed groups, and parsed
/// groups whose member set equals some ground-truth group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TemplateCounts {
    pub n_g: usize,
    pub n_p: usize,
    pub n_c: usize,
}

impl TemplateCounts {
    pub fn pga<T: Scalar>(&self) -> T {
        ratio(self.n_c, self.n_p)
    }

    pub fn rga<T: Scalar>(&self) -> T {
        ratio(self.n_c, self.n_g)
    }

    pub fn fga<T: Scalar>(&self) -> T {
        fga(self.pga(), self.rga())
    }
}

fn ratio<T: Scalar>(num: usize, den: usize) -> T {
    if den == 0 {
        T::zero()
    } else {
        T::from_count(num) / T::from_count(den)
    }
}

/// Harmonic mean of precision and recall; zero when both are zero.
pub fn fga<T: Scalar>(pga: T, rga: T) -> T {
    let sum = pga + rga;
    if sum > T::zero() {
        T::lit(2.0) * pga * rga / sum
    } else {
        T::zero()
    }
}

struct Grouping {
    correct_messages: usize,
    counts: TemplateCounts,
    total: usize,
}

fn check_coverage<P>(parsed: &BTreeMap<usize, P>, truth: &GroundTruth) -> Result<()> {
    if parsed.len() != truth.assignments.len() || !parsed.keys().zip(truth.assignments.keys()).all(|(a, b)| a == b) {
        let missing = truth.assignments.keys().find(|k| !parsed.contains_key(k));
        let extra = parsed.keys().find(|k| !truth.assignments.contains_key(k));
        return Err(Error::Input(format!(
            "parsed output ({} lines) and ground truth ({} lines) cover different lines \
             (first missing: {missing:?}, first extra: {extra:?})",
            parsed.len(),
            truth.assignments.len()
        )));
    }
    Ok(())
}

fn group<P: AsRef<str>>(parsed: &BTreeMap<usize, P>, truth: &GroundTruth) -> Result<Grouping> {
    check_coverage(parsed, truth)?;
    let mut truth_sizes: BTreeMap<&str, usize> = BTreeMap::new();
    for ev in truth.assignments.values() {
        *truth_sizes.entry(ev.as_str()).or_insert(0) += 1;
    }
    // parsed event → (size, set of truth events seen)
    let mut parsed_groups: BTreeMap<&str, (usize, BTreeSet<&str>)> = BTreeMap::new();
    for (line, ev) in parsed {
        let g = parsed_groups.entry(ev.as_ref()).or_default();
        g.0 += 1;
        g.1.insert(truth.assignments[line].as_str());
    }
    let mut correct_messages = 0;
    let mut n_c = 0;
    for (size, truth_events) in parsed_groups.values() {
        if truth_events.len() == 1 {
            let t = truth_events.iter().next().expect("one element");
            if truth_sizes[t] == *size {
                n_c += 1;
                correct_messages += size;
            }
        }
    }
    Ok(Grouping {
        correct_messages,
        counts: TemplateCounts {
            n_g: truth_sizes.len(),
            n_p: parsed_groups.len(),
            n_c,
        },
        total: parsed.len(),
    })
}

/// Fraction of messages whose parsed group has exactly the same members as
/// their ground-truth group. Zero for empty input.
pub fn grouping_accuracy<T: Scalar, P: AsRef<str>>(parsed: &BTreeMap<usize, P>, truth: &GroundTruth) -> Result<T> {
    let g = group(parsed, truth)?;
    Ok(ratio(g.correct_messages, g.total))
}

pub fn template_level_counts<P: AsRef<str>>(
    parsed: &BTreeMap<usize, P>,
    truth: &GroundTruth,
) -> Result<TemplateCounts> {
    Ok(group(parsed, truth)?.counts)
}

/// Fraction of messages whose emitted template text equals the ground-truth
/// template after whitespace normalisation. `None` when the ground truth has
/// no template text.
pub fn parsing_accuracy<T: Scalar, P: AsRef<str>>(
    parsed_templates: &BTreeMap<usize, P>,
    truth: &GroundTruth,
) -> Result<Option<T>> {
    if truth.templates.is_empty() {
        return Ok(None);
    }
    check_coverage(parsed_templates, truth)?;
    let norm = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
    let correct = parsed_templates
        .iter()
        .filter(|(line, text)| {
            truth
                .templates
                .get(&truth.assignments[*line])
                .is_some_and(|t| norm(t) == norm(text.as_ref()))
        })
        .count();
    Ok(Some(ratio(correct, parsed_templates.len())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport<T> {
    pub dataset: String,
    pub counts: TemplateCounts,
    pub pga: T,
    pub rga: T,
    pub fga: T,
    pub ga: T,
    pub pa: Option<T>,
    /// Parse phase only.
    pub wall_seconds: f64,
    /// Time spent waiting on a networked merge backend, when one was used.
    pub backend_seconds: Option<f64>,
}

pub const REPORT_HEADER: [&str; 9] = [
    "dataset",
    "N_g",
    "N_p",
    "N_c",
    "PGA",
    "RGA",
    "FGA",
    "GA",
    "wall_seconds",
];

impl<T: Scalar> EvaluationReport<T> {
    pub fn compute<P: AsRef<str>, Q: AsRef<str>>(
        dataset: &str,
        parsed: &BTreeMap<usize, P>,
        parsed_templates: Option<&BTreeMap<usize, Q>>,
        truth: &GroundTruth,
        wall_seconds: f64,
    ) -> Result<Self> {
        let g = group(parsed, truth)?;
        let counts = g.counts;
        let pa = match parsed_templates {
            Some(t) => parsing_accuracy(t, truth)?,
            None => None,
        };
        Ok(EvaluationReport {
            dataset: dataset.to_string(),
            counts,
            pga: counts.pga(),
            rga: counts.rga(),
            fga: counts.fga(),
            ga: ratio(g.correct_messages, g.total),
            pa,
            wall_seconds,
            backend_seconds: None,
        })
    }

    pub fn csv_record(&self) -> [String; 9] {
        [
            self.dataset.clone(),
            self.counts.n_g.to_string(),
            self.counts.n_p.to_string(),
            self.counts.n_c.to_string(),
            format!("{:.4}", self.pga.to_f64_lossy()),
            format!("{:.4}", self.rga.to_f64_lossy()),
            format!("{:.4}", self.fga.to_f64_lossy()),
            format!("{:.4}", self.ga.to_f64_lossy()),
            format!("{:.3}", self.wall_seconds),
        ]
    }
}

/// Writes the header plus one row per report.
pub fn write_reports<T: Scalar, W: Write>(out: W, reports: &[EvaluationReport<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in reports {
        w.write_record(r.csv_record())?;
    }
    w.flush().map_err(|e| Error::io("<report>", e))?;
    Ok(())
}

/// Runs `f` on a monotonic clock and returns its result with the elapsed
/// seconds rounded to milliseconds.
pub fn timing_run<R>(f: impl FnOnce() -> R) -> (R, f64) {
    let start = Instant::now();
    let r = f();
    let ms = start.elapsed().as_millis();
    (r, ms as f64 / 1000.0)
}
