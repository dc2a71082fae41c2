//! End-to-end parse: preprocess → bucket → sample/merge centers → cluster →
//! templates → optional cross-length merging.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use indexmap::IndexMap;
use rayon::prelude::*;

use crate::clustering::assign_clusters;
use crate::config::DatasetConfig;
use crate::error::{Error, Result};
use crate::merging::{apply_merges, decide_all, find_candidate_pairs, CandidatePair, MergeDecision, MergeJudge};
use crate::preprocessing::{compile_mask_rules, HeaderPattern, LogRecord, Preprocessor};
use crate::sampling::{build_buckets, merge_centers, sample_centers, Bucket, SamplingConfig};
use crate::scalar::Scalar;
use crate::template::{consolidate, generate_templates, EventId, LowEntropyPolicy, Template};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParseSettings<T> {
    pub sampling: SamplingConfig,
    pub jaccard_threshold: T,
    pub theta: T,
    pub low_entropy: LowEntropyPolicy,
    /// Fold templates into more general templates of the same bucket.
    pub consolidate: bool,
    pub candidate_min_similarity: T,
    /// Upper bound on concurrent merge-judge calls.
    pub max_in_flight: usize,
}

#[derive(Debug, Clone)]
pub struct LogParser<T> {
    preprocessor: Preprocessor,
    settings: ParseSettings<T>,
    pool: Option<std::sync::Arc<rayon::ThreadPool>>,
}

/// Bucket-level intermediate: the clusters and the templates they produced.
#[derive(Debug, Clone)]
pub struct BucketOutcome {
    pub length: usize,
    pub centers: Vec<usize>,
    /// (template, member line ids)
    pub templates: Vec<(Template, Vec<usize>)>,
}

#[derive(Debug, Clone, Default)]
pub struct ParseResult {
    pub records: Vec<LogRecord>,
    /// Event id per record, aligned with `records`.
    pub assignments: Vec<EventId>,
    /// Final templates, ordered by first occurrence.
    pub templates: Vec<Template>,
    pub merges_applied: usize,
    pub candidate_pairs: usize,
    /// Preprocessing through merging.
    pub parse_seconds: f64,
    /// Share of `parse_seconds` spent judging merge candidates.
    pub merge_seconds: f64,
}

impl<T: Scalar> LogParser<T> {
    pub fn new(preprocessor: Preprocessor, settings: ParseSettings<T>) -> Self {
        LogParser {
            preprocessor,
            settings,
            pool: None,
        }
    }

    pub fn from_config(cfg: &DatasetConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let header = HeaderPattern::compile(&cfg.header_pattern)?;
        let rules = compile_mask_rules(&cfg.mask_rules)?;
        let max_in_flight = cfg.remote.as_ref().map_or(1, |r| r.max_in_flight.max(1));
        Ok(LogParser::new(
            Preprocessor::new(header, rules, cfg.split_chars()),
            ParseSettings {
                sampling: cfg.sampling_config(),
                jaccard_threshold: cfg.jaccard_threshold,
                theta: cfg.theta,
                low_entropy: cfg.low_entropy_positions,
                consolidate: cfg.consolidate,
                candidate_min_similarity: cfg.candidate_min_similarity,
                max_in_flight,
            },
        ))
    }

    /// Bounds intra-dataset parallelism to `jobs` worker threads.
    pub fn with_jobs(mut self, jobs: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Input(format!("cannot start worker pool: {e}")))?;
        self.pool = Some(std::sync::Arc::new(pool));
        Ok(self)
    }

    pub fn settings(&self) -> &ParseSettings<T> {
        &self.settings
    }

    pub fn settings_mut(&mut self) -> &mut ParseSettings<T> {
        &mut self.settings
    }

    fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(f),
            None => f(),
        }
    }

    pub fn preprocess<S: AsRef<str> + Sync>(&self, lines: &[S]) -> Vec<LogRecord> {
        self.install(|| {
            lines
                .par_iter()
                .enumerate()
                .map(|(i, l)| self.preprocessor.process(i + 1, l.as_ref()))
                .collect()
        })
    }

    /// Sampling, clustering and template generation for one bucket.
    pub fn process_bucket(&self, mut bucket: Bucket<'_>) -> Result<BucketOutcome> {
        let sample = sample_centers(&bucket, &self.settings.sampling);
        bucket.centers = merge_centers(&sample, self.settings.jaccard_threshold);
        let clusters = assign_clusters(&bucket)?;
        let mut templates = Vec::new();
        for c in &clusters {
            for g in generate_templates(c, self.settings.theta, self.settings.low_entropy) {
                let ids = g.members.iter().map(|r| r.line_id).collect();
                templates.push((g.template, ids));
            }
        }
        if self.settings.consolidate {
            templates = consolidate(templates);
        }
        Ok(BucketOutcome {
            length: bucket.length,
            centers: bucket.centers.iter().map(|r| r.line_id).collect(),
            templates,
        })
    }

    /// Template extraction without cross-length merging.
    pub fn extract(&self, records: &[LogRecord]) -> Result<Vec<BucketOutcome>> {
        let (empty, tokenized): (Vec<&LogRecord>, Vec<&LogRecord>) = records.iter().partition(|r| r.tokens.is_empty());
        let owned: Vec<LogRecord> = tokenized.into_iter().cloned().collect();
        let buckets = build_buckets(&owned);
        let mut outcomes: Vec<BucketOutcome> = self.install(|| {
            buckets
                .into_par_iter()
                .map(|b| self.process_bucket(b))
                .collect::<Result<Vec<_>>>()
        })?;
        if !empty.is_empty() {
            outcomes.insert(
                0,
                BucketOutcome {
                    length: 0,
                    centers: vec![empty[0].line_id],
                    templates: vec![(
                        Template::new(Vec::new(), empty.len()),
                        empty.iter().map(|r| r.line_id).collect(),
                    )],
                },
            );
        }
        Ok(outcomes)
    }

    /// Full parse. With `judge = None` the merge stage is skipped.
    pub fn parse<S: AsRef<str> + Sync>(&self, lines: &[S], judge: Option<&dyn MergeJudge<T>>) -> Result<ParseResult> {
        let start = Instant::now();
        let records = self.preprocess(lines);
        let outcomes = self.extract(&records)?;

        let index: HashMap<usize, usize> = records.iter().enumerate().map(|(i, r)| (r.line_id, i)).collect();
        let mut by_id: IndexMap<EventId, Template> = IndexMap::new();
        let mut assigned: Vec<Option<EventId>> = vec![None; records.len()];
        for (template, members) in outcomes.into_iter().flat_map(|o| o.templates) {
            for line in &members {
                assigned[index[line]] = Some(template.event_id.clone());
            }
            by_id
                .entry(template.event_id.clone())
                .and_modify(|t| t.support += template.support)
                .or_insert(template);
        }
        let mut assignments: Vec<EventId> = assigned
            .into_iter()
            .map(|a| a.ok_or_else(|| Error::Input("record left without a template".into())))
            .collect::<Result<_>>()?;
        let mut templates: Vec<Template> = by_id.into_values().collect();

        let mut merges_applied = 0;
        let mut candidate_pairs = 0;
        let mut merge_seconds = 0.0;
        if let Some(judge) = judge {
            let merge_start = Instant::now();
            // A pair can be skipped because one side was consumed earlier in
            // the pass; the merged template may then pair with the other side.
            // Passes repeat until one applies no merge, which terminates since
            // every applied merge removes a template. Each distinct pair is
            // judged at most once.
            let mut cache: HashMap<(EventId, EventId), MergeDecision> = HashMap::new();
            loop {
                let pairs = find_candidate_pairs(&templates, self.settings.candidate_min_similarity);
                let key = |p: &CandidatePair<T>| (p.template_a.event_id.clone(), p.template_b.event_id.clone());
                let fresh: Vec<CandidatePair<T>> =
                    pairs.iter().filter(|p| !cache.contains_key(&key(p))).cloned().collect();
                candidate_pairs += fresh.len();
                for (p, d) in fresh.iter().zip(decide_all(&fresh, judge, self.settings.max_in_flight)) {
                    cache.insert(key(p), d);
                }
                let decisions: Vec<MergeDecision> = pairs.iter().map(|p| cache[&key(p)].clone()).collect();
                let outcome = apply_merges(&templates, &pairs, &decisions);
                if outcome.merges_applied == 0 {
                    break;
                }
                for a in assignments.iter_mut() {
                    let resolved = outcome.resolve(a);
                    if resolved != a {
                        *a = resolved.clone();
                    }
                }
                merges_applied += outcome.merges_applied;
                templates = outcome.templates;
            }
            merge_seconds = merge_start.elapsed().as_secs_f64();
        }

        order_by_first_occurrence(&mut templates, &assignments);
        Ok(ParseResult {
            records,
            assignments,
            templates,
            merges_applied,
            candidate_pairs,
            parse_seconds: start.elapsed().as_secs_f64(),
            merge_seconds,
        })
    }
}

fn order_by_first_occurrence(templates: &mut [Template], assignments: &[EventId]) {
    let mut first: HashMap<&EventId, usize> = HashMap::new();
    for (i, a) in assignments.iter().enumerate() {
        first.entry(a).or_insert(i);
    }
    templates.sort_by_key(|t| first.get(&t.event_id).copied().unwrap_or(usize::MAX));
}

pub const STRUCTURED_HEADER: [&str; 4] = ["LineId", "Content", "EventId", "EventTemplate"];
pub const TEMPLATES_HEADER: [&str; 3] = ["EventId", "EventTemplate", "Occurrences"];

impl ParseResult {
    pub fn template(&self, id: &EventId) -> Option<&Template> {
        self.templates.iter().find(|t| &t.event_id == id)
    }

    fn template_lookup(&self) -> HashMap<&EventId, &Template> {
        self.templates.iter().map(|t| (&t.event_id, t)).collect()
    }

    /// line id → event id, the shape the evaluation functions take.
    pub fn event_map(&self) -> BTreeMap<usize, String> {
        self.records
            .iter()
            .zip(&self.assignments)
            .map(|(r, e)| (r.line_id, e.to_string()))
            .collect()
    }

    /// line id → emitted template text.
    pub fn template_text_map(&self) -> BTreeMap<usize, String> {
        let lookup = self.template_lookup();
        self.records
            .iter()
            .zip(&self.assignments)
            .map(|(r, e)| (r.line_id, lookup.get(e).map(|t| t.text()).unwrap_or_default()))
            .collect()
    }

    /// Line ids whose tokens do not match their assigned template.
    pub fn coverage_violations(&self) -> Vec<usize> {
        let lookup = self.template_lookup();
        self.records
            .iter()
            .zip(&self.assignments)
            .filter(|(r, e)| !lookup.get(e).is_some_and(|t| t.matches(&r.tokens)))
            .map(|(r, _)| r.line_id)
            .collect()
    }

    pub fn write_structured_csv<W: Write>(&self, out: W) -> Result<()> {
        let lookup = self.template_lookup();
        let mut w = csv::Writer::from_writer(out);
        w.write_record(STRUCTURED_HEADER)?;
        for (r, e) in self.records.iter().zip(&self.assignments) {
            let text = lookup.get(e).map(|t| t.text()).unwrap_or_default();
            w.write_record([
                r.line_id.to_string().as_str(),
                r.message.as_str(),
                e.as_str(),
                text.as_str(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<structured csv>", e))?;
        Ok(())
    }

    pub fn write_templates_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(TEMPLATES_HEADER)?;
        for t in &self.templates {
            w.write_record([t.event_id.as_str(), t.text().as_str(), t.support.to_string().as_str()])?;
        }
        w.flush().map_err(|e| Error::io("<templates csv>", e))?;
        Ok(())
    }

    /// Writes `<stem>_structured.csv` and `<stem>_templates.csv` into `dir`
    /// and returns both paths.
    pub fn write_outputs(&self, dir: &Path, stem: &str) -> Result<(std::path::PathBuf, std::path::PathBuf)> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let structured = dir.join(format!("{stem}_structured.csv"));
        let templates = dir.join(format!("{stem}_templates.csv"));
        let f = std::fs::File::create(&structured).map_err(|e| Error::io(&structured, e))?;
        self.write_structured_csv(std::io::BufWriter::new(f))?;
        let f = std::fs::File::create(&templates).map_err(|e| Error::io(&templates, e))?;
        self.write_templates_csv(std::io::BufWriter::new(f))?;
        Ok((structured, templates))
    }
}

/// One timing measurement of [`bench_sizes`].
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub dataset: String,
    pub size: usize,
    pub templates: usize,
    /// Median over the repeats.
    pub wall_seconds: f64,
}

pub const BENCH_HEADER: [&str; 4] = ["dataset", "size", "templates", "wall_seconds"];

impl BenchRow {
    pub fn csv_record(&self) -> [String; 4] {
        [
            self.dataset.clone(),
            self.size.to_string(),
            self.templates.to_string(),
            format!("{:.6}", self.wall_seconds),
        ]
    }
}

/// Writes the header plus one row per measurement.
pub fn write_bench_rows<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BENCH_HEADER)?;
    for r in rows {
        w.write_record(r.csv_record())?;
    }
    w.flush().map_err(|e| Error::io("<bench csv>", e))?;
    Ok(())
}

/// Times a full parse of the first `size` lines for every requested size.
/// Sizes larger than the input are skipped with a warning; the returned rows
/// follow ascending size order.
pub fn bench_sizes<T: Scalar, S: AsRef<str> + Sync>(
    parser: &LogParser<T>,
    judge: Option<&dyn MergeJudge<T>>,
    dataset: &str,
    lines: &[S],
    sizes: &[usize],
    repeats: usize,
) -> Result<Vec<BenchRow>> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let mut rows = Vec::with_capacity(sizes.len());
    for size in sizes {
        if size > lines.len() {
            log::warn!("{dataset}: skipping size {size}, input has only {} lines", lines.len());
            continue;
        }
        let prefix = &lines[..size];
        let mut times = Vec::with_capacity(repeats.max(1));
        let mut templates = 0;
        for _ in 0..repeats.max(1) {
            let start = Instant::now();
            let result = parser.parse(prefix, judge)?;
            times.push(start.elapsed().as_secs_f64());
            templates = result.templates.len();
        }
        times.sort_by(f64::total_cmp);
        rows.push(BenchRow {
            dataset: dataset.to_string(),
            size,
            templates,
            wall_seconds: times[times.len() / 2],
        });
    }
    Ok(rows)
}

/// Reads a log file as lossy UTF-8 lines.
pub fn read_log_lines(path: &Path) -> Result<Vec<String>> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(crate::preprocessing::lines_lossy(&bytes))
}
