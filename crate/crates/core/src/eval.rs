//! Benchmark evaluation: prediction files, per-sample scoring, and the
//! per-category report.
//!
//! A prediction file is JSONL with one record per sample id. Each record carries
//! `id` and exactly one payload field:
//!
//! ```text
//! {"id": "r-001", "page": {"width": 800, "height": 1200, "lines": [...]}}
//! {"id": "r-002", "bracketed": "[x_1] [y_2] [x_30] [y_40]: Total"}
//! {"id": "r-003", "tokens": [{"t": "special", "v": "<bbox>"}, ...]}
//! {"id": "r-004", "text": "box-free output\nsecond line"}
//! {"id": "m-001", "markdown": "# Title"}
//! ```
//!
//! Bracketed and token payloads are decoded against the ground-truth page size.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::io::BufRead;

use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::codec::{
    decode_bracketed_lenient, decode_layout_lenient, dequantize_page, CodecConfig, QuantizedLine,
    Special, Token, TokenStream,
};
use crate::manifest::{GroundTruth, Sample};
use crate::ocr::score_page;
use crate::textdist::{mean, ned_pair};
use crate::treedist::{nted_pair, parse_markdown};
use crate::types::{BoundingBox, Category, MarkdownDocument, PageDocument, PageDraft, Task, TextLine};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum PredictionPayload {
    Page(PageDocument),
    Bracketed(String),
    Tokens(TokenStream),
    /// Box-free text, one line per `\n`.
    Text(String),
    Markdown(MarkdownDocument),
    /// The record named an id but its payload could not be read. Scores zero.
    Invalid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub id: String,
    /// 1-based line in the prediction file.
    pub line: usize,
    pub payload: PredictionPayload,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    /// No prediction for a sample; it scores zero.
    Missing,
    /// A prediction that was only partly usable.
    Malformed,
    /// A tree above the size guard; NTED scores zero.
    TreeTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(id) = &self.id {
            write!(f, "{id}: ")?;
        }
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PredictionSet {
    pub predictions: Vec<Prediction>,
    pub diagnostics: Vec<Diagnostic>,
}

const PAYLOAD_KEYS: [&str; 5] = ["page", "bracketed", "tokens", "text", "markdown"];

fn parse_payload(key: &str, value: Value) -> Result<PredictionPayload, String> {
    let as_string = |v: Value| match v {
        Value::String(s) => Ok(s),
        other => Err(format!("`{key}` must be a string, got {other}")),
    };
    match key {
        "page" => {
            let draft: PageDraft = serde_json::from_value(value).map_err(|e| format!("page: {e}"))?;
            PageDocument::try_from(draft)
                .map(PredictionPayload::Page)
                .map_err(|e| e.to_string())
        }
        "bracketed" => as_string(value).map(PredictionPayload::Bracketed),
        "tokens" => serde_json::from_value(value)
            .map(PredictionPayload::Tokens)
            .map_err(|e| format!("tokens: {e}")),
        "text" => as_string(value).map(PredictionPayload::Text),
        "markdown" => as_string(value).map(|s| PredictionPayload::Markdown(MarkdownDocument::new(&s))),
        _ => unreachable!("payload keys are fixed"),
    }
}

/// Parses one prediction record. On failure the id is returned when it could be
/// recovered, so the caller can still attribute the problem.
pub fn parse_prediction(text: &str, line: usize) -> Result<Prediction, (Option<String>, String)> {
    let value: Value = serde_json::from_str(text).map_err(|e| (None, e.to_string()))?;
    let Value::Object(mut obj) = value else {
        return Err((None, "record is not a JSON object".into()));
    };
    let id = match obj.remove("id") {
        Some(Value::String(s)) => s,
        Some(_) => return Err((None, "`id` must be a string".into())),
        None => return Err((None, "missing `id`".into())),
    };
    let keys: Vec<&str> = PAYLOAD_KEYS
        .into_iter()
        .filter(|k| obj.contains_key(*k))
        .collect();
    let key = match keys.as_slice() {
        [k] => *k,
        [] => return Err((Some(id), "no payload field".into())),
        _ => return Err((Some(id), format!("several payload fields: {}", keys.join(", ")))),
    };
    let value = obj.remove(key).expect("key was just found");
    match parse_payload(key, value) {
        Ok(payload) => Ok(Prediction { id, line, payload }),
        Err(msg) => Err((Some(id), msg)),
    }
}

/// Reads a prediction file leniently. Records that cannot be attributed to an id
/// are dropped; records with an id but an unreadable payload are kept as
/// [`PredictionPayload::Invalid`]. Later duplicates of an id are ignored. Every
/// such case leaves a diagnostic.
pub fn read_predictions<R: BufRead>(reader: R) -> std::io::Result<PredictionSet> {
    let mut set = PredictionSet::default();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, text) in reader.lines().enumerate() {
        let text = text?;
        let line = i + 1;
        if text.trim().is_empty() {
            continue;
        }
        let pred = match parse_prediction(&text, line) {
            Ok(p) => p,
            Err((id, message)) => {
                set.diagnostics.push(Diagnostic {
                    kind: DiagnosticKind::Malformed,
                    id: id.clone(),
                    line: Some(line),
                    message,
                });
                match id {
                    Some(id) => Prediction {
                        id,
                        line,
                        payload: PredictionPayload::Invalid,
                    },
                    None => continue,
                }
            }
        };
        if let Some(first) = seen.get(&pred.id) {
            set.diagnostics.push(Diagnostic {
                kind: DiagnosticKind::Malformed,
                id: Some(pred.id.clone()),
                line: Some(line),
                message: format!("duplicate prediction; line {first} is used"),
            });
            continue;
        }
        seen.insert(pred.id.clone(), line);
        set.predictions.push(pred);
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("predictions for ids not in the manifest: {}", .0.join(", "))]
    Orphans(Vec<String>),
    #[error("sample {id} is a {found} sample in a {expected} evaluation")]
    WrongTask {
        id: String,
        expected: Task,
        found: Task,
    },
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    F1,
    Iou,
    Ned,
    Nted,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::F1 => "f1",
            Metric::Iou => "iou",
            Metric::Ned => "ned",
            Metric::Nted => "nted",
        }
    }

    fn header(&self) -> &'static str {
        match self {
            Metric::F1 => "F1",
            Metric::Iou => "IOU",
            Metric::Ned => "NED",
            Metric::Nted => "NTED",
        }
    }

    pub fn for_task(task: Task) -> &'static [Metric] {
        match task {
            Task::Ocr => &[Metric::F1, Metric::Iou, Metric::Ned],
            Task::Markdown => &[Metric::Ned, Metric::Nted],
        }
    }
}

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Scores of one sample. A `None` value takes no part in the mean of its metric.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleScores {
    pub id: String,
    pub category: Category,
    pub values: Vec<(Metric, Option<f64>)>,
    /// OCR only: whether the prediction carried at least one box.
    pub pred_boxes: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl SampleScores {
    pub fn get(&self, m: Metric) -> Option<f64> {
        self.values.iter().find(|(k, _)| *k == m).and_then(|(_, v)| *v)
    }
}

/// Means of one group of samples. `None` means no sample contributed.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub sample_count: usize,
    pub values: Vec<(Metric, Option<f64>)>,
}

impl MetricRow {
    pub fn get(&self, m: Metric) -> Option<f64> {
        self.values.iter().find(|(k, _)| *k == m).and_then(|(_, v)| *v)
    }
}

impl Serialize for MetricRow {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.values.len() + 1))?;
        map.serialize_entry("sample_count", &self.sample_count)?;
        for (m, v) in &self.values {
            map.serialize_entry(m.as_str(), v)?;
        }
        map.end()
    }
}

/// How the numbers in a report were aggregated.
pub const AGGREGATION: [(&str, &str); 6] = [
    ("sample", "per-sample scores; missing predictions score 0"),
    ("category", "unweighted mean of per-sample scores"),
    ("overall", "micro: unweighted mean over all samples"),
    ("macro", "unweighted mean of the category means"),
    ("f1", "per-sample word F1 (multiset matching), averaged"),
    ("iou", "optimal one-to-one line matching; matched IoU sum / max(n_pred, n_gt)"),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub tool_version: String,
    pub task: Task,
    /// Run configuration as given by the caller, echoed verbatim.
    pub config: Map<String, Value>,
    #[serde(serialize_with = "ser_pairs")]
    pub aggregation: Vec<(&'static str, &'static str)>,
    pub metrics: Vec<Metric>,
    #[serde(serialize_with = "ser_categories")]
    pub per_category: Vec<(Category, MetricRow)>,
    pub overall: MetricRow,
    #[serde(rename = "macro")]
    pub macro_avg: MetricRow,
    pub diagnostics: Vec<Diagnostic>,
}

fn ser_pairs<S: Serializer>(v: &[(&str, &str)], s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(v.len()))?;
    for (k, x) in v {
        map.serialize_entry(k, x)?;
    }
    map.end()
}

fn ser_categories<S: Serializer>(v: &[(Category, MetricRow)], s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(v.len()))?;
    for (c, row) in v {
        map.serialize_entry(c.as_str(), row)?;
    }
    map.end()
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// True if any prediction could only be read in part.
    pub fn has_malformed(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| matches!(d.kind, DiagnosticKind::Malformed | DiagnosticKind::TreeTooLarge))
    }

    /// Plain-text table: one row per category, cells scaled by 100 with one decimal.
    pub fn render_text(&self) -> String {
        let header = self
            .metrics
            .iter()
            .map(|m| m.header())
            .collect::<Vec<_>>()
            .join(" / ");
        let cell = |row: &MetricRow| {
            self.metrics
                .iter()
                .map(|m| match row.get(*m) {
                    Some(v) => format!("{:.1}", v * 100.0),
                    None => "-".to_owned(),
                })
                .collect::<Vec<_>>()
                .join(" / ")
        };
        let mut rows: Vec<(String, String, String)> = vec![("Category".into(), "N".into(), header)];
        for (c, row) in &self.per_category {
            rows.push((c.as_str().into(), row.sample_count.to_string(), cell(row)));
        }
        rows.push(("Overall (Avg)".into(), self.overall.sample_count.to_string(), cell(&self.overall)));
        rows.push(("Macro (Avg)".into(), self.macro_avg.sample_count.to_string(), cell(&self.macro_avg)));
        let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);

        let mut out = String::new();
        let _ = writeln!(out, "task: {}  version: {}", self.task.as_str(), self.tool_version);
        let _ = writeln!(out, "overall = mean over samples; macro = mean over categories");
        out.push('\n');
        for (a, b, c) in &rows {
            let _ = writeln!(out, "{a:<w0$}  {b:>w1$}  {c}");
        }
        if !self.diagnostics.is_empty() {
            let _ = writeln!(out, "\n{} diagnostic(s):", self.diagnostics.len());
            for d in &self.diagnostics {
                let _ = writeln!(out, "  {d}");
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    pub codec: CodecConfig,
    /// Worker threads for per-sample scoring; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Echoed into the report.
    pub config: Map<String, Value>,
}

fn malformed(id: &str, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        kind: DiagnosticKind::Malformed,
        id: Some(id.to_owned()),
        line: None,
        message: message.into(),
    }
}

/// Maps prediction boxes onto the ground-truth page when the sizes differ.
fn rescale(pred: PageDocument, gt: &PageDocument) -> PageDocument {
    if (pred.width(), pred.height()) == (gt.width(), gt.height()) {
        return pred;
    }
    let (pw, ph) = (u64::from(pred.width()), u64::from(pred.height()));
    let (gw, gh) = (u64::from(gt.width()), u64::from(gt.height()));
    let sx = |x: u32| (u64::from(x) * gw / pw) as u32;
    let sy = |y: u32| (u64::from(y) * gh / ph) as u32;
    let lines = pred
        .into_lines()
        .into_iter()
        .map(|l| {
            let bbox = l.bbox().map(|b| {
                BoundingBox::new(sx(b.x_tl()), sy(b.y_tl()), sx(b.x_br()), sy(b.y_br()))
                    .expect("scaling is monotone")
            });
            TextLine::new(l.text(), bbox).expect("text was already valid")
        })
        .collect();
    PageDocument::new(gt.width(), gt.height(), lines).expect("scaled boxes stay on the page")
}

fn place(lines: &[QuantizedLine], gt: &PageDocument, cfg: &CodecConfig) -> Result<PageDocument, String> {
    dequantize_page(lines, gt.width(), gt.height(), cfg).map_err(|e| e.to_string())
}

/// Drops a leading prompt (`<s> ... <ocr>` or `<md>`) if the stream has one.
fn strip_prompt(stream: &TokenStream) -> TokenStream {
    let toks = stream.tokens();
    if toks.first() != Some(&Token::Special(Special::Start)) {
        return stream.clone();
    }
    match toks
        .iter()
        .position(|t| matches!(t, Token::Special(Special::Ocr | Special::Md)))
    {
        Some(p) => toks[p + 1..].iter().cloned().collect(),
        None => stream.clone(),
    }
}

/// Turns a prediction into a page in the ground truth's pixel space.
fn resolve_page(
    pred: &Prediction,
    gt: &PageDocument,
    cfg: &CodecConfig,
    diags: &mut Vec<Diagnostic>,
) -> Option<PageDocument> {
    let id = &pred.id;
    match &pred.payload {
        PredictionPayload::Page(p) => Some(rescale(p.clone(), gt)),
        PredictionPayload::Bracketed(text) => {
            let (lines, bad) = decode_bracketed_lenient(text, cfg);
            for e in bad {
                diags.push(malformed(id, format!("bracketed line {}: {}", e.line, e.message)));
            }
            place(&lines, gt, cfg).map_err(|m| diags.push(malformed(id, m))).ok()
        }
        PredictionPayload::Tokens(stream) => {
            let decoded = decode_layout_lenient(&strip_prompt(stream), cfg);
            for e in decoded.issues {
                diags.push(malformed(id, format!("tokens: {e}")));
            }
            place(&decoded.lines, gt, cfg).map_err(|m| diags.push(malformed(id, m))).ok()
        }
        PredictionPayload::Text(text) => {
            let lines = text
                .split('\n')
                .map(|l| TextLine::new(l.strip_suffix('\r').unwrap_or(l), None))
                .collect::<Result<Vec<_>, _>>();
            match lines {
                Ok(lines) => Some(PageDocument::new(gt.width(), gt.height(), lines).expect("no boxes")),
                Err(e) => {
                    diags.push(malformed(id, e.to_string()));
                    None
                }
            }
        }
        PredictionPayload::Markdown(_) => {
            diags.push(malformed(id, "markdown payload in an OCR evaluation"));
            None
        }
        PredictionPayload::Invalid => None,
    }
}

fn resolve_markdown(pred: &Prediction, diags: &mut Vec<Diagnostic>) -> Option<MarkdownDocument> {
    match &pred.payload {
        PredictionPayload::Markdown(m) => Some(m.clone()),
        PredictionPayload::Text(t) => Some(MarkdownDocument::new(t)),
        PredictionPayload::Invalid => None,
        _ => {
            diags.push(malformed(&pred.id, "layout payload in a markdown evaluation"));
            None
        }
    }
}

fn missing(sample: &Sample) -> Diagnostic {
    Diagnostic {
        kind: DiagnosticKind::Missing,
        id: Some(sample.id.clone()),
        line: None,
        message: "no prediction; scored 0".into(),
    }
}

fn score_ocr(sample: &Sample, gt: &PageDocument, pred: Option<&Prediction>, cfg: &CodecConfig) -> SampleScores {
    let mut diagnostics = Vec::new();
    let page = match pred {
        Some(p) => resolve_page(p, gt, cfg, &mut diagnostics),
        None => {
            diagnostics.push(missing(sample));
            None
        }
    };
    let gt_boxes = gt.has_boxes();
    let (values, pred_boxes) = match page {
        Some(page) => {
            let s = score_page(&page, gt);
            let iou = gt_boxes.then(|| s.iou.unwrap_or(0.0));
            (vec![(Metric::F1, Some(s.f1)), (Metric::Iou, iou), (Metric::Ned, Some(s.ned))], page.has_boxes())
        }
        None => (
            vec![(Metric::F1, Some(0.0)), (Metric::Iou, gt_boxes.then_some(0.0)), (Metric::Ned, Some(0.0))],
            false,
        ),
    };
    SampleScores {
        id: sample.id.clone(),
        category: sample.category,
        values,
        pred_boxes,
        diagnostics,
    }
}

fn score_markdown(sample: &Sample, gt: &MarkdownDocument, pred: Option<&Prediction>) -> SampleScores {
    let mut diagnostics = Vec::new();
    let doc = match pred {
        Some(p) => resolve_markdown(p, &mut diagnostics),
        None => {
            diagnostics.push(missing(sample));
            None
        }
    };
    let (ned, nted) = match doc {
        Some(doc) => {
            let ned = ned_pair(doc.source(), gt.source()).similarity;
            let nted = match nted_pair(&parse_markdown(&doc), &parse_markdown(gt)) {
                Ok(v) => v,
                Err(e) => {
                    diagnostics.push(Diagnostic {
                        kind: DiagnosticKind::TreeTooLarge,
                        id: Some(sample.id.clone()),
                        line: None,
                        message: format!("{e}; NTED scored 0"),
                    });
                    0.0
                }
            };
            (ned, nted)
        }
        None => (0.0, 0.0),
    };
    SampleScores {
        id: sample.id.clone(),
        category: sample.category,
        values: vec![(Metric::Ned, Some(ned)), (Metric::Nted, Some(nted))],
        pred_boxes: false,
        diagnostics,
    }
}

/// Scores every sample, in parallel, returning results in manifest order.
pub fn score_samples(
    task: Task,
    samples: &[Sample],
    preds: &PredictionSet,
    opts: &EvalOptions,
) -> Result<Vec<SampleScores>, EvalError> {
    if let Some(s) = samples.iter().find(|s| s.task() != task) {
        return Err(EvalError::WrongTask {
            id: s.id.clone(),
            expected: task,
            found: s.task(),
        });
    }
    let by_id: HashMap<&str, &Prediction> = preds.predictions.iter().map(|p| (p.id.as_str(), p)).collect();
    let known: std::collections::HashSet<&str> = samples.iter().map(|s| s.id.as_str()).collect();
    let orphans: Vec<String> = preds
        .predictions
        .iter()
        .filter(|p| !known.contains(p.id.as_str()))
        .map(|p| p.id.clone())
        .collect();
    if !orphans.is_empty() {
        return Err(EvalError::Orphans(orphans));
    }

    let cfg = &opts.codec;
    let run = || -> Vec<SampleScores> {
        samples
            .par_iter()
            .map(|s| {
                let pred = by_id.get(s.id.as_str()).copied();
                match &s.ground_truth {
                    GroundTruth::Page(gt) => score_ocr(s, gt, pred, cfg),
                    GroundTruth::Markdown(gt) => score_markdown(s, gt, pred),
                }
            })
            .collect()
    };
    match opts.jobs {
        None => Ok(run()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| EvalError::Pool(e.to_string()))?;
            Ok(pool.install(run))
        }
    }
}

fn row<'a>(metrics: &[Metric], iou_column: bool, scores: impl Iterator<Item = &'a SampleScores> + Clone) -> MetricRow {
    let values = metrics
        .iter()
        .map(|&m| {
            if m == Metric::Iou && !iou_column {
                return (m, None);
            }
            (m, mean(scores.clone().filter_map(|s| s.get(m))).ok())
        })
        .collect();
    MetricRow {
        sample_count: scores.count(),
        values,
    }
}

/// Folds per-sample scores (in manifest order) into a report.
pub fn aggregate(task: Task, scores: &[SampleScores], pred_diagnostics: &[Diagnostic], config: Map<String, Value>) -> EvalReport {
    let metrics = Metric::for_task(task);
    let iou_column = scores.iter().any(|s| s.pred_boxes);
    let per_category: Vec<(Category, MetricRow)> = Category::ALL
        .into_iter()
        .filter(|c| scores.iter().any(|s| s.category == *c))
        .map(|c| (c, row(metrics, iou_column, scores.iter().filter(move |s| s.category == c))))
        .collect();
    let overall = row(metrics, iou_column, scores.iter());
    let macro_avg = MetricRow {
        sample_count: scores.len(),
        values: metrics
            .iter()
            .map(|&m| (m, mean(per_category.iter().filter_map(|(_, r)| r.get(m))).ok()))
            .collect(),
    };
    let diagnostics = pred_diagnostics
        .iter()
        .cloned()
        .chain(scores.iter().flat_map(|s| s.diagnostics.iter().cloned()))
        .collect();
    EvalReport {
        tool_version: TOOL_VERSION.to_owned(),
        task,
        config,
        aggregation: AGGREGATION.to_vec(),
        metrics: metrics.to_vec(),
        per_category,
        overall,
        macro_avg,
        diagnostics,
    }
}

pub fn evaluate(task: Task, samples: &[Sample], preds: &PredictionSet, opts: &EvalOptions) -> Result<EvalReport, EvalError> {
    let scores = score_samples(task, samples, preds, opts)?;
    Ok(aggregate(task, &scores, &preds.diagnostics, opts.config.clone()))
}

pub fn evaluate_ocr(samples: &[Sample], preds: &PredictionSet, opts: &EvalOptions) -> Result<EvalReport, EvalError> {
    evaluate(Task::Ocr, samples, preds, opts)
}

pub fn evaluate_markdown(samples: &[Sample], preds: &PredictionSet, opts: &EvalOptions) -> Result<EvalReport, EvalError> {
    evaluate(Task::Markdown, samples, preds, opts)
}

/// A prediction set that copies every ground truth verbatim.
pub fn gold_predictions(samples: &[Sample]) -> PredictionSet {
    let predictions = samples
        .iter()
        .enumerate()
        .map(|(i, s)| Prediction {
            id: s.id.clone(),
            line: i + 1,
            payload: match &s.ground_truth {
                GroundTruth::Page(p) => PredictionPayload::Page(p.clone()),
                GroundTruth::Markdown(m) => PredictionPayload::Markdown(m.clone()),
            },
        })
        .collect();
    PredictionSet {
        predictions,
        diagnostics: Vec::new(),
    }
}
