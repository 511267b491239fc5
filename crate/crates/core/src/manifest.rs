//! JSONL benchmark manifests: one sample per line.
//!
//! ```text
//! {"id": "r-001", "category": "receipt", "task": "ocr", "page": {"width": 800, "height": 1200, "lines": [...]}}
//! {"id": "m-001", "category": "readme", "task": "markdown", "markdown": "# Title\n..."}
//! ```
//!
//! Fields the manifest format does not know about are kept on the [`Sample`] and
//! written back in their original order.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::types::{Category, InvalidPage, MarkdownDocument, PageDocument, PageDraft, Task};

#[derive(Debug, Clone, PartialEq)]
pub enum GroundTruth {
    Page(PageDocument),
    Markdown(MarkdownDocument),
}

impl GroundTruth {
    pub fn task(&self) -> Task {
        match self {
            GroundTruth::Page(_) => Task::Ocr,
            GroundTruth::Markdown(_) => Task::Markdown,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub id: String,
    pub category: Category,
    pub ground_truth: GroundTruth,
    /// Unrecognized top-level fields, preserved for round-trips.
    pub extra: Map<String, Value>,
}

impl Sample {
    pub fn new(id: impl Into<String>, category: Category, ground_truth: GroundTruth) -> Self {
        Sample {
            id: id.into(),
            category,
            ground_truth,
            extra: Map::new(),
        }
    }

    pub fn task(&self) -> Task {
        self.ground_truth.task()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("line {line}: {source}")]
    Page {
        line: usize,
        #[source]
        source: InvalidPage,
    },
    #[error("duplicate id {id:?} on lines {first} and {second}")]
    DuplicateId {
        id: String,
        first: usize,
        second: usize,
    },
    #[error("read error: {0}")]
    Io(#[from] std::io::Error),
}

impl ManifestError {
    /// 1-based line the error refers to, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            ManifestError::Json { line, .. }
            | ManifestError::Invalid { line, .. }
            | ManifestError::Page { line, .. } => Some(*line),
            ManifestError::DuplicateId { second, .. } => Some(*second),
            ManifestError::Io(_) => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Record {
    id: String,
    category: Category,
    task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    page: Option<PageDraft>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    markdown: Option<String>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

/// Parses one manifest line. `line` is only used in error messages.
pub fn parse_sample(text: &str, line: usize) -> Result<Sample, ManifestError> {
    let rec: Record =
        serde_json::from_str(text).map_err(|source| ManifestError::Json { line, source })?;
    let invalid = |message: &str| ManifestError::Invalid {
        line,
        message: message.to_owned(),
    };
    let ground_truth = match (rec.task, rec.page, rec.markdown) {
        (Task::Ocr, Some(page), None) => GroundTruth::Page(
            PageDocument::try_from(page).map_err(|source| ManifestError::Page { line, source })?,
        ),
        (Task::Markdown, None, Some(md)) => GroundTruth::Markdown(MarkdownDocument::from(md)),
        (_, Some(_), Some(_)) => return Err(invalid("record has both `page` and `markdown`")),
        (Task::Ocr, _, _) => return Err(invalid("task \"ocr\" requires a `page` object")),
        (Task::Markdown, _, _) => {
            return Err(invalid("task \"markdown\" requires a `markdown` string"))
        }
    };
    if rec.id.is_empty() {
        return Err(invalid("empty id"));
    }
    Ok(Sample {
        id: rec.id,
        category: rec.category,
        ground_truth,
        extra: rec.extra,
    })
}

/// Reads a whole manifest. Blank lines are skipped; line numbers in errors are 1-based.
pub fn read_manifest<R: BufRead>(reader: R) -> Result<Vec<Sample>, ManifestError> {
    let mut samples = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (idx, text) in reader.lines().enumerate() {
        let text = text?;
        let line = idx + 1;
        if text.trim().is_empty() {
            continue;
        }
        let sample = parse_sample(&text, line)?;
        if let Some(&first) = seen.get(&sample.id) {
            return Err(ManifestError::DuplicateId {
                id: sample.id,
                first,
                second: line,
            });
        }
        seen.insert(sample.id.clone(), line);
        samples.push(sample);
    }
    Ok(samples)
}

/// Serializes one sample as a single JSON line (no trailing newline).
pub fn sample_to_json(sample: &Sample) -> String {
    let (page, markdown) = match &sample.ground_truth {
        GroundTruth::Page(p) => (Some(PageDraft::from(p.clone())), None),
        GroundTruth::Markdown(m) => (None, Some(m.source().to_owned())),
    };
    let rec = Record {
        id: sample.id.clone(),
        category: sample.category,
        task: sample.task(),
        page,
        markdown,
        extra: sample.extra.clone(),
    };
    serde_json::to_string(&rec).expect("manifest records always serialize")
}

pub fn write_manifest<W: Write>(mut writer: W, samples: &[Sample]) -> std::io::Result<()> {
    for s in samples {
        writeln!(writer, "{}", sample_to_json(s))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const OCR: &str = r#"{"id":"a","category":"receipt","task":"ocr","page":{"width":100,"height":50,"lines":[{"text":"Hi","bbox":[0,0,10,10]},{"text":"no box","bbox":null}]}}"#;
    const MD: &str = r##"{"id":"b","category":"readme","task":"markdown","markdown":"# T","source_url":"x"}"##;

    #[test]
    fn reads_samples_in_order() {
        let input = format!("{OCR}\n{MD}\n");
        let samples = read_manifest(input.as_bytes()).unwrap();
        assert_eq!(samples.len(), 2);
        assert_eq!(samples[0].id, "a");
        assert_eq!(samples[0].task(), Task::Ocr);
        assert_eq!(samples[1].id, "b");
        assert_eq!(samples[1].extra["source_url"], "x");
    }

    #[test]
    fn malformed_line_is_reported() {
        let input = format!("{OCR}\n{{\"id\": oops\n");
        let err = read_manifest(input.as_bytes()).unwrap_err();
        assert_eq!(err.line(), Some(2));
        assert!(err.to_string().starts_with("line 2:"));
    }

    #[test]
    fn duplicate_ids_name_both_lines() {
        let input = format!("{OCR}\n{MD}\n{OCR}\n");
        let err = read_manifest(input.as_bytes()).unwrap_err();
        match err {
            ManifestError::DuplicateId { id, first, second } => {
                assert_eq!((id.as_str(), first, second), ("a", 1, 3));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn task_must_match_payload() {
        let bad = r#"{"id":"a","category":"web","task":"markdown","page":{"width":1,"height":1,"lines":[]}}"#;
        assert!(matches!(
            parse_sample(bad, 1),
            Err(ManifestError::Invalid { .. })
        ));
    }

    #[test]
    fn invalid_page_is_rejected() {
        let bad = r#"{"id":"a","category":"web","task":"ocr","page":{"width":10,"height":10,"lines":[{"text":"x","bbox":[0,0,20,5]}]}}"#;
        assert!(matches!(parse_sample(bad, 4), Err(ManifestError::Page { line: 4, .. })));
    }

    #[test]
    fn round_trip_preserves_unknown_fields() {
        let input = format!("{OCR}\n{MD}\n");
        let samples = read_manifest(input.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_manifest(&mut out, &samples).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), input);
    }
}
