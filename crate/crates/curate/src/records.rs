//! JSONL corpus records. Each line is an object with a string `id`; the other
//! fields depend on the step (`text`, `markdown`, `source`, ...). The original
//! line is kept so kept records are written back byte for byte.

use std::io::BufRead;

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub id: String,
    /// 1-based line in the input.
    pub line: usize,
    pub raw: String,
    pub fields: Map<String, Value>,
}

impl Record {
    pub fn str_field(&self, key: &str) -> Option<&str> {
        self.fields.get(key).and_then(Value::as_str)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("read error: {0}")]
    Io(#[from] std::io::Error),
}

pub fn parse_record(raw: &str, line: usize) -> Result<Record, RecordError> {
    let value: Value = serde_json::from_str(raw).map_err(|source| RecordError::Json { line, source })?;
    let Value::Object(fields) = value else {
        return Err(RecordError::Invalid {
            line,
            message: "record is not a JSON object".into(),
        });
    };
    let id = match fields.get("id") {
        Some(Value::String(s)) => s.clone(),
        _ => {
            return Err(RecordError::Invalid {
                line,
                message: "missing string `id`".into(),
            })
        }
    };
    Ok(Record {
        id,
        line,
        raw: raw.to_owned(),
        fields,
    })
}

/// Reads every non-blank line as a record. The first bad line is an error.
pub fn read_records<R: BufRead>(reader: R) -> Result<Vec<Record>, RecordError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_text = line?;
        if line_text.trim().is_empty() {
            continue;
        }
        out.push(parse_record(&line_text, i + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_keeps_raw_lines() {
        let src = "{\"id\":\"a\", \"text\":\"x\"}\n\n{\"id\":\"b\",\"source\":\"web\"}\n";
        let r = read_records(src.as_bytes()).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].raw, "{\"id\":\"a\", \"text\":\"x\"}");
        assert_eq!(r[0].str_field("text"), Some("x"));
        assert_eq!(r[1].line, 3);
        assert_eq!(r[1].str_field("source"), Some("web"));
    }

    #[test]
    fn errors_name_the_line() {
        let err = read_records("{\"id\":\"a\"}\n{\"text\":1}\n".as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("line 2"));
        let err = read_records("[]\n".as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("line 1"));
    }
}
