//! Human-readable layout format, one physical line per text line:
//!
//! ```text
//! [x_52] [y_113] [x_756] [y_145]: NYC Department of Education School Year Calendar 2023-2024
//! ```
//!
//! Lines are joined with `\n`; an empty page encodes to the empty string. The text
//! starts after the first `": "` following the fourth bracket group, so it may
//! itself contain colons.

use super::{quantize_page, CodecConfig, CodecError, QuantizedBox, QuantizedLine};
use crate::types::PageDocument;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct BracketedError {
    /// 1-based physical line number.
    pub line: usize,
    pub message: String,
}

pub fn encode_quantized(lines: &[QuantizedLine]) -> String {
    let mut out = String::new();
    for (i, l) in lines.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&l.bins.to_string());
        out.push_str(": ");
        out.push_str(&l.text);
    }
    out
}

pub fn encode_bracketed(doc: &PageDocument, cfg: &CodecConfig) -> Result<String, CodecError> {
    Ok(encode_quantized(&quantize_page(doc, cfg)?))
}

fn physical_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let lines: Box<dyn Iterator<Item = &str>> = if body.is_empty() {
        Box::new(std::iter::empty())
    } else {
        Box::new(body.split('\n'))
    };
    lines
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l))
}

fn parse_group(s: &str, axis: char) -> Result<(u32, &str), String> {
    let rest = s
        .strip_prefix('[')
        .and_then(|r| r.strip_prefix(axis))
        .and_then(|r| r.strip_prefix('_'))
        .ok_or_else(|| format!("expected `[{axis}_`"))?;
    let end = rest
        .find(']')
        .ok_or_else(|| format!("unterminated `[{axis}_` group"))?;
    let digits = &rest[..end];
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("bad {axis} coordinate {digits:?}"));
    }
    let v = digits
        .parse()
        .map_err(|_| format!("{axis} coordinate {digits} too large"))?;
    Ok((v, &rest[end + 1..]))
}

fn parse_line(line: &str, cfg: &CodecConfig) -> Result<QuantizedLine, String> {
    let mut rest = line;
    let mut bins = [0u32; 4];
    for (k, axis) in ['x', 'y', 'x', 'y'].into_iter().enumerate() {
        if k > 0 {
            rest = rest
                .strip_prefix(' ')
                .ok_or("expected a single space between groups")?;
        }
        let (v, r) = parse_group(rest, axis)?;
        bins[k] = v;
        rest = r;
    }
    let text = match rest.strip_prefix(": ") {
        Some(t) => t,
        None if rest == ":" => "",
        None => return Err("expected `: ` after the fourth group".into()),
    };
    if text.contains('\r') {
        return Err("carriage return inside line text".into());
    }
    let bins = QuantizedBox::new(bins, cfg).map_err(|e| e.to_string())?;
    Ok(QuantizedLine {
        bins,
        text: text.to_owned(),
    })
}

/// Strict parse; the first malformed line is an error.
pub fn decode_bracketed(text: &str, cfg: &CodecConfig) -> Result<Vec<QuantizedLine>, BracketedError> {
    physical_lines(text)
        .map(|(n, l)| parse_line(l, cfg).map_err(|message| BracketedError { line: n, message }))
        .collect()
}

/// Keeps every well-formed line and reports the rest. Blank lines are ignored.
pub fn decode_bracketed_lenient(
    text: &str,
    cfg: &CodecConfig,
) -> (Vec<QuantizedLine>, Vec<BracketedError>) {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for (n, l) in physical_lines(text) {
        if l.trim().is_empty() {
            continue;
        }
        match parse_line(l, cfg) {
            Ok(q) => ok.push(q),
            Err(message) => bad.push(BracketedError { line: n, message }),
        }
    }
    (ok, bad)
}
