//! Special-token sequences for the layout (`<ocr>`) and markup (`<md>`) tasks.
//!
//! Prompt:   `<s> <image> [embedding] </image> <ocr>` (or `<md>`)
//! Response: `(<bbox> <x_i> <y_j> <x_k> <y_l> </bbox> text)* </s>`
//!
//! Blocks carry no delimiter between them; each is opened by its own `<bbox>`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{dequantize_page, quantize_page, CodecConfig, CodecError, QuantizedBox, QuantizedLine};
use crate::types::{PageDocument, Task};

/// Text stand-in for the image embedding inside a prompt.
pub const IMAGE_PLACEHOLDER: &str = "<placeholder>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Special {
    Start,
    End,
    Image,
    ImageEnd,
    Ocr,
    Md,
    Bbox,
    BboxEnd,
    X(u32),
    Y(u32),
}

impl Special {
    pub fn name(&self) -> String {
        match self {
            Special::Start => "s".into(),
            Special::End => "/s".into(),
            Special::Image => "image".into(),
            Special::ImageEnd => "/image".into(),
            Special::Ocr => "ocr".into(),
            Special::Md => "md".into(),
            Special::Bbox => "bbox".into(),
            Special::BboxEnd => "/bbox".into(),
            Special::X(i) => format!("x_{i}"),
            Special::Y(i) => format!("y_{i}"),
        }
    }

    /// Inverse of [`Special::name`]. Coordinate indices must be canonical decimals.
    pub fn from_name(name: &str) -> Option<Special> {
        let s = match name {
            "s" => Special::Start,
            "/s" => Special::End,
            "image" => Special::Image,
            "/image" => Special::ImageEnd,
            "ocr" => Special::Ocr,
            "md" => Special::Md,
            "bbox" => Special::Bbox,
            "/bbox" => Special::BboxEnd,
            _ => {
                let (axis, idx) = name.split_at_checked(2)?;
                let idx = parse_index(idx)?;
                match axis {
                    "x_" => Special::X(idx),
                    "y_" => Special::Y(idx),
                    _ => return None,
                }
            }
        };
        Some(s)
    }

    /// Every coordinate and box-marker special for the given bin count (`2L + 2` members).
    pub fn location_universe(cfg: &CodecConfig) -> impl Iterator<Item = Special> {
        let l = cfg.bins();
        (0..l)
            .map(Special::X)
            .chain((0..l).map(Special::Y))
            .chain([Special::Bbox, Special::BboxEnd])
    }
}

fn parse_index(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
        return None;
    }
    s.parse().ok()
}

impl fmt::Display for Special {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WireToken", into = "WireToken")]
pub enum Token {
    Special(Special),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireToken {
    t: WireKind,
    v: String,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum WireKind {
    Special,
    Text,
}

impl TryFrom<WireToken> for Token {
    type Error = String;

    fn try_from(w: WireToken) -> Result<Self, Self::Error> {
        match w.t {
            WireKind::Text => Ok(Token::Text(w.v)),
            WireKind::Special => Special::from_name(&w.v)
                .map(Token::Special)
                .ok_or_else(|| format!("unknown special token {:?}", w.v)),
        }
    }
}

impl From<Token> for WireToken {
    fn from(t: Token) -> Self {
        match t {
            Token::Special(s) => WireToken {
                t: WireKind::Special,
                v: s.name(),
            },
            Token::Text(v) => WireToken {
                t: WireKind::Text,
                v,
            },
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Special(s) => s.fmt(f),
            Token::Text(t) => f.write_str(t),
        }
    }
}

/// An ordered token sequence. Serializes as a JSON array of `{"t": ..., "v": ...}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenStream(Vec<Token>);

impl TokenStream {
    pub fn new() -> Self {
        TokenStream(Vec::new())
    }

    pub fn push(&mut self, t: Token) {
        self.0.push(t);
    }

    pub fn special(&mut self, s: Special) {
        self.0.push(Token::Special(s));
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("token streams always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

impl From<Vec<Token>> for TokenStream {
    fn from(v: Vec<Token>) -> Self {
        TokenStream(v)
    }
}

impl FromIterator<Token> for TokenStream {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        TokenStream(iter.into_iter().collect())
    }
}

impl fmt::Display for TokenStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            t.fmt(f)?;
        }
        Ok(())
    }
}

pub fn build_prompt(task: Task) -> TokenStream {
    let mode = match task {
        Task::Ocr => Special::Ocr,
        Task::Markdown => Special::Md,
    };
    TokenStream(vec![
        Token::Special(Special::Start),
        Token::Special(Special::Image),
        Token::Text(IMAGE_PLACEHOLDER.to_owned()),
        Token::Special(Special::ImageEnd),
        Token::Special(mode),
    ])
}

/// Encodes already-quantized lines as the layout-task response.
pub fn encode_quantized(lines: &[QuantizedLine]) -> TokenStream {
    let mut out = TokenStream(Vec::with_capacity(lines.len() * 7 + 1));
    for line in lines {
        let [a, b, c, d] = line.bins.to_array();
        out.special(Special::Bbox);
        out.special(Special::X(a));
        out.special(Special::Y(b));
        out.special(Special::X(c));
        out.special(Special::Y(d));
        out.special(Special::BboxEnd);
        out.push(Token::Text(line.text.clone()));
    }
    out.special(Special::End);
    out
}

/// Encodes a page as the layout-task response. Every line needs a box.
pub fn encode_layout(doc: &PageDocument, cfg: &CodecConfig) -> Result<TokenStream, CodecError> {
    Ok(encode_quantized(&quantize_page(doc, cfg)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeErrorKind {
    /// `<bbox>` without its `</bbox>`, or a stray `</bbox>`.
    UnbalancedBbox,
    CoordinateOutOfRange { value: u32, bins: u32 },
    TextBeforeBbox,
    UnexpectedToken { expected: &'static str },
    InvertedBox,
    NewlineInText,
    MissingEnd,
    TrailingTokens,
}

impl fmt::Display for DecodeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeErrorKind::UnbalancedBbox => f.write_str("unbalanced <bbox>/</bbox>"),
            DecodeErrorKind::CoordinateOutOfRange { value, bins } => {
                write!(f, "coordinate {value} out of range for {bins} bins")
            }
            DecodeErrorKind::TextBeforeBbox => f.write_str("text before any <bbox>"),
            DecodeErrorKind::UnexpectedToken { expected } => write!(f, "expected {expected}"),
            DecodeErrorKind::InvertedBox => f.write_str("box corners out of order"),
            DecodeErrorKind::NewlineInText => f.write_str("newline inside line text"),
            DecodeErrorKind::MissingEnd => f.write_str("missing </s>"),
            DecodeErrorKind::TrailingTokens => f.write_str("tokens after </s>"),
        }
    }
}

/// A response-stream parse failure at token index `offset`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("token {offset}: {kind}")]
pub struct DecodeError {
    pub offset: usize,
    pub kind: DecodeErrorKind,
}

fn err(offset: usize, kind: DecodeErrorKind) -> DecodeError {
    DecodeError { offset, kind }
}

/// Parses one `<bbox> … </bbox> text*` block starting at `start`, which must hold
/// `<bbox>`. Returns the line and the index just past it.
fn parse_block(
    toks: &[Token],
    start: usize,
    cfg: &CodecConfig,
) -> Result<(QuantizedLine, usize), DecodeError> {
    let mut bins = [0u32; 4];
    for (k, slot) in bins.iter_mut().enumerate() {
        let pos = start + 1 + k;
        let want_x = k % 2 == 0;
        let value = match toks.get(pos) {
            Some(Token::Special(Special::X(v))) if want_x => *v,
            Some(Token::Special(Special::Y(v))) if !want_x => *v,
            Some(Token::Special(Special::BboxEnd)) | Some(Token::Special(Special::Bbox)) | None => {
                return Err(err(pos, DecodeErrorKind::UnbalancedBbox))
            }
            Some(_) => {
                let expected = if want_x { "x coordinate" } else { "y coordinate" };
                return Err(err(pos, DecodeErrorKind::UnexpectedToken { expected }));
            }
        };
        if value >= cfg.bins() {
            return Err(err(
                pos,
                DecodeErrorKind::CoordinateOutOfRange {
                    value,
                    bins: cfg.bins(),
                },
            ));
        }
        *slot = value;
    }
    let close = start + 5;
    match toks.get(close) {
        Some(Token::Special(Special::BboxEnd)) => {}
        _ => return Err(err(close, DecodeErrorKind::UnbalancedBbox)),
    }
    let bins = QuantizedBox::new(bins, cfg).map_err(|_| err(start, DecodeErrorKind::InvertedBox))?;
    let mut text = String::new();
    let mut pos = close + 1;
    while let Some(Token::Text(t)) = toks.get(pos) {
        if t.contains(['\n', '\r']) {
            return Err(err(pos, DecodeErrorKind::NewlineInText));
        }
        text.push_str(t);
        pos += 1;
    }
    Ok((QuantizedLine { bins, text }, pos))
}

/// Strict parse of a layout response into quantized lines.
pub fn decode_layout_quantized(
    stream: &TokenStream,
    cfg: &CodecConfig,
) -> Result<Vec<QuantizedLine>, DecodeError> {
    let toks = stream.tokens();
    let mut lines = Vec::new();
    let mut pos = 0;
    loop {
        match toks.get(pos) {
            None => return Err(err(pos, DecodeErrorKind::MissingEnd)),
            Some(Token::Special(Special::End)) => {
                if pos + 1 != toks.len() {
                    return Err(err(pos + 1, DecodeErrorKind::TrailingTokens));
                }
                return Ok(lines);
            }
            Some(Token::Special(Special::Bbox)) => {
                let (line, next) = parse_block(toks, pos, cfg)?;
                lines.push(line);
                pos = next;
            }
            Some(Token::Special(Special::BboxEnd)) => {
                return Err(err(pos, DecodeErrorKind::UnbalancedBbox))
            }
            Some(Token::Text(_)) => return Err(err(pos, DecodeErrorKind::TextBeforeBbox)),
            Some(Token::Special(_)) => {
                return Err(err(
                    pos,
                    DecodeErrorKind::UnexpectedToken {
                        expected: "<bbox> or </s>",
                    },
                ))
            }
        }
    }
}

/// Strict parse of a layout response, placing boxes back on a `page_w × page_h` page.
pub fn decode_layout(
    stream: &TokenStream,
    page_w: u32,
    page_h: u32,
    cfg: &CodecConfig,
) -> Result<PageDocument, LayoutDecodeError> {
    let lines = decode_layout_quantized(stream, cfg)?;
    Ok(dequantize_page(&lines, page_w, page_h, cfg)?)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LayoutDecodeError {
    #[error(transparent)]
    Parse(#[from] DecodeError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// Result of a lenient decode: every block that parsed, plus what was skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LenientDecode {
    pub lines: Vec<QuantizedLine>,
    pub issues: Vec<DecodeError>,
}

/// Decodes as much as possible. A malformed block is reported and skipped up to
/// the next `<bbox>` or `</s>`; a missing `</s>` or trailing tokens are reported
/// but do not discard the lines already read.
pub fn decode_layout_lenient(stream: &TokenStream, cfg: &CodecConfig) -> LenientDecode {
    let toks = stream.tokens();
    let mut lines = Vec::new();
    let mut issues = Vec::new();
    let mut pos = 0;
    let resync = |from: usize| {
        toks[from.min(toks.len())..]
            .iter()
            .position(|t| matches!(t, Token::Special(Special::Bbox | Special::End)))
            .map_or(toks.len(), |p| from + p)
    };
    loop {
        match toks.get(pos) {
            None => {
                issues.push(err(pos, DecodeErrorKind::MissingEnd));
                break;
            }
            Some(Token::Special(Special::End)) => {
                if pos + 1 != toks.len() {
                    issues.push(err(pos + 1, DecodeErrorKind::TrailingTokens));
                }
                break;
            }
            Some(Token::Special(Special::Bbox)) => match parse_block(toks, pos, cfg) {
                Ok((line, next)) => {
                    lines.push(line);
                    pos = next;
                }
                Err(e) => {
                    pos = resync(pos + 1);
                    issues.push(e);
                }
            },
            Some(t) => {
                let kind = match t {
                    Token::Text(_) => DecodeErrorKind::TextBeforeBbox,
                    Token::Special(Special::BboxEnd) => DecodeErrorKind::UnbalancedBbox,
                    _ => DecodeErrorKind::UnexpectedToken {
                        expected: "<bbox> or </s>",
                    },
                };
                issues.push(err(pos, kind));
                pos = resync(pos + 1);
            }
        }
    }
    LenientDecode { lines, issues }
}
