//! Page-level domain types shared by the codec, the metrics, and the harness.
//!
//! Every type here is validated on construction. Unvalidated input (for example a
//! page deserialized from a model's output) lives in [`PageDraft`] until
//! [`validate_page`] reports no violations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::{is_nfc, UnicodeNormalization};

/// Normalizes to NFC, skipping the allocation when the input is already normalized.
pub fn nfc(s: &str) -> String {
    if is_nfc(s) {
        s.to_owned()
    } else {
        s.nfc().collect()
    }
}

/// Axis-aligned pixel rectangle given by its top-left and bottom-right corners.
///
/// Zero-area boxes are valid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundingBox {
    x_tl: u32,
    y_tl: u32,
    x_br: u32,
    y_br: u32,
}

impl BoundingBox {
    pub fn new(x_tl: u32, y_tl: u32, x_br: u32, y_br: u32) -> Result<Self, Rule> {
        if x_tl > x_br {
            return Err(Rule::InvertedX);
        }
        if y_tl > y_br {
            return Err(Rule::InvertedY);
        }
        Ok(BoundingBox {
            x_tl,
            y_tl,
            x_br,
            y_br,
        })
    }

    pub fn x_tl(&self) -> u32 {
        self.x_tl
    }

    pub fn y_tl(&self) -> u32 {
        self.y_tl
    }

    pub fn x_br(&self) -> u32 {
        self.x_br
    }

    pub fn y_br(&self) -> u32 {
        self.y_br
    }

    pub fn width(&self) -> u64 {
        u64::from(self.x_br - self.x_tl)
    }

    pub fn height(&self) -> u64 {
        u64::from(self.y_br - self.y_tl)
    }

    pub fn area(&self) -> u64 {
        self.width() * self.height()
    }

    pub fn to_array(self) -> [u32; 4] {
        [self.x_tl, self.y_tl, self.x_br, self.y_br]
    }
}

/// One atomic line of recognized text, optionally located on the page.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TextLine {
    text: String,
    bbox: Option<BoundingBox>,
}

impl TextLine {
    pub fn new(text: &str, bbox: Option<BoundingBox>) -> Result<Self, Rule> {
        if text.contains(['\n', '\r']) {
            return Err(Rule::NewlineInText);
        }
        Ok(TextLine {
            text: nfc(text),
            bbox,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn bbox(&self) -> Option<BoundingBox> {
        self.bbox
    }
}

/// A single page: its pixel dimensions and its lines in reading order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PageDraft", into = "PageDraft")]
pub struct PageDocument {
    width: u32,
    height: u32,
    lines: Vec<TextLine>,
}

impl PageDocument {
    pub fn new(width: u32, height: u32, lines: Vec<TextLine>) -> Result<Self, InvalidPage> {
        let mut violations = Vec::new();
        if width == 0 {
            violations.push(Violation::page(Rule::NonPositiveWidth));
        }
        if height == 0 {
            violations.push(Violation::page(Rule::NonPositiveHeight));
        }
        for (i, line) in lines.iter().enumerate() {
            if let Some(b) = line.bbox {
                if b.x_br > width {
                    violations.push(Violation::line(i, Rule::ExceedsWidth));
                }
                if b.y_br > height {
                    violations.push(Violation::line(i, Rule::ExceedsHeight));
                }
            }
        }
        if !violations.is_empty() {
            return Err(InvalidPage { violations });
        }
        Ok(PageDocument {
            width,
            height,
            lines,
        })
    }

    /// An empty page of the given size.
    pub fn empty(width: u32, height: u32) -> Result<Self, InvalidPage> {
        Self::new(width, height, Vec::new())
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn lines(&self) -> &[TextLine] {
        &self.lines
    }

    pub fn into_lines(self) -> Vec<TextLine> {
        self.lines
    }

    /// True if at least one line carries a box.
    pub fn has_boxes(&self) -> bool {
        self.lines.iter().any(|l| l.bbox.is_some())
    }

    /// Line texts joined with `\n` in stored order.
    pub fn joined_text(&self) -> String {
        let mut out = String::new();
        for (i, line) in self.lines.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&line.text);
        }
        out
    }
}

/// Raw markdown source, NFC-normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub struct MarkdownDocument {
    source: String,
}

impl MarkdownDocument {
    pub fn new(source: &str) -> Self {
        MarkdownDocument {
            source: nfc(source),
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl From<String> for MarkdownDocument {
    fn from(s: String) -> Self {
        if is_nfc(&s) {
            MarkdownDocument { source: s }
        } else {
            MarkdownDocument::new(&s)
        }
    }
}

impl From<MarkdownDocument> for String {
    fn from(d: MarkdownDocument) -> Self {
        d.source
    }
}

/// Unvalidated page as it appears on the wire: `{width, height, lines: [{text, bbox}]}`.
///
/// Coordinates may arrive as floats; they are floored on deserialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageDraft {
    #[serde(deserialize_with = "floor_i64")]
    pub width: i64,
    #[serde(deserialize_with = "floor_i64")]
    pub height: i64,
    #[serde(default)]
    pub lines: Vec<LineDraft>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineDraft {
    pub text: String,
    #[serde(default, deserialize_with = "floor_box")]
    pub bbox: Option<[i64; 4]>,
}

fn floor_num(v: f64) -> Result<i64, String> {
    if !v.is_finite() || v.abs() > 1e15 {
        return Err(format!("coordinate {v} out of range"));
    }
    Ok(v.floor() as i64)
}

fn floor_i64<'de, D: serde::Deserializer<'de>>(d: D) -> Result<i64, D::Error> {
    let v = f64::deserialize(d)?;
    floor_num(v).map_err(serde::de::Error::custom)
}

fn floor_box<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<[i64; 4]>, D::Error> {
    let v = Option::<[f64; 4]>::deserialize(d)?;
    match v {
        None => Ok(None),
        Some(b) => {
            let mut out = [0i64; 4];
            for (o, x) in out.iter_mut().zip(b) {
                *o = floor_num(x).map_err(serde::de::Error::custom)?;
            }
            Ok(Some(out))
        }
    }
}

/// A broken page invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    NonPositiveWidth,
    NonPositiveHeight,
    NegativeCoordinate,
    CoordinateTooLarge,
    InvertedX,
    InvertedY,
    ExceedsWidth,
    ExceedsHeight,
    NewlineInText,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::NonPositiveWidth => "width <= 0",
            Rule::NonPositiveHeight => "height <= 0",
            Rule::NegativeCoordinate => "negative coordinate",
            Rule::CoordinateTooLarge => "coordinate exceeds u32 range",
            Rule::InvertedX => "x_tl > x_br",
            Rule::InvertedY => "y_tl > y_br",
            Rule::ExceedsWidth => "x_br > width",
            Rule::ExceedsHeight => "y_br > height",
            Rule::NewlineInText => "newline in line text",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Violation {
    /// `None` for page-level rules.
    pub line: Option<usize>,
    pub rule: Rule,
}

impl Violation {
    fn page(rule: Rule) -> Self {
        Violation { line: None, rule }
    }

    fn line(i: usize, rule: Rule) -> Self {
        Violation {
            line: Some(i),
            rule,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(i) => write!(f, "{} at line {i}", self.rule),
            None => write!(f, "{}", self.rule),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid page: {}", join_violations(.violations))]
pub struct InvalidPage {
    pub violations: Vec<Violation>,
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Lists every invariant the draft breaks. An empty list means
/// [`PageDocument::try_from`] will succeed.
pub fn validate_page(doc: &PageDraft) -> Vec<Violation> {
    let mut out = Vec::new();
    if doc.width <= 0 {
        out.push(Violation::page(Rule::NonPositiveWidth));
    } else if doc.width > i64::from(u32::MAX) {
        out.push(Violation::page(Rule::CoordinateTooLarge));
    }
    if doc.height <= 0 {
        out.push(Violation::page(Rule::NonPositiveHeight));
    } else if doc.height > i64::from(u32::MAX) {
        out.push(Violation::page(Rule::CoordinateTooLarge));
    }
    for (i, line) in doc.lines.iter().enumerate() {
        if line.text.contains(['\n', '\r']) {
            out.push(Violation::line(i, Rule::NewlineInText));
        }
        let Some([x_tl, y_tl, x_br, y_br]) = line.bbox else {
            continue;
        };
        if [x_tl, y_tl, x_br, y_br].iter().any(|&c| c < 0) {
            out.push(Violation::line(i, Rule::NegativeCoordinate));
        }
        if [x_tl, y_tl, x_br, y_br]
            .iter()
            .any(|&c| c > i64::from(u32::MAX))
        {
            out.push(Violation::line(i, Rule::CoordinateTooLarge));
        }
        if x_tl > x_br {
            out.push(Violation::line(i, Rule::InvertedX));
        }
        if y_tl > y_br {
            out.push(Violation::line(i, Rule::InvertedY));
        }
        if x_br > doc.width {
            out.push(Violation::line(i, Rule::ExceedsWidth));
        }
        if y_br > doc.height {
            out.push(Violation::line(i, Rule::ExceedsHeight));
        }
    }
    out
}

impl TryFrom<PageDraft> for PageDocument {
    type Error = InvalidPage;

    fn try_from(draft: PageDraft) -> Result<Self, Self::Error> {
        let violations = validate_page(&draft);
        if !violations.is_empty() {
            return Err(InvalidPage { violations });
        }
        // validate_page has checked every range, so the casts below are lossless.
        let lines = draft
            .lines
            .into_iter()
            .map(|l| {
                let bbox = l.bbox.map(|[a, b, c, d]| BoundingBox {
                    x_tl: a as u32,
                    y_tl: b as u32,
                    x_br: c as u32,
                    y_br: d as u32,
                });
                TextLine {
                    text: nfc(&l.text),
                    bbox,
                }
            })
            .collect();
        Ok(PageDocument {
            width: draft.width as u32,
            height: draft.height as u32,
            lines,
        })
    }
}

impl From<PageDocument> for PageDraft {
    fn from(doc: PageDocument) -> Self {
        PageDraft {
            width: i64::from(doc.width),
            height: i64::from(doc.height),
            lines: doc
                .lines
                .into_iter()
                .map(|l| LineDraft {
                    text: l.text,
                    bbox: l.bbox.map(|b| b.to_array().map(i64::from)),
                })
                .collect(),
        }
    }
}

/// Document categories of the two evaluation benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Handwritten,
    Design,
    Receipt,
    General,
    Academic,
    Web,
    Math,
    Table,
    Readme,
    Docx,
    Arxiv,
}

impl Category {
    pub const ALL: [Category; 11] = [
        Category::Handwritten,
        Category::Design,
        Category::Receipt,
        Category::General,
        Category::Academic,
        Category::Web,
        Category::Math,
        Category::Table,
        Category::Readme,
        Category::Docx,
        Category::Arxiv,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Category::Handwritten => "handwritten",
            Category::Design => "design",
            Category::Receipt => "receipt",
            Category::General => "general",
            Category::Academic => "academic",
            Category::Web => "web",
            Category::Math => "math",
            Category::Table => "table",
            Category::Readme => "readme",
            Category::Docx => "docx",
            Category::Arxiv => "arxiv",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Ocr,
    Markdown,
}

impl Task {
    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Ocr => "ocr",
            Task::Markdown => "markdown",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ocr" => Ok(Task::Ocr),
            "markdown" | "md" => Ok(Task::Markdown),
            _ => Err(format!("unknown task {s:?}")),
        }
    }
}
