//! Location-token codec.
//!
//! A box is quantized onto an `L × L` virtual canvas: x coordinates scale by page
//! width, y coordinates by page height, each rounded down and clamped to `L - 1`.
//! The resulting bins are written either as special tokens
//! (`<bbox><x_i><y_j><x_k><y_l></bbox>`, see [`tokens`]) or in the human-readable
//! bracketed form `[x_i] [y_j] [x_k] [y_l]: text` (see [`bracketed`]).

pub mod bracketed;
pub mod tokens;

use std::fmt;

use crate::types::{BoundingBox, PageDocument, TextLine};

pub use bracketed::{decode_bracketed, decode_bracketed_lenient, encode_bracketed, BracketedError};
pub use tokens::{
    build_prompt, decode_layout, decode_layout_lenient, decode_layout_quantized, encode_layout,
    DecodeError, DecodeErrorKind, LayoutDecodeError, LenientDecode, Special, Token, TokenStream, IMAGE_PLACEHOLDER,
};

pub const DEFAULT_BINS: u32 = 4096;

/// Codec parameters. `bins` is the number of location bins per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodecConfig {
    bins: u32,
}

impl Default for CodecConfig {
    fn default() -> Self {
        CodecConfig { bins: DEFAULT_BINS }
    }
}

impl CodecConfig {
    pub fn new(bins: u32) -> Result<Self, CodecError> {
        if bins == 0 {
            return Err(CodecError::InvalidBins);
        }
        Ok(CodecConfig { bins })
    }

    pub fn bins(&self) -> u32 {
        self.bins
    }

    /// Size of the coordinate + box-marker vocabulary: `2L + 2`.
    pub fn location_token_count(&self) -> u64 {
        2 * u64::from(self.bins) + 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("bin count must be at least 1")]
    InvalidBins,
    #[error("page dimensions must be positive")]
    EmptyPage,
    #[error("box {bbox:?} lies outside the {width}x{height} page")]
    OutOfPage {
        bbox: [u32; 4],
        width: u32,
        height: u32,
    },
    #[error("bin {bin} out of range for {bins} bins")]
    BinOutOfRange { bin: u32, bins: u32 },
    #[error("bins {0:?} are not ordered top-left to bottom-right")]
    InvertedBins([u32; 4]),
    #[error("line {line} has no bounding box")]
    MissingBox { line: usize },
    #[error("line {line} text contains a newline")]
    NewlineInText { line: usize },
}

/// A box in bin space: each coordinate in `[0, L)`, top-left not after bottom-right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantizedBox {
    x_tl: u32,
    y_tl: u32,
    x_br: u32,
    y_br: u32,
}

impl QuantizedBox {
    pub fn new(bins: [u32; 4], cfg: &CodecConfig) -> Result<Self, CodecError> {
        if let Some(&bin) = bins.iter().find(|&&b| b >= cfg.bins) {
            return Err(CodecError::BinOutOfRange {
                bin,
                bins: cfg.bins,
            });
        }
        let [x_tl, y_tl, x_br, y_br] = bins;
        if x_tl > x_br || y_tl > y_br {
            return Err(CodecError::InvertedBins(bins));
        }
        Ok(QuantizedBox {
            x_tl,
            y_tl,
            x_br,
            y_br,
        })
    }

    pub fn to_array(self) -> [u32; 4] {
        [self.x_tl, self.y_tl, self.x_br, self.y_br]
    }
}

impl fmt::Display for QuantizedBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[x_{}] [y_{}] [x_{}] [y_{}]",
            self.x_tl, self.y_tl, self.x_br, self.y_br
        )
    }
}

/// A text line whose box has been quantized.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantizedLine {
    pub bins: QuantizedBox,
    pub text: String,
}

fn bin_of(coord: u32, dim: u32, bins: u32) -> u32 {
    let b = u64::from(coord) * u64::from(bins) / u64::from(dim);
    b.min(u64::from(bins - 1)) as u32
}

/// Representative pixel of a bin. Every bin except the last maps to its smallest
/// pixel; the last bin, which also absorbs the page edge through the clamp, maps to
/// the middle of its pixel range.
fn pixel_of(bin: u32, dim: u32, bins: u32) -> u32 {
    let (b, d, l) = (u64::from(bin), u64::from(dim), u64::from(bins));
    let lowest = (b * d).div_ceil(l);
    if bin + 1 < bins {
        lowest as u32
    } else {
        ((lowest + d) / 2) as u32
    }
}

pub fn quantize(
    bbox: BoundingBox,
    page_w: u32,
    page_h: u32,
    cfg: &CodecConfig,
) -> Result<QuantizedBox, CodecError> {
    if page_w == 0 || page_h == 0 {
        return Err(CodecError::EmptyPage);
    }
    if bbox.x_br() > page_w || bbox.y_br() > page_h {
        return Err(CodecError::OutOfPage {
            bbox: bbox.to_array(),
            width: page_w,
            height: page_h,
        });
    }
    let l = cfg.bins;
    Ok(QuantizedBox {
        x_tl: bin_of(bbox.x_tl(), page_w, l),
        y_tl: bin_of(bbox.y_tl(), page_h, l),
        x_br: bin_of(bbox.x_br(), page_w, l),
        y_br: bin_of(bbox.y_br(), page_h, l),
    })
}

pub fn dequantize(
    qbox: QuantizedBox,
    page_w: u32,
    page_h: u32,
    cfg: &CodecConfig,
) -> Result<BoundingBox, CodecError> {
    if page_w == 0 || page_h == 0 {
        return Err(CodecError::EmptyPage);
    }
    let l = cfg.bins;
    if let Some(&bin) = qbox.to_array().iter().find(|&&b| b >= l) {
        return Err(CodecError::BinOutOfRange { bin, bins: l });
    }
    let bbox = BoundingBox::new(
        pixel_of(qbox.x_tl, page_w, l),
        pixel_of(qbox.y_tl, page_h, l),
        pixel_of(qbox.x_br, page_w, l),
        pixel_of(qbox.y_br, page_h, l),
    )
    .expect("pixel_of is monotone in the bin");
    Ok(bbox)
}

/// Quantizes every line of a page. All lines must carry a box.
pub fn quantize_page(doc: &PageDocument, cfg: &CodecConfig) -> Result<Vec<QuantizedLine>, CodecError> {
    doc.lines()
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let bbox = line.bbox().ok_or(CodecError::MissingBox { line: i })?;
            Ok(QuantizedLine {
                bins: quantize(bbox, doc.width(), doc.height(), cfg)?,
                text: line.text().to_owned(),
            })
        })
        .collect()
}

/// Places quantized lines back onto a page of the given size.
pub fn dequantize_page(
    lines: &[QuantizedLine],
    page_w: u32,
    page_h: u32,
    cfg: &CodecConfig,
) -> Result<PageDocument, CodecError> {
    let mut out = Vec::with_capacity(lines.len());
    for (i, ql) in lines.iter().enumerate() {
        let bbox = dequantize(ql.bins, page_w, page_h, cfg)?;
        let line = TextLine::new(&ql.text, Some(bbox))
            .map_err(|_| CodecError::NewlineInText { line: i })?;
        out.push(line);
    }
    PageDocument::new(page_w, page_h, out).map_err(|_| CodecError::EmptyPage)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bb(a: u32, b: u32, c: u32, d: u32) -> BoundingBox {
        BoundingBox::new(a, b, c, d).unwrap()
    }

    #[test]
    fn full_page_box_clamps_to_last_bin() {
        let cfg = CodecConfig::default();
        for (w, h) in [(1000, 700), (4096, 4096), (9000, 123)] {
            let q = quantize(bb(0, 0, w, h), w, h, &cfg).unwrap();
            assert_eq!(q.to_array(), [0, 0, 4095, 4095]);
        }
    }

    #[test]
    fn midpoint_lands_in_middle_bin() {
        let cfg = CodecConfig::default();
        // floor(500 * 4096 / 1000) = 2048
        let q = quantize(bb(500, 0, 500, 0), 1000, 1000, &cfg).unwrap();
        assert_eq!(q.to_array()[0], 2048);
    }

    #[test]
    fn zero_maps_to_zero() {
        for l in [1, 7, 4096] {
            let cfg = CodecConfig::new(l).unwrap();
            for w in [1, 3, 1000, 50_000] {
                let q = quantize(bb(0, 0, 0, 0), w, w, &cfg).unwrap();
                assert_eq!(q.to_array(), [0, 0, 0, 0]);
            }
        }
    }

    #[test]
    fn dequantize_examples() {
        let cfg = CodecConfig::default();
        let zero = QuantizedBox::new([0, 0, 0, 0], &cfg).unwrap();
        for w in [1, 999, 4096, 10_000] {
            assert_eq!(dequantize(zero, w, w, &cfg).unwrap().to_array(), [0, 0, 0, 0]);
        }
        // floor(2048 * 1000 / 4096) = 500
        let q = QuantizedBox::new([2048, 0, 2048, 0], &cfg).unwrap();
        assert_eq!(dequantize(q, 1000, 1000, &cfg).unwrap().x_tl(), 500);
    }

    #[test]
    fn out_of_page_is_an_error() {
        let cfg = CodecConfig::default();
        assert!(matches!(
            quantize(bb(0, 0, 101, 5), 100, 100, &cfg),
            Err(CodecError::OutOfPage { .. })
        ));
    }

    #[test]
    fn quantized_box_checks_range_and_order() {
        let cfg = CodecConfig::new(10).unwrap();
        assert!(matches!(
            QuantizedBox::new([0, 0, 10, 0], &cfg),
            Err(CodecError::BinOutOfRange { bin: 10, .. })
        ));
        assert!(matches!(
            QuantizedBox::new([5, 0, 4, 0], &cfg),
            Err(CodecError::InvertedBins(_))
        ));
    }

    #[test]
    fn vocabulary_size() {
        assert_eq!(CodecConfig::default().location_token_count(), 8194);
        assert!(CodecConfig::new(0).is_err());
    }

    #[test]
    fn quantize_page_needs_boxes() {
        let doc = PageDocument::new(
            10,
            10,
            vec![
                TextLine::new("a", Some(bb(0, 0, 1, 1))).unwrap(),
                TextLine::new("b", None).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(
            quantize_page(&doc, &CodecConfig::default()),
            Err(CodecError::MissingBox { line: 1 })
        );
    }
}
