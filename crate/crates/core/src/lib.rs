//! Document-reading evaluation toolkit: page and markdown types, the
//! location-token codec, and the OCR and markdown metric suites.

pub mod codec;
pub mod eval;
pub mod manifest;
pub mod ocr;
pub mod textdist;
pub mod treedist;
pub mod types;

pub use types::{BoundingBox, Category, MarkdownDocument, PageDocument, Task, TextLine};
