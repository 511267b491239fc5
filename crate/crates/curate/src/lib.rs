//! Corpus curation: near-duplicate removal with MinHash and LSH, the
//! image/markdown alignment filter, language filtering, and ratio-driven
//! mixture sampling.

pub mod align;
pub mod dedup;
pub mod lang;
pub mod minhash;
pub mod mixture;
pub mod records;

pub use align::{alignment_ratio, filter_aligned};
pub use dedup::{dedup, DedupConfig, DedupOutcome, DuplicateCluster};
pub use lang::{language_keep, LanguageClassifier, TrigramClassifier};
pub use minhash::{estimate_jaccard, exact_jaccard, shingle, signature, MinHashSignature, ShingleSet};
pub use mixture::{sample_mixture, MixtureSpec};
pub use records::{read_records, Record};
