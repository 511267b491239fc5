//! Language identification for the corpus filter.
//!
//! The filter only needs "is this English, and how sure are we", so the
//! classifier sits behind a trait. The bundled default is a character-trigram
//! naive-Bayes model trained on short embedded samples.

use std::collections::{HashMap, HashSet};

pub const ENGLISH: &str = "en";
pub const DEFAULT_THRESHOLD: f64 = 0.5;

pub trait LanguageClassifier: Sync {
    /// Most likely language code and a confidence in `[0, 1]`.
    fn score(&self, text: &str) -> (String, f64);
}

const SAMPLES: [(&str, &str); 11] = [
    ("en", include_str!("samples/en.txt")),
    ("fr", include_str!("samples/fr.txt")),
    ("de", include_str!("samples/de.txt")),
    ("es", include_str!("samples/es.txt")),
    ("it", include_str!("samples/it.txt")),
    ("pt", include_str!("samples/pt.txt")),
    ("nl", include_str!("samples/nl.txt")),
    ("ru", include_str!("samples/ru.txt")),
    ("el", include_str!("samples/el.txt")),
    ("zh", include_str!("samples/zh.txt")),
    ("ar", include_str!("samples/ar.txt")),
];

/// Letter trigrams of every word, each word padded with one space on both sides.
pub fn trigrams(text: &str) -> Vec<String> {
    let cleaned: String = text
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphabetic() { c } else { ' ' })
        .collect();
    let mut out = Vec::new();
    for word in cleaned.split_whitespace() {
        let padded: Vec<char> = std::iter::once(' ')
            .chain(word.chars())
            .chain(std::iter::once(' '))
            .collect();
        out.extend(padded.windows(3).map(|w| w.iter().collect::<String>()));
    }
    out
}

struct Profile {
    lang: String,
    counts: HashMap<String, u32>,
    total: u32,
}

/// Multinomial naive Bayes over character trigrams with add-one smoothing and a
/// uniform prior.
///
/// Trigrams that no profile has seen carry no evidence and are skipped. The
/// confidence is the posterior of the winning language times the share of the
/// text's trigrams that were known, so text the model cannot read scores low
/// instead of being forced into some language.
pub struct TrigramClassifier {
    profiles: Vec<Profile>,
    vocab: HashSet<String>,
}

impl Default for TrigramClassifier {
    fn default() -> Self {
        Self::from_samples(SAMPLES.iter().map(|(l, t)| (*l, *t)))
    }
}

impl TrigramClassifier {
    pub fn from_samples<'a>(samples: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut profiles = Vec::new();
        let mut vocab = HashSet::new();
        for (lang, text) in samples {
            let mut counts: HashMap<String, u32> = HashMap::new();
            let mut total = 0;
            for t in trigrams(text) {
                vocab.insert(t.clone());
                *counts.entry(t).or_insert(0) += 1;
                total += 1;
            }
            profiles.push(Profile {
                lang: lang.to_owned(),
                counts,
                total,
            });
        }
        TrigramClassifier { profiles, vocab }
    }

    pub fn languages(&self) -> impl Iterator<Item = &str> {
        self.profiles.iter().map(|p| p.lang.as_str())
    }
}

impl LanguageClassifier for TrigramClassifier {
    fn score(&self, text: &str) -> (String, f64) {
        let grams = trigrams(text);
        let known: Vec<&String> = grams.iter().filter(|g| self.vocab.contains(*g)).collect();
        if known.is_empty() || self.profiles.is_empty() {
            return ("und".to_owned(), 0.0);
        }
        let v = self.vocab.len() as f64;
        let loglik: Vec<f64> = self
            .profiles
            .iter()
            .map(|p| {
                let denom = (f64::from(p.total) + v).ln();
                known
                    .iter()
                    .map(|g| (f64::from(p.counts.get(*g).copied().unwrap_or(0)) + 1.0).ln() - denom)
                    .sum()
            })
            .collect();
        let (best, &top) = loglik
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("at least one profile");
        let z: f64 = loglik.iter().map(|l| (l - top).exp()).sum();
        let posterior = 1.0 / z;
        let coverage = known.len() as f64 / grams.len() as f64;
        (self.profiles[best].lang.clone(), posterior * coverage)
    }
}

/// Keep a record iff it is English with confidence at least `threshold`.
pub fn language_keep(text: &str, classifier: &dyn LanguageClassifier, threshold: f64) -> bool {
    let (lang, conf) = classifier.score(text);
    lang == ENGLISH && conf >= threshold
}

#[cfg(test)]
mod tests {
    use super::*;

    const CALENDAR: &str = "This is the 2023-24 school year calendar for all 3K-12 NYCDOE public schools. \
        If your child attends a private, parochial, charter school, NYC Early Education Center (NYCEEC) \
        or Family Childcare Program, please contact your child's school for information about their calendar.";

    #[test]
    fn trigram_extraction() {
        assert_eq!(trigrams("Ab, c"), vec![" ab", "ab ", " c "]);
        assert!(trigrams("  12 !! ").is_empty());
    }

    #[test]
    fn english_paragraph_is_kept() {
        let c = TrigramClassifier::default();
        let (lang, conf) = c.score(CALENDAR);
        assert_eq!(lang, "en");
        assert!(conf > 0.8, "{conf}");
        assert!(language_keep(CALENDAR, &c, DEFAULT_THRESHOLD));
    }

    #[test]
    fn other_languages_are_dropped() {
        let c = TrigramClassifier::default();
        for (text, want) in [
            ("Le calendrier scolaire indique les jours de fermeture des écoles publiques de la ville.", "fr"),
            ("Der Schulkalender zeigt, an welchen Tagen die öffentlichen Schulen geschlossen sind.", "de"),
            ("Школьный календарь показывает дни, когда государственные школы закрыты.", "ru"),
        ] {
            let (lang, _) = c.score(text);
            assert_eq!(lang, want, "{text}");
            assert!(!language_keep(text, &c, DEFAULT_THRESHOLD));
        }
        assert!(!language_keep("学校日历显示公立学校关闭的日期。", &c, DEFAULT_THRESHOLD));
    }

    #[test]
    fn empty_and_symbol_only_text() {
        let c = TrigramClassifier::default();
        assert_eq!(c.score(""), ("und".to_owned(), 0.0));
        assert_eq!(c.score("123 456 !!"), ("und".to_owned(), 0.0));
        assert!(!language_keep("", &c, DEFAULT_THRESHOLD));
    }

    #[test]
    fn pluggable() {
        struct Always(&'static str, f64);
        impl LanguageClassifier for Always {
            fn score(&self, _: &str) -> (String, f64) {
                (self.0.to_owned(), self.1)
            }
        }
        assert!(language_keep("x", &Always("en", 0.5), 0.5));
        assert!(!language_keep("x", &Always("en", 0.49), 0.5));
        assert!(!language_keep("x", &Always("fr", 1.0), 0.5));
    }
}
