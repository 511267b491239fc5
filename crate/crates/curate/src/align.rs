//! Image-text / markdown alignment filter.

use std::collections::HashMap;

const MARKUP: [char; 8] = ['#', '*', '|', '`', '[', ']', '(', ')'];

/// Removes the markdown markup characters the filter ignores.
pub fn strip_markup(md: &str) -> String {
    md.chars().filter(|c| !MARKUP.contains(c)).collect()
}

fn counts(text: &str) -> HashMap<&str, usize> {
    let mut m = HashMap::new();
    for w in text.split_whitespace() {
        *m.entry(w).or_insert(0) += 1;
    }
    m
}

/// Multiset intersection over union of whitespace tokens, with markup stripped
/// from the markdown side only. Two empty texts score 1.
pub fn alignment_ratio(image_text: &str, markdown_text: &str) -> f64 {
    let md = strip_markup(markdown_text);
    let a = counts(image_text);
    let b = counts(&md);
    let mut inter = 0usize;
    let mut union = 0usize;
    for (w, &x) in &a {
        let y = b.get(w).copied().unwrap_or(0);
        inter += x.min(y);
        union += x.max(y);
    }
    union += b.iter().filter(|(w, _)| !a.contains_key(*w)).map(|(_, &y)| y).sum::<usize>();
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("min ratio {0} is outside [0, 1]")]
pub struct RatioOutOfRange(pub f64);

/// Keeps pairs whose ratio is strictly greater than `min_ratio`. Returns the
/// kept indices and every pair's ratio.
pub fn filter_aligned<S: AsRef<str>>(pairs: &[(S, S)], min_ratio: f64) -> Result<(Vec<usize>, Vec<f64>), RatioOutOfRange> {
    if !(0.0..=1.0).contains(&min_ratio) {
        return Err(RatioOutOfRange(min_ratio));
    }
    let ratios: Vec<f64> = pairs
        .iter()
        .map(|(img, md)| alignment_ratio(img.as_ref(), md.as_ref()))
        .collect();
    let kept = ratios
        .iter()
        .enumerate()
        .filter(|(_, &r)| r > min_ratio)
        .map(|(i, _)| i)
        .collect();
    Ok((kept, ratios))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_examples() {
        assert_eq!(alignment_ratio("a b c", "a b c"), 1.0);
        assert_eq!(alignment_ratio("a b", "c d"), 0.0);
        assert_eq!(alignment_ratio("a b c d", "a b c e"), 0.6);
        assert_eq!(alignment_ratio("a a b", "a b"), 2.0 / 3.0);
        assert_eq!(alignment_ratio("", ""), 1.0);
    }

    #[test]
    fn markup_is_ignored_on_the_markdown_side() {
        assert_eq!(alignment_ratio("Title some bold text", "# Title\n\nsome **bold** text"), 1.0);
        assert_eq!(alignment_ratio("a b", "| a | b |"), 1.0);
        assert_eq!(alignment_ratio("link", "[link] (x)"), 0.5);
        // The image side is not stripped.
        assert_eq!(alignment_ratio("**a**", "a"), 0.0);
    }

    #[test]
    fn strict_boundary() {
        let common: Vec<String> = (0..19).map(|i| format!("t{i}")).collect();
        let img = format!("{} extra", common.join(" "));
        let md = common.join(" ");
        assert_eq!(alignment_ratio(&img, &md), 0.95);
        let (kept, _) = filter_aligned(&[(img.as_str(), md.as_str())], 0.95).unwrap();
        assert!(kept.is_empty());
        let (kept, _) = filter_aligned(&[("x", "x")], 0.95).unwrap();
        assert_eq!(kept, vec![0]);
        assert!(filter_aligned::<&str>(&[], 1.01).is_err());
        assert!(filter_aligned::<&str>(&[], -0.1).is_err());
    }
}
