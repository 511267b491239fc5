//! Markdown structure trees and the normalized tree edit distance (NTED).

mod markdown;
mod zss;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use markdown::{parse_markdown, parse_markdown_str, ParseOutput, MAX_DEPTH};
pub use zss::{zss_distance, TreeTooLarge, MAX_NODES};

use crate::textdist::{mean, EmptyCorpus};

/// Structural tag of a tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Root,
    H1,
    H2,
    H3,
    H4,
    H5,
    H6,
    P,
    Ul,
    Ol,
    Li,
    Table,
    Tr,
    Th,
    Td,
    Strong,
    Em,
    Code,
    Pre,
    Sup,
    Sub,
    A,
    Br,
    Hr,
}

impl Tag {
    const ALL: [Tag; 24] = [
        Tag::Root,
        Tag::H1,
        Tag::H2,
        Tag::H3,
        Tag::H4,
        Tag::H5,
        Tag::H6,
        Tag::P,
        Tag::Ul,
        Tag::Ol,
        Tag::Li,
        Tag::Table,
        Tag::Tr,
        Tag::Th,
        Tag::Td,
        Tag::Strong,
        Tag::Em,
        Tag::Code,
        Tag::Pre,
        Tag::Sup,
        Tag::Sub,
        Tag::A,
        Tag::Br,
        Tag::Hr,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::Root => "root",
            Tag::H1 => "h1",
            Tag::H2 => "h2",
            Tag::H3 => "h3",
            Tag::H4 => "h4",
            Tag::H5 => "h5",
            Tag::H6 => "h6",
            Tag::P => "p",
            Tag::Ul => "ul",
            Tag::Ol => "ol",
            Tag::Li => "li",
            Tag::Table => "table",
            Tag::Tr => "tr",
            Tag::Th => "th",
            Tag::Td => "td",
            Tag::Strong => "strong",
            Tag::Em => "em",
            Tag::Code => "code",
            Tag::Pre => "pre",
            Tag::Sup => "sup",
            Tag::Sub => "sub",
            Tag::A => "a",
            Tag::Br => "br",
            Tag::Hr => "hr",
        }
    }

    pub fn heading(level: usize) -> Tag {
        [Tag::H1, Tag::H2, Tag::H3, Tag::H4, Tag::H5, Tag::H6][level.clamp(1, 6) - 1]
    }
}

/// Node label: a tag, or the text content of a leaf (`text:<content>`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Tag(Tag),
    Text(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Tag(t) => f.write_str(t.as_str()),
            Label::Text(s) => write!(f, "text:{s}"),
        }
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(text) = s.strip_prefix("text:") {
            return Ok(Label::Text(text.to_owned()));
        }
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .map(Label::Tag)
            .ok_or_else(|| format!("unknown node label {s:?}"))
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A labeled, ordered tree. Trees produced by [`parse_markdown`] are rooted at a
/// `root` node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DocTree {
    pub label: Label,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<DocTree>,
}

impl DocTree {
    pub fn new(label: Label, children: Vec<DocTree>) -> Self {
        DocTree { label, children }
    }

    pub fn tag(tag: Tag, children: Vec<DocTree>) -> Self {
        DocTree::new(Label::Tag(tag), children)
    }

    pub fn text(s: impl Into<String>) -> Self {
        DocTree::new(Label::Text(s.into()), Vec::new())
    }

    pub fn leaf(label: Label) -> Self {
        DocTree::new(label, Vec::new())
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            n += 1;
            stack.extend(t.children.iter());
        }
        n
    }

    pub fn depth(&self) -> usize {
        let mut max = 0;
        let mut stack = vec![(self, 0usize)];
        while let Some((t, d)) = stack.pop() {
            max = max.max(d);
            stack.extend(t.children.iter().map(|c| (c, d + 1)));
        }
        max
    }

    /// Nodes in preorder with their depth.
    pub fn preorder(&self) -> Vec<(&DocTree, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![(self, 0usize)];
        while let Some((t, d)) = stack.pop() {
            out.push((t, d));
            stack.extend(t.children.iter().rev().map(|c| (c, d + 1)));
        }
        out
    }

    /// Count of nodes whose label is the given tag.
    pub fn count_tag(&self, tag: Tag) -> usize {
        self.preorder()
            .iter()
            .filter(|(t, _)| t.label == Label::Tag(tag))
            .count()
    }

    /// One node per line, indented two spaces per level.
    pub fn to_indented(&self) -> String {
        let mut out = String::new();
        for (t, d) in self.preorder() {
            for _ in 0..d {
                out.push_str("  ");
            }
            out.push_str(&t.label.to_string());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trees always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Unit-style edit costs. Relabeling costs `relabel` only when labels differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EditCosts {
    pub insert: u32,
    pub delete: u32,
    pub relabel: u32,
}

impl Default for EditCosts {
    fn default() -> Self {
        EditCosts {
            insert: 1,
            delete: 1,
            relabel: 1,
        }
    }
}

/// `1 - TD / max(nodes)` under unit costs, floored at 0.
///
/// The floor matters only for pairs whose shapes admit no large mapping, such
/// as a long chain against a wide star, where TD can exceed the larger size.
pub fn nted_pair(pred: &DocTree, gt: &DocTree) -> Result<f64, TreeTooLarge> {
    let td = zss_distance(pred, gt, &EditCosts::default())?;
    let nodes = pred.node_count().max(gt.node_count());
    Ok((1.0 - td as f64 / nodes as f64).max(0.0))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error(transparent)]
    Empty(#[from] EmptyCorpus),
    #[error(transparent)]
    TooLarge(#[from] TreeTooLarge),
}

/// Mean of per-pair [`nted_pair`] values.
pub fn corpus_nted<'a>(
    pairs: impl IntoIterator<Item = (&'a DocTree, &'a DocTree)>,
) -> Result<f64, CorpusError> {
    let scores = pairs
        .into_iter()
        .map(|(p, g)| nted_pair(p, g))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(mean(scores)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_strings_round_trip() {
        for t in Tag::ALL {
            let l = Label::Tag(t);
            assert_eq!(l.to_string().parse::<Label>().unwrap(), l);
        }
        let l = Label::Text("a: b".into());
        assert_eq!(l.to_string(), "text:a: b");
        assert_eq!(l.to_string().parse::<Label>().unwrap(), l);
        assert!("div".parse::<Label>().is_err());
    }

    #[test]
    fn json_and_indented_export() {
        let t = DocTree::tag(
            Tag::Root,
            vec![DocTree::tag(Tag::H1, vec![DocTree::text("Title")])],
        );
        let j = t.to_json();
        assert_eq!(
            j,
            r#"{"label":"root","children":[{"label":"h1","children":[{"label":"text:Title"}]}]}"#
        );
        assert_eq!(DocTree::from_json(&j).unwrap(), t);
        assert_eq!(t.to_indented(), "root\n  h1\n    text:Title\n");
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.depth(), 2);
    }

    #[test]
    fn nted_examples() {
        let a = DocTree::leaf(Label::Text("a".into()));
        let b = DocTree::leaf(Label::Text("b".into()));
        assert_eq!(nted_pair(&a, &a).unwrap(), 1.0);
        assert_eq!(nted_pair(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn nted_is_floored_at_zero() {
        // root/li/li/li/li chain vs root with four li leaves: at most two nodes
        // can be mapped, so TD = 6 > 5 nodes.
        let mut chain = DocTree::tag(Tag::Li, vec![]);
        for _ in 0..3 {
            chain = DocTree::tag(Tag::Li, vec![chain]);
        }
        let chain = DocTree::tag(Tag::Root, vec![chain]);
        let star = DocTree::tag(Tag::Root, vec![DocTree::tag(Tag::Li, vec![]); 4]);
        assert_eq!(zss_distance(&chain, &star, &EditCosts::default()).unwrap(), 6);
        assert_eq!(nted_pair(&chain, &star).unwrap(), 0.0);
    }

    #[test]
    fn corpus_mean() {
        let a = DocTree::text("a");
        let b = DocTree::text("b");
        assert_eq!(corpus_nted([(&a, &a), (&a, &b)]).unwrap(), 0.5);
        assert_eq!(corpus_nted([(&a, &b), (&a, &a)]).unwrap(), 0.5);
        assert_eq!(corpus_nted([(&a, &a); 3]).unwrap(), 1.0);
        assert!(matches!(corpus_nted([]), Err(CorpusError::Empty(_))));
    }
}
