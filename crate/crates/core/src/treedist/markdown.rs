//! A fixed markdown subset parsed into [`DocTree`]s.
//!
//! Blocks: ATX headings, `-`/`*`/`+` and `1.`/`1)` lists (nested by indentation,
//! loose lists wrap item content in `p`), pipe tables with a `---` separator row,
//! fenced code, horizontal rules, and paragraphs separated by blank lines.
//!
//! Inlines: code spans, `**strong**`/`__strong__`, `*em*`/`_em_`, links
//! `[text](url)`, `<sup>`/`<sub>` and `<br>` tags, and backslash escapes.
//! Anything else is text. Text leaves hold whitespace-collapsed, trimmed content.

use super::{DocTree, Label, Tag};
use crate::types::MarkdownDocument;

/// Deepest node depth (root = 0) the parser will build; deeper structure is
/// flattened into text.
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseOutput {
    pub tree: DocTree,
    pub diagnostics: Vec<String>,
}

pub fn parse_markdown(doc: &MarkdownDocument) -> DocTree {
    parse_markdown_str(doc.source()).tree
}

pub fn parse_markdown_str(src: &str) -> ParseOutput {
    let lines: Vec<String> = src
        .split('\n')
        .map(|l| expand_tabs(l.strip_suffix('\r').unwrap_or(l)))
        .collect();
    let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
    let mut p = Parser {
        diagnostics: Vec::new(),
    };
    let children = p.blocks(&refs, 0);
    ParseOutput {
        tree: DocTree::tag(Tag::Root, children),
        diagnostics: p.diagnostics,
    }
}

fn expand_tabs(line: &str) -> String {
    if !line.contains('\t') {
        return line.to_owned();
    }
    let mut out = String::with_capacity(line.len() + 8);
    let mut col = 0;
    for c in line.chars() {
        if c == '\t' {
            let n = 4 - col % 4;
            out.extend(std::iter::repeat_n(' ', n));
            col += n;
        } else {
            out.push(c);
            col += 1;
        }
    }
    out
}

fn indent_of(line: &str) -> usize {
    line.len() - line.trim_start_matches(' ').len()
}

fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

/// Collapses runs of whitespace to one space and trims.
fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn heading(line: &str) -> Option<(usize, &str)> {
    if indent_of(line) > 3 {
        return None;
    }
    let t = line.trim_start();
    let level = t.bytes().take_while(|&b| b == b'#').count();
    if !(1..=6).contains(&level) {
        return None;
    }
    let rest = &t[level..];
    if !rest.is_empty() && !rest.starts_with(' ') {
        return None;
    }
    let mut content = rest.trim();
    // Optional closing sequence: spaces then #s.
    let stripped = content.trim_end_matches('#');
    if stripped.is_empty() {
        content = "";
    } else if stripped.ends_with(' ') {
        content = stripped.trim_end();
    }
    Some((level, content))
}

fn fence(line: &str) -> Option<usize> {
    if indent_of(line) > 3 {
        return None;
    }
    let n = line.trim_start().bytes().take_while(|&b| b == b'`').count();
    (n >= 3).then_some(n)
}

fn is_rule(line: &str) -> bool {
    if indent_of(line) > 3 {
        return false;
    }
    let t: Vec<char> = line.chars().filter(|c| !c.is_whitespace()).collect();
    t.len() >= 3 && matches!(t[0], '-' | '*' | '_') && t.iter().all(|&c| c == t[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ListKind {
    Bullet(char),
    Ordered(char),
}

#[derive(Clone, Copy)]
struct Marker {
    kind: ListKind,
    /// Column where item content starts.
    content: usize,
}

fn list_marker(line: &str) -> Option<Marker> {
    let indent = indent_of(line);
    let t = &line[indent..];
    let (kind, marker_len) = match t.chars().next()? {
        c @ ('-' | '*' | '+') => (ListKind::Bullet(c), 1),
        '0'..='9' => {
            let digits = t.bytes().take_while(u8::is_ascii_digit).count();
            if digits > 9 {
                return None;
            }
            match t.as_bytes().get(digits) {
                Some(&d @ (b'.' | b')')) => (ListKind::Ordered(d as char), digits + 1),
                _ => return None,
            }
        }
        _ => return None,
    };
    let after = &t[marker_len..];
    if after.is_empty() {
        return Some(Marker {
            kind,
            content: indent + marker_len + 1,
        });
    }
    if !after.starts_with(' ') {
        return None;
    }
    let spaces = indent_of(after);
    let pad = if spaces > 4 || spaces == after.len() { 1 } else { spaces };
    Some(Marker {
        kind,
        content: indent + marker_len + pad,
    })
}

fn split_cells(line: &str) -> Vec<String> {
    let t = line.trim();
    let t = t.strip_prefix('|').unwrap_or(t);
    let t = if t.ends_with('|') && !t.ends_with("\\|") {
        &t[..t.len() - 1]
    } else {
        t
    };
    let mut cells = Vec::new();
    let mut cur = String::new();
    let mut chars = t.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' if chars.peek() == Some(&'|') => {
                cur.push('|');
                chars.next();
            }
            '|' => cells.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    cells.push(cur);
    cells
}

fn is_separator_row(line: &str) -> bool {
    if !line.contains('-') {
        return false;
    }
    let cells = split_cells(line);
    !cells.is_empty()
        && cells.iter().all(|c| {
            let c = c.trim();
            let c = c.strip_prefix(':').unwrap_or(c);
            let c = c.strip_suffix(':').unwrap_or(c);
            !c.is_empty() && c.bytes().all(|b| b == b'-')
        })
}

fn table_start(lines: &[&str], i: usize) -> bool {
    lines[i].contains('|')
        && indent_of(lines[i]) <= 3
        && lines.get(i + 1).is_some_and(|next| next.contains('|') && is_separator_row(next))
}

struct Parser {
    diagnostics: Vec<String>,
}

impl Parser {
    /// Parses block content whose container sits at `depth`.
    fn blocks(&mut self, lines: &[&str], depth: usize) -> Vec<DocTree> {
        let nested_ok = depth + 4 <= MAX_DEPTH;
        let mut out = Vec::new();
        let mut i = 0;
        while i < lines.len() {
            let line = lines[i];
            if is_blank(line) {
                i += 1;
                continue;
            }
            if let Some(n) = fence(line) {
                let mut body = Vec::new();
                i += 1;
                while i < lines.len() {
                    if fence(lines[i]).is_some_and(|m| m >= n) && lines[i].trim().bytes().all(|b| b == b'`') {
                        i += 1;
                        break;
                    }
                    body.push(lines[i]);
                    i += 1;
                }
                let text = collapse(&body.join("\n"));
                if nested_ok {
                    let code = if text.is_empty() {
                        DocTree::tag(Tag::Code, vec![])
                    } else {
                        DocTree::tag(Tag::Code, vec![DocTree::text(text)])
                    };
                    out.push(DocTree::tag(Tag::Pre, vec![code]));
                } else {
                    self.flatten_note(depth);
                    out.push(self.flat_paragraph(&text));
                }
                continue;
            }
            if let Some((level, content)) = heading(line) {
                let children = self.inlines(content, depth + 2);
                out.push(DocTree::tag(Tag::heading(level), children));
                i += 1;
                continue;
            }
            if is_rule(line) {
                out.push(DocTree::tag(Tag::Hr, vec![]));
                i += 1;
                continue;
            }
            if table_start(lines, i) {
                let start = i;
                i += 2;
                while i < lines.len() && !is_blank(lines[i]) && lines[i].contains('|') {
                    i += 1;
                }
                if nested_ok {
                    out.push(self.table(lines[start], &lines[start + 2..i], depth + 1));
                } else {
                    self.flatten_note(depth);
                    let mut rows = vec![lines[start]];
                    rows.extend_from_slice(&lines[start + 2..i]);
                    out.push(self.flat_paragraph(&rows.join(" ")));
                }
                continue;
            }
            if let Some(marker) = list_marker(line) {
                let (node, next) = self.list(lines, i, marker, depth);
                out.push(node);
                i = next;
                continue;
            }
            // Paragraph: runs until a blank line or the start of another block.
            let start = i;
            i += 1;
            while i < lines.len() {
                let l = lines[i];
                if is_blank(l)
                    || fence(l).is_some()
                    || heading(l).is_some()
                    || is_rule(l)
                    || table_start(lines, i)
                    || list_marker(l).is_some()
                {
                    break;
                }
                i += 1;
            }
            let text: Vec<&str> = lines[start..i].iter().map(|l| l.trim()).collect();
            let children = self.inlines(&text.join(" "), depth + 2);
            out.push(DocTree::tag(Tag::P, children));
        }
        out
    }

    fn flatten_note(&mut self, depth: usize) {
        self.diagnostics.push(format!(
            "nesting at depth {depth} exceeds the {MAX_DEPTH}-level limit; flattened to text"
        ));
    }

    fn flat_paragraph(&mut self, text: &str) -> DocTree {
        let text = collapse(text);
        if text.is_empty() {
            DocTree::tag(Tag::P, vec![])
        } else {
            DocTree::tag(Tag::P, vec![DocTree::text(text)])
        }
    }

    fn table(&mut self, header: &str, body: &[&str], depth: usize) -> DocTree {
        let mut rows = Vec::with_capacity(body.len() + 1);
        let row = |p: &mut Parser, line: &str, cell: Tag| {
            let cells = split_cells(line)
                .iter()
                .map(|c| DocTree::tag(cell, p.inlines(c, depth + 3)))
                .collect();
            DocTree::tag(Tag::Tr, cells)
        };
        rows.push(row(self, header, Tag::Th));
        for line in body {
            rows.push(row(self, line, Tag::Td));
        }
        DocTree::tag(Tag::Table, rows)
    }

    /// Parses the list starting at `lines[start]`; returns it and the index after it.
    fn list(&mut self, lines: &[&str], start: usize, first: Marker, depth: usize) -> (DocTree, usize) {
        let base = indent_of(lines[start]);
        let mut items: Vec<Vec<String>> = Vec::new();
        let mut loose = false;
        let mut i = start;
        let mut marker = first;
        loop {
            // One item: first line after the marker, then continuation lines.
            let content_col = marker.content;
            let first_line = lines[i];
            let mut item = vec![first_line.get(content_col..).unwrap_or("").to_owned()];
            i += 1;
            let mut pending_blank = 0;
            let mut last_blank = false;
            while i < lines.len() {
                let l = lines[i];
                if is_blank(l) {
                    pending_blank += 1;
                    last_blank = true;
                    i += 1;
                    continue;
                }
                let ind = indent_of(l);
                if ind >= content_col {
                    if pending_blank > 0 {
                        loose |= !item.iter().all(|s| is_blank(s));
                        item.extend(std::iter::repeat_n(String::new(), pending_blank));
                        pending_blank = 0;
                    }
                    item.push(l[content_col..].to_owned());
                    last_blank = false;
                    i += 1;
                    continue;
                }
                if !last_blank
                    && list_marker(l).is_none()
                    && heading(l).is_none()
                    && fence(l).is_none()
                    && !is_rule(l)
                    && !table_start(lines, i)
                {
                    // Lazy paragraph continuation.
                    item.push(l.trim().to_owned());
                    i += 1;
                    continue;
                }
                break;
            }
            items.push(item);
            let next = lines.get(i).and_then(|l| {
                let m = list_marker(l)?;
                (indent_of(l) == base && same_kind(m.kind, first.kind)
                    && !is_rule(l))
                .then_some(m)
            });
            match next {
                Some(m) => {
                    if pending_blank > 0 {
                        loose = true;
                    }
                    marker = m;
                }
                None => break,
            }
        }

        let tag = match first.kind {
            ListKind::Bullet(_) => Tag::Ul,
            ListKind::Ordered(_) => Tag::Ol,
        };
        if depth + 4 > MAX_DEPTH {
            self.flatten_note(depth);
            let text: Vec<String> = items.iter().flatten().cloned().collect();
            return (self.flat_paragraph(&text.join(" ")), i);
        }
        let mut children = Vec::with_capacity(items.len());
        for item in &items {
            let refs: Vec<&str> = item.iter().map(String::as_str).collect();
            let mut content = self.blocks(&refs, depth + 2);
            if !loose {
                content = content
                    .into_iter()
                    .flat_map(|b| match b.label {
                        Label::Tag(Tag::P) => b.children,
                        _ => vec![b],
                    })
                    .collect();
            }
            children.push(DocTree::tag(Tag::Li, content));
        }
        (DocTree::tag(tag, children), i)
    }

    /// Inline content; the returned nodes sit at `depth`.
    fn inlines(&mut self, src: &str, depth: usize) -> Vec<DocTree> {
        let chars: Vec<char> = src.chars().collect();
        let mut out = Vec::new();
        let mut buf = String::new();
        self.inline_run(&chars, depth, &mut out, &mut buf);
        flush(&mut out, &mut buf);
        out
    }

    fn inline_run(&mut self, s: &[char], depth: usize, out: &mut Vec<DocTree>, buf: &mut String) {
        let can_nest = depth < MAX_DEPTH;
        let mut i = 0;
        while i < s.len() {
            let c = s[i];
            if c == '\\' && s.get(i + 1).is_some_and(|n| n.is_ascii_punctuation()) {
                buf.push(s[i + 1]);
                i += 2;
                continue;
            }
            if c == '`' {
                let run = count_run(s, i, '`');
                if let Some(close) = find_backtick_close(s, i + run, run) {
                    let text = collapse(&s[i + run..close].iter().collect::<String>());
                    flush(out, buf);
                    let kids = if text.is_empty() { vec![] } else { vec![DocTree::text(text)] };
                    if can_nest {
                        out.push(DocTree::tag(Tag::Code, kids));
                    } else {
                        self.flatten_note(depth);
                        buf.extend(&s[i + run..close]);
                    }
                    i = close + run;
                    continue;
                }
                buf.extend(std::iter::repeat_n('`', run));
                i += run;
                continue;
            }
            if c == '*' || c == '_' {
                let run = count_run(s, i, c);
                if let Some((tag, width, close)) = emphasis(s, i, c, run) {
                    flush(out, buf);
                    let inner = &s[i + width..close];
                    self.container(tag, inner, depth, out, buf);
                    i = close + width;
                    continue;
                }
                buf.extend(std::iter::repeat_n(c, run));
                i += run;
                continue;
            }
            if c == '[' {
                if let Some((text_end, url_end)) = link(s, i) {
                    flush(out, buf);
                    self.container(Tag::A, &s[i + 1..text_end], depth, out, buf);
                    i = url_end + 1;
                    continue;
                }
            }
            if c == '<' {
                if let Some(len) = br_tag(s, i) {
                    flush(out, buf);
                    out.push(DocTree::tag(Tag::Br, vec![]));
                    i += len;
                    continue;
                }
                if let Some((tag, open_len, close_at, close_len)) = sup_sub(s, i) {
                    flush(out, buf);
                    self.container(tag, &s[i + open_len..close_at], depth, out, buf);
                    i = close_at + close_len;
                    continue;
                }
            }
            buf.push(c);
            i += 1;
        }
    }

    fn container(&mut self, tag: Tag, inner: &[char], depth: usize, out: &mut Vec<DocTree>, buf: &mut String) {
        if depth < MAX_DEPTH {
            let mut kids = Vec::new();
            let mut kbuf = String::new();
            self.inline_run(inner, depth + 1, &mut kids, &mut kbuf);
            flush(&mut kids, &mut kbuf);
            out.push(DocTree::tag(tag, kids));
        } else {
            self.flatten_note(depth);
            buf.extend(inner);
        }
    }
}

fn same_kind(a: ListKind, b: ListKind) -> bool {
    a == b
}

fn flush(out: &mut Vec<DocTree>, buf: &mut String) {
    let text = collapse(buf);
    buf.clear();
    if !text.is_empty() {
        out.push(DocTree::text(text));
    }
}

fn count_run(s: &[char], i: usize, c: char) -> usize {
    s[i..].iter().take_while(|&&x| x == c).count()
}

fn find_backtick_close(s: &[char], from: usize, run: usize) -> Option<usize> {
    let mut j = from;
    while j < s.len() {
        if s[j] == '`' {
            let r = count_run(s, j, '`');
            if r == run {
                return Some(j);
            }
            j += r;
        } else {
            j += 1;
        }
    }
    None
}

/// Finds the closing delimiter for emphasis opened at `i`. Returns the tag, the
/// delimiter width used, and the index of the closing delimiter.
fn emphasis(s: &[char], i: usize, c: char, run: usize) -> Option<(Tag, usize, usize)> {
    let after = *s.get(i + run)?;
    if after.is_whitespace() {
        return None;
    }
    if c == '_' && i > 0 && s[i - 1].is_alphanumeric() {
        return None;
    }
    let (tag, width) = if run >= 2 { (Tag::Strong, 2) } else { (Tag::Em, 1) };
    let mut j = i + width;
    while j < s.len() {
        match s[j] {
            '\\' => j += 2,
            '`' => {
                let r = count_run(s, j, '`');
                j = find_backtick_close(s, j + r, r).map_or(j + r, |e| e + r);
            }
            x if x == c => {
                let r = count_run(s, j, c);
                let before = s[j - 1];
                let next = s.get(j + r).copied();
                let closes = !before.is_whitespace()
                    && j > i + width
                    && (c != '_' || !next.is_some_and(char::is_alphanumeric));
                if closes && r >= width && (width == 2 || r == 1 || r >= 3) {
                    return Some((tag, width, j + r - width));
                }
                j += r;
            }
            _ => j += 1,
        }
    }
    None
}

/// `[text](url)` starting at `i`; returns the index of `]` and of `)`.
fn link(s: &[char], i: usize) -> Option<(usize, usize)> {
    let mut depth = 0usize;
    let mut j = i;
    let text_end = loop {
        match s.get(j)? {
            '\\' => j += 1,
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth == 0 {
                    break j;
                }
            }
            _ => {}
        }
        j += 1;
    };
    if s.get(text_end + 1) != Some(&'(') {
        return None;
    }
    let mut parens = 0usize;
    let mut k = text_end + 1;
    loop {
        match s.get(k)? {
            '(' => parens += 1,
            ')' => {
                parens -= 1;
                if parens == 0 {
                    return Some((text_end, k));
                }
            }
            '\n' => return None,
            _ => {}
        }
        k += 1;
    }
}

fn starts_with_ci(s: &[char], i: usize, pat: &str) -> bool {
    let mut k = i;
    for p in pat.chars() {
        match s.get(k) {
            Some(c) if c.to_ascii_lowercase() == p => k += 1,
            _ => return false,
        }
    }
    true
}

fn br_tag(s: &[char], i: usize) -> Option<usize> {
    ["<br>", "<br/>", "<br />"]
        .into_iter()
        .find(|p| starts_with_ci(s, i, p))
        .map(|p| p.chars().count())
}

/// `<sup>…</sup>` or `<sub>…</sub>` at `i`, honoring nesting of the same tag.
fn sup_sub(s: &[char], i: usize) -> Option<(Tag, usize, usize, usize)> {
    let (tag, open, close) = if starts_with_ci(s, i, "<sup>") {
        (Tag::Sup, "<sup>", "</sup>")
    } else if starts_with_ci(s, i, "<sub>") {
        (Tag::Sub, "<sub>", "</sub>")
    } else {
        return None;
    };
    let mut nest = 0usize;
    let mut j = i;
    while j < s.len() {
        if starts_with_ci(s, j, open) {
            nest += 1;
            j += open.len();
        } else if starts_with_ci(s, j, close) {
            nest -= 1;
            if nest == 0 {
                return Some((tag, open.len(), j, close.len()));
            }
            j += close.len();
        } else {
            j += 1;
        }
    }
    None
}
