//! Report rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use docdup_core::Document;

use crate::error::DocdupError;
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
    Html,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "txt",
            Format::Html => "html",
        }
    }
}

impl FromStr for Format {
    type Err = DocdupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            "html" => Ok(Format::Html),
            other => Err(DocdupError::UnknownFormat(other.to_owned())),
        }
    }
}

/// Render a report. HTML needs the source document to show the text around
/// the highlighted occurrences.
pub fn emit(report: &Report, format: Format, doc: &Document) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serializes");
            out.push(b'\n');
            out
        }
        Format::Text => text(report).into_bytes(),
        Format::Html => html(report, doc).into_bytes(),
    }
}

fn text(report: &Report) -> String {
    let info = &report.docdup_report_v1;
    let cfg = &report.config;
    let mut out = String::new();
    let _ = writeln!(out, "document: {} ({} symbols, {} tokens)", info.document, info.symbols, info.tokens);
    let _ = writeln!(
        out,
        "config: min-tokens {}, min-group {}, threshold {}, strip-markup {}",
        cfg.min_tokens, cfg.min_group, cfg.threshold, cfg.strip_markup
    );
    let near = report.groups.iter().filter(|g| g.extension_points > 0).count();
    let _ = writeln!(
        out,
        "groups: {} ({} exact, {} near-duplicate; {} exact groups before merging)",
        report.groups.len(),
        report.groups.len() - near,
        near,
        info.exact_groups_detected
    );
    let _ = writeln!(out, "coverage: {}", report.coverage);
    if !report.histogram.is_empty() {
        let _ = writeln!(out, "\n{:>16}  {:>8}  {:>8}", "extension points", "groups", "percent");
        for row in &report.histogram {
            let _ = writeln!(out, "{:>16}  {:>8}  {:>7}%", row.extension_points, row.groups, row.percent);
        }
    }
    for group in &report.groups {
        let _ = writeln!(
            out,
            "\ngroup {}: {} extension point(s), {} tuple(s), first at {}",
            group.id, group.extension_points, group.tuples, group.occurrences[0].begin
        );
        for part in &group.parts {
            let _ = writeln!(out, "  part: {}", preview(&part.text, 72));
        }
        for (i, tuple) in group.occurrences.iter().enumerate().filter(|_| group.extension_points > 0) {
            let values: Vec<String> = tuple.extension_values.iter().map(|v| format!("{:?}", preview(v.text.trim(), 32))).collect();
            let _ = writeln!(out, "  tuple {}: [{}, {}] values {}", i + 1, tuple.begin, tuple.end, values.join(" "));
        }
    }
    out
}

fn preview(text: &str, max: usize) -> String {
    let flat: String = text.chars().map(|c| if c.is_whitespace() { ' ' } else { c }).collect();
    if flat.chars().count() <= max {
        flat
    } else {
        let cut: String = flat.chars().take(max - 3).collect();
        cut + "..."
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Mark {
    group: usize,
    extension: bool,
}

fn html(report: &Report, doc: &Document) -> String {
    let n = doc.len();
    // Earlier groups win where occurrences overlap.
    let mut marks: Vec<Option<Mark>> = vec![None; n + 1];
    let mut empty_values: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (gi, group) in report.groups.iter().enumerate() {
        for tuple in &group.occurrences {
            for f in &tuple.fragments {
                paint(&mut marks, f.begin, f.end, Mark { group: gi, extension: false });
            }
            for v in &tuple.extension_values {
                if v.end < v.begin {
                    empty_values.entry(v.begin).or_default().push(gi);
                } else {
                    paint(&mut marks, v.begin, v.end, Mark { group: gi, extension: true });
                }
            }
        }
    }

    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n");
    let _ = writeln!(out, "<title>docdup: {}</title>", escape(&report.docdup_report_v1.document));
    out.push_str("<style>\n");
    out.push_str("body { font-family: sans-serif; margin: 2em; }\n");
    out.push_str("pre { white-space: pre-wrap; line-height: 1.5; }\n");
    out.push_str(".dup { border-radius: 2px; }\n");
    out.push_str("em.ext { font-style: normal; background: #fff; outline: 1px dashed #333; }\n");
    out.push_str("em.ext:empty { padding-left: 0.35em; }\n");
    for gi in 0..report.groups.len() {
        let _ = writeln!(out, ".g{gi} {{ background: hsl({}, 70%, 85%); }}", (gi * 137) % 360);
    }
    out.push_str("</style>\n</head>\n<body>\n");
    let _ = writeln!(out, "<h1>{}</h1>", escape(&report.docdup_report_v1.document));
    let _ = writeln!(
        out,
        "<p>{} groups, coverage {}, threshold {}</p>",
        report.groups.len(),
        report.coverage,
        escape(&report.config.threshold)
    );
    out.push_str("<ol class=\"legend\">\n");
    for (gi, group) in report.groups.iter().enumerate() {
        let _ = writeln!(
            out,
            "<li><span class=\"dup g{gi}\">{}</span>: {} extension point(s), {} tuple(s)</li>",
            group.id, group.extension_points, group.tuples
        );
    }
    out.push_str("</ol>\n<pre>");

    let symbols = doc.symbols();
    let mut pos = 1;
    while pos <= n {
        if let Some(groups) = empty_values.get(&pos) {
            for gi in groups {
                let _ = write!(out, "<em class=\"ext g{gi}\"></em>");
            }
        }
        let mark = marks[pos];
        let mut end = pos;
        while end < n && marks[end + 1] == mark && !empty_values.contains_key(&(end + 1)) {
            end += 1;
        }
        let chunk: String = symbols[pos - 1..end].iter().collect();
        match mark {
            None => out.push_str(&escape(&chunk)),
            Some(Mark { group, extension: false }) => {
                let _ = write!(out, "<span class=\"dup g{group}\">{}</span>", escape(&chunk));
            }
            Some(Mark { group, extension: true }) => {
                let _ = write!(out, "<em class=\"ext g{group}\">{}</em>", escape(&chunk));
            }
        }
        pos = end + 1;
    }
    if let Some(groups) = empty_values.get(&(n + 1)) {
        for gi in groups {
            let _ = write!(out, "<em class=\"ext g{gi}\"></em>");
        }
    }
    out.push_str("</pre>\n</body>\n</html>\n");
    out
}

fn paint(marks: &mut [Option<Mark>], begin: usize, end: usize, mark: Mark) {
    for slot in &mut marks[begin..=end] {
        if slot.is_none() {
            *slot = Some(mark);
        }
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}
