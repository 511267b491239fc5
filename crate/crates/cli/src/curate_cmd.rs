use std::io::Write;
use std::path::Path;

use literate_curate::align::{alignment_ratio, RatioOutOfRange};
use literate_curate::dedup::{dedup_scoped, DedupConfig};
use literate_curate::lang::{LanguageClassifier, TrigramClassifier};
use literate_curate::mixture::{sample_mixture, MixtureSpec};
use literate_curate::records::{read_records, Record};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{check_jobs, create_dir, open, with_pool, write_file, CmdResult, CurateCommand, Failure, EXIT_OK};

fn load(path: &Path) -> Result<Vec<Record>, Failure> {
    read_records(open(path)?).map_err(|e| Failure::fatal(format!("{}: {e}", path.display())))
}

fn field<'a>(r: &'a Record, key: &str) -> Result<&'a str, Failure> {
    r.str_field(key)
        .ok_or_else(|| Failure::fatal(format!("line {}: record {} has no string `{key}`", r.line, r.id)))
}

fn jsonl<'a>(lines: impl IntoIterator<Item = &'a str>) -> String {
    let mut s = String::new();
    for l in lines {
        s.push_str(l);
        s.push('\n');
    }
    s
}

fn finish(
    stdout: &mut dyn Write,
    out: &Path,
    step: &str,
    config: Value,
    input: usize,
    kept: &[&Record],
    report: (&str, String),
) -> CmdResult {
    create_dir(out)?;
    write_file(&out.join("kept.jsonl"), jsonl(kept.iter().map(|r| r.raw.as_str())).as_bytes())?;
    write_file(&out.join(report.0), report.1.as_bytes())?;
    let summary = json!({
        "step": step,
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "input": input,
        "kept": kept.len(),
        "dropped": input - kept.len(),
    });
    let mut text = serde_json::to_string_pretty(&summary).expect("json");
    text.push('\n');
    write_file(&out.join("summary.json"), text.as_bytes())?;
    let _ = writeln!(stdout, "{step}: kept {} of {input}", kept.len());
    Ok(EXIT_OK)
}

pub(crate) fn run(cmd: CurateCommand, stdout: &mut dyn Write) -> CmdResult {
    match cmd {
        CurateCommand::Dedup {
            common,
            threshold,
            k,
            bands,
            rows,
            shingle,
            global,
        } => {
            check_jobs(common.jobs)?;
            let cfg = DedupConfig {
                threshold,
                shingle,
                k,
                bands,
                rows,
                seed: common.seed,
            };
            cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
            let records = load(&common.manifest)?;
            let texts = records.iter().map(|r| field(r, "text")).collect::<Result<Vec<_>, _>>()?;
            let scopes: Vec<&str> = records
                .iter()
                .map(|r| if global { "" } else { r.str_field("source").unwrap_or("") })
                .collect();
            let outcome = with_pool(common.jobs, || dedup_scoped(&texts, &scopes, &cfg))?
                .map_err(|e| Failure::usage(e.to_string()))?;
            let kept: Vec<&Record> = outcome.kept.iter().map(|&i| &records[i]).collect();
            let clusters = outcome
                .clusters
                .iter()
                .map(|c| {
                    json!({
                        "kept": records[c.kept].id,
                        "dropped": c.dropped.iter().map(|&i| records[i].id.as_str()).collect::<Vec<_>>(),
                        "similarity": c.similarity,
                    })
                    .to_string()
                })
                .collect::<Vec<_>>();
            let config = json!({
                "threshold": threshold, "k": k, "bands": bands, "rows": rows,
                "shingle": shingle, "seed": common.seed, "scope": if global { "global" } else { "source" },
            });
            finish(
                stdout,
                &common.out,
                "dedup",
                config,
                records.len(),
                &kept,
                ("clusters.jsonl", jsonl(clusters.iter().map(String::as_str))),
            )
        }
        CurateCommand::Align { common, min_ratio } => {
            check_jobs(common.jobs)?;
            if !(0.0..=1.0).contains(&min_ratio) {
                return Err(Failure::usage(RatioOutOfRange(min_ratio).to_string()));
            }
            let records = load(&common.manifest)?;
            let pairs = records
                .iter()
                .map(|r| Ok((field(r, "text")?, field(r, "markdown")?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            let ratios: Vec<f64> = with_pool(common.jobs, || {
                pairs.par_iter().map(|(a, b)| alignment_ratio(a, b)).collect()
            })?;
            let (kept, dropped) = split(&records, &ratios, |&r| r > min_ratio);
            let report = dropped
                .iter()
                .map(|(r, ratio)| json!({"id": r.id, "ratio": ratio}).to_string())
                .collect::<Vec<_>>();
            finish(
                stdout,
                &common.out,
                "align",
                json!({"min_ratio": min_ratio, "rule": "ratio > min_ratio"}),
                records.len(),
                &kept,
                ("dropped.jsonl", jsonl(report.iter().map(String::as_str))),
            )
        }
        CurateCommand::Lang { common, threshold } => {
            check_jobs(common.jobs)?;
            if !(0.0..=1.0).contains(&threshold) {
                return Err(Failure::usage(format!("threshold {threshold} is outside [0, 1]")));
            }
            let records = load(&common.manifest)?;
            let texts = records.iter().map(|r| field(r, "text")).collect::<Result<Vec<_>, _>>()?;
            let clf = TrigramClassifier::default();
            let scores: Vec<(String, f64)> = with_pool(common.jobs, || texts.par_iter().map(|t| clf.score(t)).collect())?;
            let (kept, dropped) = split(&records, &scores, |(lang, c)| lang == "en" && *c >= threshold);
            let report = dropped
                .iter()
                .map(|(r, (lang, c))| json!({"id": r.id, "language": lang, "confidence": c}).to_string())
                .collect::<Vec<_>>();
            finish(
                stdout,
                &common.out,
                "lang",
                json!({"threshold": threshold, "language": "en", "classifier": "char-trigram naive Bayes"}),
                records.len(),
                &kept,
                ("dropped.jsonl", jsonl(report.iter().map(String::as_str))),
            )
        }
        CurateCommand::Mix { spec, total, out, seed } => {
            let text = std::fs::read_to_string(&spec).map_err(|e| Failure::fatal(format!("{}: {e}", spec.display())))?;
            let mix = MixtureSpec::from_json(&text).map_err(|e| Failure::usage(e.to_string()))?;
            let base = spec.parent().unwrap_or(Path::new("."));
            let mut pools = Vec::new();
            for s in mix.sources() {
                let path = base.join(&s.path);
                let recs = std::fs::File::open(&path)
                    .map_err(|e| e.to_string())
                    .and_then(|f| read_records(std::io::BufReader::new(f)).map_err(|e| e.to_string()))
                    .map_err(|e| Failure::fatal(format!("source {}: {}: {e}", s.name, path.display())))?;
                pools.push(recs);
            }
            let draws = sample_mixture(&mix, &pools, total, seed).map_err(|e| Failure::fatal(e.to_string()))?;
            let mut body = String::new();
            let mut counts = vec![0u64; pools.len()];
            for (src, rec) in &draws {
                counts[*src] += 1;
                body.push_str(&format!("{{\"source\":{},\"record\":{}}}\n", json!(mix.sources()[*src].name), rec.raw));
            }
            create_dir(&out)?;
            write_file(&out.join("mixture.jsonl"), body.as_bytes())?;
            let per_source: serde_json::Map<String, Value> = mix
                .sources()
                .iter()
                .zip(&counts)
                .map(|(s, n)| (s.name.clone(), json!({"ratio": s.ratio, "drawn": n})))
                .collect();
            let summary = json!({
                "step": "mix",
                "version": env!("CARGO_PKG_VERSION"),
                "config": {"total": total, "seed": seed},
                "sources": per_source,
            });
            let mut text = serde_json::to_string_pretty(&summary).expect("json");
            text.push('\n');
            write_file(&out.join("summary.json"), text.as_bytes())?;
            for (s, n) in mix.sources().iter().zip(&counts) {
                let _ = writeln!(stdout, "{}\t{n}", s.name);
            }
            Ok(EXIT_OK)
        }
    }
}

fn split<'a, T>(records: &'a [Record], scores: &'a [T], keep: impl Fn(&T) -> bool) -> (Vec<&'a Record>, Vec<(&'a Record, &'a T)>) {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (r, s) in records.iter().zip(scores) {
        if keep(s) {
            kept.push(r);
        } else {
            dropped.push((r, s));
        }
    }
    (kept, dropped)
}

