use std::io::Write;

use literate_core::codec::CodecConfig;
use literate_core::eval::{evaluate, read_predictions, EvalOptions};
use literate_core::manifest::read_manifest;
use literate_core::Task;
use serde_json::{json, Map};

use crate::{check_jobs, create_dir, open, write_file, CmdResult, EvalArgs, Failure, TaskArg, EXIT_MALFORMED, EXIT_OK};

pub(crate) fn run(a: EvalArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    check_jobs(a.jobs)?;
    let codec = CodecConfig::new(a.bins).map_err(|e| Failure::usage(e.to_string()))?;
    let task = match a.task {
        TaskArg::Ocr => Task::Ocr,
        TaskArg::Markdown => Task::Markdown,
    };

    let samples = read_manifest(open(&a.manifest)?)
        .map_err(|e| Failure::fatal(format!("{}: {e}", a.manifest.display())))?;
    let preds = read_predictions(open(&a.pred)?)
        .map_err(|e| Failure::fatal(format!("{}: {e}", a.pred.display())))?;

    // Worker count and output location do not change results, so they stay
    // out of the echo and reports from different machines compare byte for byte.
    let mut config = Map::new();
    config.insert("task".into(), json!(task.as_str()));
    config.insert("manifest".into(), json!(a.manifest.display().to_string()));
    config.insert("predictions".into(), json!(a.pred.display().to_string()));
    config.insert("bins".into(), json!(a.bins));
    config.insert("seed".into(), json!(a.seed));

    let opts = EvalOptions {
        codec,
        jobs: a.jobs,
        config,
    };
    let report = evaluate(task, &samples, &preds, &opts).map_err(|e| Failure::fatal(e.to_string()))?;

    create_dir(&a.out)?;
    write_file(&a.out.join("report.json"), report.to_json().as_bytes())?;
    let text = report.render_text();
    write_file(&a.out.join("report.txt"), text.as_bytes())?;
    let _ = stdout.write_all(text.as_bytes());

    if report.has_malformed() {
        for d in report.diagnostics.iter().filter(|d| d.kind != literate_core::eval::DiagnosticKind::Missing) {
            let _ = writeln!(stderr, "warning: {d}");
        }
        Ok(EXIT_MALFORMED)
    } else {
        Ok(EXIT_OK)
    }
}

