use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

/// Environment variable naming the default output directory.
pub const OUT_DIR_VAR: &str = "CZCP_OUT_DIR";

/// What a subcommand produced.
pub struct Report {
    pub command: &'static str,
    /// Every input that determines the result.
    pub params: Value,
    pub result: Value,
    /// Plot-ready CSV, if the command has one.
    pub csv: Option<String>,
    /// Lines for stderr.
    pub summary: Vec<String>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &'static str, params: Value) -> Self {
        Report {
            command,
            params,
            result: Value::Null,
            csv: None,
            summary: Vec::new(),
            passed: true,
        }
    }

    /// Records a named check; a failing check fails the report.
    pub fn check(&mut self, name: &str, ok: bool, detail: impl AsRef<str>) {
        self.passed &= ok;
        let tag = if ok { "ok" } else { "FAIL" };
        self.summary.push(format!("{tag} {name}: {}", detail.as_ref()));
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }
}

/// Where the JSON and CSV documents go.
pub struct Sink {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl Sink {
    /// `--out`, else `$CZCP_OUT_DIR/<command>.json`, else stdout. The CSV goes to
    /// `--csv`, else beside the JSON file, else into the JSON document.
    pub fn resolve(command: &str, out: Option<&Path>, csv: Option<&Path>) -> Self {
        let json = out.map(Path::to_path_buf).or_else(|| {
            std::env::var_os(OUT_DIR_VAR)
                .filter(|d| !d.is_empty())
                .map(|d| PathBuf::from(d).join(format!("{command}.json")))
        });
        let csv = csv
            .map(Path::to_path_buf)
            .or_else(|| json.as_ref().map(|j| j.with_extension("csv")));
        Sink { json, csv }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes the documents and the summary; returns whether every check passed.
pub fn emit(report: Report, sink: &Sink) -> Result<bool> {
    let mut doc = Map::new();
    doc.insert("command".into(), json!(report.command));
    doc.insert("passed".into(), json!(report.passed));
    doc.insert("params".into(), report.params);
    doc.insert("result".into(), report.result);
    if let Some(csv) = &report.csv {
        match &sink.csv {
            Some(path) => write_file(path, csv)?,
            None => {
                doc.insert("csv".into(), json!(csv));
            }
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc))?;
    text.push('\n');
    match &sink.json {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    for line in &report.summary {
        eprintln!("{line}");
    }
    eprintln!("{}: {}", report.command, if report.passed { "PASS" } else { "FAIL" });
    Ok(report.passed)
}
