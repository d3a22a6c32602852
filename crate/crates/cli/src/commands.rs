use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use bbtspec::symbolkit::{load_symbol, parse_symbol_with, placeholders, MatrixSymbol, Scalar};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{analyze, eig_values, summarize_symbol, timestamp, Artifacts, Sections};
use crate::args::{Command, Format};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::newton_check::{check_symbol, run_trials, summarize, NewtonCheckSummary, TrialResult};
use crate::output::{ensure_dir, num, write_csv, write_json, Svg};
use crate::report::{AnalysisReport, EigSummary, SymbolSummary, SCHEMA_VERSION, TOOL_VERSION};

/// What a command produced; `degenerate` maps to exit code 1.
#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub degenerate: bool,
    pub lines: Vec<String>,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command.expect("validated config") {
        Command::Analyze | Command::Gamma | Command::Lambda0 => cmd_analyze(cfg),
        Command::Eig => cmd_eig(cfg),
        Command::Sweep => cmd_sweep(cfg),
        Command::NewtonCheck => cmd_newton_check(cfg),
    }
}

fn symbol_path(cfg: &RunConfig) -> Result<&Path, CliError> {
    cfg.symbol.as_deref().ok_or_else(|| CliError::Input("--symbol is required".into()))
}

pub fn load(cfg: &RunConfig) -> Result<MatrixSymbol, CliError> {
    let path = symbol_path(cfg)?;
    load_symbol(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn verdict_line(report: &AnalysisReport) -> String {
    let reality = report.reality.as_ref().map_or("n/a", |r| r.verdict.as_str());
    let census = report
        .gamma
        .as_ref()
        .map_or("n/a".to_string(), |g| format!("{} enclosing, {} non-enclosing", g.census.enclosing, g.census.non_enclosing));
    let rays = report.rays.as_ref().and_then(|r| r.min_crossings).map_or("n/a".to_string(), |m| m.to_string());
    format!("k={} reality={reality} ovals: {census} min ray crossings={rays}", report.symbol.k)
}

/// `report.json` plus figure files, every name carrying `suffix`.
fn write_analysis_files(
    cfg: &RunConfig,
    report: &AnalysisReport,
    art: &Artifacts,
    suffix: &str,
) -> Result<Vec<PathBuf>, CliError> {
    let out = &cfg.out;
    ensure_dir(out)?;
    let mut files = Vec::new();
    let name = |stem: &str, ext: &str| out.join(format!("{stem}{suffix}.{ext}"));
    if cfg.wants(Format::Json) {
        let p = name("report", "json");
        write_json(&p, report)?;
        files.push(p);
    }
    if let Some(sample) = &art.lambda0 {
        if cfg.wants(Format::Csv) {
            let rows: Vec<Vec<String>> = sample.points.iter().map(|p| vec![num(p.re), num(p.im), num(p.gap)]).collect();
            let p = name("lambda0", "csv");
            write_csv(&p, &["re", "im", "gap"], &rows)?;
            files.push(p);
        }
        if cfg.wants(Format::Svg) {
            let mut svg = Svg::new("limiting set");
            svg.scatter(sample.points.iter().map(|p| (p.re, p.im)));
            let p = name("lambda0", "svg");
            svg.write(&p)?;
            files.push(p);
        }
    }
    if let (Some(contours), Some(g)) = (&art.contours, &report.gamma) {
        if cfg.wants(Format::Csv) {
            let mut rows = Vec::new();
            for (c, s) in contours.components.iter().zip(&g.components) {
                for (x, y) in &c.points {
                    rows.push(vec![s.index.to_string(), s.class.clone(), num(*x), num(*y)]);
                }
            }
            let p = name("gamma", "csv");
            write_csv(&p, &["component", "class", "x", "y"], &rows)?;
            files.push(p);
        }
        if cfg.wants(Format::Svg) {
            let mut svg = Svg::new("net");
            for (c, s) in contours.components.iter().zip(&g.components) {
                let colour = match s.class.as_str() {
                    "enclosing" => "#c0392b",
                    "non-enclosing" => "#1f4e9c",
                    _ => "#888888",
                };
                svg.polyline(&c.points, colour);
            }
            let p = name("gamma", "svg");
            svg.write(&p)?;
            files.push(p);
        }
    }
    if let Some(values) = &art.eigenvalues {
        files.extend(write_eig_files(cfg, values, suffix)?);
    }
    Ok(files)
}

fn write_eig_files(cfg: &RunConfig, values: &[Complex64], suffix: &str) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    if cfg.wants(Format::Csv) {
        let rows: Vec<Vec<String>> = values.iter().map(|z| vec![num(z.re), num(z.im)]).collect();
        let p = cfg.out.join(format!("eigenvalues{suffix}.csv"));
        write_csv(&p, &["re", "im"], &rows)?;
        files.push(p);
    }
    if cfg.wants(Format::Svg) {
        let mut svg = Svg::new("eigenvalues");
        svg.scatter(values.iter().map(|z| (z.re, z.im)));
        let p = cfg.out.join(format!("eigenvalues{suffix}.svg"));
        svg.write(&p)?;
        files.push(p);
    }
    Ok(files)
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let symbol = load(cfg)?;
    let (report, art) = analyze(&symbol, cfg, Sections::for_config(cfg), None)?;
    let files = write_analysis_files(cfg, &report, &art, "")?;
    let mut lines = vec![verdict_line(&report)];
    lines.extend(report.errors.iter().map(|e| format!("error: {e}")));
    Ok(Outcome { files, degenerate: !report.errors.is_empty(), lines })
}

#[derive(Serialize)]
struct EigReport<'a> {
    schema_version: u32,
    tool_version: &'a str,
    timestamp_unix: u64,
    config: &'a RunConfig,
    symbol: SymbolSummary,
    eig: EigSummary,
}

pub fn cmd_eig(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let symbol = load(cfg)?;
    let f = bbtspec::symbolkit::char_function(&symbol)
        .map_err(|e| CliError::Input(format!("characteristic function: {e}")))?;
    let (summary, values) = eig_values(&symbol, cfg.n)?;
    ensure_dir(&cfg.out)?;
    let mut files = write_eig_files(cfg, &values, "")?;
    if cfg.wants(Format::Json) {
        let report = EigReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            timestamp_unix: timestamp(),
            config: cfg,
            symbol: summarize_symbol(&symbol, &f).0,
            eig: summary.clone(),
        };
        let p = cfg.out.join("eigenvalues.json");
        write_json(&p, &report)?;
        files.push(p);
    }
    let line = format!("n={} eigenvalues={} max|Im|={:.3e}", summary.n, summary.count, summary.max_abs_im);
    Ok(Outcome { files, degenerate: false, lines: vec![line] })
}

/// File-name fragment for a sweep value: `-3/2` becomes `-3d2`.
pub fn value_tag(v: &str) -> String {
    v.chars()
        .map(|c| match c {
            '/' => 'd',
            c if c.is_ascii_alphanumeric() || c == '.' || c == '-' || c == '+' => c,
            _ => '_',
        })
        .collect()
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sweep = cfg.sweep.as_ref().ok_or_else(|| CliError::Input("sweep needs --param and --values".into()))?;
    let path = symbol_path(cfg)?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let names = placeholders(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if !names.contains(&sweep.param) {
        return Err(CliError::Input(format!("{} has no \"${}\" placeholder", path.display(), sweep.param)));
    }
    // Substitute and validate every value before any analysis runs.
    let symbols = sweep
        .values
        .iter()
        .map(|v| {
            let value: Scalar = v.parse().map_err(|e| CliError::Input(format!("sweep value {v:?}: {e}")))?;
            let bindings = HashMap::from([(sweep.param.clone(), value)]);
            parse_symbol_with(&text, &bindings)
                .map(|s| (v.clone(), s))
                .map_err(|e| CliError::Input(format!("{} with {}={v}: {e}", path.display(), sweep.param)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sections = Sections::for_config(cfg);
    let results: Vec<(String, AnalysisReport, Artifacts)> = symbols
        .par_iter()
        .map(|(v, s)| analyze(s, cfg, sections, Some(v.clone())).map(|(r, a)| (v.clone(), r, a)))
        .collect::<Result<_, _>>()?;
    ensure_dir(&cfg.out)?;
    let mut files = Vec::new();
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    let mut degenerate = false;
    for (v, report, art) in &results {
        let suffix = format!("_{}_{}", sweep.param, value_tag(v));
        files.extend(write_analysis_files(cfg, report, art, &suffix)?);
        let mut row = vec![
            v.clone(),
            report.reality.as_ref().map_or(String::new(), |r| r.verdict.clone()),
            report.gamma.as_ref().map_or(String::new(), |g| g.census.enclosing.to_string()),
            report.rays.as_ref().and_then(|r| r.min_crossings).map_or(String::new(), |m| m.to_string()),
        ];
        if cfg.eig {
            row.push(report.eig.as_ref().map_or(String::new(), |e| num(e.max_abs_im)));
        }
        rows.push(row);
        lines.push(format!("{}={v}: {}", sweep.param, verdict_line(report)));
        lines.extend(report.errors.iter().map(|e| format!("  error: {e}")));
        degenerate |= !report.errors.is_empty();
    }
    if cfg.wants(Format::Csv) {
        let mut header = vec!["value", "reality", "enclosing", "min_ray_crossings"];
        if cfg.eig {
            header.push("eig_max_abs_im");
        }
        let p = cfg.out.join("summary.csv");
        write_csv(&p, &header, &rows)?;
        files.push(p);
    }
    Ok(Outcome { files, degenerate, lines })
}

#[derive(Serialize)]
struct NewtonReport<'a> {
    schema_version: u32,
    tool_version: &'a str,
    timestamp_unix: u64,
    config: &'a RunConfig,
    summary: &'a NewtonCheckSummary,
    results: &'a [TrialResult],
}

pub fn cmd_newton_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let results = match &cfg.symbol {
        Some(_) => vec![check_symbol(0, &load(cfg)?)?],
        None => run_trials(cfg.trials, &cfg.block_sizes, cfg.seed)?,
    };
    let summary = summarize(&results);
    ensure_dir(&cfg.out)?;
    let mut files = Vec::new();
    if cfg.wants(Format::Json) {
        let report = NewtonReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            timestamp_unix: timestamp(),
            config: cfg,
            summary: &summary,
            results: &results,
        };
        let p = cfg.out.join("newton_check.json");
        write_json(&p, &report)?;
        files.push(p);
    }
    if cfg.wants(Format::Csv) {
        let rows: Vec<Vec<String>> = results
            .iter()
            .map(|r| {
                vec![
                    r.trial.to_string(),
                    r.k.to_string(),
                    r.p.to_string(),
                    r.q.to_string(),
                    r.generic.to_string(),
                    r.oracle_match.to_string(),
                    r.triangle.to_string(),
                    r.ord_deg.to_string(),
                    r.passed().to_string(),
                ]
            })
            .collect();
        let p = cfg.out.join("newton_check.csv");
        write_csv(&p, &["trial", "k", "p", "q", "generic", "oracle_match", "triangle", "ord_deg", "passed"], &rows)?;
        files.push(p);
    }
    let line = format!(
        "{} trials: {} match the expansion oracle, {} generic ({} conforming), {} non-generic ({} still triangles)",
        summary.trials,
        summary.oracle_matches,
        summary.generic,
        summary.generic_conforming,
        summary.non_generic,
        summary.non_generic_triangle
    );
    let mut lines = vec![line];
    if results.len() == 1 {
        lines.push(format!("newton polygon: {:?}", results[0].newton_polygon));
    }
    Ok(Outcome { files, degenerate: !summary.passed, lines })
}
