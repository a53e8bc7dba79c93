use std::fmt::Write as _;

use sampled_centrality::{Result, SparseGraph};

use crate::experiment::Report;

pub fn to_json(report: &Report, with_timing: bool) -> String {
    let mut value = serde_json::to_value(report).expect("report serializes");
    if with_timing {
        value["timing_seconds"] = serde_json::to_value(report.timing()).expect("timing serializes");
    }
    let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
    s.push('\n');
    s
}

/// Figure layout: one row per rank, the reference first and then one column
/// per completed run, followed by overlap@k and exact@k rows. A trailing
/// `failed` row marks an incomplete report.
pub fn to_csv(report: &Report, g: &SparseGraph) -> Result<String> {
    let mut out = format!(
        "# tool_version={} measure={} reference={}\n",
        report.tool_version, report.config_echo.measure, report.reference.source
    );
    out.push_str(&report.ranking_report()?.to_csv(|i| g.label(i).to_string()));
    let failed = report.runs.iter().filter(|r| r.status != "ok").count();
    if failed > 0 {
        let _ = writeln!(out, "failed,{failed}");
    }
    Ok(out)
}

pub fn summary_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &report.summary {
        w.serialize(row).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

pub fn timing_table(report: &Report) -> String {
    let mut out = String::from("ell      strategy  mean_s      max_s       min_s\n");
    for t in report.timing() {
        let _ = writeln!(
            out,
            "{:<8} {:<9} {:<11.4e} {:<11.4e} {:.4e}",
            t.ell,
            t.strategy.to_string(),
            t.mean,
            t.max,
            t.min
        );
    }
    out
}
