use std::fmt::Write as _;
use std::str::FromStr;

use super::{BenchMode, BenchResult, SizeRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
    Svg,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "svg" | "plot" => Ok(ReportFormat::Svg),
            other => Err(format!("unknown report format '{other}'")),
        }
    }
}

pub fn emit_report(results: &[BenchResult], format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => csv(results),
        ReportFormat::Markdown => markdown(results),
        ReportFormat::Svg => svg(results),
    }
}

fn csv(results: &[BenchResult]) -> String {
    let mut out = String::from("suite,mode,mean_us_per_op,error_us,samples\n");
    for r in results {
        let _ = writeln!(out, "{},{},{:.3},{:.3},{}", r.suite.name(), r.mode.label(), r.mean, r.error_margin, r.samples.len());
    }
    out
}

fn modes_in(results: &[BenchResult]) -> Vec<BenchMode> {
    let mut modes = Vec::new();
    for r in results {
        if !modes.contains(&r.mode) {
            modes.push(r.mode);
        }
    }
    modes
}

fn markdown(results: &[BenchResult]) -> String {
    let mut out = String::new();
    for mode in modes_in(results) {
        let _ = writeln!(out, "### {}\n", mode.title());
        out.push_str("| Benchmark | Mode | Cnt | Score | Error | Units |\n");
        out.push_str("|---|---|---:|---:|---:|---|\n");
        for r in results.iter().filter(|r| r.mode == mode) {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {:.3} | ± {:.3} | {} |",
                r.suite.name(),
                r.mode.label(),
                r.samples.len(),
                r.mean,
                r.error_margin,
                r.unit
            );
        }
        out.push('\n');
    }
    out
}

const COLORS: [&str; 3] = ["#4e79a7", "#f28e2b", "#59a14f"];

/// Grouped bar chart: one group per mode, one bar per suite.
fn svg(results: &[BenchResult]) -> String {
    let modes = modes_in(results);
    let mut suites = Vec::new();
    for r in results {
        if !suites.contains(&r.suite) {
            suites.push(r.suite);
        }
    }
    let (bar, gap, left, top, plot_h) = (40.0, 30.0, 70.0, 40.0, 240.0);
    let group_w = bar * suites.len().max(1) as f64 + gap;
    let width = left + group_w * modes.len().max(1) as f64 + 160.0;
    let height = top + plot_h + 60.0;
    let max = results.iter().map(|r| r.mean).fold(0.0, f64::max).max(f64::MIN_POSITIVE);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<text x="{left}" y="20" font-size="14">Mean time per op (µs/op)</text>"#);
    let base = top + plot_h;
    let _ = writeln!(s, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{base}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#, width - 150.0);
    for i in 0..=4 {
        let v = max * i as f64 / 4.0;
        let y = base - plot_h * i as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{}" y="{y:.1}" text-anchor="end">{v:.1}</text>"#, left - 6.0);
    }
    for (g, mode) in modes.iter().enumerate() {
        let x0 = left + gap / 2.0 + g as f64 * group_w;
        for (i, suite) in suites.iter().enumerate() {
            let Some(r) = results.iter().find(|r| r.mode == *mode && r.suite == *suite) else { continue };
            let h = plot_h * r.mean / max;
            let x = x0 + i as f64 * bar;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.1}" y="{:.1}" width="{}" height="{h:.1}" fill="{}"><title>{} {}: {:.3} µs/op</title></rect>"#,
                base - h,
                bar - 4.0,
                COLORS[i % COLORS.len()],
                suite.name(),
                mode.label(),
                r.mean
            );
        }
        let cx = x0 + bar * suites.len() as f64 / 2.0;
        let _ = writeln!(s, r#"<text x="{cx:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, base + 18.0, mode.title());
    }
    let lx = width - 140.0;
    for (i, suite) in suites.iter().enumerate() {
        let y = top + i as f64 * 20.0;
        let _ = writeln!(s, r#"<rect x="{lx}" y="{y}" width="12" height="12" fill="{}"/>"#, COLORS[i % COLORS.len()]);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 18.0, y + 10.0, suite.name());
    }
    s.push_str("</svg>\n");
    s
}

/// Encrypted file sizes as CSV.
pub fn size_csv(rows: &[SizeRow]) -> String {
    let mut out = String::from("suite,payloads,plaintext_bytes,encrypted_bytes,framing_bytes,overhead_bytes,encrypted_mb,exact\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{}",
            r.suite.name(),
            r.payloads,
            r.plaintext_bytes,
            r.encrypted_bytes,
            r.framing_bytes,
            r.overhead_bytes,
            r.encrypted_mb(),
            r.is_exact()
        );
    }
    out
}
