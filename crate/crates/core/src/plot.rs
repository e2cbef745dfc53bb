//! Self-contained SVG rendering of a rank pairing: two columns of words,
//! rank 1 at the top, one line per word connecting its positions in the two
//! rankings. Crossing lines show rank disagreements directly.

use std::fmt::Write as _;

use crate::comparison::ComparisonReport;

const ROW_HEIGHT: u64 = 20;
const HEADER_HEIGHT: u64 = 56;
const LABEL_X_LEFT: u64 = 24;
const LINE_X_LEFT: u64 = 200;
const LINE_X_RIGHT: u64 = 440;
const LABEL_X_RIGHT: u64 = 456;
const WIDTH: u64 = 640;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the pairing of `report` with the given column labels.
pub fn pairing_svg(report: &ComparisonReport, left_label: &str, right_label: &str) -> String {
    let n = report.pairing.len() as u64;
    let height = HEADER_HEIGHT + n * ROW_HEIGHT + 24;
    let row_y = |rank: u32| HEADER_HEIGHT + (rank as u64 - 1) * ROW_HEIGHT + ROW_HEIGHT / 2;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(
        svg,
        "  <desc>rank pairing, left: {}; right: {}; spearman_rho={}; kendall_tau={}; crossings={}</desc>",
        escape(left_label),
        escape(right_label),
        report.spearman_rho,
        report.kendall_tau,
        report.crossings
    );
    let _ = writeln!(
        svg,
        r#"  <style>text {{ font-family: monospace; font-size: 13px; }} .hdr {{ font-size: 12px; }}</style>"#
    );
    let _ = writeln!(
        svg,
        r#"  <rect x="0" y="0" width="{WIDTH}" height="{height}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"  <text class="hdr" x="{LABEL_X_LEFT}" y="20">left: {}</text>"#,
        escape(left_label)
    );
    let _ = writeln!(
        svg,
        r#"  <text class="hdr" x="{LABEL_X_LEFT}" y="36">right: {}  (crossings: {})</text>"#,
        escape(right_label),
        report.crossings
    );

    for entry in &report.pairing {
        let y_left = row_y(entry.rank_left);
        let y_right = row_y(entry.rank_right);
        let _ = writeln!(
            svg,
            r##"  <line x1="{LINE_X_LEFT}" y1="{y_left}" x2="{LINE_X_RIGHT}" y2="{y_right}" stroke="#334455" stroke-width="1"/>"##
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{LABEL_X_LEFT}" y="{}">{:>4}  {}</text>"#,
            y_left + 4,
            entry.rank_left,
            entry.word
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{LABEL_X_RIGHT}" y="{}">{}  {:>4}</text>"#,
            y_right + 4,
            entry.word,
            entry.rank_right
        );
    }
    svg.push_str("</svg>\n");
    svg
}
