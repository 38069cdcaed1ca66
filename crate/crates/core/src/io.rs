//! Plain-text output: CSV series with a header row, CRLF line ends and
//! floats printed with 17 significant digits so that they round-trip.

use crate::recursion::SequenceRecord;
use crate::simulate::EcdfSummary;
use crate::solve::SolveResult;
use crate::tail::TailReport;

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "Infinity".into()
        } else {
            "-Infinity".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// Builds a CSV document from named float columns of equal length.
pub fn csv_columns(headers: &[&str], columns: &[&[f64]]) -> String {
    assert_eq!(headers.len(), columns.len());
    let n = columns.first().map_or(0, |c| c.len());
    assert!(
        columns.iter().all(|c| c.len() == n),
        "columns differ in length"
    );
    let mut out = headers.join(",");
    out.push_str("\r\n");
    for i in 0..n {
        let row: Vec<String> = columns.iter().map(|c| fmt_f64(c[i])).collect();
        out.push_str(&row.join(","));
        out.push_str("\r\n");
    }
    out
}

pub fn ecdf_csv(e: &EcdfSummary) -> String {
    csv_columns(&["x", "cdf"], &[&e.grid, &e.cdf])
}

pub fn solve_csv(r: &SolveResult) -> String {
    csv_columns(&["x", "f", "cdf"], &[&r.grid, &r.f, &r.cdf()])
}

pub fn tail_csv(t: &TailReport) -> String {
    let target = vec![t.target_constant; t.quantile_grid.len()];
    csv_columns(
        &["x", "F_bar", "Br_bar", "ratio", "target"],
        &[
            &t.quantile_grid,
            &t.mc_tail,
            &t.br_tail,
            &t.ratio_estimates,
            &target,
        ],
    )
}

pub fn sequences_csv(records: &[SequenceRecord]) -> String {
    let mut out = String::from(
        "n,tau,sigma,deadline,vacation,x,w,z,y,branch,family_start,served_in_family\r\n",
    );
    for r in records {
        let y = r.y.map_or_else(String::new, fmt_f64);
        let fields = [
            r.n.to_string(),
            fmt_f64(r.input.tau),
            fmt_f64(r.input.sigma),
            fmt_f64(r.input.deadline),
            fmt_f64(r.input.vacation),
            fmt_f64(r.x),
            fmt_f64(r.w),
            fmt_f64(r.z),
            y,
            r.branch.label().to_string(),
            r.family_start.to_string(),
            r.served_in_family.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push_str("\r\n");
    }
    out
}
