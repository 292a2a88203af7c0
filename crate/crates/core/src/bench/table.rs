use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::StatsRow;

pub const CSV_HEADER: &str = "algorithm,i,err_min,err_max,err_mean,iter_min,iter_max,iter_mean,n";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Markdown,
    Csv,
    JsonLines,
}

/// Fixed-point rendering with five significant digits, `.` as separator.
pub fn format_mean(x: f64) -> String {
    if x == 0.0 {
        return "0.0000".to_owned();
    }
    // `{:e}` rounds first, so the exponent already accounts for carries.
    let sci = format!("{x:.4e}");
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    let decimals = (4 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Serialize)]
struct JsonRow<'a> {
    algorithm: &'a str,
    i: u64,
    n: u64,
    err_min: i64,
    err_max: i64,
    err_mean: f64,
    iter_min: Option<u64>,
    iter_max: Option<u64>,
    iter_mean: Option<f64>,
}

pub fn emit_table(rows: &[StatsRow], format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in rows {
                let (imin, imax, imean) = iter_cells(r, "");
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.algorithm.tag(),
                    r.i,
                    r.err_min,
                    r.err_max,
                    format_mean(r.err_mean()),
                    imin,
                    imax,
                    imean,
                    r.n
                )
                .unwrap();
            }
        }
        OutputFormat::Markdown => {
            out.push_str("| Algorithm | i | Err min | Err max | Err avg | Iter min | Iter max | Iter avg |\n");
            out.push_str("|---|---:|---:|---:|---:|---:|---:|---:|\n");
            for r in rows {
                let (imin, imax, imean) = iter_cells(r, "--");
                writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} | {} | {} |",
                    r.algorithm.label(),
                    r.i,
                    r.err_min,
                    r.err_max,
                    format_mean(r.err_mean()),
                    imin,
                    imax,
                    imean
                )
                .unwrap();
            }
        }
        OutputFormat::JsonLines => {
            for r in rows {
                let row = JsonRow {
                    algorithm: r.algorithm.tag(),
                    i: r.i.get(),
                    n: r.n,
                    err_min: r.err_min,
                    err_max: r.err_max,
                    err_mean: r.err_mean(),
                    iter_min: r.iter.map(|it| it.min),
                    iter_max: r.iter.map(|it| it.max),
                    iter_mean: r.iter_mean(),
                };
                out.push_str(&serde_json::to_string(&row).expect("row serializes"));
                out.push('\n');
            }
        }
    }
    out
}

fn iter_cells(r: &StatsRow, absent: &str) -> (String, String, String) {
    match (r.iter, r.iter_mean()) {
        (Some(it), Some(mean)) => (it.min.to_string(), it.max.to_string(), format_mean(mean)),
        _ => (absent.to_owned(), absent.to_owned(), absent.to_owned()),
    }
}
