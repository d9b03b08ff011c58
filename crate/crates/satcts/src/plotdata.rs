//! Long-format plot data: `policy, slot, metric, mean, std`, one row per
//! metric per aggregate row.

use std::path::{Path, PathBuf};

use crate::campaign::METRICS;
use crate::error::{Error, Result};

pub const PLOT_FILE: &str = "plot.csv";

/// Reads `<dir>/aggregate.csv` and writes `<dir>/plot.csv`.
pub fn emit_plot_data(dir: &Path) -> Result<PathBuf> {
    let src = dir.join("aggregate.csv");
    let mut rdr = csv::Reader::from_path(&src).map_err(Error::csv(&src))?;
    let headers = rdr.headers().map_err(Error::csv(&src))?.clone();
    let mut expected = vec!["policy".to_string(), "slot".to_string()];
    for m in METRICS {
        expected.push(format!("{m}_mean"));
        expected.push(format!("{m}_std"));
    }
    if headers.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::Artifact(format!(
            "{}: unexpected columns {:?}",
            src.display(),
            headers.iter().collect::<Vec<_>>()
        )));
    }
    let dst = dir.join(PLOT_FILE);
    let mut w = csv::Writer::from_path(&dst).map_err(Error::csv(&dst))?;
    w.write_record(["policy", "slot", "metric", "mean", "std"])
        .map_err(Error::csv(&dst))?;
    for rec in rdr.records() {
        let rec = rec.map_err(Error::csv(&src))?;
        for (j, m) in METRICS.iter().enumerate() {
            w.write_record([&rec[0], &rec[1], m, &rec[2 + 2 * j], &rec[3 + 2 * j]])
                .map_err(Error::csv(&dst))?;
        }
    }
    w.flush().map_err(Error::io(&dst))?;
    Ok(dst)
}
