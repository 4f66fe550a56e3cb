//! The estimate files written by `simulate` and read by `fit`.
//!
//! Layout: a `# crheat …` line carrying the timestamp, the configuration
//! stanza (`# config key = value`), the column header, one row per time and
//! finally the estimate covariance as `# cov` lines. Everything except the
//! first line is a pure function of the configuration.

use crheat::config::RunConfig;
use crheat::heat::fit::EstimateRow;
use crheat::{Error, Result};
use std::fmt::Write as _;

pub const COLUMNS: &str = "t,estimate,stderr,paths,steps,bandwidth,seed";

pub struct EstimateFile {
    pub config: RunConfig,
    pub rows: Vec<EstimateRow>,
    pub cov: Vec<Vec<f64>>,
    pub escapes: Vec<u64>,
}

pub fn write(file: &EstimateFile, timestamp: u64) -> String {
    let mut s = format!("# crheat simulate, unix time {timestamp}\n");
    s.push_str(&file.config.header());
    let list = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(",");
    let _ = writeln!(s, "# escapes {}", list(&mut file.escapes.iter().map(|e| e.to_string())));
    let _ = writeln!(s, "{COLUMNS}");
    for r in &file.rows {
        let _ = writeln!(s, "{},{},{},{},{},{},{}", r.t, r.estimate, r.stderr, r.paths, r.steps, r.bandwidth, r.seed);
    }
    for row in &file.cov {
        let _ = writeln!(s, "# cov {}", list(&mut row.iter().map(|v| v.to_string())));
    }
    s
}

fn bad(no: usize, what: &str) -> Error {
    Error::Invalid(format!("line {}: {what}", no + 1))
}

pub fn read(text: &str) -> Result<EstimateFile> {
    let config = RunConfig::from_header(text)?;
    let (mut rows, mut cov, mut escapes) = (Vec::new(), Vec::new(), Vec::new());
    let mut seen_header = false;
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("# cov ") {
            let r: std::result::Result<Vec<f64>, _> = rest.split(',').map(|v| v.trim().parse()).collect();
            cov.push(r.map_err(|_| bad(no, "unreadable covariance row"))?);
        } else if let Some(rest) = line.strip_prefix("# escapes ") {
            let r: std::result::Result<Vec<u64>, _> = rest.split(',').filter(|v| !v.is_empty()).map(|v| v.trim().parse()).collect();
            escapes = r.map_err(|_| bad(no, "unreadable escape counts"))?;
        } else if line.is_empty() || line.starts_with('#') {
            continue;
        } else if line == COLUMNS {
            seen_header = true;
        } else {
            if !seen_header {
                return Err(bad(no, &format!("expected the column header `{COLUMNS}`")));
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(bad(no, "expected 7 columns"));
            }
            let num = |k: usize| -> Result<f64> { f[k].trim().parse().map_err(|_| bad(no, "bad number")) };
            let int = |k: usize| -> Result<u64> { f[k].trim().parse().map_err(|_| bad(no, "bad integer")) };
            rows.push(EstimateRow {
                t: num(0)?,
                estimate: num(1)?,
                stderr: num(2)?,
                paths: int(3)?,
                steps: int(4)? as usize,
                bandwidth: f[5].trim().to_string(),
                seed: int(6)?,
            });
        }
    }
    if !cov.is_empty() && (cov.len() != rows.len() || cov.iter().any(|r| r.len() != rows.len())) {
        return Err(Error::Invalid(format!("covariance is not {0}×{0}", rows.len())));
    }
    Ok(EstimateFile { config, rows, cov, escapes })
}
