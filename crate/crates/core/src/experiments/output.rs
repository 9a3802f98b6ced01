use std::io::Write;
use std::path::Path;

use super::cdf::CdfResult;
use super::sweep::SweepResult;
use crate::error::Result;

pub const SWEEP_HEADER: [&str; 7] = [
    "axis",
    "se_bound",
    "se_mc_mean",
    "se_mc_ci",
    "se_limit",
    "se_pts",
    "config_hash",
];

/// Shortest representation that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

pub fn write_sweep_csv<W: Write>(result: &SweepResult, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(SWEEP_HEADER)?;
    for p in &result.points {
        out.write_record([
            num(p.axis),
            num(p.se_bound),
            num(p.se_mc_mean),
            num(p.se_mc_ci),
            opt(p.se_limit),
            opt(p.se_pts),
            result.meta.config_hash.clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_cdf_csv<W: Write>(result: &CdfResult, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["se_cell", "quantile", "config_hash"])?;
    for (v, q) in result.cdf() {
        out.write_record([num(v), num(q), result.config_hash.clone()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn save(path: impl AsRef<Path>, f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn save_json<T: serde::Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{run_pilot_sweep, SweepOptions};
    use crate::Config;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn sweep_csv_layout() {
        let cfg = Config::reference().with_activity(0.5);
        let r = run_pilot_sweep(&cfg, &[40, 80], &SweepOptions { scenes: 4, ..SweepOptions::new(2) }).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains('\r'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER.join(","));
        assert_eq!(lines.len(), 3);
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields[0].parse::<f64>().unwrap(), 40.0);
        assert_eq!(fields[1].parse::<f64>().unwrap(), r.points[0].se_bound);
        assert_eq!(fields[5], "");
        assert_eq!(fields[6], cfg.hash_hex());
    }
}
