//! Tabular outputs: per-frequency score profiles and sweep tables.

use std::fmt::Write as _;

use crate::detector::DetectionReport;
use crate::error::{Error, Result};
use crate::simulate::SweepResult;

use super::fmt_f64;

/// `i,eigenvalue,gamma,gamma_inf`, one row per stored mode, `i` 1-based.
pub fn profile_csv(report: &DetectionReport) -> String {
    let mut out = String::from("i,eigenvalue,gamma,gamma_inf\n");
    for (i, ((b, g), gi)) in report
        .eigenvalues
        .iter()
        .zip(&report.scores)
        .zip(&report.scores_inf)
        .enumerate()
    {
        let _ = writeln!(out, "{},{},{},{}", i + 1, fmt_f64(*b), fmt_f64(*g), fmt_f64(*gi));
    }
    out
}

/// Wide table with one row per grid value and four columns per setting.
///
/// All results must share the axis and grid.
pub fn sweep_csv(results: &[SweepResult]) -> Result<String> {
    let first = results.first().ok_or_else(|| Error::invalid("no sweep results to write"))?;
    for r in results {
        let same_grid = r.points.len() == first.points.len()
            && r.points.iter().zip(&first.points).all(|(a, b)| a.value == b.value);
        if r.axis != first.axis || !same_grid {
            return Err(Error::invalid("sweep results do not share an axis and grid"));
        }
    }
    let mut out = String::from(first.axis.name());
    for r in results {
        let s = r.setting.name();
        let _ = write!(out, ",{s}_mean_score_t0,{s}_mean_score_t1,{s}_error_l2,{s}_error_linf");
    }
    out.push_str(",trials\n");
    for (k, p) in first.points.iter().enumerate() {
        out.push_str(&fmt_f64(p.value));
        for r in results {
            let q = &r.points[k];
            let _ = write!(
                out,
                ",{},{},{},{}",
                fmt_f64(q.mean_score_t0),
                fmt_f64(q.mean_score_t1),
                fmt_f64(q.error_rate_l2),
                fmt_f64(q.error_rate_linf)
            );
        }
        let _ = writeln!(out, ",{}", p.trials);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::FilterSetting;
    use crate::simulate::{SweepAxis, SweepPoint};

    fn result(setting: FilterSetting, grid: &[f64]) -> SweepResult {
        SweepResult {
            axis: SweepAxis::M,
            setting,
            points: grid
                .iter()
                .map(|&value| SweepPoint {
                    value,
                    mean_score_t0: 0.5,
                    mean_score_t1: 0.25,
                    error_rate_l2: 0.0,
                    error_rate_linf: 0.125,
                    trials: 3,
                })
                .collect(),
        }
    }

    #[test]
    fn sweep_table_layout() {
        let csv = sweep_csv(&[result(FilterSetting::LaplacianWeak, &[10.0, 20.0]), result(FilterSetting::AdjacencyStrong, &[10.0, 20.0])])
            .unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("m,LaplacianWeak_mean_score_t0,"));
        assert!(lines[0].ends_with("AdjacencyStrong_error_linf,trials"));
        assert_eq!(lines[1], "10.0,0.5,0.25,0.0,0.125,0.5,0.25,0.0,0.125,3");
    }

    #[test]
    fn mismatched_grids_rejected() {
        let r = sweep_csv(&[result(FilterSetting::LaplacianWeak, &[10.0]), result(FilterSetting::AdjacencyWeak, &[20.0])]);
        assert!(r.is_err());
        assert!(sweep_csv(&[]).is_err());
    }
}
