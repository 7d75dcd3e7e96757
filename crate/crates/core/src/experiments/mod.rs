//! Scenario definitions, CSV reports and the validation suite behind the
//! command-line tool.

pub mod report;
pub mod scenario;
pub mod validate;

pub use report::{compare_oma, run_scenario, write_csv, CsvRow, Mode, CSV_HEADER};
pub use scenario::{snr_grid, Scenario, BUILTIN_NAMES, DEFAULT_SEED};
pub use validate::{validate, PropertyResult, ValidateOptions};

/// Least-squares slope of `log10 y` against `log10 x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.log10(), y.log10())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<_> = (1..10).map(|i| (i as f64, 3.0 / (i as f64).powi(2))).collect();
        assert!((loglog_slope(&pts) + 2.0).abs() < 1e-12);
    }
}
