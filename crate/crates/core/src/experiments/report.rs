//! CSV emission for sweeps and the OMA comparison.

use std::fmt::Write as _;
use std::io::Write;

use crate::analytic;
use crate::error::Result;
use crate::montecarlo::{Estimator, McEngine};
use crate::oma::OmaConfig;

use super::scenario::Scenario;

pub const CSV_HEADER: &str = "scenario,snr_db,n_trials,pout_mc,pout_mc_ci95,pout_ue1_mc,pout_ue2_mc,pout_lb_mc,pout_approx,p_a,p_b,pout_asymp,case_label";

pub const OMA_CSV_HEADER: &str =
    "scenario,snr_db,n_trials,pout_noma_mc,pout_noma_ci95,pout_oma_mc,pout_oma_ci95,lambda1_oma,pout_approx";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Monte Carlo columns only.
    Simulate,
    /// Closed-form columns only.
    Analytic,
    /// Both.
    Sweep,
}

/// One line of [`CSV_HEADER`]. Columns a mode does not compute stay empty.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub scenario: String,
    pub snr_db: f64,
    pub n_trials: Option<u64>,
    pub pout_mc: Option<f64>,
    pub pout_mc_ci95: Option<f64>,
    pub pout_ue1_mc: Option<f64>,
    pub pout_ue2_mc: Option<f64>,
    pub pout_lb_mc: Option<f64>,
    pub pout_approx: Option<f64>,
    pub p_a: Option<f64>,
    pub p_b: Option<f64>,
    pub pout_asymp: Option<f64>,
    pub case_label: String,
}

/// Shortest round-trip form; exponent notation outside `[1e-4, 1e6)`.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

impl CsvRow {
    pub fn to_csv_line(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.scenario,
            format_float(self.snr_db),
            self.n_trials.map(|n| n.to_string()).unwrap_or_default(),
            opt(self.pout_mc),
            opt(self.pout_mc_ci95),
            opt(self.pout_ue1_mc),
            opt(self.pout_ue2_mc),
            opt(self.pout_lb_mc),
            opt(self.pout_approx),
            opt(self.p_a),
            opt(self.p_b),
            opt(self.pout_asymp),
            self.case_label
        );
        s
    }
}

pub fn run_scenario(engine: &McEngine, s: &Scenario, mode: Mode) -> Result<Vec<CsvRow>> {
    let mut rows = Vec::with_capacity(s.snr_grid_db.len());
    for &snr_db in &s.snr_grid_db {
        let cfg = s.cfg.with_snr_db(snr_db)?;
        let mut row = CsvRow {
            scenario: s.name.clone(),
            snr_db,
            n_trials: None,
            pout_mc: None,
            pout_mc_ci95: None,
            pout_ue1_mc: None,
            pout_ue2_mc: None,
            pout_lb_mc: None,
            pout_approx: None,
            p_a: None,
            p_b: None,
            pout_asymp: None,
            case_label: cfg.case().to_string(),
        };
        if mode != Mode::Analytic {
            let mc = engine.estimate_outage(&cfg, s.n_trials, s.seed, Estimator::Exact)?;
            let lb = engine.estimate_outage(&cfg, s.n_trials, s.seed, Estimator::LowerBound)?;
            row.n_trials = Some(s.n_trials);
            row.pout_mc = Some(mc.p_overall);
            row.pout_mc_ci95 = Some(mc.ci_halfwidth_95);
            row.pout_ue1_mc = Some(mc.p_ue1);
            row.pout_ue2_mc = Some(mc.p_ue2);
            row.pout_lb_mc = Some(lb.p_overall);
        }
        if mode != Mode::Simulate {
            let b = analytic::p_out_approx(&cfg)?;
            row.pout_approx = Some(b.p_out_approx);
            row.p_a = b.components.map(|c| c.p_a);
            row.p_b = b.components.map(|c| c.p_b);
            row.pout_asymp = analytic::p_out_asymptotic(&cfg).ok();
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(mut out: W, rows: &[CsvRow]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.to_csv_line())?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmaComparisonRow {
    pub scenario: String,
    pub snr_db: f64,
    pub n_trials: u64,
    pub noma_mc: f64,
    pub noma_ci95: f64,
    pub oma_mc: f64,
    pub oma_ci95: f64,
    pub lambda1_oma: f64,
    pub noma_approx: f64,
}

/// NOMA against OMA with `lambda1_oma` re-optimized at every SNR.
pub fn compare_oma(engine: &McEngine, s: &Scenario, grid_step: f64) -> Result<Vec<OmaComparisonRow>> {
    s.snr_grid_db
        .iter()
        .map(|&snr_db| {
            let cfg = s.cfg.with_snr_db(snr_db)?;
            let noma = engine.estimate_outage(&cfg, s.n_trials, s.seed, Estimator::Exact)?;
            let ocfg = OmaConfig::new(cfg.clone(), 0.5)?;
            let (lambda1_oma, oma) = engine.optimize_lambda1(&ocfg, grid_step, s.n_trials, s.seed)?;
            Ok(OmaComparisonRow {
                scenario: s.name.clone(),
                snr_db,
                n_trials: s.n_trials,
                noma_mc: noma.p_overall,
                noma_ci95: noma.ci_halfwidth_95,
                oma_mc: oma.p_overall,
                oma_ci95: oma.ci_halfwidth_95,
                lambda1_oma,
                noma_approx: analytic::p_out_approx(&cfg)?.p_out_approx,
            })
        })
        .collect()
}

pub fn write_oma_csv<W: Write>(mut out: W, rows: &[OmaComparisonRow]) -> std::io::Result<()> {
    writeln!(out, "{OMA_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.scenario,
            format_float(r.snr_db),
            r.n_trials,
            format_float(r.noma_mc),
            format_float(r.noma_ci95),
            format_float(r.oma_mc),
            format_float(r.oma_ci95),
            format_float(r.lambda1_oma),
            format_float(r.noma_approx)
        )?;
    }
    Ok(())
}
