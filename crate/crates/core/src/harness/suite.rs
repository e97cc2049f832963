use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_2};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::instance::{draw, evaluate, Params};
use super::report::ReportRow;
use super::HarnessError;
use crate::blockops::BlockShape;
use crate::inequalities::{CheckId, HypothesisClass};

pub const DEFAULT_ALPHAS: [f64; 4] = [0.0, FRAC_PI_6, FRAC_PI_4, FRAC_PI_3];
pub const DEFAULT_QS: [f64; 4] = [1.0, 2.0, 3.0, f64::INFINITY];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub checks: Vec<CheckId>,
    pub dims: Vec<BlockShape>,
    pub trials: usize,
    pub seed: u64,
    /// Relative tolerance coefficient per check, replacing the default.
    #[serde(default)]
    pub tol: BTreeMap<CheckId, f64>,
    /// Sector half-angles, used by sector checks only.
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    /// Schatten exponents, used by `schatten` only.
    #[serde(default = "default_qs", with = "crate::serde_real::vec")]
    pub qs: Vec<f64>,
}

fn default_alphas() -> Vec<f64> {
    DEFAULT_ALPHAS.to_vec()
}

fn default_qs() -> Vec<f64> {
    DEFAULT_QS.to_vec()
}

impl SuiteConfig {
    pub fn new(checks: Vec<CheckId>, dims: Vec<BlockShape>, trials: usize, seed: u64) -> Self {
        Self {
            checks,
            dims,
            trials,
            seed,
            tol: BTreeMap::new(),
            alphas: default_alphas(),
            qs: default_qs(),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let usage = |s: String| Err(HarnessError::Usage(s));
        if self.checks.is_empty() {
            return usage("no checks selected".into());
        }
        if self.dims.is_empty() {
            return usage("no block shapes given".into());
        }
        if self.trials == 0 {
            return usage("trials must be at least 1".into());
        }
        if let Some(d) = self.dims.iter().find(|d| d.m == 0 || d.n == 0) {
            return usage(format!("block shape {d} must be positive"));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(0.0..FRAC_PI_2).contains(*a)) {
            return usage(format!("alpha {a} outside [0, π/2)"));
        }
        if let Some(q) = self.qs.iter().find(|q| q.is_nan() || **q < 1.0) {
            return usage(format!("q = {q} is below 1"));
        }
        if let Some((c, t)) = self.tol.iter().find(|(_, t)| !(t.is_finite() && **t >= 0.0)) {
            return usage(format!("tolerance {t} for {c} must be a non-negative number"));
        }
        let uses_sector = self.checks.iter().any(|c| c.class() == HypothesisClass::Sector);
        if uses_sector && self.alphas.is_empty() {
            return usage("sector checks need at least one alpha".into());
        }
        if self.checks.contains(&CheckId::Schatten) && self.qs.is_empty() {
            return usage("schatten needs at least one q".into());
        }
        Ok(())
    }

    /// Parameter combinations a check runs under.
    pub(crate) fn params_for(&self, check: CheckId) -> Vec<Params> {
        if check == CheckId::Schatten {
            self.qs.iter().map(|&q| Params { q: Some(q), alpha: None }).collect()
        } else if check.class() == HypothesisClass::Sector {
            self.alphas.iter().map(|&a| Params { q: None, alpha: Some(a) }).collect()
        } else {
            vec![Params::default()]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub check: CheckId,
    pub count: usize,
    pub holds: usize,
    pub violations: usize,
    pub hypothesis_errors: usize,
    /// Minimum gap over rows whose hypothesis held.
    #[serde(with = "crate::serde_real::option")]
    pub min_gap: Option<f64>,
    /// Row index (into `SuiteReport::rows`) attaining `min_gap`.
    pub argmin_row: Option<usize>,
    pub argmin_seed: Option<u64>,
    pub argmin_index: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub aggregates: Vec<Aggregate>,
    pub rows: Vec<ReportRow>,
    pub wall_time_s: f64,
}

impl SuiteReport {
    pub fn has_violation(&self) -> bool {
        self.rows.iter().any(ReportRow::is_violation)
    }
}

/// Generates, re-verifies and evaluates one instance.
pub(crate) fn evaluate_task(
    check: CheckId,
    shape: BlockShape,
    seed: u64,
    index: u64,
    params: Params,
    tol: Option<f64>,
) -> ReportRow {
    let inst = match draw(check, shape, seed, index, params, false) {
        Ok((_, inst)) => inst,
        Err(e) => {
            return ReportRow::rejected(check, shape, seed, index, params, format!("generation failed: {e}"), &[])
        }
    };
    match evaluate(check, &inst, params, false) {
        Ok(v) => {
            let v = match tol {
                Some(coef) => v.with_tolerance_coefficient(coef),
                None => v,
            };
            let mut row = ReportRow::from_verdict(v, shape, seed, index, params);
            if row.is_violation() {
                row.instance = Some(inst.to_json());
            }
            row
        }
        Err(e) => ReportRow::from_check_error(check, shape, seed, index, params, e),
    }
}

/// Runs every (check, shape, parameter, trial) combination.
///
/// Trial `t` reads ChaCha stream `t` of `cfg.seed`, so all checks of one
/// hypothesis class see the same instances. Rows come back in
/// (check, shape, parameter, trial) order whatever `workers` is.
pub fn run_suite(cfg: &SuiteConfig, workers: Option<usize>) -> Result<SuiteReport, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut tasks = Vec::new();
    for &check in &cfg.checks {
        for &shape in &cfg.dims {
            for params in cfg.params_for(check) {
                for trial in 0..cfg.trials as u64 {
                    tasks.push((check, shape, params, trial));
                }
            }
        }
    }
    let run = || -> Vec<ReportRow> {
        tasks
            .par_iter()
            .map(|&(check, shape, params, trial)| {
                evaluate_task(check, shape, cfg.seed, trial, params, cfg.tol.get(&check).copied())
            })
            .collect()
    };
    let rows = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| HarnessError::Usage(format!("cannot start {w} workers: {e}")))?
            .install(run),
        None => run(),
    };
    let aggregates = cfg.checks.iter().map(|&c| aggregate(c, &rows)).collect();
    Ok(SuiteReport {
        config: cfg.clone(),
        aggregates,
        rows,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

pub(crate) fn aggregate(check: CheckId, rows: &[ReportRow]) -> Aggregate {
    let mut agg = Aggregate {
        check,
        count: 0,
        holds: 0,
        violations: 0,
        hypothesis_errors: 0,
        min_gap: None,
        argmin_row: None,
        argmin_seed: None,
        argmin_index: None,
    };
    for (k, row) in rows.iter().enumerate().filter(|(_, r)| r.check == check) {
        agg.count += 1;
        if !row.hypothesis_ok {
            agg.hypothesis_errors += 1;
            continue;
        }
        if row.holds {
            agg.holds += 1;
        } else {
            agg.violations += 1;
        }
        if agg.min_gap.is_none_or(|g| row.gap < g) {
            agg.min_gap = Some(row.gap);
            agg.argmin_row = Some(k);
            agg.argmin_seed = Some(row.seed);
            agg.argmin_index = Some(row.index);
        }
    }
    agg
}
