//! Minimal-gap search over generator latents.
//!
//! Each restart draws a fresh latent from ChaCha stream `r` of the seed and
//! hill-climbs by single-coordinate Gaussian steps. A step is kept only if it
//! rebuilds, still passes the check's hypothesis and lowers the gap. The step
//! size grows on acceptance and shrinks on rejection; a restart ends when it
//! collapses or its step allowance runs out.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::instance::{draw, evaluate, generation_class, is_determinantal_block, Instance, Latent, Params};
use super::report::ReportRow;
use super::HarnessError;
use crate::blockops::BlockShape;
use crate::cones::{is_ppt, DEFAULT_PSD_TOL};
use crate::inequalities::{CheckId, Verdict};

const STEPS_PER_RESTART: usize = 400;
const SIGMA_START: f64 = 0.3;
const SIGMA_MIN: f64 = 1e-7;
const SIGMA_MAX: f64 = 2.0;
/// Keeps the perturbation stream apart from the instance streams.
const PERTURB_KEY: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub check: CheckId,
    pub shape: BlockShape,
    /// Total number of evaluations, failed rebuilds included.
    pub budget: usize,
    pub seed: u64,
    pub params: Params,
    /// Evaluate determinantal block checks on plain PSD input, without
    /// their hypothesis test. Results are reported, never judged.
    pub explore: bool,
    /// Stop as soon as the best gap is at or below this.
    pub target_gap: Option<f64>,
}

impl SearchConfig {
    pub fn new(check: CheckId, shape: BlockShape, budget: usize, seed: u64) -> Self {
        Self {
            check,
            shape,
            budget,
            seed,
            params: Params::default(),
            explore: false,
            target_gap: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessRecord {
    pub check: CheckId,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    /// Stream index of the restart that produced the best instance.
    pub restart_index: u64,
    /// Accepted perturbations between that restart's draw and the best instance.
    pub perturbation_steps: usize,
    pub evaluations: usize,
    #[serde(with = "crate::serde_real")]
    pub best_gap: f64,
    /// Best gap after each evaluation; non-increasing.
    pub trace: Vec<f64>,
    pub explore: bool,
    /// In explore mode: whether the best instance happens to be PPT.
    pub best_is_ppt: Option<bool>,
    /// Verdict row for the best instance, with the instance attached.
    pub best: ReportRow,
}

struct Best {
    gap: f64,
    restart: u64,
    steps: usize,
    verdict: Verdict,
    inst: Instance,
}

/// Hill-climbs toward the smallest gap of `cfg.check` within `cfg.budget` evaluations.
pub fn minimize_gap(cfg: &SearchConfig) -> Result<TightnessRecord, HarnessError> {
    if cfg.budget == 0 {
        return Err(HarnessError::Usage("budget must be at least 1".into()));
    }
    if cfg.explore && !is_determinantal_block(cfg.check) {
        return Err(HarnessError::Usage(format!(
            "--explore applies to lin, main, swapped and ppt_reversal, not {}",
            cfg.check
        )));
    }
    let class = generation_class(cfg.check, cfg.explore);
    if class == crate::inequalities::HypothesisClass::Sector && cfg.params.alpha.is_none() {
        return Err(HarnessError::Usage(format!("{} needs --alpha", cfg.check)));
    }
    let score = |inst: &Instance| evaluate(cfg.check, inst, cfg.params, cfg.explore).ok();

    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ PERTURB_KEY);
    let mut best: Option<Best> = None;
    let mut trace = Vec::with_capacity(cfg.budget);
    let mut evals = 0;
    let mut restart = 0u64;
    let mut last_error = None;

    'outer: while evals < cfg.budget {
        let drawn = draw(cfg.check, cfg.shape, cfg.seed, restart, cfg.params, cfg.explore);
        evals += 1;
        let (mut latent, inst) = match drawn {
            Ok(x) => x,
            Err(e) => {
                last_error = Some(e.to_string());
                push_trace(&mut trace, &best);
                restart += 1;
                continue;
            }
        };
        let Some(mut current) = score(&inst) else {
            push_trace(&mut trace, &best);
            restart += 1;
            continue;
        };
        let mut current_inst = inst;
        let mut steps = 0;
        offer(&mut best, &current, &current_inst, restart, steps);
        push_trace(&mut trace, &best);

        let mut sigma = SIGMA_START;
        for _ in 0..STEPS_PER_RESTART {
            if evals >= cfg.budget || reached(&best, cfg.target_gap) {
                break 'outer;
            }
            if sigma < SIGMA_MIN {
                break;
            }
            let mut candidate: Latent = latent.clone();
            candidate.perturb(sigma, &mut rng);
            evals += 1;
            let scored = candidate.build().ok().and_then(|inst| score(&inst).map(|v| (v, inst)));
            match scored {
                Some((v, inst)) if v.gap < current.gap => {
                    latent = candidate;
                    current = v;
                    current_inst = inst;
                    steps += 1;
                    sigma = (sigma * 1.5).min(SIGMA_MAX);
                    offer(&mut best, &current, &current_inst, restart, steps);
                }
                _ => sigma *= 0.8,
            }
            push_trace(&mut trace, &best);
        }
        if reached(&best, cfg.target_gap) {
            break;
        }
        restart += 1;
    }

    let best = best.ok_or_else(|| {
        HarnessError::Usage(format!(
            "no admissible instance within {} evaluations{}",
            cfg.budget,
            last_error.map(|e| format!(" (last error: {e})")).unwrap_or_default()
        ))
    })?;
    let best_is_ppt = if cfg.explore {
        best.inst.block().and_then(|a| is_ppt(a, DEFAULT_PSD_TOL).ok()).map(|v| v.is_ppt())
    } else {
        None
    };
    let mut row = ReportRow::from_verdict(best.verdict, cfg.shape, cfg.seed, best.restart, cfg.params);
    row.hypothesis_ok = !(cfg.check == CheckId::PptReversal && best_is_ppt == Some(false));
    row.instance = Some(best.inst.to_json());
    Ok(TightnessRecord {
        check: cfg.check,
        m: cfg.shape.m,
        n: cfg.shape.n,
        seed: cfg.seed,
        restart_index: best.restart,
        perturbation_steps: best.steps,
        evaluations: evals,
        best_gap: best.gap,
        trace,
        explore: cfg.explore,
        best_is_ppt,
        best: row,
    })
}

fn offer(best: &mut Option<Best>, v: &Verdict, inst: &Instance, restart: u64, steps: usize) {
    if best.as_ref().is_none_or(|b| v.gap < b.gap) {
        *best = Some(Best {
            gap: v.gap,
            restart,
            steps,
            verdict: v.clone(),
            inst: inst.clone(),
        });
    }
}

fn push_trace(trace: &mut Vec<f64>, best: &Option<Best>) {
    trace.push(best.as_ref().map_or(f64::INFINITY, |b| b.gap));
}

fn reached(best: &Option<Best>, target: Option<f64>) -> bool {
    matches!((best, target), (Some(b), Some(t)) if b.gap <= t)
}
