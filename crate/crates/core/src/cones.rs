//! Order and sector predicates: PSD tests, Löwner comparison, PPT, the
//! Cartesian decomposition and sector membership.
//!
//! Sector membership is decided algebraically. With `R = ℜA` positive
//! definite and `K = R^{-1/2} (ℑA) R^{-1/2}`, the condition
//! `|x*(ℑA)x| ≤ tan α · x*(ℜA)x` for all `x` is equivalent to
//! `λ_max(|K|) ≤ tan α`, so the smallest admissible half-angle is
//! `arctan λ_max(|K|)`. [`support_function`] and [`grid_sector_angle`] give an
//! independent route through the numerical range and are kept for
//! cross-checking only.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::blockops::BlockMatrix;
use crate::error::{LinalgError, Result};
use crate::matkernel::{hermitian_eig, matmul, Complex64, ComplexMatrix};

/// Default PSD tolerance scale: `λ_min ≥ −1e-10 · max(1, λ_max)`.
pub const DEFAULT_PSD_TOL: f64 = 1e-10;
const HERMITIAN_INPUT_TOL: f64 = 1e-10;
/// `ℜA` counts as positive definite when `λ_min > 1e-12 · max(1, λ_max)`.
pub const RE_PD_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorParams {
    alpha: f64,
    tan_alpha: f64,
}

impl SectorParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&alpha) {
            return Err(LinalgError::domain(
                "SectorParams",
                format!("half-angle {alpha} outside [0, π/2)"),
            ));
        }
        Ok(Self {
            alpha,
            tan_alpha: alpha.tan(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tan_alpha(&self) -> f64 {
        self.tan_alpha
    }

    /// Whether the scalar `z` lies in `S_α = {re^{iθ} : r > 0, |θ| ≤ α}`.
    pub fn contains_scalar(&self, z: Complex64) -> bool {
        z.re > 0.0 && z.im.abs() <= z.re * self.tan_alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub is_psd: bool,
    pub tolerance_used: f64,
}

/// `(ℜA, ℑA)` with `ℜA = (A + A*)/2` and `ℑA = (A − A*)/(2i)`.
pub fn cartesian_parts(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.require_square("cartesian_parts")?;
    let re = a.hermitian_part();
    let im = ComplexMatrix::from_fn(n, n, |i, j| {
        // (a_ij − conj a_ji) / 2i
        let d = a[(i, j)] - a[(j, i)].conj();
        Complex64::new(d.im, -d.re) * 0.5
    });
    Ok((re, im))
}

fn require_hermitian(a: &ComplexMatrix, op: &'static str) -> Result<()> {
    a.require_square(op)?;
    let defect = a.hermitian_defect();
    let norm = a.frobenius_norm();
    if defect > HERMITIAN_INPUT_TOL * norm {
        return Err(LinalgError::domain(
            op,
            format!("input is not Hermitian: ‖a − a*‖_F = {defect:e}, ‖a‖_F = {norm:e}"),
        ));
    }
    Ok(())
}

fn psd_with_tolerance(a: &ComplexMatrix, tolerance: f64) -> Result<PsdVerdict> {
    let spec = hermitian_eig(&a.hermitian_part())?;
    let lambda_min = spec.lambda_min();
    Ok(PsdVerdict {
        lambda_min,
        lambda_max: spec.lambda_max(),
        is_psd: lambda_min >= -tolerance,
        tolerance_used: tolerance,
    })
}

/// PSD test with tolerance `tol_scale · max(1, λ_max)`.
pub fn is_psd(a: &ComplexMatrix, tol_scale: f64) -> Result<PsdVerdict> {
    require_hermitian(a, "is_psd")?;
    let spec = hermitian_eig(&a.hermitian_part())?;
    let tolerance = tol_scale * spec.lambda_max().max(1.0);
    let lambda_min = spec.lambda_min();
    Ok(PsdVerdict {
        lambda_min,
        lambda_max: spec.lambda_max(),
        is_psd: lambda_min >= -tolerance,
        tolerance_used: tolerance,
    })
}

/// `a ≥ b` in the Löwner order, tolerance `tol_scale · max(1, ‖a‖_F, ‖b‖_F)`.
pub fn loewner_ge(a: &ComplexMatrix, b: &ComplexMatrix, tol_scale: f64) -> Result<PsdVerdict> {
    require_hermitian(a, "loewner_ge")?;
    require_hermitian(b, "loewner_ge")?;
    let diff = a.try_sub(b)?;
    let scale = a.frobenius_norm().max(b.frobenius_norm()).max(1.0);
    psd_with_tolerance(&diff, tol_scale * scale)
}

/// PSD verdicts for `A` and its partial transpose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptVerdict {
    pub direct: PsdVerdict,
    pub transposed: PsdVerdict,
}

impl PptVerdict {
    pub fn is_ppt(&self) -> bool {
        self.direct.is_psd && self.transposed.is_psd
    }
}

pub fn is_ppt(a: &BlockMatrix, tol_scale: f64) -> Result<PptVerdict> {
    Ok(PptVerdict {
        direct: is_psd(a.matrix(), tol_scale)?,
        transposed: is_psd(a.partial_transpose().matrix(), tol_scale)?,
    })
}

/// Smallest sector half-angle containing `W(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorMargin {
    /// `f64::INFINITY` when `ℜA` is not positive definite.
    pub alpha_min: f64,
    pub re_pd: bool,
}

impl SectorMargin {
    /// `W(A) ⊆ S_α`, allowing `slack` radians of round-off.
    pub fn within(&self, alpha: f64, slack: f64) -> bool {
        self.re_pd && self.alpha_min <= alpha + slack
    }
}

pub fn sector_margin(a: &ComplexMatrix) -> Result<SectorMargin> {
    let (re, im) = cartesian_parts(a)?;
    let spec = hermitian_eig(&re)?;
    let lmin = spec.lambda_min();
    if lmin <= RE_PD_CUTOFF * spec.lambda_max().max(1.0) {
        return Ok(SectorMargin {
            alpha_min: f64::INFINITY,
            re_pd: false,
        });
    }
    let inv_root = spec.apply(|l| 1.0 / l.sqrt());
    let k = matmul(&matmul(&inv_root, &im)?, &inv_root)?.hermitian_part();
    let ks = hermitian_eig(&k)?;
    let radius = ks.lambda_max().abs().max(ks.lambda_min().abs());
    Ok(SectorMargin {
        alpha_min: radius.atan(),
        re_pd: true,
    })
}

/// `λ_min(ℜ(e^{−iθ} A))`: the support of `W(A)` in direction `e^{iθ}`,
/// measured as the smallest projection `min_{z ∈ W(A)} ℜ(e^{−iθ} z)`.
pub fn support_function(a: &ComplexMatrix, theta: f64) -> Result<f64> {
    a.require_square("support_function")?;
    let rotated = a.scale(Complex64::from_polar(1.0, -theta));
    Ok(hermitian_eig(&rotated.hermitian_part())?.lambda_min())
}

/// Sector half-angle estimated from the support function alone.
///
/// Evaluates [`support_function`] on a uniform grid of `points` angles over
/// `[−π/2, π/2]`, takes the arc around `θ = 0` where it is non-negative and
/// refines both arc ends by bisection. Returns `None` when the support
/// function is not positive at `θ = 0` (no sector contains `W(A)`).
pub fn grid_sector_angle(a: &ComplexMatrix, points: usize) -> Result<Option<f64>> {
    let h = |t: f64| support_function(a, t);
    if h(0.0)? <= 0.0 {
        return Ok(None);
    }
    let points = points.max(3);
    let step = std::f64::consts::PI / (points - 1) as f64;
    let edge = |dir: f64| -> Result<f64> {
        let mut inside = 0.0;
        let mut k = 1;
        loop {
            let t = (k as f64 * step).min(FRAC_PI_2);
            if h(dir * t)? < 0.0 {
                let (mut lo, mut hi) = (inside, t);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if h(dir * mid)? >= 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(lo);
            }
            inside = t;
            if t >= FRAC_PI_2 {
                return Ok(FRAC_PI_2);
            }
            k += 1;
        }
    };
    let reach = edge(1.0)?.min(edge(-1.0)?);
    Ok(Some(FRAC_PI_2 - reach))
}
