//! Seeded instance families for every hypothesis class the checkers use.
//!
//! Randomness comes from ChaCha20 (`rand_chacha`): the generator key is
//! expanded from the 64-bit `seed` with `SeedableRng::seed_from_u64`, and each
//! instance reads from its own ChaCha stream selected by `index`. An instance
//! therefore depends only on `(seed, index)` and the remaining config fields,
//! never on call order or thread.
//!
//! Every sampler goes through an explicit latent type (`PsdLatent`,
//! `SeparableLatent`, `SectorLatent`, `QuadrupleLatent`) holding the raw
//! Gaussian factors. The tightness search perturbs these factors and rebuilds,
//! which keeps perturbed instances inside their class by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::blockops::BlockMatrix;
use crate::cones::{is_psd, loewner_ge, DEFAULT_PSD_TOL};
use crate::error::{GenerateError, LinalgError};
use crate::matkernel::{hermitian_eig, kron, matmul, psd_sqrt, Complex64, ComplexMatrix, I};

/// Diagonal shift making the sector generator's real part positive definite.
pub const SECTOR_PD_SHIFT: f64 = 1e-3;
const QUADRUPLE_ATTEMPTS: usize = 1000;
const QUADRUPLE_SHRINK_ROUNDS: usize = 40;

type GenResult<T> = Result<T, GenerateError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    /// ChaCha stream for this instance.
    #[serde(default)]
    pub index: u64,
    pub m: usize,
    pub n: usize,
    pub rank: Option<usize>,
    pub alpha: Option<f64>,
    pub terms: Option<usize>,
}

impl GeneratorConfig {
    pub fn new(seed: u64, m: usize, n: usize) -> Self {
        Self {
            seed,
            index: 0,
            m,
            n,
            rank: None,
            alpha: None,
            terms: None,
        }
    }

    pub fn index(mut self, index: u64) -> Self {
        self.index = index;
        self
    }

    pub fn rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn terms(mut self, terms: usize) -> Self {
        self.terms = Some(terms);
        self
    }

    pub fn validate(&self) -> GenResult<()> {
        if self.m == 0 || self.n == 0 {
            return Err(GenerateError::Parameter(format!(
                "block shape {}x{} must be positive",
                self.m, self.n
            )));
        }
        if let Some(rank) = self.rank {
            if rank > self.m * self.n {
                return Err(GenerateError::Parameter(format!(
                    "rank {rank} exceeds dimension {}",
                    self.m * self.n
                )));
            }
        }
        if let Some(alpha) = self.alpha {
            check_alpha(alpha)?;
        }
        if self.terms == Some(0) {
            return Err(GenerateError::Parameter("terms must be at least 1".into()));
        }
        Ok(())
    }

    pub fn rng(&self) -> ChaCha20Rng {
        instance_rng(self.seed, self.index)
    }
}

fn check_alpha(alpha: f64) -> GenResult<()> {
    if !(0.0..FRAC_PI_2).contains(&alpha) {
        return Err(GenerateError::Parameter(format!(
            "sector half-angle {alpha} outside [0, π/2)"
        )));
    }
    Ok(())
}

/// ChaCha20 keyed from `seed`, positioned on stream `index`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`, so `E|z|² = 1`.
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// `F F*`.
pub fn gram(factor: &ComplexMatrix) -> ComplexMatrix {
    matmul(factor, &factor.adjoint()).expect("conforming shapes")
}

/// `(G + G*)/2` with standard complex Gaussian `G`.
pub fn rand_hermitian(d: usize, seed: u64) -> ComplexMatrix {
    hermitian_from(&mut instance_rng(seed, 0), d)
}

pub(crate) fn hermitian_from(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    gaussian_matrix(d, d, rng).hermitian_part()
}

/// Divides by the real trace when it is positive; returns the divisor used.
fn trace_normalize(a: ComplexMatrix) -> (ComplexMatrix, f64) {
    let t = a.trace().re;
    if t > 0.0 {
        (a.scale_real(1.0 / t), t)
    } else {
        (a, 1.0)
    }
}

// ---------------------------------------------------------------- PSD

/// `A = G G*` with `G` of shape `(mn, rank)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdLatent {
    pub m: usize,
    pub n: usize,
    pub factor: ComplexMatrix,
}

impl PsdLatent {
    pub fn sample(cfg: &GeneratorConfig) -> GenResult<Self> {
        cfg.validate()?;
        let d = cfg.m * cfg.n;
        let rank = cfg.rank.unwrap_or(d);
        let factor = gaussian_matrix(d, rank, &mut cfg.rng());
        Ok(Self {
            m: cfg.m,
            n: cfg.n,
            factor,
        })
    }

    /// Trace-normalised `G G*`; the zero matrix when `rank = 0`.
    pub fn build(&self) -> BlockMatrix {
        let (a, _) = trace_normalize(gram(&self.factor));
        BlockMatrix::new(self.m, self.n, a).expect("factor has mn rows")
    }
}

pub fn rand_psd_block(cfg: &GeneratorConfig) -> GenResult<BlockMatrix> {
    Ok(PsdLatent::sample(cfg)?.build())
}

// ---------------------------------------------------------------- PPT

/// `A = Σ_i P_i ⊗ Q_i` with `P_i = F_i F_i*`, `Q_i = H_i H_i*`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableLatent {
    pub m: usize,
    pub n: usize,
    pub p_factors: Vec<ComplexMatrix>,
    pub q_factors: Vec<ComplexMatrix>,
}

impl SeparableLatent {
    pub fn sample(cfg: &GeneratorConfig) -> GenResult<Self> {
        cfg.validate()?;
        let terms = cfg.terms.unwrap_or(cfg.m * cfg.n);
        let mut rng = cfg.rng();
        let mut p_factors = Vec::with_capacity(terms);
        let mut q_factors = Vec::with_capacity(terms);
        for _ in 0..terms {
            p_factors.push(gaussian_matrix(cfg.m, cfg.m, &mut rng));
            q_factors.push(gaussian_matrix(cfg.n, cfg.n, &mut rng));
        }
        Ok(Self {
            m: cfg.m,
            n: cfg.n,
            p_factors,
            q_factors,
        })
    }

    pub fn build(&self) -> BlockMatrix {
        let ps: Vec<_> = self.p_factors.iter().map(gram).collect();
        let qs: Vec<_> = self.q_factors.iter().map(gram).collect();
        separable_from_parts(&ps, &qs).expect("factor shapes fixed at sampling")
    }
}

/// Trace-normalised `Σ P_i ⊗ Q_i` from explicit PSD factors.
pub fn separable_from_parts(ps: &[ComplexMatrix], qs: &[ComplexMatrix]) -> GenResult<BlockMatrix> {
    if ps.is_empty() || ps.len() != qs.len() {
        return Err(GenerateError::Parameter(format!(
            "need matching non-empty factor lists, got {} and {}",
            ps.len(),
            qs.len()
        )));
    }
    let (m, n) = (ps[0].rows(), qs[0].rows());
    let mut acc = ComplexMatrix::zeros(m * n, m * n);
    for (p, q) in ps.iter().zip(qs) {
        if !p.is_square() || !q.is_square() || p.rows() != m || q.rows() != n {
            return Err(LinalgError::dim("separable_from_parts", "inconsistent factor shapes").into());
        }
        acc = &acc + &kron(p, q);
    }
    let (a, _) = trace_normalize(acc);
    Ok(BlockMatrix::new(m, n, a)?)
}

pub fn rand_ppt_separable(cfg: &GeneratorConfig) -> GenResult<BlockMatrix> {
    Ok(SeparableLatent::sample(cfg)?.build())
}

// ---------------------------------------------------------------- sector

/// `A = B + i B^{1/2} K B^{1/2}` with `B = F F* + 1e-3 I` and `K` the
/// Hermitian part of `k_factor`, rescaled so `λ_max(|K|) = u tan α`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorLatent {
    pub alpha: f64,
    pub b_factor: ComplexMatrix,
    pub k_factor: ComplexMatrix,
    pub u: f64,
}

impl SectorLatent {
    pub fn sample(d: usize, alpha: f64, rng: &mut impl Rng) -> GenResult<Self> {
        check_alpha(alpha)?;
        if d == 0 {
            return Err(GenerateError::Parameter("dimension must be positive".into()));
        }
        let b_factor = gaussian_matrix(d, d, rng);
        let k_factor = gaussian_matrix(d, d, rng);
        let u = rng.random::<f64>();
        Ok(Self {
            alpha,
            b_factor,
            k_factor,
            u,
        })
    }

    pub fn dim(&self) -> usize {
        self.b_factor.rows()
    }

    pub fn real_part(&self) -> ComplexMatrix {
        let d = self.dim();
        &gram(&self.b_factor) + &ComplexMatrix::identity(d).scale_real(SECTOR_PD_SHIFT)
    }

    pub fn shape_matrix(&self) -> GenResult<ComplexMatrix> {
        let k = self.k_factor.hermitian_part();
        let spec = hermitian_eig(&k)?;
        let radius = spec.lambda_max().abs().max(spec.lambda_min().abs());
        let target = self.u.clamp(0.0, 1.0) * self.alpha.tan();
        if radius == 0.0 || target == 0.0 {
            return Ok(ComplexMatrix::zeros(self.dim(), self.dim()));
        }
        Ok(k.scale_real(target / radius))
    }

    pub fn build(&self) -> GenResult<ComplexMatrix> {
        sector_from_parts(&self.real_part(), &self.shape_matrix()?)
    }
}

/// `B + i B^{1/2} K B^{1/2}`; exactly `B` when `K = 0`.
pub fn sector_from_parts(b: &ComplexMatrix, k: &ComplexMatrix) -> GenResult<ComplexMatrix> {
    if k.max_abs() == 0.0 {
        return Ok(b.clone());
    }
    let root = psd_sqrt(b)?;
    let im = matmul(&matmul(&root, k)?, &root)?.hermitian_part();
    Ok(b.try_add(&im.scale(I))?)
}

/// Sector matrix of size `d` with `W(A) ⊆ S_α`.
pub fn rand_sector(d: usize, alpha: f64, seed: u64) -> GenResult<ComplexMatrix> {
    SectorLatent::sample(d, alpha, &mut instance_rng(seed, 0))?.build()
}

/// Block-tagged sector instance for `cfg.m x cfg.n` blocks; `cfg.alpha` is required.
pub fn rand_sector_block(cfg: &GeneratorConfig) -> GenResult<BlockMatrix> {
    cfg.validate()?;
    let alpha = cfg
        .alpha
        .ok_or_else(|| GenerateError::Parameter("sector generator needs alpha".into()))?;
    let a = SectorLatent::sample(cfg.m * cfg.n, alpha, &mut cfg.rng())?.build()?;
    Ok(BlockMatrix::new(cfg.m, cfg.n, a)?)
}

// ---------------------------------------------------------------- lemma quadruple

/// Inputs `(X, Y, W, Z)` of the four-determinant lemma.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadruple {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub w: ComplexMatrix,
    pub z: ComplexMatrix,
}

/// `W, Z, S, U` Gram factors; `X = W + S`, `Y = clip(Z − S) + U`, with `Z`
/// scaled by `z_scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrupleLatent {
    pub w_factor: ComplexMatrix,
    pub z_factor: ComplexMatrix,
    pub s_factor: ComplexMatrix,
    pub u_factor: ComplexMatrix,
    pub z_scale: f64,
}

impl QuadrupleLatent {
    fn draw(ell: usize, z_scale: f64, rng: &mut impl Rng) -> Self {
        Self {
            w_factor: gaussian_matrix(ell, ell, rng),
            z_factor: gaussian_matrix(ell, ell, rng),
            s_factor: gaussian_matrix(ell, ell, rng),
            u_factor: gaussian_matrix(ell, ell, rng),
            z_scale,
        }
    }

    /// Rejection sampling on `X ≥ Z`: up to 1000 redraws, then `Z` is shrunk
    /// by half and the redraws start again.
    pub fn sample(ell: usize, rng: &mut impl Rng) -> GenResult<Self> {
        if ell == 0 {
            return Err(GenerateError::Parameter("ell must be at least 1".into()));
        }
        let mut z_scale = 1.0;
        for _ in 0..QUADRUPLE_SHRINK_ROUNDS {
            for _ in 0..QUADRUPLE_ATTEMPTS {
                let latent = Self::draw(ell, z_scale, rng);
                if latent.build().is_ok() {
                    return Ok(latent);
                }
            }
            z_scale *= 0.5;
        }
        Err(GenerateError::Exhausted {
            attempts: QUADRUPLE_ATTEMPTS * QUADRUPLE_SHRINK_ROUNDS,
            detail: "could not satisfy X ≥ Z".into(),
        })
    }

    pub fn build(&self) -> GenResult<Quadruple> {
        quadruple_from_parts(
            &gram(&self.w_factor),
            &gram(&self.z_factor).scale_real(self.z_scale),
            &gram(&self.s_factor),
            &gram(&self.u_factor),
        )
    }
}

/// Zeroes the negative eigenvalues of a Hermitian matrix.
pub fn psd_clip(a: &ComplexMatrix) -> GenResult<ComplexMatrix> {
    Ok(hermitian_eig(a)?.apply(|l| l.max(0.0)))
}

/// Builds `X = W + S`, `Y = clip(Z − S) + U` and re-verifies every lemma
/// hypothesis; never returns an invalid quadruple.
pub fn quadruple_from_parts(
    w: &ComplexMatrix,
    z: &ComplexMatrix,
    s: &ComplexMatrix,
    u: &ComplexMatrix,
) -> GenResult<Quadruple> {
    let x = w.try_add(s)?;
    let y = psd_clip(&z.try_sub(s)?)?.try_add(u)?;
    let q = Quadruple {
        x,
        y,
        w: w.clone(),
        z: z.clone(),
    };
    verify_quadruple(&q)?;
    Ok(q)
}

/// Checks `X, Y, W, Z ≥ 0`, `X + Y ≥ W + Z`, `X ≥ W` and `X ≥ Z`.
pub fn verify_quadruple(q: &Quadruple) -> GenResult<()> {
    for (name, mat) in [("X", &q.x), ("Y", &q.y), ("W", &q.w), ("Z", &q.z)] {
        let v = is_psd(mat, DEFAULT_PSD_TOL)?;
        if !v.is_psd {
            return Err(GenerateError::Parameter(format!("{name} not PSD (λ_min {:e})", v.lambda_min)));
        }
    }
    let sum_lhs = q.x.try_add(&q.y)?;
    let sum_rhs = q.w.try_add(&q.z)?;
    let checks = [
        ("X + Y ≥ W + Z", loewner_ge(&sum_lhs, &sum_rhs, DEFAULT_PSD_TOL)?),
        ("X ≥ W", loewner_ge(&q.x, &q.w, DEFAULT_PSD_TOL)?),
        ("X ≥ Z", loewner_ge(&q.x, &q.z, DEFAULT_PSD_TOL)?),
    ];
    for (name, v) in checks {
        if !v.is_psd {
            return Err(GenerateError::Parameter(format!("{name} fails (λ_min {:e})", v.lambda_min)));
        }
    }
    Ok(())
}

pub fn rand_lemma_quadruple(ell: usize, seed: u64) -> GenResult<Quadruple> {
    QuadrupleLatent::sample(ell, &mut instance_rng(seed, 0))?.build()
}

/// Random PSD Gram matrix `F F*` with square `F`.
pub fn rand_gram(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    gram(&gaussian_matrix(d, d, rng))
}
