use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::io::{matrix_from_record, matrix_to_record, MatrixRecord};
use crate::blockops::{BlockMatrix, BlockShape};
use crate::error::{CheckError, GenerateError};
use crate::generators::{
    complex_gaussian, gaussian_matrix, gram, GeneratorConfig, PsdLatent, Quadruple, QuadrupleLatent,
    SectorLatent, SeparableLatent,
};
use crate::inequalities::{
    check_block, check_det_four, check_three_term, determinantal_terms, CheckId, HypothesisClass, Verdict,
};
use crate::matkernel::ComplexMatrix;

/// Per-row parameters beyond the instance itself.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::serde_real::option")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

/// Even indices are full rank; odd ones cycle through ranks `1..=d`.
pub fn rank_for_index(index: u64, d: usize) -> usize {
    if index.is_multiple_of(2) {
        d
    } else {
        1 + (index / 2) as usize % d
    }
}

/// Instance family a check draws from. Explore mode feeds the determinantal
/// block checks plain PSD input without their own hypothesis test.
pub fn generation_class(check: CheckId, explore: bool) -> HypothesisClass {
    if explore && is_determinantal_block(check) {
        HypothesisClass::Psd
    } else {
        check.class()
    }
}

pub(crate) fn is_determinantal_block(check: CheckId) -> bool {
    matches!(check, CheckId::Lin | CheckId::Main | CheckId::Swapped | CheckId::PptReversal)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Block(BlockMatrix),
    Quadruple(Quadruple),
    Triple([ComplexMatrix; 3]),
}

impl Instance {
    pub fn to_json(&self) -> serde_json::Value {
        let plain = |a: &ComplexMatrix| {
            let block = BlockMatrix::new(a.rows(), 1, a.clone()).expect("square");
            serde_json::to_value(matrix_to_record(&block)).expect("record serialises")
        };
        match self {
            Instance::Block(a) => serde_json::to_value(matrix_to_record(a)).expect("record serialises"),
            Instance::Quadruple(q) => serde_json::json!({
                "x": plain(&q.x), "y": plain(&q.y), "w": plain(&q.w), "z": plain(&q.z),
            }),
            Instance::Triple([a, b, c]) => serde_json::json!({ "a": plain(a), "b": plain(b), "c": plain(c) }),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let get = |key: &str| -> Result<ComplexMatrix, String> {
            let rec: MatrixRecord = serde_json::from_value(v[key].clone()).map_err(|e| format!("{key}: {e}"))?;
            Ok(matrix_from_record(rec).map_err(|e| e.to_string())?.into_matrix())
        };
        if v.get("data").is_some() {
            let rec: MatrixRecord = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
            return matrix_from_record(rec).map(Instance::Block).map_err(|e| e.to_string());
        }
        if v.get("x").is_some() {
            return Ok(Instance::Quadruple(Quadruple { x: get("x")?, y: get("y")?, w: get("w")?, z: get("z")? }));
        }
        if v.get("a").is_some() {
            return Ok(Instance::Triple([get("a")?, get("b")?, get("c")?]));
        }
        Err("unrecognised instance layout".into())
    }

    /// Block view, when the instance is a single block matrix.
    pub fn block(&self) -> Option<&BlockMatrix> {
        match self {
            Instance::Block(a) => Some(a),
            _ => None,
        }
    }
}

/// Raw generator factors for one instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Latent {
    Psd(PsdLatent),
    Separable(SeparableLatent),
    Sector { m: usize, n: usize, latent: SectorLatent },
    Quadruple(QuadrupleLatent),
    Triple([ComplexMatrix; 3]),
}

impl Latent {
    /// Draws stream `index` of `seed`. Quadruples and triples are `ℓ x ℓ` with `ℓ = mn`.
    pub fn sample(
        class: HypothesisClass,
        shape: BlockShape,
        seed: u64,
        index: u64,
        alpha: Option<f64>,
    ) -> Result<Self, GenerateError> {
        let (m, n) = (shape.m, shape.n);
        let d = m * n;
        if d == 0 {
            return Err(GenerateError::Parameter(format!("block shape {shape} must be positive")));
        }
        let cfg = GeneratorConfig::new(seed, m, n).index(index);
        Ok(match class {
            HypothesisClass::Psd => Latent::Psd(PsdLatent::sample(&cfg.rank(rank_for_index(index, d)))?),
            HypothesisClass::Ppt => Latent::Separable(SeparableLatent::sample(&cfg)?),
            HypothesisClass::Sector => {
                let alpha = alpha.ok_or_else(|| GenerateError::Parameter("sector generator needs alpha".into()))?;
                Latent::Sector { m, n, latent: SectorLatent::sample(d, alpha, &mut cfg.rng())? }
            }
            HypothesisClass::Quadruple => Latent::Quadruple(QuadrupleLatent::sample(d, &mut cfg.rng())?),
            HypothesisClass::PsdTriple => {
                let mut rng = cfg.rng();
                Latent::Triple(std::array::from_fn(|_| gaussian_matrix(d, d, &mut rng)))
            }
        })
    }

    pub fn build(&self) -> Result<Instance, GenerateError> {
        Ok(match self {
            Latent::Psd(l) => Instance::Block(l.build()),
            Latent::Separable(l) => Instance::Block(l.build()),
            Latent::Sector { m, n, latent } => Instance::Block(BlockMatrix::new(*m, *n, latent.build()?)?),
            Latent::Quadruple(l) => Instance::Quadruple(l.build()?),
            Latent::Triple(f) => Instance::Triple([gram(&f[0]), gram(&f[1]), gram(&f[2])]),
        })
    }

    fn factors_mut(&mut self) -> Vec<&mut ComplexMatrix> {
        match self {
            Latent::Psd(l) => vec![&mut l.factor],
            Latent::Separable(l) => l.p_factors.iter_mut().chain(l.q_factors.iter_mut()).collect(),
            Latent::Sector { latent, .. } => vec![&mut latent.b_factor, &mut latent.k_factor],
            Latent::Quadruple(l) => vec![&mut l.w_factor, &mut l.z_factor, &mut l.s_factor, &mut l.u_factor],
            Latent::Triple(f) => f.iter_mut().collect(),
        }
    }

    /// Adds `σ·z` (complex Gaussian `z`) to one uniformly chosen latent coordinate.
    /// For sector latents the spread fraction `u` is one more coordinate.
    pub fn perturb(&mut self, sigma: f64, rng: &mut impl Rng) {
        if let Latent::Sector { latent, .. } = self {
            let total = 2 * latent.dim() * latent.dim() + 1;
            if rng.random_range(0..total) == 0 {
                let step: f64 = rng.sample(StandardNormal);
                latent.u = (latent.u + sigma * step).clamp(0.0, 1.0);
                return;
            }
        }
        let mut factors = self.factors_mut();
        let total: usize = factors.iter().map(|f| f.rows() * f.cols()).sum();
        if total == 0 {
            return;
        }
        let mut k = rng.random_range(0..total);
        for f in factors.iter_mut() {
            let size = f.rows() * f.cols();
            if k < size {
                let (r, c) = (k / f.cols(), k % f.cols());
                f[(r, c)] += complex_gaussian(rng) * sigma;
                return;
            }
            k -= size;
        }
    }
}

/// Draws and builds instance `(seed, index)` for `check`.
pub(crate) fn draw(
    check: CheckId,
    shape: BlockShape,
    seed: u64,
    index: u64,
    params: Params,
    explore: bool,
) -> Result<(Latent, Instance), GenerateError> {
    let latent = Latent::sample(generation_class(check, explore), shape, seed, index, params.alpha)?;
    let inst = latent.build()?;
    Ok((latent, inst))
}

/// Evaluates `check` on `inst`. With `explore` set, determinantal block
/// checks skip their hypothesis test.
pub fn evaluate(check: CheckId, inst: &Instance, params: Params, explore: bool) -> Result<Verdict, CheckError> {
    match (check, inst) {
        (CheckId::DetFour, Instance::Quadruple(q)) => check_det_four(&q.x, &q.y, &q.w, &q.z),
        (CheckId::ThreeTerm, Instance::Triple([a, b, c])) => check_three_term(a, b, c),
        (id, Instance::Block(a)) if explore && is_determinantal_block(id) => Ok(determinantal_terms(a)?.verdict(id)),
        (id, Instance::Block(a)) => check_block(id, a, params.q.unwrap_or(1.0), params.alpha),
        (id, _) => Err(CheckError::Hypothesis {
            check: id.as_str(),
            detail: "instance kind does not match the check".into(),
            witnesses: vec![],
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{instance_rng, rand_psd_block};

    #[test]
    fn rank_mix() {
        assert_eq!(rank_for_index(0, 4), 4);
        assert_eq!(rank_for_index(1, 4), 1);
        assert_eq!(rank_for_index(3, 4), 2);
        assert_eq!(rank_for_index(9, 4), 1);
    }

    #[test]
    fn psd_draw_matches_generator() {
        let shape = BlockShape::new(2, 3);
        let (_, inst) = draw(CheckId::Main, shape, 5, 3, Params::default(), false).unwrap();
        let direct = rand_psd_block(&GeneratorConfig::new(5, 2, 3).index(3).rank(2)).unwrap();
        assert_eq!(inst.block().unwrap(), &direct);
    }

    #[test]
    fn perturbed_latents_stay_in_class() {
        let mut rng = instance_rng(1, 99);
        let cases = [
            (CheckId::Main, Params::default()),
            (CheckId::PptReversal, Params::default()),
            (CheckId::SectorMain, Params { q: None, alpha: Some(0.7) }),
            (CheckId::DetFour, Params::default()),
            (CheckId::ThreeTerm, Params::default()),
        ];
        for (check, params) in cases {
            let (mut latent, _) = draw(check, BlockShape::new(2, 2), 4, 0, params, false).unwrap();
            let mut ok = 0;
            for _ in 0..40 {
                latent.perturb(0.3, &mut rng);
                if let Ok(inst) = latent.build() {
                    evaluate(check, &inst, params, false).unwrap();
                    ok += 1;
                }
            }
            assert!(ok > 0, "{check}");
        }
    }

    #[test]
    fn instance_json_roundtrip() {
        for check in [CheckId::Main, CheckId::DetFour, CheckId::ThreeTerm] {
            let (_, inst) = draw(check, BlockShape::new(1, 3), 2, 1, Params::default(), false).unwrap();
            let back = Instance::from_json(&inst.to_json()).unwrap();
            assert_eq!(back, inst);
        }
    }
}
