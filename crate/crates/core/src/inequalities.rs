//! One checker per inequality, each producing a [`Verdict`].
//!
//! Determinantal checkers work on trace-normalised copies of their input.
//! Every compared quantity is homogeneous of degree `mn` in `A`, so dividing
//! by `tr A` (or `tr|A|` for sector inputs) keeps `(tr A)^{mn}` at 1 without
//! changing which side is larger. The divisor is recorded in `scale_note`.
//!
//! A checker returns `Err(CheckError::Hypothesis)` when its input is outside
//! the class the inequality is stated for. That is not a counterexample and
//! is never folded into `holds`.

use std::fmt;
use std::str::FromStr;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::blockops::{embed_left, embed_right, BlockMatrix};
use crate::cones::{cartesian_parts, is_ppt, is_psd, loewner_ge, sector_margin, DEFAULT_PSD_TOL, RE_PD_CUTOFF};
use crate::error::{CheckError, LinalgError};
use crate::serde_real::Real;
use crate::matkernel::{hermitian_eig, lu_det, schatten_norm, singular_values, ComplexMatrix};

/// Relative tolerance for scalar inequalities: `1e-9 · max(1, |lhs|, |rhs|)`.
pub const SCALAR_TOL: f64 = 1e-9;
/// Relative tolerance for Löwner inequalities: `1e-8 · max(1, ‖A‖_F)`.
pub const LOEWNER_TOL: f64 = 1e-8;
/// Slack in radians when checking a supplied sector angle against the measured one.
pub const SECTOR_ANGLE_SLACK: f64 = 1e-9;

type CheckResult = Result<Verdict, CheckError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Schatten,
    Ando,
    Complement,
    PptMap,
    Lin,
    Main,
    Swapped,
    PptReversal,
    DetFour,
    ThreeTerm,
    SectorDet,
    ReSingular,
    SectorMain,
}

/// Which instance family a check draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisClass {
    Psd,
    Ppt,
    Quadruple,
    PsdTriple,
    Sector,
}

impl CheckId {
    pub const ALL: [CheckId; 13] = [
        CheckId::Schatten,
        CheckId::Ando,
        CheckId::Complement,
        CheckId::PptMap,
        CheckId::Lin,
        CheckId::Main,
        CheckId::Swapped,
        CheckId::PptReversal,
        CheckId::DetFour,
        CheckId::ThreeTerm,
        CheckId::SectorDet,
        CheckId::ReSingular,
        CheckId::SectorMain,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::Schatten => "schatten",
            CheckId::Ando => "ando",
            CheckId::Complement => "complement",
            CheckId::PptMap => "ppt_map",
            CheckId::Lin => "lin",
            CheckId::Main => "main",
            CheckId::Swapped => "swapped",
            CheckId::PptReversal => "ppt_reversal",
            CheckId::DetFour => "det_four",
            CheckId::ThreeTerm => "three_term",
            CheckId::SectorDet => "sector_det",
            CheckId::ReSingular => "re_singular",
            CheckId::SectorMain => "sector_main",
        }
    }

    pub fn class(&self) -> HypothesisClass {
        match self {
            CheckId::Schatten
            | CheckId::Ando
            | CheckId::Complement
            | CheckId::PptMap
            | CheckId::Lin
            | CheckId::Main
            | CheckId::Swapped => HypothesisClass::Psd,
            CheckId::PptReversal => HypothesisClass::Ppt,
            CheckId::DetFour => HypothesisClass::Quadruple,
            CheckId::ThreeTerm => HypothesisClass::PsdTriple,
            CheckId::SectorDet | CheckId::ReSingular | CheckId::SectorMain => HypothesisClass::Sector,
        }
    }

    /// Löwner (eigenvalue) checks use the looser `LOEWNER_TOL`.
    pub fn is_loewner(&self) -> bool {
        matches!(self, CheckId::Ando | CheckId::Complement | CheckId::PptMap)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

impl Serialize for CheckId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for CheckId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Named real quantities in insertion order; serialises as a JSON object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Terms(Vec<(String, f64)>);

impl Terms {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &str, value: f64) -> &mut Self {
        self.0.push((name.to_owned(), value));
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<const N: usize> From<[(&str, f64); N]> for Terms {
    fn from(items: [(&str, f64); N]) -> Self {
        Terms(items.iter().map(|&(k, v)| (k.to_owned(), v)).collect())
    }
}

impl Serialize for Terms {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &Real(*v))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Terms {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct TermsVisitor;
        impl<'de> Visitor<'de> for TermsVisitor {
            type Value = Terms;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map of term names to numbers")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Terms, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, Real>()? {
                    out.push((k, v.0));
                }
                Ok(Terms(out))
            }
        }
        d.deserialize_map(TermsVisitor)
    }
}

/// Trace normalisation applied before evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    /// The input was divided by this.
    pub divisor: f64,
    /// Original terms equal normalised terms times `divisor^degree`.
    pub degree: u32,
}

impl Normalization {
    pub fn restore(&self, value: f64) -> f64 {
        value * self.divisor.powi(self.degree as i32)
    }
}

/// Outcome of evaluating one inequality on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub id: CheckId,
    pub terms: Terms,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub holds: bool,
    pub scale_note: String,
    pub normalization: Option<Normalization>,
}

impl Verdict {
    fn scalar(id: CheckId, terms: Terms, lhs: f64, rhs: f64) -> Self {
        let tolerance = SCALAR_TOL * lhs.abs().max(rhs.abs()).max(1.0);
        let gap = lhs - rhs;
        Self {
            id,
            terms,
            lhs,
            rhs,
            gap,
            tolerance,
            holds: gap >= -tolerance,
            scale_note: "none".into(),
            normalization: None,
        }
    }

    /// `lhs = λ_min` of the difference matrix, `rhs = 0`.
    fn loewner(id: CheckId, terms: Terms, lambda_min: f64, scale: f64) -> Self {
        let tolerance = LOEWNER_TOL * scale.max(1.0);
        Self {
            id,
            terms,
            lhs: lambda_min,
            rhs: 0.0,
            gap: lambda_min,
            tolerance,
            holds: lambda_min >= -tolerance,
            scale_note: "none".into(),
            normalization: None,
        }
    }

    fn normalized(mut self, norm: Normalization, what: &str) -> Self {
        self.scale_note = format!(
            "{what}-normalized: input divided by {:e}; terms scale by that factor^{}",
            norm.divisor, norm.degree
        );
        self.normalization = Some(norm);
        self
    }

    /// Rescales the tolerance to `coef · scale` in place of the default coefficient.
    pub fn with_tolerance_coefficient(mut self, coef: f64) -> Self {
        self.tolerance *= coef / default_tolerance_coefficient(self.id);
        self.holds = self.gap >= -self.tolerance;
        self
    }

    /// Recomputes `(lhs, rhs)` from the stored terms alone.
    pub fn recompose(&self) -> Option<(f64, f64)> {
        recompose(self.id, &self.terms)
    }
}

pub fn default_tolerance_coefficient(id: CheckId) -> f64 {
    if id.is_loewner() {
        LOEWNER_TOL
    } else {
        SCALAR_TOL
    }
}

/// Recomputes `(lhs, rhs)` of a check from its recorded terms.
pub fn recompose(id: CheckId, t: &Terms) -> Option<(f64, f64)> {
    let g = |k: &str| t.get(k);
    Some(match id {
        CheckId::Schatten => (g("trace")? + g("norm_a")?, g("norm_tr1")? + g("norm_tr2")?),
        CheckId::Ando | CheckId::Complement => (g("lambda_min")?, 0.0),
        CheckId::PptMap => (g("lambda_min_cp")?.min(g("lambda_min_ccp")?), 0.0),
        CheckId::Lin => (g("tr_pow")? + g("det_a")?, g("det_tr1_pow")? + g("det_tr2_pow")?),
        CheckId::Main => (
            g("tr_pow")? - g("det_tr2_pow")?,
            (g("det_a")? - g("det_tr1_pow")?).abs(),
        ),
        CheckId::Swapped => (g("tr_pow")? + g("det_tr1_pow")?, g("det_a")? + g("det_tr2_pow")?),
        CheckId::PptReversal => (g("tr_pow")? + g("det_tr2_pow")?, g("det_a")? + g("det_tr1_pow")?),
        CheckId::DetFour => (g("det_x")? + g("det_y")?, g("det_w")? + g("det_z")?),
        CheckId::ThreeTerm => (g("det_abc")? + g("det_c")?, g("det_ac")? + g("det_bc")?),
        CheckId::SectorDet => (g("sec_pow")? * g("det_re")?, g("abs_det")?),
        CheckId::ReSingular => {
            if g("part2_applicable")? > 0.0 {
                (g("abs_det")?, g("det_re")? + g("abs_det_im")?)
            } else {
                (g("min_singular_gap")?, 0.0)
            }
        }
        CheckId::SectorMain => (
            g("tr_abs_pow")? + g("abs_det_tr1_pow")?,
            g("cos_pow")? * g("abs_det")? + g("cos_pow")? * g("abs_det_tr2_pow")?,
        ),
    })
}

// ---------------------------------------------------------------- hypotheses

fn require_psd(check: CheckId, name: &str, a: &ComplexMatrix) -> Result<(), CheckError> {
    let fail = |detail: String, lambda: f64| CheckError::Hypothesis {
        check: check.as_str(),
        detail,
        witnesses: vec![(format!("lambda_min_{name}"), lambda)],
    };
    match is_psd(a, DEFAULT_PSD_TOL) {
        Ok(v) if v.is_psd => Ok(()),
        Ok(v) => Err(fail(format!("{name} is not PSD (λ_min = {:e})", v.lambda_min), v.lambda_min)),
        Err(LinalgError::Domain { detail, .. }) => Err(fail(format!("{name}: {detail}"), f64::NAN)),
        Err(e) => Err(e.into()),
    }
}

fn real_det(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(lu_det(a)?.re)
}

fn normalize_by_trace(a: &BlockMatrix) -> (BlockMatrix, Normalization) {
    let t = a.trace().re;
    let degree = a.dim() as u32;
    if t > 0.0 {
        (a.scale_real(1.0 / t), Normalization { divisor: t, degree })
    } else {
        (a.clone(), Normalization { divisor: 1.0, degree })
    }
}

// ---------------------------------------------------------------- Schatten

/// `tr A + ‖A‖_q ≥ ‖tr₁A‖_q + ‖tr₂A‖_q` for PSD `A`; `q = ∞` allowed.
pub fn check_schatten(a: &BlockMatrix, q: f64) -> CheckResult {
    require_psd(CheckId::Schatten, "A", a.matrix())?;
    let trace = a.trace().re;
    let norm_a = schatten_norm(a.matrix(), q)?;
    let norm_tr1 = schatten_norm(&a.partial_trace_1(), q)?;
    let norm_tr2 = schatten_norm(&a.partial_trace_2(), q)?;
    let terms = Terms::from([
        ("trace", trace),
        ("norm_a", norm_a),
        ("norm_tr1", norm_tr1),
        ("norm_tr2", norm_tr2),
        ("q", q),
    ]);
    let (lhs, rhs) = recompose(CheckId::Schatten, &terms).expect("terms present");
    Ok(Verdict::scalar(CheckId::Schatten, terms, lhs, rhs))
}

// ---------------------------------------------------------------- Löwner checks

/// `(tr A) I + A − I ⊗ tr₁A − tr₂A ⊗ I`.
pub fn ando_difference(a: &BlockMatrix) -> Result<ComplexMatrix, LinalgError> {
    let (m, n) = (a.m(), a.n());
    let d = a.dim();
    let lhs = &ComplexMatrix::identity(d).scale(a.trace()) + a.matrix();
    let rhs = embed_left(&a.partial_trace_1(), m)?.into_matrix().try_add(embed_right(&a.partial_trace_2(), n)?.matrix())?;
    lhs.try_sub(&rhs)
}

/// `(tr A) I + I ⊗ tr₁A − A − tr₂A ⊗ I`.
pub fn complement_difference(a: &BlockMatrix) -> Result<ComplexMatrix, LinalgError> {
    let (m, n) = (a.m(), a.n());
    let d = a.dim();
    let lhs = ComplexMatrix::identity(d).scale(a.trace()).try_add(embed_left(&a.partial_trace_1(), m)?.matrix())?;
    let rhs = a.matrix().try_add(embed_right(&a.partial_trace_2(), n)?.matrix())?;
    lhs.try_sub(&rhs)
}

fn loewner_verdict(id: CheckId, a: &BlockMatrix, diff: &ComplexMatrix) -> CheckResult {
    let spec = hermitian_eig(&diff.hermitian_part())?;
    let terms = Terms::from([
        ("lambda_min", spec.lambda_min()),
        ("lambda_max", spec.lambda_max()),
        ("trace", a.trace().re),
    ]);
    Ok(Verdict::loewner(id, terms, spec.lambda_min(), a.matrix().frobenius_norm()))
}

/// `(tr A) I ⊗ I + A ≥ I ⊗ tr₁A + tr₂A ⊗ I` for PSD `A`.
pub fn check_ando_loewner(a: &BlockMatrix) -> CheckResult {
    require_psd(CheckId::Ando, "A", a.matrix())?;
    loewner_verdict(CheckId::Ando, a, &ando_difference(a)?)
}

/// `(tr A) I ⊗ I − tr₂A ⊗ I ≥ A − I ⊗ tr₁A` for PSD `A`.
pub fn check_complement_loewner(a: &BlockMatrix) -> CheckResult {
    require_psd(CheckId::Complement, "A", a.matrix())?;
    loewner_verdict(CheckId::Complement, a, &complement_difference(a)?)
}

/// `Φ(X) = (tr X) I + X`.
pub fn phi(x: &ComplexMatrix) -> ComplexMatrix {
    &ComplexMatrix::identity(x.rows()).scale(x.trace()) + x
}

/// The `m = 2` certificate
/// `H = [[Φ(A₂₂), −Φ(A₁₂)], [−Φ(A₂₁), Φ(A₁₁)]]`, which is PSD whenever `A` is.
pub fn complement_certificate(a: &BlockMatrix) -> Result<ComplexMatrix, LinalgError> {
    if a.m() != 2 {
        return Err(LinalgError::dim("complement_certificate", format!("needs m = 2, got m = {}", a.m())));
    }
    let b = |i, j| a.block_at(i, j).map(|x| phi(&x));
    let grid = vec![vec![b(1, 1)?, -&b(0, 1)?], vec![-&b(1, 0)?, b(0, 0)?]];
    Ok(BlockMatrix::assemble(&grid)?.into_matrix())
}

/// Positivity of `[Φ(A_{i,j})]` and of `[Φ(A_{j,i})]` for PSD `A`.
pub fn check_ppt_map(a: &BlockMatrix) -> CheckResult {
    require_psd(CheckId::PptMap, "A", a.matrix())?;
    let image = a.map_blocks(phi)?;
    let swapped = image.partial_transpose();
    let cp = hermitian_eig(&image.matrix().hermitian_part())?.lambda_min();
    let ccp = hermitian_eig(&swapped.matrix().hermitian_part())?.lambda_min();
    let terms = Terms::from([("lambda_min_cp", cp), ("lambda_min_ccp", ccp), ("trace", a.trace().re)]);
    Ok(Verdict::loewner(CheckId::PptMap, terms, cp.min(ccp), a.matrix().frobenius_norm()))
}

// ---------------------------------------------------------------- determinantal

/// The four quantities shared by the block determinantal inequalities,
/// evaluated on the trace-normalised input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantalTerms {
    /// `(tr A)^{mn}`
    pub tr_pow: f64,
    /// `det A`
    pub det_a: f64,
    /// `det(tr₁A)^m`
    pub det_tr1_pow: f64,
    /// `det(tr₂A)^n`
    pub det_tr2_pow: f64,
    pub normalization: Normalization,
}

/// Evaluates the four determinantal terms without any hypothesis check.
pub fn determinantal_terms(a: &BlockMatrix) -> Result<DeterminantalTerms, LinalgError> {
    let (m, n) = (a.m() as i32, a.n() as i32);
    let (b, normalization) = normalize_by_trace(a);
    Ok(DeterminantalTerms {
        tr_pow: b.trace().re.powi(m * n),
        det_a: real_det(b.matrix())?,
        det_tr1_pow: real_det(&b.partial_trace_1())?.powi(m),
        det_tr2_pow: real_det(&b.partial_trace_2())?.powi(n),
        normalization,
    })
}

impl DeterminantalTerms {
    fn terms(&self) -> Terms {
        Terms::from([
            ("tr_pow", self.tr_pow),
            ("det_a", self.det_a),
            ("det_tr1_pow", self.det_tr1_pow),
            ("det_tr2_pow", self.det_tr2_pow),
        ])
    }

    /// Verdict for one of `Lin`, `Main`, `Swapped`, `PptReversal`.
    pub fn verdict(&self, id: CheckId) -> Verdict {
        let mut terms = self.terms();
        if id == CheckId::Main {
            let branch = if self.det_a - self.det_tr1_pow >= 0.0 { 1.0 } else { -1.0 };
            terms.push("abs_branch", branch);
        }
        let (lhs, rhs) = recompose(id, &terms).expect("determinantal check id");
        Verdict::scalar(id, terms, lhs, rhs).normalized(self.normalization, "trace")
    }
}

/// `(tr A)^{mn} + det A ≥ det(tr₁A)^m + det(tr₂A)^n` for PSD `A`.
pub fn check_lin(a: &BlockMatrix) -> CheckResult {
    require_psd(CheckId::Lin, "A", a.matrix())?;
    Ok(determinantal_terms(a)?.verdict(CheckId::Lin))
}

/// `(tr A)^{mn} − det(tr₂A)^n ≥ |det A − det(tr₁A)^m|` for PSD `A`.
pub fn check_main(a: &BlockMatrix) -> CheckResult {
    require_psd(CheckId::Main, "A", a.matrix())?;
    Ok(determinantal_terms(a)?.verdict(CheckId::Main))
}

/// `(tr A)^{mn} + det(tr₁A)^m ≥ det A + det(tr₂A)^n` for PSD `A`.
pub fn check_swapped(a: &BlockMatrix) -> CheckResult {
    require_psd(CheckId::Swapped, "A", a.matrix())?;
    Ok(determinantal_terms(a)?.verdict(CheckId::Swapped))
}

/// `(tr A)^{mn} + det(tr₂A)^n ≥ det A + det(tr₁A)^m` for PPT `A`.
pub fn check_ppt_reversal(a: &BlockMatrix) -> CheckResult {
    let v = match is_ppt(a, DEFAULT_PSD_TOL) {
        Ok(v) => v,
        Err(LinalgError::Domain { detail, .. }) => {
            return Err(CheckError::Hypothesis {
                check: CheckId::PptReversal.as_str(),
                detail,
                witnesses: vec![],
            })
        }
        Err(e) => return Err(e.into()),
    };
    if !v.is_ppt() {
        return Err(CheckError::Hypothesis {
            check: CheckId::PptReversal.as_str(),
            detail: format!(
                "input is not PPT (λ_min(A) = {:e}, λ_min(A^τ) = {:e})",
                v.direct.lambda_min, v.transposed.lambda_min
            ),
            witnesses: vec![
                ("lambda_min_a".into(), v.direct.lambda_min),
                ("lambda_min_a_tau".into(), v.transposed.lambda_min),
            ],
        });
    }
    Ok(determinantal_terms(a)?.verdict(CheckId::PptReversal))
}

/// `det X + det Y ≥ det W + det Z` given `X + Y ≥ W + Z`, `X ≥ W`, `X ≥ Z`, all PSD.
pub fn check_det_four(x: &ComplexMatrix, y: &ComplexMatrix, w: &ComplexMatrix, z: &ComplexMatrix) -> CheckResult {
    let id = CheckId::DetFour;
    for (name, mat) in [("X", x), ("Y", y), ("W", w), ("Z", z)] {
        require_psd(id, name, mat)?;
    }
    let sum_l = x.try_add(y)?;
    let sum_r = w.try_add(z)?;
    let pre = [
        ("X + Y ≥ W + Z", loewner_ge(&sum_l, &sum_r, LOEWNER_TOL)?),
        ("X ≥ W", loewner_ge(x, w, LOEWNER_TOL)?),
        ("X ≥ Z", loewner_ge(x, z, LOEWNER_TOL)?),
    ];
    for (name, v) in pre {
        if !v.is_psd {
            return Err(CheckError::Hypothesis {
                check: id.as_str(),
                detail: format!("precondition {name} fails (λ_min = {:e})", v.lambda_min),
                witnesses: vec![(name.to_owned(), v.lambda_min)],
            });
        }
    }
    let terms = Terms::from([
        ("det_x", real_det(x)?),
        ("det_y", real_det(y)?),
        ("det_w", real_det(w)?),
        ("det_z", real_det(z)?),
    ]);
    let (lhs, rhs) = recompose(id, &terms).expect("terms present");
    Ok(Verdict::scalar(id, terms, lhs, rhs))
}

/// `det(A+B+C) + det C ≥ det(A+C) + det(B+C)` for PSD `A, B, C`.
pub fn check_three_term(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> CheckResult {
    let id = CheckId::ThreeTerm;
    for (name, mat) in [("A", a), ("B", b), ("C", c)] {
        require_psd(id, name, mat)?;
    }
    let ac = a.try_add(c)?;
    let bc = b.try_add(c)?;
    let abc = ac.try_add(b)?;
    let terms = Terms::from([
        ("det_abc", real_det(&abc)?),
        ("det_c", real_det(c)?),
        ("det_ac", real_det(&ac)?),
        ("det_bc", real_det(&bc)?),
    ]);
    let (lhs, rhs) = recompose(id, &terms).expect("terms present");
    Ok(Verdict::scalar(id, terms, lhs, rhs))
}

// ---------------------------------------------------------------- sector checks

fn require_sector(check: CheckId, a: &ComplexMatrix, alpha: Option<f64>) -> Result<f64, CheckError> {
    let margin = sector_margin(a)?;
    if !margin.re_pd {
        return Err(CheckError::Hypothesis {
            check: check.as_str(),
            detail: "real part is not positive definite".into(),
            witnesses: vec![("alpha_min".into(), margin.alpha_min)],
        });
    }
    match alpha {
        None => Ok(margin.alpha_min),
        Some(alpha) if margin.within(alpha, SECTOR_ANGLE_SLACK) => Ok(alpha),
        Some(alpha) => Err(CheckError::Hypothesis {
            check: check.as_str(),
            detail: format!("W(A) is not inside S_α: measured margin {} > α = {alpha}", margin.alpha_min),
            witnesses: vec![("alpha_min".into(), margin.alpha_min), ("alpha".into(), alpha)],
        }),
    }
}

/// `|det A| ≤ (sec α)^n det(ℜA)` at the measured sector angle of `A`.
pub fn check_sector_det(a: &ComplexMatrix) -> CheckResult {
    let id = CheckId::SectorDet;
    let alpha = require_sector(id, a, None)?;
    let n = a.rows() as i32;
    let (re, _) = cartesian_parts(a)?;
    let terms = Terms::from([
        ("sec_pow", alpha.cos().recip().powi(n)),
        ("det_re", real_det(&re)?),
        ("abs_det", lu_det(a)?.norm()),
        ("alpha", alpha),
    ]);
    let (lhs, rhs) = recompose(id, &terms).expect("terms present");
    Ok(Verdict::scalar(id, terms, lhs, rhs))
}

/// `λ_i(ℜA) ≤ s_i(A)` for all `i`, and `det ℜA + |det ℑA| ≤ |det A|` when
/// `ℜA` is positive definite.
pub fn check_re_singular(a: &ComplexMatrix) -> CheckResult {
    let id = CheckId::ReSingular;
    let (re, im) = cartesian_parts(a)?;
    let s = singular_values(a)?;
    let re_spec = hermitian_eig(&re)?;
    let min_gap = s
        .iter()
        .zip(&re_spec.eigenvalues)
        .map(|(si, li)| si - li)
        .fold(f64::INFINITY, f64::min);
    let s1 = s.first().copied().unwrap_or(0.0);
    let applicable = re_spec.lambda_min() > RE_PD_CUTOFF * re_spec.lambda_max().max(1.0);

    let mut terms = Terms::from([("min_singular_gap", min_gap), ("s_max", s1)]);
    if applicable {
        terms
            .push("part2_applicable", 1.0)
            .push("abs_det", lu_det(a)?.norm())
            .push("det_re", real_det(&re)?)
            .push("abs_det_im", real_det(&im)?.abs());
    } else {
        terms.push("part2_applicable", 0.0);
    }
    let (lhs, rhs) = recompose(id, &terms).expect("terms present");
    let tolerance = SCALAR_TOL * s1.max(lhs.abs()).max(rhs.abs()).max(1.0);
    let gap = if applicable { min_gap.min(lhs - rhs) } else { min_gap };
    let note = if applicable { "none" } else { "determinant part skipped: real part not positive definite" };
    Ok(Verdict {
        id,
        terms,
        lhs,
        rhs,
        gap,
        tolerance,
        holds: gap >= -tolerance,
        scale_note: note.into(),
        normalization: None,
    })
}

/// `(tr|A|)^{mn} + |det tr₁A|^m ≥ cos^{mn}α · det|A| + cos^{mn}α · |det tr₂A|^n`
/// for `W(A) ⊆ S_α`. With `alpha = None` the measured sector angle is used.
pub fn check_sector_main(a: &BlockMatrix, alpha: Option<f64>) -> CheckResult {
    let id = CheckId::SectorMain;
    let alpha = require_sector(id, a.matrix(), alpha)?;
    let (m, n) = (a.m() as i32, a.n() as i32);
    let trace_abs: f64 = singular_values(a.matrix())?.iter().sum();
    let norm = Normalization {
        divisor: if trace_abs > 0.0 { trace_abs } else { 1.0 },
        degree: a.dim() as u32,
    };
    let b = a.scale_real(1.0 / norm.divisor);
    let tr1 = b.partial_trace_1();
    let tr2 = b.partial_trace_2();
    let tr_abs: f64 = singular_values(b.matrix())?.iter().sum();
    let terms = Terms::from([
        ("tr_abs_pow", tr_abs.powi(m * n)),
        ("abs_det_tr1_pow", lu_det(&tr1)?.norm().powi(m)),
        ("cos_pow", alpha.cos().powi(m * n)),
        ("abs_det", lu_det(b.matrix())?.norm()),
        ("abs_det_tr2_pow", lu_det(&tr2)?.norm().powi(n)),
        ("alpha", alpha),
        ("margin_tr1", sector_margin(&tr1)?.alpha_min),
        ("margin_tr2", sector_margin(&tr2)?.alpha_min),
    ]);
    let (lhs, rhs) = recompose(id, &terms).expect("terms present");
    Ok(Verdict::scalar(id, terms, lhs, rhs).normalized(norm, "tr|A|"))
}

/// Runs a block-level check on `a`, supplying `q` / `alpha` where relevant.
///
/// `DetFour` and `ThreeTerm` take several matrices and are rejected here.
pub fn check_block(id: CheckId, a: &BlockMatrix, q: f64, alpha: Option<f64>) -> CheckResult {
    match id {
        CheckId::Schatten => check_schatten(a, q),
        CheckId::Ando => check_ando_loewner(a),
        CheckId::Complement => check_complement_loewner(a),
        CheckId::PptMap => check_ppt_map(a),
        CheckId::Lin => check_lin(a),
        CheckId::Main => check_main(a),
        CheckId::Swapped => check_swapped(a),
        CheckId::PptReversal => check_ppt_reversal(a),
        CheckId::SectorDet => check_sector_det(a.matrix()),
        CheckId::ReSingular => check_re_singular(a.matrix()),
        CheckId::SectorMain => check_sector_main(a, alpha),
        CheckId::DetFour | CheckId::ThreeTerm => Err(CheckError::Hypothesis {
            check: id.as_str(),
            detail: "check takes several matrices, not a single block matrix".into(),
            witnesses: vec![],
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::Complex64;
    use crate::blockops::block_diagonal;
    use crate::generators::{
        instance_rng, rand_gram, rand_lemma_quadruple, rand_ppt_separable, rand_psd_block, rand_sector,
        rand_sector_block, sector_from_parts, GeneratorConfig,
    };
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn astar() -> BlockMatrix {
        block_diagonal(&[
            ComplexMatrix::from_real_diag(&[1.0, 2.0]),
            ComplexMatrix::from_real_diag(&[3.0, 4.0]),
        ])
        .unwrap()
    }

    fn identity_block(m: usize, n: usize) -> BlockMatrix {
        BlockMatrix::new(m, n, ComplexMatrix::identity(m * n)).unwrap()
    }

    fn spectrum(a: &ComplexMatrix) -> Vec<f64> {
        hermitian_eig(a).unwrap().eigenvalues
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
    }

    /// Original-scale (lhs, rhs) of a normalised verdict.
    fn restored(v: &Verdict) -> (f64, f64) {
        let n = v.normalization.unwrap();
        (n.restore(v.lhs), n.restore(v.rhs))
    }

    #[test]
    fn schatten_fixture() {
        let v = check_schatten(&astar(), 1.0).unwrap();
        assert!(close(v.lhs, 20.0, 1e-14) && close(v.rhs, 20.0, 1e-14) && v.gap.abs() < 1e-12 && v.holds);
        let v = check_schatten(&astar(), f64::INFINITY).unwrap();
        assert!(close(v.lhs, 14.0, 1e-14) && close(v.rhs, 13.0, 1e-14) && close(v.gap, 1.0, 1e-12));
        let v = check_schatten(&identity_block(2, 2), 2.0).unwrap();
        assert!(close(v.lhs, 6.0, 1e-14) && close(v.rhs, 2.0 * 8f64.sqrt(), 1e-14) && v.holds);
    }

    #[test]
    fn hypothesis_errors_are_not_violations() {
        let bad = BlockMatrix::new(2, 2, ComplexMatrix::from_real_diag(&[1.0, -1.0, 1.0, 1.0])).unwrap();
        for id in [CheckId::Schatten, CheckId::Ando, CheckId::Complement, CheckId::PptMap, CheckId::Lin, CheckId::Main, CheckId::Swapped, CheckId::PptReversal] {
            let err = check_block(id, &bad, 1.0, None).unwrap_err();
            assert!(matches!(err, CheckError::Hypothesis { .. }), "{id}");
        }
        let g = crate::generators::gaussian_matrix(4, 4, &mut instance_rng(1, 0));
        let nh = BlockMatrix::new(2, 2, g).unwrap();
        assert!(matches!(check_main(&nh), Err(CheckError::Hypothesis { .. })));
    }

    #[test]
    fn ando_fixture_and_identity() {
        let d = ando_difference(&astar()).unwrap();
        assert_eq!(d, ComplexMatrix::from_real_diag(&[4.0, 3.0, 2.0, 1.0]));
        let v = check_ando_loewner(&astar()).unwrap();
        assert!(close(v.gap, 1.0, 1e-13) && v.holds);
        let v = check_ando_loewner(&identity_block(2, 2)).unwrap();
        assert!(close(v.gap, 1.0, 1e-13));
        let mut x = ComplexMatrix::zeros(4, 4);
        x[(0, 0)] = Complex64::new(1.0, 0.0);
        let v = check_ando_loewner(&BlockMatrix::new(2, 2, x).unwrap()).unwrap();
        assert!(v.gap >= 0.0 && v.holds);
    }

    #[test]
    fn complement_fixture_and_identity() {
        let d = complement_difference(&astar()).unwrap();
        assert_eq!(d, ComplexMatrix::from_real_diag(&[10.0, 11.0, 4.0, 5.0]));
        assert!(close(check_complement_loewner(&astar()).unwrap().gap, 4.0, 1e-13));
        assert!(close(check_complement_loewner(&identity_block(2, 2)).unwrap().gap, 3.0, 1e-13));
    }

    #[test]
    fn complement_certificate_is_psd_and_congruent() {
        for seed in 0..100 {
            let a = rand_psd_block(&GeneratorConfig::new(seed, 2, 3)).unwrap();
            let h = complement_certificate(&a).unwrap();
            assert!(spectrum(&h).last().unwrap() >= &-1e-9);
            // H = J Φ-image^τ J* with J = [[0, -I], [I, 0]]
            let n = 3;
            let mut j = ComplexMatrix::zeros(2 * n, 2 * n);
            for k in 0..n {
                j[(k, n + k)] = Complex64::new(-1.0, 0.0);
                j[(n + k, k)] = Complex64::new(1.0, 0.0);
            }
            let image_t = a.map_blocks(phi).unwrap().partial_transpose();
            let congr = &(&j * image_t.matrix()) * &j.adjoint();
            assert!((&congr - &h).max_abs() <= 1e-14);
        }
        assert!(complement_certificate(&identity_block(3, 2)).is_err());
    }

    #[test]
    fn ppt_map_fixture_and_identity() {
        let image = astar().map_blocks(phi).unwrap();
        assert_eq!(image.matrix(), &ComplexMatrix::from_real_diag(&[4.0, 5.0, 10.0, 11.0]));
        let v = check_ppt_map(&astar()).unwrap();
        assert!(v.gap >= 4.0 - 1e-13);
        assert!(close(check_ppt_map(&identity_block(2, 2)).unwrap().gap, 3.0, 1e-13));
    }

    #[test]
    fn ppt_map_random() {
        let mut k = 0;
        for m in 2..=4 {
            for n in 2..=3 {
                for seed in 0..25 {
                    let a = rand_psd_block(&GeneratorConfig::new(seed, m, n).rank(1 + seed as usize % (m * n))).unwrap();
                    let v = check_ppt_map(&a).unwrap();
                    assert!(v.terms.get("lambda_min_cp").unwrap() >= -1e-9);
                    assert!(v.terms.get("lambda_min_ccp").unwrap() >= -1e-9);
                    k += 1;
                }
            }
        }
        assert_eq!(k, 150);
    }

    #[test]
    fn determinantal_fixture() {
        let a = astar();
        let t = determinantal_terms(&a).unwrap();
        assert!(close(t.normalization.divisor, 10.0, 0.0));
        let lin = check_lin(&a).unwrap();
        let (l, r) = restored(&lin);
        assert!(close(l, 10024.0, 1e-12) && close(r, 1017.0, 1e-12));
        let main = check_main(&a).unwrap();
        let (l, r) = restored(&main);
        assert!(close(l, 9559.0, 1e-12) && close(r, 552.0, 1e-12));
        assert_eq!(main.terms.get("abs_branch"), Some(-1.0));
        let sw = check_swapped(&a).unwrap();
        let (l, r) = restored(&sw);
        assert!(close(l, 10576.0, 1e-12) && close(r, 465.0, 1e-12));
        let pr = check_ppt_reversal(&a).unwrap();
        let (l, r) = restored(&pr);
        assert!(close(l, 10441.0, 1e-12) && close(r, 600.0, 1e-12));
        assert!(lin.scale_note.contains("1e1"));
    }

    #[test]
    fn determinantal_identity() {
        let a = identity_block(2, 2);
        let (l, r) = restored(&check_lin(&a).unwrap());
        assert!(close(l, 257.0, 1e-12) && close(r, 32.0, 1e-12));
        let (l, r) = restored(&check_main(&a).unwrap());
        assert!(close(l, 240.0, 1e-12) && close(r, 15.0, 1e-12));
        let (l, r) = restored(&check_swapped(&a).unwrap());
        assert!(close(l, 272.0, 1e-12) && close(r, 17.0, 1e-12));
        let (l, r) = restored(&check_ppt_reversal(&a).unwrap());
        assert!(close(l, 272.0, 1e-12) && close(r, 17.0, 1e-12));
        // general identity: (mn)^{mn} − n^{mn} ≥ m^{mn} − 1
        for (m, n) in [(2usize, 3usize), (3, 2)] {
            let v = check_main(&identity_block(m, n)).unwrap();
            let d = (m * n) as i32;
            let (l, r) = restored(&v);
            assert!(close(l, ((m * n) as f64).powi(d) - (n as f64).powi(d), 1e-12));
            assert!(close(r, (m as f64).powi(d) - 1.0, 1e-12));
        }
    }

    #[test]
    fn rank_one_lin() {
        for seed in 0..50 {
            let a = rand_psd_block(&GeneratorConfig::new(seed, 2, 2).rank(1)).unwrap();
            let v = check_lin(&a).unwrap();
            assert!(v.holds && v.terms.get("det_a").unwrap().abs() < 1e-15);
            assert!(v.terms.get("det_tr1_pow").unwrap() >= -1e-15);
        }
    }

    #[test]
    fn main_equals_min_of_one_sided_gaps() {
        for seed in 0..200 {
            let a = rand_psd_block(&GeneratorConfig::new(seed, 3, 2)).unwrap();
            let main = check_main(&a).unwrap();
            let lin = check_lin(&a).unwrap();
            let sw = check_swapped(&a).unwrap();
            assert!((main.gap - lin.gap.min(sw.gap)).abs() <= 1e-15);
            if lin.holds && sw.holds {
                assert!(main.holds);
            }
        }
    }

    #[test]
    fn verdicts_recompose_from_terms() {
        let a = rand_psd_block(&GeneratorConfig::new(3, 2, 2)).unwrap();
        for id in [CheckId::Schatten, CheckId::Ando, CheckId::Complement, CheckId::PptMap, CheckId::Lin, CheckId::Main, CheckId::Swapped] {
            let v = check_block(id, &a, 3.0, None).unwrap();
            assert_eq!(v.recompose(), Some((v.lhs, v.rhs)), "{id}");
        }
        let s = rand_sector_block(&GeneratorConfig::new(4, 2, 2).alpha(FRAC_PI_4)).unwrap();
        for id in [CheckId::SectorDet, CheckId::ReSingular, CheckId::SectorMain] {
            let v = check_block(id, &s, 1.0, None).unwrap();
            assert_eq!(v.recompose(), Some((v.lhs, v.rhs)), "{id}");
        }
    }

    #[test]
    fn determinantal_scale_invariance() {
        for seed in 0..30 {
            let a = rand_psd_block(&GeneratorConfig::new(seed, 2, 3)).unwrap();
            for id in [CheckId::Lin, CheckId::Main, CheckId::Swapped] {
                let base = check_block(id, &a, 1.0, None).unwrap();
                for c in [1e-3, 1.0, 1e3] {
                    let v = check_block(id, &a.scale_real(c), 1.0, None).unwrap();
                    assert_eq!(v.holds, base.holds);
                    assert_eq!(v.gap.signum(), base.gap.signum());
                }
            }
        }
    }

    #[test]
    fn ppt_reversal_requires_ppt() {
        let mut psi = ComplexMatrix::zeros(4, 1);
        psi[(0, 0)] = Complex64::new(1.0, 0.0);
        psi[(3, 0)] = Complex64::new(1.0, 0.0);
        let bell = BlockMatrix::new(2, 2, &psi * &psi.adjoint()).unwrap();
        match check_ppt_reversal(&bell) {
            Err(CheckError::Hypothesis { witnesses, .. }) => {
                assert_eq!(witnesses.len(), 2);
                assert!(witnesses[1].1 < -0.9);
            }
            other => panic!("expected hypothesis error, got {other:?}"),
        }
        for (m, n) in [(2, 2), (3, 2), (2, 3)] {
            for seed in 0..50 {
                let a = rand_ppt_separable(&GeneratorConfig::new(seed, m, n)).unwrap();
                let v = check_ppt_reversal(&a).unwrap();
                assert!(v.gap >= -1e-9);
            }
        }
    }

    #[test]
    fn det_four_cases() {
        let id = ComplexMatrix::identity(2);
        let zero = ComplexMatrix::zeros(2, 2);
        let v = check_det_four(&id, &id, &zero, &zero).unwrap();
        assert!(close(v.lhs, 2.0, 1e-15) && v.rhs == 0.0);
        let v = check_det_four(&id.scale_real(2.0), &id, &id, &id).unwrap();
        assert!(close(v.lhs, 5.0, 1e-15) && close(v.rhs, 2.0, 1e-15));
        // X ≥ Z fails
        let err = check_det_four(&id, &id, &zero, &id.scale_real(2.0)).unwrap_err();
        assert!(matches!(err, CheckError::Hypothesis { .. }));
        for ell in 2..=4 {
            for seed in 0..30 {
                let q = rand_lemma_quadruple(ell, seed).unwrap();
                let v = check_det_four(&q.x, &q.y, &q.w, &q.z).unwrap();
                assert!(v.holds, "ell {ell} seed {seed}: gap {}", v.gap);
            }
        }
    }

    #[test]
    fn det_four_degenerate_draw() {
        let w = rand_gram(3, &mut instance_rng(8, 0));
        let zero = ComplexMatrix::zeros(3, 3);
        let q = crate::generators::quadruple_from_parts(&w, &w, &zero, &zero).unwrap();
        let v = check_det_four(&q.x, &q.y, &q.w, &q.z).unwrap();
        assert!(v.holds && v.gap.abs() <= 1e-9 * v.lhs.abs().max(1.0));
    }

    #[test]
    fn three_term_cases() {
        let id = ComplexMatrix::identity(2);
        let zero = ComplexMatrix::zeros(2, 2);
        let v = check_three_term(&id, &id, &id).unwrap();
        assert!(close(v.lhs, 10.0, 1e-15) && close(v.rhs, 8.0, 1e-15));
        let mut rng = instance_rng(9, 0);
        let c = rand_gram(3, &mut rng);
        let z3 = ComplexMatrix::zeros(3, 3);
        let v = check_three_term(&z3, &z3, &c).unwrap();
        assert!(v.gap.abs() <= 1e-12 * v.lhs.abs().max(1.0));
        for _ in 0..50 {
            let a = rand_gram(3, &mut rng);
            let b = rand_gram(3, &mut rng);
            let v = check_three_term(&a, &b, &z3).unwrap();
            let direct = lu_det(&(&a + &b)).unwrap().re - lu_det(&a).unwrap().re - lu_det(&b).unwrap().re;
            assert!(v.holds && (v.gap - direct).abs() <= 1e-9 * v.lhs.abs().max(1.0));
        }
        assert!(check_three_term(&zero, &id, &ComplexMatrix::from_real_diag(&[1.0, -1.0])).is_err());
    }

    fn diag_pm(alpha: f64) -> ComplexMatrix {
        let t = alpha.tan();
        ComplexMatrix::from_diag(&[Complex64::new(1.0, t), Complex64::new(1.0, -t)])
    }

    #[test]
    fn sector_det_cases() {
        let b = rand_gram(3, &mut instance_rng(10, 0));
        let b = &b + &ComplexMatrix::identity(3);
        let v = check_sector_det(&b).unwrap();
        assert_eq!(v.terms.get("alpha"), Some(0.0));
        assert!(v.gap.abs() <= 1e-12 * v.lhs.abs());
        for alpha in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
            let v = check_sector_det(&diag_pm(alpha)).unwrap();
            let t = alpha.tan();
            assert!(close(v.rhs, 1.0 + t * t, 1e-14) && v.gap.abs() <= 1e-9);
        }
        assert!(matches!(
            check_sector_det(&ComplexMatrix::from_real_diag(&[1.0, -1.0])),
            Err(CheckError::Hypothesis { .. })
        ));
    }

    #[test]
    fn re_singular_cases() {
        let a = rand_gram(4, &mut instance_rng(11, 0));
        let v = check_re_singular(&a).unwrap();
        assert!(v.terms.get("min_singular_gap").unwrap().abs() <= 1e-12 * v.terms.get("s_max").unwrap());
        assert!(v.gap.abs() <= 1e-9 * v.lhs.abs().max(1.0));
        for alpha in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
            let v = check_re_singular(&diag_pm(alpha)).unwrap();
            assert_eq!(v.terms.get("part2_applicable"), Some(1.0));
            assert!((v.lhs - v.rhs).abs() <= 1e-9);
        }
        let mut rng = instance_rng(12, 0);
        for _ in 0..100 {
            let g = crate::generators::gaussian_matrix(5, 5, &mut rng);
            let v = check_re_singular(&g).unwrap();
            assert!(v.terms.get("min_singular_gap").unwrap() >= -1e-9);
            assert!(v.holds);
        }
    }

    #[test]
    fn sector_main_scalar_case() {
        for theta in [-1.0f64, -0.3, 0.0, 0.5, 1.2] {
            let r = 2.5;
            let z = Complex64::from_polar(r, theta);
            let a = BlockMatrix::new(1, 1, ComplexMatrix::from_diag(&[z])).unwrap();
            let v = check_sector_main(&a, Some(theta.abs())).unwrap();
            let (l, rr) = restored(&v);
            assert!(close(l, 2.0 * r, 1e-12) && close(rr, 2.0 * r * theta.cos(), 1e-12));
        }
    }

    #[test]
    fn sector_main_reduces_to_swapped() {
        for seed in 0..50 {
            let a = rand_sector_block(&GeneratorConfig::new(seed, 2, 2).alpha(0.0)).unwrap();
            let s = check_sector_main(&a, None).unwrap();
            let w = check_swapped(&a).unwrap();
            assert!((s.gap - w.gap).abs() <= 1e-10, "seed {seed}: {} vs {}", s.gap, w.gap);
        }
    }

    #[test]
    fn sector_main_random_and_partial_trace_margins() {
        for alpha in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
            for seed in 0..40 {
                let a = rand_sector_block(&GeneratorConfig::new(seed, 3, 2).alpha(alpha)).unwrap();
                let v = check_sector_main(&a, Some(alpha)).unwrap();
                assert!(v.holds, "α {alpha} seed {seed}: gap {}", v.gap);
                assert!(v.terms.get("margin_tr1").unwrap() <= alpha + 1e-9);
                assert!(v.terms.get("margin_tr2").unwrap() <= alpha + 1e-9);
            }
        }
    }

    #[test]
    fn sector_main_rejects_wider_input() {
        let a = BlockMatrix::new(1, 2, diag_pm(FRAC_PI_3)).unwrap();
        assert!(matches!(check_sector_main(&a, Some(FRAC_PI_6)), Err(CheckError::Hypothesis { .. })));
        let forced = sector_from_parts(&ComplexMatrix::identity(2), &ComplexMatrix::zeros(2, 2)).unwrap();
        assert!(check_sector_main(&BlockMatrix::new(2, 1, forced).unwrap(), Some(0.0)).is_ok());
        let _ = rand_sector(2, 0.1, 0).unwrap();
    }

    #[test]
    fn check_id_roundtrip() {
        for id in CheckId::ALL {
            assert_eq!(id.as_str().parse::<CheckId>().unwrap(), id);
        }
        assert!("nope".parse::<CheckId>().is_err());
    }
}
