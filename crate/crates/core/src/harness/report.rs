//! One row per verdict, as JSONL or CSV.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::instance::Params;
use crate::blockops::BlockShape;
use crate::error::CheckError;
use crate::inequalities::{CheckId, Terms, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub check: CheckId,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub index: u64,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::serde_real::option")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(with = "crate::serde_real")]
    pub lhs: f64,
    #[serde(with = "crate::serde_real")]
    pub rhs: f64,
    #[serde(with = "crate::serde_real")]
    pub gap: f64,
    #[serde(with = "crate::serde_real")]
    pub tolerance: f64,
    pub holds: bool,
    pub hypothesis_ok: bool,
    pub scale_note: String,
    pub terms: Terms,
    /// Full instance, attached to violations and search results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<serde_json::Value>,
}

impl ReportRow {
    pub(crate) fn from_verdict(v: Verdict, shape: BlockShape, seed: u64, index: u64, params: Params) -> Self {
        Self {
            check: v.id,
            m: shape.m,
            n: shape.n,
            seed,
            index,
            q: params.q,
            alpha: params.alpha,
            lhs: v.lhs,
            rhs: v.rhs,
            gap: v.gap,
            tolerance: v.tolerance,
            holds: v.holds,
            hypothesis_ok: true,
            scale_note: v.scale_note,
            terms: v.terms,
            instance: None,
        }
    }

    /// Row for an instance the check could not be applied to.
    pub(crate) fn rejected(
        check: CheckId,
        shape: BlockShape,
        seed: u64,
        index: u64,
        params: Params,
        detail: String,
        witnesses: &[(String, f64)],
    ) -> Self {
        let mut terms = Terms::new();
        for (k, v) in witnesses {
            terms.push(k, *v);
        }
        Self {
            check,
            m: shape.m,
            n: shape.n,
            seed,
            index,
            q: params.q,
            alpha: params.alpha,
            lhs: f64::NAN,
            rhs: f64::NAN,
            gap: f64::NAN,
            tolerance: f64::NAN,
            holds: false,
            hypothesis_ok: false,
            scale_note: detail,
            terms,
            instance: None,
        }
    }

    pub(crate) fn from_check_error(
        check: CheckId,
        shape: BlockShape,
        seed: u64,
        index: u64,
        params: Params,
        err: CheckError,
    ) -> Self {
        let detail = err.to_string();
        match err {
            CheckError::Hypothesis { witnesses, .. } => {
                Self::rejected(check, shape, seed, index, params, detail, &witnesses)
            }
            CheckError::Linalg(_) => {
                Self::rejected(check, shape, seed, index, params, format!("numerical failure: {detail}"), &[])
            }
        }
    }

    pub fn shape(&self) -> BlockShape {
        BlockShape::new(self.m, self.n)
    }

    pub fn params(&self) -> Params {
        Params { q: self.q, alpha: self.alpha }
    }

    /// A genuine counterexample: the hypothesis held and the inequality did not.
    pub fn is_violation(&self) -> bool {
        self.hypothesis_ok && !self.holds
    }
}

pub fn write_jsonl(rows: &[ReportRow], mut out: impl Write) -> std::io::Result<()> {
    for row in rows {
        serde_json::to_writer(&mut out, row)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

#[derive(Serialize)]
struct CsvRow<'a> {
    check: &'a str,
    m: usize,
    n: usize,
    seed: u64,
    index: u64,
    q: String,
    alpha: String,
    lhs: f64,
    rhs: f64,
    gap: f64,
    tolerance: f64,
    holds: bool,
    hypothesis_ok: bool,
    scale_note: &'a str,
    terms: String,
}

pub fn write_csv(rows: &[ReportRow], out: impl Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for row in rows {
        w.serialize(CsvRow {
            check: row.check.as_str(),
            m: row.m,
            n: row.n,
            seed: row.seed,
            index: row.index,
            q: opt(row.q),
            alpha: opt(row.alpha),
            lhs: row.lhs,
            rhs: row.rhs,
            gap: row.gap,
            tolerance: row.tolerance,
            holds: row.holds,
            hypothesis_ok: row.hypothesis_ok,
            scale_note: &row.scale_note,
            terms: serde_json::to_string(&row.terms).expect("terms serialise"),
        })?;
    }
    w.flush()?;
    Ok(())
}
