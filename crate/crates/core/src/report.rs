//! The JSON document every split method emits, and its re-verification.

use crate::digraph::{Bipartition, Digraph, GraphError, Side};
use crate::pairing::bad_vertices;
use crate::probability::{Epsilon, ProbabilityError, Threshold};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// Identifier of the schema shipped in `schemas/split-result.v1.schema.json`.
pub const SPLIT_SCHEMA_ID: &str = "split-result.v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    /// Whether `|A|` and `|B|` must differ by at most one.
    #[serde(default)]
    pub bisection: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitDocument {
    pub method: String,
    pub seed: Option<u64>,
    pub params: SplitParams,
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    pub stats: Value,
    pub verified: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error("params need either epsilon or both s and t")]
    MissingCriterion,
    #[error("params give both epsilon and s/t")]
    AmbiguousCriterion,
    #[error(transparent)]
    Epsilon(#[from] ProbabilityError),
}

/// What a split has to satisfy.
#[derive(Clone, Debug, PartialEq)]
pub enum SplitCriterion {
    /// No vertex is bad for the threshold.
    Balanced {
        threshold: Threshold,
        bisection: bool,
    },
    /// Both sides nonempty with `δ⁺(D[A]) >= s` and `δ⁺(D[B]) >= t`.
    MinOut { s: usize, t: usize, bisection: bool },
}

impl SplitParams {
    pub fn relative(epsilon: f64, bisection: bool) -> Self {
        SplitParams {
            epsilon: Some(epsilon),
            s: None,
            t: None,
            bisection,
        }
    }

    pub fn min_out(s: usize, t: usize) -> Self {
        SplitParams {
            epsilon: None,
            s: Some(s),
            t: Some(t),
            bisection: false,
        }
    }

    pub fn criterion(&self) -> Result<SplitCriterion, ReportError> {
        match (self.epsilon, self.s, self.t) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => Err(ReportError::AmbiguousCriterion),
            (Some(e), None, None) => Ok(SplitCriterion::Balanced {
                threshold: Threshold::Relative(Epsilon::new(e)?),
                bisection: self.bisection,
            }),
            (None, Some(s), Some(t)) => Ok(SplitCriterion::MinOut {
                s,
                t,
                bisection: self.bisection,
            }),
            _ => Err(ReportError::MissingCriterion),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub valid: bool,
    pub problems: Vec<String>,
}

/// Rechecks sides `a`, `b` of `g` against `criterion`, collecting every
/// violation found.
pub fn verify_split(
    g: &Digraph,
    a: &[usize],
    b: &[usize],
    criterion: &SplitCriterion,
) -> Verification {
    let mut problems = Vec::new();
    let bip = match Bipartition::from_sides(g.n(), a, b) {
        Ok(bip) => Some(bip),
        Err(e) => {
            problems.push(match e {
                GraphError::InvalidBipartition(msg) => msg,
                other => other.to_string(),
            });
            None
        }
    };
    if let Some(bip) = bip {
        let bisection = match criterion {
            SplitCriterion::Balanced { bisection, .. }
            | SplitCriterion::MinOut { bisection, .. } => *bisection,
        };
        if bisection && !bip.is_bisection() {
            problems.push(format!(
                "sides have sizes {} and {}, not a bisection",
                bip.len_a(),
                bip.len_b()
            ));
        }
        match criterion {
            SplitCriterion::Balanced { threshold, .. } => {
                for bad in bad_vertices(g, &bip, threshold) {
                    let d = g.out_neighbors(bad.vertex).len();
                    problems.push(format!(
                        "vertex {} has {} of {} out-neighbours on its side, outside [{}, {}]",
                        bad.vertex,
                        bad.x,
                        d,
                        bad.t,
                        d.saturating_sub(bad.t)
                    ));
                }
            }
            SplitCriterion::MinOut { s, t, .. } => {
                for (side, need) in [(Side::A, *s), (Side::B, *t)] {
                    match bip.side_min_out_degree(g, side) {
                        None => problems.push(format!("side {side:?} is empty")),
                        Some(got) if got < need => problems.push(format!(
                            "side {side:?} has minimum out-degree {got} < {need}"
                        )),
                        Some(_) => {}
                    }
                }
            }
        }
    }
    Verification {
        valid: problems.is_empty(),
        problems,
    }
}

impl SplitDocument {
    /// Builds the document for `bip` and records whether it verifies.
    pub fn new(
        g: &Digraph,
        method: &str,
        seed: Option<u64>,
        params: SplitParams,
        bip: &Bipartition,
        stats: Value,
    ) -> Result<Self, ReportError> {
        let criterion = params.criterion()?;
        let (a, b) = (bip.side_a(), bip.side_b());
        let verified = verify_split(g, &a, &b, &criterion).valid;
        Ok(SplitDocument {
            method: method.to_string(),
            seed,
            params,
            a,
            b,
            stats,
            verified,
        })
    }

    pub fn verify(&self, g: &Digraph) -> Result<Verification, ReportError> {
        Ok(verify_split(g, &self.a, &self.b, &self.params.criterion()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::rotational_tournament;
    use crate::pairing::find_good_bisection;
    use serde_json::json;

    fn two_cycles() -> Digraph {
        Digraph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap()
    }

    #[test]
    fn document_shape() {
        let g = two_cycles();
        let bip = Bipartition::from_side_a(6, [0, 1, 2]).unwrap();
        let doc = SplitDocument::new(
            &g,
            "peel",
            None,
            SplitParams::min_out(1, 1),
            &bip,
            json!({"size_a": 3}),
        )
        .unwrap();
        assert!(doc.verified);
        let value = serde_json::to_value(&doc).unwrap();
        assert_eq!(
            value,
            json!({
                "method": "peel",
                "seed": null,
                "params": {"s": 1, "t": 1, "bisection": false},
                "A": [0, 1, 2],
                "B": [3, 4, 5],
                "stats": {"size_a": 3},
                "verified": true
            })
        );
        let back: SplitDocument = serde_json::from_value(value).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn rejects_bad_sides() {
        let g = two_cycles();
        let crit = SplitParams::min_out(1, 1).criterion().unwrap();
        let v = verify_split(&g, &[0, 1, 3], &[2, 4, 5], &crit);
        assert!(!v.valid);
        assert_eq!(v.problems.len(), 2);
        assert!(!verify_split(&g, &[0, 1, 2], &[3, 4], &crit).valid);
        assert!(!verify_split(&g, &[0, 1, 2], &[2, 3, 4, 5], &crit).valid);
        assert!(!verify_split(&g, &[0, 1, 2, 3, 4, 5], &[], &crit).valid);
    }

    #[test]
    fn balanced_criterion() {
        let g = rotational_tournament(101).unwrap();
        let th = Threshold::Relative(Epsilon::new(0.3).unwrap());
        let report = find_good_bisection(&g, &th, 64, 4).unwrap();
        let params = SplitParams::relative(0.3, true);
        let doc = SplitDocument::new(
            &g,
            "pairing",
            Some(4),
            params,
            &report.bipartition,
            Value::Null,
        )
        .unwrap();
        assert!(doc.verified);
        assert!(doc.verify(&g).unwrap().valid);
        let mut lopsided = doc.clone();
        for _ in 0..2 {
            let moved = lopsided.b.pop().unwrap();
            lopsided.a.push(moved);
        }
        lopsided.a.sort();
        assert!(!lopsided.verify(&g).unwrap().valid);
    }

    #[test]
    fn criterion_parsing() {
        assert_eq!(
            SplitParams {
                epsilon: None,
                s: Some(1),
                t: None,
                bisection: false
            }
            .criterion(),
            Err(ReportError::MissingCriterion)
        );
        assert_eq!(
            SplitParams {
                epsilon: Some(0.2),
                s: Some(1),
                t: Some(1),
                bisection: false
            }
            .criterion(),
            Err(ReportError::AmbiguousCriterion)
        );
        assert!(SplitParams::relative(0.7, false).criterion().is_err());
    }
}
