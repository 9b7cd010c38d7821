//! The staged construction of a generic set that codes truth.
//!
//! Stage `2k` meets `φ_k`: the condition moves to the least strict extension
//! (by length, then lexicographically) that forces `φ_k`, or stays put when
//! none does. Stage `2k + 1` appends the truth bit of `ξ_k`.

use serde::{Deserialize, Serialize};

use super::{bit_bound, forces_exact, Condition};
use crate::error::{Error, Result};
use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Justification {
    Forced { formula: String, extension: Condition },
    NoExtension { formula: String },
    TruthBit { sentence: String, bit: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub index: usize,
    pub parity: Parity,
    /// Position in the enumeration the stage consumed.
    pub k: usize,
    pub before: Condition,
    pub after: Condition,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stages: Vec<Stage>,
}

impl StageTrace {
    pub fn final_condition(&self) -> Condition {
        self.stages
            .last()
            .map_or_else(Condition::empty, |s| s.after.clone())
    }

    pub fn from_json(text: &str) -> Result<StageTrace> {
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("traces serialize")
    }
}

fn bound_of(phi: &Formula) -> Result<usize> {
    bit_bound(phi).ok_or_else(|| Error::Forcing(format!("`{phi}` is not exact-mode decidable")))
}

/// Longest extension length the even-stage search needs for `phi` at `s`.
pub fn search_horizon(s: &Condition, phi: &Formula) -> Result<usize> {
    Ok(bound_of(phi)?.max(s.len() + 1))
}

/// The least strict extension of `s` forcing `phi`, if any.
pub fn least_forcing_extension(s: &Condition, phi: &Formula) -> Result<Option<Condition>> {
    for len in s.len() + 1..=search_horizon(s, phi)? {
        for t in s.extensions_of_length(len) {
            if forces_exact(&t, phi)? {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

/// Runs `stages` stages. `truth` decides each `ξ_k`.
pub fn build_generic(
    stages: usize,
    phis: &[Formula],
    xis: &[Formula],
    truth: &dyn Fn(&Formula) -> Result<bool>,
) -> Result<StageTrace> {
    if phis.len() < stages.div_ceil(2) || xis.len() < stages / 2 {
        return Err(Error::Forcing(format!(
            "{stages} stages need {} set formulas and {} sentences",
            stages.div_ceil(2),
            stages / 2
        )));
    }
    let mut s = Condition::empty();
    let mut trace = StageTrace::default();
    for index in 0..stages {
        let k = index / 2;
        let before = s.clone();
        let (parity, justification) = if index % 2 == 0 {
            let phi = &phis[k];
            let formula = phi.to_string();
            match least_forcing_extension(&s, phi)? {
                Some(t) => {
                    s = t.clone();
                    (Parity::Even, Justification::Forced { formula, extension: t })
                }
                None => (Parity::Even, Justification::NoExtension { formula }),
            }
        } else {
            let bit = truth(&xis[k])?;
            s = s.pushed(bit);
            (
                Parity::Odd,
                Justification::TruthBit {
                    sentence: xis[k].to_string(),
                    bit,
                },
            )
        };
        trace.stages.push(Stage {
            index,
            parity,
            k,
            before,
            after: s.clone(),
            justification,
        });
    }
    Ok(trace)
}

fn trace_err(index: usize, msg: impl std::fmt::Display) -> Error {
    Error::Trace(format!("stage {index}: {msg}"))
}

/// The truth bits appended at odd stages, in order.
pub fn decode_truth(trace: &StageTrace) -> Result<Vec<bool>> {
    let mut prev = Condition::empty();
    let mut out = Vec::new();
    for (i, st) in trace.stages.iter().enumerate() {
        if st.index != i || st.before != prev || !st.after.extends(&st.before) {
            return Err(trace_err(i, "conditions do not form a chain"));
        }
        if i % 2 == 1 {
            if st.after.len() != st.before.len() + 1 {
                return Err(trace_err(i, "odd stage must append exactly one bit"));
            }
            out.push(st.after.bit(st.before.len()).expect("one bit longer"));
        }
        prev = st.after.clone();
    }
    Ok(out)
}

/// Re-checks every stage against `phis` (and `truth` when given),
/// including minimality of even-stage extensions by enumerating every
/// smaller candidate.
pub fn verify_trace(
    trace: &StageTrace,
    phis: &[Formula],
    xis: &[Formula],
    truth: Option<&dyn Fn(&Formula) -> Result<bool>>,
) -> Result<()> {
    decode_truth(trace)?;
    for st in &trace.stages {
        let i = st.index;
        if st.k != i / 2 || st.parity != if i % 2 == 0 { Parity::Even } else { Parity::Odd } {
            return Err(trace_err(i, "index, parity and k disagree"));
        }
        if i % 2 == 1 {
            let Justification::TruthBit { bit, .. } = st.justification else {
                return Err(trace_err(i, "odd stage without a truth bit"));
            };
            if st.after.bit(st.before.len()) != Some(bit) {
                return Err(trace_err(i, "appended bit differs from the recorded one"));
            }
            if let (Some(truth), Some(xi)) = (truth, xis.get(st.k)) {
                if truth(xi)? != bit {
                    return Err(trace_err(i, "appended bit is not the truth value"));
                }
            }
            continue;
        }
        let phi = phis
            .get(st.k)
            .ok_or_else(|| trace_err(i, "no set formula for this stage"))?;
        let horizon = search_horizon(&st.before, phi)?;
        // every strict extension up to the horizon, in search order
        let candidates = (st.before.len() + 1..=horizon).flat_map(|l| st.before.extensions_of_length(l));
        match &st.justification {
            Justification::Forced { extension, .. } => {
                if *extension != st.after || st.after.len() <= st.before.len() {
                    return Err(trace_err(i, "forced stage must move to a strict extension"));
                }
                if !forces_exact(&st.after, phi)? {
                    return Err(trace_err(i, "chosen extension does not force the formula"));
                }
                for t in candidates {
                    if t == st.after {
                        break;
                    }
                    if forces_exact(&t, phi)? {
                        return Err(trace_err(i, format!("smaller extension {t} also forces")));
                    }
                }
            }
            Justification::NoExtension { .. } => {
                if st.after != st.before {
                    return Err(trace_err(i, "condition changed without a forcing extension"));
                }
                for t in candidates {
                    if forces_exact(&t, phi)? {
                        return Err(trace_err(i, format!("extension {t} forces the formula")));
                    }
                }
            }
            Justification::TruthBit { .. } => {
                return Err(trace_err(i, "even stage with a truth bit"))
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Settlement {
    Positive,
    Negative,
    Unsettled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub k: usize,
    pub formula: String,
    pub settled: Settlement,
    /// First stage whose resulting condition settles the formula.
    pub stage: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityAudit {
    pub final_condition: Condition,
    pub entries: Vec<AuditEntry>,
    pub all_settled: bool,
}

/// For each `φ_k` whose even stage appears in the trace, whether the final
/// condition forces `φ_k` or `¬φ_k`, citing the first stage that did.
pub fn audit_genericity(trace: &StageTrace, phis: &[Formula]) -> Result<GenericityAudit> {
    let processed = trace.stages.len().div_ceil(2).min(phis.len());
    let last = trace.final_condition();
    let mut entries = Vec::new();
    for (k, phi) in phis.iter().enumerate().take(processed) {
        let neg = Formula::not(phi.clone());
        let verdict = |s: &Condition| -> Result<Settlement> {
            Ok(if forces_exact(s, phi)? {
                Settlement::Positive
            } else if forces_exact(s, &neg)? {
                Settlement::Negative
            } else {
                Settlement::Unsettled
            })
        };
        let settled = verdict(&last)?;
        let mut stage = None;
        if settled != Settlement::Unsettled {
            for st in &trace.stages {
                if verdict(&st.after)? == settled {
                    stage = Some(st.index);
                    break;
                }
            }
        }
        entries.push(AuditEntry {
            k,
            formula: phi.to_string(),
            settled,
            stage,
        });
    }
    Ok(GenericityAudit {
        final_condition: last,
        all_settled: entries.iter().all(|e| e.settled != Settlement::Unsettled),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::set_signature;
    use crate::syntax::parse;

    fn sf(text: &str) -> Formula {
        parse(text, &set_signature()).unwrap()
    }

    fn always(b: bool) -> impl Fn(&Formula) -> Result<bool> {
        move |_| Ok(b)
    }

    #[test]
    fn two_stage_example() {
        let phis = [sf("(X 0)")];
        let xis = [sf("(= 0 0)")];
        let t = build_generic(2, &phis, &xis, &always(true)).unwrap();
        assert_eq!(t.stages[0].after.to_string(), "1");
        assert_eq!(t.final_condition().to_string(), "11");
        assert_eq!(decode_truth(&t).unwrap(), [true]);
        verify_trace(&t, &phis, &xis, Some(&always(true))).unwrap();
        let audit = audit_genericity(&t, &phis).unwrap();
        assert_eq!(audit.entries[0].settled, Settlement::Positive);
        assert_eq!(audit.entries[0].stage, Some(0));
    }

    #[test]
    fn contradiction_is_never_forced() {
        let phis = [sf("(and (X 0) (not (X 0)))")];
        let t = build_generic(1, &phis, &[], &always(true)).unwrap();
        assert!(matches!(t.stages[0].justification, Justification::NoExtension { .. }));
        let audit = audit_genericity(&t, &phis).unwrap();
        assert_eq!(audit.entries[0].settled, Settlement::Negative);
        assert!(build_generic(0, &[], &[], &always(true)).unwrap().stages.is_empty());
    }

    #[test]
    fn tampered_traces_are_rejected() {
        let phis = [sf("(X 1)"), sf("(X 0)")];
        let xis = [sf("(= 0 1)"), sf("(= 0 0)")];
        let t = build_generic(4, &phis, &xis, &always(false)).unwrap();
        verify_trace(&t, &phis, &xis, None).unwrap();
        assert_eq!(t.stages[0].after.to_string(), "01");
        let mut bad = t.clone();
        bad.stages[0].after = Condition::parse("11").unwrap();
        bad.stages[1].before = bad.stages[0].after.clone();
        bad.stages[0].justification = Justification::Forced {
            formula: String::new(),
            extension: bad.stages[0].after.clone(),
        };
        assert!(verify_trace(&bad, &phis, &xis, None).is_err());
        let json = t.to_json();
        assert_eq!(StageTrace::from_json(&json).unwrap(), t);
    }
}
