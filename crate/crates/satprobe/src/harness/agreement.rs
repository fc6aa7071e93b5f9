//! Cross-representation agreement: do decisions survive a change of
//! encoding?
//!
//! Two record sets over the same instance ids (e.g. the CNF run and its
//! Vertex Cover counterpart) are compared instance by instance. The report
//! carries the raw agreement rate, the correctness split among
//! disagreements, and each side's paired differentiation rate when pair ids
//! are present.

use super::{EvaluationRecord, HarnessError};
use crate::metrics::{paired_outcomes, Label, PairedOutcomeCounts};
use std::collections::BTreeMap;

/// Outcome of comparing two record sets covering the same instances.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    /// Instances compared.
    pub compared: u64,
    /// Fraction of instances where both sides produced the same decision
    /// (normalized to labels; two abstentions agree).
    pub agreement_rate: f64,
    pub disagreements: u64,
    /// Among disagreements, fraction where the first side was correct.
    pub first_correct_share: Option<f64>,
    /// Among disagreements, fraction where the second side was correct.
    pub second_correct_share: Option<f64>,
    /// Paired differentiation rate of each side, when pairs are present.
    pub first_adr: Option<f64>,
    pub second_adr: Option<f64>,
}

/// Compares two record sets, pairing records by instance id. The id sets
/// must match exactly; anything missing on either side is an error naming
/// the missing ids.
pub fn cross_representation_agreement(
    first: &[EvaluationRecord],
    second: &[EvaluationRecord],
) -> Result<AgreementReport, HarnessError> {
    if first.is_empty() && second.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    let first_by_id: BTreeMap<&str, &EvaluationRecord> =
        first.iter().map(|r| (r.instance_id.as_str(), r)).collect();
    let second_by_id: BTreeMap<&str, &EvaluationRecord> =
        second.iter().map(|r| (r.instance_id.as_str(), r)).collect();

    let missing_from_second: Vec<String> = first_by_id
        .keys()
        .filter(|id| !second_by_id.contains_key(**id))
        .map(|id| id.to_string())
        .collect();
    let missing_from_first: Vec<String> = second_by_id
        .keys()
        .filter(|id| !first_by_id.contains_key(**id))
        .map(|id| id.to_string())
        .collect();
    if !missing_from_first.is_empty() || !missing_from_second.is_empty() {
        return Err(HarnessError::InstanceIdMismatch {
            missing_from_first,
            missing_from_second,
        });
    }

    let mut agreements = 0u64;
    let mut disagreements = 0u64;
    let mut first_correct = 0u64;
    let mut second_correct = 0u64;
    for (id, a) in &first_by_id {
        let b = second_by_id[id];
        if a.predicted_label() == b.predicted_label() {
            agreements += 1;
        } else {
            disagreements += 1;
            if a.is_correct() {
                first_correct += 1;
            }
            if b.is_correct() {
                second_correct += 1;
            }
        }
    }

    let compared = first_by_id.len() as u64;
    let share = |count: u64| {
        (disagreements > 0).then(|| count as f64 / disagreements as f64)
    };
    Ok(AgreementReport {
        compared,
        agreement_rate: agreements as f64 / compared as f64,
        disagreements,
        first_correct_share: share(first_correct),
        second_correct_share: share(second_correct),
        first_adr: paired_outcomes_from_records(first).map(|c| c.adr()),
        second_adr: paired_outcomes_from_records(second).map(|c| c.adr()),
    })
}

/// Groups records by pair id and tallies per-pair outcomes. Pairs missing a
/// member are skipped; returns `None` when no complete pair exists.
pub fn paired_outcomes_from_records(records: &[EvaluationRecord]) -> Option<PairedOutcomeCounts> {
    let mut by_pair: BTreeMap<&str, (Option<Option<Label>>, Option<Option<Label>>)> =
        BTreeMap::new();
    for record in records {
        let Some(pair_id) = &record.pair_id else {
            continue;
        };
        let entry = by_pair.entry(pair_id.as_str()).or_default();
        match record.true_label {
            Label::Sat => entry.0 = Some(record.predicted_label()),
            Label::Unsat => entry.1 = Some(record.predicted_label()),
        }
    }
    let outcomes: Vec<(Option<Label>, Option<Label>)> = by_pair
        .values()
        .filter_map(|(on_sat, on_unsat)| Some(((*on_sat)?, (*on_unsat)?)))
        .collect();
    paired_outcomes(&outcomes).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{Decision, Prediction, Representation};
    use std::time::Duration;

    fn record(id: &str, truth: Label, decision: Decision, pair: Option<&str>) -> EvaluationRecord {
        EvaluationRecord {
            instance_id: id.to_string(),
            model: "test".into(),
            representation: Representation::Cnf,
            n: 4,
            alpha: 3.5,
            true_label: truth,
            pair_id: pair.map(str::to_string),
            prediction: Prediction {
                decision,
                branches: None,
                conflicts: None,
                witness: None,
                raw_text: String::new(),
                latency: Duration::ZERO,
            },
            witness_valid: None,
            witness_reason: None,
        }
    }

    #[test]
    fn agreement_counts_matching_decisions() {
        let first: Vec<_> = (0..10)
            .map(|i| record(&format!("i{i}"), Label::Sat, Decision::Sat, None))
            .collect();
        let mut second = first.clone();
        // Two disagreements, YES is label-equivalent to SAT.
        second[0].prediction.decision = Decision::Unsat;
        second[1].prediction.decision = Decision::No;
        second[2].prediction.decision = Decision::Yes;
        let report = cross_representation_agreement(&first, &second).unwrap();
        assert_eq!(report.compared, 10);
        assert_eq!(report.agreement_rate, 0.8);
        assert_eq!(report.disagreements, 2);
        // First side was right on both disagreements.
        assert_eq!(report.first_correct_share, Some(1.0));
        assert_eq!(report.second_correct_share, Some(0.0));
    }

    #[test]
    fn disagreement_split_three_of_four() {
        // Four disagreements on all-SAT truths: the first side correct on
        // three, the second on one → split (0.75, 0.25).
        let first_decisions = [Decision::Sat, Decision::Sat, Decision::Sat, Decision::Unsat];
        let second_decisions = [Decision::Unsat, Decision::Unsat, Decision::Unsat, Decision::Sat];
        let first: Vec<_> = first_decisions
            .iter()
            .enumerate()
            .map(|(i, &d)| record(&format!("i{i}"), Label::Sat, d, None))
            .collect();
        let second: Vec<_> = second_decisions
            .iter()
            .enumerate()
            .map(|(i, &d)| record(&format!("i{i}"), Label::Sat, d, None))
            .collect();
        let report = cross_representation_agreement(&first, &second).unwrap();
        assert_eq!(report.disagreements, 4);
        assert_eq!(report.agreement_rate, 0.0);
        assert_eq!(report.first_correct_share, Some(0.75));
        assert_eq!(report.second_correct_share, Some(0.25));
    }

    #[test]
    fn mismatched_ids_error_lists_missing() {
        let first = vec![record("a", Label::Sat, Decision::Sat, None)];
        let second = vec![record("b", Label::Sat, Decision::Sat, None)];
        match cross_representation_agreement(&first, &second) {
            Err(HarnessError::InstanceIdMismatch {
                missing_from_first,
                missing_from_second,
            }) => {
                assert_eq!(missing_from_first, vec!["b"]);
                assert_eq!(missing_from_second, vec!["a"]);
            }
            other => panic!("expected id mismatch, got {other:?}"),
        }
    }

    #[test]
    fn adr_from_pair_records() {
        let records = vec![
            record("p0-sat", Label::Sat, Decision::Sat, Some("p0")),
            record("p0-unsat", Label::Unsat, Decision::Unsat, Some("p0")),
            record("p1-sat", Label::Sat, Decision::Sat, Some("p1")),
            record("p1-unsat", Label::Unsat, Decision::Sat, Some("p1")),
        ];
        let counts = paired_outcomes_from_records(&records).unwrap();
        assert_eq!(counts.both_correct, 1);
        assert_eq!(counts.only_sat_correct, 1);
        assert_eq!(counts.adr(), 0.5);
        // No pair ids → no paired tally.
        let unpaired = vec![record("x", Label::Sat, Decision::Sat, None)];
        assert!(paired_outcomes_from_records(&unpaired).is_none());
    }
}
