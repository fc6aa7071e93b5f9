//! Classification metrics with explicit undefined handling, plus the
//! paired-evaluation measures built on both-members-correct tallies.
//!
//! Metrics over a confusion tally can be undefined: a zero denominator is
//! reported as a first-class [`MetricValue::Undefined`] with a reason code,
//! never coerced to 0 and never a panic. That mirrors how score tables leave
//! cells blank instead of inventing numbers.
//!
//! For paired instance sets, [`PairedOutcomeCounts`] tallies how many pairs
//! had both members classified correctly, only the satisfiable member, only
//! the unsatisfiable member, or neither. The accurate differentiation rate
//! (`adr`) is the both-correct fraction; unlike accuracy or F1 it cannot be
//! inflated by one-sided bias, and unlike MCC it is defined for every
//! nonempty tally. All metric arithmetic is double precision; the algebraic
//! identities connecting the pair-level and confusion-level routes hold to
//! 1e-12 and are enforced by the test suite.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("no records supplied")]
    EmptyRecords,
    #[error("recall {value} outside [0, 1]")]
    RecallOutOfRange { value: f64 },
}

/// Ground-truth class of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Label {
    Sat,
    Unsat,
}

impl Label {
    pub fn opposite(self) -> Label {
        match self {
            Label::Sat => Label::Unsat,
            Label::Unsat => Label::Sat,
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Sat => write!(f, "SAT"),
            Label::Unsat => write!(f, "UNSAT"),
        }
    }
}

/// Why a metric has no value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UndefinedReason {
    /// A denominator of the metric formula is zero.
    ZeroDenominator,
    /// The ground truth contains no instance of a required class.
    EmptyClass,
    /// The predictions collapse to a single class.
    ClassCollapse,
}

impl std::fmt::Display for UndefinedReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UndefinedReason::ZeroDenominator => write!(f, "zero-denominator"),
            UndefinedReason::EmptyClass => write!(f, "empty-class"),
            UndefinedReason::ClassCollapse => write!(f, "class-collapse"),
        }
    }
}

/// A metric value or an explicit reason it is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricValue {
    Defined(f64),
    Undefined(UndefinedReason),
}

impl MetricValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            MetricValue::Defined(v) => Some(*v),
            MetricValue::Undefined(_) => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, MetricValue::Defined(_))
    }

    pub fn undefined_reason(&self) -> Option<UndefinedReason> {
        match self {
            MetricValue::Defined(_) => None,
            MetricValue::Undefined(r) => Some(*r),
        }
    }

    /// CSV cell: the number, or empty for undefined.
    pub fn csv_cell(&self) -> String {
        match self {
            MetricValue::Defined(v) => format!("{v}"),
            MetricValue::Undefined(_) => String::new(),
        }
    }
}

/// Binary confusion tally relative to a designated positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_positives: u64,
    pub false_positives: u64,
    pub true_negatives: u64,
    pub false_negatives: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        ConfusionCounts {
            true_positives: tp,
            false_positives: fp,
            true_negatives: tn,
            false_negatives: fn_,
        }
    }

    pub fn total(&self) -> u64 {
        self.true_positives + self.false_positives + self.true_negatives + self.false_negatives
    }

    pub fn accuracy(&self) -> MetricValue {
        if self.total() == 0 {
            return MetricValue::Undefined(UndefinedReason::ZeroDenominator);
        }
        MetricValue::Defined(
            (self.true_positives + self.true_negatives) as f64 / self.total() as f64,
        )
    }

    /// TP / (TP + FP); undefined when the model never predicts the positive
    /// class.
    pub fn precision(&self) -> MetricValue {
        let denom = self.true_positives + self.false_positives;
        if denom == 0 {
            return MetricValue::Undefined(UndefinedReason::ClassCollapse);
        }
        MetricValue::Defined(self.true_positives as f64 / denom as f64)
    }

    /// TP / (TP + FN); undefined when the ground truth has no positives.
    pub fn recall(&self) -> MetricValue {
        let denom = self.true_positives + self.false_negatives;
        if denom == 0 {
            return MetricValue::Undefined(UndefinedReason::EmptyClass);
        }
        MetricValue::Defined(self.true_positives as f64 / denom as f64)
    }

    /// 2TP / (2TP + FP + FN).
    pub fn f1(&self) -> MetricValue {
        if self.true_positives + self.false_negatives == 0 {
            return MetricValue::Undefined(UndefinedReason::EmptyClass);
        }
        let denom = 2 * self.true_positives + self.false_positives + self.false_negatives;
        if denom == 0 {
            return MetricValue::Undefined(UndefinedReason::ClassCollapse);
        }
        MetricValue::Defined(2.0 * self.true_positives as f64 / denom as f64)
    }

    /// Matthews correlation coefficient
    /// (TP·TN − FP·FN) / √((TP+FP)(TP+FN)(TN+FP)(TN+FN)), in [−1, 1];
    /// undefined whenever one of the four margin factors is zero.
    pub fn mcc(&self) -> MetricValue {
        let tp = self.true_positives as f64;
        let fp = self.false_positives as f64;
        let tn = self.true_negatives as f64;
        let fn_ = self.false_negatives as f64;
        if self.true_positives + self.false_negatives == 0
            || self.true_negatives + self.false_positives == 0
        {
            // A ground-truth class is empty.
            return MetricValue::Undefined(UndefinedReason::EmptyClass);
        }
        if self.true_positives + self.false_positives == 0
            || self.true_negatives + self.false_negatives == 0
        {
            // Predictions collapse to one class.
            return MetricValue::Undefined(UndefinedReason::ClassCollapse);
        }
        let denom = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
        MetricValue::Defined((tp * tn - fp * fn_) / denom)
    }
}

/// Confusion tally plus the abstention count excluded from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionSummary {
    pub counts: ConfusionCounts,
    /// Records without a parseable decision; excluded from the tally and
    /// reported through the completion rate.
    pub abstained: u64,
}

impl ConfusionSummary {
    /// Fraction of records that produced a decision.
    pub fn completion_rate(&self) -> f64 {
        let total = self.counts.total() + self.abstained;
        if total == 0 {
            return 0.0;
        }
        self.counts.total() as f64 / total as f64
    }
}

/// Tallies `(true label, predicted label)` records against a positive class.
/// `None` predictions are abstentions: excluded from the tally, counted
/// separately.
pub fn confusion(
    records: &[(Label, Option<Label>)],
    positive: Label,
) -> Result<ConfusionSummary, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::EmptyRecords);
    }
    let mut counts = ConfusionCounts::default();
    let mut abstained = 0;
    for &(truth, predicted) in records {
        let Some(predicted) = predicted else {
            abstained += 1;
            continue;
        };
        match (truth == positive, predicted == positive) {
            (true, true) => counts.true_positives += 1,
            (true, false) => counts.false_negatives += 1,
            (false, true) => counts.false_positives += 1,
            (false, false) => counts.true_negatives += 1,
        }
    }
    Ok(ConfusionSummary { counts, abstained })
}

/// Per-pair outcome tally over a paired instance set.
///
/// A pair is counted once: both members correct, only the SAT member, only
/// the UNSAT member, or neither. Abstentions count as incorrect for the
/// affected member.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedOutcomeCounts {
    pub both_correct: u64,
    pub only_sat_correct: u64,
    pub only_unsat_correct: u64,
    pub both_wrong: u64,
}

impl PairedOutcomeCounts {
    pub fn new(
        both_correct: u64,
        only_sat_correct: u64,
        only_unsat_correct: u64,
        both_wrong: u64,
    ) -> Self {
        PairedOutcomeCounts {
            both_correct,
            only_sat_correct,
            only_unsat_correct,
            both_wrong,
        }
    }

    /// Number of pairs.
    pub fn total(&self) -> u64 {
        self.both_correct + self.only_sat_correct + self.only_unsat_correct + self.both_wrong
    }

    /// Recall over SAT members: fraction of pairs whose satisfiable member
    /// was classified correctly.
    pub fn sat_recall(&self) -> f64 {
        (self.both_correct + self.only_sat_correct) as f64 / self.total() as f64
    }

    /// Recall over UNSAT members.
    pub fn unsat_recall(&self) -> f64 {
        (self.both_correct + self.only_unsat_correct) as f64 / self.total() as f64
    }

    /// Accurate differentiation rate: the fraction of pairs with both
    /// members correct. Always defined for a nonempty tally.
    pub fn adr(&self) -> f64 {
        self.both_correct as f64 / self.total() as f64
    }

    /// Accuracy over the 2M flattened instances; identically
    /// (sat_recall + unsat_recall) / 2.
    pub fn accuracy(&self) -> f64 {
        (self.sat_recall() + self.unsat_recall()) / 2.0
    }

    /// Splits the differentiation rate into the product of per-class recalls
    /// (the value under independence) and the covariance of the two
    /// correctness indicators. The parts sum back to `adr`.
    pub fn independence_decomposition(&self) -> (f64, f64) {
        let independent = self.sat_recall() * self.unsat_recall();
        (independent, self.adr() - independent)
    }

    /// MCC computed directly from the pair tally:
    /// (adr − both_wrong/M) / √(1 − ((only_sat − only_unsat)/M)²).
    /// Undefined under class collapse (predictions all one class, which
    /// makes the asymmetry factor hit ±1). Agrees with the confusion-matrix
    /// route over the flattened 2M instances whenever that is defined.
    pub fn mcc(&self) -> MetricValue {
        let m = self.total() as f64;
        let both_wrong_share = self.both_wrong as f64 / m;
        let asymmetry = (self.only_sat_correct as f64 - self.only_unsat_correct as f64) / m;
        let discriminant = 1.0 - asymmetry * asymmetry;
        if discriminant <= 0.0 {
            return MetricValue::Undefined(UndefinedReason::ClassCollapse);
        }
        MetricValue::Defined((self.adr() - both_wrong_share) / discriminant.sqrt())
    }

    /// Flattens the pair tally into a confusion tally over 2M instances.
    pub fn to_confusion(&self, positive: Label) -> ConfusionCounts {
        let sat_hits = self.both_correct + self.only_sat_correct;
        let sat_misses = self.only_unsat_correct + self.both_wrong;
        let unsat_hits = self.both_correct + self.only_unsat_correct;
        let unsat_misses = self.only_sat_correct + self.both_wrong;
        match positive {
            Label::Sat => ConfusionCounts::new(sat_hits, unsat_misses, unsat_hits, sat_misses),
            Label::Unsat => ConfusionCounts::new(unsat_hits, sat_misses, sat_hits, unsat_misses),
        }
    }
}

/// Tallies per-pair predictions. Each element is
/// `(prediction on the SAT member, prediction on the UNSAT member)`;
/// `None` (abstention) counts as incorrect for that member.
pub fn paired_outcomes(
    pairs: &[(Option<Label>, Option<Label>)],
) -> Result<PairedOutcomeCounts, MetricsError> {
    if pairs.is_empty() {
        return Err(MetricsError::EmptyRecords);
    }
    let mut counts = PairedOutcomeCounts::default();
    for &(on_sat, on_unsat) in pairs {
        let sat_ok = on_sat == Some(Label::Sat);
        let unsat_ok = on_unsat == Some(Label::Unsat);
        match (sat_ok, unsat_ok) {
            (true, true) => counts.both_correct += 1,
            (true, false) => counts.only_sat_correct += 1,
            (false, true) => counts.only_unsat_correct += 1,
            (false, false) => counts.both_wrong += 1,
        }
    }
    Ok(counts)
}

/// Feasible range of the differentiation rate given the per-class recalls:
/// `max(0, r_s + r_u − 1) ≤ adr ≤ min(r_s, r_u)`. Used as a consistency
/// check on reported results.
pub fn adr_bounds(sat_recall: f64, unsat_recall: f64) -> Result<(f64, f64), MetricsError> {
    for value in [sat_recall, unsat_recall] {
        if !(0.0..=1.0).contains(&value) {
            return Err(MetricsError::RecallOutOfRange { value });
        }
    }
    // r_s − (1 − r_u) rather than r_s + r_u − 1: same quantity, but it
    // avoids an intermediate above 1 that loses the low bits of the result.
    Ok((
        (sat_recall - (1.0 - unsat_recall)).max(0.0),
        sat_recall.min(unsat_recall),
    ))
}

/// MCC in terms of the per-class recalls alone:
/// (r_s + r_u − 1) / √((r_s + 1 − r_u)(r_u + 1 − r_s)). Algebraically equal
/// to [`PairedOutcomeCounts::mcc`]; undefined on the same class-collapse
/// boundary.
pub fn mcc_from_recalls(sat_recall: f64, unsat_recall: f64) -> MetricValue {
    let product = (sat_recall + 1.0 - unsat_recall) * (unsat_recall + 1.0 - sat_recall);
    if product <= 0.0 {
        return MetricValue::Undefined(UndefinedReason::ClassCollapse);
    }
    MetricValue::Defined((sat_recall + unsat_recall - 1.0) / product.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_tally_and_orientation_swap() {
        let records = [
            (Label::Sat, Some(Label::Sat)),
            (Label::Sat, Some(Label::Sat)),
            (Label::Sat, Some(Label::Sat)),
            (Label::Unsat, Some(Label::Sat)),
        ];
        let sat_positive = confusion(&records, Label::Sat).unwrap();
        assert_eq!(sat_positive.counts, ConfusionCounts::new(3, 1, 0, 0));
        let unsat_positive = confusion(&records, Label::Unsat).unwrap();
        assert_eq!(unsat_positive.counts, ConfusionCounts::new(0, 0, 3, 1));
    }

    #[test]
    fn abstentions_excluded_and_reported() {
        let records = [
            (Label::Sat, Some(Label::Sat)),
            (Label::Sat, None),
            (Label::Unsat, None),
            (Label::Unsat, Some(Label::Unsat)),
        ];
        let summary = confusion(&records, Label::Sat).unwrap();
        assert_eq!(summary.counts.total(), 2);
        assert_eq!(summary.abstained, 2);
        assert_eq!(summary.completion_rate(), 0.5);
    }

    #[test]
    fn empty_records_error() {
        assert_eq!(confusion(&[], Label::Sat), Err(MetricsError::EmptyRecords));
        assert_eq!(paired_outcomes(&[]), Err(MetricsError::EmptyRecords));
    }

    #[test]
    fn precision_recall_accuracy_examples() {
        let counts = ConfusionCounts::new(3, 1, 0, 0);
        assert_eq!(counts.precision(), MetricValue::Defined(0.75));

        let no_positives = ConfusionCounts::new(0, 2, 3, 0);
        assert_eq!(
            no_positives.recall(),
            MetricValue::Undefined(UndefinedReason::EmptyClass)
        );

        let perfect = ConfusionCounts::new(5, 0, 5, 0);
        assert_eq!(perfect.accuracy(), MetricValue::Defined(1.0));
        assert_eq!(perfect.f1(), MetricValue::Defined(1.0));
    }

    #[test]
    fn mcc_examples_and_degeneracies() {
        assert_eq!(ConfusionCounts::new(5, 0, 5, 0).mcc(), MetricValue::Defined(1.0));

        // Always-SAT on balanced data: no predicted negatives.
        assert_eq!(
            ConfusionCounts::new(5, 5, 0, 0).mcc(),
            MetricValue::Undefined(UndefinedReason::ClassCollapse)
        );

        // Single-class ground truth.
        assert_eq!(
            ConfusionCounts::new(4, 0, 0, 1).mcc(),
            MetricValue::Undefined(UndefinedReason::EmptyClass)
        );

        // (4·4 − 1·1) / √(5·5·5·5) = 15/25.
        let mixed = ConfusionCounts::new(4, 1, 4, 1);
        let value = mixed.mcc().value().unwrap();
        assert!((value - 0.6).abs() < 1e-12);
    }

    #[test]
    fn paired_outcome_tallies() {
        let all_correct = vec![(Some(Label::Sat), Some(Label::Unsat)); 5];
        let counts = paired_outcomes(&all_correct).unwrap();
        assert_eq!(counts, PairedOutcomeCounts::new(5, 0, 0, 0));
        assert_eq!(counts.sat_recall(), 1.0);
        assert_eq!(counts.unsat_recall(), 1.0);
        assert_eq!(counts.adr(), 1.0);

        // Always predict SAT: every UNSAT member is wrong.
        let always_sat = vec![(Some(Label::Sat), Some(Label::Sat)); 5];
        let counts = paired_outcomes(&always_sat).unwrap();
        assert_eq!(counts, PairedOutcomeCounts::new(0, 5, 0, 0));
        assert_eq!(counts.sat_recall(), 1.0);
        assert_eq!(counts.unsat_recall(), 0.0);
        assert_eq!(counts.adr(), 0.0);
        assert_eq!(counts.accuracy(), 0.5);

        // Abstention counts as incorrect for that member.
        let with_abstain = [
            (Some(Label::Sat), Some(Label::Unsat)),
            (None, Some(Label::Unsat)),
        ];
        let counts = paired_outcomes(&with_abstain).unwrap();
        assert_eq!(counts, PairedOutcomeCounts::new(1, 0, 1, 0));

        let mixed = PairedOutcomeCounts::new(3, 1, 1, 0);
        assert_eq!(mixed.sat_recall(), 0.8);
        assert_eq!(mixed.unsat_recall(), 0.8);
        assert_eq!(mixed.adr(), 0.6);
    }

    #[test]
    fn adr_bounds_examples() {
        assert_eq!(adr_bounds(1.0, 0.6).unwrap(), (0.6, 0.6)); // pinned
        assert_eq!(adr_bounds(0.5, 0.5).unwrap(), (0.0, 0.5));
        assert_eq!(adr_bounds(1.0, 1.0).unwrap(), (1.0, 1.0));
        assert!(matches!(
            adr_bounds(1.2, 0.5),
            Err(MetricsError::RecallOutOfRange { .. })
        ));
    }

    #[test]
    fn decomposition_examples() {
        let perfect = PairedOutcomeCounts::new(5, 0, 0, 0);
        assert_eq!(perfect.independence_decomposition(), (1.0, 0.0));

        let degenerate = PairedOutcomeCounts::new(0, 5, 0, 0);
        assert_eq!(degenerate.independence_decomposition(), (0.0, 0.0));

        // adr 0.6 with recalls 0.8/0.8: independence term 0.64, covariance -0.04.
        let mixed = PairedOutcomeCounts::new(3, 1, 1, 0);
        let (independent, covariance) = mixed.independence_decomposition();
        assert!((independent - 0.64).abs() < 1e-12);
        assert!((covariance + 0.04).abs() < 1e-12);
        assert!((independent + covariance - mixed.adr()).abs() < 1e-12);
    }

    #[test]
    fn pair_level_mcc_matches_confusion_route() {
        let mixed = PairedOutcomeCounts::new(3, 1, 1, 0);
        let via_pairs = mixed.mcc().value().unwrap();
        assert!((via_pairs - 0.6).abs() < 1e-12);
        let via_confusion = mixed.to_confusion(Label::Sat).mcc().value().unwrap();
        assert!((via_pairs - via_confusion).abs() < 1e-12);

        let all_correct = PairedOutcomeCounts::new(4, 0, 0, 0);
        assert_eq!(all_correct.mcc(), MetricValue::Defined(1.0));

        // Always-SAT: asymmetry hits 1, undefined on both routes.
        let collapsed = PairedOutcomeCounts::new(0, 6, 0, 0);
        assert_eq!(
            collapsed.mcc(),
            MetricValue::Undefined(UndefinedReason::ClassCollapse)
        );
        assert_eq!(
            collapsed.to_confusion(Label::Sat).mcc(),
            MetricValue::Undefined(UndefinedReason::ClassCollapse)
        );
    }

    #[test]
    fn csv_cells_blank_out_undefined() {
        assert_eq!(MetricValue::Defined(0.25).csv_cell(), "0.25");
        assert_eq!(
            MetricValue::Undefined(UndefinedReason::ClassCollapse).csv_cell(),
            ""
        );
    }
}
