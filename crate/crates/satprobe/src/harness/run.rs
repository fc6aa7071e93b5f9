//! The evaluation loop: bounded concurrency, transport-only retries,
//! witness validation, and serialized record emission.

use super::backend::{Backend, EvalTask};
use super::parse::parse_response;
use super::prompt::TemplateSet;
use super::{
    Decision, EvalInstance, EvaluationRecord, HarnessError, InstanceBody, Prediction,
    WitnessPayload,
};
use crate::cnf::Assignment;
use crate::reductions::{check_cover, check_packing};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

/// Execution limits for one evaluation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    /// Maximum in-flight backend requests.
    pub concurrency: usize,
    /// Retries per task, on transport errors only. Well-formed wrong answers
    /// are never retried.
    pub max_retries: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            concurrency: 4,
            max_retries: 2,
        }
    }
}

/// Queries the backend for every instance and returns one record per
/// instance, ordered by instance id regardless of completion order.
///
/// `sink` observes each record as it is produced (through a single
/// serialized writer), which lets callers persist incrementally and resume
/// interrupted runs. Backend failures surface per record as ABSTAIN after
/// retry exhaustion; they never abort the batch.
pub fn run_evaluation(
    instances: &[EvalInstance],
    backend: &dyn Backend,
    templates: &TemplateSet,
    options: &RunOptions,
    sink: impl FnMut(&EvaluationRecord) + Send,
) -> Result<Vec<EvaluationRecord>, HarnessError> {
    if instances.is_empty() {
        return Err(HarnessError::EmptyInput);
    }

    // Render every prompt up front; a template mismatch is a caller bug and
    // aborts the run before any request is issued.
    let tasks: Vec<EvalTask> = instances
        .iter()
        .enumerate()
        .map(|(index, instance)| {
            let representation = instance.body.representation();
            let prompt = templates
                .for_representation(representation)
                .render(&instance.body)?;
            Ok(EvalTask {
                index,
                instance_id: instance.id.clone(),
                representation,
                true_label: instance.label,
                pair_id: instance.pair_id.clone(),
                prompt,
            })
        })
        .collect::<Result<_, HarnessError>>()?;

    let model = backend.name();
    let cursor = AtomicUsize::new(0);
    let output = Mutex::new((Vec::with_capacity(tasks.len()), sink));
    let workers = options.concurrency.max(1).min(tasks.len());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = cursor.fetch_add(1, Ordering::SeqCst);
                let Some(task) = tasks.get(index) else {
                    break;
                };
                let record = evaluate_one(task, &instances[index], backend, &model, options);
                let mut guard = output.lock().expect("record writer poisoned");
                let (records, sink) = &mut *guard;
                sink(&record);
                records.push(record);
            });
        }
    });

    let (mut records, _) = output.into_inner().expect("record writer poisoned");
    records.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));
    Ok(records)
}

fn evaluate_one(
    task: &EvalTask,
    instance: &EvalInstance,
    backend: &dyn Backend,
    model: &str,
    options: &RunOptions,
) -> EvaluationRecord {
    let started = Instant::now();
    let mut attempts_left = options.max_retries;
    let response = loop {
        match backend.respond(task) {
            Ok(text) => break Ok(text),
            Err(error) if error.is_retryable() && attempts_left > 0 => {
                attempts_left -= 1;
            }
            Err(error) => break Err(error),
        }
    };
    let latency = started.elapsed();

    let mut prediction = match response {
        Ok(text) => {
            let mut p = parse_response(&text, task.representation);
            p.latency = latency;
            p
        }
        Err(error) => Prediction {
            decision: Decision::Abstain,
            branches: None,
            conflicts: None,
            witness: None,
            raw_text: format!("[no response: {error}]"),
            latency,
        },
    };

    let (witness_valid, witness_reason) = match &prediction.witness {
        Some(witness) => {
            let (valid, reason) = validate_witness(&instance.body, witness);
            (Some(valid), reason)
        }
        None => (None, None),
    };
    // Keep the invariant loudly checked: witnesses only ride affirmative
    // decisions (parse enforces it, transports can't introduce one).
    debug_assert!(prediction.witness.is_none() || prediction.decision.is_affirmative());
    if !prediction.decision.is_affirmative() {
        prediction.witness = None;
    }

    EvaluationRecord {
        instance_id: task.instance_id.clone(),
        model: model.to_string(),
        representation: task.representation,
        n: instance.n,
        alpha: instance.alpha,
        true_label: instance.label,
        pair_id: task.pair_id.clone(),
        prediction,
        witness_valid,
        witness_reason,
    }
}

/// Checks a claimed witness against the instance it was claimed for.
/// Returns the verdict and, when invalid, the reason.
pub fn validate_witness(body: &InstanceBody, witness: &WitnessPayload) -> (bool, Option<String>) {
    match (body, witness) {
        (InstanceBody::Cnf(formula), WitnessPayload::Assignment(map)) => {
            for &var in map.keys() {
                if var == 0 || var > formula.num_variables() {
                    return (
                        false,
                        Some(format!(
                            "assignment references unknown variable x{var} (formula has {})",
                            formula.num_variables()
                        )),
                    );
                }
            }
            // Unmentioned variables take the deterministic default polarity.
            let mut assignment = Assignment::all_false(formula.num_variables());
            for (&var, &value) in map {
                assignment.set(var, value);
            }
            match formula.evaluate(&assignment) {
                Ok(true) => (true, None),
                Ok(false) => (false, Some("assignment does not satisfy the formula".into())),
                Err(e) => (false, Some(e.to_string())),
            }
        }
        (InstanceBody::VertexCover(instance), WitnessPayload::Cover(cover)) => {
            match check_cover(instance, cover) {
                Ok(true) => (true, None),
                Ok(false) => (false, Some("cover misses an edge or exceeds the budget".into())),
                Err(e) => (false, Some(e.to_string())),
            }
        }
        (InstanceBody::Packing(instance), WitnessPayload::Packing(packing)) => {
            match check_packing(instance, packing) {
                Ok(true) => (true, None),
                Ok(false) => (
                    false,
                    Some("selection or placement violates the packing constraints".into()),
                ),
                Err(e) => (false, Some(e.to_string())),
            }
        }
        _ => (
            false,
            Some("witness type does not match the instance representation".into()),
        ),
    }
}

/// Fraction of records whose prediction produced a decision.
pub fn completion_rate(records: &[EvaluationRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    let decided = records
        .iter()
        .filter(|r| r.prediction.decision != Decision::Abstain)
        .count();
    decided as f64 / records.len() as f64
}

#[cfg(test)]
mod tests {
    use super::super::backend::{AlwaysSatClient, OracleClient, PeriodicTimeoutClient};
    use super::*;
    use crate::metrics::Label;
    use crate::testutil::formula;

    fn cnf_instances() -> Vec<EvalInstance> {
        // One satisfiable, one complementary-units unsatisfiable.
        vec![
            EvalInstance {
                id: "a-sat".into(),
                label: Label::Sat,
                pair_id: Some("p0".into()),
                n: 2,
                alpha: 0.5,
                body: InstanceBody::Cnf(formula(2, &[&[1, 2]])),
            },
            EvalInstance {
                id: "b-unsat".into(),
                label: Label::Unsat,
                pair_id: Some("p0".into()),
                n: 2,
                alpha: 1.0,
                body: InstanceBody::Cnf(formula(2, &[&[1], &[-1]])),
            },
        ]
    }

    #[test]
    fn oracle_run_is_fully_correct() {
        let instances = cnf_instances();
        let records = run_evaluation(
            &instances,
            &OracleClient,
            &TemplateSet::default(),
            &RunOptions::default(),
            |_| {},
        )
        .unwrap();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(EvaluationRecord::is_correct));
        assert_eq!(completion_rate(&records), 1.0);
        // Sorted by instance id.
        assert_eq!(records[0].instance_id, "a-sat");
        assert_eq!(records[1].instance_id, "b-unsat");
    }

    #[test]
    fn always_sat_misses_unsat_members() {
        let instances = cnf_instances();
        let records = run_evaluation(
            &instances,
            &AlwaysSatClient,
            &TemplateSet::default(),
            &RunOptions::default(),
            |_| {},
        )
        .unwrap();
        assert!(records[0].is_correct());
        assert!(!records[1].is_correct());
    }

    #[test]
    fn timeouts_abstain_after_retries_and_sink_sees_every_record() {
        let instances = cnf_instances();
        let seen = Mutex::new(0usize);
        let records = run_evaluation(
            &instances,
            &PeriodicTimeoutClient::every(2, OracleClient),
            &TemplateSet::default(),
            &RunOptions {
                concurrency: 2,
                max_retries: 3,
            },
            |_| {
                *seen.lock().unwrap() += 1;
            },
        )
        .unwrap();
        assert_eq!(*seen.lock().unwrap(), 2);
        // Task index 1 times out deterministically, retries included.
        let abstained: Vec<_> = records
            .iter()
            .filter(|r| r.prediction.decision == Decision::Abstain)
            .collect();
        assert_eq!(abstained.len(), 1);
        assert_eq!(abstained[0].instance_id, "b-unsat");
        assert!(abstained[0].prediction.raw_text.contains("scripted timeout"));
        assert_eq!(completion_rate(&records), 0.5);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            run_evaluation(
                &[],
                &OracleClient,
                &TemplateSet::default(),
                &RunOptions::default(),
                |_| {}
            ),
            Err(HarnessError::EmptyInput)
        ));
    }

    #[test]
    fn witness_validation_dispatches_by_representation() {
        let f = formula(2, &[&[1, 2]]);
        let body = InstanceBody::Cnf(f);

        let good = WitnessPayload::Assignment([(1u32, true)].into_iter().collect());
        assert_eq!(validate_witness(&body, &good), (true, None));

        let falsifying = WitnessPayload::Assignment([(1u32, false)].into_iter().collect());
        let (valid, reason) = validate_witness(&body, &falsifying);
        assert!(!valid);
        assert!(reason.unwrap().contains("does not satisfy"));

        let unknown_var = WitnessPayload::Assignment([(9u32, true)].into_iter().collect());
        let (valid, reason) = validate_witness(&body, &unknown_var);
        assert!(!valid);
        assert!(reason.unwrap().contains("unknown variable"));

        let mismatched = WitnessPayload::Cover(vec![0]);
        let (valid, reason) = validate_witness(&body, &mismatched);
        assert!(!valid);
        assert!(reason.unwrap().contains("does not match"));
    }
}
