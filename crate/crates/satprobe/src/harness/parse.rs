//! Two-stage response parsing: strict JSON first, keyword scan fallback.
//!
//! Parsing is total: any text yields a [`Prediction`], with ABSTAIN as the
//! failure mode and the raw text always retained. JSON candidates are
//! balanced `{...}` blocks anywhere in the response (code fences included);
//! the last block with a recognizable decision wins. The fallback scans for
//! whole-word decision keywords, last occurrence winning, and for CNF
//! responses also collects `x<i>=<bool>` assignment fragments as a witness.
//! Witnesses are kept only for affirmative decisions.

use super::{Decision, Prediction, Representation, WitnessPayload};
use crate::reductions::PackingWitness;
use regex::Regex;
use serde_json::Value;
use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Duration;

fn decision_keyword_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // YES/NO are matched case-sensitively: lowercase "no" is everyday prose,
    // the uppercase answer tokens are not.
    RE.get_or_init(|| {
        Regex::new(
            r"\b(?:(?i:UNSATISFIABLE|INFEASIBLE|UNSAT)|(?i:SATISFIABLE|FEASIBLE|SAT)|YES|NO)\b",
        )
        .expect("static regex")
    })
}

fn assignment_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)\bx(\d+)\s*(?:=|:=|:)\s*(true|false|t|f|1|0)\b").expect("static regex")
    })
}

/// Parses arbitrary response text into a prediction. Never fails; the
/// caller fills in latency.
pub fn parse_response(text: &str, representation: Representation) -> Prediction {
    let mut prediction = Prediction {
        decision: Decision::Abstain,
        branches: None,
        conflicts: None,
        witness: None,
        raw_text: text.to_string(),
        latency: Duration::ZERO,
    };

    if let Some(parsed) = parse_json_stage(text, representation) {
        apply(&mut prediction, parsed);
        return prediction;
    }
    if let Some(parsed) = parse_keyword_stage(text, representation) {
        apply(&mut prediction, parsed);
    }
    prediction
}

struct Parsed {
    decision: Decision,
    branches: Option<u64>,
    conflicts: Option<u64>,
    witness: Option<WitnessPayload>,
}

fn apply(prediction: &mut Prediction, parsed: Parsed) {
    prediction.decision = parsed.decision;
    prediction.branches = parsed.branches;
    prediction.conflicts = parsed.conflicts;
    // A witness only makes sense alongside an affirmative decision.
    prediction.witness = if parsed.decision.is_affirmative() {
        parsed.witness
    } else {
        None
    };
}

fn decision_from_text(text: &str) -> Option<Decision> {
    match text.to_ascii_uppercase().as_str() {
        "SAT" | "SATISFIABLE" => Some(Decision::Sat),
        "UNSAT" | "UNSATISFIABLE" => Some(Decision::Unsat),
        "YES" | "FEASIBLE" => Some(Decision::Yes),
        "NO" | "INFEASIBLE" => Some(Decision::No),
        _ => None,
    }
}

/// Balanced `{...}` blocks in order of appearance. String contents are not
/// tracked; a block that fails to parse as JSON is simply skipped.
fn brace_blocks(text: &str) -> Vec<&str> {
    let bytes = text.as_bytes();
    let mut blocks = Vec::new();
    let mut start: Option<usize> = None;
    let mut depth = 0usize;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'{' => {
                if depth == 0 {
                    start = Some(i);
                }
                depth += 1;
            }
            b'}' => {
                if depth > 0 {
                    depth -= 1;
                    if depth == 0 {
                        if let Some(s) = start.take() {
                            blocks.push(&text[s..=i]);
                        }
                    }
                }
            }
            _ => {}
        }
    }
    blocks
}

fn parse_json_stage(text: &str, representation: Representation) -> Option<Parsed> {
    let mut result = None;
    for block in brace_blocks(text) {
        let Ok(Value::Object(object)) = serde_json::from_str::<Value>(block) else {
            continue;
        };
        let Some(decision) = object
            .get("decision")
            .and_then(Value::as_str)
            .and_then(decision_from_text)
        else {
            continue;
        };
        let witness = object
            .get("witness")
            .and_then(|value| witness_from_json(value, representation));
        result = Some(Parsed {
            decision,
            branches: object.get("branches").and_then(Value::as_u64),
            conflicts: object.get("conflicts").and_then(Value::as_u64),
            witness,
        });
    }
    result
}

fn witness_from_json(value: &Value, representation: Representation) -> Option<WitnessPayload> {
    match representation {
        Representation::Cnf => {
            let mut map = BTreeMap::new();
            match value {
                // {"x1": true, "2": false}
                Value::Object(entries) => {
                    for (key, val) in entries {
                        let var: u32 = key.trim_start_matches(['x', 'X']).parse().ok()?;
                        map.insert(var, val.as_bool()?);
                    }
                }
                // DIMACS-signed list: [1, -2]
                Value::Array(items) => {
                    for item in items {
                        let code = item.as_i64()?;
                        if code == 0 || code.unsigned_abs() > u64::from(u32::MAX) {
                            return None;
                        }
                        map.insert(code.unsigned_abs() as u32, code > 0);
                    }
                }
                _ => return None,
            }
            if map.is_empty() {
                return None;
            }
            Some(WitnessPayload::Assignment(map))
        }
        Representation::VertexCover => {
            let items = value.as_array()?;
            let cover: Option<Vec<usize>> = items
                .iter()
                .map(|v| v.as_u64().map(|x| x as usize))
                .collect();
            Some(WitnessPayload::Cover(cover?))
        }
        Representation::Packing => {
            let witness: PackingWitness = serde_json::from_value(value.clone()).ok()?;
            Some(WitnessPayload::Packing(witness))
        }
    }
}

fn parse_keyword_stage(text: &str, representation: Representation) -> Option<Parsed> {
    let last = decision_keyword_re().find_iter(text).last()?;
    let decision = decision_from_text(last.as_str())?;

    let witness = if representation == Representation::Cnf && decision.is_affirmative() {
        let mut map = BTreeMap::new();
        for capture in assignment_re().captures_iter(text) {
            let Ok(var) = capture[1].parse::<u32>() else {
                continue;
            };
            let value = matches!(
                capture[2].to_ascii_lowercase().as_str(),
                "true" | "t" | "1"
            );
            map.insert(var, value);
        }
        (!map.is_empty()).then_some(WitnessPayload::Assignment(map))
    } else {
        None
    };

    Some(Parsed {
        decision,
        branches: None,
        conflicts: None,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_json_with_counters() {
        let p = parse_response(
            r#"{"decision":"UNSATISFIABLE","branches":12,"conflicts":3}"#,
            Representation::Cnf,
        );
        assert_eq!(p.decision, Decision::Unsat);
        assert_eq!(p.branches, Some(12));
        assert_eq!(p.conflicts, Some(3));
        assert!(p.witness.is_none());
    }

    #[test]
    fn json_inside_fenced_block() {
        let text = "Reasoning...\n```json\n{\"decision\": \"SATISFIABLE\", \"witness\": {\"x1\": true}}\n```";
        let p = parse_response(text, Representation::Cnf);
        assert_eq!(p.decision, Decision::Sat);
        assert_eq!(
            p.witness,
            Some(WitnessPayload::Assignment(BTreeMap::from([(1, true)])))
        );
    }

    #[test]
    fn last_json_block_wins() {
        let text = r#"{"decision":"SATISFIABLE"} wait, actually {"decision":"UNSATISFIABLE"}"#;
        let p = parse_response(text, Representation::Cnf);
        assert_eq!(p.decision, Decision::Unsat);
    }

    #[test]
    fn keyword_fallback_with_assignment_scan() {
        let p = parse_response(
            "…the formula is SATISFIABLE. x1=True x2=False",
            Representation::Cnf,
        );
        assert_eq!(p.decision, Decision::Sat);
        assert_eq!(p.branches, None);
        assert_eq!(p.conflicts, None);
        assert_eq!(
            p.witness,
            Some(WitnessPayload::Assignment(BTreeMap::from([
                (1, true),
                (2, false)
            ])))
        );
    }

    #[test]
    fn last_keyword_occurrence_wins() {
        let p = parse_response(
            "It could be SATISFIABLE... no, it is UNSATISFIABLE",
            Representation::Cnf,
        );
        assert_eq!(p.decision, Decision::Unsat);
    }

    #[test]
    fn satisfiable_is_not_matched_inside_unsatisfiable() {
        let p = parse_response("UNSATISFIABLE", Representation::Cnf);
        assert_eq!(p.decision, Decision::Unsat);
        let p = parse_response("The answer: UNSAT", Representation::Cnf);
        assert_eq!(p.decision, Decision::Unsat);
    }

    #[test]
    fn unparseable_text_abstains_with_raw_retained() {
        let p = parse_response("I cannot determine this.", Representation::Cnf);
        assert_eq!(p.decision, Decision::Abstain);
        assert_eq!(p.raw_text, "I cannot determine this.");
        assert!(p.witness.is_none());
    }

    #[test]
    fn lowercase_no_is_not_a_decision() {
        let p = parse_response("there is no easy answer here", Representation::VertexCover);
        assert_eq!(p.decision, Decision::Abstain);
        let p = parse_response("NO", Representation::VertexCover);
        assert_eq!(p.decision, Decision::No);
    }

    #[test]
    fn yes_with_cover_witness() {
        let p = parse_response(
            r#"{"decision":"YES","witness":[0,2,5]}"#,
            Representation::VertexCover,
        );
        assert_eq!(p.decision, Decision::Yes);
        assert_eq!(p.witness, Some(WitnessPayload::Cover(vec![0, 2, 5])));
    }

    #[test]
    fn packing_witness_deserializes() {
        let text = r#"{"decision":"YES","witness":{"selected_rods":[0,3],"placements":[{"token":0,"rod":0,"slot":1}]}}"#;
        let p = parse_response(text, Representation::Packing);
        assert_eq!(p.decision, Decision::Yes);
        assert!(matches!(p.witness, Some(WitnessPayload::Packing(_))));
    }

    #[test]
    fn witness_dropped_on_negative_decision() {
        let p = parse_response(
            r#"{"decision":"UNSATISFIABLE","witness":{"x1":true}}"#,
            Representation::Cnf,
        );
        assert_eq!(p.decision, Decision::Unsat);
        assert!(p.witness.is_none());
    }

    #[test]
    fn dimacs_style_witness_array() {
        let p = parse_response(
            r#"{"decision":"SATISFIABLE","witness":[1,-2,3]}"#,
            Representation::Cnf,
        );
        assert_eq!(
            p.witness,
            Some(WitnessPayload::Assignment(BTreeMap::from([
                (1, true),
                (2, false),
                (3, true)
            ])))
        );
    }
}
