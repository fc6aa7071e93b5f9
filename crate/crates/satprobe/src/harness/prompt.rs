//! Prompt construction for the three instance representations.
//!
//! Templates are plain text with a single `{instance}` placeholder. The
//! defaults ask for a categorical decision, self-reported branch/conflict
//! counts (CNF only), and a witness on affirmative answers, and they instruct
//! the backend to respond with a single strict JSON object so parsing stays
//! decoupled from reasoning. Rendering is deterministic: the same instance
//! and template always produce byte-identical prompts.

use super::{HarnessError, InstanceBody, Representation};
use crate::dimacs::emit_dimacs;

const CNF_TEMPLATE: &str = "\
You are a SAT logic solver.
Use a step-by-step method to solve the following CNF formula, then report:
* whether the formula is SATISFIABLE or UNSATISFIABLE
* the number of branches (i.e., decision points)
* the number of conflicts (i.e., backtracking steps)
* if the formula is SATISFIABLE, a value for each variable
Output only a single JSON object with no extra explanation, shaped like
{\"decision\": \"SATISFIABLE\", \"branches\": 0, \"conflicts\": 0, \"witness\": {\"x1\": true, \"x2\": false}}
or {\"decision\": \"UNSATISFIABLE\", \"branches\": 0, \"conflicts\": 0}.
The formula is:
{instance}
";

const VERTEX_COVER_TEMPLATE: &str = "\
You are a combinatorial reasoning assistant.
The JSON below describes an undirected graph: labeled vertices, an edge list,
and a cover budget k. Decide the question: is there a vertex cover of size <= k?
Answer YES or NO, and if YES, output a cover within the budget.
Output only a single JSON object with no extra explanation, shaped like
{\"decision\": \"YES\", \"witness\": [0, 2, 5]} or {\"decision\": \"NO\"}.
The instance is:
{instance}
";

const PACKING_TEMPLATE: &str = "\
You are a combinatorial reasoning assistant.
The JSON below describes a discrete 3-D packing problem. Every variable owns
two rods that share a base cell, so a valid selection keeps exactly one rod
per variable, with selected rods pairwise disjoint. Every token must then be
placed into a free slot (1-based, up to the rod's capacity) of a selected rod
taken from the token's allowed-rod list. Decide the question: can all tokens
be placed? Answer YES or NO, and if YES, output the rod selection and the
token placements.
Output only a single JSON object with no extra explanation, shaped like
{\"decision\": \"YES\", \"witness\": {\"selected_rods\": [0, 3], \"placements\": [{\"token\": 0, \"rod\": 0, \"slot\": 1}]}}
or {\"decision\": \"NO\"}.
The instance is:
{instance}
";

const PLACEHOLDER: &str = "{instance}";

/// A prompt template bound to one representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    representation: Representation,
    template: String,
}

impl PromptTemplate {
    /// The template must contain `{instance}` exactly once.
    pub fn new(representation: Representation, template: String) -> Result<Self, HarnessError> {
        let count = template.matches(PLACEHOLDER).count();
        if count != 1 {
            return Err(HarnessError::BadTemplate { count });
        }
        Ok(PromptTemplate {
            representation,
            template,
        })
    }

    pub fn default_for(representation: Representation) -> Self {
        let template = match representation {
            Representation::Cnf => CNF_TEMPLATE,
            Representation::VertexCover => VERTEX_COVER_TEMPLATE,
            Representation::Packing => PACKING_TEMPLATE,
        };
        PromptTemplate {
            representation,
            template: template.to_string(),
        }
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    /// Renders the prompt for `body`, which must match the template's
    /// representation.
    pub fn render(&self, body: &InstanceBody) -> Result<String, HarnessError> {
        if body.representation() != self.representation {
            return Err(HarnessError::RepresentationMismatch {
                expected: self.representation,
                got: body.representation(),
            });
        }
        Ok(self
            .template
            .replacen(PLACEHOLDER, &render_instance_body(body), 1))
    }
}

/// One template per representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSet {
    pub cnf: PromptTemplate,
    pub vertex_cover: PromptTemplate,
    pub packing: PromptTemplate,
}

impl Default for TemplateSet {
    fn default() -> Self {
        TemplateSet {
            cnf: PromptTemplate::default_for(Representation::Cnf),
            vertex_cover: PromptTemplate::default_for(Representation::VertexCover),
            packing: PromptTemplate::default_for(Representation::Packing),
        }
    }
}

impl TemplateSet {
    pub fn for_representation(&self, representation: Representation) -> &PromptTemplate {
        match representation {
            Representation::Cnf => &self.cnf,
            Representation::VertexCover => &self.vertex_cover,
            Representation::Packing => &self.packing,
        }
    }
}

/// The instance text substituted into a template: clause notation plus the
/// DIMACS block for CNF, pretty-printed JSON for the reductions.
pub fn render_instance_body(body: &InstanceBody) -> String {
    match body {
        InstanceBody::Cnf(formula) => {
            let clause_lines: Vec<String> = formula
                .clauses()
                .iter()
                .map(|clause| {
                    let lits: Vec<String> = clause
                        .iter()
                        .map(|lit| {
                            if lit.is_positive() {
                                format!("x{}", lit.var())
                            } else {
                                format!("¬x{}", lit.var())
                            }
                        })
                        .collect();
                    format!("({})", lits.join(" ∨ "))
                })
                .collect();
            let human = if clause_lines.is_empty() {
                "(empty conjunction)".to_string()
            } else {
                clause_lines.join(" ∧\n")
            };
            format!("{human}\n\nDIMACS:\n{}", emit_dimacs(formula))
        }
        InstanceBody::VertexCover(instance) => {
            serde_json::to_string_pretty(instance).expect("instances serialize")
        }
        InstanceBody::Packing(instance) => {
            serde_json::to_string_pretty(instance).expect("instances serialize")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::to_vertex_cover;
    use crate::testutil::formula;

    #[test]
    fn cnf_prompt_contains_decision_vocabulary_and_clause_text() {
        let f = formula(3, &[&[1, -2, 3]]);
        let template = PromptTemplate::default_for(Representation::Cnf);
        let prompt = template.render(&InstanceBody::Cnf(f)).unwrap();
        assert!(prompt.contains("SATISFIABLE or UNSATISFIABLE"));
        assert!(prompt.contains("(x1 ∨ ¬x2 ∨ x3)"));
        assert!(prompt.contains("p cnf 3 1"));
        assert_eq!(prompt.matches("p cnf").count(), 1);
    }

    #[test]
    fn vertex_cover_prompt_asks_the_budget_question() {
        let f = formula(3, &[&[1, 2, 3]]);
        let instance = to_vertex_cover(&f).unwrap();
        let template = PromptTemplate::default_for(Representation::VertexCover);
        let prompt = template
            .render(&InstanceBody::VertexCover(instance))
            .unwrap();
        assert!(prompt.contains("vertex cover of size <= k"));
        assert!(prompt.contains("\"k\": 5"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let f = formula(2, &[&[1, 2]]);
        let template = PromptTemplate::default_for(Representation::Cnf);
        let body = InstanceBody::Cnf(f);
        assert_eq!(template.render(&body).unwrap(), template.render(&body).unwrap());
    }

    #[test]
    fn mismatched_representation_is_an_error() {
        let f = formula(2, &[&[1, 2]]);
        let template = PromptTemplate::default_for(Representation::Packing);
        assert!(matches!(
            template.render(&InstanceBody::Cnf(f)),
            Err(HarnessError::RepresentationMismatch { .. })
        ));
    }

    #[test]
    fn template_requires_exactly_one_placeholder() {
        assert!(matches!(
            PromptTemplate::new(Representation::Cnf, "no placeholder".into()),
            Err(HarnessError::BadTemplate { count: 0 })
        ));
        assert!(matches!(
            PromptTemplate::new(Representation::Cnf, "{instance} {instance}".into()),
            Err(HarnessError::BadTemplate { count: 2 })
        ));
        assert!(PromptTemplate::new(Representation::Cnf, "solve {instance}".into()).is_ok());
    }
}
