//! Declarative scenario documents.
//!
//! A scenario is a UTF-8 JSON file with top-level keys `agents`,
//! `vocabulary`, `laws`, `depth`, `operator`, `beliefs`, `nested`, and
//! an optional `description`. Formulas are strings in the surface
//! grammar. `beliefs` maps each agent to a list of strata, most
//! entrenched first; an agent entry may instead be an object
//! `{"strata": ..., "operator": ...}` to pick that agent's revision
//! operator. `nested` maps dotted paths (`"mary.bob"`, and deeper
//! `"mary.bob.tom"`) to stratum lists for the owner's model of the
//! target.
//!
//! Where no nested override is given, an agent's model of another
//! agent defaults to the ignorant state (laws only) - never to the
//! other agent's objective state, which would bake in mind-reading.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::formula::{AgentId, Formula, Vocabulary};
use crate::revision::RevisionOperator;
use crate::semantics::{EpistemicState, StateVector, StratifiedBase};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    #[serde(default)]
    description: Option<String>,
    agents: Vec<String>,
    vocabulary: Vec<String>,
    #[serde(default)]
    laws: Vec<String>,
    #[serde(default = "default_depth")]
    depth: u32,
    #[serde(default)]
    operator: Option<RevisionOperator>,
    #[serde(default)]
    beliefs: BTreeMap<String, BeliefDoc>,
    #[serde(default)]
    nested: BTreeMap<String, Vec<Vec<String>>>,
}

fn default_depth() -> u32 {
    3
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BeliefDoc {
    Strata(Vec<Vec<String>>),
    Detailed {
        strata: Vec<Vec<String>>,
        #[serde(default)]
        operator: Option<RevisionOperator>,
    },
}

/// Per-agent belief declaration: strata plus an optional operator
/// override.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentBeliefs {
    pub strata: Vec<Vec<Formula>>,
    pub operator: Option<RevisionOperator>,
}

/// A validated scenario, ready to build a state vector.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub description: Option<String>,
    pub agents: Vec<AgentId>,
    pub vocab: Vocabulary,
    pub laws: Vec<Formula>,
    pub depth: u32,
    pub default_operator: RevisionOperator,
    pub beliefs: BTreeMap<AgentId, AgentBeliefs>,
    pub nested: BTreeMap<Vec<AgentId>, Vec<Vec<Formula>>>,
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        text.parse()
    }

    fn parse_document(text: &str) -> Result<Scenario> {
        let doc: ScenarioDoc =
            serde_json::from_str(text).map_err(|e| Error::ScenarioParse(e.to_string()))?;
        Scenario::validate(doc)
    }

    fn validate(doc: ScenarioDoc) -> Result<Scenario> {
        let mut agents = Vec::new();
        for name in &doc.agents {
            let id = AgentId::new(name)?;
            if agents.contains(&id) {
                return Err(Error::ScenarioParse(format!("duplicate agent `{name}`")));
            }
            agents.push(id);
        }
        if agents.is_empty() {
            return Err(Error::ScenarioParse("scenario declares no agents".into()));
        }
        let vocab = Vocabulary::new(doc.vocabulary.iter().cloned())?;

        let parse_stratum = |texts: &[String]| -> Result<Vec<Formula>> {
            texts
                .iter()
                .map(|t| {
                    let f = Formula::parse(t, &vocab, &agents)?;
                    if f.is_modal_free() {
                        Ok(f)
                    } else {
                        Err(Error::ModalFormulaNotAllowed(t.clone()))
                    }
                })
                .collect()
        };

        let laws = parse_stratum(&doc.laws)?;
        if crate::semantics::models_of(&vocab, laws.iter())?.is_empty() {
            return Err(Error::InconsistentLaws);
        }

        let mut beliefs = BTreeMap::new();
        for (name, spec) in &doc.beliefs {
            let id = AgentId::new(name).map_err(|_| Error::UnknownAgent(name.clone()))?;
            if !agents.contains(&id) {
                return Err(Error::UnknownAgent(name.clone()));
            }
            let (strata_texts, operator) = match spec {
                BeliefDoc::Strata(s) => (s, None),
                BeliefDoc::Detailed { strata, operator } => (strata, *operator),
            };
            let strata = strata_texts
                .iter()
                .map(|s| parse_stratum(s))
                .collect::<Result<Vec<_>>>()?;
            beliefs.insert(id, AgentBeliefs { strata, operator });
        }

        let mut nested = BTreeMap::new();
        for (path, strata_texts) in &doc.nested {
            let segments: Vec<&str> = path.split('.').collect();
            if segments.len() < 2 {
                return Err(Error::ScenarioParse(format!(
                    "nested key `{path}` needs at least `owner.target`"
                )));
            }
            let mut ids = Vec::new();
            for seg in &segments {
                let id = AgentId::new(seg).map_err(|_| Error::UnknownAgent(seg.to_string()))?;
                if !agents.contains(&id) {
                    return Err(Error::UnknownAgent(seg.to_string()));
                }
                if ids.last() == Some(&id) {
                    return Err(Error::ScenarioParse(format!(
                        "nested key `{path}` repeats `{seg}`; the self model is implicit"
                    )));
                }
                ids.push(id);
            }
            // A path of length L denotes a model at depth doc.depth - (L - 1).
            if (segments.len() - 1) as u32 > doc.depth {
                return Err(Error::DepthViolation(path.clone()));
            }
            let strata = strata_texts
                .iter()
                .map(|s| parse_stratum(s))
                .collect::<Result<Vec<_>>>()?;
            nested.insert(ids, strata);
        }

        Ok(Scenario {
            description: doc.description,
            agents,
            vocab,
            laws,
            depth: doc.depth,
            default_operator: doc.operator.unwrap_or_default(),
            beliefs,
            nested,
        })
    }

    fn operator_for(&self, agent: &AgentId) -> RevisionOperator {
        self.beliefs
            .get(agent)
            .and_then(|b| b.operator)
            .unwrap_or(self.default_operator)
    }

    /// Construct every agent's tower. Nested models come from the
    /// overrides or default to the ignorant state; every level down to
    /// depth 0 is materialized. An agent base that contradicts the
    /// laws builds the inconsistent state and reports a warning rather
    /// than failing.
    pub fn build_vector(&self) -> Result<(StateVector, Vec<String>)> {
        let mut warnings = Vec::new();
        let mut states = BTreeMap::new();
        for agent in &self.agents {
            let state = self.build_state(&mut vec![agent.clone()], self.depth, &mut warnings)?;
            states.insert(agent.clone(), state);
        }
        Ok((StateVector::new(self.vocab.clone(), states)?, warnings))
    }

    fn build_state(
        &self,
        path: &mut Vec<AgentId>,
        depth: u32,
        warnings: &mut Vec<String>,
    ) -> Result<EpistemicState> {
        let owner = path.last().expect("path is never empty").clone();
        let strata = if path.len() == 1 {
            self.beliefs
                .get(&owner)
                .map(|b| b.strata.clone())
                .unwrap_or_default()
        } else {
            self.nested
                .get(path.as_slice())
                .cloned()
                .unwrap_or_default()
        };
        let mut models = BTreeMap::new();
        if depth > 0 {
            for other in &self.agents {
                if other == &owner {
                    continue;
                }
                path.push(other.clone());
                let model = self.build_state(path, depth - 1, warnings)?;
                path.pop();
                models.insert(other.clone(), model);
            }
        }
        let state = EpistemicState::new(
            owner.clone(),
            self.vocab.clone(),
            self.laws.clone(),
            StratifiedBase::new(strata)?,
            models,
            depth,
            self.operator_for(&owner),
        )?;
        if !state.is_consistent() {
            let dotted: Vec<String> = path.iter().map(|a| a.to_string()).collect();
            warnings.push(format!(
                "base of `{}` contradicts the laws; built as the inconsistent state",
                dotted.join(".")
            ));
        }
        Ok(state)
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(text: &str) -> Result<Scenario> {
        Scenario::parse_document(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "agents": ["mary", "bob"],
        "vocabulary": ["rain", "wetFloor"],
        "laws": ["rain -> wetFloor"],
        "depth": 2,
        "operator": "prioritized",
        "beliefs": {
            "mary": [["wetFloor"]],
            "bob": [["~wetFloor"], ["~rain"]]
        },
        "nested": {
            "mary.bob": [["~wetFloor"]]
        }
    }"#;

    fn agent(s: &str) -> AgentId {
        AgentId::new(s).unwrap()
    }

    #[test]
    fn loads_and_builds() {
        let sc = Scenario::parse_document(MINIMAL).unwrap();
        assert_eq!(sc.agents.len(), 2);
        assert_eq!(sc.depth, 2);
        let (vector, warnings) = sc.build_vector().unwrap();
        assert!(warnings.is_empty());
        let f = Formula::parse("B[mary] B[bob] (~wetFloor)", &sc.vocab, &sc.agents).unwrap();
        assert!(vector.holds(&f).unwrap());
    }

    #[test]
    fn ignorant_default_never_leaks_objective_state() {
        let sc = Scenario::parse_document(
            r#"{
                "agents": ["mary", "bob"],
                "vocabulary": ["dusty", "wetFloor"],
                "depth": 2,
                "beliefs": {"bob": [["dusty", "~wetFloor"]]},
                "nested": {"mary.bob": [["~wetFloor"]]}
            }"#,
        )
        .unwrap();
        let (vector, _) = sc.build_vector().unwrap();
        // Bob objectively believes dusty, but mary's override only
        // covers ~wetFloor, so her model of bob stays ignorant of it.
        let leak = Formula::parse("B[mary] B[bob] dusty", &sc.vocab, &sc.agents).unwrap();
        assert!(!vector.holds(&leak).unwrap());
        let covered = Formula::parse("B[mary] B[bob] (~wetFloor)", &sc.vocab, &sc.agents).unwrap();
        assert!(vector.holds(&covered).unwrap());
    }

    #[test]
    fn no_beliefs_means_ignorant() {
        let sc = Scenario::parse_document(
            r#"{"agents": ["a"], "vocabulary": ["p", "q"], "laws": ["p -> q"]}"#,
        )
        .unwrap();
        let (vector, _) = sc.build_vector().unwrap();
        let a = agent("a");
        let believes_law_consequence =
            Formula::believes(a.clone(), Formula::parse("p -> q", &sc.vocab, &[]).unwrap());
        assert!(vector.holds(&believes_law_consequence).unwrap());
        let believes_p = Formula::believes(a.clone(), Formula::atom("p"));
        assert!(!vector.holds(&believes_p).unwrap());
    }

    #[test]
    fn deterministic_build() {
        let a = Scenario::parse_document(MINIMAL)
            .unwrap()
            .build_vector()
            .unwrap()
            .0;
        let b = Scenario::parse_document(MINIMAL)
            .unwrap()
            .build_vector()
            .unwrap()
            .0;
        assert_eq!(a, b);
    }

    #[test]
    fn inconsistent_laws_rejected() {
        let e = Scenario::parse_document(
            r#"{"agents": ["a"], "vocabulary": ["p"], "laws": ["p", "~p"]}"#,
        )
        .unwrap_err();
        assert_eq!(e, Error::InconsistentLaws);
    }

    #[test]
    fn unknown_symbol_rejected() {
        let e = Scenario::parse_document(
            r#"{"agents": ["a"], "vocabulary": ["p"], "beliefs": {"a": [["q"]]}}"#,
        )
        .unwrap_err();
        assert_eq!(e, Error::UnknownSymbol("q".into()));
    }

    #[test]
    fn unknown_agent_rejected() {
        let e = Scenario::parse_document(
            r#"{"agents": ["a"], "vocabulary": ["p"], "beliefs": {"b": [["p"]]}}"#,
        )
        .unwrap_err();
        assert_eq!(e, Error::UnknownAgent("b".into()));
        let e = Scenario::parse_document(
            r#"{"agents": ["a", "b"], "vocabulary": ["p"], "nested": {"a.c": [["p"]]}}"#,
        )
        .unwrap_err();
        assert_eq!(e, Error::UnknownAgent("c".into()));
    }

    #[test]
    fn self_model_path_rejected() {
        let e = Scenario::parse_document(
            r#"{"agents": ["a", "b"], "vocabulary": ["p"], "nested": {"a.a": [["p"]]}}"#,
        )
        .unwrap_err();
        assert!(matches!(e, Error::ScenarioParse(_)));
    }

    #[test]
    fn depth_violation_rejected() {
        let e = Scenario::parse_document(
            r#"{"agents": ["a", "b"], "vocabulary": ["p"], "depth": 1,
                "nested": {"a.b.a": [["p"]]}}"#,
        )
        .unwrap_err();
        assert_eq!(e, Error::DepthViolation("a.b.a".into()));
    }

    #[test]
    fn inconsistent_base_warns_not_fails() {
        let sc = Scenario::parse_document(
            r#"{"agents": ["a"], "vocabulary": ["p"], "beliefs": {"a": [["p", "~p"]]}}"#,
        )
        .unwrap();
        let (vector, warnings) = sc.build_vector().unwrap();
        assert_eq!(warnings.len(), 1);
        let a = agent("a");
        assert!(!vector.state(&a).unwrap().is_consistent());
    }

    #[test]
    fn per_agent_operator_override() {
        let sc = Scenario::parse_document(
            r#"{"agents": ["a", "b"], "vocabulary": ["p"], "operator": "prioritized",
                "beliefs": {"a": {"strata": [["p"]], "operator": "dalal"}}}"#,
        )
        .unwrap();
        assert_eq!(sc.operator_for(&agent("a")), RevisionOperator::Dalal);
        assert_eq!(sc.operator_for(&agent("b")), RevisionOperator::Prioritized);
    }
}
