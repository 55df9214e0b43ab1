//! Pluggable belief revision.
//!
//! Two operators are shipped: prioritized linear base revision (the
//! default) and Dalal's minimal-Hamming-distance revision. Revision
//! inputs are restricted to a normal form: a conjunction of one
//! modal-free part, positive belief literals `B[j] psi` (with `psi`
//! again in normal form), and negative belief literals `~B[j] psi`
//! with modal-free `psi`. Anything else is rejected rather than
//! silently approximated.
//!
//! Laws are protected: they constrain every world set and survive
//! every revision and contraction.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{AgentId, Formula, Vocabulary};
use crate::semantics::{
    characteristic_formula, models_of, EpistemicState, StratifiedBase, Valuation,
};

/// Named revision policy, selected per agent by the scenario.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RevisionOperator {
    #[default]
    Prioritized,
    Dalal,
}

impl fmt::Display for RevisionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RevisionOperator::Prioritized => f.write_str("prioritized"),
            RevisionOperator::Dalal => f.write_str("dalal"),
        }
    }
}

impl FromStr for RevisionOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prioritized" => Ok(RevisionOperator::Prioritized),
            "dalal" => Ok(RevisionOperator::Dalal),
            other => Err(Error::ScenarioParse(format!(
                "unknown revision operator `{other}` (expected `prioritized` or `dalal`)"
            ))),
        }
    }
}

/// Revision normal form: one propositional part (a conjunction list;
/// empty means no constraint), positive belief literals, and negative
/// belief literals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Rnf {
    pub prop: Vec<Formula>,
    pub pos: Vec<(AgentId, Rnf)>,
    pub neg: Vec<(AgentId, Formula)>,
}

impl Rnf {
    fn merge(&mut self, other: Rnf) {
        self.prop.extend(other.prop);
        self.pos.extend(other.pos);
        self.neg.extend(other.neg);
    }
}

/// Decompose a revision input into normal form.
pub fn to_rnf(input: &Formula) -> Result<Rnf> {
    if input.is_modal_free() {
        return Ok(Rnf {
            prop: vec![input.clone()],
            ..Rnf::default()
        });
    }
    match input {
        Formula::And(a, b) => {
            let mut rnf = to_rnf(a)?;
            rnf.merge(to_rnf(b)?);
            Ok(rnf)
        }
        Formula::Believes(j, x) => Ok(Rnf {
            pos: vec![(j.clone(), to_rnf(x)?)],
            ..Rnf::default()
        }),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Believes(j, x) if x.is_modal_free() => Ok(Rnf {
                neg: vec![(j.clone(), x.as_ref().clone())],
                ..Rnf::default()
            }),
            Formula::Believes(_, x) => Err(Error::UnsupportedRevisionFormula(format!(
                "`~B[...]` with modal body `{}`",
                x.render()
            ))),
            Formula::Not(x) => to_rnf(x),
            _ => Err(Error::UnsupportedRevisionFormula(format!(
                "negation mixing modal and propositional parts in `{}`",
                input.render()
            ))),
        },
        Formula::AfterRevision(..) => Err(Error::UnsupportedRevisionFormula(format!(
            "nested revision operator in `{}`",
            input.render()
        ))),
        Formula::Atom(_) => unreachable!("atoms are modal-free"),
    }
}

/// Revise a state by a formula, dispatching on the state's operator.
///
/// The propositional part is applied first: prioritized revision keeps
/// the input and then scans the strata in entrenchment order, keeping
/// each member iff it is consistent with everything kept so far; Dalal
/// revision moves to the law-consistent models of the input at minimal
/// Hamming distance. Positive belief literals then revise the named
/// nested models recursively, and negative literals contract them.
/// Nested models not named in the input are unchanged. An input whose
/// propositional part contradicts the laws yields the inconsistent
/// state.
pub fn revise(state: &EpistemicState, input: &Formula) -> Result<EpistemicState> {
    revise_rnf(state, &to_rnf(input)?)
}

pub fn revise_rnf(state: &EpistemicState, rnf: &Rnf) -> Result<EpistemicState> {
    let mut current = match state.operator() {
        RevisionOperator::Prioritized => revise_prioritized(state, &rnf.prop)?,
        RevisionOperator::Dalal => revise_dalal(state, &rnf.prop)?,
    };
    for (j, sub) in &rnf.pos {
        if j == current.agent() {
            current = revise_rnf(&current, sub)?;
        } else if current.depth() > 0 {
            let model = nested_or_ignorant(&current, j)?;
            let revised = revise_rnf(&model, sub)?;
            current = current.with_model(j.clone(), revised);
        }
    }
    for (j, psi) in &rnf.neg {
        if j == current.agent() {
            current = contract(&current, psi)?;
        } else if current.depth() > 0 {
            let model = nested_or_ignorant(&current, j)?;
            let contracted = contract(&model, psi)?;
            current = current.with_model(j.clone(), contracted);
        }
    }
    Ok(current)
}

fn nested_or_ignorant(state: &EpistemicState, j: &AgentId) -> Result<EpistemicState> {
    match state.models().get(j) {
        Some(m) => Ok(m.as_ref().clone()),
        None => EpistemicState::ignorant(
            j.clone(),
            state.vocab().clone(),
            state.laws().to_vec(),
            state.depth() - 1,
            state.operator(),
        ),
    }
}

fn revise_prioritized(state: &EpistemicState, prop: &[Formula]) -> Result<EpistemicState> {
    let vocab = state.vocab();
    let mut kept: Vec<Formula> = state.laws().to_vec();
    kept.extend(prop.iter().cloned());
    let mut kept_models = models_of(vocab, kept.iter())?;
    if kept_models.is_empty() {
        // Input contradicts the laws: the inconsistent state.
        let base = StratifiedBase::new(vec![prop.to_vec()]).expect("prop part is modal-free");
        return Ok(state.rebuilt(base, BTreeSet::new(), state.models().clone()));
    }
    let mut new_strata: Vec<Vec<Formula>> = Vec::new();
    if !prop.is_empty() {
        new_strata.push(prop.to_vec());
    }
    for stratum in state.base().strata() {
        let mut kept_here = Vec::new();
        for f in stratum {
            let candidate: BTreeSet<Valuation> = kept_models
                .iter()
                .copied()
                .filter(|w| crate::semantics::eval_prop(*w, vocab, f).unwrap_or(false))
                .collect();
            if !candidate.is_empty() {
                kept.push(f.clone());
                kept_models = candidate;
                kept_here.push(f.clone());
            }
        }
        if !kept_here.is_empty() {
            new_strata.push(kept_here);
        }
    }
    let base = StratifiedBase::new(new_strata).expect("kept formulas are modal-free");
    Ok(state.rebuilt(base, kept_models, state.models().clone()))
}

fn revise_dalal(state: &EpistemicState, prop: &[Formula]) -> Result<EpistemicState> {
    let vocab = state.vocab();
    let target = models_of(vocab, state.laws().iter().chain(prop.iter()))?;
    let new_worlds: BTreeSet<Valuation> = if target.is_empty() {
        BTreeSet::new()
    } else if state.worlds().is_empty() {
        // Revising the inconsistent state restores all input models.
        target
    } else {
        let dist = |m: Valuation| state.worlds().iter().map(|w| m.hamming(*w)).min().unwrap();
        let best = target.iter().map(|m| dist(*m)).min().unwrap();
        target.into_iter().filter(|m| dist(*m) == best).collect()
    };
    let base = StratifiedBase::new(vec![vec![characteristic_formula(vocab, &new_worlds)]])
        .expect("characteristic formula is modal-free");
    Ok(state.rebuilt(base, new_worlds, state.models().clone()))
}

/// Greedy base contraction: scan the strata in entrenchment order and
/// keep each formula iff the laws plus everything kept so far plus the
/// formula still fail to entail `psi`. The result never believes
/// `psi`; nested models are untouched.
pub fn contract(state: &EpistemicState, psi: &Formula) -> Result<EpistemicState> {
    if !psi.is_modal_free() {
        return Err(Error::ModalFormulaNotAllowed(psi.render()));
    }
    let vocab = state.vocab();
    let law_models = models_of(vocab, state.laws().iter())?;
    if entails_set(&law_models, vocab, psi)? {
        return Err(Error::ContractionImpossible(psi.render()));
    }
    let mut kept_models = law_models;
    let mut new_strata: Vec<Vec<Formula>> = Vec::new();
    for stratum in state.base().strata() {
        let mut kept_here = Vec::new();
        for f in stratum {
            let candidate: BTreeSet<Valuation> = kept_models
                .iter()
                .copied()
                .filter(|w| crate::semantics::eval_prop(*w, vocab, f).unwrap_or(false))
                .collect();
            if !entails_set(&candidate, vocab, psi)? {
                kept_models = candidate;
                kept_here.push(f.clone());
            }
        }
        if !kept_here.is_empty() {
            new_strata.push(kept_here);
        }
    }
    let base = StratifiedBase::new(new_strata).expect("kept formulas are modal-free");
    Ok(state.rebuilt(base, kept_models, state.models().clone()))
}

fn entails_set(worlds: &BTreeSet<Valuation>, vocab: &Vocabulary, f: &Formula) -> Result<bool> {
    for w in worlds {
        if !crate::semantics::eval_prop(*w, vocab, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the empirical AGM check for one postulate.
#[derive(Debug, Clone, Serialize)]
pub struct PostulateRow {
    pub postulate: String,
    pub pass: bool,
    pub counterexamples: usize,
    pub first_counterexample: Option<String>,
}

/// Report of the exhaustive postulate check for one operator.
#[derive(Debug, Clone, Serialize)]
pub struct PostulateReport {
    pub operator: String,
    pub vocabulary: Vec<String>,
    pub states_checked: usize,
    pub inputs_checked: usize,
    pub rows: Vec<PostulateRow>,
}

impl PostulateReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn row(&self, name: &str) -> Option<&PostulateRow> {
        self.rows.iter().find(|r| r.postulate == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "operator: {} over {{{}}} ({} states, {} inputs)\n",
            self.operator,
            self.vocabulary.join(","),
            self.states_checked,
            self.inputs_checked,
        ));
        out.push_str(&format!(
            "{:<16} {:<6} {:>15}  first counterexample\n",
            "postulate", "result", "counterexamples"
        ));
        for row in &self.rows {
            out.push_str(&format!(
                "{:<16} {:<6} {:>15}  {}\n",
                row.postulate,
                if row.pass { "pass" } else { "FAIL" },
                row.counterexamples,
                row.first_counterexample.as_deref().unwrap_or("-"),
            ));
        }
        out
    }
}

struct PostulateTally {
    name: &'static str,
    counterexamples: usize,
    first: Option<String>,
}

impl PostulateTally {
    fn new(name: &'static str) -> Self {
        PostulateTally {
            name,
            counterexamples: 0,
            first: None,
        }
    }

    fn record(&mut self, witness: impl FnOnce() -> String) {
        if self.first.is_none() {
            self.first = Some(witness());
        }
        self.counterexamples += 1;
    }

    fn into_row(self) -> PostulateRow {
        PostulateRow {
            postulate: self.name.to_string(),
            pass: self.counterexamples == 0,
            counterexamples: self.counterexamples,
            first_counterexample: self.first,
        }
    }
}

/// Small modal-free formula menu over a vocabulary: literals, binary
/// conjunctions of literals, and negations of those conjunctions.
/// Includes semantically equal, syntactically distinct entries so the
/// extensionality check has real work to do.
pub fn small_prop_formulas(vocab: &Vocabulary) -> Vec<Formula> {
    let mut literals = Vec::new();
    for s in vocab.symbols() {
        literals.push(Formula::atom(s));
        literals.push(Formula::not(Formula::atom(s)));
    }
    let mut out = literals.clone();
    for a in &literals {
        for b in &literals {
            out.push(Formula::and(a.clone(), b.clone()));
            out.push(Formula::not(Formula::and(a.clone(), b.clone())));
        }
    }
    out
}

/// Exhaustively check the core AGM postulates (plus the supplementary
/// superexpansion/subexpansion pair) for one operator over every
/// nonempty world-set state and a bounded menu of modal-free inputs.
///
/// States are presented canonically: the base is a single stratum
/// holding the characteristic formula of the world set.
pub fn check_agm_postulates(
    operator: RevisionOperator,
    vocab: &Vocabulary,
) -> Result<PostulateReport> {
    assert!(
        vocab.len() <= 3,
        "postulate harness is for small vocabularies"
    );
    let agent = AgentId::new("a").unwrap();
    let inputs = small_prop_formulas(vocab);
    let input_models: Vec<BTreeSet<Valuation>> = inputs
        .iter()
        .map(|f| models_of(vocab, [f]))
        .collect::<Result<_>>()?;

    let mut closure = PostulateTally::new("closure");
    let mut success = PostulateTally::new("success");
    let mut inclusion = PostulateTally::new("inclusion");
    let mut vacuity = PostulateTally::new("vacuity");
    let mut consistency = PostulateTally::new("consistency");
    let mut extensionality = PostulateTally::new("extensionality");
    let mut superexpansion = PostulateTally::new("superexpansion");
    let mut subexpansion = PostulateTally::new("subexpansion");

    let all_worlds: Vec<Valuation> = Valuation::all(vocab.len()).collect();
    let n_states = (1usize << all_worlds.len()) - 1;
    let literals: Vec<usize> = (0..inputs.len())
        .filter(|&i| inputs[i].letter_count() == 1)
        .collect();

    for mask in 1..=n_states {
        let worlds: BTreeSet<Valuation> = all_worlds
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, w)| *w)
            .collect();
        let state = EpistemicState::from_worlds(agent.clone(), vocab.clone(), &worlds, operator);
        let witness = |alpha: &Formula| {
            let ws: Vec<String> = worlds.iter().map(|w| w.bits(vocab)).collect();
            format!("W={{{}}}, input={}", ws.join(","), alpha.render())
        };

        let mut revised_worlds: Vec<BTreeSet<Valuation>> = Vec::with_capacity(inputs.len());
        for (alpha, alpha_models) in inputs.iter().zip(&input_models) {
            let revised = revise(&state, alpha)?;
            // closure: the revised state still satisfies the
            // worlds-equal-models-of-base representation invariant, so
            // its belief set is deductively closed.
            let recomputed =
                models_of(vocab, revised.laws().iter().chain(revised.base().flatten()))?;
            if recomputed != *revised.worlds() {
                closure.record(|| witness(alpha));
            }
            // success: the input is believed after revision.
            if !revised.entails(alpha)? {
                success.record(|| witness(alpha));
            }
            // inclusion: revision never exceeds expansion.
            let expansion: BTreeSet<Valuation> =
                worlds.intersection(alpha_models).copied().collect();
            if !expansion.iter().all(|w| revised.worlds().contains(w)) {
                inclusion.record(|| witness(alpha));
            }
            // vacuity: when the input is compatible, revision is
            // exactly expansion.
            if !expansion.is_empty() && !revised.worlds().iter().all(|w| expansion.contains(w)) {
                vacuity.record(|| witness(alpha));
            }
            // consistency: a satisfiable input yields a consistent state.
            if !alpha_models.is_empty() && revised.worlds().is_empty() {
                consistency.record(|| witness(alpha));
            }
            revised_worlds.push(revised.worlds().clone());
        }

        // extensionality: semantically equal inputs revise identically.
        for i in 0..inputs.len() {
            for j in (i + 1)..inputs.len() {
                if input_models[i] == input_models[j] && revised_worlds[i] != revised_worlds[j] {
                    extensionality
                        .record(|| format!("{} vs {}", witness(&inputs[i]), inputs[j].render()));
                }
            }
        }

        // superexpansion / subexpansion, with the second conjunct
        // ranging over literals.
        for (i, alpha) in inputs.iter().enumerate() {
            for &j in &literals {
                let beta = &inputs[j];
                let conj = Formula::and(alpha.clone(), beta.clone());
                let both = revise(&state, &conj)?;
                let staged: BTreeSet<Valuation> = revised_worlds[i]
                    .intersection(&input_models[j])
                    .copied()
                    .collect();
                if !staged.iter().all(|w| both.worlds().contains(w)) {
                    superexpansion.record(|| witness(&conj));
                }
                if !staged.is_empty() && !both.worlds().iter().all(|w| staged.contains(w)) {
                    subexpansion.record(|| witness(&conj));
                }
            }
        }
    }

    Ok(PostulateReport {
        operator: operator.to_string(),
        vocabulary: vocab.symbols().to_vec(),
        states_checked: n_states,
        inputs_checked: inputs.len(),
        rows: vec![
            closure.into_row(),
            success.into_row(),
            inclusion.into_row(),
            vacuity.into_row(),
            consistency.into_row(),
            extensionality.into_row(),
            superexpansion.into_row(),
            subexpansion.into_row(),
        ],
    })
}
