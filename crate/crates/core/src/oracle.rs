//! Engine-independent verification.
//!
//! Two things live here. First, a reference evaluator: a direct
//! transcription of the satisfaction clauses and revision recipes that
//! works straight off the declarative scenario description, recomputes
//! world sets by truth table at every step, and shares no evaluation
//! code with the engine in `semantics`/`revision` - so agreement
//! between the two paths is meaningful evidence. Second, exhaustive
//! bounded checkers for five claims the engine is supposed to satisfy,
//! reported one record per claim.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::explain::{self, FormulaPool};
use crate::formula::{AgentId, Formula, Vocabulary};
use crate::revision::{small_prop_formulas, RevisionOperator};
use crate::scenario::Scenario;
use crate::semantics::{states_equivalent, EpistemicState, StateVector, StratifiedBase, Valuation};

// ---------------------------------------------------------------------------
// Reference evaluator
// ---------------------------------------------------------------------------

/// Declarative mental state: strata and nested models only; worlds are
/// recomputed from scratch on every query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefState {
    pub agent: AgentId,
    pub strata: Vec<Vec<Formula>>,
    pub nested: BTreeMap<AgentId, RefState>,
    pub depth: u32,
    pub op: RevisionOperator,
}

/// Reference context: laws are global here, not embedded per state.
#[derive(Debug, Clone)]
pub struct RefVector {
    pub vocab: Vocabulary,
    pub laws: Vec<Formula>,
    pub states: BTreeMap<AgentId, RefState>,
}

impl RefVector {
    /// Direct transcription of a scenario document, bypassing the
    /// engine's state builder entirely.
    pub fn from_scenario(sc: &Scenario) -> RefVector {
        fn build(sc: &Scenario, path: &mut Vec<AgentId>, depth: u32) -> RefState {
            let owner = path.last().unwrap().clone();
            let strata = if path.len() == 1 {
                sc.beliefs
                    .get(&owner)
                    .map(|b| b.strata.clone())
                    .unwrap_or_default()
            } else {
                sc.nested.get(path.as_slice()).cloned().unwrap_or_default()
            };
            let mut nested = BTreeMap::new();
            if depth > 0 {
                for other in &sc.agents {
                    if other == &owner {
                        continue;
                    }
                    path.push(other.clone());
                    nested.insert(other.clone(), build(sc, path, depth - 1));
                    path.pop();
                }
            }
            let op = sc
                .beliefs
                .get(&owner)
                .and_then(|b| b.operator)
                .unwrap_or(sc.default_operator);
            RefState {
                agent: owner,
                strata,
                nested,
                depth,
                op,
            }
        }
        let mut states = BTreeMap::new();
        for agent in &sc.agents {
            states.insert(agent.clone(), build(sc, &mut vec![agent.clone()], sc.depth));
        }
        RefVector {
            vocab: sc.vocab.clone(),
            laws: sc.laws.clone(),
            states,
        }
    }

    /// The objective satisfaction relation, unfolded directly.
    pub fn holds(&self, f: &Formula) -> Result<bool> {
        if !f.is_agent_formula() {
            return Err(Error::NotAgentFormula(f.render()));
        }
        self.eval(f)
    }

    fn eval(&self, f: &Formula) -> Result<bool> {
        match f {
            Formula::Believes(i, x) => {
                let st = self
                    .states
                    .get(i)
                    .ok_or_else(|| Error::UnknownAgent(i.to_string()))?;
                o_truth_at(self, st, x)
            }
            Formula::Not(x) => Ok(!self.eval(x)?),
            Formula::And(a, b) => Ok(self.eval(a)? && self.eval(b)?),
            Formula::AfterRevision(i, input, body) => {
                let st = self
                    .states
                    .get(i)
                    .ok_or_else(|| Error::UnknownAgent(i.to_string()))?;
                let revised = o_revise(self, st, input)?;
                let mut next = self.clone();
                next.states.insert(i.clone(), revised);
                next.eval(body)
            }
            Formula::Atom(_) => unreachable!("agent formulas have no bare atoms"),
        }
    }
}

fn o_eval(w: Valuation, vocab: &Vocabulary, f: &Formula) -> Result<bool> {
    match f {
        Formula::Atom(p) => match vocab.index_of(p) {
            Some(i) => Ok(w.get(i)),
            None => Err(Error::UnknownSymbol(p.clone())),
        },
        Formula::Not(x) => Ok(!o_eval(w, vocab, x)?),
        Formula::And(a, b) => Ok(o_eval(w, vocab, a)? && o_eval(w, vocab, b)?),
        _ => Err(Error::ModalFormulaNotAllowed(f.render())),
    }
}

fn o_models(vocab: &Vocabulary, formulas: &[&Formula]) -> Result<Vec<Valuation>> {
    let mut out = Vec::new();
    'outer: for w in Valuation::all(vocab.len()) {
        for f in formulas {
            if !o_eval(w, vocab, f)? {
                continue 'outer;
            }
        }
        out.push(w);
    }
    Ok(out)
}

fn o_state_worlds(ctx: &RefVector, st: &RefState) -> Result<Vec<Valuation>> {
    let mut fs: Vec<&Formula> = ctx.laws.iter().collect();
    fs.extend(st.strata.iter().flatten());
    o_models(&ctx.vocab, &fs)
}

fn o_truth_at(ctx: &RefVector, st: &RefState, f: &Formula) -> Result<bool> {
    let worlds = o_state_worlds(ctx, st)?;
    for w in &worlds {
        if !o_holds_at(ctx, st, *w, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn o_holds_at(ctx: &RefVector, st: &RefState, w: Valuation, f: &Formula) -> Result<bool> {
    match f {
        Formula::Atom(p) => match ctx.vocab.index_of(p) {
            Some(i) => Ok(w.get(i)),
            None => Err(Error::UnknownSymbol(p.clone())),
        },
        Formula::Not(x) => Ok(!o_holds_at(ctx, st, w, x)?),
        Formula::And(a, b) => Ok(o_holds_at(ctx, st, w, a)? && o_holds_at(ctx, st, w, b)?),
        Formula::Believes(j, x) => {
            if *j == st.agent {
                o_truth_at(ctx, st, x)
            } else {
                match st.nested.get(j) {
                    Some(m) => o_truth_at(ctx, m, x),
                    None => o_truth_at(ctx, &o_ignorant(j, st.op), x),
                }
            }
        }
        Formula::AfterRevision(j, input, body) => {
            if *j == st.agent {
                let revised = o_revise(ctx, st, input)?;
                o_holds_at(ctx, &revised, w, body)
            } else {
                let model = st
                    .nested
                    .get(j)
                    .cloned()
                    .unwrap_or_else(|| o_ignorant(j, st.op));
                let revised = o_revise(ctx, &model, input)?;
                let mut next = st.clone();
                next.nested.insert(j.clone(), revised);
                o_holds_at(ctx, &next, w, body)
            }
        }
    }
}

fn o_ignorant(agent: &AgentId, op: RevisionOperator) -> RefState {
    RefState {
        agent: agent.clone(),
        strata: Vec::new(),
        nested: BTreeMap::new(),
        depth: 0,
        op,
    }
}

/// Propositional conjuncts, positive belief literals, and negative
/// belief literals of a revision input.
type SplitInput = (
    Vec<Formula>,
    Vec<(AgentId, Formula)>,
    Vec<(AgentId, Formula)>,
);

/// Split a revision input into its normal-form parts; rejects
/// everything outside the supported shape.
fn o_split(f: &Formula) -> Result<SplitInput> {
    if f.is_modal_free() {
        return Ok((vec![f.clone()], Vec::new(), Vec::new()));
    }
    match f {
        Formula::And(a, b) => {
            let (mut p1, mut pos1, mut neg1) = o_split(a)?;
            let (p2, pos2, neg2) = o_split(b)?;
            p1.extend(p2);
            pos1.extend(pos2);
            neg1.extend(neg2);
            Ok((p1, pos1, neg1))
        }
        Formula::Believes(j, x) => Ok((
            Vec::new(),
            vec![(j.clone(), x.as_ref().clone())],
            Vec::new(),
        )),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Believes(j, x) if x.is_modal_free() => Ok((
                Vec::new(),
                Vec::new(),
                vec![(j.clone(), x.as_ref().clone())],
            )),
            Formula::Not(x) => o_split(x),
            _ => Err(Error::UnsupportedRevisionFormula(f.render())),
        },
        _ => Err(Error::UnsupportedRevisionFormula(f.render())),
    }
}

fn o_revise(ctx: &RefVector, st: &RefState, input: &Formula) -> Result<RefState> {
    let (props, pos, neg) = o_split(input)?;
    let mut current = match st.op {
        RevisionOperator::Prioritized => o_revise_prioritized(ctx, st, &props)?,
        RevisionOperator::Dalal => o_revise_dalal(ctx, st, &props)?,
    };
    for (j, sub) in pos {
        if j == current.agent {
            current = o_revise(ctx, &current, &sub)?;
        } else if current.depth > 0 {
            let model = current
                .nested
                .get(&j)
                .cloned()
                .unwrap_or_else(|| o_ignorant(&j, current.op));
            let revised = o_revise(ctx, &model, &sub)?;
            current.nested.insert(j, revised);
        }
    }
    for (j, psi) in neg {
        if j == current.agent {
            current = o_contract(ctx, &current, &psi)?;
        } else if current.depth > 0 {
            let model = current
                .nested
                .get(&j)
                .cloned()
                .unwrap_or_else(|| o_ignorant(&j, current.op));
            let contracted = o_contract(ctx, &model, &psi)?;
            current.nested.insert(j, contracted);
        }
    }
    Ok(current)
}

fn o_revise_prioritized(ctx: &RefVector, st: &RefState, props: &[Formula]) -> Result<RefState> {
    let mut kept: Vec<Formula> = ctx.laws.clone();
    kept.extend(props.iter().cloned());
    let mut new_strata: Vec<Vec<Formula>> = Vec::new();
    if !props.is_empty() {
        new_strata.push(props.to_vec());
    }
    let refs: Vec<&Formula> = kept.iter().collect();
    if o_models(&ctx.vocab, &refs)?.is_empty() {
        return Ok(RefState {
            agent: st.agent.clone(),
            strata: vec![props.to_vec()],
            nested: st.nested.clone(),
            depth: st.depth,
            op: st.op,
        });
    }
    for stratum in &st.strata {
        let mut kept_here = Vec::new();
        for f in stratum {
            let mut trial: Vec<&Formula> = kept.iter().collect();
            trial.push(f);
            if !o_models(&ctx.vocab, &trial)?.is_empty() {
                kept.push(f.clone());
                kept_here.push(f.clone());
            }
        }
        if !kept_here.is_empty() {
            new_strata.push(kept_here);
        }
    }
    Ok(RefState {
        agent: st.agent.clone(),
        strata: new_strata,
        nested: st.nested.clone(),
        depth: st.depth,
        op: st.op,
    })
}

fn o_revise_dalal(ctx: &RefVector, st: &RefState, props: &[Formula]) -> Result<RefState> {
    let mut target_fs: Vec<&Formula> = ctx.laws.iter().collect();
    target_fs.extend(props.iter());
    let target = o_models(&ctx.vocab, &target_fs)?;
    let current = o_state_worlds(ctx, st)?;
    let new_worlds: Vec<Valuation> = if target.is_empty() {
        Vec::new()
    } else if current.is_empty() {
        target
    } else {
        let dist = |m: Valuation| current.iter().map(|w| m.hamming(*w)).min().unwrap();
        let best = target.iter().map(|m| dist(*m)).min().unwrap();
        target.into_iter().filter(|m| dist(*m) == best).collect()
    };
    Ok(RefState {
        agent: st.agent.clone(),
        strata: vec![vec![o_char(&ctx.vocab, &new_worlds)]],
        nested: st.nested.clone(),
        depth: st.depth,
        op: st.op,
    })
}

fn o_contract(ctx: &RefVector, st: &RefState, psi: &Formula) -> Result<RefState> {
    if !psi.is_modal_free() {
        return Err(Error::ModalFormulaNotAllowed(psi.render()));
    }
    let law_refs: Vec<&Formula> = ctx.laws.iter().collect();
    let law_models = o_models(&ctx.vocab, &law_refs)?;
    let entails = |worlds: &[Valuation]| -> Result<bool> {
        for w in worlds {
            if !o_eval(*w, &ctx.vocab, psi)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if entails(&law_models)? {
        return Err(Error::ContractionImpossible(psi.render()));
    }
    let mut kept: Vec<Formula> = ctx.laws.clone();
    let mut new_strata: Vec<Vec<Formula>> = Vec::new();
    for stratum in &st.strata {
        let mut kept_here = Vec::new();
        for f in stratum {
            let mut trial: Vec<&Formula> = kept.iter().collect();
            trial.push(f);
            let trial_models = o_models(&ctx.vocab, &trial)?;
            if !entails(&trial_models)? {
                kept.push(f.clone());
                kept_here.push(f.clone());
            }
        }
        if !kept_here.is_empty() {
            new_strata.push(kept_here);
        }
    }
    Ok(RefState {
        agent: st.agent.clone(),
        strata: new_strata,
        nested: st.nested.clone(),
        depth: st.depth,
        op: st.op,
    })
}

fn o_char(vocab: &Vocabulary, worlds: &[Valuation]) -> Formula {
    if worlds.is_empty() {
        return vocab.bot();
    }
    let mut disjuncts = Vec::new();
    for w in worlds {
        let literals: Vec<Formula> = vocab
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if w.get(i) {
                    Formula::atom(s)
                } else {
                    Formula::not(Formula::atom(s))
                }
            })
            .collect();
        disjuncts.push(Formula::conjoin(literals).unwrap());
    }
    let negs: Vec<Formula> = disjuncts.into_iter().map(Formula::not).collect();
    Formula::not(Formula::conjoin(negs).unwrap())
}

// ---------------------------------------------------------------------------
// Theorem suite
// ---------------------------------------------------------------------------

/// Enumeration bounds for the theorem suite. All checks stay
/// exhaustive within these bounds.
#[derive(Debug, Clone, Copy)]
pub struct TheoremBounds {
    /// Synthetic vocabulary size for the scenario-free suites (<= 3).
    pub vocab_size: usize,
    /// Maximum literals per pool conjunction.
    pub max_literals: usize,
    /// Maximum revision-sequence length in the equivalence check.
    pub max_seq_len: usize,
}

impl Default for TheoremBounds {
    fn default() -> Self {
        TheoremBounds {
            vocab_size: 2,
            max_literals: 3,
            max_seq_len: 2,
        }
    }
}

fn synthetic_vocab(size: usize) -> Vocabulary {
    let names = ["p", "q", "r"];
    assert!(
        (1..=3).contains(&size),
        "synthetic vocabulary size must be 1..=3"
    );
    Vocabulary::new(names[..size].iter().map(|s| s.to_string())).unwrap()
}

/// One record of the verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub id: String,
    pub description: String,
    pub instances_checked: usize,
    pub skipped_premise_failures: usize,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    fn new(id: &str, description: &str) -> Self {
        TheoremReport {
            id: id.into(),
            description: description.into(),
            instances_checked: 0,
            skipped_premise_failures: 0,
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{}: {} | checked {} | premise-skipped {} | violations {}\n",
            self.id,
            self.description,
            self.instances_checked,
            self.skipped_premise_failures,
            self.violations.len()
        );
        for v in self.violations.iter().take(5) {
            out.push_str(&format!("  violation: {v}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

/// Whenever a consistent expansion of a world-set theory entails the
/// explanandum (checked by raw truth tables), the revision-based
/// account must also call it an explanation. Cases where the theory
/// contradicts the explanandum but revision still explains it are
/// counted as extras: the revision-based account strictly widens the
/// consistency-based one.
pub fn verify_theorem1(bounds: &TheoremBounds) -> TheoremReport {
    let mut report = TheoremReport::new(
        "T1",
        "revision-based explanation subsumes consistent abduction (Dalal, no laws)",
    );
    let vocab = synthetic_vocab(bounds.vocab_size);
    let agent = AgentId::new("a").unwrap();
    let formulas = small_prop_formulas(&vocab);
    let model_sets: Vec<Vec<Valuation>> = formulas
        .iter()
        .map(|f| o_models(&vocab, &[f]).expect("modal-free"))
        .collect();
    let all_worlds: Vec<Valuation> = Valuation::all(vocab.len()).collect();
    let mut extras = 0usize;

    for mask in 1..(1usize << all_worlds.len()) {
        let theory: BTreeSet<Valuation> = all_worlds
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, w)| *w)
            .collect();
        let state = EpistemicState::from_worlds(
            agent.clone(),
            vocab.clone(),
            &theory,
            RevisionOperator::Dalal,
        );
        let vector =
            StateVector::new(vocab.clone(), BTreeMap::from([(agent.clone(), state)])).unwrap();
        for (ai, alpha) in formulas.iter().enumerate() {
            for (bi, beta) in formulas.iter().enumerate() {
                report.instances_checked += 1;
                let expanded: Vec<Valuation> = theory
                    .iter()
                    .copied()
                    .filter(|w| model_sets[ai].contains(w))
                    .collect();
                let def1 =
                    !expanded.is_empty() && expanded.iter().all(|w| model_sets[bi].contains(w));
                let beta_inconsistent_with_theory =
                    !theory.iter().any(|w| model_sets[bi].contains(w));
                if !def1 && !beta_inconsistent_with_theory {
                    continue;
                }
                let engine = explain::is_explanation(&vector, &agent, alpha, beta)
                    .expect("propositional inputs are supported");
                if def1 && !engine {
                    report.violations.push(format!(
                        "theory {:?} alpha={} beta={}",
                        theory.iter().map(|w| w.bits(&vocab)).collect::<Vec<_>>(),
                        alpha.render(),
                        beta.render()
                    ));
                }
                if beta_inconsistent_with_theory && engine {
                    extras += 1;
                }
            }
        }
    }
    report.notes.push(format!(
        "extra explanations where the theory contradicts the explanandum: {extras}"
    ));
    report
}

/// Pairs of states that pass the bounded equivalence check must
/// license exactly the same explanations.
pub fn verify_theorem2(bounds: &TheoremBounds) -> TheoremReport {
    let mut report = TheoremReport::new("T2", "equivalent states license identical explanations");
    let vocab = synthetic_vocab(bounds.vocab_size.min(2));
    let left_agent = AgentId::new("i").unwrap();
    let right_agent = AgentId::new("j").unwrap();
    let pool = FormulaPool::propositional(&vocab, bounds.max_literals).formulas();
    let menus = tower_menu(&vocab);

    for (li, left_strata) in menus.iter().enumerate() {
        for right_strata in menus.iter().skip(li) {
            let left = tower(&left_agent, &vocab, left_strata);
            let right = tower(&right_agent, &vocab, right_strata);
            if !states_equivalent(&left, &right, &pool, bounds.max_seq_len) {
                report.skipped_premise_failures += 1;
                continue;
            }
            let vector = StateVector::new(
                vocab.clone(),
                BTreeMap::from([(left_agent.clone(), left), (right_agent.clone(), right)]),
            )
            .unwrap();
            for alpha in &pool {
                for beta in &pool {
                    report.instances_checked += 1;
                    let for_left = explain::is_explanation(&vector, &left_agent, alpha, beta);
                    let for_right = explain::is_explanation(&vector, &right_agent, alpha, beta);
                    if for_left != for_right {
                        report.violations.push(format!(
                            "strata {left_strata:?} vs {right_strata:?}: alpha={} beta={}",
                            alpha.render(),
                            beta.render()
                        ));
                    }
                }
            }
        }
    }
    report
}

/// An agent whose nested model of another is that agent's own state
/// (forced here by construction, and checked through the bounded
/// equivalence) has correct beliefs about the other's beliefs.
///
/// The premise is checked as static belief agreement over a pool that
/// includes nested-belief formulas, i.e. the equivalence check at
/// sequence length zero: agreement under revision by modal inputs
/// would separate any two distinct tower agents, since revising `j` by
/// `B[j] m` moves j's own beliefs while revising `i` by it only moves
/// i's model of j. The conclusion only needs the static clause.
pub fn verify_theorem3(bounds: &TheoremBounds) -> TheoremReport {
    let mut report = TheoremReport::new(
        "T3",
        "state equivalence yields correct nested beliefs (with introspection)",
    );
    let vocab = synthetic_vocab(bounds.vocab_size.min(2));
    let i = AgentId::new("i").unwrap();
    let j = AgentId::new("j").unwrap();
    let prop_pool = FormulaPool::propositional(&vocab, bounds.max_literals).formulas();
    let modal_pool =
        FormulaPool::with_modals(&vocab, std::slice::from_ref(&j), bounds.max_literals).formulas();
    let menus = tower_menu(&vocab);

    for j_strata in menus.iter() {
        // Both the faithful construction and perturbed ones; pairs
        // whose nested model disagrees must be excluded by the premise.
        for other_strata in menus.iter() {
            let e_j = tower(&j, &vocab, j_strata);
            let model_of_j = tower(&j, &vocab, other_strata);
            let e_i = EpistemicState::new(
                i.clone(),
                vocab.clone(),
                Vec::new(),
                StratifiedBase::new(j_strata.clone()).unwrap(),
                BTreeMap::from([(j.clone(), model_of_j)]),
                2,
                RevisionOperator::Prioritized,
            )
            .unwrap();
            // Introspection premise fails exactly for inconsistent states.
            if !e_j.is_consistent() {
                report.skipped_premise_failures += 1;
                continue;
            }
            if !states_equivalent(&e_i, &e_j, &modal_pool, 0) {
                report.skipped_premise_failures += 1;
                continue;
            }
            let vector = StateVector::new(
                vocab.clone(),
                BTreeMap::from([(i.clone(), e_i), (j.clone(), e_j)]),
            )
            .unwrap();
            for phi in &prop_pool {
                report.instances_checked += 1;
                let b_j = vector
                    .holds(&Formula::believes(j.clone(), phi.clone()))
                    .unwrap();
                let b_i_b_j = vector
                    .holds(&Formula::believes(
                        i.clone(),
                        Formula::believes(j.clone(), phi.clone()),
                    ))
                    .unwrap();
                let not_b_j = vector
                    .holds(&Formula::not(Formula::believes(j.clone(), phi.clone())))
                    .unwrap();
                let b_i_not_b_j = vector
                    .holds(&Formula::believes(
                        i.clone(),
                        Formula::not(Formula::believes(j.clone(), phi.clone())),
                    ))
                    .unwrap();
                if b_j != b_i_b_j || not_b_j != b_i_not_b_j {
                    report
                        .violations
                        .push(format!("strata {j_strata:?}: phi={}", phi.render()));
                }
            }
        }
    }
    report
}

/// Every full explanation also resolves the inconsistency: after the
/// revision the agent no longer believes the explanandum's negation.
pub fn verify_theorem4(scenario: &Scenario, bounds: &TheoremBounds) -> Result<TheoremReport> {
    let mut report = TheoremReport::new(
        "T4",
        "explanation implies inconsistency-resolving explanation",
    );
    let (vector, _) = scenario.build_vector()?;
    let pool =
        FormulaPool::with_modals(&scenario.vocab, &scenario.agents, bounds.max_literals).formulas();
    for agent in &scenario.agents {
        for alpha in &pool {
            for beta in &pool {
                report.instances_checked += 1;
                let expl = match explain::is_explanation(&vector, agent, alpha, beta) {
                    Ok(v) => v,
                    Err(_) => {
                        report.skipped_premise_failures += 1;
                        continue;
                    }
                };
                if !expl {
                    continue;
                }
                let possible =
                    match explain::is_possibility_explanation(&vector, agent, alpha, beta) {
                        Ok(v) => v,
                        Err(_) => {
                            report.skipped_premise_failures += 1;
                            continue;
                        }
                    };
                if !possible {
                    report.violations.push(format!(
                        "agent={agent} alpha={} beta={}",
                        alpha.render(),
                        beta.render()
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Under an adequate explainee model and a perspective-free preference
/// (fewest letters), the best subjective explanations are exactly the
/// best objective ones.
pub fn verify_theorem5(scenarios: &[Scenario], bounds: &TheoremBounds) -> Result<TheoremReport> {
    let mut report = TheoremReport::new(
        "T5",
        "adequacy aligns optimal subjective and objective explanations",
    );
    for scenario in scenarios {
        let (vector, _) = scenario.build_vector()?;
        let pool = FormulaPool::propositional(&scenario.vocab, bounds.max_literals);
        let items = pool.items();
        let explananda: Vec<Formula> = items
            .iter()
            .filter(|i| i.letters == 1)
            .map(|i| i.formula.clone())
            .collect();
        for explainer in &scenario.agents {
            for explainee in &scenario.agents {
                if explainer == explainee {
                    continue;
                }
                for beta in &explananda {
                    let (adequate, _) =
                        explain::is_adequate(&vector, explainer, explainee, beta, &pool)?;
                    if !adequate {
                        report.skipped_premise_failures += 1;
                        continue;
                    }
                    report.instances_checked += 1;
                    let mut subjective: Vec<(usize, Formula)> = Vec::new();
                    let mut objective: Vec<(usize, Formula)> = Vec::new();
                    for item in &items {
                        if item.formula.contains(beta) {
                            continue;
                        }
                        if explain::is_subjective_explanation(
                            &vector,
                            explainer,
                            explainee,
                            &item.formula,
                            beta,
                        )
                        .unwrap_or(false)
                        {
                            subjective.push((item.letters, item.formula.clone()));
                        }
                        if explain::is_explanation(&vector, explainee, &item.formula, beta)
                            .unwrap_or(false)
                        {
                            objective.push((item.letters, item.formula.clone()));
                        }
                    }
                    let optimal = |set: &[(usize, Formula)]| -> BTreeSet<Formula> {
                        match set.iter().map(|(l, _)| *l).min() {
                            None => BTreeSet::new(),
                            Some(best) => set
                                .iter()
                                .filter(|(l, _)| *l == best)
                                .map(|(_, f)| f.clone())
                                .collect(),
                        }
                    };
                    if optimal(&subjective) != optimal(&objective) {
                        report.violations.push(format!(
                            "explainer={explainer} explainee={explainee} beta={}",
                            beta.render()
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Base menu for the synthetic tower suites: consistent and
/// inconsistent bases, split and merged strata, and syntactic
/// variants of the same belief set.
fn tower_menu(vocab: &Vocabulary) -> Vec<Vec<Vec<Formula>>> {
    let parse = |t: &str| Formula::parse(t, vocab, &[]).unwrap();
    vec![
        vec![],
        vec![vec![parse("p")]],
        vec![vec![parse("q")]],
        vec![vec![parse("~p")]],
        vec![vec![parse("p")], vec![parse("q")]],
        vec![vec![parse("q")], vec![parse("p")]],
        vec![vec![parse("p & q")]],
        vec![vec![parse("q & p")]],
        vec![vec![parse("p | q")]],
        vec![vec![parse("q | p")]],
        vec![vec![parse("p"), parse("q")]],
        vec![vec![parse("p & ~p")]],
    ]
}

fn tower(agent: &AgentId, vocab: &Vocabulary, strata: &[Vec<Formula>]) -> EpistemicState {
    EpistemicState::new(
        agent.clone(),
        vocab.clone(),
        Vec::new(),
        StratifiedBase::new(strata.to_vec()).unwrap(),
        BTreeMap::new(),
        1,
        RevisionOperator::Prioritized,
    )
    .unwrap()
}
