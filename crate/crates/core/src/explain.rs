//! Explanation predicates, candidate synthesis and ranking,
//! discrepancy detection, and adequacy checking.
//!
//! The core notion: `alpha` explains `beta` for agent `i` when, after
//! `i` revises by `alpha`, `i` believes `beta` and does not believe
//! the contradiction. Subjective variants wrap that statement in an
//! explainer's belief operator; everything here reduces to the
//! satisfaction relation on agent formulas.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::{AgentFormula, AgentId, Formula, Vocabulary};
use crate::revision::to_rnf;
use crate::semantics::{models_of, EpistemicState, StateVector};

/// Build the statement "after revising by `input`, `explainee`
/// believes `explanandum` and stays consistent".
pub fn expand_expl(
    explainee: &AgentId,
    input: &Formula,
    explanandum: &Formula,
    vocab: &Vocabulary,
) -> AgentFormula {
    let body = Formula::and(
        Formula::believes(explainee.clone(), explanandum.clone()),
        Formula::not(Formula::believes(explainee.clone(), vocab.bot())),
    );
    AgentFormula::new(Formula::after_revision(
        explainee.clone(),
        input.clone(),
        body,
    ))
    .expect("the expansion is an agent formula by construction")
}

/// `input` objectively explains `explanandum` for `explainee`.
pub fn is_explanation(
    vector: &StateVector,
    explainee: &AgentId,
    input: &Formula,
    explanandum: &Formula,
) -> Result<bool> {
    to_rnf(input)?;
    let f = expand_expl(explainee, input, explanandum, vector.vocab());
    vector.holds(f.as_formula())
}

/// `input` explains `explanandum` for `explainee` from `explainer`'s
/// perspective.
pub fn is_subjective_explanation(
    vector: &StateVector,
    explainer: &AgentId,
    explainee: &AgentId,
    input: &Formula,
    explanandum: &Formula,
) -> Result<bool> {
    to_rnf(input)?;
    let f = Formula::believes(
        explainer.clone(),
        expand_expl(explainee, input, explanandum, vector.vocab()).into_formula(),
    );
    vector.holds(&f)
}

/// `input` explains the possibility of `explanandum`: after revision
/// the explainee no longer believes its negation.
pub fn is_possibility_explanation(
    vector: &StateVector,
    explainee: &AgentId,
    input: &Formula,
    explanandum: &Formula,
) -> Result<bool> {
    to_rnf(input)?;
    let f = Formula::after_revision(
        explainee.clone(),
        input.clone(),
        Formula::not(Formula::believes(
            explainee.clone(),
            Formula::not(explanandum.clone()),
        )),
    );
    vector.holds(&f)
}

/// One input explaining several explananda to several explainees, all
/// from one explainer's perspective.
pub fn explains_for_all(
    vector: &StateVector,
    explainer: &AgentId,
    input: &Formula,
    targets: &[(AgentId, Formula)],
) -> Result<bool> {
    to_rnf(input)?;
    for (explainee, explanandum) in targets {
        if !is_subjective_explanation(vector, explainer, explainee, input, explanandum)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The explainer believes `input` explains for `to` and believes it
/// does not explain for `hidden_from`.
pub fn is_private_explanation(
    vector: &StateVector,
    explainer: &AgentId,
    input: &Formula,
    explanandum: &Formula,
    to: &AgentId,
    hidden_from: &AgentId,
) -> Result<bool> {
    to_rnf(input)?;
    if to == hidden_from {
        return Ok(false);
    }
    let vocab = vector.vocab();
    let f = Formula::and(
        Formula::believes(
            explainer.clone(),
            expand_expl(to, input, explanandum, vocab).into_formula(),
        ),
        Formula::believes(
            explainer.clone(),
            Formula::not(expand_expl(hidden_from, input, explanandum, vocab).into_formula()),
        ),
    );
    vector.holds(&f)
}

/// Nested perspective: `chain = [i, j, ...]` asks whether i believes
/// that j believes that ... `input` explains `explanandum` for
/// `explainee`.
pub fn nested_explanation_holds(
    vector: &StateVector,
    chain: &[AgentId],
    explainee: &AgentId,
    input: &Formula,
    explanandum: &Formula,
) -> Result<bool> {
    if chain.is_empty() {
        return Err(Error::ScenarioParse("empty perspective chain".into()));
    }
    to_rnf(input)?;
    let mut f = expand_expl(explainee, input, explanandum, vector.vocab()).into_formula();
    for agent in chain.iter().rev() {
        f = Formula::believes(agent.clone(), f);
    }
    vector.holds(&f)
}

/// The explainer both believes the explanation works and believes the
/// explanation itself.
pub fn is_subjectively_truthful(
    vector: &StateVector,
    explainer: &AgentId,
    explainee: &AgentId,
    input: &Formula,
    explanandum: &Formula,
) -> Result<bool> {
    Ok(
        is_subjective_explanation(vector, explainer, explainee, input, explanandum)?
            && vector.state(explainer)?.truth_at(input)?,
    )
}

/// Qualitative least-change score: the minimum Hamming distance from
/// any of the state's worlds to any law-consistent model of the
/// input's propositional part. Zero iff the input is already possible
/// for the agent. Saturates at the vocabulary size for the
/// inconsistent state.
pub fn plausibility_distance(state: &EpistemicState, input: &Formula) -> Result<u32> {
    let rnf = to_rnf(input)?;
    let vocab = state.vocab();
    let target = models_of(vocab, state.laws().iter().chain(rnf.prop.iter()))?;
    if target.is_empty() {
        return Err(Error::NoLawConsistentModel(input.render()));
    }
    if state.worlds().is_empty() {
        return Ok(vocab.len() as u32);
    }
    Ok(target
        .iter()
        .flat_map(|m| state.worlds().iter().map(move |w| m.hamming(*w)))
        .min()
        .unwrap())
}

/// True iff every other candidate propositionally entails `candidate`
/// under the laws: the weakest statement that still explains.
pub fn semantically_minimal(
    vocab: &Vocabulary,
    laws: &[Formula],
    candidates: &[Formula],
    candidate: &Formula,
) -> Result<bool> {
    for f in candidates {
        if f == candidate {
            continue;
        }
        if !f.is_modal_free() || !candidate.is_modal_free() {
            return Err(Error::ModalFormulaNotAllowed(f.render()));
        }
        let premise = models_of(vocab, laws.iter().chain([f]))?;
        for w in &premise {
            if !crate::semantics::eval_prop(*w, vocab, candidate)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Finite, deterministically enumerable candidate space.
///
/// Canonical order: by letter count, then propositional candidates
/// before modal ones; propositional candidates by atom combination
/// then polarity (positive first); modal candidates by agent, positive
/// `B[j] m` before negative `~B[j] m`, then by the inner candidate's
/// own position. The empty conjunction (`true`, zero letters) is
/// always first.
#[derive(Debug, Clone)]
pub struct FormulaPool {
    pub vocab: Vocabulary,
    pub agents: Vec<AgentId>,
    pub max_literals: usize,
    pub modal_depth: u8,
}

/// One pool candidate with its display text and letter budget. The
/// letter count is structural: `true` costs zero letters even though
/// its expansion spells out a contradiction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolItem {
    pub formula: Formula,
    pub text: String,
    pub letters: usize,
}

impl FormulaPool {
    pub fn propositional(vocab: &Vocabulary, max_literals: usize) -> Self {
        FormulaPool {
            vocab: vocab.clone(),
            agents: Vec::new(),
            max_literals,
            modal_depth: 0,
        }
    }

    pub fn with_modals(vocab: &Vocabulary, agents: &[AgentId], max_literals: usize) -> Self {
        FormulaPool {
            vocab: vocab.clone(),
            agents: agents.to_vec(),
            max_literals,
            modal_depth: 1,
        }
    }

    /// All candidates in canonical order.
    pub fn items(&self) -> Vec<PoolItem> {
        let prop = self.propositional_items();
        if self.modal_depth == 0 {
            return prop;
        }
        let mut out = prop.clone();
        let mut agents = self.agents.clone();
        agents.sort();
        for agent in &agents {
            for polarity_neg in [false, true] {
                for m in &prop {
                    if m.letters == 0 {
                        continue;
                    }
                    let inner = Formula::believes(agent.clone(), m.formula.clone());
                    let formula = if polarity_neg {
                        Formula::not(inner)
                    } else {
                        inner
                    };
                    out.push(PoolItem {
                        text: formula.render(),
                        letters: m.letters,
                        formula,
                    });
                }
            }
        }
        // Stable sort by letters keeps the documented within-class order.
        out.sort_by_key(|item| item.letters);
        out
    }

    /// Just the formulas, for callers that only need the search space.
    pub fn formulas(&self) -> Vec<Formula> {
        self.items().into_iter().map(|i| i.formula).collect()
    }

    fn propositional_items(&self) -> Vec<PoolItem> {
        let n = self.vocab.len();
        let mut out = vec![PoolItem {
            formula: self.vocab.top(),
            text: "true".into(),
            letters: 0,
        }];
        for k in 1..=self.max_literals.min(n) {
            for combo in combinations(n, k) {
                for polarity in 0u32..(1 << k) {
                    let literals: Vec<Formula> = combo
                        .iter()
                        .enumerate()
                        .map(|(pos, &atom_idx)| {
                            let atom = Formula::atom(&self.vocab.symbols()[atom_idx]);
                            if polarity >> pos & 1 == 1 {
                                Formula::not(atom)
                            } else {
                                atom
                            }
                        })
                        .collect();
                    let formula = Formula::conjoin(literals).unwrap();
                    out.push(PoolItem {
                        text: formula.render(),
                        letters: k,
                        formula,
                    });
                }
            }
        }
        out
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// A scored candidate that subjectively explains the explanandum.
#[derive(Debug, Clone)]
pub struct ExplanationResult {
    pub candidate: Formula,
    pub text: String,
    /// Explanation for the explainee's actual state, not just the
    /// explainer's model of it.
    pub objective: bool,
    pub subjective_for: BTreeSet<AgentId>,
    pub letters: usize,
    /// Least-change score against the explainer's model of the
    /// explainee.
    pub plausibility: u32,
    pub truthful: bool,
}

/// Ranking policy over explanation candidates. Every kind induces a
/// total preorder; display ties are broken by canonical pool order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreferenceOrder {
    /// Truthful candidates first.
    Truthful,
    /// Fewer letters first.
    MinLetters,
    /// Candidates entailed by more of the other candidates first.
    SemanticMinimality,
    /// Smaller belief change first.
    Plausibility,
    Lexicographic(Vec<PreferenceOrder>),
}

impl Default for PreferenceOrder {
    /// Quality before quantity before plausibility.
    fn default() -> Self {
        PreferenceOrder::Lexicographic(vec![
            PreferenceOrder::Truthful,
            PreferenceOrder::MinLetters,
            PreferenceOrder::Plausibility,
        ])
    }
}

impl PreferenceOrder {
    fn key(&self, result: &ExplanationResult, sem_rank: usize) -> Vec<i64> {
        match self {
            PreferenceOrder::Truthful => vec![if result.truthful { 0 } else { 1 }],
            PreferenceOrder::MinLetters => vec![result.letters as i64],
            PreferenceOrder::SemanticMinimality => vec![-(sem_rank as i64)],
            PreferenceOrder::Plausibility => vec![result.plausibility as i64],
            PreferenceOrder::Lexicographic(parts) => {
                parts.iter().flat_map(|p| p.key(result, sem_rank)).collect()
            }
        }
    }
}

/// Enumerate the pool, keep the candidates that subjectively explain
/// `explanandum` for `explainee` from `explainer`'s perspective, score
/// them, and sort by `order` (stable, so ties keep canonical pool
/// order). Candidates containing the explanandum as a subformula are
/// excluded: revealing the explanandum itself explains nothing.
pub fn synthesize(
    vector: &StateVector,
    explainer: &AgentId,
    explainee: &AgentId,
    explanandum: &Formula,
    pool: &FormulaPool,
    order: &PreferenceOrder,
) -> Result<Vec<ExplanationResult>> {
    let items = pool.items();
    if items.is_empty() {
        return Err(Error::EmptyPool);
    }
    let explainer_state = vector.state(explainer)?;
    let explainee_model = explainer_state.model_of(explainee)?;
    let mut results = Vec::new();
    for item in items {
        if item.formula.contains(explanandum) {
            continue;
        }
        let subjective = match is_subjective_explanation(
            vector,
            explainer,
            explainee,
            &item.formula,
            explanandum,
        ) {
            Ok(v) => v,
            // A candidate the revision machinery rejects is not an
            // explanation; skip it rather than aborting the search.
            Err(Error::ContractionImpossible(_)) => false,
            Err(e) => return Err(e),
        };
        if !subjective {
            continue;
        }
        let objective = match is_explanation(vector, explainee, &item.formula, explanandum) {
            Ok(v) => v,
            Err(Error::ContractionImpossible(_)) => false,
            Err(e) => return Err(e),
        };
        let plausibility =
            plausibility_distance(&explainee_model, &item.formula).unwrap_or(u32::MAX);
        let truthful = explainer_state.truth_at(&item.formula)?;
        results.push(ExplanationResult {
            candidate: item.formula,
            text: item.text,
            objective,
            subjective_for: BTreeSet::from([explainer.clone()]),
            letters: item.letters,
            plausibility,
            truthful,
        });
    }
    sort_results(vector.vocab(), &mut results, order)?;
    Ok(results)
}

fn sort_results(
    vocab: &Vocabulary,
    results: &mut [ExplanationResult],
    order: &PreferenceOrder,
) -> Result<()> {
    let needs_semantic = order_mentions_semantic(order);
    let sem_ranks: Vec<usize> = if needs_semantic {
        let candidates: Vec<Formula> = results.iter().map(|r| r.candidate.clone()).collect();
        results
            .iter()
            .map(|r| entailer_count(vocab, &candidates, &r.candidate))
            .collect::<Result<_>>()?
    } else {
        vec![0; results.len()]
    };
    let mut keyed: Vec<(Vec<i64>, usize)> = results
        .iter()
        .enumerate()
        .map(|(i, r)| (order.key(r, sem_ranks[i]), i))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let permutation: Vec<usize> = keyed.into_iter().map(|(_, i)| i).collect();
    let mut scratch: Vec<ExplanationResult> =
        permutation.iter().map(|&i| results[i].clone()).collect();
    results.swap_with_slice(&mut scratch);
    Ok(())
}

fn order_mentions_semantic(order: &PreferenceOrder) -> bool {
    match order {
        PreferenceOrder::SemanticMinimality => true,
        PreferenceOrder::Lexicographic(parts) => parts.iter().any(order_mentions_semantic),
        _ => false,
    }
}

/// How many of the other modal-free candidates entail `candidate`
/// under no laws beyond those baked into the candidates themselves.
fn entailer_count(
    vocab: &Vocabulary,
    candidates: &[Formula],
    candidate: &Formula,
) -> Result<usize> {
    if !candidate.is_modal_free() {
        return Ok(0);
    }
    let target = models_of(vocab, [candidate])?;
    let mut count = 0;
    for other in candidates {
        if other == candidate || !other.is_modal_free() {
            continue;
        }
        let premise = models_of(vocab, [other])?;
        if premise.iter().all(|w| target.contains(w)) {
            count += 1;
        }
    }
    Ok(count)
}

/// Pool members believed by `left` whose negation `right` believes.
/// With a perspective agent, both conjuncts sit inside that agent's
/// beliefs instead (the perspective agent may be `left` itself or a
/// mediating third party).
pub fn find_discrepancies(
    vector: &StateVector,
    left: &AgentId,
    right: &AgentId,
    pool: &FormulaPool,
    perspective: Option<&AgentId>,
) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for item in pool.items() {
        let mut f = Formula::and(
            Formula::believes(left.clone(), item.formula.clone()),
            Formula::believes(right.clone(), Formula::not(item.formula.clone())),
        );
        if let Some(p) = perspective {
            f = Formula::believes(p.clone(), f);
        }
        if vector.holds(&f)? {
            out.push(item.formula);
        }
    }
    Ok(out)
}

/// From `explainer`'s perspective, revising `explainee` by `input`
/// stops the explainee believing the negation of the discrepancy.
pub fn resolves_discrepancy(
    vector: &StateVector,
    explainer: &AgentId,
    explainee: &AgentId,
    input: &Formula,
    discrepancy: &Formula,
) -> Result<bool> {
    to_rnf(input)?;
    let f = Formula::believes(
        explainer.clone(),
        Formula::after_revision(
            explainee.clone(),
            input.clone(),
            Formula::not(Formula::believes(
                explainee.clone(),
                Formula::not(discrepancy.clone()),
            )),
        ),
    );
    vector.holds(&f)
}

/// The explainer's model of the explainee is adequate when it licenses
/// exactly the objectively valid explanations over the pool. Witnesses
/// are the candidates violating the biconditional in either direction.
pub fn is_adequate(
    vector: &StateVector,
    explainer: &AgentId,
    explainee: &AgentId,
    explanandum: &Formula,
    pool: &FormulaPool,
) -> Result<(bool, Vec<Formula>)> {
    let mut witnesses = Vec::new();
    for item in pool.items() {
        let subjective = match is_subjective_explanation(
            vector,
            explainer,
            explainee,
            &item.formula,
            explanandum,
        ) {
            Ok(v) => v,
            Err(Error::ContractionImpossible(_)) => continue,
            Err(e) => return Err(e),
        };
        let objective = match is_explanation(vector, explainee, &item.formula, explanandum) {
            Ok(v) => v,
            Err(Error::ContractionImpossible(_)) => continue,
            Err(e) => return Err(e),
        };
        if subjective != objective {
            witnesses.push(item.formula);
        }
    }
    Ok((witnesses.is_empty(), witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::revision::RevisionOperator;
    use crate::semantics::StratifiedBase;
    use std::collections::BTreeMap;

    fn vocab() -> Vocabulary {
        Vocabulary::new(["rain", "holeInRoof", "wetFloor"]).unwrap()
    }

    fn agent(s: &str) -> AgentId {
        AgentId::new(s).unwrap()
    }

    fn agents() -> Vec<AgentId> {
        ["mary", "bob", "tom"].iter().map(|s| agent(s)).collect()
    }

    fn parse(text: &str) -> Formula {
        Formula::parse(text, &vocab(), &agents()).unwrap()
    }

    fn tower(
        name: &str,
        stratum_texts: &[&str],
        models: BTreeMap<AgentId, EpistemicState>,
        depth: u32,
    ) -> EpistemicState {
        EpistemicState::new(
            agent(name),
            vocab(),
            vec![parse("rain & holeInRoof -> wetFloor")],
            StratifiedBase::new(stratum_texts.iter().map(|t| vec![parse(t)]).collect()).unwrap(),
            models,
            depth,
            RevisionOperator::Prioritized,
        )
        .unwrap()
    }

    fn running_example() -> StateVector {
        let bob = tower(
            "bob",
            &["holeInRoof", "~rain", "~wetFloor"],
            BTreeMap::new(),
            1,
        );
        let tom = tower(
            "tom",
            &["rain", "~holeInRoof", "~wetFloor"],
            BTreeMap::new(),
            1,
        );
        let mut mary_models = BTreeMap::new();
        mary_models.insert(agent("bob"), bob.clone());
        mary_models.insert(agent("tom"), tom.clone());
        let mary = tower("mary", &["wetFloor", "holeInRoof", "rain"], mary_models, 2);
        let mut states = BTreeMap::new();
        states.insert(agent("mary"), mary);
        states.insert(agent("bob"), bob);
        states.insert(agent("tom"), tom);
        StateVector::new(vocab(), states).unwrap()
    }

    #[test]
    fn expand_expl_shape() {
        let f = expand_expl(&agent("bob"), &parse("rain"), &parse("wetFloor"), &vocab());
        assert_eq!(
            f.as_formula().render(),
            "[rain]_bob (B[bob] wetFloor & ~B[bob] (holeInRoof & ~holeInRoof))"
        );
        assert!(f.as_formula().is_agent_formula());
    }

    #[test]
    fn objective_explanations() {
        let v = running_example();
        assert!(is_explanation(&v, &agent("bob"), &parse("rain"), &parse("wetFloor")).unwrap());
        // Tom already believes rain but lacks holeInRoof.
        assert!(!is_explanation(&v, &agent("tom"), &parse("rain"), &parse("wetFloor")).unwrap());
        // A law-contradicting input trips the consistency guard.
        assert!(!is_explanation(
            &v,
            &agent("bob"),
            &parse("rain & holeInRoof & ~wetFloor"),
            &parse("wetFloor")
        )
        .unwrap());
    }

    #[test]
    fn subjective_explanations() {
        let v = running_example();
        assert!(is_subjective_explanation(
            &v,
            &agent("mary"),
            &agent("bob"),
            &parse("rain"),
            &parse("wetFloor")
        )
        .unwrap());
        assert!(is_subjective_explanation(
            &v,
            &agent("mary"),
            &agent("tom"),
            &parse("holeInRoof"),
            &parse("wetFloor")
        )
        .unwrap());
    }

    #[test]
    fn possibility_explanations() {
        let v = running_example();
        assert!(
            is_possibility_explanation(&v, &agent("bob"), &parse("rain"), &parse("wetFloor"))
                .unwrap()
        );
        // Vacuous revision leaves Bob believing ~wetFloor.
        assert!(
            !is_possibility_explanation(&v, &agent("bob"), &parse("true"), &parse("wetFloor"))
                .unwrap()
        );
    }

    #[test]
    fn multi_explainee() {
        let v = running_example();
        let targets = vec![
            (agent("bob"), parse("wetFloor")),
            (agent("tom"), parse("wetFloor")),
        ];
        assert!(
            explains_for_all(&v, &agent("mary"), &parse("rain & holeInRoof"), &targets).unwrap()
        );
        assert!(!explains_for_all(&v, &agent("mary"), &parse("rain"), &targets).unwrap());
        assert!(explains_for_all(&v, &agent("mary"), &parse("rain"), &[]).unwrap());
    }

    #[test]
    fn privacy() {
        let v = running_example();
        assert!(is_private_explanation(
            &v,
            &agent("mary"),
            &parse("rain"),
            &parse("wetFloor"),
            &agent("bob"),
            &agent("tom")
        )
        .unwrap());
        assert!(!is_private_explanation(
            &v,
            &agent("mary"),
            &parse("rain & holeInRoof"),
            &parse("wetFloor"),
            &agent("bob"),
            &agent("tom")
        )
        .unwrap());
        assert!(!is_private_explanation(
            &v,
            &agent("mary"),
            &parse("rain"),
            &parse("wetFloor"),
            &agent("bob"),
            &agent("bob")
        )
        .unwrap());
    }

    #[test]
    fn privacy_is_asymmetric() {
        let v = running_example();
        let pool = FormulaPool::propositional(&vocab(), 2);
        for item in pool.items() {
            let ab = is_private_explanation(
                &v,
                &agent("mary"),
                &item.formula,
                &parse("wetFloor"),
                &agent("bob"),
                &agent("tom"),
            )
            .unwrap_or(false);
            let ba = is_private_explanation(
                &v,
                &agent("mary"),
                &item.formula,
                &parse("wetFloor"),
                &agent("tom"),
                &agent("bob"),
            )
            .unwrap_or(false);
            assert!(!(ab && ba), "both directions private for {}", item.text);
        }
    }

    #[test]
    fn multiple_explainers_agree_via_two_calls() {
        // Both mary and bob can believe the same input explains the
        // wet floor for tom: mary through her accurate model, bob
        // through the ignorant default plus the shared law.
        let v = running_example();
        let both = parse("rain & holeInRoof");
        let wet = parse("wetFloor");
        for explainer in ["mary", "bob"] {
            assert!(
                is_subjective_explanation(&v, &agent(explainer), &agent("tom"), &both, &wet)
                    .unwrap()
            );
        }
    }

    #[test]
    fn nested_chain_reduces_to_subjective() {
        let v = running_example();
        let single = nested_explanation_holds(
            &v,
            &[agent("mary")],
            &agent("bob"),
            &parse("rain"),
            &parse("wetFloor"),
        )
        .unwrap();
        assert_eq!(
            single,
            is_subjective_explanation(
                &v,
                &agent("mary"),
                &agent("bob"),
                &parse("rain"),
                &parse("wetFloor")
            )
            .unwrap()
        );
    }

    #[test]
    fn truthfulness() {
        let v = running_example();
        assert!(is_subjectively_truthful(
            &v,
            &agent("mary"),
            &agent("bob"),
            &parse("rain"),
            &parse("wetFloor")
        )
        .unwrap());
        // Something Mary does not believe cannot be truthful even if
        // it would explain.
        assert!(!is_subjectively_truthful(
            &v,
            &agent("mary"),
            &agent("bob"),
            &parse("rain & ~holeInRoof"),
            &parse("wetFloor")
        )
        .unwrap());
    }

    #[test]
    fn plausibility_examples() {
        let v = running_example();
        let bob = v.state(&agent("bob")).unwrap();
        assert_eq!(plausibility_distance(bob, &parse("rain")).unwrap(), 2);
        assert_eq!(plausibility_distance(bob, &parse("holeInRoof")).unwrap(), 0);
        assert_eq!(plausibility_distance(bob, &parse("true")).unwrap(), 0);
        let e = plausibility_distance(bob, &parse("rain & holeInRoof & ~wetFloor")).unwrap_err();
        assert!(matches!(e, Error::NoLawConsistentModel(_)));
    }

    #[test]
    fn semantic_minimality_examples() {
        let v = vocab();
        let candidates = vec![parse("rain"), parse("rain & holeInRoof")];
        assert!(semantically_minimal(&v, &[], &candidates, &parse("rain")).unwrap());
        assert!(!semantically_minimal(&v, &[], &candidates, &parse("rain & holeInRoof")).unwrap());
        let single = vec![parse("rain")];
        assert!(semantically_minimal(&v, &[], &single, &parse("rain")).unwrap());
    }

    #[test]
    fn pool_canonical_order() {
        let pool = FormulaPool::propositional(&vocab(), 2);
        let items = pool.items();
        let texts: Vec<&str> = items.iter().map(|i| i.text.as_str()).take(7).collect();
        assert_eq!(
            texts,
            vec![
                "true",
                "holeInRoof",
                "~holeInRoof",
                "rain",
                "~rain",
                "wetFloor",
                "~wetFloor"
            ]
        );
        assert_eq!(items[0].letters, 0);
        // 1 + 6 one-literal + 12 two-literal candidates.
        assert_eq!(items.len(), 19);
    }

    #[test]
    fn pool_modal_depth_one() {
        let pool = FormulaPool::with_modals(&vocab(), &[agent("tom")], 1);
        let items = pool.items();
        let texts: Vec<&str> = items.iter().map(|i| i.text.as_str()).collect();
        assert!(texts.contains(&"B[tom] (~holeInRoof)"));
        assert!(texts.contains(&"~B[tom] rain"));
        // true, 6 literals, 6 positive modal, 6 negative modal.
        assert_eq!(items.len(), 19);
    }

    #[test]
    fn synthesize_tailors_explanations() {
        let v = running_example();
        let pool = FormulaPool::propositional(&vocab(), 2);
        let order = PreferenceOrder::default();
        let for_bob = synthesize(
            &v,
            &agent("mary"),
            &agent("bob"),
            &parse("wetFloor"),
            &pool,
            &order,
        )
        .unwrap();
        assert_eq!(for_bob[0].text, "rain");
        assert!(for_bob[0].objective && for_bob[0].truthful);
        let for_tom = synthesize(
            &v,
            &agent("mary"),
            &agent("tom"),
            &parse("wetFloor"),
            &pool,
            &order,
        )
        .unwrap();
        assert_eq!(for_tom[0].text, "holeInRoof");
    }

    #[test]
    fn synthesize_vacuity_ranks_true_first() {
        // Mary's model of bob already believes wetFloor.
        let bob_model = tower(
            "bob",
            &["holeInRoof", "rain", "wetFloor"],
            BTreeMap::new(),
            1,
        );
        let mut mary_models = BTreeMap::new();
        mary_models.insert(agent("bob"), bob_model);
        let mary = tower("mary", &["wetFloor"], mary_models, 2);
        let bob = tower("bob", &["holeInRoof"], BTreeMap::new(), 1);
        let mut states = BTreeMap::new();
        states.insert(agent("mary"), mary);
        states.insert(agent("bob"), bob);
        let v = StateVector::new(vocab(), states).unwrap();
        let results = synthesize(
            &v,
            &agent("mary"),
            &agent("bob"),
            &parse("wetFloor"),
            &FormulaPool::propositional(&vocab(), 2),
            &PreferenceOrder::default(),
        )
        .unwrap();
        assert_eq!(results[0].text, "true");
        assert_eq!(results[0].letters, 0);
    }

    #[test]
    fn fabricated_explanation_is_not_truthful() {
        // An extended household: Tom pouring water would also wet the
        // floor, and it would explain the wet floor to Bob, but Mary
        // does not believe it happened.
        let vocab = Vocabulary::new(["rain", "holeInRoof", "wetFloor", "tomPouredWater"]).unwrap();
        let ags = agents();
        let parse = |t: &str| Formula::parse(t, &vocab, &ags).unwrap();
        let laws = vec![
            parse("rain & holeInRoof -> wetFloor"),
            parse("tomPouredWater -> wetFloor"),
        ];
        let mk = |name: &str, texts: &[&str], models: BTreeMap<AgentId, EpistemicState>, depth| {
            EpistemicState::new(
                agent(name),
                vocab.clone(),
                laws.clone(),
                StratifiedBase::new(texts.iter().map(|t| vec![parse(t)]).collect()).unwrap(),
                models,
                depth,
                RevisionOperator::Prioritized,
            )
            .unwrap()
        };
        let bob = mk(
            "bob",
            &["holeInRoof", "~rain", "~wetFloor", "~tomPouredWater"],
            BTreeMap::new(),
            1,
        );
        let mut mary_models = BTreeMap::new();
        mary_models.insert(agent("bob"), bob.clone());
        let mary = mk(
            "mary",
            &["wetFloor", "holeInRoof", "rain", "~tomPouredWater"],
            mary_models,
            2,
        );
        let mut states = BTreeMap::new();
        states.insert(agent("mary"), mary);
        states.insert(agent("bob"), bob);
        let v = StateVector::new(vocab.clone(), states).unwrap();
        let poured = parse("tomPouredWater");
        let wet = parse("wetFloor");
        assert!(
            is_subjective_explanation(&v, &agent("mary"), &agent("bob"), &poured, &wet).unwrap()
        );
        assert!(
            !is_subjectively_truthful(&v, &agent("mary"), &agent("bob"), &poured, &wet).unwrap()
        );
    }

    #[test]
    fn first_result_is_pool_optimal() {
        // Nothing later in the ranking may be strictly preferred under
        // the same order.
        let v = running_example();
        let pool = FormulaPool::propositional(&vocab(), 2);
        let order = PreferenceOrder::default();
        let results = synthesize(
            &v,
            &agent("mary"),
            &agent("bob"),
            &parse("wetFloor"),
            &pool,
            &order,
        )
        .unwrap();
        let key = |r: &ExplanationResult| (!r.truthful as u8, r.letters, r.plausibility);
        let best = key(&results[0]);
        for r in &results {
            assert!(key(r) >= best, "{} strictly preferred to the head", r.text);
        }
    }

    #[test]
    fn discrepancies() {
        let v = running_example();
        let pool = FormulaPool::propositional(&vocab(), 1);
        let subjective = find_discrepancies(
            &v,
            &agent("mary"),
            &agent("bob"),
            &pool,
            Some(&agent("mary")),
        )
        .unwrap();
        assert!(subjective.contains(&parse("wetFloor")));
        // A consistent agent has no discrepancy with itself.
        let with_self =
            find_discrepancies(&v, &agent("mary"), &agent("mary"), &pool, None).unwrap();
        assert!(with_self.is_empty());
    }

    #[test]
    fn mediator_sees_third_party_discrepancy() {
        // From mary's perspective, tom and bob disagree about the
        // rain: her model of tom believes it, her model of bob denies
        // it.
        let v = running_example();
        let pool = FormulaPool::propositional(&vocab(), 1);
        let seen = find_discrepancies(
            &v,
            &agent("tom"),
            &agent("bob"),
            &pool,
            Some(&agent("mary")),
        )
        .unwrap();
        assert!(seen.contains(&parse("rain")));
        assert!(!seen.contains(&parse("holeInRoof")));
    }

    #[test]
    fn discrepancy_resolution() {
        let v = running_example();
        assert!(resolves_discrepancy(
            &v,
            &agent("mary"),
            &agent("bob"),
            &parse("rain"),
            &parse("wetFloor")
        )
        .unwrap());
        assert!(!resolves_discrepancy(
            &v,
            &agent("mary"),
            &agent("bob"),
            &parse("true"),
            &parse("wetFloor")
        )
        .unwrap());
    }

    #[test]
    fn adequacy_of_faithful_model() {
        let v = running_example();
        let pool = FormulaPool::propositional(&vocab(), 2);
        let (adequate, witnesses) =
            is_adequate(&v, &agent("mary"), &agent("bob"), &parse("wetFloor"), &pool).unwrap();
        assert!(adequate, "unexpected witnesses: {witnesses:?}");
    }

    #[test]
    fn subjective_explanation_ignores_objective_explainee() {
        // Mutating the objective explainee state never changes the
        // subjective verdict.
        let v = running_example();
        let changed = v.with_state(
            agent("bob"),
            tower("bob", &["rain", "wetFloor"], BTreeMap::new(), 1),
        );
        let pool = FormulaPool::propositional(&vocab(), 2);
        for item in pool.items() {
            let a = is_subjective_explanation(
                &v,
                &agent("mary"),
                &agent("bob"),
                &item.formula,
                &parse("wetFloor"),
            );
            let b = is_subjective_explanation(
                &changed,
                &agent("mary"),
                &agent("bob"),
                &item.formula,
                &parse("wetFloor"),
            );
            assert_eq!(a, b, "subjective verdict changed for {}", item.text);
        }
    }
}
