//! Concrete epistemic states and the satisfaction relation.
//!
//! An epistemic state is a "tower": a stratified belief base plus a
//! cached set of possible worlds, together with nested models of the
//! other agents down to a bounded depth. A state vector assigns one
//! state per agent and supports the objective satisfaction relation
//! over agent formulas.
//!
//! States are immutable values; evaluation is pure and revision
//! returns fresh states.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::{AgentId, Formula, Vocabulary};
use crate::revision::{revise, RevisionOperator};

/// A total truth assignment over a vocabulary, packed as a bitmask.
/// Bit `i` is the value of the vocabulary's `i`-th (sorted) symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation(pub u32);

impl Valuation {
    pub fn get(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn hamming(self, other: Valuation) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    /// All valuations over `n` symbols, in numeric order.
    pub fn all(n: usize) -> impl Iterator<Item = Valuation> {
        assert!(n < 31, "vocabulary too large to enumerate");
        (0u32..1 << n).map(Valuation)
    }

    /// Render against a vocabulary as a bitstring, low index first.
    pub fn bits(self, vocab: &Vocabulary) -> String {
        (0..vocab.len())
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

/// Truth of a modal-free formula at a single valuation.
pub(crate) fn eval_prop(world: Valuation, vocab: &Vocabulary, f: &Formula) -> Result<bool> {
    match f {
        Formula::Atom(p) => vocab
            .index_of(p)
            .map(|i| world.get(i))
            .ok_or_else(|| Error::UnknownSymbol(p.clone())),
        Formula::Not(x) => Ok(!eval_prop(world, vocab, x)?),
        Formula::And(a, b) => Ok(eval_prop(world, vocab, a)? && eval_prop(world, vocab, b)?),
        Formula::Believes(..) | Formula::AfterRevision(..) => {
            Err(Error::ModalFormulaNotAllowed(f.render()))
        }
    }
}

/// The set of valuations satisfying every formula in `formulas`.
pub fn models_of<'a, I>(vocab: &Vocabulary, formulas: I) -> Result<BTreeSet<Valuation>>
where
    I: IntoIterator<Item = &'a Formula> + Clone,
{
    let mut out = BTreeSet::new();
    'world: for w in Valuation::all(vocab.len()) {
        for f in formulas.clone() {
            if !eval_prop(w, vocab, f)? {
                continue 'world;
            }
        }
        out.insert(w);
    }
    Ok(out)
}

/// The weakest modal-free formula whose models are exactly `worlds`.
pub fn characteristic_formula(vocab: &Vocabulary, worlds: &BTreeSet<Valuation>) -> Formula {
    if worlds.is_empty() {
        return vocab.bot();
    }
    let mut world_formulas = Vec::new();
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
        world_formulas.push(Formula::conjoin(literals).expect("vocabulary is non-empty"));
    }
    // Disjunction as ~(~a & ~b & ...).
    let negs: Vec<Formula> = world_formulas.into_iter().map(Formula::not).collect();
    Formula::not(Formula::conjoin(negs).unwrap())
}

/// Ordered strata of modal-free formulas; index 0 is the most
/// entrenched (right after the laws).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StratifiedBase {
    strata: Vec<Vec<Formula>>,
}

impl StratifiedBase {
    pub fn new(strata: Vec<Vec<Formula>>) -> Result<Self> {
        for f in strata.iter().flatten() {
            if !f.is_modal_free() {
                return Err(Error::ModalFormulaNotAllowed(f.render()));
            }
        }
        Ok(StratifiedBase { strata })
    }

    pub fn empty() -> Self {
        StratifiedBase { strata: Vec::new() }
    }

    pub fn strata(&self) -> &[Vec<Formula>] {
        &self.strata
    }

    pub fn flatten(&self) -> impl Iterator<Item = &Formula> + Clone {
        self.strata.iter().flatten()
    }
}

/// One agent's mental state: protected laws, a stratified base, the
/// derived world set, and nested models of the other agents.
///
/// `worlds` is the models of laws plus all base formulas; an empty
/// world set encodes the inconsistent state, which believes
/// everything. The agent's model of itself is the state itself, which
/// yields positive and negative introspection by construction.
///
/// Nested models sit behind `Arc` so towers share structure: revision
/// rebuilds only the path it touches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpistemicState {
    agent: AgentId,
    vocab: Vocabulary,
    laws: Vec<Formula>,
    base: StratifiedBase,
    worlds: BTreeSet<Valuation>,
    models: BTreeMap<AgentId, Arc<EpistemicState>>,
    depth: u32,
    operator: RevisionOperator,
}

impl EpistemicState {
    pub fn new(
        agent: AgentId,
        vocab: Vocabulary,
        laws: Vec<Formula>,
        base: StratifiedBase,
        models: BTreeMap<AgentId, EpistemicState>,
        depth: u32,
        operator: RevisionOperator,
    ) -> Result<Self> {
        let models: BTreeMap<AgentId, Arc<EpistemicState>> = models
            .into_iter()
            .map(|(id, st)| (id, Arc::new(st)))
            .collect();
        for law in &laws {
            if !law.is_modal_free() {
                return Err(Error::ModalFormulaNotAllowed(law.render()));
            }
        }
        if depth == 0 && !models.is_empty() {
            return Err(Error::DepthViolation(format!(
                "state of `{agent}` has depth 0 but carries nested models"
            )));
        }
        for (other, model) in &models {
            if *other == agent {
                return Err(Error::DepthViolation(format!(
                    "state of `{agent}` has an explicit self model; the self entry is implicit"
                )));
            }
            if model.depth >= depth {
                return Err(Error::DepthViolation(format!(
                    "nested model of `{other}` is not strictly shallower than its owner"
                )));
            }
        }
        let worlds = models_of(&vocab, laws.iter().chain(base.flatten()))?;
        Ok(EpistemicState {
            agent,
            vocab,
            laws,
            base,
            worlds,
            models,
            depth,
            operator,
        })
    }

    /// The state that believes only the consequences of the laws.
    pub fn ignorant(
        agent: AgentId,
        vocab: Vocabulary,
        laws: Vec<Formula>,
        depth: u32,
        operator: RevisionOperator,
    ) -> Result<Self> {
        EpistemicState::new(
            agent,
            vocab,
            laws,
            StratifiedBase::empty(),
            BTreeMap::new(),
            depth,
            operator,
        )
    }

    /// A law-free state whose beliefs are exactly the given world set.
    pub fn from_worlds(
        agent: AgentId,
        vocab: Vocabulary,
        worlds: &BTreeSet<Valuation>,
        operator: RevisionOperator,
    ) -> Self {
        let base = StratifiedBase::new(vec![vec![characteristic_formula(&vocab, worlds)]])
            .expect("characteristic formula is modal-free");
        EpistemicState::new(agent, vocab, Vec::new(), base, BTreeMap::new(), 1, operator)
            .expect("world-set state is well-formed")
    }

    pub fn agent(&self) -> &AgentId {
        &self.agent
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn laws(&self) -> &[Formula] {
        &self.laws
    }

    pub fn base(&self) -> &StratifiedBase {
        &self.base
    }

    pub fn worlds(&self) -> &BTreeSet<Valuation> {
        &self.worlds
    }

    pub fn models(&self) -> &BTreeMap<AgentId, Arc<EpistemicState>> {
        &self.models
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn operator(&self) -> RevisionOperator {
        self.operator
    }

    pub fn is_consistent(&self) -> bool {
        !self.worlds.is_empty()
    }

    /// Replace the nested model of `other`, leaving the rest intact.
    pub fn with_model(&self, other: AgentId, model: EpistemicState) -> EpistemicState {
        let mut next = self.clone();
        next.models.insert(other, Arc::new(model));
        next
    }

    /// Internal constructor for revision: same agent/vocab/laws, new
    /// base and nested models; the world set is recomputed.
    pub(crate) fn rebuilt(
        &self,
        base: StratifiedBase,
        worlds: BTreeSet<Valuation>,
        models: BTreeMap<AgentId, Arc<EpistemicState>>,
    ) -> EpistemicState {
        EpistemicState {
            agent: self.agent.clone(),
            vocab: self.vocab.clone(),
            laws: self.laws.clone(),
            base,
            worlds,
            models,
            depth: self.depth,
            operator: self.operator,
        }
    }

    /// The nested model of `other`: the state itself for the owner,
    /// the stored model otherwise, and the ignorant fallback when the
    /// depth budget is exhausted or no model is stored.
    pub fn model_of(&self, other: &AgentId) -> Result<Arc<EpistemicState>> {
        if *other == self.agent {
            return Ok(Arc::new(self.clone()));
        }
        match self.models.get(other) {
            Some(m) => Ok(Arc::clone(m)),
            None => Ok(Arc::new(EpistemicState::ignorant(
                other.clone(),
                self.vocab.clone(),
                self.laws.clone(),
                0,
                self.operator,
            )?)),
        }
    }

    /// Belief entailment for modal-free formulas: true iff every world
    /// satisfies `f`; vacuously true for the inconsistent state.
    pub fn entails(&self, f: &Formula) -> Result<bool> {
        if !f.is_modal_free() {
            return Err(Error::ModalFormulaNotAllowed(f.render()));
        }
        for w in &self.worlds {
            if !eval_prop(*w, &self.vocab, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Truth of an arbitrary formula at this state: `f` holds at every
    /// world, where atoms read from the world, belief operators route
    /// through the nested models (the self entry is the state itself),
    /// and revision operators rebuild the local tower.
    pub fn truth_at(&self, f: &Formula) -> Result<bool> {
        if self.worlds.is_empty() {
            return Ok(true);
        }
        if f.is_agent_formula() {
            // No atom reads the world directly; evaluate once.
            return holds_at_world(*self.worlds.iter().next().unwrap(), self, f);
        }
        for w in &self.worlds {
            if !holds_at_world(*w, self, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn holds_at_world(w: Valuation, state: &EpistemicState, f: &Formula) -> Result<bool> {
    match f {
        Formula::Atom(p) => state
            .vocab
            .index_of(p)
            .map(|i| w.get(i))
            .ok_or_else(|| Error::UnknownSymbol(p.clone())),
        Formula::Not(x) => Ok(!holds_at_world(w, state, x)?),
        Formula::And(a, b) => Ok(holds_at_world(w, state, a)? && holds_at_world(w, state, b)?),
        Formula::Believes(j, x) => {
            if *j == state.agent {
                state.truth_at(x)
            } else {
                state.model_of(j)?.truth_at(x)
            }
        }
        Formula::AfterRevision(j, input, body) => {
            if *j == state.agent {
                let revised = revise(state, input)?;
                holds_at_world(w, &revised, body)
            } else {
                let revised = revise(state.model_of(j)?.as_ref(), input)?;
                let local = state.with_model(j.clone(), revised);
                holds_at_world(w, &local, body)
            }
        }
    }
}

/// The objective context: one epistemic state per agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVector {
    vocab: Vocabulary,
    states: BTreeMap<AgentId, Arc<EpistemicState>>,
}

impl StateVector {
    pub fn new(vocab: Vocabulary, states: BTreeMap<AgentId, EpistemicState>) -> Result<Self> {
        for (id, st) in &states {
            if st.agent() != id {
                return Err(Error::ScenarioParse(format!(
                    "state keyed `{id}` belongs to `{}`",
                    st.agent()
                )));
            }
        }
        Ok(StateVector {
            vocab,
            states: states
                .into_iter()
                .map(|(id, st)| (id, Arc::new(st)))
                .collect(),
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn agents(&self) -> impl Iterator<Item = &AgentId> {
        self.states.keys()
    }

    pub fn state(&self, agent: &AgentId) -> Result<&EpistemicState> {
        self.states
            .get(agent)
            .map(|a| a.as_ref())
            .ok_or_else(|| Error::UnknownAgent(agent.to_string()))
    }

    pub fn with_state(&self, agent: AgentId, state: EpistemicState) -> StateVector {
        let mut next = self.clone();
        next.states.insert(agent, Arc::new(state));
        next
    }

    /// The objective satisfaction relation over agent formulas.
    pub fn holds(&self, f: &Formula) -> Result<bool> {
        if !f.is_agent_formula() {
            return Err(Error::NotAgentFormula(f.render()));
        }
        self.eval(f)
    }

    fn eval(&self, f: &Formula) -> Result<bool> {
        match f {
            Formula::Believes(i, x) => self.state(i)?.truth_at(x),
            Formula::Not(x) => Ok(!self.eval(x)?),
            Formula::And(a, b) => Ok(self.eval(a)? && self.eval(b)?),
            Formula::AfterRevision(i, input, body) => {
                let revised = revise(self.state(i)?, input)?;
                self.with_state(i.clone(), revised).eval(body)
            }
            Formula::Atom(_) => unreachable!("agent formulas have no bare atoms"),
        }
    }
}

/// Bounded check that two states support the same beliefs, and keep
/// doing so under every revision sequence over `pool_formulas` up to
/// `max_seq_len`. An approximation of the unbounded relation; the
/// bounds are the caller's to pick.
pub fn states_equivalent(
    left: &EpistemicState,
    right: &EpistemicState,
    pool_formulas: &[Formula],
    max_seq_len: usize,
) -> bool {
    let mut sequence: Vec<usize> = Vec::new();
    loop {
        let ra = apply_sequence(left, pool_formulas, &sequence);
        let rb = apply_sequence(right, pool_formulas, &sequence);
        match (ra, rb) {
            (Err(ea), Err(eb)) => {
                if ea != eb {
                    return false;
                }
            }
            (Ok(sa), Ok(sb)) => {
                if sa.is_consistent() != sb.is_consistent() {
                    return false;
                }
                for f in pool_formulas {
                    if sa.truth_at(f) != sb.truth_at(f) {
                        return false;
                    }
                }
            }
            _ => return false,
        }
        if !advance(&mut sequence, pool_formulas.len(), max_seq_len) {
            return true;
        }
    }
}

fn apply_sequence(
    state: &EpistemicState,
    pool: &[Formula],
    sequence: &[usize],
) -> Result<EpistemicState> {
    let mut current = state.clone();
    for &i in sequence {
        current = revise(&current, &pool[i])?;
    }
    Ok(current)
}

/// Odometer over sequences of indices, shortest first.
fn advance(sequence: &mut Vec<usize>, radix: usize, max_len: usize) -> bool {
    if radix == 0 {
        return false;
    }
    for slot in sequence.iter_mut().rev() {
        *slot += 1;
        if *slot < radix {
            return true;
        }
        *slot = 0;
    }
    if sequence.len() < max_len {
        sequence.push(0);
        for slot in sequence.iter_mut() {
            *slot = 0;
        }
        true
    } else {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::new(["rain", "holeInRoof", "wetFloor"]).unwrap()
    }

    fn agent(s: &str) -> AgentId {
        AgentId::new(s).unwrap()
    }

    fn parse(text: &str) -> Formula {
        let agents: Vec<AgentId> = ["mary", "bob", "tom"].iter().map(|s| agent(s)).collect();
        Formula::parse(text, &vocab(), &agents).unwrap()
    }

    fn law() -> Formula {
        parse("rain & holeInRoof -> wetFloor")
    }

    fn tower(
        name: &str,
        stratum_texts: &[&str],
        models: BTreeMap<AgentId, EpistemicState>,
        depth: u32,
    ) -> EpistemicState {
        let strata = stratum_texts
            .iter()
            .map(|t| vec![parse(t)])
            .collect::<Vec<_>>();
        EpistemicState::new(
            agent(name),
            vocab(),
            vec![law()],
            StratifiedBase::new(strata).unwrap(),
            models,
            depth,
            RevisionOperator::Prioritized,
        )
        .unwrap()
    }

    fn bob() -> EpistemicState {
        tower(
            "bob",
            &["holeInRoof", "~rain", "~wetFloor"],
            BTreeMap::new(),
            1,
        )
    }

    fn mary() -> EpistemicState {
        let mut models = BTreeMap::new();
        models.insert(
            agent("bob"),
            tower(
                "bob",
                &["holeInRoof", "~rain", "~wetFloor"],
                BTreeMap::new(),
                1,
            ),
        );
        models.insert(
            agent("tom"),
            tower(
                "tom",
                &["rain", "~holeInRoof", "~wetFloor"],
                BTreeMap::new(),
                1,
            ),
        );
        tower("mary", &["wetFloor", "holeInRoof", "rain"], models, 2)
    }

    #[test]
    fn entails_examples() {
        let bob = bob();
        assert!(bob.entails(&parse("holeInRoof")).unwrap());
        assert!(bob.entails(&parse("~rain")).unwrap());
        assert!(!bob.entails(&parse("wetFloor")).unwrap());
        assert!(bob.entails(&parse("true")).unwrap());
        assert!(bob.entails(&parse("B[bob] rain")).is_err());
    }

    #[test]
    fn inconsistent_state_believes_everything() {
        let st = tower("bob", &["rain", "~rain"], BTreeMap::new(), 1);
        assert!(st.worlds().is_empty());
        assert!(st.entails(&parse("false")).unwrap());
        assert!(st.truth_at(&parse("wetFloor & ~wetFloor")).unwrap());
    }

    #[test]
    fn truth_at_nested_belief() {
        let mary = mary();
        assert!(mary.truth_at(&parse("B[bob] (~rain)")).unwrap());
        assert!(mary.truth_at(&parse("B[tom] rain")).unwrap());
        assert!(mary.truth_at(&parse("~B[bob] false")).unwrap());
    }

    #[test]
    fn self_belief_is_introspective() {
        let mary = mary();
        assert!(mary.truth_at(&parse("B[mary] wetFloor")).unwrap());
        assert!(mary.truth_at(&parse("~B[mary] (~wetFloor)")).unwrap());
    }

    #[test]
    fn depth_exhaustion_falls_back_to_ignorant() {
        // Bob's tower has depth 1 and no stored models, so his model of
        // tom believes only law consequences.
        let bob = bob();
        assert!(!bob.truth_at(&parse("B[tom] rain")).unwrap());
        assert!(bob
            .truth_at(&parse("B[tom] (rain & holeInRoof -> wetFloor)"))
            .unwrap());
    }

    #[test]
    fn holds_running_example_fragment() {
        let mut states = BTreeMap::new();
        states.insert(agent("mary"), mary());
        states.insert(agent("bob"), bob());
        states.insert(
            agent("tom"),
            tower(
                "tom",
                &["rain", "~holeInRoof", "~wetFloor"],
                BTreeMap::new(),
                1,
            ),
        );
        let v = StateVector::new(vocab(), states).unwrap();
        assert!(v.holds(&parse("B[mary] wetFloor")).unwrap());
        assert!(v.holds(&parse("B[mary] B[bob] (~rain)")).unwrap());
        assert!(v.holds(&parse("B[mary] B[tom] (~holeInRoof)")).unwrap());
        assert!(v.holds(&parse("~B[bob] false")).unwrap());
        assert!(v
            .holds(&parse(
                "B[mary] ([rain]_bob (B[bob] wetFloor & ~B[bob] false))"
            ))
            .unwrap());
        let e = v.holds(&parse("rain")).unwrap_err();
        assert!(matches!(e, Error::NotAgentFormula(_)));
    }

    #[test]
    fn monotone_conjunction() {
        let mut states = BTreeMap::new();
        states.insert(agent("mary"), mary());
        states.insert(agent("bob"), bob());
        let v = StateVector::new(vocab(), states).unwrap();
        let a = parse("B[mary] rain");
        let b = parse("B[bob] holeInRoof");
        let both = Formula::and(a.clone(), b.clone());
        assert_eq!(
            v.holds(&both).unwrap(),
            v.holds(&a).unwrap() && v.holds(&b).unwrap()
        );
    }

    #[test]
    fn characteristic_formula_round_trips() {
        let v = vocab();
        let worlds: BTreeSet<Valuation> =
            [Valuation(0b011), Valuation(0b101)].into_iter().collect();
        let f = characteristic_formula(&v, &worlds);
        assert_eq!(models_of(&v, [&f]).unwrap(), worlds);
        let empty = BTreeSet::new();
        assert_eq!(
            models_of(&v, [&characteristic_formula(&v, &empty)]).unwrap(),
            empty
        );
    }

    #[test]
    fn equivalence_relation_basics() {
        let pool: Vec<Formula> = ["rain", "~rain", "holeInRoof", "wetFloor"]
            .iter()
            .map(|t| parse(t))
            .collect();
        let b = bob();
        let t = tower(
            "tom",
            &["rain", "~holeInRoof", "~wetFloor"],
            BTreeMap::new(),
            1,
        );
        assert!(states_equivalent(&b, &b, &pool, 2));
        // Bob and Tom disagree on rain.
        assert!(!states_equivalent(&b, &t, &pool, 0));
    }
}
