//! Formula AST for the belief/revision language, with surface syntax.
//!
//! The language has atoms, negation, conjunction, a belief operator
//! `B[i] phi`, and a revision operator `[alpha]_i phi` ("after agent i
//! revises by alpha, phi holds"). Disjunction, implication and the
//! constants `true`/`false` are surface sugar expanded at parse time;
//! `false` expands to `p & ~p` for the lexicographically first symbol
//! of the vocabulary.
//!
//! Surface grammar (precedence `~` > `&` > `|` > `->`, modal operators
//! bind tighter than binary connectives):
//!
//! ```text
//! formula := implies
//! implies := or ("->" implies)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "B[" agent "]" unary | "[" formula "]_" agent unary
//!          | "(" formula ")" | atom | "true" | "false"
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of an agent; lowercase alphanumeric plus underscore.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(String);

impl AgentId {
    pub fn new(name: &str) -> Result<Self> {
        let ok = !name.is_empty()
            && name.chars().next().unwrap().is_ascii_lowercase()
            && name
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
        if ok {
            Ok(AgentId(name.to_string()))
        } else {
            Err(Error::InvalidAgentName(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The proposition symbols a scenario is allowed to talk about.
///
/// Symbols are kept sorted; the sort position of a symbol is its bit
/// index in a [`crate::semantics::Valuation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    symbols: Vec<String>,
}

impl Vocabulary {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut syms: Vec<String> = symbols.into_iter().map(Into::into).collect();
        syms.sort();
        syms.dedup();
        if syms.is_empty() {
            return Err(Error::ScenarioParse("vocabulary is empty".into()));
        }
        for s in &syms {
            let ok = !s.is_empty()
                && s.chars().next().unwrap().is_ascii_alphabetic()
                && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && s != "true"
                && s != "false";
            if !ok {
                return Err(Error::ScenarioParse(format!(
                    "invalid proposition symbol `{s}`"
                )));
            }
        }
        Ok(Vocabulary { symbols: syms })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols
            .binary_search_by(|s| s.as_str().cmp(symbol))
            .ok()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index_of(symbol).is_some()
    }

    /// The canonical contradiction: `p & ~p` for the first symbol.
    pub fn bot(&self) -> Formula {
        let p = Formula::atom(&self.symbols[0]);
        Formula::and(p.clone(), Formula::not(p))
    }

    /// The canonical tautology: `~(p & ~p)`.
    pub fn top(&self) -> Formula {
        Formula::not(self.bot())
    }
}

/// A formula of the belief/revision language.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `B[i] phi`: agent `i` believes `phi`.
    Believes(AgentId, Box<Formula>),
    /// `[alpha]_i phi`: after agent `i` revises by `alpha`, `phi` holds.
    AfterRevision(AgentId, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Formula {
        Formula::Not(Box::new(inner))
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn believes(agent: AgentId, inner: Formula) -> Formula {
        Formula::Believes(agent, Box::new(inner))
    }

    pub fn after_revision(agent: AgentId, input: Formula, body: Formula) -> Formula {
        Formula::AfterRevision(agent, Box::new(input), Box::new(body))
    }

    /// Right-associated conjunction of a non-empty list.
    pub fn conjoin(mut parts: Vec<Formula>) -> Option<Formula> {
        let last = parts.pop()?;
        Some(
            parts
                .into_iter()
                .rev()
                .fold(last, |acc, f| Formula::and(f, acc)),
        )
    }

    /// True when no belief or revision operator occurs anywhere.
    pub fn is_modal_free(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(x) => x.is_modal_free(),
            Formula::And(a, b) => a.is_modal_free() && b.is_modal_free(),
            Formula::Believes(..) | Formula::AfterRevision(..) => false,
        }
    }

    /// True when no atom occurs outside the scope of a belief operator.
    ///
    /// Revision bodies must themselves be agent formulas; revision
    /// inputs may be arbitrary.
    pub fn is_agent_formula(&self) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Not(x) => x.is_agent_formula(),
            Formula::And(a, b) => a.is_agent_formula() && b.is_agent_formula(),
            Formula::Believes(..) => true,
            Formula::AfterRevision(_, _, body) => body.is_agent_formula(),
        }
    }

    /// Number of atom occurrences (not distinct symbols).
    pub fn letter_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(x) => x.letter_count(),
            Formula::And(a, b) => a.letter_count() + b.letter_count(),
            Formula::Believes(_, x) => x.letter_count(),
            Formula::AfterRevision(_, input, body) => input.letter_count() + body.letter_count(),
        }
    }

    /// True when `needle` occurs as a subformula (including `self`).
    pub fn contains(&self, needle: &Formula) -> bool {
        if self == needle {
            return true;
        }
        match self {
            Formula::Atom(_) => false,
            Formula::Not(x) => x.contains(needle),
            Formula::And(a, b) => a.contains(needle) || b.contains(needle),
            Formula::Believes(_, x) => x.contains(needle),
            Formula::AfterRevision(_, input, body) => {
                input.contains(needle) || body.contains(needle)
            }
        }
    }

    /// Atoms occurring in the formula, in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        fn walk(f: &Formula, out: &mut Vec<String>) {
            match f {
                Formula::Atom(p) => {
                    if !out.iter().any(|q| q == p) {
                        out.push(p.clone());
                    }
                }
                Formula::Not(x) => walk(x, out),
                Formula::And(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Formula::Believes(_, x) => walk(x, out),
                Formula::AfterRevision(_, input, body) => {
                    walk(input, out);
                    walk(body, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Parse surface syntax against a vocabulary and agent set.
    pub fn parse(text: &str, vocab: &Vocabulary, agents: &[AgentId]) -> Result<Formula> {
        let tokens = lex(text)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            vocab,
            agents,
        };
        let f = parser.formula()?;
        parser.expect_end()?;
        Ok(f)
    }

    /// Canonical text; `parse(render(f)) == f` for every AST.
    pub fn render(&self) -> String {
        match self {
            Formula::Atom(p) => p.clone(),
            Formula::Not(x) => format!("~{}", render_unary_arg(x)),
            Formula::And(a, b) => {
                format!("{} & {}", render_and_left(a), render_and_right(b))
            }
            Formula::Believes(i, x) => format!("B[{}] {}", i, render_modal_body(x)),
            Formula::AfterRevision(i, input, body) => {
                format!("[{}]_{} {}", input.render(), i, render_modal_body(body))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn render_unary_arg(f: &Formula) -> String {
    match f {
        Formula::And(..) => format!("({})", f.render()),
        _ => f.render(),
    }
}

fn render_and_left(f: &Formula) -> String {
    match f {
        Formula::And(..) => format!("({})", f.render()),
        _ => f.render(),
    }
}

fn render_and_right(f: &Formula) -> String {
    // `a & b & c` reparses right-associated, so a right-nested And may
    // stay flat.
    f.render()
}

fn render_modal_body(f: &Formula) -> String {
    match f {
        Formula::Atom(p) => p.clone(),
        _ => format!("({})", f.render()),
    }
}

/// A formula in which no atom occurs outside a belief operator; the
/// fragment the objective satisfaction relation evaluates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AgentFormula(Formula);

impl AgentFormula {
    pub fn new(f: Formula) -> Result<Self> {
        if f.is_agent_formula() {
            Ok(AgentFormula(f))
        } else {
            Err(Error::NotAgentFormula(f.render()))
        }
    }

    pub fn as_formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }
}

impl fmt::Display for AgentFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    BeliefOpen, // "B["
    LBrack,
    RevClose, // "]_"
    RBrack,
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::BeliefOpen => "`B[`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RevClose => "`]_`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '~' => {
                out.push((Tok::Not, i));
                i += 1;
            }
            '&' => {
                out.push((Tok::And, i));
                i += 1;
            }
            '|' => {
                out.push((Tok::Or, i));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push((Tok::Implies, i));
                    i += 2;
                } else {
                    return Err(Error::Syntax {
                        position: i,
                        expected: "`->`".into(),
                    });
                }
            }
            '[' => {
                out.push((Tok::LBrack, i));
                i += 1;
            }
            ']' => {
                if chars.get(i + 1) == Some(&'_') {
                    out.push((Tok::RevClose, i));
                    i += 2;
                } else {
                    out.push((Tok::RBrack, i));
                    i += 1;
                }
            }
            _ if c.is_ascii_alphabetic() => {
                // "B[" opens a belief operator; a lone "B" is an identifier.
                if c == 'B' && chars.get(i + 1) == Some(&'[') {
                    out.push((Tok::BeliefOpen, i));
                    i += 2;
                    continue;
                }
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push((
                    match word.as_str() {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        _ => Tok::Ident(word),
                    },
                    start,
                ));
            }
            _ => {
                return Err(Error::Syntax {
                    position: i,
                    expected: format!("a formula token, found `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    vocab: &'a Vocabulary,
    agents: &'a [AgentId],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or_else(|| self.tokens.last().map(|(_, p)| p + 1).unwrap_or(0))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<()> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::Syntax {
                position: self.here(),
                expected: want.describe(),
            }),
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(Error::Syntax {
                position: self.here(),
                expected: "end of input".into(),
            })
        }
    }

    fn agent(&mut self) -> Result<AgentId> {
        let position = self.here();
        match self.bump() {
            Some(Tok::Ident(name)) => {
                let id = AgentId::new(&name).map_err(|_| Error::UnknownAgent(name.clone()))?;
                if self.agents.contains(&id) {
                    Ok(id)
                } else {
                    Err(Error::UnknownAgent(name))
                }
            }
            _ => Err(Error::Syntax {
                position,
                expected: "an agent name".into(),
            }),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        self.implies()
    }

    fn implies(&mut self) -> Result<Formula> {
        let left = self.or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let right = self.implies()?;
            // a -> b desugars to ~(a & ~b)
            Ok(Formula::not(Formula::and(left, Formula::not(right))))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut parts = vec![self.and()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            parts.push(self.and()?);
        }
        if parts.len() == 1 {
            Ok(parts.pop().unwrap())
        } else {
            // a | b desugars to ~(~a & ~b), folded right-associated
            let negs: Vec<Formula> = parts.into_iter().map(Formula::not).collect();
            Ok(Formula::not(Formula::conjoin(negs).unwrap()))
        }
    }

    fn and(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            parts.push(self.unary()?);
        }
        Ok(Formula::conjoin(parts).unwrap())
    }

    fn unary(&mut self) -> Result<Formula> {
        let position = self.here();
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::BeliefOpen) => {
                self.pos += 1;
                let agent = self.agent()?;
                self.expect(&Tok::RBrack)?;
                Ok(Formula::believes(agent, self.unary()?))
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                let input = self.formula()?;
                self.expect(&Tok::RevClose)?;
                let agent = self.agent()?;
                Ok(Formula::after_revision(agent, input, self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(self.vocab.top())
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(self.vocab.bot())
            }
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                if self.vocab.contains(&name) {
                    Ok(Formula::atom(&name))
                } else {
                    Err(Error::UnknownSymbol(name))
                }
            }
            _ => Err(Error::Syntax {
                position,
                expected: "a formula".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::new(["rain", "holeInRoof", "wetFloor"]).unwrap()
    }

    fn agents() -> Vec<AgentId> {
        ["mary", "bob", "tom"]
            .iter()
            .map(|s| AgentId::new(s).unwrap())
            .collect()
    }

    fn p(text: &str) -> Formula {
        Formula::parse(text, &vocab(), &agents()).unwrap()
    }

    fn agent(s: &str) -> AgentId {
        AgentId::new(s).unwrap()
    }

    #[test]
    fn parse_belief() {
        assert_eq!(
            p("B[mary] wetFloor"),
            Formula::believes(agent("mary"), Formula::atom("wetFloor"))
        );
    }

    #[test]
    fn parse_revision() {
        assert_eq!(
            p("[rain]_bob B[bob] wetFloor"),
            Formula::after_revision(
                agent("bob"),
                Formula::atom("rain"),
                Formula::believes(agent("bob"), Formula::atom("wetFloor"))
            )
        );
    }

    #[test]
    fn parse_implication_desugars() {
        let f = p("B[mary] (rain & holeInRoof -> wetFloor)");
        let body = Formula::not(Formula::and(
            Formula::and(Formula::atom("rain"), Formula::atom("holeInRoof")),
            Formula::not(Formula::atom("wetFloor")),
        ));
        assert_eq!(f, Formula::believes(agent("mary"), body));
    }

    #[test]
    fn parse_or_desugars() {
        let f = p("rain | wetFloor");
        assert_eq!(
            f,
            Formula::not(Formula::and(
                Formula::not(Formula::atom("rain")),
                Formula::not(Formula::atom("wetFloor"))
            ))
        );
    }

    #[test]
    fn parse_constants() {
        assert_eq!(p("false"), vocab().bot());
        assert_eq!(p("true"), vocab().top());
        // Lexicographically first symbol is holeInRoof.
        assert_eq!(
            vocab().bot(),
            Formula::and(
                Formula::atom("holeInRoof"),
                Formula::not(Formula::atom("holeInRoof"))
            )
        );
    }

    #[test]
    fn parse_precedence() {
        // ~ binds tighter than &, & than |, | than ->
        let f = p("~rain & holeInRoof");
        assert_eq!(
            f,
            Formula::and(
                Formula::not(Formula::atom("rain")),
                Formula::atom("holeInRoof")
            )
        );
    }

    #[test]
    fn and_is_right_associative() {
        let f = p("rain & holeInRoof & wetFloor");
        assert_eq!(
            f,
            Formula::and(
                Formula::atom("rain"),
                Formula::and(Formula::atom("holeInRoof"), Formula::atom("wetFloor"))
            )
        );
    }

    #[test]
    fn parse_errors() {
        let e = Formula::parse("B[alice] rain", &vocab(), &agents()).unwrap_err();
        assert_eq!(e, Error::UnknownAgent("alice".into()));
        let e = Formula::parse("snow", &vocab(), &agents()).unwrap_err();
        assert_eq!(e, Error::UnknownSymbol("snow".into()));
        let e = Formula::parse("B[mary] (rain", &vocab(), &agents()).unwrap_err();
        assert!(matches!(e, Error::Syntax { .. }));
    }

    #[test]
    fn render_examples() {
        assert_eq!(Formula::atom("rain").render(), "rain");
        assert_eq!(
            Formula::believes(agent("bob"), Formula::not(Formula::atom("rain"))).render(),
            "B[bob] (~rain)"
        );
        assert_eq!(
            Formula::after_revision(
                agent("bob"),
                Formula::atom("rain"),
                Formula::believes(agent("bob"), Formula::atom("wetFloor"))
            )
            .render(),
            "[rain]_bob (B[bob] wetFloor)"
        );
    }

    #[test]
    fn render_round_trips() {
        for text in [
            "rain",
            "~rain",
            "~~rain",
            "rain & holeInRoof & wetFloor",
            "(rain & holeInRoof) & wetFloor",
            "~(rain & holeInRoof)",
            "B[mary] (B[bob] (~rain))",
            "[rain & wetFloor]_tom (B[tom] wetFloor & ~B[tom] false)",
            "~B[bob] false",
        ] {
            let f = p(text);
            assert_eq!(p(&f.render()), f, "round trip failed for {text}");
        }
    }

    #[test]
    fn agent_formula_examples() {
        assert!(p("B[mary] rain").is_agent_formula());
        assert!(!p("rain").is_agent_formula());
        assert!(p("[rain]_bob B[bob] wetFloor").is_agent_formula());
        // Revision input may be non-agent; the body must be agent.
        assert!(!p("[B[bob] rain]_bob wetFloor").is_agent_formula());
        // Closure under ~ and &.
        assert!(p("~B[mary] rain & B[tom] wetFloor").is_agent_formula());
    }

    #[test]
    fn letter_count_examples() {
        assert_eq!(p("rain").letter_count(), 1);
        assert_eq!(p("rain & holeInRoof").letter_count(), 2);
        assert_eq!(p("B[tom] (~holeInRoof)").letter_count(), 1);
        // Occurrences, not distinct symbols.
        assert_eq!(p("rain & rain").letter_count(), 2);
        assert_eq!(p("[rain]_bob B[bob] wetFloor").letter_count(), 2);
    }

    #[test]
    fn atom_named_b_is_allowed() {
        let v = Vocabulary::new(["B", "p"]).unwrap();
        let f = Formula::parse("B & p", &v, &[]).unwrap();
        assert_eq!(f, Formula::and(Formula::atom("B"), Formula::atom("p")));
    }

    #[test]
    fn agent_id_validation() {
        assert!(AgentId::new("mary").is_ok());
        assert!(AgentId::new("agent_2").is_ok());
        assert!(AgentId::new("Mary").is_err());
        assert!(AgentId::new("").is_err());
        assert!(AgentId::new("2agent").is_err());
    }
}
