//! Abstract syntax of weighted answer set programs and their text form.
//!
//! ```text
//! % comment
//! 0.3 :: a.          weighted fact
//! b ; c :- a.        disjunctive rule
//! -d :- b, not c.    classical (-) and default (not) negation
//! :- c, d.           constraint
//! e.                 fact
//! ```

mod parser;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::event::Universe;
use crate::rational::format_weight;

pub use parser::{parse_program, parse_program_with, ParseOptions};

const RESERVED_PREFIX: &str = "__";

/// A propositional symbol: a lowercase letter followed by letters, digits or
/// underscores. Names starting with `__` are reserved for auxiliary atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: &str) -> Result<Self> {
        let mut chars = name.chars();
        let valid = matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            && name != "not";
        if valid {
            Ok(Symbol(name.to_string()))
        } else {
            Err(Error::InvalidSymbol(name.to_string()))
        }
    }

    /// Accepts ordinary names and reserved `__` names.
    pub fn new_any(name: &str) -> Result<Self> {
        match name.strip_prefix(RESERVED_PREFIX) {
            Some(rest)
                if !rest.is_empty()
                    && rest.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') =>
            {
                Ok(Symbol(name.to_string()))
            }
            Some(_) => Err(Error::InvalidSymbol(name.to_string())),
            None => Symbol::new(name),
        }
    }

    /// The auxiliary symbol `__auxN`.
    pub fn aux(n: usize) -> Self {
        Symbol(format!("{RESERVED_PREFIX}aux{n}"))
    }

    pub fn is_reserved(&self) -> bool {
        self.0.starts_with(RESERVED_PREFIX)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// An atom `a` or its classical negation `-a`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedAtom {
    pub symbol: Symbol,
    pub polarity: Polarity,
}

impl SignedAtom {
    pub fn new(symbol: Symbol, polarity: Polarity) -> Self {
        SignedAtom { symbol, polarity }
    }

    pub fn positive(symbol: Symbol) -> Self {
        SignedAtom::new(symbol, Polarity::Positive)
    }

    pub fn negative(symbol: Symbol) -> Self {
        SignedAtom::new(symbol, Polarity::Negative)
    }

    pub fn negate(&self) -> Self {
        SignedAtom::new(self.symbol.clone(), self.polarity.flip())
    }
}

impl fmt::Display for SignedAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.polarity == Polarity::Negative {
            f.write_str("-")?;
        }
        write!(f, "{}", self.symbol)
    }
}

/// A body literal; `naf` marks default negation (`not a`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: SignedAtom,
    pub naf: bool,
}

impl Literal {
    pub fn pos(atom: SignedAtom) -> Self {
        Literal { atom, naf: false }
    }

    pub fn not(atom: SignedAtom) -> Self {
        Literal { atom, naf: true }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.naf {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// `h1 ; ... ; hn :- b1, ..., bm.` An empty head makes a constraint.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: BTreeSet<SignedAtom>,
    pub body: BTreeSet<Literal>,
}

impl Rule {
    pub fn new(
        head: impl IntoIterator<Item = SignedAtom>,
        body: impl IntoIterator<Item = Literal>,
    ) -> Self {
        Rule {
            head: head.into_iter().collect(),
            body: body.into_iter().collect(),
        }
    }

    pub fn fact(atom: SignedAtom) -> Self {
        Rule::new([atom], [])
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_normal(&self) -> bool {
        self.head.len() == 1
    }

    pub fn is_disjunctive(&self) -> bool {
        self.head.len() > 1
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn has_naf(&self) -> bool {
        self.body.iter().any(|l| l.naf)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.head
            .iter()
            .map(|a| &a.symbol)
            .chain(self.body.iter().map(|l| &l.atom.symbol))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = self.head.iter().map(ToString::to_string).collect();
        f.write_str(&head.join(" ; "))?;
        if !self.body.is_empty() {
            let body: Vec<String> = self.body.iter().map(ToString::to_string).collect();
            if !head.is_empty() {
                f.write_str(" ")?;
            }
            write!(f, ":- {}", body.join(", "))?;
        }
        f.write_str(".")
    }
}

/// `w :: a.` with `w` an exact rational in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedFact {
    pub atom: SignedAtom,
    pub weight: BigRational,
}

impl WeightedFact {
    pub fn new(atom: SignedAtom, weight: BigRational) -> Result<Self> {
        if weight < BigRational::zero() || weight > BigRational::one() {
            return Err(Error::WeightOutOfRange {
                atom: atom.to_string(),
                weight: format_weight(&weight),
            });
        }
        Ok(WeightedFact { atom, weight })
    }
}

impl fmt::Display for WeightedFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :: {}.", format_weight(&self.weight), self.atom)
    }
}

/// A weighted answer set program: weighted facts, facts and rules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    weighted_facts: Vec<WeightedFact>,
    facts: Vec<Rule>,
    rules: Vec<Rule>,
}

impl Program {
    pub fn new() -> Self {
        Program::default()
    }

    pub fn weighted_facts(&self) -> &[WeightedFact] {
        &self.weighted_facts
    }

    /// Rules with an empty body.
    pub fn facts(&self) -> &[Rule] {
        &self.facts
    }

    /// Rules with a non-empty body.
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Facts followed by rules.
    pub fn all_rules(&self) -> impl Iterator<Item = &Rule> {
        self.facts.iter().chain(&self.rules)
    }

    /// At most one weighted fact per symbol is allowed, whatever its polarity.
    pub fn add_weighted_fact(&mut self, fact: WeightedFact) -> Result<()> {
        if let Some(existing) = self
            .weighted_facts
            .iter()
            .find(|w| w.atom.symbol == fact.atom.symbol)
        {
            return Err(if existing.atom == fact.atom {
                Error::DuplicateWeightedFact(fact.atom.to_string())
            } else {
                Error::ConflictingWeightedFacts(fact.atom.symbol.to_string())
            });
        }
        self.weighted_facts.push(fact);
        Ok(())
    }

    /// Routes body-less rules to the facts.
    pub fn add_rule(&mut self, rule: Rule) {
        if rule.is_fact() {
            self.facts.push(rule);
        } else {
            self.rules.push(rule);
        }
    }

    pub(crate) fn remove_fact(&mut self, index: usize) -> Rule {
        self.facts.remove(index)
    }

    pub(crate) fn remove_weighted_fact(&mut self, index: usize) -> WeightedFact {
        self.weighted_facts.remove(index)
    }

    pub fn is_empty(&self) -> bool {
        self.weighted_facts.is_empty() && self.facts.is_empty() && self.rules.is_empty()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.weighted_facts
            .iter()
            .map(|w| &w.atom.symbol)
            .chain(self.all_rules().flat_map(Rule::symbols))
            .cloned()
            .collect()
    }

    /// Every symbol mentioned anywhere; both polarities of each are atoms of
    /// the program.
    pub fn universe(&self) -> Universe {
        Universe::new(self.symbols())
    }

    /// The smallest `__auxN` not yet used.
    pub fn fresh_symbol(&self) -> Symbol {
        let used = self.symbols();
        (0..)
            .map(Symbol::aux)
            .find(|s| !used.contains(s))
            .expect("unbounded counter")
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fact in &self.weighted_facts {
            writeln!(f, "{fact}")?;
        }
        for rule in self.all_rules() {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// Canonical text: weighted facts, then facts, then rules, one per line.
pub fn format_program(program: &Program) -> String {
    program.to_string()
}

/// Parses an event in short notation against `universe`.
///
/// In [`EventMode::Extend`](crate::EventMode::Extend) unknown symbols are
/// added to the universe first, which reindexes it.
pub fn parse_event(
    text: &str,
    universe: &mut Universe,
    mode: crate::EventMode,
) -> Result<crate::Event> {
    if mode == crate::EventMode::Extend {
        universe.extend_from_event(text)?;
    }
    universe.parse_event(text)
}
