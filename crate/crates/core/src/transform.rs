//! Program rewrites.
//!
//! [`derive`] turns a weighted program into a plain disjunctive program by
//! replacing each weighted fact `w :: a.` with the choice `a ; -a.`. The other
//! operations reduce richer annotations to weighted facts over fresh auxiliary
//! atoms (`__auxN`); they are explicit, never applied by the parser.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::event::Universe;
use crate::syntax::{Literal, Program, Rule, SignedAtom, Symbol, WeightedFact};

/// A weight-free disjunctive program together with the atoms whose choices
/// replaced weighted facts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedProgram {
    pub rules: Vec<Rule>,
    pub universe: Universe,
    /// The weighted atoms, in source order.
    pub choice_atoms: Vec<SignedAtom>,
}

impl DerivedProgram {
    pub fn has_naf(&self) -> bool {
        self.rules.iter().any(Rule::has_naf)
    }
}

pub fn derive(program: &Program) -> DerivedProgram {
    derive_with_universe(program, program.universe())
}

/// As [`derive`], over a universe that may contain symbols the program does
/// not mention.
pub fn derive_with_universe(program: &Program, universe: Universe) -> DerivedProgram {
    let choices = program
        .weighted_facts()
        .iter()
        .map(|w| Rule::new([w.atom.clone(), w.atom.negate()], []));
    DerivedProgram {
        rules: choices.chain(program.all_rules().cloned()).collect(),
        universe,
        choice_atoms: program
            .weighted_facts()
            .iter()
            .map(|w| w.atom.clone())
            .collect(),
    }
}

fn check_fresh(program: &Program, fresh: &Symbol) -> Result<()> {
    if program.symbols().contains(fresh) {
        Err(Error::FreshCollision(fresh.to_string()))
    } else {
        Ok(())
    }
}

/// `w :: head :- body.` becomes `w :: fresh.` and `head :- body, fresh.`
pub fn rewrite_annotated_rule(
    program: &Program,
    head: SignedAtom,
    weight: BigRational,
    body: impl IntoIterator<Item = Literal>,
    fresh: Symbol,
) -> Result<(WeightedFact, Rule)> {
    check_fresh(program, &fresh)?;
    let guard = SignedAtom::positive(fresh);
    let fact = WeightedFact::new(guard.clone(), weight)?;
    let rule = Rule::new([head], body.into_iter().chain([Literal::pos(guard)]));
    Ok((fact, rule))
}

/// `w :: a ; b.` becomes `w :: fresh.`, `a ; b :- fresh.`, `-a :- -fresh.`
/// and `-b :- -fresh.`
pub fn rewrite_annotated_disjunction(
    program: &Program,
    a: SignedAtom,
    b: SignedAtom,
    weight: BigRational,
    fresh: Symbol,
) -> Result<(WeightedFact, Vec<Rule>)> {
    check_fresh(program, &fresh)?;
    let guard = SignedAtom::positive(fresh);
    let fact = WeightedFact::new(guard.clone(), weight)?;
    let unguard = Literal::pos(guard.negate());
    let rules = vec![
        Rule::new([a.clone(), b.clone()], [Literal::pos(guard)]),
        Rule::new([a.negate()], [unguard.clone()]),
        Rule::new([b.negate()], [unguard]),
    ];
    Ok((fact, rules))
}

/// A plain fact `a.` read as `1 :: a.`
pub fn lift_plain_fact(atom: SignedAtom) -> WeightedFact {
    WeightedFact {
        atom,
        weight: BigRational::one(),
    }
}

impl Program {
    /// Applies [`rewrite_annotated_rule`] with the next fresh symbol and adds
    /// the results. Returns the auxiliary symbol.
    pub fn add_annotated_rule(
        &mut self,
        head: SignedAtom,
        weight: BigRational,
        body: impl IntoIterator<Item = Literal>,
    ) -> Result<Symbol> {
        let fresh = self.fresh_symbol();
        let (fact, rule) = rewrite_annotated_rule(self, head, weight, body, fresh.clone())?;
        self.add_weighted_fact(fact)?;
        self.add_rule(rule);
        Ok(fresh)
    }

    pub fn add_annotated_disjunction(
        &mut self,
        a: SignedAtom,
        b: SignedAtom,
        weight: BigRational,
    ) -> Result<Symbol> {
        let fresh = self.fresh_symbol();
        let (fact, rules) = rewrite_annotated_disjunction(self, a, b, weight, fresh.clone())?;
        self.add_weighted_fact(fact)?;
        rules.into_iter().for_each(|r| self.add_rule(r));
        Ok(fresh)
    }

    /// Replaces every single-atom fact whose symbol carries no weighted fact
    /// yet by the weighted fact `1 :: a.` Returns the lifted atoms.
    pub fn lift_plain_facts(&mut self) -> Vec<SignedAtom> {
        let mut lifted = Vec::new();
        let mut i = 0;
        while i < self.facts().len() {
            let fact = &self.facts()[i];
            let liftable = fact.is_normal()
                && self
                    .weighted_facts()
                    .iter()
                    .all(|w| fact.head.iter().all(|h| h.symbol != w.atom.symbol));
            if liftable {
                let rule = self.remove_fact(i);
                let atom = rule.head.into_iter().next().expect("normal fact");
                self.add_weighted_fact(lift_plain_fact(atom.clone()))
                    .expect("symbol has no weighted fact");
                lifted.push(atom);
            } else {
                i += 1;
            }
        }
        lifted
    }

    /// The inverse of lifting for one atom: replaces `1 :: a.` by the fact `a.`
    pub fn lower_certain_fact(&mut self, atom: &SignedAtom) -> bool {
        let position = self
            .weighted_facts()
            .iter()
            .position(|w| &w.atom == atom && w.weight.is_one());
        match position {
            Some(i) => {
                let fact = self.remove_weighted_fact(i);
                self.add_rule(Rule::fact(fact.atom));
                true
            }
            None => false,
        }
    }
}
