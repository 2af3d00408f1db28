//! Total choices: one polarity for every weighted atom.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::event::{Event, Universe};
use crate::semantics::StableModelSet;
use crate::syntax::Program;

/// Every total choice with its weight and the stable models it entails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceTable {
    choices: Vec<Event>,
    weights: Vec<BigRational>,
    models_of: Vec<Vec<usize>>,
}

impl ChoiceTable {
    pub fn new(program: &Program, universe: &Universe, models: &StableModelSet) -> Result<Self> {
        let choices = total_choices(program, universe)?;
        let weights = choices
            .iter()
            .map(|&t| weight_tc(program, universe, t))
            .collect::<Result<_>>()?;
        let models_of = choices.iter().map(|&t| models_of_tc(t, models)).collect();
        Ok(ChoiceTable {
            choices,
            weights,
            models_of,
        })
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn choices(&self) -> &[Event] {
        &self.choices
    }

    pub fn choice(&self, id: usize) -> Event {
        self.choices[id]
    }

    pub fn id_of(&self, choice: Event) -> Option<usize> {
        self.choices.iter().position(|&c| c == choice)
    }

    pub fn weight(&self, id: usize) -> &BigRational {
        &self.weights[id]
    }

    /// Model ids entailed by choice `id`, ascending.
    pub fn models_of(&self, id: usize) -> &[usize] {
        &self.models_of[id]
    }

    pub fn total_weight(&self) -> BigRational {
        self.weights.iter().sum()
    }

    /// The weight normalized over all total choices.
    pub fn prob_tc(&self, id: usize) -> BigRational {
        let total = self.total_weight();
        if total.is_zero() {
            return BigRational::zero();
        }
        &self.weights[id] / total
    }
}

/// All total choices in canonical order. The first weighted atom is the most
/// significant, and the weighted polarity precedes its negation. Without
/// weighted facts the only total choice is the empty event.
pub fn total_choices(program: &Program, universe: &Universe) -> Result<Vec<Event>> {
    let mut choices = vec![Event::EMPTY];
    for fact in program.weighted_facts() {
        let chosen = universe.atom_event(&fact.atom)?;
        let rejected = chosen.negated();
        choices = choices
            .into_iter()
            .flat_map(|t| [t.union(chosen), t.union(rejected)])
            .collect();
    }
    Ok(choices)
}

/// Product of `w` over weighted facts chosen in `t` and `1 - w` over those rejected.
pub fn weight_tc(program: &Program, universe: &Universe, t: Event) -> Result<BigRational> {
    let mut weight = BigRational::one();
    for fact in program.weighted_facts() {
        let chosen = universe.atom_event(&fact.atom)?;
        if chosen.is_subset(t) {
            weight *= &fact.weight;
        } else if chosen.negated().is_subset(t) {
            weight *= BigRational::one() - &fact.weight;
        }
    }
    Ok(weight)
}

/// Ids of the stable models containing `t`.
pub fn models_of_tc(t: Event, models: &StableModelSet) -> Vec<usize> {
    models
        .iter()
        .enumerate()
        .filter(|(_, s)| t.is_subset(*s))
        .map(|(id, _)| id)
        .collect()
}
