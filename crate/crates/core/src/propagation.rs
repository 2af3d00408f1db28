//! Weight propagation from total choices to stable models, classes and events.
//!
//! * `w_M(s, t)` is `theta{s|t}` when `s` is one of several models entailed by
//!   `t`, `1` when it is the only one, and `0` when `t` does not entail `s`.
//! * `w_R(k, t)` sums `w_M(s, t)` over the core of class `k` (zero for the
//!   inconsistent class), and `w_R(k)` averages it over total choices.
//! * `w_E(e)` spreads `w_R([e])` evenly over the events of the class.
//! * `Z` sums `w_E` over all events, and `Pr_E(e) = w_E(e) / Z`.
//!
//! Parameters are eliminated as they are introduced: the last model of each
//! group gets `1 - (sum of the others)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{ConstraintGroup, ConstraintSet, Poly, RationalFn, ThetaVar};
use crate::choices::ChoiceTable;
use crate::eventspace::{ClassKey, ClassTable};
use crate::semantics::StableModelSet;

/// One group per total choice entailing two or more stable models.
pub fn constraint_set(models: &StableModelSet, choices: &ChoiceTable) -> ConstraintSet {
    let groups = (0..choices.len())
        .filter(|&t| choices.models_of(t).len() >= 2)
        .map(|t| {
            let choice = choices.choice(t);
            ConstraintGroup {
                choice,
                vars: choices
                    .models_of(t)
                    .iter()
                    .map(|&s| ThetaVar::new(models.get(s), choice))
                    .collect(),
            }
        })
        .collect();
    ConstraintSet::new(groups)
}

/// `w_M(s, t)` with the group's last parameter already eliminated.
pub fn weight_sm(
    model: usize,
    choice: usize,
    models: &StableModelSet,
    choices: &ChoiceTable,
) -> Poly {
    let entailed = choices.models_of(choice);
    let Some(position) = entailed.iter().position(|&s| s == model) else {
        return Poly::zero();
    };
    if entailed.len() == 1 {
        return Poly::one();
    }
    let t = choices.choice(choice);
    let var = |s: usize| ThetaVar::new(models.get(s), t);
    if position + 1 < entailed.len() {
        Poly::var(var(model))
    } else {
        entailed[..position]
            .iter()
            .fold(Poly::one(), |acc, &s| &acc - &Poly::var(var(s)))
    }
}

/// Per-class and per-event weights, the normalizer and the probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightReport {
    /// `w_M(s, t)`, indexed by choice then model.
    model_weights: Vec<Vec<Poly>>,
    per_class_given_tc: BTreeMap<(ClassKey, usize), Poly>,
    per_class: BTreeMap<ClassKey, Poly>,
    per_event_given_tc: BTreeMap<(ClassKey, usize), Poly>,
    per_event: BTreeMap<ClassKey, Poly>,
    z: Poly,
    prob: Option<BTreeMap<ClassKey, RationalFn>>,
}

impl WeightReport {
    pub fn build(models: &StableModelSet, choices: &ChoiceTable, classes: &ClassTable) -> Self {
        let model_weights: Vec<Vec<Poly>> = (0..choices.len())
            .map(|t| {
                (0..models.len())
                    .map(|s| weight_sm(s, t, models, choices))
                    .collect()
            })
            .collect();

        let mut per_class_given_tc = BTreeMap::new();
        let mut per_class = BTreeMap::new();
        let mut per_event_given_tc = BTreeMap::new();
        let mut per_event = BTreeMap::new();
        let mut z = Poly::zero();
        for (key, entry) in classes.entries() {
            let mut class_total = Poly::zero();
            let mut event_total = Poly::zero();
            for (t, weights) in model_weights.iter().enumerate().take(choices.len()) {
                let given = match key {
                    ClassKey::Inconsistent => Poly::zero(),
                    ClassKey::Core(core) => {
                        core.ids().fold(Poly::zero(), |acc, s| &acc + &weights[s])
                    }
                };
                let per_event_t = if entry.size > 0 {
                    given.scale(&BigRational::new(BigInt::from(1), BigInt::from(entry.size)))
                } else {
                    Poly::zero()
                };
                let weight = choices.weight(t);
                class_total += given.scale(weight);
                event_total += per_event_t.scale(weight);
                per_class_given_tc.insert((key, t), given);
                per_event_given_tc.insert((key, t), per_event_t);
            }
            z += event_total.scale(&BigRational::from_integer(BigInt::from(entry.size)));
            per_class.insert(key, class_total);
            per_event.insert(key, event_total);
        }

        let prob = (!z.is_zero()).then(|| {
            per_event
                .iter()
                .map(|(k, w)| {
                    (
                        *k,
                        RationalFn::new(w.clone(), z.clone()).expect("nonzero Z"),
                    )
                })
                .collect()
        });
        WeightReport {
            model_weights,
            per_class_given_tc,
            per_class,
            per_event_given_tc,
            per_event,
            z,
            prob,
        }
    }

    pub fn weight_sm(&self, model: usize, choice: usize) -> &Poly {
        &self.model_weights[choice][model]
    }

    /// `w_R(k, t)`.
    pub fn class_given_tc(&self, key: ClassKey, choice: usize) -> Option<&Poly> {
        self.per_class_given_tc.get(&(key, choice))
    }

    /// `w_R(k)`.
    pub fn class_weight(&self, key: ClassKey) -> Option<&Poly> {
        self.per_class.get(&key)
    }

    /// `w_E(e, t)` for any event `e` of class `key`.
    pub fn event_given_tc(&self, key: ClassKey, choice: usize) -> Option<&Poly> {
        self.per_event_given_tc.get(&(key, choice))
    }

    /// `w_E(e)` for any event `e` of class `key`.
    pub fn event_weight(&self, key: ClassKey) -> Option<&Poly> {
        self.per_event.get(&key)
    }

    pub fn z(&self) -> &Poly {
        &self.z
    }

    /// `Pr_E(e)` for any event of class `key`; `None` when `Z` is zero.
    pub fn probability(&self, key: ClassKey) -> Option<&RationalFn> {
        self.prob.as_ref()?.get(&key)
    }

    pub fn has_probabilities(&self) -> bool {
        self.prob.is_some()
    }
}
