//! The full pipeline for one program, computed once.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;

use crate::algebra::{ConstraintSet, Poly, RationalFn, ThetaAssignment, ThetaVar};
use crate::choices::ChoiceTable;
use crate::error::{Error, Result};
use crate::event::{Event, Universe};
use crate::eventspace::{self, ClassKey, ClassTable, CoreSet};
use crate::propagation::{constraint_set, WeightReport};
use crate::semantics::{stable_models_of, StableModelSet};
use crate::syntax::Program;
use crate::transform::{derive_with_universe, DerivedProgram};

/// Default limit on the number of symbols: `3^12` consistent events.
pub const DEFAULT_MAX_SYMBOLS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub max_symbols: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_symbols: DEFAULT_MAX_SYMBOLS,
        }
    }
}

/// Stable models, total choices, classes and weights of a program.
#[derive(Clone, Debug)]
pub struct Analysis {
    program: Program,
    derived: DerivedProgram,
    models: StableModelSet,
    choices: ChoiceTable,
    constraints: ConstraintSet,
    classes: ClassTable,
    report: WeightReport,
}

impl Analysis {
    pub fn new(program: &Program, options: &Options) -> Result<Self> {
        Analysis::with_universe(program, program.universe(), options)
    }

    /// Analyses `program` over `universe`, which may name extra symbols.
    pub fn with_universe(program: &Program, universe: Universe, options: &Options) -> Result<Self> {
        if let Some(missing) = program
            .symbols()
            .into_iter()
            .find(|s| !universe.contains(s))
        {
            return Err(Error::UnknownSymbol(missing.to_string()));
        }
        let derived = derive_with_universe(program, universe);
        let models = stable_models_of(&derived, options.max_symbols)?;
        let choices = ChoiceTable::new(program, &derived.universe, &models)?;
        let constraints = constraint_set(&models, &choices);
        let classes =
            eventspace::enumerate_classes(&derived.universe, &models, options.max_symbols)?;
        let report = WeightReport::build(&models, &choices, &classes);
        Ok(Analysis {
            program: program.clone(),
            derived,
            models,
            choices,
            constraints,
            classes,
            report,
        })
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn universe(&self) -> &Universe {
        &self.derived.universe
    }

    pub fn derived(&self) -> &DerivedProgram {
        &self.derived
    }

    pub fn models(&self) -> &StableModelSet {
        &self.models
    }

    pub fn choices(&self) -> &ChoiceTable {
        &self.choices
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    pub fn classes(&self) -> &ClassTable {
        &self.classes
    }

    pub fn report(&self) -> &WeightReport {
        &self.report
    }

    /// `theta{ab|a}`: model and choice in compact notation.
    pub fn param_name(&self, var: &ThetaVar) -> String {
        let u = self.universe();
        format!(
            "theta{{{}|{}}}",
            u.render_compact(var.model),
            u.render_compact(var.choice)
        )
    }

    pub fn render_poly(&self, poly: &Poly) -> String {
        poly.render(&|v| self.param_name(v))
    }

    pub fn render_fn(&self, f: &RationalFn) -> String {
        f.render(&|v| self.param_name(v))
    }

    pub fn render_key(&self, key: ClassKey) -> String {
        eventspace::render_key(key, self.universe(), &self.models)
    }

    pub fn render_event(&self, event: Event) -> String {
        self.universe().render(event)
    }

    pub fn class_of(&self, event: Event) -> ClassKey {
        eventspace::class_key(event, &self.models)
    }

    /// The consequence class: events comparable with every stable model.
    pub fn lambda(&self) -> ClassKey {
        ClassKey::Core(CoreSet::all(self.models.len()))
    }

    pub fn weight_sm(&self, model: usize, choice: usize) -> &Poly {
        self.report.weight_sm(model, choice)
    }

    pub fn weight_class_given_tc(&self, key: ClassKey, choice: usize) -> Poly {
        self.report
            .class_given_tc(key, choice)
            .cloned()
            .unwrap_or_default()
    }

    pub fn weight_class(&self, key: ClassKey) -> Poly {
        self.report.class_weight(key).cloned().unwrap_or_default()
    }

    pub fn weight_event(&self, event: Event) -> Poly {
        self.report
            .event_weight(self.class_of(event))
            .cloned()
            .unwrap_or_default()
    }

    /// `w_E(e)` for any event `e` of class `key`.
    pub fn weight_event_class(&self, key: ClassKey) -> Poly {
        self.report.event_weight(key).cloned().unwrap_or_default()
    }

    /// `Z`; an error when it is the zero polynomial.
    pub fn normalizer(&self) -> Result<&Poly> {
        let z = self.report.z();
        if z.is_zero() {
            Err(Error::ZeroNormalizer)
        } else {
            Ok(z)
        }
    }

    pub fn prob_class_event(&self, key: ClassKey) -> Result<RationalFn> {
        self.report
            .probability(key)
            .cloned()
            .ok_or(Error::ZeroNormalizer)
    }

    pub fn prob_event(&self, event: Event) -> Result<RationalFn> {
        self.prob_class_event(self.class_of(event))
    }

    /// Probability of a set of events; duplicates count once.
    pub fn prob_event_set(&self, events: impl IntoIterator<Item = Event>) -> Result<RationalFn> {
        let z = self.normalizer()?;
        let distinct: BTreeSet<Event> = events.into_iter().collect();
        let mut counts: BTreeMap<ClassKey, u128> = BTreeMap::new();
        for e in distinct {
            *counts.entry(self.class_of(e)).or_default() += 1;
        }
        let num = counts.iter().fold(Poly::zero(), |acc, (key, &count)| {
            let weight = self.report.event_weight(*key).cloned().unwrap_or_default();
            &acc + &weight.scale(&BigRational::from_integer(count.into()))
        });
        Ok(RationalFn::new(num, z.clone()).expect("nonzero Z"))
    }

    pub fn prob_tc(&self, choice: usize) -> BigRational {
        self.choices.prob_tc(choice)
    }

    /// Maps `theta{..}` names to parameters.
    pub fn param_index(&self) -> BTreeMap<String, ThetaVar> {
        self.constraints
            .vars()
            .map(|v| (self.param_name(&v), v))
            .collect()
    }

    /// Validates parameter values given by name.
    pub fn theta_from_names(
        &self,
        values: &BTreeMap<String, BigRational>,
    ) -> Result<ThetaAssignment> {
        let index = self.param_index();
        let mut by_var = BTreeMap::new();
        for (name, value) in values {
            let var = index
                .get(name)
                .ok_or_else(|| Error::UnknownParameter(name.clone()))?;
            by_var.insert(*var, value.clone());
        }
        self.theta(by_var)
    }

    pub fn theta(&self, values: BTreeMap<ThetaVar, BigRational>) -> Result<ThetaAssignment> {
        ThetaAssignment::new(values, &self.constraints, &|v| self.param_name(v))
    }

    /// Evaluates `Pr_E` for class `key`, naming missing parameters properly.
    pub fn eval_prob(&self, key: ClassKey, theta: &ThetaAssignment) -> Result<BigRational> {
        let f = self.prob_class_event(key)?;
        let lookup = |v: &ThetaVar| theta.get(v).cloned();
        let den = f
            .denominator()
            .eval_with(lookup)
            .map_err(|v| Error::MissingVariable(self.param_name(&v)))?;
        if num_traits::Zero::is_zero(&den) {
            return Err(Error::ZeroNormalizerAt);
        }
        let num = f
            .numerator()
            .eval_with(lookup)
            .map_err(|v| Error::MissingVariable(self.param_name(&v)))?;
        Ok(num / den)
    }
}
