//! Stable models of derived programs.
//!
//! A set of atoms `x` is a stable model when it is a minimal model of the
//! reduct of the program relative to `x`. Classical negation is handled by
//! treating `-a` as an ordinary atom, so a stable model may in principle
//! contain both `a` and `-a`; such models are reported as errors.
//!
//! Candidates are restricted to subsets of the atoms occurring in rule heads:
//! intersecting any model with that set yields another model.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::event::{Event, Universe};
use crate::syntax::{Program, Rule};
use crate::transform::{derive_with_universe, DerivedProgram};

/// Rule over event bitsets: `head :- body, not naf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct CompiledRule {
    pub head: Event,
    pub body: Event,
    pub naf: Event,
}

impl CompiledRule {
    fn blocked_by(&self, x: Event) -> bool {
        self.naf.intersects(x)
    }

    /// Classical satisfaction, ignoring `naf`.
    fn satisfied_by(&self, x: Event) -> bool {
        !self.body.is_subset(x) || self.head.intersects(x)
    }
}

pub(crate) fn compile(dp: &DerivedProgram) -> Result<Vec<CompiledRule>> {
    dp.rules
        .iter()
        .map(|rule| {
            let head = dp.universe.event_of(&rule.head)?;
            let body = dp
                .universe
                .event_of(rule.body.iter().filter(|l| !l.naf).map(|l| &l.atom))?;
            let naf = dp
                .universe
                .event_of(rule.body.iter().filter(|l| l.naf).map(|l| &l.atom))?;
            Ok(CompiledRule { head, body, naf })
        })
        .collect()
}

/// The stable models of a program, in canonical order (size, then lexicographic).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StableModelSet {
    models: Vec<Event>,
    index: HashMap<Event, usize>,
}

impl StableModelSet {
    pub fn new(mut models: Vec<Event>) -> Self {
        models.sort();
        models.dedup();
        let index = models.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        StableModelSet { models, index }
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn get(&self, id: usize) -> Event {
        self.models[id]
    }

    pub fn id_of(&self, model: Event) -> Option<usize> {
        self.index.get(&model).copied()
    }

    pub fn as_slice(&self) -> &[Event] {
        &self.models
    }

    pub fn iter(&self) -> impl Iterator<Item = Event> + '_ {
        self.models.iter().copied()
    }
}

/// The Gelfond-Lifschitz reduct: rules with `not p` for some `p` in `x` are
/// deleted, and the remaining `not` literals are dropped.
pub fn reduct(dp: &DerivedProgram, x: Event) -> Result<DerivedProgram> {
    let mut rules = Vec::new();
    for rule in &dp.rules {
        let blocked = rule
            .body
            .iter()
            .filter(|l| l.naf)
            .map(|l| dp.universe.atom_event(&l.atom))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .any(|e| e.is_subset(x));
        if !blocked {
            let body = rule.body.iter().filter(|l| !l.naf).cloned();
            rules.push(Rule::new(rule.head.iter().cloned(), body));
        }
    }
    Ok(DerivedProgram {
        rules,
        universe: dp.universe.clone(),
        choice_atoms: dp.choice_atoms.clone(),
    })
}

/// Whether `x` satisfies every rule of a program free of default negation.
pub fn is_model(naf_free: &DerivedProgram, x: Event) -> Result<bool> {
    if naf_free.has_naf() {
        return Err(Error::NotNafFree);
    }
    Ok(compile(naf_free)?.iter().all(|r| r.satisfied_by(x)))
}

fn check_cap(universe: &Universe, max_symbols: usize) -> Result<()> {
    if universe.len() > max_symbols {
        return Err(Error::CapExceeded {
            found: universe.len(),
            cap: max_symbols,
        });
    }
    Ok(())
}

fn head_atoms(rules: &[CompiledRule]) -> Event {
    rules.iter().fold(Event::EMPTY, |acc, r| acc.union(r.head))
}

/// All subset-minimal models, by increasing size then canonical order.
pub fn minimal_models(naf_free: &DerivedProgram, max_symbols: usize) -> Result<Vec<Event>> {
    if naf_free.has_naf() {
        return Err(Error::NotNafFree);
    }
    check_cap(&naf_free.universe, max_symbols)?;
    let rules = compile(naf_free)?;
    let positions: Vec<u32> = bit_positions(head_atoms(&rules).bits());
    let m = positions.len();
    if m > 63 {
        return Err(Error::CapExceeded { found: m, cap: 63 });
    }
    let mut accepted: Vec<Event> = Vec::new();
    for k in 0..=m {
        let mut level = Vec::new();
        for_each_k_subset(m, k, |combo| {
            let x = Event::from_bits(scatter(combo, &positions));
            if accepted.iter().any(|a| a.is_subset(x)) {
                return;
            }
            if rules.iter().all(|r| r.satisfied_by(x)) {
                level.push(x);
            }
        });
        accepted.extend(level);
    }
    accepted.sort();
    Ok(accepted)
}

fn bit_positions(mut bits: u128) -> Vec<u32> {
    let mut positions = Vec::new();
    while bits != 0 {
        positions.push(bits.trailing_zeros());
        bits &= bits - 1;
    }
    positions
}

fn scatter(mut combo: u64, positions: &[u32]) -> u128 {
    let mut bits = 0u128;
    while combo != 0 {
        let i = combo.trailing_zeros() as usize;
        bits |= 1u128 << positions[i];
        combo &= combo - 1;
    }
    bits
}

/// Visits every `k`-subset of `0..m` as a bitmask (Gosper's hack).
fn for_each_k_subset(m: usize, k: usize, mut visit: impl FnMut(u64)) {
    if k == 0 {
        visit(0);
        return;
    }
    let limit = 1u64 << m;
    let mut combo = (1u64 << k) - 1;
    while combo < limit {
        visit(combo);
        let lowest = combo & combo.wrapping_neg();
        let ripple = combo + lowest;
        combo = (((ripple ^ combo) >> 2) / lowest) | ripple;
    }
}

/// Stable models of `program` over its own universe.
pub fn stable_models(program: &Program, max_symbols: usize) -> Result<StableModelSet> {
    stable_models_of(
        &derive_with_universe(program, program.universe()),
        max_symbols,
    )
}

/// Stable models of a derived program.
pub fn stable_models_of(dp: &DerivedProgram, max_symbols: usize) -> Result<StableModelSet> {
    check_cap(&dp.universe, max_symbols)?;
    let rules = compile(dp)?;
    let heads = head_atoms(&rules).bits();
    let mut models = Vec::new();
    let mut candidate = heads;
    loop {
        let x = Event::from_bits(candidate);
        if is_stable(&rules, x) {
            models.push(x);
        }
        if candidate == 0 {
            break;
        }
        candidate = (candidate - 1) & heads;
    }
    let models = StableModelSet::new(models);
    if let Some(bad) = models.iter().find(|m| !m.is_consistent()) {
        return Err(Error::InconsistentModel(dp.universe.render_compact(bad)));
    }
    Ok(models)
}

/// Whether `x` is a minimal model of the reduct of `rules` relative to `x`.
pub(crate) fn is_stable(rules: &[CompiledRule], x: Event) -> bool {
    let reduct: Vec<&CompiledRule> = rules.iter().filter(|r| !r.blocked_by(x)).collect();
    if !reduct.iter().all(|r| r.satisfied_by(x)) {
        return false;
    }
    !has_smaller_model(&reduct, x)
}

/// Searches for a model `y` of the naf-free `rules` with `y` a proper subset of `x`.
fn has_smaller_model(rules: &[&CompiledRule], x: Event) -> bool {
    let vars = x.bits();
    if vars == 0 {
        return false;
    }
    // Atoms outside x are false, so only rules whose body lies inside x constrain y.
    let mut clauses: Vec<Clause> = rules
        .iter()
        .filter(|r| r.body.is_subset(x))
        .map(|r| Clause {
            neg: r.body.bits(),
            pos: r.head.bits() & vars,
        })
        .filter(|c| c.neg & c.pos == 0)
        .collect();
    // y must drop at least one atom of x.
    clauses.push(Clause { neg: vars, pos: 0 });
    dpll(&clauses, 0, 0, vars)
}

#[derive(Clone, Copy, Debug)]
struct Clause {
    neg: u128,
    pos: u128,
}

fn dpll(clauses: &[Clause], mut t: u128, mut f: u128, vars: u128) -> bool {
    loop {
        let mut changed = false;
        for c in clauses {
            if c.neg & f != 0 || c.pos & t != 0 {
                continue;
            }
            let open_neg = c.neg & !t;
            let open_pos = c.pos & !f;
            match (open_neg | open_pos).count_ones() {
                0 => return false,
                1 => {
                    f |= open_neg;
                    t |= open_pos;
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let unassigned = vars & !(t | f);
    if unassigned == 0 {
        return true;
    }
    let v = unassigned & unassigned.wrapping_neg();
    dpll(clauses, t, f | v, vars) || dpll(clauses, t | v, f, vars)
}
