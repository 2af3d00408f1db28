//! Equivalence classes of events.
//!
//! The stable core of a consistent event `e` is the set of stable models `s`
//! with `s ⊆ e` or `e ⊆ s`. Two consistent events are equivalent when their
//! stable cores coincide; all inconsistent events form one extra class.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::event::{for_each_consistent, Event, Universe};
use crate::semantics::StableModelSet;

/// Limit on stable models for building the full core lattice (`2^m` classes).
pub const MAX_CLASS_MODELS: usize = 20;

/// A set of stable-model ids.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CoreSet(u64);

impl CoreSet {
    pub const EMPTY: CoreSet = CoreSet(0);

    pub fn all(models: usize) -> Self {
        CoreSet(if models == 64 {
            u64::MAX
        } else {
            (1 << models) - 1
        })
    }

    pub fn from_ids(ids: impl IntoIterator<Item = usize>) -> Self {
        CoreSet(ids.into_iter().fold(0, |acc, id| acc | 1 << id))
    }

    pub(crate) fn from_mask(mask: u64) -> Self {
        CoreSet(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, id: usize) -> bool {
        self.0 >> id & 1 == 1
    }

    pub fn is_subset(self, other: CoreSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn with(self, id: usize) -> CoreSet {
        CoreSet(self.0 | 1 << id)
    }

    pub fn ids(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }
}

/// By size, then lexicographically on the ids.
impl Ord for CoreSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.ids().cmp(other.ids()))
    }
}

impl PartialOrd for CoreSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CoreSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ids()).finish()
    }
}

/// Identifies an equivalence class of events.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKey {
    /// All inconsistent events.
    Inconsistent,
    /// Consistent events with this stable core. The empty core collects the
    /// independent events; the full core is the consequence class.
    Core(CoreSet),
}

impl ClassKey {
    pub fn core(self) -> Option<CoreSet> {
        match self {
            ClassKey::Inconsistent => None,
            ClassKey::Core(c) => Some(c),
        }
    }
}

pub fn is_consistent(event: Event) -> bool {
    event.is_consistent()
}

fn core_of(event: Event, models: &StableModelSet) -> CoreSet {
    CoreSet::from_ids(
        models
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_subset(event) || event.is_subset(*s))
            .map(|(id, _)| id),
    )
}

/// The stable models comparable with `event` under inclusion.
pub fn stable_core(event: Event, models: &StableModelSet, universe: &Universe) -> Result<CoreSet> {
    if !event.is_consistent() {
        return Err(Error::InconsistentEvent(universe.render_compact(event)));
    }
    Ok(core_of(event, models))
}

pub fn class_key(event: Event, models: &StableModelSet) -> ClassKey {
    if event.is_consistent() {
        ClassKey::Core(core_of(event, models))
    } else {
        ClassKey::Inconsistent
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    /// Number of events in the class.
    pub size: u128,
    /// The canonically smallest member, if the class is not empty.
    pub sample: Option<Event>,
}

/// Every class with its size: the inconsistent class and one entry per subset
/// of the stable models, including cores no event realizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTable {
    entries: BTreeMap<ClassKey, ClassEntry>,
    symbols: usize,
    models: usize,
}

impl ClassTable {
    pub fn entries(&self) -> impl Iterator<Item = (ClassKey, &ClassEntry)> {
        self.entries.iter().map(|(k, e)| (*k, e))
    }

    pub fn get(&self, key: ClassKey) -> Option<&ClassEntry> {
        self.entries.get(&key)
    }

    pub fn size(&self, key: ClassKey) -> u128 {
        self.entries.get(&key).map_or(0, |e| e.size)
    }

    pub fn keys(&self) -> impl Iterator<Item = ClassKey> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_size(&self) -> u128 {
        self.entries.values().map(|e| e.size).sum()
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn model_count(&self) -> usize {
        self.models
    }

    /// Classes containing at least one event.
    pub fn nonempty(&self) -> impl Iterator<Item = ClassKey> + '_ {
        self.entries
            .iter()
            .filter(|(_, e)| e.size > 0)
            .map(|(k, _)| *k)
    }
}

/// Counts every class by enumerating the `3^n` consistent events; the
/// inconsistent class has `4^n - 3^n` members.
pub fn enumerate_classes(
    universe: &Universe,
    models: &StableModelSet,
    max_symbols: usize,
) -> Result<ClassTable> {
    let n = universe.len();
    if n > max_symbols {
        return Err(Error::CapExceeded {
            found: n,
            cap: max_symbols,
        });
    }
    let m = models.len();
    if m > MAX_CLASS_MODELS {
        return Err(Error::TooManyModels {
            found: m,
            limit: MAX_CLASS_MODELS,
        });
    }
    // Counting by mask keeps the hot loop free of map lookups.
    let mut sizes = vec![0u128; 1 << m];
    let mut samples: Vec<Option<Event>> = vec![None; 1 << m];
    for_each_consistent(n, |e| {
        let core = core_of(e, models).mask() as usize;
        sizes[core] += 1;
        match samples[core] {
            Some(s) if s <= e => {}
            _ => samples[core] = Some(e),
        }
    });
    let mut entries: BTreeMap<ClassKey, ClassEntry> = sizes
        .into_iter()
        .zip(samples)
        .enumerate()
        .map(|(mask, (size, sample))| {
            (
                ClassKey::Core(CoreSet::from_mask(mask as u64)),
                ClassEntry { size, sample },
            )
        })
        .collect();
    let inconsistent = 4u128.pow(n as u32) - 3u128.pow(n as u32);
    entries.insert(
        ClassKey::Inconsistent,
        ClassEntry {
            size: inconsistent,
            sample: (n > 0).then(|| Event::from_masks(1, 1)),
        },
    );
    Ok(ClassTable {
        entries,
        symbols: n,
        models: m,
    })
}

/// All events of the class `key`, in canonical order.
pub fn members(key: ClassKey, universe: &Universe, models: &StableModelSet) -> Vec<Event> {
    let mut events = Vec::new();
    match key {
        ClassKey::Inconsistent => {
            let full = universe.full().bits();
            let mut sub = full;
            loop {
                let e = Event::from_bits(sub);
                if !e.is_consistent() {
                    events.push(e);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & full;
            }
        }
        ClassKey::Core(core) => for_each_consistent(universe.len(), |e| {
            if core_of(e, models) == core {
                events.push(e);
            }
        }),
    }
    events.sort();
    events
}

/// `{-a, ab, ac}`, with models in compact notation.
pub fn render_core(core: CoreSet, universe: &Universe, models: &StableModelSet) -> String {
    let parts: Vec<String> = core
        .ids()
        .map(|id| universe.render_compact(models.get(id)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// `bot` for the inconsistent class, the core otherwise.
pub fn render_key(key: ClassKey, universe: &Universe, models: &StableModelSet) -> String {
    match key {
        ClassKey::Inconsistent => "bot".to_string(),
        ClassKey::Core(core) => render_core(core, universe, models),
    }
}

/// `⊥`, `◇` or `Λ` for the distinguished classes.
pub fn class_label(key: ClassKey, models: &StableModelSet) -> &'static str {
    match key {
        ClassKey::Inconsistent => "⊥",
        ClassKey::Core(c) if c.is_empty() => "◇",
        ClassKey::Core(c) if c == CoreSet::all(models.len()) => "Λ",
        ClassKey::Core(_) => "",
    }
}
