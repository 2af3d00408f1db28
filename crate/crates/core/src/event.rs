//! Events over a fixed universe of symbols.
//!
//! An [`Event`] is any set of signed atoms. It doubles as interpretation,
//! total choice and stable model. Events are bitsets relative to a
//! [`Universe`]: bit `i` is the positive atom of symbol `i`, bit `64 + i` its
//! classical negation. Symbols are indexed in name order, so the bit order of
//! an event agrees with the alphabetical order of its atoms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{Polarity, SignedAtom, Symbol};

/// Hard limit imposed by the bitset representation.
pub const MAX_UNIVERSE: usize = 64;

const LOW: u128 = u64::MAX as u128;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Event {
    bits: u128,
}

impl Event {
    pub const EMPTY: Event = Event { bits: 0 };

    pub fn from_masks(positive: u64, negative: u64) -> Self {
        Event {
            bits: positive as u128 | (negative as u128) << 64,
        }
    }

    pub(crate) fn from_bits(bits: u128) -> Self {
        Event { bits }
    }

    pub(crate) fn bits(self) -> u128 {
        self.bits
    }

    pub fn positive_mask(self) -> u64 {
        (self.bits & LOW) as u64
    }

    pub fn negative_mask(self) -> u64 {
        (self.bits >> 64) as u64
    }

    /// The single-atom event for symbol index `symbol` with the given polarity.
    pub fn atom(symbol: usize, polarity: Polarity) -> Self {
        debug_assert!(symbol < MAX_UNIVERSE);
        let shift = match polarity {
            Polarity::Positive => symbol,
            Polarity::Negative => symbol + 64,
        };
        Event { bits: 1 << shift }
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_consistent(self) -> bool {
        self.positive_mask() & self.negative_mask() == 0
    }

    pub fn is_subset(self, other: Event) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn intersects(self, other: Event) -> bool {
        self.bits & other.bits != 0
    }

    pub fn union(self, other: Event) -> Event {
        Event {
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(self, other: Event) -> Event {
        Event {
            bits: self.bits & other.bits,
        }
    }

    pub fn difference(self, other: Event) -> Event {
        Event {
            bits: self.bits & !other.bits,
        }
    }

    /// Swaps the polarity of every atom.
    pub fn negated(self) -> Event {
        Event {
            bits: self.bits.rotate_left(64),
        }
    }

    pub fn contains(self, symbol: usize, polarity: Polarity) -> bool {
        self.intersects(Event::atom(symbol, polarity))
    }

    /// Atoms in canonical order: positives by symbol, then negatives by symbol.
    pub fn atoms(self) -> impl Iterator<Item = (usize, Polarity)> {
        let positives = BitIter(self.positive_mask()).map(|i| (i, Polarity::Positive));
        let negatives = BitIter(self.negative_mask()).map(|i| (i, Polarity::Negative));
        positives.chain(negatives)
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Canonical order: by size, then lexicographically on the atom sequence.
impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.atoms().cmp(other.atoms()))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut set = f.debug_set();
        for (i, polarity) in self.atoms() {
            match polarity {
                Polarity::Positive => set.entry(&format_args!("{i}")),
                Polarity::Negative => set.entry(&format_args!("-{i}")),
            };
        }
        set.finish()
    }
}

/// How [`Universe::parse_event`]-style readers treat unknown symbols.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EventMode {
    #[default]
    Strict,
    /// Unknown symbols are added to the universe.
    Extend,
}

/// The symbols of a program, in name order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Universe {
    symbols: Vec<Symbol>,
    index: BTreeMap<Symbol, usize>,
}

impl Universe {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Self {
        let mut universe = Universe::default();
        universe.extend(symbols);
        universe
    }

    /// Adds symbols. Indices are reassigned, so events built against the
    /// universe before the call must not be reused.
    pub fn extend(&mut self, symbols: impl IntoIterator<Item = Symbol>) {
        let mut all: Vec<Symbol> = std::mem::take(&mut self.symbols);
        all.extend(symbols);
        all.sort();
        all.dedup();
        self.index = all
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        self.symbols = all;
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &Symbol {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &Symbol) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.index.contains_key(symbol)
    }

    /// The event with every atom of both polarities.
    pub fn full(&self) -> Event {
        let mask = if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        };
        Event::from_masks(mask, mask)
    }

    pub fn atom_event(&self, atom: &SignedAtom) -> Result<Event> {
        let index = self
            .index_of(&atom.symbol)
            .ok_or_else(|| Error::UnknownSymbol(atom.symbol.to_string()))?;
        Ok(Event::atom(index, atom.polarity))
    }

    pub fn event_of<'a>(&self, atoms: impl IntoIterator<Item = &'a SignedAtom>) -> Result<Event> {
        atoms.into_iter().try_fold(Event::EMPTY, |acc, atom| {
            Ok(acc.union(self.atom_event(atom)?))
        })
    }

    pub fn atoms_of(&self, event: Event) -> Vec<SignedAtom> {
        event
            .atoms()
            .map(|(i, polarity)| SignedAtom::new(self.symbols[i].clone(), polarity))
            .collect()
    }

    /// Parses whitespace-separated atom tokens (`a -b`) against this universe.
    /// The empty string and `{}` both denote the empty event.
    pub fn parse_event(&self, text: &str) -> Result<Event> {
        let mut event = Event::EMPTY;
        for token in event_tokens(text) {
            let atom = parse_token(token)?;
            event = event.union(self.atom_event(&atom)?);
        }
        Ok(event)
    }

    /// Adds every symbol named in `text` that is not yet known.
    pub fn extend_from_event(&mut self, text: &str) -> Result<()> {
        let atoms = event_tokens(text)
            .map(parse_token)
            .collect::<Result<Vec<_>>>()?;
        let unknown: Vec<Symbol> = atoms
            .into_iter()
            .filter(|a| !self.contains(&a.symbol))
            .map(|a| a.symbol)
            .collect();
        if !unknown.is_empty() {
            self.extend(unknown);
        }
        Ok(())
    }

    /// Whitespace-separated tokens, as accepted by [`Universe::parse_event`].
    /// The empty event renders as the empty string.
    pub fn render(&self, event: Event) -> String {
        self.atoms_of(event)
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Short notation: atoms juxtaposed (`b-a`) when every symbol is a single
    /// character, space-separated otherwise; `λ` for the empty event.
    pub fn render_compact(&self, event: Event) -> String {
        if event.is_empty() {
            return "λ".to_string();
        }
        let separator = if self.symbols.iter().all(|s| s.as_str().chars().count() == 1) {
            ""
        } else {
            " "
        };
        self.atoms_of(event)
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(separator)
    }

    /// Like [`Universe::render`], but drops auxiliary atoms introduced by rewrites.
    pub fn render_visible(&self, event: Event) -> String {
        self.render(self.strip_reserved(event))
    }

    pub fn strip_reserved(&self, event: Event) -> Event {
        let mut visible = 0u64;
        for (i, symbol) in self.symbols.iter().enumerate() {
            if !symbol.is_reserved() {
                visible |= 1 << i;
            }
        }
        event.intersection(Event::from_masks(visible, visible))
    }
}

fn event_tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace().filter(|t| *t != "{}")
}

fn parse_token(token: &str) -> Result<SignedAtom> {
    let (polarity, name) = match token.strip_prefix('-') {
        Some(rest) => (Polarity::Negative, rest),
        None => (Polarity::Positive, token),
    };
    let symbol = Symbol::new_any(name).map_err(|_| Error::MalformedToken(token.to_string()))?;
    Ok(SignedAtom::new(symbol, polarity))
}

/// Iterates every consistent event over `n` symbols (`3^n` of them).
pub(crate) fn for_each_consistent(n: usize, mut visit: impl FnMut(Event)) {
    let all: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut positive = 0u64;
    loop {
        let free = all & !positive;
        let mut negative = 0u64;
        loop {
            visit(Event::from_masks(positive, negative));
            if negative == free {
                break;
            }
            negative = negative.wrapping_sub(free) & free;
        }
        if positive == all {
            break;
        }
        positive = positive.wrapping_sub(all) & all;
    }
}
