//! Shared helpers for the integration tests: a brute-force reference
//! implementation and a random program generator.
#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use num_rational::BigRational;
use wasp_core::{parse_program, Analysis, Options, Program};

pub const P1: &str = "0.3 :: a.\nb ; c :- a.";
pub const SINGLE: &str = "0.3 :: a.\nb :- a, not b.";

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn program(text: &str) -> Program {
    parse_program(text).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

pub fn analyse(text: &str) -> Analysis {
    Analysis::new(&program(text), &Options::default()).unwrap()
}

pub mod certain;

use rand::Rng;
use std::collections::BTreeMap;
use wasp_core::{Event, ThetaAssignment};

/// Every event over the analysis universe, consistent or not.
pub fn all_events(analysis: &Analysis) -> Vec<Event> {
    let n = analysis.universe().len();
    let mut out = Vec::new();
    for p in 0u64..1 << n {
        for m in 0u64..1 << n {
            out.push(Event::from_masks(p, m));
        }
    }
    out
}

/// Random parameters on the simplex of every group.
pub fn random_assignment(analysis: &Analysis, rng: &mut impl Rng) -> ThetaAssignment {
    let mut values = BTreeMap::new();
    for g in analysis.constraints().groups() {
        let shares: Vec<i64> = g.vars.iter().map(|_| rng.random_range(1..=9)).collect();
        let total: i64 = shares.iter().sum();
        for (v, s) in g.vars.iter().zip(shares) {
            values.insert(*v, q(s, total));
        }
    }
    analysis.theta(values).unwrap()
}
