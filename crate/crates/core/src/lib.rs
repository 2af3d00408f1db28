//! Weighted answer set programs (WASP).
//!
//! A WASP is a propositional answer set program whose facts may carry a weight
//! in `[0, 1]`. This crate parses such programs, computes their stable models,
//! enumerates total choices, and propagates fact weights through stable models
//! and equivalence classes of events. The result is a distribution over *all*
//! events of the program, expressed with exact rational coefficients and
//! polynomials in the free parameters `theta` that split a total choice's
//! weight among the stable models it entails.
//!
//! The usual entry point is [`Analysis`]:
//!
//! ```
//! use wasp_core::{parse_program, Analysis, Options};
//!
//! let program = parse_program("0.3 :: a.\nb ; c :- a.").unwrap();
//! let analysis = Analysis::new(&program, &Options::default()).unwrap();
//! let event = analysis.universe().parse_event("a").unwrap();
//! assert_eq!(analysis.prob_event(event).unwrap().to_string(), "3/46");
//! ```

pub mod algebra;
pub mod analysis;
pub mod choices;
pub mod data;
pub mod error;
pub mod event;
pub mod eventspace;
pub mod propagation;
pub mod rational;
pub mod semantics;
pub mod syntax;
pub mod transform;

pub use algebra::{ConstraintSet, Poly, RationalFn, ThetaAssignment, ThetaVar};
pub use analysis::{Analysis, Options, DEFAULT_MAX_SYMBOLS};
pub use choices::ChoiceTable;
pub use data::{Dataset, Fit, Score};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use event::{Event, EventMode, Universe};
pub use eventspace::{ClassKey, ClassTable, CoreSet};
pub use propagation::WeightReport;
pub use semantics::StableModelSet;
pub use syntax::{
    format_program, parse_event, parse_program, parse_program_with, Literal, ParseOptions,
    Polarity, Program, Rule, SignedAtom, Symbol, WeightedFact,
};
pub use transform::DerivedProgram;

/// Exact rational numbers used for weights and probabilities.
pub type Rational = num_rational::BigRational;
