//! Comparing a program holding `α :: 1` with the program where that weighted
//! fact becomes the plain fact `α`.

use wasp_core::{Analysis, ClassKey, Event, Options, Poly, SignedAtom, ThetaVar};

use super::{all_events, program};

pub struct Pair {
    pub weighted: Analysis,
    pub plain: Analysis,
    pub alpha: Event,
}

impl Pair {
    /// `None` when either program is rejected.
    pub fn new(text: &str) -> Option<Pair> {
        let a = program(text);
        let atom: SignedAtom = a
            .weighted_facts()
            .iter()
            .find(|w| num_traits::One::is_one(&w.weight))
            .expect("a certain fact")
            .atom
            .clone();
        let mut b = a.clone();
        assert!(b.lower_certain_fact(&atom));
        let weighted = Analysis::new(&a, &Options::default()).ok()?;
        let plain = Analysis::new(&b, &Options::default()).ok()?;
        assert_eq!(weighted.universe(), plain.universe());
        let alpha = weighted.universe().atom_event(&atom).unwrap();
        Some(Pair {
            weighted,
            plain,
            alpha,
        })
    }

    /// Rewrites `theta{s|t ∪ {α}}` as `theta{s|t}`.
    pub fn rename(&self, poly: &Poly) -> Poly {
        poly.vars().into_iter().fold(poly.clone(), |acc, v| {
            let renamed = ThetaVar::new(v.model, v.choice.difference(self.alpha));
            acc.substitute(&v, &Poly::var(renamed))
        })
    }

    pub fn same_models(&self) -> bool {
        self.weighted.models() == self.plain.models()
    }

    /// The stated theorem: equal `w_E` and `Pr_E` for every event.
    pub fn event_weights_agree(&self) -> Result<(), String> {
        let (a, b) = (&self.weighted, &self.plain);
        for e in all_events(a) {
            let wa = self.rename(&a.weight_event(e));
            let wb = b.weight_event(e);
            if wa != wb {
                return Err(format!(
                    "w_E({}) = {} vs {}",
                    a.render_event(e),
                    b.render_poly(&wa),
                    b.render_poly(&wb)
                ));
            }
            match (a.prob_event(e), b.prob_event(e)) {
                (Ok(pa), Ok(pb)) => {
                    let pa = wasp_core::RationalFn::new(
                        self.rename(pa.numerator()),
                        self.rename(pa.denominator()),
                    )
                    .unwrap();
                    if !pa.equivalent(&pb) {
                        return Err(format!(
                            "Pr_E({}) = {} vs {}",
                            a.render_event(e),
                            b.render_fn(&pa),
                            b.render_fn(&pb)
                        ));
                    }
                }
                (Err(_), Err(_)) => {}
                (pa, pb) => return Err(format!("Pr_E({}): {pa:?} vs {pb:?}", a.render_event(e))),
            }
        }
        Ok(())
    }

    /// Each event's class carries the same `w_R` in both programs.
    pub fn class_weights_agree(&self) -> Result<(), String> {
        let (a, b) = (&self.weighted, &self.plain);
        for e in all_events(a) {
            let (ka, kb) = (a.class_of(e), b.class_of(e));
            if (ka == ClassKey::Inconsistent) != (kb == ClassKey::Inconsistent) {
                return Err(format!("consistency of {}", a.render_event(e)));
            }
            let wa = self.rename(&a.weight_class(ka));
            let wb = b.weight_class(kb);
            if wa != wb {
                return Err(format!(
                    "w_R([{}]) = {} vs {}",
                    a.render_event(e),
                    b.render_poly(&wa),
                    b.render_poly(&wb)
                ));
            }
        }
        Ok(())
    }
}
