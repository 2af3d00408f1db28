//! A literal, slow reading of the definitions, sharing nothing with the
//! library beyond the parsed syntax tree. Events are sets of
//! `(symbol index, positive)` pairs; parameters are concrete numbers.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use wasp_core::{Analysis, Event, Polarity, Program, SignedAtom, ThetaAssignment};

pub type Lit = (usize, bool);
pub type Set = BTreeSet<Lit>;

struct Rule {
    head: Vec<Lit>,
    pos: Vec<Lit>,
    naf: Vec<Lit>,
}

pub struct Oracle {
    pub names: Vec<String>,
    rules: Vec<Rule>,
    weighted: Vec<(Lit, BigRational)>,
    /// Stable models, or `None` when one of them is inconsistent.
    pub models: Option<Vec<Set>>,
}

/// Parameter values keyed by (model, total choice).
pub type Theta = BTreeMap<(Set, Set), BigRational>;

pub struct Evaluation {
    pub z: BigRational,
    /// `(event, w_E, Pr_E)` for all events; `Pr_E` is `None` when `Z = 0`.
    pub events: Vec<(Set, BigRational, Option<BigRational>)>,
    /// `w_R` per class; `None` is the inconsistent class.
    pub class_weights: BTreeMap<Option<BTreeSet<usize>>, BigRational>,
    pub class_sizes: BTreeMap<Option<BTreeSet<usize>>, u64>,
}

fn subsets(items: &[Lit]) -> impl Iterator<Item = Set> + '_ {
    (0u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, l)| *l)
            .collect()
    })
}

pub fn consistent(e: &Set) -> bool {
    !e.iter().any(|&(i, p)| p && e.contains(&(i, false)))
}

fn negate(l: Lit) -> Lit {
    (l.0, !l.1)
}

impl Oracle {
    pub fn new(program: &Program) -> Self {
        let names: Vec<String> = program
            .symbols()
            .iter()
            .map(|s| s.as_str().to_string())
            .collect();
        let lit = |a: &SignedAtom| -> Lit {
            let i = names.iter().position(|n| n == a.symbol.as_str()).unwrap();
            (i, a.polarity == Polarity::Positive)
        };
        let mut rules = Vec::new();
        let mut weighted = Vec::new();
        for w in program.weighted_facts() {
            let l = lit(&w.atom);
            weighted.push((l, w.weight.clone()));
            rules.push(Rule {
                head: vec![l, negate(l)],
                pos: vec![],
                naf: vec![],
            });
        }
        for r in program.facts().iter().chain(program.rules()) {
            rules.push(Rule {
                head: r.head.iter().map(lit).collect(),
                pos: r
                    .body
                    .iter()
                    .filter(|b| !b.naf)
                    .map(|b| lit(&b.atom))
                    .collect(),
                naf: r
                    .body
                    .iter()
                    .filter(|b| b.naf)
                    .map(|b| lit(&b.atom))
                    .collect(),
            });
        }
        let mut oracle = Oracle {
            names,
            rules,
            weighted,
            models: None,
        };
        oracle.models = oracle.compute_models();
        oracle
    }

    pub fn literals(&self) -> Vec<Lit> {
        (0..self.names.len())
            .flat_map(|i| [(i, true), (i, false)])
            .collect()
    }

    /// Every set of literals, consistent or not.
    pub fn events(&self) -> Vec<Set> {
        subsets(&self.literals()).collect()
    }

    fn is_model_of_reduct(&self, x: &Set, y: &Set) -> bool {
        self.rules
            .iter()
            .filter(|r| r.naf.iter().all(|l| !x.contains(l)))
            .all(|r| !r.pos.iter().all(|l| y.contains(l)) || r.head.iter().any(|l| y.contains(l)))
    }

    fn compute_models(&self) -> Option<Vec<Set>> {
        let mut models = Vec::new();
        for x in self.events() {
            if !self.is_model_of_reduct(&x, &x) {
                continue;
            }
            let items: Vec<Lit> = x.iter().copied().collect();
            let minimal = subsets(&items)
                .filter(|y| y.len() < x.len())
                .all(|y| !self.is_model_of_reduct(&x, &y));
            if minimal {
                models.push(x);
            }
        }
        if models.iter().any(|m| !consistent(m)) {
            return None;
        }
        Some(models)
    }

    pub fn total_choices(&self) -> Vec<(Set, BigRational)> {
        let mut out = vec![(Set::new(), BigRational::one())];
        for (l, w) in &self.weighted {
            out = out
                .into_iter()
                .flat_map(|(t, tw)| {
                    let mut yes = t.clone();
                    yes.insert(*l);
                    let mut no = t;
                    no.insert(negate(*l));
                    [(yes, &tw * w), (no, &tw * (BigRational::one() - w))]
                })
                .collect();
        }
        out
    }

    fn entailed<'a>(models: &'a [Set], t: &Set) -> Vec<&'a Set> {
        models.iter().filter(|s| t.is_subset(s)).collect()
    }

    /// Random parameters: positive integer shares, normalized per choice.
    pub fn random_theta(&self, rng: &mut impl Rng) -> Theta {
        let models = self.models.as_ref().expect("consistent models");
        let mut theta = Theta::new();
        for (t, _) in self.total_choices() {
            let ent = Self::entailed(models, &t);
            if ent.len() < 2 {
                continue;
            }
            let shares: Vec<i64> = ent.iter().map(|_| rng.random_range(0..=6)).collect();
            let total: i64 = shares.iter().sum();
            for (s, share) in ent.iter().zip(&shares) {
                let value = if total == 0 {
                    BigRational::new(1.into(), (ent.len() as i64).into())
                } else {
                    BigRational::new((*share).into(), total.into())
                };
                theta.insert(((*s).clone(), t.clone()), value);
            }
        }
        theta
    }

    pub fn evaluate(&self, theta: &Theta) -> Evaluation {
        let models = self.models.as_ref().expect("consistent models");
        let choices = self.total_choices();
        let weight_sm = |s: &Set, t: &Set| -> BigRational {
            let ent = Self::entailed(models, t);
            if !t.is_subset(s) {
                BigRational::zero()
            } else if ent.len() == 1 {
                BigRational::one()
            } else {
                theta[&(s.clone(), t.clone())].clone()
            }
        };
        let class_of = |e: &Set| -> Option<BTreeSet<usize>> {
            consistent(e).then(|| {
                models
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.is_subset(e) || e.is_subset(s))
                    .map(|(i, _)| i)
                    .collect()
            })
        };
        let events = self.events();
        let mut class_sizes: BTreeMap<Option<BTreeSet<usize>>, u64> = BTreeMap::new();
        for e in &events {
            *class_sizes.entry(class_of(e)).or_default() += 1;
        }
        let class_weight = |k: &Option<BTreeSet<usize>>| -> BigRational {
            match k {
                None => BigRational::zero(),
                Some(core) => choices
                    .iter()
                    .map(|(t, w)| {
                        w * core
                            .iter()
                            .map(|&s| weight_sm(&models[s], t))
                            .sum::<BigRational>()
                    })
                    .sum(),
            }
        };
        let class_weights: BTreeMap<_, _> = class_sizes
            .keys()
            .map(|k| (k.clone(), class_weight(k)))
            .collect();
        let weights: Vec<(Set, BigRational)> = events
            .into_iter()
            .map(|e| {
                let k = class_of(&e);
                let w = &class_weights[&k] / BigRational::from_integer(class_sizes[&k].into());
                (e, w)
            })
            .collect();
        let z: BigRational = weights.iter().map(|(_, w)| w).sum();
        let events = weights
            .into_iter()
            .map(|(e, w)| {
                let p = (!z.is_zero()).then(|| &w / &z);
                (e, w, p)
            })
            .collect();
        Evaluation {
            z,
            events,
            class_weights,
            class_sizes,
        }
    }

    pub fn render(&self, e: &Set) -> String {
        // Positive atoms first, matching the library's canonical rendering.
        let mut parts: Vec<String> = e
            .iter()
            .filter(|l| l.1)
            .map(|l| self.names[l.0].clone())
            .collect();
        parts.extend(
            e.iter()
                .filter(|l| !l.1)
                .map(|l| format!("-{}", self.names[l.0])),
        );
        parts.join(" ")
    }

    pub fn to_event(&self, analysis: &Analysis, e: &Set) -> Event {
        analysis.universe().parse_event(&self.render(e)).unwrap()
    }

    pub fn set_of(&self, analysis: &Analysis, e: Event) -> Set {
        analysis
            .universe()
            .atoms_of(e)
            .into_iter()
            .map(|a| {
                let i = self
                    .names
                    .iter()
                    .position(|n| n == a.symbol.as_str())
                    .unwrap();
                (i, a.polarity == Polarity::Positive)
            })
            .collect()
    }

    /// The oracle's parameters as a library assignment.
    pub fn to_assignment(
        &self,
        analysis: &Analysis,
        theta: &Theta,
    ) -> Result<ThetaAssignment, String> {
        let mut values = BTreeMap::new();
        for var in analysis.constraints().vars() {
            let key = (
                self.set_of(analysis, var.model),
                self.set_of(analysis, var.choice),
            );
            let value = theta.get(&key).ok_or_else(|| {
                format!(
                    "library parameter {} unknown to the oracle",
                    analysis.param_name(&var)
                )
            })?;
            values.insert(var, value.clone());
        }
        if values.len() != theta.len() {
            return Err(format!(
                "{} library parameters, {} oracle parameters",
                values.len(),
                theta.len()
            ));
        }
        analysis.theta(values).map_err(|e| e.to_string())
    }
}

/// Compares the library against the oracle on one program at random
/// parameters. `Ok(false)` means both sides agree the program is rejected.
pub fn compare(text: &str, rng: &mut impl Rng) -> Result<bool, String> {
    let program = super::program(text);
    let oracle = Oracle::new(&program);
    let analysis = Analysis::new(&program, &wasp_core::Options::default());
    let (analysis, models) = match (analysis, &oracle.models) {
        (Err(wasp_core::Error::InconsistentModel(_)), None) => return Ok(false),
        (Ok(a), Some(m)) => (a, m),
        (Ok(_), None) => {
            return Err("library accepted a program with an inconsistent stable model".into())
        }
        (Err(e), _) => return Err(format!("library failed: {e}")),
    };

    let lib_models: BTreeSet<Set> = analysis
        .models()
        .iter()
        .map(|m| oracle.set_of(&analysis, m))
        .collect();
    let want: BTreeSet<Set> = models.iter().cloned().collect();
    if lib_models != want {
        return Err(format!("stable models differ: {lib_models:?} vs {want:?}"));
    }

    let choices = oracle.total_choices();
    if choices.len() != analysis.choices().len() {
        return Err("total choice counts differ".into());
    }
    for (t, w) in &choices {
        let id = analysis
            .choices()
            .id_of(oracle.to_event(&analysis, t))
            .ok_or_else(|| format!("missing total choice {}", oracle.render(t)))?;
        if analysis.choices().weight(id) != w {
            return Err(format!("weight of total choice {}", oracle.render(t)));
        }
    }

    let theta = oracle.random_theta(rng);
    let assignment = oracle.to_assignment(&analysis, &theta)?;
    let eval = oracle.evaluate(&theta);

    let z = analysis
        .report()
        .z()
        .eval(&assignment)
        .map_err(|e| e.to_string())?;
    if z != eval.z {
        return Err(format!("Z: library {z}, oracle {}", eval.z));
    }
    for (key, entry) in analysis.classes().entries() {
        let core = key.core().map(|c| {
            c.ids()
                .map(|i| {
                    let m = oracle.set_of(&analysis, analysis.models().get(i));
                    models.iter().position(|s| *s == m).unwrap()
                })
                .collect::<BTreeSet<usize>>()
        });
        let size = eval.class_sizes.get(&core).copied().unwrap_or(0);
        if entry.size != size as u128 {
            return Err(format!(
                "size of class {}: {} vs {size}",
                analysis.render_key(key),
                entry.size
            ));
        }
        let w = analysis
            .weight_class(key)
            .eval(&assignment)
            .map_err(|e| e.to_string())?;
        if size > 0 && w != eval.class_weights[&core] {
            return Err(format!("w_R of class {}", analysis.render_key(key)));
        }
    }
    for (e, w, p) in &eval.events {
        let event = oracle.to_event(&analysis, e);
        let lw = analysis
            .weight_event(event)
            .eval(&assignment)
            .map_err(|e| e.to_string())?;
        if lw != *w {
            return Err(format!(
                "w_E({}): library {lw}, oracle {w}",
                oracle.render(e)
            ));
        }
        match (p, analysis.eval_prob(analysis.class_of(event), &assignment)) {
            (Some(p), Ok(lp)) if lp == *p => {}
            (None, Err(wasp_core::Error::ZeroNormalizer | wasp_core::Error::ZeroNormalizerAt)) => {}
            (p, lp) => {
                return Err(format!(
                    "Pr_E({}): library {lp:?}, oracle {p:?}",
                    oracle.render(e)
                ));
            }
        }
    }
    Ok(true)
}
