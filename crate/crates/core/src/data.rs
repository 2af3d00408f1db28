//! Observed events: loading, scoring, parameter fitting and sampling.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Poly, ThetaAssignment, ThetaVar};
use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::event::{for_each_consistent, Event, EventMode, Universe};
use crate::eventspace::ClassKey;
use crate::rational;

/// Largest parameter grid [`fit_theta`] will search.
pub const MAX_GRID_POINTS: u128 = 1_000_000;

/// A multiset of observed events.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dataset {
    observations: BTreeMap<Event, u64>,
    source: String,
}

impl Dataset {
    pub fn new(source: impl Into<String>) -> Self {
        Dataset {
            observations: BTreeMap::new(),
            source: source.into(),
        }
    }

    pub fn from_events(source: impl Into<String>, events: impl IntoIterator<Item = Event>) -> Self {
        let mut data = Dataset::new(source);
        for e in events {
            data.insert(e, 1);
        }
        data
    }

    pub fn insert(&mut self, event: Event, count: u64) {
        if count > 0 {
            *self.observations.entry(event).or_default() += count;
        }
    }

    /// Adds every observation of `other`.
    pub fn merge(&mut self, other: &Dataset) {
        for (&e, &c) in &other.observations {
            self.insert(e, c);
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Number of observations, counting repeats.
    pub fn len(&self) -> u64 {
        self.observations.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn distinct(&self) -> usize {
        self.observations.len()
    }

    pub fn count(&self, event: Event) -> u64 {
        self.observations.get(&event).copied().unwrap_or(0)
    }

    /// Distinct events with their counts, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (Event, u64)> + '_ {
        self.observations.iter().map(|(e, c)| (*e, *c))
    }

    /// One line per observation; the empty event is written as `{}`.
    pub fn write(&self, universe: &Universe, mut out: impl Write) -> Result<()> {
        for (event, count) in self.iter() {
            let line = if event.is_empty() {
                "{}".to_string()
            } else {
                universe.render(event)
            };
            for _ in 0..count {
                writeln!(out, "{line}")?;
            }
        }
        Ok(())
    }
}

/// Reads one event per line. `#` starts a comment, blank lines are skipped and
/// `{}` is the empty event. In [`EventMode::Extend`] unknown symbols are added
/// to `universe` before any event is built.
pub fn load_dataset(
    reader: impl BufRead,
    universe: &mut Universe,
    mode: EventMode,
    source: &str,
) -> Result<Dataset> {
    let at = |line: usize, error: Error| Error::Dataset {
        source_name: source.to_string(),
        line,
        error: Box::new(error),
    };
    let mut lines = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.split('#').next().unwrap_or("").trim().to_string();
        if !text.is_empty() {
            lines.push((i + 1, text));
        }
    }
    if mode == EventMode::Extend {
        for (number, text) in &lines {
            universe
                .extend_from_event(text)
                .map_err(|e| at(*number, e))?;
        }
    }
    let mut data = Dataset::new(source);
    for (number, text) in &lines {
        let event = universe.parse_event(text).map_err(|e| at(*number, e))?;
        data.insert(event, 1);
    }
    Ok(data)
}

/// Log-likelihood over observations with nonzero probability, and the number
/// of observations the program gives probability zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Score {
    pub log_likelihood: f64,
    pub zero_probability: u64,
}

impl Score {
    /// Fewer zero-probability observations first, then higher likelihood.
    fn beats(&self, other: &Score) -> bool {
        const EPSILON: f64 = 1e-9;
        self.zero_probability < other.zero_probability
            || (self.zero_probability == other.zero_probability
                && self.log_likelihood > other.log_likelihood + EPSILON)
    }
}

/// The sum of `ln Pr_E(e)` over the observations, at parameters `theta`.
pub fn log_score(analysis: &Analysis, data: &Dataset, theta: &ThetaAssignment) -> Result<Score> {
    let mut per_class: BTreeMap<ClassKey, u64> = BTreeMap::new();
    for (e, c) in data.iter() {
        *per_class.entry(analysis.class_of(e)).or_default() += c;
    }
    let mut score = Score {
        log_likelihood: 0.0,
        zero_probability: 0,
    };
    if per_class.is_empty() {
        return Ok(score);
    }
    for (key, count) in per_class {
        let p = analysis.eval_prob(key, theta)?;
        if p.is_zero() {
            score.zero_probability += count;
        } else {
            score.log_likelihood += count as f64 * rational::ln(&p);
        }
    }
    Ok(score)
}

/// The result of a grid search.
#[derive(Clone, Debug, PartialEq)]
pub struct Fit {
    pub theta: ThetaAssignment,
    pub score: Score,
    /// Grid points at which the score was evaluated.
    pub evaluated: u128,
}

/// Exhaustive search over every parameter group at step `1/resolution`,
/// maximizing [`log_score`]. Groups are searched jointly since they share
/// the normalizer. Ties go to the lexicographically smallest assignment.
/// Without parameters the empty assignment is returned.
pub fn fit_theta(analysis: &Analysis, data: &Dataset, resolution: u32) -> Result<Fit> {
    if resolution == 0 {
        return Err(Error::ZeroResolution);
    }
    let groups = analysis.constraints().groups();
    if groups.is_empty() {
        let theta = ThetaAssignment::default();
        let score = log_score(analysis, data, &theta)?;
        return Ok(Fit {
            theta,
            score,
            evaluated: 1,
        });
    }

    let points = groups.iter().try_fold(1u128, |acc, g| {
        acc.checked_mul(compositions(resolution, g.vars.len()))
            .filter(|&p| p <= MAX_GRID_POINTS)
    });
    let points = points.ok_or_else(|| {
        Error::GridTooLarge(
            groups
                .iter()
                .map(|g| compositions(resolution, g.vars.len()))
                .fold(1u128, |a, b| a.saturating_mul(b)),
        )
    })?;

    // The score depends on theta only through Z and the observed classes.
    let z = analysis.normalizer()?.clone();
    let mut observed: BTreeMap<ClassKey, u64> = BTreeMap::new();
    for (e, c) in data.iter() {
        *observed.entry(analysis.class_of(e)).or_default() += c;
    }
    let terms: Vec<(Poly, u64)> = observed
        .iter()
        .map(|(k, &c)| (analysis.weight_event_class(*k), c))
        .collect();

    let step = BigRational::new(BigInt::one(), BigInt::from(resolution));
    let per_group: Vec<Vec<Vec<BigRational>>> = groups
        .iter()
        .map(|g| {
            grid_of(resolution, g.vars.len())
                .into_iter()
                .map(|parts| {
                    parts
                        .into_iter()
                        .map(|k| &step * BigRational::from_integer(BigInt::from(k)))
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut best: Option<(Score, BTreeMap<ThetaVar, BigRational>)> = None;
    let mut choice = vec![0usize; groups.len()];
    let mut evaluated = 0u128;
    for _ in 0..points {
        let mut values = BTreeMap::new();
        for (gi, g) in groups.iter().enumerate() {
            for (var, value) in g.vars.iter().zip(&per_group[gi][choice[gi]]) {
                values.insert(*var, value.clone());
            }
        }
        advance(&mut choice, &per_group);

        let lookup = |v: &ThetaVar| values.get(v).cloned();
        let zv = z.eval_with(lookup).expect("complete assignment");
        if zv.is_zero() {
            continue;
        }
        evaluated += 1;
        let mut score = Score {
            log_likelihood: 0.0,
            zero_probability: 0,
        };
        for (weight, count) in &terms {
            let w = weight.eval_with(lookup).expect("complete assignment");
            if w.is_zero() {
                score.zero_probability += count;
            } else {
                score.log_likelihood += *count as f64 * rational::ln(&(w / &zv));
            }
        }
        let better = match &best {
            None => true,
            Some((s, v)) => score.beats(s) || (!s.beats(&score) && values < *v),
        };
        if better {
            best = Some((score, values));
        }
    }
    let (score, values) = best.ok_or(Error::ZeroNormalizerAt)?;
    Ok(Fit {
        theta: ThetaAssignment::from_validated(values),
        score,
        evaluated,
    })
}

/// Number of ways to split `resolution` steps among `parts` parameters.
fn compositions(resolution: u32, parts: usize) -> u128 {
    // C(resolution + parts - 1, parts - 1)
    let n = resolution as u128 + parts as u128 - 1;
    let k = parts as u128 - 1;
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Every split of `resolution` into `parts` nonnegative integers, in
/// lexicographic order.
fn grid_of(resolution: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(left: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            go(left - k, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(resolution, parts, &mut Vec::new(), &mut out);
    out
}

fn advance(choice: &mut [usize], per_group: &[Vec<Vec<BigRational>>]) {
    for (c, options) in choice.iter_mut().zip(per_group).rev() {
        *c += 1;
        if *c < options.len() {
            return;
        }
        *c = 0;
    }
}

/// `n` independent draws from `Pr_E` at `theta`: a class is picked with
/// probability `size * Pr_E`, then one of its events uniformly.
pub fn sample_events(
    analysis: &Analysis,
    theta: &ThetaAssignment,
    n: u64,
    seed: u64,
) -> Result<Dataset> {
    let mut data = Dataset::new(format!("sample(seed={seed})"));
    if n == 0 {
        return Ok(data);
    }
    let mut keys = Vec::new();
    let mut masses = Vec::new();
    for (key, entry) in analysis.classes().entries() {
        if entry.size == 0 {
            continue;
        }
        let p = analysis.eval_prob(key, theta)?;
        if p.is_zero() {
            continue;
        }
        keys.push(key);
        masses.push(rational::to_f64(
            &(p * BigRational::from_integer(BigInt::from(entry.size))),
        ));
    }
    let index = WeightedIndex::new(&masses).map_err(|_| Error::ZeroNormalizerAt)?;

    let mut members: BTreeMap<ClassKey, Vec<Event>> =
        keys.iter().map(|k| (*k, Vec::new())).collect();
    for_each_consistent(analysis.universe().len(), |e| {
        if let Some(list) = members.get_mut(&analysis.class_of(e)) {
            list.push(e);
        }
    });
    for list in members.values_mut() {
        list.sort();
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let list = &members[&keys[index.sample(&mut rng)]];
        let e = list[rng.random_range(0..list.len())];
        data.insert(e, 1);
    }
    Ok(data)
}

/// `{"theta{ab|a}": "9/10"}`, with parameters in canonical order.
pub fn theta_to_json(analysis: &Analysis, theta: &ThetaAssignment) -> String {
    let map: serde_json::Map<String, serde_json::Value> = theta
        .iter()
        .map(|(v, value)| {
            (
                analysis.param_name(v),
                serde_json::Value::String(value.to_string()),
            )
        })
        .collect();
    serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("serializable")
}

/// Reads a parameter object. Values are rational strings (`"9/10"`,
/// `"0.9"`) or JSON numbers. Each group's last parameter may be omitted.
pub fn theta_from_json(analysis: &Analysis, text: &str) -> Result<ThetaAssignment> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::ThetaFormat(e.to_string()))?;
    let object = value
        .as_object()
        .ok_or_else(|| Error::ThetaFormat("expected a JSON object".into()))?;
    let mut values = BTreeMap::new();
    for (name, v) in object {
        let text = match v {
            serde_json::Value::String(s) => s.trim().to_string(),
            serde_json::Value::Number(n) => n.to_string(),
            _ => {
                return Err(Error::ThetaFormat(format!(
                    "value of `{name}` must be a rational"
                )))
            }
        };
        let parsed = rational::parse_rational(&text)
            .ok_or_else(|| Error::ThetaFormat(format!("`{text}` is not a rational number")))?;
        values.insert(name.clone(), parsed);
    }
    analysis.theta_from_names(&values)
}
