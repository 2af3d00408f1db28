//! Random small programs, rendered as source text.

use rand::seq::SliceRandom;
use rand::Rng;

const NAMES: [&str; 4] = ["a", "b", "c", "d"];
const WEIGHTS: [&str; 7] = ["0", "0.25", "0.3", "1/3", "0.5", "0.7", "1"];

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub symbols: usize,
    pub max_rules: usize,
    pub max_weighted: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            symbols: 3,
            max_rules: 3,
            max_weighted: 2,
        }
    }
}

fn atom(rng: &mut impl Rng, names: &[&str]) -> String {
    let name = names[rng.random_range(0..names.len())];
    if rng.random_bool(0.3) {
        format!("-{name}")
    } else {
        name.to_string()
    }
}

fn rule(rng: &mut impl Rng, names: &[&str]) -> String {
    let head_len = if rng.random_bool(0.1) {
        0
    } else {
        rng.random_range(1..=2)
    };
    let body_len = rng.random_range(if head_len == 0 { 1 } else { 0 }..=2);
    let head: Vec<String> = (0..head_len).map(|_| atom(rng, names)).collect();
    let body: Vec<String> = (0..body_len)
        .map(|_| {
            let a = atom(rng, names);
            if rng.random_bool(0.3) {
                format!("not {a}")
            } else {
                a
            }
        })
        .collect();
    match (head.is_empty(), body.is_empty()) {
        (_, true) => format!("{}.", head.join(" ; ")),
        (true, false) => format!(":- {}.", body.join(", ")),
        (false, false) => format!("{} :- {}.", head.join(" ; "), body.join(", ")),
    }
}

/// A random program. With `certain`, the first weighted fact has weight 1.
pub fn program_text(rng: &mut impl Rng, shape: Shape, certain: bool) -> String {
    let count = rng.random_range(1..=shape.symbols.min(NAMES.len()));
    let names = &NAMES[..count];
    let mut lines = Vec::new();

    let mut weighted: Vec<&str> = names.to_vec();
    weighted.shuffle(rng);
    let low = usize::from(certain);
    let k = rng.random_range(low..=shape.max_weighted.min(count).max(low));
    for (i, name) in weighted.iter().take(k).enumerate() {
        let weight = if certain && i == 0 {
            if rng.random_bool(0.5) {
                "1"
            } else {
                "1.0"
            }
        } else {
            WEIGHTS[rng.random_range(0..WEIGHTS.len())]
        };
        let sign = if rng.random_bool(0.25) { "-" } else { "" };
        lines.push(format!("{weight} :: {sign}{name}."));
    }
    for _ in 0..rng.random_range(0..=shape.max_rules) {
        lines.push(rule(rng, names));
    }
    lines.join("\n")
}
