//! Programs used by the benchmarks.

/// The running example: one weighted fact and a disjunction.
pub const FRUITFUL: &str = "0.3 :: a.\nb ; c :- a.\n";

/// A chain of `n` weighted facts, each enabling a disjunction over two fresh
/// atoms, plus default negation linking neighbours.
pub fn chain(n: usize) -> String {
    let mut text = String::new();
    for i in 0..n {
        text.push_str(&format!("0.{} :: w{i}.\n", i % 9 + 1));
        text.push_str(&format!("x{i} ; y{i} :- w{i}.\n"));
        if i > 0 {
            text.push_str(&format!("x{i} :- y{}, not w{i}.\n", i - 1));
        }
    }
    text
}
