//! The lattice of stable cores as a Graphviz digraph.

use std::fmt::Write;

use wasp_core::{Analysis, ClassKey, CoreSet};

use crate::render::Style;

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn node_id(key: ClassKey) -> String {
    match key {
        ClassKey::Inconsistent => "bot".to_string(),
        ClassKey::Core(core) => format!("c{}", core.mask()),
    }
}

/// One node per core plus `⊥`; edges add one stable model to a core, from
/// the empty core up to the core of every model. `⊥` has no edges.
pub fn lattice(analysis: &Analysis, style: &Style) -> String {
    let m = analysis.models().len();
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    let label = |key: ClassKey| {
        let mark = wasp_core::eventspace::class_label(key, analysis.models());
        let head = match (key, mark.is_empty()) {
            (ClassKey::Inconsistent, _) => mark.to_string(),
            (_, true) => style.class(analysis, key),
            (_, false) => format!("{mark} {}", style.class(analysis, key)),
        };
        format!(
            "{head}\nsize {}\nw_R {}",
            analysis.classes().size(key),
            style.poly(analysis, &analysis.weight_class(key))
        )
    };
    for key in analysis.classes().keys() {
        writeln!(out, "  {} [label={}];", node_id(key), quote(&label(key))).unwrap();
    }
    for mask in 0u64..1 << m {
        let core = CoreSet::from_ids((0..m).filter(|i| mask >> i & 1 == 1));
        for s in (0..m).filter(|s| !core.contains(*s)) {
            writeln!(
                out,
                "  {} -> {};",
                node_id(ClassKey::Core(core)),
                node_id(ClassKey::Core(core.with(s)))
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}
