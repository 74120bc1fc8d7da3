use std::fmt::Write;

use crate::enumerate::ForestSet;
use crate::model::{Configuration, Forest};

pub fn quote(label: &str) -> String {
    let mut s = String::with_capacity(label.len() + 2);
    s.push('"');
    for ch in label.chars() {
        match ch {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            '\n' => s.push_str("\\n"),
            c => s.push(c),
        }
    }
    s.push('"');
    s
}

/// One `digraph forest_<index>`; roots are double circles and edges point
/// from child to parent.
pub fn forest_to_dot(index: usize, f: &Forest, c: &Configuration) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph forest_{index} {{");
    for r in c.roots() {
        let _ = writeln!(s, "  {} [shape=doublecircle];", quote(&r.label));
    }
    for v in c.vertices() {
        let _ = writeln!(s, "  {} [shape=circle];", quote(&v.label));
    }
    for (parent, child) in f.edges(c.m()) {
        let _ = writeln!(
            s,
            "  {} -> {};",
            quote(&c.ground(child).label),
            quote(&c.ground(parent).label)
        );
    }
    s.push_str("}\n");
    s
}

pub fn forests_to_dot(set: &ForestSet) -> String {
    set.iter()
        .enumerate()
        .map(|(i, f)| forest_to_dot(i, f, &set.configuration))
        .collect()
}
