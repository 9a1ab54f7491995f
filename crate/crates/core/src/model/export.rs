use std::fmt::Write;

use crate::clockspace::Federation;

use super::{ActionKind, Automaton};

fn guard_text(f: &Federation) -> String {
    if f.is_empty() {
        return "false".into();
    }
    f.zones().iter().map(|z| z.display(f.clocks()).to_string()).collect::<Vec<_>>().join(" || ")
}

/// Renders an automaton in the model file format, one line per edge.
pub fn to_text(a: &Automaton) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "automaton {}", a.name);
    let _ = writeln!(out, "role {}", a.role.keyword());
    let proper: Vec<&str> = a.proper_clocks().iter().map(|&i| a.clocks.name(i)).collect();
    if !proper.is_empty() {
        let _ = writeln!(out, "clocks {}", proper.join(" "));
    }
    if !a.observed.is_empty() {
        let obs: Vec<&str> = a.observed.iter().map(|&i| a.clocks.name(i)).collect();
        let _ = writeln!(out, "observed {}", obs.join(" "));
    }
    for kind in [ActionKind::Input, ActionKind::Output, ActionKind::Internal, ActionKind::Restart] {
        let names: Vec<&str> = a.actions.iter().filter(|d| d.kind == kind).map(|d| d.name.as_str()).collect();
        if !names.is_empty() {
            let _ = writeln!(out, "{} {}", kind.keyword(), names.join(" "));
        }
    }
    for l in &a.locations {
        if l.invariant.equals(&Federation::universe(&a.clocks)) {
            let _ = writeln!(out, "location {}", l.name);
        } else {
            let _ = writeln!(out, "location {} inv {}", l.name, guard_text(&l.invariant));
        }
    }
    let _ = writeln!(out, "initial {}", a.locations[a.initial].name);
    if !a.accept.is_empty() {
        let names: Vec<&str> = a.accept.iter().map(|&l| a.locations[l].name.as_str()).collect();
        let _ = writeln!(out, "accept {}", names.join(" "));
    }
    if let Some(f) = a.fail {
        let _ = writeln!(out, "fail {}", a.locations[f].name);
    }
    if let Some(inv) = &a.dp_invariants {
        for (l, f) in inv.iter().enumerate() {
            if !f.equals(&Federation::universe(&a.clocks)) {
                let _ = writeln!(out, "dp-invariant {} {}", a.locations[l].name, guard_text(f));
            }
        }
    }
    for e in &a.edges {
        let resets = if e.resets.is_empty() {
            "-".to_string()
        } else {
            e.resets.iter().map(|&i| a.clocks.name(i)).collect::<Vec<_>>().join(",")
        };
        let _ = writeln!(
            out,
            "edge {} -- {} / {} / {} -> {}",
            a.locations[e.src].name,
            guard_text(&e.guard),
            a.actions[e.action].label(),
            resets,
            a.locations[e.dst].name
        );
    }
    out
}

/// Graphviz rendering, for inspection only.
pub fn to_dot(a: &Automaton) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", a.name);
    for (k, l) in a.locations.iter().enumerate() {
        let shape = if a.accept.contains(&k) { "doublecircle" } else { "ellipse" };
        let _ = writeln!(
            out,
            "  n{k} [label=\"{}\\n{}\", shape={shape}];",
            l.name,
            guard_text(&l.invariant)
        );
    }
    for e in &a.edges {
        let resets: Vec<&str> = e.resets.iter().map(|&i| a.clocks.name(i)).collect();
        let _ = writeln!(
            out,
            "  n{} -> n{} [label=\"{}, {}, {{{}}}\"];",
            e.src,
            e.dst,
            guard_text(&e.guard),
            a.actions[e.action].label(),
            resets.join(",")
        );
    }
    out.push_str("}\n");
    out
}
