use std::fmt::Write;

use super::{BatterySpec, Block, Document, IdealList, JobDecl, TwistDecl};
use crate::presentation::AlgebraPresentation;

pub fn print_algebra(alg: &AlgebraPresentation) -> String {
    let mut out = String::new();
    let names = alg.names();
    writeln!(out, "algebra {}", alg.name()).unwrap();
    writeln!(out, "field {}", alg.field()).unwrap();
    let gens: Vec<String> = alg
        .generators()
        .iter()
        .map(|g| match g.weight {
            1 => g.name.clone(),
            w => format!("{}:{w}", g.name),
        })
        .collect();
    writeln!(out, "generators {}", gens.join(", ")).unwrap();
    writeln!(out, "relations").unwrap();
    for r in alg.relations() {
        writeln!(out, "  {}", r.display(&names)).unwrap();
    }
    writeln!(out, "end").unwrap();
    out
}

fn print_ideals(doc: &Document, list: &IdealList) -> String {
    let names = doc.algebra(&list.algebra).map(|a| a.names()).unwrap_or_default();
    let mut out = format!("ideals {}\n", list.algebra);
    for i in &list.ideals {
        let gens: Vec<String> = i.generators.iter().map(|g| g.display(&names).to_string()).collect();
        writeln!(out, "  {} = {}({})", i.name, i.side, gens.join(", ")).unwrap();
    }
    out.push_str("end\n");
    out
}

fn print_twist(t: &TwistDecl) -> String {
    let mut out = format!("twist {}\nleft {}\nright {}\n", t.spec.name, t.left, t.right);
    for (p, v) in &t.params {
        writeln!(out, "  param {p} = {v}").unwrap();
    }
    let (ln, rn) = (t.spec.left.names(), t.spec.right.names());
    for (b, a, v) in &t.spec.values {
        writeln!(
            out,
            "  tau({}, {}) = {}",
            rn[*b as usize],
            ln[*a as usize],
            v.display(&ln, &rn)
        )
        .unwrap();
    }
    out.push_str("end\n");
    out
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
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

fn print_job(doc: &Document, j: &JobDecl) -> String {
    let mut out = format!("job {}\n", j.name);
    let names = j
        .algebra
        .as_deref()
        .and_then(|a| doc.algebra(a))
        .map(|a| a.names())
        .unwrap_or_default();
    if let Some(c) = &j.command {
        writeln!(out, "  command {c}").unwrap();
    }
    if let Some(a) = &j.algebra {
        writeln!(out, "  algebra {a}").unwrap();
    }
    if let Some(t) = &j.twist {
        writeln!(out, "  twist {t}").unwrap();
    }
    if let Some(e) = &j.extension {
        writeln!(out, "  extension {e}").unwrap();
    }
    match &j.battery {
        Some(BatterySpec::Default) => out.push_str("  battery default\n"),
        Some(BatterySpec::Named(n)) => writeln!(out, "  battery {}", n.join(", ")).unwrap(),
        None => {}
    }
    if let Some(l) = j.battery_limit {
        writeln!(out, "  battery-limit {l}").unwrap();
    }
    if !j.subalgebra.is_empty() {
        let gens: Vec<String> = j.subalgebra.iter().map(|g| g.display(&names).to_string()).collect();
        writeln!(out, "  subalgebra {}", gens.join(", ")).unwrap();
    }
    for (bar, lift) in &j.lifts {
        writeln!(out, "  lift {} = {}", bar.display(&names), lift.display(&names)).unwrap();
    }
    for a in &j.assertions {
        writeln!(out, "  assert {} by {}", quote(&a.claim), quote(&a.citation)).unwrap();
    }
    if let Some(d) = j.max_degree {
        writeln!(out, "  max-degree {d}").unwrap();
    }
    if let Some(h) = j.hom_bound {
        writeln!(out, "  hom-bound {h}").unwrap();
    }
    if let Some(s) = j.strict_vanishing {
        writeln!(out, "  strict-vanishing {s}").unwrap();
    }
    out.push_str("end\n");
    out
}

pub fn print_document(doc: &Document) -> String {
    let parts: Vec<String> = doc
        .blocks
        .iter()
        .map(|b| match b {
            Block::Algebra(a) => print_algebra(a),
            Block::Ideals(l) => print_ideals(doc, l),
            Block::Twist(t) => print_twist(t),
            Block::Job(j) => print_job(doc, j),
        })
        .collect();
    parts.join("\n")
}
