//! Census tables: cover sets per topology and the induced torsion pairs.

use serde::Serialize;

use crate::fincat::FiniteCategory;
use crate::sieves::Sieve;
use crate::topology::{identify_named, irreducible_objects, rigidity, GrothendieckTopology, NamedTopology};

pub fn roman(mut n: usize) -> String {
    const DIGITS: [(usize, &str); 13] = [
        (1000, "M"),
        (900, "CM"),
        (500, "D"),
        (400, "CD"),
        (100, "C"),
        (90, "XC"),
        (50, "L"),
        (40, "XL"),
        (10, "X"),
        (9, "IX"),
        (5, "V"),
        (4, "IV"),
        (1, "I"),
    ];
    let mut out = String::new();
    for (v, s) in DIGITS {
        while n >= v {
            out.push_str(s);
            n -= v;
        }
    }
    out
}

/// Rows in table order: the named topologies first (trivial, dense, maximal,
/// atomic), then the rest in enumeration order labelled by row number.
pub fn label_topologies(cat: &FiniteCategory, list: &[GrothendieckTopology]) -> Vec<(String, GrothendieckTopology)> {
    let named: Vec<Option<NamedTopology>> = list.iter().map(|t| identify_named(cat, t)).collect();
    let mut rows = Vec::new();
    for kind in NamedTopology::ALL {
        if let Some(i) = named.iter().position(|n| *n == Some(kind)) {
            rows.push((kind.label().to_string(), list[i].clone()));
        }
    }
    for (i, t) in list.iter().enumerate() {
        if named[i].is_none() {
            rows.push((format!("Topology {}", roman(rows.len() + 1)), t.clone()));
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyRow {
    pub label: String,
    /// One cell per object, e.g. `{{1_x, f, g}, {f, g}}`.
    pub covers: Vec<String>,
}

pub fn cover_cell(cat: &FiniteCategory, sieves: &[Sieve]) -> String {
    let parts: Vec<String> = sieves.iter().map(|s| s.display(cat)).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn topology_table(cat: &FiniteCategory, list: &[GrothendieckTopology]) -> Vec<TopologyRow> {
    label_topologies(cat, list)
        .into_iter()
        .map(|(label, t)| TopologyRow { label, covers: cat.objects().map(|x| cover_cell(cat, t.covers(x))).collect() })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionRow {
    pub label: String,
    pub torsion: String,
    pub torsion_free: String,
}

fn class(conditions: &[String]) -> String {
    format!("{{V ∈ O Mod | {}}}", conditions.join(", "))
}

/// Torsion modules: `V_d = 0` on the irreducible objects when the topology
/// is rigid, otherwise `V_f = 0` on generators of each least cover.
pub fn torsion_descriptor(cat: &FiniteCategory, j: &GrothendieckTopology) -> String {
    let conditions: Vec<String> = if rigidity(cat, j).rigid {
        let d = irreducible_objects(cat, j);
        if d.len() == cat.num_objects() {
            return "0".into();
        }
        d.iter().map(|&x| format!("V_{} = 0", cat.obj_name(x))).collect()
    } else {
        let mut out = Vec::new();
        for x in cat.objects() {
            let s = j.minimal(x);
            if s.is_maximal(cat) {
                out.push(format!("V_{} = 0", cat.obj_name(x)));
            } else {
                out.extend(s.generators(cat).iter().map(|&f| format!("V_{} = 0", cat.mor_name(f))));
            }
        }
        out
    };
    if conditions.is_empty() {
        "O Mod".into()
    } else {
        class(&conditions)
    }
}

/// Torsion-free modules: the joint kernel of the generators of each least
/// cover vanishes.
pub fn torsion_free_descriptor(cat: &FiniteCategory, j: &GrothendieckTopology) -> String {
    let mut conditions = Vec::new();
    let mut vanishing = 0;
    for x in cat.objects() {
        let s = j.minimal(x);
        if s.is_maximal(cat) {
            continue;
        }
        if s.is_empty() {
            vanishing += 1;
            conditions.push(format!("V_{} = 0", cat.obj_name(x)));
        } else {
            let kers: Vec<String> = s.generators(cat).iter().map(|&f| format!("ker V_{}", cat.mor_name(f))).collect();
            conditions.push(format!("{} = 0", kers.join(" ∩ ")));
        }
    }
    if vanishing == cat.num_objects() {
        "0".into()
    } else if conditions.is_empty() {
        "O Mod".into()
    } else {
        class(&conditions)
    }
}

pub fn torsion_pair_table(cat: &FiniteCategory, list: &[GrothendieckTopology]) -> Vec<TorsionRow> {
    label_topologies(cat, list)
        .into_iter()
        .map(|(label, t)| TorsionRow {
            torsion: torsion_descriptor(cat, &t),
            torsion_free: torsion_free_descriptor(cat, &t),
            label,
        })
        .collect()
}

/// Left-aligned plain-text table with a rule under the header.
pub fn render_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let width = |s: &str| s.chars().count();
    let mut widths: Vec<usize> = headers.iter().map(|h| width(h)).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate().take(cols) {
            widths[i] = widths[i].max(width(c));
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> =
            cells.iter().enumerate().map(|(i, c)| format!("{c}{}", " ".repeat(widths[i] - width(c)))).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(headers);
    out.push('\n');
    out.push_str(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

pub fn render_topology_table(cat: &FiniteCategory, rows: &[TopologyRow]) -> String {
    let mut headers = vec!["Topologies".to_string()];
    headers.extend(cat.objects().map(|x| format!("J({})", cat.obj_name(x))));
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| std::iter::once(r.label.clone()).chain(r.covers.iter().cloned()).collect())
        .collect();
    render_table(&headers, &body)
}

pub fn render_torsion_table(rows: &[TorsionRow]) -> String {
    let headers = ["Topologies", "T(J)", "F(J)"].map(String::from);
    let body: Vec<Vec<String>> =
        rows.iter().map(|r| vec![r.label.clone(), r.torsion.clone(), r.torsion_free.clone()]).collect();
    render_table(&headers, &body)
}
