use std::collections::BTreeMap;

use serde_json::{json, Value};

use finsite::fincat::{CategoryDoc, FiniteCategory};
use finsite::fixtures::{build_standard_category, BuildSpec};
use finsite::linalg::Field;
use finsite::report::{render_table, render_topology_table, render_torsion_table, topology_table, torsion_pair_table};
use finsite::sheaves::{sheaf_verdict, SheafVerdict, sheafify, verify_rigid_equivalence};
use finsite::topology::{check_axioms, enumerate_topologies, named_topology, rigidity, GrothendieckTopology, NamedTopology};
use finsite::torsion::{nullstellensatz_roundtrip, torsion_class, torsion_submodule, verify_torsion_pair};
use finsite::typen::{
    rigid_spec, spec_census, symbolic_pullback, truncation_crosscheck, validate_sequence, validate_spec, DSequence,
    SymbolicSieve,
};
use finsite::Error;

use crate::load::{self, Result};
use crate::{CategoryCmd, Cli, Group, Opts, SheafCmd, TopologyCmd, TorsionCmd, TypenCmd};

/// A rendered report in both formats, and whether a checked property failed.
pub struct Outcome {
    pub failed: bool,
    pub json: Value,
    pub table: String,
}

fn ok(json: Value, table: String) -> Result<Outcome> {
    Ok(Outcome { failed: false, json, table })
}

fn lib(e: Error) -> String {
    e.to_string()
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn rows(pairs: &[(&str, String)]) -> Vec<Vec<String>> {
    pairs.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect()
}

fn two_col(pairs: &[(&str, String)]) -> String {
    render_table(&["property".to_string(), "value".to_string()], &rows(pairs))
}

fn dims_text(cat: &FiniteCategory, dims: &[usize]) -> String {
    cat.objects().map(|x| format!("{}:{}", cat.obj_name(x), dims[x.0])).collect::<Vec<_>>().join(", ")
}

fn dims_json(cat: &FiniteCategory, dims: &[usize]) -> BTreeMap<String, usize> {
    cat.objects().map(|x| (cat.obj_name(x).to_string(), dims[x.0])).collect()
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let o = &cli.opts;
    match &cli.command {
        Group::Category(c) => category(c, o),
        Group::Topology(c) => topology(c, o),
        Group::Torsion(c) => torsion(c, o),
        Group::Sheaf(c) => sheaf(c, o),
        Group::Typen(c) => typen(c, o),
    }
}

fn summary(cat: &FiniteCategory) -> (Value, String) {
    let flags = cat.flags();
    let homs: Vec<Vec<String>> = cat
        .objects()
        .map(|x| {
            std::iter::once(cat.obj_name(x).to_string())
                .chain(cat.objects().map(|y| cat.hom(x, y).len().to_string()))
                .collect()
        })
        .collect();
    let mut headers = vec!["|Hom(row, col)|".to_string()];
    headers.extend(cat.objects().map(|y| cat.obj_name(y).to_string()));
    let table = format!(
        "{}\n{}",
        two_col(&[
            ("objects", cat.num_objects().to_string()),
            ("morphisms", cat.num_morphisms().to_string()),
            ("directed", yes_no(flags.directed)),
            ("EI", yes_no(flags.ei)),
            ("skeletal", yes_no(flags.skeletal)),
            ("Ore", yes_no(flags.ore)),
        ]),
        render_table(&headers, &homs)
    );
    let json = json!({
        "objects": cat.num_objects(),
        "morphisms": cat.num_morphisms(),
        "flags": flags,
    });
    (json, table)
}

fn category(cmd: &CategoryCmd, o: &Opts) -> Result<Outcome> {
    match cmd {
        CategoryCmd::Validate => {
            let arg = o.category.as_deref().ok_or("--category is required")?;
            let cat = if std::path::Path::new(arg).exists() {
                let text = std::fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?;
                let doc: CategoryDoc = serde_json::from_str(&text).map_err(|e| format!("{arg}: {e}"))?;
                match FiniteCategory::from_doc_with_budget(&doc, &load::budget(o)) {
                    Ok(c) => c,
                    Err(Error::InvalidCategory(violations)) => {
                        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                        let mut table = "invalid category\n".to_string();
                        for v in &list {
                            table.push_str(&format!("  {v}\n"));
                        }
                        return Ok(Outcome { failed: true, json: json!({"valid": false, "violations": list}), table });
                    }
                    Err(e) => return Err(lib(e)),
                }
            } else {
                load::category(o)?
            };
            let (mut json, table) = summary(&cat);
            json["valid"] = json!(true);
            json["violations"] = json!([]);
            ok(json, format!("valid category\n{table}"))
        }
        CategoryCmd::Build { spec } => {
            let text = load::text_or_file(spec)?;
            let spec: BuildSpec = serde_json::from_str(&text).map_err(|e| format!("build spec: {e}"))?;
            let cat = build_standard_category(&spec).map_err(lib)?;
            let (_, table) = summary(&cat);
            ok(serde_json::to_value(cat.to_doc()).expect("category serializes"), table)
        }
    }
}

/// Cover table, count line and optionally the torsion pair table.
fn enumeration_table(cat: &FiniteCategory, list: &[GrothendieckTopology], pairs: bool) -> String {
    let count = format!("{} topologies\n", list.len());
    if list.is_empty() {
        return count;
    }
    let mut table = format!("{}\n{count}", render_topology_table(cat, &topology_table(cat, list)));
    if pairs {
        table = format!("{table}\n{}", render_torsion_table(&torsion_pair_table(cat, list)));
    }
    table
}

fn topology(cmd: &TopologyCmd, o: &Opts) -> Result<Outcome> {
    let cat = load::category(o)?;
    match cmd {
        TopologyCmd::Enumerate { pairs } => {
            let list = enumerate_topologies(&cat, &load::budget(o)).map_err(lib)?;
            let torsion_rows = torsion_pair_table(&cat, &list);
            let table = enumeration_table(&cat, &list, *pairs);
            let entries: Vec<Value> = finsite::report::label_topologies(&cat, &list)
                .iter()
                .zip(&torsion_rows)
                .map(|((label, t), tr)| {
                    let minimal: BTreeMap<String, Vec<String>> =
                        cat.objects().map(|x| (cat.obj_name(x).to_string(), t.minimal(x).names(&cat))).collect();
                    let mut e = json!({"label": label, "covers": t.to_doc(&cat).covers, "minimal": minimal});
                    if *pairs {
                        e["torsion"] = json!(tr.torsion);
                        e["torsion_free"] = json!(tr.torsion_free);
                    }
                    e
                })
                .collect();
            ok(json!({"count": list.len(), "topologies": entries}), table)
        }
        TopologyCmd::Check => {
            let rule = load::rule(&cat, o)?;
            let r = check_axioms(&cat, &rule).map_err(lib)?;
            let pass = |b: bool| if b { "ok" } else { "FAIL" }.to_string();
            let mut table = render_table(
                &["axiom".to_string(), "status".to_string()],
                &rows(&[
                    ("maximal", pass(r.maximal_ok)),
                    ("stability", pass(r.stability_ok)),
                    ("transitivity", pass(r.transitivity_ok)),
                    ("closed under supersets", yes_no(r.inclusion_closed)),
                    ("closed under intersections", yes_no(r.intersection_closed)),
                ]),
            );
            for w in &r.witnesses {
                table.push_str(&format!("witness: {}\n", serde_json::to_string(w).expect("witness serializes")));
            }
            table.push_str(&format!("{}\n", r.summary()));
            let mut json = serde_json::to_value(&r).expect("report serializes");
            json["is_topology"] = json!(r.is_topology());
            Ok(Outcome { failed: !r.is_topology(), json, table })
        }
        TopologyCmd::Named => {
            let kinds: Vec<NamedTopology> = match &o.topology {
                Some(name) => vec![NamedTopology::parse(name).ok_or_else(|| format!("unknown topology name {name:?}"))?],
                None => NamedTopology::ALL.to_vec(),
            };
            let mut body = Vec::new();
            let mut entries = Vec::new();
            for kind in kinds {
                match named_topology(&cat, kind) {
                    Ok(t) => {
                        let rows = topology_table(&cat, std::slice::from_ref(&t));
                        let mut line = vec![kind.label().to_string()];
                        line.extend(rows[0].covers.clone());
                        body.push(line);
                        entries.push(json!({"name": kind, "covers": t.to_doc(&cat).covers}));
                    }
                    Err(e) if o.topology.is_none() => {
                        let mut line = vec![kind.label().to_string()];
                        line.push(format!("unavailable: {e}"));
                        line.extend(std::iter::repeat(String::new()).take(cat.num_objects() - 1));
                        body.push(line);
                        entries.push(json!({"name": kind, "unavailable": e.to_string()}));
                    }
                    Err(e) => return Err(lib(e)),
                }
            }
            let mut headers = vec!["Topologies".to_string()];
            headers.extend(cat.objects().map(|x| format!("J({})", cat.obj_name(x))));
            ok(json!(entries), render_table(&headers, &body))
        }
        TopologyCmd::Rigidity => {
            let j = load::topology(&cat, o)?;
            let r = rigidity(&cat, &j);
            let names = |v: &[finsite::fincat::Obj]| v.iter().map(|&x| cat.obj_name(x).to_string()).collect::<Vec<_>>();
            let body: Vec<Vec<String>> = cat
                .objects()
                .map(|x| {
                    vec![
                        cat.obj_name(x).to_string(),
                        r.minimal[x.0].display(&cat),
                        r.generated[x.0].display(&cat),
                        if r.failures.contains(&x) { "FAIL" } else { "ok" }.to_string(),
                    ]
                })
                .collect();
            let table = format!(
                "rigid: {}\nirreducible: {{{}}}\n{}",
                yes_no(r.rigid),
                names(&r.irreducible).join(", "),
                render_table(&["object", "least cover", "generated by irreducibles", "covers"].map(String::from), &body)
            );
            let per_object: BTreeMap<String, Value> = cat
                .objects()
                .map(|x| {
                    (
                        cat.obj_name(x).to_string(),
                        json!({"minimal": r.minimal[x.0].names(&cat), "generated": r.generated[x.0].names(&cat)}),
                    )
                })
                .collect();
            let json = json!({
                "rigid": r.rigid,
                "irreducible": names(&r.irreducible),
                "objects": per_object,
                "failures": names(&r.failures),
            });
            Ok(Outcome { failed: !r.rigid, json, table })
        }
    }
}

fn torsion(cmd: &TorsionCmd, o: &Opts) -> Result<Outcome> {
    let cat = load::category(o)?;
    match cmd {
        TorsionCmd::Submodule => {
            let rule = load::rule(&cat, o)?;
            let v = load::module(&cat, o)?;
            let part = torsion_submodule(&cat, &rule, &v).map_err(lib)?;
            let dims = part.module.dims();
            let quotient: Vec<usize> = v.dims().iter().zip(dims).map(|(a, b)| a - b).collect();
            let table = two_col(&[
                ("module", dims_text(&cat, v.dims())),
                ("torsion part", dims_text(&cat, dims)),
                ("torsion-free quotient", dims_text(&cat, &quotient)),
            ]);
            let json = json!({
                "dims": dims_json(&cat, dims),
                "quotient_dims": dims_json(&cat, &quotient),
                "module": part.module.to_doc(&cat),
            });
            ok(json, table)
        }
        TorsionCmd::Classify => {
            let rule = load::rule(&cat, o)?;
            let v = load::module(&cat, o)?;
            let r = torsion_class(&cat, &rule, &v).map_err(lib)?;
            let witness = |w: &Option<finsite::torsion::ElementWitness>| match w {
                Some(w) => format!("({}) at {}", w.vector.join(", "), w.object),
                None => "none".into(),
            };
            let class = serde_json::to_value(r.classification).expect("serializes");
            let table = two_col(&[
                ("classification", class.as_str().unwrap_or_default().to_string()),
                ("torsion dims", r.dims.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(", ")),
                ("zero module", yes_no(r.zero_module)),
                ("torsion element", witness(&r.torsion_element)),
                ("non-torsion element", witness(&r.non_torsion_element)),
            ]);
            ok(serde_json::to_value(&r).expect("report serializes"), table)
        }
        TorsionCmd::Pair => {
            let rule = load::rule(&cat, o)?;
            let field = load::field(o)?;
            let r = verify_torsion_pair(&cat, &rule, field, o.samples, o.seed).map_err(lib)?;
            let mut table = two_col(&[
                ("torsion pair", if r.passed { "passed" } else { "FAILED" }.to_string()),
                ("modules checked", r.modules_checked.to_string()),
                ("hom pairs checked", r.hom_pairs_checked.to_string()),
            ]);
            for f in &r.failures {
                table.push_str(&format!(
                    "failure {}: {}\n  witness: {}\n",
                    f.condition,
                    f.detail,
                    serde_json::to_string(&f.witness).expect("module serializes")
                ));
            }
            Ok(Outcome { failed: !r.passed, json: serde_json::to_value(&r).expect("report serializes"), table })
        }
        TorsionCmd::Roundtrip => {
            let rule = load::rule(&cat, o)?;
            let p = match load::field(o)? {
                Field::Prime(p) => p,
                Field::Rational => return Err(lib(Error::InfiniteFieldUnsupported)),
            };
            let r = nullstellensatz_roundtrip(&cat, &rule, p).map_err(lib)?;
            let list = |m: &BTreeMap<String, Vec<Vec<String>>>| {
                let parts: Vec<String> = m
                    .iter()
                    .flat_map(|(x, ss)| ss.iter().map(move |s| format!("{{{}}} on {x}", s.join(", "))))
                    .collect();
                if parts.is_empty() {
                    "none".to_string()
                } else {
                    parts.join("; ")
                }
            };
            let table = two_col(&[
                ("round trip", if r.equal { "equal" } else { "DIFFERS" }.to_string()),
                ("missing", list(&r.missing)),
                ("extra", list(&r.extra)),
            ]);
            Ok(Outcome { failed: !r.equal, json: serde_json::to_value(&r).expect("report serializes"), table })
        }
    }
}

/// Detector verdicts, with a highlighted row when they disagree.
fn verdict_table(cat: &FiniteCategory, r: &SheafVerdict) -> String {
    let tf = |b: bool| b.to_string();
    let mut body = rows(&[
        ("sheaf", tf(r.sheaf)),
        ("separated", tf(r.separated)),
        ("torsion-free", tf(r.saturated.torsion_free)),
        ("saturated", format!("{} (R1 dims {})", r.saturated.saturated(), dims_text(cat, &r.saturated.r1_dims))),
        ("perpendicular", tf(r.perpendicular.perpendicular())),
    ]);
    body.push(vec!["detectors".into(), if r.consistent { "consistent" } else { "INCONSISTENT" }.into()]);
    let mut table = render_table(&["detector".to_string(), "verdict".to_string()], &body);
    for f in &r.sheaf_failures {
        table.push_str(&format!("{} at {} over {{{}}}: ({})\n", f.kind, f.object, f.sieve.join(", "), f.vector.join(", ")));
    }
    table
}

fn sheaf(cmd: &SheafCmd, o: &Opts) -> Result<Outcome> {
    let cat = load::category(o)?;
    match cmd {
        SheafCmd::Check => {
            let rule = load::rule(&cat, o)?;
            let v = load::module(&cat, o)?;
            let r = sheaf_verdict(&cat, &rule, &v).map_err(lib)?;
            let table = verdict_table(&cat, &r);
            let failed = !r.consistent || !r.sheaf;
            Ok(Outcome { failed, json: serde_json::to_value(&r).expect("verdict serializes"), table })
        }
        SheafCmd::Sheafify => {
            let rule = load::rule(&cat, o)?;
            let v = load::module(&cat, o)?;
            let s = sheafify(&cat, &rule, &v).map_err(lib)?;
            let table = two_col(&[
                ("input", dims_text(&cat, v.dims())),
                ("sheafification", dims_text(&cat, s.module.dims())),
                ("is sheaf", yes_no(s.is_sheaf)),
                ("unit kernel torsion", yes_no(s.unit_kernel_torsion)),
                ("unit cokernel torsion", yes_no(s.unit_cokernel_torsion)),
                ("unit is iso", yes_no(s.unit.is_iso())),
            ]);
            let json = json!({
                "module": s.module.to_doc(&cat),
                "is_sheaf": s.is_sheaf,
                "unit_kernel_torsion": s.unit_kernel_torsion,
                "unit_cokernel_torsion": s.unit_cokernel_torsion,
                "unit_is_iso": s.unit.is_iso(),
            });
            Ok(Outcome { failed: !s.verified(), json, table })
        }
        SheafCmd::Equivalence => {
            let j = load::topology(&cat, o)?;
            let field = load::field(o)?;
            let r = verify_rigid_equivalence(&cat, &j, field, o.samples, o.seed).map_err(lib)?;
            let mut table = two_col(&[
                ("equivalence", if r.passed { "passed" } else { "FAILED" }.to_string()),
                ("irreducible", format!("{{{}}}", r.irreducible.join(", "))),
                ("samples", r.samples.to_string()),
            ]);
            for f in &r.failures {
                table.push_str(&format!("failure: {f}\n"));
            }
            Ok(Outcome { failed: !r.passed, json: serde_json::to_value(&r).expect("report serializes"), table })
        }
    }
}

fn typen(cmd: &TypenCmd, o: &Opts) -> Result<Outcome> {
    match cmd {
        TypenCmd::Validate { spec, sequence } => {
            let (v, d, rigid) = match (spec, sequence) {
                (Some(s), _) => {
                    let spec = load::spec(s)?;
                    (validate_spec(&spec), spec.d_sequence(), Some(rigid_spec(&spec)))
                }
                (None, Some(s)) => {
                    let d = DSequence::parse(s).map_err(lib)?;
                    (validate_sequence(&d), d, None)
                }
                (None, None) => return Err("give --spec or --sequence".into()),
            };
            let horizon = o.horizon.unwrap_or(d.prefix.len().max(1) + 2);
            let values: Vec<String> = (0..horizon).map(|n| d.get(n).to_string()).collect();
            let mut pairs = vec![
                ("valid", yes_no(v.valid)),
                ("pieces", yes_no(v.pieces_ok)),
                ("indicator round trip", yes_no(v.indicator_ok)),
                ("d", format!("{}, ...", values.join(", "))),
            ];
            if let Some(r) = rigid {
                pairs.push(("rigid", yes_no(r)));
            }
            if let Some((n, msg)) = &v.first_violation {
                pairs.push(("first violation", format!("at {n}: {msg}")));
            }
            let mut json = serde_json::to_value(&v).expect("report serializes");
            json["d"] = json!(values);
            if let Some(r) = rigid {
                json["rigid"] = json!(r);
            }
            Ok(Outcome { failed: !v.valid, json, table: two_col(&pairs) })
        }
        TypenCmd::Census => {
            let n = o.horizon.ok_or("--horizon is required")?;
            let cap = o.budget.unwrap_or(1 << 16);
            if n >= usize::BITS as usize - 1 || (1usize << n) > cap {
                return Err(lib(Error::SizeBudgetExceeded(format!("2^{n} specs, budget {cap}"))));
            }
            let c = spec_census(n);
            let table = format!("generic: {}, nongeneric: {}\nall valid: {}\n", c.generic.len(), c.nongeneric.len(), yes_no(c.all_valid));
            let json = json!({
                "horizon": n,
                "generic": c.generic.len(),
                "nongeneric": c.nongeneric.len(),
                "all_valid": c.all_valid,
            });
            Ok(Outcome { failed: !c.all_valid, json, table })
        }
        TypenCmd::Pullback { object, rank, degree } => {
            let s = SymbolicSieve { object: *object, rank: *rank };
            let p = symbolic_pullback(s, *degree);
            ok(json!({"sieve": s, "degree": degree, "pullback": p}), format!("{s} pulled back along degree {degree}: {p}\n"))
        }
        TypenCmd::Crosscheck { spec } => {
            let spec = load::spec(spec)?;
            let n = o.horizon.ok_or("--horizon is required")?;
            let r = truncation_crosscheck(&spec, n).map_err(lib)?;
            let pass = |b: bool| if b { "ok" } else { "FAIL" }.to_string();
            let mut table = two_col(&[
                ("horizon", r.horizon.to_string()),
                ("sieve inventory", pass(r.sieve_inventory_ok)),
                ("pullbacks", pass(r.pullback_ok)),
                ("stability", pass(r.stability_ok)),
                ("transitivity", r.transitivity.clone()),
            ]);
            for f in &r.failures {
                table.push_str(&format!("failure: {f}\n"));
            }
            Ok(Outcome { failed: !r.passed(), json: serde_json::to_value(&r).expect("report serializes"), table })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use finsite::fixtures::fixture;
    use finsite::sheaves::{PerpendicularStatus, SaturationStatus};

    #[test]
    fn disagreeing_detectors_are_highlighted() {
        let cat = fixture("quiver2").unwrap();
        let r = SheafVerdict {
            separated: true,
            sheaf: true,
            saturated: SaturationStatus { torsion_free: true, r1_zero: false, r1_dims: vec![0, 1] },
            perpendicular: PerpendicularStatus { hom_zero: true, ext1_zero: true, failures: vec![] },
            sheaf_failures: vec![],
            consistent: false,
        };
        let text = verdict_table(&cat, &r);
        assert!(text.lines().any(|l| l.starts_with("detectors") && l.ends_with("INCONSISTENT")));
        assert!(text.contains("false (R1 dims x:0, y:1)"));
    }

    #[test]
    fn empty_enumeration_reports_zero() {
        let cat = fixture("quiver2").unwrap();
        assert_eq!(enumeration_table(&cat, &[], true), "0 topologies\n");
    }
}
