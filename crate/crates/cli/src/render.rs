use serde_json::{json, Value};

use cmodlab_core::invariants::{DeformationStep, Ext1Outcome, InvariantReport};
use cmodlab_core::laws::LawResult;

pub const SCHEMA: &str = "cmodlab/1";

fn eta(r: &InvariantReport) -> String {
    r.eta_valuation.map_or("-".into(), |e| e.to_string())
}

fn report_value(name: &str, r: &InvariantReport) -> Value {
    json!({
        "module": name,
        "phi": r.phi_length,
        "psi": r.psi_length,
        "eta_val": r.eta_valuation,
        "rank": r.rank_lambda,
        "defect": r.defect,
        "path": r.path,
        "codimension": r.codimension,
        "assumptions": r.assumptions,
        "report": r,
    })
}

fn with_schema(mut v: Value) -> Value {
    v.as_object_mut().expect("object").insert("schema".into(), SCHEMA.into());
    v
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

pub fn reports_json(reports: &[(String, InvariantReport)]) -> String {
    let v = match reports {
        [(name, r)] => with_schema(report_value(name, r)),
        _ => json!({
            "schema": SCHEMA,
            "results": reports.iter().map(|(n, r)| report_value(n, r)).collect::<Vec<_>>(),
        }),
    };
    pretty(&v)
}

/// Text columns first and last, numbers right-aligned between them.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len()).map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap()).collect();
    let line = |cells: Vec<String>| -> String {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i == 0 {
                s += &format!("{c:<w$}", w = widths[0]);
            } else if i + 1 == cells.len() {
                s += &format!("  {c:<w$}", w = widths[i]);
            } else {
                s += &format!("  {c:>w$}", w = widths[i]);
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    for r in rows {
        out += &line(r.clone());
    }
    out
}

pub fn reports_table(reports: &[(String, InvariantReport)]) -> String {
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|(n, r)| {
            vec![
                n.clone(),
                r.phi_length.to_string(),
                r.psi_length.to_string(),
                eta(r),
                r.rank_lambda.to_string(),
                r.defect.to_string(),
                r.codimension.to_string(),
                r.path.to_string(),
            ]
        })
        .collect();
    let mut out = table(&["module", "phi", "psi", "eta", "rank", "defect", "c", "path"], &rows);
    let mut notes: Vec<&String> = reports.iter().flat_map(|(_, r)| &r.assumptions).collect();
    notes.sort();
    notes.dedup();
    for n in notes {
        out += &format!("assumes: {n}\n");
    }
    out
}

pub fn laws_json(results: &[LawResult]) -> String {
    pretty(&json!({ "schema": SCHEMA, "laws": results }))
}

pub fn laws_table(results: &[LawResult]) -> String {
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.law.to_string(),
                if r.passed() { "pass".into() } else { "FAIL".into() },
                r.samples.to_string(),
                r.failures.len().to_string(),
                r.seed.to_string(),
                r.law.description().to_string(),
            ]
        })
        .collect();
    let mut out = table(&["law", "status", "samples", "failures", "seed", "statement"], &rows);
    for r in results {
        for f in &r.failures {
            out += &format!("\n{} sample {}: {}\n{}", r.law, f.sample, f.reason, f.input);
        }
    }
    out
}

fn identities(step: &DeformationStep) -> Value {
    json!({
        "psi": step.psi_identity(),
        "phi": step.phi_identity(),
        "defect": step.defect_invariant(),
    })
}

pub fn deform_json(step: &DeformationStep, names: &[String]) -> String {
    pretty(&json!({
        "schema": SCHEMA,
        "elements": step.elements.iter().map(|f| f.display(names).to_string()).collect::<Vec<_>>(),
        "orders": step.orders,
        "before": report_value("M", &step.before),
        "after": report_value("M/fM", &step.after),
        "identities": identities(step),
        "regularity": step.regularity,
        "levels": step.levels,
    }))
}

pub fn deform_table(step: &DeformationStep, names: &[String]) -> String {
    let mut out = String::new();
    for (f, o) in step.elements.iter().zip(&step.orders) {
        out += &format!("ord({}) = {o}\n", f.display(names));
    }
    let row = |label: &str, r: &InvariantReport| {
        vec![label.to_string(), r.phi_length.to_string(), r.psi_length.to_string(), eta(r), r.rank_lambda.to_string(), r.defect.to_string()]
    };
    out += &table(&["", "phi", "psi", "eta", "rank", "defect"], &[row("before", &step.before), row("after", &step.after)]);
    let mark = |b: bool| if b { "holds" } else { "FAILS" };
    let s = step.order_sum();
    out += &format!("Psi grows by rank*sum(ord) = {}: {}\n", step.before.rank_lambda as u32 * s, mark(step.psi_identity()));
    out += &format!("Phi grows by sum(ord) = {s}: {}\n", mark(step.phi_identity()));
    out += &format!("defect unchanged: {}\n", mark(step.defect_invariant()));
    out += &format!("regularity: {}\n", step.regularity);
    for a in &step.after.assumptions {
        out += &format!("assumes: {a}\n");
    }
    out
}

pub fn sweep_json(outcome: &Ext1Outcome, descent: &InvariantReport, agrees: bool) -> String {
    pretty(&json!({
        "schema": SCHEMA,
        "levels": outcome.levels,
        "stabilized": outcome.stabilized,
        "psi": outcome.psi_length,
        "eta_val": outcome.eta_valuation,
        "descent_psi": descent.psi_length,
        "agrees": agrees,
    }))
}

pub fn sweep_table(outcome: &Ext1Outcome, descent: &InvariantReport, agrees: bool) -> String {
    let rows: Vec<Vec<String>> = outcome
        .levels
        .iter()
        .map(|l| {
            vec![
                l.n.to_string(),
                l.d.to_string(),
                format!("{}{}", l.psi_length, if l.saturated { "+" } else { "" }),
                l.eta_valuation.map_or("-".into(), |e| e.to_string()),
            ]
        })
        .collect();
    let mut out = table(&["N", "D", "psi", "eta"], &rows);
    out += &format!("stabilized: {}\n", outcome.stabilized);
    out += &format!("descent psi: {} ({})\n", descent.psi_length, if agrees { "agrees" } else { "DISAGREES" });
    out
}
