//! Exact JSON trees. Every number is a string such as `"-3/4"` or `"1/2 + 1/2*sqrt(5)"`.

use serde_json::{json, Value};

use crate::algebra::{FieldElement, HbarLaurent};
use crate::oracles::{BelyiTable, DessinTable};
use crate::recursion::{order_of, point_of, ExpansionTable, Multidifferential};
use crate::wave::WaveExpansion;
use crate::wkb::{OperatorPolynomial, ResidualLedger};

pub fn field(c: &FieldElement) -> Value {
    Value::String(c.to_exact_string())
}

pub fn multidifferential(w: &Multidifferential) -> Value {
    let terms: Vec<Value> = w
        .terms
        .iter()
        .map(|(key, c)| {
            let slots: Vec<Value> = key.iter().map(|&b| json!([point_of(b), order_of(b)])).collect();
            json!({ "key": slots, "coeff": field(c) })
        })
        .collect();
    json!({
        "g": w.g,
        "n": w.n,
        "points": w.points.iter().map(field).collect::<Vec<_>>(),
        "terms": terms,
    })
}

pub fn expansion_table(t: &ExpansionTable) -> Value {
    let entries: Vec<Value> = t.entries.iter().map(|(mu, c)| json!({ "mu": mu, "value": field(c) })).collect();
    json!({ "g": t.g, "n": t.n, "depth": t.depth, "entries": entries })
}

pub fn hbar_laurent(h: &HbarLaurent) -> Value {
    Value::Object(h.terms().iter().map(|(k, c)| (k.to_string(), field(c))).collect())
}

pub fn wave(w: &WaveExpansion, var: &str) -> Value {
    json!({ "S": w.s.iter().map(|s| s.to_expr(var)).collect::<Vec<_>>() })
}

pub fn ledger(l: &ResidualLedger, var: &str) -> Value {
    json!({
        "all_zero": l.all_zero(),
        "orders": l.orders.iter().map(|r| r.to_expr(var)).collect::<Vec<_>>(),
    })
}

pub fn operator(op: &OperatorPolynomial) -> Value {
    Value::String(op.to_text())
}

pub fn dessin_table(t: &DessinTable) -> Value {
    let rows = |m: &Vec<Vec<FieldElement>>| -> Vec<Value> {
        m.iter().map(|row| Value::Array(row.iter().map(field).collect())).collect()
    };
    json!({
        "e_max": t.e_max,
        "disconnected": rows(&t.disconnected),
        "connected": rows(&t.connected),
        "connected_direct": rows(&t.connected_direct),
    })
}

pub fn belyi_table(t: &BelyiTable) -> Value {
    let entries: Vec<Value> =
        t.counts.iter().map(|((g, mu), c)| json!({ "g": g, "mu": mu, "value": field(c) })).collect();
    json!({ "e": t.e, "entries": entries })
}
