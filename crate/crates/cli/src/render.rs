//! Table and JSON rendering of homology results.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use torkh::{AbelianGroup, GradedHomology};

/// Version of the JSON layout below; bump on any incompatible change.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct NormJson {
    pub n_plus: i32,
    pub n_minus: i32,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupJson {
    pub h: i32,
    pub q: i32,
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

/// Top-level JSON document for one homology table, groups sorted by (q, h).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomologyJson {
    pub schema: u32,
    pub n: usize,
    pub m: usize,
    pub normalization: NormJson,
    pub groups: Vec<GroupJson>,
}

pub fn to_json(n: usize, m: usize, n_plus: i32, n_minus: i32, h: &GradedHomology) -> HomologyJson {
    let mut groups: Vec<GroupJson> = h
        .groups
        .iter()
        .map(|(&(hh, q), g)| GroupJson {
            h: hh,
            q,
            free_rank: g.free_rank,
            torsion: g.invariant_factors.clone(),
        })
        .collect();
    groups.sort_by_key(|g| (g.q, g.h));
    HomologyJson {
        schema: SCHEMA_VERSION,
        n,
        m,
        normalization: NormJson { n_plus, n_minus },
        groups,
    }
}

pub fn json_string(doc: &HomologyJson) -> String {
    serde_json::to_string_pretty(doc).expect("homology serializes")
}

/// Plain text table: q-degrees as columns, homological degrees as rows.
pub fn render_table(h: &GradedHomology) -> String {
    if h.groups.is_empty() {
        return "(trivial)\n".to_string();
    }
    let qs = h.q_degrees();
    let hs: Vec<i32> = {
        let min = h.groups.keys().map(|&(hh, _)| hh).min().unwrap();
        let max = h.groups.keys().map(|&(hh, _)| hh).max().unwrap();
        (min..=max).collect()
    };
    let mut cells: BTreeMap<(i32, i32), String> = BTreeMap::new();
    for (&(hh, q), g) in &h.groups {
        cells.insert((hh, q), g.to_string());
    }
    let mut widths: Vec<usize> = qs.iter().map(|q| q.to_string().len()).collect();
    for (i, &q) in qs.iter().enumerate() {
        for &hh in &hs {
            if let Some(c) = cells.get(&(hh, q)) {
                widths[i] = widths[i].max(c.chars().count());
            }
        }
    }
    let hw = hs
        .iter()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1)
        .max("h\\q".len());
    let mut out = String::new();
    out.push_str(&format!("{:>hw$}", "h\\q"));
    for (i, q) in qs.iter().enumerate() {
        out.push_str(&format!("  {:>w$}", q, w = widths[i]));
    }
    out.push('\n');
    for &hh in &hs {
        out.push_str(&format!("{:>hw$}", hh));
        for (i, &q) in qs.iter().enumerate() {
            let cell = cells.get(&(hh, q)).map_or(".", |s| s.as_str());
            let pad = widths[i].saturating_sub(cell.chars().count());
            out.push_str("  ");
            out.push_str(&" ".repeat(pad));
            out.push_str(cell);
        }
        out.push('\n');
    }
    out
}

/// One stable column rendered by homological degree.
pub fn render_column(col: &BTreeMap<i32, AbelianGroup>) -> String {
    if col.is_empty() {
        return "(trivial)\n".to_string();
    }
    let mut out = String::new();
    for (h, g) in col {
        out.push_str(&format!("h={h}: {g}\n"));
    }
    out
}
