//! Serialized result tables: JSON records, CSV rows and a plain-text layout.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::KOSZUL_SIGN_TAG;
use crate::ce::BIDEGREE_TAG;
use crate::error::Result;
use crate::linear::DimensionTable;

pub const CSV_HEADER: &str = "surface,field,weight,degree,dim";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub koszul_sign: String,
    pub bidegree: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            koszul_sign: KOSZUL_SIGN_TAG.to_string(),
            bidegree: BIDEGREE_TAG.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidegreeEntry {
    pub s: i64,
    pub t: i64,
    pub dim: usize,
}

/// One weight of one table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightRecord {
    pub surface: String,
    pub field: String,
    pub weight: u32,
    /// Dimensions in consecutive total degrees starting at `min_degree`.
    pub dims_by_total_degree: Vec<usize>,
    #[serde(default)]
    pub min_degree: i64,
    #[serde(default)]
    pub bidegrees: Vec<BidegreeEntry>,
    pub conventions: Conventions,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl WeightRecord {
    pub fn from_table(surface: &str, field: &str, table: &DimensionTable, weight: u32) -> Self {
        let (min_degree, dims) = table.dense_totals(weight);
        Self {
            surface: surface.to_string(),
            field: field.to_string(),
            weight,
            dims_by_total_degree: dims,
            min_degree,
            bidegrees: table
                .bidegrees_for(weight)
                .into_iter()
                .map(|(s, t, dim)| BidegreeEntry { s, t, dim })
                .collect(),
            conventions: Conventions::default(),
            warnings: Vec::new(),
        }
    }

    /// Rebuild the table. Bidegrees win when present.
    pub fn to_table(&self) -> DimensionTable {
        let mut t = DimensionTable::new();
        if self.bidegrees.is_empty() {
            for (i, &d) in self.dims_by_total_degree.iter().enumerate() {
                t.add_total(self.weight, self.min_degree + i as i64, d);
            }
        } else {
            for b in &self.bidegrees {
                t.add_bidegree(self.weight, b.s, b.t, b.dim);
            }
        }
        t
    }
}

/// One record per weight present in `table`, in weight order.
pub fn records(surface: &str, field: &str, table: &DimensionTable, warnings: &[String]) -> Vec<WeightRecord> {
    table
        .weights()
        .into_iter()
        .map(|w| {
            let mut r = WeightRecord::from_table(surface, field, table, w);
            r.warnings = warnings.to_vec();
            r
        })
        .collect()
}

pub fn to_json(records: &[WeightRecord]) -> Result<String> {
    Ok(serde_json::to_string_pretty(records)?)
}

pub fn from_json(text: &str) -> Result<Vec<WeightRecord>> {
    Ok(serde_json::from_str(text)?)
}

/// Merge records back into one table.
pub fn table_of(records: &[WeightRecord]) -> DimensionTable {
    let mut t = DimensionTable::new();
    for r in records {
        t.merge(&r.to_table());
    }
    t
}

pub fn to_csv(records: &[WeightRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        for (i, d) in r.dims_by_total_degree.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{},{}", r.surface, r.field, r.weight, r.min_degree + i as i64, d);
        }
    }
    out
}

pub fn to_pretty(records: &[WeightRecord]) -> String {
    let mut out = String::new();
    let mut last: Option<(&str, &str)> = None;
    for r in records {
        if last != Some((&r.surface, &r.field)) {
            let _ = writeln!(out, "{} over {}", r.surface, r.field);
            last = Some((&r.surface, &r.field));
        }
        let dims: Vec<String> = r.dims_by_total_degree.iter().map(ToString::to_string).collect();
        let shift = if r.min_degree != 0 { format!(" (from degree {})", r.min_degree) } else { String::new() };
        let _ = writeln!(out, "  k={}: {}{shift}", r.weight, dims.join(" "));
    }
    let warnings: Vec<&String> = records.first().map(|r| r.warnings.iter().collect()).unwrap_or_default();
    for w in warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn torus_table() -> DimensionTable {
        let mut t = DimensionTable::new();
        t.add_bidegree(1, 0, 0, 1);
        t.add_bidegree(1, 0, 1, 2);
        t.add_bidegree(1, 0, 2, 1);
        t
    }

    #[test]
    fn json_shape() {
        let recs = records("torus", "Q", &torus_table(), &[]);
        let v: serde_json::Value = serde_json::from_str(&to_json(&recs).unwrap()).unwrap();
        assert_eq!(v[0]["weight"], 1);
        assert_eq!(v[0]["dims_by_total_degree"], serde_json::json!([1, 2, 1]));
        assert_eq!(v[0]["conventions"]["bidegree"], "s=len-1");
        assert_eq!(v[0]["bidegrees"][1], serde_json::json!({"s": 0, "t": 1, "dim": 2}));
        assert!(v[0].get("warnings").is_none());
    }

    #[test]
    fn csv_rows() {
        let csv = to_csv(&records("torus", "Q", &torus_table(), &[]));
        assert_eq!(csv, "surface,field,weight,degree,dim\ntorus,Q,1,0,1\ntorus,Q,1,1,2\ntorus,Q,1,2,1\n");
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(from_json(r#"[{"surface":"t","field":"Q","weight":1,"dims_by_total_degree":[],"conventions":{"koszul_sign":"","bidegree":""},"extra":1}]"#).is_err());
    }

    fn tables() -> impl Strategy<Value = DimensionTable> {
        prop::collection::vec((1u32..5, -3i64..6, -6i64..4, 1usize..20), 0..25).prop_map(|entries| {
            let mut t = DimensionTable::new();
            for (w, s, t_, d) in entries {
                t.add_bidegree(w, s, t_, d);
            }
            t
        })
    }

    proptest! {
        #[test]
        fn json_round_trip(t in tables()) {
            let recs = records("closed-g2", "F_7", &t, &["note".to_string()]);
            let back = from_json(&to_json(&recs).unwrap()).unwrap();
            prop_assert_eq!(&back, &recs);
            prop_assert_eq!(table_of(&back), t);
        }
    }
}
