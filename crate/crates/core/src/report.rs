//! Output documents: scan reports, classification summaries and DOT
//! lattices. Everything here is deterministic so identical runs produce
//! identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arith::QuadraticValue;
use crate::classify::{Classification, ClassificationRecord, Summary, Verdict};
use crate::fusion::{fused_table, FusionVerdict};
use crate::partition::{hasse_edges, sort_canonical, SetPartition};
use crate::scheme::{CharTable, EigenData};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub source: String,
    pub eigen: EigenData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionEntry {
    pub partition: SetPartition,
    pub rank: usize,
    /// Valency row of the fused table, identity class first.
    pub valencies: Vec<QuadraticValue>,
    pub multiplicities: Vec<QuadraticValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub finer: SetPartition,
    pub coarser: SetPartition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionReportDoc {
    pub input: InputEcho,
    pub count: usize,
    pub fusions: Vec<FusionEntry>,
    pub covers: Vec<Cover>,
    pub version: String,
}

impl FusionReportDoc {
    /// `table` is the tensor square table the verdicts were computed on.
    pub fn new(input: InputEcho, table: &CharTable, verdicts: &[FusionVerdict]) -> Self {
        let mut parts: Vec<SetPartition> = verdicts.iter().filter(|v| v.is_fusion).map(|v| v.partition.clone()).collect();
        sort_canonical(&mut parts);
        let fusions: Vec<FusionEntry> = parts
            .iter()
            .map(|p| {
                let f = fused_table(table, p).expect("verdict says fusion");
                FusionEntry {
                    partition: p.clone(),
                    rank: p.rank(),
                    valencies: f.rows[0].values.clone(),
                    multiplicities: f.multiplicities.clone(),
                }
            })
            .collect();
        let covers = hasse_edges(&parts)
            .into_iter()
            .map(|(i, j)| Cover {
                finer: parts[i].clone(),
                coarser: parts[j].clone(),
            })
            .collect();
        FusionReportDoc {
            input,
            count: fusions.len(),
            fusions,
            covers,
            version: TOOL_VERSION.to_string(),
        }
    }

    pub fn to_text(&self) -> String {
        let e = &self.input.eigen;
        let mut out = String::new();
        let _ = writeln!(out, "{}: k={} l={} r={} s={}", self.input.source, e.k, e.l, e.r, e.s);
        let _ = writeln!(out, "{} fusions", self.count);
        for f in &self.fusions {
            let join = |v: &[QuadraticValue]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
            let _ = writeln!(
                out,
                "rank {:>2}  {:<20} valencies [{}]  multiplicities [{}]",
                f.rank,
                f.partition.to_string(),
                join(&f.valencies),
                join(&f.multiplicities)
            );
        }
        out
    }
}

/// Hasse diagram of `parts` under refinement, one subgraph per rank, finer
/// partitions pointing at the partitions covering them.
pub fn lattice_dot(name: &str, parts: &[SetPartition]) -> String {
    let mut parts = parts.to_vec();
    sort_canonical(&mut parts);
    let mut by_rank: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, p) in parts.iter().enumerate() {
        by_rank.entry(p.rank()).or_default().push(i);
    }
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "'"));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=box];");
    for (rank, ids) in by_rank.iter().rev() {
        let _ = writeln!(out, "  subgraph rank_{rank} {{");
        let _ = writeln!(out, "    rank=same;");
        let _ = writeln!(out, "    label=\"Rank {rank}\";");
        for &i in ids {
            let _ = writeln!(out, "    n{i} [label=\"{}\"];", parts[i]);
        }
        let _ = writeln!(out, "  }}");
    }
    for (i, j) in hasse_edges(&parts) {
        let _ = writeln!(out, "  n{i} -> n{j};");
    }
    out.push_str("}\n");
    out
}

/// Per-partition line of a classification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordLine {
    pub partition: SetPartition,
    pub verdict: String,
    pub families: Vec<String>,
    pub certificate: Option<String>,
    pub isolated: Vec<String>,
    pub warnings: Vec<String>,
}

impl From<&ClassificationRecord> for RecordLine {
    fn from(r: &ClassificationRecord) -> Self {
        let mut isolated: Vec<String> = r.isolated.iter().map(|x| x.point.to_string()).collect();
        if let Verdict::Isolated(points) = &r.verdict {
            isolated.extend(points.iter().map(|x| x.point.to_string()));
        }
        isolated.sort();
        isolated.dedup();
        RecordLine {
            partition: r.partition.clone(),
            verdict: r.verdict.label().to_string(),
            families: r.verdict.families().into_iter().map(str::to_string).collect(),
            certificate: match &r.verdict {
                Verdict::Infeasible(c) => Some(c.kind().to_string()),
                _ => None,
            },
            isolated,
            warnings: r.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationDoc {
    pub summary: Summary,
    pub records: Vec<RecordLine>,
    pub version: String,
}

impl ClassificationDoc {
    /// Keeps every record unless `all` is false, in which case the
    /// infeasible ones are dropped.
    pub fn new(c: &Classification, all: bool) -> Self {
        ClassificationDoc {
            summary: c.summary.clone(),
            records: c
                .records
                .iter()
                .filter(|r| all || !matches!(r.verdict, Verdict::Infeasible(_)))
                .map(RecordLine::from)
                .collect(),
            version: TOOL_VERSION.to_string(),
        }
    }

    pub fn to_text(&self) -> String {
        let s = &self.summary;
        let mut out = String::new();
        let _ = writeln!(out, "partitions   {}", s.total);
        let _ = writeln!(out, "trivial      {}", s.trivial);
        let _ = writeln!(out, "guaranteed   {}", s.guaranteed);
        for (id, n) in &s.family {
            let _ = writeln!(out, "family {id:<6}{n}");
        }
        let _ = writeln!(out, "isolated     {}", s.isolated);
        let _ = writeln!(out, "infeasible   {}", s.infeasible);
        for (kind, n) in &s.certificate_kinds {
            let _ = writeln!(out, "  {kind:<18}{n}");
        }
        let _ = writeln!(out, "unresolved   {}", s.unresolved);
        for r in &self.records {
            let mut line = format!("{:<20} {}", r.partition.to_string(), r.verdict);
            if !r.families.is_empty() {
                let _ = write!(line, " {}", r.families.join(","));
            }
            if let Some(c) = &r.certificate {
                let _ = write!(line, " ({c})");
            }
            for p in &r.isolated {
                let _ = write!(line, " @ {p}");
            }
            let _ = writeln!(out, "{line}");
            for w in &r.warnings {
                let _ = writeln!(out, "    warning: {w}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::scan_all;
    use crate::product::tensor_square_table;
    use crate::scheme::Mode;

    fn petersen_doc() -> FusionReportDoc {
        let q = QuadraticValue::from_int;
        let e = EigenData::from_eigen(q(3), q(6), q(1), q(-2), Mode::Graph).unwrap();
        let t = tensor_square_table(&e.char_table());
        FusionReportDoc::new(
            InputEcho {
                source: "petersen".into(),
                eigen: e,
            },
            &t.table,
            &scan_all(&t),
        )
    }

    #[test]
    fn report_round_trips() {
        let doc = petersen_doc();
        assert_eq!(doc.count, 13);
        let json = serde_json::to_string(&doc).unwrap();
        let back: FusionReportDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn fused_sums() {
        let doc = petersen_doc();
        let hundred = QuadraticValue::from_int(100);
        for f in &doc.fusions {
            assert_eq!(f.multiplicities.iter().cloned().sum::<QuadraticValue>(), hundred);
            assert_eq!(f.valencies.iter().cloned().sum::<QuadraticValue>(), hundred);
            assert_eq!(f.valencies.len(), f.rank);
        }
    }

    #[test]
    fn dot_edges_are_covers() {
        let parts: Vec<SetPartition> = ["2|3|456|789", "23|456|789", "2|3|456789", "23|456789", "23456789"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let dot = lattice_dot("wreath", &parts);
        assert_eq!(dot.matches("->").count(), 5);
        assert!(dot.contains("rank=same"));
        assert!(dot.starts_with("digraph"));
    }
}
