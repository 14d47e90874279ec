//! The Bannai-Muzychuk criterion: sum the columns of a character table
//! block by block; the partition is a fusion exactly when the summed table
//! has one distinct row per class (identity included).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::QuadraticValue;
use crate::partition::{enumerate_partitions, tensor_ground, SetPartition};
use crate::product::{Entry, Orientation, TensorTable};
use crate::scheme::{CharRow, CharTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FusionError {
    #[error("partition ground {ground:?} does not match table columns 2..={columns}")]
    IndexMismatch { ground: Vec<u8>, columns: usize },
    #[error("{0} is not a fusion of this table")]
    NotAFusion(SetPartition),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionVerdict {
    pub partition: SetPartition,
    pub is_fusion: bool,
    pub distinct_row_count: usize,
    /// `|partition| + 1` when the partition is a fusion.
    pub fused_rank: Option<usize>,
}

/// All 4140 partitions of `{2, ..., 9}` in canonical order.
pub fn tensor_partitions() -> &'static [SetPartition] {
    static PARTS: OnceLock<Vec<SetPartition>> = OnceLock::new();
    PARTS.get_or_init(|| enumerate_partitions(&tensor_ground()).expect("ground of size 8"))
}

fn check_ground(p: &SetPartition, columns: usize) -> Result<(), FusionError> {
    let expected: Vec<u8> = (2..=columns as u8).collect();
    if p.ground() != expected.as_slice() {
        return Err(FusionError::IndexMismatch {
            ground: p.ground().to_vec(),
            columns,
        });
    }
    Ok(())
}

/// Column sums per block; the identity column (index 1) is kept first.
pub fn sum_columns<T: Entry>(rows: &[Vec<T>], p: &SetPartition) -> Vec<Vec<T>> {
    rows.iter()
        .map(|row| {
            let mut out = Vec::with_capacity(p.num_blocks() + 1);
            out.push(row[0].clone());
            for block in p.blocks() {
                let mut acc = T::zero();
                for &c in block {
                    acc = acc.plus(&row[c as usize - 1]);
                }
                out.push(acc);
            }
            out
        })
        .collect()
}

/// Groups row indices whose summed rows coincide, in order of first occurrence.
pub fn row_classes<T: Entry>(summed: &[Vec<T>]) -> Vec<Vec<usize>> {
    let mut index: HashMap<&[T], usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, row) in summed.iter().enumerate() {
        match index.get(row.as_slice()) {
            Some(&c) => classes[c].push(i),
            None => {
                index.insert(row.as_slice(), classes.len());
                classes.push(vec![i]);
            }
        }
    }
    classes
}

/// The criterion on raw rows (column `c` at position `c - 1`).
pub fn bm_check_rows<T: Entry>(rows: &[Vec<T>], p: &SetPartition) -> Result<FusionVerdict, FusionError> {
    check_ground(p, rows.first().map_or(0, Vec::len))?;
    let distinct = row_classes(&sum_columns(rows, p)).len();
    let is_fusion = distinct == p.num_blocks() + 1;
    Ok(FusionVerdict {
        partition: p.clone(),
        is_fusion,
        distinct_row_count: distinct,
        fused_rank: is_fusion.then_some(p.num_blocks() + 1),
    })
}

fn table_rows(t: &CharTable) -> Vec<Vec<QuadraticValue>> {
    t.rows.iter().map(|r| r.values.clone()).collect()
}

pub fn bm_check(t: &CharTable, p: &SetPartition) -> Result<FusionVerdict, FusionError> {
    bm_check_rows(&table_rows(t), p)
}

fn cmp_desc(a: &[QuadraticValue], b: &[QuadraticValue]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.partial_cmp(x) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

/// Character table of the fusion: one row per class of coinciding summed
/// rows, multiplicities added. The valency row comes first, the rest are
/// sorted by their first differing entry, largest first.
pub fn fused_table(t: &CharTable, p: &SetPartition) -> Result<CharTable, FusionError> {
    let rows = table_rows(t);
    if !bm_check_rows(&rows, p)?.is_fusion {
        return Err(FusionError::NotAFusion(p.clone()));
    }
    let summed = sum_columns(&rows, p);
    let mut fused: Vec<(CharRow, QuadraticValue)> = row_classes(&summed)
        .into_iter()
        .map(|class| {
            let label = class.iter().map(|&i| t.rows[i].label.as_str()).collect::<Vec<_>>().join("+");
            let mult = class.iter().map(|&i| t.multiplicities[i].clone()).sum();
            (
                CharRow {
                    label,
                    values: summed[class[0]].clone(),
                },
                mult,
            )
        })
        .collect();
    fused[1..].sort_by(|a, b| cmp_desc(&a.0.values, &b.0.values));
    let mut column_labels = vec!["1".to_string()];
    column_labels.extend(p.blocks().iter().map(|b| b.iter().map(|d| d.to_string()).collect::<String>()));
    let (rows, multiplicities) = fused.into_iter().unzip();
    Ok(CharTable {
        rows,
        multiplicities,
        column_labels,
    })
}

/// Positive verdicts among `parts`, in the order given.
pub fn scan_partitions<T: Entry>(rows: &[Vec<T>], parts: &[SetPartition]) -> Result<Vec<FusionVerdict>, FusionError> {
    let verdicts: Result<Vec<FusionVerdict>, FusionError> = parts.par_iter().map(|p| bm_check_rows(rows, p)).collect();
    Ok(verdicts?.into_iter().filter(|v| v.is_fusion).collect())
}

/// Every nontrivial fusion of the tensor square, in canonical partition
/// order. The discrete and single-block partitions are always fusions and
/// are left out.
pub fn scan_all(t: &TensorTable) -> Vec<FusionVerdict> {
    let mut v = scan_partitions(&t.rows(), tensor_partitions()).expect("tensor table has 9 columns");
    v.retain(|x| x.partition.is_nontrivial());
    v
}

/// Fusions of the tensor square coarsening the wreath classes of `orientation`
/// (the wreath class partition itself included).
pub fn scan_wreath(t: &TensorTable, orientation: Orientation) -> Vec<FusionVerdict> {
    let parts = orientation.block_partition().coarsenings();
    scan_partitions(&t.rows(), &parts).expect("tensor table has 9 columns")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::{tensor_square_table, wreath_table};
    use crate::scheme::{EigenData, Mode};

    fn q(v: i64) -> QuadraticValue {
        QuadraticValue::from_int(v)
    }

    fn sp(s: &str) -> SetPartition {
        SetPartition::parse(s).unwrap()
    }

    fn table(k: i64, l: i64, r: i64, s: i64) -> TensorTable {
        let e = EigenData::from_eigen(q(k), q(l), q(r), q(s), Mode::TableAlgebra).unwrap();
        tensor_square_table(&e.char_table())
    }

    fn petersen() -> TensorTable {
        table(3, 6, 1, -2)
    }

    fn values(t: &CharTable) -> Vec<Vec<QuadraticValue>> {
        t.rows.iter().map(|r| r.values.clone()).collect()
    }

    fn ints(v: &[&[i64]]) -> Vec<Vec<QuadraticValue>> {
        v.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn trivial_tensor_trivial() {
        let t = petersen();
        let v = bm_check(&t.table, &sp("23|47|5689")).unwrap();
        assert!(v.is_fusion);
        assert_eq!(v.fused_rank, Some(4));
        let f = fused_table(&t.table, &sp("23|47|5689")).unwrap();
        assert_eq!(values(&f), ints(&[&[1, 9, 9, 81], &[1, 9, -1, -9], &[1, -1, 9, -9], &[1, -1, -1, 1]]));
    }

    #[test]
    fn news_partition() {
        let t = table(4, 4, 1, -2);
        let v = bm_check(&t.table, &sp("249|37|5|68")).unwrap();
        assert!(v.is_fusion);
        assert_eq!(v.fused_rank, Some(5));
        let v = bm_check(&petersen().table, &sp("249|37|5|68")).unwrap();
        assert!(!v.is_fusion);
        assert!(v.distinct_row_count > 5);
    }

    #[test]
    fn rank_three_fused_table() {
        let f = fused_table(&petersen().table, &sp("2347|5689")).unwrap();
        assert_eq!(values(&f), ints(&[&[1, 18, 81], &[1, 8, -9], &[1, -2, 1]]));
        assert_eq!(f.multiplicities, vec![q(1), q(18), q(81)]);
        assert_eq!(f.multiplicity_sum(), q(100));
    }

    #[test]
    fn wreath_fused_table_matches_display() {
        let pet = EigenData::from_eigen(q(3), q(6), q(1), q(-2), Mode::TableAlgebra).unwrap().char_table();
        let t = tensor_square_table(&pet);
        let f = fused_table(&t.table, &sp("2|3|456|789")).unwrap();
        let w = wreath_table(&pet, Orientation::First).table;
        assert_eq!(values(&f), values(&w));
        assert_eq!(f.multiplicities, w.multiplicities);
    }

    #[test]
    fn single_block() {
        let f = fused_table(&petersen().table, &sp("23456789")).unwrap();
        assert_eq!(values(&f), ints(&[&[1, 99], &[1, -1]]));
        assert_eq!(f.multiplicities, vec![q(1), q(99)]);
    }

    #[test]
    fn not_a_fusion_error() {
        assert_eq!(
            fused_table(&petersen().table, &sp("249|37|5|68")),
            Err(FusionError::NotAFusion(sp("249|37|5|68")))
        );
        let small = SetPartition::parse_on("2|3", &[2, 3]).unwrap();
        assert!(matches!(bm_check(&petersen().table, &small), Err(FusionError::IndexMismatch { .. })));
    }

    #[test]
    fn rank3_scheme_itself() {
        let pet = EigenData::from_eigen(q(3), q(6), q(1), q(-2), Mode::TableAlgebra).unwrap().char_table();
        let p = SetPartition::parse_on("2|3", &[2, 3]).unwrap();
        assert!(bm_check(&pet, &p).unwrap().is_fusion);
        let p = SetPartition::parse_on("23", &[2, 3]).unwrap();
        assert!(bm_check(&pet, &p).unwrap().is_fusion);
    }

    #[test]
    fn petersen_scan_is_guaranteed_lattice() {
        let found: Vec<String> = scan_all(&petersen()).iter().map(|v| v.partition.to_string()).collect();
        let mut expect = vec![
            "2|3|47|58|69", "24|37|5|68|9", "23|4|56|7|89", "2|3|456|789", "258|369|4|7",
            "2|3|456789", "23|47|5689", "2347|5689", "235689|4|7", "23|456|789", "258|369|47", "23|456789", "235689|47",
        ];
        expect.sort();
        assert_eq!(found, expect);
    }

    #[test]
    fn wreath_scan_petersen() {
        let found: Vec<String> = scan_wreath(&petersen(), Orientation::First)
            .iter()
            .map(|v| v.partition.to_string())
            .collect();
        assert_eq!(found, vec!["23456789", "23|456789", "23|456|789", "2|3|456789", "2|3|456|789"]);
    }

    #[test]
    fn scan_is_deterministic() {
        let a = scan_all(&petersen());
        let b = scan_all(&petersen());
        assert_eq!(a, b);
    }
}
