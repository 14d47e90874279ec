//! Which summed rows can coincide, and the ways of merging them into
//! exactly `|p| + 1` classes.

use serde::{Deserialize, Serialize};

use super::chart::{certify_nonzero, NonzeroProof};
use crate::arith::{MultiPoly, SieveSet};
use crate::fusion::sum_columns;
use crate::partition::SetPartition;

/// Where a distinctness proof looks: one summed column, or the whole row sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    Column(usize),
    RowSum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distinct {
    pub witness: Witness,
    pub poly: MultiPoly,
    pub proof: NonzeroProof,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairStatus {
    /// The summed rows agree as polynomials.
    Identical,
    /// Provably different on the primitive region.
    Distinct(Distinct),
    /// Equal exactly where all of these vanish.
    Open(Vec<MultiPoly>),
}

/// Summed rows of a partition and the status of every row pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityGraph {
    pub summed: Vec<Vec<MultiPoly>>,
    /// Indexed by `pair_index(a, b)` for `a < b`.
    pub pairs: Vec<PairStatus>,
}

pub const ROWS: usize = 9;

pub fn pair_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    a * ROWS + b
}

pub fn difference(x: &[MultiPoly], y: &[MultiPoly]) -> Vec<MultiPoly> {
    x.iter().zip(y).map(|(p, q)| p - q).collect()
}

pub fn analyse_pair(x: &[MultiPoly], y: &[MultiPoly], u: &SieveSet) -> PairStatus {
    let diff = difference(x, y);
    if diff.iter().all(MultiPoly::is_zero) {
        return PairStatus::Identical;
    }
    for (c, d) in diff.iter().enumerate() {
        if let Some(proof) = certify_nonzero(d, u) {
            return PairStatus::Distinct(Distinct {
                witness: Witness::Column(c),
                poly: d.clone(),
                proof,
            });
        }
    }
    let total: MultiPoly = diff.iter().cloned().sum();
    if let Some(proof) = certify_nonzero(&total, u) {
        return PairStatus::Distinct(Distinct {
            witness: Witness::RowSum,
            poly: total,
            proof,
        });
    }
    let mut eqs: Vec<MultiPoly> = diff.into_iter().filter(|d| !d.is_zero()).map(|d| d.primitive()).collect();
    eqs.sort_by_cached_key(|e| e.to_string());
    eqs.dedup();
    PairStatus::Open(eqs)
}

impl EqualityGraph {
    pub fn build(rows: &[Vec<MultiPoly>], p: &SetPartition, u: &SieveSet) -> Self {
        let summed = sum_columns(rows, p);
        let mut pairs = vec![PairStatus::Identical; ROWS * ROWS];
        for a in 0..ROWS {
            for b in a + 1..ROWS {
                pairs[pair_index(a, b)] = analyse_pair(&summed[a], &summed[b], u);
            }
        }
        EqualityGraph { summed, pairs }
    }

    pub fn status(&self, a: usize, b: usize) -> &PairStatus {
        &self.pairs[pair_index(a, b)]
    }

    pub fn can_merge(&self, a: usize, b: usize) -> bool {
        a == b || !matches!(self.status(a, b), PairStatus::Distinct(_))
    }

    pub fn identical(&self, a: usize, b: usize) -> bool {
        a == b || matches!(self.status(a, b), PairStatus::Identical)
    }

    /// Classes of symbolically identical rows.
    pub fn identical_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..ROWS {
            match classes.iter_mut().find(|c| self.identical(c[0], a)) {
                Some(c) => c.push(a),
                None => classes.push(vec![a]),
            }
        }
        classes
    }

    /// A largest set of rows that are pairwise provably distinct.
    pub fn max_distinct_set(&self) -> Vec<usize> {
        let mut best = Vec::new();
        for mask in 0u32..(1 << ROWS) {
            if mask.count_ones() as usize <= best.len() {
                continue;
            }
            let set: Vec<usize> = (0..ROWS).filter(|&i| mask & (1 << i) != 0).collect();
            let ok = set.iter().enumerate().all(|(x, &a)| set[x + 1..].iter().all(|&b| !self.can_merge(a, b)));
            if ok {
                best = set;
            }
        }
        best
    }

    /// All partitions of the rows into exactly `target` classes such that
    /// identical rows share a class and no class holds a provably distinct
    /// pair. Each result lists classes by smallest member.
    pub fn row_merges(&self, target: usize) -> Vec<Vec<Vec<usize>>> {
        let nodes = self.identical_classes();
        let mut out = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        self.extend_merges(&nodes, 0, target, &mut blocks, &mut out);
        out
    }

    fn extend_merges(
        &self,
        nodes: &[Vec<usize>],
        next: usize,
        target: usize,
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let remaining = nodes.len() - next;
        if blocks.len() > target || blocks.len() + remaining < target {
            return;
        }
        if next == nodes.len() {
            if blocks.len() == target {
                out.push(blocks.clone());
            }
            return;
        }
        let node = &nodes[next];
        for i in 0..blocks.len() {
            if blocks[i].iter().all(|&a| node.iter().all(|&b| self.can_merge(a, b))) {
                let len = blocks[i].len();
                blocks[i].extend_from_slice(node);
                self.extend_merges(nodes, next + 1, target, blocks, out);
                blocks[i].truncate(len);
            }
        }
        blocks.push(node.clone());
        self.extend_merges(nodes, next + 1, target, blocks, out);
        blocks.pop();
    }

    /// Equations forcing every class of `merge` to collapse to one row.
    pub fn merge_equations(&self, merge: &[Vec<usize>]) -> Vec<MultiPoly> {
        let mut eqs = Vec::new();
        for block in merge {
            for (x, &a) in block.iter().enumerate() {
                for &b in &block[x + 1..] {
                    if let PairStatus::Open(e) = self.status(a, b) {
                        eqs.extend(e.iter().cloned());
                    }
                }
            }
        }
        eqs.sort_by_cached_key(|e| e.to_string());
        eqs.dedup();
        eqs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::table::symbolic_tensor_table;

    fn graph(s: &str) -> EqualityGraph {
        EqualityGraph::build(&symbolic_tensor_table().rows, &SetPartition::parse(s).unwrap(), &SieveSet::default())
    }

    #[test]
    fn wreath_rows_merge() {
        let g = graph("2|3|456|789");
        // chi11 and chi12 vanish on both wreath sums
        assert!(g.identical(4, 5));
        assert!(g.identical(3, 4));
        assert_eq!(g.row_merges(5).len(), 1);
    }

    #[test]
    fn valency_row_isolated() {
        let g = graph("2678|34|59");
        assert!(!g.can_merge(0, 4));
        assert!((1..9).all(|b| !g.can_merge(0, b)));
    }

    #[test]
    fn discrete_partition_has_no_open_pairs() {
        let g = graph("2|3|4|5|6|7|8|9");
        assert!((0..9).all(|a| (a + 1..9).all(|b| !g.can_merge(a, b))));
        assert_eq!(g.max_distinct_set().len(), 9);
    }
}
