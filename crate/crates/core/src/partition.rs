//! Set partitions of small index sets.
//!
//! The wire format joins blocks with `|`, digits ascending inside each block
//! and blocks ordered by their minimum: `24|37|5|68|9`. The identity index `1`
//! never appears; its singleton class is implicit.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest ground set we enumerate (Bell(12) = 4213597).
pub const MAX_GROUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("malformed partition string `{0}`")]
    BadGrammar(String),
    #[error("index {0} appears more than once")]
    DuplicateIndex(u8),
    #[error("index {0} of the ground set is missing")]
    MissingIndex(u8),
    #[error("index {0} is not in the ground set")]
    UnknownIndex(u8),
    #[error("partitions are over different ground sets")]
    GroundMismatch,
    #[error("ground set of size {0} exceeds the limit of {MAX_GROUND}")]
    GroundTooLarge(usize),
}

fn elem_char(e: u8) -> char {
    std::char::from_digit(e as u32, 36).expect("element below 36")
}

fn char_elem(c: char) -> Option<u8> {
    c.to_digit(36).map(|d| d as u8)
}

/// The ground set `{2,...,9}` of non-identity tensor-square indices.
pub fn tensor_ground() -> Vec<u8> {
    (2..=9).collect()
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SetPartition {
    ground: Vec<u8>,
    blocks: Vec<Vec<u8>>,
}

impl SetPartition {
    /// Builds a partition, canonicalizing block order. The ground set is the
    /// union of the blocks.
    pub fn from_blocks(blocks: Vec<Vec<u8>>) -> Result<Self, PartitionError> {
        let mut seen = BTreeSet::new();
        for &e in blocks.iter().flatten() {
            if !seen.insert(e) {
                return Err(PartitionError::DuplicateIndex(e));
            }
        }
        let mut blocks: Vec<Vec<u8>> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(SetPartition {
            ground: seen.into_iter().collect(),
            blocks,
        })
    }

    /// Like [`from_blocks`](Self::from_blocks) but checks coverage of `ground`.
    pub fn on_ground(ground: &[u8], blocks: Vec<Vec<u8>>) -> Result<Self, PartitionError> {
        let p = Self::from_blocks(blocks)?;
        if let Some(&e) = p.ground.iter().find(|e| !ground.contains(e)) {
            return Err(PartitionError::UnknownIndex(e));
        }
        if let Some(&e) = ground.iter().find(|e| !p.ground.contains(e)) {
            return Err(PartitionError::MissingIndex(e));
        }
        Ok(p)
    }

    pub fn discrete(ground: &[u8]) -> Self {
        Self::from_blocks(ground.iter().map(|&e| vec![e]).collect()).expect("distinct elements")
    }

    pub fn single_block(ground: &[u8]) -> Self {
        Self::from_blocks(vec![ground.to_vec()]).expect("distinct elements")
    }

    /// Parses over the default ground set `{2,...,9}`.
    pub fn parse(s: &str) -> Result<Self, PartitionError> {
        Self::parse_on(s, &tensor_ground())
    }

    pub fn parse_on(s: &str, ground: &[u8]) -> Result<Self, PartitionError> {
        let bad = || PartitionError::BadGrammar(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let mut blocks = Vec::new();
        for part in s.split('|') {
            if part.is_empty() {
                return Err(bad());
            }
            let block = part.chars().map(char_elem).collect::<Option<Vec<u8>>>().ok_or_else(bad)?;
            blocks.push(block);
        }
        Self::on_ground(ground, blocks)
    }

    pub fn ground(&self) -> &[u8] {
        &self.ground
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Rank of the fused scheme: blocks plus the implicit identity class.
    pub fn rank(&self) -> usize {
        self.blocks.len() + 1
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    pub fn is_single_block(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Neither the discrete partition nor the single block.
    pub fn is_nontrivial(&self) -> bool {
        !self.is_discrete() && !self.is_single_block()
    }

    pub fn block_of(&self, e: u8) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&e))
    }

    /// True iff every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> Result<bool, PartitionError> {
        if self.ground != other.ground {
            return Err(PartitionError::GroundMismatch);
        }
        Ok(self.blocks.iter().all(|b| {
            let target = other.block_of(b[0]);
            b.iter().all(|&e| other.block_of(e) == target)
        }))
    }

    /// Image under an element map (applied blockwise, then re-canonicalized).
    pub fn map_elements(&self, f: impl Fn(u8) -> u8) -> Self {
        Self::from_blocks(self.blocks.iter().map(|b| b.iter().map(|&e| f(e)).collect()).collect())
            .expect("element map must be injective")
    }

    /// All partitions whose blocks are unions of blocks of `self`, in
    /// canonical order.
    pub fn coarsenings(&self) -> Vec<SetPartition> {
        let mut out: Vec<SetPartition> = rgs_iter(self.blocks.len())
            .map(|rgs| {
                let nb = rgs.iter().copied().max().map_or(0, |m| m as usize + 1);
                let mut merged = vec![Vec::new(); nb];
                for (i, &g) in rgs.iter().enumerate() {
                    merged[g as usize].extend_from_slice(&self.blocks[i]);
                }
                SetPartition::from_blocks(merged).expect("disjoint blocks")
            })
            .collect();
        sort_canonical(&mut out);
        out
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for &e in b {
                write!(f, "{}", elem_char(e))?;
            }
        }
        Ok(())
    }
}

/// Canonical string order, the order of every listing.
impl Ord for SetPartition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.to_string().cmp(&other.to_string()).then_with(|| self.ground.cmp(&other.ground))
    }
}

impl PartialOrd for SetPartition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for SetPartition {
    type Err = PartitionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SetPartition::parse(s)
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SetPartition {
    /// Deserializes with the ground set taken from the string itself.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let mut blocks = Vec::new();
        for part in s.split('|') {
            let b = part
                .chars()
                .map(char_elem)
                .collect::<Option<Vec<u8>>>()
                .filter(|b| !b.is_empty())
                .ok_or_else(|| serde::de::Error::custom(format!("bad partition `{s}`")))?;
            blocks.push(b);
        }
        SetPartition::from_blocks(blocks).map_err(serde::de::Error::custom)
    }
}

/// Sorts by canonical string, the order used in every report.
pub fn sort_canonical(parts: &mut [SetPartition]) {
    parts.sort_by_cached_key(|p| p.to_string());
}

/// Restricted growth strings of length `n` in lexicographic order.
fn rgs_iter(n: usize) -> impl Iterator<Item = Vec<u8>> {
    let mut cur: Option<Vec<u8>> = Some(vec![0; n]);
    std::iter::from_fn(move || {
        let out = cur.take()?;
        // next RGS: bump the rightmost position that may grow
        let mut next = out.clone();
        let mut i = n;
        while i > 1 {
            i -= 1;
            let max_prefix = *next[..i].iter().max().expect("nonempty prefix");
            if next[i] <= max_prefix {
                next[i] += 1;
                for x in &mut next[i + 1..] {
                    *x = 0;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// All set partitions of `ground`, in canonical string order.
pub fn enumerate_partitions(ground: &[u8]) -> Result<Vec<SetPartition>, PartitionError> {
    if ground.len() > MAX_GROUND {
        return Err(PartitionError::GroundTooLarge(ground.len()));
    }
    let mut g = ground.to_vec();
    g.sort_unstable();
    g.dedup();
    if g.is_empty() {
        // the empty partition
        return Ok(vec![SetPartition::discrete(&g)]);
    }
    Ok(SetPartition::discrete(&g).coarsenings())
}

/// Cover relations of the refinement order restricted to `parts`: pairs
/// `(i, j)` with `parts[i]` strictly finer than `parts[j]` and nothing from
/// `parts` strictly in between.
pub fn hasse_edges(parts: &[SetPartition]) -> Vec<(usize, usize)> {
    let n = parts.len();
    let below: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && parts[i].refines(&parts[j]).unwrap_or(false))
                .collect()
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if below[i][j] && !(0..n).any(|m| below[i][m] && below[m][j]) {
                edges.push((i, j));
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SetPartition {
        SetPartition::parse(s).unwrap()
    }

    #[test]
    fn bell_numbers() {
        let bell = [1usize, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in bell.iter().enumerate() {
            let ground: Vec<u8> = (2..2 + n as u8).collect();
            assert_eq!(enumerate_partitions(&ground).unwrap().len(), b, "n = {n}");
        }
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let all = enumerate_partitions(&tensor_ground()).unwrap();
        let strs: Vec<String> = all.iter().map(|p| p.to_string()).collect();
        let mut sorted = strs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(strs, sorted);
    }

    #[test]
    fn ground_too_large() {
        let g: Vec<u8> = (0..13).collect();
        assert_eq!(enumerate_partitions(&g), Err(PartitionError::GroundTooLarge(13)));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(sp("5|24|37|68|9").to_string(), "24|37|5|68|9");
        assert_eq!(sp("23|47|5689").blocks(), &[vec![2, 3], vec![4, 7], vec![5, 6, 8, 9]]);
        assert_eq!(sp("42|3|98765").to_string(), "24|3|56789");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(SetPartition::parse("23|47|56899"), Err(PartitionError::DuplicateIndex(9)));
        assert_eq!(SetPartition::parse("23|47|568"), Err(PartitionError::MissingIndex(9)));
        assert!(matches!(SetPartition::parse("23||4"), Err(PartitionError::BadGrammar(_))));
        assert!(matches!(SetPartition::parse("2 3"), Err(PartitionError::BadGrammar(_))));
        assert_eq!(SetPartition::parse("123|456789"), Err(PartitionError::UnknownIndex(1)));
    }

    #[test]
    fn refinement() {
        assert!(sp("23|4|56|7|89").refines(&sp("23|456|789")).unwrap());
        assert!(!sp("23|47|5689").refines(&sp("2|3|456789")).unwrap());
        let p = sp("24|37|5|68|9");
        assert!(p.refines(&p).unwrap());
        let q = SetPartition::parse_on("23|4", &[2, 3, 4]).unwrap();
        assert_eq!(p.refines(&q), Err(PartitionError::GroundMismatch));
    }

    #[test]
    fn coarsenings_of_wreath_partition() {
        let c = sp("2|3|456|789").coarsenings();
        assert_eq!(c.len(), 15);
        assert!(c.contains(&sp("23|456789")));
        assert!(c.contains(&sp("2|3456789")));
        assert_eq!(sp("23456789").coarsenings(), vec![sp("23456789")]);
        assert_eq!(SetPartition::discrete(&tensor_ground()).coarsenings().len(), 4140);
    }

    #[test]
    fn hasse_of_chain_and_diamond() {
        let parts = vec![sp("2|3|4|5|6|7|8|9"), sp("23|4|56|7|89"), sp("23|456|789"), sp("23456789")];
        assert_eq!(hasse_edges(&parts), vec![(0, 1), (1, 2), (2, 3)]);
        let parts = vec![sp("2|3|4|5|6|7|8|9"), sp("23|4|5|6|7|8|9"), sp("2|3|45|6|7|8|9"), sp("23|45|6|7|8|9")];
        assert_eq!(hasse_edges(&parts), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn json_roundtrip() {
        let p = sp("24|37|5|68|9");
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, "\"24|37|5|68|9\"");
        assert_eq!(serde_json::from_str::<SetPartition>(&j).unwrap(), p);
    }
}
