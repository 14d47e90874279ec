//! Tensor-square and wreath-product character tables, and the flip and
//! switch actions on tensor indices.
//!
//! The basis element `A_ij = A_i (x) A_j` of the tensor square is numbered
//! `C_{3j+i+1}`, so index 1 is the identity and `{2, ..., 9}` are the
//! non-identity classes that partitions range over.

use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::arith::{MultiPoly, QuadraticValue};
use crate::partition::SetPartition;
use crate::scheme::{CharRow, CharTable};

/// Scalars a character table can be built from: exact numbers or polynomials.
pub trait Entry: Clone + Eq + Hash + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
}

impl Entry for QuadraticValue {
    fn zero() -> Self {
        QuadraticValue::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl Entry for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

/// Tensor index of `A_ij`.
pub fn tensor_index(i: usize, j: usize) -> u8 {
    (3 * j + i + 1) as u8
}

/// Inverse of [`tensor_index`].
pub fn tensor_pair(c: u8) -> (usize, usize) {
    let c = c as usize - 1;
    (c % 3, c / 3)
}

/// Kronecker square of a 3x3 table. Rows are `chi_ij` with `i` slow; the
/// column at position `c - 1` is `C_c`.
pub fn kronecker_square<T: Entry>(rows: &[Vec<T>], mults: &[T]) -> (Vec<Vec<T>>, Vec<T>) {
    assert_eq!(rows.len(), 3, "rank-3 table expected");
    let mut out = Vec::with_capacity(9);
    let mut out_mults = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let row = (1..=9u8)
                .map(|c| {
                    let (a, b) = tensor_pair(c);
                    rows[i][a].times(&rows[j][b])
                })
                .collect();
            out.push(row);
            out_mults.push(mults[i].times(&mults[j]));
        }
    }
    (out, out_mults)
}

/// The 9x9 character table of the tensor square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorTable {
    pub table: CharTable,
}

impl TensorTable {
    pub fn rows(&self) -> Vec<Vec<QuadraticValue>> {
        self.table.rows.iter().map(|r| r.values.clone()).collect()
    }

    /// `chi_ij(C_c)`.
    pub fn entry(&self, i: usize, j: usize, c: u8) -> &QuadraticValue {
        self.table.entry(3 * i + j, c as usize - 1)
    }
}

pub fn tensor_square_table(t: &CharTable) -> TensorTable {
    let base: Vec<Vec<QuadraticValue>> = t.rows.iter().map(|r| r.values.clone()).collect();
    let (rows, mults) = kronecker_square(&base, &t.multiplicities);
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(idx, values)| CharRow {
            label: format!("chi{}{}", idx / 3, idx % 3),
            values,
        })
        .collect();
    let column_labels = (1..=9u8)
        .map(|c| {
            let (i, j) = tensor_pair(c);
            format!("A{i}{j}")
        })
        .collect();
    TensorTable {
        table: CharTable {
            rows,
            multiplicities: mults,
            column_labels,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// `(A (x) 1) wr (1 (x) A)`: blocks `2|3|456|789`.
    First,
    /// `(1 (x) A) wr (A (x) 1)`: blocks `258|369|4|7`.
    Second,
}

impl Orientation {
    pub fn from_number(v: u8) -> Option<Self> {
        match v {
            1 => Some(Orientation::First),
            2 => Some(Orientation::Second),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Orientation::First => 1,
            Orientation::Second => 2,
        }
    }

    /// The wreath classes as a partition of `{2, ..., 9}`.
    pub fn block_partition(self) -> SetPartition {
        let first = SetPartition::parse("2|3|456|789").expect("static partition");
        match self {
            Orientation::First => first,
            Orientation::Second => IndexPermutation::flip().act(&first),
        }
    }

    /// Classes in display order: `{2}, {3}, {456}, {789}` or their flip images.
    pub fn class_order(self) -> [Vec<u8>; 4] {
        let base = [vec![2], vec![3], vec![4, 5, 6], vec![7, 8, 9]];
        match self {
            Orientation::First => base,
            Orientation::Second => {
                let flip = IndexPermutation::flip();
                base.map(|b| {
                    let mut v: Vec<u8> = b.into_iter().map(|x| flip.apply(x)).collect();
                    v.sort_unstable();
                    v
                })
            }
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::First => "(A(x)1) wr (1(x)A)",
            Orientation::Second => "(1(x)A) wr (A(x)1)",
        })
    }
}

/// The 5x5 character table of a wreath square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathTable {
    pub table: CharTable,
    pub orientation: Orientation,
}

pub fn wreath_table(t: &CharTable, orientation: Orientation) -> WreathTable {
    let one = QuadraticValue::one();
    let zero = QuadraticValue::zero();
    let n = t.order();
    let v = |i: usize, a: usize| t.entry(i, a).clone();
    let (k, l) = (v(0, 1), v(0, 2));
    let row = |label: &str, values: Vec<QuadraticValue>| CharRow {
        label: label.to_string(),
        values,
    };
    let rows = vec![
        row("chi00", vec![one.clone(), k.clone(), l.clone(), &k * &n, &l * &n]),
        row("chi01", vec![one.clone(), k.clone(), l.clone(), &v(1, 1) * &n, &v(1, 2) * &n]),
        row("chi02", vec![one.clone(), k, l, &v(2, 1) * &n, &v(2, 2) * &n]),
        row("chi11", vec![one.clone(), v(1, 1), v(1, 2), zero.clone(), zero.clone()]),
        row("chi21", vec![one.clone(), v(2, 1), v(2, 2), zero.clone(), zero]),
    ];
    let m = &t.multiplicities;
    let multiplicities = vec![one, m[1].clone(), m[2].clone(), &n * &m[1], &n * &m[2]];
    let mut column_labels = vec!["1".to_string()];
    column_labels.extend(orientation.class_order().iter().map(|b| b.iter().map(|d| d.to_string()).collect::<String>()));
    let mut table = CharTable {
        rows,
        multiplicities,
        column_labels,
    };
    if orientation == Orientation::Second {
        // same values; only the row labels swap tensor factors
        for r in &mut table.rows {
            let b = r.label.as_bytes();
            r.label = format!("chi{}{}", b[4] as char, b[3] as char);
        }
    }
    WreathTable { table, orientation }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PermName {
    Identity,
    Flip,
    Switch,
    Composed,
}

/// A permutation of the tensor indices fixing 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexPermutation {
    pub name: PermName,
    /// `images[c]` is the image of index `c`; entry 0 is unused.
    images: [u8; 10],
}

impl IndexPermutation {
    pub fn identity() -> Self {
        IndexPermutation {
            name: PermName::Identity,
            images: [0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
        }
    }

    /// Induced by `(i, j) -> (sigma(i), sigma(j))` on the pair behind each index.
    fn from_pair_map(name: PermName, f: impl Fn(usize, usize) -> (usize, usize)) -> Self {
        let mut images = [0u8; 10];
        for c in 1..=9u8 {
            let (i, j) = tensor_pair(c);
            let (a, b) = f(i, j);
            images[c as usize] = tensor_index(a, b);
        }
        IndexPermutation { name, images }
    }

    /// `A_ij -> A_ji`: `(2 4)(3 7)(6 8)`.
    pub fn flip() -> Self {
        Self::from_pair_map(PermName::Flip, |i, j| (j, i))
    }

    /// `A_1 <-> A_2` in both factors: `(2 3)(4 7)(5 9)(6 8)`.
    pub fn switch() -> Self {
        let sigma = |x: usize| [0, 2, 1][x];
        Self::from_pair_map(PermName::Switch, |i, j| (sigma(i), sigma(j)))
    }

    pub fn apply(&self, c: u8) -> u8 {
        self.images[c as usize]
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &IndexPermutation) -> IndexPermutation {
        let mut images = [0u8; 10];
        for (c, x) in images.iter_mut().enumerate().skip(1) {
            *x = self.apply(other.apply(c as u8));
        }
        let mut out = IndexPermutation {
            name: PermName::Composed,
            images,
        };
        if out.images == Self::identity().images {
            out.name = PermName::Identity;
        }
        out
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).name == PermName::Identity
    }

    /// Disjoint-cycle notation, fixed points omitted.
    pub fn cycles(&self) -> String {
        let mut seen = [false; 10];
        let mut out = String::new();
        for start in 1..=9u8 {
            if seen[start as usize] || self.apply(start) == start {
                continue;
            }
            out.push('(');
            let mut c = start;
            while !seen[c as usize] {
                seen[c as usize] = true;
                out.push((b'0' + c) as char);
                c = self.apply(c);
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    /// Blockwise image of a partition of `{2, ..., 9}`, re-canonicalized.
    pub fn act(&self, p: &SetPartition) -> SetPartition {
        p.map_elements(|c| self.apply(c))
    }

    /// Applies the same relabelling to the rows and columns of a tensor-indexed
    /// 9x9 table (rows `chi_ij` at `3i + j`, columns `C_c` at `c - 1`).
    pub fn permute_table<T: Clone>(&self, rows: &[Vec<T>]) -> Vec<Vec<T>> {
        let row_of = |r: usize| {
            let c = tensor_index(r / 3, r % 3);
            let (i, j) = tensor_pair(self.apply(c));
            3 * i + j
        };
        let mut out = rows.to_vec();
        for (r, row) in rows.iter().enumerate() {
            let target = &mut out[row_of(r)];
            for c in 1..=9u8 {
                target[self.apply(c) as usize - 1] = row[c as usize - 1].clone();
            }
        }
        out
    }
}

impl fmt::Display for IndexPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycles())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{EigenData, Mode, SrgParams};

    fn petersen() -> CharTable {
        EigenData::from_params(&SrgParams::new(10, 3, 0, 1), Mode::Graph).unwrap().char_table()
    }

    fn q(v: i64) -> QuadraticValue {
        QuadraticValue::from_int(v)
    }

    fn sp(s: &str) -> SetPartition {
        SetPartition::parse(s).unwrap()
    }

    #[test]
    fn index_roundtrip() {
        for c in 1..=9 {
            let (i, j) = tensor_pair(c);
            assert_eq!(tensor_index(i, j), c);
        }
        assert_eq!(tensor_index(1, 0), 2);
        assert_eq!(tensor_index(0, 1), 4);
        assert_eq!(tensor_index(2, 2), 9);
    }

    #[test]
    fn petersen_tensor_entries() {
        let t = tensor_square_table(&petersen());
        assert_eq!(t.entry(1, 1, tensor_index(1, 1)), &q(1));
        assert_eq!(t.entry(0, 0, tensor_index(2, 2)), &q(36));
        assert_eq!(t.table.multiplicities[5], q(20));
        assert!(t.table.rows.iter().all(|r| r.values[0] == q(1)));
        assert_eq!(t.table.multiplicity_sum(), q(100));
        assert_eq!(t.table.rows[5].label, "chi12");
        assert_eq!(t.table.column_labels[1], "A10");
    }

    #[test]
    fn tensor_entry_rule() {
        let base = petersen();
        let t = tensor_square_table(&base);
        for i in 0..3 {
            for j in 0..3 {
                for a in 0..3 {
                    for b in 0..3 {
                        let expect = base.entry(i, a) * base.entry(j, b);
                        assert_eq!(t.entry(i, j, tensor_index(a, b)), &expect);
                    }
                }
            }
        }
    }

    #[test]
    fn permutations_match_cycle_notation() {
        assert_eq!(IndexPermutation::flip().cycles(), "(24)(37)(68)");
        assert_eq!(IndexPermutation::switch().cycles(), "(23)(47)(59)(68)");
        assert!(IndexPermutation::flip().is_involution());
        assert!(IndexPermutation::switch().is_involution());
        let fs = IndexPermutation::flip().compose(&IndexPermutation::switch());
        let sf = IndexPermutation::switch().compose(&IndexPermutation::flip());
        assert_eq!(fs, sf);
        assert_eq!(IndexPermutation::identity().cycles(), "()");
    }

    #[test]
    fn act_examples() {
        let flip = IndexPermutation::flip();
        let switch = IndexPermutation::switch();
        assert_eq!(flip.act(&sp("2|3|456|789")).to_string(), "258|369|4|7");
        assert_eq!(switch.act(&sp("249|35678")).to_string(), "24689|357");
        assert_eq!(switch.act(&sp("23|456789")).to_string(), "23|456789");
    }

    #[test]
    fn flip_fixes_tensor_table() {
        let t = tensor_square_table(&petersen());
        let rows = t.rows();
        assert_eq!(IndexPermutation::flip().permute_table(&rows), rows);
    }

    #[test]
    fn switch_relates_complement() {
        let e = EigenData::from_params(&SrgParams::new(10, 3, 0, 1), Mode::Graph).unwrap();
        let a = tensor_square_table(&e.char_table()).rows();
        let b = tensor_square_table(&e.switched().char_table()).rows();
        // the complement's chi_1 is chi_2 here, so rows and columns both move
        assert_eq!(IndexPermutation::switch().permute_table(&a), b);
    }

    #[test]
    fn wreath_petersen_first() {
        let w = wreath_table(&petersen(), Orientation::First);
        let vals: Vec<Vec<QuadraticValue>> = w.table.rows.iter().map(|r| r.values.clone()).collect();
        assert_eq!(vals[0], vec![q(1), q(3), q(6), q(30), q(60)]);
        assert_eq!(vals[1], vec![q(1), q(3), q(6), q(10), q(-20)]);
        assert_eq!(w.table.multiplicities[1], q(5));
        assert_eq!(vals[3], vec![q(1), q(1), q(-2), q(0), q(0)]);
        assert_eq!(w.table.multiplicities, vec![q(1), q(5), q(4), q(50), q(40)]);
        assert_eq!(w.table.multiplicity_sum(), q(100));
        assert_eq!(w.table.order(), q(100));
    }

    #[test]
    fn wreath_second_is_flip_image() {
        let w = wreath_table(&petersen(), Orientation::Second);
        assert_eq!(w.table.column_labels, vec!["1", "4", "7", "258", "369"]);
        assert_eq!(Orientation::Second.block_partition().to_string(), "258|369|4|7");
        assert_eq!(w.table.rows[3].label, "chi11");
        assert_eq!(w.table.rows[1].label, "chi10");
    }
}
