//! Brute-force ground truth: concrete strongly regular graphs, their tensor
//! squares as explicit matrices, and fusion checks by multiplying matrices.
//!
//! A scheme is stored as a class-label matrix: cell `(x, y)` holds the index
//! of the unique basis matrix with a 1 there. Products are computed by
//! counting paths, so nothing here consults a character table.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::bm_check;
use crate::partition::SetPartition;
use crate::product::tensor_square_table;
use crate::scheme::{EigenData, Mode, SchemeError, SrgParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("bad graph spec: {0}")]
    BadSpec(String),
    #[error("not strongly regular: vertices {0} and {1} break the pattern")]
    NotStronglyRegular(usize, usize),
    #[error("partition ground does not match the 8 non-identity tensor classes")]
    IndexMismatch,
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphSpec {
    UnionCliques { copies: usize, size: usize },
    CompleteMultipartite { parts: usize, size: usize },
    Paley(usize),
    Rook(usize),
    Clebsch,
    Petersen,
    Cycle(usize),
    Complement(Box<GraphSpec>),
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::UnionCliques { copies, size } => write!(f, "cliques{copies}x{size}"),
            GraphSpec::CompleteMultipartite { parts, size } => write!(f, "multipartite{parts}x{size}"),
            GraphSpec::Paley(q) => write!(f, "paley{q}"),
            GraphSpec::Rook(m) => write!(f, "rook{m}"),
            GraphSpec::Clebsch => write!(f, "clebsch"),
            GraphSpec::Petersen => write!(f, "petersen"),
            GraphSpec::Cycle(n) => write!(f, "cycle{n}"),
            GraphSpec::Complement(g) => write!(f, "co-{g}"),
        }
    }
}

fn parse_pair(s: &str) -> Option<(usize, usize)> {
    let (a, b) = s.split_once('x')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

impl FromStr for GraphSpec {
    type Err = OracleError;

    /// Names: `petersen`, `clebsch`, `paley<q>`, `rook<m>`, `cliques<c>x<s>`,
    /// `multipartite<p>x<s>`, `cycle<n>`, and `co-<name>` or
    /// `complement(<name>)` for complements.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || OracleError::BadSpec(s.clone());
        if let Some(rest) = s.strip_prefix("co-") {
            return Ok(GraphSpec::Complement(Box::new(rest.parse()?)));
        }
        if let Some(rest) = s.strip_prefix("complement(").and_then(|r| r.strip_suffix(')')) {
            return Ok(GraphSpec::Complement(Box::new(rest.parse()?)));
        }
        let num = |p: &str| s.strip_prefix(p).and_then(|r| r.parse::<usize>().ok());
        Ok(match s.as_str() {
            "petersen" => GraphSpec::Petersen,
            "clebsch" => GraphSpec::Clebsch,
            _ if s.starts_with("paley") => GraphSpec::Paley(num("paley").ok_or_else(bad)?),
            _ if s.starts_with("rook") => GraphSpec::Rook(num("rook").ok_or_else(bad)?),
            _ if s.starts_with("cycle") => GraphSpec::Cycle(num("cycle").ok_or_else(bad)?),
            _ if s.starts_with("cliques") => {
                let (copies, size) = parse_pair(&s["cliques".len()..]).ok_or_else(bad)?;
                GraphSpec::UnionCliques { copies, size }
            }
            _ if s.starts_with("multipartite") => {
                let (parts, size) = parse_pair(&s["multipartite".len()..]).ok_or_else(bad)?;
                GraphSpec::CompleteMultipartite { parts, size }
            }
            _ => return Err(bad()),
        })
    }
}

/// A simple undirected graph as a dense 0/1 adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph01 {
    pub name: String,
    n: usize,
    adj: Vec<bool>,
}

impl Graph01 {
    pub fn from_fn(name: impl Into<String>, n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Self {
        let mut adj = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                adj[x * n + y] = x != y && adjacent(x, y);
            }
        }
        Graph01 {
            name: name.into(),
            n,
            adj,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.adj[x * self.n + y]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.adjacent(x, y) == self.adjacent(y, x)))
    }

    pub fn degree(&self, x: usize) -> usize {
        (0..self.n).filter(|&y| self.adjacent(x, y)).count()
    }

    pub fn complement(&self) -> Graph01 {
        Graph01::from_fn(format!("co-{}", self.name), self.n, |x, y| !self.adjacent(x, y))
    }

    fn common(&self, x: usize, y: usize) -> usize {
        (0..self.n).filter(|&z| self.adjacent(x, z) && self.adjacent(y, z)).count()
    }

    /// Parameters `(n, k, mu, nu)`, with a witness pair when they are not constant.
    pub fn srg_params(&self) -> Result<SrgParams, OracleError> {
        let n = self.n;
        if n < 2 {
            return Err(OracleError::NotStronglyRegular(0, 0));
        }
        let k = self.degree(0);
        if let Some(x) = (0..n).find(|&x| self.degree(x) != k) {
            return Err(OracleError::NotStronglyRegular(0, x));
        }
        let mut mu: Option<(usize, (usize, usize))> = None;
        let mut nu: Option<(usize, (usize, usize))> = None;
        for x in 0..n {
            for y in x + 1..n {
                let c = self.common(x, y);
                let slot = if self.adjacent(x, y) { &mut mu } else { &mut nu };
                match slot {
                    None => *slot = Some((c, (x, y))),
                    Some((v, _)) if *v == c => {}
                    Some(_) => return Err(OracleError::NotStronglyRegular(x, y)),
                }
            }
        }
        if mu.is_none() || nu.is_none() {
            // complete or empty graphs have rank 2
            return Err(OracleError::NotStronglyRegular(0, 1));
        }
        let val = |o: Option<(usize, _)>| o.map_or(0, |(v, _)| v as u64);
        Ok(SrgParams::new(n as u64, k as u64, val(mu), val(nu)))
    }
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn expected_params(spec: &GraphSpec) -> Option<SrgParams> {
    let p = |n: usize, k: usize, mu: usize, nu: usize| Some(SrgParams::new(n as u64, k as u64, mu as u64, nu as u64));
    match spec {
        GraphSpec::UnionCliques { copies, size } => p(copies * size, size - 1, size - 2, 0),
        GraphSpec::CompleteMultipartite { parts, size } => p(parts * size, (parts - 1) * size, (parts - 2) * size, (parts - 1) * size),
        GraphSpec::Paley(q) => p(*q, (q - 1) / 2, (q - 5) / 4, (q - 1) / 4),
        GraphSpec::Rook(m) => p(m * m, 2 * (m - 1), m - 2, 2),
        GraphSpec::Clebsch => p(16, 5, 0, 2),
        GraphSpec::Petersen => p(10, 3, 0, 1),
        GraphSpec::Cycle(_) => None,
        GraphSpec::Complement(g) => {
            let e = expected_params(g)?;
            let nc = e.n - e.k - 1;
            p(e.n as usize, nc as usize, (e.n - 2 * e.k + e.nu - 2) as usize, (e.n - 2 * e.k + e.mu) as usize)
        }
    }
}

pub fn build_graph(spec: &GraphSpec) -> Result<Graph01, OracleError> {
    let bad = |m: &str| Err(OracleError::BadSpec(format!("{spec}: {m}")));
    let name = spec.to_string();
    let g = match spec {
        GraphSpec::UnionCliques { copies, size } => {
            if *copies < 2 || *size < 2 {
                return bad("sizes must be at least 2");
            }
            Graph01::from_fn(name, copies * size, |x, y| x / size == y / size)
        }
        GraphSpec::CompleteMultipartite { parts, size } => {
            if *parts < 2 || *size < 2 {
                return bad("sizes must be at least 2");
            }
            Graph01::from_fn(name, parts * size, |x, y| x / size != y / size)
        }
        GraphSpec::Paley(q) => {
            if !is_prime(*q) || q % 4 != 1 {
                return bad("q must be a prime congruent to 1 mod 4");
            }
            let mut square = vec![false; *q];
            for x in 1..*q {
                square[x * x % q] = true;
            }
            Graph01::from_fn(name, *q, |x, y| square[(x + q - y) % q])
        }
        GraphSpec::Rook(m) => {
            if *m < 2 {
                return bad("m must be at least 2");
            }
            Graph01::from_fn(name, m * m, |x, y| (x / m == y / m) != (x % m == y % m))
        }
        GraphSpec::Clebsch => Graph01::from_fn(name, 16, |x, y| matches!((x ^ y).count_ones(), 1 | 4)),
        GraphSpec::Petersen => {
            let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
            Graph01::from_fn(name, 10, |x, y| {
                let (a, b) = pairs[x];
                let (c, d) = pairs[y];
                a != c && a != d && b != c && b != d
            })
        }
        GraphSpec::Cycle(n) => {
            if *n < 3 {
                return bad("n must be at least 3");
            }
            Graph01::from_fn(name, *n, |x, y| (x + 1) % n == y || (y + 1) % n == x)
        }
        GraphSpec::Complement(inner) => {
            let mut g = build_graph(inner)?.complement();
            g.name = name;
            g
        }
    };
    if let Some(want) = expected_params(spec) {
        let got = g.srg_params()?;
        if got != want {
            return Err(OracleError::BadSpec(format!("{spec}: built {got:?}, expected {want:?}")));
        }
    }
    Ok(g)
}

/// A symmetric association scheme stored as a class-label matrix. Class 0 is
/// the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeMatrices {
    n: usize,
    rank: usize,
    labels: Vec<u8>,
}

impl SchemeMatrices {
    pub fn from_labels(n: usize, rank: usize, labels: Vec<u8>) -> Self {
        assert_eq!(labels.len(), n * n);
        SchemeMatrices { n, rank, labels }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of basis matrices, identity included.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self, x: usize, y: usize) -> u8 {
        self.labels[x * self.n + y]
    }

    /// The 0/1 basis matrix of class `i`, row-major.
    pub fn matrix(&self, i: usize) -> Vec<u8> {
        self.labels.iter().map(|&c| (c as usize == i) as u8).collect()
    }

    /// Identity on the diagonal only, every class symmetric, every class used.
    pub fn check_shape(&self) -> bool {
        let n = self.n;
        let mut used = vec![false; self.rank];
        for x in 0..n {
            for y in 0..n {
                let c = self.label(x, y);
                if (c == 0) != (x == y) || c != self.label(y, x) || c as usize >= self.rank {
                    return false;
                }
                used[c as usize] = true;
            }
        }
        used.into_iter().all(|u| u)
    }
}

pub fn scheme_matrices(g: &Graph01) -> Result<SchemeMatrices, OracleError> {
    g.srg_params()?;
    let n = g.n();
    let labels = (0..n * n)
        .map(|c| {
            let (x, y) = (c / n, c % n);
            if x == y {
                0
            } else if g.adjacent(x, y) {
                1
            } else {
                2
            }
        })
        .collect();
    Ok(SchemeMatrices::from_labels(n, 3, labels))
}

/// Vertex `(x1, x2)` of the square is `x1 * n + x2`; basis matrix `A_i (x) A_j`
/// carries tensor index `3j + i + 1`, and the classes of `p` are summed.
pub fn tensor_fuse(sm: &SchemeMatrices, p: &SetPartition) -> Result<SchemeMatrices, OracleError> {
    if sm.rank() != 3 || p.ground() != [2, 3, 4, 5, 6, 7, 8, 9] {
        return Err(OracleError::IndexMismatch);
    }
    let mut class_of = [0u8; 10];
    for c in 2..=9u8 {
        class_of[c as usize] = p.block_of(c).expect("ground checked") as u8 + 1;
    }
    let n = sm.order();
    let nn = n * n;
    let mut labels = vec![0u8; nn * nn];
    for x1 in 0..n {
        for x2 in 0..n {
            let row = (x1 * n + x2) * nn;
            for y1 in 0..n {
                let i = sm.label(x1, y1) as usize;
                for y2 in 0..n {
                    let j = sm.label(x2, y2) as usize;
                    labels[row + y1 * n + y2] = class_of[3 * j + i + 1];
                }
            }
        }
    }
    Ok(SchemeMatrices::from_labels(nn, p.num_blocks() + 1, labels))
}

/// Intersection numbers: `M_i M_j = sum_k p[i][j][k] M_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionTensor {
    pub rank: usize,
    values: Vec<u64>,
}

impl IntersectionTensor {
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.values[(i * self.rank + j) * self.rank + k]
    }

    /// Row sums `p^0_{ii}`.
    pub fn valencies(&self) -> Vec<u64> {
        (0..self.rank).map(|i| self.get(i, i, 0)).collect()
    }
}

/// Two cells of class `k` where the entries of `M_i M_j` differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub cell_a: (usize, usize),
    pub value_a: u64,
    pub cell_b: (usize, usize),
    pub value_b: u64,
}

impl fmt::Display for FailureWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(M{} M{}) is {} at {:?} but {} at {:?}, both in class {}",
            self.i, self.j, self.value_a, self.cell_a, self.value_b, self.cell_b, self.k
        )
    }
}

/// Multiplies every pair of basis matrices and checks that each product is
/// constant on the support of every basis matrix.
pub fn verify_scheme(sm: &SchemeMatrices) -> Result<IntersectionTensor, FailureWitness> {
    let n = sm.order();
    let r = sm.rank();
    let rr = r * r;
    let unset = u64::MAX;
    // values[(i*r + j)*r + k] and the first cell seen for it
    let mut values = vec![unset; rr * r];
    let mut first = vec![(0usize, 0usize); rr * r];
    let mut counts = vec![0u64; rr];
    for x in 0..n {
        let row_x = &sm.labels[x * n..(x + 1) * n];
        for y in 0..n {
            counts.iter_mut().for_each(|c| *c = 0);
            let row_y = &sm.labels[y * n..(y + 1) * n];
            for z in 0..n {
                // symmetric: label(z, y) = label(y, z)
                counts[row_x[z] as usize * r + row_y[z] as usize] += 1;
            }
            let k = sm.label(x, y) as usize;
            for (ij, &count) in counts.iter().enumerate().take(rr) {
                let slot = ij * r + k;
                if values[slot] == unset {
                    values[slot] = count;
                    first[slot] = (x, y);
                } else if values[slot] != count {
                    return Err(FailureWitness {
                        i: ij / r,
                        j: ij % r,
                        k,
                        cell_a: first[slot],
                        value_a: values[slot],
                        cell_b: (x, y),
                        value_b: count,
                    });
                }
            }
        }
    }
    Ok(IntersectionTensor { rank: r, values })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub partition: SetPartition,
    pub criterion: bool,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub graph: String,
    pub checked: usize,
    pub positives: Vec<SetPartition>,
    pub disagreements: Vec<Disagreement>,
}

/// Compares the character-table criterion against matrix multiplication for
/// every partition in `partitions`.
pub fn cross_check(g: &Graph01, partitions: &[SetPartition]) -> Result<CrossCheckReport, OracleError> {
    let params = g.srg_params()?;
    let table = tensor_square_table(&EigenData::from_params(&params, Mode::Graph)?.char_table());
    let sm = scheme_matrices(g)?;
    let results: Vec<(SetPartition, bool, bool)> = partitions
        .par_iter()
        .map(|p| {
            let criterion = bm_check(&table.table, p).map_err(|_| OracleError::IndexMismatch)?.is_fusion;
            let oracle = verify_scheme(&tensor_fuse(&sm, p)?).is_ok();
            Ok((p.clone(), criterion, oracle))
        })
        .collect::<Result<_, OracleError>>()?;
    let mut report = CrossCheckReport {
        graph: g.name.clone(),
        checked: results.len(),
        positives: Vec::new(),
        disagreements: Vec::new(),
    };
    for (p, criterion, oracle) in results {
        if oracle {
            report.positives.push(p.clone());
        }
        if criterion != oracle {
            report.disagreements.push(Disagreement {
                partition: p,
                criterion,
                oracle,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> Graph01 {
        build_graph(&s.parse().unwrap()).unwrap()
    }

    fn sp(s: &str) -> SetPartition {
        SetPartition::parse(s).unwrap()
    }

    #[test]
    fn named_parameters() {
        assert_eq!(build("paley5").srg_params().unwrap(), SrgParams::new(5, 2, 0, 1));
        assert_eq!(build("rook3").srg_params().unwrap(), SrgParams::new(9, 4, 1, 2));
        assert_eq!(build("clebsch").srg_params().unwrap(), SrgParams::new(16, 5, 0, 2));
        assert_eq!(build("petersen").srg_params().unwrap(), SrgParams::new(10, 3, 0, 1));
        assert_eq!(build("paley13").srg_params().unwrap(), SrgParams::new(13, 6, 2, 3));
        assert_eq!(build("cliques3x3").srg_params().unwrap(), SrgParams::new(9, 2, 1, 0));
        assert_eq!(build("multipartite3x3").srg_params().unwrap(), SrgParams::new(9, 6, 3, 6));
    }

    #[test]
    fn clebsch_complement_eigen() {
        let p = build("complement(clebsch)").srg_params().unwrap();
        assert_eq!(p, SrgParams::new(16, 10, 6, 6));
        let e = EigenData::from_params(&p, Mode::Graph).unwrap();
        let q = crate::arith::QuadraticValue::from_int;
        assert_eq!((e.k, e.l, e.r, e.s), (q(10), q(5), q(2), q(-2)));
    }

    #[test]
    fn spec_errors() {
        assert!(matches!(build_graph(&GraphSpec::Paley(7)), Err(OracleError::BadSpec(_))));
        assert!(matches!(build_graph(&GraphSpec::Paley(9)), Err(OracleError::BadSpec(_))));
        assert!(matches!(build_graph(&GraphSpec::Rook(1)), Err(OracleError::BadSpec(_))));
        assert!("hexagon".parse::<GraphSpec>().is_err());
        assert_eq!("co-rook3".parse::<GraphSpec>().unwrap().to_string(), "co-rook3");
    }

    #[test]
    fn scheme_valencies() {
        let it = verify_scheme(&scheme_matrices(&build("petersen")).unwrap()).unwrap();
        assert_eq!(it.valencies(), vec![1, 3, 6]);
        let it = verify_scheme(&scheme_matrices(&build("cliques3x3")).unwrap()).unwrap();
        assert_eq!(it.valencies(), vec![1, 2, 6]);
        // nu = p^2_{11}
        assert_eq!(it.get(1, 1, 2), 0);
    }

    #[test]
    fn hexagon_is_not_srg() {
        let g = build("cycle6");
        assert!(matches!(scheme_matrices(&g), Err(OracleError::NotStronglyRegular(_, _))));
    }

    #[test]
    fn tensor_fuse_shapes() {
        let sm = scheme_matrices(&build("paley5")).unwrap();
        let discrete = tensor_fuse(&sm, &SetPartition::discrete(&[2, 3, 4, 5, 6, 7, 8, 9])).unwrap();
        assert_eq!(discrete.rank(), 9);
        assert!(discrete.check_shape());
        let it = verify_scheme(&discrete).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let s: u64 = (0..9).map(|k| it.get(i, j, k) * it.valencies()[k]).sum();
                assert_eq!(s, it.valencies()[i] * it.valencies()[j]);
            }
        }
        let wreath = tensor_fuse(&sm, &sp("2|3|456|789")).unwrap();
        // classes: A00, A10, A20, A01+A11+A21, A02+A12+A22
        assert_eq!(wreath.label(0, 1), 3);
        assert_eq!(wreath.label(0, 5), 1);
        assert_eq!(verify_scheme(&wreath).unwrap().valencies(), vec![1, 2, 2, 10, 10]);
    }

    #[test]
    fn petersen_examples() {
        let sm = scheme_matrices(&build("petersen")).unwrap();
        let it = verify_scheme(&tensor_fuse(&sm, &sp("2347|5689")).unwrap()).unwrap();
        assert_eq!(it.valencies(), vec![1, 18, 81]);
        assert!(verify_scheme(&tensor_fuse(&sm, &sp("249|37|5|68")).unwrap()).is_err());
    }

    #[test]
    fn sampled_cross_check_rook3() {
        let g = build("rook3");
        let parts: Vec<SetPartition> = crate::fusion::tensor_partitions().iter().step_by(37).cloned().collect();
        let rep = cross_check(&g, &parts).unwrap();
        assert!(rep.disagreements.is_empty(), "{:?}", rep.disagreements);
    }
}
