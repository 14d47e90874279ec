//! Symbolic classification of all partitions of the tensor square.
//!
//! Each partition is checked generically, then against the two imprimitive
//! families, then over the primitive region: the summed rows are compared
//! pairwise, every way of merging them into `|p| + 1` classes is enumerated,
//! and each resulting equation system is solved exactly.

pub mod cells;
pub mod chart;
pub mod family;
pub mod rows;
pub mod solve;
pub mod table;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{MultiPoly, QuadraticValue, Rational, SieveSet, Symbol};
use crate::fusion::{bm_check_rows, tensor_partitions};
use crate::partition::SetPartition;
use crate::product::Orientation;
use cells::Cell;
use family::{catalog, distinctness_polys, family_match, FamilyMatch, FamilySpec};
use rows::{pair_index, Distinct, EqualityGraph, PairStatus, Witness, ROWS};
use solve::{chart_params, chart_system, compose_params, is_refutation, solutions, stuck, verify_refutation, Component, Engine, Node};
use table::{symbolic_tensor_table, SymbolicTable};

/// A row merge: classes of row indices, each listed by smallest member.
pub type Merge = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairProof {
    pub a: usize,
    pub b: usize,
    pub distinct: Distinct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeRefutation {
    pub merge: Merge,
    pub equations: Vec<MultiPoly>,
    pub derivation: Node,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimitiveProof {
    /// More pairwise distinct rows than classes.
    RowCountBound { rows: Vec<usize>, pairs: Vec<PairProof> },
    /// Every admissible merge (possibly none) is refuted.
    MergeAnalysis { pairs: Vec<PairProof>, refutations: Vec<MergeRefutation> },
}

/// The generic member of an imprimitive family has this many distinct rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImprimitiveCheck {
    pub family: String,
    pub distinct_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub imprimitive: Vec<ImprimitiveCheck>,
    pub primitive: PrimitiveProof,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match &self.primitive {
            PrimitiveProof::RowCountBound { .. } => "row-count-bound",
            PrimitiveProof::MergeAnalysis { refutations, .. } if refutations.is_empty() => "no-merge",
            PrimitiveProof::MergeAnalysis { .. } => "elimination",
        }
    }
}

/// Values `(k, l, r, s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub k: QuadraticValue,
    pub l: QuadraticValue,
    pub r: QuadraticValue,
    pub s: QuadraticValue,
}

impl ParamPoint {
    pub fn assignment(&self) -> BTreeMap<Symbol, QuadraticValue> {
        [
            (Symbol::K, self.k.clone()),
            (Symbol::L, self.l.clone()),
            (Symbol::R, self.r.clone()),
            (Symbol::S, self.s.clone()),
        ]
        .into()
    }
}

impl std::fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(k={}, l={}, r={}, s={})", self.k, self.l, self.r, self.s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyHit {
    pub family: String,
    /// Row merge realizing the fusion (absent for imprimitive families,
    /// which are checked on their own tables).
    pub merge: Option<Merge>,
    pub witness: Option<FamilyMatch>,
    /// A member of the family where the numeric criterion was rerun.
    pub sample: Option<ParamPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedPoint {
    pub merge: Merge,
    pub point: ParamPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub merge: Merge,
    pub equations: Vec<MultiPoly>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// The discrete and the single-block partition, fusions of every scheme.
    Trivial,
    Guaranteed,
    Family(Vec<FamilyHit>),
    /// Fusions only at finitely many primitive parameter points.
    Isolated(Vec<IsolatedPoint>),
    Infeasible(Box<Certificate>),
    Unresolved(Vec<Residual>),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Trivial => "TRIVIAL",
            Verdict::Guaranteed => "GUARANTEED",
            Verdict::Family(_) => "FAMILY",
            Verdict::Isolated(_) => "ISOLATED",
            Verdict::Infeasible(_) => "INFEASIBLE",
            Verdict::Unresolved(_) => "UNRESOLVED",
        }
    }

    pub fn families(&self) -> Vec<&str> {
        match self {
            Verdict::Family(h) => h.iter().map(|x| x.family.as_str()).collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub partition: SetPartition,
    pub verdict: Verdict,
    /// Primitive points where the partition is a fusion outside any family
    /// it generically belongs to.
    pub isolated: Vec<IsolatedPoint>,
    pub warnings: Vec<String>,
}

/// Small imprimitive parameters checked numerically for coincidences.
const IMP_SAMPLES: [(i64, i64); 9] = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)];

pub struct Classifier {
    table: SymbolicTable,
    sieve: SieveSet,
    engine: Engine,
    imprimitive: Vec<(&'static FamilySpec, Vec<Vec<MultiPoly>>)>,
    imp_curves: Vec<ImpCurve>,
    imp_numeric: Vec<ImpSample>,
}

/// Membership test for a curve in sampling coordinates `(a, m)`.
type OnCurve = fn(i64, i64) -> bool;

/// A curve inside an imprimitive family, in the sampling coordinates
/// `(a, m)` where the family's free eigenvalue is `r = a` or `s = -1 - a`.
struct ImpCurve {
    family: String,
    label: &'static str,
    on: OnCurve,
    rows: Vec<Vec<MultiPoly>>,
}

struct ImpSample {
    family: String,
    label: String,
    a: i64,
    m: i64,
    rows: Vec<Vec<QuadraticValue>>,
}

fn rational(n: i64) -> QuadraticValue {
    QuadraticValue::from_int(n)
}

impl Default for Classifier {
    fn default() -> Self {
        Classifier::new(SieveSet::default())
    }
}

impl Classifier {
    pub fn new(sieve: SieveSet) -> Self {
        let imprimitive: Vec<_> = catalog()
            .iter()
            .filter(|f| !f.primitive)
            .map(|f| (f, f.tensor_rows()))
            .collect();
        let table = symbolic_tensor_table();
        let mut imp_numeric = Vec::new();
        let mut imp_curves = Vec::new();
        for (f, rows) in &imprimitive {
            let x = f.free[0];
            // IMP1 is sampled at (r, m), IMP2 at (s, m) = (-1 - a, m)
            let a_poly: MultiPoly = if x == Symbol::R { MultiPoly::var(x) } else { -(&MultiPoly::var(x) + &MultiPoly::one()) };
            let curves: [(&'static str, OnCurve, Symbol, MultiPoly); 3] = [
                ("m = 1", |_, m| m == 1, Symbol::M, MultiPoly::one()),
                ("a = 1", |a, _| a == 1, x, if x == Symbol::R { MultiPoly::one() } else { MultiPoly::from_int(-2) }),
                ("m = a", |a, m| a == m, Symbol::M, a_poly.clone()),
            ];
            for (label, on, var, value) in curves {
                let map: BTreeMap<Symbol, MultiPoly> = [(var, value)].into();
                let label = match (f.id.as_str(), label) {
                    ("IMP1", "a = 1") => "r = 1",
                    ("IMP1", "m = a") => "m = r",
                    ("IMP2", "a = 1") => "s = -2",
                    ("IMP2", "m = a") => "m = -1 - s",
                    (_, l) => l,
                };
                imp_curves.push(ImpCurve {
                    family: f.id.clone(),
                    label,
                    on,
                    rows: rows.iter().map(|row| row.iter().map(|p| p.substitute_partial(&map)).collect()).collect(),
                });
            }
            for (a, m) in IMP_SAMPLES {
                let free = if x == Symbol::R { rational(a) } else { rational(-1 - a) };
                let asg: BTreeMap<Symbol, QuadraticValue> = [(x, free.clone()), (Symbol::M, rational(m))].into();
                let ev = |y: Symbol| f.param[&y].eval(&asg).expect("family symbols assigned");
                imp_numeric.push(ImpSample {
                    family: f.id.clone(),
                    label: format!("{} at {}={}, m={}", f.id, x, free, m),
                    a,
                    m,
                    rows: table.evaluate(&ev(Symbol::K), &ev(Symbol::L), &ev(Symbol::R), &ev(Symbol::S)),
                });
            }
        }
        Classifier {
            engine: Engine::new(&sieve),
            table,
            sieve,
            imprimitive,
            imp_curves,
            imp_numeric,
        }
    }

    pub fn sieve(&self) -> &SieveSet {
        &self.sieve
    }

    pub fn table(&self) -> &SymbolicTable {
        &self.table
    }

    fn numeric_fusion(&self, pt: &ParamPoint, p: &SetPartition) -> bool {
        let rows = self.table.evaluate(&pt.k, &pt.l, &pt.r, &pt.s);
        bm_check_rows(&rows, p).is_ok_and(|v| v.is_fusion)
    }

    pub fn classify(&self, p: &SetPartition) -> ClassificationRecord {
        if !p.is_nontrivial() {
            return ClassificationRecord {
                partition: p.clone(),
                verdict: Verdict::Trivial,
                isolated: Vec::new(),
                warnings: Vec::new(),
            };
        }
        if bm_check_rows(&self.table.rows, p).is_ok_and(|v| v.is_fusion) {
            return ClassificationRecord {
                partition: p.clone(),
                verdict: Verdict::Guaranteed,
                isolated: Vec::new(),
                warnings: Vec::new(),
            };
        }
        let mut hits = Vec::new();
        let mut imp_checks = Vec::new();
        for (f, rows) in &self.imprimitive {
            let v = bm_check_rows(rows, p).expect("tensor rows have 9 columns");
            if v.is_fusion {
                hits.push(FamilyHit {
                    family: f.id.clone(),
                    merge: None,
                    witness: None,
                    sample: None,
                });
            } else {
                imp_checks.push(ImprimitiveCheck {
                    family: f.id.clone(),
                    distinct_rows: v.distinct_row_count,
                });
            }
        }
        let mut warnings = Vec::new();
        let mut curves = Vec::new();
        for c in &self.imp_curves {
            if !hits.iter().any(|h| h.family == c.family) && bm_check_rows(&c.rows, p).is_ok_and(|v| v.is_fusion) {
                warnings.push(format!("fusion on the whole boundary curve {} with {}", c.family, c.label));
                curves.push(c);
            }
        }
        for x in &self.imp_numeric {
            let explained = curves.iter().any(|c| c.family == x.family && (c.on)(x.a, x.m));
            if !explained && !hits.iter().any(|h| h.family == x.family) && bm_check_rows(&x.rows, p).is_ok_and(|v| v.is_fusion) {
                warnings.push(format!("fusion at the boundary instance {}", x.label));
            }
        }
        let prim = self.primitive(p);
        hits.extend(prim.hits);
        let verdict = if !prim.residuals.is_empty() {
            Verdict::Unresolved(prim.residuals)
        } else if !hits.is_empty() {
            Verdict::Family(hits)
        } else if !prim.isolated.is_empty() {
            Verdict::Isolated(prim.isolated.clone())
        } else {
            Verdict::Infeasible(Box::new(Certificate {
                imprimitive: imp_checks,
                primitive: prim.proof.expect("refuted primitive analysis carries a proof"),
            }))
        };
        let isolated = match verdict {
            Verdict::Isolated(_) => Vec::new(),
            _ => prim.isolated,
        };
        for pt in &isolated {
            warnings.push(format!("isolated fusion at {}", pt.point));
        }
        ClassificationRecord {
            partition: p.clone(),
            verdict,
            isolated,
            warnings,
        }
    }

    fn primitive(&self, p: &SetPartition) -> PrimitiveOutcome {
        let g = EqualityGraph::build(&self.table.rows, p, &self.sieve);
        let target = p.num_blocks() + 1;
        let mut out = PrimitiveOutcome::default();
        let distinct = g.max_distinct_set();
        if distinct.len() > target {
            out.proof = Some(PrimitiveProof::RowCountBound {
                pairs: pair_proofs(&g, |a, b| distinct.contains(&a) && distinct.contains(&b)),
                rows: distinct,
            });
            return out;
        }
        let mut refutations = Vec::new();
        for merge in g.row_merges(target) {
            let equations = g.merge_equations(&merge);
            let node = self.engine.run(chart_system(&equations));
            if is_refutation(&node) {
                refutations.push(MergeRefutation {
                    merge,
                    equations,
                    derivation: node,
                });
                continue;
            }
            self.collect_solutions(p, &g, &merge, &equations, &node, &mut out);
        }
        out.proof = Some(PrimitiveProof::MergeAnalysis {
            pairs: pair_proofs(&g, |_, _| true),
            refutations,
        });
        out
    }

    fn collect_solutions(
        &self,
        p: &SetPartition,
        g: &EqualityGraph,
        merge: &Merge,
        equations: &[MultiPoly],
        node: &Node,
        out: &mut PrimitiveOutcome,
    ) {
        let residual = |reason: String| Residual {
            merge: merge.clone(),
            equations: equations.to_vec(),
            reason,
        };
        if !stuck(node).is_empty() {
            out.residuals.push(residual("elimination did not close".into()));
        }
        let dist = distinctness_polys(g, merge);
        for comp in solutions(node) {
            match comp.dimension() {
                0 => match component_point(comp) {
                    Some(pt) => {
                        if self.numeric_fusion(&pt, p) && !out.isolated.iter().any(|x| x.point == pt) {
                            out.isolated.push(IsolatedPoint {
                                merge: merge.clone(),
                                point: pt,
                            });
                        }
                    }
                    None => out.residuals.push(residual("point outside the quadratic field".into())),
                },
                1 => {
                    let Some(curve) = comp.parametrization().map(|c| compose_params(&c)) else {
                        out.residuals.push(residual("curve through an irrational point".into()));
                        continue;
                    };
                    let sample = open_sample(comp).and_then(|x| curve_point(&curve, comp.free[0], &x));
                    let Some(sample) = sample else {
                        out.residuals.push(residual("curve meets the region only at boundary points".into()));
                        continue;
                    };
                    let families: Vec<&FamilySpec> = catalog().iter().filter(|f| f.primitive && f.contains_curve(&curve)).collect();
                    if families.is_empty() {
                        out.residuals.push(residual(format!("curve outside the catalog through {sample}")));
                        continue;
                    }
                    for f in families {
                        let m = family_match(equations, &dist, f);
                        if m.matched && self.numeric_fusion(&sample, p) && !out.hits.iter().any(|h| h.family == f.id) {
                            out.hits.push(FamilyHit {
                                family: f.id.clone(),
                                merge: Some(merge.clone()),
                                witness: Some(m),
                                sample: Some(sample.clone()),
                            });
                        }
                    }
                }
                d => out.residuals.push(residual(format!("solution set of dimension {d}"))),
            }
        }
    }
}

#[derive(Default)]
struct PrimitiveOutcome {
    hits: Vec<FamilyHit>,
    isolated: Vec<IsolatedPoint>,
    residuals: Vec<Residual>,
    proof: Option<PrimitiveProof>,
}

fn pair_proofs(g: &EqualityGraph, keep: impl Fn(usize, usize) -> bool) -> Vec<PairProof> {
    let mut out = Vec::new();
    for a in 0..ROWS {
        for b in a + 1..ROWS {
            if let PairStatus::Distinct(d) = g.status(a, b) {
                if keep(a, b) {
                    out.push(PairProof { a, b, distinct: d.clone() });
                }
            }
        }
    }
    out
}

fn open_sample(c: &Component) -> Option<Rational> {
    c.cells.as_ref()?.iter().find_map(|cell| match cell {
        Cell::Open { sample } => Some(sample.clone()),
        Cell::Root { .. } => None,
    })
}

fn curve_point(curve: &BTreeMap<Symbol, solve::RatFunc>, var: Symbol, x: &Rational) -> Option<ParamPoint> {
    let a: BTreeMap<Symbol, QuadraticValue> = [(var, QuadraticValue::rational(x.clone()))].into();
    Some(ParamPoint {
        k: curve[&Symbol::K].eval(&a)?,
        l: curve[&Symbol::L].eval(&a)?,
        r: curve[&Symbol::R].eval(&a)?,
        s: curve[&Symbol::S].eval(&a)?,
    })
}

fn component_point(c: &Component) -> Option<ParamPoint> {
    let chart = c.point()?;
    let params = chart_params();
    Some(ParamPoint {
        k: params[&Symbol::K].eval(&chart)?,
        l: params[&Symbol::L].eval(&chart)?,
        r: params[&Symbol::R].eval(&chart)?,
        s: params[&Symbol::S].eval(&chart)?,
    })
}

/// Re-checks an infeasibility certificate for `p` from the symbolic table.
pub fn verify_certificate(c: &Classifier, p: &SetPartition, cert: &Certificate) -> Result<(), String> {
    for chk in &cert.imprimitive {
        let (_, rows) = c
            .imprimitive
            .iter()
            .find(|(f, _)| f.id == chk.family)
            .ok_or_else(|| format!("unknown family {}", chk.family))?;
        let v = bm_check_rows(rows, p).map_err(|e| e.to_string())?;
        if v.is_fusion || v.distinct_row_count != chk.distinct_rows {
            return Err(format!("{} check does not reproduce", chk.family));
        }
    }
    if cert.imprimitive.len() != c.imprimitive.len() {
        return Err("imprimitive families not all covered".into());
    }
    let target = p.num_blocks() + 1;
    let g = EqualityGraph::build(&c.table.rows, p, &c.sieve);
    let check_pair = |pp: &PairProof| -> Result<(), String> {
        let diff = rows::difference(&g.summed[pp.a], &g.summed[pp.b]);
        let expected = match pp.distinct.witness {
            Witness::Column(i) => diff.get(i).cloned().ok_or("column out of range")?,
            Witness::RowSum => diff.iter().cloned().sum(),
        };
        if expected != pp.distinct.poly || !pp.distinct.proof.verify(&pp.distinct.poly, &c.sieve) {
            return Err(format!("pair ({}, {}) proof fails", pp.a, pp.b));
        }
        Ok(())
    };
    match &cert.primitive {
        PrimitiveProof::RowCountBound { rows, pairs } => {
            if rows.len() <= target {
                return Err("row set too small".into());
            }
            for (x, &a) in rows.iter().enumerate() {
                for &b in &rows[x + 1..] {
                    let pp = pairs
                        .iter()
                        .find(|pp| pair_index(pp.a, pp.b) == pair_index(a, b))
                        .ok_or_else(|| format!("no proof for pair ({a}, {b})"))?;
                    check_pair(pp)?;
                }
            }
            Ok(())
        }
        PrimitiveProof::MergeAnalysis { pairs, refutations } => {
            for pp in pairs {
                check_pair(pp)?;
            }
            // merges are recomputed with exactly the certified distinct pairs
            let mut graph = g.clone();
            for a in 0..ROWS {
                for b in a + 1..ROWS {
                    let idx = pair_index(a, b);
                    if matches!(graph.pairs[idx], PairStatus::Distinct(_)) {
                        match pairs.iter().find(|pp| pair_index(pp.a, pp.b) == idx) {
                            Some(pp) => graph.pairs[idx] = PairStatus::Distinct(pp.distinct.clone()),
                            None => return Err(format!("pair ({a}, {b}) is used without proof")),
                        }
                    }
                }
            }
            let merges = graph.row_merges(target);
            if merges.len() != refutations.len() {
                return Err("refutations do not cover every merge".into());
            }
            for (m, r) in merges.iter().zip(refutations) {
                if &r.merge != m || r.equations != graph.merge_equations(m) {
                    return Err(format!("merge {m:?} does not match"));
                }
                if r.derivation.sys != chart_system(&r.equations) || !verify_refutation(&r.derivation) {
                    return Err(format!("derivation for {m:?} fails"));
                }
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub trivial: usize,
    pub guaranteed: usize,
    pub family: BTreeMap<String, usize>,
    pub isolated: usize,
    pub infeasible: usize,
    pub unresolved: usize,
    pub certificate_kinds: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub records: Vec<ClassificationRecord>,
    pub summary: Summary,
}

impl Classification {
    pub fn record(&self, p: &SetPartition) -> Option<&ClassificationRecord> {
        self.records.iter().find(|r| &r.partition == p)
    }

    /// Partitions carrying `family`, in canonical order.
    pub fn with_family(&self, family: &str) -> Vec<&SetPartition> {
        self.records
            .iter()
            .filter(|r| r.verdict.families().contains(&family))
            .map(|r| &r.partition)
            .collect()
    }
}

pub fn summarize(records: &[ClassificationRecord]) -> Summary {
    let mut s = Summary {
        total: records.len(),
        trivial: 0,
        guaranteed: 0,
        family: catalog().iter().map(|f| (f.id.clone(), 0)).collect(),
        isolated: 0,
        infeasible: 0,
        unresolved: 0,
        certificate_kinds: BTreeMap::new(),
    };
    for r in records {
        match &r.verdict {
            Verdict::Trivial => s.trivial += 1,
            Verdict::Guaranteed => s.guaranteed += 1,
            Verdict::Family(h) => {
                for x in h {
                    *s.family.entry(x.family.clone()).or_default() += 1;
                }
            }
            Verdict::Isolated(_) => s.isolated += 1,
            Verdict::Infeasible(c) => {
                s.infeasible += 1;
                *s.certificate_kinds.entry(c.kind().to_string()).or_default() += 1;
            }
            Verdict::Unresolved(_) => s.unresolved += 1,
        }
    }
    s
}

pub fn classify_partition(p: &SetPartition) -> ClassificationRecord {
    default_classifier().classify(p)
}

pub fn default_classifier() -> &'static Classifier {
    static C: OnceLock<Classifier> = OnceLock::new();
    C.get_or_init(Classifier::default)
}

/// All 4140 partitions, in canonical order. Runs in parallel; the output
/// does not depend on scheduling.
pub fn classify_all() -> Classification {
    classify_with(default_classifier(), tensor_partitions())
}

pub fn classify_with(c: &Classifier, parts: &[SetPartition]) -> Classification {
    let records: Vec<ClassificationRecord> = parts.par_iter().map(|p| c.classify(p)).collect();
    let summary = summarize(&records);
    Classification { records, summary }
}

/// Fusions of one wreath product, seen as coarsenings of its class
/// partition inside the tensor square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathClassification {
    pub orientation: Orientation,
    pub classes: SetPartition,
    /// Fusions for every scheme, other than the wreath product itself and
    /// the single block.
    pub guaranteed: Vec<SetPartition>,
    /// Imprimitive family id to the extra fusions it carries.
    pub special: BTreeMap<String, Vec<SetPartition>>,
    /// Coarsenings that are never fusions of a primitive scheme.
    pub primitive: Vec<SetPartition>,
    pub records: Vec<ClassificationRecord>,
}

pub fn classify_wreath(orientation: Orientation) -> WreathClassification {
    let classes = orientation.block_partition();
    let parts = classes.coarsenings();
    let records = classify_with(default_classifier(), &parts).records;
    let mut out = WreathClassification {
        orientation,
        classes: classes.clone(),
        guaranteed: Vec::new(),
        special: BTreeMap::new(),
        primitive: Vec::new(),
        records: Vec::new(),
    };
    for r in &records {
        if r.partition == classes || !r.partition.is_nontrivial() {
            continue;
        }
        match &r.verdict {
            Verdict::Guaranteed => out.guaranteed.push(r.partition.clone()),
            Verdict::Family(hits) => {
                for h in hits {
                    let primitive = family::family(&h.family).is_some_and(|f| f.primitive);
                    if primitive {
                        out.primitive.push(r.partition.clone());
                    } else {
                        out.special.entry(h.family.clone()).or_default().push(r.partition.clone());
                    }
                }
            }
            Verdict::Isolated(_) => out.primitive.push(r.partition.clone()),
            _ => {}
        }
    }
    out.primitive.dedup();
    out.records = records;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SetPartition {
        SetPartition::parse(s).unwrap()
    }

    #[test]
    fn conference_worked_example() {
        let r = classify_partition(&sp("27|34|59|6|8"));
        assert_eq!(r.verdict.families(), vec!["CONF"]);
    }

    #[test]
    fn worked_negative_three_classes() {
        let p = sp("23489|567");
        let r = classify_partition(&p);
        let Verdict::Infeasible(cert) = &r.verdict else {
            panic!("expected infeasible, got {}", r.verdict.label());
        };
        assert_eq!(verify_certificate(default_classifier(), &p, cert), Ok(()));
    }

    #[test]
    fn row_count_negative() {
        let p = sp("2678|34|59");
        let r = classify_partition(&p);
        let Verdict::Infeasible(cert) = &r.verdict else {
            panic!("expected infeasible");
        };
        let PrimitiveProof::RowCountBound { rows, .. } = &cert.primitive else {
            panic!("expected a row-count bound");
        };
        assert!(rows.len() >= 5);
        assert_eq!(verify_certificate(default_classifier(), &p, cert), Ok(()));
    }

    #[test]
    fn clebsch_worked_example() {
        let r = classify_partition(&sp("249|35678"));
        assert_eq!(r.verdict.families(), vec!["CLB1"]);
        let Verdict::Family(h) = &r.verdict else { unreachable!() };
        assert!(h[0].witness.as_ref().unwrap().matched);
    }

    #[test]
    fn tampered_certificate_rejected() {
        let p = sp("23489|567");
        let Verdict::Infeasible(cert) = classify_partition(&p).verdict else {
            panic!()
        };
        let mut bad = (*cert).clone();
        match &mut bad.primitive {
            PrimitiveProof::RowCountBound { pairs, .. } => {
                pairs.pop();
            }
            PrimitiveProof::MergeAnalysis { refutations, .. } => {
                refutations.pop();
            }
        }
        assert!(verify_certificate(default_classifier(), &p, &bad).is_err());
        assert!(verify_certificate(default_classifier(), &sp("2678|34|59"), &cert).is_err());
    }

    #[test]
    fn rook_point_partition() {
        let p = sp("249|357|68");
        let r = classify_partition(&p);
        assert_eq!(r.verdict.label(), "ISOLATED");
        let Verdict::Isolated(points) = &r.verdict else { unreachable!() };
        let four = QuadraticValue::from_int(4);
        assert!(points.iter().all(|x| x.point.k == four && x.point.l == four));
    }

    #[test]
    fn wreath_first_orientation() {
        let w = classify_wreath(Orientation::First);
        let names = |v: &[SetPartition]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        assert_eq!(w.records.len(), 15);
        assert_eq!(names(&w.guaranteed).len(), 3);
        for p in ["2|3456789", "23456|789", "2|3456|789"] {
            assert!(w.special["IMP1"].contains(&sp(p)), "{p}");
        }
        assert!(w.primitive.is_empty());
    }

    #[test]
    fn imprimitive_partition() {
        let r = classify_partition(&sp("2|3456789"));
        assert!(r.verdict.families().contains(&"IMP1"));
    }
}
