//! Exact elimination over the primitive region in chart-C coordinates
//! `c, r, t > 0`.
//!
//! The engine produces a derivation tree. Each node carries its system, and
//! children are obtained by one of a few mechanical steps (dividing out a
//! nonvanishing factor, solving a linear equation with a case split on its
//! leading coefficient, or splitting a univariate equation into its roots).
//! Leaves are either contradictions or solution components. A tree whose
//! leaves are all contradictions is a proof that the system has no solution,
//! and [`verify_refutation`] re-checks such a tree step by step.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::cells::{feasible_cells, Cell, UPoly};
use super::chart::{chart_c_l_numerator, chart_k, chart_s, normalize_positive, Chart, C, T};
use crate::arith::{MultiPoly, QuadraticValue, Rational, SieveSet, Symbol};

const R: Symbol = Symbol::R;
/// Chart variables in pivot preference order.
pub const VARS: [Symbol; 3] = [C, R, T];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    pub poly: MultiPoly,
    /// `poly > 0` when strict, `poly >= 0` otherwise.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct System {
    pub eqs: Vec<MultiPoly>,
    pub cons: Vec<Constraint>,
}

/// One real root of a univariate factor: `x = root`, with the factor it kills.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootFactor {
    pub factor: MultiPoly,
    pub roots: Vec<QuadraticValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    /// Equation `eq` has coefficients of one sign, so it never vanishes.
    SignedEquation { eq: usize },
    /// Constraint `con` is provably violated.
    ViolatedConstraint { con: usize },
    /// Child equations are parent equations divided by nonvanishing cofactors:
    /// `parent.eqs[source] = cofactor * child.eqs[i]` for entry `i`.
    Divide { sources: Vec<(usize, MultiPoly)>, next: Box<Node> },
    /// Equation `eq` reads `coeff * var + rest = 0`.
    Pivot {
        eq: usize,
        var: Symbol,
        coeff: MultiPoly,
        rest: MultiPoly,
        /// Case `coeff = rest = 0`; absent when `coeff` never vanishes.
        zero: Option<Box<Node>>,
        /// Case `var = -rest / coeff`.
        solved: Box<Node>,
    },
    /// Equation `eq` involves only `var` and splits as
    /// `cofactor * prod(factors)`, where the cofactor has no positive root;
    /// one branch per positive root, in factor order.
    Roots {
        eq: usize,
        var: Symbol,
        factors: Vec<RootFactor>,
        cofactor: MultiPoly,
        branches: Vec<RootBranch>,
    },
    /// No equations remain, one variable is free, and no cell of `(0, inf)`
    /// satisfies every constraint.
    EmptyCells { var: Symbol },
    /// Adds the resultant of equations `a` and `b` with respect to `var`.
    Resultant { a: usize, b: usize, var: Symbol, next: Box<Node> },
    /// A solution set. With one free variable, `cells` tells where the
    /// constraints hold; `None` means undecided.
    Solution(Component),
    /// The engine could not decide this system.
    Stuck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootBranch {
    /// Rational root: substituted and continued.
    Continue(Box<Node>),
    /// Irrational root with nothing else left to decide; `component` is the
    /// resulting point.
    Point {
        var: Symbol,
        value: QuadraticValue,
        ok: bool,
        component: Box<Component>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub sys: System,
    pub step: Step,
}

/// Equation index, variable, and the coefficient split `a v + b`.
type PivotChoice = (usize, Symbol, MultiPoly, MultiPoly);

/// Rational function `num / den`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFunc {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RatFunc {
    pub fn poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }

    /// Replaces `var` by `f` in both numerator and denominator.
    pub fn substitute(&self, var: Symbol, f: &RatFunc) -> RatFunc {
        let dn = self.num.degree_in(var) as i32;
        let dd = self.den.degree_in(var) as i32;
        let mut num = homogenize(&self.num, var, f, dn as u32);
        let mut den = homogenize(&self.den, var, f, dd as u32);
        // num / f.den^dn over den / f.den^dd
        if dn > dd {
            den = &den * &f.den.pow((dn - dd) as u32);
        } else if dd > dn {
            num = &num * &f.den.pow((dd - dn) as u32);
        }
        RatFunc { num, den }.reduced()
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
        .reduced()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc {
                num: &self.num + &o.num,
                den: self.den.clone(),
            }
            .reduced();
        }
        RatFunc {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
        .reduced()
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    fn reduced(self) -> RatFunc {
        if self.num.is_zero() {
            return RatFunc::poly(MultiPoly::zero());
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            return RatFunc::poly(q);
        }
        let lc = self.den.leading_coefficient();
        let inv = lc.recip();
        RatFunc {
            num: self.num.scale(&inv),
            den: self.den.scale(&inv),
        }
    }

    pub fn eval(&self, a: &BTreeMap<Symbol, QuadraticValue>) -> Option<QuadraticValue> {
        let d = self.den.eval(a).ok()?;
        if d.is_zero() {
            return None;
        }
        self.num.eval(a).ok()?.checked_div(&d).ok()
    }
}

/// `sum_j p_j * f.num^j * f.den^(d - j)` where `p = sum_j p_j var^j`.
fn homogenize(p: &MultiPoly, var: Symbol, f: &RatFunc, d: u32) -> MultiPoly {
    let coeffs = p.coefficients_in(var);
    let mut acc = MultiPoly::zero();
    for (j, pj) in coeffs.iter().enumerate() {
        if pj.is_zero() {
            continue;
        }
        let t = &(pj * &f.num.pow(j as u32)) * &f.den.pow(d - j as u32);
        acc = &acc + &t;
    }
    acc
}

/// A solution component: some variables fixed to numbers, some given by
/// rational functions of the others, the rest free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub free: Vec<Symbol>,
    /// In elimination order; each entry may use later-solved and free variables.
    pub solved: Vec<(Symbol, RatFunc)>,
    pub fixed: Vec<(Symbol, QuadraticValue)>,
    /// Feasible cells of the single free variable.
    pub cells: Option<Vec<Cell>>,
}

impl Component {
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Every chart variable as a rational function of the free ones
    /// (fixed values substituted when rational).
    pub fn parametrization(&self) -> Option<BTreeMap<Symbol, RatFunc>> {
        let mut out: BTreeMap<Symbol, RatFunc> = BTreeMap::new();
        for (v, val) in &self.fixed {
            out.insert(*v, RatFunc::poly(MultiPoly::constant(val.as_rational()?.clone())));
        }
        for v in &self.free {
            out.insert(*v, RatFunc::poly(MultiPoly::var(*v)));
        }
        for (v, f) in self.solved.iter().rev() {
            let mut g = f.clone();
            for (w, h) in &out {
                g = g.substitute(*w, h);
            }
            out.insert(*v, g);
        }
        Some(out)
    }

    /// Values of the chart variables when the component is a point.
    pub fn point(&self) -> Option<BTreeMap<Symbol, QuadraticValue>> {
        if !self.free.is_empty() {
            return None;
        }
        let mut a: BTreeMap<Symbol, QuadraticValue> = self.fixed.iter().cloned().collect();
        for (v, f) in self.solved.iter().rev() {
            let x = f.eval(&a)?;
            a.insert(*v, x);
        }
        Some(a)
    }
}

/// `(k, l, r, s)` in chart-C coordinates.
pub fn chart_params() -> BTreeMap<Symbol, RatFunc> {
    let mut m = BTreeMap::new();
    m.insert(Symbol::K, RatFunc::poly(chart_k()));
    m.insert(
        Symbol::L,
        RatFunc {
            num: chart_c_l_numerator(),
            den: MultiPoly::var(C),
        },
    );
    m.insert(Symbol::R, RatFunc::poly(MultiPoly::var(R)));
    m.insert(Symbol::S, RatFunc::poly(chart_s()));
    m
}

/// Composes a map into `(k, l, r, s)` from chart coordinates with a
/// parametrization of the chart coordinates.
pub fn compose_params(chart_param: &BTreeMap<Symbol, RatFunc>) -> BTreeMap<Symbol, RatFunc> {
    chart_params()
        .into_iter()
        .map(|(sym, f)| {
            let mut g = f;
            // substitute simultaneously through fresh placeholders is not
            // needed: chart variables never occur in their own images
            for v in VARS {
                if let Some(h) = chart_param.get(&v) {
                    g = g.substitute(v, h);
                }
            }
            (sym, g)
        })
        .collect()
}

pub fn is_chart_var(s: Symbol) -> bool {
    VARS.contains(&s)
}

/// Builds the chart-C system for equations in `(k, l, r, s)`, together with
/// the feasibility inequalities `l + 1 + s > 0` and `l - 1 + rs >= 0`.
pub fn chart_system(eqs: &[MultiPoly]) -> System {
    let mut out: Vec<MultiPoly> = eqs.iter().map(|e| Chart::C.image(e)).filter(|e| !e.is_zero()).collect();
    out.sort_by_cached_key(|e| e.to_string());
    out.dedup();
    let cons = ["l + 1 + s", "l - 1 + r*s"]
        .iter()
        .zip([true, false])
        .map(|(p, strict)| Constraint {
            poly: Chart::C.image(&p.parse().expect("static polynomial")),
            strict,
        })
        .collect();
    System { eqs: out, cons }
}

fn constraint_violated(c: &Constraint) -> bool {
    if c.poly.is_zero() {
        return c.strict;
    }
    c.poly.uniform_sign() == Some(-1)
}

fn constraint_holds(c: &Constraint, a: &BTreeMap<Symbol, QuadraticValue>) -> Option<bool> {
    let v = c.poly.eval(a).ok()?;
    Some(if c.strict { v.is_positive() } else { !v.is_negative() })
}

/// Nonvanishing polynomials tried as factors, as chart images.
#[derive(Debug, Clone)]
pub struct Atoms(Vec<MultiPoly>);

impl Atoms {
    pub fn new(u: &SieveSet) -> Self {
        let mut out: Vec<MultiPoly> = u
            .polys()
            .map(|p| normalize_positive(&Chart::C.image(p)))
            .filter(|p| !p.is_constant() && p.uniform_sign().is_some())
            .collect();
        for extra in ["r + s", "1 + r + s", "k + r*s + r", "k + r*s + r*s*r"] {
            // r + t, 1 + r + t, c + r, c + r t in chart coordinates
            let p: MultiPoly = extra.parse().expect("static polynomial");
            out.push(normalize_positive(&p));
        }
        out.sort_by_cached_key(|p| (p.total_degree(), p.to_string()));
        out.dedup();
        Atoms(out)
    }
}

/// Divides out monomials, constants and atoms. Returns the reduced equation
/// and the cofactor with `e = cofactor * reduced`.
fn reduce_equation(e: &MultiPoly, atoms: &Atoms) -> (MultiPoly, MultiPoly) {
    let m = e.monomial_content();
    let mut rest = e.div_monomial(&m);
    let mut cof = MultiPoly::term(m, Rational::one());
    'outer: loop {
        for a in &atoms.0 {
            if rest.total_degree() >= a.total_degree() {
                if let Some(q) = rest.div_exact(a) {
                    rest = q;
                    cof = &cof * a;
                    continue 'outer;
                }
            }
        }
        break;
    }
    let prim = rest.primitive();
    if !prim.is_zero() {
        // rest = lambda * prim with lambda constant
        let lambda = rest.leading_coefficient() / prim.leading_coefficient();
        cof = cof.scale(&lambda);
    }
    (prim, cof)
}

pub struct Engine {
    atoms: Atoms,
    max_depth: usize,
}

impl Engine {
    pub fn new(u: &SieveSet) -> Self {
        Engine {
            atoms: Atoms::new(u),
            max_depth: 24,
        }
    }

    pub fn run(&self, sys: System) -> Node {
        self.node(sys, 0, Vec::new(), Vec::new())
    }

    fn node(&self, sys: System, depth: usize, solved: Vec<(Symbol, RatFunc)>, fixed: Vec<(Symbol, QuadraticValue)>) -> Node {
        if let Some(eq) = sys.eqs.iter().position(|e| e.uniform_sign().is_some()) {
            return Node {
                sys,
                step: Step::SignedEquation { eq },
            };
        }
        if let Some(con) = sys.cons.iter().position(constraint_violated) {
            return Node {
                sys,
                step: Step::ViolatedConstraint { con },
            };
        }
        if depth > self.max_depth {
            return Node { sys, step: Step::Stuck };
        }
        // reduce equations; continue only if something changed
        let reduced: Vec<(MultiPoly, MultiPoly)> = sys.eqs.iter().map(|e| reduce_equation(e, &self.atoms)).collect();
        let mut child_eqs: Vec<MultiPoly> = Vec::new();
        let mut sources = Vec::new();
        for (i, (e, cof)) in reduced.iter().enumerate() {
            if !child_eqs.contains(e) {
                child_eqs.push(e.clone());
                sources.push((i, cof.clone()));
            }
        }
        if child_eqs != sys.eqs {
            let next = System {
                eqs: child_eqs,
                cons: sys.cons.clone(),
            };
            let child = self.node(next, depth + 1, solved, fixed);
            return Node {
                sys,
                step: Step::Divide {
                    sources,
                    next: Box::new(child),
                },
            };
        }
        if sys.eqs.is_empty() {
            let used: Vec<Symbol> = solved.iter().map(|(v, _)| *v).chain(fixed.iter().map(|(v, _)| *v)).collect();
            let free: Vec<Symbol> = VARS.iter().copied().filter(|v| !used.contains(v)).collect();
            let cells = match free.as_slice() {
                [] => None,
                [v] => feasible_cells(&sys.cons, *v),
                _ => None,
            };
            if let ([v], Some(c)) = (free.as_slice(), &cells) {
                if c.is_empty() {
                    return Node {
                        sys,
                        step: Step::EmptyCells { var: *v },
                    };
                }
            }
            return Node {
                sys,
                step: Step::Solution(Component {
                    free,
                    solved,
                    fixed,
                    cells,
                }),
            };
        }
        if let Some((eq, var, coeff, rest)) = self.pick_pivot(&sys) {
            let zero = if coeff.uniform_sign().is_some() {
                None
            } else {
                let z = zero_branch(&sys, eq, &coeff, &rest);
                Some(Box::new(self.node(z, depth + 1, solved.clone(), fixed.clone())))
            };
            let s = solved_branch(&sys, eq, var, &coeff, &rest);
            let mut solved2 = solved;
            solved2.push((
                var,
                RatFunc {
                    num: -&rest,
                    den: coeff.clone(),
                }
                .reduced(),
            ));
            let solved_node = self.node(s, depth + 1, solved2, fixed);
            return Node {
                sys,
                step: Step::Pivot {
                    eq,
                    var,
                    coeff,
                    rest,
                    zero,
                    solved: Box::new(solved_node),
                },
            };
        }
        if let Some(step) = self.split_roots(&sys, depth, &solved, &fixed) {
            return Node { sys, step };
        }
        if let Some((a, b, var, next)) = resultant_step(&sys, &self.atoms) {
            let child = self.node(next, depth + 1, solved, fixed);
            return Node {
                sys,
                step: Step::Resultant {
                    a,
                    b,
                    var,
                    next: Box::new(child),
                },
            };
        }
        Node { sys, step: Step::Stuck }
    }

    fn pick_pivot(&self, sys: &System) -> Option<PivotChoice> {
        let mut best: Option<((u8, usize, usize), PivotChoice)> = None;
        for (i, e) in sys.eqs.iter().enumerate() {
            for (vi, &v) in VARS.iter().enumerate() {
                if e.degree_in(v) != 1 {
                    continue;
                }
                let cs = e.coefficients_in(v);
                let (rest, coeff) = (cs[0].clone(), cs[1].clone());
                let branchless = if coeff.uniform_sign().is_some() { 0 } else { 1 };
                let score = (branchless, coeff.num_terms() + rest.num_terms(), vi);
                if best.as_ref().is_none_or(|(s, _)| score < *s) {
                    best = Some((score, (i, v, coeff, rest)));
                }
            }
        }
        best.map(|(_, x)| x)
    }

    fn split_roots(
        &self,
        sys: &System,
        depth: usize,
        solved: &[(Symbol, RatFunc)],
        fixed: &[(Symbol, QuadraticValue)],
    ) -> Option<Step> {
        // a univariate equation of smallest degree
        let (eq, var) = sys
            .eqs
            .iter()
            .enumerate()
            .filter_map(|(i, e)| {
                let syms = e.symbols();
                (syms.len() == 1).then(|| (i, syms[0]))
            })
            .min_by_key(|(i, _)| sys.eqs[*i].total_degree())?;
        let (factors, cofactor) = univariate_roots(&sys.eqs[eq], var)?;
        let mut branches = Vec::new();
        for f in &factors {
            for root in &f.roots {
                if let Some(q) = root.as_rational() {
                    let next = substitute_value(sys, var, q);
                    let mut fixed2 = fixed.to_vec();
                    fixed2.push((var, root.clone()));
                    branches.push(RootBranch::Continue(Box::new(self.node(next, depth + 1, solved.to_vec(), fixed2))));
                } else {
                    // only safe when the root settles everything else
                    let others = sys.eqs.iter().chain(sys.cons.iter().map(|c| &c.poly));
                    if others.clone().any(|e| e.symbols().iter().any(|&s| s != var)) {
                        return None;
                    }
                    let a: BTreeMap<Symbol, QuadraticValue> = [(var, root.clone())].into();
                    let eqs_ok = sys.eqs.iter().all(|e| e.eval(&a).is_ok_and(|v| v.is_zero()));
                    let cons_ok = sys.cons.iter().all(|c| constraint_holds(c, &a) == Some(true));
                    let mut fixed2 = fixed.to_vec();
                    fixed2.push((var, root.clone()));
                    let used: Vec<Symbol> = solved.iter().map(|(v, _)| *v).chain(fixed2.iter().map(|(v, _)| *v)).collect();
                    if VARS.iter().any(|v| !used.contains(v)) {
                        return None;
                    }
                    branches.push(RootBranch::Point {
                        var,
                        value: root.clone(),
                        ok: eqs_ok && cons_ok,
                        component: Box::new(Component {
                            free: Vec::new(),
                            solved: solved.to_vec(),
                            fixed: fixed2,
                            cells: None,
                        }),
                    });
                }
            }
        }
        Some(Step::Roots {
            eq,
            var,
            factors,
            cofactor,
            branches,
        })
    }
}

/// Resultant of `p` and `q` in `var`, by fraction-free elimination on the
/// Sylvester matrix.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: Symbol) -> MultiPoly {
    let pc = p.coefficients_in(var);
    let qc = q.coefficients_in(var);
    let (m, n) = (pc.len() - 1, qc.len() - 1);
    if m == 0 {
        return p.pow(n as u32);
    }
    if n == 0 {
        return q.pow(m as u32);
    }
    let size = m + n;
    let mut mat = vec![vec![MultiPoly::zero(); size]; size];
    for i in 0..n {
        for (j, c) in pc.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in qc.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    sign = !sign;
                }
                None => return MultiPoly::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            mat[i][k] = MultiPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Picks two equations sharing a variable of smallest combined degree and
/// adds their (primitive) resultant when it is new and nonzero.
fn resultant_step(sys: &System, atoms: &Atoms) -> Option<(usize, usize, Symbol, System)> {
    let mut cands = Vec::new();
    for a in 0..sys.eqs.len() {
        for b in a + 1..sys.eqs.len() {
            for v in VARS {
                let (da, db) = (sys.eqs[a].degree_in(v), sys.eqs[b].degree_in(v));
                if da > 0 && db > 0 {
                    let mut vars = sys.eqs[a].symbols();
                    vars.extend(sys.eqs[b].symbols());
                    vars.sort();
                    vars.dedup();
                    let others = sys.eqs[a].total_degree() + sys.eqs[b].total_degree();
                    cands.push(((vars.len(), da as u32 + db as u32, others), a, b, v));
                }
            }
        }
    }
    cands.sort_by_key(|c| c.0);
    for (_, a, b, v) in cands {
        let r = resultant(&sys.eqs[a], &sys.eqs[b], v);
        if r.is_zero() || r.total_degree() > 40 {
            continue;
        }
        if sys.eqs.contains(&reduce_equation(&r, atoms).0) {
            continue;
        }
        let mut eqs = sys.eqs.clone();
        eqs.push(r);
        return Some((
            a,
            b,
            v,
            System {
                eqs,
                cons: sys.cons.clone(),
            },
        ));
    }
    None
}

fn zero_branch(sys: &System, eq: usize, coeff: &MultiPoly, rest: &MultiPoly) -> System {
    let mut eqs: Vec<MultiPoly> = sys.eqs.iter().enumerate().filter(|(i, _)| *i != eq).map(|(_, e)| e.clone()).collect();
    for p in [coeff, rest] {
        if !p.is_zero() && !eqs.contains(p) {
            eqs.push(p.clone());
        }
    }
    System {
        eqs,
        cons: sys.cons.clone(),
    }
}

fn solved_branch(sys: &System, eq: usize, var: Symbol, coeff: &MultiPoly, rest: &MultiPoly) -> System {
    let f = RatFunc {
        num: -rest,
        den: coeff.clone(),
    };
    let mut eqs = Vec::new();
    for (i, e) in sys.eqs.iter().enumerate() {
        if i == eq {
            continue;
        }
        let d = e.degree_in(var) as u32;
        let img = homogenize(e, var, &f, d);
        if !img.is_zero() && !eqs.contains(&img) {
            eqs.push(img);
        }
    }
    let mut cons: Vec<Constraint> = sys
        .cons
        .iter()
        .map(|c| {
            let d = c.poly.degree_in(var) as u32;
            Constraint {
                poly: homogenize(&c.poly, var, &f, d + d % 2),
                strict: c.strict,
            }
        })
        .collect();
    // var > 0, i.e. -rest * coeff > 0
    cons.push(Constraint {
        poly: -&(rest * coeff),
        strict: true,
    });
    cons.retain(|c| !(c.poly.uniform_sign() == Some(1)));
    let mut uniq: Vec<Constraint> = Vec::new();
    for c in cons {
        if !uniq.contains(&c) {
            uniq.push(c);
        }
    }
    System { eqs, cons: uniq }
}

fn substitute_value(sys: &System, var: Symbol, q: &Rational) -> System {
    let map: BTreeMap<Symbol, MultiPoly> = [(var, MultiPoly::constant(q.clone()))].into();
    let mut eqs: Vec<MultiPoly> = Vec::new();
    for e in &sys.eqs {
        let img = e.substitute_partial(&map);
        if !img.is_zero() && !eqs.contains(&img) {
            eqs.push(img);
        }
    }
    let mut cons: Vec<Constraint> = sys
        .cons
        .iter()
        .map(|c| Constraint {
            poly: c.poly.substitute_partial(&map),
            strict: c.strict,
        })
        .collect();
    cons.retain(|c| !(c.poly.uniform_sign() == Some(1)));
    System { eqs, cons }
}

/// Positive real roots of a univariate polynomial, grouped by rational
/// linear factors and irreducible quadratic factors, plus the cofactor left
/// over, which must have no positive roots (single-signed coefficients).
pub fn univariate_roots(p: &MultiPoly, var: Symbol) -> Option<(Vec<RootFactor>, MultiPoly)> {
    let mut rest = p.primitive();
    let mut factors = Vec::new();
    loop {
        if rest.total_degree() == 0 || no_positive_root(&rest, var) {
            break;
        }
        if let Some(q) = rational_positive_root(&rest, var) {
            let lin = (&MultiPoly::var(var) - &MultiPoly::constant(q.clone())).primitive();
            rest = rest.div_exact(&lin).expect("root divides");
            factors.push(RootFactor {
                factor: lin,
                roots: vec![QuadraticValue::rational(q)],
            });
            continue;
        }
        // strip rational roots that are not positive so the rest can become
        // single-signed
        if let Some(q) = rational_root(&rest, var) {
            let lin = (&MultiPoly::var(var) - &MultiPoly::constant(q)).primitive();
            rest = rest.div_exact(&lin).expect("root divides");
            factors.push(RootFactor { factor: lin, roots: vec![] });
            continue;
        }
        if rest.degree_in(var) == 2 {
            let cs = rest.coefficients_in(var);
            let (c0, c1, c2) = (
                cs[0].constant_value()?,
                cs[1].constant_value()?,
                cs[2].constant_value()?,
            );
            let disc = &c1 * &c1 - Rational::from_integer(4.into()) * &c2 * &c0;
            if disc.is_negative() {
                break;
            }
            let roots = quadratic_roots(&c2, &c1, &disc)?;
            let positive = roots.into_iter().filter(|x| x.is_positive()).collect();
            factors.push(RootFactor {
                factor: rest.clone(),
                roots: positive,
            });
            rest = MultiPoly::one();
            break;
        }
        return None;
    }
    if !no_positive_root(&rest, var) {
        return None;
    }
    Some((factors, rest))
}

/// No root on `(0, inf)`, by Sturm sequences.
pub fn no_positive_root(p: &MultiPoly, var: Symbol) -> bool {
    if p.is_zero() {
        return false;
    }
    if p.total_degree() == 0 || p.uniform_sign().is_some() {
        return true;
    }
    UPoly::from_multi(p, var).is_some_and(|u| u.isolate_positive().is_empty())
}

fn quadratic_roots(a: &Rational, b: &Rational, disc: &Rational) -> Option<Vec<QuadraticValue>> {
    // (-b +- sqrt(disc)) / 2a with disc = num/den -> sqrt(num*den)/den
    let num = disc.numer() * disc.denom();
    let d = num.to_u64()?;
    let two_a = a * Rational::from_integer(2.into());
    let surd = Rational::new(BigInt::one(), disc.denom().clone()) / &two_a;
    let base = -b / &two_a;
    let plus = QuadraticValue::new(base.clone(), surd.clone(), d).ok()?;
    let minus = QuadraticValue::new(base, -surd, d).ok()?;
    Some(vec![plus, minus])
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

fn univariate_eval(p: &MultiPoly, var: Symbol, x: &Rational) -> Rational {
    let map: BTreeMap<Symbol, MultiPoly> = [(var, MultiPoly::constant(x.clone()))].into();
    p.substitute_partial(&map).constant_value().unwrap_or_else(Rational::zero)
}

fn rational_candidates(p: &MultiPoly, var: Symbol) -> Option<Vec<Rational>> {
    let cs = p.coefficients_in(var);
    let lead = cs.last()?.constant_value()?;
    let low_idx = cs.iter().position(|c| !c.is_zero())?;
    let low = cs[low_idx].constant_value()?;
    if low_idx > 0 {
        return Some(vec![Rational::zero()]);
    }
    let mut out = Vec::new();
    for a in divisors(low.numer())? {
        for b in divisors(lead.numer())? {
            let q = Rational::new(a.clone(), b);
            out.push(q.clone());
            out.push(-q);
        }
    }
    Some(out)
}

fn rational_positive_root(p: &MultiPoly, var: Symbol) -> Option<Rational> {
    rational_candidates(p, var)?
        .into_iter()
        .filter(|q| q.is_positive())
        .find(|q| univariate_eval(p, var, q).is_zero())
}

fn rational_root(p: &MultiPoly, var: Symbol) -> Option<Rational> {
    rational_candidates(p, var)?.into_iter().find(|q| univariate_eval(p, var, q).is_zero())
}

/// Solution components at the leaves, irrational root points included.
pub fn solutions(n: &Node) -> Vec<&Component> {
    let mut out = Vec::new();
    for l in leaves(n) {
        match &l.step {
            Step::Solution(c) => out.push(c),
            Step::Roots { branches, .. } => {
                for b in branches {
                    if let RootBranch::Point { ok: true, component, .. } = b {
                        out.push(component);
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// Leaves the engine gave up on.
pub fn stuck(n: &Node) -> Vec<&Node> {
    leaves(n).into_iter().filter(|l| matches!(l.step, Step::Stuck)).collect()
}

/// Every leaf is a contradiction.
pub fn is_refutation(n: &Node) -> bool {
    match &n.step {
        Step::SignedEquation { .. } | Step::ViolatedConstraint { .. } | Step::EmptyCells { .. } => true,
        Step::Divide { next, .. } | Step::Resultant { next, .. } => is_refutation(next),
        Step::Pivot { zero, solved, .. } => zero.as_deref().is_none_or(is_refutation) && is_refutation(solved),
        Step::Roots { branches, .. } => branches.iter().all(|b| match b {
            RootBranch::Continue(n) => is_refutation(n),
            RootBranch::Point { ok, .. } => !ok,
        }),
        Step::Solution(_) | Step::Stuck => false,
    }
}

pub fn leaves(n: &Node) -> Vec<&Node> {
    let mut out = Vec::new();
    collect_leaves(n, &mut out);
    out
}

fn collect_leaves<'a>(n: &'a Node, out: &mut Vec<&'a Node>) {
    match &n.step {
        Step::Divide { next, .. } | Step::Resultant { next, .. } => collect_leaves(next, out),
        Step::Pivot { zero, solved, .. } => {
            if let Some(z) = zero {
                collect_leaves(z, out);
            }
            collect_leaves(solved, out);
        }
        Step::Roots { branches, .. } => {
            let mut any = false;
            for b in branches {
                if let RootBranch::Continue(c) = b {
                    collect_leaves(c, out);
                    any = true;
                }
            }
            if !any || branches.iter().any(|b| matches!(b, RootBranch::Point { .. })) {
                out.push(n);
            }
        }
        _ => out.push(n),
    }
}

/// Re-checks a refutation: every child system is recomputed from its parent
/// and compared, every cofactor is nonvanishing, and every leaf is a genuine
/// contradiction.
pub fn verify_refutation(n: &Node) -> bool {
    let sys = &n.sys;
    match &n.step {
        Step::SignedEquation { eq } => sys.eqs.get(*eq).is_some_and(|e| e.uniform_sign().is_some()),
        Step::ViolatedConstraint { con } => sys.cons.get(*con).is_some_and(constraint_violated),
        Step::EmptyCells { var } => {
            sys.eqs.is_empty()
                && is_chart_var(*var)
                && sys.cons.iter().all(|c| c.poly.symbols().iter().all(|s| s == var))
                && feasible_cells(&sys.cons, *var).is_some_and(|c| c.is_empty())
        }
        Step::Divide { sources, next } => {
            next.sys.cons == sys.cons
                && sources.len() == next.sys.eqs.len()
                && sources.iter().zip(&next.sys.eqs).all(|((src, cof), e)| {
                    cof.uniform_sign().is_some() && sys.eqs.get(*src).is_some_and(|p| p == &(cof * e))
                })
                && verify_refutation(next)
        }
        Step::Resultant { a, b, var, next } => {
            let (Some(p), Some(q)) = (sys.eqs.get(*a), sys.eqs.get(*b)) else {
                return false;
            };
            let mut eqs = sys.eqs.clone();
            eqs.push(resultant(p, q, *var));
            next.sys.eqs == eqs && next.sys.cons == sys.cons && verify_refutation(next)
        }
        Step::Pivot {
            eq,
            var,
            coeff,
            rest,
            zero,
            solved,
        } => {
            let Some(e) = sys.eqs.get(*eq) else {
                return false;
            };
            if !is_chart_var(*var) || e.degree_in(*var) != 1 {
                return false;
            }
            let cs = e.coefficients_in(*var);
            if &cs[1] != coeff || &cs[0] != rest {
                return false;
            }
            let zero_ok = match zero {
                None => coeff.uniform_sign().is_some(),
                Some(z) => z.sys == zero_branch(sys, *eq, coeff, rest) && verify_refutation(z),
            };
            zero_ok && solved.sys == solved_branch(sys, *eq, *var, coeff, rest) && verify_refutation(solved)
        }
        Step::Roots {
            eq,
            var,
            factors,
            cofactor,
            branches,
        } => {
            let Some(e) = sys.eqs.get(*eq) else {
                return false;
            };
            if e.symbols() != vec![*var] || !no_positive_root(cofactor, *var) {
                return false;
            }
            let product = factors.iter().fold(cofactor.clone(), |acc, f| &acc * &f.factor);
            if product.primitive() != e.primitive() {
                return false;
            }
            // each factor's listed roots are all of its positive roots
            let mut expected = Vec::new();
            for f in factors {
                let deg = f.factor.degree_in(*var);
                if deg > 2 {
                    return false;
                }
                for x in &f.roots {
                    let a: BTreeMap<Symbol, QuadraticValue> = [(*var, x.clone())].into();
                    if !x.is_positive() || !f.factor.eval(&a).is_ok_and(|v| v.is_zero()) {
                        return false;
                    }
                    expected.push(x.clone());
                }
                let positive_roots = match univariate_roots(&f.factor, *var) {
                    Some((fs, _)) => fs.iter().map(|g| g.roots.len()).sum::<usize>(),
                    None => return false,
                };
                if positive_roots != f.roots.len() {
                    return false;
                }
            }
            if branches.len() != expected.len() {
                return false;
            }
            branches.iter().zip(&expected).all(|(b, x)| match b {
                RootBranch::Continue(child) => x
                    .as_rational()
                    .is_some_and(|q| child.sys == substitute_value(sys, *var, q) && verify_refutation(child)),
                RootBranch::Point { var: v, value, ok, .. } => {
                    let a: BTreeMap<Symbol, QuadraticValue> = [(*v, value.clone())].into();
                    !ok && value == x
                        && (sys.eqs.iter().any(|e| e.eval(&a).is_ok_and(|r| !r.is_zero()))
                            || sys.cons.iter().any(|c| constraint_holds(c, &a) == Some(false)))
                }
            })
        }
        Step::Solution(_) | Step::Stuck => false,
    }
}

/// Greatest common divisor of integers, used when normalizing root factors.
pub fn int_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}
