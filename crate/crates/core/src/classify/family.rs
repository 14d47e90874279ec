//! Parametrized families of rank-3 tables and matching row-merge systems
//! against them.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::rows::EqualityGraph;
use super::solve::RatFunc;
use super::table::symbolic_tensor_table;
use crate::arith::{MultiPoly, QuadraticValue, Symbol};
use crate::fusion::{bm_check_rows, sum_columns};
use crate::partition::SetPartition;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub id: String,
    /// Images of `k, l, r, s` as polynomials in the free symbols.
    pub param: BTreeMap<Symbol, MultiPoly>,
    pub free: Vec<Symbol>,
    pub domain: String,
    /// Image of the family under swapping the two nontrivial classes.
    pub switch_partner: String,
    /// Primitive families live where `r > 0` and `s < -1`.
    pub primitive: bool,
    pub description: String,
}

#[allow(clippy::too_many_arguments)]
fn spec(id: &str, k: &str, l: &str, r: &str, s: &str, free: &[Symbol], domain: &str, partner: &str, description: &str) -> FamilySpec {
    let p = |x: &str| x.parse::<MultiPoly>().expect("static polynomial");
    let param = [(Symbol::K, p(k)), (Symbol::L, p(l)), (Symbol::R, p(r)), (Symbol::S, p(s))].into();
    FamilySpec {
        id: id.to_string(),
        param,
        free: free.to_vec(),
        domain: domain.to_string(),
        switch_partner: partner.to_string(),
        primitive: !id.starts_with("IMP"),
        description: description.to_string(),
    }
}

/// The fixed catalog, imprimitive families first.
pub fn catalog() -> &'static [FamilySpec] {
    static CAT: OnceLock<Vec<FamilySpec>> = OnceLock::new();
    CAT.get_or_init(|| {
        use Symbol::{M, R, S};
        vec![
            spec("IMP1", "r", "m*(1 + r)", "r", "-1", &[R, M], "r > 0, m > 0", "IMP2", "disjoint union of m+1 cliques of size r+1"),
            spec("IMP2", "-m*s", "-1 - s", "0", "s", &[S, M], "s < -1, m > 0", "IMP1", "complete multipartite"),
            spec("CONF", "2*r + 2*r^2", "2*r + 2*r^2", "r", "-1 - r", &[R], "r^2 + r >= 1", "CONF", "conference"),
            spec("NEWS1", "s^2", "-2*s", "1", "s", &[S], "s < -1", "NEWS2", "square rook graph"),
            spec("NEWS2", "2*(1 + r)", "(1 + r)^2", "r", "-2", &[R], "r > 0", "NEWS1", "complement of the square rook graph"),
            spec("CR4", "6 - 2*r", "2 + 2*r", "r", "r - 3", &[R], "0 < r < 2", "CR4", "order 9, k = 3 - s - r, l = 5 + s + r"),
            spec("CLB1", "r*(3 + r)", "3 + r", "r", "-2", &[R], "r > 0", "CLB1S", "Clebsch type, s = -2"),
            spec("CLB1S", "2 - s", "(s - 2)*(s + 1)", "1", "s", &[S], "s < -1", "CLB1", "Clebsch type, r = 1"),
            spec("CLB2A", "r*(2*r + 1)", "(r - 1)*(2*r + 1)", "r", "-r", &[R], "r >= 2", "CLB2B", "order 4r^2, s = -r"),
            spec("CLB2B", "(s + 2)*(2*s + 1)", "(s + 1)*(2*s + 1)", "-2 - s", "s", &[S], "s <= -3", "CLB2A", "order 4s^2 + 8s + 4, r = -2 - s"),
            spec("LSQ", "r*(2*r - 1)", "(2*r - 1)*(r + 1)", "r", "-r", &[R], "r > 1", "LSQS", "Latin square type L_r(2r), s = -r"),
            spec("LSQS", "s*(2*s + 3)", "(s + 1)*(2*s + 3)", "-2 - s", "s", &[S], "s < -2", "LSQ", "complement of Latin square type, r = -2 - s"),
        ]
    })
}

pub fn family(id: &str) -> Option<&'static FamilySpec> {
    catalog().iter().find(|f| f.id == id)
}

impl FamilySpec {
    /// `X - param(X)` for every parameter that is not a free symbol.
    pub fn implicit_equations(&self) -> Vec<MultiPoly> {
        self.param
            .iter()
            .filter(|(x, img)| !(self.free.contains(x) && **img == MultiPoly::var(**x)))
            .map(|(x, img)| &MultiPoly::var(*x) - img)
            .collect()
    }

    pub fn substitute(&self, p: &MultiPoly) -> MultiPoly {
        p.substitute_partial(&self.param)
    }

    /// `l (k + r s) + k (1 + r)(1 + s)` after substitution.
    pub fn orthogonality_defect(&self) -> MultiPoly {
        let e: MultiPoly = "l*(k + r*s) + k*(1 + r)*(1 + s)".parse().expect("static polynomial");
        self.substitute(&e)
    }

    /// The symbolic tensor table with the family substituted in.
    pub fn tensor_rows(&self) -> Vec<Vec<MultiPoly>> {
        symbolic_tensor_table()
            .rows
            .iter()
            .map(|row| row.iter().map(|p| self.substitute(p)).collect())
            .collect()
    }

    /// Whether `p` is a fusion for a generic member of the family.
    pub fn generic_fusion(&self, p: &SetPartition) -> bool {
        bm_check_rows(&self.tensor_rows(), p).is_ok_and(|v| v.is_fusion)
    }

    /// Whether the tuple `(k, l, r, s)` is a member. A free `m` is solved
    /// from the first implicit equation that is linear in it.
    pub fn contains_point(&self, k: &QuadraticValue, l: &QuadraticValue, r: &QuadraticValue, s: &QuadraticValue) -> bool {
        let mut asg: BTreeMap<Symbol, QuadraticValue> =
            [(Symbol::K, k.clone()), (Symbol::L, l.clone()), (Symbol::R, r.clone()), (Symbol::S, s.clone())].into();
        let eqs = self.implicit_equations();
        if self.free.contains(&Symbol::M) {
            let Some(e) = eqs.iter().find(|e| e.degree_in(Symbol::M) == 1) else {
                return false;
            };
            let c = e.coefficients_in(Symbol::M);
            let (Ok(c0), Ok(c1)) = (c[0].eval(&asg), c[1].eval(&asg)) else {
                return false;
            };
            let Ok(m) = (-c0).checked_div(&c1) else {
                return false;
            };
            asg.insert(Symbol::M, m);
        }
        eqs.iter().all(|e| e.eval(&asg).is_ok_and(|v| v.is_zero()))
    }

    /// Whether a curve given by rational functions of one variable lies on
    /// the family: every implicit equation vanishes identically on it.
    pub fn contains_curve(&self, curve: &BTreeMap<Symbol, RatFunc>) -> bool {
        // free symbols of the family are read off the curve itself
        self.implicit_equations().iter().all(|e| eval_ratfunc(e, curve).is_some_and(|f| f.num.is_zero()))
    }
}

/// `e(curve)` as a rational function; the curve's images are substituted
/// simultaneously.
pub fn eval_ratfunc(e: &MultiPoly, curve: &BTreeMap<Symbol, RatFunc>) -> Option<RatFunc> {
    let mut acc = RatFunc::poly(MultiPoly::zero());
    for (m, c) in e.terms() {
        let mut t = RatFunc::poly(MultiPoly::constant(c.clone()));
        for s in Symbol::ALL {
            let ex = m.exp(s) as u32;
            if ex > 0 {
                t = t.mul(&curve.get(&s)?.pow(ex));
            }
        }
        acc = acc.add(&t);
    }
    Some(acc)
}

/// Outcome of matching a row-merge system against a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMatch {
    pub family: String,
    /// Equations after substitution; all zero on a match.
    pub equations: Vec<MultiPoly>,
    /// Distinctness polynomials after substitution; none zero on a match.
    pub distinctness: Vec<MultiPoly>,
    pub matched: bool,
}

/// `sum of squares` of the column differences between a representative of
/// each pair of merge classes; zero exactly when those rows coincide.
pub fn distinctness_polys(g: &EqualityGraph, merge: &[Vec<usize>]) -> Vec<MultiPoly> {
    let mut out = Vec::new();
    for (x, a) in merge.iter().enumerate() {
        for b in &merge[x + 1..] {
            let d: MultiPoly = g.summed[a[0]]
                .iter()
                .zip(&g.summed[b[0]])
                .map(|(p, q)| {
                    let t = p - q;
                    &t * &t
                })
                .sum();
            out.push(d);
        }
    }
    out
}

pub fn family_match(equations: &[MultiPoly], distinctness: &[MultiPoly], fam: &FamilySpec) -> FamilyMatch {
    let eqs: Vec<MultiPoly> = equations.iter().map(|e| fam.substitute(e)).collect();
    let dist: Vec<MultiPoly> = distinctness.iter().map(|d| fam.substitute(d)).collect();
    let matched = eqs.iter().all(MultiPoly::is_zero) && dist.iter().all(|d| !d.is_zero());
    FamilyMatch {
        family: fam.id.clone(),
        equations: eqs,
        distinctness: dist,
        matched,
    }
}

/// Summed rows of the family-substituted table, for display.
pub fn family_summed_rows(fam: &FamilySpec, p: &SetPartition) -> Vec<Vec<MultiPoly>> {
    sum_columns(&fam.tensor_rows(), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{QuadraticValue, SieveSet};
    use crate::fusion::bm_check;
    use crate::product::tensor_square_table;
    use crate::scheme::{EigenData, Mode};

    fn sp(s: &str) -> SetPartition {
        SetPartition::parse(s).unwrap()
    }

    fn numeric_fusion(fam: &FamilySpec, values: &[(Symbol, i64, i64)], p: &str) -> bool {
        let a: BTreeMap<Symbol, QuadraticValue> = values
            .iter()
            .map(|&(s, n, d)| (s, QuadraticValue::rational(crate::arith::Rational::new(n.into(), d.into()))))
            .collect();
        let ev = |x: Symbol| fam.param[&x].eval(&a).unwrap();
        let e = EigenData::from_eigen(ev(Symbol::K), ev(Symbol::L), ev(Symbol::R), ev(Symbol::S), Mode::TableAlgebra).unwrap();
        bm_check(&tensor_square_table(&e.char_table()).table, &sp(p)).unwrap().is_fusion
    }

    #[test]
    fn catalog_satisfies_orthogonality() {
        for f in catalog() {
            assert!(f.orthogonality_defect().is_zero(), "{}", f.id);
        }
    }

    #[test]
    fn switch_partners_are_switch_images() {
        // switching sends (k, l, r, s) to (l, k, -1 - s, -1 - r)
        for f in catalog() {
            let g = family(&f.switch_partner).unwrap();
            assert_eq!(family(&g.switch_partner).unwrap().id, f.id);
            let img = [
                (Symbol::K, f.param[&Symbol::L].clone()),
                (Symbol::L, f.param[&Symbol::K].clone()),
                (Symbol::R, &MultiPoly::from_int(-1) - &f.param[&Symbol::S]),
                (Symbol::S, &MultiPoly::from_int(-1) - &f.param[&Symbol::R]),
            ];
            // the image satisfies the partner's implicit equations once the
            // partner's free symbols are read off the image
            let map: BTreeMap<Symbol, MultiPoly> = img.into_iter().collect();
            for e in g.implicit_equations() {
                let e = e.substitute_partial(&map);
                assert!(e.is_zero(), "{} -> {}: {}", f.id, g.id, e);
            }
        }
    }

    #[test]
    fn generic_fusions_of_worked_examples() {
        assert!(family("CLB1").unwrap().generic_fusion(&sp("249|35678")));
        assert!(family("CLB1S").unwrap().generic_fusion(&sp("24689|357")));
        assert!(family("NEWS1").unwrap().generic_fusion(&sp("249|37|5|68")));
        assert!(family("NEWS2").unwrap().generic_fusion(&sp("24|357|68|9")));
        assert!(family("CONF").unwrap().generic_fusion(&sp("27|34|59|6|8")));
        assert!(family("CLB2A").unwrap().generic_fusion(&sp("2468|3579")));
        assert!(family("CLB2B").unwrap().generic_fusion(&sp("2459|3678")));
        assert!(family("LSQ").unwrap().generic_fusion(&sp("2468|3579")));
        assert!(family("LSQS").unwrap().generic_fusion(&sp("2459|3678")));
        assert!(!family("CONF").unwrap().generic_fusion(&sp("2468|3579")));
    }

    #[test]
    fn order_nine_family_only_at_rook_point() {
        let f = family("CR4").unwrap();
        assert!(!f.generic_fusion(&sp("249|37|5|68")));
        // numeric evaluation, independent of the symbolic check
        assert!(numeric_fusion(f, &[(Symbol::R, 1, 1)], "249|37|5|68"));
        assert!(!numeric_fusion(f, &[(Symbol::R, 1, 2)], "249|37|5|68"));
        assert!(!numeric_fusion(f, &[(Symbol::R, 3, 2)], "249|37|5|68"));
    }

    #[test]
    fn latin_square_family_numerically() {
        let f = family("LSQ").unwrap();
        for r in [2, 3, 4] {
            assert!(numeric_fusion(f, &[(Symbol::R, r, 1)], "2468|3579"));
        }
        let g = family("CLB2A").unwrap();
        assert!(numeric_fusion(g, &[(Symbol::R, 3, 1)], "2468|3579"));
    }

    #[test]
    fn match_against_merge_equations() {
        let t = symbolic_tensor_table();
        let p = sp("2468|3579");
        let g = EqualityGraph::build(&t.rows, &p, &SieveSet::default());
        let merges = g.row_merges(p.num_blocks() + 1);
        let conf = family("CONF").unwrap();
        let clb = family("CLB2A").unwrap();
        let mut clb_hit = false;
        for m in &merges {
            let eqs = g.merge_equations(m);
            let dist = distinctness_polys(&g, m);
            assert!(!family_match(&eqs, &dist, conf).matched);
            clb_hit |= family_match(&eqs, &dist, clb).matched;
        }
        assert!(clb_hit);
    }

    #[test]
    fn curve_containment() {
        let f = family("CONF").unwrap();
        let p = |s: &str| RatFunc::poly(s.parse().unwrap());
        // r -> 2t (chart variable written s here), a reparametrized copy
        let curve: BTreeMap<Symbol, RatFunc> = [
            (Symbol::K, p("4*s + 8*s^2")),
            (Symbol::L, p("4*s + 8*s^2")),
            (Symbol::R, p("2*s")),
            (Symbol::S, p("-1 - 2*s")),
        ]
        .into();
        assert!(f.contains_curve(&curve));
        assert!(!family("NEWS2").unwrap().contains_curve(&curve));
    }

    #[test]
    fn point_membership() {
        let q = QuadraticValue::from_int;
        let rook3 = (q(4), q(4), q(1), q(-2));
        let members: Vec<&str> = catalog()
            .iter()
            .filter(|f| f.contains_point(&rook3.0, &rook3.1, &rook3.2, &rook3.3))
            .map(|f| f.id.as_str())
            .collect();
        assert_eq!(members, vec!["CONF", "NEWS1", "NEWS2", "CR4", "CLB1", "CLB1S"]);
        assert!(family("IMP1").unwrap().contains_point(&q(2), &q(6), &q(2), &q(-1)));
        assert!(family("IMP2").unwrap().contains_point(&q(6), &q(2), &q(0), &q(-3)));
        assert!(!family("IMP1").unwrap().contains_point(&q(3), &q(6), &q(1), &q(-2)));
    }
}
