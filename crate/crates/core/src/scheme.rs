//! Strongly regular graph parameters and the rank-3 character table.
//!
//! Parameters follow the `(n, k, mu, nu)` convention used throughout this
//! crate: `mu` counts common neighbours of *adjacent* vertices (the usual
//! lambda) and `nu` those of *non-adjacent* vertices (the usual mu).

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{int, ArithError, QuadraticValue, Rational};

type Qv = QuadraticValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    #[error("multiplicity {0} is not a nonnegative integer")]
    NonIntegralMultiplicity(Box<QuadraticValue>),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Whether non-integral eigenvalue multiplicities are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Adjacency algebra of an actual graph: multiplicities must be integers.
    #[default]
    Graph,
    /// Rank-3 symmetric table algebra: multiplicities are only reported.
    TableAlgebra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: u64,
    pub k: u64,
    pub mu: u64,
    pub nu: u64,
}

impl SrgParams {
    pub fn new(n: u64, k: u64, mu: u64, nu: u64) -> Self {
        SrgParams { n, k, mu, nu }
    }

    pub fn validate(&self) -> Result<(), SchemeError> {
        let SrgParams { n, k, mu, nu } = *self;
        let bad = |m: String| Err(SchemeError::InfeasibleParams(m));
        if !(0 < k && k < n) {
            return bad(format!("need 0 < k < n, got k = {k}, n = {n}"));
        }
        if mu + 1 > k {
            return bad(format!("need mu <= k - 1, got mu = {mu}"));
        }
        if nu > k {
            return bad(format!("need nu <= k, got nu = {nu}"));
        }
        if k * (k - mu - 1) != (n - k - 1) * nu {
            return bad(format!("k(k-mu-1) = {} but (n-k-1)nu = {}", k * (k - mu - 1), (n - k - 1) * nu));
        }
        Ok(())
    }
}

/// Valencies, nontrivial eigenvalues (`r > s`) and their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenData {
    pub k: Qv,
    pub l: Qv,
    pub r: Qv,
    pub s: Qv,
    pub f: Qv,
    pub g: Qv,
}

fn check_multiplicity(x: &Qv, mode: Mode) -> Result<(), SchemeError> {
    if mode == Mode::Graph && !x.as_integer().is_some_and(|v| !v.is_negative()) {
        return Err(SchemeError::NonIntegralMultiplicity(Box::new(x.clone())));
    }
    Ok(())
}

impl EigenData {
    /// Eigenvalues from SRG parameters: `r`, `s` are the roots of
    /// `x^2 - (mu - nu) x - (k - nu)`.
    pub fn from_params(p: &SrgParams, mode: Mode) -> Result<Self, SchemeError> {
        p.validate()?;
        let a = p.mu as i64 - p.nu as i64;
        let disc = a * a + 4 * (p.k as i64 - p.nu as i64);
        if disc <= 0 {
            return Err(SchemeError::InfeasibleParams(format!("discriminant {disc} is not positive")));
        }
        let half = Rational::new(1.into(), 2.into());
        let r = Qv::new(int(a) * &half, half.clone(), disc as u64)?;
        let s = Qv::new(int(a) * &half, -half, disc as u64)?;
        let k = Qv::from_int(p.k as i64);
        let l = Qv::from_int((p.n - p.k - 1) as i64);
        Self::from_eigen(k, l, r, s, mode)
    }

    /// Completes `(k, l, r, s)` with multiplicities from `1 + f + g = n` and
    /// `k + f r + g s = 0`, where `n = 1 + k + l`.
    pub fn from_eigen(k: Qv, l: Qv, r: Qv, s: Qv, mode: Mode) -> Result<Self, SchemeError> {
        if !k.is_positive() || !l.is_positive() {
            return Err(SchemeError::InfeasibleParams("valencies must be positive".into()));
        }
        if r.cmp_exact(&s)? != std::cmp::Ordering::Greater {
            return Err(SchemeError::InfeasibleParams("need r > s".into()));
        }
        let n_minus_1 = k.checked_add(&l)?;
        let f = (-&k).checked_sub(&n_minus_1.checked_mul(&s)?)?.checked_div(&r.checked_sub(&s)?)?;
        let g = n_minus_1.checked_sub(&f)?;
        check_multiplicity(&f, mode)?;
        check_multiplicity(&g, mode)?;
        Ok(EigenData { k, l, r, s, f, g })
    }

    pub fn n(&self) -> Qv {
        &(&self.k + &self.l) + &Qv::one()
    }

    /// True if both multiplicities are nonnegative integers.
    pub fn multiplicities_integral(&self) -> bool {
        check_multiplicity(&self.f, Mode::Graph).is_ok() && check_multiplicity(&self.g, Mode::Graph).is_ok()
    }

    /// Eigen data of the complementary scheme (roles of `A1` and `A2` swapped).
    pub fn switched(&self) -> EigenData {
        let one = Qv::one();
        EigenData {
            k: self.l.clone(),
            l: self.k.clone(),
            r: -(&one + &self.s),
            s: -(&one + &self.r),
            f: self.g.clone(),
            g: self.f.clone(),
        }
    }

    /// `(1 + r)(1 + s)`.
    fn one_r_s_rs(&self) -> Qv {
        let one = Qv::one();
        &(&one + &self.r) * &(&one + &self.s)
    }

    /// `b1` and `b2` regular matrices in the basis `{b0, b1, b2}`.
    pub fn regular_matrices(&self) -> ([[Qv; 3]; 3], [[Qv; 3]; 3]) {
        let z = Qv::zero;
        let one = Qv::one;
        let c = self.one_r_s_rs();
        let rs = &self.r * &self.s;
        let b1 = [
            [z(), self.k.clone(), z()],
            [one(), &self.k + &(&c - &one()), -c.clone()],
            [z(), &self.k + &rs, -rs.clone()],
        ];
        let b2 = [
            [z(), z(), self.l.clone()],
            [z(), -c.clone(), &self.l + &c],
            [one(), -rs.clone(), &(&self.l - &one()) + &rs],
        ];
        (b1, b2)
    }

    /// Reads `(n, k, mu, nu)` back from the `b1` regular matrix.
    pub fn params_from_regular(&self) -> Option<SrgParams> {
        let (b1, _) = self.regular_matrices();
        let as_u64 = |x: &Qv| x.as_integer().and_then(|v| u64::try_from(v).ok());
        Some(SrgParams {
            n: as_u64(&self.n())?,
            k: as_u64(&self.k)?,
            mu: as_u64(&b1[1][1])?,
            nu: as_u64(&b1[2][1])?,
        })
    }

    /// The 3x3 character table with multiplicities `(1, f, g)`.
    pub fn char_table(&self) -> CharTable {
        let one = Qv::one();
        let neg1 = Qv::from_int(-1);
        let row = |label: &str, a: &Qv| CharRow {
            label: label.to_string(),
            values: vec![one.clone(), a.clone(), &neg1 - a],
        };
        let mut rows = vec![row("chi0", &self.k), row("chi1", &self.r), row("chi2", &self.s)];
        rows[0].values[2] = self.l.clone();
        CharTable {
            rows,
            multiplicities: vec![one, self.f.clone(), self.g.clone()],
            column_labels: vec!["A0".into(), "A1".into(), "A2".into()],
        }
    }

    /// Checks the inequalities and the orthogonality identity satisfied by
    /// every rank-3 symmetric table algebra.
    pub fn feasibility(&self) -> FeasibilityReport {
        let one = Qv::one();
        let (k, l, r, s) = (&self.k, &self.l, &self.r, &self.s);
        let c = self.one_r_s_rs();
        let rs = r * s;
        let mut violations = Vec::new();
        let mut check = |item: u8, what: &str, value: Qv, ok: bool| {
            if !ok {
                violations.push(Violation {
                    item,
                    condition: what.to_string(),
                    value,
                });
            }
        };
        let ortho = &(l * &(k + &rs)) + &(k * &c);
        check(1, "l(k + rs) + k(1 + r)(1 + s) = 0", ortho.clone(), ortho.is_zero());
        let nonneg = |x: &Qv| !x.is_negative();
        check(2, "k >= 1", k.clone(), nonneg(&(k - &one)));
        check(2, "l >= 1", l.clone(), nonneg(&(l - &one)));
        check(2, "k >= r", k - r, nonneg(&(k - r)));
        check(2, "r >= 0", r.clone(), nonneg(r));
        check(2, "s <= -1", s.clone(), nonneg(&(-(s + &one))));
        check(3, "l >= -1 - s", l + &(&one + s), nonneg(&(l + &(&one + s))));
        check(4, "k + rs >= 0", k + &rs, nonneg(&(k + &rs)));
        check(4, "1 + r + s + rs <= 0", c.clone(), !c.is_positive());
        check(5, "l + 1 + r + s + rs >= 0", l + &c, nonneg(&(l + &c)));
        let l1rs = &(l - &one) + &rs;
        check(5, "l - 1 + rs >= 0", l1rs.clone(), nonneg(&l1rs));

        let imprimitive_kind = if k == r && s == &-one.clone() {
            ImprimitiveKind::CliqueUnion
        } else if r.is_zero() && l == &-(&one + s) {
            ImprimitiveKind::Multipartite
        } else {
            ImprimitiveKind::None
        };
        let strict = (k - r).is_positive()
            && r.is_positive()
            && (-(s + &one)).is_positive()
            && (l + &(&one + s)).is_positive()
            && (k + &rs).is_positive();
        FeasibilityReport {
            primitive: violations.is_empty() && imprimitive_kind == ImprimitiveKind::None && strict,
            violations,
            imprimitive_kind,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImprimitiveKind {
    None,
    /// `k = r`, `s = -1`: disjoint union of cliques.
    CliqueUnion,
    /// `r = 0`, `l = -1 - s`: complete multipartite.
    Multipartite,
}

impl fmt::Display for ImprimitiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImprimitiveKind::None => "none",
            ImprimitiveKind::CliqueUnion => "k=r,s=-1",
            ImprimitiveKind::Multipartite => "r=0,l=-1-s",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Which group of conditions failed (1 = orthogonality, 2-5 = inequalities).
    pub item: u8,
    pub condition: String,
    pub value: QuadraticValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub primitive: bool,
    pub violations: Vec<Violation>,
    pub imprimitive_kind: ImprimitiveKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharRow {
    pub label: String,
    pub values: Vec<QuadraticValue>,
}

/// Exact character table (first eigenmatrix): one row per irreducible
/// character, one column per basis element, plus a multiplicity per row.
/// The first row is the valency row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharTable {
    pub rows: Vec<CharRow>,
    pub multiplicities: Vec<QuadraticValue>,
    pub column_labels: Vec<String>,
}

impl CharTable {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_columns(&self) -> usize {
        self.column_labels.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &QuadraticValue {
        &self.rows[row].values[col]
    }

    /// Valencies (the first row).
    pub fn valencies(&self) -> &[QuadraticValue] {
        &self.rows[0].values
    }

    /// Order of the scheme: the sum of the valencies.
    pub fn order(&self) -> QuadraticValue {
        self.valencies().iter().cloned().sum()
    }

    pub fn multiplicity_sum(&self) -> QuadraticValue {
        self.multiplicities.iter().cloned().sum()
    }

    /// `sum_rows m_i P[i][a] P[i][b] / (k_a k_b)` for columns `a != b`; zero
    /// for every pair in a genuine character table.
    pub fn column_orthogonality_defect(&self, a: usize, b: usize) -> QuadraticValue {
        let v = self.valencies();
        let scale = (&v[a] * &v[b]).checked_recip().expect("positive valencies");
        self.rows
            .iter()
            .zip(&self.multiplicities)
            .map(|(row, m)| &(m * &row.values[a]) * &row.values[b])
            .sum::<QuadraticValue>()
            * scale
    }
}

impl fmt::Display for CharTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .zip(&self.multiplicities)
            .map(|(row, m)| {
                let mut c = vec![row.label.clone()];
                c.extend(row.values.iter().map(|v| v.to_string()));
                c.push(format!("[{m}]"));
                c
            })
            .collect();
        let mut header = vec![String::new()];
        header.extend(self.column_labels.iter().cloned());
        header.push("mult".into());
        let ncol = header.len();
        let width: Vec<usize> = (0..ncol)
            .map(|j| cells.iter().chain(std::iter::once(&header)).map(|r| r[j].len()).max().unwrap_or(0))
            .collect();
        for line in std::iter::once(&header).chain(&cells) {
            let padded: Vec<String> = line.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
            writeln!(f, "{}", padded.join("  ").trim_end())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn q(v: i64) -> Qv {
        Qv::from_int(v)
    }

    fn eig(k: i64, l: i64, r: i64, s: i64) -> EigenData {
        EigenData::from_eigen(q(k), q(l), q(r), q(s), Mode::TableAlgebra).unwrap()
    }

    #[test]
    fn petersen_eigenvalues() {
        let e = EigenData::from_params(&SrgParams::new(10, 3, 0, 1), Mode::Graph).unwrap();
        assert_eq!((e.k.clone(), e.l.clone(), e.r.clone(), e.s.clone()), (q(3), q(6), q(1), q(-2)));
        assert_eq!((e.f.clone(), e.g.clone()), (q(5), q(4)));
        assert!(e.feasibility().primitive);
    }

    #[test]
    fn triangles_are_imprimitive() {
        let e = EigenData::from_params(&SrgParams::new(6, 2, 1, 0), Mode::Graph).unwrap();
        assert_eq!((e.k.clone(), e.r.clone(), e.s.clone()), (q(2), q(2), q(-1)));
        let rep = e.feasibility();
        assert_eq!(rep.imprimitive_kind, ImprimitiveKind::CliqueUnion);
        assert!(!rep.primitive);
    }

    #[test]
    fn pentagon_is_conference() {
        let e = EigenData::from_params(&SrgParams::new(5, 2, 0, 1), Mode::Graph).unwrap();
        let r = Qv::new(rat(-1, 2), rat(1, 2), 5).unwrap();
        assert_eq!(e.r, r);
        assert_eq!(e.s, r.conjugate());
        assert_eq!((e.f.clone(), e.g.clone()), (q(2), q(2)));
        assert!(e.feasibility().primitive);
    }

    #[test]
    fn infeasible_params() {
        assert!(matches!(
            EigenData::from_params(&SrgParams::new(10, 3, 0, 2), Mode::Graph),
            Err(SchemeError::InfeasibleParams(_))
        ));
        assert!(SrgParams::new(10, 10, 0, 0).validate().is_err());
    }

    #[test]
    fn non_integral_multiplicity() {
        // f = 21 / (10/3)
        let k = q(3);
        let l = q(5);
        let r = Qv::rational(rat(1, 3));
        let s = q(-3);
        assert!(matches!(
            EigenData::from_eigen(k.clone(), l.clone(), r.clone(), s.clone(), Mode::Graph),
            Err(SchemeError::NonIntegralMultiplicity(_))
        ));
        let e = EigenData::from_eigen(k, l, r, s, Mode::TableAlgebra).unwrap();
        assert!(!e.multiplicities_integral());
    }

    #[test]
    fn feasibility_items() {
        let rep = eig(3, 6, 1, -2).feasibility();
        assert!(rep.violations.is_empty() && rep.primitive);
        let rep = EigenData::from_eigen(q(3), q(6), q(0), q(-2), Mode::TableAlgebra).unwrap().feasibility();
        assert!(rep.violations.iter().any(|v| v.item == 1));
        assert!(rep.violations.iter().all(|v| v.item == 1));
        let rep = eig(2, 3, 2, -1).feasibility();
        assert!(rep.violations.is_empty());
        assert_eq!(rep.imprimitive_kind, ImprimitiveKind::CliqueUnion);
    }

    #[test]
    fn petersen_table() {
        let t = eig(3, 6, 1, -2).char_table();
        let vals: Vec<Vec<Qv>> = t.rows.iter().map(|r| r.values.clone()).collect();
        assert_eq!(vals, vec![vec![q(1), q(3), q(6)], vec![q(1), q(1), q(-2)], vec![q(1), q(-2), q(1)]]);
        assert_eq!(t.multiplicities, vec![q(1), q(5), q(4)]);
        assert!(t.column_orthogonality_defect(1, 2).is_zero());
    }

    #[test]
    fn imprimitive_table_shape() {
        // m + 1 = 3 copies of K_3: k = r = 2, m = 2
        let t = eig(2, 6, 2, -1).char_table();
        let vals: Vec<Vec<Qv>> = t.rows.iter().map(|r| r.values.clone()).collect();
        assert_eq!(vals, vec![vec![q(1), q(2), q(6)], vec![q(1), q(2), q(-3)], vec![q(1), q(-1), q(0)]]);
        assert_eq!(t.multiplicities, vec![q(1), q(2), q(6)]);
    }

    #[test]
    fn conference_table_shape() {
        let e = EigenData::from_params(&SrgParams::new(13, 6, 2, 3), Mode::Graph).unwrap();
        let t = e.char_table();
        let two_r_r2 = q(2) * (&e.r + &(&e.r * &e.r));
        assert_eq!(t.rows[0].values[1], two_r_r2);
        assert_eq!(t.rows[0].values[2], two_r_r2);
        assert_eq!(t.rows[2].values[1], -(q(1) + e.r.clone()));
        assert_eq!(t.multiplicities, vec![q(1), two_r_r2.clone(), two_r_r2]);
    }

    #[test]
    fn regular_matrices_petersen() {
        let e = eig(3, 6, 1, -2);
        let (b1, b2) = e.regular_matrices();
        let expect = [[0, 3, 0], [1, 0, 2], [0, 1, 2]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b1[i][j], q(expect[i][j]));
            }
        }
        assert_eq!(e.params_from_regular(), Some(SrgParams::new(10, 3, 0, 1)));
        assert!(b2.iter().flatten().all(|x| !x.is_negative()));
    }

    #[test]
    fn regular_matrices_boundaries() {
        let (b1, _) = eig(2, 3, 2, -1).regular_matrices();
        let expect = [[0, 2, 0], [1, 1, 0], [0, 0, 2]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b1[i][j], q(expect[i][j]));
            }
        }
        let pent = EigenData::from_params(&SrgParams::new(5, 2, 0, 1), Mode::Graph).unwrap();
        let (_, b2) = pent.regular_matrices();
        assert!(b2[2][2].is_zero());
    }

    #[test]
    fn named_battery_properties() {
        let battery = [(10, 3, 0, 1), (16, 10, 6, 6), (16, 5, 0, 2), (9, 4, 1, 2), (13, 6, 2, 3), (15, 6, 1, 3), (5, 2, 0, 1)];
        for (n, k, mu, nu) in battery {
            let p = SrgParams::new(n, k, mu, nu);
            let e = EigenData::from_params(&p, Mode::Graph).unwrap();
            let rep = e.feasibility();
            assert!(rep.primitive, "{p:?}: {rep:?}");
            assert!((&e.k - &e.r).is_positive() && e.r.is_positive());
            assert!((&e.s + &q(1)).is_negative());
            assert!((&e.k + &(&e.r * &e.s)).is_positive());
            assert!((&e.l + &(&q(1) + &e.s)).is_positive());
            // k + f r + g s = 0 and 1 + f + g = n
            assert!((&e.k + &(&(&e.f * &e.r) + &(&e.g * &e.s))).is_zero());
            assert_eq!(&(&q(1) + &e.f) + &e.g, q(n as i64));
            assert_eq!(e.params_from_regular(), Some(p));
            let back = EigenData::from_params(&e.params_from_regular().unwrap(), Mode::Graph).unwrap();
            assert_eq!(back, e);
            let t = e.char_table();
            assert!(t.column_orthogonality_defect(1, 2).is_zero());
            assert_eq!(t.multiplicity_sum(), q(n as i64));
        }
    }

    #[test]
    fn switched_is_complement() {
        let e = EigenData::from_params(&SrgParams::new(10, 3, 0, 1), Mode::Graph).unwrap();
        let c = EigenData::from_params(&SrgParams::new(10, 6, 3, 4), Mode::Graph).unwrap();
        assert_eq!(e.switched(), c);
    }
}
