//! Sign conditions in one positive variable: Sturm sequences, root
//! isolation on `(0, inf)` and the resulting cell decomposition.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::solve::Constraint;
use crate::arith::{MultiPoly, Rational, Symbol};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn from_multi(p: &MultiPoly, var: Symbol) -> Option<UPoly> {
        let cs = p.coefficients_in(var);
        let v: Option<Vec<Rational>> = cs.iter().map(MultiPoly::constant_value_or_zero).collect();
        Some(UPoly(v?).trimmed())
    }

    fn trimmed(mut self) -> UPoly {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign(&self.eval(x))
    }

    fn derivative(&self) -> UPoly {
        UPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
        .trimmed()
    }

    fn rem(&self, d: &UPoly) -> UPoly {
        let mut r = self.0.clone();
        let dl = d.lead().clone();
        while r.len() >= d.0.len() && !r.is_empty() {
            let q = r.last().unwrap() / &dl;
            let shift = r.len() - d.0.len();
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &q * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UPoly(r)
    }

    fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly(Vec::new());
        }
        let mut v = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly(v)
    }

    fn sturm(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            seq.push(r);
        }
        seq
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        let seq = self.sturm();
        variations(&seq, a).saturating_sub(variations(&seq, b))
    }

    /// An upper bound for the absolute value of every root.
    fn root_bound(&self) -> Rational {
        let l = self.lead().abs();
        Rational::one() + self.0.iter().map(|c| c.abs() / &l).fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }

    /// Disjoint open intervals, each holding exactly one positive root, none
    /// with a root at an endpoint, and with positive left endpoints.
    pub fn isolate_positive(&self) -> Vec<(Rational, Rational)> {
        if self.degree() == 0 {
            return Vec::new();
        }
        // roots at zero do not matter and would upset the Sturm count
        let z = self.0.iter().position(|c| !c.is_zero()).unwrap_or(0);
        let p = UPoly(self.0[z..].to_vec());
        if p.degree() == 0 {
            return Vec::new();
        }
        let seq = p.sturm();
        let mut out = Vec::new();
        let mut stack = vec![(Rational::zero(), p.root_bound())];
        while let Some((a, b)) = stack.pop() {
            let n = variations(&seq, &a).saturating_sub(variations(&seq, &b));
            if n == 0 {
                continue;
            }
            if n == 1 && a.is_positive() {
                out.push((a, b));
                continue;
            }
            let mid = (1..)
                .map(|k: i64| &a + (&b - &a) * Rational::new(k.into(), (k + 1).into()))
                .find(|m| !p.eval(m).is_zero())
                .expect("finitely many roots");
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        out.sort();
        out
    }
}

fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(seq: &[UPoly], x: &Rational) -> usize {
    let signs: Vec<i8> = seq.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

trait ConstOrZero {
    fn constant_value_or_zero(&self) -> Option<Rational>;
}

impl ConstOrZero for MultiPoly {
    fn constant_value_or_zero(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else {
            self.constant_value()
        }
    }
}

/// A cell of the decomposition of `(0, inf)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cell {
    /// An open interval containing the rational sample.
    Open { sample: Rational },
    /// The unique root inside `(lo, hi)` of the constraint product.
    Root { lo: Rational, hi: Rational },
}

/// Cells of `(0, inf)` on which every constraint holds. Each constraint must
/// involve only `var`. Returns `None` otherwise.
pub fn feasible_cells(cons: &[Constraint], var: Symbol) -> Option<Vec<Cell>> {
    let polys: Vec<UPoly> = cons.iter().map(|c| UPoly::from_multi(&c.poly, var)).collect::<Option<_>>()?;
    let product = polys
        .iter()
        .filter(|p| !p.is_zero())
        .fold(UPoly(vec![Rational::one()]), |acc, p| acc.mul(p));
    let roots = product.isolate_positive();
    let holds = |x: &Rational| {
        cons.iter().zip(&polys).all(|(c, p)| {
            let s = p.sign_at(x);
            if c.strict {
                s > 0
            } else {
                s >= 0
            }
        })
    };
    let mut samples: Vec<Rational> = Vec::new();
    match roots.first() {
        None => samples.push(Rational::one()),
        Some((a, _)) => samples.push(a.clone()),
    }
    for (_, b) in &roots {
        samples.push(b.clone());
    }
    let mut out: Vec<Cell> = samples
        .iter()
        .filter(|x| holds(x))
        .map(|x| Cell::Open { sample: x.clone() })
        .collect();
    for (i, (lo, hi)) in roots.iter().enumerate() {
        // signs next to the root, and which constraints vanish there
        let left = &samples[i];
        let right = &samples[i + 1];
        let ok = cons.iter().zip(&polys).all(|(c, p)| {
            if p.is_zero() {
                return !c.strict;
            }
            if p.count_roots(lo, hi) > 0 {
                !c.strict
            } else {
                p.sign_at(left) > 0 && p.sign_at(right) > 0
            }
        });
        if ok {
            out.push(Cell::Root {
                lo: lo.clone(),
                hi: hi.clone(),
            });
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn up(s: &str) -> UPoly {
        UPoly::from_multi(&s.parse().unwrap(), Symbol::R).unwrap()
    }

    #[test]
    fn sturm_counts() {
        let p = up("(r - 1)*(r - 2)*(r + 3)");
        assert_eq!(p.count_roots(&q(0, 1), &q(10, 1)), 2);
        assert_eq!(p.count_roots(&q(-10, 1), &q(10, 1)), 3);
        assert_eq!(up("r^2 + 1").count_roots(&q(-10, 1), &q(10, 1)), 0);
    }

    #[test]
    fn isolation_golden_ratio() {
        let iv = up("(r^2 + r - 1)*(r - 1)").isolate_positive();
        assert_eq!(iv.len(), 2);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let f = |x: &Rational| x.numer().to_string().parse::<f64>().unwrap() / x.denom().to_string().parse::<f64>().unwrap();
        assert!(f(&iv[0].0) < g && g < f(&iv[0].1));
    }

    #[test]
    fn cells_of_interval() {
        // 0 < r < 2 from 2 - r > 0
        let cons = vec![Constraint {
            poly: "2 - r".parse().unwrap(),
            strict: true,
        }];
        let cells = feasible_cells(&cons, Symbol::R).unwrap();
        assert_eq!(cells.len(), 1);
        let cons = vec![
            Constraint {
                poly: "2 - r".parse().unwrap(),
                strict: false,
            },
            Constraint {
                poly: "r - 2".parse().unwrap(),
                strict: false,
            },
        ];
        let cells = feasible_cells(&cons, Symbol::R).unwrap();
        assert_eq!(cells.len(), 1);
        assert!(matches!(cells[0], Cell::Root { .. }));
        let cons = vec![
            Constraint {
                poly: "1 - r".parse().unwrap(),
                strict: true,
            },
            Constraint {
                poly: "r - 2".parse().unwrap(),
                strict: true,
            },
        ];
        assert!(feasible_cells(&cons, Symbol::R).unwrap().is_empty());
    }
}
