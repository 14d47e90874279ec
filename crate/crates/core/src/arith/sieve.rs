use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{ArithError, MultiPoly, Rational};

/// A polynomial known to be strictly signed on every primitive parameter tuple
/// (`k > r > 0`, `s < -1`, `l > -1-s`, `k + r*s > 0`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveMember {
    pub poly: MultiPoly,
    /// `+1` or `-1`: the sign the member takes on primitive tuples.
    pub sign: i8,
    pub note: String,
}

/// The infeasibility sieve `U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveSet {
    pub members: Vec<SieveMember>,
}

/// `p = coefficient * prod(members[i]^e_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UCertificate {
    pub coefficient: Rational,
    pub factors: Vec<(MultiPoly, u32)>,
}

impl UCertificate {
    pub fn expand(&self) -> MultiPoly {
        self.factors
            .iter()
            .fold(MultiPoly::constant(self.coefficient.clone()), |acc, (f, e)| acc * f.pow(*e))
    }

    /// Re-multiplies the factorization and compares with `p`.
    pub fn verifies(&self, p: &MultiPoly) -> bool {
        !self.coefficient.is_zero() && &self.expand() == p
    }
}

fn member(poly: &str, sign: i8, note: &str) -> SieveMember {
    SieveMember {
        poly: poly.parse().expect("static sieve polynomial"),
        sign,
        note: note.to_string(),
    }
}

impl Default for SieveSet {
    /// The default `U`. Quantities that vanish on some primitive graph
    /// (`k+r+s+rs` on Petersen, `l-1+rs` on the pentagon, `k-l` on conference
    /// graphs) are deliberately absent.
    fn default() -> Self {
        SieveSet {
            members: vec![
                member("k", 1, "valency k >= 1"),
                member("l", 1, "co-valency l >= 1"),
                member("r", 1, "r > 0 once k = r is excluded"),
                member("1 + s", -1, "s < -1 once s = -1 is excluded"),
                member("k - r", 1, "k > r in the primitive case"),
                member("l + 1 + s", 1, "l > -1-s in the primitive case"),
                member("k + r*s", 1, "k + rs > 0 (connected graph)"),
                member("(1 + r)*(1 + s)", -1, "r > 0 and s < -1"),
                member("r - s", 1, "r > s"),
                member("k - s", 1, "k > 0 > s"),
                member("l + 1 + r", 1, "l, r > 0"),
                member("1 + r", 1, "r > 0"),
                member("1 + k", 1, "k > 0"),
                member("1 + l", 1, "l > 0"),
            ],
        }
    }
}

impl SieveSet {
    pub fn with_member(mut self, poly: MultiPoly, sign: i8, note: impl Into<String>) -> Self {
        self.members.push(SieveMember {
            poly,
            sign,
            note: note.into(),
        });
        self
    }

    pub fn polys(&self) -> impl Iterator<Item = &MultiPoly> {
        self.members.iter().map(|m| &m.poly)
    }
}

/// Trial-divides `p` by members of `u` until a nonzero constant remains.
///
/// Returns `Ok(None)` when `p` does not factor completely over `u`.
pub fn sieve_nonzero(p: &MultiPoly, u: &SieveSet) -> Result<Option<UCertificate>, ArithError> {
    if p.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    // a scalar multiple of a single member gets a one-factor certificate
    for m in &u.members {
        if m.poly.total_degree() == p.total_degree() {
            if let Some(q) = p.div_exact(&m.poly) {
                if let Some(c) = q.constant_value() {
                    return Ok(Some(UCertificate {
                        coefficient: c,
                        factors: vec![(m.poly.clone(), 1)],
                    }));
                }
            }
        }
    }
    let mut rest = p.clone();
    let mut factors: Vec<(MultiPoly, u32)> = Vec::new();
    'outer: while !rest.is_constant() {
        for m in &u.members {
            if m.poly.is_constant() {
                continue;
            }
            if let Some(q) = rest.div_exact(&m.poly) {
                match factors.iter_mut().find(|(f, _)| f == &m.poly) {
                    Some((_, e)) => *e += 1,
                    None => factors.push((m.poly.clone(), 1)),
                }
                rest = q;
                continue 'outer;
            }
        }
        return Ok(None);
    }
    let coefficient = rest.constant_value().unwrap_or_else(Rational::one);
    Ok(Some(UCertificate {
        coefficient,
        factors,
    }))
}
