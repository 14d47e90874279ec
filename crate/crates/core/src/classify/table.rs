use serde::{Deserialize, Serialize};

use crate::arith::{MultiPoly, QuadraticValue, Symbol};
use crate::product::kronecker_square;

/// The tensor-square character table with entries in `Q[k, l, r, s]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicTable {
    /// Row `3i + j` is `chi_ij`; column `c - 1` is `C_c`.
    pub rows: Vec<Vec<MultiPoly>>,
}

/// Rows `(1, k, l)`, `(1, r, -1-r)`, `(1, s, -1-s)`.
pub fn symbolic_base() -> Vec<Vec<MultiPoly>> {
    let v = MultiPoly::var;
    let one = MultiPoly::one();
    let neg1 = MultiPoly::from_int(-1);
    vec![
        vec![one.clone(), v(Symbol::K), v(Symbol::L)],
        vec![one.clone(), v(Symbol::R), &neg1 - &v(Symbol::R)],
        vec![one, v(Symbol::S), &neg1 - &v(Symbol::S)],
    ]
}

pub fn symbolic_tensor_table() -> SymbolicTable {
    let base = symbolic_base();
    let ones = vec![MultiPoly::one(); 3];
    SymbolicTable {
        rows: kronecker_square(&base, &ones).0,
    }
}

impl SymbolicTable {
    /// `chi_ij(C_c)`.
    pub fn entry(&self, i: usize, j: usize, c: u8) -> &MultiPoly {
        &self.rows[3 * i + j][c as usize - 1]
    }

    pub fn evaluate(&self, k: &QuadraticValue, l: &QuadraticValue, r: &QuadraticValue, s: &QuadraticValue) -> Vec<Vec<QuadraticValue>> {
        let a = [(Symbol::K, k.clone()), (Symbol::L, l.clone()), (Symbol::R, r.clone()), (Symbol::S, s.clone())]
            .into_iter()
            .collect();
        self.rows
            .iter()
            .map(|row| row.iter().map(|p| p.eval(&a).expect("all symbols assigned")).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::{tensor_index, tensor_square_table};
    use crate::scheme::{EigenData, Mode, SrgParams};

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn entries() {
        let t = symbolic_tensor_table();
        assert_eq!(t.entry(2, 2, tensor_index(2, 2)), &p("1 + 2*s + s^2"));
        assert_eq!(t.entry(1, 2, tensor_index(1, 1)), &p("r*s"));
        assert_eq!(t.entry(0, 0, 1), &MultiPoly::one());
    }

    #[test]
    fn evaluates_to_numeric_table() {
        let e = EigenData::from_params(&SrgParams::new(10, 3, 0, 1), Mode::Graph).unwrap();
        let numeric = tensor_square_table(&e.char_table()).rows();
        assert_eq!(symbolic_tensor_table().evaluate(&e.k, &e.l, &e.r, &e.s), numeric);
        let e = EigenData::from_params(&SrgParams::new(13, 6, 2, 3), Mode::Graph).unwrap();
        let numeric = tensor_square_table(&e.char_table()).rows();
        assert_eq!(symbolic_tensor_table().evaluate(&e.k, &e.l, &e.r, &e.s), numeric);
    }
}
