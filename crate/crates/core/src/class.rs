//! Integer class triples attached to calligraphs and their product.
//!
//! The product of two triples under the quadratic form
//! `2 (a1*a2 - b1*b2 - c1*c2)` equals the realization count of a graph that
//! splits into the corresponding pair of calligraphs. The entries `b` and
//! `c` are tied to the first and second base vertex; reversing the base
//! orientation swaps them.

use serde::{Deserialize, Serialize};

/// The class triple of a calligraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct S2Class {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl S2Class {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        S2Class { a, b, c }
    }

    /// The class of the mirrored calligraph (base orientation reversed).
    pub const fn swapped(self) -> Self {
        S2Class { a: self.a, b: self.c, c: self.b }
    }

    pub const fn as_array(self) -> [i64; 3] {
        [self.a, self.b, self.c]
    }
}

impl From<[i64; 3]> for S2Class {
    fn from([a, b, c]: [i64; 3]) -> Self {
        S2Class { a, b, c }
    }
}

impl std::fmt::Display for S2Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Classes of the three basic calligraphs.
pub const CLASS_L: S2Class = S2Class::new(1, 1, 0);
pub const CLASS_R: S2Class = S2Class::new(1, 0, 1);
pub const CLASS_C: S2Class = S2Class::new(2, 0, 0);

/// The quadratic form pairing two classes into a realization count.
pub const fn quad_form(x: S2Class, y: S2Class) -> i64 {
    2 * (x.a * y.a - x.b * y.b - x.c * y.c)
}

/// Matrix of the quadratic form, `diag(2, -2, -2)`.
pub const FORM_MATRIX: [[i64; 3]; 3] = [[2, 0, 0], [0, -2, 0], [0, 0, -2]];

/// The integral automorphism preserving the form that fixes the classes of
/// the two edge gadgets and exchanges `(2,0,0)` with `(6,4,4)`; either triple
/// would serve as the hub gadget's class.
pub const TRANSFORM_MATRIX: [[i64; 3]; 3] = [[3, -2, -2], [2, -1, -2], [2, -2, -1]];

/// Applies a 3x3 integer matrix to a class triple (as a column vector).
pub fn apply_matrix(m: &[[i64; 3]; 3], x: S2Class) -> S2Class {
    let v = x.as_array();
    S2Class::new(
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    )
}

/// `m * n` for 3x3 integer matrices.
pub fn matmul(m: &[[i64; 3]; 3], n: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut out = [[0i64; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| m[i][k] * n[k][j]).sum();
        }
    }
    out
}

pub fn transpose(m: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut out = [[0i64; 3]; 3];
    for (i, row) in m.iter().enumerate() {
        for (j, &cell) in row.iter().enumerate() {
            out[j][i] = cell;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_products() {
        assert_eq!(quad_form(CLASS_L, CLASS_C), 4);
        assert_eq!(quad_form(CLASS_R, CLASS_C), 4);
        assert_eq!(quad_form(CLASS_C, CLASS_C), 8);
        assert_eq!(
            quad_form(S2Class::new(384, 0, 0), S2Class::new(640, 256, 384)),
            491520
        );
        assert_eq!(quad_form(S2Class::new(0, 0, 0), S2Class::new(7, -3, 2)), 0);
    }

    #[test]
    fn transform_preserves_form() {
        let o = TRANSFORM_MATRIX;
        let oao_t = matmul(&matmul(&o, &FORM_MATRIX), &transpose(&o));
        assert_eq!(oao_t, FORM_MATRIX);
        assert_eq!(apply_matrix(&o, CLASS_L), CLASS_L);
        assert_eq!(apply_matrix(&o, CLASS_R), CLASS_R);
        assert_eq!(apply_matrix(&o, CLASS_C), S2Class::new(6, 4, 4));
    }

    #[test]
    fn swap_rule() {
        assert_eq!(CLASS_L.swapped(), CLASS_R);
        assert_eq!(CLASS_C.swapped(), CLASS_C);
    }
}
