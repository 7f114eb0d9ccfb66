//! Linear operators on the polynomial spaces `P_n` (degree ≤ n), compiled to
//! exact integer matrices in the ascending monomial basis `1, z, …, zⁿ`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::psl2::Mat2Z;

/// A polynomial of degree at most `n`, stored as its `n + 1` coefficients in
/// ascending order. Trailing zeros are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVec {
    coeffs: Vec<BigRational>,
}

impl PolyVec {
    pub fn zero(degree_bound: usize) -> Self {
        PolyVec {
            coeffs: vec![BigRational::zero(); degree_bound + 1],
        }
    }

    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "P_n has n + 1 coefficients");
        PolyVec { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(Zero::is_zero)
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + c)
    }
}

/// A linear map `P_n → P_m` as an `(m + 1) × (n + 1)` integer matrix;
/// column `k` holds the image of `z^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl LinMap {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LinMap {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n + 1, n + 1);
        for i in 0..=n {
            m.entries[i * (n + 1) + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        LinMap {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().map(BigInt::from).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn scale(&self, s: i64) -> LinMap {
        let s = BigInt::from(s);
        LinMap {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * &s).collect(),
        }
    }

    /// Pads with zero rows so the codomain becomes `P_{rows-1}`.
    pub fn with_rows(&self, rows: usize) -> LinMap {
        assert!(rows >= self.rows);
        let mut out = LinMap::zeros(rows, self.cols);
        out.entries[..self.entries.len()].clone_from_slice(&self.entries);
        out
    }

    pub fn apply(&self, p: &PolyVec) -> PolyVec {
        assert_eq!(p.coeffs.len(), self.cols);
        PolyVec::new(
            (0..self.rows)
                .map(|r| {
                    (0..self.cols).fold(BigRational::zero(), |acc, c| {
                        acc + BigRational::from_integer(self.get(r, c).clone()) * &p.coeffs[c]
                    })
                })
                .collect(),
        )
    }
}

impl Mul for &LinMap {
    type Output = LinMap;

    fn mul(self, rhs: &LinMap) -> LinMap {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in composition");
        let mut out = LinMap::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &LinMap {
    type Output = LinMap;

    fn add(self, rhs: &LinMap) -> LinMap {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        LinMap {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &LinMap {
    type Output = LinMap;

    fn sub(self, rhs: &LinMap) -> LinMap {
        self + &(-rhs)
    }
}

impl Neg for &LinMap {
    type Output = LinMap;

    fn neg(self) -> LinMap {
        LinMap {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }
}

/// Ascending coefficients of `(a z + b)^k (c z + d)^{n-k}`.
fn binomial_product(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt, k: usize, n: usize) -> Vec<BigInt> {
    let pow = |lead: &BigInt, cst: &BigInt, e: usize| -> Vec<BigInt> {
        // (lead z + cst)^e
        let mut out = Vec::with_capacity(e + 1);
        let mut binom = BigInt::one();
        for i in 0..=e {
            out.push(&binom * num_traits::pow(lead.clone(), i) * num_traits::pow(cst.clone(), e - i));
            binom = binom * BigInt::from(e - i) / BigInt::from(i + 1);
        }
        out
    };
    let left = pow(a, b, k);
    let right = pow(c, d, n - k);
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, x) in left.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in right.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// The substitution operator `φ ↦ (cz + d)ⁿ φ((az + b)/(cz + d))` on `P_n`.
///
/// Any nonzero determinant is accepted. Composition is contravariant:
/// `compile_slash(A)·compile_slash(B) = compile_slash(B·A)`.
pub fn compile_slash(m: &Mat2Z, n: usize) -> Result<LinMap> {
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut out = LinMap::zeros(n + 1, n + 1);
    for k in 0..=n {
        for (i, x) in binomial_product(&m.a, &m.b, &m.c, &m.d, k, n).into_iter().enumerate() {
            *out.get_mut(i, k) = x;
        }
    }
    Ok(out)
}

/// `φ(z) ↦ φ(z + h)` on `P_n`.
pub fn shift_map(n: usize, h: i64) -> LinMap {
    compile_slash(&Mat2Z::new(1, h, 0, 1), n).expect("translation is invertible")
}

/// Multiplication by the fixed polynomial `factor` as a map `P_n → P_{n+deg}`.
pub fn multiply_map(n: usize, factor: &[i64]) -> LinMap {
    let deg = factor.len().saturating_sub(1);
    let mut out = LinMap::zeros(n + deg + 1, n + 1);
    for k in 0..=n {
        for (i, &f) in factor.iter().enumerate() {
            *out.get_mut(k + i, k) += f;
        }
    }
    out
}

/// Monomial indices spanning the even and odd subspaces of `P_n`.
pub fn parity_split(n: usize) -> (Vec<usize>, Vec<usize>) {
    ((0..=n).step_by(2).collect(), (1..=n).step_by(2).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent expansion of (cz+d)^n φ((az+b)/(cz+d)) for φ = z^k by
    /// exact evaluation at n+1 rational points and Lagrange interpolation.
    fn slash_by_interpolation(m: [i64; 4], n: usize, k: usize) -> Vec<BigRational> {
        let [a, b, c, d] = m.map(|x| BigRational::from_integer(x.into()));
        let points: Vec<BigRational> = (0..=n as i64)
            .map(|i| BigRational::new((2 * i + 1).into(), 7.into()))
            .collect();
        let values: Vec<BigRational> = points
            .iter()
            .map(|z| {
                let den = &c * z + &d;
                let arg = (&a * z + &b) / &den;
                num_traits::pow(den, n) * num_traits::pow(arg, k)
            })
            .collect();
        // Newton divided differences, then expand to monomials.
        let mut coef = values.clone();
        for j in 1..=n {
            for i in (j..=n).rev() {
                coef[i] = (&coef[i] - &coef[i - 1]) / (&points[i] - &points[i - j]);
            }
        }
        let mut poly = vec![BigRational::zero(); n + 1];
        for i in (0..=n).rev() {
            // poly = poly * (z - x_i) + coef[i]
            let mut next = vec![BigRational::zero(); n + 1];
            for (j, p) in poly.iter().enumerate() {
                if j < n {
                    next[j + 1] += p;
                }
                next[j] -= p * &points[i];
            }
            next[0] += &coef[i];
            poly = next;
        }
        poly
    }

    fn as_rationals(v: Vec<BigInt>) -> Vec<BigRational> {
        v.into_iter().map(BigRational::from_integer).collect()
    }

    #[test]
    fn identity_and_translation() {
        assert_eq!(compile_slash(&Mat2Z::identity(), 6).unwrap(), LinMap::identity(6));
        let t = compile_slash(&Mat2Z::t(), 1).unwrap();
        assert_eq!(t, LinMap::from_rows(vec![vec![1, 1], vec![0, 1]]));
        assert_eq!(compile_slash(&Mat2Z::t(), 9).unwrap(), shift_map(9, 1));
    }

    #[test]
    fn inversion_matches_interpolation() {
        let q = compile_slash(&Mat2Z::q(), 2).unwrap();
        for k in 0..=2 {
            assert_eq!(as_rationals(q.column(k)), slash_by_interpolation([0, 1, -1, 0], 2, k));
        }
        for m in [[1, 1, 2, 1], [-1, 0, 1, 1], [0, -1, 1, 2], [3, 2, 4, 3]] {
            let map = compile_slash(&Mat2Z::new(m[0], m[1], m[2], m[3]), 5).unwrap();
            for k in 0..=5 {
                assert_eq!(as_rationals(map.column(k)), slash_by_interpolation(m, 5, k));
            }
        }
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(compile_slash(&Mat2Z::new(1, 2, 2, 4), 3), Err(Error::SingularMatrix));
    }

    #[test]
    fn shifts() {
        assert_eq!(shift_map(4, 0), LinMap::identity(4));
        let s = shift_map(2, 1);
        assert_eq!(s.column(2), vec![1.into(), 2.into(), 1.into()]);
        assert_eq!(&shift_map(7, 1) * &shift_map(7, -1), LinMap::identity(7));
    }

    #[test]
    fn multiply_by_linear() {
        let m = multiply_map(1, &[1, 2]);
        assert_eq!(m, LinMap::from_rows(vec![vec![1, 0], vec![2, 1], vec![0, 2]]));
    }

    #[test]
    fn parity() {
        let (e, o) = parity_split(4);
        assert_eq!((e.len(), o.len()), (3, 2));
        assert_eq!(parity_split(2), (vec![0, 2], vec![1]));
        let (e, o) = parity_split(5);
        assert_eq!((e.len(), o.len()), (3, 3));
        assert!(PolyVec::from_ints(&[1, 0, 3]).is_even());
        assert!(PolyVec::from_ints(&[0, 2, 0, 1]).is_odd());
    }

    fn unimodular() -> impl Strategy<Value = Mat2Z> {
        // Words in T, T⁻¹, Q and the reflection diag(1, -1) give det ±1.
        proptest::collection::vec(0..4u8, 0..8).prop_map(|w| {
            w.into_iter().fold(Mat2Z::identity(), |acc, g| {
                let m = match g {
                    0 => Mat2Z::t(),
                    1 => Mat2Z::new(1, -1, 0, 1),
                    2 => Mat2Z::q(),
                    _ => Mat2Z::new(1, 0, 0, -1),
                };
                &acc * &m
            })
        })
    }

    proptest! {
        #[test]
        fn slash_is_contravariant(a in unimodular(), b in unimodular(), n in 0usize..=10) {
            let lhs = &compile_slash(&a, n).unwrap() * &compile_slash(&b, n).unwrap();
            prop_assert_eq!(lhs, compile_slash(&(&b * &a), n).unwrap());
        }

        #[test]
        fn slash_even_weight_sign_invariant(a in unimodular(), half in 0usize..=5) {
            let n = 2 * half;
            prop_assert_eq!(compile_slash(&a, n).unwrap(), compile_slash(&a.neg(), n).unwrap());
        }

        #[test]
        fn slash_preserves_degree(a in unimodular(), n in 0usize..=10) {
            let m = compile_slash(&a, n).unwrap();
            prop_assert_eq!((m.rows(), m.cols()), (n + 1, n + 1));
        }
    }
}
