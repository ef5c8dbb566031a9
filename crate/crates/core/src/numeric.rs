//! Exact scalar arithmetic: arbitrary-precision rationals, complex rationals,
//! and dense complex-rational matrices with exact linear algebra.
//!
//! Every distance, operator entry and field coefficient in this crate is kept
//! exact so that min-plus minima, triangle checks and the bimodule identities
//! can be asserted with `==` instead of tolerances.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Exact rational scalar.
pub type Rat = BigRational;

/// Exact complex-rational scalar.
pub type CRat = Complex<BigRational>;

/// Build a rational from an integer pair; panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

pub fn crat(re: Rat, im: Rat) -> CRat {
    Complex::new(re, im)
}

pub fn crat_int(re: i64, im: i64) -> CRat {
    Complex::new(rat_int(re), rat_int(im))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Wrapper giving rationals the `[numerator, denominator]` JSON encoding used
/// by every file format in this crate. Values are normalized to lowest terms
/// with a positive denominator on both ends of the round trip.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatPair(pub Rat);

impl fmt::Debug for RatPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<Rat> for RatPair {
    fn from(r: Rat) -> Self {
        RatPair(r)
    }
}

impl Serialize for RatPair {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let numer = self.0.numer().to_i128().ok_or_else(|| {
            serde::ser::Error::custom("rational numerator exceeds the i128 JSON range")
        })?;
        let denom = self.0.denom().to_i128().ok_or_else(|| {
            serde::ser::Error::custom("rational denominator exceeds the i128 JSON range")
        })?;
        (numer, denom).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RatPair {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let (numer, denom): (i128, i128) = Deserialize::deserialize(de)?;
        if denom == 0 {
            return Err(D::Error::custom("rational with zero denominator"));
        }
        Ok(RatPair(BigRational::new(
            BigInt::from(numer),
            BigInt::from(denom),
        )))
    }
}

/// Dense complex-rational matrix in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixC {
    rows: usize,
    cols: usize,
    data: Vec<CRat>,
}

impl fmt::Debug for MatrixC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixC {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{}+{}i", self.at(i, j).re, self.at(i, j).im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl MatrixC {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixC {
            rows,
            cols,
            data: vec![CRat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = CRat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CRat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        MatrixC {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Real integer matrix helper, mostly for tests.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| crat_int(v, 0)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &CRat {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut CRat {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MatrixC {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MatrixC {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &CRat) -> Self {
        MatrixC {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.at(k, j);
                    let cur = out.at(i, j).clone();
                    *out.at_mut(i, j) = cur + add;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).conj();
            }
        }
        out
    }

    /// Flatten to a coordinate vector, row-major.
    pub fn flatten(&self) -> Vec<CRat> {
        self.data.clone()
    }

    /// Operator norm computed numerically: the square root of the largest
    /// eigenvalue of the (exact) Gram matrix `self* · self`, found with the
    /// real symmetric Jacobi solver through the standard 2n x 2n embedding of
    /// a Hermitian matrix.
    pub fn op_norm_f64(&self) -> f64 {
        use crate::linalg::MatF;
        if self.is_zero() {
            return 0.0;
        }
        let gram = self.adjoint().mul(self); // Hermitian PSD, cols x cols
        let n = gram.rows;
        let mut emb = MatF::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let re = rat_to_f64(&gram.at(i, j).re);
                let im = rat_to_f64(&gram.at(i, j).im);
                emb.set(i, j, re);
                emb.set(n + i, n + j, re);
                emb.set(i, n + j, -im);
                emb.set(n + i, j, im);
            }
        }
        let (evals, _) = crate::linalg::sym_eigen(&emb).expect("Jacobi did not converge");
        let lam = evals.iter().cloned().fold(0.0_f64, f64::max);
        lam.max(0.0).sqrt()
    }
}

/// Row-reduce a list of coordinate vectors over the complex rationals,
/// returning an echelon basis of their span. Exact Gaussian elimination.
pub fn row_echelon_basis(vectors: &[Vec<CRat>]) -> Vec<Vec<CRat>> {
    let mut basis: Vec<Vec<CRat>> = Vec::new();
    for v in vectors {
        let mut v = v.clone();
        reduce_against(&mut v, &basis);
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            let inv = invert(&v[pivot]);
            for x in v.iter_mut() {
                *x = x.clone() * inv.clone();
            }
            basis.push(v);
            basis.sort_by_key(|row| row.iter().position(|x| !x.is_zero()).unwrap_or(usize::MAX));
        }
    }
    basis
}

/// Whether `target` lies in the span of `basis` vectors (all the same length).
pub fn in_span(basis: &[Vec<CRat>], target: &[CRat]) -> bool {
    let echelon = row_echelon_basis(basis);
    let mut v = target.to_vec();
    reduce_against(&mut v, &echelon);
    v.iter().all(|x| x.is_zero())
}

fn reduce_against(v: &mut [CRat], echelon: &[Vec<CRat>]) {
    for row in echelon {
        if let Some(pivot) = row.iter().position(|x| !x.is_zero()) {
            if !v[pivot].is_zero() {
                let factor = v[pivot].clone() * invert(&row[pivot]);
                for (x, r) in v.iter_mut().zip(row.iter()) {
                    *x = x.clone() - factor.clone() * r.clone();
                }
            }
        }
    }
}

fn invert(z: &CRat) -> CRat {
    let norm = &z.re * &z.re + &z.im * &z.im;
    assert!(!norm.is_zero(), "division by zero complex rational");
    Complex::new(&z.re / &norm, -(&z.im / &norm))
}

/// Exact absolute value squared of a complex rational.
pub fn abs_sqr(z: &CRat) -> Rat {
    &z.re * &z.re + &z.im * &z.im
}

/// Approximate magnitude, for float-mode thresholds and reports.
pub fn magnitude_f64(z: &CRat) -> f64 {
    rat_to_f64(&abs_sqr(z)).sqrt()
}

/// Exact max-abs over rationals (used for gap and propagation bookkeeping).
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_pair_round_trip_normalizes() {
        let v: RatPair = serde_json::from_str("[6, -4]").unwrap();
        assert_eq!(v.0, rat(-3, 2));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[-3,2]");
    }

    #[test]
    fn span_membership() {
        let a = vec![crat_int(1, 0), crat_int(0, 0)];
        let b = vec![crat_int(1, 0), crat_int(1, 0)];
        let t = vec![crat_int(3, 0), crat_int(2, 0)];
        assert!(in_span(&[a.clone(), b.clone()], &t));
        let outside = vec![crat_int(0, 0), crat_int(0, 1)];
        assert!(!in_span(&[a], &outside));
        assert!(in_span(&[b], &[crat_int(2, 0), crat_int(2, 0)]));
    }

    #[test]
    fn adjoint_is_involution() {
        let m = MatrixC::from_rows(vec![
            vec![crat_int(1, 2), crat_int(0, -3)],
            vec![crat_int(4, 0), crat_int(5, 5)],
        ]);
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn op_norm_of_unit_row() {
        let m = MatrixC::from_ints(&[&[1, 0, 0]]);
        let n = m.op_norm_f64();
        assert!((n - 1.0).abs() < 1e-12);
    }
}
