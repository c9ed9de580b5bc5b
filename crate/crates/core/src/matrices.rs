//! Dense divisibility matrices for small `x`: R′, Redheffer, T and U.
//!
//! Row `i` of T is row `i` of R′ multiplied by `M(⌊x/i⌋)`; U further multiplies column `j`
//! by a weight `f(j)` (φ by default). For `x = 12` this reproduces the worked T matrix
//! entry for entry.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::floorsum::Number;
use crate::identities::{IdentityId, IdentityReport, Mode, Side};
use crate::mertens::mertens_quotients;
use crate::sieves::{ArithFunction, SieveTable, ValueKind};

pub const DENSE_CAP: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    RPrime,
    Redheffer,
    T,
    U(ArithFunction),
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixKind::RPrime => write!(f, "R_PRIME"),
            MatrixKind::Redheffer => write!(f, "REDHEFFER"),
            MatrixKind::T => write!(f, "T"),
            MatrixKind::U(w) => write!(f, "U({w})"),
        }
    }
}

/// Row-major `x × x` matrix with entries `numerators / denominator`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisibilityMatrix {
    x: u64,
    kind: MatrixKind,
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

pub fn build(kind: MatrixKind, x: u64) -> Result<DivisibilityMatrix> {
    DivisibilityMatrix::build(kind, x)
}

impl DivisibilityMatrix {
    pub fn build(kind: MatrixKind, x: u64) -> Result<Self> {
        if x == 0 || x > DENSE_CAP {
            return Err(Error::CapExceeded { x, cap: DENSE_CAP });
        }
        let n = x as usize;
        let mut numerators = vec![BigInt::zero(); n * n];
        let mut denominator = BigInt::one();
        match kind {
            MatrixKind::RPrime => {
                for i in 1..=n {
                    for j in (1..=i).filter(|j| i % j == 0) {
                        numerators[(i - 1) * n + j - 1] = BigInt::one();
                    }
                }
            }
            MatrixKind::Redheffer => {
                for i in 1..=n {
                    for j in 1..=n {
                        if j == 1 || j % i == 0 {
                            numerators[(i - 1) * n + j - 1] = BigInt::one();
                        }
                    }
                }
            }
            MatrixKind::T | MatrixKind::U(_) => {
                let mq = mertens_quotients(x)?;
                let weights: Vec<(i64, i64)> = match kind {
                    MatrixKind::U(w) => {
                        if w.kind() == ValueKind::Float {
                            return Err(Error::OutOfRange(format!("U weight {w} is not exact")));
                        }
                        let sieve = SieveTable::build(x, &[])?;
                        (1..=x)
                            .map(|j| {
                                sieve
                                    .rational_value(w, j)
                                    .map(|(a, b)| (a as i64, b as i64))
                                    .or_else(|| sieve.int_value(w, j).map(|v| (v as i64, 1)))
                                    .unwrap()
                            })
                            .collect()
                    }
                    _ => vec![(1, 1); n],
                };
                for &(_, b) in &weights {
                    denominator = denominator.lcm(&BigInt::from(b));
                }
                for i in 1..=n {
                    let row_scale = mq.column(i as u64);
                    for j in (1..=i).filter(|j| i % j == 0) {
                        let (a, b) = weights[j - 1];
                        numerators[(i - 1) * n + j - 1] =
                            BigInt::from(row_scale * a) * (&denominator / BigInt::from(b));
                    }
                }
            }
        }
        Ok(Self { x, kind, numerators, denominator })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    fn n(&self) -> usize {
        self.x as usize
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        let n = self.n();
        BigRational::new(self.numerators[(i - 1) * n + j - 1].clone(), self.denominator.clone())
    }

    /// Integer entries when the denominator is 1.
    pub fn integer_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.denominator.is_one() {
            return None;
        }
        Some(self.numerators.chunks(self.n()).map(|r| r.to_vec()).collect())
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        self.numerators.chunks(self.n()).map(|r| BigRational::new(r.iter().sum(), self.denominator.clone())).collect()
    }

    pub fn column_sums(&self) -> Vec<BigRational> {
        let n = self.n();
        (0..n)
            .map(|j| {
                let s: BigInt = (0..n).map(|i| &self.numerators[i * n + j]).sum();
                BigRational::new(s, self.denominator.clone())
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        for i in 1..=n {
            let row: Vec<String> = (1..=n).map(|j| self.entry(i, j).to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Fraction-free (Bareiss) elimination on integer rows.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

pub fn determinant_exact(m: &DivisibilityMatrix) -> Number {
    let n = m.n();
    let rows: Vec<Vec<BigInt>> = m.numerators.chunks(n).map(|r| r.to_vec()).collect();
    let det = bareiss_determinant(rows);
    if m.denominator.is_one() {
        Number::Integer(det)
    } else {
        let scale = num_traits::pow(m.denominator.clone(), n);
        Number::Rational(BigRational::new(det, scale))
    }
}

/// Row-total versus column-total of T or U, plus the per-row and per-column identities:
///
/// * T: column `j` sums to `Σ_m M(⌊x/(jm)⌋) = 1`, row `i` to `M(⌊x/i⌋)·σ₀(i)`, total `x`.
/// * U(f): column `j` sums to `f(j)`, row `i` to `M(⌊x/i⌋)·Σ_{d|i} f(d)`, total `Σ f(j)`
///   (`A(x)` for the default φ weight).
pub fn sum_identity_check(m: &DivisibilityMatrix) -> Result<IdentityReport> {
    let (id, weight) = match m.kind {
        MatrixKind::T => (IdentityId::TMatrixTotals, None),
        MatrixKind::U(w) => (IdentityId::UMatrixTotals, Some(w)),
        k => return Err(Error::OutOfRange(format!("sum check needs T or U, got {k}"))),
    };
    let x = m.x;
    let sieve = SieveTable::build(x, &[])?;
    let mq = mertens_quotients(x)?;
    let f = |j: u64| -> BigRational {
        match weight {
            None => BigRational::one(),
            Some(w) => {
                let (a, b) = sieve.rational_value(w, j).unwrap();
                BigRational::new(BigInt::from(a), BigInt::from(b))
            }
        }
    };
    let rows = m.row_sums();
    let cols = m.column_sums();
    let rows_ok = rows.iter().enumerate().all(|(i, r)| {
        let i = i as u64 + 1;
        let divisor_sum: BigRational = sieve.divisors(i).into_iter().map(&f).fold(BigRational::zero(), |a, b| a + b);
        *r == divisor_sum * BigRational::from_integer(mq.column(i).into())
    });
    let cols_ok = cols.iter().enumerate().all(|(j, c)| *c == f(j as u64 + 1));
    let row_total: BigRational = rows.into_iter().fold(BigRational::zero(), |a, b| a + b);
    let col_total: BigRational = cols.into_iter().fold(BigRational::zero(), |a, b| a + b);
    let expected: BigRational = (1..=x).map(f).fold(BigRational::zero(), |a, b| a + b);
    let pass = rows_ok && cols_ok && row_total == col_total && row_total == expected;
    let as_number = |r: BigRational| {
        if r.is_integer() {
            Number::Integer(r.to_integer())
        } else {
            Number::Rational(r)
        }
    };
    Ok(IdentityReport {
        id,
        x,
        mode: if m.denominator.is_one() { Mode::ExactInteger } else { Mode::ExactRational },
        lhs: Side::Number(as_number(row_total)),
        rhs: Side::Number(as_number(col_total)),
        margin: 0.0,
        pass,
    })
}
