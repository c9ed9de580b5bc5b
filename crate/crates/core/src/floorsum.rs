//! Quotient blocks of `[1, x]` and block-wise weighted Mertens sums.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mertens::MertensLookup;
use crate::numeric::NeumaierSum;
use crate::sieves::{PrefixSums, PrefixValues};

/// `⌊x/i⌋ = v` for every `i ∈ [lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientBlock {
    pub v: u64,
    pub lo: u64,
    pub hi: u64,
}

impl QuotientBlock {
    pub fn width(&self) -> u64 {
        self.hi - self.lo + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientBlocks {
    pub x: u64,
    pub blocks: Vec<QuotientBlock>,
}

/// Iterator over the maximal constant-quotient blocks of `[1, x]`, `v` decreasing.
#[derive(Debug, Clone)]
pub struct BlockIter {
    x: u64,
    i: u64,
}

impl BlockIter {
    pub fn new(x: u64) -> Self {
        Self { x, i: 1 }
    }
}

impl Iterator for BlockIter {
    type Item = QuotientBlock;

    fn next(&mut self) -> Option<QuotientBlock> {
        if self.i > self.x {
            return None;
        }
        let lo = self.i;
        let v = self.x / lo;
        let hi = self.x / v;
        self.i = hi + 1;
        Some(QuotientBlock { v, lo, hi })
    }
}

pub fn blocks(x: u64) -> QuotientBlocks {
    QuotientBlocks { x, blocks: BlockIter::new(x).collect() }
}

/// Exact or floating result of a weighted sum.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Integer(BigInt),
    Rational(BigRational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Integer(v) => v.to_f64().unwrap_or(f64::NAN),
            Number::Rational(v) => v.to_f64().unwrap_or(f64::NAN),
            Number::Float(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Number::Float(_))
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Integer(v) => write!(f, "{v}"),
            Number::Rational(v) => write!(f, "{v}"),
            Number::Float(v) => write!(f, "{v}"),
        }
    }
}

/// `Σ_{i=1}^{x} M(⌊x/i⌋)·f(i) = Σ_blocks M(v)·(F(hi) − F(lo−1))`.
///
/// Integer weights accumulate in checked `i128` and fall back to `BigInt` on overflow;
/// rational weights stay over the prefix table's common denominator.
pub fn weighted_msum<M: MertensLookup + ?Sized>(x: u64, f: &PrefixSums, m: &M) -> Result<Number> {
    if x > f.limit() {
        return Err(Error::PrefixTooShort { limit: f.limit(), x });
    }
    Ok(match f.values() {
        PrefixValues::Integer(pre) => {
            let mut acc = 0i128;
            let mut overflow = None;
            for (idx, b) in BlockIter::new(x).enumerate() {
                let width = pre[b.hi as usize] - pre[b.lo as usize - 1];
                let term = (m.mertens(b.v) as i128).checked_mul(width);
                match term.and_then(|t| acc.checked_add(t)) {
                    Some(a) => acc = a,
                    None => {
                        overflow = Some(idx);
                        break;
                    }
                }
            }
            match overflow {
                None => Number::Integer(BigInt::from(acc)),
                Some(skip) => {
                    let mut big = BigInt::from(acc);
                    for b in BlockIter::new(x).skip(skip) {
                        let width = BigInt::from(pre[b.hi as usize]) - BigInt::from(pre[b.lo as usize - 1]);
                        big += width * m.mertens(b.v);
                    }
                    Number::Integer(big)
                }
            }
        }
        PrefixValues::Big(pre) => {
            let mut acc = BigInt::zero();
            for b in BlockIter::new(x) {
                let mv = m.mertens(b.v);
                if mv != 0 {
                    acc += (&pre[b.hi as usize] - &pre[b.lo as usize - 1]) * mv;
                }
            }
            Number::Integer(acc)
        }
        PrefixValues::Rational { numerators, denominator } => {
            let mut acc = BigInt::zero();
            for b in BlockIter::new(x) {
                let mv = m.mertens(b.v);
                if mv != 0 {
                    acc += (&numerators[b.hi as usize] - &numerators[b.lo as usize - 1]) * mv;
                }
            }
            Number::Rational(BigRational::new(acc, denominator.clone()))
        }
        PrefixValues::Float(pre) => {
            let mut acc = NeumaierSum::new();
            for b in BlockIter::new(x) {
                let mv = m.mertens(b.v);
                if mv != 0 {
                    acc.add(mv as f64 * (pre[b.hi as usize] - pre[b.lo as usize - 1]));
                }
            }
            Number::Float(acc.value())
        }
    })
}

/// `Σ_{i=1}^{x} M(⌊x/i⌋)²` as `Σ_blocks width·M(v)²`.
pub fn square_msum<M: MertensLookup + ?Sized>(x: u64, m: &M) -> u128 {
    BlockIter::new(x)
        .map(|b| {
            let mv = m.mertens(b.v) as i128;
            b.width() as u128 * (mv * mv) as u128
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mertens::{mertens_quotients, mertens_sieved};
    use crate::numeric::isqrt;
    use crate::sieves::{prefix, ArithFunction, SieveTable};
    use proptest::prelude::*;

    fn enumerate_blocks(x: u64) -> Vec<QuotientBlock> {
        let mut out: Vec<QuotientBlock> = Vec::new();
        for i in 1..=x {
            let v = x / i;
            match out.last_mut() {
                Some(b) if b.v == v => b.hi = i,
                _ => out.push(QuotientBlock { v, lo: i, hi: i }),
            }
        }
        out
    }

    #[test]
    fn twelve() {
        let b = blocks(12);
        let triples: Vec<_> = b.blocks.iter().map(|b| (b.v, b.lo, b.hi)).collect();
        assert_eq!(triples, vec![(12, 1, 1), (6, 2, 2), (4, 3, 3), (3, 4, 4), (2, 5, 6), (1, 7, 12)]);
        assert_eq!(b.blocks.iter().map(|b| b.width()).sum::<u64>(), 12);
        assert_eq!(blocks(1).blocks, vec![QuotientBlock { v: 1, lo: 1, hi: 1 }]);
    }

    proptest! {
        #[test]
        fn blocks_partition(x in 1u64..5000) {
            let b = blocks(x);
            prop_assert_eq!(&b.blocks, &enumerate_blocks(x));
            prop_assert!(b.blocks.len() as u64 <= 2 * isqrt(x));
            prop_assert!(b.blocks.windows(2).all(|w| w[0].v > w[1].v && w[0].hi + 1 == w[1].lo));
        }

        #[test]
        fn blocks_bound_large(x in 1u64..u64::MAX / 2) {
            let count = BlockIter::new(x).take(10_000_000).count() as u64;
            prop_assert!(count <= 2 * isqrt(x));
        }
    }

    #[test]
    fn weighted_examples() {
        let s = SieveTable::build(12, &[]).unwrap();
        let mq = mertens_quotients(12).unwrap();
        let id = prefix(&s, ArithFunction::Power(1), 12).unwrap();
        assert_eq!(weighted_msum(12, &id, &mq).unwrap(), Number::Integer(46.into()));
        let one = prefix(&s, ArithFunction::Power(0), 12).unwrap();
        assert_eq!(weighted_msum(12, &one, &mq).unwrap(), Number::Integer(1.into()));
        let mq4 = mertens_quotients(4).unwrap();
        let r = prefix(&s, ArithFunction::IdOverPhi, 4).unwrap();
        assert_eq!(weighted_msum(4, &r, &mq4).unwrap(), Number::Rational(BigRational::new(5.into(), 2.into())));
        assert!(matches!(weighted_msum(13, &id, &mq), Err(Error::PrefixTooShort { .. })));
    }

    #[test]
    fn block_sums_equal_naive_sums() {
        let n = 2000;
        let s = SieveTable::build(n, &[1, 2, 3]).unwrap();
        let m = mertens_sieved(n).unwrap();
        let fns = [
            ArithFunction::Power(1),
            ArithFunction::Power(3),
            ArithFunction::SigmaK(3),
            ArithFunction::Jordan(2),
            ArithFunction::SquareIndicator,
            ArithFunction::TwoPowOmega,
            ArithFunction::DivisorsOfSquare,
            ArithFunction::Sigma0Squared,
            ArithFunction::IdOverPhi,
            ArithFunction::Mangoldt,
            ArithFunction::LogSigma0Half,
        ];
        for f in fns {
            let pre = prefix(&s, f, n).unwrap();
            for x in (1..=n).step_by(13) {
                let got = weighted_msum(x, &pre, &m).unwrap();
                match got {
                    Number::Integer(v) => {
                        let naive: i128 = (1..=x).map(|i| m.get(x / i) as i128 * s.int_value(f, i).unwrap()).sum();
                        assert_eq!(v, BigInt::from(naive), "{f} x={x}");
                    }
                    Number::Rational(v) => {
                        let naive = (1..=x)
                            .map(|i| {
                                let (a, b) = s.rational_value(f, i).unwrap();
                                BigRational::new((m.get(x / i) * a as i64).into(), (b as i64).into())
                            })
                            .fold(BigRational::zero(), |a, b| a + b);
                        assert_eq!(v, naive, "{f} x={x}");
                    }
                    Number::Float(v) => {
                        let naive: f64 = (1..=x).map(|i| m.get(x / i) as f64 * s.float_value(f, i)).sum();
                        assert!((v - naive).abs() <= 1e-9 * naive.abs().max(1.0), "{f} x={x}");
                    }
                }
            }
        }
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        struct Huge;
        impl MertensLookup for Huge {
            fn mertens(&self, _: u64) -> i64 {
                i64::MAX
            }
        }
        let s = SieveTable::build(100, &[]).unwrap();
        let pre = prefix(&s, ArithFunction::Power(3), 100).unwrap();
        let got = weighted_msum(100, &pre, &Huge).unwrap();
        let naive: BigInt = (1..=100u64).map(|i| BigInt::from(i64::MAX) * BigInt::from(i.pow(3))).sum();
        assert_eq!(got, Number::Integer(naive));
    }

    #[test]
    fn squares_sum() {
        let m = mertens_sieved(12).unwrap();
        assert_eq!(square_msum(8, &m), 9);
        assert_eq!(square_msum(12, &m), 13);
        assert_eq!(square_msum(1, &m), 1);
    }
}
