//! Small numeric helpers: compensated summation, integer roots, CSV float formatting,
//! and certified comparisons of natural logarithms against integers.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Neumaier (improved Kahan) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |s| s <= n) {
        r += 1;
    }
    r
}

/// `⌊n^{1/3}⌋`.
pub fn icbrt(n: u64) -> u64 {
    let mut r = (n as f64).cbrt() as u64;
    while r > 0 && (r as u128).pow(3) > n as u128 {
        r -= 1;
    }
    while ((r + 1) as u128).pow(3) <= n as u128 {
        r += 1;
    }
    r
}

/// `⌈x^{2/3}⌉`.
pub fn ceil_two_thirds(x: u64) -> u64 {
    let mut b = (x as f64).powf(2.0 / 3.0).ceil() as u64;
    // fix rounding: want smallest b with b³ ≥ x²
    let x2 = (x as u128) * (x as u128);
    while b > 1 && ((b - 1) as u128).pow(3) >= x2 {
        b -= 1;
    }
    while (b as u128).pow(3) < x2 {
        b += 1;
    }
    b.max(1)
}

/// Formats like C's `%.9g`: 9 significant digits, trailing zeros dropped.
pub fn fmt_sig9(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.8e}", v);
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, v))
    } else {
        let m = trim_zeros(mant.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", m, sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Rational enclosure `[lo/2^bits, hi/2^bits]` of Euler's number, from the series Σ 1/k!.
fn e_fixed_point(bits: u64) -> (BigUint, BigUint) {
    let scale = BigUint::one() << bits;
    let mut term = scale.clone();
    let mut acc = BigUint::zero();
    let mut k = 1u32;
    let mut truncations = 0u64;
    while !term.is_zero() {
        acc += &term;
        term /= k;
        truncations += 1;
        k += 1;
    }
    // each floor division loses < 1 unit; the dropped tail is < 1 unit as well
    let lo = acc.clone();
    let hi = acc + BigUint::from(truncations + 2);
    (lo, hi)
}

/// Certified comparison of `ln(n)` with the integer `q`, i.e. of `n` with `e^q`.
///
/// Returns `None` only if precision escalation up to `max_bits` cannot separate them.
pub fn compare_ln_with_int(n: &BigUint, q: u64, max_bits: u64) -> Option<Ordering> {
    if q == 0 {
        return Some(n.cmp(&BigUint::one()));
    }
    if n.is_zero() {
        return Some(Ordering::Less);
    }
    let mut bits = 64u64;
    while bits <= max_bits {
        let (lo, hi) = e_fixed_point(bits);
        let shift = bits * q;
        let lhs = n << shift;
        let q32 = u32::try_from(q).ok()?;
        if lhs > hi.pow(q32) {
            return Some(Ordering::Greater);
        }
        if lhs < lo.pow(q32) {
            return Some(Ordering::Less);
        }
        bits *= 2;
    }
    None
}

/// Rational bounds on π² and π⁴, scaled by 10^30.
pub const PI2_LO_E30: u128 = 9_869_604_401_089_358_618_834_490_999_876;
pub const PI2_HI_E30: u128 = 9_869_604_401_089_358_618_834_490_999_877;
pub const PI4_LO_E30: u128 = 97_409_091_034_002_437_236_440_332_688_705;
pub const PI4_HI_E30: u128 = 97_409_091_034_002_437_236_440_332_688_706;
pub const E30: u128 = 1_000_000_000_000_000_000_000_000_000_000;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_beats_naive() {
        let mut s = NeumaierSum::new();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn integer_roots() {
        for n in 0..5000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
            let c = icbrt(n);
            assert!(c * c * c <= n && (c + 1).pow(3) > n);
        }
        assert_eq!(isqrt(u64::MAX), 4294967295);
        assert_eq!(ceil_two_thirds(8), 4);
        assert_eq!(ceil_two_thirds(1000), 100);
        assert_eq!(ceil_two_thirds(1001), 101);
    }

    #[test]
    fn sig9_format() {
        assert_eq!(fmt_sig9(6.733598666), "6.73359867");
        assert_eq!(fmt_sig9(0.5), "0.5");
        assert_eq!(fmt_sig9(46.0), "46");
        assert_eq!(fmt_sig9(1234567891234.0), "1.23456789e+12");
        assert_eq!(fmt_sig9(-1.0), "-1");
        assert_eq!(fmt_sig9(0.0000123456789), "1.23456789e-05");
        assert_eq!(fmt_sig9(0.000123456789), "0.000123456789");
    }

    #[test]
    fn ln_comparisons() {
        // 7! = 5040 < e^9 ≈ 8103.08, 8! = 40320 > e^10 ≈ 22026.5
        assert_eq!(compare_ln_with_int(&BigUint::from(5040u32), 9, 4096), Some(Ordering::Less));
        assert_eq!(compare_ln_with_int(&BigUint::from(40320u32), 10, 4096), Some(Ordering::Greater));
        // e^1 = 2.718..: 2 < e < 3
        assert_eq!(compare_ln_with_int(&BigUint::from(2u32), 1, 4096), Some(Ordering::Less));
        assert_eq!(compare_ln_with_int(&BigUint::from(3u32), 1, 4096), Some(Ordering::Greater));
        assert_eq!(compare_ln_with_int(&BigUint::from(1u32), 0, 4096), Some(Ordering::Equal));
        // e^20 = 485165195.4097903
        assert_eq!(compare_ln_with_int(&BigUint::from(485165195u32), 20, 4096), Some(Ordering::Less));
        assert_eq!(compare_ln_with_int(&BigUint::from(485165196u32), 20, 4096), Some(Ordering::Greater));
    }

    #[test]
    fn pi_bounds_bracket_f64() {
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((PI2_LO_E30 as f64 / E30 as f64 - pi2).abs() < 1e-14);
        assert!((PI4_LO_E30 as f64 / E30 as f64 - pi2 * pi2).abs() < 1e-13);
        assert!(PI2_LO_E30 < PI2_HI_E30 && PI4_LO_E30 < PI4_HI_E30);
    }
}
