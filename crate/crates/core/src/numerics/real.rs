//! Binary fixed-point reals over `BigInt`.
//!
//! A [`Real`] is `mantissa / 2^bits`. Values carry their own fractional
//! precision; binary operations align both operands to the finer of the two.
//! Elementary functions evaluate with guard bits and round back to the
//! precision of their argument.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const GUARD_BITS: u32 = 64;

/// Fixed-point real number `mant / 2^bits`.
#[derive(Clone, Debug)]
pub struct Real {
    mant: BigInt,
    bits: u32,
}

/// Nearest-integer division, ties away from zero.
pub(crate) fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    if (r.abs() << 1u32) >= d.abs() {
        if (n.sign() == Sign::Minus) != (d.sign() == Sign::Minus) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

fn shr_round(m: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return m.clone();
    }
    (m + (BigInt::one() << (k - 1))) >> k
}

fn rescale(m: &BigInt, from: u32, to: u32) -> BigInt {
    match to.cmp(&from) {
        Ordering::Equal => m.clone(),
        Ordering::Greater => m << (to - from),
        Ordering::Less => shr_round(m, from - to),
    }
}

/// Number of fractional bits that carry `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real { mant: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        Real { mant: BigInt::one() << bits, bits }
    }

    pub fn from_int<I: Into<BigInt>>(v: I, bits: u32) -> Self {
        Real { mant: v.into() << bits, bits }
    }

    /// `num / den` rounded to nearest.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Real { mant: div_round(&(num << bits), den), bits }
    }

    /// Parses a plain decimal literal such as `-15.597714` or `2.5e-3`.
    pub fn parse_decimal(text: &str, bits: u32) -> Option<Self> {
        let s = text.trim();
        let (body, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
            None => (s, 0),
        };
        let (neg, body) = match body.as_bytes().first()? {
            b'-' => (true, &body[1..]),
            b'+' => (false, &body[1..]),
            _ => (false, body),
        };
        let (int_part, frac_part) = match body.find('.') {
            Some(i) => (&body[..i], &body[i + 1..]),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let mut num: BigInt = digits.parse().ok()?;
        if neg {
            num = -num;
        }
        let scale = exp - frac_part.len() as i32;
        let ten = BigInt::from(10u32);
        let (num, den) = if scale >= 0 {
            (num * num_traits::pow(ten, scale as usize), BigInt::one())
        } else {
            (num, num_traits::pow(ten, (-scale) as usize))
        };
        Some(Real::from_ratio(&num, &den, bits))
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    /// Same value at a different fractional precision.
    pub fn with_bits(&self, bits: u32) -> Self {
        Real { mant: rescale(&self.mant, self.bits, bits), bits }
    }

    fn aligned(&self, other: &Real) -> (BigInt, BigInt, u32) {
        let bits = self.bits.max(other.bits);
        (
            rescale(&self.mant, self.bits, bits),
            rescale(&other.mant, other.bits, bits),
            bits,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Self {
        Real { mant: self.mant.abs(), bits: self.bits }
    }

    pub fn mul_int<I: Into<BigInt>>(&self, k: I) -> Self {
        Real { mant: &self.mant * k.into(), bits: self.bits }
    }

    pub fn div_int<I: Into<BigInt>>(&self, k: I) -> Self {
        Real { mant: div_round(&self.mant, &k.into()), bits: self.bits }
    }

    /// Multiplication by `2^k` (exact for `k >= 0`).
    pub fn shl(&self, k: i64) -> Self {
        let mant = if k >= 0 {
            &self.mant << (k as u64)
        } else {
            shr_round(&self.mant, (-k) as u32)
        };
        Real { mant, bits: self.bits }
    }

    pub fn floor(&self) -> BigInt {
        self.mant.div_floor(&(BigInt::one() << self.bits))
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.mant).div_floor(&(BigInt::one() << self.bits)))
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        div_round(&self.mant, &(BigInt::one() << self.bits))
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 64 significant bits before converting.
        let excess = self.mant.bits().saturating_sub(64);
        let shifted = (&self.mant >> excess).to_f64().unwrap_or(f64::NAN);
        shifted * 2f64.powi(excess as i32 - self.bits as i32)
    }

    /// Decimal rendering rounded to `places` fractional digits.
    pub fn to_fixed(&self, places: usize) -> String {
        let scaled = div_round(
            &(&self.mant * num_traits::pow(BigInt::from(10u32), places)),
            &(BigInt::one() << self.bits),
        );
        format_scaled(&scaled, places)
    }

    /// Decimal rendering truncated toward zero at `places` fractional digits.
    pub fn to_fixed_truncated(&self, places: usize) -> String {
        // BigInt division truncates toward zero
        let scaled = (&self.mant * num_traits::pow(BigInt::from(10u32), places)) / (BigInt::one() << self.bits);
        let text = format_scaled(&scaled, places);
        if self.is_negative() && scaled.is_zero() {
            format!("-{text}")
        } else {
            text
        }
    }

    /// Number of decimal places this precision supports.
    pub fn decimal_places(&self) -> usize {
        (f64::from(self.bits) / std::f64::consts::LOG2_10).floor() as usize
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative number");
        Real { mant: (&self.mant << self.bits).sqrt(), bits: self.bits }
    }

    pub fn recip(&self) -> Self {
        Real::one(self.bits) / self
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: i64) -> Self {
        let w = self.bits + GUARD_BITS;
        let mut base = self.with_bits(w);
        let mut acc = Real::one(w);
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if n < 0 {
            acc = acc.recip();
        }
        acc.with_bits(self.bits)
    }

    /// `self^y = exp(y ln self)` for positive `self`.
    pub fn powf(&self, y: &Real) -> Self {
        let bits = self.bits.max(y.bits);
        let w = bits + GUARD_BITS;
        let l = self.with_bits(w).ln();
        (&l * &y.with_bits(w)).exp().with_bits(bits)
    }

    /// Natural exponential.
    pub fn exp(&self) -> Self {
        let bits = self.bits;
        let w = bits + GUARD_BITS;
        let x = self.with_bits(w);
        let ln2 = ln2(w);
        let n = (&x / &ln2).round();
        let r = &x - &ln2.mul_int(n.clone());
        // Halve the argument 16 times, sum Taylor, then square back up.
        const HALVINGS: u32 = 16;
        let wr = w + HALVINGS;
        let r = r.with_bits(wr).shl(-i64::from(HALVINGS));
        let mut sum = Real::one(wr);
        let mut term = Real::one(wr);
        let mut k: u32 = 1;
        loop {
            term = (&term * &r).div_int(k);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
            k += 1;
        }
        for _ in 0..HALVINGS {
            sum = &sum * &sum;
        }
        let shift = n.to_i64().expect("exponent out of range");
        sum.shl(shift).with_bits(bits)
    }

    /// Natural logarithm of a positive number.
    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "logarithm of a non-positive number");
        let bits = self.bits;
        let w = bits + GUARD_BITS;
        let x = self.with_bits(w);
        // x = 2^k * y with y in [1, 2), then fold y into [1/sqrt2, sqrt2].
        let mut k = x.mant.bits() as i64 - i64::from(w) - 1;
        let mut y = x.shl(-k);
        let sqrt2 = Real::from_int(2, w).sqrt();
        if y > sqrt2 {
            y = y.shl(-1);
            k += 1;
        }
        let one = Real::one(w);
        let z = &(&y - &one) / &(&y + &one);
        let z2 = &z * &z;
        let mut sum = z.clone();
        let mut power = z;
        let mut j: u32 = 1;
        loop {
            power = &power * &z2;
            let term = power.div_int(2 * j + 1);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
            j += 1;
        }
        (&sum.shl(1) + &ln2(w).mul_int(k)).with_bits(bits)
    }
}

fn cached(cache: &'static OnceLock<Mutex<HashMap<u32, BigInt>>>, bits: u32, f: fn(u32) -> BigInt) -> Real {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = map.lock().expect("constant cache poisoned").get(&bits) {
        return Real { mant: m.clone(), bits };
    }
    let m = f(bits);
    map.lock().expect("constant cache poisoned").insert(bits, m.clone());
    Real { mant: m, bits }
}

/// `sum_k (-1)^k / ((2k+1) n^(2k+1))` scaled by `2^w`, truncated.
fn atan_inv(n: u32, w: u32) -> BigInt {
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let mut power = (BigInt::one() << w) / &n;
    let mut sum = BigInt::zero();
    let mut k: u32 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    sum
}

fn pi_mant(bits: u32) -> BigInt {
    let w = bits + 32;
    let v = atan_inv(5, w) * 16 - atan_inv(239, w) * 4;
    shr_round(&v, 32)
}

fn ln2_mant(bits: u32) -> BigInt {
    // ln 2 = 2 atanh(1/3)
    let w = bits + 32;
    let mut power: BigInt = (BigInt::one() << w) / 3u32;
    let mut sum = BigInt::zero();
    let mut k: u32 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * k + 1);
        power /= 9u32;
        k += 1;
    }
    shr_round(&(sum << 1u32), 32)
}

/// π at `bits` fractional bits (Machin's formula, cached).
pub fn pi(bits: u32) -> Real {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
    cached(&CACHE, bits, pi_mant)
}

/// ln 2 at `bits` fractional bits (cached).
pub fn ln2(bits: u32) -> Real {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
    cached(&CACHE, bits, ln2_mant)
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = f.precision().unwrap_or_else(|| self.decimal_places());
        f.write_str(&self.to_fixed(places))
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -&self.mant, bits: self.bits }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -self.mant, bits: self.bits }
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        let (a, b, bits) = self.aligned(rhs);
        Real { mant: a + b, bits }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        let (a, b, bits) = self.aligned(rhs);
        Real { mant: a - b, bits }
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        let (a, b, bits) = self.aligned(rhs);
        Real { mant: shr_round(&(a * b), bits), bits }
    }
}

impl Div for &Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        let (a, b, bits) = self.aligned(rhs);
        assert!(!b.is_zero(), "division by zero");
        Real { mant: div_round(&(a << bits), &b), bits }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real { (&self).$m(&rhs) }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real { (&self).$m(rhs) }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

fn format_scaled(scaled: &BigInt, places: usize) -> String {
    let digits = scaled.abs().to_string();
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if scaled.is_negative() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}
