//! High-precision constants and special functions used by the bound kernel.
//!
//! Everything here is evaluated in binary fixed point (see [`Real`]) with
//! guard bits above the requested decimal precision. Logarithms are natural
//! logarithms throughout.

pub mod real;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

pub use real::{bits_for_digits, Real};

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 50;

/// Lowest precision accepted by [`compute_constants`].
pub const MIN_DIGITS: u32 = 10;

const CONTEXT_GUARD_BITS: u32 = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("working precision of {0} digits is below the minimum of {MIN_DIGITS}")]
    PrecisionTooLow(u32),
    #[error("root isolation for {0} failed to bracket a sign change")]
    RootNotCertified(&'static str),
}

/// How a constant was obtained, for report provenance blocks.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ConstantNote {
    pub name: &'static str,
    pub value: String,
    pub method: &'static str,
}

/// Immutable bundle of constants evaluated at a fixed working precision.
#[derive(Debug, Clone)]
pub struct PrecisionContext {
    digits: u32,
    bits: u32,
    pi: Real,
    ln2: Real,
    gamma: Real,
    gamma_root: Real,
    v_tet: Real,
    xi: Real,
    phi: Real,
    sqrt5: Real,
}

impl PrecisionContext {
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Fractional bits used for every value in this context.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn pi(&self) -> &Real {
        &self.pi
    }

    pub fn ln2(&self) -> &Real {
        &self.ln2
    }

    /// γ, the reciprocal of the positive root of `x³(x+1)² = 1`.
    pub fn gamma(&self) -> &Real {
        &self.gamma
    }

    /// The positive root `1/γ` of `x³(x+1)² = 1`.
    pub fn gamma_root(&self) -> &Real {
        &self.gamma_root
    }

    /// Volume of the regular ideal tetrahedron, `3Λ(π/3)`.
    pub fn v_tet(&self) -> &Real {
        &self.v_tet
    }

    /// ξ = exp(5 v_tet / π).
    pub fn xi(&self) -> &Real {
        &self.xi
    }

    /// Golden ratio.
    pub fn phi(&self) -> &Real {
        &self.phi
    }

    pub fn sqrt5(&self) -> &Real {
        &self.sqrt5
    }

    pub fn int<I: Into<BigInt>>(&self, v: I) -> Real {
        Real::from_int(v, self.bits)
    }

    pub fn ratio(&self, num: i64, den: i64) -> Real {
        Real::from_ratio(&BigInt::from(num), &BigInt::from(den), self.bits)
    }

    pub fn parse(&self, text: &str) -> Option<Real> {
        Real::parse_decimal(text, self.bits)
    }

    /// Decimal rendering at the working precision.
    pub fn render(&self, x: &Real) -> String {
        x.to_fixed(self.digits as usize)
    }

    /// A context with `extra` more digits, used for soundness replays.
    pub fn refined(&self, extra: u32) -> PrecisionContext {
        cached_constants(self.digits + extra).expect("refining a valid context")
    }

    pub fn provenance(&self) -> Vec<ConstantNote> {
        let d = self.digits as usize;
        vec![
            ConstantNote {
                name: "pi",
                value: self.pi.to_fixed(d),
                method: "Machin arctangent formula",
            },
            ConstantNote {
                name: "gamma",
                value: self.gamma.to_fixed(d),
                method: "reciprocal of the root of x^3 (x+1)^2 = 1 in (1/2, 1), bracketed Newton with sign-change certification",
            },
            ConstantNote {
                name: "v_tet",
                value: self.v_tet.to_fixed(d),
                method: "3 * Lobachevsky(pi/3), logarithm-plus-power-series with analytic tail bound",
            },
            ConstantNote {
                name: "xi",
                value: self.xi.to_fixed(d),
                method: "exp(5 v_tet / pi)",
            },
            ConstantNote {
                name: "phi",
                value: self.phi.to_fixed(d),
                method: "(1 + sqrt 5) / 2",
            },
        ]
    }
}

/// `x³(x+1)² − 1` and its derivative `x²(x+1)(5x+3)`.
fn gamma_poly(x: &Real) -> (Real, Real) {
    let one = Real::one(x.bits());
    let x1 = x + &one;
    let x2 = x * x;
    let f = &(&(&x2 * x) * &(&x1 * &x1)) - &one;
    let df = &(&x2 * &x1) * &(&x.mul_int(5) + &Real::from_int(3, x.bits()));
    (f, df)
}

fn solve_gamma_root(digits: u32, bits: u32) -> Result<Real, NumericsError> {
    let mut lo = Real::from_ratio(&BigInt::one(), &BigInt::from(2), bits);
    let mut hi = Real::one(bits);
    let mut x = Real::parse_decimal("0.7016", bits).expect("literal");
    let tol = Real::one(bits).shl(-(i64::from(bits) - 8));
    for _ in 0..400 {
        let (f, df) = gamma_poly(&x);
        if f.is_zero() {
            break;
        }
        if f.is_negative() {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        let step = &f / &df;
        if step.is_zero() {
            break;
        }
        let mut next = &x - &step;
        if next < lo || next > hi {
            next = (&lo + &hi).div_int(2);
        }
        let moved = (&next - &x).abs();
        x = next;
        if moved < tol {
            break;
        }
    }
    // Certify a sign change within 10^-(digits+2) of the returned root.
    let eps = Real::from_ratio(
        &BigInt::one(),
        &num_traits::pow(BigInt::from(10u32), digits as usize + 2),
        bits,
    );
    let (below, _) = gamma_poly(&(&x - &eps));
    let (above, _) = gamma_poly(&(&x + &eps));
    if below.is_negative() && above.is_positive() {
        Ok(x)
    } else {
        Err(NumericsError::RootNotCertified("gamma"))
    }
}

/// Memoized [`compute_constants`].
pub fn cached_constants(digits: u32) -> Result<PrecisionContext, NumericsError> {
    static CACHE: OnceLock<Mutex<HashMap<u32, PrecisionContext>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(ctx) = cache.lock().expect("constants cache").get(&digits) {
        return Ok(ctx.clone());
    }
    let ctx = compute_constants(digits)?;
    cache
        .lock()
        .expect("constants cache")
        .insert(digits, ctx.clone());
    Ok(ctx)
}

/// Evaluates every constant the inequalities need at `digits` decimal digits.
pub fn compute_constants(digits: u32) -> Result<PrecisionContext, NumericsError> {
    if digits < MIN_DIGITS {
        return Err(NumericsError::PrecisionTooLow(digits));
    }
    let bits = bits_for_digits(digits) + CONTEXT_GUARD_BITS;
    let pi = real::pi(bits);
    let ln2 = real::ln2(bits);
    let gamma_root = solve_gamma_root(digits, bits)?;
    let gamma = gamma_root.recip();
    let third = (&pi).div_int(3);
    let v_tet = lobachevsky_at(&third, bits).mul_int(3);
    let xi = (&v_tet.mul_int(5) / &pi).exp();
    let sqrt5 = Real::from_int(5, bits).sqrt();
    let phi = (&sqrt5 + &Real::one(bits)).div_int(2);
    Ok(PrecisionContext {
        digits,
        bits,
        pi,
        ln2,
        gamma,
        gamma_root,
        v_tet,
        xi,
        phi,
        sqrt5,
    })
}

/// Tangent numbers `T_1..T_n` (1, 2, 16, 272, ...), integer-only recurrence.
pub(crate) fn tangent_numbers(n: usize) -> Vec<BigInt> {
    if n == 0 {
        return Vec::new();
    }
    let mut t = vec![BigInt::zero(); n + 1];
    t[1] = BigInt::one();
    for k in 2..=n {
        t[k] = &t[k - 1] * (k - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            t[j] = &t[j - 1] * (j - k) + &t[j] * (j - k + 2);
        }
    }
    t.split_off(1)
}

/// Series evaluation of Λ on `(0, π/2]`, with the truncation bound (log2).
///
/// Λ(θ) = θ − θ ln(2θ) + Σ_{n≥1} T_n θ^{2n+1} / ((4ⁿ − 1)(2n+1)!).
/// The n-th coefficient is `2ζ(2n) / (π^{2n} 2n(2n+1))`, so with
/// `q = (θ/π)²` the tail after `N` terms is below `4θ q^{N+1} / ((2N+2)(2N+3)(1−q))`.
fn lobachevsky_reduced(theta: &Real, bits: u32) -> (Real, f64) {
    let w = bits + 32;
    let y = theta.with_bits(w);
    let yf = y.to_f64();
    let q = ((yf / std::f64::consts::PI) * (1.0 + 1e-12)).powi(2).min(0.2500001);
    let target = -(f64::from(w));
    let tail_log2 = |n: usize| {
        let nf = n as f64;
        (4.0 * yf / (1.0 - q)).log2() + (nf + 1.0) * q.log2() - ((2.0 * nf + 2.0) * (2.0 * nf + 3.0)).log2()
    };
    let mut terms = 1usize;
    while tail_log2(terms) > target {
        terms += 1;
    }
    let tangents = tangent_numbers(terms);

    let mut value = &y - &(&y * &y.shl(1).ln());
    let y2 = &y * &y;
    let mut power = y.clone();
    let mut factorial = BigInt::one();
    let mut four_pow = BigInt::one();
    for (i, t_n) in tangents.iter().enumerate() {
        let n = i as u64 + 1;
        power = &power * &y2;
        factorial *= (2 * n) * (2 * n + 1);
        four_pow *= 4u32;
        let denom = (&four_pow - BigInt::one()) * &factorial;
        let term = power.mul_int(t_n.clone()).div_int(denom);
        value = &value + &term;
    }
    (value.with_bits(bits), tail_log2(terms))
}

fn lobachevsky_at(theta: &Real, bits: u32) -> Real {
    lobachevsky_with_bound(theta, bits).0
}

/// Λ(θ) together with log2 of the analytic truncation bound.
pub fn lobachevsky_with_bound(theta: &Real, bits: u32) -> (Real, f64) {
    let bits = bits.max(theta.bits());
    let w = bits + 32;
    let pi = real::pi(w);
    let x = theta.with_bits(w);
    // Λ is odd and π-periodic: reduce to [-π/2, π/2].
    let n = (&x / &pi).round();
    let y = &x - &pi.mul_int(n);
    // Residues below the input's own resolution are multiples of π.
    if y.abs() < Real::one(w).shl(-i64::from(bits)) {
        return (Real::zero(bits), f64::NEG_INFINITY);
    }
    let (v, bound) = lobachevsky_reduced(&y.abs(), w);
    let v = if y.is_negative() { -v } else { v };
    (v.with_bits(bits), bound)
}

/// Lobachevsky function Λ(θ) = −∫₀^θ ln|2 sin t| dt.
pub fn lobachevsky(theta: &Real, ctx: &PrecisionContext) -> Real {
    lobachevsky_at(theta, ctx.bits.max(theta.bits()))
}

/// Exact Fibonacci number with `F_1 = F_2 = 1` (and `F_0 = 0`).
pub fn fibonacci(n: u32) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Binet's closed form `(φⁿ − (−φ)⁻ⁿ)/√5`.
pub fn binet_estimate(n: u32, ctx: &PrecisionContext) -> Real {
    let phi_n = ctx.phi.powi(i64::from(n));
    let mut conj = phi_n.recip();
    if n % 2 == 1 {
        conj = -conj;
    }
    &(&phi_n - &conj) / &ctx.sqrt5
}
