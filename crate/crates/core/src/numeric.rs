//! Scalar helpers: compensated summation, seed derivation, big-integer logs.

use num_bigint::BigUint;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;
use num_traits::{ToPrimitive, Zero};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Sum in descending order of magnitude with compensation.
pub fn sum_descending(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let mut acc = CompensatedSum::new();
    for &v in values.iter() {
        acc.add(v);
    }
    acc.value()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-task seed `hash(seed, index)`; independent of scheduling order.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// `log2(x)` for a big unsigned integer; `-inf` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().map(|v| (v as f64).log2()).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).log2() + shift as f64
}

/// `floor(2^e)` as an exact integer, `e >= 0`.
///
/// Exponents within `1e-9` of an integer are snapped to it so that products
/// like `n * R` landing a rounding error below an integer do not lose a unit.
/// Beyond 53 significant bits the low bits come from the f64 mantissa.
pub fn floor_pow2(e: f64) -> BigUint {
    let e = if (e - e.round()).abs() < 1e-9 { e.round() } else { e };
    let int = e.floor();
    let frac = e - int;
    let int = int as u64;
    if frac == 0.0 {
        return BigUint::from(1u8) << int;
    }
    if int < 53 {
        return BigUint::from((2f64.powf(e)).floor() as u64);
    }
    // 2^frac in [1, 2) with 52 fractional bits
    let mantissa = (2f64.powf(frac) * (1u64 << 52) as f64).floor() as u64;
    BigUint::from(mantissa) << (int - 52)
}

/// `2^(log2 a - log2 b)` style ratio of a big integer to another, as f64.
pub fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    (log2_big(num) - log2_big(den)).exp2()
}
