//! Type classes of `n` draws from a finite distribution.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::numeric::{log2_big, sum_descending};
use crate::{Error, Result};

/// Largest `n` accepted by the enumerators.
pub const MAX_COPIES: u64 = 10_000;

/// Upper limit on the number of classes held in memory at once.
pub const MAX_TYPE_CLASSES: u64 = 1_000_000;

/// All strings with symbol counts `counts`, symbols with equal probability
/// counted together.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeClass {
    /// Counts per distinct probability value, in the order of
    /// [`SpectrumTypeClass::values`].
    pub counts: Vec<u32>,
    /// Exact count `n! / Π kᵢ! · Π gᵢ^{kᵢ}`, `gᵢ` the degeneracy of value `i`.
    pub multiplicity: BigUint,
    /// `log₂ Π λᵢ^{kᵢ}`, the probability of any single string in the class.
    pub log2_prob: f64,
}

impl TypeClass {
    /// `log₂` of the class's total probability.
    pub fn log2_mass(&self) -> f64 {
        if self.log2_prob == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        log2_big(&self.multiplicity) + self.log2_prob
    }

    pub fn mass(&self) -> f64 {
        self.log2_mass().exp2()
    }
}

/// The spectrum of `ρ^{⊗n}` grouped by type class.
///
/// Equal entries of the single-copy spectrum are merged first, so each class
/// is a full eigenspace of `ρ^{⊗n}` up to coincidences between different
/// products.
#[derive(Debug, Clone)]
pub struct SpectrumTypeClass {
    n: u32,
    values: Vec<f64>,
    degeneracy: Vec<u32>,
    classes: Vec<TypeClass>,
}

/// Checks nonnegativity and unit sum (±1e-9), then renormalizes exactly.
pub(crate) fn validate_spectrum(spectrum: &[f64]) -> Result<Vec<f64>> {
    if spectrum.is_empty() {
        return Err(Error::InvalidArgument("empty probability vector".into()));
    }
    if let Some(&bad) = spectrum.iter().find(|&&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidArgument(alloc::format!("probability {bad} is not a finite nonnegative number")));
    }
    let total: f64 = spectrum.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnitTrace((total - 1.0).abs()));
    }
    Ok(spectrum.iter().map(|p| p / total).collect())
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl SpectrumTypeClass {
    pub fn new(spectrum: &[f64], n: u64) -> Result<Self> {
        let mut spectrum = validate_spectrum(spectrum)?;
        if n == 0 || n > MAX_COPIES {
            return Err(Error::TooLarge(alloc::format!("n = {n} outside 1..={MAX_COPIES}")));
        }
        spectrum.sort_by(|a, b| b.total_cmp(a));
        let mut values: Vec<f64> = Vec::new();
        let mut degeneracy: Vec<u32> = Vec::new();
        for p in spectrum {
            if values.last() == Some(&p) {
                *degeneracy.last_mut().expect("nonempty") += 1;
            } else {
                values.push(p);
                degeneracy.push(1);
            }
        }
        let d = values.len() as u64;
        let count = binomial(n + d - 1, d - 1);
        if count.to_u64().is_none_or(|c| c > MAX_TYPE_CLASSES) {
            return Err(Error::TooLarge(alloc::format!("{count} type classes for n = {n}, d = {d}")));
        }
        let symbols: Vec<(f64, u32)> = values.iter().map(|p| p.log2()).zip(degeneracy.iter().copied()).collect();
        let mut classes = Vec::with_capacity(count.to_usize().unwrap_or(0));
        let mut counts = vec![0u32; values.len()];
        enumerate(&symbols, n as u32, 0, &BigUint::one(), 0.0, &mut counts, &mut classes);
        Ok(Self { n: n as u32, values, degeneracy, classes })
    }

    pub fn n(&self) -> u64 {
        self.n as u64
    }

    /// Distinct single-copy probabilities, descending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn degeneracy(&self) -> &[u32] {
        &self.degeneracy
    }

    /// Classes in lexicographic order of their counts.
    pub fn classes(&self) -> &[TypeClass] {
        &self.classes
    }

    /// Class indices by decreasing string probability, ties in
    /// enumeration order.
    pub fn by_probability(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.classes.len()).collect();
        idx.sort_by(|&i, &j| self.classes[j].log2_prob.total_cmp(&self.classes[i].log2_prob));
        idx
    }

    /// `Σ multiplicity`, which is `dⁿ` with `d` the full spectrum length.
    pub fn total_multiplicity(&self) -> BigUint {
        self.classes.iter().map(|c| &c.multiplicity).sum()
    }

    /// `Σ multiplicity · probability`, which is 1 up to rounding.
    pub fn total_mass(&self) -> f64 {
        sum_descending(&mut self.classes.iter().map(TypeClass::mass).collect::<Vec<_>>())
    }
}

fn enumerate(
    symbols: &[(f64, u32)],
    remaining: u32,
    level: usize,
    mult: &BigUint,
    log2_prob: f64,
    counts: &mut Vec<u32>,
    out: &mut Vec<TypeClass>,
) {
    let (log_p, g) = symbols[level];
    let term = |k: u32| if k == 0 { 0.0 } else { k as f64 * log_p };
    if level + 1 == symbols.len() {
        counts[level] = remaining;
        let multiplicity = mult * BigUint::from(g).pow(remaining);
        out.push(TypeClass { counts: counts.clone(), multiplicity, log2_prob: log2_prob + term(remaining) });
        return;
    }
    let mut factor = BigUint::one();
    for k in 0..=remaining {
        if k > 0 {
            factor = factor * (remaining - k + 1) * g / k;
        }
        counts[level] = k;
        enumerate(symbols, remaining - k, level + 1, &(mult * &factor), log2_prob + term(k), counts, out);
    }
}
