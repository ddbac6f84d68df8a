use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result};

/// Ordered named registers and their dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemDims {
    factors: Vec<(String, usize)>,
}

impl SubsystemDims {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let factors: Vec<(String, usize)> = factors.into_iter().map(|(l, d)| (l.into(), d)).collect();
        if factors.is_empty() {
            return Err(Error::InvalidDims("no registers".into()));
        }
        for (i, (label, dim)) in factors.iter().enumerate() {
            if *dim == 0 {
                return Err(Error::InvalidDims(format!("register `{label}` has dimension 0")));
            }
            if label.is_empty() {
                return Err(Error::InvalidDims("empty register label".into()));
            }
            if factors[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::InvalidDims(format!("duplicate register label `{label}`")));
            }
        }
        Ok(Self { factors })
    }

    /// A single register.
    pub fn single(label: &str, dim: usize) -> Result<Self> {
        Self::new([(label, dim)])
    }

    /// Two registers `A`, `B`.
    pub fn ab(dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::new([("A", dim_a), ("B", dim_b)])
    }

    pub fn factors(&self) -> &[(String, usize)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|(_, d)| d).product()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|(l, _)| l.as_str())
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|(_, d)| *d).collect()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|(l, _)| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.factors.iter().any(|(l, _)| l == label)
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.factors[self.index_of(label)?].1)
    }

    /// Registers of `self` followed by those of `other`. Labels of `other`
    /// that collide get primes appended until unique (`A` becomes `A'`).
    pub fn concat(&self, other: &SubsystemDims) -> SubsystemDims {
        let mut factors = self.factors.clone();
        for (label, dim) in &other.factors {
            let mut l = label.clone();
            while factors.iter().any(|(x, _)| *x == l) {
                l.push('\'');
            }
            factors.push((l, *dim));
        }
        SubsystemDims { factors }
    }

    /// Subset of registers in their original order.
    pub fn select(&self, labels: &[&str]) -> Result<SubsystemDims> {
        for l in labels {
            self.index_of(l)?;
        }
        let factors = self
            .factors
            .iter()
            .filter(|(l, _)| labels.contains(&l.as_str()))
            .cloned()
            .collect::<Vec<_>>();
        SubsystemDims::new(factors)
    }

    /// Rename registers; labels not in `map` are kept.
    pub fn relabel(&self, map: &[(&str, &str)]) -> Result<SubsystemDims> {
        SubsystemDims::new(self.factors.iter().map(|(l, d)| {
            let new = map.iter().find(|(from, _)| from == l).map(|(_, to)| to.to_string());
            (new.unwrap_or_else(|| l.clone()), *d)
        }))
    }

    /// Replace the dimension of one register.
    pub fn with_dim(&self, label: &str, dim: usize) -> Result<SubsystemDims> {
        let idx = self.index_of(label)?;
        let mut factors = self.factors.clone();
        factors[idx].1 = dim;
        SubsystemDims::new(factors)
    }

    /// A fresh label based on `base` that does not collide with existing ones.
    pub fn fresh_label(&self, base: &str) -> String {
        let mut l = base.to_owned();
        while self.contains(&l) {
            l.push('\'');
        }
        l
    }

    /// Register indices of `labels` (in the given order).
    pub(crate) fn indices(&self, labels: &[String]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.index_of(l)).collect()
    }
}

impl core::fmt::Display for SubsystemDims {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for (i, (l, d)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("⊗")?;
            }
            write!(f, "{l}({d})")?;
        }
        Ok(())
    }
}

/// Partition of a state's registers into two nonempty groups, by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteSplit {
    left: Vec<String>,
    right: Vec<String>,
}

impl BipartiteSplit {
    /// `left` as given; `right` is every other register of `dims`, in order.
    pub fn new(dims: &SubsystemDims, left: &[&str]) -> Result<Self> {
        let right: Vec<&str> = dims.labels().filter(|l| !left.contains(l)).collect();
        Self::explicit(dims, left, &right)
    }

    /// Both groups given; together they must cover every register exactly once.
    pub fn explicit(dims: &SubsystemDims, left: &[&str], right: &[&str]) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidSplit("both sides must be nonempty".into()));
        }
        let mut seen: Vec<&str> = Vec::new();
        for l in left.iter().chain(right.iter()) {
            dims.index_of(l)?;
            if seen.contains(l) {
                return Err(Error::InvalidSplit(format!("register `{l}` appears twice")));
            }
            seen.push(l);
        }
        if seen.len() != dims.len() {
            return Err(Error::InvalidSplit("split does not cover every register".into()));
        }
        Ok(Self {
            left: left.iter().map(|s| (*s).to_owned()).collect(),
            right: right.iter().map(|s| (*s).to_owned()).collect(),
        })
    }

    /// First register against the rest.
    pub fn first_vs_rest(dims: &SubsystemDims) -> Result<Self> {
        let first = dims.factors()[0].0.clone();
        Self::new(dims, &[first.as_str()])
    }

    pub fn left(&self) -> &[String] {
        &self.left
    }

    pub fn right(&self) -> &[String] {
        &self.right
    }

    pub fn swapped(&self) -> Self {
        Self { left: self.right.clone(), right: self.left.clone() }
    }

    pub fn left_labels(&self) -> Vec<&str> {
        self.left.iter().map(String::as_str).collect()
    }

    pub fn right_labels(&self) -> Vec<&str> {
        self.right.iter().map(String::as_str).collect()
    }

    /// Register order `left ++ right` as indices into `dims`.
    pub(crate) fn order(&self, dims: &SubsystemDims) -> Result<Vec<usize>> {
        let mut order = dims.indices(&self.left)?;
        order.extend(dims.indices(&self.right)?);
        Ok(order)
    }

    pub(crate) fn side_dims(&self, dims: &SubsystemDims) -> Result<(SubsystemDims, SubsystemDims)> {
        let pick = |labels: &[String]| -> Result<SubsystemDims> {
            SubsystemDims::new(
                labels.iter().map(|l| dims.dim_of(l).map(|d| (l.clone(), d))).collect::<Result<Vec<_>>>()?,
            )
        };
        Ok((pick(&self.left)?, pick(&self.right)?))
    }
}
