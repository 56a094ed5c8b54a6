//! Labeled tensor-factor spaces.
//!
//! A [`CompositeSpace`] is an ordered list of labeled factors, e.g. a subject
//! factor `S` of dimension 2 next to an alternative factor `A` of dimension 6.
//! Index arithmetic everywhere in the crate is row-major lexicographic in the
//! declaration order of the factors.

use crate::error::{Error, Result};

/// One tensor factor: a label, its dimension, and its slot in the tensor order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorIndex {
    label: String,
    dim: usize,
    position: usize,
}

impl FactorIndex {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn position(&self) -> usize {
        self.position
    }
}

/// Ordered, labeled tensor factors with their total dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeSpace {
    factors: Vec<FactorIndex>,
    total_dim: usize,
}

impl CompositeSpace {
    /// Builds a space from `(label, dim)` pairs; factor positions follow the
    /// declaration order. Duplicate labels and zero dimensions are rejected.
    pub fn compose(factors: &[(&str, usize)]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyInput("composite space needs at least one factor"));
        }
        let mut built = Vec::with_capacity(factors.len());
        let mut total_dim = 1usize;
        for (position, &(label, dim)) in factors.iter().enumerate() {
            if dim == 0 {
                return Err(Error::InvalidParameter {
                    reason: format!("factor \"{label}\" has dimension 0"),
                });
            }
            if built.iter().any(|f: &FactorIndex| f.label == label) {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
            built.push(FactorIndex {
                label: label.to_string(),
                dim,
                position,
            });
            total_dim *= dim;
        }
        Ok(CompositeSpace {
            factors: built,
            total_dim,
        })
    }

    /// A space with a single factor.
    pub fn single(label: &str, dim: usize) -> Result<Self> {
        Self::compose(&[(label, dim)])
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn factors(&self) -> &[FactorIndex] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    /// Dimensions in declaration order.
    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim).collect()
    }

    pub fn factor(&self, label: &str) -> Option<&FactorIndex> {
        self.factors.iter().find(|f| f.label == label)
    }

    /// Position of a labeled factor, or an `UnknownLabel` error.
    pub fn position(&self, label: &str) -> Result<usize> {
        self.factor(label)
            .map(|f| f.position)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// The sub-space spanned by the factors whose positions are kept, in the
    /// original order.
    pub fn keep_positions(&self, keep: &[usize]) -> Result<Self> {
        let pairs: Vec<(&str, usize)> = self
            .factors
            .iter()
            .filter(|f| keep.contains(&f.position))
            .map(|f| (f.label.as_str(), f.dim))
            .collect();
        Self::compose(&pairs)
    }

    /// Splits a flat row-major index into per-factor digits.
    pub fn split_index(&self, mut index: usize) -> Vec<usize> {
        let dims = self.dims();
        let mut digits = vec![0usize; dims.len()];
        for (slot, &d) in dims.iter().enumerate().rev() {
            digits[slot] = index % d;
            index /= d;
        }
        digits
    }

    /// Merges per-factor digits back into a flat row-major index.
    pub fn merge_index(&self, digits: &[usize]) -> usize {
        let dims = self.dims();
        debug_assert_eq!(digits.len(), dims.len());
        let mut index = 0usize;
        for (slot, &d) in dims.iter().enumerate() {
            index = index * d + digits[slot];
        }
        index
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_subject_and_alternative() {
        let space = CompositeSpace::compose(&[("S", 2), ("A", 2)]).unwrap();
        assert_eq!(space.total_dim(), 4);
        assert_eq!(space.factor_count(), 2);
        assert_eq!(space.position("A").unwrap(), 1);
    }

    #[test]
    fn compose_subject_coin_die() {
        let space = CompositeSpace::compose(&[("S", 2), ("A", 2), ("B", 6)]).unwrap();
        assert_eq!(space.total_dim(), 24);
        assert_eq!(space.factor("B").unwrap().dim(), 6);
    }

    #[test]
    fn duplicate_label_rejected() {
        let err = CompositeSpace::compose(&[("A", 2), ("A", 3)]).unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel(l) if l == "A"));
    }

    #[test]
    fn zero_dim_rejected() {
        assert!(CompositeSpace::compose(&[("A", 0)]).is_err());
    }

    #[test]
    fn index_round_trip() {
        let space = CompositeSpace::compose(&[("S", 2), ("A", 3), ("B", 4)]).unwrap();
        for i in 0..space.total_dim() {
            let digits = space.split_index(i);
            assert_eq!(space.merge_index(&digits), i);
        }
        // row-major: first factor is most significant
        assert_eq!(space.split_index(23), vec![1, 2, 3]);
    }
}
