use crate::error::{EpiError, Result};
use crate::geometry::Vec2;

/// A putative match `m <-> m'` between image 1 and image 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correspondence {
    pub m: Vec2,
    pub m_prime: Vec2,
    /// Ground-truth label, known only for synthetic data.
    pub is_true_inlier: Option<bool>,
}

impl Correspondence {
    pub const fn new(m: Vec2, m_prime: Vec2) -> Self {
        Self {
            m,
            m_prime,
            is_true_inlier: None,
        }
    }

    pub const fn flagged(m: Vec2, m_prime: Vec2, inlier: bool) -> Self {
        Self {
            m,
            m_prime,
            is_true_inlier: Some(inlier),
        }
    }
}

/// Ordered correspondences with optional per-pair weights in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrespondenceSet {
    pairs: Vec<Correspondence>,
    weights: Option<Vec<f64>>,
}

impl CorrespondenceSet {
    pub fn new(pairs: Vec<Correspondence>) -> Self {
        Self {
            pairs,
            weights: None,
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights, self.pairs.len())?;
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn pairs(&self) -> &[Correspondence] {
        &self.pairs
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Correspondence> {
        self.pairs.iter()
    }

    /// True when every pair carries a ground-truth flag.
    pub fn has_flags(&self) -> bool {
        self.pairs.iter().all(|p| p.is_true_inlier.is_some())
    }

    /// Pairs at `indices` (in the given order), with their weights.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            pairs: indices.iter().map(|&i| self.pairs[i]).collect(),
            weights: self
                .weights
                .as_ref()
                .map(|w| indices.iter().map(|&i| w[i]).collect()),
        }
    }

    /// Concatenation; weights survive only if both sides carry them.
    pub fn concat(&self, other: &Self) -> Self {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        let weights = match (&self.weights, &other.weights) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Self { pairs, weights }
    }
}

impl FromIterator<Correspondence> for CorrespondenceSet {
    fn from_iter<I: IntoIterator<Item = Correspondence>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a CorrespondenceSet {
    type Item = &'a Correspondence;
    type IntoIter = std::slice::Iter<'a, Correspondence>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}

pub(crate) fn check_weights(weights: &[f64], len: usize) -> Result<()> {
    if weights.len() != len {
        return Err(EpiError::LengthMismatch {
            what: "weights",
            expected: len,
            got: weights.len(),
        });
    }
    if let Some((index, &value)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(0.0..=1.0).contains(*w))
    {
        return Err(EpiError::InvalidWeight { index, value });
    }
    Ok(())
}
