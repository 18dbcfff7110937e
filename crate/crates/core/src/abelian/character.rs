use std::sync::Arc;

use super::group::FiniteAbelianGroup;
use crate::arith::lcm;
use crate::error::{Error, Result};
use crate::qz::QZ;

/// A character of a finite abelian group with values in Q/Z.
///
/// Stored as one numerator per generator: generator `i` maps to `a_i / d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupCharacter {
    group: Arc<FiniteAbelianGroup>,
    numerators: Vec<u64>,
}

impl std::hash::Hash for FiniteAbelianGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.invariant_factors().hash(state);
    }
}

impl GroupCharacter {
    pub fn trivial(group: Arc<FiniteAbelianGroup>) -> Self {
        let numerators = vec![0; group.rank()];
        GroupCharacter { group, numerators }
    }

    /// Character sending generator `i` to `numerators[i] / d_i`.
    pub fn from_numerators(group: Arc<FiniteAbelianGroup>, numerators: Vec<u64>) -> Result<Self> {
        if numerators.len() != group.rank() {
            return Err(Error::InvalidInput(format!(
                "expected {} generator images, got {}",
                group.rank(),
                numerators.len()
            )));
        }
        let numerators = numerators.iter().zip(group.invariant_factors()).map(|(&a, &d)| a % d).collect();
        Ok(GroupCharacter { group, numerators })
    }

    /// Character with the given generator images; each image must have order dividing `d_i`.
    pub fn from_images(group: Arc<FiniteAbelianGroup>, images: &[QZ]) -> Result<Self> {
        if images.len() != group.rank() {
            return Err(Error::InvalidInput(format!("expected {} generator images, got {}", group.rank(), images.len())));
        }
        let mut numerators = Vec::with_capacity(images.len());
        for (x, &d) in images.iter().zip(group.invariant_factors()) {
            numerators.push(x.over(d).ok_or_else(|| {
                Error::InvalidInput(format!("image {x} does not have order dividing {d}"))
            })?);
        }
        Ok(GroupCharacter { group, numerators })
    }

    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn images(&self) -> Vec<QZ> {
        self.numerators.iter().zip(self.group.invariant_factors()).map(|(&a, &d)| QZ::new(a as i128, d)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.numerators.iter().all(|&a| a == 0)
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::MismatchedGroups)
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let numerators = self
            .numerators
            .iter()
            .zip(&other.numerators)
            .zip(self.group.invariant_factors())
            .map(|((&a, &b), &d)| (a + b) % d)
            .collect();
        Ok(GroupCharacter { group: self.group.clone(), numerators })
    }

    pub fn pow(&self, n: i64) -> Self {
        let numerators = self
            .numerators
            .iter()
            .zip(self.group.invariant_factors())
            .map(|(&a, &d)| ((a as i128 * n as i128).rem_euclid(d as i128)) as u64)
            .collect();
        GroupCharacter { group: self.group.clone(), numerators }
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    pub fn order(&self) -> u64 {
        self.images().iter().fold(1, |acc, x| lcm(acc, x.order()))
    }

    /// Value on the element with exponent vector `v`.
    pub fn evaluate(&self, v: &[u64]) -> QZ {
        self.numerators
            .iter()
            .zip(v)
            .zip(self.group.invariant_factors())
            .map(|((&a, &e), &d)| QZ::new((a as u128 * (e % d) as u128 % d as u128) as i128, d))
            .sum()
    }

    /// Value on a concrete element code, via the group's dlog table.
    pub fn evaluate_element(&self, element: u64) -> Option<QZ> {
        self.group.dlog(element).map(|v| self.evaluate(v))
    }
}

/// Every character of `group`, in lexicographic order of numerators.
pub fn all_characters(group: &Arc<FiniteAbelianGroup>) -> Vec<GroupCharacter> {
    group
        .elements()
        .map(|numerators| GroupCharacter { group: group.clone(), numerators })
        .collect()
}
