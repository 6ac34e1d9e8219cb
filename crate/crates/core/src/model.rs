//! Instances and knapsack solutions.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::affine::AffineFunction;
use crate::rational::{int, Rational};

/// One knapsack item with profit `intercept + λ·slope`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Item {
    pub weight: u64,
    pub intercept: i64,
    pub slope: i64,
}

impl Item {
    pub fn new(weight: u64, intercept: i64, slope: i64) -> Self {
        Self {
            weight,
            intercept,
            slope,
        }
    }

    pub fn profit_line(&self) -> AffineFunction {
        AffineFunction::from_ints(self.intercept, self.slope)
    }

    pub fn profit_at(&self, lambda: &Rational) -> Rational {
        int(self.intercept) + lambda * int(self.slope)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance has no items")]
    NoItems,
    #[error("item {item} has zero weight")]
    ZeroWeight { item: usize },
    #[error("weight exceeds capacity, item {item} (weight {weight} > capacity {capacity})")]
    WeightExceedsCapacity { item: usize, weight: u64, capacity: u64 },
}

/// A validated parametric knapsack instance. Item indices are 0-based in
/// code and 1-based in every report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    capacity: u64,
    items: Vec<Item>,
}

impl Instance {
    /// Checks `n ≥ 1` and `1 ≤ w_i ≤ W`, reporting the first offending item
    /// (1-based).
    pub fn new(capacity: u64, items: Vec<Item>) -> Result<Self, InstanceError> {
        if items.is_empty() {
            return Err(InstanceError::NoItems);
        }
        for (idx, item) in items.iter().enumerate() {
            if item.weight == 0 {
                return Err(InstanceError::ZeroWeight { item: idx + 1 });
            }
            if item.weight > capacity {
                return Err(InstanceError::WeightExceedsCapacity {
                    item: idx + 1,
                    weight: item.weight,
                    capacity,
                });
            }
        }
        Ok(Self { capacity, items })
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Builds the solution for `selected` (0-based indices) with its weight
    /// and profit line. Returns `None` if it overflows the capacity or an
    /// index is out of range.
    pub fn solution<I: IntoIterator<Item = usize>>(&self, selected: I) -> Option<KnapsackSolution> {
        let selected: BTreeSet<usize> = selected.into_iter().collect();
        let mut weight = 0u64;
        let mut intercept = 0i64;
        let mut slope = 0i64;
        for &idx in &selected {
            let item = self.items.get(idx)?;
            weight = weight.checked_add(item.weight)?;
            intercept += item.intercept;
            slope += item.slope;
        }
        if weight > self.capacity {
            return None;
        }
        Some(KnapsackSolution {
            selected,
            total_weight: weight,
            profit_line: AffineFunction::from_ints(intercept, slope),
        })
    }
}

/// A feasible item selection together with its total weight and profit line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackSolution {
    selected: BTreeSet<usize>,
    total_weight: u64,
    profit_line: AffineFunction,
}

impl KnapsackSolution {
    pub fn empty() -> Self {
        Self {
            selected: BTreeSet::new(),
            total_weight: 0,
            profit_line: AffineFunction::zero(),
        }
    }

    /// 0-based indices of the packed items, ascending.
    pub fn selected(&self) -> &BTreeSet<usize> {
        &self.selected
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn profit_line(&self) -> &AffineFunction {
        &self.profit_line
    }

    pub fn profit_at(&self, lambda: &Rational) -> Rational {
        self.profit_line.eval(lambda)
    }

    /// 1-based item indices, as printed in reports and files.
    pub fn item_numbers(&self) -> Vec<usize> {
        self.selected.iter().map(|i| i + 1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn validation_reports_first_offender() {
        assert!(Instance::new(5, vec![Item::new(2, 1, 0)]).is_ok());
        let err = Instance::new(5, vec![Item::new(6, 1, 0)]).unwrap_err();
        assert_eq!(
            err.to_string(),
            "weight exceeds capacity, item 1 (weight 6 > capacity 5)"
        );
        assert!(matches!(
            Instance::new(0, vec![Item::new(1, 3, 2)]),
            Err(InstanceError::WeightExceedsCapacity { item: 1, .. })
        ));
        assert_eq!(
            Instance::new(5, vec![Item::new(1, 0, 0), Item::new(0, 0, 0)]),
            Err(InstanceError::ZeroWeight { item: 2 })
        );
        assert_eq!(Instance::new(5, vec![]), Err(InstanceError::NoItems));
    }

    #[test]
    fn solution_profit() {
        let inst = Instance::new(3, vec![Item::new(1, 2, -1), Item::new(1, 1, 1), Item::new(1, 2, -1)]).unwrap();
        assert_eq!(inst.solution([0]).unwrap().profit_at(&int(1)), int(1));
        assert_eq!(KnapsackSolution::empty().profit_at(&int(17)), int(0));
        // (1 + λ) + (2 − λ) = 3 + 0·λ
        let both = inst.solution([1, 2]).unwrap();
        assert_eq!(both.profit_line(), &AffineFunction::from_ints(3, 0));
        let per_item: Rational = [1, 2].iter().map(|&i| inst.items()[i].profit_at(&int(3))).sum();
        assert_eq!(both.profit_at(&int(3)), per_item);
        assert_eq!(both.profit_at(&int(3)), int(3));
        assert_eq!(both.item_numbers(), vec![2, 3]);
        assert_eq!(both.total_weight(), 2);
    }

    #[test]
    fn overweight_selection_is_rejected() {
        let inst = Instance::new(2, vec![Item::new(2, 1, 0), Item::new(1, 1, 0)]).unwrap();
        assert!(inst.solution([0, 1]).is_none());
        assert!(inst.solution([5]).is_none());
    }
}
