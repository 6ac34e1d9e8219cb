//! Fixed-parameter knapsack solvers over integer profits.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::rational::{floor_int, Epsilon, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnapsackError {
    #[error("{weights} weights but {profits} profits")]
    LengthMismatch { weights: usize, profits: usize },
    #[error("item {item} has weight {weight}, outside 1..={capacity}")]
    BadWeight { item: usize, weight: u64, capacity: u64 },
    #[error("profit estimate must be positive, got {0}")]
    NonPositiveEstimate(Rational),
}

/// A non-parametric instance with constant, possibly negative profits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerProfitInstance {
    capacity: u64,
    weights: Vec<u64>,
    profits: Vec<i64>,
}

impl IntegerProfitInstance {
    pub fn new(capacity: u64, weights: Vec<u64>, profits: Vec<i64>) -> Result<Self, KnapsackError> {
        if weights.len() != profits.len() {
            return Err(KnapsackError::LengthMismatch {
                weights: weights.len(),
                profits: profits.len(),
            });
        }
        if let Some((item, &weight)) = weights.iter().enumerate().find(|(_, &w)| w == 0 || w > capacity) {
            return Err(KnapsackError::BadWeight {
                item: item + 1,
                weight,
                capacity,
            });
        }
        Ok(Self {
            capacity,
            weights,
            profits,
        })
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn profits(&self) -> &[i64] {
        &self.profits
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ max(0, p_i)`.
    pub fn positive_profit_sum(&self) -> u64 {
        self.profits.iter().map(|&p| p.max(0) as u64).sum()
    }

    pub fn selection(&self, mut items: Vec<usize>) -> Selection {
        items.sort_unstable();
        let weight = items.iter().map(|&i| self.weights[i]).sum();
        let profit = items.iter().map(|&i| self.profits[i]).sum();
        Selection { items, weight, profit }
    }
}

/// Chosen items (0-based, ascending) of an [`IntegerProfitInstance`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Selection {
    pub items: Vec<usize>,
    pub weight: u64,
    pub profit: i64,
}

/// Minimum weight `w(k, p)` needed to reach profit exactly `p` with the
/// first `k` non-negative-profit items; `capacity + 1` marks infeasible.
#[derive(Debug, Clone)]
pub struct DpTable {
    width: usize,
    infeasible: u64,
    cells: Vec<u64>,
}

impl DpTable {
    pub fn build(inst: &IntegerProfitInstance, profit_bound: u64) -> Self {
        let width = profit_bound as usize + 1;
        let n = inst.len();
        let infeasible = inst.capacity + 1;
        let mut cells = vec![infeasible; (n + 1) * width];
        cells[0] = 0;
        for k in 1..=n {
            let (done, rest) = cells.split_at_mut(k * width);
            let prev = &done[(k - 1) * width..];
            let row = &mut rest[..width];
            row.copy_from_slice(prev);
            let pk = inst.profits[k - 1];
            if pk < 0 || pk as u64 > profit_bound {
                continue;
            }
            let (pk, wk) = (pk as usize, inst.weights[k - 1]);
            for p in pk..width {
                let packed = prev[p - pk].saturating_add(wk).min(infeasible);
                if packed < row[p] {
                    row[p] = packed;
                }
            }
        }
        Self {
            width,
            infeasible,
            cells,
        }
    }

    pub fn get(&self, k: usize, p: usize) -> u64 {
        self.cells[k * self.width + p]
    }

    pub fn is_feasible(&self, k: usize, p: usize) -> bool {
        self.get(k, p) < self.infeasible
    }

    pub fn rows(&self) -> usize {
        self.cells.len() / self.width
    }

    pub fn profit_bound(&self) -> usize {
        self.width - 1
    }
}

/// Exact minimum-weight dynamic program. Returns a maximum-profit feasible
/// selection using only non-negative items; at equal profit, later items are
/// left out.
pub fn dp_exact(inst: &IntegerProfitInstance, profit_bound: u64) -> Selection {
    let table = DpTable::build(inst, profit_bound);
    let n = inst.len();
    let mut p = (0..table.width)
        .rev()
        .find(|&p| table.is_feasible(n, p))
        .expect("empty selection is always feasible");
    let mut items = Vec::new();
    for k in (1..=n).rev() {
        if table.get(k, p) != table.get(k - 1, p) {
            items.push(k - 1);
            p -= inst.profits[k - 1] as usize;
        }
    }
    debug_assert_eq!(p, 0);
    inst.selection(items)
}

/// Lawler's scaling scheme: profits become `⌊p_i / M⌋` with
/// `M = ε·estimate/n`, solved exactly up to the bound `⌊2n/ε⌋`, and the
/// result is reported at the original profits. Needs
/// `½·opt ≤ estimate ≤ opt`; guarantees `(1 − ε)·opt`.
pub fn lawler_fptas(
    inst: &IntegerProfitInstance,
    epsilon: Epsilon,
    estimate: &Rational,
) -> Result<Selection, KnapsackError> {
    if inst.profits.iter().all(|&p| p <= 0) {
        return Ok(Selection::default());
    }
    if *estimate <= Rational::from_integer(BigInt::from(0)) {
        return Err(KnapsackError::NonPositiveEstimate(estimate.clone()));
    }
    let n = inst.len() as u64;
    // p_i / M = p_i · n · ε_den / (ε_num · estimate)
    let factor = Rational::new(BigInt::from(n) * epsilon.den(), BigInt::from(epsilon.num())) / estimate;
    let scaled: Vec<i64> = inst
        .profits
        .iter()
        .map(|&p| {
            if p < 0 {
                -1
            } else {
                floor_int(&(&factor * BigInt::from(p)))
                    .to_i64()
                    .expect("scaled profit fits in i64")
            }
        })
        .collect();
    let scaled_inst = IntegerProfitInstance {
        capacity: inst.capacity,
        weights: inst.weights.clone(),
        profits: scaled,
    };
    let bound = epsilon
        .scaled_profit_cap(inst.len())
        .min(scaled_inst.positive_profit_sum());
    let picked = dp_exact(&scaled_inst, bound);
    Ok(inst.selection(picked.items))
}

/// Value of the classic greedy ½-approximation: the better of the ratio
/// prefix and the best single item.
pub fn greedy_half_value(inst: &IntegerProfitInstance) -> i64 {
    let mut order: Vec<usize> = (0..inst.len()).filter(|&i| inst.profits[i] >= 0).collect();
    order.sort_by(|&i, &j| {
        let lhs = i128::from(inst.profits[i]) * i128::from(inst.weights[j]);
        let rhs = i128::from(inst.profits[j]) * i128::from(inst.weights[i]);
        rhs.cmp(&lhs).then_with(|| i.cmp(&j))
    });
    let mut room = inst.capacity;
    let mut prefix = 0i64;
    for i in order {
        if inst.weights[i] > room {
            break;
        }
        room -= inst.weights[i];
        prefix += inst.profits[i];
    }
    let single = inst.profits.iter().copied().max().unwrap_or(0).max(0);
    prefix.max(single)
}

/// A fixed-parameter solver with a multiplicative guarantee.
pub trait KnapsackSolver: Send + Sync {
    fn solve(&self, inst: &IntegerProfitInstance) -> Selection;

    /// Factor γ with `profit ≥ γ · optimum`.
    fn guarantee(&self) -> Rational;
}

/// [`dp_exact`] with an optional cap on the profit range.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactDp {
    pub profit_cap: Option<u64>,
}

impl KnapsackSolver for ExactDp {
    fn solve(&self, inst: &IntegerProfitInstance) -> Selection {
        let sum = inst.positive_profit_sum();
        dp_exact(inst, self.profit_cap.map_or(sum, |cap| cap.min(sum)))
    }

    fn guarantee(&self) -> Rational {
        Rational::from_integer(BigInt::from(1))
    }
}

/// [`lawler_fptas`] seeded with the greedy ½-approximation value.
#[derive(Debug, Clone, Copy)]
pub struct LawlerFptas {
    pub epsilon: Epsilon,
}

impl KnapsackSolver for LawlerFptas {
    fn solve(&self, inst: &IntegerProfitInstance) -> Selection {
        let estimate = greedy_half_value(inst);
        if estimate <= 0 {
            return Selection::default();
        }
        lawler_fptas(inst, self.epsilon, &Rational::from_integer(BigInt::from(estimate))).expect("estimate is positive")
    }

    fn guarantee(&self) -> Rational {
        self.epsilon.complement()
    }
}

/// Solves the integer subproblem for one schedule interval. `None` marks an
/// excluded item. Returns 0-based indices into `weights`.
pub fn solve_scaled_subproblem(
    scaled_profits: &[Option<u64>],
    weights: &[u64],
    capacity: u64,
    inner: &dyn KnapsackSolver,
) -> Vec<usize> {
    let kept: Vec<usize> = (0..weights.len()).filter(|&i| scaled_profits[i].is_some()).collect();
    if kept.is_empty() {
        return Vec::new();
    }
    let sub = IntegerProfitInstance {
        capacity,
        weights: kept.iter().map(|&i| weights[i]).collect(),
        profits: kept
            .iter()
            .map(|&i| i64::try_from(scaled_profits[i].unwrap_or(0)).expect("scaled profit fits in i64"))
            .collect(),
    };
    inner.solve(&sub).items.into_iter().map(|j| kept[j]).collect()
}
