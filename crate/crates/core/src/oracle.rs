//! Brute-force reference solvers for small instances.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::affine::AffineFunction;
use crate::envelope::upper_envelope;
use crate::model::{Instance, KnapsackSolution};
use crate::piecewise::PiecewiseLinearFunction;
use crate::rational::Rational;

/// Largest instance the subset enumeration accepts.
pub const ORACLE_MAX_ITEMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute-force oracle is limited to {limit} items, instance has {items}")]
    TooManyItems { items: usize, limit: usize },
}

fn check_size(inst: &Instance) -> Result<(), OracleError> {
    if inst.len() > ORACLE_MAX_ITEMS {
        return Err(OracleError::TooManyItems {
            items: inst.len(),
            limit: ORACLE_MAX_ITEMS,
        });
    }
    Ok(())
}

/// Visits every feasible subset as a bitmask, in lexicographic order of
/// the sorted index sequences, with its intercept and slope sums.
fn for_each_feasible(inst: &Instance, mut visit: impl FnMut(u32, i64, i64)) {
    fn descend(
        inst: &Instance,
        start: usize,
        mask: u32,
        weight: u64,
        a: i64,
        b: i64,
        visit: &mut dyn FnMut(u32, i64, i64),
    ) {
        visit(mask, a, b);
        for (j, item) in inst.items().iter().enumerate().skip(start) {
            let w = weight + item.weight;
            if w <= inst.capacity() {
                descend(inst, j + 1, mask | 1 << j, w, a + item.intercept, b + item.slope, visit);
            }
        }
    }
    descend(inst, 0, 0, 0, 0, 0, &mut visit);
}

fn mask_solution(inst: &Instance, mask: u32) -> KnapsackSolution {
    inst.solution((0..inst.len()).filter(|i| mask >> i & 1 == 1))
        .expect("enumerated subsets are feasible")
}

/// The exact optimal profit function p* with an optimal solution per piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactProfitFunction {
    function: PiecewiseLinearFunction,
    witnesses: Vec<KnapsackSolution>,
}

impl ExactProfitFunction {
    pub fn function(&self) -> &PiecewiseLinearFunction {
        &self.function
    }

    pub fn witnesses(&self) -> &[KnapsackSolution] {
        &self.witnesses
    }

    pub fn eval(&self, lambda: &Rational) -> Rational {
        self.function.eval(lambda)
    }
}

/// Upper envelope of the profit lines of all feasible subsets (the empty
/// subset contributes the zero line). Only the best intercept per slope is
/// kept before the envelope is built.
pub fn brute_force_parametric(inst: &Instance) -> Result<ExactProfitFunction, OracleError> {
    check_size(inst)?;
    let mut best_per_slope: HashMap<i64, (i64, u32)> = HashMap::new();
    for_each_feasible(inst, |mask, a, b| {
        best_per_slope
            .entry(b)
            .and_modify(|best| {
                if a > best.0 {
                    *best = (a, mask);
                }
            })
            .or_insert((a, mask));
    });
    let mut entries: Vec<(i64, i64, u32)> = best_per_slope.into_iter().map(|(b, (a, m))| (b, a, m)).collect();
    entries.sort_unstable();
    let lines: Vec<AffineFunction> = entries
        .iter()
        .map(|&(b, a, _)| AffineFunction::from_ints(a, b))
        .collect();
    let (function, sources) = upper_envelope(&lines).expect("empty subset is feasible").into_parts();
    let witnesses = sources.into_iter().map(|s| mask_solution(inst, entries[s].2)).collect();
    Ok(ExactProfitFunction { function, witnesses })
}

/// Maximum-profit feasible subset at `lambda`; ties go to the
/// lexicographically smallest index set.
pub fn brute_force_fixed(inst: &Instance, lambda: &Rational) -> Result<KnapsackSolution, OracleError> {
    check_size(inst)?;
    // Compare a·den + b·num, which orders profits like a + λ·b since den > 0.
    let fast = lambda.numer().to_i64().zip(lambda.denom().to_i64());
    let mut best: Option<(u32, BigInt)> = None;
    let mut best_fast: Option<(u32, i128)> = None;
    for_each_feasible(inst, |mask, a, b| match fast {
        Some((num, den)) => {
            let value = i128::from(a) * i128::from(den) + i128::from(b) * i128::from(num);
            if best_fast.as_ref().is_none_or(|(_, v)| value > *v) {
                best_fast = Some((mask, value));
            }
        }
        None => {
            let value = BigInt::from(a) * lambda.denom() + BigInt::from(b) * lambda.numer();
            if best.as_ref().is_none_or(|(_, v)| value > *v) {
                best = Some((mask, value));
            }
        }
    });
    let mask = best_fast.map(|(m, _)| m).or(best.map(|(m, _)| m)).unwrap_or(0);
    Ok(mask_solution(inst, mask))
}
