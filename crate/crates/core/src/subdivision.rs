//! Critical parameter values of the scaled profits and the resulting
//! alternating interval list.
//!
//! For an item `i` and a piece `α + λβ` of φ, the scaled profit is
//! `⌊K·(a_i + λ b_i) / (α + λβ)⌋` with `K = n/ε`. On each piece the ratio is
//! monotone and the sign of its derivative is the sign of `b_i·α − a_i·β`.
//! Since φ is convex, the points `(β, α)` of consecutive pieces trace a
//! concave path, which a line through the origin crosses at most twice: each
//! item sees at most three monotone runs over the whole line.

use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::affine::AffineFunction;
use crate::greedy::HalfApproxFunction;
use crate::model::{Instance, Item};
use crate::piecewise::Interval;
use crate::rational::{ceil_int, floor_int, Epsilon, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubdivisionError {
    #[error("φ vanishes at λ = {0}; the empty solution is optimal there")]
    ZeroPhi(Rational),
    #[error("item {item} has {runs} monotone runs over φ (at most 3 expected); φ is not convex")]
    TooManyRuns { item: usize, runs: usize },
}

/// `⌊n·p_i(λ) / (ε·φ(λ))⌋`, or `None` when the item's profit is negative.
///
/// `phi_piece` must be the piece of φ containing `lambda`.
pub fn scaled_profit(
    item: &Item,
    phi_piece: &AffineFunction,
    n: usize,
    epsilon: Epsilon,
    lambda: &Rational,
) -> Result<Option<u64>, SubdivisionError> {
    let scale = ProfitScale::new(n, epsilon, &phi_piece.eval(lambda), lambda)?;
    Ok(scale.apply(item))
}

/// Scaled profits of every item at `lambda`, given `φ(λ)`.
pub fn scaled_profits(
    inst: &Instance,
    phi_value: &Rational,
    epsilon: Epsilon,
    lambda: &Rational,
) -> Result<Vec<Option<u64>>, SubdivisionError> {
    let scale = ProfitScale::new(inst.len(), epsilon, phi_value, lambda)?;
    Ok(inst.items().iter().map(|item| scale.apply(item)).collect())
}

/// Integer form of the scaling at one λ = u/d with φ(λ) = P/Q:
/// `⌊(a·d + b·u) · n·ε_den·Q / (ε_num·d·P)⌋`.
struct ProfitScale<'a> {
    num: &'a BigInt,
    den: &'a BigInt,
    multiplier: BigInt,
    divisor: BigInt,
}

impl<'a> ProfitScale<'a> {
    fn new(n: usize, epsilon: Epsilon, phi_value: &Rational, lambda: &'a Rational) -> Result<Self, SubdivisionError> {
        if !phi_value.is_positive() {
            return Err(SubdivisionError::ZeroPhi(lambda.clone()));
        }
        Ok(Self {
            num: lambda.numer(),
            den: lambda.denom(),
            multiplier: BigInt::from(n) * epsilon.den() * phi_value.denom(),
            divisor: BigInt::from(epsilon.num()) * lambda.denom() * phi_value.numer(),
        })
    }

    fn apply(&self, item: &Item) -> Option<u64> {
        let profit = BigInt::from(item.intercept) * self.den + BigInt::from(item.slope) * self.num;
        if profit.is_negative() {
            return None;
        }
        let value = (profit * &self.multiplier).div_floor(&self.divisor);
        Some(value.to_u64().expect("scaled profit fits in u64"))
    }
}

/// Direction of `p_i/φ` over a run of φ pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneRun {
    /// Consecutive φ piece indices.
    pub pieces: Range<usize>,
    pub direction: Direction,
}

/// Up to three runs of φ pieces on which `p_i/φ` is monotone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonePartition {
    pub item: usize,
    pub runs: Vec<MonotoneRun>,
}

/// Sign of `b_i·α − a_i·β`, the numerator of the derivative of `p_i/φ` on
/// the piece `α + λβ`.
pub fn derivative_sign(item: &Item, piece: &AffineFunction) -> i8 {
    let value = &piece.intercept * BigInt::from(item.slope) - &piece.slope * BigInt::from(item.intercept);
    if value.is_positive() {
        1
    } else if value.is_negative() {
        -1
    } else {
        0
    }
}

/// Groups φ's pieces into maximal monotone runs for `item` in one scan.
/// Pieces with a zero derivative numerator join the current run.
pub fn monotone_partitions(
    item_index: usize,
    item: &Item,
    phi: &HalfApproxFunction,
) -> Result<MonotonePartition, SubdivisionError> {
    let pieces = phi.function().pieces();
    let mut runs: Vec<MonotoneRun> = Vec::new();
    let mut run_start = 0;
    let mut current: Option<Direction> = None;
    for (j, piece) in pieces.iter().enumerate() {
        let direction = match derivative_sign(item, piece) {
            1 => Direction::Nondecreasing,
            -1 => Direction::Nonincreasing,
            _ => continue,
        };
        match current {
            None => current = Some(direction),
            Some(d) if d == direction => {}
            Some(d) => {
                runs.push(MonotoneRun {
                    pieces: run_start..j,
                    direction: d,
                });
                run_start = j;
                current = Some(direction);
            }
        }
    }
    runs.push(MonotoneRun {
        pieces: run_start..pieces.len(),
        direction: current.unwrap_or(Direction::Nondecreasing),
    });
    if runs.len() > 3 {
        return Err(SubdivisionError::TooManyRuns {
            item: item_index + 1,
            runs: runs.len(),
        });
    }
    Ok(MonotonePartition { item: item_index, runs })
}

/// Strictly increasing, deduplicated critical parameter values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CriticalSet(Vec<Rational>);

impl CriticalSet {
    pub fn from_unsorted(mut values: Vec<Rational>) -> Self {
        values.sort_unstable();
        values.dedup();
        Self(values)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Closed parameter range; `None` is an infinite end.
#[derive(Debug, Clone)]
struct Domain {
    lo: Option<Rational>,
    hi: Option<Rational>,
}

impl Domain {
    fn contains(&self, lambda: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|lo| lo <= lambda) && self.hi.as_ref().is_none_or(|hi| lambda <= hi)
    }

    /// Restricts to where `item`'s profit is non-negative; `None` if empty.
    fn clip_nonnegative(mut self, item: &Item) -> Option<Self> {
        let line = item.profit_line();
        match line.root() {
            None if item.intercept >= 0 => {}
            None => return None,
            Some(root) if item.slope > 0 => {
                if self.lo.as_ref().is_none_or(|lo| *lo < root) {
                    self.lo = Some(root);
                }
            }
            Some(root) => {
                if self.hi.as_ref().is_none_or(|hi| *hi > root) {
                    self.hi = Some(root);
                }
            }
        }
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) if lo > hi => None,
            _ => Some(self),
        }
    }
}

/// `K·p_i/φ` on one piece, with `K = n/ε` as a rational.
struct PieceRatio<'a> {
    item: &'a Item,
    piece: &'a AffineFunction,
    factor: &'a Rational,
}

impl PieceRatio<'_> {
    /// Value at a finite point, or its limit when φ vanishes there. `None`
    /// stands for +∞.
    fn at(&self, lambda: &Rational) -> Option<Rational> {
        let phi = self.piece.eval(lambda);
        if phi.is_zero() {
            // p_i ≤ 2φ forces p_i(λ) = 0 too, so both lines share the root
            // and the ratio is the constant b_i/β.
            return self.at_infinity();
        }
        Some(self.factor * self.item.profit_at(lambda) / phi)
    }

    /// Limit as |λ| → ∞ along the piece. `None` stands for +∞.
    fn at_infinity(&self) -> Option<Rational> {
        let b = Rational::from_integer(BigInt::from(self.item.slope));
        if !self.piece.slope.is_zero() {
            Some(self.factor * b / &self.piece.slope)
        } else if b.is_zero() {
            Some(self.factor * Rational::from_integer(BigInt::from(self.item.intercept)) / &self.piece.intercept)
        } else {
            None
        }
    }
}

/// Every λ at which some scaled profit changes value or exclusion status,
/// every profit root, the boundary of the region where φ = 0, and every
/// breakpoint of φ.
///
/// Per item and piece, the range of integer levels `v` crossed is read off
/// the ratio's values at the ends of the piece (restricted to where the
/// profit is non-negative), and each crossing solves
/// `n·ε_den·(a_i + λ b_i) = v·ε_num·(α + λβ)`.
pub fn critical_lambdas(
    inst: &Instance,
    phi: &HalfApproxFunction,
    epsilon: Epsilon,
) -> Result<CriticalSet, SubdivisionError> {
    let function = phi.function();
    let n = inst.len();
    let cap = epsilon.scaled_profit_cap(n);
    let n_den = BigInt::from(n) * epsilon.den();
    let eps_num = BigInt::from(epsilon.num());
    let factor = Rational::new(n_den.clone(), eps_num.clone());

    let mut values: Vec<Rational> = function.breakpoints().to_vec();
    if let Some((lo, hi)) = phi.zero_region() {
        values.extend(lo);
        values.extend(hi);
    }
    for (index, item) in inst.items().iter().enumerate() {
        values.extend(item.profit_line().root());
        let partition = monotone_partitions(index, item, phi)?;
        for run in &partition.runs {
            for j in run.pieces.clone() {
                let piece = &function.pieces()[j];
                if piece.is_zero() {
                    continue;
                }
                let (lo, hi) = function.piece_bounds(j);
                let domain = Domain {
                    lo: lo.cloned(),
                    hi: hi.cloned(),
                };
                let Some(domain) = domain.clip_nonnegative(item) else {
                    continue;
                };
                let ratio = PieceRatio {
                    item,
                    piece,
                    factor: &factor,
                };
                let lo_value = match &domain.lo {
                    Some(lo) => ratio.at(lo),
                    None => ratio.at_infinity(),
                };
                let hi_value = match &domain.hi {
                    Some(hi) => ratio.at(hi),
                    None => ratio.at_infinity(),
                };
                let (low, high) = match (lo_value, hi_value) {
                    (Some(x), Some(y)) if x <= y => (x, Some(y)),
                    (Some(x), Some(y)) => (y, Some(x)),
                    (Some(x), None) | (None, Some(x)) => (x, None),
                    (None, None) => continue,
                };
                let first = ceil_int(&low).max(BigInt::zero());
                let last = high.map_or(BigInt::from(cap), |h| floor_int(&h).min(BigInt::from(cap)));
                let mut level = first;
                while level <= last {
                    // λ·(n·ε_den·b − v·ε_num·β) = v·ε_num·α − n·ε_den·a
                    let v_num = Rational::from_integer(&level * &eps_num);
                    let coefficient = Rational::from_integer(&n_den * item.slope) - &v_num * &piece.slope;
                    if !coefficient.is_zero() {
                        let rhs = &v_num * &piece.intercept - Rational::from_integer(&n_den * item.intercept);
                        let lambda = rhs / coefficient;
                        if domain.contains(&lambda) {
                            values.push(lambda);
                        }
                    }
                    level += BigInt::one();
                }
            }
        }
    }
    Ok(CriticalSet::from_unsorted(values))
}

/// `(−∞, λ₁), [λ₁, λ₁], (λ₁, λ₂), …, [λ_k, λ_k], (λ_k, +∞)`, or the whole
/// line when there are no critical values.
pub fn build_intervals(criticals: &CriticalSet) -> Vec<Interval> {
    let values = criticals.values();
    let (Some(first), Some(last)) = (values.first(), values.last()) else {
        return vec![Interval::WholeLine];
    };
    let mut intervals = Vec::with_capacity(2 * values.len() + 1);
    intervals.push(Interval::UnboundedLeft(first.clone()));
    for (k, value) in values.iter().enumerate() {
        intervals.push(Interval::SinglePoint(value.clone()));
        if let Some(next) = values.get(k + 1) {
            intervals.push(Interval::Open(value.clone(), next.clone()));
        }
    }
    intervals.push(Interval::UnboundedRight(last.clone()));
    intervals
}
