//! Greedy ½-approximation at a fixed parameter and its convex parametric
//! counterpart φ.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::affine::AffineFunction;
use crate::envelope::upper_envelope;
use crate::model::{Instance, KnapsackSolution};
use crate::piecewise::PiecewiseLinearFunction;
use crate::rational::{int, midpoint, Rational};

/// Why the greedy order can change at an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventKind {
    /// Profit-to-weight ratios of items `.0` and `.1` (0-based) coincide.
    RatioCrossing(usize, usize),
    /// Profit of the item becomes zero.
    ProfitSignChange(usize),
}

/// A parameter value where the greedy order or the set of profitable items
/// may change, with every cause found at that value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingEvent {
    pub lambda: Rational,
    pub causes: Vec<EventKind>,
}

/// All ratio crossings and profit roots, sorted and merged by value.
pub fn ordering_events(inst: &Instance) -> Vec<OrderingEvent> {
    let items = inst.items();
    let mut raw: Vec<(Rational, EventKind)> = Vec::new();
    for (i, item) in items.iter().enumerate() {
        if item.slope != 0 {
            raw.push((
                Rational::new(BigInt::from(-item.intercept), BigInt::from(item.slope)),
                EventKind::ProfitSignChange(i),
            ));
        }
        for (j, other) in items.iter().enumerate().skip(i + 1) {
            // (a_i + λ b_i) w_j = (a_j + λ b_j) w_i
            let wi = i128::from(item.weight);
            let wj = i128::from(other.weight);
            let denom = i128::from(item.slope) * wj - i128::from(other.slope) * wi;
            if denom != 0 {
                let numer = i128::from(other.intercept) * wi - i128::from(item.intercept) * wj;
                raw.push((
                    Rational::new(BigInt::from(numer), BigInt::from(denom)),
                    EventKind::RatioCrossing(i, j),
                ));
            }
        }
    }
    raw.sort();
    let mut events: Vec<OrderingEvent> = Vec::new();
    for (lambda, kind) in raw {
        match events.last_mut() {
            Some(last) if last.lambda == lambda => last.causes.push(kind),
            _ => events.push(OrderingEvent {
                lambda,
                causes: vec![kind],
            }),
        }
    }
    events
}

/// Items with non-negative profit at `lambda`, sorted by decreasing
/// profit/weight ratio (ties by index), with their profits scaled by the
/// positive denominator of `lambda`.
fn greedy_order(inst: &Instance, lambda: &Rational) -> Vec<(usize, BigInt)> {
    let (num, den) = (lambda.numer(), lambda.denom());
    let mut profitable: Vec<(usize, BigInt)> = inst
        .items()
        .iter()
        .enumerate()
        .map(|(i, item)| (i, BigInt::from(item.intercept) * den + BigInt::from(item.slope) * num))
        .filter(|(_, scaled)| !scaled.is_negative())
        .collect();
    let items = inst.items();
    profitable.sort_by(|(i, pi), (j, pj)| {
        let lhs = pi * BigInt::from(items[*j].weight);
        let rhs = pj * BigInt::from(items[*i].weight);
        rhs.cmp(&lhs).then_with(|| i.cmp(j))
    });
    profitable
}

/// The greedy prefix: profitable items in ratio order, stopping before the
/// first item that no longer fits.
pub fn greedy_prefix(inst: &Instance, lambda: &Rational) -> KnapsackSolution {
    let mut room = inst.capacity();
    let mut chosen = Vec::new();
    for (i, _) in greedy_order(inst, lambda) {
        let w = inst.items()[i].weight;
        if w > room {
            break;
        }
        room -= w;
        chosen.push(i);
    }
    inst.solution(chosen).expect("prefix fits by construction")
}

/// The classic ½-approximation at a fixed parameter: the better of the
/// greedy prefix and the single most profitable item.
pub fn greedy_half_fixed(inst: &Instance, lambda: &Rational) -> KnapsackSolution {
    let prefix = greedy_prefix(inst, lambda);
    let best_single = inst
        .items()
        .iter()
        .enumerate()
        .map(|(i, item)| (i, item.profit_at(lambda)))
        .filter(|(_, p)| !p.is_negative())
        .max_by(|(i, p), (j, q)| p.cmp(q).then_with(|| j.cmp(i)));
    match best_single {
        Some((i, p)) if p > prefix.profit_at(lambda) => inst.solution([i]).expect("items fit alone"),
        _ => prefix,
    }
}

/// One interior point per elementary interval between consecutive events,
/// including the two unbounded ends.
pub fn elementary_points(events: &[OrderingEvent]) -> Vec<Rational> {
    let (Some(first), Some(last)) = (events.first(), events.last()) else {
        return vec![int(0)];
    };
    let mut points = Vec::with_capacity(events.len() + 1);
    points.push(&first.lambda - int(1));
    points.extend(events.windows(2).map(|w| midpoint(&w[0].lambda, &w[1].lambda)));
    points.push(&last.lambda + int(1));
    points
}

/// A candidate profit line together with a feasible solution realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub line: AffineFunction,
    pub witness: KnapsackSolution,
}

/// Greedy prefix lines of every elementary interval, every item line, and
/// the zero line, with duplicates removed (first occurrence kept).
pub fn candidate_lines(inst: &Instance) -> Vec<Candidate> {
    let events = ordering_events(inst);
    let points = elementary_points(&events);
    let prefixes: Vec<KnapsackSolution> = points.par_iter().map(|l| greedy_prefix(inst, l)).collect();
    let singles = (0..inst.len()).map(|i| inst.solution([i]).expect("items fit alone"));
    let all = prefixes
        .into_iter()
        .chain(singles)
        .chain(std::iter::once(KnapsackSolution::empty()));
    let mut seen = HashSet::new();
    all.filter(|s| seen.insert(s.profit_line().clone()))
        .map(|witness| Candidate {
            line: witness.profit_line().clone(),
            witness,
        })
        .collect()
}

/// φ: the convex, continuous envelope of the candidate lines with
/// ½·p* ≤ φ ≤ p*, and one witness solution per piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfApproxFunction {
    phi: PiecewiseLinearFunction,
    witnesses: Vec<KnapsackSolution>,
}

impl HalfApproxFunction {
    pub fn function(&self) -> &PiecewiseLinearFunction {
        &self.phi
    }

    pub fn witnesses(&self) -> &[KnapsackSolution] {
        &self.witnesses
    }

    pub fn eval(&self, lambda: &Rational) -> Rational {
        self.phi.eval(lambda)
    }

    /// The closed set where φ vanishes, as (lower, upper) with `None` for an
    /// infinite end; `None` overall when φ is positive everywhere.
    pub fn zero_region(&self) -> Option<(Option<Rational>, Option<Rational>)> {
        let pieces = self.phi.pieces();
        if let Some(j) = pieces.iter().position(AffineFunction::is_zero) {
            let (lo, hi) = self.phi.piece_bounds(j);
            return Some((lo.cloned(), hi.cloned()));
        }
        // φ may touch zero at a single breakpoint where no zero piece survived.
        self.phi
            .breakpoints()
            .iter()
            .find(|bp| self.phi.eval(bp).is_zero())
            .map(|bp| (Some(bp.clone()), Some(bp.clone())))
    }
}

pub fn compute_phi(inst: &Instance) -> HalfApproxFunction {
    let candidates = candidate_lines(inst);
    let lines: Vec<AffineFunction> = candidates.iter().map(|c| c.line.clone()).collect();
    let (phi, sources) = upper_envelope(&lines)
        .expect("zero line is always a candidate")
        .into_parts();
    let witnesses = sources.into_iter().map(|s| candidates[s].witness.clone()).collect();
    HalfApproxFunction { phi, witnesses }
}
