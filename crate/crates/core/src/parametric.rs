//! End-to-end driver: φ, critical values, one subproblem per interval, and
//! the resulting solution schedule.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::affine::AffineFunction;
use crate::greedy::{compute_phi, HalfApproxFunction};
use crate::knapsack::{solve_scaled_subproblem, ExactDp, KnapsackSolver, LawlerFptas};
use crate::model::{Instance, KnapsackSolution};
use crate::oracle::{brute_force_parametric, OracleError};
use crate::piecewise::Interval;
use crate::rational::{int, Epsilon, Rational};
use crate::subdivision::{build_intervals, critical_lambdas, scaled_profits, SubdivisionError};

/// How each interval's integer subproblem is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InnerMode {
    /// Exact dynamic program on profits scaled with ε.
    Exact,
    /// Lawler's scheme with ε/2, on profits scaled with ε/2.
    Fptas,
}

impl InnerMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            InnerMode::Exact => "exact_inner",
            InnerMode::Fptas => "fptas_inner",
        }
    }
}

impl fmt::Display for InnerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InnerMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" | "exact_inner" => Ok(InnerMode::Exact),
            "fptas" | "fptas_inner" => Ok(InnerMode::Fptas),
            other => Err(format!("unknown mode `{other}`, expected exact_inner or fptas_inner")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("schedule has no intervals")]
    Empty,
    #[error("interval {index} breaks the alternating pattern: {detail}")]
    Pattern { index: usize, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub interval: Interval,
    pub solution: KnapsackSolution,
}

/// Counts and timings of a solver run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleMeta {
    pub mode: InnerMode,
    pub items: usize,
    pub phi_pieces: usize,
    pub criticals: usize,
    pub elapsed: Duration,
}

/// Alternating single-point/open intervals covering ℝ, each with one
/// feasible solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSchedule {
    epsilon: Epsilon,
    entries: Vec<ScheduleEntry>,
    criticals: Vec<Rational>,
    meta: Option<ScheduleMeta>,
}

impl SolutionSchedule {
    /// Checks that the intervals follow
    /// `(−∞,λ₁), [λ₁,λ₁], (λ₁,λ₂), …, (λ_k,+∞)` (or the whole line alone).
    pub fn new(epsilon: Epsilon, entries: Vec<ScheduleEntry>) -> Result<Self, ScheduleError> {
        let criticals = validate_pattern(&entries)?;
        Ok(Self {
            epsilon,
            entries,
            criticals,
            meta: None,
        })
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }

    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn criticals(&self) -> &[Rational] {
        &self.criticals
    }

    pub fn meta(&self) -> Option<&ScheduleMeta> {
        self.meta.as_ref()
    }

    /// Index of the unique interval containing `lambda`.
    pub fn locate(&self, lambda: &Rational) -> usize {
        let k = self.criticals.partition_point(|c| c < lambda);
        if self.criticals.get(k) == Some(lambda) {
            2 * k + 1
        } else {
            2 * k
        }
    }

    /// The solution in force at `lambda` and its exact profit there.
    pub fn query(&self, lambda: &Rational) -> (&KnapsackSolution, Rational) {
        let entry = &self.entries[self.locate(lambda)];
        (&entry.solution, entry.solution.profit_at(lambda))
    }
}

fn validate_pattern(entries: &[ScheduleEntry]) -> Result<Vec<Rational>, ScheduleError> {
    let bad = |index: usize, detail: String| ScheduleError::Pattern { index, detail };
    match entries {
        [] => Err(ScheduleError::Empty),
        [only] => match &only.interval {
            Interval::WholeLine => Ok(Vec::new()),
            other => Err(bad(0, format!("a lone interval must be the whole line, got {other}"))),
        },
        _ => {
            let mut criticals = Vec::with_capacity(entries.len() / 2);
            let last = entries.len() - 1;
            if !last.is_multiple_of(2) {
                return Err(bad(last, "expected an odd number of intervals".into()));
            }
            let mut previous: Option<&Rational> = None;
            for (index, entry) in entries.iter().enumerate() {
                let iv = &entry.interval;
                let ok = match (index, iv) {
                    (0, Interval::UnboundedLeft(_)) => true,
                    (i, Interval::UnboundedRight(lo)) if i == last => previous == Some(lo),
                    (i, Interval::SinglePoint(at)) if i % 2 == 1 => {
                        let joins = previous == Some(at);
                        criticals.push(at.clone());
                        joins
                    }
                    (i, Interval::Open(lo, _)) if i % 2 == 0 && i != 0 && i != last => previous == Some(lo),
                    _ => false,
                };
                if !ok {
                    return Err(bad(index, format!("unexpected interval {iv}")));
                }
                previous = iv.upper();
            }
            Ok(criticals)
        }
    }
}

/// The subproblem solver for `mode`, with the ε used for scaling.
fn inner_solver(mode: InnerMode, epsilon: Epsilon, n: usize) -> (Epsilon, Box<dyn KnapsackSolver>) {
    match mode {
        InnerMode::Exact => (
            epsilon,
            Box::new(ExactDp {
                profit_cap: Some(epsilon.scaled_profit_cap(n)),
            }),
        ),
        InnerMode::Fptas => {
            let half = epsilon.halved();
            (half, Box::new(LawlerFptas { epsilon: half }))
        }
    }
}

/// Computes a schedule whose every interval carries a solution with profit
/// at least `(1 − ε)·p*(λ)` throughout the interval.
pub fn solve_parametric(inst: &Instance, epsilon: Epsilon, mode: InnerMode) -> Result<SolutionSchedule, SolveError> {
    let started = Instant::now();
    let phi = compute_phi(inst);
    let (scale_eps, solver) = inner_solver(mode, epsilon, inst.len());
    let criticals = critical_lambdas(inst, &phi, scale_eps)?;
    let intervals = build_intervals(&criticals);
    let entries = intervals
        .into_par_iter()
        .map(|interval| {
            let solution = solve_interval(inst, &phi, scale_eps, solver.as_ref(), &interval.representative())?;
            Ok(ScheduleEntry { interval, solution })
        })
        .collect::<Result<Vec<_>, SubdivisionError>>()?;
    let mut schedule = SolutionSchedule::new(epsilon, entries).expect("intervals built in alternating order");
    schedule.meta = Some(ScheduleMeta {
        mode,
        items: inst.len(),
        phi_pieces: phi.function().len(),
        criticals: schedule.criticals.len(),
        elapsed: started.elapsed(),
    });
    Ok(schedule)
}

/// Solves the scaled subproblem at one representative point. Where φ
/// vanishes the empty solution is optimal.
fn solve_interval(
    inst: &Instance,
    phi: &HalfApproxFunction,
    epsilon: Epsilon,
    solver: &dyn KnapsackSolver,
    lambda: &Rational,
) -> Result<KnapsackSolution, SubdivisionError> {
    let phi_value = phi.eval(lambda);
    if phi_value.is_zero() {
        return Ok(KnapsackSolution::empty());
    }
    let scaled = scaled_profits(inst, &phi_value, epsilon, lambda)?;
    let weights: Vec<u64> = inst.items().iter().map(|i| i.weight).collect();
    let picked = solve_scaled_subproblem(&scaled, &weights, inst.capacity(), solver);
    Ok(inst.solution(picked).expect("subproblem solutions are feasible"))
}

/// A point where the schedule falls short of `(1 − ε)·p*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Where the shortfall was observed. For an endpoint of an open or
    /// unbounded interval this is the limit from inside `interval`.
    pub lambda: Rational,
    pub interval: usize,
    pub schedule_profit: Rational,
    pub optimum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub points_checked: usize,
    /// Smallest `schedule/p*` over checked points with `p* > 0`.
    pub worst_ratio: Option<Rational>,
    pub violations: Vec<Violation>,
    /// 1-based interval numbers whose solution does not fit the instance.
    pub infeasible_intervals: Vec<usize>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.infeasible_intervals.is_empty()
    }
}

/// Checks the schedule against the exact optimum from the brute-force
/// oracle at every p* breakpoint, every interval boundary and every
/// representative, plus the slopes of both unbounded ends.
///
/// On each interval the schedule is linear and `(1 − ε)·p*` is convex, so
/// their difference is concave and these checks cover every λ. Solutions
/// are re-priced from `inst`; where `p* = 0` the target is profit ≥ 0.
pub fn certify(
    schedule: &SolutionSchedule,
    inst: &Instance,
    epsilon: Epsilon,
) -> Result<CertificateReport, OracleError> {
    let optimum = brute_force_parametric(inst)?;
    let pstar = optimum.function();
    let keep = epsilon.complement();
    let mut report = CertificateReport {
        points_checked: 0,
        worst_ratio: None,
        violations: Vec::new(),
        infeasible_intervals: Vec::new(),
    };
    for (index, entry) in schedule.entries().iter().enumerate() {
        let Some(repriced) = inst.solution(entry.solution.selected().iter().copied()) else {
            report.infeasible_intervals.push(index + 1);
            continue;
        };
        let line = repriced.profit_line();
        let iv = &entry.interval;
        let mut points: Vec<Rational> = Vec::new();
        points.extend(iv.lower().cloned());
        points.extend(iv.upper().cloned());
        points.push(iv.representative());
        points.extend(
            pstar
                .breakpoints()
                .iter()
                .filter(|bp| iv.lower().is_none_or(|lo| lo < *bp) && iv.upper().is_none_or(|hi| *bp < hi))
                .cloned(),
        );
        // Unbounded ends: past every finite point both sides are linear.
        if iv.upper().is_none() {
            points.extend(tail_witness(
                line,
                pstar.pieces().last().expect("non-empty"),
                &keep,
                &points,
                true,
            ));
        }
        if iv.lower().is_none() {
            points.extend(tail_witness(
                line,
                pstar.pieces().first().expect("non-empty"),
                &keep,
                &points,
                false,
            ));
        }
        for lambda in points {
            let have = line.eval(&lambda);
            let best = pstar.eval(&lambda);
            report.points_checked += 1;
            if best.is_positive() {
                let ratio = &have / &best;
                if report.worst_ratio.as_ref().is_none_or(|w| ratio < *w) {
                    report.worst_ratio = Some(ratio);
                }
            }
            if have < &keep * &best || have.is_negative() {
                report.violations.push(Violation {
                    lambda,
                    interval: index + 1,
                    schedule_profit: have,
                    optimum: best,
                });
            }
        }
    }
    Ok(report)
}

/// A point beyond `anchors` (to the right when `right`) where
/// `line − keep·tail` is negative, if it eventually is.
fn tail_witness(
    line: &AffineFunction,
    tail: &AffineFunction,
    keep: &Rational,
    anchors: &[Rational],
    right: bool,
) -> Option<Rational> {
    let gap = AffineFunction::new(
        &line.intercept - keep * &tail.intercept,
        &line.slope - keep * &tail.slope,
    );
    let falls = if right {
        gap.slope.is_negative()
    } else {
        gap.slope.is_positive()
    };
    if !falls {
        return None;
    }
    let mut candidates: Vec<Rational> = anchors.to_vec();
    candidates.extend(gap.root());
    let step = if right { int(1) } else { int(-1) };
    let extreme = if right {
        candidates.into_iter().max()
    } else {
        candidates.into_iter().min()
    };
    Some(extreme.unwrap_or_else(|| int(0)) + step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Item;
    use crate::rational::ratio;

    fn inst(capacity: u64, items: &[(u64, i64, i64)]) -> Instance {
        Instance::new(capacity, items.iter().map(|&(w, a, b)| Item::new(w, a, b)).collect()).unwrap()
    }

    fn eps(num: u64, den: u64) -> Epsilon {
        Epsilon::new(num, den).unwrap()
    }

    #[test]
    fn single_constant_item() {
        let i = inst(1, &[(1, 2, 0)]);
        let s = solve_parametric(&i, eps(1, 2), InnerMode::Exact).unwrap();
        for e in s.entries() {
            assert_eq!(e.solution.item_numbers(), vec![1]);
            assert_eq!(e.solution.profit_line(), &AffineFunction::from_ints(2, 0));
        }
        assert!(certify(&s, &i, eps(1, 2)).unwrap().passed());
    }

    #[test]
    fn two_items_meet_guarantee() {
        let i = inst(1, &[(1, 2, 0), (1, 1, 1)]);
        for mode in [InnerMode::Exact, InnerMode::Fptas] {
            let s = solve_parametric(&i, eps(1, 4), mode).unwrap();
            for k in -40..40 {
                let lambda = ratio(k, 4);
                let (_, profit) = s.query(&lambda);
                let best = int(2).max(int(1) + &lambda);
                assert!(profit * int(4) >= best * int(3), "{mode} at {lambda}");
            }
            let (_, at_one) = s.query(&int(1));
            assert_eq!(at_one, int(2));
            let report = certify(&s, &i, eps(1, 4)).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn negative_profits_give_empty_schedule() {
        let i = inst(3, &[(1, -1, 0), (2, -3, 0)]);
        let s = solve_parametric(&i, eps(1, 3), InnerMode::Exact).unwrap();
        assert!(s.entries().iter().all(|e| e.solution.selected().is_empty()));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn query_respects_interval_kinds() {
        let i = inst(2, &[(1, 3, -1), (1, 0, 2), (2, 1, 1)]);
        let s = solve_parametric(&i, eps(1, 2), InnerMode::Exact).unwrap();
        assert!(s.criticals().len() >= 2);
        for (k, c) in s.criticals().iter().enumerate() {
            assert_eq!(s.locate(c), 2 * k + 1);
            assert!(s.entries()[s.locate(c)].interval.contains(c));
        }
        let far = Rational::from_integer(10i64.pow(6).into());
        assert_eq!(s.locate(&far), s.len() - 1);
        let mid = (&s.criticals()[0] + &s.criticals()[1]) / int(2);
        assert_eq!(s.locate(&mid), 2);
        for k in -30..30 {
            let lambda = ratio(k, 3);
            let (sol, profit) = s.query(&lambda);
            assert_eq!(profit, sol.profit_line().eval(&lambda));
        }
    }

    #[test]
    fn empty_everywhere_fails_certification() {
        let i = inst(2, &[(1, 2, 1), (1, 1, -1)]);
        let s = SolutionSchedule::new(
            eps(1, 2),
            vec![ScheduleEntry {
                interval: Interval::WholeLine,
                solution: KnapsackSolution::empty(),
            }],
        )
        .unwrap();
        let report = certify(&s, &i, eps(1, 2)).unwrap();
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .all(|v| v.schedule_profit.is_zero() && v.optimum.is_positive()));
    }

    #[test]
    fn tail_slopes_are_checked() {
        // p* grows like 2λ on the right; a schedule stuck with item 2 (λ)
        // only fails far out.
        let i = inst(2, &[(1, 0, 1), (1, 0, 1)]);
        let both = i.solution([0, 1]).unwrap();
        let one = i.solution([0]).unwrap();
        let s = SolutionSchedule::new(
            eps(1, 4),
            vec![
                ScheduleEntry {
                    interval: Interval::UnboundedLeft(int(0)),
                    solution: KnapsackSolution::empty(),
                },
                ScheduleEntry {
                    interval: Interval::SinglePoint(int(0)),
                    solution: both.clone(),
                },
                ScheduleEntry {
                    interval: Interval::UnboundedRight(int(0)),
                    solution: one,
                },
            ],
        )
        .unwrap();
        let report = certify(&s, &i, eps(1, 4)).unwrap();
        assert!(!report.passed());
        assert!(report.violations.iter().all(|v| v.interval == 3 && v.lambda > int(0)));
    }

    #[test]
    fn zero_optimum_accepts_empty() {
        let i = inst(1, &[(1, 0, 1)]);
        let s = solve_parametric(&i, eps(1, 2), InnerMode::Exact).unwrap();
        let (sol, _) = s.query(&int(-3));
        assert!(sol.selected().is_empty());
        assert!(certify(&s, &i, eps(1, 2)).unwrap().passed());
    }

    #[test]
    fn pattern_validation() {
        let e = |interval| ScheduleEntry {
            interval,
            solution: KnapsackSolution::empty(),
        };
        assert_eq!(SolutionSchedule::new(eps(1, 2), vec![]), Err(ScheduleError::Empty));
        assert!(SolutionSchedule::new(eps(1, 2), vec![e(Interval::UnboundedLeft(int(0)))]).is_err());
        assert!(SolutionSchedule::new(
            eps(1, 2),
            vec![
                e(Interval::UnboundedLeft(int(0))),
                e(Interval::SinglePoint(int(1))),
                e(Interval::UnboundedRight(int(1)))
            ]
        )
        .is_err());
        assert!(SolutionSchedule::new(
            eps(1, 2),
            vec![
                e(Interval::UnboundedLeft(int(0))),
                e(Interval::SinglePoint(int(0))),
                e(Interval::Open(int(0), int(1))),
                e(Interval::SinglePoint(int(1))),
                e(Interval::UnboundedRight(int(1))),
            ]
        )
        .is_ok());
        assert!(SolutionSchedule::new(
            eps(1, 2),
            vec![
                e(Interval::UnboundedLeft(int(0))),
                e(Interval::SinglePoint(int(0))),
                e(Interval::Open(int(0), int(1)))
            ]
        )
        .is_err());
    }

    #[test]
    fn mode_names() {
        assert_eq!("exact_inner".parse::<InnerMode>().unwrap(), InnerMode::Exact);
        assert_eq!("fptas".parse::<InnerMode>().unwrap(), InnerMode::Fptas);
        assert!("greedy".parse::<InnerMode>().is_err());
    }
}
