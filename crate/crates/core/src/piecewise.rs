//! Intervals over the parameter line and continuous piecewise-linear
//! functions.

use std::fmt;

use thiserror::Error;

use crate::affine::AffineFunction;
use crate::rational::{int, midpoint, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalKind {
    SinglePoint,
    Open,
    UnboundedLeft,
    UnboundedRight,
    WholeLine,
}

impl IntervalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntervalKind::SinglePoint => "single_point",
            IntervalKind::Open => "open",
            IntervalKind::UnboundedLeft => "unbounded_left",
            IntervalKind::UnboundedRight => "unbounded_right",
            IntervalKind::WholeLine => "whole_line",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Some(match text {
            "single_point" => IntervalKind::SinglePoint,
            "open" => IntervalKind::Open,
            "unbounded_left" => IntervalKind::UnboundedLeft,
            "unbounded_right" => IntervalKind::UnboundedRight,
            "whole_line" => IntervalKind::WholeLine,
            _ => return None,
        })
    }
}

/// A schedule interval. Everything except [`Interval::SinglePoint`] excludes
/// its finite endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Interval {
    /// `[at, at]`
    SinglePoint(Rational),
    /// `(lower, upper)` with `lower < upper`
    Open(Rational, Rational),
    /// `(−∞, upper)`
    UnboundedLeft(Rational),
    /// `(lower, +∞)`
    UnboundedRight(Rational),
    /// `(−∞, +∞)`
    WholeLine,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("open interval needs lower < upper, got ({0}, {1})")]
    EmptyOpen(String, String),
    #[error("interval kind `{kind}` does not match its bounds")]
    KindMismatch { kind: &'static str },
}

impl Interval {
    /// Builds an interval from optional finite bounds and its kind, checking
    /// that they agree.
    pub fn from_parts(
        lower: Option<Rational>,
        upper: Option<Rational>,
        kind: IntervalKind,
    ) -> Result<Self, IntervalError> {
        let mismatch = || IntervalError::KindMismatch { kind: kind.as_str() };
        match (kind, lower, upper) {
            (IntervalKind::SinglePoint, Some(lo), Some(hi)) if lo == hi => Ok(Interval::SinglePoint(lo)),
            (IntervalKind::Open, Some(lo), Some(hi)) => {
                if lo < hi {
                    Ok(Interval::Open(lo, hi))
                } else {
                    Err(IntervalError::EmptyOpen(lo.to_string(), hi.to_string()))
                }
            }
            (IntervalKind::UnboundedLeft, None, Some(hi)) => Ok(Interval::UnboundedLeft(hi)),
            (IntervalKind::UnboundedRight, Some(lo), None) => Ok(Interval::UnboundedRight(lo)),
            (IntervalKind::WholeLine, None, None) => Ok(Interval::WholeLine),
            _ => Err(mismatch()),
        }
    }

    pub fn kind(&self) -> IntervalKind {
        match self {
            Interval::SinglePoint(_) => IntervalKind::SinglePoint,
            Interval::Open(..) => IntervalKind::Open,
            Interval::UnboundedLeft(_) => IntervalKind::UnboundedLeft,
            Interval::UnboundedRight(_) => IntervalKind::UnboundedRight,
            Interval::WholeLine => IntervalKind::WholeLine,
        }
    }

    /// Finite lower bound, `None` for −∞.
    pub fn lower(&self) -> Option<&Rational> {
        match self {
            Interval::SinglePoint(at) => Some(at),
            Interval::Open(lo, _) | Interval::UnboundedRight(lo) => Some(lo),
            Interval::UnboundedLeft(_) | Interval::WholeLine => None,
        }
    }

    /// Finite upper bound, `None` for +∞.
    pub fn upper(&self) -> Option<&Rational> {
        match self {
            Interval::SinglePoint(at) => Some(at),
            Interval::Open(_, hi) | Interval::UnboundedLeft(hi) => Some(hi),
            Interval::UnboundedRight(_) | Interval::WholeLine => None,
        }
    }

    pub fn contains(&self, lambda: &Rational) -> bool {
        match self {
            Interval::SinglePoint(at) => lambda == at,
            Interval::Open(lo, hi) => lo < lambda && lambda < hi,
            Interval::UnboundedLeft(hi) => lambda < hi,
            Interval::UnboundedRight(lo) => lambda > lo,
            Interval::WholeLine => true,
        }
    }

    /// The point at which the interval's subproblem is evaluated: the point
    /// itself, the exact midpoint, or one unit beyond the finite end of an
    /// unbounded interval (0 for the whole line).
    pub fn representative(&self) -> Rational {
        match self {
            Interval::SinglePoint(at) => at.clone(),
            Interval::Open(lo, hi) => midpoint(lo, hi),
            Interval::UnboundedLeft(hi) => hi - int(1),
            Interval::UnboundedRight(lo) => lo + int(1),
            Interval::WholeLine => int(0),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::SinglePoint(at) => write!(f, "[{at}, {at}]"),
            Interval::Open(lo, hi) => write!(f, "({lo}, {hi})"),
            Interval::UnboundedLeft(hi) => write!(f, "(-inf, {hi})"),
            Interval::UnboundedRight(lo) => write!(f, "({lo}, +inf)"),
            Interval::WholeLine => write!(f, "(-inf, +inf)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PiecewiseError {
    #[error("{pieces} pieces need {expected} breakpoints, got {breakpoints}")]
    CountMismatch {
        pieces: usize,
        breakpoints: usize,
        expected: usize,
    },
    #[error("breakpoints must strictly increase (index {index})")]
    UnsortedBreakpoints { index: usize },
    #[error("pieces {index} and {next} disagree at breakpoint {at}", next = index + 1)]
    Discontinuous { index: usize, at: Rational },
    #[error("slopes of pieces {index} and {next} do not strictly increase", next = index + 1)]
    NotConvex { index: usize },
}

/// A continuous piecewise-linear function on all of ℝ.
///
/// Piece `j` covers `[breakpoints[j-1], breakpoints[j]]`, with the first and
/// last piece extending to infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinearFunction {
    breakpoints: Vec<Rational>,
    pieces: Vec<AffineFunction>,
    convex: bool,
}

impl PiecewiseLinearFunction {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<AffineFunction>) -> Result<Self, PiecewiseError> {
        let f = Self {
            breakpoints,
            pieces,
            convex: false,
        };
        f.check_structure()?;
        f.check_continuity()?;
        Ok(f)
    }

    /// Like [`new`](Self::new), additionally requiring strictly increasing
    /// slopes; the result is flagged convex.
    pub fn new_convex(breakpoints: Vec<Rational>, pieces: Vec<AffineFunction>) -> Result<Self, PiecewiseError> {
        let mut f = Self::new(breakpoints, pieces)?;
        f.check_slopes_increase()?;
        f.convex = true;
        Ok(f)
    }

    pub fn from_line(line: AffineFunction) -> Self {
        Self {
            breakpoints: Vec::new(),
            pieces: vec![line],
            convex: true,
        }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[AffineFunction] {
        &self.pieces
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Index of a piece containing `lambda`. At a breakpoint the left piece
    /// is returned; by continuity both agree there.
    pub fn piece_index(&self, lambda: &Rational) -> usize {
        self.breakpoints.partition_point(|b| b < lambda)
    }

    pub fn piece_at(&self, lambda: &Rational) -> &AffineFunction {
        &self.pieces[self.piece_index(lambda)]
    }

    pub fn eval(&self, lambda: &Rational) -> Rational {
        self.piece_at(lambda).eval(lambda)
    }

    /// Closed domain of piece `index` as (lower, upper), `None` for infinite.
    pub fn piece_bounds(&self, index: usize) -> (Option<&Rational>, Option<&Rational>) {
        let lower = index.checked_sub(1).map(|i| &self.breakpoints[i]);
        (lower, self.breakpoints.get(index))
    }

    fn check_structure(&self) -> Result<(), PiecewiseError> {
        if self.pieces.len() != self.breakpoints.len() + 1 {
            return Err(PiecewiseError::CountMismatch {
                pieces: self.pieces.len(),
                breakpoints: self.breakpoints.len(),
                expected: self.pieces.len().saturating_sub(1),
            });
        }
        for (index, pair) in self.breakpoints.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(PiecewiseError::UnsortedBreakpoints { index: index + 1 });
            }
        }
        Ok(())
    }

    /// Adjacent pieces agree at every breakpoint.
    pub fn check_continuity(&self) -> Result<(), PiecewiseError> {
        for (index, at) in self.breakpoints.iter().enumerate() {
            if self.pieces[index].eval(at) != self.pieces[index + 1].eval(at) {
                return Err(PiecewiseError::Discontinuous { index, at: at.clone() });
            }
        }
        Ok(())
    }

    pub fn check_slopes_increase(&self) -> Result<(), PiecewiseError> {
        for (index, pair) in self.pieces.windows(2).enumerate() {
            if pair[0].slope >= pair[1].slope {
                return Err(PiecewiseError::NotConvex { index });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn max_one_lambda() -> PiecewiseLinearFunction {
        PiecewiseLinearFunction::new_convex(
            vec![int(1)],
            vec![AffineFunction::from_ints(1, 0), AffineFunction::from_ints(0, 1)],
        )
        .unwrap()
    }

    #[test]
    fn evaluates_by_piece() {
        let f = max_one_lambda();
        assert_eq!(f.eval(&int(0)), int(1));
        assert_eq!(f.eval(&int(1)), int(1));
        assert_eq!(f.eval(&int(5)), int(5));
        assert_eq!(f.piece_index(&int(1)), 0);
        assert_eq!(f.piece_index(&ratio(3, 2)), 1);
        assert_eq!(f.piece_bounds(0), (None, Some(&int(1))));
        assert_eq!(f.piece_bounds(1), (Some(&int(1)), None));
    }

    #[test]
    fn rejects_malformed_functions() {
        let line = AffineFunction::from_ints;
        assert!(matches!(
            PiecewiseLinearFunction::new(vec![int(0)], vec![line(0, 0)]),
            Err(PiecewiseError::CountMismatch { .. })
        ));
        assert!(matches!(
            PiecewiseLinearFunction::new(vec![int(0)], vec![line(0, 0), line(1, 1)]),
            Err(PiecewiseError::Discontinuous { index: 0, .. })
        ));
        assert!(matches!(
            PiecewiseLinearFunction::new(vec![int(1), int(1)], vec![line(1, 0), line(0, 1), line(0, 1)]),
            Err(PiecewiseError::UnsortedBreakpoints { index: 1 })
        ));
        assert!(matches!(
            PiecewiseLinearFunction::new_convex(vec![int(0)], vec![line(0, 1), line(0, -1)]),
            Err(PiecewiseError::NotConvex { index: 0 })
        ));
        assert!(PiecewiseLinearFunction::new(vec![int(0)], vec![line(0, 1), line(0, -1)]).is_ok());
    }

    #[test]
    fn interval_membership_and_representatives() {
        let point = Interval::SinglePoint(int(1));
        assert!(point.contains(&int(1)));
        assert_eq!(point.representative(), int(1));
        let open = Interval::Open(int(0), int(2));
        assert!(!open.contains(&int(0)) && open.contains(&int(1)) && !open.contains(&int(2)));
        assert_eq!(open.representative(), int(1));
        assert_eq!(Interval::UnboundedRight(int(3)).representative(), int(4));
        assert_eq!(Interval::UnboundedLeft(int(3)).representative(), int(2));
        assert_eq!(Interval::WholeLine.representative(), int(0));
        assert!(Interval::from_parts(Some(int(2)), Some(int(2)), IntervalKind::Open).is_err());
        assert!(Interval::from_parts(Some(int(1)), Some(int(2)), IntervalKind::SinglePoint).is_err());
        assert!(Interval::from_parts(None, Some(int(2)), IntervalKind::UnboundedRight).is_err());
        assert_eq!(
            Interval::from_parts(None, None, IntervalKind::WholeLine)
                .unwrap()
                .kind()
                .as_str(),
            "whole_line"
        );
    }

    proptest! {
        // Any maximum of lines, built by hand as a convex function, passes
        // the chord test on random triples.
        #[test]
        fn convex_functions_lie_below_chords(
            a in -20i64..20, b in -20i64..20, knot in -10i64..10,
            l1 in -50i64..50, gaps in (1i64..30, 1i64..30),
        ) {
            // |λ − knot| scaled and shifted: pieces (a − s·λ) and (a' + s·λ)
            let s = b.abs() + 1;
            let left = AffineFunction::from_ints(a + s * knot, -s);
            let right = AffineFunction::from_ints(a - s * knot, s);
            let f = PiecewiseLinearFunction::new_convex(vec![int(knot)], vec![left, right]).unwrap();
            prop_assert!(f.check_continuity().is_ok());
            let x1 = ratio(l1, 3);
            let x2 = &x1 + ratio(gaps.0, 7);
            let x3 = &x2 + ratio(gaps.1, 5);
            let t = (&x2 - &x1) / (&x3 - &x1);
            let chord = f.eval(&x1) * (int(1) - &t) + f.eval(&x3) * t;
            prop_assert!(f.eval(&x2) <= chord);
        }
    }
}
