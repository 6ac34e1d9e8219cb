//! Upper envelope of full lines.

use crate::affine::AffineFunction;
use crate::piecewise::PiecewiseLinearFunction;

/// Pointwise maximum of a line set, with the input line realizing each piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    function: PiecewiseLinearFunction,
    sources: Vec<usize>,
}

impl Envelope {
    pub fn function(&self) -> &PiecewiseLinearFunction {
        &self.function
    }

    /// For each piece, the index of the input line it came from. Among
    /// identical input lines the smallest index is reported.
    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn into_parts(self) -> (PiecewiseLinearFunction, Vec<usize>) {
        (self.function, self.sources)
    }
}

/// Computes the upper envelope of `lines` as a convex piecewise-linear
/// function over all of ℝ, or `None` for an empty set.
///
/// Lines are sorted by slope, only the highest line per slope is kept, and a
/// single stack pass drops every line that is never strictly on top.
/// `O(m log m)` comparisons.
pub fn upper_envelope(lines: &[AffineFunction]) -> Option<Envelope> {
    if lines.is_empty() {
        return None;
    }
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&i, &j| {
        lines[i]
            .slope
            .cmp(&lines[j].slope)
            .then_with(|| lines[j].intercept.cmp(&lines[i].intercept))
            .then_with(|| i.cmp(&j))
    });
    order.dedup_by(|later, earlier| lines[*later].slope == lines[*earlier].slope);

    let mut hull: Vec<usize> = Vec::with_capacity(order.len());
    for &candidate in &order {
        while hull.len() >= 2 {
            let first = &lines[hull[hull.len() - 2]];
            let middle = &lines[hull[hull.len() - 1]];
            let line = &lines[candidate];
            // Slopes strictly increase along the hull, so both meet points exist.
            let skip_middle =
                first.intersect(line).expect("distinct slopes") <= first.intersect(middle).expect("distinct slopes");
            if skip_middle {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(candidate);
    }

    let breakpoints = hull
        .windows(2)
        .map(|pair| lines[pair[0]].intersect(&lines[pair[1]]).expect("distinct slopes"))
        .collect();
    let pieces = hull.iter().map(|&i| lines[i].clone()).collect();
    let function = PiecewiseLinearFunction::new_convex(breakpoints, pieces)
        .expect("stack pass yields a continuous convex function");
    Some(Envelope {
        function,
        sources: hull,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio, Rational};
    use proptest::prelude::*;

    fn line(a: i64, b: i64) -> AffineFunction {
        AffineFunction::from_ints(a, b)
    }

    fn pointwise_max(lines: &[AffineFunction], lambda: &Rational) -> Rational {
        lines.iter().map(|l| l.eval(lambda)).max().unwrap()
    }

    #[test]
    fn single_line() {
        let env = upper_envelope(&[line(0, 0)]).unwrap();
        assert_eq!(env.function().pieces(), &[line(0, 0)]);
        assert!(env.function().breakpoints().is_empty());
    }

    #[test]
    fn empty_set_has_no_envelope() {
        assert!(upper_envelope(&[]).is_none());
    }

    #[test]
    fn absolute_value_with_cap() {
        let lines = [line(1, 0), line(0, 1), line(0, -1)];
        let env = upper_envelope(&lines).unwrap();
        assert_eq!(env.function().breakpoints(), &[int(-1), int(1)]);
        assert_eq!(env.function().pieces(), &[line(0, -1), line(1, 0), line(0, 1)]);
        assert_eq!(env.sources(), &[2, 0, 1]);
        // oracle: pointwise max at 100 samples including −1 and 1
        let mut samples: Vec<Rational> = (-50..50).map(|k| ratio(k, 10)).collect();
        samples.extend([int(-1), int(1)]);
        for lambda in &samples {
            assert_eq!(env.function().eval(lambda), pointwise_max(&lines, lambda));
        }
    }

    #[test]
    fn dominated_parallel_line_is_dropped() {
        let env = upper_envelope(&[line(0, 1), line(1, 1)]).unwrap();
        assert_eq!(env.function().pieces(), &[line(1, 1)]);
        assert_eq!(env.sources(), &[1]);
    }

    #[test]
    fn identical_lines_collapse() {
        let env = upper_envelope(&[line(3, 2), line(3, 2), line(3, 2)]).unwrap();
        assert_eq!(env.function().len(), 1);
        assert_eq!(env.sources(), &[0]);
    }

    #[test]
    fn concurrent_lines_merge_breakpoints() {
        // All three meet at λ = 0; the middle line only touches there.
        let env = upper_envelope(&[line(0, -1), line(0, 0), line(0, 1)]).unwrap();
        assert_eq!(env.function().breakpoints(), &[int(0)]);
        assert_eq!(env.function().pieces(), &[line(0, -1), line(0, 1)]);
    }

    fn arb_lines(max: usize) -> impl Strategy<Value = Vec<AffineFunction>> {
        prop::collection::vec((-40i64..40, -15i64..15), 1..max)
            .prop_map(|v| v.into_iter().map(|(a, b)| line(a, b)).collect())
    }

    proptest! {
        #[test]
        fn matches_pointwise_max(lines in arb_lines(60), probes in prop::collection::vec((-400i64..400, 1i64..13), 40)) {
            let env = upper_envelope(&lines).unwrap();
            let f = env.function();
            for (num, den) in probes {
                let lambda = ratio(num, den);
                prop_assert_eq!(f.eval(&lambda), pointwise_max(&lines, &lambda));
            }
            for bp in f.breakpoints() {
                prop_assert_eq!(f.eval(bp), pointwise_max(&lines, bp));
            }
        }

        #[test]
        fn output_is_strictly_convex_and_drawn_from_input(lines in arb_lines(60)) {
            let env = upper_envelope(&lines).unwrap();
            prop_assert!(env.function().is_convex());
            prop_assert!(env.function().check_slopes_increase().is_ok());
            prop_assert!(env.function().check_continuity().is_ok());
            for (piece, &src) in env.function().pieces().iter().zip(env.sources()) {
                prop_assert_eq!(piece, &lines[src]);
            }
        }

        #[test]
        fn idempotent(lines in arb_lines(60)) {
            let env = upper_envelope(&lines).unwrap();
            let again = upper_envelope(env.function().pieces()).unwrap();
            prop_assert_eq!(again.function(), env.function());
        }
    }
}
