//! Sampled curves for plotting: schedule profit, φ and p* on a λ grid.

use std::fmt::Write as _;

use thiserror::Error;

use crate::greedy::compute_phi;
use crate::model::Instance;
use crate::oracle::{brute_force_parametric, ORACLE_MAX_ITEMS};
use crate::parametric::SolutionSchedule;
use crate::rational::{format_significant, int, Rational};

pub const CSV_HEADER: &str = "lambda,schedule_profit,phi,p_star";

/// Significant digits in CSV cells.
pub const CSV_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("lambda_min must be below lambda_max, got {min} and {max}")]
    EmptyRange { min: String, max: String },
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleRow {
    pub lambda: Rational,
    pub schedule_profit: Rational,
    pub phi: Rational,
    /// Present only when the instance is small enough for the exact oracle.
    pub p_star: Option<Rational>,
}

/// `samples` evenly spaced points from `min` to `max`, both included.
pub fn sample_grid(min: &Rational, max: &Rational, samples: usize) -> Result<Vec<Rational>, ExportError> {
    if min >= max {
        return Err(ExportError::EmptyRange {
            min: min.to_string(),
            max: max.to_string(),
        });
    }
    if samples < 2 {
        return Err(ExportError::TooFewSamples(samples));
    }
    let step = (max - min) / int(samples as i64 - 1);
    Ok((0..samples).map(|k| min + &step * int(k as i64)).collect())
}

pub fn sample_curves(
    inst: &Instance,
    schedule: &SolutionSchedule,
    min: &Rational,
    max: &Rational,
    samples: usize,
) -> Result<Vec<SampleRow>, ExportError> {
    let grid = sample_grid(min, max, samples)?;
    let phi = compute_phi(inst);
    let pstar = if inst.len() <= ORACLE_MAX_ITEMS {
        brute_force_parametric(inst).ok()
    } else {
        None
    };
    Ok(grid
        .into_iter()
        .map(|lambda| SampleRow {
            schedule_profit: schedule.query(&lambda).1,
            phi: phi.eval(&lambda),
            p_star: pstar.as_ref().map(|p| p.eval(&lambda)),
            lambda,
        })
        .collect())
}

pub fn rows_to_csv(rows: &[SampleRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let p_star = row
            .p_star
            .as_ref()
            .map(|p| format_significant(p, CSV_DIGITS))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_significant(&row.lambda, CSV_DIGITS),
            format_significant(&row.schedule_profit, CSV_DIGITS),
            format_significant(&row.phi, CSV_DIGITS),
            p_star
        );
    }
    out
}
