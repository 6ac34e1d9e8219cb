//! Interval-count sweep over seeded instances.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::generator::{generate, GeneratorConfig};
use crate::parametric::{solve_parametric, InnerMode, SolveError};
use crate::rational::Epsilon;

pub const BENCH_SIZES: [usize; 4] = [10, 20, 50, 100];
pub const BENCH_EPSILONS: [(u64, u64); 3] = [(1, 2), (1, 4), (1, 10)];

/// Constant `C` of the reference bound `C·n²·den/num` on the interval count.
pub const INTERVAL_BOUND_FACTOR: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub epsilons: Vec<Epsilon>,
    pub seeds: Vec<u64>,
    pub mode: InnerMode,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: BENCH_SIZES.to_vec(),
            epsilons: BENCH_EPSILONS
                .iter()
                .map(|&(n, d)| Epsilon::new(n, d).expect("valid grid epsilon"))
                .collect(),
            seeds: vec![1, 2, 3],
            mode: InnerMode::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub n: usize,
    pub epsilon: Epsilon,
    pub seed: u64,
    pub intervals: usize,
    pub bound: u64,
    pub wall: Duration,
}

impl BenchRow {
    pub fn within_bound(&self) -> bool {
        self.intervals as u64 <= self.bound
    }
}

pub fn interval_bound(n: usize, epsilon: Epsilon) -> u64 {
    let n = n as u64;
    INTERVAL_BOUND_FACTOR * n * n * epsilon.den() / epsilon.num()
}

/// Runs every grid point, calling `progress` after each solve.
pub fn run_bench(config: &BenchConfig, mut progress: impl FnMut(&BenchRow)) -> Result<Vec<BenchRow>, SolveError> {
    let mut rows = Vec::new();
    for &epsilon in &config.epsilons {
        for &n in &config.sizes {
            for &seed in &config.seeds {
                let inst = generate(&GeneratorConfig::new(n, seed)).expect("bench sizes are positive");
                let started = Instant::now();
                let schedule = solve_parametric(&inst, epsilon, config.mode)?;
                let row = BenchRow {
                    n,
                    epsilon,
                    seed,
                    intervals: schedule.len(),
                    bound: interval_bound(n, epsilon),
                    wall: started.elapsed(),
                };
                progress(&row);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

pub const BENCH_CSV_HEADER: &str = "n,eps,seed,intervals,bound,wall_ms";

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.3}",
            r.n,
            r.epsilon,
            r.seed,
            r.intervals,
            r.bound,
            r.wall.as_secs_f64() * 1000.0
        );
    }
    out
}

/// Mean over seeds of `intervals(to_n) / intervals(from_n)` at one ε.
#[derive(Debug, Clone, PartialEq)]
pub struct Growth {
    pub epsilon: Epsilon,
    pub from_n: usize,
    pub to_n: usize,
    pub mean_ratio: f64,
    pub seeds: usize,
}

/// Growth factors for every pair of swept sizes where one is twice the other.
pub fn doubling_growth(rows: &[BenchRow]) -> Vec<Growth> {
    let mut counts: BTreeMap<((u64, u64), usize, u64), usize> = BTreeMap::new();
    let mut sizes: Vec<usize> = Vec::new();
    let mut epsilons: Vec<Epsilon> = Vec::new();
    for r in rows {
        counts.insert(((r.epsilon.num(), r.epsilon.den()), r.n, r.seed), r.intervals);
        if !sizes.contains(&r.n) {
            sizes.push(r.n);
        }
        if !epsilons.contains(&r.epsilon) {
            epsilons.push(r.epsilon);
        }
    }
    sizes.sort_unstable();
    let mut out = Vec::new();
    for &epsilon in &epsilons {
        let key = (epsilon.num(), epsilon.den());
        for &from_n in &sizes {
            let to_n = 2 * from_n;
            if !sizes.contains(&to_n) {
                continue;
            }
            let ratios: Vec<f64> = counts
                .range((key, from_n, 0)..=(key, from_n, u64::MAX))
                .filter_map(|(&(_, _, seed), &small)| {
                    counts.get(&(key, to_n, seed)).map(|&large| large as f64 / small as f64)
                })
                .collect();
            if ratios.is_empty() {
                continue;
            }
            out.push(Growth {
                epsilon,
                from_n,
                to_n,
                mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
                seeds: ratios.len(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, seed: u64, intervals: usize) -> BenchRow {
        let epsilon = Epsilon::new(1, 2).unwrap();
        BenchRow {
            n,
            epsilon,
            seed,
            intervals,
            bound: interval_bound(n, epsilon),
            wall: Duration::from_millis(5),
        }
    }

    #[test]
    fn bound_formula() {
        assert_eq!(interval_bound(10, Epsilon::new(1, 4).unwrap()), 6400);
        assert_eq!(interval_bound(3, Epsilon::new(2, 3).unwrap()), 216);
    }

    #[test]
    fn growth_pairs_seeds() {
        let rows = vec![
            row(10, 1, 10),
            row(10, 2, 20),
            row(20, 1, 30),
            row(20, 2, 20),
            row(50, 1, 7),
        ];
        let g = doubling_growth(&rows);
        assert_eq!(g.len(), 1);
        assert_eq!((g[0].from_n, g[0].to_n, g[0].seeds), (10, 20, 2));
        assert!((g[0].mean_ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_sweep() {
        let config = BenchConfig {
            sizes: vec![3, 6],
            epsilons: vec![Epsilon::new(1, 2).unwrap()],
            seeds: vec![1, 2],
            mode: InnerMode::Fptas,
        };
        let mut seen = 0;
        let rows = run_bench(&config, |_| seen += 1).unwrap();
        assert_eq!((rows.len(), seen), (4, 4));
        assert!(rows.iter().all(BenchRow::within_bound));
        let csv = bench_csv(&rows);
        assert_eq!(csv.lines().next(), Some(BENCH_CSV_HEADER));
        assert!(csv.lines().nth(1).unwrap().starts_with("3,1/2,1,"));
        assert_eq!(doubling_growth(&rows).len(), 1);
    }
}
