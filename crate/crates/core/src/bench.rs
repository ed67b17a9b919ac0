//! Seeded benchmark sweep: solve each instance, solve it exactly, compare.

use std::io::Write;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constraints::clustering_feasible;
use crate::gen::{generate, ConstraintKind, GenParams, Geometry};
use crate::instance::Instance;
use crate::oracle::exact_msr_limited;
use crate::search::{solve, SolveOptions};

/// Slack for floating-point noise in ratio checks.
pub const RATIO_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ExactFairness,
    ExactBalance,
    RatioBalance,
    LuFairness,
    OneOne,
    LowerBound,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::ExactFairness,
        Suite::ExactBalance,
        Suite::RatioBalance,
        Suite::LuFairness,
        Suite::OneOne,
        Suite::LowerBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ExactFairness => "exact-fairness",
            Suite::ExactBalance => "exact-balance",
            Suite::RatioBalance => "ratio-balance",
            Suite::LuFairness => "lu-fairness",
            Suite::OneOne => "one-one",
            Suite::LowerBound => "lower-bound",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Guaranteed approximation factor.
    pub fn bound(self, k: usize, eps: f64) -> f64 {
        match self {
            Suite::OneOne | Suite::LowerBound => 3.0 * (1.0 + eps),
            _ => 6.0 - 3.0 / k as f64 + eps,
        }
    }

    fn index(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") as u64
    }
}

/// Color ratios used for the multi-color suites.
const MULTI_COLOR: [&[u64]; 5] = [&[1, 1, 1], &[2, 1, 1], &[2, 1], &[3, 1], &[1, 1, 1, 1]];

fn sizes_for(ratio: &[u64]) -> Vec<usize> {
    let parts: u64 = ratio.iter().sum();
    (2..=8).filter(|&n| (n as u64).is_multiple_of(parts)).collect()
}

/// The `id`-th instance of a suite under `seed`.
pub fn suite_instance(suite: Suite, seed: u64, id: usize, eps: f64) -> Instance {
    let mixed = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(suite.index() << 32)
        .wrapping_add(id as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    let geometry = if rng.gen_bool(0.5) { Geometry::Square } else { Geometry::Graph };

    let (ratio, constraint): (Vec<u64>, ConstraintKind) = match suite {
        Suite::ExactFairness => (pick(&mut rng, &MULTI_COLOR).to_vec(), ConstraintKind::ExactFairness),
        Suite::LuFairness => (pick(&mut rng, &MULTI_COLOR).to_vec(), ConstraintKind::LuFairness),
        Suite::ExactBalance => (pick(&mut rng, &[&[1u64, 1][..], &[1, 1, 1]]).to_vec(), ConstraintKind::ExactBalance),
        Suite::RatioBalance => (pick(&mut rng, &[&[1u64, 1][..], &[2, 1], &[3, 1]]).to_vec(), ConstraintKind::RatioBalance),
        Suite::OneOne => (vec![1, 1], ConstraintKind::ExactFairness),
        Suite::LowerBound => (vec![1], ConstraintKind::LowerBound),
    };
    let sizes = match suite {
        Suite::OneOne => vec![4, 6, 8],
        Suite::LowerBound => (4..=8).collect(),
        _ => sizes_for(&ratio),
    };
    let n = *sizes.choose(&mut rng).expect("every ratio fits some size");
    let k = *[2usize, 3].into_iter().filter(|&k| k <= n).collect::<Vec<_>>().choose(&mut rng).expect("n >= 2");
    let params = GenParams {
        n,
        k,
        colors: ratio.len(),
        ratio: Some(ratio),
        constraint,
        geometry,
        ell: Some(2),
        b: None,
        epsilon: eps,
    };
    generate(&params, rng.gen()).expect("suite parameters are consistent")
}

fn pick<'a, T: ?Sized>(rng: &mut ChaCha8Rng, options: &[&'a T]) -> &'a T {
    options[rng.gen_range(0..options.len())]
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub suites: Vec<Suite>,
    pub instances: usize,
    pub seed: u64,
    pub eps: f64,
    pub opts: SolveOptions,
    pub max_exact_n: usize,
    /// Record wall-clock times; otherwise `elapsed_ms` is 0 so output is reproducible.
    pub timing: bool,
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            suites: Suite::ALL.to_vec(),
            instances: 100,
            seed: 0,
            eps: 0.5,
            opts: SolveOptions::default(),
            max_exact_n: crate::oracle::MAX_EXACT_N,
            timing: false,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance_id: String,
    pub n: usize,
    pub k: usize,
    pub constraint: String,
    pub eps: f64,
    pub opt: f64,
    pub cost: f64,
    pub ratio: f64,
    pub bound: f64,
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub feasible: bool,
}

impl BenchRow {
    pub fn violates(&self) -> bool {
        !self.feasible || self.cost > self.bound * self.opt + RATIO_TOLERANCE
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteSummary {
    pub name: &'static str,
    pub instances: usize,
    pub skipped: usize,
    pub violations: usize,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub suites: Vec<SuiteSummary>,
}

impl BenchReport {
    pub fn violations(&self) -> usize {
        self.suites.iter().map(|s| s.violations).sum()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for suite in &self.suites {
            s.push_str(&format!(
                "{:<15} instances={:<4} skipped={:<3} violations={:<3} max_ratio={:.4}\n",
                suite.name, suite.instances, suite.skipped, suite.violations, suite.max_ratio
            ));
        }
        s
    }
}

/// Solves one instance both ways. `None` when the exact solver refuses it.
pub fn bench_instance(
    inst: &Instance,
    suite: Suite,
    id: String,
    opts: &SolveOptions,
    max_exact_n: usize,
    timing: bool,
) -> Option<BenchRow> {
    let exact = exact_msr_limited(inst, max_exact_n).ok()?;
    let start = Instant::now();
    let solved = solve(inst, opts);
    let elapsed_ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
    let (cost, feasible) = match &solved {
        Ok(rep) => (rep.clustering.cost(), clustering_feasible(inst.constraint(), inst, &rep.clustering)),
        Err(_) => (f64::INFINITY, false),
    };
    let ratio = if exact.opt_cost > 0.0 {
        cost / exact.opt_cost
    } else if cost == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    Some(BenchRow {
        instance_id: id,
        n: inst.n(),
        k: inst.k(),
        constraint: inst.constraint().kind_name().to_string(),
        eps: inst.epsilon(),
        opt: exact.opt_cost,
        cost,
        ratio,
        bound: suite.bound(inst.k(), inst.epsilon()),
        elapsed_ms,
        feasible,
    })
}

/// Runs every configured suite; rows come back in suite then instance order.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, rayon::ThreadPoolBuildError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads.unwrap_or(0)).build()?;
    let mut report = BenchReport::default();
    for &suite in &cfg.suites {
        let rows: Vec<Option<BenchRow>> = pool.install(|| {
            (0..cfg.instances)
                .into_par_iter()
                .map(|id| {
                    let inst = suite_instance(suite, cfg.seed, id, cfg.eps);
                    let name = format!("{}-{id:03}", suite.name());
                    bench_instance(&inst, suite, name, &cfg.opts, cfg.max_exact_n, cfg.timing)
                })
                .collect()
        });
        let mut summary = SuiteSummary { name: suite.name(), instances: rows.len(), ..Default::default() };
        for row in rows {
            match row {
                Some(row) => {
                    summary.violations += row.violates() as usize;
                    summary.max_ratio = summary.max_ratio.max(row.ratio);
                    report.rows.push(row);
                }
                None => summary.skipped += 1,
            }
        }
        report.suites.push(summary);
    }
    Ok(report)
}

/// Worker cap from `FAIRMSR_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("FAIRMSR_THREADS").ok()?.trim().parse().ok().filter(|&t| t > 0)
}
