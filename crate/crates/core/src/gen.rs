//! Seeded random instance generation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::{ConstraintSpec, Instance, InstanceError, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Geometry {
    /// Points uniform in `[0, 100)²`, rounded to two decimals.
    #[default]
    Square,
    /// Shortest-path metric of a random connected graph with integer weights.
    Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    None,
    ExactFairness,
    RatioBalance,
    ExactBalance,
    LuFairness,
    LowerBound,
}

impl ConstraintKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "none" => ConstraintKind::None,
            "exact_fairness" => ConstraintKind::ExactFairness,
            "ratio_balance" => ConstraintKind::RatioBalance,
            "exact_balance" => ConstraintKind::ExactBalance,
            "lu_fairness" => ConstraintKind::LuFairness,
            "lower_bound" => ConstraintKind::LowerBound,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub k: usize,
    pub colors: usize,
    /// Relative color sizes; all ones when absent.
    pub ratio: Option<Vec<u64>>,
    pub constraint: ConstraintKind,
    pub geometry: Geometry,
    /// Lower bound for `lower_bound`; 2 when absent.
    pub ell: Option<usize>,
    /// Balance threshold for `ratio_balance`; the global balance when absent.
    pub b: Option<Rational>,
    pub epsilon: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 8,
            k: 2,
            colors: 2,
            ratio: None,
            constraint: ConstraintKind::None,
            geometry: Geometry::Square,
            ell: None,
            b: None,
            epsilon: 0.5,
        }
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("need at least one point and one color")]
    Empty,
    #[error("ratio has {got} parts but there are {colors} colors")]
    RatioLength { got: usize, colors: usize },
    #[error("ratio parts must be positive")]
    ZeroRatio,
    #[error("{n} points cannot be split in ratio {ratio:?}")]
    Indivisible { n: usize, ratio: Vec<u64> },
    #[error("{0} needs exactly two colors")]
    TwoColors(&'static str),
    #[error("exact_balance needs equal color sizes")]
    Unbalanced,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Parses `"2:1:1"` into `[2, 1, 1]`.
pub fn parse_ratio(s: &str) -> Option<Vec<u64>> {
    s.split(':').map(|p| p.trim().parse().ok()).collect()
}

/// Builds one instance; identical `(params, seed)` give identical instances.
pub fn generate(params: &GenParams, seed: u64) -> Result<Instance, GenError> {
    let n = params.n;
    if n == 0 || params.colors == 0 {
        return Err(GenError::Empty);
    }
    let ratio = params.ratio.clone().unwrap_or_else(|| vec![1; params.colors]);
    if ratio.len() != params.colors {
        return Err(GenError::RatioLength { got: ratio.len(), colors: params.colors });
    }
    if ratio.contains(&0) {
        return Err(GenError::ZeroRatio);
    }
    let parts: u64 = ratio.iter().sum();
    if !(n as u64).is_multiple_of(parts) {
        return Err(GenError::Indivisible { n, ratio });
    }
    let unit = n as u64 / parts;
    let counts: Vec<u64> = ratio.iter().map(|r| r * unit).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut colors: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(c, &m)| std::iter::repeat_n(c, m as usize))
        .collect();
    colors.shuffle(&mut rng);

    let constraint = match params.constraint {
        ConstraintKind::None => ConstraintSpec::None,
        ConstraintKind::ExactFairness => ConstraintSpec::ExactFairness,
        ConstraintKind::ExactBalance => {
            if counts.iter().any(|&c| c != counts[0]) {
                return Err(GenError::Unbalanced);
            }
            ConstraintSpec::ExactBalance
        }
        ConstraintKind::RatioBalance => {
            if counts.len() != 2 {
                return Err(GenError::TwoColors("ratio_balance"));
            }
            let (lo, hi) = (counts[0].min(counts[1]), counts[0].max(counts[1]));
            let b = params
                .b
                .unwrap_or_else(|| Rational::new(lo as i64, hi as i64).expect("hi is positive"));
            ConstraintSpec::RatioBalance { b }
        }
        ConstraintKind::LuFairness => {
            let n = n as i64;
            let l = counts.iter().map(|&c| Rational::new(c as i64, 2 * n).expect("n > 0")).collect();
            let u = counts.iter().map(|&c| Rational::new(c as i64 + n, 2 * n).expect("n > 0")).collect();
            ConstraintSpec::LuFairness { l, u }
        }
        ConstraintKind::LowerBound => ConstraintSpec::LowerBound { ell: params.ell.unwrap_or(2) },
    };

    let inst = match params.geometry {
        Geometry::Square => {
            let points = (0..n)
                .map(|_| (0..2).map(|_| rng.gen_range(0..10_000u32) as f64 / 100.0).collect())
                .collect();
            Instance::from_points(points, colors, params.k, params.epsilon, constraint)?
        }
        Geometry::Graph => Instance::from_matrix(graph_metric(n, &mut rng), colors, params.k, params.epsilon, constraint)?,
    };
    Ok(inst)
}

/// Random spanning tree plus about `n/2` extra edges, weights in `1..=20`,
/// closed under shortest paths.
fn graph_metric(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    let connect = |d: &mut Vec<Vec<f64>>, a: usize, b: usize, w: f64| {
        if a != b && w < d[a][b] {
            d[a][b] = w;
            d[b][a] = w;
        }
    };
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let w = rng.gen_range(1..=20u32) as f64;
        connect(&mut d, i, j, w);
    }
    if n > 1 {
        for _ in 0..n / 2 {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let w = rng.gen_range(1..=20u32) as f64;
            connect(&mut d, a, b, w);
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][m] + d[m][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::all_in_one_feasible;

    #[test]
    fn same_seed_same_instance() {
        let p = GenParams { constraint: ConstraintKind::ExactFairness, ..GenParams::default() };
        assert_eq!(generate(&p, 7).unwrap().to_json(), generate(&p, 7).unwrap().to_json());
        assert_ne!(generate(&p, 7).unwrap().to_json(), generate(&p, 8).unwrap().to_json());
    }

    #[test]
    fn one_to_one_counts() {
        let p = GenParams { constraint: ConstraintKind::ExactFairness, ..GenParams::default() };
        let inst = generate(&p, 7).unwrap();
        assert_eq!(inst.colors().iter().filter(|&&c| c == 0).count(), 4);
    }

    #[test]
    fn graph_metric_is_valid() {
        for seed in 0..20 {
            let p = GenParams { geometry: Geometry::Graph, n: 7, colors: 1, ..GenParams::default() };
            let inst = generate(&p, seed).unwrap();
            assert!(crate::instance::validate_metric(&inst.matrix()).is_ok());
        }
    }

    #[test]
    fn every_kind_is_globally_feasible() {
        let kinds = [
            (ConstraintKind::ExactFairness, 3, Some(vec![2, 1, 1])),
            (ConstraintKind::ExactBalance, 2, None),
            (ConstraintKind::RatioBalance, 2, Some(vec![3, 1])),
            (ConstraintKind::LuFairness, 3, Some(vec![2, 1, 1])),
            (ConstraintKind::LowerBound, 1, None),
        ];
        for (constraint, colors, ratio) in kinds {
            let p = GenParams { constraint, colors, ratio, ..GenParams::default() };
            let inst = generate(&p, 1).unwrap();
            assert!(all_in_one_feasible(inst.constraint(), &inst), "{constraint:?}");
        }
    }

    #[test]
    fn impossible_combinations() {
        let p = GenParams { n: 7, constraint: ConstraintKind::ExactFairness, ..GenParams::default() };
        assert!(matches!(generate(&p, 0), Err(GenError::Indivisible { .. })));
        let p = GenParams { colors: 3, constraint: ConstraintKind::RatioBalance, n: 9, ..GenParams::default() };
        assert!(matches!(generate(&p, 0), Err(GenError::TwoColors(_))));
        assert_eq!(parse_ratio("2:1"), Some(vec![2, 1]));
        assert_eq!(parse_ratio("2:x"), None);
    }
}
