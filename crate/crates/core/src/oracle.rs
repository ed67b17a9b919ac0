//! Brute-force exact solvers for small instances.

use thiserror::Error;

use crate::constraints::{cluster_feasible, ColorHistogram};
use crate::instance::{Clustering, Instance};
use crate::kcenter::CompletionInput;

pub const MAX_EXACT_N: usize = 12;
pub const MAX_COMPLETION_N: usize = 10;
pub const MAX_COMPLETION_FREE: usize = 3;
pub const MAX_MATCHING_SIDE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} points, the exact solver accepts at most {limit}")]
    TooManyPoints { n: usize, limit: usize },
    #[error("completion asks for {free} new centers, at most {limit} are enumerated")]
    TooManyFreeCenters { free: usize, limit: usize },
    #[error("bipartite side of size {side} exceeds {limit}")]
    SideTooLarge { side: usize, limit: usize },
    #[error("no partition into at most k clusters satisfies the constraint")]
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub clustering: Clustering,
    pub opt_cost: f64,
    /// Cluster radii, non-increasing, padded with zeros to length `k`.
    pub radius_profile: Vec<f64>,
    /// Number of partitions into at most `k` blocks that were examined.
    pub partitions: u64,
}

impl ExactSolution {
    /// Clusters paired with their centers, by non-increasing radius (ties by center index).
    pub fn clusters_by_radius(&self) -> Vec<(usize, f64, Vec<usize>)> {
        let c = &self.clustering;
        let mut out: Vec<(usize, f64, Vec<usize>)> = c
            .centers()
            .iter()
            .zip(c.radii())
            .zip(c.clusters())
            .map(|((&center, &r), members)| (center, r, members))
            .collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        out
    }
}

/// Best center of `members` and its radius; ties go to the smallest index.
fn block_radius(inst: &Instance, members: &[usize]) -> (usize, f64) {
    let mut best = (members[0], f64::INFINITY);
    for &c in members {
        let r = inst.radius_of(c, members);
        if r < best.1 {
            best = (c, r);
        }
    }
    best
}

/// Optimal constrained k-MSR over all partitions into at most `k` blocks,
/// each served by its best member. Ties keep the lexicographically smallest
/// restricted-growth encoding.
pub fn exact_msr(inst: &Instance) -> Result<ExactSolution, OracleError> {
    exact_msr_limited(inst, MAX_EXACT_N)
}

pub fn exact_msr_limited(inst: &Instance, limit: usize) -> Result<ExactSolution, OracleError> {
    let n = inst.n();
    if n > limit {
        return Err(OracleError::TooManyPoints { n, limit });
    }
    let k = inst.k();
    let global = ColorHistogram::global(inst);
    let mut rgs = vec![0usize; n];
    let mut partitions = 0u64;
    let mut best: Option<(f64, Vec<usize>)> = None;

    loop {
        partitions += 1;
        let blocks = rgs.iter().max().map_or(0, |m| m + 1);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); blocks];
        for (p, &b) in rgs.iter().enumerate() {
            members[b].push(p);
        }
        let feasible = members
            .iter()
            .all(|m| cluster_feasible(inst.constraint(), &ColorHistogram::of_members(inst, m), &global));
        if feasible {
            let cost: f64 = members.iter().map(|m| block_radius(inst, m).1).sum();
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, rgs.clone()));
            }
        }
        if !next_rgs(&mut rgs, k) {
            break;
        }
    }

    let (_, rgs) = best.ok_or(OracleError::Infeasible)?;
    let blocks = rgs.iter().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); blocks];
    for (p, &b) in rgs.iter().enumerate() {
        members[b].push(p);
    }
    let mut centers = Vec::with_capacity(blocks);
    let mut assignment = vec![0; n];
    for m in &members {
        let (c, _) = block_radius(inst, m);
        centers.push(c);
        for &p in m {
            assignment[p] = c;
        }
    }
    let clustering = Clustering::new(inst, centers, assignment).expect("partition is a valid clustering");
    let mut radius_profile = clustering.radii().to_vec();
    radius_profile.sort_by(|a, b| b.total_cmp(a));
    radius_profile.resize(k, 0.0);
    Ok(ExactSolution {
        opt_cost: clustering.cost(),
        clustering,
        radius_profile,
        partitions,
    })
}

/// Next restricted-growth string with at most `k` blocks, in lexicographic order.
fn next_rgs(rgs: &mut [usize], k: usize) -> bool {
    let n = rgs.len();
    // prefix maxima decide how far each position may grow
    let mut prefix_max = vec![0usize; n];
    for i in 1..n {
        prefix_max[i] = prefix_max[i - 1].max(rgs[i - 1]);
    }
    for i in (1..n).rev() {
        let cap = (prefix_max[i] + 1).min(k - 1);
        if rgs[i] < cap {
            rgs[i] += 1;
            for x in &mut rgs[i + 1..] {
                *x = 0;
            }
            return true;
        }
    }
    false
}

/// Optimal completion value: the best choice of `k - ℓ` extra centers under `d'`.
pub fn exact_completion(input: &CompletionInput<'_>) -> Result<f64, OracleError> {
    let inst = input.instance();
    let n = inst.n();
    if n > MAX_COMPLETION_N {
        return Err(OracleError::TooManyPoints { n, limit: MAX_COMPLETION_N });
    }
    let free = input.k() - input.fixed_centers().len();
    if free > MAX_COMPLETION_FREE {
        return Err(OracleError::TooManyFreeCenters { free, limit: MAX_COMPLETION_FREE });
    }
    let value_with = |extra: &[usize]| {
        (0..n)
            .map(|p| {
                input
                    .fixed_centers()
                    .iter()
                    .chain(extra)
                    .map(|&c| input.adjusted_distance(p, c))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    let mut best = f64::INFINITY;
    let mut extra = Vec::with_capacity(free);
    subsets(n, free, 0, &mut extra, &mut |s| best = best.min(value_with(s)));
    Ok(best)
}

fn subsets(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == size {
        f(cur);
        return;
    }
    for x in start..n {
        cur.push(x);
        subsets(n, size, x + 1, cur, f);
        cur.pop();
    }
}

/// Maximum matching size of a bipartite graph given by `edges[l][r]`.
pub fn exact_matching(edges: &[Vec<bool>]) -> Result<usize, OracleError> {
    let left = edges.len();
    let right = edges.first().map_or(0, Vec::len);
    for side in [left, right] {
        if side > MAX_MATCHING_SIDE {
            return Err(OracleError::SideTooLarge { side, limit: MAX_MATCHING_SIDE });
        }
    }
    fn go(edges: &[Vec<bool>], l: usize, used: &mut Vec<bool>) -> usize {
        if l == edges.len() {
            return 0;
        }
        let mut best = go(edges, l + 1, used);
        for r in 0..used.len() {
            if edges[l][r] && !used[r] {
                used[r] = true;
                best = best.max(1 + go(edges, l + 1, used));
                used[r] = false;
            }
        }
        best
    }
    Ok(go(edges, 0, &mut vec![false; right]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::ConstraintSpec;

    fn line(xs: &[f64], colors: Vec<usize>, k: usize, spec: ConstraintSpec) -> Instance {
        Instance::from_points(xs.iter().map(|&x| vec![x]).collect(), colors, k, 0.5, spec).unwrap()
    }

    fn stirling2(n: u64, k: u64) -> u64 {
        if n == 0 && k == 0 {
            return 1;
        }
        if n == 0 || k == 0 {
            return 0;
        }
        k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)
    }

    #[test]
    fn two_singletons() {
        let inst = line(&[0.0, 4.0], vec![0, 0], 2, ConstraintSpec::None);
        let sol = exact_msr(&inst).unwrap();
        assert_eq!(sol.opt_cost, 0.0);
        assert_eq!(sol.radius_profile, vec![0.0, 0.0]);
    }

    #[test]
    fn fair_line_is_one_cluster_at_point_two() {
        let inst = line(&[0.0, 1.0, 2.0, 10.0], vec![0, 1, 0, 1], 2, ConstraintSpec::ExactFairness);
        let sol = exact_msr(&inst).unwrap();
        assert_eq!(sol.opt_cost, 8.0);
        assert_eq!(sol.clustering.centers(), &[2]);
        assert_eq!(sol.radius_profile, vec![8.0, 0.0]);
    }

    #[test]
    fn unit_clique_single_cluster() {
        let m: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| if i == j { 0.0 } else { 1.0 }).collect()).collect();
        let inst = Instance::from_matrix(m, vec![0; 4], 1, 0.5, ConstraintSpec::None).unwrap();
        assert_eq!(exact_msr(&inst).unwrap().opt_cost, 1.0);
    }

    #[test]
    fn partition_count_is_a_stirling_sum() {
        for n in 1..=7usize {
            for k in 1..=n {
                let xs: Vec<f64> = (0..n).map(|i| i as f64).collect();
                let inst = line(&xs, vec![0; n], k, ConstraintSpec::None);
                let expected: u64 = (1..=k as u64).map(|j| stirling2(n as u64, j)).sum();
                assert_eq!(exact_msr(&inst).unwrap().partitions, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn k_equals_n_is_free() {
        let inst = line(&[0.0, 2.0, 7.0], vec![0; 3], 3, ConstraintSpec::None);
        assert_eq!(exact_msr(&inst).unwrap().opt_cost, 0.0);
    }

    #[test]
    fn guards() {
        let xs: Vec<f64> = (0..13).map(|i| i as f64).collect();
        let inst = line(&xs, vec![0; 13], 2, ConstraintSpec::None);
        assert!(matches!(exact_msr(&inst), Err(OracleError::TooManyPoints { .. })));
        let small = line(&[0.0, 1.0, 2.0, 3.0, 4.0], vec![0; 5], 4, ConstraintSpec::None);
        assert!(matches!(
            exact_completion(&CompletionInput::unconstrained(&small, 4)),
            Err(OracleError::TooManyFreeCenters { .. })
        ));
        assert!(exact_matching(&vec![vec![false; 7]; 2]).is_err());
    }

    #[test]
    fn infeasible_constraint() {
        let inst = line(&[0.0, 1.0], vec![0, 0], 2, ConstraintSpec::LowerBound { ell: 3 });
        assert_eq!(exact_msr(&inst), Err(OracleError::Infeasible));
    }

    #[test]
    fn completion_values() {
        let inst = line(&[0.0, 1.0, 2.0, 10.0], vec![0; 4], 2, ConstraintSpec::None);
        assert_eq!(exact_completion(&CompletionInput::unconstrained(&inst, 2)).unwrap(), 1.0);
        let all = line(&[0.0, 1.0, 2.0], vec![0; 3], 3, ConstraintSpec::None);
        assert_eq!(exact_completion(&CompletionInput::unconstrained(&all, 3)).unwrap(), 0.0);
        let fixed = CompletionInput::new(&inst, vec![0, 3], vec![1.0, 0.0], 2);
        assert_eq!(exact_completion(&fixed).unwrap(), 1.0);
    }

    #[test]
    fn matchings() {
        assert_eq!(exact_matching(&[vec![false; 3], vec![false; 3]]).unwrap(), 0);
        assert_eq!(exact_matching(&vec![vec![true; 3]; 3]).unwrap(), 3);
        let star = vec![vec![true, true], vec![true, false], vec![true, false]];
        assert_eq!(exact_matching(&star).unwrap(), 2);
    }
}
