//! Feasibility predicates for the mergeable cluster constraints.
//!
//! Every ratio comparison is done on integer counts by cross-multiplication,
//! so exact fairness (an equality constraint) is decided exactly.

use thiserror::Error;

use crate::instance::{Clustering, ConstraintSpec, Instance};

/// Per-color point counts of one cluster (or of the whole point set).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorHistogram {
    counts: Vec<u64>,
    total: u64,
}

impl ColorHistogram {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        ColorHistogram { counts, total }
    }

    /// Histogram of `members` under the instance coloring.
    pub fn of_members(inst: &Instance, members: &[usize]) -> Self {
        let mut counts = vec![0u64; inst.num_colors()];
        for &p in members {
            counts[inst.color(p)] += 1;
        }
        Self::from_counts(counts)
    }

    /// Histogram of the whole point set.
    pub fn global(inst: &Instance) -> Self {
        let all: Vec<usize> = (0..inst.n()).collect();
        Self::of_members(inst, &all)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Histogram of the union of two disjoint clusters.
    pub fn merged(&self, other: &ColorHistogram) -> ColorHistogram {
        let len = self.counts.len().max(other.counts.len());
        let counts = (0..len)
            .map(|i| self.counts.get(i).copied().unwrap_or(0) + other.counts.get(i).copied().unwrap_or(0))
            .collect();
        Self::from_counts(counts)
    }

    pub fn scaled(&self, factor: u64) -> ColorHistogram {
        Self::from_counts(self.counts.iter().map(|c| c * factor).collect())
    }

    fn count(&self, color: usize) -> u64 {
        self.counts.get(color).copied().unwrap_or(0)
    }
}

/// Whether a single cluster with histogram `hist` satisfies `spec`, given the
/// histogram of the full point set. Empty clusters are vacuously feasible.
pub fn cluster_feasible(spec: &ConstraintSpec, hist: &ColorHistogram, global: &ColorHistogram) -> bool {
    if hist.is_empty() {
        return true;
    }
    let total = hist.total;
    match spec {
        ConstraintSpec::None => true,
        ConstraintSpec::ExactFairness => {
            let colors = hist.counts.len().max(global.counts.len());
            (0..colors).all(|j| {
                hist.count(j) as u128 * global.total as u128 == global.count(j) as u128 * total as u128
            })
        }
        ConstraintSpec::RatioBalance { b } => {
            let (x, y) = (hist.count(0), hist.count(1));
            let (lo, hi) = (x.min(y), x.max(y));
            // min(x/y, y/x) >= b  <=>  lo * den >= num * hi
            lo as i128 * b.den() as i128 >= b.num() as i128 * hi as i128
        }
        ConstraintSpec::ExactBalance => {
            let colors = hist.counts.len().max(global.counts.len());
            let first = hist.count(0);
            (1..colors).all(|j| hist.count(j) == first)
        }
        ConstraintSpec::LuFairness { l, u } => l
            .iter()
            .zip(u)
            .enumerate()
            .all(|(j, (lo, hi))| lo.le_fraction(hist.count(j), total) && hi.ge_fraction(hist.count(j), total)),
        ConstraintSpec::LowerBound { ell } => total >= *ell as u64,
    }
}

/// Whether every nonempty cluster of `clustering` satisfies `spec`.
pub fn clustering_feasible(spec: &ConstraintSpec, inst: &Instance, clustering: &Clustering) -> bool {
    let global = ColorHistogram::global(inst);
    clustering
        .clusters()
        .iter()
        .all(|members| cluster_feasible(spec, &ColorHistogram::of_members(inst, members), &global))
}

/// Whether the single cluster holding every point satisfies `spec`.
///
/// For a mergeable constraint this holds whenever any feasible clustering exists.
pub fn all_in_one_feasible(spec: &ConstraintSpec, inst: &Instance) -> bool {
    let global = ColorHistogram::global(inst);
    cluster_feasible(spec, &global, &global)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MergeError {
    #[error("{0} is not a center of the clustering")]
    NotACenter(usize),
    #[error("cannot merge center {0} with itself")]
    SameCluster(usize),
    #[error("new center {0} lies outside the merged clusters")]
    CenterOutsideUnion(usize),
}

/// Replaces the clusters of centers `a` and `b` by their union, served by `new_center`.
pub fn merge_clusters(
    inst: &Instance,
    clustering: &Clustering,
    a: usize,
    b: usize,
    new_center: usize,
) -> Result<Clustering, MergeError> {
    for c in [a, b] {
        if !clustering.centers().contains(&c) {
            return Err(MergeError::NotACenter(c));
        }
    }
    if a == b {
        return Err(MergeError::SameCluster(a));
    }
    let assignment = clustering.assignment();
    let in_union = |p: usize| assignment[p] == a || assignment[p] == b;
    if new_center >= assignment.len() || !in_union(new_center) {
        return Err(MergeError::CenterOutsideUnion(new_center));
    }
    let new_assignment: Vec<usize> = (0..assignment.len())
        .map(|p| if in_union(p) { new_center } else { assignment[p] })
        .collect();
    let mut centers = Vec::with_capacity(clustering.num_clusters() - 1);
    for &c in clustering.centers() {
        if c == a {
            centers.push(new_center);
        } else if c != b {
            centers.push(c);
        }
    }
    Ok(Clustering::new(inst, centers, new_assignment).expect("merged clustering stays valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Rational;

    fn hist(c: &[u64]) -> ColorHistogram {
        ColorHistogram::from_counts(c.to_vec())
    }

    fn ratio(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn line_instance(xs: &[f64], colors: Vec<usize>, spec: ConstraintSpec) -> Instance {
        Instance::from_points(xs.iter().map(|&x| vec![x]).collect(), colors, 2, 0.5, spec).unwrap()
    }

    #[test]
    fn two_to_one_cluster_matches_two_to_one_population() {
        let global = hist(&[10, 5]);
        assert!(cluster_feasible(&ConstraintSpec::ExactFairness, &hist(&[2, 1]), &global));
        assert!(!cluster_feasible(&ConstraintSpec::ExactFairness, &hist(&[1, 1]), &global));
    }

    #[test]
    fn ratio_balance_one() {
        let spec = ConstraintSpec::RatioBalance { b: ratio(1, 1) };
        let global = hist(&[6, 6]);
        assert!(cluster_feasible(&spec, &hist(&[3, 3]), &global));
        assert!(!cluster_feasible(&spec, &hist(&[2, 1]), &global));
    }

    #[test]
    fn ratio_balance_with_a_missing_color() {
        let global = hist(&[6, 6]);
        assert!(!cluster_feasible(&ConstraintSpec::RatioBalance { b: ratio(1, 3) }, &hist(&[2, 0]), &global));
        assert!(cluster_feasible(&ConstraintSpec::RatioBalance { b: ratio(0, 1) }, &hist(&[2, 0]), &global));
    }

    #[test]
    fn lower_bound_rejects_small_clusters() {
        let spec = ConstraintSpec::LowerBound { ell: 2 };
        assert!(!cluster_feasible(&spec, &hist(&[1]), &hist(&[5])));
        assert!(cluster_feasible(&spec, &hist(&[2]), &hist(&[5])));
    }

    #[test]
    fn exact_balance_and_lu() {
        let global = hist(&[4, 4, 4]);
        assert!(cluster_feasible(&ConstraintSpec::ExactBalance, &hist(&[2, 2, 2]), &global));
        assert!(!cluster_feasible(&ConstraintSpec::ExactBalance, &hist(&[2, 2, 1]), &global));
        let spec = ConstraintSpec::LuFairness {
            l: vec![ratio(1, 4), ratio(1, 4), ratio(0, 1)],
            u: vec![ratio(1, 2), ratio(1, 2), ratio(1, 2)],
        };
        assert!(cluster_feasible(&spec, &hist(&[1, 1, 0]), &global));
        assert!(!cluster_feasible(&spec, &hist(&[3, 1, 0]), &global));
    }

    #[test]
    fn empty_cluster_is_feasible() {
        assert!(cluster_feasible(&ConstraintSpec::LowerBound { ell: 3 }, &hist(&[0, 0]), &hist(&[2, 2])));
    }

    #[test]
    fn clustering_level_checks() {
        let colors = vec![0, 1, 0, 1];
        let any = line_instance(&[0.0, 1.0, 2.0, 10.0], colors.clone(), ConstraintSpec::None);
        let mono = Clustering::new(&any, vec![0, 1], vec![0, 1, 0, 1]).unwrap();
        assert!(clustering_feasible(&ConstraintSpec::None, &any, &mono));

        let fair = line_instance(&[0.0, 1.0, 2.0, 10.0], colors, ConstraintSpec::ExactFairness);
        assert!(clustering_feasible(fair.constraint(), &fair, &Clustering::single(&fair, 2)));
        assert!(!clustering_feasible(fair.constraint(), &fair, &mono));
    }

    #[test]
    fn merging_two_singletons() {
        let inst = line_instance(&[0.0, 3.0], vec![0, 1], ConstraintSpec::None);
        let c = Clustering::singletons(&inst);
        let merged = merge_clusters(&inst, &c, 0, 1, 0).unwrap();
        assert_eq!(merged.centers(), &[0]);
        assert_eq!(merged.cost(), 3.0);
    }

    #[test]
    fn merging_fair_pairs_stays_fair() {
        let inst = line_instance(&[0.0, 1.0, 5.0, 6.0], vec![0, 1, 0, 1], ConstraintSpec::ExactFairness);
        let c = Clustering::new(&inst, vec![0, 2], vec![0, 0, 2, 2]).unwrap();
        assert!(clustering_feasible(inst.constraint(), &inst, &c));
        let merged = merge_clusters(&inst, &c, 0, 2, 1).unwrap();
        assert!(clustering_feasible(inst.constraint(), &inst, &merged));
        assert_eq!(merged.num_clusters(), 1);
    }

    #[test]
    fn merging_a_unit_clique_can_raise_cost() {
        let n = 8;
        let m: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        let inst = Instance::from_matrix(m, vec![0; n], 4, 0.5, ConstraintSpec::None).unwrap();
        let pairs = Clustering::new(&inst, vec![0, 2, 4, 6], vec![0, 0, 2, 2, 4, 4, 6, 6]).unwrap();
        assert_eq!(pairs.cost(), 4.0);
        let mut merged = pairs;
        for other in [2, 4, 6] {
            merged = merge_clusters(&inst, &merged, 0, other, 0).unwrap();
        }
        assert_eq!(merged.cost(), 1.0);
    }

    #[test]
    fn merge_contract_violations() {
        let inst = line_instance(&[0.0, 1.0, 2.0], vec![0, 0, 0], ConstraintSpec::None);
        let c = Clustering::new(&inst, vec![0, 1, 2], vec![0, 1, 2]).unwrap();
        assert_eq!(merge_clusters(&inst, &c, 0, 1, 2), Err(MergeError::CenterOutsideUnion(2)));
        assert_eq!(merge_clusters(&inst, &c, 0, 0, 0), Err(MergeError::SameCluster(0)));
    }
}
