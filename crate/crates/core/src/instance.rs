//! Problem instances, solutions and their JSON file formats.
//!
//! An [`Instance`] always carries a dense distance matrix. When the input file
//! supplies coordinates instead, the Euclidean matrix is computed once on load
//! and the coordinates are kept only so that writing the instance back yields
//! the same document.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack used by [`validate_metric`].
pub const METRIC_SLACK: f64 = 1e-9;

/// A rational number `num / den` with `den > 0`, written as `[num, den]` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct Rational {
    num: i64,
    den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        Some(Rational {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `self <= count / total`, decided by cross-multiplication. `total > 0`.
    pub fn le_fraction(&self, count: u64, total: u64) -> bool {
        (self.num as i128) * (total as i128) <= (count as i128) * (self.den as i128)
    }

    /// `count / total <= self`, decided by cross-multiplication. `total > 0`.
    pub fn ge_fraction(&self, count: u64, total: u64) -> bool {
        (count as i128) * (self.den as i128) <= (self.num as i128) * (total as i128)
    }
}

impl TryFrom<(i64, i64)> for Rational {
    type Error = String;

    fn try_from((num, den): (i64, i64)) -> Result<Self, Self::Error> {
        Rational::new(num, den).ok_or_else(|| format!("rational {num}/{den} has a zero denominator"))
    }
}

impl From<Rational> for (i64, i64) {
    fn from(r: Rational) -> Self {
        (r.num, r.den)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The cluster-level constraint attached to an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintSpec {
    None,
    /// Every cluster reproduces the global color proportions.
    ExactFairness,
    /// Two colors; `min(|C∩Γ1|/|C∩Γ2|, |C∩Γ2|/|C∩Γ1|) >= b`.
    RatioBalance { b: Rational },
    /// All colors appear equally often in every cluster.
    ExactBalance,
    /// `l[i] <= |C∩Γi| / |C| <= u[i]` for every color.
    LuFairness { l: Vec<Rational>, u: Vec<Rational> },
    /// Every cluster holds at least `ell` points.
    LowerBound { ell: usize },
}

impl ConstraintSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ConstraintSpec::None => "none",
            ConstraintSpec::ExactFairness => "exact_fairness",
            ConstraintSpec::RatioBalance { .. } => "ratio_balance",
            ConstraintSpec::ExactBalance => "exact_balance",
            ConstraintSpec::LuFairness { .. } => "lu_fairness",
            ConstraintSpec::LowerBound { .. } => "lower_bound",
        }
    }

    fn check(&self, num_colors: usize) -> Result<(), InstanceError> {
        let bad = |msg: String| Err(InstanceError::Constraint(msg));
        match self {
            ConstraintSpec::RatioBalance { b } => {
                if num_colors != 2 {
                    return bad(format!("ratio_balance needs exactly 2 colors, found {num_colors}"));
                }
                if b.num() < 0 || b.num() > b.den() {
                    return bad(format!("ratio_balance b = {b} is outside [0, 1]"));
                }
            }
            ConstraintSpec::LuFairness { l, u } => {
                if l.len() != num_colors || u.len() != num_colors {
                    return bad(format!(
                        "lu_fairness bounds have lengths {}/{} but there are {num_colors} colors",
                        l.len(),
                        u.len()
                    ));
                }
                for (i, (lo, hi)) in l.iter().zip(u).enumerate() {
                    if (lo.num() as i128) * (hi.den() as i128) > (hi.num() as i128) * (lo.den() as i128) {
                        return bad(format!("lu_fairness color {i}: l = {lo} exceeds u = {hi}"));
                    }
                }
            }
            ConstraintSpec::LowerBound { ell } => {
                if *ell == 0 {
                    return bad("lower_bound ell must be positive".into());
                }
            }
            ConstraintSpec::None | ConstraintSpec::ExactFairness | ConstraintSpec::ExactBalance => {}
        }
        Ok(())
    }
}

/// First defect found in a candidate distance matrix.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("distance ({i}, {j}) = {value} is negative or not finite")]
    BadEntry { i: usize, j: usize, value: f64 },
    #[error("diagonal entry ({i}, {i}) = {value} is not zero")]
    NonZeroDiagonal { i: usize, value: f64 },
    #[error("distances ({i}, {j}) and ({j}, {i}) differ")]
    Asymmetric { i: usize, j: usize },
    #[error("triangle inequality fails: d({i},{j}) > d({i},{h}) + d({h},{j})")]
    Triangle { i: usize, h: usize, j: usize },
}

/// Checks square shape, nonnegativity, zero diagonal, symmetry and the triangle
/// inequality, in that order, reporting the first violation.
pub fn validate_metric(dist: &[Vec<f64>]) -> Result<(), MetricError> {
    let n = dist.len();
    for (row, r) in dist.iter().enumerate() {
        if r.len() != n {
            return Err(MetricError::NotSquare { row, len: r.len(), n });
        }
    }
    for (i, r) in dist.iter().enumerate() {
        for (j, &value) in r.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(MetricError::BadEntry { i, j, value });
            }
        }
    }
    for (i, r) in dist.iter().enumerate() {
        if r[i].abs() > METRIC_SLACK {
            return Err(MetricError::NonZeroDiagonal { i, value: r[i] });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (dist[i][j] - dist[j][i]).abs() > METRIC_SLACK {
                return Err(MetricError::Asymmetric { i, j });
            }
        }
    }
    for i in 0..n {
        for h in 0..n {
            for j in 0..n {
                if dist[i][j] > dist[i][h] + dist[h][j] + METRIC_SLACK {
                    return Err(MetricError::Triangle { i, h, j });
                }
            }
        }
    }
    Ok(())
}

/// Euclidean distance matrix of a coordinate list.
pub fn euclidean_matrix(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
                .collect()
        })
        .collect()
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invalid constraint: {0}")]
    Constraint(String),
    #[error("not a metric: {0}")]
    Metric(#[from] MetricError),
}

/// Serialized form of an instance. Field order is the canonical key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub distance_matrix: Option<Vec<Vec<f64>>>,
    pub points: Option<Vec<Vec<f64>>>,
    pub colors: Vec<usize>,
    pub k: usize,
    pub epsilon: f64,
    pub constraint: ConstraintSpec,
}

/// A validated, immutable problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    dist: Vec<f64>,
    points: Option<Vec<Vec<f64>>>,
    colors: Vec<usize>,
    num_colors: usize,
    k: usize,
    epsilon: f64,
    constraint: ConstraintSpec,
}

impl Instance {
    /// Builds an instance from an explicit distance matrix.
    pub fn from_matrix(
        dist: Vec<Vec<f64>>,
        colors: Vec<usize>,
        k: usize,
        epsilon: f64,
        constraint: ConstraintSpec,
    ) -> Result<Self, InstanceError> {
        Self::from_file(InstanceFile {
            n: dist.len(),
            distance_matrix: Some(dist),
            points: None,
            colors,
            k,
            epsilon,
            constraint,
        })
    }

    /// Builds an instance from coordinates under the Euclidean metric.
    pub fn from_points(
        points: Vec<Vec<f64>>,
        colors: Vec<usize>,
        k: usize,
        epsilon: f64,
        constraint: ConstraintSpec,
    ) -> Result<Self, InstanceError> {
        Self::from_file(InstanceFile {
            n: points.len(),
            distance_matrix: None,
            points: Some(points),
            colors,
            k,
            epsilon,
            constraint,
        })
    }

    pub fn from_file(file: InstanceFile) -> Result<Self, InstanceError> {
        let schema = |msg: String| Err(InstanceError::Schema(msg));
        let InstanceFile {
            n,
            distance_matrix,
            points,
            colors,
            k,
            epsilon,
            constraint,
        } = file;

        let matrix = match (distance_matrix, &points) {
            (Some(m), None) => m,
            (None, Some(pts)) => {
                if pts.len() != n {
                    return schema(format!("{} points given but n = {n}", pts.len()));
                }
                let dim = pts.first().map_or(0, Vec::len);
                if dim == 0 || pts.iter().any(|p| p.len() != dim) {
                    return schema("points must share one positive dimension".into());
                }
                if pts.iter().flatten().any(|x| !x.is_finite()) {
                    return schema("coordinates must be finite".into());
                }
                euclidean_matrix(pts)
            }
            _ => return schema("exactly one of distance_matrix and points must be non-null".into()),
        };
        if n == 0 {
            return schema("instance has no points".into());
        }
        if matrix.len() != n {
            return schema(format!("distance matrix has {} rows but n = {n}", matrix.len()));
        }
        validate_metric(&matrix)?;
        if colors.len() != n {
            return schema(format!("{} colors given but n = {n}", colors.len()));
        }
        let num_colors = colors.iter().max().map_or(0, |&c| c + 1);
        let mut seen = vec![false; num_colors];
        for &c in &colors {
            seen[c] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return schema(format!("color ids must be contiguous; color {missing} is unused"));
        }
        if k == 0 || k > n {
            return schema(format!("k = {k} must satisfy 1 <= k <= n = {n}"));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return schema(format!("epsilon = {epsilon} must be positive"));
        }
        constraint.check(num_colors)?;

        Ok(Instance {
            n,
            dist: matrix.into_iter().flatten().collect(),
            points,
            colors,
            num_colors,
            k,
            epsilon,
            constraint,
        })
    }

    pub fn to_file(&self) -> InstanceFile {
        let distance_matrix = match self.points {
            Some(_) => None,
            None => Some(self.matrix()),
        };
        InstanceFile {
            n: self.n,
            distance_matrix,
            points: self.points.clone(),
            colors: self.colors.clone(),
            k: self.k,
            epsilon: self.epsilon,
            constraint: self.constraint.clone(),
        }
    }

    /// Canonical JSON text of the instance.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        Self::from_file(serde_json::from_str(text)?)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn points(&self) -> Option<&[Vec<f64>]> {
        self.points.as_deref()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, p: usize) -> usize {
        self.colors[p]
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn constraint(&self) -> &ConstraintSpec {
        &self.constraint
    }

    pub fn max_distance(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Same points and constraint with a different slack.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self, InstanceError> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(InstanceError::Schema(format!("epsilon = {epsilon} must be positive")));
        }
        Ok(Instance { epsilon, ..self.clone() })
    }

    /// Radius of the cluster `members` around `center`.
    pub fn radius_of(&self, center: usize, members: &[usize]) -> f64 {
        members.iter().map(|&p| self.dist(p, center)).fold(0.0, f64::max)
    }

    /// Smallest radius over all centers in `P` for the single cluster holding every point.
    pub fn one_cluster_radius(&self) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for c in 0..self.n {
            let r = (0..self.n).map(|p| self.dist(p, c)).fold(0.0, f64::max);
            if r < best.1 {
                best = (c, r);
            }
        }
        best
    }
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance, InstanceError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Instance::from_json(&text)
}

pub fn write_instance(path: impl AsRef<Path>, inst: &Instance) -> Result<(), InstanceError> {
    write_text(path.as_ref(), &inst.to_json())
}

fn write_text(path: &Path, text: &str) -> Result<(), InstanceError> {
    let mut text = text.to_owned();
    text.push('\n');
    fs::write(path, text).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolutionError {
    #[error("assignment has {got} entries, expected {n}")]
    Length { got: usize, n: usize },
    #[error("point index {0} is out of range")]
    OutOfRange(usize),
    #[error("point {point} is assigned to {center}, which is not a listed center")]
    UnlistedCenter { point: usize, center: usize },
    #[error("stored {field} disagrees with the recomputed value")]
    Stale { field: &'static str },
}

/// Centers plus a total point-to-center assignment.
///
/// `assignment[p]` is the point index of the center serving `p`. Radii are
/// aligned with `centers` and every listed center serves at least one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    centers: Vec<usize>,
    assignment: Vec<usize>,
    radii: Vec<f64>,
    cost: f64,
}

impl Clustering {
    /// Validates the assignment, drops centers that serve nobody and
    /// recomputes radii and cost.
    pub fn new(inst: &Instance, centers: Vec<usize>, assignment: Vec<usize>) -> Result<Self, SolutionError> {
        let n = inst.n();
        if assignment.len() != n {
            return Err(SolutionError::Length { got: assignment.len(), n });
        }
        if let Some(&c) = centers.iter().find(|&&c| c >= n) {
            return Err(SolutionError::OutOfRange(c));
        }
        let mut listed = vec![false; n];
        for &c in &centers {
            listed[c] = true;
        }
        let mut used = vec![false; n];
        for (point, &center) in assignment.iter().enumerate() {
            if center >= n || !listed[center] {
                return Err(SolutionError::UnlistedCenter { point, center });
            }
            used[center] = true;
        }
        let mut kept = Vec::with_capacity(centers.len());
        for c in centers {
            if used[c] {
                used[c] = false;
                kept.push(c);
            }
        }
        let radii: Vec<f64> = kept
            .iter()
            .map(|&c| {
                assignment
                    .iter()
                    .enumerate()
                    .filter(|&(_, &a)| a == c)
                    .map(|(p, _)| inst.dist(p, c))
                    .fold(0.0, f64::max)
            })
            .collect();
        let cost = radii.iter().sum();
        Ok(Clustering {
            centers: kept,
            assignment,
            radii,
            cost,
        })
    }

    /// Every point in its own cluster.
    pub fn singletons(inst: &Instance) -> Self {
        let all: Vec<usize> = (0..inst.n()).collect();
        Clustering::new(inst, all.clone(), all).expect("singletons are valid")
    }

    /// All points served by `center`.
    pub fn single(inst: &Instance, center: usize) -> Self {
        Clustering::new(inst, vec![center], vec![center; inst.n()]).expect("single cluster is valid")
    }

    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn num_clusters(&self) -> usize {
        self.centers.len()
    }

    /// Members of each cluster, in center order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        self.centers
            .iter()
            .map(|&c| (0..self.assignment.len()).filter(|&p| self.assignment[p] == c).collect())
            .collect()
    }
}

/// Sum of cluster radii recomputed from the assignment alone.
pub fn msr_cost(inst: &Instance, clustering: &Clustering) -> Result<f64, SolutionError> {
    Clustering::new(inst, clustering.centers.clone(), clustering.assignment.clone()).map(|c| c.cost)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionMeta {
    pub profiles_tried: u64,
    pub tuples_tried: u64,
    pub elapsed_ms: u64,
    pub seed: u64,
}

/// Serialized form of a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub centers: Vec<usize>,
    pub assignment: Vec<usize>,
    pub radii: Vec<f64>,
    pub cost: f64,
    pub feasible: bool,
    pub meta: SolutionMeta,
}

impl SolutionFile {
    pub fn new(clustering: &Clustering, feasible: bool, meta: SolutionMeta) -> Self {
        SolutionFile {
            centers: clustering.centers.clone(),
            assignment: clustering.assignment.clone(),
            radii: clustering.radii.clone(),
            cost: clustering.cost,
            feasible,
            meta,
        }
    }

    /// Placeholder written when no feasible clustering was found.
    pub fn infeasible(meta: SolutionMeta) -> Self {
        SolutionFile {
            centers: Vec::new(),
            assignment: Vec::new(),
            radii: Vec::new(),
            cost: 0.0,
            feasible: false,
            meta,
        }
    }

    /// Rebuilds the clustering and checks the stored radii and cost against it.
    pub fn to_clustering(&self, inst: &Instance) -> Result<Clustering, SolutionError> {
        let c = Clustering::new(inst, self.centers.clone(), self.assignment.clone())?;
        if c.centers != self.centers {
            return Err(SolutionError::Stale { field: "centers" });
        }
        if c.radii != self.radii {
            return Err(SolutionError::Stale { field: "radii" });
        }
        if c.cost != self.cost {
            return Err(SolutionError::Stale { field: "cost" });
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serialization cannot fail")
    }
}

pub fn write_solution(
    path: impl AsRef<Path>,
    clustering: &Clustering,
    feasible: bool,
    meta: SolutionMeta,
) -> Result<(), InstanceError> {
    write_text(path.as_ref(), &SolutionFile::new(clustering, feasible, meta).to_json())
}

pub fn write_solution_file(path: impl AsRef<Path>, file: &SolutionFile) -> Result<(), InstanceError> {
    write_text(path.as_ref(), &file.to_json())
}

pub fn read_solution(path: impl AsRef<Path>) -> Result<SolutionFile, InstanceError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Instance {
        let pts = xs.iter().map(|&x| vec![x]).collect();
        Instance::from_points(pts, vec![0; xs.len()], 1, 0.5, ConstraintSpec::None).unwrap()
    }

    #[test]
    fn two_point_metric_is_valid() {
        assert_eq!(validate_metric(&[vec![0.0, 1.0], vec![1.0, 0.0]]), Ok(()));
    }

    #[test]
    fn nonzero_diagonal_is_reported() {
        let m = vec![vec![1.0, 5.0], vec![5.0, 0.0]];
        assert_eq!(validate_metric(&m), Err(MetricError::NonZeroDiagonal { i: 0, value: 1.0 }));
    }

    #[test]
    fn triangle_violation_is_reported() {
        let m = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]];
        assert_eq!(validate_metric(&m), Err(MetricError::Triangle { i: 0, h: 1, j: 2 }));
    }

    #[test]
    fn ragged_matrix_is_a_format_error() {
        let m = vec![vec![0.0, 1.0], vec![1.0]];
        assert!(matches!(validate_metric(&m), Err(MetricError::NotSquare { row: 1, .. })));
    }

    #[test]
    fn asymmetry_is_reported() {
        let m = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert_eq!(validate_metric(&m), Err(MetricError::Asymmetric { i: 0, j: 1 }));
    }

    #[test]
    fn unit_clique_in_one_cluster_costs_one() {
        let n = 8;
        let m: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        let inst = Instance::from_matrix(m, vec![0; n], 1, 0.5, ConstraintSpec::None).unwrap();
        assert_eq!(Clustering::single(&inst, 3).cost(), 1.0);
        assert_eq!(Clustering::singletons(&inst).cost(), 0.0);
    }

    #[test]
    fn line_example_cost() {
        let inst = line(&[0.0, 1.0, 2.0, 10.0]);
        let c = Clustering::new(&inst, vec![0, 2], vec![0, 0, 2, 2]).unwrap();
        assert_eq!(c.cost(), 9.0);
        assert_eq!(c.radii(), &[1.0, 8.0]);
        assert_eq!(msr_cost(&inst, &c).unwrap(), 9.0);
    }

    #[test]
    fn empty_centers_are_dropped() {
        let inst = line(&[0.0, 1.0, 2.0, 10.0]);
        let c = Clustering::new(&inst, vec![3, 0, 1], vec![0, 0, 0, 3]).unwrap();
        assert_eq!(c.centers(), &[3, 0]);
        assert_eq!(c.cost(), 2.0);
    }

    #[test]
    fn unlisted_center_is_rejected() {
        let inst = line(&[0.0, 1.0, 2.0]);
        let err = Clustering::new(&inst, vec![0], vec![0, 1, 0]).unwrap_err();
        assert_eq!(err, SolutionError::UnlistedCenter { point: 1, center: 1 });
    }

    #[test]
    fn minimal_instance_parses() {
        let text = r#"{"n":2,"distance_matrix":[[0,1],[1,0]],"points":null,"colors":[0,0],
                       "k":1,"epsilon":0.5,"constraint":{"kind":"none"}}"#;
        let inst = Instance::from_json(text).unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.dist(0, 1), 1.0);
    }

    #[test]
    fn coordinates_become_euclidean_distances() {
        let text = r#"{"n":3,"distance_matrix":null,"points":[[0,0],[3,4],[0,4]],"colors":[0,1,0],
                       "k":2,"epsilon":0.5,"constraint":{"kind":"exact_fairness"}}"#;
        let inst = Instance::from_json(text).unwrap();
        assert_eq!(inst.dist(0, 1), 5.0);
        assert_eq!(inst.dist(1, 2), 3.0);
        assert_eq!(inst.num_colors(), 2);
    }

    #[test]
    fn ratio_balance_with_three_colors_is_rejected() {
        let text = r#"{"n":3,"distance_matrix":null,"points":[[0],[1],[2]],"colors":[0,1,2],
                       "k":1,"epsilon":0.5,"constraint":{"kind":"ratio_balance","b":[1,2]}}"#;
        assert!(matches!(Instance::from_json(text), Err(InstanceError::Constraint(_))));
    }

    #[test]
    fn both_or_neither_geometry_is_rejected() {
        let text = r#"{"n":1,"distance_matrix":[[0]],"points":[[0]],"colors":[0],
                       "k":1,"epsilon":0.5,"constraint":{"kind":"none"}}"#;
        assert!(matches!(Instance::from_json(text), Err(InstanceError::Schema(_))));
    }

    #[test]
    fn metric_violation_surfaces_on_read() {
        let text = r#"{"n":3,"distance_matrix":[[0,1,3],[1,0,1],[3,1,0]],"points":null,
                       "colors":[0,0,0],"k":1,"epsilon":0.5,"constraint":{"kind":"none"}}"#;
        assert!(matches!(Instance::from_json(text), Err(InstanceError::Metric(_))));
    }

    #[test]
    fn lu_bounds_must_be_ordered() {
        let l = vec![Rational::new(2, 3).unwrap(), Rational::new(0, 1).unwrap()];
        let u = vec![Rational::new(1, 2).unwrap(), Rational::new(1, 1).unwrap()];
        let err = Instance::from_points(
            vec![vec![0.0], vec![1.0]],
            vec![0, 1],
            1,
            0.5,
            ConstraintSpec::LuFairness { l, u },
        );
        assert!(matches!(err, Err(InstanceError::Constraint(_))));
    }

    #[test]
    fn rationals_are_normalized() {
        let r = Rational::new(4, -6).unwrap();
        assert_eq!((r.num(), r.den()), (-2, 3));
        assert!(Rational::new(1, 0).is_none());
        assert!(Rational::new(1, 2).unwrap().le_fraction(1, 2));
        assert!(!Rational::new(1, 2).unwrap().le_fraction(1, 3));
    }

    #[test]
    fn solution_file_detects_stale_cost() {
        let inst = line(&[0.0, 1.0, 2.0, 10.0]);
        let c = Clustering::new(&inst, vec![0, 2], vec![0, 0, 2, 2]).unwrap();
        let mut file = SolutionFile::new(&c, true, SolutionMeta::default());
        assert_eq!(file.to_clustering(&inst).unwrap(), c);
        file.cost = 1.0;
        assert_eq!(file.to_clustering(&inst), Err(SolutionError::Stale { field: "cost" }));
    }
}
