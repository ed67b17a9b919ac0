//! Candidate radius profiles.
//!
//! The largest optimal radius is bracketed between half the farthest-first
//! k-center value and the radius of the single all-points cluster; a geometric
//! grid over that bracket supplies candidates for it. Each remaining radius is
//! drawn from a second grid spanning `[(eps/k)·r1, r1]`, plus zero.

use thiserror::Error;

use crate::constraints::all_in_one_feasible;
use crate::instance::Instance;
use crate::kcenter::{fft_completion, CompletionInput};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("the single all-points cluster violates the constraint, so no feasible clustering exists")]
    NoAnchor,
}

/// A non-increasing tuple of nonnegative radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusProfile(Vec<f64>);

impl RadiusProfile {
    /// Returns `None` unless the radii are nonnegative and non-increasing.
    pub fn new(radii: Vec<f64>) -> Option<Self> {
        let ordered = radii.windows(2).all(|w| w[0] >= w[1]);
        let nonneg = radii.iter().all(|&r| r >= 0.0);
        (ordered && nonneg).then_some(RadiusProfile(radii))
    }

    pub fn radii(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Bounds on the largest radius of an optimal solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusInterval {
    pub lo: f64,
    pub hi: f64,
    /// Smallest positive pairwise distance (0 if all points coincide). Any
    /// positive radius is at least this large.
    pub min_positive: f64,
}

/// `lo = F/2` for the farthest-first k-center value `F`, `hi` = best radius of
/// the single all-points cluster.
pub fn radius_interval(inst: &Instance) -> Result<RadiusInterval, ProfileError> {
    if !all_in_one_feasible(inst.constraint(), inst) {
        return Err(ProfileError::NoAnchor);
    }
    let gonzalez = fft_completion(&CompletionInput::unconstrained(inst, inst.k()));
    let (_, hi) = inst.one_cluster_radius();
    let lo = (gonzalez.value / 2.0).min(hi);
    let mut min_positive = f64::INFINITY;
    for i in 0..inst.n() {
        for j in (i + 1)..inst.n() {
            let d = inst.dist(i, j);
            if d > 0.0 && d < min_positive {
                min_positive = d;
            }
        }
    }
    if min_positive == f64::INFINITY {
        min_positive = 0.0;
    }
    Ok(RadiusInterval { lo, hi, min_positive })
}

/// `{start·(1+eps)^j}` for `j = 0, 1, …` up to the first value `>= end`.
fn geometric_grid(start: f64, end: f64, eps: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut j = 0;
    loop {
        let v = start * (1.0 + eps).powi(j);
        out.push(v);
        if v >= end {
            return out;
        }
        j += 1;
    }
}

fn sorted_dedup(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}

/// Candidates for the largest radius, ascending. Some candidate lies in
/// `[r, (1+eps)·r]` for every `r` in `[lo, hi]`. When `lo = 0` the grid starts
/// at the smallest positive distance and zero is added as a candidate.
pub fn candidate_largest(interval: &RadiusInterval, eps: f64) -> Vec<f64> {
    assert!(eps > 0.0, "eps must be positive");
    let RadiusInterval { lo, hi, min_positive } = *interval;
    if hi <= 0.0 {
        return vec![0.0];
    }
    let mut values = if lo > 0.0 {
        geometric_grid(lo, hi, eps)
    } else {
        let mut v = vec![0.0];
        v.extend(geometric_grid(min_positive.min(hi), hi, eps));
        v
    };
    values.push(hi);
    sorted_dedup(values)
}

/// Candidates for the radii after the largest one, descending, capped at `largest`.
pub fn candidate_smaller(largest: f64, k: usize, eps: f64) -> Vec<f64> {
    if largest <= 0.0 || k <= 1 {
        return vec![0.0];
    }
    let floor = eps / k as f64 * largest;
    let mut values: Vec<f64> = geometric_grid(floor, largest, eps)
        .into_iter()
        .map(|v| v.min(largest))
        .collect();
    values.push(0.0);
    let mut values = sorted_dedup(values);
    values.reverse();
    values
}

/// All candidate profiles for an instance, in generation order.
pub fn enumerate_profiles(inst: &Instance, eps: f64) -> Result<ProfileStream, ProfileError> {
    let interval = radius_interval(inst)?;
    Ok(ProfileStream::new(candidate_largest(&interval, eps), inst.k(), eps))
}

/// Lazily enumerates profiles: for each largest-radius candidate, every
/// non-increasing `(k-1)`-tuple over the smaller-radius grid.
#[derive(Debug, Clone)]
pub struct ProfileStream {
    largest: Vec<f64>,
    k: usize,
    eps: f64,
    next_largest: usize,
    smaller: Vec<f64>,
    // indices into `smaller`, non-decreasing; None when the current block is exhausted
    cursor: Option<Vec<usize>>,
}

impl ProfileStream {
    fn new(largest: Vec<f64>, k: usize, eps: f64) -> Self {
        ProfileStream {
            largest,
            k,
            eps,
            next_largest: 0,
            smaller: Vec::new(),
            cursor: None,
        }
    }

    fn current_largest(&self) -> f64 {
        self.largest[self.next_largest - 1]
    }

    fn advance_cursor(&mut self) {
        let Some(idx) = self.cursor.as_mut() else { return };
        let top = self.smaller.len() - 1;
        // odometer over non-decreasing index tuples
        let mut pos = idx.len();
        while pos > 0 && idx[pos - 1] == top {
            pos -= 1;
        }
        if pos == 0 {
            self.cursor = None;
            return;
        }
        let v = idx[pos - 1] + 1;
        for slot in &mut idx[pos - 1..] {
            *slot = v;
        }
    }
}

impl Iterator for ProfileStream {
    type Item = RadiusProfile;

    fn next(&mut self) -> Option<RadiusProfile> {
        if self.cursor.is_none() {
            if self.next_largest >= self.largest.len() {
                return None;
            }
            self.next_largest += 1;
            self.smaller = candidate_smaller(self.current_largest(), self.k, self.eps);
            self.cursor = Some(vec![0; self.k - 1]);
        }
        let idx = self.cursor.as_ref().expect("cursor set above");
        let mut radii = Vec::with_capacity(self.k);
        radii.push(self.current_largest());
        radii.extend(idx.iter().map(|&i| self.smaller[i]));
        self.advance_cursor();
        Some(RadiusProfile::new(radii).expect("grid tuples are non-increasing"))
    }
}
