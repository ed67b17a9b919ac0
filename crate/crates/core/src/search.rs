//! Guess-driven construction of candidate covers and the exhaustive solver.
//!
//! For a radius profile `r̃` and a guess tuple `a`, iteration `i` completes the
//! cover built so far to `k` centers. If `aᵢ < i` the guess is that the `i`-th
//! optimal center is served by an earlier ball, which then grows by `3r̃ᵢ`;
//! otherwise the `aᵢ`-th completion center opens a new ball of radius `3r̃ᵢ`.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::assign::{self, AssignError, CenterRule, Mode};
use crate::constraints::clustering_feasible;
use crate::instance::{Clustering, Instance};
use crate::kcenter::{fft_completion, CompletionInput, CompletionOutput};
use crate::profiles::{enumerate_profiles, ProfileError, RadiusProfile};

/// One guess per iteration, 1-based: `aᵢ ∈ {1..k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuessTuple(Vec<usize>);

impl GuessTuple {
    /// Returns `None` unless every entry lies in `1..=len`.
    pub fn new(a: Vec<usize>) -> Option<Self> {
        let k = a.len();
        (k > 0 && a.iter().all(|&x| (1..=k).contains(&x))).then_some(GuessTuple(a))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A ball of a cover: slot, center point, radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub slot: usize,
    pub center: usize,
    pub radius: f64,
}

/// Up to `k` centers with radii. A slot is a ball when it was opened by a
/// guess or has grown a positive radius; the rest are placeholders.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateCover {
    centers: Vec<usize>,
    radii: Vec<f64>,
    opened: Vec<bool>,
}

impl CandidateCover {
    pub fn new(centers: Vec<usize>, radii: Vec<f64>, opened: Vec<bool>) -> Self {
        assert!(centers.len() == radii.len() && radii.len() == opened.len(), "slot lists differ in length");
        assert!(radii.iter().all(|&r| r >= 0.0), "negative radius");
        CandidateCover { centers, radii, opened }
    }

    /// Every `(center, radius)` pair becomes an opened ball.
    pub fn from_balls(balls: &[(usize, f64)]) -> Self {
        Self::new(
            balls.iter().map(|b| b.0).collect(),
            balls.iter().map(|b| b.1).collect(),
            vec![true; balls.len()],
        )
    }

    fn empty() -> Self {
        Self::new(Vec::new(), Vec::new(), Vec::new())
    }

    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn opened(&self) -> &[bool] {
        &self.opened
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn is_ball(&self, slot: usize) -> bool {
        self.opened[slot] || self.radii[slot] > 0.0
    }

    /// Balls in slot order; placeholders are skipped.
    pub fn balls(&self) -> impl Iterator<Item = Ball> + '_ {
        (0..self.len()).filter(|&s| self.is_ball(s)).map(|s| Ball {
            slot: s,
            center: self.centers[s],
            radius: self.radii[s],
        })
    }

    pub fn radius_sum(&self) -> f64 {
        self.radii.iter().sum()
    }

    /// Whether `p` lies in the ball of `slot`.
    pub fn contains(&self, inst: &Instance, slot: usize, p: usize) -> bool {
        self.is_ball(slot) && inst.dist(p, self.centers[slot]) <= self.radii[slot]
    }

    fn completion(&self, inst: &Instance, k: usize) -> CompletionOutput {
        fft_completion(&CompletionInput::new(inst, self.centers.clone(), self.radii.clone(), k))
    }

    /// Applies guess `a` (1-based) for the next iteration with profile radius `r`.
    fn extend(&self, completion: &CompletionOutput, a: usize, r: f64) -> CandidateCover {
        let i = self.len() + 1;
        let mut next = self.clone();
        if a < i {
            next.radii[a - 1] += 3.0 * r;
            next.centers.push(0);
            next.radii.push(0.0);
            next.opened.push(false);
        } else {
            next.centers.push(completion.centers[a - 1]);
            next.radii.push(3.0 * r);
            next.opened.push(true);
        }
        next
    }
}

/// Builds the cover for one profile and one guess tuple.
pub fn centers_and_radii(inst: &Instance, profile: &RadiusProfile, a: &GuessTuple) -> CandidateCover {
    centers_and_radii_traced(inst, profile, a).0
}

/// Like [`centers_and_radii`], also returning the completion computed in each iteration.
pub fn centers_and_radii_traced(
    inst: &Instance,
    profile: &RadiusProfile,
    a: &GuessTuple,
) -> (CandidateCover, Vec<CompletionOutput>) {
    let k = profile.len();
    assert_eq!(a.len(), k, "guess tuple and profile differ in length");
    let mut cover = CandidateCover::empty();
    let mut trace = Vec::with_capacity(k);
    for (&ai, &r) in a.entries().iter().zip(profile.radii()) {
        let completion = cover.completion(inst, k);
        cover = cover.extend(&completion, ai, r);
        trace.push(completion);
    }
    (cover, trace)
}

/// Counters over one enumeration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VisitCounts {
    pub profiles: u64,
    pub tuples: u64,
}

/// Calls `f` with every (profile, tuple, cover) triple: profiles in generation
/// order, tuples in lexicographic order. Completions shared by a tuple prefix
/// are computed once.
pub fn visit_covers<F>(inst: &Instance, eps: f64, mut f: F) -> Result<VisitCounts, ProfileError>
where
    F: FnMut(&RadiusProfile, &GuessTuple, &CandidateCover) -> ControlFlow<()>,
{
    let k = inst.k();
    let mut counts = VisitCounts::default();
    for profile in enumerate_profiles(inst, eps)? {
        counts.profiles += 1;
        let mut prefix = Vec::with_capacity(k);
        let flow = descend(inst, &profile, &CandidateCover::empty(), &mut prefix, &mut counts, &mut f);
        if flow.is_break() {
            break;
        }
    }
    Ok(counts)
}

fn descend<F>(
    inst: &Instance,
    profile: &RadiusProfile,
    cover: &CandidateCover,
    prefix: &mut Vec<usize>,
    counts: &mut VisitCounts,
    f: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&RadiusProfile, &GuessTuple, &CandidateCover) -> ControlFlow<()>,
{
    let k = inst.k();
    let i = cover.len();
    if i == k {
        counts.tuples += 1;
        let tuple = GuessTuple(prefix.clone());
        return f(profile, &tuple, cover);
    }
    let completion = cover.completion(inst, k);
    let r = profile.radii()[i];
    for a in 1..=k {
        let next = cover.extend(&completion, a, r);
        prefix.push(a);
        let flow = descend(inst, profile, &next, prefix, counts, f);
        prefix.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub mode: Mode,
    pub center_rule: CenterRule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub clustering: Clustering,
    pub profiles_tried: u64,
    pub tuples_tried: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Infeasible(#[from] ProfileError),
    #[error("no guess produced a feasible clustering ({profiles_tried} profiles, {tuples_tried} tuples)")]
    NoFeasibleCover { profiles_tried: u64, tuples_tried: u64 },
    #[error(transparent)]
    Mode(#[from] AssignError),
}

/// Tries every profile and every guess tuple and keeps the cheapest feasible
/// clustering. Ties keep the first one found.
pub fn solve(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    let strategy = opts.mode.resolve(inst, opts.center_rule)?;
    let upper = (6.0 + inst.epsilon()) * inst.max_distance();
    let mut best: Option<Clustering> = None;
    let counts = visit_covers(inst, inst.epsilon(), |_, _, cover| {
        if let Some(sol) = assign::assign(inst, cover, strategy) {
            let bound = best.as_ref().map_or(upper, Clustering::cost);
            let better = match best {
                Some(_) => sol.cost() < bound,
                None => sol.cost() <= bound,
            };
            if better && clustering_feasible(inst.constraint(), inst, &sol) {
                best = Some(sol);
            }
        }
        ControlFlow::Continue(())
    })?;
    match best {
        Some(clustering) => Ok(SolveReport {
            clustering,
            profiles_tried: counts.profiles,
            tuples_tried: counts.tuples,
        }),
        None => Err(SolveError::NoFeasibleCover {
            profiles_tried: counts.profiles,
            tuples_tried: counts.tuples,
        }),
    }
}

/// Whether every cluster lies inside some ball and every ball contains some cluster.
pub fn covers_all_optimal(inst: &Instance, cover: &CandidateCover, clusters: &[Vec<usize>]) -> bool {
    let inside = |ball: &Ball, members: &[usize]| members.iter().all(|&p| inst.dist(p, ball.center) <= ball.radius);
    let balls: Vec<Ball> = cover.balls().collect();
    let clusters: Vec<&Vec<usize>> = clusters.iter().filter(|c| !c.is_empty()).collect();
    clusters.iter().all(|c| balls.iter().any(|b| inside(b, c))) && balls.iter().all(|b| clusters.iter().any(|c| inside(b, c)))
}

/// The guess tuple that follows the given optimal centers (sorted by
/// non-increasing radius): in iteration `i`, `aᵢ` is the smallest slot whose
/// completion center is nearest to the `i`-th optimal center.
pub fn canonical_guess(inst: &Instance, profile: &RadiusProfile, optimal_centers: &[usize]) -> GuessTuple {
    let k = profile.len();
    assert_eq!(optimal_centers.len(), k, "one optimal center per profile entry");
    let mut cover = CandidateCover::empty();
    let mut a = Vec::with_capacity(k);
    for (&c, &r) in optimal_centers.iter().zip(profile.radii()) {
        let completion = cover.completion(inst, k);
        let ai = completion.alpha[c] + 1;
        cover = cover.extend(&completion, ai, r);
        a.push(ai);
    }
    GuessTuple(a)
}
