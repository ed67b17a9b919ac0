//! Turning a candidate cover into a clustering.
//!
//! Three strategies share the same input: the balls of a [`CandidateCover`].
//! Zero-radius placeholders never count as balls. A strategy returns
//! `Ok(None)` when the cover cannot be turned into a valid assignment (some
//! point lies in no ball, or the flow is short); the search simply moves on to
//! the next guess.

pub mod flow;

use thiserror::Error;

use crate::constraints::ColorHistogram;
use crate::instance::{Clustering, ConstraintSpec, Instance};
use crate::search::CandidateCover;
use flow::FlowNetwork;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignError {
    #[error("the 1:1 strategy needs exactly two colors of equal size")]
    NotOneToOne,
    #[error("the lower-bound strategy needs a lower_bound constraint")]
    NotLowerBound,
}

/// Which assignment strategy to run on each cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Pick from the instance's constraint.
    #[default]
    Auto,
    Components,
    OneOne,
    LowerBound,
}

/// How `components_assignment` picks the center of a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CenterRule {
    /// The ball center with the largest radius in the component.
    #[default]
    LargestBall,
    /// The component member minimizing the component radius.
    OneCenter,
}

/// A resolved strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Components(CenterRule),
    OneOne,
    LowerBound(usize),
}

/// Two colors with equal counts.
pub fn is_one_to_one(inst: &Instance) -> bool {
    let global = ColorHistogram::global(inst);
    global.counts().len() == 2 && global.counts()[0] == global.counts()[1]
}

impl Mode {
    pub fn resolve(self, inst: &Instance, rule: CenterRule) -> Result<Strategy, AssignError> {
        let ell = match inst.constraint() {
            ConstraintSpec::LowerBound { ell } => Some(*ell),
            _ => None,
        };
        match self {
            Mode::Auto => Ok(match (inst.constraint(), ell) {
                (_, Some(ell)) => Strategy::LowerBound(ell),
                (ConstraintSpec::ExactFairness, _) if is_one_to_one(inst) => Strategy::OneOne,
                _ => Strategy::Components(rule),
            }),
            Mode::Components => Ok(Strategy::Components(rule)),
            Mode::OneOne if is_one_to_one(inst) => Ok(Strategy::OneOne),
            Mode::OneOne => Err(AssignError::NotOneToOne),
            Mode::LowerBound => ell.map(Strategy::LowerBound).ok_or(AssignError::NotLowerBound),
        }
    }
}

/// Runs the resolved strategy on one cover.
pub fn assign(inst: &Instance, cover: &CandidateCover, strategy: Strategy) -> Option<Clustering> {
    match strategy {
        Strategy::Components(rule) => components_assignment_with(inst, cover, rule),
        Strategy::OneOne => one_one_assignment(inst, cover).expect("strategy resolved against this instance"),
        Strategy::LowerBound(ell) => lower_bound_assignment(inst, cover, ell),
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller index becomes the root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Graph on all points with an edge from every ball center to each point in its ball.
#[derive(Debug, Clone)]
pub struct AccessGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    covered: Vec<bool>,
}

impl AccessGraph {
    /// `(center, point)` pairs, self-loops excluded.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Points inside no ball.
    pub fn uncovered(&self) -> Vec<usize> {
        (0..self.n).filter(|&p| !self.covered[p]).collect()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n);
        for &(c, p) in &self.edges {
            uf.union(c, p);
        }
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for p in 0..self.n {
            let r = uf.find(p);
            by_root[r].push(p);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

pub fn build_access_graph(inst: &Instance, cover: &CandidateCover) -> AccessGraph {
    let n = inst.n();
    let mut edges = Vec::new();
    let mut covered = vec![false; n];
    for ball in cover.balls() {
        for p in 0..n {
            if inst.dist(p, ball.center) <= ball.radius {
                covered[p] = true;
                if p != ball.center {
                    edges.push((ball.center, p));
                }
            }
        }
    }
    AccessGraph { n, edges, covered }
}

/// One cluster per access-graph component, centered at the component's
/// largest ball. `None` if some point lies in no ball.
pub fn components_assignment(inst: &Instance, cover: &CandidateCover) -> Option<Clustering> {
    components_assignment_with(inst, cover, CenterRule::LargestBall)
}

pub fn components_assignment_with(inst: &Instance, cover: &CandidateCover, rule: CenterRule) -> Option<Clustering> {
    let graph = build_access_graph(inst, cover);
    if !graph.uncovered().is_empty() {
        return None;
    }
    let mut component_of = vec![0usize; inst.n()];
    let components = graph.components();
    for (i, comp) in components.iter().enumerate() {
        for &p in comp {
            component_of[p] = i;
        }
    }

    let mut centers = Vec::with_capacity(components.len());
    let mut assignment = vec![0usize; inst.n()];
    for (i, comp) in components.iter().enumerate() {
        let center = match rule {
            CenterRule::LargestBall => {
                let mut best: Option<(usize, f64)> = None;
                for ball in cover.balls().filter(|b| component_of[b.center] == i) {
                    best = match best {
                        Some((c, r)) if r > ball.radius || (r == ball.radius && c <= ball.center) => Some((c, r)),
                        _ => Some((ball.center, ball.radius)),
                    };
                }
                best.expect("every covered component holds a ball center").0
            }
            CenterRule::OneCenter => {
                let mut best = (comp[0], f64::INFINITY);
                for &c in comp {
                    let r = inst.radius_of(c, comp);
                    if r < best.1 {
                        best = (c, r);
                    }
                }
                best.0
            }
        };
        centers.push(center);
        for &p in comp {
            assignment[p] = center;
        }
    }
    Some(Clustering::new(inst, centers, assignment).expect("component clustering is valid"))
}

/// Pairs each color-0 point with a color-1 point sharing a ball (a perfect
/// matching found by max-flow) and sends each pair to the first such ball.
/// `None` if no perfect matching exists.
pub fn one_one_assignment(inst: &Instance, cover: &CandidateCover) -> Result<Option<Clustering>, AssignError> {
    if !is_one_to_one(inst) {
        return Err(AssignError::NotOneToOne);
    }
    let n = inst.n();
    let balls: Vec<_> = cover.balls().collect();
    let inside = |b: usize, p: usize| inst.dist(p, balls[b].center) <= balls[b].radius;
    let witness = |p: usize, q: usize| (0..balls.len()).find(|&b| inside(b, p) && inside(b, q));

    let left: Vec<usize> = (0..n).filter(|&p| inst.color(p) == 0).collect();
    let right: Vec<usize> = (0..n).filter(|&p| inst.color(p) == 1).collect();
    let source = 0;
    let sink = n + 1;
    let mut net = FlowNetwork::new(n + 2);
    let mut pair_edges = Vec::new();
    for &p in &left {
        net.add_edge(source, p + 1, 1);
        for &q in &right {
            if witness(p, q).is_some() {
                pair_edges.push((p, q, net.add_edge(p + 1, q + 1, 1)));
            }
        }
    }
    for &q in &right {
        net.add_edge(q + 1, sink, 1);
    }
    if net.max_flow(source, sink) < left.len() as i64 {
        return Ok(None);
    }

    let mut centers = Vec::new();
    let mut assignment = vec![usize::MAX; n];
    for (p, q, e) in pair_edges {
        if net.flow(e) == 1 {
            let b = witness(p, q).expect("edge exists only with a witness");
            let c = balls[b].center;
            assignment[p] = c;
            assignment[q] = c;
            if !centers.contains(&c) {
                centers.push(c);
            }
        }
    }
    centers.sort_unstable();
    Ok(Some(Clustering::new(inst, centers, assignment).expect("perfect matching assigns every point")))
}

/// Gives every ball at least `ell` of its points via max-flow, then sends each
/// remaining point to the first ball containing it. `None` if some point is
/// uncovered or some ball cannot be filled.
pub fn lower_bound_assignment(inst: &Instance, cover: &CandidateCover, ell: usize) -> Option<Clustering> {
    let n = inst.n();
    let balls: Vec<_> = cover.balls().collect();
    if ell.saturating_mul(balls.len()) > n {
        return None;
    }
    let first_ball = |p: usize| (0..balls.len()).find(|&b| inst.dist(p, balls[b].center) <= balls[b].radius);
    if (0..n).any(|p| first_ball(p).is_none()) {
        return None;
    }

    // source, one node per ball, one node per point, sink
    let source = 0;
    let ball_node = |b: usize| 1 + b;
    let point_node = |p: usize| 1 + balls.len() + p;
    let sink = 1 + balls.len() + n;
    let mut net = FlowNetwork::new(sink + 1);
    let mut links = Vec::new();
    for (b, ball) in balls.iter().enumerate() {
        net.add_edge(source, ball_node(b), ell as i64);
        for p in 0..n {
            if inst.dist(p, ball.center) <= ball.radius {
                links.push((b, p, net.add_edge(ball_node(b), point_node(p), 1)));
            }
        }
    }
    for p in 0..n {
        net.add_edge(point_node(p), sink, 1);
    }
    if net.max_flow(source, sink) < (ell * balls.len()) as i64 {
        return None;
    }

    let mut assignment = vec![usize::MAX; n];
    for (b, p, e) in links {
        if net.flow(e) == 1 {
            assignment[p] = balls[b].center;
        }
    }
    for (p, slot) in assignment.iter_mut().enumerate() {
        if *slot == usize::MAX {
            *slot = balls[first_ball(p).expect("checked above")].center;
        }
    }
    let mut centers: Vec<usize> = balls.iter().map(|b| b.center).collect();
    centers.sort_unstable();
    centers.dedup();
    Some(Clustering::new(inst, centers, assignment).expect("every point is assigned"))
}
