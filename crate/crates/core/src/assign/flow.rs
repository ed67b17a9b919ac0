//! Integer max-flow by shortest augmenting paths (Dinic's blocking flows).

use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeId(usize);

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
}

/// A directed network with integer capacities. Each added edge is stored
/// next to its reverse residual arc.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    original: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            original: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> EdgeId {
        assert!(cap >= 0, "negative capacity");
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc { to: from, cap: 0 });
        self.original.push(cap);
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        EdgeId(id)
    }

    /// Flow currently carried by an edge added with [`add_edge`](Self::add_edge).
    pub fn flow(&self, e: EdgeId) -> i64 {
        self.original[e.0 / 2] - self.arcs[e.0].cap
    }

    /// Pushes as much additional flow from `s` to `t` as possible and returns the amount.
    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        assert_ne!(s, t, "source and sink coincide");
        let n = self.num_nodes();
        let mut total = 0;
        let mut level = vec![usize::MAX; n];
        let mut next = vec![0usize; n];
        while self.bfs(s, t, &mut level) {
            next.iter_mut().for_each(|x| *x = 0);
            loop {
                let pushed = self.dfs(s, t, i64::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    fn bfs(&self, s: usize, t: usize, level: &mut [usize]) -> bool {
        level.iter_mut().for_each(|l| *l = usize::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && level[arc.to] == usize::MAX {
                    level[arc.to] = level[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        level[t] != usize::MAX
    }

    fn dfs(&mut self, v: usize, t: usize, limit: i64, level: &[usize], next: &mut [usize]) -> i64 {
        if v == t {
            return limit;
        }
        while next[v] < self.adj[v].len() {
            let a = self.adj[v][next[v]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap);
            if cap > 0 && level[to] == level[v] + 1 {
                let pushed = self.dfs(to, t, limit.min(cap), level, next);
                if pushed > 0 {
                    self.arcs[a].cap -= pushed;
                    self.arcs[a ^ 1].cap += pushed;
                    return pushed;
                }
            }
            next[v] += 1;
        }
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let mut g = FlowNetwork::new(2);
        let e = g.add_edge(0, 1, 3);
        assert_eq!(g.max_flow(0, 1), 3);
        assert_eq!(g.flow(e), 3);
    }

    #[test]
    fn complete_two_by_two() {
        let mut g = FlowNetwork::new(6);
        for l in 1..=2 {
            g.add_edge(0, l, 1);
            g.add_edge(l + 2, 5, 1);
            for r in 3..=4 {
                g.add_edge(l, r, 1);
            }
        }
        assert_eq!(g.max_flow(0, 5), 2);
    }

    #[test]
    fn needs_residual_rerouting() {
        // greedy path 0-1-2-3 blocks; optimum 2 uses the back arc on 1-2
        let mut g = FlowNetwork::new(4);
        g.add_edge(0, 1, 1);
        g.add_edge(0, 2, 1);
        g.add_edge(1, 2, 1);
        g.add_edge(1, 3, 1);
        g.add_edge(2, 3, 1);
        assert_eq!(g.max_flow(0, 3), 2);
    }

    #[test]
    fn disconnected_sink() {
        let mut g = FlowNetwork::new(3);
        g.add_edge(0, 1, 5);
        assert_eq!(g.max_flow(0, 2), 0);
    }
}
