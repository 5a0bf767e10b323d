//! Exact maximum flow over rational capacities.
//!
//! Edmonds-Karp: repeatedly augment along a shortest residual path found by
//! BFS. The phase bound is independent of capacities, so the algorithm
//! terminates for arbitrary rationals, and every residual update is exact:
//! the final flow and min cut are exact rational objects, not approximations.
//! With integer capacities every bottleneck is an integer, so flows stay
//! integral; the discrete matcher relies on that.
//!
//! Edges are scanned in insertion order and BFS ties resolve by queue order,
//! so results are deterministic for a fixed construction order.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: Rational,
    flow: Rational,
}

impl Arc {
    fn residual(&self) -> Rational {
        &self.cap - &self.flow
    }

    fn has_residual(&self) -> bool {
        self.cap > self.flow
    }
}

/// A directed flow network. Each [`add_edge`](FlowGraph::add_edge) creates a
/// forward arc and its zero-capacity reverse; the pair occupies ids
/// `2e` and `2e+1` where `e` is the edge handle returned to the caller.
#[derive(Debug, Clone)]
pub struct FlowGraph {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl FlowGraph {
    pub fn new(nodes: usize) -> Self {
        FlowGraph {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.arcs.len() / 2
    }

    /// Adds an edge with the given capacity and returns its handle.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: Rational) -> usize {
        debug_assert!(!cap.is_negative());
        let id = self.arcs.len();
        self.adj[from].push(id);
        self.arcs.push(Arc {
            to,
            cap,
            flow: Rational::zero(),
        });
        self.adj[to].push(id + 1);
        self.arcs.push(Arc {
            to: from,
            cap: Rational::zero(),
            flow: Rational::zero(),
        });
        id / 2
    }

    /// Flow currently assigned to edge `handle`.
    pub fn flow(&self, handle: usize) -> &Rational {
        &self.arcs[handle * 2].flow
    }

    /// Runs Edmonds-Karp from `source` to `sink` and returns the exact
    /// max-flow value. May be called once per graph.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> Rational {
        let mut total = Rational::zero();
        let mut parent: Vec<Option<usize>> = vec![None; self.adj.len()];
        loop {
            // BFS for a shortest augmenting path.
            parent.iter_mut().for_each(|p| *p = None);
            let mut queue = VecDeque::new();
            queue.push_back(source);
            let mut reached = false;
            'bfs: while let Some(u) = queue.pop_front() {
                for &aid in &self.adj[u] {
                    let arc = &self.arcs[aid];
                    if arc.has_residual() && parent[arc.to].is_none() && arc.to != source {
                        parent[arc.to] = Some(aid);
                        if arc.to == sink {
                            reached = true;
                            break 'bfs;
                        }
                        queue.push_back(arc.to);
                    }
                }
            }
            if !reached {
                return total;
            }
            // Bottleneck along the path.
            let mut bottleneck: Option<Rational> = None;
            let mut v = sink;
            while v != source {
                let aid = parent[v].expect("path arc");
                let res = self.arcs[aid].residual();
                bottleneck = Some(match bottleneck {
                    Some(b) if b <= res => b,
                    _ => res,
                });
                v = self.arcs[aid ^ 1].to;
            }
            let push = bottleneck.expect("augmenting path bottleneck");
            debug_assert!(push.is_positive());
            // Augment.
            let mut v = sink;
            while v != source {
                let aid = parent[v].expect("path arc");
                self.arcs[aid].flow += &push;
                self.arcs[aid ^ 1].flow -= &push;
                v = self.arcs[aid ^ 1].to;
            }
            total += push;
        }
    }

    /// Nodes reachable from `source` in the residual graph: the source side
    /// of the canonical minimum cut. Call after [`max_flow`](Self::max_flow).
    pub fn source_side(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &aid in &self.adj[u] {
                let arc = &self.arcs[aid];
                if arc.has_residual() && !seen[arc.to] {
                    seen[arc.to] = true;
                    queue.push_back(arc.to);
                }
            }
        }
        seen
    }
}
