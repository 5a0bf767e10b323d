//! Constructing the disjoint subsets `B_k` exactly.
//!
//! The set the ξ-refinement converges to can be computed in closed form:
//! put the demands on one side of a flow network, the Venn atoms on the
//! other, and ship measure from demands into atoms. A maximum flow saturates
//! every demand iff the Hall condition holds, and the per-atom flow split
//! tells us exactly how much of each atom every `B_k` receives;
//! carve/partition then realize those amounts as concrete interval sets.

use num_traits::Zero;

use crate::atoms::{atomize, AtomTable, SubsetMask};
use crate::error::{Error, Result};
use crate::flow::FlowGraph;
use crate::instance::{Instance, Violation};
use crate::interval::IntervalSet;
use crate::rational::Rational;

/// The atom–demand network: `source → demand k` with capacity `m_k`,
/// `demand k → atom Q` for `k ∈ Q` with the finite stand-in `Σ m_k` for an
/// unbounded capacity (no flow can exceed it), and `atom Q → sink` with
/// capacity `ν(S_Q)`. Node and edge order is pinned: demand index first,
/// then ascending mask.
#[derive(Debug, Clone)]
pub struct AtomNetwork {
    graph: FlowGraph,
    n: usize,
    atom_masks: Vec<SubsetMask>,
    demand_edges: Vec<usize>,
    assign_edges: Vec<(usize, usize, usize)>, // (demand k, atom index, edge handle)
    source: usize,
    sink: usize,
}

pub fn build_network(inst: &Instance, table: &AtomTable) -> AtomNetwork {
    let n = inst.n();
    let atom_masks: Vec<SubsetMask> = table.iter().map(|(m, _)| m).collect();
    let atoms = atom_masks.len();
    // node ids: source, demands 1..=n, atoms n+1..=n+atoms, sink last
    let source = 0;
    let sink = n + atoms + 1;
    let mut graph = FlowGraph::new(sink + 1);
    let interior_cap = inst.total_demand();

    let mut demand_edges = Vec::with_capacity(n);
    for (k, m) in inst.demands().iter().enumerate() {
        demand_edges.push(graph.add_edge(source, 1 + k, m.clone()));
    }
    let mut assign_edges = Vec::new();
    for k in 0..n {
        for (idx, mask) in atom_masks.iter().enumerate() {
            if mask.contains(k) {
                let handle = graph.add_edge(1 + k, 1 + n + idx, interior_cap.clone());
                assign_edges.push((k, idx, handle));
            }
        }
    }
    for (idx, (_, atom)) in table.iter().enumerate() {
        graph.add_edge(1 + n + idx, sink, atom.measure());
    }

    AtomNetwork {
        graph,
        n,
        atom_masks,
        demand_edges,
        assign_edges,
        source,
        sink,
    }
}

impl AtomNetwork {
    pub fn demand_node_count(&self) -> usize {
        self.n
    }

    pub fn atom_node_count(&self) -> usize {
        self.atom_masks.len()
    }

    pub fn node_count(&self) -> usize {
        self.n + self.atom_masks.len() + 2
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Runs the exact max flow and returns the solved network.
    pub fn solve(mut self) -> FlowOutcome {
        let value = self.graph.max_flow(self.source, self.sink);
        FlowOutcome { value, net: self }
    }
}

/// A solved atom–demand network.
#[derive(Debug, Clone)]
pub struct FlowOutcome {
    value: Rational,
    net: AtomNetwork,
}

impl FlowOutcome {
    /// The exact max-flow value.
    pub fn value(&self) -> &Rational {
        &self.value
    }

    /// Flow shipped from demand `k` into each atom, ascending mask order,
    /// zero entries skipped.
    pub fn demand_atom_flows(&self, k: usize) -> Vec<(SubsetMask, Rational)> {
        self.net
            .assign_edges
            .iter()
            .filter(|(kk, _, _)| *kk == k)
            .filter_map(|(_, idx, handle)| {
                let f = self.net.graph.flow(*handle);
                if f.is_zero() {
                    None
                } else {
                    Some((self.net.atom_masks[*idx], f.clone()))
                }
            })
            .collect()
    }

    /// Flow on the `source → demand k` edge.
    pub fn demand_flow(&self, k: usize) -> &Rational {
        self.net.graph.flow(self.net.demand_edges[k])
    }

    /// Demand indices on the source side of the canonical minimum cut.
    /// When the flow value falls short of `Σ m_k` this is a Hall-violating
    /// index set: the cut value equals `Σ_{k∉I} m_k + ν(∪_{i∈I} A_i)`.
    pub fn cut_demand_mask(&self) -> Result<SubsetMask> {
        let side = self.net.graph.source_side(self.net.source);
        let mut bits = 0u32;
        for k in 0..self.net.n {
            if side[1 + k] {
                bits |= 1 << k;
            }
        }
        SubsetMask::new(bits, self.net.n)
    }
}

/// Solved allocation: pairwise disjoint `B_k ⊆ A_k` with `ν(B_k) = m_k`,
/// all exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    parts: Vec<IntervalSet>,
}

impl Allocation {
    pub fn new(parts: Vec<IntervalSet>) -> Self {
        Allocation { parts }
    }

    pub fn parts(&self) -> &[IntervalSet] {
        &self.parts
    }

    pub fn part(&self, k: usize) -> &IntervalSet {
        &self.parts[k]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Result of [`allocate_exact`]: infeasibility is a certificate, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AllocationOutcome {
    Allocated(Allocation),
    Infeasible(Violation),
}

impl AllocationOutcome {
    pub fn allocation(&self) -> Option<&Allocation> {
        match self {
            AllocationOutcome::Allocated(a) => Some(a),
            AllocationOutcome::Infeasible(_) => None,
        }
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            AllocationOutcome::Allocated(_) => None,
            AllocationOutcome::Infeasible(v) => Some(v),
        }
    }
}

/// Builds and solves the atom–demand network for `inst`.
pub fn solve_atom_network(inst: &Instance) -> Result<FlowOutcome> {
    let table = atomize(inst.subsets())?;
    Ok(build_network(inst, &table).solve())
}

/// Constructs disjoint `B_k ⊆ A_k` with `ν(B_k) = m_k` exactly, or returns
/// the min-cut violating set. Within an atom the used portion is carved from
/// the left and handed out in ascending demand order, so the output is
/// deterministic.
pub fn allocate_exact(inst: &Instance) -> Result<AllocationOutcome> {
    let table = atomize(inst.subsets())?;
    let outcome = build_network(inst, &table).solve();
    if *outcome.value() < inst.total_demand() {
        return Ok(AllocationOutcome::Infeasible(cut_violation(
            inst, &outcome,
        )?));
    }

    let mut pieces_per_demand: Vec<Vec<IntervalSet>> = vec![Vec::new(); inst.n()];
    for (mask, atom) in table.iter() {
        // Gather positive flows into this atom, ascending demand index.
        let mut shares: Vec<(usize, Rational)> = Vec::new();
        for k in mask.members() {
            for (m, f) in outcome.demand_atom_flows(k) {
                if m == mask {
                    shares.push((k, f));
                }
            }
        }
        if shares.is_empty() {
            continue;
        }
        let mut used = Rational::zero();
        for (_, f) in &shares {
            used += f;
        }
        let used_region = atom.carve(&used)?;
        let sizes: Vec<Rational> = shares.iter().map(|(_, f)| f.clone()).collect();
        let split = used_region.partition(&sizes)?;
        for ((k, _), piece) in shares.into_iter().zip(split) {
            pieces_per_demand[k].push(piece);
        }
    }
    let parts: Vec<IntervalSet> = pieces_per_demand
        .into_iter()
        .map(|pieces| IntervalSet::union_all(pieces.iter()))
        .collect();
    Ok(AllocationOutcome::Allocated(Allocation::new(parts)))
}

/// Extracts the violating certificate from a short max flow, evaluating both
/// sides of the inequality through direct set algebra.
pub(crate) fn cut_violation(inst: &Instance, outcome: &FlowOutcome) -> Result<Violation> {
    let i_set = outcome.cut_demand_mask()?;
    let union_measure = inst.union_of(i_set).measure();
    let demand_sum = inst.demand_sum(i_set);
    if union_measure >= demand_sum {
        return Err(Error::InvariantViolation(format!(
            "min-cut set {i_set} does not violate the Hall condition \
             ({union_measure} >= {demand_sum})"
        )));
    }
    Ok(Violation {
        i_set,
        union_measure,
        demand_sum,
    })
}
