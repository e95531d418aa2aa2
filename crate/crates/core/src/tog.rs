//! The layered time-ordered graph of a temporal network.
//!
//! Node `i` becomes copies `i_1..i_{T+1}`, one per layer; a controller on
//! node `o` adds copies `I_0..I_T`. Edges all step one layer forward:
//!
//! * time-flow `i_t -> i_{t+1}` (fixed weight 1),
//! * interaction `i_t -> j_{t+1}` and `j_t -> i_{t+1}` for a contact
//!   `(i, j, t)`, both carrying that contact's parameter,
//! * injection `I_t -> o_{t+1}` (fixed weight 1).
//!
//! The graph is acyclic by construction and a signal injected at `I_t` can
//! only ride snapshots `t+1..T`, which is exactly what column `t` of the
//! controllability matrix sees.

use std::collections::VecDeque;

use crate::temporal_graph::{NodeId, ParamId, TemporalNetwork, TimeStep};
use crate::trees::TemporalTree;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TogVertex {
    /// copy of a network node at a layer in `1..=T+1`
    Copy { node: NodeId, layer: usize },
    /// controller copy at a time in `0..=T`
    Controller { time: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TogEdge {
    TimeFlow,
    Interaction(ParamId),
    Injection,
}

#[derive(Debug, Clone)]
pub struct TimeOrderedGraph {
    n: usize,
    horizon: TimeStep,
    controlled: NodeId,
    /// out-edges per vertex, already in BFS tie-break order: time-flow
    /// first, then interactions ascending by neighbor id
    adj: Vec<Vec<(u32, TogEdge)>>,
    labels: Vec<String>,
}

impl TimeOrderedGraph {
    fn copy_index(&self, node: NodeId, layer: usize) -> u32 {
        ((layer - 1) * self.n + node as usize) as u32
    }

    fn controller_index(&self, time: usize) -> u32 {
        (self.n * (self.horizon + 1) + time) as u32
    }

    pub fn vertex(&self, index: u32) -> TogVertex {
        let index = index as usize;
        let copies = self.n * (self.horizon + 1);
        if index < copies {
            TogVertex::Copy {
                node: (index % self.n) as NodeId,
                layer: index / self.n + 1,
            }
        } else {
            TogVertex::Controller {
                time: index - copies,
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        (self.n + 1) * (self.horizon + 1)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn controlled(&self) -> NodeId {
        self.controlled
    }

    pub fn horizon(&self) -> TimeStep {
        self.horizon
    }

    /// (time-flow, interaction, injection) edge totals
    pub fn edge_kind_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for edges in &self.adj {
            for (_, kind) in edges {
                match kind {
                    TogEdge::TimeFlow => counts.0 += 1,
                    TogEdge::Interaction(_) => counts.1 += 1,
                    TogEdge::Injection => counts.2 += 1,
                }
            }
        }
        counts
    }

    /// edge-list text dump for debugging: `kind, from-layer, from-node,
    /// to-node, parameter-id` (layer of a controller copy is its time,
    /// parameter blank for fixed-weight edges)
    pub fn dump_edge_list(&self) -> String {
        let mut out = String::from("kind,from_layer,from_node,to_node,parameter_id\n");
        for (from, edges) in self.adj.iter().enumerate() {
            for &(to, kind) in edges {
                let (from_layer, from_node) = match self.vertex(from as u32) {
                    TogVertex::Copy { node, layer } => {
                        (layer, self.labels[node as usize].clone())
                    }
                    TogVertex::Controller { time } => (time, "controller".into()),
                };
                let to_node = match self.vertex(to) {
                    TogVertex::Copy { node, .. } => self.labels[node as usize].clone(),
                    TogVertex::Controller { .. } => unreachable!("no edges into controller copies"),
                };
                let (kind, param) = match kind {
                    TogEdge::TimeFlow => ("time-flow", String::new()),
                    TogEdge::Interaction(p) => ("interaction", p.to_string()),
                    TogEdge::Injection => ("injection", String::new()),
                };
                out.push_str(&format!("{kind},{from_layer},{from_node},{to_node},{param}\n"));
            }
        }
        out
    }
}

/// builds the time-ordered graph for one controlled node
pub fn build_tog(net: &TemporalNetwork, controlled: NodeId) -> Result<TimeOrderedGraph> {
    let n = net.node_count();
    if controlled as usize >= n {
        return Err(Error::NodeOutOfRange(controlled));
    }
    let horizon = net.horizon();
    let mut tog = TimeOrderedGraph {
        n,
        horizon,
        controlled,
        adj: vec![Vec::new(); (n + 1) * (horizon + 1)],
        labels: net.labels().to_vec(),
    };
    for layer in 1..=horizon {
        for node in 0..n as NodeId {
            let from = tog.copy_index(node, layer) as usize;
            let onward = tog.copy_index(node, layer + 1);
            tog.adj[from].push((onward, TogEdge::TimeFlow));
            for &(neighbor, param) in net.neighbors(layer, node) {
                let across = tog.copy_index(neighbor, layer + 1);
                tog.adj[from].push((across, TogEdge::Interaction(param)));
            }
        }
    }
    for time in 0..=horizon {
        let from = tog.controller_index(time) as usize;
        let landing = tog.copy_index(controlled, time + 1);
        tog.adj[from].push((landing, TogEdge::Injection));
    }
    Ok(tog)
}

/// BFS spanning tree rooted at controller copy `I_t`, projected down to a
/// temporal tree on network nodes.
///
/// Every reachable copy gets exactly one parent (its first discoverer, under
/// the fixed expansion order), and each network node's first-reached copy
/// defines its parent node, its path of interaction parameters and its entry
/// in the tree pattern.
pub fn bfs_spanning_tree(tog: &TimeOrderedGraph, root_time: usize) -> TemporalTree {
    assert!(root_time <= tog.horizon, "root time {root_time} exceeds horizon {}", tog.horizon);
    let n = tog.n;
    let mut visited = vec![false; tog.vertex_count()];
    // per network node: (parent node, parameter) of the interaction that
    // first reached it; the controlled node has no interaction parent
    let mut parent: Vec<Option<(NodeId, ParamId)>> = vec![None; n];
    let mut reached: Vec<bool> = vec![false; n];
    let mut discovery_order: Vec<NodeId> = Vec::new();

    let root = tog.controller_index(root_time);
    visited[root as usize] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(at) = queue.pop_front() {
        for &(to, kind) in &tog.adj[at as usize] {
            if visited[to as usize] {
                continue;
            }
            visited[to as usize] = true;
            let TogVertex::Copy { node, .. } = tog.vertex(to) else {
                unreachable!("edges only lead to node copies")
            };
            if !reached[node as usize] {
                reached[node as usize] = true;
                discovery_order.push(node);
                if let TogEdge::Interaction(param) = kind {
                    let TogVertex::Copy { node: from, .. } = tog.vertex(at) else {
                        unreachable!("interactions start at node copies")
                    };
                    parent[node as usize] = Some((from, param));
                }
            }
            queue.push_back(to);
        }
    }

    TemporalTree::from_discovery(tog.controlled, root_time, &discovery_order, &parent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{six_node_fixture, worked_example};
    use crate::temporal_graph::TemporalNetwork;

    #[test]
    fn six_node_edge_counts() {
        let net = six_node_fixture();
        let tog = build_tog(&net, 0).unwrap();
        // N*T time-flow, 2*events interaction, T+1 injection
        assert_eq!(tog.edge_kind_counts(), (36, 38, 7));
        assert_eq!(tog.vertex_count(), 7 * 7);
    }

    #[test]
    fn lone_node_graph() {
        let net = TemporalNetwork::from_events(vec!["x".into()], 2, std::iter::empty()).unwrap();
        let tog = build_tog(&net, 0).unwrap();
        assert_eq!(tog.edge_kind_counts(), (2, 0, 3));
        assert_eq!(tog.vertex_count(), 6); // 3 copies + 3 controller copies
    }

    #[test]
    fn unknown_controller_rejected() {
        let net = six_node_fixture();
        assert!(build_tog(&net, 6).is_err());
    }

    #[test]
    fn edges_step_exactly_one_layer() {
        let net = six_node_fixture();
        let tog = build_tog(&net, 2).unwrap();
        for from in 0..tog.vertex_count() as u32 {
            let from_layer = match tog.vertex(from) {
                TogVertex::Copy { layer, .. } => layer,
                TogVertex::Controller { time } => time, // injection lands at time+1
            };
            for &(to, _) in &tog.adj[from as usize] {
                match tog.vertex(to) {
                    TogVertex::Copy { layer, .. } => assert_eq!(layer, from_layer + 1),
                    TogVertex::Controller { .. } => panic!("edge into a controller copy"),
                }
            }
        }
    }

    #[test]
    fn last_root_reaches_only_the_controlled_node() {
        let net = six_node_fixture();
        let tog = build_tog(&net, 3).unwrap();
        let tree = bfs_spanning_tree(&tog, net.horizon());
        assert_eq!(tree.nodes().len(), 1);
        assert!(tree.nodes().contains(&3));
        assert!(tree.pattern().is_empty());
    }

    #[test]
    fn full_reachability_from_first_root() {
        // controller on A, root I_0: one-hop-per-snapshot semantics reach
        // {A, B, C, F} in the 6-node table
        let net = six_node_fixture();
        let tog = build_tog(&net, 0).unwrap();
        let tree = bfs_spanning_tree(&tog, 0);
        let nodes: Vec<&str> = tree.nodes().iter().map(|&i| net.label(i)).collect();
        assert_eq!(nodes, ["A", "B", "C", "F"]);
    }

    #[test]
    fn trees_shrink_as_roots_move_later() {
        let net = six_node_fixture();
        for controlled in 0..net.node_count() as u32 {
            let tog = build_tog(&net, controlled).unwrap();
            let mut previous = bfs_spanning_tree(&tog, 0).nodes().clone();
            for t in 1..=net.horizon() {
                let current = bfs_spanning_tree(&tog, t).nodes().clone();
                assert!(
                    current.is_subset(&previous),
                    "tree at root {t} is not contained in the one at {}",
                    t - 1
                );
                previous = current;
            }
        }
    }

    #[test]
    fn worked_example_first_tree_paths() {
        let net = worked_example();
        let tog = build_tog(&net, 0).unwrap();
        // root I_1: snapshot 1 is out of reach, snapshots 2..4 give
        // A -> B (param 0), B -> C (param 1), B -> D (param 3)
        let tree = bfs_spanning_tree(&tog, 1);
        assert_eq!(tree.path(1).unwrap(), &[0]);
        assert_eq!(tree.path(2).unwrap(), &[0, 1]);
        assert_eq!(tree.path(3).unwrap(), &[0, 3]);
        assert_eq!(tree.path(0).unwrap(), &[] as &[u32]);
    }

    #[test]
    fn dump_lists_every_edge() {
        let net = worked_example();
        let tog = build_tog(&net, 0).unwrap();
        let dump = tog.dump_edge_list();
        assert_eq!(dump.lines().count() - 1, tog.edge_count());
        assert!(dump.lines().any(|l| l.starts_with("injection,0,controller,A")));
    }
}
