//! Undirected network topology.
//!
//! Nodes are dense `0..N` indices. A [`Network`] is validated on
//! construction (no self loops, indices in range, connected) and immutable
//! afterwards, so it can be shared freely between Monte Carlo workers.

mod edgelist;
mod generate;
mod spectrum;

pub use edgelist::{parse_edge_list, read_edge_list, write_edge_list};
pub use generate::{generate, GraphKind};
pub use spectrum::{largest_eigenvalue, PowerIteration};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("network must have at least one node")]
    Empty,
    #[error("self loop on node {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) references a node outside 0..{2}")]
    IndexOutOfRange(usize, usize, usize),
    #[error("network is disconnected: node {0} is unreachable from node 0")]
    Disconnected(usize),
    #[error("power iteration did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("edge list parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkClass {
    Complete,
    Regular,
    Irregular,
}

impl fmt::Display for NetworkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            NetworkClass::Complete => "complete",
            NetworkClass::Regular => "regular",
            NetworkClass::Irregular => "irregular",
        };
        f.write_str(name)
    }
}

/// Open and closed neighbourhoods of one node.
#[derive(Debug, Clone, Copy)]
pub struct Neighborhood<'a> {
    pub open: &'a [usize],
    pub closed: &'a [usize],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    closed: Vec<Vec<usize>>,
    adjacency: Vec<bool>,
}

impl Network {
    /// Build a network from an edge list. Duplicate and reversed edges are
    /// merged.
    pub fn new(node_count: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        if node_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut edges = BTreeSet::new();
        for &(a, b) in edge_list {
            if a >= node_count || b >= node_count {
                return Err(GraphError::IndexOutOfRange(a, b, node_count));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            edges.insert((a.min(b), a.max(b)));
        }

        let mut neighbors = vec![Vec::new(); node_count];
        let mut adjacency = vec![false; node_count * node_count];
        for &(a, b) in &edges {
            neighbors[a].push(b);
            neighbors[b].push(a);
            adjacency[a * node_count + b] = true;
            adjacency[b * node_count + a] = true;
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let closed = neighbors
            .iter()
            .enumerate()
            .map(|(i, open)| {
                let mut c = open.clone();
                let pos = c.binary_search(&i).unwrap_err();
                c.insert(pos, i);
                c
            })
            .collect();

        let net = Network {
            node_count,
            edges: edges.into_iter().collect(),
            neighbors,
            closed,
            adjacency,
        };
        if let Some(unreached) = net.first_unreachable() {
            return Err(GraphError::Disconnected(unreached));
        }
        Ok(net)
    }

    fn first_unreachable(&self) -> Option<usize> {
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Undirected edges as `(lo, hi)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// `{i}` together with its neighbours, sorted.
    pub fn closed_neighborhood(&self, i: usize) -> &[usize] {
        &self.closed[i]
    }

    pub fn neighborhood(&self, i: usize) -> Neighborhood<'_> {
        Neighborhood {
            open: &self.neighbors[i],
            closed: &self.closed[i],
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.node_count + j]
    }

    /// Dense 0/1 adjacency matrix, row major.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.node_count)
            .map(|i| {
                (0..self.node_count)
                    .map(|j| self.is_adjacent(i, j) as u8)
                    .collect()
            })
            .collect()
    }

    pub fn classify(&self) -> NetworkClass {
        let n = self.node_count;
        if self.closed.iter().all(|c| c.len() == n) {
            return NetworkClass::Complete;
        }
        let d0 = self.degree(0);
        if self.neighbors.iter().all(|nb| nb.len() == d0) {
            NetworkClass::Regular
        } else {
            NetworkClass::Irregular
        }
    }

    pub fn is_complete(&self) -> bool {
        self.classify() == NetworkClass::Complete
    }

    pub fn is_regular(&self) -> bool {
        self.classify() != NetworkClass::Irregular
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_nodes_is_smallest_complete_network() {
        let net = Network::new(2, &[(0, 1)]).unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.edges(), &[(0, 1)]);
        assert_eq!(net.classify(), NetworkClass::Complete);
    }

    #[test]
    fn triangle_closed_neighborhoods_cover_everything() {
        let net = Network::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        for i in 0..3 {
            assert_eq!(net.closed_neighborhood(i), &[0, 1, 2]);
            let nb = net.neighborhood(i);
            assert!(!nb.open.contains(&i));
            assert!(nb.closed.contains(&i));
        }
    }

    #[test]
    fn duplicate_and_reversed_edges_merge() {
        let net = Network::new(2, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(net.edges().len(), 1);
        assert_eq!(net.degree(0), 1);
    }

    #[test]
    fn isolated_node_is_rejected() {
        assert_eq!(
            Network::new(3, &[(0, 1)]),
            Err(GraphError::Disconnected(2))
        );
    }

    #[test]
    fn bad_edges_are_rejected() {
        assert_eq!(Network::new(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Network::new(2, &[(0, 2)]),
            Err(GraphError::IndexOutOfRange(0, 2, 2))
        );
        assert_eq!(Network::new(0, &[]), Err(GraphError::Empty));
    }

    #[test]
    fn single_node_is_complete() {
        let net = Network::new(1, &[]).unwrap();
        assert_eq!(net.classify(), NetworkClass::Complete);
        assert_eq!(net.closed_neighborhood(0), &[0]);
    }

    #[test]
    fn classification_examples() {
        let k5 = generate(&GraphKind::Complete(5)).unwrap();
        assert_eq!(k5.classify(), NetworkClass::Complete);
        let c4 = generate(&GraphKind::Cycle(4)).unwrap();
        assert_eq!(c4.classify(), NetworkClass::Regular);
        let star = generate(&GraphKind::Star(4)).unwrap();
        assert_eq!(star.classify(), NetworkClass::Irregular);
    }

    #[test]
    fn adjacency_is_symmetric_without_diagonal() {
        let net = generate(&GraphKind::Star(5)).unwrap();
        let a = net.adjacency_matrix();
        for i in 0..5 {
            assert_eq!(a[i][i], 0);
            for j in 0..5 {
                assert_eq!(a[i][j], a[j][i]);
            }
        }
    }
}
