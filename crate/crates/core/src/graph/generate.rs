use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};

use super::{GraphError, Network};
use crate::rng::graph_rng;

/// Deterministic and random topologies used in experiments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    Complete(usize),
    Cycle(usize),
    Star(usize),
    /// Preferential attachment grown from a complete seed graph on `m`
    /// nodes; every later node links to `m` distinct existing nodes.
    BarabasiAlbert { nodes: usize, m: usize, seed: u64 },
}

pub fn generate(kind: &GraphKind) -> Result<Network, GraphError> {
    match *kind {
        GraphKind::Complete(n) => {
            check_nodes(n)?;
            let edges: Vec<_> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            Network::new(n, &edges)
        }
        GraphKind::Cycle(n) => {
            if n < 3 {
                return Err(GraphError::InvalidParameter(format!(
                    "a cycle needs at least 3 nodes, got {n}"
                )));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Network::new(n, &edges)
        }
        GraphKind::Star(n) => {
            check_nodes(n)?;
            let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
            Network::new(n, &edges)
        }
        GraphKind::BarabasiAlbert { nodes, m, seed } => barabasi_albert(nodes, m, seed),
    }
}

fn check_nodes(n: usize) -> Result<(), GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidParameter("node count must be ≥ 1".into()));
    }
    Ok(())
}

fn barabasi_albert(nodes: usize, m: usize, seed: u64) -> Result<Network, GraphError> {
    if m == 0 || m >= nodes {
        return Err(GraphError::InvalidParameter(format!(
            "Barabasi-Albert needs 1 ≤ m < N, got m={m}, N={nodes}"
        )));
    }
    let mut rng = graph_rng(seed);
    let mut edges: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let mut degree = vec![0usize; nodes];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }

    for v in m..nodes {
        let mut candidates: Vec<usize> = (0..v).collect();
        let mut targets = Vec::with_capacity(m);
        for _ in 0..m {
            // A single-node seed has no edges yet; attach uniformly then.
            let all_zero = candidates.iter().all(|&c| degree[c] == 0);
            let chosen = if all_zero {
                *candidates.choose(&mut rng).expect("candidates non-empty")
            } else {
                *candidates
                    .choose_weighted(&mut rng, |&c| degree[c] as f64)
                    .expect("positive total weight")
            };
            candidates.retain(|&c| c != chosen);
            targets.push(chosen);
        }
        for t in targets {
            edges.push((t, v));
            degree[t] += 1;
            degree[v] += 1;
        }
    }
    Network::new(nodes, &edges)
}
