use super::{GraphError, Network};

/// Power-iteration settings for the adjacency spectral radius.
#[derive(Debug, Clone, Copy)]
pub struct PowerIteration {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

/// Largest adjacency eigenvalue (the Perron root) by power iteration from the
/// all-ones vector.
///
/// Iterates on `A + I`: for a connected graph that matrix is primitive, so
/// its Perron root is strictly dominant even when the graph is bipartite
/// (where `-λ_max` is also an eigenvalue of `A`). Stops once the residual
/// `‖Av - λv‖` drops below `tol`, which for a symmetric matrix bounds the
/// distance from the estimate to an eigenvalue.
pub fn largest_eigenvalue(net: &Network, opts: PowerIteration) -> Result<f64, GraphError> {
    let n = net.node_count();
    if n == 1 {
        return Ok(0.0);
    }
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut av = vec![0.0; n];

    for _ in 0..opts.max_iter {
        for (i, out) in av.iter_mut().enumerate() {
            *out = net.neighbors(i).iter().map(|&j| v[j]).sum();
        }
        let lambda: f64 = v.iter().zip(&av).map(|(a, b)| a * b).sum();
        let residual = v
            .iter()
            .zip(&av)
            .map(|(x, ax)| (ax - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual < opts.tol {
            return Ok(lambda);
        }
        // shifted step: v <- (A + I) v / ‖(A + I) v‖
        let mut norm = 0.0;
        for (x, ax) in v.iter_mut().zip(&av) {
            *x += ax;
            norm += *x * *x;
        }
        let norm = norm.sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    Err(GraphError::NonConvergence(opts.max_iter))
}
