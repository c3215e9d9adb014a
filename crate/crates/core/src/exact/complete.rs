use super::{ExactError, SequenceDistribution};
use crate::contagion::{DeltaSchedule, UrnInit};
use crate::graph::Network;
use crate::mass::Mass;

/// One-step marginal `P(Z_{i,n} = 1)` in a complete network: always `ρ`.
pub fn complete_marginal<P: Mass>(rho: &P) -> P {
    rho.clone()
}

/// `P(Z_{i,n} = 1, Z_{i,1} = 1)` in a complete network of `N` nodes with
/// `ρ = R̄/T̄` and `δ = NΔ/T̄`; the cross-node probability
/// `P(Z_{k,n} = 1, Z_{i,1} = 1)` has the same value.
pub fn complete_n1_joint<P: Mass>(rho: &P, delta: &P, node_count: usize) -> P {
    let n = P::from_u64(node_count as u64);
    let one = P::one();
    let inner = rho.clone()
        + (one.clone() + (n.clone() - one.clone()) * rho.clone()) * delta.clone() / n;
    rho.clone() * inner / (one + delta.clone())
}

/// The pair `(P(Z_{1,2}=1, Z_{1,1}=1), P(Z_{1,3}=1, Z_{1,2}=1))` for two
/// connected nodes. Unequal values show the node process is not stationary.
pub fn nonstationarity_witness<P: Mass>(rho: &P, delta: &P) -> (P, P) {
    let c = |k: u64| P::from_u64(k);
    let (r, d) = (rho.clone(), delta.clone());
    let one = P::one();
    let first = complete_n1_joint(&r, &d, 2);
    let d2 = d.clone() * d.clone();
    let d3 = d2.clone() * d.clone();
    let num = c(4) * r.clone()
        + d.clone() * (c(2) + c(14) * r.clone())
        + d2 * (c(6) + c(14) * r.clone())
        + d3 * (c(5) + c(3) * r.clone());
    let den = c(4)
        * (one.clone() + d.clone())
        * (one.clone() + d.clone())
        * (one + c(2) * d);
    (first, r * num / den)
}

/// Law of any single node's first `n` draws in a complete network with a
/// constant schedule.
///
/// All nodes share one super urn, so the state reduces to the node's own
/// past draws plus the total number of red draws so far; the other `N − 1`
/// nodes contribute a binomial number of reds each step. Cost is
/// `O(2^n · n · N²)` instead of `2^{nN}`.
pub fn complete_node_distribution<P: Mass>(
    net: &Network,
    init: &UrnInit<P>,
    sched: &DeltaSchedule<P>,
    n: usize,
) -> Result<SequenceDistribution<P>, ExactError> {
    if !net.is_complete() {
        return Err(ExactError::NotComplete);
    }
    init.check_network(net)?;
    sched.validate(net.node_count())?;
    let (dr, db) = match sched {
        DeltaSchedule::Constant { red, black } => (red.clone(), black.clone()),
        _ => {
            return Err(ExactError::UnsupportedSchedule(
                "complete-network recursion needs a constant schedule".into(),
            ))
        }
    };
    if n > 26 {
        return Err(ExactError::CapExceeded { bits: n, cap: 26 });
    }
    let nodes = net.node_count();
    let others = nodes - 1;
    let r_bar = init.red().iter().fold(P::zero(), |a, v| a + v.clone());
    let t_bar = init.totals().into_iter().fold(P::zero(), |a, v| a + v);

    let mut binom = vec![P::one(); others + 1];
    for b in 1..=others {
        binom[b] = binom[b - 1].clone() * P::from_u64((others - b + 1) as u64) / P::from_u64(b as u64);
    }

    // layer[prefix][k]: probability of own prefix with k reds network-wide.
    let mut layer: Vec<Vec<P>> = vec![vec![P::one()]];
    let mut pow_s = vec![P::one(); others + 1];
    let mut pow_f = vec![P::one(); others + 1];
    for t in 0..n {
        let kmax = t * nodes;
        let next_kmax = kmax + nodes;
        let mut next: Vec<Vec<P>> = vec![vec![P::zero(); next_kmax + 1]; 1 << (t + 1)];
        for k in 0..=kmax {
            if layer.iter().all(|row| row[k].is_zero()) {
                continue;
            }
            let kk = P::from_u64(k as u64);
            let blacks = P::from_u64((kmax - k) as u64);
            let s = (r_bar.clone() + dr.clone() * kk.clone())
                / (t_bar.clone() + dr.clone() * kk + db.clone() * blacks);
            let f = P::one() - s.clone();
            for b in 1..=others {
                pow_s[b] = pow_s[b - 1].clone() * s.clone();
                pow_f[b] = pow_f[b - 1].clone() * f.clone();
            }
            let rest: Vec<P> = (0..=others)
                .map(|b| binom[b].clone() * pow_s[b].clone() * pow_f[others - b].clone())
                .collect();
            for (prefix, row) in layer.iter().enumerate() {
                let p = &row[k];
                if p.is_zero() {
                    continue;
                }
                for (own, own_p, bit) in [(1usize, &s, 1usize << t), (0, &f, 0)] {
                    let base = p.clone() * own_p.clone();
                    let target = &mut next[prefix | bit];
                    for (b, rb) in rest.iter().enumerate() {
                        target[k + own + b] += base.clone() * rb.clone();
                    }
                }
            }
        }
        layer = next;
    }
    let probs = layer
        .into_iter()
        .map(|row| row.into_iter().fold(P::zero(), |a, v| a + v))
        .collect();
    Ok(SequenceDistribution::new(n, probs))
}
