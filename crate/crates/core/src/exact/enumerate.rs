use super::{bit_index, ExactError, JointTable, SequenceDistribution};
use crate::contagion::{DeltaSchedule, MemoryMode, NetworkState, UrnInit};
use crate::graph::Network;
use crate::mass::Mass;

/// Default limit on `N·n`, the number of binary draws in one assignment.
pub const DEFAULT_CAP: usize = 24;

fn check_cap(bits: usize, cap: usize) -> Result<(), ExactError> {
    if bits > cap || bits > 40 {
        Err(ExactError::CapExceeded { bits, cap })
    } else {
        Ok(())
    }
}

/// Probability of one complete assignment, by the chain rule along its own
/// trajectory. `seqs[i][t-1]` is node `i`'s draw at step `t`.
pub fn joint_probability<P: Mass>(
    net: &Network,
    init: &UrnInit<P>,
    sched: &DeltaSchedule<P>,
    seqs: &[Vec<bool>],
) -> Result<P, ExactError> {
    let mut state = NetworkState::new(net, init, MemoryMode::Infinite)?;
    let n = seqs.first().map_or(0, Vec::len);
    if seqs.len() != net.node_count() || seqs.iter().any(|s| s.len() != n) {
        return Err(ExactError::Domain(
            "assignment must hold one equal-length sequence per node".into(),
        ));
    }
    let mut p = P::one();
    let mut draws = vec![false; seqs.len()];
    for t in 0..n {
        let s = state.conditional_draw_probabilities(net);
        for (i, seq) in seqs.iter().enumerate() {
            draws[i] = seq[t];
            p = p * if seq[t] { s[i].clone() } else { P::one() - s[i].clone() };
        }
        state.apply_draws(net, &draws, sched)?;
    }
    Ok(p)
}

/// Visit every draw history of length `n` started from `start`, with its
/// probability and the resulting state. Zero-probability branches are
/// skipped.
pub fn for_each_history<P: Mass, F>(
    net: &Network,
    start: &NetworkState<P>,
    sched: &DeltaSchedule<P>,
    n: usize,
    mut visit: F,
) -> Result<(), ExactError>
where
    F: FnMut(u64, &P, &NetworkState<P>),
{
    check_cap(net.node_count() * n, 63)?;
    let walker = Walker { net, sched, horizon: n };
    walker.step(start, 1, 0, P::one(), &mut visit);
    Ok(())
}

struct Walker<'a, P> {
    net: &'a Network,
    sched: &'a DeltaSchedule<P>,
    horizon: usize,
}

impl<P: Mass> Walker<'_, P> {
    fn step<F>(&self, state: &NetworkState<P>, t: usize, bits: u64, prob: P, visit: &mut F)
    where
        F: FnMut(u64, &P, &NetworkState<P>),
    {
        if t > self.horizon {
            visit(bits, &prob, state);
            return;
        }
        let s = state.conditional_draw_probabilities(self.net);
        // Deeper steps refill their own buffer, so this one is per level.
        let mut draws = vec![false; s.len()];
        self.node(state, &s, t, 0, bits, prob, &mut draws, visit);
    }

    #[allow(clippy::too_many_arguments)]
    fn node<F>(
        &self,
        state: &NetworkState<P>,
        s: &[P],
        t: usize,
        i: usize,
        bits: u64,
        prob: P,
        draws: &mut [bool],
        visit: &mut F,
    ) where
        F: FnMut(u64, &P, &NetworkState<P>),
    {
        if prob.is_zero() {
            return;
        }
        let n = s.len();
        if i == n {
            let next = state
                .with_draws(self.net, draws, self.sched)
                .expect("draw vector matches node count");
            self.step(&next, t + 1, bits, prob, visit);
            return;
        }
        let bit = 1u64 << ((t - 1) * n + i);
        draws[i] = true;
        self.node(state, s, t, i + 1, bits | bit, prob.clone() * s[i].clone(), draws, visit);
        draws[i] = false;
        self.node(state, s, t, i + 1, bits, prob * (P::one() - s[i].clone()), draws, visit);
    }
}

/// Joint law of all draws up to step `n`, infinite memory.
pub fn enumerate_joint<P: Mass>(
    net: &Network,
    init: &UrnInit<P>,
    sched: &DeltaSchedule<P>,
    n: usize,
) -> Result<JointTable<P>, ExactError> {
    let start = NetworkState::new(net, init, MemoryMode::Infinite)?;
    enumerate_joint_from(net, &start, sched, n, DEFAULT_CAP)
}

pub fn enumerate_joint_from<P: Mass>(
    net: &Network,
    start: &NetworkState<P>,
    sched: &DeltaSchedule<P>,
    n: usize,
    cap: usize,
) -> Result<JointTable<P>, ExactError> {
    let bits = net.node_count() * n;
    check_cap(bits, cap)?;
    let mut probs = vec![P::zero(); 1usize << bits];
    for_each_history(net, start, sched, n, |b, p, _| probs[b as usize] = p.clone())?;
    Ok(JointTable::from_probs(net.node_count(), n, probs))
}

/// `Σ_d P(d | state) f(state after d)` over the next draw vector `d`.
pub fn conditional_expectation<P: Mass>(
    net: &Network,
    state: &NetworkState<P>,
    sched: &DeltaSchedule<P>,
    f: impl Fn(&NetworkState<P>) -> P,
) -> Result<P, ExactError> {
    let mut acc = P::zero();
    for_each_history(net, state, sched, 1, |_, p, next| acc += p.clone() * f(next))?;
    Ok(acc)
}

/// Law of node `i`'s first `n` draws. The other nodes' draws at step `n`
/// are summed out analytically, so only `N(n − 1)` binary draws are walked.
pub fn node_sequence_distribution<P: Mass>(
    net: &Network,
    init: &UrnInit<P>,
    sched: &DeltaSchedule<P>,
    i: usize,
    n: usize,
    cap: usize,
) -> Result<SequenceDistribution<P>, ExactError> {
    if n == 0 || i >= net.node_count() {
        return Err(ExactError::Domain(format!("need n ≥ 1 and a valid node, got n = {n}, i = {i}")));
    }
    let nodes = net.node_count();
    check_cap(nodes * (n - 1), cap)?;
    let start = NetworkState::new(net, init, MemoryMode::Infinite)?;
    let mut probs = vec![P::zero(); 1 << n];
    for_each_history(net, &start, sched, n - 1, |bits, p, st| {
        let mut own = 0usize;
        for t in 1..n {
            if bits >> bit_index(nodes, i, t) & 1 == 1 {
                own |= 1 << (t - 1);
            }
        }
        let s = st.super_urn_proportion(net, i);
        probs[own | 1 << (n - 1)] += p.clone() * s.clone();
        probs[own] += p.clone() * (P::one() - s);
    })?;
    Ok(SequenceDistribution::new(n, probs))
}

/// `Ĩ_n`, the mean over nodes of `P(Z_{i,n} = 1)`. Only the first `n − 1`
/// steps are enumerated since the last draw averages to the super-urn
/// proportion.
pub fn average_infection_rate<P: Mass>(
    net: &Network,
    init: &UrnInit<P>,
    sched: &DeltaSchedule<P>,
    n: usize,
    cap: usize,
) -> Result<P, ExactError> {
    if n == 0 {
        return Err(ExactError::Domain("infection rate needs n ≥ 1".into()));
    }
    check_cap(net.node_count() * (n - 1), cap)?;
    let start = NetworkState::new(net, init, MemoryMode::Infinite)?;
    let mut acc = P::zero();
    for_each_history(net, &start, sched, n - 1, |_, p, st| {
        let s = st.conditional_draw_probabilities(net);
        acc += p.clone() * s.into_iter().fold(P::zero(), |a, v| a + v);
    })?;
    Ok(acc / P::from_u64(net.node_count() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::{ratio, Rational};

    fn k2() -> Network {
        Network::new(2, &[(0, 1)]).unwrap()
    }

    fn unit_init(n: usize) -> UrnInit<Rational> {
        UrnInit::uniform(n, ratio(1, 1), ratio(1, 1)).unwrap()
    }

    #[test]
    fn k2_first_step_is_uniform() {
        let table = enumerate_joint(&k2(), &unit_init(2), &DeltaSchedule::constant(ratio(1, 1)), 1).unwrap();
        assert_eq!(table.len(), 4);
        assert!(table.iter().all(|(_, p)| *p == ratio(1, 4)));
    }

    #[test]
    fn k2_two_red_steps() {
        let p = joint_probability(
            &k2(),
            &unit_init(2),
            &DeltaSchedule::constant(ratio(1, 1)),
            &[vec![true, true], vec![true, true]],
        )
        .unwrap();
        assert_eq!(p, ratio(1, 9));
    }

    #[test]
    fn table_matches_chain_rule() {
        let net = Network::new(3, &[(0, 1), (1, 2)]).unwrap();
        let init = UrnInit::new(vec![ratio(1, 1), ratio(2, 1), ratio(1, 1)], vec![ratio(1, 1), ratio(1, 1), ratio(3, 1)])
            .unwrap();
        let sched = DeltaSchedule::Constant { red: ratio(1, 2), black: ratio(2, 1) };
        let table = enumerate_joint(&net, &init, &sched, 3).unwrap();
        assert_eq!(table.total_mass(), ratio(1, 1));
        for bits in [0u64, 5, 77, 511] {
            let seqs = table.assignment(bits);
            assert_eq!(joint_probability(&net, &init, &sched, &seqs).unwrap(), *table.get(bits));
        }
    }

    #[test]
    fn infection_rate_on_a_path() {
        let net = Network::new(3, &[(0, 1), (1, 2)]).unwrap();
        let init = UrnInit::new(vec![ratio(1, 1); 3], vec![ratio(1, 1), ratio(1, 1), ratio(3, 1)]).unwrap();
        let sched = DeltaSchedule::constant(ratio(1, 1));
        let rate = average_infection_rate(&net, &init, &sched, 1, DEFAULT_CAP).unwrap();
        assert_eq!(rate, (ratio(1, 2) + ratio(3, 8) + ratio(1, 3)) / ratio(3, 1));

        let rate3 = average_infection_rate(&net, &init, &sched, 3, DEFAULT_CAP).unwrap();
        let table = enumerate_joint(&net, &init, &sched, 3).unwrap();
        let direct = (0..3)
            .map(|i| table.node_marginal(i, 3, 3).unwrap().get(1).clone())
            .fold(ratio(0, 1), |a, v| a + v)
            / ratio(3, 1);
        assert_eq!(rate3, direct);
    }

    #[test]
    fn node_distribution_matches_table() {
        let net = Network::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let init = UrnInit::new(
            vec![ratio(1, 1), ratio(2, 1), ratio(1, 1), ratio(3, 1)],
            vec![ratio(2, 1), ratio(1, 1), ratio(1, 1), ratio(1, 1)],
        )
        .unwrap();
        let sched = DeltaSchedule::Constant { red: ratio(1, 1), black: ratio(3, 2) };
        let table = enumerate_joint(&net, &init, &sched, 3).unwrap();
        for i in 0..4 {
            let d = node_sequence_distribution(&net, &init, &sched, i, 3, DEFAULT_CAP).unwrap();
            assert_eq!(d, table.node_marginal(i, 1, 3).unwrap());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_joint(&k2(), &unit_init(2), &DeltaSchedule::constant(ratio(1, 1)), 13).unwrap_err();
        assert_eq!(err, ExactError::CapExceeded { bits: 26, cap: DEFAULT_CAP });
    }
}
