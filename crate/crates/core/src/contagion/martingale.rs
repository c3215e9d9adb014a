use super::{ContagionError, MemoryMode, NetworkState};
use crate::graph::Network;
use crate::mass::Mass;

/// `E[U_{i,n} | history] − U_{i,n−1}` when every urn receives the same mass
/// `delta` whichever colour is drawn and all urns started with the same
/// total.
pub fn expected_urn_increment<P: Mass>(
    state: &NetworkState<P>,
    net: &Network,
    i: usize,
    delta: &P,
) -> Result<P, ContagionError> {
    if state.memory() != MemoryMode::Infinite {
        return Err(ContagionError::HypothesisViolation(
            "increment formula assumes infinite memory".into(),
        ));
    }
    if delta.is_negative() {
        return Err(ContagionError::HypothesisViolation("delta must be ≥ 0".into()));
    }
    let totals = state.total_mass();
    if totals.iter().any(|x| *x != totals[0]) {
        return Err(ContagionError::HypothesisViolation(
            "urn totals differ between nodes".into(),
        ));
    }
    let ui = state.individual_proportion(i);
    let neighbours = net.neighbors(i);
    let spread = neighbours
        .iter()
        .fold(P::zero(), |acc, &j| acc + state.individual_proportion(j) - ui.clone());
    let denom = (totals[i].clone() + delta.clone()) * P::from_u64(neighbours.len() as u64 + 1);
    Ok(delta.clone() * spread / denom)
}

/// Black mass that makes node `i`'s urn proportion a martingale for one step
/// when `delta_red` is added on a red draw. Larger black mass gives a
/// supermartingale, smaller a submartingale.
pub fn curing_delta_bound<P: Mass>(
    state: &NetworkState<P>,
    net: &Network,
    i: usize,
    delta_red: &P,
) -> P {
    let u = state.individual_proportion(i);
    let s = state.super_urn_proportion(net, i);
    curing_bound_value(delta_red, &u, &s)
}

/// Black mass that makes `E[U_{i,n} | history] = U_{i,n−1}` hold exactly.
///
/// [`curing_delta_bound`] treats the post-draw urn total as if it did not
/// depend on the colour drawn, so it is only a first-order approximation:
/// with it, `E[U_{i,n}] − U_{i,n−1} = Δ_r S(1 − U)(1/(X + Δ_r) − 1/(X + b))`
/// where `X` is the current total and `b` the bound. Solving the two-outcome
/// balance exactly gives
/// `Δ_r S(1 − U) X / ((1 − S) U (X + Δ_r) − Δ_r S (1 − U))`.
/// Returns `None` when the denominator is not positive: then no black mass
/// can offset the expected red gain in one step.
pub fn exact_curing_delta<P: Mass>(
    state: &NetworkState<P>,
    net: &Network,
    i: usize,
    delta_red: &P,
) -> Option<P> {
    let one = P::one();
    let u = state.individual_proportion(i);
    let s = state.super_urn_proportion(net, i);
    let x = state.total_mass()[i].clone();
    let gain = delta_red.clone() * s.clone() * (one.clone() - u.clone());
    let denom = (one - s) * u * (x.clone() + delta_red.clone()) - gain.clone();
    if denom <= P::zero() {
        return None;
    }
    Some(gain * x / denom)
}

pub(crate) fn curing_bound_value<P: Mass>(delta_red: &P, u: &P, s: &P) -> P {
    let one = P::one();
    delta_red.clone() * (one.clone() - u.clone()) * s.clone() / (u.clone() * (one - s.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contagion::{DeltaSchedule, UrnInit};
    use crate::mass::{ratio, Rational};

    fn k2_skewed() -> (Network, NetworkState<Rational>) {
        let k2 = Network::new(2, &[(0, 1)]).unwrap();
        let init = UrnInit::new(vec![ratio(3, 1), ratio(1, 1)], vec![ratio(1, 1), ratio(3, 1)]).unwrap();
        let st = NetworkState::new(&k2, &init, MemoryMode::Infinite).unwrap();
        (k2, st)
    }

    #[test]
    fn increment_matches_two_outcome_average() {
        let (k2, st) = k2_skewed();
        let one = ratio(1, 1);
        let inc = expected_urn_increment(&st, &k2, 0, &one).unwrap();
        assert_eq!(inc, ratio(-1, 20));

        let s = st.super_urn_proportion(&k2, 0);
        let sched = DeltaSchedule::constant(one);
        let red = st.with_draws(&k2, &[true, false], &sched).unwrap();
        let black = st.with_draws(&k2, &[false, false], &sched).unwrap();
        let mean = s.clone() * red.individual_proportion(0)
            + (ratio(1, 1) - s) * black.individual_proportion(0);
        assert_eq!(mean - st.individual_proportion(0), inc);
    }

    #[test]
    fn increment_rejects_unequal_totals() {
        let net = Network::new(2, &[(0, 1)]).unwrap();
        let init = UrnInit::new(vec![ratio(1, 1); 2], vec![ratio(1, 1), ratio(2, 1)]).unwrap();
        let st = NetworkState::new(&net, &init, MemoryMode::Infinite).unwrap();
        assert!(matches!(
            expected_urn_increment(&st, &net, 0, &ratio(1, 1)),
            Err(ContagionError::HypothesisViolation(_))
        ));
    }

    #[test]
    fn curing_bound_values() {
        let (k2, st) = k2_skewed();
        // U = 3/4, S = 1/2
        assert_eq!(curing_delta_bound(&st, &k2, 0, &ratio(2, 1)), ratio(2, 3));
        assert_eq!(curing_bound_value(&ratio(2, 1), &ratio(1, 4), &ratio(1, 2)), ratio(6, 1));
        assert_eq!(curing_bound_value(&ratio(5, 1), &ratio(1, 3), &ratio(1, 3)), ratio(5, 1));
        assert_eq!(curing_delta_bound(&st, &k2, 1, &ratio(0, 1)), ratio(0, 1));
    }

    fn one_step_mean(k2: &Network, st: &NetworkState<Rational>, black: Rational) -> Rational {
        let s = st.super_urn_proportion(k2, 0);
        let sched = DeltaSchedule::Constant { red: ratio(1, 1), black };
        let red = st.with_draws(k2, &[true, false], &sched).unwrap();
        let blk = st.with_draws(k2, &[false, false], &sched).unwrap();
        s.clone() * red.individual_proportion(0) + (ratio(1, 1) - s) * blk.individual_proportion(0)
    }

    #[test]
    fn bound_is_first_order_and_exact_version_balances() {
        let k2 = Network::new(2, &[(0, 1)]).unwrap();
        let init = UrnInit::new(vec![ratio(1, 1), ratio(2, 1)], vec![ratio(3, 1), ratio(1, 1)]).unwrap();
        let st = NetworkState::new(&k2, &init, MemoryMode::Infinite).unwrap();
        // U = 1/4, S = 3/7, X = 4
        let bound = curing_delta_bound(&st, &k2, 0, &ratio(1, 1));
        assert_eq!(bound, ratio(9, 4));
        let drift = one_step_mean(&k2, &st, bound) - st.individual_proportion(0);
        assert_eq!(drift, ratio(9, 700));

        let exact = exact_curing_delta(&st, &k2, 0, &ratio(1, 1)).unwrap();
        assert_eq!(exact, ratio(36, 11));
        assert_eq!(one_step_mean(&k2, &st, exact), st.individual_proportion(0));
        assert_eq!(exact_curing_delta(&st, &k2, 0, &ratio(0, 1)), Some(ratio(0, 1)));
    }

    #[test]
    fn exact_curing_can_be_impossible() {
        let k2 = Network::new(2, &[(0, 1)]).unwrap();
        // U = 1/11 with a red neighbour: the red gain cannot be offset.
        let init = UrnInit::new(vec![ratio(1, 1), ratio(50, 1)], vec![ratio(10, 1), ratio(1, 1)]).unwrap();
        let st = NetworkState::new(&k2, &init, MemoryMode::Infinite).unwrap();
        assert_eq!(exact_curing_delta(&st, &k2, 0, &ratio(100, 1)), None);
    }
}
