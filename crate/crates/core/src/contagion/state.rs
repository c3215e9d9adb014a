use std::collections::VecDeque;

use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use super::{ContagionError, DeltaSchedule, UrnInit};
use crate::graph::Network;
use crate::mass::Mass;
use crate::rng::unit_f64;

/// How long reinforcement stays in an urn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemoryMode {
    Infinite,
    /// Only additions from the most recent `M` steps are kept.
    Finite(usize),
}

impl MemoryMode {
    pub fn window(&self) -> Option<usize> {
        match *self {
            MemoryMode::Infinite => None,
            MemoryMode::Finite(m) => Some(m),
        }
    }
}

/// Draw vectors `Z_{·,1}, …, Z_{·,n}`; `true` is a red (infected) draw.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DrawRecord {
    draws: Vec<Vec<bool>>,
}

impl DrawRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, draws: Vec<bool>) {
        self.draws.push(draws);
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    /// Draw vector of step `t` (1-indexed).
    pub fn step(&self, t: usize) -> &[bool] {
        &self.draws[t - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[bool]> {
        self.draws.iter().map(Vec::as_slice)
    }
}

/// Urn contents of every node at time `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState<P> {
    time: usize,
    red: Vec<P>,
    total: Vec<P>,
    memory: MemoryMode,
    /// Per-step `(red, black)` additions still inside the memory window,
    /// oldest first. Empty in infinite mode.
    window: VecDeque<Vec<(P, P)>>,
}

impl<P: Mass> NetworkState<P> {
    pub fn new(net: &Network, init: &UrnInit<P>, memory: MemoryMode) -> Result<Self, ContagionError> {
        init.check_network(net)?;
        if memory == MemoryMode::Finite(0) {
            return Err(ContagionError::InvalidMass(
                "memory window must be at least one step".into(),
            ));
        }
        Ok(NetworkState {
            time: 0,
            red: init.red().to_vec(),
            total: init.totals(),
            memory,
            window: VecDeque::new(),
        })
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn node_count(&self) -> usize {
        self.red.len()
    }

    pub fn memory(&self) -> MemoryMode {
        self.memory
    }

    pub fn red_mass(&self) -> &[P] {
        &self.red
    }

    pub fn total_mass(&self) -> &[P] {
        &self.total
    }

    /// `U_{i,n}`.
    pub fn individual_proportion(&self, i: usize) -> P {
        self.red[i].clone() / self.total[i].clone()
    }

    pub fn individual_proportions(&self) -> Vec<P> {
        (0..self.node_count()).map(|i| self.individual_proportion(i)).collect()
    }

    /// `S_{i,n}`: red mass over total mass across the closed neighbourhood.
    pub fn super_urn_proportion(&self, net: &Network, i: usize) -> P {
        let (mut r, mut x) = (P::zero(), P::zero());
        for &j in net.closed_neighborhood(i) {
            r += self.red[j].clone();
            x += self.total[j].clone();
        }
        r / x
    }

    /// `S_{i,n}` for every node, which is also the vector of conditional
    /// probabilities of a red draw at step `n + 1`.
    pub fn conditional_draw_probabilities(&self, net: &Network) -> Vec<P> {
        let mut out = Vec::with_capacity(self.node_count());
        self.conditional_draw_probabilities_into(net, &mut out);
        out
    }

    pub fn conditional_draw_probabilities_into(&self, net: &Network, out: &mut Vec<P>) {
        out.clear();
        if net.is_complete() {
            let r = self.red.iter().fold(P::zero(), |a, v| a + v.clone());
            let x = self.total.iter().fold(P::zero(), |a, v| a + v.clone());
            out.resize(self.node_count(), r / x);
        } else {
            out.extend((0..self.node_count()).map(|i| self.super_urn_proportion(net, i)));
        }
    }

    /// Conditional red-draw probability under finite memory, defined once
    /// the window holds `M` complete steps.
    pub fn finite_memory_conditional(&self, net: &Network, i: usize) -> Result<P, ContagionError> {
        let m = self.memory.window().ok_or(ContagionError::NotFiniteMemory)?;
        if self.time < m {
            return Err(ContagionError::WindowNotFull {
                time: self.time,
                memory: m,
            });
        }
        Ok(self.super_urn_proportion(net, i))
    }

    /// `Ũ_n`, the mean individual proportion.
    pub fn network_susceptibility(&self) -> P {
        let sum = (0..self.node_count()).fold(P::zero(), |a, i| a + self.individual_proportion(i));
        sum / P::from_u64(self.node_count() as u64)
    }

    /// Reinforce every urn according to `draws` and advance time by one.
    pub fn apply_draws(
        &mut self,
        net: &Network,
        draws: &[bool],
        sched: &DeltaSchedule<P>,
    ) -> Result<(), ContagionError> {
        if draws.len() != self.node_count() {
            return Err(ContagionError::SizeMismatch {
                expected: self.node_count(),
                found: draws.len(),
            });
        }
        if sched.is_state_dependent() {
            let s = self.conditional_draw_probabilities(net);
            self.advance(draws, sched, &s);
        } else {
            self.advance(draws, sched, &[]);
        }
        Ok(())
    }

    /// Copying variant of [`apply_draws`](Self::apply_draws).
    pub fn with_draws(
        &self,
        net: &Network,
        draws: &[bool],
        sched: &DeltaSchedule<P>,
    ) -> Result<Self, ContagionError> {
        let mut next = self.clone();
        next.apply_draws(net, draws, sched)?;
        Ok(next)
    }

    /// Draw every node from its super urn and reinforce.
    pub fn sample_step<R: RngCore + ?Sized>(
        &mut self,
        net: &Network,
        sched: &DeltaSchedule<P>,
        rng: &mut R,
    ) -> Vec<bool> {
        let mut draws = vec![false; self.node_count()];
        let mut probs = Vec::new();
        self.sample_step_into(net, sched, rng, &mut draws, &mut probs);
        draws
    }

    /// Allocation-free form of [`sample_step`](Self::sample_step); `probs`
    /// is scratch space and holds the pre-step `S` values on return.
    pub fn sample_step_into<R: RngCore + ?Sized>(
        &mut self,
        net: &Network,
        sched: &DeltaSchedule<P>,
        rng: &mut R,
        draws: &mut [bool],
        probs: &mut Vec<P>,
    ) {
        self.conditional_draw_probabilities_into(net, probs);
        for (d, s) in draws.iter_mut().zip(probs.iter()) {
            *d = unit_f64(rng) < s.to_f64();
        }
        self.advance(draws, sched, probs);
    }

    fn advance(&mut self, draws: &[bool], sched: &DeltaSchedule<P>, s_before: &[P]) {
        let t = self.time + 1;
        let finite = self.memory.window();
        let mut added = match finite {
            Some(m) if self.window.len() == m => self.window.pop_front().map(|mut old| {
                for (i, (r, b)) in old.iter().enumerate() {
                    self.red[i] -= r.clone();
                    self.total[i] -= r.clone() + b.clone();
                }
                old.clear();
                old
            }),
            _ => None,
        }
        .unwrap_or_default();

        for (i, &red_draw) in draws.iter().enumerate() {
            let (r, b) = if red_draw {
                (sched.red_at(i, t), P::zero())
            } else if sched.is_state_dependent() {
                let u = self.individual_proportion(i);
                (P::zero(), sched.black_at(i, t, &u, &s_before[i]))
            } else {
                let z = P::zero();
                (P::zero(), sched.black_at(i, t, &z, &z))
            };
            self.red[i] += r.clone();
            self.total[i] += r.clone() + b.clone();
            if finite.is_some() {
                added.push((r, b));
            }
        }
        if finite.is_some() {
            self.window.push_back(added);
        }
        self.time = t;
    }

    pub fn snapshot(&self) -> StateSnapshot {
        let strings = |v: &[P]| v.iter().map(ToString::to_string).collect();
        StateSnapshot {
            time: self.time,
            red_mass: strings(&self.red),
            total_mass: strings(&self.total),
            memory: self.memory,
            window: self
                .window
                .iter()
                .map(|step| step.iter().map(|(r, b)| [r.to_string(), b.to_string()]).collect())
                .collect(),
        }
    }

    pub fn from_snapshot(snap: &StateSnapshot) -> Result<Self, ContagionError> {
        let parse = |s: &String| {
            P::parse(s).ok_or_else(|| ContagionError::Snapshot(format!("unparseable mass {s:?}")))
        };
        let red: Vec<P> = snap.red_mass.iter().map(parse).collect::<Result<_, _>>()?;
        let total: Vec<P> = snap.total_mass.iter().map(parse).collect::<Result<_, _>>()?;
        if red.len() != total.len() {
            return Err(ContagionError::Snapshot("red_mass and total_mass lengths differ".into()));
        }
        if red.iter().zip(&total).any(|(r, x)| !(P::zero() < *r && r < x)) {
            return Err(ContagionError::Snapshot("need 0 < red_mass < total_mass".into()));
        }
        let window = snap
            .window
            .iter()
            .map(|step| {
                if step.len() != red.len() {
                    return Err(ContagionError::Snapshot("window row length mismatch".into()));
                }
                step.iter()
                    .map(|[r, b]| Ok((parse(r)?, parse(b)?)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<VecDeque<_>, _>>()?;
        match snap.memory {
            MemoryMode::Infinite if !window.is_empty() => {
                return Err(ContagionError::Snapshot("window given for infinite memory".into()))
            }
            MemoryMode::Finite(m) if m == 0 || window.len() > m || window.len() > snap.time => {
                return Err(ContagionError::Snapshot("window inconsistent with memory".into()))
            }
            _ => {}
        }
        Ok(NetworkState {
            time: snap.time,
            red,
            total,
            memory: snap.memory,
            window,
        })
    }
}

/// JSON form of a [`NetworkState`]; masses are stored as decimal or
/// fraction strings so rational states round-trip exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub time: usize,
    pub red_mass: Vec<String>,
    pub total_mass: Vec<String>,
    pub memory: MemoryMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub window: Vec<Vec<[String; 2]>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::{ratio, Rational};

    fn q(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    fn path3() -> Network {
        Network::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn single() -> Network {
        Network::new(1, &[]).unwrap()
    }

    #[test]
    fn initial_proportions() {
        let k2 = Network::new(2, &[(0, 1)]).unwrap();
        let init = UrnInit::new(vec![q(3, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]).unwrap();
        let st = NetworkState::new(&k2, &init, MemoryMode::Infinite).unwrap();
        assert_eq!(st.individual_proportions(), vec![q(3, 4), q(1, 4)]);
        assert_eq!(st.conditional_draw_probabilities(&k2), vec![q(1, 2), q(1, 2)]);
        assert_eq!(st.network_susceptibility(), q(1, 2));

        let net = path3();
        let init = UrnInit::new(vec![q(1, 1); 3], vec![q(1, 1), q(1, 1), q(3, 1)]).unwrap();
        let st = NetworkState::new(&net, &init, MemoryMode::Infinite).unwrap();
        assert_eq!(st.conditional_draw_probabilities(&net), vec![q(1, 2), q(3, 8), q(1, 3)]);

        let one = UrnInit::new(vec![q(2, 1)], vec![q(3, 1)]).unwrap();
        let st = NetworkState::new(&single(), &one, MemoryMode::Infinite).unwrap();
        assert_eq!(st.conditional_draw_probabilities(&single()), vec![q(2, 5)]);

        assert!(NetworkState::new(&net, &one, MemoryMode::Infinite).is_err());
    }

    #[test]
    fn k2_after_one_mixed_step() {
        let k2 = Network::new(2, &[(0, 1)]).unwrap();
        let init = UrnInit::uniform(2, q(1, 1), q(1, 1)).unwrap();
        let mut st = NetworkState::new(&k2, &init, MemoryMode::Infinite).unwrap();
        st.apply_draws(&k2, &[true, false], &DeltaSchedule::constant(q(1, 1))).unwrap();
        assert_eq!(st.time(), 1);
        assert_eq!(st.super_urn_proportion(&k2, 0), q(1, 2));
        assert_eq!(st.individual_proportions(), vec![q(2, 3), q(1, 3)]);
    }

    #[test]
    fn zero_black_mass_and_black_draws_leave_urns_alone() {
        let net = path3();
        let init = UrnInit::uniform(3, q(1, 1), q(2, 1)).unwrap();
        let mut st = NetworkState::new(&net, &init, MemoryMode::Infinite).unwrap();
        let before = st.clone();
        let sched = DeltaSchedule::Constant { red: q(1, 1), black: q(0, 1) };
        st.apply_draws(&net, &[false; 3], &sched).unwrap();
        assert_eq!(st.time(), 1);
        assert_eq!(st.red_mass(), before.red_mass());
        assert_eq!(st.total_mass(), before.total_mass());
        assert!(st.apply_draws(&net, &[true], &sched).is_err());
    }

    #[test]
    fn finite_memory_expires_old_additions() {
        let one = single();
        let init = UrnInit::uniform(1, q(1, 1), q(1, 1)).unwrap();
        let sched = DeltaSchedule::constant(q(1, 1));
        let mut st = NetworkState::new(&one, &init, MemoryMode::Finite(1)).unwrap();
        assert!(matches!(
            st.finite_memory_conditional(&one, 0),
            Err(ContagionError::WindowNotFull { time: 0, memory: 1 })
        ));
        st.apply_draws(&one, &[true], &sched).unwrap();
        assert_eq!(st.finite_memory_conditional(&one, 0).unwrap(), q(2, 3));
        st.apply_draws(&one, &[false], &sched).unwrap();
        assert_eq!(st.individual_proportion(0), q(1, 3));

        let inf = NetworkState::new(&one, &init, MemoryMode::Infinite).unwrap();
        assert!(matches!(
            inf.finite_memory_conditional(&one, 0),
            Err(ContagionError::NotFiniteMemory)
        ));
    }

    #[test]
    fn finite_memory_forgets_history_before_the_window() {
        let net = path3();
        let init = UrnInit::new(vec![q(1, 1), q(2, 1), q(1, 1)], vec![q(1, 1), q(1, 1), q(3, 1)])
            .unwrap();
        let sched = DeltaSchedule::Constant { red: q(2, 1), black: q(1, 1) };
        let run = |prefix: &[[bool; 3]]| {
            let mut st = NetworkState::new(&net, &init, MemoryMode::Finite(2)).unwrap();
            for d in prefix.iter().chain(&[[true, false, true], [false, false, true]]) {
                st.apply_draws(&net, d, &sched).unwrap();
            }
            (0..3).map(|i| st.finite_memory_conditional(&net, i).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(run(&[[true; 3], [true; 3]]), run(&[[false; 3], [true, false, false]]));
        assert_eq!(run(&[[true; 3]]), run(&[]));
    }

    #[test]
    fn snapshot_round_trips_through_json() {
        let net = path3();
        let init = UrnInit::uniform(3, q(1, 1), q(1, 1)).unwrap();
        let sched = DeltaSchedule::Constant { red: q(1, 3), black: q(1, 2) };
        let mut st = NetworkState::new(&net, &init, MemoryMode::Finite(2)).unwrap();
        for d in [[true, false, true], [false, true, true], [true, true, false]] {
            st.apply_draws(&net, &d, &sched).unwrap();
        }
        let json = serde_json::to_string(&st.snapshot()).unwrap();
        let back: StateSnapshot = serde_json::from_str(&json).unwrap();
        let restored = NetworkState::<Rational>::from_snapshot(&back).unwrap();
        assert_eq!(restored, st);

        let mut bad = st.snapshot();
        bad.red_mass[0] = "0".into();
        assert!(NetworkState::<Rational>::from_snapshot(&bad).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let net = path3();
        let init = UrnInit::uniform(3, 1.0, 1.0).unwrap();
        let sched = DeltaSchedule::constant(1.0);
        let run = || {
            let mut rng = crate::rng::trial_rng(42, 0);
            let mut st = NetworkState::new(&net, &init, MemoryMode::Infinite).unwrap();
            let mut rec = DrawRecord::new();
            for _ in 0..20 {
                rec.push(st.sample_step(&net, &sched, &mut rng));
            }
            rec
        };
        let (a, b) = (run(), run());
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
    }
}
