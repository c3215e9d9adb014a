/// Aggregated results of a batch of trials. Per-step vectors are indexed by
/// `t − 1` for `t = 1..=horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStatistics {
    pub(crate) trials: usize,
    pub(crate) horizon: usize,
    pub(crate) node_count: usize,
    /// `[t][i]`: trials with `Z_{i,t} = 1`.
    pub(crate) infections: Vec<u64>,
    /// `[t][i]`: trials with `Z_{i,t} = Z_{i,t−1} = 1` (zero at `t = 1`).
    pub(crate) pairs: Vec<u64>,
    /// `[t][i]`: sum over trials of `U_{i,t}`.
    pub(crate) urn_sums: Vec<f64>,
    /// `[t]`: sums of `Ũ_t`, of `Ũ_t − Ũ_{t−1}` and of its square.
    pub(crate) susceptibility: Vec<f64>,
    pub(crate) increments: Vec<f64>,
    pub(crate) increments_sq: Vec<f64>,
    /// `[i][k]`: sample average of node `i` in trial `k`.
    pub(crate) sample_averages: Vec<Vec<f64>>,
    pub(crate) assignments: Option<Vec<u64>>,
    pub(crate) slopes: Option<Vec<f64>>,
}

/// Least-squares trend of the mean infected fraction with a standard error
/// from the spread of per-trial slopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendEstimate {
    pub slope: f64,
    pub std_error: f64,
}

impl TrendEstimate {
    pub fn z_score(&self) -> f64 {
        self.slope / self.std_error
    }
}

impl TrialStatistics {
    pub(crate) fn empty(horizon: usize, node_count: usize, assignments: Option<usize>, trend: bool) -> Self {
        let cells = horizon * node_count;
        TrialStatistics {
            trials: 0,
            horizon,
            node_count,
            infections: vec![0; cells],
            pairs: vec![0; cells],
            urn_sums: vec![0.0; cells],
            susceptibility: vec![0.0; horizon],
            increments: vec![0.0; horizon],
            increments_sq: vec![0.0; horizon],
            sample_averages: vec![Vec::new(); node_count],
            assignments: assignments.map(|bits| vec![0; 1 << bits]),
            slopes: trend.then(Vec::new),
        }
    }

    /// Append `other`, whose trials come after this batch's.
    pub(crate) fn merge(&mut self, other: TrialStatistics) {
        fn add<T: Copy + std::ops::AddAssign>(a: &mut [T], b: &[T]) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += *y;
            }
        }
        self.trials += other.trials;
        add(&mut self.infections, &other.infections);
        add(&mut self.pairs, &other.pairs);
        add(&mut self.urn_sums, &other.urn_sums);
        add(&mut self.susceptibility, &other.susceptibility);
        add(&mut self.increments, &other.increments);
        add(&mut self.increments_sq, &other.increments_sq);
        for (a, b) in self.sample_averages.iter_mut().zip(other.sample_averages) {
            a.extend(b);
        }
        if let (Some(a), Some(b)) = (self.assignments.as_mut(), other.assignments.as_ref()) {
            add(a, b);
        }
        if let (Some(a), Some(b)) = (self.slopes.as_mut(), other.slopes) {
            a.extend(b);
        }
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    fn per_step(&self, cells: &[u64], node: Option<usize>) -> Vec<f64> {
        let n = self.node_count;
        (0..self.horizon)
            .map(|t| {
                let row = &cells[t * n..(t + 1) * n];
                match node {
                    Some(i) => row[i] as f64 / self.trials as f64,
                    None => row.iter().sum::<u64>() as f64 / (n * self.trials) as f64,
                }
            })
            .collect()
    }

    /// Empirical `Ĩ_t`.
    pub fn mean_infection(&self) -> Vec<f64> {
        self.per_step(&self.infections, None)
    }

    /// Empirical `P(Z_{i,t} = 1)`.
    pub fn node_infection(&self, i: usize) -> Vec<f64> {
        self.per_step(&self.infections, Some(i))
    }

    /// Empirical `P(Z_{i,t} = 1, Z_{i,t−1} = 1)`; the entry for `t = 1` is 0.
    pub fn pair_freq(&self, i: usize) -> Vec<f64> {
        self.per_step(&self.pairs, Some(i))
    }

    /// [`pair_freq`](Self::pair_freq) averaged over nodes.
    pub fn mean_pair_freq(&self) -> Vec<f64> {
        self.per_step(&self.pairs, None)
    }

    /// Trial mean of `Ũ_t`.
    pub fn mean_susceptibility(&self) -> Vec<f64> {
        self.susceptibility.iter().map(|s| s / self.trials as f64).collect()
    }

    /// Trial mean of `U_{i,t}`.
    pub fn mean_urn_proportion(&self, i: usize) -> Vec<f64> {
        let n = self.node_count;
        (0..self.horizon)
            .map(|t| self.urn_sums[t * n + i] / self.trials as f64)
            .collect()
    }

    /// Trial mean of `Ũ_t − Ũ_{t−1}` with its standard error.
    pub fn susceptibility_increments(&self) -> Vec<(f64, f64)> {
        let k = self.trials as f64;
        self.increments
            .iter()
            .zip(&self.increments_sq)
            .map(|(s, sq)| {
                let mean = s / k;
                let var = if self.trials > 1 {
                    ((sq - k * mean * mean) / (k - 1.0)).max(0.0)
                } else {
                    0.0
                };
                (mean, (var / k).sqrt())
            })
            .collect()
    }

    /// Sample average `(1/n) Σ_t Z_{i,t}` of node `i` in each trial.
    pub fn sample_averages(&self, i: usize) -> &[f64] {
        &self.sample_averages[i]
    }

    /// Relative frequency of each assignment mask, if collected.
    pub fn assignment_frequencies(&self) -> Option<Vec<f64>> {
        self.assignments
            .as_ref()
            .map(|c| c.iter().map(|&x| x as f64 / self.trials as f64).collect())
    }

    pub fn trend(&self) -> Option<TrendEstimate> {
        let slopes = self.slopes.as_ref()?;
        let k = slopes.len() as f64;
        let mean = slopes.iter().sum::<f64>() / k;
        let var = if slopes.len() > 1 {
            slopes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        Some(TrendEstimate {
            slope: mean,
            std_error: (var / k).sqrt(),
        })
    }
}
