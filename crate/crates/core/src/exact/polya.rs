use statrs::function::gamma::ln_gamma;

use super::{ExactError, SequenceDistribution};
use crate::mass::Mass;

/// Parameters of a classical (single-urn) Polya process: initial red
/// proportion `rho` and correlation `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyaParams<P> {
    pub rho: P,
    pub delta: P,
}

impl<P: Mass> PolyaParams<P> {
    pub fn new(rho: P, delta: P) -> Result<Self, ExactError> {
        if !(P::zero() < rho && rho < P::one()) {
            return Err(ExactError::Domain(format!("rho = {rho} must lie in (0, 1)")));
        }
        if delta.is_negative() {
            return Err(ExactError::Domain(format!("delta = {delta} must be ≥ 0")));
        }
        Ok(PolyaParams { rho, delta })
    }

    /// Probability of any single sequence of length `n` with `k` red draws.
    pub fn sequence_probability(&self, n: usize, k: usize) -> P {
        let one = P::one();
        let mut p = one.clone();
        for j in 0..k {
            p = p * (self.rho.clone() + self.delta.clone() * P::from_u64(j as u64));
        }
        for j in 0..n - k {
            p = p * (one.clone() - self.rho.clone() + self.delta.clone() * P::from_u64(j as u64));
        }
        for t in 0..n {
            p = p / (one.clone() + self.delta.clone() * P::from_u64(t as u64));
        }
        p
    }
}

/// `Q^{(n)}(a)` by the sequential product: each draw is red with
/// probability `(ρ + δ·reds so far) / (1 + δ·draws so far)`.
pub fn classical_polya_joint<P: Mass>(params: &PolyaParams<P>, seq: &[bool]) -> P {
    let one = P::one();
    let (mut reds, mut blacks) = (0u64, 0u64);
    let mut p = one.clone();
    for (t, &a) in seq.iter().enumerate() {
        let denom = one.clone() + params.delta.clone() * P::from_u64(t as u64);
        let num = if a {
            reds += 1;
            params.rho.clone() + params.delta.clone() * P::from_u64(reds - 1)
        } else {
            blacks += 1;
            one.clone() - params.rho.clone() + params.delta.clone() * P::from_u64(blacks - 1)
        };
        p = p * num / denom;
    }
    p
}

/// The same probability through the Gamma-function closed form, in floating
/// point.
pub fn classical_polya_gamma(rho: f64, delta: f64, seq: &[bool]) -> f64 {
    let n = seq.len() as f64;
    let k = seq.iter().filter(|&&a| a).count() as f64;
    if delta == 0.0 {
        return rho.powf(k) * (1.0 - rho).powf(n - k);
    }
    let (a, b, c) = (rho / delta, (1.0 - rho) / delta, 1.0 / delta);
    (ln_gamma(c) + ln_gamma(a + k) + ln_gamma(b + n - k) - ln_gamma(a) - ln_gamma(b) - ln_gamma(c + n)).exp()
}

/// The whole law `Q^{(n)}` as a sequence table.
pub fn classical_polya_distribution<P: Mass>(params: &PolyaParams<P>, n: usize) -> SequenceDistribution<P> {
    let by_count: Vec<P> = (0..=n).map(|k| params.sequence_probability(n, k)).collect();
    let probs = (0..1usize << n)
        .map(|s| by_count[s.count_ones() as usize].clone())
        .collect();
    SequenceDistribution::new(n, probs)
}

/// `(1/n) Σ_a P(a) ln(P(a)/Q(a))`.
pub fn kl_rate<P: Mass, Q: Mass>(p: &SequenceDistribution<P>, q: &SequenceDistribution<Q>) -> Result<f64, ExactError> {
    if p.len() != q.len() {
        return Err(ExactError::Domain(format!(
            "sequence lengths differ: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    let mut sum = 0.0;
    for (s, (pa, qa)) in p.probs().iter().zip(q.probs()).enumerate() {
        let (pa, qa) = (pa.to_f64(), qa.to_f64());
        if pa <= 0.0 {
            continue;
        }
        if qa <= 0.0 {
            return Err(ExactError::SupportMismatch(format!("sequence {s:#b}")));
        }
        sum += pa * (pa / qa).ln();
    }
    Ok((sum / p.len().max(1) as f64).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::{ratio, Rational};

    #[test]
    fn first_draw_and_two_reds() {
        let p = PolyaParams::new(ratio(1, 2), ratio(1, 2)).unwrap();
        assert_eq!(classical_polya_joint(&p, &[true]), ratio(1, 2));
        assert_eq!(classical_polya_joint(&p, &[true, true]), ratio(1, 3));
        let q = PolyaParams::new(ratio(3, 5), ratio(1, 4)).unwrap();
        assert_eq!(classical_polya_joint(&q, &[false]), ratio(2, 5));
    }

    #[test]
    fn exchangeable_and_normalised() {
        let p = PolyaParams::new(ratio(2, 7), ratio(3, 5)).unwrap();
        let dist = classical_polya_distribution(&p, 6);
        assert_eq!(dist.total_mass(), ratio(1, 1));
        assert_eq!(
            classical_polya_joint(&p, &[true, false, false, true]),
            classical_polya_joint(&p, &[false, true, true, false])
        );
        assert_eq!(*dist.probability(&[true, true, false, false, true, false]), classical_polya_joint(&p, &[true, true, false, false, true, false]));
    }

    #[test]
    fn gamma_form_agrees() {
        let p = PolyaParams::new(0.3, 0.7).unwrap();
        for seq in [vec![true], vec![true, false, true, true], vec![false; 9]] {
            let a = classical_polya_joint(&p, &seq);
            let b = classical_polya_gamma(0.3, 0.7, &seq);
            assert!((a - b).abs() < 1e-12, "{a} {b}");
        }
        assert!((classical_polya_gamma(0.3, 0.0, &[true, false]) - 0.21).abs() < 1e-15);
    }

    #[test]
    fn kl_basics() {
        let p = classical_polya_distribution(&PolyaParams::new(0.4, 0.2).unwrap(), 5);
        let q = classical_polya_distribution(&PolyaParams::new(0.4, 0.5).unwrap(), 5);
        assert_eq!(kl_rate(&p, &p).unwrap(), 0.0);
        assert!(kl_rate(&p, &q).unwrap() > 0.0);
        let zero = SequenceDistribution::new(1, vec![1.0, 0.0]);
        let half = SequenceDistribution::new(1, vec![0.5, 0.5]);
        assert!(matches!(kl_rate(&half, &zero), Err(ExactError::SupportMismatch(_))));
        assert!((kl_rate(&zero, &half).unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(PolyaParams::new(ratio(0, 1), ratio(1, 1)).is_err());
        assert!(PolyaParams::<Rational>::new(ratio(1, 2), ratio(-1, 1)).is_err());
    }
}
