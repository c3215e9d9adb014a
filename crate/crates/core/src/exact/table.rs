use std::io::{self, Write};

use super::ExactError;
use crate::mass::Mass;

/// Bit holding `a_{i,t}` (node `i`, step `t ≥ 1`) in an assignment mask.
pub fn bit_index(node_count: usize, i: usize, t: usize) -> usize {
    (t - 1) * node_count + i
}

/// Pack per-node draw sequences (`seqs[i][t-1] = a_{i,t}`) into a mask.
pub fn assignment_bits(seqs: &[Vec<bool>]) -> u64 {
    let n = seqs.len();
    let mut bits = 0u64;
    for (i, seq) in seqs.iter().enumerate() {
        for (t, &a) in seq.iter().enumerate() {
            if a {
                bits |= 1 << bit_index(n, i, t + 1);
            }
        }
    }
    bits
}

/// The joint law of all draws of all nodes up to a fixed horizon, stored
/// densely by assignment mask.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable<P> {
    node_count: usize,
    horizon: usize,
    probs: Vec<P>,
}

impl<P: Mass> JointTable<P> {
    pub(crate) fn from_probs(node_count: usize, horizon: usize, probs: Vec<P>) -> Self {
        debug_assert_eq!(probs.len(), 1 << (node_count * horizon));
        JointTable {
            node_count,
            horizon,
            probs,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, bits: u64) -> &P {
        &self.probs[bits as usize]
    }

    pub fn probability(&self, seqs: &[Vec<bool>]) -> &P {
        self.get(assignment_bits(seqs))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &P)> {
        self.probs.iter().enumerate().map(|(b, p)| (b as u64, p))
    }

    pub fn total_mass(&self) -> P {
        self.probs.iter().fold(P::zero(), |a, p| a + p.clone())
    }

    pub fn draw(&self, bits: u64, i: usize, t: usize) -> bool {
        bits >> bit_index(self.node_count, i, t) & 1 == 1
    }

    /// Per-node sequences of an assignment mask.
    pub fn assignment(&self, bits: u64) -> Vec<Vec<bool>> {
        (0..self.node_count)
            .map(|i| (1..=self.horizon).map(|t| self.draw(bits, i, t)).collect())
            .collect()
    }

    /// Total probability of the assignments satisfying `event`.
    pub fn probability_of(&self, event: impl Fn(u64) -> bool) -> P {
        self.iter()
            .filter(|(b, _)| event(*b))
            .fold(P::zero(), |a, (_, p)| a + p.clone())
    }

    /// Law of node `i`'s draws over steps `start..=end`.
    pub fn node_marginal(&self, i: usize, start: usize, end: usize) -> Result<SequenceDistribution<P>, ExactError> {
        if start == 0 || end < start || end > self.horizon {
            return Err(ExactError::InvalidWindow {
                start,
                end,
                horizon: self.horizon,
            });
        }
        let len = end - start + 1;
        let mut probs = vec![P::zero(); 1 << len];
        for (bits, p) in self.iter() {
            let mut k = 0usize;
            for t in start..=end {
                if self.draw(bits, i, t) {
                    k |= 1 << (t - start);
                }
            }
            probs[k] += p.clone();
        }
        Ok(SequenceDistribution::new(len, probs))
    }

    /// CSV with columns `a_i_t` for every node `i` and step `t` (1-indexed,
    /// node-major), then `p_num,p_den` when `exact`, else `p`.
    pub fn write_csv<W: Write>(&self, mut w: W, exact: bool) -> io::Result<()> {
        let mut header: Vec<String> = Vec::new();
        for i in 1..=self.node_count {
            for t in 1..=self.horizon {
                header.push(format!("a_{i}_{t}"));
            }
        }
        if exact {
            header.extend(["p_num".into(), "p_den".into()]);
        } else {
            header.push("p".into());
        }
        writeln!(w, "{}", header.join(","))?;
        for (bits, p) in self.iter() {
            let mut row = String::new();
            for i in 0..self.node_count {
                for t in 1..=self.horizon {
                    row.push(if self.draw(bits, i, t) { '1' } else { '0' });
                    row.push(',');
                }
            }
            if exact {
                let r = p.to_rational();
                writeln!(w, "{row}{},{}", r.numer(), r.denom())?;
            } else {
                writeln!(w, "{row}{}", p.to_f64())?;
            }
        }
        Ok(())
    }
}

/// A distribution over binary sequences of length `len`; index bit `k`
/// holds the draw at the `k`-th position of the window.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceDistribution<P> {
    len: usize,
    probs: Vec<P>,
}

impl<P: Mass> SequenceDistribution<P> {
    pub fn new(len: usize, probs: Vec<P>) -> Self {
        assert_eq!(probs.len(), 1 << len, "sequence table has wrong size");
        SequenceDistribution { len, probs }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, seq: usize) -> &P {
        &self.probs[seq]
    }

    pub fn probability(&self, seq: &[bool]) -> &P {
        let idx = seq.iter().enumerate().fold(0, |acc, (k, &a)| acc | (a as usize) << k);
        &self.probs[idx]
    }

    pub fn probs(&self) -> &[P] {
        &self.probs
    }

    pub fn total_mass(&self) -> P {
        self.probs.iter().fold(P::zero(), |a, p| a + p.clone())
    }

    /// Probability that position `k` (0-based) is a red draw.
    pub fn red_probability(&self, k: usize) -> P {
        self.probs
            .iter()
            .enumerate()
            .filter(|(s, _)| s >> k & 1 == 1)
            .fold(P::zero(), |a, (_, p)| a + p.clone())
    }

    /// Probability that positions `k` and `l` are both red.
    pub fn both_red_probability(&self, k: usize, l: usize) -> P {
        self.probs
            .iter()
            .enumerate()
            .filter(|(s, _)| s >> k & 1 == 1 && s >> l & 1 == 1)
            .fold(P::zero(), |a, (_, p)| a + p.clone())
    }

    pub fn cast<Q: Mass>(&self) -> SequenceDistribution<Q> {
        SequenceDistribution {
            len: self.len,
            probs: crate::mass::convert(&self.probs),
        }
    }
}
