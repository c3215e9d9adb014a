use super::ContagionError;
use crate::graph::Network;
use crate::mass::{convert, Mass};

/// Initial red and black mass of every node's urn.
#[derive(Debug, Clone, PartialEq)]
pub struct UrnInit<P> {
    red: Vec<P>,
    black: Vec<P>,
}

impl<P: Mass> UrnInit<P> {
    /// Both colours must start with mass at least one in every urn.
    pub fn new(red: Vec<P>, black: Vec<P>) -> Result<Self, ContagionError> {
        if red.len() != black.len() {
            return Err(ContagionError::SizeMismatch {
                expected: red.len(),
                found: black.len(),
            });
        }
        let one = P::one();
        for (i, (r, b)) in red.iter().zip(&black).enumerate() {
            if *r < one {
                return Err(ContagionError::InvalidMass(format!(
                    "red[{i}] = {r} must be ≥ 1 (every urn needs positive red and black mass)"
                )));
            }
            if *b < one {
                return Err(ContagionError::InvalidMass(format!(
                    "black[{i}] = {b} must be ≥ 1 (every urn needs positive red and black mass)"
                )));
            }
        }
        Ok(UrnInit { red, black })
    }

    /// Same composition in every urn.
    pub fn uniform(node_count: usize, red: P, black: P) -> Result<Self, ContagionError> {
        Self::new(vec![red; node_count], vec![black; node_count])
    }

    pub fn node_count(&self) -> usize {
        self.red.len()
    }

    pub fn red(&self) -> &[P] {
        &self.red
    }

    pub fn black(&self) -> &[P] {
        &self.black
    }

    pub fn total(&self, i: usize) -> P {
        self.red[i].clone() + self.black[i].clone()
    }

    pub fn totals(&self) -> Vec<P> {
        (0..self.node_count()).map(|i| self.total(i)).collect()
    }

    /// Red mass summed over the closed neighbourhood of `i`.
    pub fn super_red(&self, net: &Network, i: usize) -> P {
        net.closed_neighborhood(i)
            .iter()
            .fold(P::zero(), |acc, &j| acc + self.red[j].clone())
    }

    /// Total mass summed over the closed neighbourhood of `i`.
    pub fn super_total(&self, net: &Network, i: usize) -> P {
        net.closed_neighborhood(i)
            .iter()
            .fold(P::zero(), |acc, &j| acc + self.total(j))
    }

    pub fn check_network(&self, net: &Network) -> Result<(), ContagionError> {
        if self.node_count() != net.node_count() {
            return Err(ContagionError::SizeMismatch {
                expected: net.node_count(),
                found: self.node_count(),
            });
        }
        Ok(())
    }

    pub fn cast<Q: Mass>(&self) -> UrnInit<Q> {
        UrnInit {
            red: convert(&self.red),
            black: convert(&self.black),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::{ratio, Rational};

    #[test]
    fn rejects_empty_colours() {
        let err = UrnInit::new(vec![1.0, 0.0], vec![1.0, 1.0]).unwrap_err();
        assert!(err.to_string().contains("red[1]"));
        let err = UrnInit::new(vec![1.0], vec![0.5]).unwrap_err();
        assert!(err.to_string().contains("black[0]"));
        assert!(UrnInit::new(vec![1.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn super_urn_sums_on_a_path() {
        let net = Network::new(3, &[(0, 1), (1, 2)]).unwrap();
        let init: UrnInit<Rational> = UrnInit::new(
            vec![ratio(1, 1); 3],
            vec![ratio(1, 1), ratio(1, 1), ratio(3, 1)],
        )
        .unwrap();
        assert_eq!(init.super_red(&net, 1), ratio(3, 1));
        assert_eq!(init.super_total(&net, 1), ratio(8, 1));
        assert_eq!(init.super_total(&net, 2), ratio(6, 1));
    }
}
