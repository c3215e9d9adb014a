use super::martingale::curing_bound_value;
use super::ContagionError;
use crate::mass::{convert, Mass};

/// Reinforcement masses `Δ_r,i(t)` and `Δ_b,i(t)` added after a red or black
/// draw at step `t ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum DeltaSchedule<P> {
    /// Same masses for every node and step.
    Constant { red: P, black: P },
    /// Fixed per-node masses.
    PerNode { red: Vec<P>, black: Vec<P> },
    /// Row `t - 1` holds the per-node masses of step `t`. Steps past the end
    /// of the table repeat the last row.
    Tabulated { red: Vec<Vec<P>>, black: Vec<Vec<P>> },
    /// Constant red mass; black mass is `multiplier` times the martingale
    /// bound evaluated on the state before the step. A multiplier above one
    /// makes every urn proportion a supermartingale, below one a
    /// submartingale.
    Curing { red: P, multiplier: P },
}

impl<P: Mass> DeltaSchedule<P> {
    pub fn constant(delta: P) -> Self {
        DeltaSchedule::Constant {
            red: delta.clone(),
            black: delta,
        }
    }

    pub fn validate(&self, node_count: usize) -> Result<(), ContagionError> {
        let check = |what: &str, v: &P| -> Result<(), ContagionError> {
            if v.is_negative() {
                Err(ContagionError::InvalidSchedule(format!(
                    "{what} must be ≥ 0, got {v}"
                )))
            } else {
                Ok(())
            }
        };
        let check_row = |what: &str, row: &[P]| -> Result<(), ContagionError> {
            if row.len() != node_count {
                return Err(ContagionError::SizeMismatch {
                    expected: node_count,
                    found: row.len(),
                });
            }
            row.iter().try_for_each(|v| check(what, v))
        };
        match self {
            DeltaSchedule::Constant { red, black } => {
                check("delta_red", red)?;
                check("delta_black", black)
            }
            DeltaSchedule::PerNode { red, black } => {
                check_row("delta_red", red)?;
                check_row("delta_black", black)
            }
            DeltaSchedule::Tabulated { red, black } => {
                if red.is_empty() || red.len() != black.len() {
                    return Err(ContagionError::InvalidSchedule(
                        "tabulated schedule needs equally many (non-zero) red and black rows".into(),
                    ));
                }
                red.iter().try_for_each(|r| check_row("delta_red", r))?;
                black.iter().try_for_each(|r| check_row("delta_black", r))
            }
            DeltaSchedule::Curing { red, multiplier } => {
                check("delta_red", red)?;
                check("curing multiplier", multiplier)
            }
        }
    }

    /// True when no step ever adds mass (plain sampling with replacement).
    pub fn is_identically_zero(&self) -> bool {
        let zero = |v: &P| v.is_zero();
        match self {
            DeltaSchedule::Constant { red, black } => zero(red) && zero(black),
            DeltaSchedule::PerNode { red, black } => red.iter().chain(black).all(zero),
            DeltaSchedule::Tabulated { red, black } => {
                red.iter().chain(black).flatten().all(zero)
            }
            DeltaSchedule::Curing { red, .. } => zero(red),
        }
    }

    /// The common mass when red and black reinforcement are equal and
    /// constant across nodes and time.
    pub fn constant_equal(&self) -> Option<&P> {
        match self {
            DeltaSchedule::Constant { red, black } if red == black => Some(red),
            _ => None,
        }
    }

    /// Whether the black mass depends on the current urn state.
    pub fn is_state_dependent(&self) -> bool {
        matches!(self, DeltaSchedule::Curing { .. })
    }

    /// Red mass added to node `i` after a red draw at step `t`.
    pub fn red_at(&self, i: usize, t: usize) -> P {
        match self {
            DeltaSchedule::Constant { red, .. } | DeltaSchedule::Curing { red, .. } => red.clone(),
            DeltaSchedule::PerNode { red, .. } => red[i].clone(),
            DeltaSchedule::Tabulated { red, .. } => row(red, t)[i].clone(),
        }
    }

    /// Black mass added to node `i` after a black draw at step `t`, given the
    /// node's individual proportion `u` and super-urn proportion `s` before
    /// the step.
    pub fn black_at(&self, i: usize, t: usize, u: &P, s: &P) -> P {
        match self {
            DeltaSchedule::Constant { black, .. } => black.clone(),
            DeltaSchedule::PerNode { black, .. } => black[i].clone(),
            DeltaSchedule::Tabulated { black, .. } => row(black, t)[i].clone(),
            DeltaSchedule::Curing { red, multiplier } => {
                multiplier.clone() * curing_bound_value(red, u, s)
            }
        }
    }

    pub fn cast<Q: Mass>(&self) -> DeltaSchedule<Q> {
        let one = |v: &P| Q::from_rational(&v.to_rational());
        match self {
            DeltaSchedule::Constant { red, black } => DeltaSchedule::Constant {
                red: one(red),
                black: one(black),
            },
            DeltaSchedule::PerNode { red, black } => DeltaSchedule::PerNode {
                red: convert(red),
                black: convert(black),
            },
            DeltaSchedule::Tabulated { red, black } => DeltaSchedule::Tabulated {
                red: red.iter().map(|r| convert(r)).collect(),
                black: black.iter().map(|r| convert(r)).collect(),
            },
            DeltaSchedule::Curing { red, multiplier } => DeltaSchedule::Curing {
                red: one(red),
                multiplier: one(multiplier),
            },
        }
    }
}

fn row<P>(table: &[Vec<P>], t: usize) -> &[P] {
    let idx = t.saturating_sub(1).min(table.len() - 1);
    &table[idx]
}
