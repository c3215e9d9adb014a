//! JSON experiment configuration. Real-valued fields are decimal strings so
//! exact inputs survive the round trip; counts are plain integers.

use std::fs;
use std::path::{Path, PathBuf};

use polya_core::graph::{generate, read_edge_list, GraphKind};
use polya_core::mass::{parse_decimal, Rational};
use polya_core::{DeltaSchedule, MemoryMode, Network, UrnInit};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    /// `complete`, `cycle`, `star` or `ba`.
    pub kind: String,
    pub nodes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl GraphSpec {
    pub fn to_kind(&self) -> Result<GraphKind, CliError> {
        Ok(match self.kind.as_str() {
            "complete" => GraphKind::Complete(self.nodes),
            "cycle" => GraphKind::Cycle(self.nodes),
            "star" => GraphKind::Star(self.nodes),
            "ba" => GraphKind::BarabasiAlbert {
                nodes: self.nodes,
                m: self.m.unwrap_or(2),
                seed: self.seed.unwrap_or(0),
            },
            other => {
                return Err(CliError::Usage(format!(
                    "graph kind must be complete, cycle, star or ba, got {other:?}"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub network: Option<GraphSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub red: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub black: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_red: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_black: Option<String>,
    /// Window length; absent means infinite memory.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub memory: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_sis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_probs: Option<Vec<String>>,
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::Usage(format!(
            "config parse error at line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

macro_rules! overlay {
    ($base:ident, $over:ident, $($f:ident),*) => {
        $(if $over.$f.is_some() { $base.$f = $over.$f.clone(); })*
    };
}

impl ExperimentConfig {
    /// Fields set in `flags` replace those of `self`.
    pub fn overlay(mut self, flags: &ExperimentConfig) -> Self {
        overlay!(
            self, flags, graph, network, red, black, delta, delta_red, delta_black, memory, horizon,
            trials, seed, node, cap, beta, delta_sis, init_probs
        );
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn network(&self) -> Result<Network, CliError> {
        match (&self.graph, &self.network) {
            (Some(_), Some(_)) => Err(CliError::Usage("give either graph or network, not both".into())),
            (Some(path), None) => {
                let file = fs::File::open(path)
                    .map_err(|e| CliError::Usage(format!("cannot open graph {}: {e}", path.display())))?;
                read_edge_list(std::io::BufReader::new(file))
                    .map_err(|e| CliError::Usage(format!("graph {}: {e}", path.display())))
            }
            (None, Some(spec)) => generate(&spec.to_kind()?).map_err(|e| CliError::Usage(e.to_string())),
            (None, None) => Err(CliError::Usage("missing graph (--graph FILE or a network spec)".into())),
        }
    }

    pub fn required<T: Clone>(value: &Option<T>, name: &str) -> Result<T, CliError> {
        value.clone().ok_or_else(|| CliError::Usage(format!("missing required field {name}")))
    }

    pub fn horizon(&self) -> Result<usize, CliError> {
        let h = Self::required(&self.horizon, "horizon")?;
        if h == 0 {
            return Err(CliError::Usage("horizon must be ≥ 1".into()));
        }
        Ok(h)
    }

    pub fn memory_mode(&self) -> Result<MemoryMode, CliError> {
        match self.memory {
            None => Ok(MemoryMode::Infinite),
            Some(0) => Err(CliError::Usage("memory must be ≥ 1".into())),
            Some(m) => Ok(MemoryMode::Finite(m)),
        }
    }

    /// Masses for `nodes` urns; a single value is repeated for every node.
    pub fn init(&self, nodes: usize) -> Result<UrnInit<Rational>, CliError> {
        let red = broadcast(&decimals(&Self::required(&self.red, "red")?, "red")?, nodes, "red")?;
        let black = broadcast(&decimals(&Self::required(&self.black, "black")?, "black")?, nodes, "black")?;
        UrnInit::new(red, black).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn schedule(&self, nodes: usize) -> Result<DeltaSchedule<Rational>, CliError> {
        let base = self.delta.as_deref().map(|d| decimal(d, "delta")).transpose()?;
        let pick = |v: &Option<String>, name: &str| -> Result<Rational, CliError> {
            match (v, &base) {
                (Some(s), _) => decimal(s, name),
                (None, Some(b)) => Ok(b.clone()),
                (None, None) => Err(CliError::Usage(format!("missing {name} (or delta)"))),
            }
        };
        let sched = DeltaSchedule::Constant {
            red: pick(&self.delta_red, "delta_red")?,
            black: pick(&self.delta_black, "delta_black")?,
        };
        sched.validate(nodes).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(sched)
    }

    pub fn trials(&self) -> Result<usize, CliError> {
        let t = Self::required(&self.trials, "trials")?;
        if t == 0 {
            return Err(CliError::Usage("trials must be ≥ 1".into()));
        }
        Ok(t)
    }
}

pub fn decimal(s: &str, name: &str) -> Result<Rational, CliError> {
    parse_decimal(s).ok_or_else(|| CliError::Usage(format!("{name}: {s:?} is not a decimal number")))
}

fn decimals(v: &[String], name: &str) -> Result<Vec<Rational>, CliError> {
    v.iter().map(|s| decimal(s, name)).collect()
}

fn broadcast(v: &[Rational], nodes: usize, name: &str) -> Result<Vec<Rational>, CliError> {
    match v.len() {
        1 => Ok(vec![v[0].clone(); nodes]),
        n if n == nodes => Ok(v.to_vec()),
        n => Err(CliError::Usage(format!("{name} has {n} values for {nodes} nodes"))),
    }
}
