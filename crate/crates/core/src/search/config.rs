use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::Exponent;
use crate::group::GroupContext;

/// Environment variable overriding [`DEFAULT_NODE_CEILING`].
pub const NODE_CEILING_ENV: &str = "SUMSETLAB_NODE_CEILING";

/// Default cap on visited enumeration nodes per exhaustive search.
pub const DEFAULT_NODE_CEILING: u64 = 20_000_000_000;

/// Which restricted infimum is searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Any `A, B`.
    Unrestricted,
    /// `|A| = |B|` (the primed functionals).
    Isometric,
    /// `A = B` (the double-primed functionals).
    Isomeric,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Unrestricted, Variant::Isometric, Variant::Isomeric];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Unrestricted => "unrestricted",
            Variant::Isometric => "isometric",
            Variant::Isomeric => "isomeric",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unrestricted" => Ok(Variant::Unrestricted),
            "isometric" => Ok(Variant::Isometric),
            "isomeric" => Ok(Variant::Isomeric),
            _ => Err(Error::invalid(format!("unknown variant {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Exhaustive,
    HillClimb,
    GeometricFamily,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::HillClimb => "hill_climb",
            Strategy::GeometricFamily => "geometric_family",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "hill_climb" | "hill-climb" => Ok(Strategy::HillClimb),
            "geometric_family" | "geometric-family" => Ok(Strategy::GeometricFamily),
            _ => Err(Error::invalid(format!("unknown strategy {s:?}"))),
        }
    }
}

/// Describes the window searched for `A, B` (or `g, h`) and how to search it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Inclusive interval per free coordinate. A single interval applies to
    /// every coordinate. Torsion coordinates always range over all residues.
    pub bounds: Vec<(i64, i64)>,
    pub max_card: usize,
    pub p: Exponent,
    pub variant: Variant,
    pub strategy: Strategy,
    pub seed: u64,
    /// Worker threads. Results never depend on this.
    pub threads: usize,
    pub budget_ms: Option<u64>,
    pub node_ceiling: u64,
    /// Random restarts for hill climbing.
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            bounds: vec![(-2, 3)],
            max_card: 4,
            p: Exponent::TWO,
            variant: Variant::Unrestricted,
            strategy: Strategy::Exhaustive,
            seed: 0,
            threads: 1,
            budget_ms: None,
            node_ceiling: node_ceiling_from_env(),
            restarts: 8,
        }
    }
}

/// The node ceiling, honoring the environment override.
pub fn node_ceiling_from_env() -> u64 {
    std::env::var(NODE_CEILING_ENV)
        .ok()
        .and_then(|v| v.trim().replace('_', "").parse().ok())
        .unwrap_or(DEFAULT_NODE_CEILING)
}

/// Parses `a..b[,a..b...]`.
pub fn parse_box(text: &str) -> Result<Vec<(i64, i64)>> {
    text.split(',')
        .map(|part| {
            let (a, b) = part
                .trim()
                .split_once("..")
                .ok_or_else(|| Error::invalid(format!("box interval {part:?} is not `a..b`")))?;
            let a: i64 = a.trim().parse().map_err(|_| Error::invalid(format!("bad bound {a:?}")))?;
            let b: i64 = b.trim().parse().map_err(|_| Error::invalid(format!("bad bound {b:?}")))?;
            if a > b {
                return Err(Error::invalid(format!("empty interval {a}..{b}")));
            }
            Ok((a, b))
        })
        .collect()
}

pub fn format_box(bounds: &[(i64, i64)]) -> String {
    bounds
        .iter()
        .map(|(a, b)| format!("{a}..{b}"))
        .collect::<Vec<_>>()
        .join(",")
}

impl SearchConfig {
    pub fn with_box(mut self, bounds: &[(i64, i64)]) -> Self {
        self.bounds = bounds.to_vec();
        self
    }

    pub fn with_card(mut self, max_card: usize) -> Self {
        self.max_card = max_card;
        self
    }

    pub fn with_p(mut self, p: Exponent) -> Self {
        self.p = p;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    /// Interval widths for each free coordinate of `ctx`.
    pub fn widths(&self, ctx: &GroupContext) -> Result<Vec<usize>> {
        self.validate()?;
        let d = ctx.free_rank();
        let bounds: Vec<(i64, i64)> = match self.bounds.len() {
            n if n == d => self.bounds.clone(),
            1 => vec![self.bounds[0]; d],
            0 if d == 0 => Vec::new(),
            n => {
                return Err(Error::invalid(format!(
                    "box has {n} intervals but the group has {d} free coordinates"
                )))
            }
        };
        Ok(bounds.iter().map(|(a, b)| (b - a + 1) as usize).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_card == 0 {
            return Err(Error::invalid("max_card must be >= 1"));
        }
        if self.threads == 0 {
            return Err(Error::invalid("threads must be >= 1"));
        }
        if self.bounds.iter().any(|(a, b)| a > b) {
            return Err(Error::invalid("box intervals must be nonempty"));
        }
        Ok(())
    }

    /// Echo for reports. Thread count is deliberately left out: it never
    /// changes a result, and reports must be identical across thread counts.
    pub fn to_json(&self) -> Value {
        json!({
            "box": format_box(&self.bounds),
            "max_card": self.max_card,
            "p": self.p.to_string(),
            "variant": self.variant.as_str(),
            "strategy": self.strategy.as_str(),
            "seed": self.seed,
            "budget_ms": self.budget_ms,
            "node_ceiling": self.node_ceiling,
            "restarts": self.restarts,
        })
    }
}
