use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::exact::{format_rational, rational_to_f64, Exponent, Rational};
use crate::functional::ExactFunction;
use crate::group::PointSet;
use crate::search::config::{SearchConfig, Variant};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    Alpha,
    Beta,
    Gamma,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Alpha => "alpha",
            Quantity::Beta => "beta",
            Quantity::Gamma => "gamma",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One side of a witness pair: a set, or a weighted function for `gamma`.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Set(PointSet),
    Function(ExactFunction),
}

impl Witness {
    pub fn as_set(&self) -> Option<&PointSet> {
        match self {
            Witness::Set(s) => Some(s),
            Witness::Function(_) => None,
        }
    }

    /// The witness as a function (sets become indicators).
    pub fn to_function(&self) -> ExactFunction {
        match self {
            Witness::Set(s) => ExactFunction::indicator(s),
            Witness::Function(f) => f.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Witness::Set(s) => Value::Array(s.iter().map(|p| json!(p.coords())).collect()),
            Witness::Function(f) => Value::Array(
                f.iter()
                    .map(|(p, w)| json!([p.coords(), format_rational(w)]))
                    .collect(),
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HistoryEntry {
    pub nodes: u64,
    pub value_float: f64,
}

/// A witnessed upper bound on an infimum.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub quantity: Quantity,
    pub p: Exponent,
    pub variant: Variant,
    pub value_float: f64,
    /// `value^n` where `p = n/m`, exactly, whenever the witness allows it
    /// (always for set witnesses; for weighted witnesses only at `p = 2`).
    pub exact_power: Option<Rational>,
    pub witness_a: Witness,
    pub witness_b: Witness,
    pub nodes: u64,
    /// Whether the exhaustive window was fully scanned.
    pub complete: bool,
    pub config: SearchConfig,
    /// Successive improvements, in discovery order.
    pub history: Vec<HistoryEntry>,
}

impl EstimateReport {
    /// The exact squared ratio, reported only for `p = 2`.
    pub fn value_exact(&self) -> Option<Rational> {
        if self.p.is_two() {
            self.exact_power.clone()
        } else {
            None
        }
    }

    /// JSON report with the documented field list; `manifest` is nested in `config`.
    pub fn to_json(&self, manifest: Option<Value>) -> Value {
        let mut config = self.config.to_json();
        if let Some(m) = manifest {
            config["manifest"] = m;
        }
        json!({
            "quantity": self.quantity.as_str(),
            "p": self.p.to_string(),
            "variant": self.variant.as_str(),
            "value_float": self.value_float,
            "value_exact": self.value_exact().map(|r| format_rational(&r)),
            "witness_a": self.witness_a.to_json(),
            "witness_b": self.witness_b.to_json(),
            "nodes": self.nodes,
            "complete": self.complete,
            "config": config,
            "tool_version": TOOL_VERSION,
        })
    }
}

/// `ratio^n = numerator^n / (a^m b^(n-m))` for `p = n/m`, exactly.
pub fn exact_ratio_power(numerator: &Rational, a: usize, b: usize, p: &Exponent) -> Rational {
    let n = num_traits::pow(numerator.clone(), p.num() as usize);
    let da = num_traits::pow(Rational::from_integer((a as u64).into()), p.a_power() as usize);
    let db = num_traits::pow(Rational::from_integer((b as u64).into()), p.b_power() as usize);
    n / (da * db)
}

/// `numerator / (a^(1/p) b^(1/q))` as a float, through the exact power at `p = 2`.
pub fn ratio_float(numerator: &Rational, a: usize, b: usize, p: &Exponent) -> f64 {
    if p.is_two() {
        return rational_to_f64(&exact_ratio_power(numerator, a, b, p)).sqrt();
    }
    let pf = p.to_f64();
    let qf = p.conjugate().to_f64();
    rational_to_f64(numerator) / ((a as f64).powf(1.0 / pf) * (b as f64).powf(1.0 / qf))
}

/// `ratio^n` back to the ratio, as a float.
pub fn power_to_float(power: &Rational, p: &Exponent) -> f64 {
    if power.is_zero() {
        return 0.0;
    }
    if power.is_one() {
        return 1.0;
    }
    let v = rational_to_f64(power);
    if p.num() == 2 {
        v.sqrt()
    } else {
        v.powf(1.0 / p.num() as f64)
    }
}
