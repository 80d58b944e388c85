//! Aggregation functions over finite nonempty value sequences.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

type AggFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A named black-box aggregation function, used as a test subject for the
/// continuity falsifier. External aggregators evaluate but have no
/// distribution-level eliminator.
pub struct ExternalAggregator {
    name: String,
    func: AggFn,
}

impl ExternalAggregator {
    pub fn new(
        name: impl Into<String>,
        func: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            func: Box::new(func),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for ExternalAggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExternalAggregator")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// An aggregation function `F : [0,1]^{<omega} -> [0,1]`, symmetric in its
/// inputs and defined only on nonempty sequences.
#[derive(Debug, Clone)]
pub enum Aggregator {
    Min,
    Max,
    /// Arithmetic mean.
    Am,
    External(Arc<ExternalAggregator>),
}

impl Aggregator {
    pub fn name(&self) -> &str {
        match self {
            Aggregator::Min => "min",
            Aggregator::Max => "max",
            Aggregator::Am => "am",
            Aggregator::External(e) => e.name(),
        }
    }

    /// Applies the aggregator to a nonempty sequence.
    ///
    /// The arithmetic mean uses compensated summation so that chunked or
    /// reordered accumulation elsewhere cannot drift from the serial result.
    pub fn eval(&self, values: &[f64]) -> Result<f64> {
        if values.is_empty() {
            return Err(Error::EmptyAggregation);
        }
        let v = match self {
            Aggregator::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
            Aggregator::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Aggregator::Am => kahan_mean(values),
            Aggregator::External(e) => (e.func)(values).clamp(0.0, 1.0),
        };
        Ok(v)
    }
}

impl PartialEq for Aggregator {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Aggregator::Min, Aggregator::Min)
            | (Aggregator::Max, Aggregator::Max)
            | (Aggregator::Am, Aggregator::Am) => true,
            (Aggregator::External(a), Aggregator::External(b)) => {
                Arc::ptr_eq(a, b) || a.name() == b.name()
            }
            _ => false,
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Aggregator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Aggregator::Min),
            "max" => Ok(Aggregator::Max),
            "am" => Ok(Aggregator::Am),
            other => Err(Error::Formula(format!("unknown aggregator `{other}`"))),
        }
    }
}

impl Serialize for Aggregator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Aggregator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// Compensated (Kahan) mean.
pub fn kahan_mean(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn builtin_values() {
        assert_abs_diff_eq!(
            Aggregator::Am.eval(&[0.2, 0.4, 0.6]).unwrap(),
            0.4,
            epsilon = 1e-15
        );
        assert_eq!(Aggregator::Max.eval(&[0.2, 0.9, 0.4]).unwrap(), 0.9);
        assert_eq!(Aggregator::Min.eval(&[0.5]).unwrap(), 0.5);
    }

    #[test]
    fn empty_sequence_is_an_error() {
        assert!(matches!(
            Aggregator::Am.eval(&[]),
            Err(Error::EmptyAggregation)
        ));
    }

    #[test]
    fn external_aggregator_evaluates() {
        let thr = Aggregator::External(Arc::new(ExternalAggregator::new("threshold", |q| {
            if kahan_mean(q) > 0.5 {
                1.0
            } else {
                0.0
            }
        })));
        assert_eq!(thr.eval(&[0.9, 0.9]).unwrap(), 1.0);
        assert_eq!(thr.eval(&[0.1, 0.2]).unwrap(), 0.0);
        assert_eq!(thr.name(), "threshold");
    }

    #[test]
    fn serde_round_trip_builtin_only() {
        let text = serde_json::to_string(&Aggregator::Am).unwrap();
        assert_eq!(text, "\"am\"");
        let back: Aggregator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, Aggregator::Am);
        assert!(serde_json::from_str::<Aggregator>("\"median\"").is_err());
    }
}
