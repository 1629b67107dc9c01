//! Verdicts and re-checkable witnesses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::fitz::RepresentedFunction;
use crate::point::{natural_couple, PairPoint};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    VerifiedOnSamples,
    Refuted,
    WitnessFound,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::VerifiedOnSamples => "verified-on-samples",
            Status::Refuted => "refuted",
            Status::WitnessFound => "witness-found",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// What a witness's recorded value means, so it can be recomputed from its points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessKind {
    /// `value = c(z₁ − z₂)`.
    PairCoupling,
    /// `value = z₁·z₂`.
    NaturalCouple,
    /// `value = z₁·z₂ − c(z₂)`, one term of a sampled Fitzpatrick supremum.
    FitzpatrickTerm,
    /// `value = c(z) − f(z)` with `f(z)` finite.
    CouplingGap { function: RepresentedFunction },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(flatten)]
    pub kind: WitnessKind,
    pub points: Vec<PairPoint>,
    #[serde(with = "rational::text")]
    pub value: Rational,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Witness {
    pub fn new(kind: WitnessKind, points: Vec<PairPoint>, value: Rational) -> Self {
        Self {
            kind,
            points,
            value,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Recomputes the defining quantity from the stored points.
    pub fn recompute(&self) -> Result<Option<Rational>> {
        let p = &self.points;
        Ok(match &self.kind {
            WitnessKind::PairCoupling => Some(p[0].sub(&p[1])?.coupling()?),
            WitnessKind::NaturalCouple => Some(natural_couple(&p[0], &p[1])?),
            WitnessKind::FitzpatrickTerm => {
                Some(natural_couple(&p[0], &p[1])? - p[1].coupling()?)
            }
            WitnessKind::CouplingGap { function } => function
                .eval(&p[0])?
                .finite()
                .map(|f| p[0].coupling().map(|c| c - f))
                .transpose()?,
        })
    }

    /// Whether the recorded value is reproduced exactly.
    pub fn recheck(&self) -> Result<bool> {
        Ok(self.recompute()?.as_ref() == Some(&self.value))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub property: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witness: Vec<Witness>,
    pub stats: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl PropertyVerdict {
    pub fn new(property: impl Into<String>, status: Status) -> Self {
        Self {
            property: property.into(),
            status,
            witness: Vec::new(),
            stats: BTreeMap::new(),
            seed: None,
        }
    }

    pub fn stat(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.stats.insert(key.to_string(), value.into());
        self
    }

    pub fn stat_q(self, key: &str, value: &Rational) -> Self {
        self.stat(key, rational::to_text(value))
    }

    pub fn witness(mut self, w: Witness) -> Self {
        self.witness.push(w);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}
