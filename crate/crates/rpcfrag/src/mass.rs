//! Ranked mass partitions: nonincreasing masses in [0,1] with an explicit
//! bound on the unenumerated remainder (dust).
//!
//! Truncated samplers cannot enumerate every atom, so each value carries the
//! dust bound forward and every consumer decides what the remainder costs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::SetPartition;
use crate::scalar::{c, Real};

/// Slack for float-sum validation: sums of ~1e6 stick-breaking terms round.
const SUM_SLACK: f64 = 1e-9;

/// A ranked mass partition with a dust bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Serialize", deserialize = "F: Deserialize<'de> + Real"))]
#[serde(try_from = "RawMass<F>")]
pub struct MassPartition<F> {
    masses: Vec<F>,
    dust_bound: F,
}

#[derive(Deserialize)]
struct RawMass<F> {
    masses: Vec<F>,
    dust_bound: F,
}

impl<F: Real> TryFrom<RawMass<F>> for MassPartition<F> {
    type Error = Error;
    fn try_from(raw: RawMass<F>) -> Result<Self> {
        MassPartition::new(raw.masses, raw.dust_bound)
    }
}

impl<F: Real> MassPartition<F> {
    /// Validates ordering, ranges, and total mass.
    pub fn new(masses: Vec<F>, dust_bound: F) -> Result<Self> {
        let one_plus = F::one() + c::<F>(SUM_SLACK);
        let mut total = F::zero();
        let mut prev = F::one();
        for &m in &masses {
            if !(m >= F::zero() && m <= F::one()) {
                return Err(Error::InvalidArgument(format!("mass {m} outside [0,1]")));
            }
            if m > prev {
                return Err(Error::InvalidArgument(
                    "masses must be nonincreasing".into(),
                ));
            }
            prev = m;
            total = total + m;
        }
        if !(total <= one_plus) {
            return Err(Error::InvalidArgument(format!("total mass {total} exceeds 1")));
        }
        if !(dust_bound >= F::zero()) || !dust_bound.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "dust bound {dust_bound} must be finite and nonnegative"
            )));
        }
        Ok(MassPartition { masses, dust_bound })
    }

    /// Sorts the entries descending, then validates.
    pub fn from_unsorted(mut masses: Vec<F>, dust_bound: F) -> Result<Self> {
        masses.sort_unstable_by(|a, b| b.partial_cmp(a).expect("finite masses"));
        Self::new(masses, dust_bound)
    }

    pub fn masses(&self) -> &[F] {
        &self.masses
    }

    pub fn dust_bound(&self) -> F {
        self.dust_bound
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Sum of the enumerated masses.
    pub fn total(&self) -> F {
        self.masses.iter().copied().fold(F::zero(), |a, b| a + b)
    }

    /// Σ mᵢ² over the enumerated masses.
    pub fn sum_squares(&self) -> F {
        self.masses.iter().map(|&m| m * m).fold(F::zero(), |a, b| a + b)
    }

    /// Coagulates by the grouping partition: entry j of the result is the sum
    /// of masses whose index lies in block j, reranked. The grouping must
    /// cover every nonzero enumerated mass; indices past the enumeration
    /// contribute zero. Dust passes through unchanged.
    pub fn coag(&self, grouping: &SetPartition) -> Result<MassPartition<F>> {
        let nonzero = self
            .masses
            .iter()
            .rposition(|&m| m > F::zero())
            .map_or(0, |i| i + 1);
        if grouping.n() < nonzero {
            return Err(Error::InvalidArgument(format!(
                "grouping on [{}] does not cover {} nonzero masses",
                grouping.n(),
                nonzero
            )));
        }
        let sums: Vec<F> = grouping
            .blocks()
            .iter()
            .map(|block| {
                block
                    .iter()
                    .filter_map(|&idx| self.masses.get(idx - 1).copied())
                    .fold(F::zero(), |a, b| a + b)
            })
            .collect();
        MassPartition::from_unsorted(sums, self.dust_bound)
    }

    /// Fragments each enumerated mass by its splitter: the result collects
    /// sᵢ·sⱼ⁽ⁱ⁾ over all i, j, reranked. Dust accumulates as
    /// dust(self) + Σ sᵢ·dustᵢ.
    pub fn frag(&self, splitters: &[MassPartition<F>]) -> Result<MassPartition<F>> {
        if splitters.len() != self.masses.len() {
            return Err(Error::InvalidArgument(format!(
                "{} splitters for {} masses",
                splitters.len(),
                self.masses.len()
            )));
        }
        let mut out = Vec::new();
        let mut dust = self.dust_bound;
        for (&s, splitter) in self.masses.iter().zip(splitters) {
            for &piece in &splitter.masses {
                out.push(s * piece);
            }
            dust = dust + s * splitter.dust_bound;
        }
        MassPartition::from_unsorted(out, dust)
    }
}
