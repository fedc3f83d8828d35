use serde::{Deserialize, Serialize};

/// Outcome of a decision procedure: either the property holds, or it fails
/// and a witness explains where.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "value", content = "witness", rename_all = "snake_case")]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn map_witness<U>(self, f: impl FnOnce(W) -> U) -> Verdict<U> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(f(w)),
        }
    }
}

impl<W> From<Option<W>> for Verdict<W> {
    fn from(w: Option<W>) -> Self {
        match w {
            None => Verdict::Holds,
            Some(w) => Verdict::Fails(w),
        }
    }
}

/// Outcome of a search that can only falsify: a counterexample, or none found
/// within `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "value", rename_all = "snake_case")]
pub enum BoundedVerdict<W> {
    HoldsAtBound { bound: usize, checked: usize },
    Falsified { witness: W },
}

impl<W> BoundedVerdict<W> {
    pub fn holds_at_bound(&self) -> bool {
        matches!(self, BoundedVerdict::HoldsAtBound { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            BoundedVerdict::HoldsAtBound { .. } => None,
            BoundedVerdict::Falsified { witness } => Some(witness),
        }
    }
}
