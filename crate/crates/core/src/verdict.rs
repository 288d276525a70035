use std::fmt;

use num_bigint::BigInt;

use crate::symbols::RationalPlace;

/// Why an equation was declared to have no integer solution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UnsolvableReason {
    /// No solution over the completion at this place.
    LocalObstruction(RationalPlace),
    /// Every orbit has a representative with `|y|` at most this bound, and none exists.
    OrbitBoundExhausted { y_bound: BigInt },
    /// Every primitive class was enumerated through its continued fraction and none exists.
    ClassSearchExhausted,
    /// A closed-form criterion excludes solutions.
    Criterion(String),
}

impl fmt::Display for UnsolvableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnsolvableReason::LocalObstruction(p) => write!(f, "local-obstruction@{p}"),
            UnsolvableReason::OrbitBoundExhausted { y_bound } => {
                write!(f, "orbit-bound-exhausted(|y|<={y_bound})")
            }
            UnsolvableReason::ClassSearchExhausted => write!(f, "class-search-exhausted"),
            UnsolvableReason::Criterion(c) => write!(f, "criterion:{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Status {
    Solvable { x: BigInt, y: BigInt },
    Unsolvable(UnsolvableReason),
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatusKind {
    Solvable,
    Unsolvable,
    Undetermined,
}

impl StatusKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StatusKind::Solvable => "solvable",
            StatusKind::Unsolvable => "unsolvable",
            StatusKind::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Verdict {
    pub status: Status,
    /// Which procedure produced the status, e.g. `"oracle"` or `"scholz-brown"`.
    pub provenance: String,
}

impl Verdict {
    pub fn solvable(x: BigInt, y: BigInt, provenance: impl Into<String>) -> Self {
        Verdict {
            status: Status::Solvable { x, y },
            provenance: provenance.into(),
        }
    }

    pub fn unsolvable(reason: UnsolvableReason, provenance: impl Into<String>) -> Self {
        Verdict {
            status: Status::Unsolvable(reason),
            provenance: provenance.into(),
        }
    }

    pub fn kind(&self) -> StatusKind {
        match self.status {
            Status::Solvable { .. } => StatusKind::Solvable,
            Status::Unsolvable(_) => StatusKind::Unsolvable,
            Status::Undetermined => StatusKind::Undetermined,
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.kind() == StatusKind::Solvable
    }

    pub fn witness(&self) -> Option<(&BigInt, &BigInt)> {
        match &self.status {
            Status::Solvable { x, y } => Some((x, y)),
            _ => None,
        }
    }

    /// True unless the verdict carries a witness that fails `x² − Dy² = n`.
    pub fn witness_checks(&self, d: i64, n: i64) -> bool {
        match self.witness() {
            Some((x, y)) => x * x - BigInt::from(d) * y * y == BigInt::from(n),
            None => true,
        }
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::Solvable { x, y } => write!(f, "solvable ({x}, {y}) [{}]", self.provenance),
            Status::Unsolvable(r) => write!(f, "unsolvable: {r} [{}]", self.provenance),
            Status::Undetermined => write!(f, "undetermined [{}]", self.provenance),
        }
    }
}
