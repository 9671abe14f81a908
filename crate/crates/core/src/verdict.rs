/// Outcome of an exhaustive or sampled property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    /// A counterexample.
    Violated(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Outcome of a numeric inequality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    /// The bound is nonpositive (or otherwise trivially met), so the
    /// inequality carries no information.
    Vacuous,
    Violated,
}

impl Status {
    pub fn is_violation(self) -> bool {
        self == Status::Violated
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Vacuous => "vacuous",
            Status::Violated => "violated",
        }
    }
}
