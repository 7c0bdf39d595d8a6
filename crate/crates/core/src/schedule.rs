use alloc::collections::BTreeSet;
use alloc::vec::Vec;

/// Member `member` sits on the committee of `defence` in role `role`, the
/// defence starting at `(day, hour)` in `room`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    pub member: usize,
    pub defence: usize,
    pub role: usize,
    pub day: usize,
    pub hour: usize,
    pub room: usize,
}

/// A set of assignments together with the number of defences it is supposed
/// to schedule.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    pub assignments: Vec<Assignment>,
    pub g: usize,
}

impl Schedule {
    pub fn new(mut assignments: Vec<Assignment>, g: usize) -> Self {
        assignments.sort_unstable();
        Schedule { assignments, g }
    }

    /// Defences that appear in at least one assignment.
    pub fn scheduled_defences(&self) -> BTreeSet<usize> {
        self.assignments.iter().map(|a| a.defence).collect()
    }

    pub fn assignments_of(&self, member: usize) -> impl Iterator<Item = &Assignment> {
        self.assignments.iter().filter(move |a| a.member == member)
    }
}
