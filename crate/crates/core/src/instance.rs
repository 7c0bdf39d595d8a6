//! Problem data for one scheduling instance.
//!
//! All indices are 0-based: members `i`, defences `j`, roles `t`, days `k`,
//! hours (time slots) `l`, rooms `p`, subjects `q`.

use alloc::vec::Vec;
use core::fmt;

/// Sizes of an instance. `duration` is the number of consecutive slots a
/// defence occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims {
    pub members: usize,
    pub defences: usize,
    pub roles: usize,
    pub days: usize,
    pub hours: usize,
    pub rooms: usize,
    pub subjects: usize,
    pub duration: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    /// Weight `u_i >= 1` applied to every objective term of this member.
    pub weight: u32,
    /// Maximum number of committees `c_i`.
    pub max_committees: u32,
    /// `availability[k][l]`: 0 means unavailable, values >= 1 are preference
    /// levels (1 is the best).
    pub availability: Vec<Vec<u32>>,
    /// `subjects[q]`: expertise flags.
    pub subjects: Vec<bool>,
    /// Compactness weights `v_0..=v_b`; `compact_weights[δ]` rewards a gap of
    /// `δ` slots between two defences of the same day.
    pub compact_weights: Vec<u32>,
    /// Room change penalties `h_0..=h_a`.
    pub roomchange_penalties: Vec<u32>,
}

impl Member {
    /// `b_i`: largest gap that still counts as compact.
    pub fn compact_window(&self) -> usize {
        self.compact_weights.len().saturating_sub(1)
    }

    /// `a_i`: largest gap after which a room change is still penalised.
    pub fn roomchange_window(&self) -> usize {
        self.roomchange_penalties.len().saturating_sub(1)
    }

    /// `n_v = max_δ v_δ`.
    pub fn compact_max(&self) -> u32 {
        self.compact_weights.iter().copied().max().unwrap_or(0)
    }

    /// `n_h = max_δ h_δ`.
    pub fn roomchange_max(&self) -> u32 {
        self.roomchange_penalties.iter().copied().max().unwrap_or(0)
    }

    pub fn is_available(&self, day: usize, hour: usize) -> bool {
        self.availability[day][hour] >= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defence {
    /// `subjects[q]`: subjects covered by the thesis.
    pub subjects: Vec<bool>,
    /// `eligibility[t][i]`: member `i` may take role `t`.
    pub eligibility: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub dims: Dims,
    pub members: Vec<Member>,
    pub defences: Vec<Defence>,
    /// `room_availability[p][k][l]`.
    pub room_availability: Vec<Vec<Vec<bool>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    ZeroDimension(&'static str),
    ZeroWeight { member: usize },
    ZeroCommitteeCap { member: usize },
    /// `b_i >= d` or `a_i >= d`.
    WindowTooLong {
        member: usize,
        what: &'static str,
        window: usize,
    },
    EmptyProfile { member: usize, what: &'static str },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DimensionMismatch {
                what,
                expected,
                found,
            } => write!(f, "{what}: expected length {expected}, found {found}"),
            Self::ZeroDimension(what) => write!(f, "dimension {what} must be positive"),
            Self::ZeroWeight { member } => write!(f, "member {member}: weight must be >= 1"),
            Self::ZeroCommitteeCap { member } => {
                write!(f, "member {member}: committee cap must be >= 1")
            }
            Self::WindowTooLong {
                member,
                what,
                window,
            } => write!(
                f,
                "member {member}: {what} window {window} must be shorter than the defence duration"
            ),
            Self::EmptyProfile { member, what } => {
                write!(f, "member {member}: {what} profile must not be empty")
            }
        }
    }
}

fn expect_len(what: &'static str, expected: usize, found: usize) -> Result<(), InstanceError> {
    if expected == found {
        Ok(())
    } else {
        Err(InstanceError::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}

impl Instance {
    /// Checks that every array matches the declared dimensions and that the
    /// scalar parameters are in range.
    pub fn validate(&self) -> Result<(), InstanceError> {
        let d = &self.dims;
        for (what, v) in [
            ("roles", d.roles),
            ("days", d.days),
            ("hours", d.hours),
            ("duration", d.duration),
        ] {
            if v == 0 {
                return Err(InstanceError::ZeroDimension(what));
            }
        }
        expect_len("members", d.members, self.members.len())?;
        expect_len("defences", d.defences, self.defences.len())?;
        expect_len("rooms", d.rooms, self.room_availability.len())?;
        for (i, m) in self.members.iter().enumerate() {
            if m.weight == 0 {
                return Err(InstanceError::ZeroWeight { member: i });
            }
            if m.max_committees == 0 {
                return Err(InstanceError::ZeroCommitteeCap { member: i });
            }
            expect_len("member availability days", d.days, m.availability.len())?;
            for row in &m.availability {
                expect_len("member availability hours", d.hours, row.len())?;
            }
            expect_len("member subjects", d.subjects, m.subjects.len())?;
            if m.compact_weights.is_empty() {
                return Err(InstanceError::EmptyProfile {
                    member: i,
                    what: "compactness",
                });
            }
            if m.roomchange_penalties.is_empty() {
                return Err(InstanceError::EmptyProfile {
                    member: i,
                    what: "room change",
                });
            }
            if m.compact_window() >= d.duration {
                return Err(InstanceError::WindowTooLong {
                    member: i,
                    what: "compactness",
                    window: m.compact_window(),
                });
            }
            if m.roomchange_window() >= d.duration {
                return Err(InstanceError::WindowTooLong {
                    member: i,
                    what: "room change",
                    window: m.roomchange_window(),
                });
            }
        }
        for def in &self.defences {
            expect_len("defence subjects", d.subjects, def.subjects.len())?;
            expect_len("defence eligibility roles", d.roles, def.eligibility.len())?;
            for row in &def.eligibility {
                expect_len("defence eligibility members", d.members, row.len())?;
            }
        }
        for room in &self.room_availability {
            expect_len("room availability days", d.days, room.len())?;
            for row in room {
                expect_len("room availability hours", d.hours, row.len())?;
            }
        }
        Ok(())
    }

    pub fn room_available(&self, day: usize, hour: usize, room: usize) -> bool {
        self.room_availability[room][day][hour]
    }

    /// Whether a defence may start at `hour` without running past the end of
    /// the day.
    pub fn fits_in_day(&self, hour: usize) -> bool {
        hour + self.dims.duration <= self.dims.hours
    }

    /// Member `i` is available in every slot of a defence starting at
    /// `(day, hour)`.
    pub fn member_window_available(&self, member: usize, day: usize, hour: usize) -> bool {
        self.fits_in_day(hour)
            && (hour..hour + self.dims.duration)
                .all(|l| self.members[member].is_available(day, l))
    }

    /// Room `p` is available in every slot of a defence starting at
    /// `(day, hour)`.
    pub fn room_window_available(&self, room: usize, day: usize, hour: usize) -> bool {
        self.fits_in_day(hour)
            && (hour..hour + self.dims.duration).all(|l| self.room_available(day, l, room))
    }

    /// `|subj(i) ∩ subj(j)|`.
    pub fn subject_overlap(&self, member: usize, defence: usize) -> u32 {
        self.members[member]
            .subjects
            .iter()
            .zip(&self.defences[defence].subjects)
            .filter(|(a, b)| **a && **b)
            .count() as u32
    }

    /// Total number of (defence, subject) pairs with the subject present in
    /// the defence. Upper bound of the coverage objective.
    pub fn coverage_pairs(&self) -> usize {
        self.defences
            .iter()
            .map(|d| d.subjects.iter().filter(|s| **s).count())
            .sum()
    }
}
