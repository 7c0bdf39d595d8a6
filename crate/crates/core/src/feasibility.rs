//! Direct feasibility check of a schedule against the model constraints.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::instance::Instance;
use crate::schedule::{Assignment, Schedule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    IndexOutOfRange { assignment: Assignment },
    DuplicateAssignment { assignment: Assignment },
    SpansDays { defence: usize, hour: usize },
    /// A role of a scheduled defence is filled by zero or several members.
    IncompleteCommittee { defence: usize, role: usize, filled: usize },
    DefenceMultipleSlots { defence: usize },
    WrongDefenceCount { expected: usize, found: usize },
    Ineligible { assignment: Assignment },
    CommitteeCapExceeded { member: usize, count: usize, cap: u32 },
    MemberUnavailable { member: usize, day: usize, hour: usize },
    MemberOverlap { member: usize, day: usize, first: usize, second: usize },
    RoomUnavailable { room: usize, day: usize, hour: usize },
    RoomOverlap { room: usize, day: usize, first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::IndexOutOfRange { assignment } => write!(f, "index out of range: {assignment:?}"),
            Self::DuplicateAssignment { assignment } => write!(f, "duplicate: {assignment:?}"),
            Self::SpansDays { defence, hour } => {
                write!(f, "defence {defence} starting at hour {hour} runs past the end of the day")
            }
            Self::IncompleteCommittee { defence, role, filled } => {
                write!(f, "defence {defence}: role {role} filled by {filled} members")
            }
            Self::DefenceMultipleSlots { defence } => {
                write!(f, "defence {defence} is scheduled in more than one slot")
            }
            Self::WrongDefenceCount { expected, found } => {
                write!(f, "expected {expected} scheduled defences, found {found}")
            }
            Self::Ineligible { assignment } => write!(f, "member not eligible: {assignment:?}"),
            Self::CommitteeCapExceeded { member, count, cap } => {
                write!(f, "member {member} sits on {count} committees, cap {cap}")
            }
            Self::MemberUnavailable { member, day, hour } => {
                write!(f, "member {member} unavailable at day {day} hour {hour}")
            }
            Self::MemberOverlap { member, day, first, second } => write!(
                f,
                "member {member} has overlapping defences on day {day} at hours {first} and {second}"
            ),
            Self::RoomUnavailable { room, day, hour } => {
                write!(f, "room {room} unavailable at day {day} hour {hour}")
            }
            Self::RoomOverlap { room, day, first, second } => write!(
                f,
                "room {room} has overlapping defences on day {day} at hours {first} and {second}"
            ),
        }
    }
}

fn in_range(inst: &Instance, a: &Assignment) -> bool {
    let d = &inst.dims;
    a.member < d.members
        && a.defence < d.defences
        && a.role < d.roles
        && a.day < d.days
        && a.hour < d.hours
        && a.room < d.rooms
}

/// Returns every violated constraint; an empty vector means feasible.
pub fn check_feasibility(inst: &Instance, sched: &Schedule) -> Vec<Violation> {
    let mut out = Vec::new();
    let dur = inst.dims.duration;

    for a in &sched.assignments {
        if !in_range(inst, a) {
            out.push(Violation::IndexOutOfRange { assignment: *a });
        }
    }
    if !out.is_empty() {
        return out;
    }

    let mut seen = BTreeSet::new();
    for a in &sched.assignments {
        if !seen.insert(*a) {
            out.push(Violation::DuplicateAssignment { assignment: *a });
        }
    }
    let assignments: Vec<Assignment> = seen.into_iter().collect();

    // (defence) -> (day, hour, room) -> role counts
    let mut slots: BTreeMap<usize, BTreeMap<(usize, usize, usize), Vec<usize>>> = BTreeMap::new();
    for a in &assignments {
        let roles = slots
            .entry(a.defence)
            .or_default()
            .entry((a.day, a.hour, a.room))
            .or_insert_with(|| alloc::vec![0; inst.dims.roles]);
        roles[a.role] += 1;
    }
    for (&defence, by_slot) in &slots {
        if by_slot.len() > 1 {
            out.push(Violation::DefenceMultipleSlots { defence });
        }
        for (&(_, hour, _), roles) in by_slot {
            if !inst.fits_in_day(hour) {
                out.push(Violation::SpansDays { defence, hour });
            }
            for (role, &filled) in roles.iter().enumerate() {
                if filled != 1 {
                    out.push(Violation::IncompleteCommittee { defence, role, filled });
                }
            }
        }
    }
    if slots.len() != sched.g {
        out.push(Violation::WrongDefenceCount {
            expected: sched.g,
            found: slots.len(),
        });
    }

    let mut per_member: BTreeMap<usize, Vec<&Assignment>> = BTreeMap::new();
    for a in &assignments {
        if !inst.defences[a.defence].eligibility[a.role][a.member] {
            out.push(Violation::Ineligible { assignment: *a });
        }
        per_member.entry(a.member).or_default().push(a);
    }

    for (&member, list) in &per_member {
        let m = &inst.members[member];
        let committees: BTreeSet<usize> = list.iter().map(|a| a.defence).collect();
        if committees.len() > m.max_committees as usize {
            out.push(Violation::CommitteeCapExceeded {
                member,
                count: committees.len(),
                cap: m.max_committees,
            });
        }
        for a in list {
            for l in a.hour..(a.hour + dur).min(inst.dims.hours) {
                if !m.is_available(a.day, l) {
                    out.push(Violation::MemberUnavailable { member, day: a.day, hour: l });
                }
            }
        }
        for (x, a) in list.iter().enumerate() {
            for b in &list[x + 1..] {
                if a.day == b.day && a.hour.abs_diff(b.hour) < dur {
                    out.push(Violation::MemberOverlap {
                        member,
                        day: a.day,
                        first: a.hour.min(b.hour),
                        second: a.hour.max(b.hour),
                    });
                }
            }
        }
    }

    let occupied: Vec<(usize, usize, usize, usize)> = slots
        .iter()
        .flat_map(|(&j, by_slot)| by_slot.keys().map(move |&(k, l, p)| (j, k, l, p)))
        .collect();
    for &(_, k, l, p) in &occupied {
        for h in l..(l + dur).min(inst.dims.hours) {
            if !inst.room_available(k, h, p) {
                out.push(Violation::RoomUnavailable { room: p, day: k, hour: h });
            }
        }
    }
    for (x, &(_, k, l, p)) in occupied.iter().enumerate() {
        for &(_, k2, l2, p2) in &occupied[x + 1..] {
            if p == p2 && k == k2 && l.abs_diff(l2) < dur {
                out.push(Violation::RoomOverlap {
                    room: p,
                    day: k,
                    first: l.min(l2),
                    second: l.max(l2),
                });
            }
        }
    }
    out
}

pub fn is_feasible(inst: &Instance, sched: &Schedule) -> bool {
    check_feasibility(inst, sched).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::tiny;
    use alloc::vec;

    fn asg(member: usize, defence: usize, role: usize, hour: usize, room: usize) -> Assignment {
        Assignment { member, defence, role, day: 0, hour, room }
    }

    #[test]
    fn empty_schedule_with_zero_target_is_feasible() {
        assert!(is_feasible(&tiny(), &Schedule::new(vec![], 0)));
    }

    #[test]
    fn valid_two_defence_schedule() {
        let s = Schedule::new(
            vec![asg(0, 0, 0, 1, 0), asg(2, 0, 1, 1, 0), asg(1, 1, 0, 3, 1), asg(0, 1, 1, 3, 1)],
            2,
        );
        assert_eq!(check_feasibility(&tiny(), &s), vec![]);
    }

    #[test]
    fn detects_each_violation_kind() {
        let inst = tiny();
        // Missing role 1.
        let v = check_feasibility(&inst, &Schedule::new(vec![asg(0, 0, 0, 1, 0)], 1));
        assert!(v.contains(&Violation::IncompleteCommittee { defence: 0, role: 1, filled: 0 }));
        // Member 2 unavailable at hour 0.
        let v = check_feasibility(&inst, &Schedule::new(vec![asg(0, 0, 0, 0, 1), asg(2, 0, 1, 0, 1)], 1));
        assert!(v.contains(&Violation::MemberUnavailable { member: 2, day: 0, hour: 0 }));
        // Room 0 unavailable at hour 4.
        let v = check_feasibility(&inst, &Schedule::new(vec![asg(0, 0, 0, 3, 0), asg(2, 0, 1, 3, 0)], 1));
        assert!(v.contains(&Violation::RoomUnavailable { room: 0, day: 0, hour: 4 }));
        // Member 0 in both defences one slot apart.
        let v = check_feasibility(
            &inst,
            &Schedule::new(
                vec![asg(0, 0, 0, 1, 0), asg(2, 0, 1, 1, 0), asg(1, 1, 0, 2, 1), asg(0, 1, 1, 2, 1)],
                2,
            ),
        );
        assert!(v.contains(&Violation::MemberOverlap { member: 0, day: 0, first: 1, second: 2 }));
        // Ineligible and count mismatch.
        let v = check_feasibility(&inst, &Schedule::new(vec![asg(1, 0, 0, 1, 0), asg(2, 0, 1, 1, 0)], 2));
        assert!(v.contains(&Violation::Ineligible { assignment: asg(1, 0, 0, 1, 0) }));
        assert!(v.contains(&Violation::WrongDefenceCount { expected: 2, found: 1 }));
        // Starting in the last hour spans past the day.
        let v = check_feasibility(&inst, &Schedule::new(vec![asg(0, 0, 0, 5, 1), asg(2, 0, 1, 5, 1)], 1));
        assert!(v.contains(&Violation::SpansDays { defence: 0, hour: 5 }));
    }

    #[test]
    fn room_overlap_and_cap() {
        let mut inst = tiny();
        inst.members[0].max_committees = 1;
        let v = check_feasibility(
            &inst,
            &Schedule::new(
                vec![asg(0, 0, 0, 1, 1), asg(2, 0, 1, 1, 1), asg(1, 1, 0, 2, 1), asg(0, 1, 1, 3, 1)],
                2,
            ),
        );
        assert!(v.contains(&Violation::DefenceMultipleSlots { defence: 1 }));
        assert!(v.contains(&Violation::CommitteeCapExceeded { member: 0, count: 2, cap: 1 }));
        assert!(v.iter().any(|x| matches!(x, Violation::RoomOverlap { room: 1, .. })));
    }
}
