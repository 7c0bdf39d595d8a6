//! The seven scheduling objectives, evaluated directly on a schedule.
//!
//! | id | meaning                                   | sense |
//! |----|-------------------------------------------|-------|
//! | z1 | weighted sum of squared workloads         | min   |
//! | z2 | covered (defence, subject) pairs          | max   |
//! | z3 | member/thesis subject overlap             | max   |
//! | z4 | non-compactness of each member's day      | min   |
//! | z5 | time slot preference penalty              | min   |
//! | z6 | weighted sum of squared attendance days   | min   |
//! | z7 | room change penalty                       | min   |
//!
//! The coverage objective is kept as an integer numerator; divide by
//! [`Instance::coverage_pairs`] for the ratio.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::feasibility::{check_feasibility, Violation};
use crate::instance::Instance;
use crate::schedule::{Assignment, Schedule};

pub const N_OBJECTIVES: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectiveId {
    Workload,
    Coverage,
    Expertise,
    Compactness,
    TimePreference,
    Days,
    RoomChange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl ObjectiveId {
    pub const ALL: [ObjectiveId; N_OBJECTIVES] = [
        ObjectiveId::Workload,
        ObjectiveId::Coverage,
        ObjectiveId::Expertise,
        ObjectiveId::Compactness,
        ObjectiveId::TimePreference,
        ObjectiveId::Days,
        ObjectiveId::RoomChange,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// `"z1"` .. `"z7"`.
    pub fn short_name(self) -> &'static str {
        ["z1", "z2", "z3", "z4", "z5", "z6", "z7"][self.index()]
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|o| o.short_name() == name)
    }

    pub fn sense(self) -> Sense {
        match self {
            ObjectiveId::Coverage | ObjectiveId::Expertise => Sense::Maximize,
            _ => Sense::Minimize,
        }
    }

    /// +1 for maximised objectives, -1 for minimised ones.
    pub fn canonical_sign(self) -> i64 {
        match self.sense() {
            Sense::Maximize => 1,
            Sense::Minimize => -1,
        }
    }
}

impl fmt::Display for ObjectiveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Raw objective values, each in its own sense.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectiveVector(pub [i64; N_OBJECTIVES]);

impl ObjectiveVector {
    pub fn get(&self, id: ObjectiveId) -> i64 {
        self.0[id.index()]
    }

    /// All-maximise form: minimised objectives are negated.
    pub fn canonical(&self) -> [i64; N_OBJECTIVES] {
        let mut out = self.0;
        for id in ObjectiveId::ALL {
            out[id.index()] *= id.canonical_sign();
        }
        out
    }

    pub fn from_canonical(c: &[i64; N_OBJECTIVES]) -> Self {
        let mut out = *c;
        for id in ObjectiveId::ALL {
            out[id.index()] *= id.canonical_sign();
        }
        ObjectiveVector(out)
    }

    /// Coverage as a fraction of all (defence, subject) pairs.
    pub fn coverage_ratio(&self, inst: &Instance) -> f64 {
        let total = inst.coverage_pairs();
        if total == 0 {
            0.0
        } else {
            self.get(ObjectiveId::Coverage) as f64 / total as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjectiveError {
    Infeasible(Vec<Violation>),
}

impl fmt::Display for ObjectiveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveError::Infeasible(v) => {
                write!(f, "schedule is infeasible ({} violations)", v.len())?;
                if let Some(first) = v.first() {
                    write!(f, ", first: {first}")?;
                }
                Ok(())
            }
        }
    }
}

/// Evaluates all seven objectives. Fails if the schedule is infeasible.
pub fn evaluate_objectives(inst: &Instance, sched: &Schedule) -> Result<ObjectiveVector, ObjectiveError> {
    let violations = check_feasibility(inst, sched);
    if !violations.is_empty() {
        return Err(ObjectiveError::Infeasible(violations));
    }
    Ok(evaluate_unchecked(inst, &sched.assignments))
}

/// Evaluates the objectives without checking feasibility. Only meaningful for
/// feasible assignment sets.
pub fn evaluate_unchecked(inst: &Instance, assignments: &[Assignment]) -> ObjectiveVector {
    let dur = inst.dims.duration;
    let mut z = [0i64; N_OBJECTIVES];

    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut per_member: BTreeMap<usize, Vec<&Assignment>> = BTreeMap::new();
    for a in assignments {
        let m = &inst.members[a.member];
        let u = m.weight as i64;
        z[2] += inst.subject_overlap(a.member, a.defence) as i64;
        z[4] += u * (m.availability[a.day][a.hour] as i64 - 1);
        for (q, has) in inst.defences[a.defence].subjects.iter().enumerate() {
            if *has && m.subjects[q] {
                covered.insert((a.defence, q));
            }
        }
        per_member.entry(a.member).or_default().push(a);
    }
    z[1] = covered.len() as i64;

    for (&i, list) in &per_member {
        let m = &inst.members[i];
        let u = m.weight as i64;
        let w = list.len() as i64;
        z[0] += u * w * w;
        z[3] += u * m.compact_max() as i64 * (w - 1).max(0);
        let days: BTreeSet<usize> = list.iter().map(|a| a.day).collect();
        let nd = days.len() as i64;
        z[5] += u * nd * nd;

        for a in list {
            for b in list.iter() {
                if a.day != b.day || b.hour + dur > a.hour {
                    continue;
                }
                // b ends `gap` slots before a starts.
                let gap = a.hour - b.hour - dur;
                if let Some(&v) = m.compact_weights.get(gap) {
                    z[3] -= u * v as i64;
                }
                if a.room != b.room {
                    if let Some(&h) = m.roomchange_penalties.get(gap) {
                        z[6] += u * h as i64;
                    }
                }
            }
        }
    }
    ObjectiveVector(z)
}
