//! Exhaustive enumeration for tiny instances. Works directly on schedules
//! and never touches the MILP encoding, so it can be used to check it.

use std::time::{Duration, Instant};

use defsched_core::pareto::ParetoArchive;
use defsched_core::{
    check_feasibility, evaluate_objectives, Assignment, Instance, ObjectiveId, ObjectiveVector, Schedule, Violation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_nodes: 50_000_000,
            max_time: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("enumerated schedule failed the direct check: {0}")]
    Internal(String),
}

/// One way to hold a defence: slot, room and a committee (one member per
/// role).
#[derive(Clone, Debug)]
struct Placement {
    day: usize,
    hour: usize,
    room: usize,
    committee: Vec<usize>,
}

fn placements(inst: &Instance, j: usize) -> Vec<Placement> {
    let d = inst.dims;
    let mut out = Vec::new();
    for day in 0..d.days {
        for hour in 0..d.hours {
            if !inst.fits_in_day(hour) {
                continue;
            }
            let pools: Vec<Vec<usize>> = (0..d.roles)
                .map(|t| {
                    (0..d.members)
                        .filter(|&i| inst.defences[j].eligibility[t][i] && inst.member_window_available(i, day, hour))
                        .collect()
                })
                .collect();
            if pools.iter().any(Vec::is_empty) {
                continue;
            }
            let mut committees = Vec::new();
            let mut current = Vec::with_capacity(d.roles);
            distinct_choices(&pools, &mut current, &mut committees);
            for room in 0..d.rooms {
                if !inst.room_window_available(room, day, hour) {
                    continue;
                }
                for c in &committees {
                    out.push(Placement {
                        day,
                        hour,
                        room,
                        committee: c.clone(),
                    });
                }
            }
        }
    }
    out
}

fn distinct_choices(pools: &[Vec<usize>], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == pools.len() {
        out.push(current.clone());
        return;
    }
    for &i in &pools[current.len()] {
        if !current.contains(&i) {
            current.push(i);
            distinct_choices(pools, current, out);
            current.pop();
        }
    }
}

struct Search<'a> {
    inst: &'a Instance,
    options: Vec<Vec<Placement>>,
    member_busy: Vec<Vec<Vec<bool>>>,
    room_busy: Vec<Vec<Vec<bool>>>,
    load: Vec<u32>,
    chosen: Vec<Option<usize>>,
    nodes: u64,
    budget: EnumerationBudget,
    start: Instant,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, budget: EnumerationBudget) -> Self {
        let d = inst.dims;
        Search {
            inst,
            options: (0..d.defences).map(|j| placements(inst, j)).collect(),
            member_busy: vec![vec![vec![false; d.hours]; d.days]; d.members],
            room_busy: vec![vec![vec![false; d.hours]; d.days]; d.rooms],
            load: vec![0; d.members],
            chosen: vec![None; d.defences],
            nodes: 0,
            budget,
            start: Instant::now(),
        }
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        let out_of_time = self.nodes.is_multiple_of(4096) && self.start.elapsed() > self.budget.max_time;
        if self.nodes > self.budget.max_nodes || out_of_time {
            return Err(OracleError::BudgetExceeded { nodes: self.nodes });
        }
        Ok(())
    }

    fn fits(&self, p: &Placement) -> bool {
        let slots = p.hour..p.hour + self.inst.dims.duration;
        if slots.clone().any(|l| self.room_busy[p.room][p.day][l]) {
            return false;
        }
        p.committee.iter().all(|&i| {
            self.load[i] < self.inst.members[i].max_committees && slots.clone().all(|l| !self.member_busy[i][p.day][l])
        })
    }

    fn mark(&mut self, j: usize, o: usize, on: bool) {
        let p = &self.options[j][o];
        for l in p.hour..p.hour + self.inst.dims.duration {
            self.room_busy[p.room][p.day][l] = on;
            for &i in &p.committee {
                self.member_busy[i][p.day][l] = on;
            }
        }
        for &i in &p.committee {
            if on {
                self.load[i] += 1;
            } else {
                self.load[i] -= 1;
            }
        }
        self.chosen[j] = on.then_some(o);
    }

    fn schedule(&self, g: usize) -> Schedule {
        let mut a = Vec::new();
        for (j, o) in self.chosen.iter().enumerate() {
            if let Some(o) = *o {
                let p = &self.options[j][o];
                for (role, &member) in p.committee.iter().enumerate() {
                    a.push(Assignment {
                        member,
                        defence: j,
                        role,
                        day: p.day,
                        hour: p.hour,
                        room: p.room,
                    });
                }
            }
        }
        Schedule::new(a, g)
    }

    /// Largest count, keeping a witness.
    fn max_count(&mut self, j: usize, count: usize, best: &mut (usize, Schedule)) -> Result<(), OracleError> {
        self.tick()?;
        let n = self.options.len();
        if count + (n - j) <= best.0 {
            return Ok(());
        }
        if j == n {
            if count > best.0 {
                *best = (count, self.schedule(count));
            }
            return Ok(());
        }
        for o in 0..self.options[j].len() {
            if self.fits(&self.options[j][o]) {
                self.mark(j, o, true);
                let r = self.max_count(j + 1, count + 1, best);
                self.mark(j, o, false);
                r?;
            }
        }
        self.max_count(j + 1, count, best)
    }

    /// Every schedule with exactly `g` defences.
    fn each_schedule(
        &mut self,
        j: usize,
        count: usize,
        g: usize,
        visit: &mut dyn FnMut(&Self) -> Result<(), OracleError>,
    ) -> Result<(), OracleError> {
        self.tick()?;
        let n = self.options.len();
        if count + (n - j) < g {
            return Ok(());
        }
        if j == n {
            return visit(self);
        }
        if count < g {
            for o in 0..self.options[j].len() {
                if self.fits(&self.options[j][o]) {
                    self.mark(j, o, true);
                    let r = self.each_schedule(j + 1, count + 1, g, visit);
                    self.mark(j, o, false);
                    r?;
                }
            }
        }
        self.each_schedule(j + 1, count, g, visit)
    }
}

#[derive(Clone, Debug)]
pub struct OracleG {
    pub g: usize,
    pub witness: Schedule,
    pub nodes: u64,
}

/// Largest number of defences that can be scheduled, by exhaustive search.
pub fn brute_force_g(inst: &Instance, budget: EnumerationBudget) -> Result<OracleG, OracleError> {
    let mut s = Search::new(inst, budget);
    let mut best = (0, Schedule::default());
    s.max_count(0, 0, &mut best)?;
    let violations = check_feasibility(inst, &best.1);
    if !violations.is_empty() {
        return Err(OracleError::Internal(format!("{:?}", violations[0])));
    }
    Ok(OracleG {
        g: best.0,
        witness: best.1,
        nodes: s.nodes,
    })
}

#[derive(Clone, Debug)]
pub struct OracleFront {
    pub g: usize,
    /// Non-dominated objective vectors (canonical comparison) with one
    /// schedule each.
    pub front: Vec<(ObjectiveVector, Schedule)>,
    /// Number of feasible schedules with `g` defences.
    pub schedules: u64,
}

/// Exact seven-objective Pareto front over all schedules with the maximum
/// number of defences.
pub fn brute_force_pareto(inst: &Instance, budget: EnumerationBudget) -> Result<OracleFront, OracleError> {
    let g = brute_force_g(inst, budget)?.g;
    let mut s = Search::new(inst, budget);
    let mut archive: ParetoArchive<(ObjectiveVector, Schedule)> = ParetoArchive::new();
    let mut schedules = 0u64;
    s.each_schedule(0, 0, g, &mut |search| {
        let sched = search.schedule(g);
        let obj = evaluate_objectives(inst, &sched).map_err(|e| OracleError::Internal(e.to_string()))?;
        schedules += 1;
        archive.insert(obj.canonical().to_vec(), (obj, sched));
        Ok(())
    })?;
    Ok(OracleFront {
        g,
        front: archive.into_entries().into_iter().map(|(_, p)| p).collect(),
        schedules,
    })
}

/// Calls `visit` on every feasible schedule with exactly `g` defences.
/// Returns how many were visited.
pub fn for_each_schedule(
    inst: &Instance,
    g: usize,
    budget: EnumerationBudget,
    visit: &mut dyn FnMut(&Schedule),
) -> Result<u64, OracleError> {
    let mut s = Search::new(inst, budget);
    let mut count = 0u64;
    s.each_schedule(0, 0, g, &mut |search| {
        visit(&search.schedule(g));
        count += 1;
        Ok(())
    })?;
    Ok(count)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub violations: Vec<Violation>,
    /// `(objective, claimed, recomputed)`.
    pub mismatches: Vec<(ObjectiveId, i64, i64)>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.mismatches.is_empty()
    }
}

/// Re-checks a schedule and the objective values claimed for it.
pub fn verify_solution(inst: &Instance, sched: &Schedule, claimed: &ObjectiveVector) -> Verification {
    let violations = check_feasibility(inst, sched);
    let mut mismatches = Vec::new();
    if violations.is_empty() {
        if let Ok(actual) = evaluate_objectives(inst, sched) {
            for id in ObjectiveId::ALL {
                if actual.get(id) != claimed.get(id) {
                    mismatches.push((id, claimed.get(id), actual.get(id)));
                }
            }
        }
    }
    Verification { violations, mismatches }
}
