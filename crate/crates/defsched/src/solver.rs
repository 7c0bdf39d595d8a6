//! MILP solver adapter. HiGHS is the only backend.

use std::collections::BTreeMap;
use std::num::NonZeroU32;
use std::time::{Duration, Instant};

use defsched_core::milp::{AbstractMilp, Relation, VarKind};
use defsched_core::Sense;
use highs::{HighsModelStatus, HighsSolutionStatus, RowProblem};

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    pub seed: i32,
    /// `None` lets the backend choose.
    pub threads: Option<u32>,
    pub mip_abs_gap: f64,
    pub mip_rel_gap: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            seed: 0,
            threads: None,
            mip_abs_gap: 0.0,
            mip_rel_gap: 1e-9,
        }
    }
}

impl SolverParams {
    pub fn deterministic() -> Self {
        SolverParams {
            threads: Some(1),
            ..SolverParams::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SolveStatus {
    Optimal,
    FeasibleTimeLimit,
    Infeasible,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// One value per variable (integers rounded); empty unless a solution
    /// is available.
    pub values: Vec<f64>,
    /// Objective evaluated at `values`.
    pub objective: f64,
    pub best_bound: Option<f64>,
    pub wall_time: Duration,
    pub diagnostic: Option<String>,
}

impl SolveResult {
    fn without_solution(status: SolveStatus, wall_time: Duration, diagnostic: Option<String>) -> Self {
        SolveResult {
            status,
            values: Vec::new(),
            objective: f64::NAN,
            best_bound: None,
            wall_time,
            diagnostic,
        }
    }

    pub fn has_solution(&self) -> bool {
        matches!(self.status, SolveStatus::Optimal | SolveStatus::FeasibleTimeLimit)
    }
}

/// What a backend supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capabilities {
    pub time_limit: bool,
    pub incumbent_at_time_limit: bool,
    pub deterministic_mode: bool,
}

pub trait MilpSolver {
    fn name(&self) -> &'static str;
    fn capabilities(&self) -> Capabilities;
    fn solve(&self, model: &AbstractMilp, time_limit: Duration, params: &SolverParams) -> SolveResult;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HighsSolver;

/// Largest distance of an integer variable from an integer that is accepted
/// before rounding.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;

impl MilpSolver for HighsSolver {
    fn name(&self) -> &'static str {
        "highs"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            time_limit: true,
            incumbent_at_time_limit: true,
            deterministic_mode: true,
        }
    }

    fn solve(&self, model: &AbstractMilp, time_limit: Duration, params: &SolverParams) -> SolveResult {
        let start = Instant::now();
        if model.vars.is_empty() {
            return solve_empty(model, start);
        }
        let mut pb = RowProblem::default();
        let mut cost = vec![0.0; model.vars.len()];
        for &(v, c) in &model.objective.terms {
            cost[v.0] += c;
        }
        let cols: Vec<_> = model
            .vars
            .iter()
            .zip(&cost)
            .map(|(v, &c)| pb.add_column_with_integrality(c, v.lower..=v.upper, v.kind != VarKind::Continuous))
            .collect();
        for c in &model.constraints {
            let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
            for &(v, k) in &c.terms {
                *merged.entry(v.0).or_default() += k as f64;
            }
            let row: Vec<_> = merged.into_iter().filter(|(_, k)| *k != 0.0).map(|(v, k)| (cols[v], k)).collect();
            let rhs = c.rhs as f64;
            if row.is_empty() {
                let ok = match c.relation {
                    Relation::Le => 0.0 <= rhs,
                    Relation::Eq => rhs == 0.0,
                    Relation::Ge => 0.0 >= rhs,
                };
                if !ok {
                    return SolveResult::without_solution(SolveStatus::Infeasible, start.elapsed(), None);
                }
                continue;
            }
            match c.relation {
                Relation::Le => pb.add_row(..=rhs, row),
                Relation::Eq => pb.add_row(rhs..=rhs, row),
                Relation::Ge => pb.add_row(rhs.., row),
            };
        }
        let sense = match model.objective.sense {
            Sense::Maximize => highs::Sense::Maximise,
            Sense::Minimize => highs::Sense::Minimise,
        };
        let mut hm = pb.optimise(sense);
        hm.make_quiet();
        hm.set_option("time_limit", time_limit.as_secs_f64().max(1e-3));
        hm.set_option("mip_abs_gap", params.mip_abs_gap);
        hm.set_option("mip_rel_gap", params.mip_rel_gap);
        hm.set_option("random_seed", params.seed);
        if let Some(t) = params.threads.and_then(NonZeroU32::new) {
            hm.set_threads(t);
        }
        let solved = match hm.try_solve() {
            Ok(s) => s,
            Err(e) => {
                return SolveResult::without_solution(
                    SolveStatus::Unknown,
                    start.elapsed(),
                    Some(format!("backend error: {e:?}")),
                )
            }
        };
        let status = solved.status();
        let has_primal = solved.primal_solution_status() == HighsSolutionStatus::Feasible;
        let status = match status {
            HighsModelStatus::Optimal => SolveStatus::Optimal,
            // Every variable is bounded, so unboundedness is impossible.
            HighsModelStatus::Infeasible | HighsModelStatus::UnboundedOrInfeasible => SolveStatus::Infeasible,
            HighsModelStatus::ReachedTimeLimit
            | HighsModelStatus::ReachedIterationLimit
            | HighsModelStatus::ReachedSolutionLimit
            | HighsModelStatus::ReachedInterrupt
            | HighsModelStatus::ReachedMemoryLimit
                if has_primal =>
            {
                SolveStatus::FeasibleTimeLimit
            }
            HighsModelStatus::ReachedTimeLimit => {
                return SolveResult::without_solution(SolveStatus::Unknown, start.elapsed(), Some("time limit without incumbent".into()))
            }
            other => {
                return SolveResult::without_solution(
                    SolveStatus::Unknown,
                    start.elapsed(),
                    Some(format!("backend status {other:?}")),
                )
            }
        };
        if status == SolveStatus::Infeasible {
            return SolveResult::without_solution(status, start.elapsed(), None);
        }
        let mut values = solved.get_solution().columns().to_vec();
        let drift = model
            .vars
            .iter()
            .zip(&values)
            .filter(|(v, _)| v.kind != VarKind::Continuous)
            .map(|(_, x)| (x - x.round()).abs())
            .fold(0.0, f64::max);
        model.round_integers(&mut values);
        let mut diagnostic = None;
        if drift > INTEGRALITY_TOLERANCE {
            diagnostic = Some(format!("integer variable {drift:e} away from an integer before rounding"));
        }
        let violated = model.violations(&values);
        if !violated.is_empty() {
            return SolveResult::without_solution(
                SolveStatus::Unknown,
                start.elapsed(),
                Some(format!(
                    "rounded solution violates {} rows (first: {:?})",
                    violated.len(),
                    model.constraints.get(violated[0]).map(|c| c.family)
                )),
            );
        }
        let best_bound = solved
            .double_info_value(c"mip_dual_bound")
            .ok()
            .filter(|b| b.is_finite())
            .map(|b| b + model.objective.constant);
        SolveResult {
            status,
            objective: model.objective.eval(&values),
            values,
            best_bound,
            wall_time: start.elapsed(),
            diagnostic,
        }
    }
}

/// A model without variables is decided by its constant rows alone.
fn solve_empty(model: &AbstractMilp, start: Instant) -> SolveResult {
    if model.violations(&[]).is_empty() {
        SolveResult {
            status: SolveStatus::Optimal,
            values: Vec::new(),
            objective: model.objective.constant,
            best_bound: Some(model.objective.constant),
            wall_time: start.elapsed(),
            diagnostic: None,
        }
    } else {
        SolveResult::without_solution(SolveStatus::Infeasible, start.elapsed(), None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use defsched_core::milp::{Family, Objective};
    use defsched_core::model::VarKey;

    fn solve(m: &AbstractMilp) -> SolveResult {
        HighsSolver.solve(m, Duration::from_secs(10), &SolverParams::deterministic())
    }

    #[test]
    fn integer_maximum() {
        let mut m = AbstractMilp::default();
        let x = m.add_var(VarKey::Dummy, VarKind::Integer, 0.0, 10.0);
        m.add_constraint(Family::Committee, vec![(x, 1)], Relation::Le, 3);
        m.objective = Objective { terms: vec![(x, 1.0)], constant: 0.5, sense: Sense::Maximize };
        let r = solve(&m);
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.values, vec![3.0]);
        assert_eq!(r.objective, 3.5);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut m = AbstractMilp::default();
        let x = m.add_var(VarKey::Dummy, VarKind::Integer, 0.0, 10.0);
        m.add_constraint(Family::Committee, vec![(x, 1)], Relation::Le, 3);
        m.add_constraint(Family::Committee, vec![(x, 1)], Relation::Ge, 4);
        assert_eq!(solve(&m).status, SolveStatus::Infeasible);
    }

    #[test]
    fn empty_model() {
        let mut m = AbstractMilp::default();
        assert_eq!(solve(&m).status, SolveStatus::Optimal);
        m.add_constraint(Family::DefenceCount, vec![], Relation::Eq, 1);
        assert_eq!(solve(&m).status, SolveStatus::Infeasible);
    }
}
