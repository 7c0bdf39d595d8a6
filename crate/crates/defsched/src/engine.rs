//! Two-stage driver. Stage 1 maximises the number of scheduled defences `g`;
//! stage 2 fixes `g`, computes ideal and nadir points from a lexicographic
//! payoff table and sweeps the epsilon grid.

use std::time::{Duration, Instant};

use defsched_core::epsilon::{
    epsilon_bounds, skip_inf_models, skip_solutions, skip_solutions_nested, thresholds, EpsilonBound, EpsilonState,
    GridError,
};
use defsched_core::milp::{AbstractMilp, Family, LinExpr, Objective, Relation, VarKind};
use defsched_core::model::{
    add_objective_linearizations, all_canonical_expressions, build_base_model, decode_schedule, set_g,
    stage1_objective, Encoding, ModelError, VarIndex, VarKey,
};
use defsched_core::pareto::{nondominated_indices, project};
use defsched_core::{evaluate_objectives, Instance, ObjectiveId, ObjectiveVector, Schedule, Sense, N_OBJECTIVES};
use serde::{Deserialize, Serialize};

use crate::solver::{MilpSolver, SolveStatus, SolverParams};

/// Which known solutions may be used to skip a grid cell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipRule {
    /// Skip when any solution found so far meets the cell's bounds.
    #[default]
    AsPublished,
    /// Skip only when such a solution was optimal for bounds no tighter than
    /// the cell's. Never loses a solution.
    Nested,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub primary: ObjectiveId,
    pub bounded: Vec<ObjectiveId>,
    /// Grid steps per bounded objective; `k` steps give `k + 1` values.
    pub grid_steps: Vec<u32>,
    pub stage1_limit: Duration,
    pub payoff_limit: Duration,
    pub total_limit: Duration,
    pub deterministic: bool,
    pub skip_rule: SkipRule,
    /// Move solutions dominated in all seven objectives out of the front.
    pub filter_dominated: bool,
    pub encoding: Encoding,
    pub solver: SolverParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            primary: ObjectiveId::Workload,
            bounded: vec![ObjectiveId::Expertise, ObjectiveId::Compactness],
            grid_steps: vec![9, 9],
            stage1_limit: Duration::from_secs(1800),
            payoff_limit: Duration::from_secs(7200),
            total_limit: Duration::from_secs(43200),
            deterministic: false,
            skip_rule: SkipRule::AsPublished,
            filter_dominated: true,
            encoding: Encoding::Sparse,
            solver: SolverParams::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |m: &str| Err(EngineError::Config(m.to_string()));
        if self.bounded.len() != self.grid_steps.len() {
            return bad("one grid step count is needed per bounded objective");
        }
        if self.grid_steps.contains(&0) {
            return bad("grid steps must be positive");
        }
        if self.bounded.contains(&self.primary) {
            return bad("the primary objective cannot also be bounded");
        }
        for (i, a) in self.bounded.iter().enumerate() {
            if self.bounded[..i].contains(a) {
                return bad("bounded objectives must be distinct");
            }
        }
        Ok(())
    }

    pub fn solver_params(&self) -> SolverParams {
        if self.deterministic {
            SolverParams {
                threads: Some(1),
                seed: 0,
                ..self.solver.clone()
            }
        } else {
            self.solver.clone()
        }
    }

    fn bounded_indices(&self) -> Vec<usize> {
        self.bounded.iter().map(|b| b.index()).collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("invalid run configuration: {0}")]
    Config(String),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("{0}")]
    Model(ModelError),
    #[error("solver failure during {stage}: {detail}")]
    Solver { stage: &'static str, detail: String },
    #[error("solver output is inconsistent with the model: {0}")]
    Inconsistent(String),
    #[error("{0}")]
    Grid(GridError),
}

impl From<ModelError> for EngineError {
    fn from(e: ModelError) -> Self {
        EngineError::Model(e)
    }
}

impl From<GridError> for EngineError {
    fn from(e: GridError) -> Self {
        EngineError::Grid(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GResult {
    pub g: usize,
    /// False when the stage-1 solve hit its time limit.
    pub optimal: bool,
    pub wall_time: Duration,
}

/// Stage 1: the largest number of defences that can be scheduled.
pub fn find_g(
    solver: &dyn MilpSolver,
    inst: &Instance,
    encoding: Encoding,
    limit: Duration,
    params: &SolverParams,
) -> Result<GResult, EngineError> {
    inst.validate().map_err(|e| EngineError::Instance(e.to_string()))?;
    let (mut m, ix) = build_base_model(inst, encoding);
    m.objective = Objective::from_expr(&stage1_objective(&ix), Sense::Maximize);
    let r = solver.solve(&m, limit, params);
    let optimal = match r.status {
        SolveStatus::Optimal => true,
        SolveStatus::FeasibleTimeLimit => false,
        SolveStatus::Infeasible => {
            return Err(EngineError::Inconsistent("stage 1 reported infeasible; the empty schedule is feasible".into()))
        }
        SolveStatus::Unknown => {
            return Err(EngineError::Solver {
                stage: "stage 1",
                detail: r.diagnostic.unwrap_or_else(|| "no solution".into()),
            })
        }
    };
    let g = decode_schedule(&ix, &r.values, 0).scheduled_defences().len();
    if (g as f64 - r.objective).abs() > 1e-6 {
        return Err(EngineError::Inconsistent(format!("stage 1 objective {} but {g} defences decoded", r.objective)));
    }
    Ok(GResult {
        g,
        optimal,
        wall_time: r.wall_time,
    })
}

/// Stage-2 model with `Σ y = g` and all objective linearizations.
#[derive(Clone, Debug)]
pub struct PreparedModel {
    pub milp: AbstractMilp,
    pub index: VarIndex,
    /// Canonical (maximise) expression of every objective.
    pub canonical: [LinExpr; N_OBJECTIVES],
    pub g: usize,
}

pub fn prepare_model(inst: &Instance, g: usize, encoding: Encoding) -> Result<PreparedModel, EngineError> {
    let (mut milp, mut index) = build_base_model(inst, encoding);
    add_objective_linearizations(&mut milp, &mut index, inst);
    set_g(&mut milp, &mut index, g, inst.dims.defences)?;
    let canonical = all_canonical_expressions(&index, inst)?;
    Ok(PreparedModel {
        milp,
        index,
        canonical,
        g,
    })
}

/// Decodes a solution and checks it against the direct evaluator.
fn extract(inst: &Instance, prep: &PreparedModel, values: &[f64]) -> Result<(Schedule, ObjectiveVector), EngineError> {
    let sched = decode_schedule(&prep.index, values, prep.g);
    let obj = evaluate_objectives(inst, &sched).map_err(|e| EngineError::Inconsistent(e.to_string()))?;
    let canon = obj.canonical();
    for (i, e) in prep.canonical.iter().enumerate() {
        let model_value = e.eval(values);
        if (model_value - canon[i] as f64).abs() > 1e-6 {
            return Err(EngineError::Inconsistent(format!(
                "{} is {} in the model but {} when evaluated",
                ObjectiveId::ALL[i].short_name(),
                model_value,
                canon[i]
            )));
        }
    }
    Ok((sched, obj))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PayoffRow {
    pub objectives: ObjectiveVector,
    pub optimal: bool,
    pub wall_time: Duration,
}

/// Ideal and nadir on the canonical scale, and the payoff table they come
/// from (row `i` optimises objective `i`).
#[derive(Clone, Debug, PartialEq)]
pub struct IdealNadir {
    pub ideal: [i64; N_OBJECTIVES],
    pub nadir: [i64; N_OBJECTIVES],
    pub payoff: Vec<PayoffRow>,
    /// Perturbation weight is `10^-exponent`.
    pub exponent: u32,
}

/// Smallest `E` with `10^-E · (1 + spread) < 1`, where `spread` bounds how
/// much the sum of the other objectives can vary for any row.
pub fn perturbation_exponent(ranges: &[(f64, f64)]) -> u32 {
    let total: f64 = ranges.iter().map(|(lo, hi)| hi - lo).sum();
    let worst = ranges
        .iter()
        .map(|(lo, hi)| total - (hi - lo))
        .fold(0.0, f64::max);
    let mut e = 0;
    while 10f64.powi(-(e as i32)) * (1.0 + worst) >= 1.0 {
        e += 1;
    }
    e
}

/// Solves each objective in turn with the others as a tiny tie-breaker, so
/// every payoff row is non-dominated. The budget is shared: each solve gets
/// an equal part of what is left.
pub fn compute_ideal_nadir(
    solver: &dyn MilpSolver,
    inst: &Instance,
    prep: &PreparedModel,
    budget: Duration,
    params: &SolverParams,
) -> Result<IdealNadir, EngineError> {
    let start = Instant::now();
    let ranges: Vec<(f64, f64)> = prep.canonical.iter().map(|e| e.range(&prep.milp)).collect();
    let exponent = perturbation_exponent(&ranges);
    let weight = 10f64.powi(-(exponent as i32));
    let mut payoff = Vec::with_capacity(N_OBJECTIVES);
    for i in 0..N_OBJECTIVES {
        let mut m = prep.milp.clone();
        m.objective = Objective::from_expr(&prep.canonical[i], Sense::Maximize);
        for (j, e) in prep.canonical.iter().enumerate() {
            if j != i {
                m.objective.add_scaled(e, weight);
            }
        }
        let limit = budget.saturating_sub(start.elapsed()) / (N_OBJECTIVES - i) as u32;
        let r = solver.solve(&m, limit, params);
        if !r.has_solution() {
            return Err(EngineError::Solver {
                stage: "payoff table",
                detail: format!(
                    "no solution when optimising {}: {}",
                    ObjectiveId::ALL[i].short_name(),
                    r.diagnostic.unwrap_or_else(|| format!("{:?}", r.status))
                ),
            });
        }
        let (_, objectives) = extract(inst, prep, &r.values)?;
        log::info!(
            "payoff row {}: {:?} ({:?}, {:.1}s)",
            ObjectiveId::ALL[i].short_name(),
            objectives.0,
            r.status,
            r.wall_time.as_secs_f64()
        );
        payoff.push(PayoffRow {
            objectives,
            optimal: r.status == SolveStatus::Optimal,
            wall_time: r.wall_time,
        });
    }
    let mut ideal = [0; N_OBJECTIVES];
    let mut nadir = [0; N_OBJECTIVES];
    for i in 0..N_OBJECTIVES {
        ideal[i] = payoff[i].objectives.canonical()[i];
        nadir[i] = payoff.iter().map(|r| r.objectives.canonical()[i]).min().unwrap_or(0);
        // A time-limited row may beat the "ideal" row in its own column.
        ideal[i] = ideal[i].max(payoff.iter().map(|r| r.objectives.canonical()[i]).max().unwrap_or(0));
    }
    Ok(IdealNadir {
        ideal,
        nadir,
        payoff,
        exponent,
    })
}

/// Epsilon bounds of grid cell `v`.
pub fn cell_bounds(cfg: &RunConfig, points: &IdealNadir, v: &[u32]) -> Result<Vec<EpsilonBound>, EngineError> {
    let mut state = EpsilonState::new(cfg.grid_steps.clone())?;
    state.v = v.to_vec();
    Ok(epsilon_bounds(&state, &cfg.bounded_indices(), &points.ideal, &points.nadir))
}

/// The epsilon-constrained model of one cell: maximise the primary
/// objective plus a small reward for the normalised surplus of every
/// bounded objective.
pub fn cell_model(cfg: &RunConfig, prep: &PreparedModel, points: &IdealNadir, bounds: &[EpsilonBound]) -> AbstractMilp {
    let mut m = prep.milp.clone();
    m.objective = Objective::from_expr(&prep.canonical[cfg.primary.index()], Sense::Maximize);
    let reward = 1.0 / (bounds.len() as f64 + 0.1);
    for b in bounds {
        let f = &prep.canonical[b.objective];
        let range = points.ideal[b.objective] - points.nadir[b.objective];
        let mut row: Vec<_> = f.terms.iter().map(|&(v, c)| (v, c * b.scale)).collect();
        m.add_constraint(Family::Epsilon, row.clone(), Relation::Ge, b.scaled - b.scale * f.constant);
        if range == 0 {
            // Every solution sits at the single grid value.
            let s = m.add_var(VarKey::Surplus(b.objective), VarKind::Continuous, 1.0, 1.0);
            m.objective.terms.push((s, reward));
            continue;
        }
        let s = m.add_var(VarKey::Surplus(b.objective), VarKind::Continuous, 0.0, 1.0);
        row = f.terms.iter().map(|&(v, c)| (v, -c)).collect();
        row.push((s, range));
        m.add_constraint(Family::Surplus, row, Relation::Eq, f.constant - points.nadir[b.objective]);
        m.objective.terms.push((s, reward));
    }
    m
}

#[derive(Clone, Debug)]
pub enum CellOutcome {
    Optimal { schedule: Schedule, objectives: ObjectiveVector },
    Infeasible,
    /// Time limit (or an undecided solve) with the incumbent, if any.
    TimeLimit {
        incumbent: Option<(Schedule, ObjectiveVector)>,
        diagnostic: Option<String>,
    },
}

pub fn solve_cell(
    solver: &dyn MilpSolver,
    inst: &Instance,
    cfg: &RunConfig,
    prep: &PreparedModel,
    points: &IdealNadir,
    bounds: &[EpsilonBound],
    limit: Duration,
) -> Result<CellOutcome, EngineError> {
    let m = cell_model(cfg, prep, points, bounds);
    let r = solver.solve(&m, limit, &cfg.solver_params());
    let check = |obj: &ObjectiveVector| -> Result<(), EngineError> {
        let c = obj.canonical();
        for b in bounds {
            if c[b.objective] < b.threshold() {
                return Err(EngineError::Inconsistent(format!(
                    "{} = {} violates its bound {}",
                    ObjectiveId::ALL[b.objective].short_name(),
                    c[b.objective],
                    b.value()
                )));
            }
        }
        Ok(())
    };
    Ok(match r.status {
        SolveStatus::Optimal => {
            let (schedule, objectives) = extract(inst, prep, &r.values)?;
            check(&objectives)?;
            CellOutcome::Optimal { schedule, objectives }
        }
        SolveStatus::Infeasible => CellOutcome::Infeasible,
        SolveStatus::FeasibleTimeLimit => {
            let (schedule, objectives) = extract(inst, prep, &r.values)?;
            check(&objectives)?;
            CellOutcome::TimeLimit {
                incumbent: Some((schedule, objectives)),
                diagnostic: r.diagnostic,
            }
        }
        SolveStatus::Unknown => CellOutcome::TimeLimit {
            incumbent: None,
            diagnostic: r.diagnostic,
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub schedule: Schedule,
    pub objectives: ObjectiveVector,
    /// Canonical values of the bounded objectives.
    pub bounded_values: Vec<i64>,
    /// Grid cell and bounds of the first solve that returned it.
    pub iteration: usize,
    pub v: Vec<u32>,
    pub epsilon: Vec<f64>,
    /// Thresholds of every cell whose optimum was this solution.
    pub generators: Vec<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "I")]
    pub i: u64,
    #[serde(rename = "skipN")]
    pub skip_n: u64,
    #[serde(rename = "skipI")]
    pub skip_i: u64,
    #[serde(rename = "timeN")]
    pub time_n: u64,
    #[serde(rename = "timeI")]
    pub time_i: u64,
}

impl Counters {
    pub fn total(&self) -> u64 {
        self.n + self.i + self.skip_n + self.skip_i + self.time_n + self.time_i
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationOutcome {
    NewSolution,
    Duplicate,
    Infeasible,
    SkippedSolution,
    SkippedInfeasible,
    TimeLimitFeasible,
    TimeLimitNoSolution,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub index: usize,
    pub v: Vec<u32>,
    pub epsilon: Vec<f64>,
    pub thresholds: Vec<i64>,
    pub outcome: IterationOutcome,
    /// Raw objective values of the solution (or incumbent) returned.
    pub objectives: Option<[i64; N_OBJECTIVES]>,
    pub time_limit_secs: f64,
    pub wall_secs: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct RunLog {
    /// Final non-dominated set.
    pub solutions: Vec<Solution>,
    /// Distinct optimal solutions removed by the seven-objective filter.
    pub filtered: Vec<Solution>,
    /// Incumbents of solves that hit the time limit.
    pub incumbents: Vec<Solution>,
    /// Thresholds of cells proven infeasible.
    pub infeasible: Vec<Vec<i64>>,
    pub counters: Counters,
    pub iterations: Vec<IterationRecord>,
    pub wall_time: Duration,
}

/// Sweeps the whole grid. Each solve gets an equal share of the remaining
/// budget over the remaining cells.
pub fn run_augmecon(
    solver: &dyn MilpSolver,
    inst: &Instance,
    cfg: &RunConfig,
    prep: &PreparedModel,
    points: &IdealNadir,
    budget: Duration,
    progress: &mut dyn FnMut(&IterationRecord),
) -> Result<RunLog, EngineError> {
    cfg.validate()?;
    let start = Instant::now();
    let bounded = cfg.bounded_indices();
    let mut state = EpsilonState::new(cfg.grid_steps.clone())?;
    let total = state.grid_size() as usize;
    let mut log = RunLog::default();
    let mut index = 0;
    while !state.stop {
        let bounds = epsilon_bounds(&state, &bounded, &points.ideal, &points.nadir);
        let th = thresholds(&bounds);
        let cell_start = Instant::now();
        let mut time_limit = Duration::ZERO;
        let mut objectives = None;
        let mut diagnostic = None;
        let solution_skip = match cfg.skip_rule {
            SkipRule::AsPublished => skip_solutions(&th, log.solutions.iter().map(|s| s.bounded_values.as_slice())),
            SkipRule::Nested => skip_solutions_nested(
                &th,
                log.solutions
                    .iter()
                    .flat_map(|s| s.generators.iter().map(move |g| (s.bounded_values.as_slice(), g.as_slice()))),
            ),
        };
        let outcome = if solution_skip {
            log.counters.skip_n += 1;
            IterationOutcome::SkippedSolution
        } else if skip_inf_models(&th, log.infeasible.iter().map(Vec::as_slice)) {
            log.counters.skip_i += 1;
            IterationOutcome::SkippedInfeasible
        } else {
            time_limit = budget.saturating_sub(start.elapsed()) / (total - index) as u32;
            let outcome = if time_limit.is_zero() {
                CellOutcome::TimeLimit {
                    incumbent: None,
                    diagnostic: Some("time budget exhausted".into()),
                }
            } else {
                solve_cell(solver, inst, cfg, prep, points, &bounds, time_limit)?
            };
            let solution = |schedule: Schedule, obj: ObjectiveVector| Solution {
                bounded_values: project(&obj.canonical(), &bounded),
                schedule,
                objectives: obj,
                iteration: index,
                v: state.v.clone(),
                epsilon: bounds.iter().map(EpsilonBound::value).collect(),
                generators: vec![th.clone()],
            };
            match outcome {
                CellOutcome::Optimal { schedule, objectives: obj } => {
                    objectives = Some(obj.0);
                    if let Some(known) = log.solutions.iter_mut().find(|s| s.objectives == obj) {
                        known.generators.push(th.clone());
                        log.counters.skip_n += 1;
                        IterationOutcome::Duplicate
                    } else {
                        log.solutions.push(solution(schedule, obj));
                        IterationOutcome::NewSolution
                    }
                }
                CellOutcome::Infeasible => {
                    log.infeasible.push(th.clone());
                    log.counters.i += 1;
                    IterationOutcome::Infeasible
                }
                CellOutcome::TimeLimit {
                    incumbent: Some((schedule, obj)),
                    diagnostic: d,
                } => {
                    objectives = Some(obj.0);
                    diagnostic = d;
                    log.incumbents.push(solution(schedule, obj));
                    log.counters.time_n += 1;
                    IterationOutcome::TimeLimitFeasible
                }
                CellOutcome::TimeLimit {
                    incumbent: None,
                    diagnostic: d,
                } => {
                    if let Some(d) = &d {
                        log::warn!("cell {:?}: {d}", state.v);
                    }
                    diagnostic = d;
                    log.counters.time_i += 1;
                    IterationOutcome::TimeLimitNoSolution
                }
            }
        };
        let record = IterationRecord {
            index,
            v: state.v.clone(),
            epsilon: bounds.iter().map(EpsilonBound::value).collect(),
            thresholds: th,
            outcome,
            objectives,
            time_limit_secs: time_limit.as_secs_f64(),
            wall_secs: cell_start.elapsed().as_secs_f64(),
            diagnostic,
        };
        progress(&record);
        log.iterations.push(record);
        state.update_v()?;
        index += 1;
    }
    if cfg.filter_dominated {
        let points: Vec<[i64; N_OBJECTIVES]> = log.solutions.iter().map(|s| s.objectives.canonical()).collect();
        let keep = nondominated_indices(&points).expect("all vectors have seven entries");
        let all = std::mem::take(&mut log.solutions);
        for (i, s) in all.into_iter().enumerate() {
            if keep.contains(&i) {
                log.solutions.push(s);
            } else {
                log.filtered.push(s);
            }
        }
        log.counters.skip_n += log.filtered.len() as u64;
    }
    log.counters.n = log.solutions.len() as u64;
    log.wall_time = start.elapsed();
    Ok(log)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimes {
    pub stage1: f64,
    pub payoff: f64,
    pub grid: f64,
    pub total: f64,
}

#[derive(Clone, Debug)]
pub struct FullRun {
    pub g: GResult,
    pub points: IdealNadir,
    pub log: RunLog,
    pub times: StageTimes,
}

/// Both stages under the configured time limits.
pub fn run_full(
    solver: &dyn MilpSolver,
    inst: &Instance,
    cfg: &RunConfig,
    progress: &mut dyn FnMut(&IterationRecord),
) -> Result<FullRun, EngineError> {
    cfg.validate()?;
    let start = Instant::now();
    let params = cfg.solver_params();
    let g = find_g(solver, inst, cfg.encoding, cfg.stage1_limit.min(cfg.total_limit), &params)?;
    let stage1 = start.elapsed();
    log::info!("stage 1: g = {} ({}optimal, {:.1}s)", g.g, if g.optimal { "" } else { "not " }, stage1.as_secs_f64());
    let prep = prepare_model(inst, g.g, cfg.encoding)?;
    let payoff_budget = cfg.payoff_limit.min(cfg.total_limit.saturating_sub(start.elapsed()));
    let t = Instant::now();
    let points = compute_ideal_nadir(solver, inst, &prep, payoff_budget, &params)?;
    let payoff = t.elapsed();
    log::info!("ideal {:?}, nadir {:?}", points.ideal, points.nadir);
    let grid_budget = cfg.total_limit.saturating_sub(start.elapsed());
    let log = run_augmecon(solver, inst, cfg, &prep, &points, grid_budget, progress)?;
    Ok(FullRun {
        times: StageTimes {
            stage1: stage1.as_secs_f64(),
            payoff: payoff.as_secs_f64(),
            grid: log.wall_time.as_secs_f64(),
            total: start.elapsed().as_secs_f64(),
        },
        g,
        points,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_bound() {
        assert_eq!(perturbation_exponent(&[(0.0, 0.0), (0.0, 0.0)]), 1);
        // Worst row spread 9: 10^-1 · 10 is not < 1.
        assert_eq!(perturbation_exponent(&[(0.0, 9.0), (0.0, 1.0)]), 2);
        assert_eq!(perturbation_exponent(&[(0.0, 8.0), (0.0, 1.0)]), 1);
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_ok());
        c.bounded.push(ObjectiveId::Workload);
        c.grid_steps.push(3);
        assert!(c.validate().is_err());
        c = RunConfig::default();
        c.grid_steps.pop();
        assert!(c.validate().is_err());
    }
}
