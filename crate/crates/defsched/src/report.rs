//! Result checking, summary tables and chain analysis.

use std::fmt::Write;

use defsched_core::chain::{
    derive_transition_probs, expected_block_durations, exceptional_prob, fixed_point, solve_distribution_system,
    steady_state, AvailabilityChainSpec, ChainError,
};
use defsched_core::generate::generate_availability;
use defsched_core::pareto::dominates;
use defsched_core::{Instance, ObjectiveId};
use serde::Serialize;

use crate::io::{ChainAnalysisFile, ResultFile, SolutionRecord};
use crate::oracle::verify_solution;

/// Every problem found in a result file; empty means it checks out.
pub fn verify_result(inst: &Instance, digest: &str, res: &ResultFile) -> Vec<String> {
    let mut problems = Vec::new();
    if res.instance_digest != digest {
        problems.push(format!(
            "result was produced for instance {} but this instance hashes to {digest}",
            res.instance_digest
        ));
    }
    let g = res.g.value;
    let groups: [(&str, &[SolutionRecord]); 3] =
        [("solution", &res.solutions), ("filtered", &res.filtered), ("incumbent", &res.incumbents)];
    for (what, recs) in groups {
        for (n, s) in recs.iter().enumerate() {
            let v = verify_solution(inst, &s.schedule(g), &s.objectives());
            for viol in &v.violations {
                problems.push(format!("{what} {n}: {viol}"));
            }
            for (id, claimed, actual) in &v.mismatches {
                problems.push(format!(
                    "{what} {n}: {} claimed {claimed}, recomputed {actual}",
                    id.short_name()
                ));
            }
            if s.canonical != s.objectives().canonical() {
                problems.push(format!("{what} {n}: canonical vector does not match raw values"));
            }
        }
    }
    for (a, sa) in res.solutions.iter().enumerate() {
        for (b, sb) in res.solutions.iter().enumerate() {
            if a != b && (sa.canonical == sb.canonical || dominates(&sa.canonical, &sb.canonical).unwrap_or(false)) {
                problems.push(format!("solution {a} equals or dominates solution {b}"));
            }
        }
    }
    let c = res.counters;
    if c.n != res.solutions.len() as u64 {
        problems.push(format!("N = {} but {} solutions are listed", c.n, res.solutions.len()));
    }
    let grid: u64 = res.config.grid_steps.iter().map(|&k| k as u64 + 1).product();
    if c.total() != grid {
        problems.push(format!("counters add up to {} instead of the grid size {grid}", c.total()));
    }
    if res.iterations.len() as u64 != grid {
        problems.push(format!("{} iterations recorded for a grid of {grid}", res.iterations.len()));
    }
    problems
}

const COLUMNS: [&str; 17] = [
    "file", "type", "g", "g_optimal", "N", "I", "skipN", "skipI", "timeN", "timeI", "filtered", "best_z1",
    "best_z3", "stage1_s", "payoff_s", "grid_s", "total_s",
];

/// One row per result file.
pub fn report_tsv(results: &[(String, ResultFile)]) -> String {
    let mut out = COLUMNS.join("\t");
    out.push('\n');
    for (name, r) in results {
        let c = r.counters;
        let best = |id: ObjectiveId| {
            r.solutions
                .iter()
                .map(|s| s.canonical[id.index()])
                .max()
                .map(|v| (v * id.canonical_sign()).to_string())
                .unwrap_or_else(|| "-".into())
        };
        let t = r.wall_times;
        let _ = writeln!(
            out,
            "{name}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.1}\t{:.1}\t{:.1}\t{:.1}",
            r.instance_summary.kind,
            r.g.value,
            r.g.optimal,
            c.n,
            c.i,
            c.skip_n,
            c.skip_i,
            c.time_n,
            c.time_i,
            r.filtered.len(),
            best(ObjectiveId::Workload),
            best(ObjectiveId::Expertise),
            t.stage1,
            t.payoff,
            t.grid,
            t.total
        );
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Simulation {
    pub slots: usize,
    /// `fractions[α]`: share of simulated slots with value `α`.
    pub fractions: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainAnalysis {
    pub states: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    /// Distribution after the warm-up, starting from plain 0.
    pub after_warmup: Vec<f64>,
    pub fixed_point: Vec<f64>,
    /// Fixed point folded onto values `0..=n_α`.
    pub folded_fixed_point: Vec<f64>,
    /// Solution of the total-probability system.
    pub system_solution: Vec<f64>,
    pub system_max_difference: f64,
    pub expected_available_blocks: Vec<f64>,
    pub expected_unavailable_block: f64,
    pub exceptional_prob: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<Simulation>,
}

pub fn analyze_chain(file: &ChainAnalysisFile) -> Result<ChainAnalysis, ChainError> {
    let spec = AvailabilityChainSpec {
        self_probs: file.self_probs.clone(),
        duration: file.duration,
        warmup: file.warmup,
    };
    let t = derive_transition_probs(&spec)?;
    let after_warmup = steady_state(&t, spec.warmup)?;
    let fp = fixed_point(&t)?;
    let folded = t.fold(&fp);
    let system = solve_distribution_system(&spec)?;
    let diff = folded.iter().zip(&system).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (avail, unavail) = expected_block_durations(&spec)?;
    let simulation = match &file.simulate {
        Some(s) => {
            let grids = generate_availability(s.rows, &spec, s.days, s.hours, s.seed)?;
            let mut counts = vec![0usize; spec.n_states() + 1];
            let mut slots = 0;
            for v in grids.iter().flatten().flatten() {
                counts[*v as usize] += 1;
                slots += 1;
            }
            Some(Simulation {
                slots,
                fractions: counts.iter().map(|&c| c as f64 / slots.max(1) as f64).collect(),
            })
        }
        None => None,
    };
    Ok(ChainAnalysis {
        states: t.states.iter().map(|s| s.to_string()).collect(),
        matrix: t.probs.clone(),
        after_warmup,
        fixed_point: fp,
        folded_fixed_point: folded,
        system_solution: system,
        system_max_difference: diff,
        expected_available_blocks: avail,
        expected_unavailable_block: unavail,
        exceptional_prob: exceptional_prob(&spec),
        simulation,
    })
}
