//! Epsilon-grid bookkeeping for the augmented epsilon-constraint method.
//!
//! All values are on the canonical (all-maximise) scale. For a bounded
//! objective `i` with `K_i` grid steps the lower bound at counter value `v`
//! is `ε_i = nad_i + v·(ideal_i − nad_i)/K_i`; it is kept as the exact
//! rational `(K_i·nad_i + v·range_i) / K_i`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridError {
    AlreadyStopped,
    ZeroSteps,
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::AlreadyStopped => f.write_str("grid already exhausted"),
            GridError::ZeroSteps => f.write_str("every bounded objective needs at least one grid step"),
        }
    }
}

/// Odometer over `v_i ∈ 0..=steps_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonState {
    pub v: Vec<u32>,
    pub steps: Vec<u32>,
    pub stop: bool,
}

impl EpsilonState {
    pub fn new(steps: Vec<u32>) -> Result<Self, GridError> {
        if steps.contains(&0) {
            return Err(GridError::ZeroSteps);
        }
        Ok(EpsilonState {
            v: vec![0; steps.len()],
            steps,
            stop: false,
        })
    }

    /// `Π (steps_i + 1)`.
    pub fn grid_size(&self) -> u64 {
        self.steps.iter().map(|&k| k as u64 + 1).product()
    }

    /// Advances to the next grid cell: the first coordinate below its
    /// maximum is incremented and all earlier ones reset. Sets `stop` when
    /// every coordinate is already at its maximum.
    pub fn update_v(&mut self) -> Result<(), GridError> {
        if self.stop {
            return Err(GridError::AlreadyStopped);
        }
        for i in 0..self.v.len() {
            if self.v[i] < self.steps[i] {
                self.v[i] += 1;
                for earlier in &mut self.v[..i] {
                    *earlier = 0;
                }
                return Ok(());
            }
        }
        self.stop = true;
        Ok(())
    }
}

/// Exact epsilon bound `scaled / scale` for one objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpsilonBound {
    pub objective: usize,
    pub scaled: i64,
    pub scale: i64,
}

impl EpsilonBound {
    /// Smallest integer objective value satisfying the bound.
    pub fn threshold(&self) -> i64 {
        self.scaled.div_euclid(self.scale) + i64::from(self.scaled.rem_euclid(self.scale) != 0)
    }

    pub fn value(&self) -> f64 {
        self.scaled as f64 / self.scale as f64
    }
}

/// Bounds for the current cell. `bounded[c]` is the objective index of
/// coordinate `c`; `ideal` and `nadir` are indexed by objective.
pub fn epsilon_bounds(state: &EpsilonState, bounded: &[usize], ideal: &[i64], nadir: &[i64]) -> Vec<EpsilonBound> {
    bounded
        .iter()
        .enumerate()
        .map(|(c, &obj)| {
            let k = state.steps[c] as i64;
            let range = ideal[obj] - nadir[obj];
            EpsilonBound {
                objective: obj,
                scaled: k * nadir[obj] + state.v[c] as i64 * range,
                scale: k,
            }
        })
        .collect()
}

pub fn thresholds(bounds: &[EpsilonBound]) -> Vec<i64> {
    bounds.iter().map(EpsilonBound::threshold).collect()
}

/// Some known solution already meets every bound: `z_i ≥ ε_i` on all
/// bounded coordinates. `solutions` yield vectors projected on the bounded
/// objectives.
pub fn skip_solutions<'a, I>(eps: &[i64], solutions: I) -> bool
where
    I: IntoIterator<Item = &'a [i64]>,
{
    solutions
        .into_iter()
        .any(|z| z.iter().zip(eps).all(|(zi, ei)| zi >= ei))
}

/// Some bound vector already proven infeasible is no tighter than `eps`:
/// `ε_i ≥ ε'_i` on all bounded coordinates.
pub fn skip_inf_models<'a, I>(eps: &[i64], infeasible: I) -> bool
where
    I: IntoIterator<Item = &'a [i64]>,
{
    infeasible
        .into_iter()
        .any(|e| eps.iter().zip(e).all(|(a, b)| a >= b))
}

/// Variant of [`skip_solutions`] that only uses a solution `z` when it was
/// returned as optimal for bounds `ε'' ≤ ε`. Then `z` is feasible and
/// optimal for `ε` as well, so the skipped solve cannot produce anything
/// new. `proofs` yields `(z, ε'')` pairs, both projected on the bounded
/// objectives.
pub fn skip_solutions_nested<'a, I>(eps: &[i64], proofs: I) -> bool
where
    I: IntoIterator<Item = (&'a [i64], &'a [i64])>,
{
    proofs.into_iter().any(|(z, gen)| {
        z.iter().zip(eps).all(|(zi, ei)| zi >= ei) && gen.iter().zip(eps).all(|(gi, ei)| gi <= ei)
    })
}
