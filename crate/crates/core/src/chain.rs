//! Markov-chain availability model.
//!
//! Availability values are `0` (unavailable) or a preference level
//! `1..=n_α`. After any availability → 0 transition the chain is forced
//! through `d − 1` extra "exceptional" zero states so that every block of
//! unavailability is at least one defence long.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Default number of discarded warm-up draws per day.
pub const DEFAULT_WARMUP: usize = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct AvailabilityChainSpec {
    /// `self_probs[α] = p(α|α)` for `α = 0..=n_α`.
    pub self_probs: Vec<f64>,
    /// Defence duration `d`.
    pub duration: usize,
    /// Warm-up draws `Δ`.
    pub warmup: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainState {
    /// `0_{e m}` for `m = 1..d`.
    Exceptional(usize),
    Unavailable,
    Available(usize),
}

impl ChainState {
    pub fn value(self) -> u32 {
        match self {
            ChainState::Available(a) => a as u32,
            _ => 0,
        }
    }
}

impl fmt::Display for ChainState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainState::Exceptional(m) => write!(f, "0_e{m}"),
            ChainState::Unavailable => f.write_str("0"),
            ChainState::Available(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    pub states: Vec<ChainState>,
    /// `probs[i][j] = p(states[j] | states[i])`.
    pub probs: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChainError {
    ProbabilityOutOfRange { state: usize, value: f64 },
    TooFewStates,
    ZeroDuration,
    /// All other states have self-probability 0, so the proportional split
    /// of the leaving mass is undefined.
    DegenerateCrossProbabilities { from: usize },
    NotStochastic { row: usize, sum: f64 },
    NotSquare,
    ZeroSteps,
    AbsorbingState { state: usize },
    NotConverged,
    SingularSystem,
    CalibrationOutOfRange { target: f64 },
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ProbabilityOutOfRange { state, value } => {
                write!(f, "self probability of state {state} is {value}, outside [0,1]")
            }
            Self::TooFewStates => f.write_str("chain needs state 0 and at least one availability state"),
            Self::ZeroDuration => f.write_str("defence duration must be at least 1"),
            Self::DegenerateCrossProbabilities { from } => {
                write!(f, "cannot split leaving probability of state {from}: other self probabilities are all 0")
            }
            Self::NotStochastic { row, sum } => write!(f, "row {row} sums to {sum}"),
            Self::NotSquare => f.write_str("matrix is not square"),
            Self::ZeroSteps => f.write_str("steps must be at least 1"),
            Self::AbsorbingState { state } => write!(f, "absorbing state {state}"),
            Self::NotConverged => f.write_str("power iteration did not converge"),
            Self::SingularSystem => f.write_str("singular linear system"),
            Self::CalibrationOutOfRange { target } => {
                write!(f, "target unavailability {target} is not reachable")
            }
        }
    }
}

impl AvailabilityChainSpec {
    pub fn new(self_probs: Vec<f64>, duration: usize) -> Self {
        AvailabilityChainSpec {
            self_probs,
            duration,
            warmup: DEFAULT_WARMUP,
        }
    }

    /// Number of availability states `n_α`.
    pub fn n_states(&self) -> usize {
        self.self_probs.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<(), ChainError> {
        if self.self_probs.len() < 2 {
            return Err(ChainError::TooFewStates);
        }
        if self.duration == 0 {
            return Err(ChainError::ZeroDuration);
        }
        for (state, &value) in self.self_probs.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(ChainError::ProbabilityOutOfRange { state, value });
            }
        }
        Ok(())
    }

    /// `p(to | from)` for `to != from`, splitting `1 − p(from|from)` in
    /// proportion to the self-probabilities of the other states.
    pub fn cross_prob(&self, to: usize, from: usize) -> Result<f64, ChainError> {
        debug_assert_ne!(to, from);
        let leave = 1.0 - self.self_probs[from];
        if leave == 0.0 {
            return Ok(0.0);
        }
        let denom: f64 = self
            .self_probs
            .iter()
            .enumerate()
            .filter(|(s, _)| *s != from)
            .map(|(_, p)| p)
            .sum();
        if denom == 0.0 {
            return Err(ChainError::DegenerateCrossProbabilities { from });
        }
        Ok(self.self_probs[to] / denom * leave)
    }
}

/// Builds the transition matrix over
/// `{0_e1, …, 0_e(d−1), 0, 1, …, n_α}`.
pub fn derive_transition_probs(spec: &AvailabilityChainSpec) -> Result<TransitionMatrix, ChainError> {
    spec.validate()?;
    let n_exc = spec.duration - 1;
    let n_alpha = spec.n_states();
    let mut states: Vec<ChainState> = (1..=n_exc).map(ChainState::Exceptional).collect();
    states.push(ChainState::Unavailable);
    states.extend((1..=n_alpha).map(ChainState::Available));
    let n = states.len();
    // Position of chain value α (0 = plain zero) in `states`.
    let pos = |alpha: usize| n_exc + alpha;
    let mut probs = vec![vec![0.0; n]; n];

    for m in 0..n_exc {
        let next = if m + 1 < n_exc { m + 1 } else { pos(0) };
        probs[m][next] = 1.0;
    }
    for from in 0..=n_alpha {
        let row = &mut probs[pos(from)];
        for to in 0..=n_alpha {
            let p = if to == from {
                spec.self_probs[from]
            } else {
                spec.cross_prob(to, from)?
            };
            let col = if to == 0 && from != 0 && n_exc > 0 { 0 } else { pos(to) };
            row[col] += p;
        }
    }
    let t = TransitionMatrix { states, probs };
    t.validate()?;
    Ok(t)
}

impl TransitionMatrix {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, state: ChainState) -> Option<usize> {
        self.states.iter().position(|s| *s == state)
    }

    pub fn validate(&self) -> Result<(), ChainError> {
        let n = self.states.len();
        if self.probs.len() != n || self.probs.iter().any(|r| r.len() != n) {
            return Err(ChainError::NotSquare);
        }
        for (row, r) in self.probs.iter().enumerate() {
            let sum: f64 = r.iter().sum();
            if r.iter().any(|p| !(0.0..=1.0).contains(p)) || (sum - 1.0).abs() > 1e-12 {
                return Err(ChainError::NotStochastic { row, sum });
            }
        }
        Ok(())
    }

    fn step(&self, dist: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n];
        for (i, &pi) in dist.iter().enumerate() {
            if pi != 0.0 {
                for j in 0..n {
                    out[j] += pi * self.probs[i][j];
                }
            }
        }
        out
    }

    fn multiply(&self, other: &[Vec<f64>], a: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i][k];
                if aik != 0.0 {
                    for j in 0..n {
                        out[i][j] += aik * other[k][j];
                    }
                }
            }
        }
        out
    }

    /// Fold exceptional-state mass into plain 0 and return a distribution
    /// over availability values `0..=n_α`.
    pub fn fold(&self, dist: &[f64]) -> Vec<f64> {
        let n_alpha = self
            .states
            .iter()
            .filter(|s| matches!(s, ChainState::Available(_)))
            .count();
        let mut out = vec![0.0; n_alpha + 1];
        for (s, p) in self.states.iter().zip(dist) {
            out[s.value() as usize] += p;
        }
        out
    }
}

/// Row of `T^steps` for the plain-0 start state (or the first state if the
/// matrix has no plain 0).
pub fn steady_state(t: &TransitionMatrix, steps: usize) -> Result<Vec<f64>, ChainError> {
    t.validate()?;
    if steps == 0 {
        return Err(ChainError::ZeroSteps);
    }
    let start = t.index_of(ChainState::Unavailable).unwrap_or(0);
    let mut dist = vec![0.0; t.len()];
    dist[start] = 1.0;
    for _ in 0..steps {
        dist = t.step(&dist);
    }
    Ok(dist)
}

/// Stationary distribution by repeated squaring of `T` until all rows agree
/// within `1e−10`.
pub fn fixed_point(t: &TransitionMatrix) -> Result<Vec<f64>, ChainError> {
    t.validate()?;
    let n = t.len();
    let mut p = t.probs.clone();
    for _ in 0..64 {
        let spread = (0..n)
            .map(|j| {
                let (lo, hi) = p
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r[j]), hi.max(r[j])));
                hi - lo
            })
            .fold(0.0, f64::max);
        if spread < 1e-10 {
            return Ok(p[0].clone());
        }
        p = t.multiply(&p, &p);
    }
    Err(ChainError::NotConverged)
}

/// Expected lengths of availability blocks per state `1..=n_α` and of
/// unavailability blocks (including the forced exceptional zeros).
pub fn expected_block_durations(spec: &AvailabilityChainSpec) -> Result<(Vec<f64>, f64), ChainError> {
    spec.validate()?;
    for (state, &p) in spec.self_probs.iter().enumerate() {
        if p >= 1.0 {
            return Err(ChainError::AbsorbingState { state });
        }
    }
    let avail = spec.self_probs[1..].iter().map(|p| 1.0 / (1.0 - p)).collect();
    let unavail = (spec.duration - 1) as f64 + 1.0 / (1.0 - spec.self_probs[0]);
    Ok((avail, unavail))
}

/// Fraction of zeros that are exceptional additions, `(d − 1) / E(d₀)`.
pub fn exceptional_prob(spec: &AvailabilityChainSpec) -> f64 {
    if spec.duration <= 1 {
        return 0.0;
    }
    let p00 = spec.self_probs.first().copied().unwrap_or(0.0);
    if p00 >= 1.0 {
        return 0.0;
    }
    let e_d0 = (spec.duration - 1) as f64 + 1.0 / (1.0 - p00);
    (spec.duration - 1) as f64 / e_d0
}

/// Effective one-step conditionals on the folded chain over `0..=n_α`:
/// `p(α|0) = p(e)·p(α|0_e) + (1 − p(e))·p(α|0)` with `p(0|0_e) = 1`.
pub fn effective_conditionals(spec: &AvailabilityChainSpec) -> Result<Vec<Vec<f64>>, ChainError> {
    spec.validate()?;
    let n = spec.n_states() + 1;
    let pe = exceptional_prob(spec);
    let mut p = vec![vec![0.0; n]; n];
    for from in 0..n {
        for to in 0..n {
            p[from][to] = if to == from {
                spec.self_probs[from]
            } else {
                spec.cross_prob(to, from)?
            };
        }
    }
    for to in 0..n {
        let exc = if to == 0 { 1.0 } else { 0.0 };
        p[0][to] = pe * exc + (1.0 - pe) * p[0][to];
    }
    Ok(p)
}

/// Stationary `p(α)` for `α = 0..=n_α` from the total-probability system
/// `p(α) = Σ_ᾱ p(α|ᾱ) p(ᾱ)`, one equation replaced by `Σ p(α) = 1`.
pub fn solve_distribution_system(spec: &AvailabilityChainSpec) -> Result<Vec<f64>, ChainError> {
    let p = effective_conditionals(spec)?;
    let n = p.len();
    // Rows: equations for α = 1..n plus normalisation; columns: p(ᾱ).
    let mut a = vec![vec![0.0; n + 1]; n];
    for alpha in 1..n {
        for bar in 0..n {
            a[alpha][bar] = p[bar][alpha] - if bar == alpha { 1.0 } else { 0.0 };
        }
    }
    for bar in 0..n {
        a[0][bar] = 1.0;
    }
    a[0][n] = 1.0;
    solve_linear(a).ok_or(ChainError::SingularSystem)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_linear(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Derives a spec whose availability states share one self-probability `x`
/// such that the stationary unavailability equals `target`. Found by
/// bisection; unavailability decreases as `x` grows.
pub fn calibrate_unavailability(
    target: f64,
    p00: f64,
    n_states: usize,
    duration: usize,
) -> Result<AvailabilityChainSpec, ChainError> {
    let make = |x: f64| {
        let mut probs = vec![x; n_states + 1];
        probs[0] = p00;
        AvailabilityChainSpec::new(probs, duration)
    };
    let unavail = |x: f64| solve_distribution_system(&make(x)).map(|d| d[0]);
    let (mut lo, mut hi) = (1e-9, 1.0 - 1e-12);
    let (u_lo, u_hi) = (unavail(lo)?, unavail(hi)?);
    if !(u_hi..=u_lo).contains(&target) {
        return Err(ChainError::CalibrationOutOfRange { target });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if unavail(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(make(0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn member_spec() -> AvailabilityChainSpec {
        AvailabilityChainSpec::new(vec![0.95, 0.7, 0.7], 2)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn matrix_entries() {
        let t = derive_transition_probs(&member_spec()).unwrap();
        assert_eq!(t.states, vec![
            ChainState::Exceptional(1),
            ChainState::Unavailable,
            ChainState::Available(1),
            ChainState::Available(2),
        ]);
        let p = &t.probs;
        assert_eq!(p[0], vec![0.0, 1.0, 0.0, 0.0]);
        assert!(close(p[1][1], 0.95, 1e-12));
        assert!(close(p[1][2], 0.025, 1e-12) && close(p[1][3], 0.025, 1e-12));
        assert_eq!(p[1][0], 0.0);
        assert!(close(p[2][0], 0.1728, 1e-4));
        assert!(close(p[2][3], 0.1272, 1e-4));
        assert!(close(p[3][0], 0.1728, 1e-4) && close(p[3][2], 0.1272, 1e-4));
        assert_eq!(p[2][1], 0.0);
    }

    #[test]
    fn duration_one_has_no_exceptional_states() {
        let t = derive_transition_probs(&AvailabilityChainSpec::new(vec![0.95, 0.7, 0.7], 1)).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.states.iter().all(|s| !matches!(s, ChainState::Exceptional(_))));
    }

    #[test]
    fn rejects_out_of_range() {
        let r = derive_transition_probs(&AvailabilityChainSpec::new(vec![1.2, 0.5], 2));
        assert!(matches!(r, Err(ChainError::ProbabilityOutOfRange { state: 0, .. })));
    }

    #[test]
    fn forty_steps() {
        let t = derive_transition_probs(&member_spec()).unwrap();
        let s = steady_state(&t, 40).unwrap();
        for (got, want) in s.iter().zip([0.0373, 0.7466, 0.1080, 0.1080]) {
            assert!(close(*got, want, 1e-3), "{s:?}");
        }
        assert!(close(s[0] + s[1], 0.78, 0.01));
    }

    #[test]
    fn identity_keeps_start() {
        let t = TransitionMatrix {
            states: vec![ChainState::Unavailable, ChainState::Available(1)],
            probs: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        };
        assert_eq!(steady_state(&t, 17).unwrap(), vec![1.0, 0.0]);
        assert!(steady_state(&t, 0).is_err());
    }

    #[test]
    fn non_stochastic_rejected() {
        let t = TransitionMatrix {
            states: vec![ChainState::Unavailable, ChainState::Available(1)],
            probs: vec![vec![0.5, 0.4], vec![0.0, 1.0]],
        };
        assert!(matches!(steady_state(&t, 1), Err(ChainError::NotStochastic { row: 0, .. })));
    }

    #[test]
    fn block_durations() {
        let (a, u) = expected_block_durations(&member_spec()).unwrap();
        assert!(close(a[0], 10.0 / 3.0, 1e-12));
        assert!(close(u, 21.0, 1e-12));
        let (a, _) = expected_block_durations(&AvailabilityChainSpec::new(vec![0.5, 0.0], 2)).unwrap();
        assert_eq!(a[0], 1.0);
        assert!(expected_block_durations(&AvailabilityChainSpec::new(vec![0.5, 1.0], 2)).is_err());
    }

    #[test]
    fn exceptional_probabilities() {
        assert!(close(exceptional_prob(&member_spec()), 1.0 / 21.0, 1e-12));
        assert_eq!(exceptional_prob(&AvailabilityChainSpec::new(vec![0.95, 0.7], 1)), 0.0);
        assert!(close(exceptional_prob(&AvailabilityChainSpec::new(vec![0.5, 0.7], 3)), 0.5, 1e-12));
    }

    #[test]
    fn distribution_system_matches_fixed_point() {
        for probs in [
            vec![0.95, 0.7, 0.7],
            vec![0.95, 0.63, 0.63],
            vec![0.95, 0.55, 0.55],
            vec![0.95, 0.7],
            vec![0.95, 0.8],
        ] {
            let spec = AvailabilityChainSpec::new(probs, 2);
            let sys = solve_distribution_system(&spec).unwrap();
            let t = derive_transition_probs(&spec).unwrap();
            let fp = t.fold(&fixed_point(&t).unwrap());
            for (a, b) in sys.iter().zip(&fp) {
                assert!(close(*a, *b, 1e-8), "{sys:?} vs {fp:?}");
            }
        }
        let sym = solve_distribution_system(&AvailabilityChainSpec::new(vec![0.5, 0.5], 1)).unwrap();
        assert!(close(sym[0], 0.5, 1e-12));
    }

    #[test]
    fn room_chain_values() {
        let p = |x: f64| solve_distribution_system(&AvailabilityChainSpec::new(vec![0.95, x], 2)).unwrap()[0];
        assert!(close(p(0.8), 0.808, 1e-3));
        assert!(close(p(0.7), 0.863, 1e-3));
        let spec = calibrate_unavailability(0.80, 0.95, 1, 2).unwrap();
        assert!(close(solve_distribution_system(&spec).unwrap()[0], 0.80, 1e-9));
        assert!(close(spec.self_probs[1], 0.8, 0.01));
    }
}
