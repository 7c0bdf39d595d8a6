//! Random instance generation.
//!
//! Every draw comes from a ChaCha8 stream derived from the instance seed:
//! the generator is seeded with `seed` and switched to stream
//! `kind << 56 | entity << 28 | day` (see [`stream`]). Rows and days can
//! therefore be produced independently and in any order.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{calibrate_unavailability, derive_transition_probs, AvailabilityChainSpec, ChainError, ChainState};
use crate::instance::{Defence, Dims, Instance, Member};

/// Stream kinds used for splitting.
pub mod kinds {
    pub const MEMBER_AVAILABILITY: u64 = 1;
    pub const ROOM_AVAILABILITY: u64 = 2;
    pub const MEMBER_ATTRIBUTES: u64 = 3;
    pub const DEFENCE_SUBJECTS: u64 = 4;
    pub const ROLE_POOL: u64 = 5;
    pub const FIXED_ROLE: u64 = 6;
}

/// Random stream for `(kind, entity, day)`.
pub fn stream(seed: u64, kind: u64, entity: usize, day: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((kind << 56) | ((entity as u64 & 0x0fff_ffff) << 28) | (day as u64 & 0x0fff_ffff));
    rng
}

/// A profile (compactness weights or room change penalties) and the
/// probability of drawing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub values: Vec<u32>,
    pub prob: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub dims: Dims,
    /// `weight_probs[w]` is the probability of weight `w + 1`.
    pub weight_probs: Vec<f64>,
    /// Committee cap for every member; `None` means `⌈n_i / 2⌉`.
    pub max_committees: Option<u32>,
    pub subjects_per_member: usize,
    pub subjects_per_defence: usize,
    /// Roles with a single eligible member per defence.
    pub fixed_roles: Vec<usize>,
    /// Per role: size of the sampled eligible pool, `None` for everyone.
    pub role_pools: Vec<Option<usize>>,
    pub member_chain: AvailabilityChainSpec,
    pub room_chain: AvailabilityChainSpec,
    pub compact_profiles: Vec<Profile>,
    pub roomchange_profiles: Vec<Profile>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorError {
    Chain(ChainError),
    Probabilities(&'static str),
    ChainDuration { chain: usize, defence: usize },
    RolePoolsLength { roles: usize, found: usize },
    RoleOutOfRange(usize),
    PoolTooLarge { role: usize, pool: usize, members: usize },
    /// No pool member is left for a fixed role after excluding the members
    /// already fixed in other roles of the same defence.
    PoolTooSmall { defence: usize, role: usize },
    TooManySubjects { requested: usize, available: usize },
    UnknownPreset(&'static str),
}

impl fmt::Display for GeneratorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Chain(e) => write!(f, "availability chain: {e}"),
            Self::Probabilities(what) => write!(f, "{what}: probabilities must be non-negative and sum to 1"),
            Self::ChainDuration { chain, defence } => {
                write!(f, "chain duration {chain} differs from defence duration {defence}")
            }
            Self::RolePoolsLength { roles, found } => write!(f, "expected {roles} role pools, found {found}"),
            Self::RoleOutOfRange(t) => write!(f, "fixed role {t} out of range"),
            Self::PoolTooLarge { role, pool, members } => {
                write!(f, "pool of role {role} has size {pool} but there are only {members} members")
            }
            Self::PoolTooSmall { defence, role } => {
                write!(f, "defence {defence}: no distinct pool member left for fixed role {role}")
            }
            Self::TooManySubjects { requested, available } => {
                write!(f, "{requested} subjects requested but only {available} exist")
            }
            Self::UnknownPreset(what) => write!(f, "no preset for {what}"),
        }
    }
}

impl From<ChainError> for GeneratorError {
    fn from(e: ChainError) -> Self {
        GeneratorError::Chain(e)
    }
}

fn check_probs(what: &'static str, probs: impl Iterator<Item = f64>) -> Result<(), GeneratorError> {
    let mut sum = 0.0;
    let mut n = 0;
    for p in probs {
        if !(0.0..=1.0).contains(&p) {
            return Err(GeneratorError::Probabilities(what));
        }
        sum += p;
        n += 1;
    }
    if n == 0 || (sum - 1.0).abs() > 1e-9 {
        return Err(GeneratorError::Probabilities(what));
    }
    Ok(())
}

fn categorical<R: Rng>(rng: &mut R, probs: impl Iterator<Item = f64> + Clone) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, p) in probs.enumerate() {
        if p > 0.0 {
            last = i;
        }
        acc += p;
        if u < acc {
            return i;
        }
    }
    last
}

fn subject_flags<R: Rng>(rng: &mut R, n_q: usize, k: usize) -> Vec<bool> {
    let mut flags = vec![false; n_q];
    for q in index::sample(rng, n_q, k) {
        flags[q] = true;
    }
    flags
}

/// Availability grids `[row][day][hour]` for `rows` independent entities
/// drawn from the member-availability stream family.
pub fn generate_availability(
    rows: usize,
    spec: &AvailabilityChainSpec,
    n_k: usize,
    n_l: usize,
    seed: u64,
) -> Result<Vec<Vec<Vec<u32>>>, ChainError> {
    generate_availability_kind(rows, spec, n_k, n_l, seed, kinds::MEMBER_AVAILABILITY)
}

/// As [`generate_availability`] with an explicit stream kind.
pub fn generate_availability_kind(
    rows: usize,
    spec: &AvailabilityChainSpec,
    n_k: usize,
    n_l: usize,
    seed: u64,
    kind: u64,
) -> Result<Vec<Vec<Vec<u32>>>, ChainError> {
    let t = derive_transition_probs(spec)?;
    let start = t.index_of(ChainState::Unavailable).expect("chain always has plain 0");
    let mut out = Vec::with_capacity(rows);
    for row in 0..rows {
        let mut days = Vec::with_capacity(n_k);
        for day in 0..n_k {
            let mut rng = stream(seed, kind, row, day);
            let mut state = start;
            let mut values = Vec::with_capacity(n_l);
            for step in 0..spec.warmup + n_l {
                state = categorical(&mut rng, t.probs[state].iter().copied());
                if step >= spec.warmup {
                    values.push(t.states[state].value());
                }
            }
            days.push(values);
        }
        out.push(days);
    }
    Ok(out)
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        let d = &self.dims;
        check_probs("weights", self.weight_probs.iter().copied())?;
        check_probs("compactness profiles", self.compact_profiles.iter().map(|p| p.prob))?;
        check_probs("room change profiles", self.roomchange_profiles.iter().map(|p| p.prob))?;
        self.member_chain.validate()?;
        self.room_chain.validate()?;
        for chain in [&self.member_chain, &self.room_chain] {
            if chain.duration != d.duration {
                return Err(GeneratorError::ChainDuration {
                    chain: chain.duration,
                    defence: d.duration,
                });
            }
        }
        if self.role_pools.len() != d.roles {
            return Err(GeneratorError::RolePoolsLength {
                roles: d.roles,
                found: self.role_pools.len(),
            });
        }
        for &t in &self.fixed_roles {
            if t >= d.roles {
                return Err(GeneratorError::RoleOutOfRange(t));
            }
        }
        for (role, pool) in self.role_pools.iter().enumerate() {
            if let Some(pool) = *pool {
                if pool > d.members {
                    return Err(GeneratorError::PoolTooLarge {
                        role,
                        pool,
                        members: d.members,
                    });
                }
            }
        }
        for k in [self.subjects_per_member, self.subjects_per_defence] {
            if k > d.subjects {
                return Err(GeneratorError::TooManySubjects {
                    requested: k,
                    available: d.subjects,
                });
            }
        }
        Ok(())
    }

    pub fn committee_cap(&self) -> u32 {
        self.max_committees
            .unwrap_or_else(|| self.dims.members.div_ceil(2) as u32)
    }
}

pub fn generate_instance(cfg: &GeneratorConfig) -> Result<Instance, GeneratorError> {
    cfg.validate()?;
    let d = cfg.dims;
    let seed = cfg.seed;

    let member_avail = generate_availability_kind(
        d.members,
        &cfg.member_chain,
        d.days,
        d.hours,
        seed,
        kinds::MEMBER_AVAILABILITY,
    )?;
    let room_avail = generate_availability_kind(d.rooms, &cfg.room_chain, d.days, d.hours, seed, kinds::ROOM_AVAILABILITY)?;

    let cap = cfg.committee_cap();
    let members = member_avail
        .into_iter()
        .enumerate()
        .map(|(i, availability)| {
            let mut rng = stream(seed, kinds::MEMBER_ATTRIBUTES, i, 0);
            let weight = categorical(&mut rng, cfg.weight_probs.iter().copied()) as u32 + 1;
            let subjects = subject_flags(&mut rng, d.subjects, cfg.subjects_per_member);
            let v = categorical(&mut rng, cfg.compact_profiles.iter().map(|p| p.prob));
            let h = categorical(&mut rng, cfg.roomchange_profiles.iter().map(|p| p.prob));
            Member {
                weight,
                max_committees: cap,
                availability,
                subjects,
                compact_weights: cfg.compact_profiles[v].values.clone(),
                roomchange_penalties: cfg.roomchange_profiles[h].values.clone(),
            }
        })
        .collect();

    let pools: Vec<Option<Vec<usize>>> = cfg
        .role_pools
        .iter()
        .enumerate()
        .map(|(t, pool)| {
            pool.map(|size| {
                let mut rng = stream(seed, kinds::ROLE_POOL, t, 0);
                let mut p = index::sample(&mut rng, d.members, size).into_vec();
                p.sort_unstable();
                p
            })
        })
        .collect();

    let mut defences = Vec::with_capacity(d.defences);
    for j in 0..d.defences {
        let mut rng = stream(seed, kinds::DEFENCE_SUBJECTS, j, 0);
        let subjects = subject_flags(&mut rng, d.subjects, cfg.subjects_per_defence);
        let mut eligibility = vec![vec![false; d.members]; d.roles];
        let mut fixed_rng = stream(seed, kinds::FIXED_ROLE, j, 0);
        let mut used: Vec<usize> = Vec::new();
        for t in 0..d.roles {
            let pool: Vec<usize> = match &pools[t] {
                Some(p) => p.clone(),
                None => (0..d.members).collect(),
            };
            if cfg.fixed_roles.contains(&t) {
                let free: Vec<usize> = pool.into_iter().filter(|i| !used.contains(i)).collect();
                if free.is_empty() {
                    return Err(GeneratorError::PoolTooSmall { defence: j, role: t });
                }
                let pick = free[fixed_rng.random_range(0..free.len())];
                used.push(pick);
                eligibility[t][pick] = true;
            } else {
                for i in pool {
                    eligibility[t][i] = true;
                }
            }
        }
        defences.push(Defence { subjects, eligibility });
    }

    let room_availability = room_avail
        .into_iter()
        .map(|days| days.into_iter().map(|row| row.into_iter().map(|v| v >= 1).collect()).collect())
        .collect();

    let inst = Instance {
        dims: d,
        members,
        defences,
        room_availability,
    };
    debug_assert!(inst.validate().is_ok());
    Ok(inst)
}

/// Member chain inputs keyed by the targeted unavailability rate.
pub const MEMBER_CHAIN_COLUMNS: [(f64, [f64; 3]); 3] = [
    (0.78, [0.95, 0.7, 0.7]),
    (0.82, [0.95, 0.63, 0.63]),
    (0.86, [0.95, 0.55, 0.55]),
];

/// Room chain inputs as published, keyed by the targeted unavailability
/// rate. Their analytic stationary rates do not match the keys; see
/// [`RoomChainMode`].
pub const ROOM_CHAIN_COLUMNS: [(f64, [f64; 2]); 2] = [(0.80, [0.95, 0.7]), (0.86, [0.95, 0.8])];

/// How the room chain is chosen for a target unavailability rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RoomChainMode {
    /// Published inputs taken verbatim.
    #[default]
    Literal,
    /// `p(1|1)` solved for so that the stationary rate equals the target.
    Calibrated,
}

fn column<const N: usize>(table: &[(f64, [f64; N])], target: f64) -> Option<Vec<f64>> {
    table
        .iter()
        .find(|(t, _)| (t - target).abs() < 1e-9)
        .map(|(_, p)| p.to_vec())
}

pub fn member_chain_for(target: f64, duration: usize) -> Result<AvailabilityChainSpec, GeneratorError> {
    column(&MEMBER_CHAIN_COLUMNS, target)
        .map(|p| AvailabilityChainSpec::new(p, duration))
        .ok_or(GeneratorError::UnknownPreset("member unavailability rate"))
}

/// Room chain for a target rate. In literal mode the second value is the
/// analytic stationary unavailability of the returned chain, which callers
/// should report when it differs from the target.
pub fn room_chain_for(
    target: f64,
    duration: usize,
    mode: RoomChainMode,
) -> Result<AvailabilityChainSpec, GeneratorError> {
    match mode {
        RoomChainMode::Literal => column(&ROOM_CHAIN_COLUMNS, target)
            .map(|p| AvailabilityChainSpec::new(p, duration))
            .ok_or(GeneratorError::UnknownPreset("room unavailability rate")),
        RoomChainMode::Calibrated => Ok(calibrate_unavailability(target, 0.95, 1, duration)?),
    }
}

/// Pool sizes for roles 1 and 2 used with the published member counts.
pub fn paper_pool_sizes(members: usize) -> Option<(usize, usize)> {
    match members {
        25 => Some((9, 13)),
        38 => Some((12, 19)),
        50 => Some((15, 25)),
        _ => None,
    }
}

/// Settings of the published benchmark family
/// `p(n_i.n_j.3.15.16.n_p.15)`, `d = 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct PaperPreset {
    pub members: usize,
    pub defences: usize,
    pub rooms: usize,
    /// 1: only role 2 fixed; 2: roles 1 and 2 fixed.
    pub fixed_roles: usize,
    pub member_unavailability: f64,
    pub room_unavailability: f64,
    pub room_mode: RoomChainMode,
    /// Probability of the compactness profile `[1]` (otherwise `[2, 1]`).
    pub compact_single: f64,
    /// Probability of the room change profile `[1]` (otherwise `[2, 1]`).
    pub roomchange_single: f64,
    pub seed: u64,
}

impl PaperPreset {
    pub fn config(&self) -> Result<GeneratorConfig, GeneratorError> {
        let duration = 2;
        let (pool1, pool2) =
            paper_pool_sizes(self.members).ok_or(GeneratorError::UnknownPreset("member count"))?;
        let fixed_roles = match self.fixed_roles {
            1 => vec![1],
            2 => vec![0, 1],
            _ => return Err(GeneratorError::UnknownPreset("number of fixed roles")),
        };
        let profiles = |single: f64| {
            vec![
                Profile { values: vec![1], prob: single },
                Profile { values: vec![2, 1], prob: 1.0 - single },
            ]
        };
        Ok(GeneratorConfig {
            dims: Dims {
                members: self.members,
                defences: self.defences,
                roles: 3,
                days: 15,
                hours: 16,
                rooms: self.rooms,
                subjects: 15,
                duration,
            },
            weight_probs: vec![0.7, 0.3],
            max_committees: None,
            subjects_per_member: 3,
            subjects_per_defence: 3,
            fixed_roles,
            role_pools: vec![Some(pool1), Some(pool2), None],
            member_chain: member_chain_for(self.member_unavailability, duration)?,
            room_chain: room_chain_for(self.room_unavailability, duration, self.room_mode)?,
            compact_profiles: profiles(self.compact_single),
            roomchange_profiles: profiles(self.roomchange_single),
            seed: self.seed,
        })
    }
}

/// Size bounds for [`generate_small`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallShape {
    pub min_members: usize,
    pub min_defences: usize,
    pub min_hours: usize,
    pub max_members: usize,
    pub max_defences: usize,
    pub max_roles: usize,
    pub max_days: usize,
    pub max_hours: usize,
    pub max_rooms: usize,
    pub subjects: usize,
    pub duration: usize,
    /// Chance that a member is available in a slot.
    pub available_percent: u32,
}

impl Default for SmallShape {
    fn default() -> Self {
        SmallShape {
            min_members: 2,
            min_defences: 1,
            min_hours: 2,
            max_members: 5,
            max_defences: 3,
            max_roles: 3,
            max_days: 2,
            max_hours: 6,
            max_rooms: 2,
            subjects: 3,
            duration: 2,
            available_percent: 75,
        }
    }
}

/// Small instance with independent per-slot availability, for exhaustive
/// cross-checks. Sizes are drawn uniformly between the bounds of `shape`.
pub fn generate_small(seed: u64, shape: SmallShape) -> Instance {
    let mut rng = stream(seed, 0, 0, 0);
    let n_i = rng.random_range(shape.min_members.max(2)..=shape.max_members.max(shape.min_members).max(2));
    let n_j = rng.random_range(shape.min_defences.max(1)..=shape.max_defences.max(shape.min_defences).max(1));
    let n_t = rng.random_range(1..=shape.max_roles.max(1).min(n_i));
    let n_k = rng.random_range(1..=shape.max_days.max(1));
    let lo_l = shape.min_hours.max(shape.duration);
    let n_l = rng.random_range(lo_l..=shape.max_hours.max(lo_l));
    let n_p = rng.random_range(1..=shape.max_rooms.max(1));
    let n_q = shape.subjects.max(1);
    let dur = shape.duration;

    let pick_subjects = |rng: &mut ChaCha8Rng| {
        let k = rng.random_range(1..=n_q.min(2));
        subject_flags(rng, n_q, k)
    };
    let profile = |rng: &mut ChaCha8Rng| {
        if dur >= 2 && rng.random_bool(0.5) {
            vec![2, 1]
        } else {
            vec![1]
        }
    };
    let members = (0..n_i)
        .map(|_| {
            let availability = (0..n_k)
                .map(|_| {
                    (0..n_l)
                        .map(|_| {
                            if rng.random_ratio(shape.available_percent.min(100), 100) {
                                rng.random_range(1..=2)
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            Member {
                weight: rng.random_range(1..=2),
                max_committees: rng.random_range(1..=3),
                availability,
                subjects: pick_subjects(&mut rng),
                compact_weights: profile(&mut rng),
                roomchange_penalties: profile(&mut rng),
            }
        })
        .collect();
    let defences = (0..n_j)
        .map(|_| {
            let eligibility = (0..n_t)
                .map(|_| {
                    let mut row: Vec<bool> = (0..n_i).map(|_| rng.random_bool(0.6)).collect();
                    if !row.iter().any(|e| *e) {
                        row[rng.random_range(0..n_i)] = true;
                    }
                    row
                })
                .collect();
            Defence {
                subjects: pick_subjects(&mut rng),
                eligibility,
            }
        })
        .collect();
    let room_availability = (0..n_p)
        .map(|_| (0..n_k).map(|_| (0..n_l).map(|_| rng.random_bool(0.85)).collect()).collect())
        .collect();
    let inst = Instance {
        dims: Dims {
            members: n_i,
            defences: n_j,
            roles: n_t,
            days: n_k,
            hours: n_l,
            rooms: n_p,
            subjects: n_q,
            duration: dur,
        },
        members,
        defences,
        room_availability,
    };
    debug_assert!(inst.validate().is_ok());
    inst
}
