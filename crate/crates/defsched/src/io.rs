//! JSON file formats: instances, generator and run configurations, results
//! and chain analysis specs.

use std::path::{Path, PathBuf};
use std::time::Duration;

use defsched_core::chain::{AvailabilityChainSpec, DEFAULT_WARMUP};
use defsched_core::generate::{GeneratorConfig, PaperPreset, Profile, RoomChainMode};
use defsched_core::model::Encoding;
use defsched_core::{Assignment, Defence, Dims, Instance, Member, ObjectiveId, ObjectiveVector, Schedule, N_OBJECTIVES};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{Counters, FullRun, IterationRecord, RunConfig, SkipRule, Solution, StageTimes};
use crate::solver::SolverParams;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Invalid(msg.into()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Parse {
        path: path.to_owned(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value).expect("file types serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| IoError::Write {
        path: path.to_owned(),
        source,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub n_i: usize,
    pub n_j: usize,
    pub n_t: usize,
    pub n_k: usize,
    pub n_l: usize,
    pub n_p: usize,
    pub n_q: usize,
    pub d: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberRecord {
    pub id: usize,
    pub u: u32,
    pub c: u32,
    /// Compactness window; `v` has `b + 1` entries.
    pub b: usize,
    pub v: Vec<u32>,
    /// Room change window; `h` has `a + 1` entries.
    pub a: usize,
    pub h: Vec<u32>,
    pub subjects: Vec<usize>,
    /// `[day][hour]`, 0 = unavailable, otherwise preference level.
    pub availability: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefenceRecord {
    pub id: usize,
    pub subjects: Vec<usize>,
    /// Per role, the ids of eligible members.
    pub eligibility: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoomsRecord {
    /// `[room][day][hour]`, 1 = available.
    pub availability: Vec<Vec<Vec<u8>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub meta: Meta,
    pub members: Vec<MemberRecord>,
    pub defences: Vec<DefenceRecord>,
    pub rooms: RoomsRecord,
}

fn flags(n: usize, ids: &[usize], what: &str) -> Result<Vec<bool>, IoError> {
    let mut out = vec![false; n];
    for &q in ids {
        if q >= n {
            return invalid(format!("{what}: id {q} out of range 0..{n}"));
        }
        if out[q] {
            return invalid(format!("{what}: id {q} listed twice"));
        }
        out[q] = true;
    }
    Ok(out)
}

fn ids(flags: &[bool]) -> Vec<usize> {
    flags.iter().enumerate().filter(|(_, f)| **f).map(|(i, _)| i).collect()
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        let d = inst.dims;
        InstanceFile {
            schema_version: SCHEMA_VERSION,
            meta: Meta {
                n_i: d.members,
                n_j: d.defences,
                n_t: d.roles,
                n_k: d.days,
                n_l: d.hours,
                n_p: d.rooms,
                n_q: d.subjects,
                d: d.duration,
            },
            members: inst
                .members
                .iter()
                .enumerate()
                .map(|(id, m)| MemberRecord {
                    id,
                    u: m.weight,
                    c: m.max_committees,
                    b: m.compact_window(),
                    v: m.compact_weights.clone(),
                    a: m.roomchange_window(),
                    h: m.roomchange_penalties.clone(),
                    subjects: ids(&m.subjects),
                    availability: m.availability.clone(),
                })
                .collect(),
            defences: inst
                .defences
                .iter()
                .enumerate()
                .map(|(id, j)| DefenceRecord {
                    id,
                    subjects: ids(&j.subjects),
                    eligibility: j.eligibility.iter().map(|e| ids(e)).collect(),
                })
                .collect(),
            rooms: RoomsRecord {
                availability: inst
                    .room_availability
                    .iter()
                    .map(|p| p.iter().map(|k| k.iter().map(|&a| u8::from(a)).collect()).collect())
                    .collect(),
            },
        }
    }

    pub fn to_instance(&self) -> Result<Instance, IoError> {
        if self.schema_version != SCHEMA_VERSION {
            return invalid(format!("unsupported instance schema version {}", self.schema_version));
        }
        let m = self.meta;
        let dims = Dims {
            members: m.n_i,
            defences: m.n_j,
            roles: m.n_t,
            days: m.n_k,
            hours: m.n_l,
            rooms: m.n_p,
            subjects: m.n_q,
            duration: m.d,
        };
        let mut members = Vec::with_capacity(self.members.len());
        for (pos, r) in self.members.iter().enumerate() {
            if r.id != pos {
                return invalid(format!("member at position {pos} has id {}", r.id));
            }
            if r.v.len() != r.b + 1 || r.h.len() != r.a + 1 {
                return invalid(format!("member {pos}: v needs b + 1 and h needs a + 1 entries"));
            }
            members.push(Member {
                weight: r.u,
                max_committees: r.c,
                availability: r.availability.clone(),
                subjects: flags(m.n_q, &r.subjects, &format!("member {pos} subjects"))?,
                compact_weights: r.v.clone(),
                roomchange_penalties: r.h.clone(),
            });
        }
        let mut defences = Vec::with_capacity(self.defences.len());
        for (pos, r) in self.defences.iter().enumerate() {
            if r.id != pos {
                return invalid(format!("defence at position {pos} has id {}", r.id));
            }
            let eligibility = r
                .eligibility
                .iter()
                .enumerate()
                .map(|(t, e)| flags(m.n_i, e, &format!("defence {pos} role {t} eligibility")))
                .collect::<Result<_, _>>()?;
            defences.push(Defence {
                subjects: flags(m.n_q, &r.subjects, &format!("defence {pos} subjects"))?,
                eligibility,
            });
        }
        let mut rooms = Vec::with_capacity(self.rooms.availability.len());
        for p in &self.rooms.availability {
            let mut days = Vec::with_capacity(p.len());
            for k in p {
                let mut hours = Vec::with_capacity(k.len());
                for &a in k {
                    match a {
                        0 => hours.push(false),
                        1 => hours.push(true),
                        _ => return invalid("room availability entries must be 0 or 1"),
                    }
                }
                days.push(hours);
            }
            rooms.push(days);
        }
        let inst = Instance {
            dims,
            members,
            defences,
            room_availability: rooms,
        };
        inst.validate().map_err(|e| IoError::Invalid(e.to_string()))?;
        Ok(inst)
    }

    /// SHA-256 of the compact serialization. Independent of the formatting
    /// of the file the instance was read from.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("instance serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

pub fn read_instance(path: &Path) -> Result<(Instance, String), IoError> {
    let file: InstanceFile = read_json(path)?;
    let inst = file.to_instance()?;
    let digest = InstanceFile::from_instance(&inst).digest();
    Ok((inst, digest))
}

pub fn instance_digest(inst: &Instance) -> String {
    InstanceFile::from_instance(inst).digest()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainRecord {
    /// `p(α|α)` for `α = 0..=n_α`.
    pub self_probs: Vec<f64>,
    #[serde(default = "default_warmup")]
    pub warmup: usize,
}

fn default_warmup() -> usize {
    DEFAULT_WARMUP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileRecord {
    pub values: Vec<u32>,
    pub prob: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoomMode {
    #[default]
    Literal,
    Calibrated,
}

fn half() -> f64 {
    0.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetRecord {
    pub members: usize,
    pub defences: usize,
    pub rooms: usize,
    pub fixed_roles: usize,
    pub member_unavailability: f64,
    pub room_unavailability: f64,
    #[serde(default)]
    pub room_mode: RoomMode,
    #[serde(default = "half")]
    pub compact_single: f64,
    #[serde(default = "half")]
    pub roomchange_single: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomRecord {
    pub meta: Meta,
    pub weight_probs: Vec<f64>,
    #[serde(default)]
    pub max_committees: Option<u32>,
    pub subjects_per_member: usize,
    pub subjects_per_defence: usize,
    #[serde(default)]
    pub fixed_roles: Vec<usize>,
    pub role_pools: Vec<Option<usize>>,
    pub member_chain: ChainRecord,
    pub room_chain: ChainRecord,
    pub compact_profiles: Vec<ProfileRecord>,
    pub roomchange_profiles: Vec<ProfileRecord>,
}

/// Generator configuration file: a published benchmark setting or a fully
/// specified one. The seed comes from the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorFile {
    Preset(PresetRecord),
    Custom(CustomRecord),
}

impl GeneratorFile {
    pub fn to_config(&self, seed: u64) -> Result<GeneratorConfig, IoError> {
        let cfg = match self {
            GeneratorFile::Preset(p) => PaperPreset {
                members: p.members,
                defences: p.defences,
                rooms: p.rooms,
                fixed_roles: p.fixed_roles,
                member_unavailability: p.member_unavailability,
                room_unavailability: p.room_unavailability,
                room_mode: match p.room_mode {
                    RoomMode::Literal => RoomChainMode::Literal,
                    RoomMode::Calibrated => RoomChainMode::Calibrated,
                },
                compact_single: p.compact_single,
                roomchange_single: p.roomchange_single,
                seed,
            }
            .config()
            .map_err(|e| IoError::Invalid(e.to_string()))?,
            GeneratorFile::Custom(c) => {
                let chain = |r: &ChainRecord| AvailabilityChainSpec {
                    self_probs: r.self_probs.clone(),
                    duration: c.meta.d,
                    warmup: r.warmup,
                };
                let profiles = |v: &[ProfileRecord]| {
                    v.iter()
                        .map(|p| Profile {
                            values: p.values.clone(),
                            prob: p.prob,
                        })
                        .collect()
                };
                GeneratorConfig {
                    dims: Dims {
                        members: c.meta.n_i,
                        defences: c.meta.n_j,
                        roles: c.meta.n_t,
                        days: c.meta.n_k,
                        hours: c.meta.n_l,
                        rooms: c.meta.n_p,
                        subjects: c.meta.n_q,
                        duration: c.meta.d,
                    },
                    weight_probs: c.weight_probs.clone(),
                    max_committees: c.max_committees,
                    subjects_per_member: c.subjects_per_member,
                    subjects_per_defence: c.subjects_per_defence,
                    fixed_roles: c.fixed_roles.clone(),
                    role_pools: c.role_pools.clone(),
                    member_chain: chain(&c.member_chain),
                    room_chain: chain(&c.room_chain),
                    compact_profiles: profiles(&c.compact_profiles),
                    roomchange_profiles: profiles(&c.roomchange_profiles),
                    seed,
                }
            }
        };
        cfg.validate().map_err(|e| IoError::Invalid(e.to_string()))?;
        Ok(cfg)
    }
}

fn d_sparse() -> String {
    "sparse".into()
}

/// Run configuration file. Every field is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfigFile {
    pub primary: String,
    pub bounded: Vec<String>,
    pub grid_steps: Vec<u32>,
    pub stage1_limit_secs: f64,
    pub payoff_limit_secs: f64,
    pub total_limit_secs: f64,
    pub deterministic: bool,
    pub skip_rule: SkipRule,
    pub filter_dominated: bool,
    #[serde(default = "d_sparse")]
    pub encoding: String,
    pub solver: SolverParams,
}

impl Default for RunConfigFile {
    fn default() -> Self {
        RunConfigFile::from_config(&RunConfig::default())
    }
}

fn parse_objective(s: &str) -> Result<ObjectiveId, IoError> {
    ObjectiveId::parse(s).ok_or_else(|| IoError::Invalid(format!("unknown objective {s:?} (expected z1..z7)")))
}

fn secs(v: f64, what: &str) -> Result<Duration, IoError> {
    Duration::try_from_secs_f64(v).map_err(|_| IoError::Invalid(format!("{what} must be a non-negative number of seconds")))
}

impl RunConfigFile {
    pub fn from_config(c: &RunConfig) -> Self {
        RunConfigFile {
            primary: c.primary.short_name().into(),
            bounded: c.bounded.iter().map(|b| b.short_name().into()).collect(),
            grid_steps: c.grid_steps.clone(),
            stage1_limit_secs: c.stage1_limit.as_secs_f64(),
            payoff_limit_secs: c.payoff_limit.as_secs_f64(),
            total_limit_secs: c.total_limit.as_secs_f64(),
            deterministic: c.deterministic,
            skip_rule: c.skip_rule,
            filter_dominated: c.filter_dominated,
            encoding: match c.encoding {
                Encoding::Sparse => "sparse".into(),
                Encoding::Dense => "dense".into(),
            },
            solver: c.solver.clone(),
        }
    }

    pub fn to_config(&self) -> Result<RunConfig, IoError> {
        let cfg = RunConfig {
            primary: parse_objective(&self.primary)?,
            bounded: self.bounded.iter().map(|b| parse_objective(b)).collect::<Result<_, _>>()?,
            grid_steps: self.grid_steps.clone(),
            stage1_limit: secs(self.stage1_limit_secs, "stage1_limit_secs")?,
            payoff_limit: secs(self.payoff_limit_secs, "payoff_limit_secs")?,
            total_limit: secs(self.total_limit_secs, "total_limit_secs")?,
            deterministic: self.deterministic,
            skip_rule: self.skip_rule,
            filter_dominated: self.filter_dominated,
            encoding: match self.encoding.as_str() {
                "sparse" => Encoding::Sparse,
                "dense" => Encoding::Dense,
                other => return invalid(format!("unknown encoding {other:?}")),
            },
            solver: self.solver.clone(),
        };
        cfg.validate().map_err(|e| IoError::Invalid(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub member: usize,
    pub defence: usize,
    pub role: usize,
    pub day: usize,
    pub hour: usize,
    pub room: usize,
}

impl From<&Assignment> for AssignmentRecord {
    fn from(a: &Assignment) -> Self {
        AssignmentRecord {
            member: a.member,
            defence: a.defence,
            role: a.role,
            day: a.day,
            hour: a.hour,
            room: a.room,
        }
    }
}

impl From<&AssignmentRecord> for Assignment {
    fn from(a: &AssignmentRecord) -> Self {
        Assignment {
            member: a.member,
            defence: a.defence,
            role: a.role,
            day: a.day,
            hour: a.hour,
            room: a.room,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    /// z1..z7 in their own sense.
    pub raw: [i64; N_OBJECTIVES],
    /// All-maximise form.
    pub canonical: [i64; N_OBJECTIVES],
    pub z2_ratio: f64,
    pub epsilon: Vec<f64>,
    pub grid_cell: Vec<u32>,
    pub iteration: usize,
    pub assignments: Vec<AssignmentRecord>,
}

impl SolutionRecord {
    fn new(inst: &Instance, s: &Solution) -> Self {
        SolutionRecord {
            raw: s.objectives.0,
            canonical: s.objectives.canonical(),
            z2_ratio: s.objectives.coverage_ratio(inst),
            epsilon: s.epsilon.clone(),
            grid_cell: s.v.clone(),
            iteration: s.iteration,
            assignments: s.schedule.assignments.iter().map(AssignmentRecord::from).collect(),
        }
    }

    pub fn schedule(&self, g: usize) -> Schedule {
        Schedule::new(self.assignments.iter().map(Assignment::from).collect(), g)
    }

    pub fn objectives(&self) -> ObjectiveVector {
        ObjectiveVector(self.raw)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GRecord {
    pub value: usize,
    pub optimal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PayoffRecord {
    pub objective: String,
    pub raw: [i64; N_OBJECTIVES],
    pub optimal: bool,
    pub wall_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    /// `p(n_i.n_j.n_t.n_k.n_l.n_p.n_q)`.
    #[serde(rename = "type")]
    pub kind: String,
    pub d: usize,
    /// Number of members per weight, index 0 is weight 1.
    pub weight_counts: Vec<usize>,
    /// Roles with exactly one eligible member in every defence.
    pub fixed_roles: usize,
    pub max_committees: Vec<u32>,
    pub member_unavailability: f64,
    pub room_unavailability: f64,
    /// Distinct compactness profiles and how many members use each.
    pub compact_profiles: Vec<(Vec<u32>, usize)>,
    pub roomchange_profiles: Vec<(Vec<u32>, usize)>,
}

fn profile_counts<'a>(profiles: impl Iterator<Item = &'a Vec<u32>>) -> Vec<(Vec<u32>, usize)> {
    let mut out: Vec<(Vec<u32>, usize)> = Vec::new();
    for p in profiles {
        match out.iter_mut().find(|(q, _)| q == p) {
            Some((_, n)) => *n += 1,
            None => out.push((p.clone(), 1)),
        }
    }
    out.sort();
    out
}

impl InstanceSummary {
    pub fn new(inst: &Instance) -> Self {
        let d = inst.dims;
        let max_w = inst.members.iter().map(|m| m.weight as usize).max().unwrap_or(1);
        let mut weight_counts = vec![0; max_w];
        for m in &inst.members {
            weight_counts[m.weight as usize - 1] += 1;
        }
        let fixed_roles = (0..d.roles)
            .filter(|&t| {
                !inst.defences.is_empty()
                    && inst
                        .defences
                        .iter()
                        .all(|j| j.eligibility[t].iter().filter(|e| **e).count() == 1)
            })
            .count();
        let member_slots = (d.members * d.days * d.hours).max(1);
        let member_zero = inst
            .members
            .iter()
            .flat_map(|m| m.availability.iter().flatten())
            .filter(|a| **a == 0)
            .count();
        let room_slots = (d.rooms * d.days * d.hours).max(1);
        let room_zero = inst.room_availability.iter().flatten().flatten().filter(|a| !**a).count();
        let mut caps: Vec<u32> = inst.members.iter().map(|m| m.max_committees).collect();
        caps.sort_unstable();
        caps.dedup();
        InstanceSummary {
            kind: format!(
                "p({}.{}.{}.{}.{}.{}.{})",
                d.members, d.defences, d.roles, d.days, d.hours, d.rooms, d.subjects
            ),
            d: d.duration,
            weight_counts,
            fixed_roles,
            max_committees: caps,
            member_unavailability: member_zero as f64 / member_slots as f64,
            room_unavailability: room_zero as f64 / room_slots as f64,
            compact_profiles: profile_counts(inst.members.iter().map(|m| &m.compact_weights)),
            roomchange_profiles: profile_counts(inst.members.iter().map(|m| &m.roomchange_penalties)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub schema_version: u32,
    pub instance_digest: String,
    pub solver: String,
    pub g: GRecord,
    /// Canonical scale.
    pub ideal: [i64; N_OBJECTIVES],
    /// Canonical scale.
    pub nadir: [i64; N_OBJECTIVES],
    pub perturbation_exponent: u32,
    pub payoff: Vec<PayoffRecord>,
    pub solutions: Vec<SolutionRecord>,
    /// Optimal solutions dominated in all seven objectives by another one.
    pub filtered: Vec<SolutionRecord>,
    /// Incumbents of time-limited solves.
    pub incumbents: Vec<SolutionRecord>,
    pub counters: Counters,
    pub wall_times: StageTimes,
    pub config: RunConfigFile,
    pub instance_summary: InstanceSummary,
    pub iterations: Vec<IterationRecord>,
}

impl ResultFile {
    pub fn new(inst: &Instance, digest: String, solver: &str, cfg: &RunConfig, run: &FullRun) -> Self {
        let recs = |v: &[Solution]| v.iter().map(|s| SolutionRecord::new(inst, s)).collect();
        ResultFile {
            schema_version: SCHEMA_VERSION,
            instance_digest: digest,
            solver: solver.into(),
            g: GRecord {
                value: run.g.g,
                optimal: run.g.optimal,
            },
            ideal: run.points.ideal,
            nadir: run.points.nadir,
            perturbation_exponent: run.points.exponent,
            payoff: run
                .points
                .payoff
                .iter()
                .zip(ObjectiveId::ALL)
                .map(|(r, id)| PayoffRecord {
                    objective: id.short_name().into(),
                    raw: r.objectives.0,
                    optimal: r.optimal,
                    wall_secs: r.wall_time.as_secs_f64(),
                })
                .collect(),
            solutions: recs(&run.log.solutions),
            filtered: recs(&run.log.filtered),
            incumbents: recs(&run.log.incumbents),
            counters: run.log.counters,
            wall_times: run.times,
            config: RunConfigFile::from_config(cfg),
            instance_summary: InstanceSummary::new(inst),
            iterations: run.log.iterations.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationRecord {
    pub rows: usize,
    pub days: usize,
    pub hours: usize,
    pub seed: u64,
}

/// Input of `analyze`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainAnalysisFile {
    pub self_probs: Vec<f64>,
    pub duration: usize,
    #[serde(default = "default_warmup")]
    pub warmup: usize,
    #[serde(default)]
    pub simulate: Option<SimulationRecord>,
}
