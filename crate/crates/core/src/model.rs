//! MILP encoding of an [`Instance`].
//!
//! Variables that the data forces to zero are never created: an `x` exists
//! only for an eligible member available over the whole defence window at a
//! slot where the room is available over the window and every role has at
//! least one candidate. [`Encoding::Dense`] instead creates every variable
//! that fits in the day and adds explicit availability constraints; it only
//! exists to cross-check the sparse model.
//!
//! Variable glossary (all indices 0-based):
//!
//! - `x[i,j,t,k,l,p]`  member i takes role t of defence j at (k, l, p)
//! - `y[j,k,l,p]`      defence j starts at hour l of day k in room p
//! - `ybar[i,k,l,p]`   member i sits on some committee starting at (k, l, p)
//! - `s[j,q,n]`        n committee members of defence j know subject q
//! - `sbar[i,k,l]`     compactness credit of member i for the defence at (k, l)
//! - `w[i,n]`          member i sits on n committees
//! - `yhat[i,n,k]`     member i sits on n committees on day k
//! - `wbar[i,n]`       member i attends n days
//! - `shat[i,k,l,p]`   room change penalty of member i for the defence at (k, l, p)

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::instance::Instance;
use crate::milp::{AbstractMilp, Family, LinExpr, Relation, VarId, VarKind};
use crate::objectives::{ObjectiveId, N_OBJECTIVES};
use crate::schedule::{Assignment, Schedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKey {
    X { i: usize, j: usize, t: usize, k: usize, l: usize, p: usize },
    Y { j: usize, k: usize, l: usize, p: usize },
    YBar { i: usize, k: usize, l: usize, p: usize },
    S { j: usize, q: usize, n: usize },
    SBar { i: usize, k: usize, l: usize },
    W { i: usize, n: usize },
    YHat { i: usize, n: usize, k: usize },
    WBar { i: usize, n: usize },
    SHat { i: usize, k: usize, l: usize, p: usize },
    /// Surplus of an epsilon constraint on objective index `0..7`.
    Surplus(usize),
    Dummy,
}

impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarKey::X { i, j, t, k, l, p } => write!(f, "x_{i}_{j}_{t}_{k}_{l}_{p}"),
            VarKey::Y { j, k, l, p } => write!(f, "y_{j}_{k}_{l}_{p}"),
            VarKey::YBar { i, k, l, p } => write!(f, "ybar_{i}_{k}_{l}_{p}"),
            VarKey::S { j, q, n } => write!(f, "s_{j}_{q}_{n}"),
            VarKey::SBar { i, k, l } => write!(f, "sbar_{i}_{k}_{l}"),
            VarKey::W { i, n } => write!(f, "w_{i}_{n}"),
            VarKey::YHat { i, n, k } => write!(f, "yhat_{i}_{n}_{k}"),
            VarKey::WBar { i, n } => write!(f, "wbar_{i}_{n}"),
            VarKey::SHat { i, k, l, p } => write!(f, "shat_{i}_{k}_{l}_{p}"),
            VarKey::Surplus(o) => write!(f, "surplus_{o}"),
            VarKey::Dummy => f.write_str("dummy"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Encoding {
    #[default]
    Sparse,
    Dense,
}

/// Materialized variables by index tuple.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VarIndex {
    pub x: BTreeMap<(usize, usize, usize, usize, usize, usize), VarId>,
    pub y: BTreeMap<(usize, usize, usize, usize), VarId>,
    pub ybar: BTreeMap<(usize, usize, usize, usize), VarId>,
    pub s: BTreeMap<(usize, usize, usize), VarId>,
    pub sbar: BTreeMap<(usize, usize, usize), VarId>,
    pub w: BTreeMap<(usize, usize), VarId>,
    pub yhat: BTreeMap<(usize, usize, usize), VarId>,
    pub wbar: BTreeMap<(usize, usize), VarId>,
    pub shat: BTreeMap<(usize, usize, usize, usize), VarId>,
    /// Row of the `Σ y = g` constraint, once set.
    pub g_row: Option<usize>,
    pub linearized: bool,
    pub encoding: Encoding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    GOutOfRange { g: usize, defences: usize },
    NotLinearized,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::GOutOfRange { g, defences } => {
                write!(f, "g = {g} outside 0..={defences}")
            }
            ModelError::NotLinearized => f.write_str("objective linearizations have not been added"),
        }
    }
}

fn window_ok(inst: &Instance, enc: Encoding, f: impl Fn(usize, usize, usize) -> bool, a: usize, k: usize, l: usize) -> bool {
    match enc {
        Encoding::Sparse => f(a, k, l),
        Encoding::Dense => inst.fits_in_day(l),
    }
}

/// Builds the feasibility model: committee completeness, one slot per
/// defence, one role per member and defence, committee caps, member and
/// room availability and overlap. The defence count equality is added by
/// [`set_g`].
pub fn build_base_model(inst: &Instance, encoding: Encoding) -> (AbstractMilp, VarIndex) {
    let d = inst.dims;
    let dur = d.duration;
    let mut m = AbstractMilp::default();
    let mut ix = VarIndex {
        encoding,
        ..VarIndex::default()
    };
    let member_ok = |i: usize, k: usize, l: usize| {
        window_ok(inst, encoding, |i, k, l| inst.member_window_available(i, k, l), i, k, l)
    };
    let room_ok = |p: usize, k: usize, l: usize| {
        window_ok(inst, encoding, |p, k, l| inst.room_window_available(p, k, l), p, k, l)
    };

    for (j, def) in inst.defences.iter().enumerate() {
        for k in 0..d.days {
            for l in 0..d.hours {
                if !inst.fits_in_day(l) {
                    continue;
                }
                let candidates: Vec<Vec<usize>> = (0..d.roles)
                    .map(|t| (0..d.members).filter(|&i| def.eligibility[t][i] && member_ok(i, k, l)).collect())
                    .collect();
                if candidates.iter().any(|c| c.is_empty()) {
                    continue;
                }
                for p in 0..d.rooms {
                    if !room_ok(p, k, l) {
                        continue;
                    }
                    let y = m.add_var(VarKey::Y { j, k, l, p }, VarKind::Binary, 0.0, 1.0);
                    ix.y.insert((j, k, l, p), y);
                    for (t, cands) in candidates.iter().enumerate() {
                        let mut row = vec![(y, -1)];
                        for &i in cands {
                            let x = m.add_var(VarKey::X { i, j, t, k, l, p }, VarKind::Binary, 0.0, 1.0);
                            ix.x.insert((i, j, t, k, l, p), x);
                            row.push((x, 1));
                        }
                        m.add_constraint(Family::Committee, row, Relation::Eq, 0);
                    }
                }
            }
        }
    }

    // One slot per defence.
    let mut per_defence: BTreeMap<usize, Vec<(VarId, i64)>> = BTreeMap::new();
    for (&(j, ..), &y) in &ix.y {
        per_defence.entry(j).or_default().push((y, 1));
    }
    for (_, row) in per_defence {
        if row.len() > 1 {
            m.add_constraint(Family::SingleSlot, row, Relation::Le, 1);
        }
    }

    // At most one role per member and defence; committee caps.
    let mut per_ij: BTreeMap<(usize, usize), Vec<(VarId, i64)>> = BTreeMap::new();
    let mut per_i: BTreeMap<usize, Vec<(VarId, i64)>> = BTreeMap::new();
    let mut per_ik: BTreeMap<(usize, usize), Vec<(usize, VarId)>> = BTreeMap::new();
    for (&(i, j, _, k, l, _), &x) in &ix.x {
        per_ij.entry((i, j)).or_default().push((x, 1));
        per_i.entry(i).or_default().push((x, 1));
        per_ik.entry((i, k)).or_default().push((l, x));
    }
    for (_, row) in per_ij {
        if row.len() > 1 {
            m.add_constraint(Family::OneRole, row, Relation::Le, 1);
        }
    }
    for (i, row) in per_i {
        let cap = inst.members[i].max_committees as i64;
        if row.len() as i64 > cap {
            m.add_constraint(Family::CommitteeCap, row, Relation::Le, cap);
        }
    }

    // Member overlap: starts within one defence length of each other.
    for starts in per_ik.values() {
        add_window_rows(&mut m, Family::MemberOverlap, starts, dur, d.hours);
    }
    // Room overlap.
    let mut per_kp: BTreeMap<(usize, usize), Vec<(usize, VarId)>> = BTreeMap::new();
    for (&(_, k, l, p), &y) in &ix.y {
        per_kp.entry((k, p)).or_default().push((l, y));
    }
    for starts in per_kp.values() {
        add_window_rows(&mut m, Family::RoomOverlap, starts, dur, d.hours);
    }

    if encoding == Encoding::Dense {
        // Every unavailable slot blocks all defences covering it.
        for (&(i, k), starts) in &per_ik {
            for l in 0..d.hours {
                if inst.members[i].is_available(k, l) {
                    continue;
                }
                let row: Vec<(VarId, i64)> = starts
                    .iter()
                    .filter(|(s, _)| *s <= l && l < s + dur)
                    .map(|&(_, x)| (x, 1))
                    .collect();
                if !row.is_empty() {
                    m.add_constraint(Family::MemberAvailability, row, Relation::Le, 0);
                }
            }
        }
        for (&(k, p), starts) in &per_kp {
            for l in 0..d.hours {
                if inst.room_available(k, l, p) {
                    continue;
                }
                let row: Vec<(VarId, i64)> = starts
                    .iter()
                    .filter(|(s, _)| *s <= l && l < s + dur)
                    .map(|&(_, y)| (y, 1))
                    .collect();
                if !row.is_empty() {
                    m.add_constraint(Family::RoomAvailability, row, Relation::Le, 0);
                }
            }
        }
    }
    (m, ix)
}

/// For every window `[w, w + dur)` adds `Σ vars starting in the window ≤ 1`
/// when it has at least two terms and is not contained in the previous one.
fn add_window_rows(m: &mut AbstractMilp, family: Family, starts: &[(usize, VarId)], dur: usize, hours: usize) {
    let mut last: Option<Vec<VarId>> = None;
    for w in 0..hours {
        let vars: Vec<VarId> = starts
            .iter()
            .filter(|(s, _)| *s >= w && *s < w + dur)
            .map(|&(_, v)| v)
            .collect();
        if vars.len() < 2 {
            continue;
        }
        if let Some(prev) = &last {
            if vars.iter().all(|v| prev.contains(v)) {
                continue;
            }
        }
        m.add_constraint(family, vars.iter().map(|&v| (v, 1)).collect(), Relation::Le, 1);
        last = Some(vars);
    }
}

/// Adds or replaces `Σ y = g`.
pub fn set_g(m: &mut AbstractMilp, ix: &mut VarIndex, g: usize, defences: usize) -> Result<(), ModelError> {
    if g > defences {
        return Err(ModelError::GOutOfRange { g, defences });
    }
    let terms: Vec<(VarId, i64)> = ix.y.values().map(|&y| (y, 1)).collect();
    match ix.g_row {
        Some(r) => {
            m.constraints[r].terms = terms;
            m.constraints[r].rhs = g as i64;
        }
        None => ix.g_row = Some(m.add_constraint(Family::DefenceCount, terms, Relation::Eq, g as i64)),
    }
    Ok(())
}

/// Adds the auxiliary variables and constraints needed to express the
/// objectives linearly.
pub fn add_objective_linearizations(m: &mut AbstractMilp, ix: &mut VarIndex, inst: &Instance) {
    let d = inst.dims;
    let dur = d.duration;
    ix.linearized = true;

    // Subject coverage: count selection per (defence, subject).
    let mut experts: BTreeMap<(usize, usize), (Vec<(VarId, i64)>, BTreeSet<usize>)> = BTreeMap::new();
    for (&(i, j, ..), &x) in &ix.x {
        for q in 0..d.subjects {
            if inst.defences[j].subjects[q] && inst.members[i].subjects[q] {
                let e = experts.entry((j, q)).or_default();
                e.0.push((x, 1));
                e.1.insert(i);
            }
        }
    }
    for ((j, q), (count, who)) in experts {
        let max = who.len().min(d.roles);
        let mut balance = count;
        let mut select = Vec::new();
        for n in 0..=max {
            let s = m.add_var(VarKey::S { j, q, n }, VarKind::Binary, 0.0, 1.0);
            ix.s.insert((j, q, n), s);
            if n > 0 {
                balance.push((s, -(n as i64)));
            }
            select.push((s, 1));
        }
        m.add_constraint(Family::CoverageCount, balance, Relation::Eq, 0);
        m.add_constraint(Family::CoverageSelect, select, Relation::Eq, 1);
    }

    // ybar: member i busy in a defence starting at (k, l, p).
    let mut busy: BTreeMap<(usize, usize, usize, usize), Vec<(VarId, i64)>> = BTreeMap::new();
    for (&(i, _, _, k, l, p), &x) in &ix.x {
        busy.entry((i, k, l, p)).or_default().push((x, 1));
    }
    for (&(i, k, l, p), xs) in &busy {
        let yb = m.add_var(VarKey::YBar { i, k, l, p }, VarKind::Binary, 0.0, 1.0);
        ix.ybar.insert((i, k, l, p), yb);
        let mut row: Vec<(VarId, i64)> = xs.iter().map(|&(x, _)| (x, -1)).collect();
        row.push((yb, 1));
        m.add_constraint(Family::MemberSlot, row, Relation::Eq, 0);
    }
    let mut ybar_at: BTreeMap<(usize, usize, usize), Vec<(usize, VarId)>> = BTreeMap::new();
    for (&(i, k, l, p), &v) in &ix.ybar {
        ybar_at.entry((i, k, l)).or_default().push((p, v));
    }

    // Compactness credit for the later of two close defences.
    for (&(i, k, l), active) in &ybar_at {
        let member = &inst.members[i];
        let nv = member.compact_max() as i64;
        if nv == 0 {
            continue;
        }
        let mut prior = Vec::new();
        for (gap, &v) in member.compact_weights.iter().enumerate() {
            if v == 0 || l < dur + gap {
                continue;
            }
            if let Some(prev) = ybar_at.get(&(i, k, l - dur - gap)) {
                prior.extend(prev.iter().map(|&(_, yb)| (yb, v as i64)));
            }
        }
        if prior.is_empty() {
            continue;
        }
        let sb = m.add_var(VarKey::SBar { i, k, l }, VarKind::Integer, 0.0, nv as f64);
        ix.sbar.insert((i, k, l), sb);
        let mut row = vec![(sb, 1)];
        row.extend(active.iter().map(|&(_, yb)| (yb, -nv)));
        m.add_constraint(Family::CompactActive, row, Relation::Le, 0);
        let mut row = vec![(sb, 1)];
        row.extend(prior.iter().map(|&(yb, v)| (yb, -v)));
        m.add_constraint(Family::CompactPrior, row, Relation::Le, 0);
        // sbar ≥ prior − n_v (1 − Σ_p ybar)
        let mut row = vec![(sb, 1)];
        row.extend(prior.iter().map(|&(yb, v)| (yb, -v)));
        row.extend(active.iter().map(|&(_, yb)| (yb, -nv)));
        m.add_constraint(Family::CompactLower, row, Relation::Ge, -nv);
    }

    // Room change penalty attached to the later defence.
    for (&(i, k, l), active) in &ybar_at {
        let member = &inst.members[i];
        let nh = member.roomchange_max() as i64;
        if nh == 0 {
            continue;
        }
        for &(p, yb) in active {
            let mut prior = Vec::new();
            for (gap, &h) in member.roomchange_penalties.iter().enumerate() {
                if h == 0 || l < dur + gap {
                    continue;
                }
                if let Some(prev) = ybar_at.get(&(i, k, l - dur - gap)) {
                    prior.extend(prev.iter().filter(|(pp, _)| *pp != p).map(|&(_, v)| (v, h as i64)));
                }
            }
            if prior.is_empty() {
                continue;
            }
            let sh = m.add_var(VarKey::SHat { i, k, l, p }, VarKind::Integer, 0.0, nh as f64);
            ix.shat.insert((i, k, l, p), sh);
            m.add_constraint(Family::RoomChangeActive, vec![(sh, 1), (yb, -nh)], Relation::Le, 0);
            let mut row = vec![(sh, 1)];
            row.extend(prior.iter().map(|&(v, h)| (v, -h)));
            m.add_constraint(Family::RoomChangePrior, row, Relation::Le, 0);
            // shat ≥ prior − n_h (1 − ybar)
            let mut row = vec![(sh, 1), (yb, -nh)];
            row.extend(prior.iter().map(|&(v, h)| (v, -h)));
            m.add_constraint(Family::RoomChangeLower, row, Relation::Ge, -nh);
        }
    }

    // Workload selection.
    let mut per_i: BTreeMap<usize, (Vec<(VarId, i64)>, BTreeSet<usize>)> = BTreeMap::new();
    let mut per_ik: BTreeMap<(usize, usize), (Vec<(VarId, i64)>, BTreeSet<usize>, BTreeSet<usize>)> = BTreeMap::new();
    for (&(i, j, _, k, l, _), &x) in &ix.x {
        let e = per_i.entry(i).or_default();
        e.0.push((x, 1));
        e.1.insert(j);
        let e = per_ik.entry((i, k)).or_default();
        e.0.push((x, 1));
        e.1.insert(j);
        e.2.insert(l);
    }
    for (i, (xs, defs)) in per_i {
        let max = defs.len().min(inst.members[i].max_committees as usize);
        let mut balance = xs.iter().map(|&(x, _)| (x, -1)).collect::<Vec<_>>();
        let mut select = Vec::new();
        for n in 0..=max {
            let w = m.add_var(VarKey::W { i, n }, VarKind::Binary, 0.0, 1.0);
            ix.w.insert((i, n), w);
            if n > 0 {
                balance.push((w, n as i64));
            }
            select.push((w, 1));
        }
        m.add_constraint(Family::Workload, balance, Relation::Eq, 0);
        m.add_constraint(Family::WorkloadSelect, select, Relation::Eq, 1);
    }

    // Committee days.
    let mut days_of: BTreeMap<usize, Vec<Vec<(VarId, i64)>>> = BTreeMap::new();
    for ((i, k), (xs, defs, starts)) in per_ik {
        let fit = max_disjoint_starts(&starts, dur);
        let max = defs.len().min(fit).min(inst.members[i].max_committees as usize);
        let mut balance = xs.iter().map(|&(x, _)| (x, -1)).collect::<Vec<_>>();
        let mut select = Vec::new();
        let mut busy_day = Vec::new();
        for n in 0..=max {
            let v = m.add_var(VarKey::YHat { i, n, k }, VarKind::Binary, 0.0, 1.0);
            ix.yhat.insert((i, n, k), v);
            if n > 0 {
                balance.push((v, n as i64));
                busy_day.push((v, 1));
            }
            select.push((v, 1));
        }
        m.add_constraint(Family::DayLoad, balance, Relation::Eq, 0);
        m.add_constraint(Family::DayLoadSelect, select, Relation::Eq, 1);
        days_of.entry(i).or_default().push(busy_day);
    }
    for (i, days) in days_of {
        let max = days.len();
        let mut balance: Vec<(VarId, i64)> = days.into_iter().flatten().map(|(v, _)| (v, -1)).collect();
        let mut select = Vec::new();
        for n in 0..=max {
            let v = m.add_var(VarKey::WBar { i, n }, VarKind::Binary, 0.0, 1.0);
            ix.wbar.insert((i, n), v);
            if n > 0 {
                balance.push((v, n as i64));
            }
            select.push((v, 1));
        }
        m.add_constraint(Family::Days, balance, Relation::Eq, 0);
        m.add_constraint(Family::DaysSelect, select, Relation::Eq, 1);
    }
}

/// Largest number of pairwise non-overlapping starts (greedy on sorted
/// starts).
fn max_disjoint_starts(starts: &BTreeSet<usize>, dur: usize) -> usize {
    let mut count = 0;
    let mut next_free = 0;
    for &s in starts {
        if s >= next_free {
            count += 1;
            next_free = s + dur;
        }
    }
    count
}

/// Objective `which` as a linear expression in its own sense.
pub fn objective_expression(ix: &VarIndex, inst: &Instance, which: ObjectiveId) -> Result<LinExpr, ModelError> {
    let mut e = LinExpr::new();
    let weight = |i: usize| inst.members[i].weight as i64;
    match which {
        ObjectiveId::Expertise => {
            for (&(i, j, ..), &x) in &ix.x {
                e.add(x, inst.subject_overlap(i, j) as i64);
            }
            return Ok(e);
        }
        ObjectiveId::TimePreference => {
            for (&(i, _, _, k, l, _), &x) in &ix.x {
                let level = inst.members[i].availability[k][l] as i64;
                e.add(x, weight(i) * (level - 1));
            }
            return Ok(e);
        }
        _ => {}
    }
    if !ix.linearized {
        return Err(ModelError::NotLinearized);
    }
    match which {
        ObjectiveId::Workload => {
            for (&(i, n), &w) in &ix.w {
                e.add(w, weight(i) * (n * n) as i64);
            }
        }
        ObjectiveId::Coverage => {
            for (&(_, _, n), &s) in &ix.s {
                if n >= 1 {
                    e.add(s, 1);
                }
            }
        }
        ObjectiveId::Compactness => {
            for (&(i, n), &w) in &ix.w {
                if n >= 1 {
                    let nv = inst.members[i].compact_max() as i64;
                    e.add(w, weight(i) * nv * (n as i64 - 1));
                }
            }
            for (&(i, ..), &sb) in &ix.sbar {
                e.add(sb, -weight(i));
            }
        }
        ObjectiveId::Days => {
            for (&(i, n), &w) in &ix.wbar {
                e.add(w, weight(i) * (n * n) as i64);
            }
        }
        ObjectiveId::RoomChange => {
            for (&(i, ..), &sh) in &ix.shat {
                e.add(sh, weight(i));
            }
        }
        ObjectiveId::Expertise | ObjectiveId::TimePreference => unreachable!(),
    }
    Ok(e)
}

/// Objective in the all-maximise form.
pub fn canonical_expression(ix: &VarIndex, inst: &Instance, which: ObjectiveId) -> Result<LinExpr, ModelError> {
    let e = objective_expression(ix, inst, which)?;
    Ok(if which.canonical_sign() < 0 { e.negated() } else { e })
}

pub fn all_canonical_expressions(ix: &VarIndex, inst: &Instance) -> Result<[LinExpr; N_OBJECTIVES], ModelError> {
    let mut out: [LinExpr; N_OBJECTIVES] = Default::default();
    for id in ObjectiveId::ALL {
        out[id.index()] = canonical_expression(ix, inst, id)?;
    }
    Ok(out)
}

/// `Σ y`, to be maximised in stage 1.
pub fn stage1_objective(ix: &VarIndex) -> LinExpr {
    let mut e = LinExpr::new();
    for &y in ix.y.values() {
        e.add(y, 1);
    }
    e
}

/// Reads the assignments off a (rounded) solution vector.
pub fn decode_schedule(ix: &VarIndex, values: &[f64], g: usize) -> Schedule {
    let assignments = ix
        .x
        .iter()
        .filter(|(_, x)| values[x.0] > 0.5)
        .map(|(&(member, defence, role, day, hour, room), _)| Assignment {
            member,
            defence,
            role,
            day,
            hour,
            room,
        })
        .collect();
    Schedule::new(assignments, g)
}

/// Builds the solution vector that corresponds to a schedule, filling every
/// auxiliary variable with the value its defining constraints force. Returns
/// `None` when the schedule uses a variable that was not materialized or
/// needs an auxiliary value outside its domain (such schedules are
/// infeasible for the model).
pub fn encode_schedule(m: &AbstractMilp, ix: &VarIndex, inst: &Instance, sched: &Schedule) -> Option<Vec<f64>> {
    let dur = inst.dims.duration;
    let mut v = vec![0.0; m.vars.len()];
    let mut x_on: BTreeSet<(usize, usize, usize, usize, usize, usize)> = BTreeSet::new();
    for a in &sched.assignments {
        let key = (a.member, a.defence, a.role, a.day, a.hour, a.room);
        let id = ix.x.get(&key)?;
        v[id.0] = 1.0;
        x_on.insert(key);
    }
    let slots: BTreeSet<(usize, usize, usize, usize)> = x_on.iter().map(|&(_, j, _, k, l, p)| (j, k, l, p)).collect();
    for s in &slots {
        v[ix.y.get(s)?.0] = 1.0;
    }
    if !ix.linearized {
        return Some(v);
    }

    let mut cover: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut load: BTreeMap<usize, usize> = BTreeMap::new();
    let mut day_load: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut busy: BTreeMap<(usize, usize, usize, usize), i64> = BTreeMap::new();
    for &(i, j, _, k, l, p) in &x_on {
        for q in 0..inst.dims.subjects {
            if inst.defences[j].subjects[q] && inst.members[i].subjects[q] {
                *cover.entry((j, q)).or_default() += 1;
            }
        }
        *load.entry(i).or_default() += 1;
        *day_load.entry((i, k)).or_default() += 1;
        *busy.entry((i, k, l, p)).or_default() += 1;
    }
    let set = |v: &mut Vec<f64>, id: Option<&VarId>| -> Option<()> {
        v[id?.0] = 1.0;
        Some(())
    };
    for &(j, q, _) in ix.s.keys() {
        let n = cover.get(&(j, q)).copied().unwrap_or(0);
        set(&mut v, ix.s.get(&(j, q, n)))?;
    }
    for (&(i, k, l, p), &yb) in &ix.ybar {
        v[yb.0] = busy.get(&(i, k, l, p)).copied().unwrap_or(0) as f64;
    }
    let busy_at = |i: usize, k: usize, l: usize, p: Option<usize>| -> i64 {
        busy.iter()
            .filter(|(&(bi, bk, bl, bp), _)| bi == i && bk == k && bl == l && p.is_none_or(|pp| pp != bp))
            .map(|(_, &c)| c)
            .sum()
    };
    for (&(i, k, l), &sb) in &ix.sbar {
        let member = &inst.members[i];
        let active = busy_at(i, k, l, None);
        let prior: i64 = member
            .compact_weights
            .iter()
            .enumerate()
            .filter(|(gap, _)| l >= dur + gap)
            .map(|(gap, &w)| w as i64 * busy_at(i, k, l - dur - gap, None))
            .sum();
        v[sb.0] = if active > 0 { prior.min(member.compact_max() as i64) } else { 0 } as f64;
    }
    for (&(i, k, l, p), &sh) in &ix.shat {
        let member = &inst.members[i];
        let active = busy.get(&(i, k, l, p)).copied().unwrap_or(0);
        let prior: i64 = member
            .roomchange_penalties
            .iter()
            .enumerate()
            .filter(|(gap, _)| l >= dur + gap)
            .map(|(gap, &h)| h as i64 * busy_at(i, k, l - dur - gap, Some(p)))
            .sum();
        v[sh.0] = if active > 0 { prior.min(member.roomchange_max() as i64) } else { 0 } as f64;
    }
    let members_with_w: BTreeSet<usize> = ix.w.keys().map(|&(i, _)| i).collect();
    for i in members_with_w {
        let n = load.get(&i).copied().unwrap_or(0);
        set(&mut v, ix.w.get(&(i, n)))?;
    }
    let member_days: BTreeSet<(usize, usize)> = ix.yhat.keys().map(|&(i, _, k)| (i, k)).collect();
    let mut days: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, k) in member_days {
        let n = day_load.get(&(i, k)).copied().unwrap_or(0);
        set(&mut v, ix.yhat.get(&(i, n, k)))?;
        if n > 0 {
            *days.entry(i).or_default() += 1;
        }
    }
    let members_with_wbar: BTreeSet<usize> = ix.wbar.keys().map(|&(i, _)| i).collect();
    for i in members_with_wbar {
        let n = days.get(&i).copied().unwrap_or(0);
        set(&mut v, ix.wbar.get(&(i, n)))?;
    }
    Some(v)
}

/// Variable counts per family, for logging.
pub fn variable_counts(ix: &VarIndex) -> [(&'static str, usize); 9] {
    [
        ("x", ix.x.len()),
        ("y", ix.y.len()),
        ("ybar", ix.ybar.len()),
        ("s", ix.s.len()),
        ("sbar", ix.sbar.len()),
        ("w", ix.w.len()),
        ("yhat", ix.yhat.len()),
        ("wbar", ix.wbar.len()),
        ("shat", ix.shat.len()),
    ]
}
