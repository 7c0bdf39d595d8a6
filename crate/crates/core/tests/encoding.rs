//! Round trip between schedules and MILP points on small random instances:
//! a schedule passes the direct feasibility check exactly when its encoding
//! satisfies every model row, and the objective expressions evaluated at the
//! encoding equal the directly computed objectives.

use std::collections::BTreeMap;

use defsched_core::generate::{generate_small, SmallShape};
use defsched_core::model::{
    add_objective_linearizations, build_base_model, canonical_expression, decode_schedule, encode_schedule, set_g,
    Encoding,
};
use defsched_core::milp::{AbstractMilp, VarId};
use defsched_core::model::VarIndex;
use defsched_core::{check_feasibility, evaluate_objectives, Assignment, Instance, ObjectiveId, Schedule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random committee and slot for `defence`. With `plausible` the members
/// are eligible and the start fits in the day; otherwise anything goes.
fn random_option(inst: &Instance, defence: usize, plausible: bool, rng: &mut ChaCha8Rng) -> Vec<Assignment> {
    let d = inst.dims;
    let day = rng.random_range(0..d.days);
    let hour = if plausible {
        rng.random_range(0..=d.hours - d.duration)
    } else {
        rng.random_range(0..d.hours)
    };
    let room = rng.random_range(0..d.rooms);
    (0..d.roles)
        .map(|role| {
            let elig: Vec<usize> = (0..d.members).filter(|&i| inst.defences[defence].eligibility[role][i]).collect();
            let member = if plausible && !elig.is_empty() {
                elig[rng.random_range(0..elig.len())]
            } else {
                rng.random_range(0..d.members)
            };
            Assignment { member, defence, role, day, hour, room }
        })
        .collect()
}

/// Greedily adds random plausible options that keep the schedule feasible.
fn greedy_feasible(inst: &Instance, rng: &mut ChaCha8Rng) -> Schedule {
    let mut sched = Schedule::new(vec![], 0);
    for j in 0..inst.dims.defences {
        for _ in 0..30 {
            let mut trial = sched.assignments.clone();
            trial.extend(random_option(inst, j, true, rng));
            let cand = Schedule::new(trial, sched.g + 1);
            if check_feasibility(inst, &cand).is_empty() {
                sched = cand;
                break;
            }
        }
    }
    sched
}

fn noisy(inst: &Instance, rng: &mut ChaCha8Rng) -> Schedule {
    let mut assignments = Vec::new();
    let mut g = 0;
    for j in 0..inst.dims.defences {
        if rng.random_bool(0.3) {
            continue;
        }
        g += 1;
        let mut opt = random_option(inst, j, rng.random_bool(0.7), rng);
        if rng.random_bool(0.1) {
            opt.pop();
        }
        assignments.extend(opt);
    }
    if rng.random_bool(0.1) {
        g = rng.random_range(0..=inst.dims.defences);
    }
    Schedule::new(assignments, g)
}

fn check_round_trip(inst: &Instance, sched: &Schedule, encoding: Encoding) -> bool {
    let (mut m, mut ix) = build_base_model(inst, encoding);
    add_objective_linearizations(&mut m, &mut ix, inst);
    set_g(&mut m, &mut ix, sched.g.min(inst.dims.defences), inst.dims.defences).unwrap();
    let feasible = check_feasibility(inst, sched).is_empty() && sched.g <= inst.dims.defences;
    let point = encode_schedule(&m, &ix, inst, sched);
    let model_ok = match &point {
        Some(p) => m.violations(p).is_empty(),
        None => false,
    };
    assert_eq!(
        feasible,
        model_ok,
        "{encoding:?}: direct check {:?} vs model violations {:?}\n{sched:?}",
        check_feasibility(inst, sched),
        point.as_ref().map(|p| m
            .violations(p)
            .into_iter()
            .map(|r| m.constraints.get(r).map(|c| c.family))
            .collect::<Vec<_>>())
    );
    if feasible {
        let p = point.unwrap();
        let z = evaluate_objectives(inst, sched).unwrap();
        for id in ObjectiveId::ALL {
            let e = canonical_expression(&ix, inst, id).unwrap();
            assert_eq!(e.eval_int(&p.iter().map(|v| *v as i64).collect::<Vec<_>>()), z.canonical()[id.index()], "{id}");
        }
        assert_eq!(decode_schedule(&ix, &p, sched.g), Schedule::new(sched.assignments.clone(), sched.g));
        assert_aux_unique(&m, &ix, &p);
    }
    feasible
}

/// With the decision variables fixed, every auxiliary variable is forced:
/// changing one integer auxiliary, or moving a selection to another level,
/// violates some row.
fn assert_aux_unique(m: &AbstractMilp, ix: &VarIndex, p: &[f64]) {
    let scalars = ix.sbar.values().chain(ix.shat.values()).chain(ix.ybar.values()).chain(ix.y.values());
    for v in scalars {
        let var = &m.vars[v.0];
        for alt in var.lower as i64..=var.upper as i64 {
            if alt as f64 == p[v.0] {
                continue;
            }
            let mut q = p.to_vec();
            q[v.0] = alt as f64;
            assert!(!m.violations(&q).is_empty(), "{} can be {alt}", var.key);
        }
    }
    let mut groups: BTreeMap<Vec<usize>, Vec<VarId>> = BTreeMap::new();
    for (&(j, q, _), &v) in &ix.s {
        groups.entry(vec![0, j, q]).or_default().push(v);
    }
    for (&(i, _), &v) in &ix.w {
        groups.entry(vec![1, i]).or_default().push(v);
    }
    for (&(i, _, k), &v) in &ix.yhat {
        groups.entry(vec![2, i, k]).or_default().push(v);
    }
    for (&(i, _), &v) in &ix.wbar {
        groups.entry(vec![3, i]).or_default().push(v);
    }
    for vars in groups.values() {
        for &alt in vars {
            if p[alt.0] == 1.0 {
                continue;
            }
            let mut q = p.to_vec();
            for &v in vars {
                q[v.0] = 0.0;
            }
            q[alt.0] = 1.0;
            assert!(!m.violations(&q).is_empty(), "{} can be selected", m.vars[alt.0].key);
        }
    }
}

#[test]
fn encoding_round_trip_on_random_schedules() {
    let mut feasible_nonempty = 0;
    for seed in 0..150u64 {
        let inst = generate_small(seed, SmallShape::default());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcdef);
        for _ in 0..25 {
            let s = greedy_feasible(&inst, &mut rng);
            if check_round_trip(&inst, &s, Encoding::Sparse) && s.g > 0 {
                feasible_nonempty += 1;
            }
            check_round_trip(&inst, &s, Encoding::Dense);
            let s = noisy(&inst, &mut rng);
            check_round_trip(&inst, &s, Encoding::Sparse);
            check_round_trip(&inst, &s, Encoding::Dense);
        }
    }
    assert!(feasible_nonempty > 1000, "too few feasible samples: {feasible_nonempty}");
}

#[test]
fn room_change_and_compactness_are_exercised() {
    let shape = SmallShape {
        max_members: 3,
        max_defences: 3,
        max_roles: 1,
        max_days: 1,
        max_hours: 6,
        max_rooms: 2,
        ..SmallShape::default()
    };
    let (mut compact, mut change) = (false, false);
    for seed in 0..400u64 {
        let inst = generate_small(seed, shape);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let s = greedy_feasible(&inst, &mut rng);
            if check_round_trip(&inst, &s, Encoding::Sparse) {
                let z = evaluate_objectives(&inst, &s).unwrap();
                let w: i64 = (0..inst.dims.members)
                    .map(|i| {
                        let n = s.assignments_of(i).count() as i64;
                        inst.members[i].weight as i64 * inst.members[i].compact_max() as i64 * (n - 1).max(0)
                    })
                    .sum();
                compact |= z.get(ObjectiveId::Compactness) < w;
                change |= z.get(ObjectiveId::RoomChange) > 0;
            }
        }
    }
    assert!(compact && change);
}
