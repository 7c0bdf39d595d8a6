//! Solver-agnostic mixed-integer linear program.

use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::model::VarKey;
use crate::objectives::Sense;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Integer,
    Continuous,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub key: VarKey,
    pub lower: f64,
    pub upper: f64,
    pub kind: VarKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// Constraint families, used for naming and diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    Committee,
    SingleSlot,
    DefenceCount,
    OneRole,
    CommitteeCap,
    MemberAvailability,
    MemberOverlap,
    RoomAvailability,
    RoomOverlap,
    CoverageCount,
    CoverageSelect,
    MemberSlot,
    CompactActive,
    CompactPrior,
    CompactLower,
    Workload,
    WorkloadSelect,
    DayLoad,
    DayLoadSelect,
    Days,
    DaysSelect,
    RoomChangeActive,
    RoomChangePrior,
    RoomChangeLower,
    Epsilon,
    Surplus,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Committee => "committee",
            Family::SingleSlot => "single_slot",
            Family::DefenceCount => "defence_count",
            Family::OneRole => "one_role",
            Family::CommitteeCap => "cap",
            Family::MemberAvailability => "member_avail",
            Family::MemberOverlap => "member_overlap",
            Family::RoomAvailability => "room_avail",
            Family::RoomOverlap => "room_overlap",
            Family::CoverageCount => "cover_count",
            Family::CoverageSelect => "cover_select",
            Family::MemberSlot => "member_slot",
            Family::CompactActive => "compact_active",
            Family::CompactPrior => "compact_prior",
            Family::CompactLower => "compact_lower",
            Family::Workload => "workload",
            Family::WorkloadSelect => "workload_select",
            Family::DayLoad => "day_load",
            Family::DayLoadSelect => "day_load_select",
            Family::Days => "days",
            Family::DaysSelect => "days_select",
            Family::RoomChangeActive => "roomchange_active",
            Family::RoomChangePrior => "roomchange_prior",
            Family::RoomChangeLower => "roomchange_lower",
            Family::Epsilon => "epsilon",
            Family::Surplus => "surplus",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub family: Family,
    pub terms: Vec<(VarId, i64)>,
    pub relation: Relation,
    pub rhs: i64,
}

/// Integer linear expression `Σ c·x + constant`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinExpr {
    pub terms: Vec<(VarId, i64)>,
    pub constant: i64,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, var: VarId, coef: i64) {
        if coef != 0 {
            self.terms.push((var, coef));
        }
    }

    pub fn negated(&self) -> LinExpr {
        LinExpr {
            terms: self.terms.iter().map(|&(v, c)| (v, -c)).collect(),
            constant: -self.constant,
        }
    }

    pub fn eval_int(&self, point: &[i64]) -> i64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * point[v.0]).sum::<i64>()
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.constant as f64 + self.terms.iter().map(|&(v, c)| c as f64 * point[v.0]).sum::<f64>()
    }

    /// Smallest and largest value over the variable bounds.
    pub fn range(&self, milp: &AbstractMilp) -> (f64, f64) {
        let mut lo = self.constant as f64;
        let mut hi = lo;
        for &(v, c) in &self.terms {
            let var = &milp.vars[v.0];
            let (a, b) = (c as f64 * var.lower, c as f64 * var.upper);
            lo += a.min(b);
            hi += a.max(b);
        }
        (lo, hi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Objective {
    pub terms: Vec<(VarId, f64)>,
    pub constant: f64,
    pub sense: Sense,
}

impl Default for Objective {
    fn default() -> Self {
        Objective {
            terms: Vec::new(),
            constant: 0.0,
            sense: Sense::Maximize,
        }
    }
}

impl Objective {
    pub fn from_expr(expr: &LinExpr, sense: Sense) -> Self {
        Objective {
            terms: expr.terms.iter().map(|&(v, c)| (v, c as f64)).collect(),
            constant: expr.constant as f64,
            sense,
        }
    }

    pub fn add_scaled(&mut self, expr: &LinExpr, scale: f64) {
        self.terms.extend(expr.terms.iter().map(|&(v, c)| (v, c as f64 * scale)));
        self.constant += expr.constant as f64 * scale;
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * point[v.0]).sum::<f64>()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AbstractMilp {
    pub vars: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Objective,
}

impl AbstractMilp {
    pub fn add_var(&mut self, key: VarKey, kind: VarKind, lower: f64, upper: f64) -> VarId {
        let (lower, upper) = match kind {
            VarKind::Binary => (0.0, 1.0),
            _ => (lower, upper),
        };
        self.vars.push(Variable { key, lower, upper, kind });
        VarId(self.vars.len() - 1)
    }

    pub fn add_constraint(&mut self, family: Family, terms: Vec<(VarId, i64)>, relation: Relation, rhs: i64) -> usize {
        self.constraints.push(Constraint {
            family,
            terms,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn num_integer(&self) -> usize {
        self.vars.iter().filter(|v| v.kind != VarKind::Continuous).count()
    }

    /// Rounds integer and binary variables to the nearest integer.
    pub fn round_integers(&self, values: &mut [f64]) {
        for (v, x) in self.vars.iter().zip(values.iter_mut()) {
            if v.kind != VarKind::Continuous {
                *x = libm_round(*x);
            }
        }
    }

    /// Indices of constraints violated by `values` (and variables out of
    /// bounds, reported as `constraints.len() + var index`). Rows over
    /// integer variables only are checked exactly after rounding; rows with
    /// continuous variables use an absolute tolerance of `1e−6`.
    pub fn violations(&self, values: &[f64]) -> Vec<usize> {
        let mut out = Vec::new();
        for (r, c) in self.constraints.iter().enumerate() {
            let all_int = c.terms.iter().all(|(v, _)| self.vars[v.0].kind != VarKind::Continuous);
            let ok = if all_int {
                let lhs: i64 = c.terms.iter().map(|&(v, k)| k * libm_round(values[v.0]) as i64).sum();
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            } else {
                let lhs: f64 = c.terms.iter().map(|&(v, k)| k as f64 * values[v.0]).sum();
                let rhs = c.rhs as f64;
                match c.relation {
                    Relation::Le => lhs <= rhs + 1e-6,
                    Relation::Eq => (lhs - rhs).abs() <= 1e-6,
                    Relation::Ge => lhs >= rhs - 1e-6,
                }
            };
            if !ok {
                out.push(r);
            }
        }
        for (i, v) in self.vars.iter().enumerate() {
            let x = values[i];
            if x < v.lower - 1e-6 || x > v.upper + 1e-6 {
                out.push(self.constraints.len() + i);
            }
        }
        out
    }

    /// Writes the model in the CPLEX LP text format. Integer coefficients are
    /// printed exactly; objective coefficients use the shortest decimal that
    /// round-trips, never scientific notation.
    pub fn write_lp<W: Write>(&self, out: &mut W) -> fmt::Result {
        let sense = match self.objective.sense {
            Sense::Maximize => "Maximize",
            Sense::Minimize => "Minimize",
        };
        writeln!(out, "\\ constant term of the objective: {}", self.objective.constant)?;
        writeln!(out, "{sense}")?;
        write!(out, " obj:")?;
        if self.objective.terms.is_empty() {
            write!(out, " 0 {}", self.vars.first().map(|v| v.key).unwrap_or(VarKey::Dummy))?;
        }
        for &(v, c) in &self.objective.terms {
            let sign = if c < 0.0 { '-' } else { '+' };
            write!(out, " {sign} {} {}", c.abs(), self.vars[v.0].key)?;
        }
        writeln!(out)?;
        writeln!(out, "Subject To")?;
        for (r, c) in self.constraints.iter().enumerate() {
            write!(out, " {}_{r}:", c.family.tag())?;
            if c.terms.is_empty() {
                write!(out, " 0 {}", self.vars.first().map(|v| v.key).unwrap_or(VarKey::Dummy))?;
            }
            for &(v, k) in &c.terms {
                let sign = if k < 0 { '-' } else { '+' };
                write!(out, " {sign} {} {}", k.unsigned_abs(), self.vars[v.0].key)?;
            }
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            writeln!(out, " {rel} {}", c.rhs)?;
        }
        writeln!(out, "Bounds")?;
        for v in &self.vars {
            if v.kind != VarKind::Binary {
                writeln!(out, " {} <= {} <= {}", v.lower, v.key, v.upper)?;
            }
        }
        let section = |title: &str, kind: VarKind, out: &mut W| -> fmt::Result {
            if self.vars.iter().any(|v| v.kind == kind) {
                writeln!(out, "{title}")?;
                for v in self.vars.iter().filter(|v| v.kind == kind) {
                    writeln!(out, " {}", v.key)?;
                }
            }
            Ok(())
        };
        section("Generals", VarKind::Integer, out)?;
        section("Binaries", VarKind::Binary, out)?;
        writeln!(out, "End")
    }
}

/// `f64::round` is not in `core`; half-away-from-zero rounding.
fn libm_round(x: f64) -> f64 {
    let t = x as i64 as f64;
    let frac = x - t;
    if frac >= 0.5 {
        t + 1.0
    } else if frac <= -0.5 {
        t - 1.0
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;
    use alloc::vec;

    #[test]
    fn rounding() {
        assert_eq!(libm_round(0.9999999), 1.0);
        assert_eq!(libm_round(-0.4), 0.0);
        assert_eq!(libm_round(-2.6), -3.0);
        assert_eq!(libm_round(3.0000001), 3.0);
    }

    #[test]
    fn violations_and_lp_text() {
        let mut m = AbstractMilp::default();
        let a = m.add_var(VarKey::Dummy, VarKind::Binary, 0.0, 5.0);
        let b = m.add_var(VarKey::Surplus(0), VarKind::Continuous, 0.0, 1.0);
        m.add_constraint(Family::Committee, vec![(a, 2)], Relation::Le, 1);
        m.add_constraint(Family::Surplus, vec![(a, 3), (b, -1)], Relation::Eq, 0);
        m.objective = Objective {
            terms: vec![(a, 1.0), (b, 0.0000001)],
            constant: 0.0,
            sense: Sense::Maximize,
        };
        assert_eq!(m.vars[0].upper, 1.0);
        assert_eq!(m.violations(&[0.0, 0.0]), Vec::<usize>::new());
        assert_eq!(m.violations(&[1.0, 1.0]), vec![0, 1]);
        let mut s = String::new();
        m.write_lp(&mut s).unwrap();
        assert!(s.contains("+ 0.0000001 surplus_0"), "{s}");
        assert!(s.contains("committee_0: + 2 dummy <= 1"), "{s}");
        assert!(s.contains("Binaries\n dummy"), "{s}");
    }
}
