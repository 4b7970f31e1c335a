use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a variable inside its [`Model`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarDomain {
    Continuous,
    Integer,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarSpec {
    pub name: String,
    pub domain: VarDomain,
    pub lower: f64,
    /// May be `f64::INFINITY`.
    pub upper: f64,
}

impl VarSpec {
    pub fn is_discrete(&self) -> bool {
        matches!(self.domain, VarDomain::Integer | VarDomain::Binary)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// Which side of the decomposition a row belongs to: rows coupled to the
/// installation binaries are `Relaxable`, everything else is `Kept`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    Relaxable,
    Kept,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinConstraint {
    pub label: String,
    /// Sparse row, sorted by variable id with duplicates merged.
    pub coeffs: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub block: Block,
}

impl LinConstraint {
    pub fn new(
        label: impl Into<String>,
        coeffs: Vec<(VarId, f64)>,
        sense: Sense,
        rhs: f64,
        block: Block,
    ) -> Self {
        let mut c = LinConstraint { label: label.into(), coeffs, sense, rhs, block };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        self.coeffs.sort_by_key(|(v, _)| *v);
        let mut merged: Vec<(VarId, f64)> = Vec::with_capacity(self.coeffs.len());
        for &(v, a) in &self.coeffs {
            match merged.last_mut() {
                Some((lv, la)) if *lv == v => *la += a,
                _ => merged.push((v, a)),
            }
        }
        self.coeffs = merged;
    }

    /// Left-hand-side value at `x`.
    pub fn lhs(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, a)| a * x[v.index()]).sum()
    }

    /// Amount by which `x` violates this row. Zero when satisfied.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.lhs(x);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// Linear objective in minimization sense.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LinObjective {
    pub coeffs: Vec<(VarId, f64)>,
    pub constant: f64,
}

impl LinObjective {
    pub fn new(coeffs: Vec<(VarId, f64)>, constant: f64) -> Self {
        let mut o = LinObjective { coeffs, constant };
        o.normalize();
        o
    }

    fn normalize(&mut self) {
        self.coeffs.sort_by_key(|(v, _)| *v);
        let mut merged: Vec<(VarId, f64)> = Vec::with_capacity(self.coeffs.len());
        for &(v, a) in &self.coeffs {
            match merged.last_mut() {
                Some((lv, la)) if *lv == v => *la += a,
                _ => merged.push((v, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0.0);
        self.coeffs = merged;
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.constant + self.coeffs.iter().map(|&(v, a)| a * x[v.index()]).sum::<f64>()
    }

    /// Dense coefficient vector over `n` variables.
    pub fn dense(&self, n: usize) -> Vec<f64> {
        let mut c = vec![0.0; n];
        for &(v, a) in &self.coeffs {
            c[v.index()] = a;
        }
        c
    }

    /// self + scale * other, merged.
    pub fn add_scaled(&self, other: &LinObjective, scale: f64) -> LinObjective {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(other.coeffs.iter().map(|&(v, a)| (v, scale * a)));
        LinObjective::new(coeffs, self.constant + scale * other.constant)
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("variable name `{0}` already used")]
    DuplicateVar(String),
    #[error("constraint label `{0}` already used")]
    DuplicateLabel(String),
    #[error("constraint `{0}` has no coefficients")]
    EmptyRow(String),
    #[error("invalid bounds [{lower}, {upper}] for variable `{name}`")]
    BadBounds { name: String, lower: f64, upper: f64 },
    #[error("fix of `{name}` to {value} violates its domain")]
    DomainError { name: String, value: f64 },
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
}

/// A mixed-integer linear model: variables plus tagged constraint rows.
/// Objectives are kept separately so several can share one model.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Model {
    vars: Vec<VarSpec>,
    constraints: Vec<LinConstraint>,
    #[serde(skip)]
    name_to_var: HashMap<String, VarId>,
}

impl Model {
    pub fn new() -> Self {
        Model::default()
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        domain: VarDomain,
        lower: f64,
        upper: f64,
    ) -> Result<VarId, ModelError> {
        let name = name.into();
        if !(lower <= upper) || !lower.is_finite() {
            return Err(ModelError::BadBounds { name, lower, upper });
        }
        if domain == VarDomain::Binary && (lower < 0.0 || upper > 1.0) {
            return Err(ModelError::BadBounds { name, lower, upper });
        }
        if self.name_to_var.contains_key(&name) {
            return Err(ModelError::DuplicateVar(name));
        }
        let id = VarId(self.vars.len() as u32);
        self.name_to_var.insert(name.clone(), id);
        self.vars.push(VarSpec { name, domain, lower, upper });
        Ok(id)
    }

    pub fn add_constraint(&mut self, row: LinConstraint) -> Result<usize, ModelError> {
        if row.coeffs.is_empty() {
            return Err(ModelError::EmptyRow(row.label));
        }
        if self.constraints.iter().any(|c| c.label == row.label) {
            return Err(ModelError::DuplicateLabel(row.label));
        }
        self.constraints.push(row);
        Ok(self.constraints.len() - 1)
    }

    pub fn var(&self, id: VarId) -> &VarSpec {
        &self.vars[id.index()]
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.name_to_var.get(name).copied()
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn constraints(&self) -> &[LinConstraint] {
        &self.constraints
    }

    pub fn constraints_mut(&mut self) -> &mut Vec<LinConstraint> {
        &mut self.constraints
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn discrete_vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_discrete())
            .map(|(i, _)| VarId(i as u32))
    }

    /// Rebuild the name lookup; needed after deserialization.
    pub fn rebuild_index(&mut self) {
        self.name_to_var = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.clone(), VarId(i as u32)))
            .collect();
    }

    pub(crate) fn set_bounds(&mut self, id: VarId, lower: f64, upper: f64) {
        let v = &mut self.vars[id.index()];
        v.lower = lower;
        v.upper = upper;
    }

    /// Copy of the model where each listed variable is pinned to a value
    /// (lower = upper = value). The original model is unchanged.
    pub fn fix_variables(&self, fixes: &[(VarId, f64)]) -> Result<Model, ModelError> {
        let mut out = self.clone();
        for &(id, value) in fixes {
            let spec = &self.vars[id.index()];
            if value < spec.lower - 1e-9 || value > spec.upper + 1e-9 {
                return Err(ModelError::DomainError { name: spec.name.clone(), value });
            }
            let pinned = if spec.is_discrete() {
                let r = value.round();
                if (value - r).abs() > crate::milp::TOL_INT {
                    return Err(ModelError::DomainError { name: spec.name.clone(), value });
                }
                r
            } else {
                value
            };
            out.set_bounds(id, pinned, pinned);
        }
        Ok(out)
    }

    /// Copy of the model with every integer/binary variable made continuous,
    /// bounds preserved.
    pub fn relax_integrality(&self) -> Model {
        let mut out = self.clone();
        for v in &mut out.vars {
            v.domain = VarDomain::Continuous;
        }
        out
    }

    /// Worst constraint violation of `x` over all rows.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraints.iter().map(|c| c.violation(x)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
    Unbounded,
    TimeLimit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MilpResult {
    pub status: SolveStatus,
    /// One value per model variable; empty when no point was found.
    pub assignment: Vec<f64>,
    pub objective: f64,
    pub best_bound: f64,
    pub rel_gap: f64,
}

impl MilpResult {
    pub fn infeasible() -> Self {
        MilpResult {
            status: SolveStatus::Infeasible,
            assignment: Vec::new(),
            objective: f64::INFINITY,
            best_bound: f64::INFINITY,
            rel_gap: 0.0,
        }
    }

    pub fn unbounded() -> Self {
        MilpResult {
            status: SolveStatus::Unbounded,
            assignment: Vec::new(),
            objective: f64::NEG_INFINITY,
            best_bound: f64::NEG_INFINITY,
            rel_gap: 0.0,
        }
    }

    pub fn has_point(&self) -> bool {
        !self.assignment.is_empty()
            && matches!(self.status, SolveStatus::Optimal | SolveStatus::Feasible | SolveStatus::TimeLimit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> (Model, VarId, VarId) {
        let mut m = Model::new();
        let x = m.add_var("x", VarDomain::Continuous, 0.0, f64::INFINITY).unwrap();
        let b = m.add_var("b", VarDomain::Binary, 0.0, 1.0).unwrap();
        m.add_constraint(LinConstraint::new(
            "c1",
            vec![(x, 1.0), (b, -5.0)],
            Sense::Le,
            0.0,
            Block::Relaxable,
        ))
        .unwrap();
        (m, x, b)
    }

    #[test]
    fn duplicate_names_rejected() {
        let (mut m, _, _) = toy();
        assert!(m.add_var("x", VarDomain::Continuous, 0.0, 1.0).is_err());
        let r = LinConstraint::new("c1", vec![(VarId(0), 1.0)], Sense::Le, 1.0, Block::Kept);
        assert!(m.add_constraint(r).is_err());
    }

    #[test]
    fn fix_variables_value_semantics() {
        let (m, x, b) = toy();
        let fixed = m.fix_variables(&[(x, 0.0)]).unwrap();
        assert_eq!(fixed.var(x).upper, 0.0);
        assert_eq!(m.var(x).upper, f64::INFINITY);
        // Empty fix set leaves the model unchanged.
        let same = m.fix_variables(&[]).unwrap();
        assert_eq!(same.num_vars(), m.num_vars());
        // Binary fixed to a fractional value is a domain error.
        assert!(m.fix_variables(&[(b, 0.5)]).is_err());
    }

    #[test]
    fn relax_integrality_preserves_bounds() {
        let (m, _, b) = toy();
        let relaxed = m.relax_integrality();
        assert_eq!(relaxed.var(b).domain, VarDomain::Continuous);
        assert_eq!(relaxed.var(b).lower, 0.0);
        assert_eq!(relaxed.var(b).upper, 1.0);
        let twice = relaxed.relax_integrality();
        assert_eq!(twice.var(b), relaxed.var(b));
    }

    #[test]
    fn constraint_merges_duplicate_terms() {
        let c = LinConstraint::new(
            "r",
            vec![(VarId(1), 2.0), (VarId(0), 1.0), (VarId(1), 3.0)],
            Sense::Ge,
            1.0,
            Block::Kept,
        );
        assert_eq!(c.coeffs, vec![(VarId(0), 1.0), (VarId(1), 5.0)]);
    }
}
