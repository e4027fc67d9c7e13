//! Exact feasibility solvers.
//!
//! Two decision procedures power every no-go verdict in this crate, and
//! both are exact and certificate-producing:
//!
//! * [`lp_feasible`] decides whether `{x ≥ 0 : Ax = b}` is non-empty over
//!   the rationals, by a dense phase-1 simplex with Bland's pivoting rule
//!   (which cannot cycle, so termination needs no perturbation tricks).
//!   A feasible system yields an explicit vertex witness; an infeasible one
//!   yields a Farkas certificate `y` with `yᵀA ≥ 0` componentwise and
//!   `yᵀb < 0` — a one-line refutation that any reader can re-check by
//!   multiplication. Witnesses and certificates are re-verified internally
//!   before being returned; a failed verification is a hard internal error,
//!   never a silent wrong answer.
//! * [`SupportConstraintSet::find_assignment`] searches for one global
//!   tuple whose restriction to every context lands in that context's
//!   allowed set, by depth-first backtracking over attributes in canonical
//!   order. A context is checked as soon as the last of its attributes is
//!   assigned, so dead branches are cut at the earliest possible depth. The
//!   first witness found — hence the one returned — is the lexicographically
//!   least witness in the canonical tuple order.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::EmpiricalModel;
use crate::schema::{
    Attribute, AttributeSet, DataValue, GlobalAssignment, Tuple, DEFAULT_TUPLE_CAP,
};

/// A system `Ax = b` whose columns may be labeled by global assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    matrix: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    labels: Option<Vec<Tuple>>,
}

impl LinearSystem {
    /// Build a system, checking that every row has the same width and that
    /// the right-hand side has one entry per row.
    pub fn new(matrix: Vec<Vec<BigRational>>, rhs: Vec<BigRational>) -> Result<Self> {
        let width = matrix.first().map(|r| r.len()).unwrap_or(0);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "row 0 has {width} columns but row {i} has {}",
                    row.len()
                )));
            }
        }
        if rhs.len() != matrix.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows but {} right-hand sides",
                matrix.len(),
                rhs.len()
            )));
        }
        Ok(LinearSystem {
            matrix,
            rhs,
            labels: None,
        })
    }

    /// Attach distinct column labels (one global assignment per column).
    pub fn with_labels(mut self, labels: Vec<Tuple>) -> Result<Self> {
        if labels.len() != self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} columns but {} labels",
                self.cols(),
                labels.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::DuplicateTuple(l.to_string()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map(|r| r.len()).unwrap_or(0)
    }

    pub fn matrix(&self) -> &[Vec<BigRational>] {
        &self.matrix
    }

    pub fn rhs(&self) -> &[BigRational] {
        &self.rhs
    }

    pub fn labels(&self) -> Option<&[Tuple]> {
        self.labels.as_deref()
    }
}

/// A refutation of `{x ≥ 0 : Ax = b}`: multipliers `y` with `yᵀA ≥ 0`
/// componentwise yet `yᵀb < 0`, so any nonnegative solution would give
/// `0 ≤ (yᵀA)x = yᵀb < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FarkasCertificate {
    multipliers: Vec<BigRational>,
}

impl FarkasCertificate {
    pub fn new(multipliers: Vec<BigRational>) -> Self {
        FarkasCertificate { multipliers }
    }

    /// One multiplier per equation of the refuted system.
    pub fn multipliers(&self) -> &[BigRational] {
        &self.multipliers
    }

    /// Re-check the certificate against a system by direct multiplication.
    pub fn verify(&self, sys: &LinearSystem) -> bool {
        if self.multipliers.len() != sys.rows() {
            return false;
        }
        for j in 0..sys.cols() {
            let combo: BigRational = self
                .multipliers
                .iter()
                .zip(sys.matrix())
                .map(|(y, row)| y * &row[j])
                .sum();
            if combo.is_negative() {
                return false;
            }
        }
        let rhs_combo: BigRational = self
            .multipliers
            .iter()
            .zip(sys.rhs())
            .map(|(y, b)| y * b)
            .sum();
        rhs_combo.is_negative()
    }
}

/// The verdict of [`lp_feasible`].
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// A nonnegative solution of `Ax = b`, one entry per column.
    Feasible(Vec<BigRational>),
    /// A verified Farkas refutation.
    Infeasible(FarkasCertificate),
}

/// Decide whether `{x ≥ 0 : Ax = b}` is non-empty, exactly.
///
/// Runs a phase-1 simplex over arbitrary-precision rationals with Bland's
/// anti-cycling rule, so the whole procedure is deterministic: the same
/// system always yields the same witness or the same certificate.
pub fn lp_feasible(sys: &LinearSystem) -> Result<LpOutcome> {
    let m = sys.rows();
    let n = sys.cols();

    // Sign-normalize to b >= 0, remembering which rows were flipped so the
    // certificate can be mapped back to the original orientation.
    let mut tableau: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    let mut flipped = vec![false; m];
    for i in 0..m {
        let mut row = sys.matrix()[i].clone();
        let mut b = sys.rhs()[i].clone();
        if b.is_negative() {
            flipped[i] = true;
            for a in &mut row {
                *a = -a.clone();
            }
            b = -b;
        }
        // Append the artificial block: row i gets artificial column n + i.
        row.extend((0..m).map(|k| {
            if k == i {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
        tableau.push(row);
        rhs.push(b);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of the artificial variables. The reduced
    // cost of column j is c_j - sum over artificial-basic rows of T[i][j];
    // recomputing it each round is cheap at the sizes we solve and keeps
    // the arithmetic transparently correct.
    loop {
        let art_rows: Vec<usize> = (0..m).filter(|&i| basis[i] >= n).collect();
        let mut entering = None;
        for j in 0..n + m {
            if basis.contains(&j) {
                continue;
            }
            let cost = if j >= n {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            let reduced = cost
                - art_rows
                    .iter()
                    .map(|&i| tableau[i][j].clone())
                    .sum::<BigRational>();
            if reduced.is_negative() {
                entering = Some(j); // Bland: smallest improving index.
                break;
            }
        }
        let Some(col) = entering else { break };

        // Ratio test; ties broken by the smallest basic variable index
        // (the other half of Bland's rule).
        let mut leaving: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if tableau[i][col].is_positive() {
                let ratio = &rhs[i] / &tableau[i][col];
                match &leaving {
                    Some((best, best_ratio)) => {
                        if ratio < *best_ratio
                            || (ratio == *best_ratio && basis[i] < basis[*best])
                        {
                            leaving = Some((i, ratio));
                        }
                    }
                    None => leaving = Some((i, ratio)),
                }
            }
        }
        let Some((row, _)) = leaving else {
            // Phase-1 objective is bounded below by zero, so an unbounded
            // improving direction cannot occur.
            unreachable!("phase-1 simplex found an unbounded direction");
        };

        // Pivot on (row, col).
        let pivot = tableau[row][col].clone();
        for j in 0..n + m {
            tableau[row][j] = &tableau[row][j] / &pivot;
        }
        rhs[row] = &rhs[row] / &pivot;
        for i in 0..m {
            if i == row || tableau[i][col].is_zero() {
                continue;
            }
            let factor = tableau[i][col].clone();
            for j in 0..n + m {
                let delta = &factor * &tableau[row][j];
                tableau[i][j] = &tableau[i][j] - delta;
            }
            let delta = &factor * &rhs[row];
            rhs[i] = &rhs[i] - delta;
        }
        basis[row] = col;
    }

    let objective: BigRational = (0..m)
        .filter(|&i| basis[i] >= n)
        .map(|i| rhs[i].clone())
        .sum();

    if objective.is_zero() {
        // Feasible: read the original variables off the basis. Artificial
        // variables may linger in the basis only at value zero.
        let mut x = vec![BigRational::zero(); n];
        for i in 0..m {
            if basis[i] < n {
                x[basis[i]] = rhs[i].clone();
            }
        }
        for (i, row) in sys.matrix().iter().enumerate() {
            let lhs: BigRational = row.iter().zip(&x).map(|(a, v)| a * v).sum();
            assert_eq!(
                lhs,
                sys.rhs()[i],
                "internal error: simplex witness fails equation {i}"
            );
        }
        assert!(
            x.iter().all(|v| !v.is_negative()),
            "internal error: simplex witness has a negative entry"
        );
        Ok(LpOutcome::Feasible(x))
    } else {
        // Infeasible: the dual multipliers pi = c_B B^{-1} sit in the
        // artificial columns of the final tableau (that block started as
        // the identity, so it now holds B^{-1}). With the row flips undone,
        // y = -(pi o flip) is the Farkas certificate.
        let mut multipliers = Vec::with_capacity(m);
        for k in 0..m {
            let pi_k: BigRational = (0..m)
                .filter(|&i| basis[i] >= n)
                .map(|i| tableau[i][n + k].clone())
                .sum();
            let signed = if flipped[k] { pi_k } else { -pi_k };
            multipliers.push(signed);
        }
        let certificate = FarkasCertificate::new(multipliers);
        assert!(
            certificate.verify(sys),
            "internal error: extracted Farkas certificate does not verify"
        );
        Ok(LpOutcome::Infeasible(certificate))
    }
}

/// The verdict of a global-assignment search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// The lexicographically least global assignment consistent with every
    /// context's allowed set.
    Witness(GlobalAssignment),
    /// The search space was exhausted: no consistent global assignment.
    Exhausted,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&GlobalAssignment> {
        match self {
            SearchOutcome::Witness(t) => Some(t),
            SearchOutcome::Exhausted => None,
        }
    }

    pub fn is_witness(&self) -> bool {
        self.witness().is_some()
    }
}

/// A per-context family of allowed tuple sets over a common attribute set:
/// the input to the backtracking search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportConstraintSet {
    attributes: AttributeSet,
    domains: BTreeMap<Attribute, Vec<DataValue>>,
    contexts: Vec<(AttributeSet, BTreeSet<Tuple>)>,
}

impl SupportConstraintSet {
    /// Build a constraint set, checking that every context is contained in
    /// the global attribute set, every attribute has a non-empty domain,
    /// and every allowed tuple is based on its context.
    pub fn new(
        attributes: AttributeSet,
        domains: BTreeMap<Attribute, Vec<DataValue>>,
        contexts: Vec<(AttributeSet, BTreeSet<Tuple>)>,
    ) -> Result<Self> {
        for a in attributes.iter() {
            match domains.get(a) {
                None => return Err(Error::MissingDomain(a.name().to_string())),
                Some(d) if d.is_empty() => return Err(Error::EmptyDomain(a.name().to_string())),
                Some(_) => {}
            }
        }
        for (context, allowed) in &contexts {
            if !context.is_subset(&attributes) {
                return Err(Error::NotSubset {
                    left: context.to_string(),
                    right: attributes.to_string(),
                });
            }
            for t in allowed {
                if t.attributes() != *context {
                    return Err(Error::BaseMismatch {
                        expected: context.to_string(),
                        found: t.attributes().to_string(),
                    });
                }
            }
        }
        Ok(SupportConstraintSet {
            attributes,
            domains,
            contexts,
        })
    }

    /// The constraint set whose allowed tuples are the supports of a
    /// model's tables: the input to every strong-contextuality search.
    pub fn from_model(model: &EmpiricalModel) -> Self {
        let schema = model.schema();
        let contexts = schema
            .contexts()
            .iter()
            .zip(model.tables())
            .map(|(c, table)| (c.clone(), table.support().cloned().collect()))
            .collect();
        SupportConstraintSet {
            attributes: schema.global().clone(),
            domains: schema
                .restricted_domains(schema.global())
                .expect("schema domains cover its global set"),
            contexts,
        }
    }

    pub fn attributes(&self) -> &AttributeSet {
        &self.attributes
    }

    pub fn contexts(&self) -> &[(AttributeSet, BTreeSet<Tuple>)] {
        &self.contexts
    }

    /// Search for a global assignment whose restriction to every context is
    /// allowed. Returns the lexicographically least witness (attributes in
    /// name order, values in declared domain order) or
    /// [`SearchOutcome::Exhausted`].
    ///
    /// The assignment space `prod of domain sizes` must not exceed the
    /// enumeration cap ([`Error::EnumerationTooLarge`]); the search itself
    /// visits only the branches that survive pruning.
    pub fn find_assignment(&self) -> Result<SearchOutcome> {
        let attrs: Vec<&Attribute> = self.attributes.iter().collect();
        let mut space: u128 = 1;
        for a in &attrs {
            space = space.saturating_mul(self.domains[*a].len() as u128);
            if space > DEFAULT_TUPLE_CAP as u128 {
                return Err(Error::EnumerationTooLarge {
                    cap: DEFAULT_TUPLE_CAP,
                });
            }
        }

        // A context becomes checkable once its last attribute (in canonical
        // order) is assigned. Contexts over the empty set are checked here.
        let mut checkpoint: Vec<Vec<usize>> = vec![Vec::new(); attrs.len()];
        for (ci, (context, allowed)) in self.contexts.iter().enumerate() {
            if context.is_empty() {
                if !allowed.contains(&Tuple::empty()) {
                    return Ok(SearchOutcome::Exhausted);
                }
                continue;
            }
            let last = attrs
                .iter()
                .rposition(|a| context.contains(a))
                .expect("non-empty context has a last attribute");
            checkpoint[last].push(ci);
        }
        if attrs.is_empty() {
            // Only the empty assignment exists, and all (empty-set) contexts
            // accepted it above.
            return Ok(SearchOutcome::Witness(Tuple::empty()));
        }

        let mut assignment: Vec<(Attribute, DataValue)> = Vec::with_capacity(attrs.len());
        if self.search(0, &attrs, &checkpoint, &mut assignment)? {
            let witness = Tuple::new(assignment)?;
            return Ok(SearchOutcome::Witness(witness));
        }
        Ok(SearchOutcome::Exhausted)
    }

    fn search(
        &self,
        depth: usize,
        attrs: &[&Attribute],
        checkpoint: &[Vec<usize>],
        assignment: &mut Vec<(Attribute, DataValue)>,
    ) -> Result<bool> {
        let attr = attrs[depth];
        'values: for value in &self.domains[attr] {
            assignment.push((attr.clone(), value.clone()));
            for &ci in &checkpoint[depth] {
                let (context, allowed) = &self.contexts[ci];
                let restricted = Tuple::new(
                    assignment
                        .iter()
                        .filter(|(a, _)| context.contains(a))
                        .cloned()
                        .collect::<Vec<_>>(),
                )?;
                if !allowed.contains(&restricted) {
                    assignment.pop();
                    continue 'values;
                }
            }
            if depth + 1 == attrs.len()
                || self.search(depth + 1, attrs, checkpoint, assignment)?
            {
                return Ok(true);
            }
            assignment.pop();
        }
        Ok(false)
    }
}
