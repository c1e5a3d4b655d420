//! Evaluation of "for every T" clauses.
//!
//! Over a finite field the quantifier is enumerated. Each subject (a matrix,
//! or a pair of matrices for the two-operator statements) yields a predicate
//! value and a condition value; the report records where they disagree.
//! The predicate ⟹ condition direction holds over every field and is the
//! hard-asserted one. The converse may lean on characteristic-zero facts, so
//! a subject where the condition holds without the predicate is a finding.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    check_linear_dependence_nilpotents, check_pencil_membership, factor_rank_one, is_rank_one_nilpotent,
    is_scalar_multiple_of_rank_one_idempotent, jordan_triple, CheckError,
};
use crate::enumerate::MatrixSpace;
use crate::field::Field;
use crate::indices::{ascent, ascent_via_minpoly, ascent_with, descent, ChainCheck};
use crate::matrix::Matrix;
use crate::sample::probe_matrices;
use crate::witness::{sim_check, witness_nonzero, witness_rank_gt1};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    IndexAgreement,
    ZeroChar,
    RankOneForward,
    RankOneConverse,
    P1,
    Pencil,
    Dependence,
    Sim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepScale {
    /// One pass over M_n.
    Single,
    /// Subjects crossed with a quantifier over M_n or N₁.
    Pair,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::IndexAgreement,
        CheckKind::ZeroChar,
        CheckKind::RankOneForward,
        CheckKind::RankOneConverse,
        CheckKind::P1,
        CheckKind::Pencil,
        CheckKind::Dependence,
        CheckKind::Sim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::IndexAgreement => "index-agreement",
            CheckKind::ZeroChar => "zero-char",
            CheckKind::RankOneForward => "rank-one-forward",
            CheckKind::RankOneConverse => "rank-one-converse",
            CheckKind::P1 => "p1",
            CheckKind::Pencil => "pencil",
            CheckKind::Dependence => "dependence",
            CheckKind::Sim => "sim",
        }
    }

    pub fn scale(self) -> SweepScale {
        match self {
            CheckKind::IndexAgreement => SweepScale::Single,
            _ => SweepScale::Pair,
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = CheckKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown check {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnvelopeEntry {
    pub field: Field,
    pub single_max_dim: usize,
    pub pair_max_dim: usize,
}

/// Largest dimensions swept exhaustively. Anything else is refused.
pub const ENVELOPE: [EnvelopeEntry; 5] = [
    EnvelopeEntry { field: Field::Prime(2), single_max_dim: 3, pair_max_dim: 3 },
    EnvelopeEntry { field: Field::Prime(3), single_max_dim: 3, pair_max_dim: 2 },
    EnvelopeEntry { field: Field::PrimeSquare(2), single_max_dim: 2, pair_max_dim: 2 },
    EnvelopeEntry { field: Field::Prime(5), single_max_dim: 2, pair_max_dim: 2 },
    EnvelopeEntry { field: Field::PrimeSquare(3), single_max_dim: 2, pair_max_dim: 0 },
];

pub fn envelope_allows(field: Field, dim: usize, scale: SweepScale) -> bool {
    ENVELOPE.iter().any(|e| {
        e.field == field
            && dim >= 1
            && dim
                <= match scale {
                    SweepScale::Single => e.single_max_dim,
                    SweepScale::Pair => e.pair_max_dim,
                }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Verified,
    Finding,
    Failed,
}

/// One subject together with the matrix that decided its condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub subject_index: Vec<u64>,
    pub subject: Vec<Matrix>,
    pub witness_index: Option<u64>,
    pub witness: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuantifiedCheckReport {
    pub field: Field,
    pub dim: usize,
    pub predicate: String,
    pub total_a_tested: u64,
    /// Size of the inner quantifier range per subject.
    pub quantifier_range: u64,
    pub exhaustive: bool,
    pub predicate_true: u64,
    pub condition_true: u64,
    /// Subjects whose quantified condition fails, with the refuting matrix
    /// when there is a single one.
    pub failures: Vec<Finding>,
    /// Predicate holds but the condition fails.
    pub forward_violations: Vec<Finding>,
    /// Condition holds but the predicate fails.
    pub converse_gaps: Vec<Finding>,
    pub status: CheckStatus,
}

impl QuantifiedCheckReport {
    /// The biconditional held for every subject.
    pub fn agrees(&self) -> bool {
        self.forward_violations.is_empty() && self.converse_gaps.is_empty()
    }
}

struct Outcome {
    subject_index: Vec<u64>,
    subject: Vec<Matrix>,
    predicate: bool,
    condition: bool,
    witness: Option<(Option<u64>, Matrix)>,
}

impl Outcome {
    fn finding(&self) -> Finding {
        Finding {
            subject_index: self.subject_index.clone(),
            subject: self.subject.clone(),
            witness_index: self.witness.as_ref().and_then(|w| w.0),
            witness: self.witness.as_ref().map(|w| w.1.clone()),
        }
    }
}

fn assemble(
    kind: &str,
    field: Field,
    dim: usize,
    quantifier_range: u64,
    exhaustive: bool,
    outcomes: Vec<Outcome>,
) -> QuantifiedCheckReport {
    let mut failures = Vec::new();
    let mut forward_violations = Vec::new();
    let mut converse_gaps = Vec::new();
    for o in &outcomes {
        if !o.condition {
            failures.push(o.finding());
        }
        if o.predicate && !o.condition {
            forward_violations.push(o.finding());
        }
        if !o.predicate && o.condition {
            converse_gaps.push(o.finding());
        }
    }
    let status = if !forward_violations.is_empty() {
        CheckStatus::Failed
    } else if !converse_gaps.is_empty() {
        CheckStatus::Finding
    } else {
        CheckStatus::Verified
    };
    QuantifiedCheckReport {
        field,
        dim,
        predicate: kind.to_string(),
        total_a_tested: outcomes.len() as u64,
        quantifier_range,
        exhaustive,
        predicate_true: outcomes.iter().filter(|o| o.predicate).count() as u64,
        condition_true: outcomes.iter().filter(|o| o.condition).count() as u64,
        failures,
        forward_violations,
        converse_gaps,
        status,
    }
}

fn index_in(a: &Matrix, ok: impl Fn(usize) -> bool, t: &Matrix) -> bool {
    let ata = jordan_triple(a, t).expect("square operands");
    let tat = jordan_triple(t, a).expect("square operands");
    ok(ascent(&ata).expect("square")) && ok(ascent(&tat).expect("square"))
}

fn one_sided(a: &Matrix, ok: impl Fn(usize) -> bool, t: &Matrix) -> bool {
    ok(ascent(&jordan_triple(a, t).expect("square operands")).expect("square"))
}

/// First T in enumeration order breaking `cond`, as (index, T).
fn first_counterexample(
    ts: &[Matrix],
    cond: impl Fn(&Matrix) -> bool,
) -> Option<(u64, Matrix)> {
    ts.iter()
        .position(|t| !cond(t))
        .map(|i| (i as u64, ts[i].clone()))
}

fn run_parallel<T: Send>(jobs: Option<usize>, len: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    match jobs {
        Some(1) => (0..len).map(f).collect(),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .expect("thread pool")
            .install(|| (0..len).into_par_iter().map(&f).collect()),
        None => (0..len).into_par_iter().map(f).collect(),
    }
}

fn single_subject_report(
    kind: CheckKind,
    a: &Matrix,
    predicate: bool,
    range: u64,
    exhaustive: bool,
    witness: Option<(Option<u64>, Matrix)>,
) -> QuantifiedCheckReport {
    let outcome = Outcome {
        subject_index: Vec::new(),
        subject: vec![a.clone()],
        predicate,
        condition: witness.is_none(),
        witness,
    };
    assemble(kind.name(), a.field(), a.rows(), range, exhaustive, vec![outcome])
}

/// Enumerated T over a finite field, structured probes over ℚ.
fn quantifier_domain(a: &Matrix, kind: CheckKind) -> Result<(Vec<Matrix>, bool), CheckError> {
    let n = a.rows();
    if a.field().is_finite() {
        if !envelope_allows(a.field(), n, SweepScale::Single) {
            return Err(CheckError::OutsideEnvelope {
                kind,
                field: a.field(),
                dim: n,
            });
        }
        let space = MatrixSpace::new(a.field(), n)?;
        Ok((space.iter().map(|(_, m)| m).collect(), true))
    } else {
        Ok((probe_matrices(a.field(), n), false))
    }
}

/// A = 0 ⟺ α(ATA) = α(TAT) = 1 for every T.
pub fn check_zero_characterization(a: &Matrix) -> Result<QuantifiedCheckReport, CheckError> {
    a.require_square()?;
    let kind = CheckKind::ZeroChar;
    let (ts, exhaustive) = quantifier_domain(a, kind)?;
    let witness = if a.field().is_finite() || a.is_zero() {
        first_counterexample(&ts, |t| index_in(a, |k| k == 1, t)).map(|(i, t)| (exhaustive.then_some(i), t))
    } else {
        Some((None, witness_nonzero(a)?.t))
    };
    Ok(single_subject_report(kind, a, a.is_zero(), ts.len() as u64, exhaustive, witness))
}

/// For A ≠ 0: rank A = 1 ⟺ α(ATA), α(TAT) ∈ {1, 2} for every T.
pub fn check_rank_one_characterization(a: &Matrix) -> Result<QuantifiedCheckReport, CheckError> {
    a.require_square()?;
    if a.is_zero() {
        return Err(CheckError::Precondition("the rank-one characterization needs A ≠ 0".into()));
    }
    let rank_one = a.rank() == 1;
    let kind = if rank_one { CheckKind::RankOneForward } else { CheckKind::RankOneConverse };
    let (ts, exhaustive) = quantifier_domain(a, kind)?;
    let witness = if a.field().is_finite() || rank_one {
        first_counterexample(&ts, |t| index_in(a, |k| k == 1 || k == 2, t))
            .map(|(i, t)| (exhaustive.then_some(i), t))
    } else {
        Some((None, witness_rank_gt1(a)?.t))
    };
    Ok(single_subject_report(kind, a, rank_one, ts.len() as u64, exhaustive, witness))
}

/// For rank-one A: A ∈ 𝔽*P₁ ⟺ α(ATA) = 1 for every T.
pub fn check_p1_characterization(a: &Matrix) -> Result<QuantifiedCheckReport, CheckError> {
    a.require_square()?;
    let form = factor_rank_one(a)
        .ok_or_else(|| CheckError::Precondition("the 𝔽P₁ characterization needs rank A = 1".into()))?;
    let member = is_scalar_multiple_of_rank_one_idempotent(a);
    let (ts, exhaustive) = quantifier_domain(a, CheckKind::P1)?;
    let witness = if a.field().is_finite() || member {
        first_counterexample(&ts, |t| one_sided(a, |k| k == 1, t)).map(|(i, t)| (exhaustive.then_some(i), t))
    } else {
        // f(x) = 0; T = e_j⊗e_k with f_j ≠ 0 and x_k ≠ 0 gives f(Tx) ≠ 0.
        let n = a.rows();
        let j = form.f.iter().position(|v| !v.is_zero()).expect("f ≠ 0");
        let k = form.x.iter().position(|v| !v.is_zero()).expect("x ≠ 0");
        let t = Matrix::unit(a.field(), n, j, k);
        debug_assert!(!one_sided(a, |k| k == 1, &t));
        Some((None, t))
    };
    Ok(single_subject_report(CheckKind::P1, a, member, ts.len() as u64, exhaustive, witness))
}

/// Exhaustive sweep of one characterization over M_n(field).
///
/// `jobs` fixes the worker count; `Some(1)` runs on the calling thread.
/// Output is independent of the worker count.
pub fn run_sweep(
    kind: CheckKind,
    field: Field,
    dim: usize,
    jobs: Option<usize>,
) -> Result<QuantifiedCheckReport, CheckError> {
    if !envelope_allows(field, dim, kind.scale()) {
        return Err(CheckError::OutsideEnvelope { kind, field, dim });
    }
    let space = MatrixSpace::new(field, dim)?;
    let all: Vec<Matrix> = space.iter().map(|(_, m)| m).collect();
    let count = all.len() as u64;
    let nil: Vec<usize> = (0..all.len()).filter(|&i| is_rank_one_nilpotent(&all[i])).collect();

    let (range, outcomes) = match kind {
        CheckKind::IndexAgreement => {
            let outcomes = run_parallel(jobs, all.len(), |i| {
                let a = &all[i];
                let k = ascent(a).expect("square");
                let agree = descent(a).expect("square") == k
                    && ascent_via_minpoly(a).expect("square") == k
                    && ascent_with(a, ChainCheck::Subspace).expect("square") == k;
                Outcome {
                    subject_index: vec![i as u64],
                    subject: vec![a.clone()],
                    predicate: true,
                    condition: agree,
                    witness: None,
                }
            });
            (1, outcomes)
        }
        CheckKind::ZeroChar | CheckKind::RankOneForward | CheckKind::RankOneConverse | CheckKind::P1 => {
            let subjects: Vec<usize> = (0..all.len())
                .filter(|&i| {
                    let a = &all[i];
                    match kind {
                        CheckKind::ZeroChar => true,
                        CheckKind::RankOneForward => a.rank() == 1,
                        CheckKind::RankOneConverse => !a.is_zero() && a.rank() != 1,
                        _ => a.rank() == 1,
                    }
                })
                .collect();
            let outcomes = run_parallel(jobs, subjects.len(), |s| {
                let i = subjects[s];
                let a = &all[i];
                let (predicate, witness) = match kind {
                    CheckKind::ZeroChar => (
                        a.is_zero(),
                        first_counterexample(&all, |t| index_in(a, |k| k == 1, t)),
                    ),
                    CheckKind::RankOneForward | CheckKind::RankOneConverse => (
                        a.rank() == 1,
                        first_counterexample(&all, |t| index_in(a, |k| k == 1 || k == 2, t)),
                    ),
                    _ => (
                        is_scalar_multiple_of_rank_one_idempotent(a),
                        first_counterexample(&all, |t| one_sided(a, |k| k == 1, t)),
                    ),
                };
                Outcome {
                    subject_index: vec![i as u64],
                    subject: vec![a.clone()],
                    predicate,
                    condition: witness.is_none(),
                    witness: witness.map(|(j, t)| (Some(j), t)),
                }
            });
            (count, outcomes)
        }
        CheckKind::Pencil | CheckKind::Dependence => {
            // in_n1[m][j]: N_j · M_m · N_j ∈ N₁
            let in_n1: Vec<Vec<bool>> = run_parallel(jobs, all.len(), |m| {
                nil.iter()
                    .map(|&j| is_rank_one_nilpotent(&jordan_triple(&all[j], &all[m]).expect("square")))
                    .collect()
            });
            let pairs: Vec<(usize, usize)> = if kind == CheckKind::Pencil {
                let non_scalar: Vec<usize> = (0..all.len()).filter(|&i| all[i].as_scalar().is_none()).collect();
                non_scalar
                    .iter()
                    .flat_map(|&a| (0..all.len()).map(move |b| (a, b)))
                    .collect()
            } else {
                nil.iter().flat_map(|&m| nil.iter().map(move |&k| (m, k))).collect()
            };
            let outcomes = run_parallel(jobs, pairs.len(), |s| {
                let (a, b) = pairs[s];
                let predicate = if kind == CheckKind::Pencil {
                    check_pencil_membership(&all[a], &all[b]).expect("non-scalar a")
                } else {
                    check_linear_dependence_nilpotents(&all[a], &all[b]).expect("rank-one nilpotents")
                };
                let witness = (0..nil.len())
                    .find(|&j| in_n1[a][j] != in_n1[b][j])
                    .map(|j| (Some(nil[j] as u64), all[nil[j]].clone()));
                Outcome {
                    subject_index: vec![a as u64, b as u64],
                    subject: vec![all[a].clone(), all[b].clone()],
                    predicate,
                    condition: witness.is_none(),
                    witness,
                }
            });
            (nil.len() as u64, outcomes)
        }
        CheckKind::Sim => {
            // in_n1[j][t]: N_j · T_t · N_j ∈ N₁
            let in_n1: Vec<Vec<bool>> = run_parallel(jobs, nil.len(), |j| {
                all.iter()
                    .map(|t| is_rank_one_nilpotent(&jordan_triple(&all[nil[j]], t).expect("square")))
                    .collect()
            });
            let flat = |m: usize| all[nil[m]].vectorize();
            let independent = |m: usize, k: usize| {
                Matrix::from_columns(field, dim * dim, &[flat(m), flat(k)]).rank() == 2
            };
            let pairs: Vec<(usize, usize)> = (0..nil.len())
                .flat_map(|m| (0..nil.len()).map(move |k| (m, k)))
                .filter(|&(m, k)| independent(m, k))
                .collect();
            let outcomes = run_parallel(jobs, pairs.len(), |s| {
                let (m, k) = pairs[s];
                let predicate = sim_check(&all[nil[m]], &all[nil[k]]).expect("independent N₁ pair");
                let chosen = (0..nil.len()).find(|&b| {
                    independent(b, m)
                        && independent(b, k)
                        && (0..all.len()).all(|t| in_n1[m][t] || in_n1[k][t] || !in_n1[b][t])
                });
                Outcome {
                    subject_index: vec![nil[m] as u64, nil[k] as u64],
                    subject: vec![all[nil[m]].clone(), all[nil[k]].clone()],
                    predicate,
                    condition: chosen.is_some(),
                    witness: chosen.map(|b| (Some(nil[b] as u64), all[nil[b]].clone())),
                }
            });
            (nil.len() as u64 * count, outcomes)
        }
    };
    Ok(assemble(kind.name(), field, dim, range, true, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElem;

    #[test]
    fn envelope_table() {
        assert!(envelope_allows(Field::Prime(2), 3, SweepScale::Pair));
        assert!(envelope_allows(Field::Prime(3), 3, SweepScale::Single));
        assert!(!envelope_allows(Field::Prime(3), 3, SweepScale::Pair));
        assert!(!envelope_allows(Field::PrimeSquare(3), 2, SweepScale::Pair));
        assert!(!envelope_allows(Field::Rational, 2, SweepScale::Single));
        assert!(!envelope_allows(Field::Prime(7), 2, SweepScale::Single));
    }

    #[test]
    fn single_matrix_checks_over_gf2() {
        let f = Field::Prime(2);
        let r = check_zero_characterization(&Matrix::zeros(f, 2, 2)).unwrap();
        assert!(r.failures.is_empty());
        assert_eq!(r.quantifier_range, 16);
        assert!(r.exhaustive);
        let r = check_zero_characterization(&Matrix::identity(f, 2)).unwrap();
        // T = 0 gives α(0) = 1, so the first refuting T in order is not I,
        // but T = I itself refutes: α(I) = 0.
        let w = r.failures[0].witness.clone().unwrap();
        assert_ne!(ascent(&jordan_triple(&Matrix::identity(f, 2), &w).unwrap()).unwrap(), 1);
        let r = check_zero_characterization(&Matrix::unit(f, 3, 0, 1)).unwrap();
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.status, CheckStatus::Verified);
    }

    #[test]
    fn rational_checks_delegate() {
        let q = Field::Rational;
        let r = check_zero_characterization(&Matrix::identity(q, 3)).unwrap();
        assert!(!r.exhaustive);
        assert_eq!(r.failures.len(), 1);
        let r = check_rank_one_characterization(&Matrix::scalar(&FieldElem::from_i64(q, 2), 3)).unwrap();
        assert_eq!(r.failures.len(), 1);
        let r = check_p1_characterization(&Matrix::unit(q, 3, 0, 1)).unwrap();
        assert_eq!(r.failures.len(), 1);
        let r = check_p1_characterization(&Matrix::unit(q, 3, 1, 1)).unwrap();
        assert!(r.failures.is_empty());
    }

    #[test]
    fn sweeps_are_worker_independent() {
        let a = run_sweep(CheckKind::ZeroChar, Field::Prime(2), 2, Some(1)).unwrap();
        let b = run_sweep(CheckKind::ZeroChar, Field::Prime(2), 2, Some(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total_a_tested, 16);
        assert_eq!(a.failures.len(), 15);
    }

    #[test]
    fn outside_envelope_is_refused() {
        assert!(matches!(
            run_sweep(CheckKind::Pencil, Field::Prime(3), 3, None),
            Err(CheckError::OutsideEnvelope { .. })
        ));
    }
}
