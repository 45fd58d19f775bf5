//! Stable-model enumeration for ground programs.
//!
//! Candidates are explored by three-valued constraint propagation with
//! branching on the remaining unknown atoms; every complete candidate is
//! checked for stability by the reduct test (the least model of the reduct
//! must equal the candidate). Propagation never excludes a stable model, so
//! the enumeration is exact; it merely prunes the 2^n candidate space, and
//! for the common case of a program with a unique supported model it
//! reaches that model without branching.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::ground::{GroundHead, GroundProgram};
use crate::syntax::asp::GroundAtom;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    True,
    False,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BodyStatus {
    True,
    False,
    Unknown,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("{0} atoms remain undetermined after propagation (the guard is {1})")]
    TooManyUnknowns(usize, usize),
    #[error("enumeration exceeds the candidate cap of {0}")]
    CandidateCapExceeded(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveGuard {
    /// Branching on more undetermined atoms than this aborts.
    pub max_branch_atoms: usize,
    /// Complete candidates examined.
    pub max_candidates: usize,
}

impl Default for SolveGuard {
    fn default() -> Self {
        SolveGuard {
            max_branch_atoms: 24,
            max_candidates: 1 << 20,
        }
    }
}

struct Indexed {
    atoms: Vec<GroundAtom>,
    rules: Vec<IndexedRule>,
    /// Rules with the atom in a (basic or choice) head.
    defining: Vec<Vec<usize>>,
}

struct IndexedRule {
    head: Option<(usize, bool)>, // (atom, is_choice); None for constraints
    positive: Vec<usize>,
    negative: Vec<usize>,
    double_negative: Vec<usize>,
}

fn index(program: &GroundProgram) -> Indexed {
    let atoms: Vec<GroundAtom> = program.atoms().into_iter().collect();
    let ids: BTreeMap<&GroundAtom, usize> = atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut defining = vec![Vec::new(); atoms.len()];
    let rules = program
        .rules
        .iter()
        .enumerate()
        .map(|(index, rule)| {
            let head = match &rule.head {
                GroundHead::Atom(a) => Some((ids[a], false)),
                GroundHead::Choice(a) => Some((ids[a], true)),
                GroundHead::Constraint => None,
            };
            if let Some((atom, _)) = head {
                defining[atom].push(index);
            }
            IndexedRule {
                head,
                positive: rule.positive.iter().map(|a| ids[a]).collect(),
                negative: rule.negative.iter().map(|a| ids[a]).collect(),
                double_negative: rule.double_negative.iter().map(|a| ids[a]).collect(),
            }
        })
        .collect();
    Indexed {
        atoms,
        rules,
        defining,
    }
}

fn body_status(rule: &IndexedRule, status: &[Status]) -> BodyStatus {
    let mut unknown = false;
    for &a in &rule.positive {
        match status[a] {
            Status::False => return BodyStatus::False,
            Status::Unknown => unknown = true,
            Status::True => (),
        }
    }
    for &a in &rule.negative {
        match status[a] {
            Status::True => return BodyStatus::False,
            Status::Unknown => unknown = true,
            Status::False => (),
        }
    }
    for &a in &rule.double_negative {
        match status[a] {
            Status::False => return BodyStatus::False,
            Status::Unknown => unknown = true,
            Status::True => (),
        }
    }
    if unknown {
        BodyStatus::Unknown
    } else {
        BodyStatus::True
    }
}

/// Three-valued propagation to a fixpoint. Returns false on conflict.
fn propagate(indexed: &Indexed, status: &mut [Status]) -> bool {
    loop {
        let mut changed = false;
        for rule in &indexed.rules {
            let body = body_status(rule, status);
            match (body, rule.head) {
                (BodyStatus::True, None) => return false, // violated constraint
                (BodyStatus::True, Some((atom, false))) => match status[atom] {
                    Status::False => return false,
                    Status::Unknown => {
                        status[atom] = Status::True;
                        changed = true;
                    }
                    Status::True => (),
                },
                _ => (),
            }
        }
        // An atom with no rule whose body could still fire is false.
        for (atom, rules) in indexed.defining.iter().enumerate() {
            if status[atom] != Status::Unknown {
                continue;
            }
            let supportable = rules
                .iter()
                .any(|&r| body_status(&indexed.rules[r], status) != BodyStatus::False);
            if !supportable {
                status[atom] = Status::False;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
}

/// The candidate satisfies every rule and constraint classically.
fn classically_satisfied(indexed: &Indexed, status: &[Status]) -> bool {
    indexed.rules.iter().all(|rule| {
        if body_status(rule, status) != BodyStatus::True {
            return true;
        }
        match rule.head {
            None => false,
            Some((atom, false)) => status[atom] == Status::True,
            Some((_, true)) => true,
        }
    })
}

/// Reduct-minimality: the least model of the reduct with respect to the
/// candidate must be the candidate itself. A choice rule contributes to the
/// reduct only when its head atom is in the candidate.
fn is_stable(indexed: &Indexed, status: &[Status]) -> bool {
    let in_candidate = |a: usize| status[a] == Status::True;
    let mut reduct: Vec<(usize, &Vec<usize>)> = Vec::new();
    for rule in &indexed.rules {
        let Some((head, is_choice)) = rule.head else {
            continue;
        };
        if rule.negative.iter().any(|&a| in_candidate(a)) {
            continue;
        }
        if rule.double_negative.iter().any(|&a| !in_candidate(a)) {
            continue;
        }
        if is_choice && !in_candidate(head) {
            continue;
        }
        reduct.push((head, &rule.positive));
    }
    let mut least = vec![false; indexed.atoms.len()];
    loop {
        let mut changed = false;
        for (head, positive) in &reduct {
            if !least[*head] && positive.iter().all(|&a| least[a]) {
                least[*head] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..indexed.atoms.len()).all(|a| least[a] == in_candidate(a))
}

pub fn stable_models(
    program: &GroundProgram,
    guard: SolveGuard,
) -> Result<BTreeSet<BTreeSet<GroundAtom>>, SolveError> {
    let indexed = index(program);
    let mut status = vec![Status::Unknown; indexed.atoms.len()];
    let mut models = BTreeSet::new();
    if !propagate(&indexed, &mut status) {
        return Ok(models);
    }
    let unknowns = status.iter().filter(|s| **s == Status::Unknown).count();
    if unknowns > guard.max_branch_atoms {
        return Err(SolveError::TooManyUnknowns(
            unknowns,
            guard.max_branch_atoms,
        ));
    }
    let mut candidates = 0usize;
    search(&indexed, status, &mut models, guard, &mut candidates)?;
    Ok(models)
}

fn search(
    indexed: &Indexed,
    status: Vec<Status>,
    models: &mut BTreeSet<BTreeSet<GroundAtom>>,
    guard: SolveGuard,
    candidates: &mut usize,
) -> Result<(), SolveError> {
    match status.iter().position(|s| *s == Status::Unknown) {
        None => {
            *candidates += 1;
            if *candidates > guard.max_candidates {
                return Err(SolveError::CandidateCapExceeded(guard.max_candidates));
            }
            if classically_satisfied(indexed, &status) && is_stable(indexed, &status) {
                models.insert(
                    status
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| **s == Status::True)
                        .map(|(a, _)| indexed.atoms[a].clone())
                        .collect(),
                );
            }
            Ok(())
        }
        Some(atom) => {
            for value in [Status::True, Status::False] {
                let mut branch = status.clone();
                branch[atom] = value;
                if propagate(indexed, &mut branch) {
                    search(indexed, branch, models, guard, candidates)?;
                }
            }
            Ok(())
        }
    }
}
