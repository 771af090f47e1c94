//! Explicit witnesses and rotation sequences following the constructive arguments.

mod caterpillar;
mod route;
mod tree;

pub use caterpillar::{
    caterpillar_for_inside_cycle, caterpillar_path_between, greedy_caterpillar,
    one_legged_for_2cycle, split_into_2cycles, PartialCaterpillar, Side,
};
pub use route::{route_to_perimeter, tree_path_between, PerimeterRoutes, RouteClass};
pub use tree::{ear_rotation_sequence, tree_for_inside_cycles};

use crate::compat::{exists_witness, validate_witness, Family, Witness};
use crate::error::{Error, Result};
use crate::matching::{enumerate_matchings, is_semicycle, rotate_all, PlaneMatching, Semicycle};
use std::collections::{HashMap, VecDeque};

/// One edge of a compatibility graph walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationStep {
    pub before: PlaneMatching,
    pub after: PlaneMatching,
    pub witness: Witness,
    /// Semicycles of `before` whose simultaneous rotation gives `after`;
    /// `None` for steps taken from a graph search.
    pub rotated: Option<Vec<Semicycle>>,
}

impl RotationStep {
    /// Same step walked backwards; rotated sets are re-expressed in `after`.
    pub fn reversed(&self) -> Result<RotationStep> {
        let rotated = match &self.rotated {
            None => None,
            Some(set) => Some(
                set.iter()
                    .map(|s| {
                        is_semicycle(&self.after, &s.complement())?.ok_or(Error::InvalidSemicycle)
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(RotationStep {
            before: self.after.clone(),
            after: self.before.clone(),
            witness: self.witness.clone(),
            rotated,
        })
    }

    pub fn validate(&self) -> Result<()> {
        validate_witness(&self.witness, &self.before, &self.after).map_err(|v| {
            Error::Construction(format!("step {} -> {}: {v}", self.before, self.after))
        })?;
        if let Some(set) = &self.rotated {
            if rotate_all(&self.before, set)? != self.after {
                return Err(Error::Construction(format!(
                    "rotated set does not lead to {}",
                    self.after
                )));
            }
        }
        Ok(())
    }
}

/// A walk `start = M_0, M_1, ..., M_k = end` with a witness per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSequence {
    pub start: PlaneMatching,
    pub end: PlaneMatching,
    pub steps: Vec<RotationStep>,
}

impl RotationSequence {
    pub fn empty(m: &PlaneMatching) -> Self {
        RotationSequence {
            start: m.clone(),
            end: m.clone(),
            steps: Vec::new(),
        }
    }

    pub fn from_steps(start: &PlaneMatching, steps: Vec<RotationStep>) -> Self {
        let end = steps
            .last()
            .map_or_else(|| start.clone(), |s| s.after.clone());
        RotationSequence {
            start: start.clone(),
            end,
            steps,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Matchings visited, endpoints included.
    pub fn matchings(&self) -> Vec<&PlaneMatching> {
        let mut out = vec![&self.start];
        out.extend(self.steps.iter().map(|s| &s.after));
        out
    }

    pub fn validate(&self) -> Result<()> {
        let mut cur = &self.start;
        for step in &self.steps {
            if &step.before != cur {
                return Err(Error::Construction("steps do not chain".into()));
            }
            step.validate()?;
            cur = &step.after;
        }
        if cur != &self.end {
            return Err(Error::Construction(
                "sequence does not reach its end".into(),
            ));
        }
        Ok(())
    }

    pub fn reversed(&self) -> Result<RotationSequence> {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| s.reversed())
            .collect::<Result<Vec<_>>>()?;
        Ok(RotationSequence {
            start: self.end.clone(),
            end: self.start.clone(),
            steps,
        })
    }

    pub fn then(mut self, other: RotationSequence) -> Result<RotationSequence> {
        if self.end != other.start {
            return Err(Error::Construction("sequences do not meet".into()));
        }
        self.steps.extend(other.steps);
        self.end = other.end;
        Ok(self)
    }

    /// Cuts out every closed sub-walk.
    pub fn without_loops(self) -> RotationSequence {
        let mut steps: Vec<RotationStep> = Vec::new();
        for step in self.steps {
            if let Some(pos) = steps.iter().position(|s| s.before == step.after) {
                steps.truncate(pos);
            } else if step.after == self.start {
                steps.clear();
            } else {
                steps.push(step);
            }
        }
        RotationSequence::from_steps(&self.start, steps)
    }
}

/// Applies a rotation of inside cycles, attaching a tree witness.
pub(crate) fn tree_step(m: &PlaneMatching, cycles: Vec<Semicycle>) -> Result<RotationStep> {
    let after = rotate_all(m, &cycles)?;
    let witness = tree_for_inside_cycles(m, &cycles)?;
    Ok(RotationStep {
        before: m.clone(),
        after,
        witness,
        rotated: Some(cycles),
    })
}

/// Shortest walk in the compatibility graph of `family`, by breadth-first
/// search with decider witnesses on each step.
pub(crate) fn graph_search_sequence(
    m1: &PlaneMatching,
    m2: &PlaneMatching,
    family: Family,
) -> Result<RotationSequence> {
    m1.same_config(m2)?;
    let all = enumerate_matchings(m1.config());
    let index: HashMap<&PlaneMatching, usize> =
        all.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let (s, t) = (index[m1], index[m2]);
    let mut prev: Vec<Option<(usize, Witness)>> = vec![None; all.len()];
    let mut seen = vec![false; all.len()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            break;
        }
        for v in 0..all.len() {
            if seen[v] {
                continue;
            }
            if let Some(w) = exists_witness(&all[u], &all[v], family)? {
                seen[v] = true;
                prev[v] = Some((u, w));
                queue.push_back(v);
            }
        }
    }
    if !seen[t] {
        return Err(Error::Construction(format!(
            "{m2} is unreachable from {m1} for {family}"
        )));
    }
    let mut steps = Vec::new();
    let mut v = t;
    while let Some((u, w)) = prev[v].take() {
        steps.push(RotationStep {
            before: all[u].clone(),
            after: all[v].clone(),
            witness: w,
            rotated: None,
        });
        v = u;
    }
    steps.reverse();
    Ok(RotationSequence::from_steps(m1, steps))
}
