use super::{
    ear_rotation_sequence, graph_search_sequence, tree_step, RotationSequence, RotationStep,
};
use crate::compat::Family;
use crate::error::{Error, Result};
use crate::geometry::{Chord, Parity};
use crate::matching::{
    dual_tree, is_semicycle, perimeter_matching, region_semicycles, PlaneMatching, Semicycle,
    SemicycleKind,
};

/// Classes of non-perimeter matchings by the leaf colours of the dual tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RouteClass {
    /// All leaves share a colour.
    A1,
    /// At least two leaves of one colour and at least one of the other.
    A2,
    /// Exactly one leaf of each colour.
    A3,
    IsPerimeter,
}

impl RouteClass {
    pub fn name(self) -> &'static str {
        match self {
            RouteClass::A1 => "A1",
            RouteClass::A2 => "A2",
            RouteClass::A3 => "A3",
            RouteClass::IsPerimeter => "perimeter",
        }
    }

    /// Upper bounds on the distance to the nearer and the farther perimeter matching.
    pub fn bounds(self) -> (usize, usize) {
        match self {
            RouteClass::A1 => (1, 4),
            RouteClass::A2 => (2, 3),
            RouteClass::A3 => (3, 3),
            RouteClass::IsPerimeter => (0, 3),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerimeterRoutes {
    pub class: RouteClass,
    pub to_odd: RotationSequence,
    pub to_even: RotationSequence,
}

impl PerimeterRoutes {
    pub fn to(&self, p: Parity) -> &RotationSequence {
        match p {
            Parity::Odd => &self.to_odd,
            Parity::Even => &self.to_even,
        }
    }
}

fn require_size(m: &PlaneMatching, min: usize) -> Result<()> {
    if m.size() < min {
        Err(Error::SizeTooSmall {
            size: m.size(),
            min,
        })
    } else {
        Ok(())
    }
}

pub fn classify_route(m: &PlaneMatching) -> RouteClass {
    if m.is_perimeter_matching() {
        return RouteClass::IsPerimeter;
    }
    match dual_tree(m).leaf_counts() {
        (0, _) | (_, 0) => RouteClass::A1,
        (1, 1) => RouteClass::A3,
        _ => RouteClass::A2,
    }
}

/// Sequences to both perimeter matchings, each rotating only inside cycles.
pub fn route_to_perimeter(m: &PlaneMatching) -> Result<PerimeterRoutes> {
    require_size(m, 12)?;
    let class = classify_route(m);
    let to_odd = route_to(m, Parity::Odd)?;
    let to_even = route_to(m, Parity::Even)?;
    Ok(PerimeterRoutes {
        class,
        to_odd,
        to_even,
    })
}

fn leaves_of(m: &PlaneMatching, color: Parity) -> usize {
    let (blue, red) = dual_tree(m).leaf_counts();
    match color {
        Parity::Odd => blue,
        Parity::Even => red,
    }
}

/// Semicycles of all inner dual-tree nodes of one colour.
fn inner_of(m: &PlaneMatching, color: Parity) -> Vec<Semicycle> {
    let tree = dual_tree(m);
    let nodes: Vec<usize> = tree
        .inner_nodes()
        .into_iter()
        .filter(|&i| tree.nodes[i].color == color)
        .collect();
    region_semicycles(m, &tree, &nodes)
}

fn perimeter_ear(m: &PlaneMatching) -> Result<Semicycle> {
    is_semicycle(m, m.edges())?.ok_or(Error::InvalidSemicycle)
}

fn route_to(m: &PlaneMatching, target: Parity) -> Result<RotationSequence> {
    let cfg = m.config();
    let goal = perimeter_matching(cfg, target);
    if *m == goal {
        return Ok(RotationSequence::empty(m));
    }
    if m.is_perimeter_matching() {
        return ear_rotation_sequence(m, &perimeter_ear(m)?);
    }
    if let Some(seq) = route_direct(m, target)? {
        return Ok(seq);
    }
    let other = route_direct(m, target.flip())?
        .ok_or_else(|| Error::Construction(format!("no route from {m} to a perimeter matching")))?;
    let mid = other.end.clone();
    other.then(ear_rotation_sequence(&mid, &perimeter_ear(&mid)?)?)
}

/// Shortest of the one-, two- and three-step strategies that reaches the target.
fn route_direct(m: &PlaneMatching, target: Parity) -> Result<Option<RotationSequence>> {
    let goal = perimeter_matching(m.config(), target);
    let other = target.flip();
    // all leaves have the target colour: rotating the other colour clears every diagonal
    if leaves_of(m, other) == 0 {
        let step = tree_step(m, inner_of(m, other))?;
        if step.after == goal {
            return Ok(Some(RotationSequence::from_steps(m, vec![step])));
        }
    }
    let mut steps = Vec::new();
    let mut cur = m.clone();
    let first = inner_of(m, target);
    if !first.is_empty() {
        let s = tree_step(m, first)?;
        cur = s.after.clone();
        steps.push(s);
    }
    if leaves_of(&cur, other) == 0 && !cur.is_perimeter_matching() {
        let s = tree_step(&cur, inner_of(&cur, other))?;
        if s.after == goal {
            steps.push(s);
            return Ok(Some(RotationSequence::from_steps(m, steps)));
        }
    }
    let push = leaves_of(m, other) == 1;
    Ok(three_step(m, target, push)?.map(|steps| RotationSequence::from_steps(m, steps)))
}

/// Rotate the off-colour inner nodes (pushing the off-colour leaf when asked),
/// then the single target-colour node without two target edges two apart,
/// then the remaining off-colour inner node.
fn three_step(m: &PlaneMatching, target: Parity, push: bool) -> Result<Option<Vec<RotationStep>>> {
    let goal = perimeter_matching(m.config(), target);
    let (mut steps, m1) = first_of_three(m, target.flip(), push)?;
    let Some((s2, s3)) = close_through_center(&m1, target)? else {
        return Ok(None);
    };
    if s3.after != goal {
        return Ok(None);
    }
    steps.push(s2);
    steps.push(s3);
    Ok(Some(steps))
}

fn first_of_three(
    m: &PlaneMatching,
    color: Parity,
    push: bool,
) -> Result<(Vec<RotationStep>, PlaneMatching)> {
    let mut set = inner_of(m, color);
    if push {
        if let Some(s) = pushed_leaf(m, color)? {
            set.push(s);
        }
    }
    if set.is_empty() {
        return Ok((Vec::new(), m.clone()));
    }
    let s = tree_step(m, set)?;
    let after = s.after.clone();
    Ok((vec![s], after))
}

/// The leaf of `color` without its clockwise-extreme perimeter edge, unless
/// the leaf is already a 2-ear.
fn pushed_leaf(m: &PlaneMatching, color: Parity) -> Result<Option<Semicycle>> {
    let cfg = m.config();
    let tree = dual_tree(m);
    let Some(leaf) = tree
        .leaves()
        .into_iter()
        .find(|&i| tree.nodes[i].color == color)
    else {
        return Ok(None);
    };
    let region = &tree.nodes[leaf];
    let edges = region.matching_edges();
    if edges.len() <= 2 || region.diagonals.len() != 1 {
        return Ok(None);
    }
    let d = region.diagonals[0];
    let start = if region.points.contains(&cfg.next(d.a)) && cfg.next(d.a) != d.b {
        d.a
    } else {
        d.b
    };
    let keep = region
        .perimeter_edges
        .iter()
        .copied()
        .min_by_key(|e| cfg.offset(start, cfg.perimeter_start(*e).expect("perimeter")))
        .expect("leaf has perimeter edges");
    let rest: Vec<Chord> = edges.into_iter().filter(|e| *e != keep).collect();
    match is_semicycle(m, &rest)? {
        Some(s) if s.kind == SemicycleKind::InsideCycle => Ok(Some(s)),
        _ => Err(Error::Construction(
            "pushed leaf is not an inside cycle".into(),
        )),
    }
}

/// From a matching with a single `target`-coloured node holding target edges
/// at `x`, `x+2`, `x+4`: rotate that node without the outer two, then the
/// off-colour inner node.
fn close_through_center(
    m: &PlaneMatching,
    target: Parity,
) -> Result<Option<(RotationStep, RotationStep)>> {
    let cfg = m.config();
    let tree = dual_tree(m);
    let centers: Vec<usize> = (0..tree.nodes.len())
        .filter(|&i| tree.nodes[i].color == target)
        .collect();
    if centers.len() != 1 {
        return Ok(None);
    }
    let center = &tree.nodes[centers[0]];
    let size = cfg.size();
    for x in 0..size {
        let e = cfg.perimeter_edge(x);
        let f = cfg.perimeter_edge((x + 2) % size);
        let g = cfg.perimeter_edge((x + 4) % size);
        if cfg.perimeter_parity(e) != Some(target)
            || ![e, f, g].iter().all(|c| center.perimeter_edges.contains(c))
        {
            continue;
        }
        let rest: Vec<Chord> = center
            .matching_edges()
            .into_iter()
            .filter(|c| *c != e && *c != g)
            .collect();
        if rest.len() < 2 {
            continue;
        }
        let Some(y) = is_semicycle(m, &rest)? else {
            continue;
        };
        if y.kind != SemicycleKind::InsideCycle {
            continue;
        }
        let s2 = tree_step(m, vec![y])?;
        let last = inner_of(&s2.after, target.flip());
        if last.is_empty() {
            continue;
        }
        let s3 = tree_step(&s2.after, last)?;
        return Ok(Some((s2, s3)));
    }
    Ok(None)
}

/// Single step from `n` (a matching with one diagonal, cutting off one odd
/// perimeter edge) to the matching whose only diagonal cuts off `e`.
fn swap_cut_edge(n: &PlaneMatching, e: Chord) -> Result<Option<RotationStep>> {
    let tree = dual_tree(n);
    let Some(big) = (0..tree.nodes.len()).find(|&i| tree.nodes[i].perimeter_edges.contains(&e))
    else {
        return Ok(None);
    };
    let rest: Vec<Chord> = tree.nodes[big]
        .matching_edges()
        .into_iter()
        .filter(|c| *c != e)
        .collect();
    if rest.len() < 2 {
        return Ok(None);
    }
    match is_semicycle(n, &rest)? {
        Some(y) if y.kind == SemicycleKind::InsideCycle => Ok(Some(tree_step(n, vec![y])?)),
        _ => Ok(None),
    }
}

/// Joins two class-A3 matchings through a common single-diagonal matching.
fn a3_join(m1: &PlaneMatching, m2: &PlaneMatching) -> Result<Option<RotationSequence>> {
    let cfg = m1.config();
    let (pre1, n1) = first_of_three(m1, Parity::Odd, true)?;
    let (pre2, n2) = first_of_three(m2, Parity::Odd, true)?;
    for x in (0..cfg.size()).step_by(2) {
        let e = cfg.perimeter_edge(x);
        if !n1.contains(e) || !n2.contains(e) {
            continue;
        }
        let (Some(a), Some(b)) = (swap_cut_edge(&n1, e)?, swap_cut_edge(&n2, e)?) else {
            continue;
        };
        if a.after != b.after {
            continue;
        }
        let left = RotationSequence::from_steps(m1, pre1.into_iter().chain([a]).collect());
        let right = RotationSequence::from_steps(m2, pre2.into_iter().chain([b]).collect());
        return Ok(Some(left.then(right.reversed()?)?));
    }
    Ok(None)
}

/// Walk of at most five tree-compatible steps between any two matchings.
///
/// From 12 points on, the shortest of the routes through either perimeter
/// matching (or through both) and, for two class-A3 matchings, through a
/// common single-diagonal matching. At 10 points the walk comes from a search
/// of the compatibility graph.
pub fn tree_path_between(m1: &PlaneMatching, m2: &PlaneMatching) -> Result<RotationSequence> {
    m1.same_config(m2)?;
    require_size(m1, 10)?;
    if m1 == m2 {
        return Ok(RotationSequence::empty(m1));
    }
    if m1.size() == 10 {
        return graph_search_sequence(m1, m2, Family::Tree);
    }
    let r1 = route_to_perimeter(m1)?;
    let r2 = route_to_perimeter(m2)?;
    let mut candidates = Vec::new();
    for p in [Parity::Odd, Parity::Even] {
        candidates.push(r1.to(p).clone().then(r2.to(p).reversed()?)?);
        let bridge = {
            let from = &r1.to(p).end;
            ear_rotation_sequence(from, &perimeter_ear(from)?)?
        };
        candidates.push(
            r1.to(p)
                .clone()
                .then(bridge)?
                .then(r2.to(p.flip()).reversed()?)?,
        );
    }
    if r1.class == RouteClass::A3 && r2.class == RouteClass::A3 {
        if let Some(seq) = a3_join(m1, m2)? {
            candidates.push(seq);
        }
    }
    let best = candidates
        .into_iter()
        .map(RotationSequence::without_loops)
        .min_by_key(|s| s.len())
        .expect("candidates");
    best.validate()?;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexConfig;
    use crate::matching::enumerate_matchings;

    #[test]
    fn routes_respect_class_bounds_at_twelve() {
        for m in enumerate_matchings(ConvexConfig::new(12).unwrap()) {
            let r = route_to_perimeter(&m).unwrap();
            r.to_odd.validate().unwrap();
            r.to_even.validate().unwrap();
            let (lo, hi) = r.class.bounds();
            let (a, b) = (r.to_odd.len(), r.to_even.len());
            assert!(
                a.min(b) <= lo && a.max(b) <= hi,
                "{m} {:?} {a} {b}",
                r.class
            );
            for step in r.to_odd.steps.iter().chain(&r.to_even.steps) {
                for s in step.rotated.as_ref().unwrap() {
                    assert_eq!(s.kind, SemicycleKind::InsideCycle);
                }
            }
        }
    }

    #[test]
    fn small_sizes_are_rejected() {
        let m = perimeter_matching(ConvexConfig::new(10).unwrap(), Parity::Even);
        assert_eq!(
            route_to_perimeter(&m),
            Err(Error::SizeTooSmall { size: 10, min: 12 })
        );
        let m8 = perimeter_matching(ConvexConfig::new(8).unwrap(), Parity::Even);
        assert!(tree_path_between(&m8, &m8).is_err());
    }

    #[test]
    fn tree_paths_are_short_at_ten_and_twelve() {
        for size in [10, 12] {
            let all = enumerate_matchings(ConvexConfig::new(size).unwrap());
            let mut worst = 0;
            for a in &all {
                for b in &all {
                    let seq = tree_path_between(a, b).unwrap();
                    seq.validate().unwrap();
                    assert_eq!((&seq.start, &seq.end), (a, b));
                    worst = worst.max(seq.len());
                }
            }
            assert!(worst <= 5, "size {size}: {worst}");
        }
    }
}
