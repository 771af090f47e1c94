//! Plane perfect matchings, semicycles, rotation and the dual tree.

use crate::error::{Error, MatchingViolation, Result};
use crate::geometry::{cross, Chord, ChordSet, ConvexConfig, Parity};
use std::collections::BTreeSet;
use std::fmt;

/// A non-crossing perfect matching with edges in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneMatching {
    config_size: usize,
    edges: Vec<Chord>,
    partner: Vec<usize>,
}

impl PlaneMatching {
    pub fn from_chords(config: ConvexConfig, chords: &[Chord]) -> Result<Self> {
        let m = config.size();
        let mut partner = vec![usize::MAX; m];
        for &c in chords {
            config.check_chord(c)?;
            for p in [c.a, c.b] {
                if partner[p] != usize::MAX {
                    return Err(Error::NotAMatching(MatchingViolation::Duplicate(p)));
                }
            }
            partner[c.a] = c.b;
            partner[c.b] = c.a;
        }
        if let Some(p) = partner.iter().position(|&q| q == usize::MAX) {
            return Err(Error::NotAMatching(MatchingViolation::Uncovered(p)));
        }
        let mut edges = chords.to_vec();
        edges.sort();
        if let Some((x, y)) = crate::geometry::first_crossing(&edges) {
            return Err(Error::NotAMatching(MatchingViolation::Crossing(x, y)));
        }
        Ok(PlaneMatching {
            config_size: m,
            edges,
            partner,
        })
    }

    /// Builds from a partner array known to describe a plane perfect matching.
    pub(crate) fn from_partner_unchecked(partner: Vec<usize>) -> Self {
        let mut edges: Vec<Chord> = partner
            .iter()
            .enumerate()
            .filter(|(p, &q)| *p < q)
            .map(|(p, &q)| Chord::new(p, q))
            .collect();
        edges.sort();
        PlaneMatching {
            config_size: partner.len(),
            edges,
            partner,
        }
    }

    pub fn config(&self) -> ConvexConfig {
        ConvexConfig::new(self.config_size).expect("validated at construction")
    }

    pub fn size(&self) -> usize {
        self.config_size
    }

    pub fn edges(&self) -> &[Chord] {
        &self.edges
    }

    pub fn partner(&self, p: usize) -> usize {
        self.partner[p]
    }

    pub fn contains(&self, c: Chord) -> bool {
        c.b < self.config_size && self.partner[c.a] == c.b
    }

    pub fn chord_set(&self) -> ChordSet {
        self.edges.iter().copied().collect()
    }

    pub fn diagonals(&self) -> impl Iterator<Item = Chord> + '_ {
        let cfg = self.config();
        self.edges
            .iter()
            .copied()
            .filter(move |c| !cfg.is_perimeter(*c))
    }

    pub fn perimeter_edges(&self) -> impl Iterator<Item = Chord> + '_ {
        let cfg = self.config();
        self.edges
            .iter()
            .copied()
            .filter(move |c| cfg.is_perimeter(*c))
    }

    pub fn is_perimeter_matching(&self) -> bool {
        self.diagonals().next().is_none()
    }

    pub fn count_perimeter(&self, parity: Parity) -> usize {
        let cfg = self.config();
        self.perimeter_edges()
            .filter(|c| cfg.perimeter_parity(*c) == Some(parity))
            .count()
    }

    /// Image under the index shift `i -> i + k`.
    pub fn shifted(&self, k: usize) -> PlaneMatching {
        let m = self.config_size;
        let mut partner = vec![0; m];
        for p in 0..m {
            partner[(p + k) % m] = (self.partner[p] + k) % m;
        }
        PlaneMatching::from_partner_unchecked(partner)
    }

    pub fn same_config(&self, other: &PlaneMatching) -> Result<()> {
        if self.config_size != other.config_size {
            Err(Error::ConfigMismatch(self.config_size, other.config_size))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for PlaneMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// All plane perfect matchings in lexicographic order of their sorted chord lists.
pub fn enumerate_matchings(config: ConvexConfig) -> Vec<PlaneMatching> {
    fn rec(
        lo: usize,
        hi: usize,
        partner: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        rest: &[(usize, usize)],
    ) {
        // match points lo..hi (exclusive) then continue with the pending intervals
        if lo >= hi {
            match rest.split_first() {
                None => out.push(partner.clone()),
                Some((&(l, h), tail)) => rec(l, h, partner, out, tail),
            }
            return;
        }
        let mut j = lo + 1;
        while j < hi {
            partner[lo] = j;
            partner[j] = lo;
            let mut pending = Vec::with_capacity(rest.len() + 1);
            pending.push((j + 1, hi));
            pending.extend_from_slice(rest);
            rec(lo + 1, j, partner, out, &pending);
            j += 2;
        }
    }
    let m = config.size();
    let mut out = Vec::new();
    let mut partner = vec![0; m];
    rec(0, m, &mut partner, &mut out, &[]);
    let mut all: Vec<PlaneMatching> = out
        .into_iter()
        .map(PlaneMatching::from_partner_unchecked)
        .collect();
    all.sort_by(|x, y| x.edges.cmp(&y.edges));
    all
}

pub fn perimeter_matching(config: ConvexConfig, parity: Parity) -> PlaneMatching {
    let start = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let chords: Vec<Chord> = (0..config.half())
        .map(|i| config.perimeter_edge(start + 2 * i))
        .collect();
    PlaneMatching::from_chords(config, &chords).expect("perimeter matching is plane")
}

/// Blocks of four points `4i..4i+3` each holding a perimeter edge cut off by
/// a diagonal, shifted so the perimeter edges have `parity`; `extra` appends
/// the perimeter edge on the two last points.
fn semiear_blocks(config: ConvexConfig, parity: Parity, extra: bool) -> PlaneMatching {
    let blocks = config.size() / 4;
    let mut chords = Vec::new();
    for i in 0..blocks {
        chords.push(Chord::new(4 * i + 1, 4 * i + 2));
        chords.push(Chord::new(4 * i, 4 * i + 3));
    }
    if extra {
        chords.push(Chord::new(4 * blocks, 4 * blocks + 1));
    }
    let m = PlaneMatching::from_chords(config, &chords).expect("semiear blocks are plane");
    if parity == Parity::Odd {
        m
    } else {
        m.shifted(1)
    }
}

/// `k` 2-semiears of the given perimeter parity around an inside `k`-semicycle
/// of diagonals, on `4k` points, `k >= 2`.
pub fn two_semiear_matching(config: ConvexConfig, parity: Parity) -> Result<PlaneMatching> {
    if !config.size().is_multiple_of(4) || config.size() < 8 {
        return Err(Error::Construction(format!(
            "2-semiear matchings need 4k >= 8 points, got {}",
            config.size()
        )));
    }
    Ok(semiear_blocks(config, parity, false))
}

/// `k` 2-semiears of the given parity around an inside `(k+1)`-semicycle
/// holding one perimeter edge of the other parity, on `4k+2` points, `k >= 1`.
pub fn near_two_semiear_matching(config: ConvexConfig, parity: Parity) -> Result<PlaneMatching> {
    if config.size() % 4 != 2 || config.size() < 6 {
        return Err(Error::Construction(format!(
            "near-2-semiear matchings need 4k+2 >= 6 points, got {}",
            config.size()
        )));
    }
    Ok(semiear_blocks(config, parity, true))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemicycleKind {
    InsideCycle,
    Semiear,
}

/// A set of matching edges whose hull interior meets no matching edge,
/// together with the boundary cycle of that hull.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Semicycle {
    pub members: Vec<Chord>,
    /// Hull vertices in counterclockwise order.
    pub points: Vec<usize>,
    /// Hull boundary, `boundary[i]` joins `points[i]` and `points[i+1]`.
    pub boundary: Vec<Chord>,
    pub kind: SemicycleKind,
}

impl Semicycle {
    /// Boundary chords that are not members; the edges a rotation introduces.
    pub fn complement(&self) -> Vec<Chord> {
        let mut out: Vec<Chord> = self
            .boundary
            .iter()
            .copied()
            .filter(|c| !self.members.contains(c))
            .collect();
        out.sort();
        out
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn diagonal_count(&self, config: &ConvexConfig) -> usize {
        self.boundary
            .iter()
            .filter(|c| !config.is_perimeter(**c))
            .count()
    }
}

/// Checks the semicycle definition for `x`, returning the semicycle when it holds.
pub fn is_semicycle(m: &PlaneMatching, x: &[Chord]) -> Result<Option<Semicycle>> {
    for c in x {
        if !m.contains(*c) {
            return Err(Error::NotSubset(*c));
        }
    }
    let members: BTreeSet<Chord> = x.iter().copied().collect();
    if members.len() < 2 {
        return Err(Error::SemicycleTooSmall);
    }
    Ok(semicycle_of(m, &members))
}

fn semicycle_of(m: &PlaneMatching, members: &BTreeSet<Chord>) -> Option<Semicycle> {
    let cfg = m.config();
    let mut points: Vec<usize> = members.iter().flat_map(|c| [c.a, c.b]).collect();
    points.sort_unstable();
    let len = points.len();
    let boundary: Vec<Chord> = (0..len)
        .map(|i| Chord::new(points[i], points[(i + 1) % len]))
        .collect();
    // members must be every other boundary chord
    let even_ok = (0..len).step_by(2).all(|i| members.contains(&boundary[i]));
    let odd_ok = (1..len).step_by(2).all(|i| members.contains(&boundary[i]));
    if !(even_ok || odd_ok) {
        return None;
    }
    for e in m.edges() {
        if members.contains(e) {
            continue;
        }
        if boundary.iter().any(|b| cross(*b, *e)) {
            return None;
        }
    }
    let diagonals = boundary.iter().filter(|c| !cfg.is_perimeter(**c)).count();
    let kind = if diagonals >= 2 {
        SemicycleKind::InsideCycle
    } else {
        SemicycleKind::Semiear
    };
    Some(Semicycle {
        members: members.iter().copied().collect(),
        points,
        boundary,
        kind,
    })
}

/// Replaces the semicycle's edges by the rest of its boundary.
pub fn rotate(m: &PlaneMatching, x: &Semicycle) -> Result<PlaneMatching> {
    rotate_all(m, std::slice::from_ref(x))
}

/// Rotates several pairwise disjoint semicycles at once.
pub fn rotate_all(m: &PlaneMatching, xs: &[Semicycle]) -> Result<PlaneMatching> {
    let mut used = vec![false; m.size()];
    for x in xs {
        let check = is_semicycle(m, &x.members)?.ok_or(Error::InvalidSemicycle)?;
        if check.boundary != x.boundary {
            return Err(Error::InvalidSemicycle);
        }
        for &p in &x.points {
            if used[p] {
                return Err(Error::OverlappingSemicycles);
            }
            used[p] = true;
        }
    }
    // point-disjoint hulls may still interleave
    for (i, x) in xs.iter().enumerate() {
        for y in &xs[i + 1..] {
            if x.boundary
                .iter()
                .any(|a| y.boundary.iter().any(|b| cross(*a, *b)))
            {
                return Err(Error::OverlappingSemicycles);
            }
        }
    }
    let mut partner = m.partner.clone();
    for x in xs {
        for c in x.complement() {
            partner[c.a] = c.b;
            partner[c.b] = c.a;
        }
    }
    Ok(PlaneMatching::from_partner_unchecked(partner))
}

/// Faces of the convex polygon cut by non-crossing chords; each face lists
/// its vertices in increasing (counterclockwise) order.
pub(crate) fn polygon_faces(config: &ConvexConfig, chords: &[Chord]) -> Vec<Vec<usize>> {
    split_polygon((0..config.size()).collect(), chords)
}

/// Faces of the convex polygon on `polygon` (increasing indices) cut by
/// non-crossing chords among its vertices.
pub(crate) fn split_polygon(polygon: Vec<usize>, chords: &[Chord]) -> Vec<Vec<usize>> {
    let mut faces: Vec<Vec<usize>> = vec![polygon];
    for &c in chords {
        let mut split = None;
        for (fi, f) in faces.iter().enumerate() {
            let (Some(i), Some(j)) = (
                f.iter().position(|&p| p == c.a),
                f.iter().position(|&p| p == c.b),
            ) else {
                continue;
            };
            let (i, j) = (i.min(j), i.max(j));
            if j - i == 1 || (i == 0 && j == f.len() - 1) {
                continue;
            }
            split = Some((fi, i, j));
            break;
        }
        if let Some((fi, i, j)) = split {
            let f = faces.swap_remove(fi);
            let inner: Vec<usize> = f[i..=j].to_vec();
            let mut outer: Vec<usize> = f[..=i].to_vec();
            outer.extend_from_slice(&f[j..]);
            faces.push(inner);
            faces.push(outer);
        }
    }
    faces.sort();
    faces
}

/// A face of the subdivision induced by a matching's diagonals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub points: Vec<usize>,
    pub diagonals: Vec<Chord>,
    pub perimeter_edges: Vec<Chord>,
    /// Parity of the matching's perimeter edges in this region (odd = blue, even = red).
    pub color: Parity,
}

impl Region {
    pub fn matching_edges(&self) -> Vec<Chord> {
        let mut v: Vec<Chord> = self
            .diagonals
            .iter()
            .chain(&self.perimeter_edges)
            .copied()
            .collect();
        v.sort();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualTree {
    pub nodes: Vec<Region>,
    /// Tree edges as `(node, node, shared diagonal)`.
    pub edges: Vec<(usize, usize, Chord)>,
}

impl DualTree {
    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|(x, y, _)| *x == node || *y == node)
            .count()
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.degree(node) <= 1
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.is_leaf(i)).collect()
    }

    pub fn inner_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| !self.is_leaf(i))
            .collect()
    }

    /// Leaf counts `(blue, red)`.
    pub fn leaf_counts(&self) -> (usize, usize) {
        let mut blue = 0;
        let mut red = 0;
        for i in self.leaves() {
            match self.nodes[i].color {
                Parity::Odd => blue += 1,
                Parity::Even => red += 1,
            }
        }
        (blue, red)
    }

    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(x, y, _)| {
                if x == node {
                    Some(y)
                } else if y == node {
                    Some(x)
                } else {
                    None
                }
            })
            .collect()
    }
}

pub fn dual_tree(m: &PlaneMatching) -> DualTree {
    let cfg = m.config();
    let diagonals: Vec<Chord> = m.diagonals().collect();
    let faces = polygon_faces(&cfg, &diagonals);
    let nodes: Vec<Region> = faces
        .into_iter()
        .map(|points| {
            let len = points.len();
            let sides: Vec<Chord> = (0..len)
                .map(|i| Chord::new(points[i], points[(i + 1) % len]))
                .collect();
            let mut diags: Vec<Chord> = sides
                .iter()
                .copied()
                .filter(|c| m.contains(*c) && !cfg.is_perimeter(*c))
                .collect();
            let mut perim: Vec<Chord> = sides
                .iter()
                .copied()
                .filter(|c| m.contains(*c) && cfg.is_perimeter(*c))
                .collect();
            diags.sort();
            diags.dedup();
            perim.sort();
            perim.dedup();
            let color = match perim.first() {
                Some(c) => cfg.perimeter_parity(*c).expect("perimeter"),
                None => sides
                    .iter()
                    .find_map(|c| cfg.perimeter_parity(*c))
                    .expect("every region touches the hull")
                    .flip(),
            };
            Region {
                points,
                diagonals: diags,
                perimeter_edges: perim,
                color,
            }
        })
        .collect();
    let mut edges = Vec::new();
    for d in diagonals {
        let holders: Vec<usize> = (0..nodes.len())
            .filter(|&i| nodes[i].diagonals.contains(&d))
            .collect();
        debug_assert_eq!(holders.len(), 2);
        edges.push((holders[0], holders[1], d));
    }
    DualTree { nodes, edges }
}

/// One semiear per leaf of the dual tree; the whole matching for a perimeter matching.
pub fn semiears(m: &PlaneMatching) -> Vec<Semicycle> {
    let tree = dual_tree(m);
    region_semicycles(m, &tree, &tree.leaves())
}

/// The semicycles formed by the matching edges of the given dual-tree nodes.
pub fn region_semicycles(m: &PlaneMatching, tree: &DualTree, nodes: &[usize]) -> Vec<Semicycle> {
    nodes
        .iter()
        .filter_map(|&i| {
            let edges: BTreeSet<Chord> = tree.nodes[i].matching_edges().into_iter().collect();
            if edges.len() < 2 {
                return None;
            }
            semicycle_of(m, &edges)
        })
        .collect()
}

/// Parity of a semiear, read off its perimeter edges.
pub fn semiear_parity(config: &ConvexConfig, s: &Semicycle) -> Option<Parity> {
    s.members.iter().find_map(|c| config.perimeter_parity(*c))
}

/// Every semicycle of the matching, ordered by member list.
pub fn all_semicycles(m: &PlaneMatching) -> Vec<Semicycle> {
    let edges = m.edges();
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << edges.len()) {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: BTreeSet<Chord> = (0..edges.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| edges[i])
            .collect();
        if let Some(s) = semicycle_of(m, &members) {
            out.push(s);
        }
    }
    out.sort_by(|x, y| x.members.cmp(&y.members));
    out
}

/// Inside semicycles only; `max_len` limits the member count.
pub fn inside_semicycles(m: &PlaneMatching, max_len: Option<usize>) -> Vec<Semicycle> {
    all_semicycles(m)
        .into_iter()
        .filter(|s| s.kind == SemicycleKind::InsideCycle && max_len.is_none_or(|k| s.len() <= k))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchingClass {
    PerimeterEven,
    PerimeterOdd,
    TwoSemiearEven,
    TwoSemiearOdd,
    NearTwoSemiearEven,
    NearTwoSemiearOdd,
    Other,
}

impl MatchingClass {
    pub fn name(self) -> &'static str {
        match self {
            MatchingClass::PerimeterEven => "PerimeterEven",
            MatchingClass::PerimeterOdd => "PerimeterOdd",
            MatchingClass::TwoSemiearEven => "TwoSemiearEven",
            MatchingClass::TwoSemiearOdd => "TwoSemiearOdd",
            MatchingClass::NearTwoSemiearEven => "NearTwoSemiearEven",
            MatchingClass::NearTwoSemiearOdd => "NearTwoSemiearOdd",
            MatchingClass::Other => "Other",
        }
    }

    pub fn is_perimeter(self) -> bool {
        matches!(
            self,
            MatchingClass::PerimeterEven | MatchingClass::PerimeterOdd
        )
    }
}

pub fn classify_matching(m: &PlaneMatching) -> MatchingClass {
    let cfg = m.config();
    if m.is_perimeter_matching() {
        return match m.edges().first().and_then(|c| cfg.perimeter_parity(*c)) {
            Some(Parity::Odd) => MatchingClass::PerimeterOdd,
            _ => MatchingClass::PerimeterEven,
        };
    }
    let tree = dual_tree(m);
    let inner = tree.inner_nodes();
    if inner.len() != 1 {
        return MatchingClass::Other;
    }
    let center = &tree.nodes[inner[0]];
    let leaves = tree.leaves();
    let k = leaves.len();
    if k < 2
        || leaves
            .iter()
            .any(|&l| tree.nodes[l].matching_edges().len() != 2)
    {
        return MatchingClass::Other;
    }
    let parity = tree.nodes[leaves[0]].color;
    let size = cfg.size();
    match center.perimeter_edges.len() {
        0 if size == 4 * k => match parity {
            Parity::Even => MatchingClass::TwoSemiearEven,
            Parity::Odd => MatchingClass::TwoSemiearOdd,
        },
        1 if size == 4 * k + 2 => match parity {
            Parity::Even => MatchingClass::NearTwoSemiearEven,
            Parity::Odd => MatchingClass::NearTwoSemiearOdd,
        },
        _ => MatchingClass::Other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleTag {
    InsideCycle,
    Ear,
    Crossing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingCycle {
    /// Chords in traversal order, alternating first-matching / second-matching.
    pub chords: Vec<Chord>,
    pub tag: CycleTag,
    /// Set when the cycle bounds a semicycle of the first matching.
    pub semicycle: Option<Semicycle>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymDiffStructure {
    pub common: Vec<Chord>,
    pub cycles: Vec<AlternatingCycle>,
}

pub fn sym_diff_structure(m1: &PlaneMatching, m2: &PlaneMatching) -> Result<SymDiffStructure> {
    m1.same_config(m2)?;
    let size = m1.size();
    let common: Vec<Chord> = m1
        .edges()
        .iter()
        .copied()
        .filter(|c| m2.contains(*c))
        .collect();
    let mut seen = vec![false; size];
    let mut cycles = Vec::new();
    for start in 0..size {
        if seen[start] || m1.partner(start) == m2.partner(start) {
            continue;
        }
        let mut chords = Vec::new();
        let mut p = start;
        let mut use_first = true;
        loop {
            seen[p] = true;
            let q = if use_first {
                m1.partner(p)
            } else {
                m2.partner(p)
            };
            chords.push(Chord::new(p, q));
            p = q;
            use_first = !use_first;
            if p == start && use_first {
                break;
            }
        }
        let x: BTreeSet<Chord> = chords.iter().step_by(2).copied().collect();
        let cycle_set: BTreeSet<Chord> = chords.iter().copied().collect();
        let planar = crate::geometry::first_crossing(&chords).is_none();
        let semicycle = if planar {
            semicycle_of(m1, &x)
                .filter(|s| s.boundary.iter().copied().collect::<BTreeSet<_>>() == cycle_set)
        } else {
            None
        };
        let tag = match &semicycle {
            Some(s) if s.kind == SemicycleKind::InsideCycle => CycleTag::InsideCycle,
            Some(_) => CycleTag::Ear,
            None => CycleTag::Crossing,
        };
        cycles.push(AlternatingCycle {
            chords,
            tag,
            semicycle,
        });
    }
    Ok(SymDiffStructure { common, cycles })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize) -> ConvexConfig {
        ConvexConfig::new(n).unwrap()
    }

    fn pm(n: usize, pairs: &[(usize, usize)]) -> PlaneMatching {
        let chords: Vec<Chord> = pairs.iter().map(|&(a, b)| Chord::new(a, b)).collect();
        PlaneMatching::from_chords(cfg(n), &chords).unwrap()
    }

    fn catalan_oracle(n: usize) -> u64 {
        // point 0 pairs with an odd offset partner; the two sides recurse
        let mut c = vec![0u64; n + 1];
        c[0] = 1;
        for k in 1..=n {
            c[k] = (0..k).map(|i| c[i] * c[k - 1 - i]).sum();
        }
        c[n]
    }

    fn example10() -> PlaneMatching {
        pm(10, &[(1, 2), (0, 3), (4, 7), (5, 6), (8, 9)])
    }

    #[test]
    fn enumeration_counts_match_recursion() {
        for size in (2..=16).step_by(2) {
            let all = enumerate_matchings(cfg(size));
            assert_eq!(all.len() as u64, catalan_oracle(size / 2), "size {size}");
            for w in all.windows(2) {
                assert!(w[0].edges() < w[1].edges());
            }
        }
        assert_eq!(enumerate_matchings(cfg(10)).len(), 42);
        assert_eq!(enumerate_matchings(cfg(16)).len(), 1430);
    }

    #[test]
    fn perimeter_matchings() {
        assert_eq!(
            perimeter_matching(cfg(6), Parity::Even),
            pm(6, &[(0, 1), (2, 3), (4, 5)])
        );
        assert_eq!(
            perimeter_matching(cfg(6), Parity::Odd),
            pm(6, &[(1, 2), (3, 4), (5, 0)])
        );
        assert_eq!(perimeter_matching(cfg(2), Parity::Even), pm(2, &[(0, 1)]));
    }

    #[test]
    fn matching_validation() {
        let c = cfg(6);
        assert!(matches!(
            PlaneMatching::from_chords(c, &[Chord::new(0, 1), Chord::new(2, 3)]),
            Err(Error::NotAMatching(MatchingViolation::Uncovered(4)))
        ));
        assert!(matches!(
            PlaneMatching::from_chords(c, &[Chord::new(0, 3), Chord::new(1, 4), Chord::new(2, 5)]),
            Err(Error::NotAMatching(MatchingViolation::Crossing(_, _)))
        ));
        assert!(matches!(
            PlaneMatching::from_chords(c, &[Chord::new(0, 1), Chord::new(1, 2), Chord::new(4, 5)]),
            Err(Error::NotAMatching(MatchingViolation::Duplicate(1)))
        ));
    }

    #[test]
    fn semicycle_examples() {
        let m = pm(6, &[(0, 1), (2, 3), (4, 5)]);
        let s = is_semicycle(&m, &[Chord::new(0, 1), Chord::new(2, 3)])
            .unwrap()
            .unwrap();
        assert_eq!(s.kind, SemicycleKind::Semiear);
        let b: BTreeSet<Chord> = s.boundary.iter().copied().collect();
        let expect: BTreeSet<Chord> = [(0, 1), (1, 2), (2, 3), (0, 3)]
            .iter()
            .map(|&(a, b)| Chord::new(a, b))
            .collect();
        assert_eq!(b, expect);
        assert_eq!(rotate(&m, &s).unwrap(), pm(6, &[(1, 2), (0, 3), (4, 5)]));

        let m = example10();
        let s = is_semicycle(&m, &[Chord::new(0, 3), Chord::new(4, 7)])
            .unwrap()
            .unwrap();
        assert_eq!(s.kind, SemicycleKind::InsideCycle);
        assert_eq!(s.diagonal_count(&m.config()), 3);

        // {1,2} and {4,7}: the hull is crossed by {0,3}
        assert!(is_semicycle(&m, &[Chord::new(1, 2), Chord::new(5, 6)])
            .unwrap()
            .is_none());
        assert!(is_semicycle(&m, &[Chord::new(1, 3), Chord::new(5, 6)]).is_err());
        assert!(is_semicycle(&m, &[Chord::new(1, 2)]).is_err());
    }

    #[test]
    fn rotation_is_involutive_and_matches_boundary() {
        for size in (4..=10).step_by(2) {
            for m in enumerate_matchings(cfg(size)) {
                let n = m.edges().len();
                for mask in 1u32..(1 << n) {
                    if mask.count_ones() < 2 {
                        continue;
                    }
                    let x: Vec<Chord> = (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| m.edges()[i])
                        .collect();
                    let Some(s) = is_semicycle(&m, &x).unwrap() else {
                        continue;
                    };
                    let r = rotate(&m, &s).unwrap();
                    let diff: BTreeSet<Chord> = m
                        .edges()
                        .iter()
                        .chain(r.edges())
                        .copied()
                        .filter(|c| m.contains(*c) != r.contains(*c))
                        .collect();
                    let boundary: BTreeSet<Chord> = s.boundary.iter().copied().collect();
                    assert_eq!(diff, boundary);
                    let back = is_semicycle(&r, &s.complement())
                        .unwrap()
                        .expect("complement is a semicycle");
                    assert_eq!(rotate(&r, &back).unwrap(), m);
                }
            }
        }
    }

    #[test]
    fn rotating_perimeter_matching_gives_the_other() {
        for size in (6..=10).step_by(2) {
            let c = cfg(size);
            let even = perimeter_matching(c, Parity::Even);
            let s = is_semicycle(&even, even.edges()).unwrap().unwrap();
            assert_eq!(
                rotate(&even, &s).unwrap(),
                perimeter_matching(c, Parity::Odd)
            );
        }
    }

    #[test]
    fn dual_tree_examples() {
        let even = perimeter_matching(cfg(10), Parity::Even);
        let t = dual_tree(&even);
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.leaf_counts(), (0, 1));
        assert_eq!(semiears(&even).len(), 1);

        let t = dual_tree(&example10());
        assert_eq!(t.nodes.len(), 3);
        assert_eq!(t.leaves().len(), 2);
        assert_eq!(t.inner_nodes().len(), 1);
        assert_eq!(semiears(&example10()).len(), 2);
    }

    #[test]
    fn dual_tree_invariants() {
        for size in (2..=12).step_by(2) {
            let c = cfg(size);
            for m in enumerate_matchings(c) {
                let t = dual_tree(&m);
                let diags = m.diagonals().count();
                assert_eq!(t.nodes.len(), diags + 1);
                assert_eq!(t.edges.len(), diags);
                // every point covered, matching edges partitioned over regions
                let mut count = 0;
                for r in &t.nodes {
                    count += r.perimeter_edges.len();
                    for e in &r.perimeter_edges {
                        assert_eq!(c.perimeter_parity(*e), Some(r.color));
                    }
                }
                assert_eq!(count, m.perimeter_edges().count());
                for &(x, y, _) in &t.edges {
                    assert_ne!(t.nodes[x].color, t.nodes[y].color);
                }
                for l in t.leaves() {
                    if diags > 0 {
                        assert_eq!(t.nodes[l].diagonals.len(), 1);
                    }
                }
                if diags > 0 {
                    assert!(semiears(&m).len() >= 2);
                }
                for s in semiears(&m) {
                    assert_eq!(s.kind, SemicycleKind::Semiear);
                }
            }
        }
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_matching(&perimeter_matching(cfg(10), Parity::Even)),
            MatchingClass::PerimeterEven
        );
        assert_eq!(
            classify_matching(&perimeter_matching(cfg(10), Parity::Odd)),
            MatchingClass::PerimeterOdd
        );
        // three even 2-semiears around an inside 3-semicycle of diagonals
        let two = pm(12, &[(0, 3), (1, 2), (4, 7), (5, 6), (8, 11), (9, 10)]);
        assert_eq!(classify_matching(&two), MatchingClass::TwoSemiearOdd);
        let two = pm(12, &[(1, 4), (2, 3), (5, 8), (6, 7), (9, 0), (10, 11)]);
        assert_eq!(classify_matching(&two), MatchingClass::TwoSemiearEven);
        assert_eq!(semiears(&two).len(), 3);
        assert!(semiears(&two).iter().all(|s| s.len() == 2));
        let near = pm(10, &[(1, 4), (2, 3), (5, 8), (6, 7), (9, 0)]);
        assert_eq!(classify_matching(&near), MatchingClass::NearTwoSemiearEven);
        for size in (2..=14).step_by(2) {
            for m in enumerate_matchings(cfg(size)) {
                match classify_matching(&m) {
                    MatchingClass::TwoSemiearEven | MatchingClass::TwoSemiearOdd => {
                        assert_eq!(size % 4, 0)
                    }
                    MatchingClass::NearTwoSemiearEven | MatchingClass::NearTwoSemiearOdd => {
                        assert_eq!(size % 4, 2)
                    }
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn sym_diff_examples() {
        let c = cfg(10);
        let m = example10();
        let s = sym_diff_structure(&m, &m).unwrap();
        assert!(s.cycles.is_empty());
        assert_eq!(s.common.len(), 5);

        let even = perimeter_matching(c, Parity::Even);
        let odd = perimeter_matching(c, Parity::Odd);
        let s = sym_diff_structure(&even, &odd).unwrap();
        assert_eq!(s.cycles.len(), 1);
        assert_eq!(s.cycles[0].chords.len(), 10);
        assert_eq!(s.cycles[0].tag, CycleTag::Ear);

        let x = is_semicycle(&m, &[Chord::new(0, 3), Chord::new(4, 7)])
            .unwrap()
            .unwrap();
        let r = rotate(&m, &x).unwrap();
        let s = sym_diff_structure(&m, &r).unwrap();
        assert_eq!(s.cycles.len(), 1);
        assert_eq!(s.cycles[0].tag, CycleTag::InsideCycle);

        for a in enumerate_matchings(c) {
            for b in enumerate_matchings(c) {
                let s = sym_diff_structure(&a, &b).unwrap();
                let union: BTreeSet<Chord> =
                    s.cycles.iter().flat_map(|cy| cy.chords.clone()).collect();
                let diff: BTreeSet<Chord> = a
                    .edges()
                    .iter()
                    .chain(b.edges())
                    .copied()
                    .filter(|e| a.contains(*e) != b.contains(*e))
                    .collect();
                assert_eq!(union, diff);
                for cy in &s.cycles {
                    for (i, e) in cy.chords.iter().enumerate() {
                        assert_eq!(a.contains(*e), i % 2 == 0);
                        assert_eq!(b.contains(*e), i % 2 == 1);
                    }
                }
            }
        }
    }

    #[test]
    fn semiear_block_matchings() {
        let c12 = ConvexConfig::new(12).unwrap();
        let odd = two_semiear_matching(c12, Parity::Odd).unwrap();
        assert_eq!(dual_tree(&odd).leaf_counts(), (3, 0));
        assert_eq!(
            dual_tree(&two_semiear_matching(c12, Parity::Even).unwrap()).leaf_counts(),
            (0, 3)
        );
        let c10 = ConvexConfig::new(10).unwrap();
        let near = near_two_semiear_matching(c10, Parity::Even).unwrap();
        assert_eq!(
            (
                near.count_perimeter(Parity::Even),
                near.count_perimeter(Parity::Odd)
            ),
            (2, 1)
        );
        assert_eq!(
            inside_semicycles(&near, None)
                .iter()
                .filter(|s| s.len() == 3)
                .count(),
            1
        );
        assert!(two_semiear_matching(c10, Parity::Odd).is_err());
        assert!(near_two_semiear_matching(c12, Parity::Odd).is_err());
    }

    #[test]
    fn interleaved_hulls_are_rejected() {
        let m = perimeter_matching(ConvexConfig::new(12).unwrap(), Parity::Even);
        let c = |a, b| Chord::new(a, b);
        let x = is_semicycle(&m, &[c(0, 1), c(2, 3), c(4, 5), c(8, 9)])
            .unwrap()
            .unwrap();
        let y = is_semicycle(&m, &[c(6, 7), c(10, 11)]).unwrap().unwrap();
        assert!(rotate(&m, &x).is_ok() && rotate(&m, &y).is_ok());
        assert_eq!(rotate_all(&m, &[x, y]), Err(Error::OverlappingSemicycles));
    }
}
