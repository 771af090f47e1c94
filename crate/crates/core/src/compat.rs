//! Deciders for disjoint compatibility with a spanning drawing from a family.

use crate::arrangement::{boundary_areas, BoundaryArea};
use crate::error::Result;
use crate::geometry::{cross, Chord, ChordSet, Parity};
use crate::matching::{
    classify_matching, semiears, sym_diff_structure, CycleTag, MatchingClass, PlaneMatching,
};
use std::fmt;
use thiserror::Error;

/// Families of plane spanning drawings, from largest to smallest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Tree,
    Caterpillar,
    OneLeggedCaterpillar,
    Path,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Tree,
        Family::Caterpillar,
        Family::OneLeggedCaterpillar,
        Family::Path,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Tree => "tree",
            Family::Caterpillar => "caterpillar",
            Family::OneLeggedCaterpillar => "onelegged",
            Family::Path => "path",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "tree" | "t" => Some(Family::Tree),
            "caterpillar" | "c" => Some(Family::Caterpillar),
            "onelegged" | "one-legged" | "c3" => Some(Family::OneLeggedCaterpillar),
            "path" | "p" => Some(Family::Path),
            _ => None,
        }
    }

    /// Whether a tree of the given most-specific shape belongs to this family.
    pub fn admits(self, shape: Family) -> bool {
        shape >= self
    }

    fn degree_cap(self) -> usize {
        match self {
            Family::Path => 2,
            Family::OneLeggedCaterpillar => 3,
            _ => usize::MAX,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A plane spanning drawing claimed to belong to `kind`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: Family,
    pub edges: Vec<Chord>,
}

impl Witness {
    pub fn new(kind: Family, mut edges: Vec<Chord>) -> Self {
        edges.sort();
        Witness { kind, edges }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessViolation {
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("edge {0} is out of range or repeated")]
    BadEdge(Chord),
    #[error("edges {0} and {1} cross")]
    SelfCrossing(Chord, Chord),
    #[error("edge set is not a spanning tree")]
    NotSpanningTree,
    #[error("tree is not a {0}")]
    WrongKind(Family),
    #[error("edge {0} is shared with a matching")]
    SharedEdge(Chord),
    #[error("edge {0} crosses matching edge {1}")]
    CrossesMatching(Chord, Chord),
}

/// Most specific family containing the tree, or `None` if the edges do not
/// form a spanning tree on `size` points.
pub fn tree_shape(size: usize, edges: &[Chord]) -> Option<Family> {
    if edges.len() + 1 != size {
        return None;
    }
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut deg = vec![0usize; size];
    for e in edges {
        if e.b >= size {
            return None;
        }
        let (x, y) = (find(&mut parent, e.a), find(&mut parent, e.b));
        if x == y {
            return None;
        }
        parent[x] = y;
        deg[e.a] += 1;
        deg[e.b] += 1;
    }
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    if max_deg <= 2 {
        return Some(Family::Path);
    }
    // caterpillar iff every inner vertex has at most two inner neighbours
    let mut inner_nbrs = vec![0usize; size];
    for e in edges {
        if deg[e.a] >= 2 && deg[e.b] >= 2 {
            inner_nbrs[e.a] += 1;
            inner_nbrs[e.b] += 1;
        }
    }
    if inner_nbrs.iter().any(|&k| k > 2) {
        return Some(Family::Tree);
    }
    if max_deg <= 3 {
        Some(Family::OneLeggedCaterpillar)
    } else {
        Some(Family::Caterpillar)
    }
}

/// Full check of a witness against both matchings.
pub fn validate_witness(
    w: &Witness,
    m1: &PlaneMatching,
    m2: &PlaneMatching,
) -> std::result::Result<(), WitnessViolation> {
    let size = m1.size();
    if w.edges.len() + 1 != size {
        return Err(WitnessViolation::EdgeCount {
            expected: size - 1,
            found: w.edges.len(),
        });
    }
    let mut seen = ChordSet::empty();
    for &e in &w.edges {
        if e.a >= e.b || e.b >= size || seen.contains(e) {
            return Err(WitnessViolation::BadEdge(e));
        }
        seen.insert(e);
    }
    if let Some((x, y)) = crate::geometry::first_crossing(&w.edges) {
        return Err(WitnessViolation::SelfCrossing(x, y));
    }
    let shape = tree_shape(size, &w.edges).ok_or(WitnessViolation::NotSpanningTree)?;
    if !w.kind.admits(shape) {
        return Err(WitnessViolation::WrongKind(w.kind));
    }
    for m in [m1, m2] {
        for &e in &w.edges {
            if m.contains(e) {
                return Err(WitnessViolation::SharedEdge(e));
            }
            if let Some(f) = m.edges().iter().find(|f| cross(e, **f)) {
                return Err(WitnessViolation::CrossesMatching(e, *f));
            }
        }
    }
    Ok(())
}

/// Chords in neither matching that cross no edge of either.
pub fn allowed_edges(m1: &PlaneMatching, m2: &PlaneMatching) -> Result<ChordSet> {
    m1.same_config(m2)?;
    Ok(ChordSet(compatible_chords(m1).0 & compatible_chords(m2).0))
}

/// Chords disjoint compatible with a single matching.
pub fn compatible_chords(m: &PlaneMatching) -> ChordSet {
    let cfg = m.config();
    cfg.all_chords()
        .filter(|c| !m.contains(*c) && !m.edges().iter().any(|e| cross(*c, *e)))
        .collect()
}

/// Connectivity of the allowed-edge graph; necessary for a tree witness.
pub fn tree_prefilter(m1: &PlaneMatching, m2: &PlaneMatching) -> Result<bool> {
    let allowed = allowed_edges(m1, m2)?;
    let size = m1.size();
    let mut adj = vec![0u32; size];
    for c in allowed.iter() {
        adj[c.a] |= 1 << c.b;
        adj[c.b] |= 1 << c.a;
    }
    Ok(reach_all(&adj, size))
}

fn reach_all(adj: &[u32], size: usize) -> bool {
    let full: u32 = if size == 32 {
        u32::MAX
    } else {
        (1u32 << size) - 1
    };
    let mut seen: u32 = 1;
    let mut frontier: u32 = 1;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == full
}

/// Exact decision: a drawing of `kind` disjoint compatible to both matchings.
pub fn exists_witness(
    m1: &PlaneMatching,
    m2: &PlaneMatching,
    kind: Family,
) -> Result<Option<Witness>> {
    let allowed = allowed_edges(m1, m2)?;
    let size = m1.size();
    let found = match kind {
        Family::Path => path_search(size, allowed),
        _ => TreeSearch::new(size, allowed, kind).run(),
    };
    if let Some(w) = &found {
        debug_assert_eq!(validate_witness(w, m1, m2), Ok(()));
    }
    Ok(found)
}

/// Plane Hamiltonian paths on a convex set visit a growing arc, so a path is
/// a start point plus a sequence of extensions at either end of the arc.
fn path_search(size: usize, allowed: ChordSet) -> Option<Witness> {
    let ok = |x: usize, y: usize| allowed.contains(Chord::new(x, y));
    if size == 2 {
        return ok(0, 1).then(|| Witness::new(Family::Path, vec![Chord::new(0, 1)]));
    }
    // state: arc start, arc length, current endpoint at the arc's left (0) or right (1) end
    let mut dead = vec![false; size * (size + 1) * 2];
    fn go(
        size: usize,
        start: usize,
        len: usize,
        at_right: bool,
        ok: &dyn Fn(usize, usize) -> bool,
        dead: &mut [bool],
        path: &mut Vec<Chord>,
    ) -> bool {
        if len == size {
            return true;
        }
        let key = (start * (size + 1) + len) * 2 + at_right as usize;
        if dead[key] {
            return false;
        }
        let cur = if at_right {
            (start + len - 1) % size
        } else {
            start
        };
        let left = (start + size - 1) % size;
        let right = (start + len) % size;
        if ok(cur, left) {
            path.push(Chord::new(cur, left));
            if go(size, left, len + 1, false, ok, dead, path) {
                return true;
            }
            path.pop();
        }
        if right != left && ok(cur, right) {
            path.push(Chord::new(cur, right));
            if go(size, start, len + 1, true, ok, dead, path) {
                return true;
            }
            path.pop();
        }
        dead[key] = true;
        false
    }
    let mut path = Vec::with_capacity(size - 1);
    for s in 0..size {
        if go(size, s, 1, false, &ok, &mut dead, &mut path) {
            return Some(Witness::new(Family::Path, path));
        }
    }
    None
}

/// Backtracking over plane spanning trees built from allowed chords: every
/// non-root point picks the edge towards the root, with pruning on crossings,
/// degree caps, caterpillar shape and reachability.
struct TreeSearch {
    size: usize,
    family: Family,
    chords: Vec<Chord>,
    incident: Vec<Vec<usize>>,
    crosses: Vec<u128>,
}

#[derive(Clone)]
struct SearchState {
    chosen: Vec<usize>,
    chosen_mask: u128,
    blocked: u128,
    comp: Vec<u8>,
    deg: Vec<u8>,
    assigned: u32,
}

impl TreeSearch {
    fn new(size: usize, allowed: ChordSet, family: Family) -> Self {
        let chords: Vec<Chord> = allowed.iter().collect();
        let mut incident = vec![Vec::new(); size];
        for (i, c) in chords.iter().enumerate() {
            incident[c.a].push(i);
            incident[c.b].push(i);
        }
        let crosses = chords
            .iter()
            .map(|c| {
                chords
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| cross(*c, **d))
                    .fold(0u128, |acc, (j, _)| acc | 1u128 << j)
            })
            .collect();
        TreeSearch {
            size,
            family,
            chords,
            incident,
            crosses,
        }
    }

    fn run(&self) -> Option<Witness> {
        let state = SearchState {
            chosen: Vec::with_capacity(self.size),
            chosen_mask: 0,
            blocked: 0,
            comp: (0..self.size as u8).collect(),
            deg: vec![0; self.size],
            assigned: 1,
        };
        self.dfs(state).map(|idx| {
            Witness::new(
                self.family,
                idx.into_iter().map(|i| self.chords[i]).collect(),
            )
        })
    }

    fn reachable(&self, st: &SearchState) -> bool {
        let mut adj = vec![0u32; self.size];
        let mut avail = !st.blocked & self.full_mask();
        while avail != 0 {
            let i = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            let c = self.chords[i];
            adj[c.a] |= 1 << c.b;
            adj[c.b] |= 1 << c.a;
        }
        reach_all(&adj, self.size)
    }

    fn full_mask(&self) -> u128 {
        if self.chords.len() >= 128 {
            u128::MAX
        } else {
            (1u128 << self.chords.len()) - 1
        }
    }

    fn candidates(&self, st: &SearchState, v: usize) -> Vec<usize> {
        let cap = self.family.degree_cap();
        self.incident[v]
            .iter()
            .copied()
            .filter(|&i| {
                let c = self.chords[i];
                let u = c.other(v);
                st.blocked >> i & 1 == 0
                    && st.comp[u] != st.comp[v]
                    && (st.deg[u] as usize) < cap
                    && (st.deg[v] as usize) < cap
            })
            .collect()
    }

    fn caterpillar_ok(&self, st: &SearchState) -> bool {
        let mut inner = vec![0u8; self.size];
        for &i in &st.chosen {
            let c = self.chords[i];
            if st.deg[c.a] >= 2 && st.deg[c.b] >= 2 {
                inner[c.a] += 1;
                inner[c.b] += 1;
            }
        }
        inner.iter().all(|&k| k <= 2)
    }

    fn dfs(&self, st: SearchState) -> Option<Vec<usize>> {
        if st.chosen.len() + 1 == self.size {
            let edges: Vec<Chord> = st.chosen.iter().map(|&i| self.chords[i]).collect();
            let shape = tree_shape(self.size, &edges)?;
            return self.family.admits(shape).then_some(st.chosen);
        }
        if !self.reachable(&st) {
            return None;
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for v in 1..self.size {
            if st.assigned >> v & 1 == 1 {
                continue;
            }
            let cands = self.candidates(&st, v);
            if cands.is_empty() {
                return None;
            }
            if best.as_ref().is_none_or(|(_, b)| cands.len() < b.len()) {
                best = Some((v, cands));
            }
        }
        let (v, cands) = best?;
        let shape_check = matches!(
            self.family,
            Family::Caterpillar | Family::OneLeggedCaterpillar
        );
        for i in cands {
            let c = self.chords[i];
            let mut next = st.clone();
            next.chosen.push(i);
            next.chosen_mask |= 1u128 << i;
            next.blocked |= self.crosses[i];
            let (keep, gone) = (next.comp[c.a], next.comp[c.b]);
            for x in next.comp.iter_mut() {
                if *x == gone {
                    *x = keep;
                }
            }
            next.deg[c.a] += 1;
            next.deg[c.b] += 1;
            next.assigned |= 1 << v;
            if shape_check && !self.caterpillar_ok(&next) {
                continue;
            }
            if let Some(found) = self.dfs(next) {
                return Some(found);
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObstructionKind {
    EarObstruction,
    BoundaryAreaObstruction,
    TwoSemiearParity,
    NearTwoSemiearParity,
    SharedPerimeterDeficit,
    ThreeSemiears,
}

impl ObstructionKind {
    pub fn name(self) -> &'static str {
        match self {
            ObstructionKind::EarObstruction => "EarObstruction",
            ObstructionKind::BoundaryAreaObstruction => "BoundaryAreaObstruction",
            ObstructionKind::TwoSemiearParity => "TwoSemiearParity",
            ObstructionKind::NearTwoSemiearParity => "NearTwoSemiearParity",
            ObstructionKind::SharedPerimeterDeficit => "SharedPerimeterDeficit",
            ObstructionKind::ThreeSemiears => "ThreeSemiears",
        }
    }
}

/// Certificate that no spanning tree (or path) is disjoint compatible to both matchings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    pub chords: Vec<Chord>,
    pub points: Vec<usize>,
}

impl Obstruction {
    fn new(kind: ObstructionKind, chords: Vec<Chord>, points: Vec<usize>) -> Self {
        Obstruction {
            kind,
            chords,
            points,
        }
    }
}

/// Sufficient conditions for two matchings not to be tree-compatible, checked
/// in a fixed order. `None` is not a compatibility guarantee.
pub fn find_obstruction(m1: &PlaneMatching, m2: &PlaneMatching) -> Result<Option<Obstruction>> {
    m1.same_config(m2)?;
    let cfg = m1.config();
    let shared: Vec<Chord> = m1.perimeter_edges().filter(|c| m2.contains(*c)).collect();
    if shared.len() < 2 {
        return Ok(Some(Obstruction::new(
            ObstructionKind::SharedPerimeterDeficit,
            shared,
            Vec::new(),
        )));
    }
    let sd = sym_diff_structure(m1, m2)?;
    if let Some(cy) = sd.cycles.iter().find(|c| c.tag == CycleTag::Ear) {
        let points = cy
            .semicycle
            .as_ref()
            .map(|s| s.points.clone())
            .unwrap_or_default();
        return Ok(Some(Obstruction::new(
            ObstructionKind::EarObstruction,
            cy.chords.clone(),
            points,
        )));
    }
    let areas: Vec<BoundaryArea> = boundary_areas(m1, m2)?;
    if let Some(a) = areas.into_iter().find(|a| a.point_count() >= 3) {
        return Ok(Some(Obstruction::new(
            ObstructionKind::BoundaryAreaObstruction,
            a.chords,
            a.points,
        )));
    }
    for (a, b) in [(m1, m2), (m2, m1)] {
        let bad_parity = match classify_matching(a) {
            MatchingClass::TwoSemiearEven => Some(Parity::Odd),
            MatchingClass::TwoSemiearOdd => Some(Parity::Even),
            _ => None,
        };
        if let Some(p) = bad_parity {
            if let Some(e) = b
                .perimeter_edges()
                .find(|c| cfg.perimeter_parity(*c) == Some(p))
            {
                return Ok(Some(Obstruction::new(
                    ObstructionKind::TwoSemiearParity,
                    vec![e],
                    Vec::new(),
                )));
            }
        }
    }
    for (a, b) in [(m1, m2), (m2, m1)] {
        let lone = match classify_matching(a) {
            MatchingClass::NearTwoSemiearEven => Parity::Odd,
            MatchingClass::NearTwoSemiearOdd => Parity::Even,
            _ => continue,
        };
        let own: Vec<Chord> = a
            .perimeter_edges()
            .filter(|c| cfg.perimeter_parity(*c) == Some(lone))
            .collect();
        if let Some(e) = b
            .perimeter_edges()
            .find(|c| cfg.perimeter_parity(*c) == Some(lone) && !own.contains(c))
        {
            return Ok(Some(Obstruction::new(
                ObstructionKind::NearTwoSemiearParity,
                vec![e],
                Vec::new(),
            )));
        }
    }
    Ok(None)
}

/// Family-aware obstruction: adds the three-semiear condition for paths.
pub fn find_family_obstruction(
    m1: &PlaneMatching,
    m2: &PlaneMatching,
    family: Family,
) -> Result<Option<Obstruction>> {
    m1.same_config(m2)?;
    if family == Family::Path {
        for m in [m1, m2] {
            let ears = semiears(m);
            if ears.len() >= 3 {
                let chords = ears.iter().flat_map(|s| s.members.clone()).collect();
                return Ok(Some(Obstruction::new(
                    ObstructionKind::ThreeSemiears,
                    chords,
                    Vec::new(),
                )));
            }
        }
    }
    find_obstruction(m1, m2)
}

/// Shared perimeter edge count.
pub fn shared_perimeter_edges(m1: &PlaneMatching, m2: &PlaneMatching) -> usize {
    m1.perimeter_edges().filter(|c| m2.contains(*c)).count()
}
