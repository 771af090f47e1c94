use super::{graph_search_sequence, tree_path_between, RotationSequence, RotationStep};
use crate::compat::{validate_witness, Family, Witness};
use crate::error::{Error, Result};
use crate::geometry::{cross, Chord, ConvexConfig};
use crate::matching::{
    enumerate_matchings, inside_semicycles, is_semicycle, rotate, PlaneMatching, Semicycle,
    SemicycleKind,
};
use std::collections::{HashMap, VecDeque};

/// Direction of the walk from the start point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Increasing point indices.
    Ccw,
    /// Decreasing point indices.
    Cw,
}

/// A caterpillar on `p`, `q` and the points between them on one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCaterpillar {
    /// Spine from `p` to `q`.
    pub spine: Vec<usize>,
    /// `(leaf, spine point)` pairs.
    pub legs: Vec<(usize, usize)>,
    pub edges: Vec<Chord>,
}

impl PartialCaterpillar {
    pub fn start(&self) -> usize {
        self.spine[0]
    }

    pub fn end(&self) -> usize {
        *self.spine.last().expect("spine is never empty")
    }
}

fn step(cfg: &ConvexConfig, p: usize, side: Side) -> usize {
    match side {
        Side::Ccw => cfg.next(p),
        Side::Cw => cfg.prev(p),
    }
}

/// Walk from `p` to `q` over the points between them on `side`, taking `xy`
/// when it is not a matching edge and otherwise `xz`, `yz` with `y` a leg.
fn greedy_walk(m: &PlaneMatching, p: usize, q: usize, side: Side) -> Result<PartialCaterpillar> {
    let cfg = m.config();
    if step(&cfg, p, side) == q {
        return Err(Error::Construction(format!(
            "no points between {p} and {q} on that side"
        )));
    }
    let mut spine = vec![p];
    let mut legs = Vec::new();
    let mut edges = Vec::new();
    let mut x = p;
    while x != q {
        let y = step(&cfg, x, side);
        if !m.contains(Chord::new(x, y)) {
            edges.push(Chord::new(x, y));
            spine.push(y);
            x = y;
            continue;
        }
        // the matching pairs points between p and q among themselves, so z never passes q
        assert!(y != q, "greedy walk reached the closing edge");
        let z = step(&cfg, y, side);
        edges.push(Chord::new(x, z));
        edges.push(Chord::new(y, z));
        legs.push((y, z));
        spine.push(z);
        x = z;
    }
    Ok(PartialCaterpillar { spine, legs, edges })
}

/// One-legged caterpillar from `p` to the partner of `p` over the points on
/// `side`, disjoint compatible to `m`.
pub fn greedy_caterpillar(
    m: &PlaneMatching,
    e: Chord,
    p: usize,
    side: Side,
) -> Result<PartialCaterpillar> {
    if !m.contains(e) {
        return Err(Error::NotSubset(e));
    }
    if !e.contains(p) {
        return Err(Error::Construction(format!(
            "{p} is not an endpoint of {e}"
        )));
    }
    greedy_walk(m, p, e.other(p), side)
}

fn inside(m: &PlaneMatching, k: &Semicycle) -> Result<Semicycle> {
    match is_semicycle(m, &k.members)? {
        Some(s) if s.kind == SemicycleKind::InsideCycle => Ok(s),
        Some(_) => Err(Error::NotInsideCycle),
        None => Err(Error::InvalidSemicycle),
    }
}

fn emit(kind: Family, edges: Vec<Chord>, m: &PlaneMatching, k: &Semicycle) -> Result<Witness> {
    let after = rotate(m, k)?;
    let w = Witness::new(kind, edges);
    validate_witness(&w, m, &after)
        .map_err(|v| Error::Construction(format!("{kind} for {m}: {v}")))?;
    Ok(w)
}

/// Greedy caterpillar across the pocket of hull boundary edge `i`, from
/// `points[i]` (counterclockwise) to `points[i+1]`.
fn pocket(m: &PlaneMatching, k: &Semicycle, i: usize) -> Result<PartialCaterpillar> {
    let len = k.points.len();
    greedy_walk(m, k.points[i], k.points[(i + 1) % len], Side::Ccw)
}

/// Chain of pocket caterpillars over a run of consecutive diagonal boundary edges.
struct Piece {
    /// Hull positions covered, in counterclockwise order.
    hull: Vec<usize>,
    edges: Vec<Chord>,
}

/// Spanning caterpillar disjoint compatible to `m` and to `m` with `k` rotated.
///
/// Pocket caterpillars of consecutive diagonals merge into pieces. The pieces
/// are linked by chords inside the hull into one spine, and hull points between
/// two perimeter boundary edges join as legs (or as spine points). Links are
/// found by a search trying the outside-in order first.
pub fn caterpillar_for_inside_cycle(m: &PlaneMatching, k: &Semicycle) -> Result<Witness> {
    let cfg = m.config();
    let k = inside(m, k)?;
    let len = k.points.len();
    let diag: Vec<bool> = k.boundary.iter().map(|b| !cfg.is_perimeter(*b)).collect();
    if diag.iter().all(|&d| d) {
        let mut edges = Vec::new();
        for i in 0..len {
            edges.extend(pocket(m, &k, i)?.edges);
        }
        // the spines close up into a cycle through the hull points
        let first = pocket(m, &k, 0)?;
        let cut = Chord::new(first.spine[0], first.spine[1]);
        edges.retain(|e| *e != cut);
        return emit(Family::Caterpillar, edges, m, &k);
    }
    let z = (0..len)
        .find(|&i| !diag[i])
        .expect("a perimeter boundary edge");
    let mut pieces: Vec<Piece> = Vec::new();
    let mut gaps: Vec<usize> = Vec::new();
    let mut open: Option<Piece> = None;
    for off in 1..=len {
        let i = (z + off) % len;
        if diag[i] {
            let p = pocket(m, &k, i)?;
            let piece = open.get_or_insert_with(|| Piece {
                hull: vec![i],
                edges: Vec::new(),
            });
            piece.hull.push((i + 1) % len);
            piece.edges.extend(p.edges);
        } else {
            match open.take() {
                Some(piece) => pieces.push(piece),
                // both boundary edges at hull position i are perimeter edges
                None => gaps.push(i),
            }
        }
    }
    if let Some(piece) = open.take() {
        pieces.push(piece);
    }
    let links = link_pieces(&k, &pieces, &gaps).ok_or_else(|| {
        Error::Construction(format!("no plane linking of the pieces of {:?}", k.members))
    })?;
    let mut edges: Vec<Chord> = pieces
        .iter()
        .flat_map(|p| p.edges.iter().copied())
        .collect();
    edges.extend(links);
    emit(Family::Caterpillar, edges, m, &k)
}

struct LinkSearch<'a> {
    k: &'a Semicycle,
    pieces: &'a [Piece],
    gaps: &'a [usize],
    order: Vec<usize>,
    used_piece: Vec<bool>,
    used_gap: Vec<bool>,
    chords: Vec<Chord>,
    spine_hull: Vec<usize>,
}

impl LinkSearch<'_> {
    fn chord(&self, x: usize, y: usize) -> Option<Chord> {
        let len = self.k.points.len();
        let d = (x + len - y) % len;
        if d == 1 || d == len - 1 || d == 0 {
            return None;
        }
        let c = Chord::new(self.k.points[x], self.k.points[y]);
        if self.chords.iter().any(|e| cross(*e, c)) {
            return None;
        }
        Some(c)
    }

    /// Extends the spine from hull position `end`.
    fn extend(&mut self, end: usize) -> bool {
        if self.used_piece.iter().all(|&u| u) {
            return self.legs(0);
        }
        for &pi in &self.order.clone() {
            if self.used_piece[pi] {
                continue;
            }
            let hull = &self.pieces[pi].hull;
            for (entry, exit) in [
                (hull[0], *hull.last().unwrap()),
                (*hull.last().unwrap(), hull[0]),
            ] {
                let Some(c) = self.chord(end, entry) else {
                    continue;
                };
                self.used_piece[pi] = true;
                self.chords.push(c);
                let mark = self.spine_hull.len();
                self.spine_hull.extend(hull.iter().copied());
                if self.extend(exit) {
                    return true;
                }
                self.spine_hull.truncate(mark);
                self.chords.pop();
                self.used_piece[pi] = false;
            }
        }
        for gi in 0..self.gaps.len() {
            if self.used_gap[gi] {
                continue;
            }
            let g = self.gaps[gi];
            let Some(c) = self.chord(end, g) else {
                continue;
            };
            self.used_gap[gi] = true;
            self.chords.push(c);
            self.spine_hull.push(g);
            if self.extend(g) {
                return true;
            }
            self.spine_hull.pop();
            self.chords.pop();
            self.used_gap[gi] = false;
        }
        false
    }

    /// Hangs every unused gap point from a spine hull point.
    fn legs(&mut self, from: usize) -> bool {
        let Some(gi) = (from..self.gaps.len()).find(|&i| !self.used_gap[i]) else {
            return true;
        };
        let g = self.gaps[gi];
        for h in self.spine_hull.clone() {
            let Some(c) = self.chord(g, h) else { continue };
            self.chords.push(c);
            if self.legs(gi + 1) {
                return true;
            }
            self.chords.pop();
        }
        false
    }
}

/// Plane chords inside the hull joining all pieces into one spine and
/// attaching the gap points.
fn link_pieces(k: &Semicycle, pieces: &[Piece], gaps: &[usize]) -> Option<Vec<Chord>> {
    let r = pieces.len();
    // outside-in order: first, last, second, second to last, ...
    let mut order = Vec::with_capacity(r);
    let (mut lo, mut hi) = (0, r);
    while lo < hi {
        order.push(lo);
        lo += 1;
        if lo < hi {
            hi -= 1;
            order.push(hi);
        }
    }
    let mut search = LinkSearch {
        k,
        pieces,
        gaps,
        order: order.clone(),
        used_piece: vec![false; r],
        used_gap: vec![false; gaps.len()],
        chords: Vec::new(),
        spine_hull: Vec::new(),
    };
    for &pi in &order {
        let hull = &pieces[pi].hull;
        for exit in [*hull.last().unwrap(), hull[0]] {
            search.used_piece[pi] = true;
            search.spine_hull = hull.clone();
            if search.extend(exit) {
                return Some(search.chords);
            }
            search.used_piece[pi] = false;
        }
    }
    None
}

/// Spanning one-legged caterpillar disjoint compatible to `m` and to `m`
/// with the inside 2-cycle `k` rotated, by the position of the diagonals on
/// the boundary quadrilateral.
pub fn one_legged_for_2cycle(m: &PlaneMatching, k: &Semicycle) -> Result<Witness> {
    let cfg = m.config();
    let k = inside(m, k)?;
    if k.len() != 2 {
        return Err(Error::Construction(format!(
            "expected an inside 2-cycle, got {} edges",
            k.len()
        )));
    }
    let q = &k.points;
    let diag: Vec<usize> = (0..4)
        .filter(|&i| !cfg.is_perimeter(k.boundary[i]))
        .collect();
    let mut edges = Vec::new();
    match diag.len() {
        2 if (diag[1] - diag[0]) % 2 == 1 => {
            // adjacent diagonals i, i+1 meet at q[i+1]; walk away from it on both
            let i = if diag[1] - diag[0] == 1 {
                diag[0]
            } else {
                diag[1]
            };
            let hub = q[(i + 1) % 4];
            edges.extend(greedy_walk(m, hub, q[i], Side::Cw)?.edges);
            edges.extend(greedy_walk(m, hub, q[(i + 2) % 4], Side::Ccw)?.edges);
            edges.push(Chord::new(hub, q[(i + 3) % 4]));
        }
        2 => {
            let (i, j) = (diag[0], diag[1]);
            edges.extend(greedy_walk(m, q[i], q[(i + 1) % 4], Side::Ccw)?.edges);
            edges.extend(greedy_walk(m, q[j], q[(j + 1) % 4], Side::Ccw)?.edges);
            edges.push(Chord::new(q[i], q[j]));
        }
        3 => {
            let p = (0..4)
                .find(|i| !diag.contains(i))
                .expect("one perimeter side");
            for off in 1..4 {
                let i = (p + off) % 4;
                edges.extend(greedy_walk(m, q[i], q[(i + 1) % 4], Side::Ccw)?.edges);
            }
        }
        4 => {
            for i in 0..4 {
                edges.extend(greedy_walk(m, q[i], q[(i + 1) % 4], Side::Ccw)?.edges);
            }
            let first = greedy_walk(m, q[0], q[1], Side::Ccw)?;
            let cut = Chord::new(first.spine[0], first.spine[1]);
            edges.retain(|e| *e != cut);
        }
        _ => return Err(Error::NotInsideCycle),
    }
    emit(Family::OneLeggedCaterpillar, edges, m, &k)
}

/// Quadrilaterals subdividing the hull of `k`, from the boundary diagonals at
/// positions `i` and `j`: with `u_0..u_x` the hull points after `i` up to `j`
/// and `v_0..v_y` those from `i` back to `j+1`, fans from `v_0` and `u_x`
/// (after cutting off one quadrilateral at `j` when `x` is odd).
fn quadrangulation(k: &Semicycle, i: usize, j: usize) -> Vec<[usize; 4]> {
    let len = k.points.len();
    let at = |pos: usize| k.points[pos % len];
    let x = (j + len - i - 1) % len;
    let u: Vec<usize> = (0..=x).map(|t| at(i + 1 + t)).collect();
    let y = len - 2 - x;
    let v: Vec<usize> = (0..=y).map(|t| at(i + len - t)).collect();
    let mut quads = Vec::new();
    let (mut ux, mut vy) = (x, y);
    if x % 2 == 1 {
        quads.push([u[x - 1], u[x], v[y], v[y - 1]]);
        ux -= 1;
        vy -= 1;
    }
    for t in (0..ux).step_by(2) {
        quads.push([v[0], u[t], u[t + 1], u[t + 2]]);
    }
    for t in (0..vy).step_by(2) {
        quads.push([u[ux], v[t], v[t + 1], v[t + 2]]);
    }
    quads
}

/// Orders `quads` so each is an inside 2-cycle when its turn comes.
fn order_quads(
    m: &PlaneMatching,
    quads: &[[usize; 4]],
    used: &mut Vec<bool>,
    out: &mut Vec<Semicycle>,
) -> Result<Option<PlaneMatching>> {
    if used.iter().all(|&u| u) {
        return Ok(Some(m.clone()));
    }
    for qi in 0..quads.len() {
        if used[qi] {
            continue;
        }
        let q = quads[qi];
        let sides = [0, 1, 2, 3].map(|t| Chord::new(q[t], q[(t + 1) % 4]));
        for members in [[sides[0], sides[2]], [sides[1], sides[3]]] {
            if !members.iter().all(|c| m.contains(*c)) {
                continue;
            }
            let Some(s) = is_semicycle(m, &members)? else {
                continue;
            };
            if s.kind != SemicycleKind::InsideCycle {
                continue;
            }
            let next = rotate(m, &s)?;
            used[qi] = true;
            out.push(s);
            if let Some(end) = order_quads(&next, quads, used, out)? {
                return Ok(Some(end));
            }
            out.pop();
            used[qi] = false;
        }
    }
    Ok(None)
}

/// Interior-disjoint inside 2-cycles whose rotations, in order, rotate `k`.
pub fn split_into_2cycles(m: &PlaneMatching, k: &Semicycle) -> Result<Vec<Semicycle>> {
    let cfg = m.config();
    let k = inside(m, k)?;
    if k.len() == 2 {
        return Ok(vec![k]);
    }
    let target = rotate(m, &k)?;
    let len = k.points.len();
    let diag: Vec<usize> = (0..len)
        .filter(|&i| !cfg.is_perimeter(k.boundary[i]))
        .collect();
    for (a, &i) in diag.iter().enumerate() {
        for &j in &diag[a + 1..] {
            let quads = quadrangulation(&k, i, j);
            let mut out = Vec::new();
            let mut used = vec![false; quads.len()];
            if order_quads(m, &quads, &mut used, &mut out)? == Some(target.clone()) {
                return Ok(out);
            }
        }
    }
    Err(Error::Construction(format!(
        "no 2-cycle split of {:?}",
        k.members
    )))
}

fn cycle_step(m: &PlaneMatching, k: &Semicycle, one_legged: bool) -> Result<Vec<RotationStep>> {
    let mut steps = Vec::new();
    let mut cur = m.clone();
    let parts = if one_legged {
        split_into_2cycles(m, k)?
    } else {
        vec![k.clone()]
    };
    for part in parts {
        let part = inside(&cur, &part)?;
        let witness = if one_legged {
            one_legged_for_2cycle(&cur, &part)?
        } else {
            caterpillar_for_inside_cycle(&cur, &part)?
        };
        let after = rotate(&cur, &part)?;
        steps.push(RotationStep {
            before: cur.clone(),
            after: after.clone(),
            witness,
            rotated: Some(vec![part]),
        });
        cur = after;
    }
    Ok(steps)
}

/// Shortest walk whose steps each rotate one inside cycle (one inside
/// 2-cycle when `one_legged`), by breadth-first search.
fn single_cycle_search(
    m1: &PlaneMatching,
    m2: &PlaneMatching,
    one_legged: bool,
) -> Result<Option<RotationSequence>> {
    let all = enumerate_matchings(m1.config());
    let index: HashMap<&PlaneMatching, usize> =
        all.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let (s, t) = (index[m1], index[m2]);
    let mut prev: Vec<Option<(usize, Semicycle)>> = vec![None; all.len()];
    let mut seen = vec![false; all.len()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            break;
        }
        let limit = if one_legged { Some(2) } else { None };
        for k in inside_semicycles(&all[u], limit) {
            let v = index[&rotate(&all[u], &k)?];
            if !seen[v] {
                seen[v] = true;
                prev[v] = Some((u, k));
                queue.push_back(v);
            }
        }
    }
    if !seen[t] {
        return Ok(None);
    }
    let mut chain = Vec::new();
    let mut v = t;
    while let Some((u, k)) = prev[v].take() {
        chain.push((u, k));
        v = u;
    }
    let mut steps = Vec::new();
    for (u, k) in chain.into_iter().rev() {
        steps.extend(cycle_step(&all[u], &k, one_legged)?);
    }
    Ok(Some(RotationSequence::from_steps(m1, steps)))
}

/// Walk between two matchings where every step rotates a single inside cycle
/// with a caterpillar witness, or a single inside 2-cycle with a one-legged
/// caterpillar witness when `one_legged`.
///
/// From 12 points on, each step of the tree walk is broken into its cycles
/// (and those into 2-cycles). At 10 points the walk comes from a search over
/// single-cycle rotations, falling back to the compatibility graph.
pub fn caterpillar_path_between(
    m1: &PlaneMatching,
    m2: &PlaneMatching,
    one_legged: bool,
) -> Result<RotationSequence> {
    m1.same_config(m2)?;
    if m1.size() < 10 {
        return Err(Error::SizeTooSmall {
            size: m1.size(),
            min: 10,
        });
    }
    if m1 == m2 {
        return Ok(RotationSequence::empty(m1));
    }
    let seq = if m1.size() == 10 {
        match single_cycle_search(m1, m2, one_legged)? {
            Some(seq) => seq,
            None => {
                let family = if one_legged {
                    Family::OneLeggedCaterpillar
                } else {
                    Family::Caterpillar
                };
                graph_search_sequence(m1, m2, family)?
            }
        }
    } else {
        let tree = tree_path_between(m1, m2)?;
        let mut steps = Vec::new();
        let mut cur = m1.clone();
        for step in &tree.steps {
            let set = step
                .rotated
                .as_ref()
                .ok_or_else(|| Error::Construction("tree step without rotated cycles".into()))?;
            for k in set {
                let k = inside(&cur, k)?;
                let part = cycle_step(&cur, &k, one_legged)?;
                cur = part.last().map_or(cur, |s| s.after.clone());
                steps.extend(part);
            }
        }
        RotationSequence::from_steps(m1, steps)
    };
    seq.validate()?;
    if seq.end != *m2 {
        return Err(Error::Construction(
            "caterpillar walk misses its target".into(),
        ));
    }
    Ok(seq)
}
