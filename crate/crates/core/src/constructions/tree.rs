use super::{tree_step, RotationSequence};
use crate::compat::{validate_witness, Family, Witness};
use crate::error::{Error, Result};
use crate::geometry::{Chord, ChordSet, ConvexConfig};
use crate::matching::{
    is_semicycle, polygon_faces, rotate_all, split_polygon, PlaneMatching, Semicycle, SemicycleKind,
};

/// Spanning tree disjoint compatible to `m` and to `m` with all `cycles` rotated.
///
/// Inside every cycle hull a double fan from the endpoints of two boundary
/// diagonals covers the hull points; every remaining face between the cycles
/// gets a triangulation that contains the union's edges there, minus those
/// edges. Each outside face is spanned because the removed edges form a
/// matching, so no triangle loses two sides.
pub fn tree_for_inside_cycles(m: &PlaneMatching, cycles: &[Semicycle]) -> Result<Witness> {
    let cfg = m.config();
    let after = rotate_all(m, cycles)?;
    for c in cycles {
        if c.kind != SemicycleKind::InsideCycle {
            return Err(Error::NotInsideCycle);
        }
    }
    let union: ChordSet = ChordSet(m.chord_set().0 | after.chord_set().0);
    let mut pool: Vec<Chord> = Vec::new();
    let mut cuts: Vec<Chord> = Vec::new();
    for c in cycles {
        let diagonals: Vec<usize> = (0..c.boundary.len())
            .filter(|&i| !cfg.is_perimeter(c.boundary[i]))
            .collect();
        cuts.extend(diagonals.iter().map(|&i| c.boundary[i]));
        pool.extend(hull_fan(&c.points, diagonals[0], diagonals[1]));
    }
    for face in polygon_faces(&cfg, &cuts) {
        if cycles.iter().any(|c| c.points == face) {
            continue;
        }
        let inner: Vec<Chord> = union
            .iter()
            .filter(|e| face.contains(&e.a) && face.contains(&e.b) && !is_side(&face, *e))
            .collect();
        for piece in split_polygon(face, &inner) {
            pool.extend(
                fan_triangulation(&piece)
                    .into_iter()
                    .filter(|e| !union.contains(*e)),
            );
        }
    }
    let edges = spanning_subtree(cfg.size(), &pool);
    let w = Witness::new(Family::Tree, edges);
    validate_witness(&w, m, &after)
        .map_err(|v| Error::Construction(format!("inside-cycle tree: {v}")))?;
    Ok(w)
}

/// Fan edges inside a cycle hull from the starting points `u1`, `u2` of the
/// boundary diagonals at positions `i < j` (`boundary[i]` runs `u1 -> v1`).
fn hull_fan(points: &[usize], i: usize, j: usize) -> Vec<Chord> {
    let len = points.len();
    let (u1, u2) = (i, j);
    let (v1, v2) = ((i + 1) % len, (j + 1) % len);
    let mut out = Vec::new();
    let mut k = (v1 + 1) % len;
    while k != u2 && k != (u2 + 1) % len && v1 != u2 {
        out.push(Chord::new(points[u1], points[k]));
        k = (k + 1) % len;
    }
    let mut k = (v2 + 1) % len;
    while k != u1 && v2 != u1 {
        out.push(Chord::new(points[u2], points[k]));
        k = (k + 1) % len;
    }
    if v1 != u2 && v2 != u1 {
        out.push(Chord::new(points[u1], points[u2]));
    }
    out
}

fn is_side(face: &[usize], e: Chord) -> bool {
    let len = face.len();
    (0..len).any(|i| Chord::new(face[i], face[(i + 1) % len]) == e)
}

fn fan_triangulation(face: &[usize]) -> Vec<Chord> {
    let len = face.len();
    let mut out: Vec<Chord> = (0..len)
        .map(|i| Chord::new(face[i], face[(i + 1) % len]))
        .collect();
    out.extend((2..len.saturating_sub(1)).map(|k| Chord::new(face[0], face[k])));
    out.sort();
    out.dedup();
    out
}

/// Greedy spanning forest over `pool` in the given order.
pub(crate) fn spanning_subtree(size: usize, pool: &[Chord]) -> Vec<Chord> {
    let mut root: Vec<usize> = (0..size).collect();
    fn find(r: &mut [usize], x: usize) -> usize {
        let mut y = x;
        while r[y] != y {
            r[y] = r[r[y]];
            y = r[y];
        }
        y
    }
    let mut out = Vec::new();
    for &e in pool {
        let (a, b) = (find(&mut root, e.a), find(&mut root, e.b));
        if a != b {
            root[a] = b;
            out.push(e);
        }
    }
    out
}

/// Three inside-cycle rotations that rotate an ear with at least six edges.
pub fn ear_rotation_sequence(m: &PlaneMatching, ear: &Semicycle) -> Result<RotationSequence> {
    let cfg = m.config();
    let ear = is_semicycle(m, &ear.members)?.ok_or(Error::InvalidSemicycle)?;
    if ear.kind != SemicycleKind::Semiear || ear.len() < 6 {
        return Err(Error::Construction(format!(
            "need an ear with at least 6 edges, got {}",
            ear.len()
        )));
    }
    let (a, b, c, d) =
        split_points(&cfg, &ear).ok_or_else(|| Error::Construction("no four-arc split".into()))?;
    let pts = &ear.points;
    let len = pts.len();
    // members along the arc from position x to y
    let arc_members = |x: usize, y: usize| -> Vec<Chord> {
        let mut out = Vec::new();
        let mut i = x;
        while i != y {
            let e = ear.boundary[i];
            if ear.members.contains(&e) {
                out.push(e);
            }
            i = (i + 1) % len;
        }
        out
    };
    let mut first = arc_members(a, b);
    first.extend(arc_members(c, d));
    let s1 =
        is_semicycle(m, &first)?.ok_or_else(|| Error::Construction("first ear step".into()))?;
    let step1 = tree_step(m, vec![s1])?;
    let m1 = step1.after.clone();
    let quad = [Chord::new(pts[b], pts[c]), Chord::new(pts[d], pts[a])];
    let s2 =
        is_semicycle(&m1, &quad)?.ok_or_else(|| Error::Construction("middle ear step".into()))?;
    let step2 = tree_step(&m1, vec![s2])?;
    let m2 = step2.after.clone();
    let mut last = arc_members(b, c);
    last.extend(arc_members(d, a));
    last.push(Chord::new(pts[a], pts[b]));
    last.push(Chord::new(pts[c], pts[d]));
    let s3 =
        is_semicycle(&m2, &last)?.ok_or_else(|| Error::Construction("last ear step".into()))?;
    let step3 = tree_step(&m2, vec![s3])?;
    let seq = RotationSequence::from_steps(m, vec![step1, step2, step3]);
    if seq.end != rotate_all(m, std::slice::from_ref(&ear))? {
        return Err(Error::Construction("ear steps do not compose".into()));
    }
    Ok(seq)
}

/// Positions `a, b, c, d` on the ear hull: `a` starts a member, and each of the
/// four arcs has a positive even number of interior points. Smallest by the
/// point indices `(A, B, C, D)`.
fn split_points(_cfg: &ConvexConfig, ear: &Semicycle) -> Option<(usize, usize, usize, usize)> {
    let len = ear.points.len();
    let pts = &ear.points;
    let ok = |gap: usize| gap >= 3 && gap % 2 == 1;
    type Quad = (usize, usize, usize, usize);
    let mut best: Option<(Quad, Quad)> = None;
    for a in 0..len {
        if !ear.members.contains(&ear.boundary[a]) {
            continue;
        }
        for db in (3..len).step_by(2) {
            for dc in (db + 3..len).step_by(2) {
                for dd in (dc + 3..len).step_by(2) {
                    if !(ok(db) && ok(dc - db) && ok(dd - dc) && ok(len - dd)) {
                        continue;
                    }
                    let pos = (a, (a + db) % len, (a + dc) % len, (a + dd) % len);
                    let key = (pts[pos.0], pts[pos.1], pts[pos.2], pts[pos.3]);
                    if best.is_none_or(|(k, _)| key < k) {
                        best = Some((key, pos));
                    }
                }
            }
        }
    }
    best.map(|(_, p)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Parity;
    use crate::matching::{enumerate_matchings, inside_semicycles, perimeter_matching};

    #[test]
    fn single_inside_cycles_up_to_ten() {
        for size in (4..=10).step_by(2) {
            for m in enumerate_matchings(ConvexConfig::new(size).unwrap()) {
                for k in inside_semicycles(&m, None) {
                    tree_for_inside_cycles(&m, std::slice::from_ref(&k)).unwrap();
                }
            }
        }
    }

    #[test]
    fn no_cycles_gives_tree_for_the_matching_itself() {
        for m in enumerate_matchings(ConvexConfig::new(8).unwrap()) {
            let w = tree_for_inside_cycles(&m, &[]).unwrap();
            assert_eq!(validate_witness(&w, &m, &m), Ok(()));
        }
    }

    #[test]
    fn perimeter_ear_at_twelve() {
        let cfg = ConvexConfig::new(12).unwrap();
        let even = perimeter_matching(cfg, Parity::Even);
        let ear = is_semicycle(&even, even.edges()).unwrap().unwrap();
        let seq = ear_rotation_sequence(&even, &ear).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq.end, perimeter_matching(cfg, Parity::Odd));
        seq.validate().unwrap();
    }
}
