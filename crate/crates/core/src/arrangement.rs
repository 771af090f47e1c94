//! Faces of the arrangement formed by two matchings drawn together.
//!
//! Crossing points are ordered along each chord combinatorially: the chords
//! crossing a given chord come from one plane matching, so they are pairwise
//! non-crossing and nest around either endpoint.

use crate::error::Result;
use crate::geometry::{cross, Chord, ConvexConfig};
use crate::matching::PlaneMatching;

/// A face bounded only by matching edges, with at least one crossing on its
/// boundary, whose hull points form a run of consecutive points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryArea {
    /// The consecutive hull points on the face boundary, in counterclockwise order.
    pub points: Vec<usize>,
    /// Matching edges contributing a segment to the face boundary.
    pub chords: Vec<Chord>,
}

impl BoundaryArea {
    pub fn point_count(&self) -> usize {
        self.points.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Vertex {
    Point(usize),
    Crossing(usize, usize),
}

struct HalfEdge {
    from: usize,
    to: usize,
    /// Chord index, or `None` for a bare hull side.
    chord: Option<usize>,
}

pub fn boundary_areas(m1: &PlaneMatching, m2: &PlaneMatching) -> Result<Vec<BoundaryArea>> {
    m1.same_config(m2)?;
    let cfg = m1.config();
    let size = cfg.size();
    let mut chords: Vec<Chord> = m1.edges().to_vec();
    for e in m2.edges() {
        if !m1.contains(*e) {
            chords.push(*e);
        }
    }
    let mut vertices: Vec<Vertex> = (0..size).map(Vertex::Point).collect();
    let mut crossing_id = std::collections::HashMap::new();
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if cross(chords[i], chords[j]) {
                crossing_id.insert((i, j), vertices.len());
                vertices.push(Vertex::Crossing(i, j));
            }
        }
    }
    if crossing_id.is_empty() {
        return Ok(Vec::new());
    }
    // vertices along each chord from a to b
    let mut edges: Vec<HalfEdge> = Vec::new();
    for (ci, c) in chords.iter().enumerate() {
        let mut along: Vec<(usize, usize)> = Vec::new();
        for (dj, d) in chords.iter().enumerate() {
            if ci == dj || !cross(*c, *d) {
                continue;
            }
            let inner = if c.a < d.a && d.a < c.b { d.a } else { d.b };
            let id = crossing_id[&(ci.min(dj), ci.max(dj))];
            along.push((inner - c.a, id));
        }
        along.sort_unstable();
        let mut seq = vec![c.a];
        seq.extend(along.iter().map(|x| x.1));
        seq.push(c.b);
        for w in seq.windows(2) {
            edges.push(HalfEdge {
                from: w[0],
                to: w[1],
                chord: Some(ci),
            });
            edges.push(HalfEdge {
                from: w[1],
                to: w[0],
                chord: Some(ci),
            });
        }
    }
    for p in 0..size {
        let side = cfg.perimeter_edge(p);
        if !chords.contains(&side) {
            let q = cfg.next(p);
            edges.push(HalfEdge {
                from: p,
                to: q,
                chord: None,
            });
            edges.push(HalfEdge {
                from: q,
                to: p,
                chord: None,
            });
        }
    }
    // angular key of a half-edge around its origin: the hull point it heads to
    let target_point = |e: &HalfEdge| -> usize {
        match e.chord {
            None => e.to,
            Some(ci) => {
                let c = chords[ci];
                match vertices[e.to] {
                    Vertex::Point(p) => p,
                    Vertex::Crossing(..) => {
                        // the endpoint of the chord beyond `to` as seen from `from`
                        let pos = |v: usize| -> usize {
                            match vertices[v] {
                                Vertex::Point(p) => {
                                    if p == c.a {
                                        0
                                    } else {
                                        usize::MAX
                                    }
                                }
                                Vertex::Crossing(i, j) => {
                                    let d = chords[if i == ci { j } else { i }];
                                    let inner = if c.a < d.a && d.a < c.b { d.a } else { d.b };
                                    inner - c.a
                                }
                            }
                        };
                        if pos(e.to) > pos(e.from) {
                            c.b
                        } else {
                            c.a
                        }
                    }
                }
            }
        }
    };
    let origin_point = |v: usize| -> Option<usize> {
        match vertices[v] {
            Vertex::Point(p) => Some(p),
            Vertex::Crossing(..) => None,
        }
    };
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (i, e) in edges.iter().enumerate() {
        out_of[e.from].push(i);
    }
    for (v, list) in out_of.iter_mut().enumerate() {
        let base = origin_point(v);
        list.sort_by_key(|&i| {
            let t = target_point(&edges[i]);
            match base {
                Some(p) => cfg.offset(p, t),
                None => t,
            }
        });
    }
    let twin = |i: usize| i ^ 1;
    let mut visited = vec![false; edges.len()];
    let mut areas = Vec::new();
    for start in 0..edges.len() {
        if visited[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut e = start;
        loop {
            visited[e] = true;
            face.push(e);
            // next edge: clockwise neighbour of the twin around the head
            let head = edges[e].to;
            let list = &out_of[head];
            let pos = list
                .iter()
                .position(|&x| x == twin(e))
                .expect("twin present");
            let next = list[(pos + list.len() - 1) % list.len()];
            e = next;
            if e == start {
                break;
            }
        }
        if let Some(area) = classify_face(&cfg, &edges, &vertices, &chords, &face) {
            areas.push(area);
        }
    }
    areas.sort_by(|x, y| x.points.cmp(&y.points));
    Ok(areas)
}

fn classify_face(
    cfg: &ConvexConfig,
    edges: &[HalfEdge],
    vertices: &[Vertex],
    chords: &[Chord],
    face: &[usize],
) -> Option<BoundaryArea> {
    if face.iter().any(|&e| edges[e].chord.is_none()) {
        return None;
    }
    if !face
        .iter()
        .any(|&e| matches!(vertices[edges[e].from], Vertex::Crossing(..)))
    {
        return None;
    }
    let mut points: Vec<usize> = face
        .iter()
        .filter_map(|&e| match vertices[edges[e].from] {
            Vertex::Point(p) => Some(p),
            Vertex::Crossing(..) => None,
        })
        .collect();
    points.sort_unstable();
    points.dedup();
    if points.is_empty() {
        return None;
    }
    let run = consecutive_run(cfg, &points)?;
    let mut used: Vec<Chord> = face
        .iter()
        .filter_map(|&e| edges[e].chord.map(|c| chords[c]))
        .collect();
    used.sort();
    used.dedup();
    Some(BoundaryArea {
        points: run,
        chords: used,
    })
}

/// Orders the points as a counterclockwise run if they are cyclically consecutive.
fn consecutive_run(cfg: &ConvexConfig, points: &[usize]) -> Option<Vec<usize>> {
    let size = cfg.size();
    if points.len() == size {
        return None;
    }
    let start = points
        .iter()
        .copied()
        .find(|&p| !points.contains(&cfg.prev(p)))?;
    let run: Vec<usize> = (0..points.len()).map(|i| (start + i) % size).collect();
    if run.iter().all(|p| points.contains(p)) {
        Some(run)
    } else {
        None
    }
}
