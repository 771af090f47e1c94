//! Disjoint compatibility graphs and their distance structure.

use crate::compat::{exists_witness, Family};
use crate::error::{Error, Result};
use crate::geometry::ConvexConfig;
use crate::matching::{enumerate_matchings, PlaneMatching};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap, VecDeque};

/// Default size bound for the tree graph.
pub const TREE_BOUND: usize = 16;
/// Default size bound for the other families.
pub const EXACT_BOUND: usize = 12;

pub fn default_bound(family: Family) -> usize {
    match family {
        Family::Tree => TREE_BOUND,
        _ => EXACT_BOUND,
    }
}

/// Vertices in enumeration order; adjacency lists sorted, symmetric, loop-free.
#[derive(Debug, Clone)]
pub struct Dcg {
    config: ConvexConfig,
    family: Family,
    vertices: Vec<PlaneMatching>,
    index: HashMap<PlaneMatching, usize>,
    adj: Vec<Vec<usize>>,
}

pub fn build_dcg(config: ConvexConfig, family: Family) -> Result<Dcg> {
    build_dcg_bounded(config, family, default_bound(family))
}

/// Builds the graph by deciding every unordered pair; any schedule gives the same graph.
pub fn build_dcg_bounded(config: ConvexConfig, family: Family, bound: usize) -> Result<Dcg> {
    if config.size() > bound {
        return Err(Error::AboveBound {
            size: config.size(),
            bound,
        });
    }
    let vertices = enumerate_matchings(config);
    let n = vertices.len();
    let upper: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in i + 1..n {
                if exists_witness(&vertices[i], &vertices[j], family)?.is_some() {
                    out.push(j);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut adj = vec![Vec::new(); n];
    for (i, row) in upper.into_iter().enumerate() {
        for j in row {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    adj.iter_mut().for_each(|r| r.sort_unstable());
    let index = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    Ok(Dcg {
        config,
        family,
        vertices,
        index,
        adj,
    })
}

impl Dcg {
    pub fn config(&self) -> ConvexConfig {
        self.config
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn vertices(&self) -> &[PlaneMatching] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn index_of(&self, m: &PlaneMatching) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Unordered edges `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().filter(move |&&j| i < j).map(move |&j| (i, j)))
    }

    /// Distances from `src`; `None` when unreachable.
    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertices.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued vertices have a distance");
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        self.bfs(a)[b]
    }

    /// A shortest path from `a` to `b`, both included.
    pub fn shortest_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.vertices.len()];
        prev[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for &v in &self.adj[u] {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[b] == usize::MAX {
            return None;
        }
        let mut path = vec![b];
        while *path.last().unwrap() != a {
            path.push(prev[*path.last().unwrap()]);
        }
        path.reverse();
        Some(path)
    }

    /// Components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.vertices.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.vertices.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = Vec::new();
            comp[s] = id;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                members.push(u);
                for &v in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Whether shifting every index by `k` maps edges to edges.
    pub fn is_automorphism(&self, k: usize) -> bool {
        let image: Vec<usize> = self
            .vertices
            .iter()
            .map(|m| self.index[&m.shifted(k)])
            .collect();
        self.edges().all(|(i, j)| self.adjacent(image[i], image[j]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphReport {
    pub family: Family,
    pub points: usize,
    pub vertices: usize,
    pub edges: usize,
    pub component_sizes: Vec<usize>,
    pub connected: bool,
    /// Diameter of each component, in component order.
    pub component_diameters: Vec<usize>,
    /// Diameter of the whole graph; `None` when disconnected.
    pub diameter: Option<usize>,
    pub largest_component_diameter: usize,
    pub isolated: Vec<usize>,
    /// Eccentricity within the own component, to vertex count.
    pub eccentricity_histogram: BTreeMap<usize, usize>,
    /// A pair at distance equal to the largest component diameter.
    pub diameter_pair: Option<(usize, usize)>,
}

impl GraphReport {
    pub fn component_count(&self) -> usize {
        self.component_sizes.len()
    }
}

/// Exact component structure and distances by a search from every vertex.
pub fn analyze(g: &Dcg) -> GraphReport {
    let n = g.vertex_count();
    let comps = g.components();
    let mut comp_of = vec![0; n];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            comp_of[v] = c;
        }
    }
    // (eccentricity, farthest vertex) per vertex
    let ecc: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .map(|s| {
            g.bfs(s)
                .iter()
                .enumerate()
                .filter_map(|(v, d)| d.map(|d| (d, v)))
                .fold(
                    (0, s),
                    |best, (d, v)| if d > best.0 { (d, v) } else { best },
                )
        })
        .collect();
    let mut component_diameters = vec![0; comps.len()];
    let mut component_pairs = vec![None; comps.len()];
    for s in 0..n {
        let c = comp_of[s];
        if component_pairs[c].is_none() || ecc[s].0 > component_diameters[c] {
            component_diameters[c] = ecc[s].0;
            component_pairs[c] = Some((s, ecc[s].1));
        }
    }
    let largest = (0..comps.len()).max_by_key(|&c| (comps[c].len(), std::cmp::Reverse(c)));
    let mut eccentricity_histogram = BTreeMap::new();
    for &(e, _) in &ecc {
        *eccentricity_histogram.entry(e).or_insert(0) += 1;
    }
    let connected = comps.len() <= 1;
    GraphReport {
        family: g.family(),
        points: g.config().size(),
        vertices: n,
        edges: g.edge_count(),
        component_sizes: comps.iter().map(Vec::len).collect(),
        connected,
        diameter: if connected {
            component_diameters.first().copied()
        } else {
            None
        },
        largest_component_diameter: largest.map_or(0, |c| component_diameters[c]),
        isolated: (0..n).filter(|&v| g.degree(v) == 0).collect(),
        eccentricity_histogram,
        diameter_pair: largest.and_then(|c| component_pairs[c]),
        component_diameters,
    }
}

/// Orbits of the shift by two and the adjacency they induce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationQuotient {
    /// Orbit members, smallest vertex first; orbits ordered by that vertex.
    pub orbits: Vec<Vec<usize>>,
    pub orbit_of: Vec<usize>,
    /// Orbit pairs `(a, b)`, `a < b`, joined by some edge.
    pub edges: Vec<(usize, usize)>,
    /// Orbits with an edge between two of their own members.
    pub internal: Vec<usize>,
}

impl RotationQuotient {
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

pub fn quotient_by_rotation(g: &Dcg) -> RotationQuotient {
    let n = g.vertex_count();
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if orbit_of[s] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = Vec::new();
        let mut cur = g.vertices()[s].clone();
        loop {
            let v = g.index_of(&cur).expect("shifts stay in the vertex set");
            if orbit_of[v] != usize::MAX {
                break;
            }
            orbit_of[v] = id;
            members.push(v);
            cur = cur.shifted(2);
        }
        members.sort_unstable();
        orbits.push(members);
    }
    let mut edges = Vec::new();
    let mut internal = Vec::new();
    for (i, j) in g.edges() {
        let (a, b) = (orbit_of[i], orbit_of[j]);
        if a == b {
            internal.push(a);
        } else {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    internal.sort_unstable();
    internal.dedup();
    RotationQuotient {
        orbits,
        orbit_of,
        edges,
        internal,
    }
}
