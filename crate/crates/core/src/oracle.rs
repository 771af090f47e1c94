//! Exhaustive reference answers from enumerating every plane spanning tree.
//!
//! Shares nothing with the deciders in `compat` beyond the matching type: trees
//! come from an interval decomposition and shapes are recomputed here.

use crate::compat::Family;
use crate::error::{Error, Result};
use crate::geometry::{cross, Chord, ConvexConfig};
use crate::matching::{enumerate_matchings, PlaneMatching};
use rayon::prelude::*;
use std::collections::HashMap;

/// Largest point count the oracle accepts by default.
pub const ORACLE_BOUND: usize = 12;

fn bit(a: usize, b: usize) -> u128 {
    1u128 << Chord::new(a, b).index()
}

/// Calls `out` once per plane spanning tree of points `i..=j`, each as a
/// chord bitmask (union with `acc`).
///
/// With `k` the largest neighbour of `i`, the tree splits at `k` into a tree
/// on `i..=k` holding chord `ik` and a tree on `k..=j`. Dropping `ik` from the
/// first splits `i..=k` into two intervals.
fn forest(i: usize, j: usize, acc: u128, out: &mut dyn FnMut(u128)) {
    if i == j {
        out(acc);
        return;
    }
    for k in i + 1..=j {
        with_edge(i, k, acc, &mut |a| forest(k, j, a, out));
    }
}

fn with_edge(i: usize, k: usize, acc: u128, out: &mut dyn FnMut(u128)) {
    let acc = acc | bit(i, k);
    for l in i..k {
        forest(i, l, acc, &mut |a| forest(l + 1, k, a, out));
    }
}

/// Streams every plane spanning tree on `size` points in convex position.
pub fn for_each_spanning_tree(size: usize, mut out: impl FnMut(u128)) {
    if size == 0 {
        return;
    }
    forest(0, size - 1, 0, &mut out);
}

fn shape_of(size: usize, mask: u128) -> Family {
    let mut deg = [0u8; 16];
    let mut m = mask;
    let mut edges = Vec::with_capacity(size);
    while m != 0 {
        let c = Chord::from_index(m.trailing_zeros() as usize);
        m &= m - 1;
        deg[c.a] += 1;
        deg[c.b] += 1;
        edges.push(c);
    }
    let max = deg[..size].iter().copied().max().unwrap_or(0);
    if max <= 2 {
        return Family::Path;
    }
    // caterpillar: deleting the leaves leaves a path
    let mut spine = [0u8; 16];
    for c in &edges {
        if deg[c.a] > 1 && deg[c.b] > 1 {
            spine[c.a] += 1;
            spine[c.b] += 1;
        }
    }
    if spine.iter().any(|&d| d > 2) {
        Family::Tree
    } else if max == 3 {
        Family::OneLeggedCaterpillar
    } else {
        Family::Caterpillar
    }
}

fn rank(f: Family) -> usize {
    match f {
        Family::Tree => 0,
        Family::Caterpillar => 1,
        Family::OneLeggedCaterpillar => 2,
        Family::Path => 3,
    }
}

/// Chords a tree must avoid to be disjoint compatible to `m`.
fn forbidden(cfg: &ConvexConfig, m: &PlaneMatching) -> u128 {
    cfg.all_chords()
        .filter(|c| m.contains(*c) || m.edges().iter().any(|e| cross(*c, *e)))
        .fold(0, |acc, c| acc | 1u128 << c.index())
}

fn check_bound(size: usize, bound: usize) -> Result<()> {
    if size > bound {
        Err(Error::AboveBound { size, bound })
    } else {
        Ok(())
    }
}

/// Single-pair reference answer by scanning all plane spanning trees.
pub fn brute_force_oracle(m1: &PlaneMatching, m2: &PlaneMatching, family: Family) -> Result<bool> {
    brute_force_oracle_bounded(m1, m2, family, ORACLE_BOUND)
}

pub fn brute_force_oracle_bounded(
    m1: &PlaneMatching,
    m2: &PlaneMatching,
    family: Family,
    bound: usize,
) -> Result<bool> {
    m1.same_config(m2)?;
    let cfg = m1.config();
    check_bound(cfg.size(), bound)?;
    let forbid = forbidden(&cfg, m1) | forbidden(&cfg, m2);
    let mut found = false;
    for_each_spanning_tree(cfg.size(), |t| {
        if !found && t & forbid == 0 && rank(shape_of(cfg.size(), t)) >= rank(family) {
            found = true;
        }
    });
    Ok(found)
}

/// Compatibility of every pair of matchings for every family, from one pass
/// over all plane spanning trees.
#[derive(Debug, Clone)]
pub struct OracleTable {
    size: usize,
    matchings: Vec<PlaneMatching>,
    index: HashMap<PlaneMatching, usize>,
    words: usize,
    /// `adj[rank][i]` holds the `j` compatible with `i` through a tree of at
    /// least that rank.
    adj: Vec<Vec<Vec<u64>>>,
    tree_count: u64,
}

impl OracleTable {
    pub fn build(config: ConvexConfig) -> Result<Self> {
        Self::build_bounded(config, ORACLE_BOUND)
    }

    pub fn build_bounded(config: ConvexConfig, bound: usize) -> Result<Self> {
        let size = config.size();
        check_bound(size, bound)?;
        let matchings = enumerate_matchings(config);
        let n = matchings.len();
        let words = n.div_ceil(64);
        let forbid: Vec<u128> = matchings.iter().map(|m| forbidden(&config, m)).collect();
        let blank = || vec![vec![vec![0u64; words]; n]; 4];
        // split on the largest neighbour of point 0 to spread the work
        let (adj, tree_count) = (1..size.max(2))
            .into_par_iter()
            .map(|k| {
                let mut local = blank();
                let mut count = 0u64;
                let mut set = vec![0u64; words];
                let mut members = Vec::with_capacity(n);
                if size >= 2 {
                    with_edge(0, k, 0, &mut |a| {
                        forest(k, size - 1, a, &mut |t| {
                            count += 1;
                            members.clear();
                            set.iter_mut().for_each(|w| *w = 0);
                            for (i, f) in forbid.iter().enumerate() {
                                if t & f == 0 {
                                    members.push(i);
                                    set[i / 64] |= 1 << (i % 64);
                                }
                            }
                            let r = rank(shape_of(size, t));
                            for &i in &members {
                                for (w, s) in local[r][i].iter_mut().zip(&set) {
                                    *w |= s;
                                }
                            }
                        })
                    });
                }
                (local, count)
            })
            .reduce(
                || (blank(), 0),
                |(mut a, ca), (b, cb)| {
                    for (ra, rb) in a.iter_mut().zip(&b) {
                        for (va, vb) in ra.iter_mut().zip(rb) {
                            for (x, y) in va.iter_mut().zip(vb) {
                                *x |= y;
                            }
                        }
                    }
                    (a, ca + cb)
                },
            );
        let mut adj = adj;
        // a tree of higher rank also counts for every lower rank
        for r in (0..3).rev() {
            let (lower, upper) = adj.split_at_mut(r + 1);
            for (dst, src) in lower[r].iter_mut().zip(&upper[0]) {
                for (x, y) in dst.iter_mut().zip(src) {
                    *x |= *y;
                }
            }
        }
        let index = matchings
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        Ok(OracleTable {
            size,
            matchings,
            index,
            words,
            adj,
            tree_count: if size < 2 { 1 } else { tree_count },
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn matchings(&self) -> &[PlaneMatching] {
        &self.matchings
    }

    pub fn index_of(&self, m: &PlaneMatching) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn tree_count(&self) -> u64 {
        self.tree_count
    }

    pub fn compatible(&self, i: usize, j: usize, family: Family) -> bool {
        debug_assert!(j / 64 < self.words);
        self.adj[rank(family)][i][j / 64] >> (j % 64) & 1 == 1
    }
}
