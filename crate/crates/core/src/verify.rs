//! Named verification suites over the exact compatibility graphs.

use crate::compat::{shared_perimeter_edges, validate_witness, Family};
use crate::constructions::{
    caterpillar_path_between, ear_rotation_sequence, route_to_perimeter, tree_path_between,
    RotationSequence,
};
use crate::dcg::{analyze, build_dcg, Dcg};
use crate::error::{Error, Result};
use crate::geometry::{ConvexConfig, Parity};
use crate::matching::{
    all_semicycles, dual_tree, near_two_semiear_matching, perimeter_matching, rotate,
    semiear_parity, semiears, two_semiear_matching, PlaneMatching, SemicycleKind,
};
use rayon::prelude::*;
use std::fmt;

const MAX_COUNTEREXAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    TreeDiameter,
    TreeLowerBound,
    SharedPerimeter,
    Caterpillar,
    OneLegged,
    PathIsolation,
    PathComponents,
    SmallSizes,
    ConstructionsVsBfs,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::TreeDiameter,
        Suite::TreeLowerBound,
        Suite::SharedPerimeter,
        Suite::Caterpillar,
        Suite::OneLegged,
        Suite::PathIsolation,
        Suite::PathComponents,
        Suite::SmallSizes,
        Suite::ConstructionsVsBfs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::TreeDiameter => "tree-diameter",
            Suite::TreeLowerBound => "tree-lower-bound",
            Suite::SharedPerimeter => "shared-perimeter",
            Suite::Caterpillar => "caterpillar",
            Suite::OneLegged => "one-legged",
            Suite::PathIsolation => "path-isolation",
            Suite::PathComponents => "path-components",
            Suite::SmallSizes => "small-sizes",
            Suite::ConstructionsVsBfs => "constructions-vs-bfs",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    /// The claim under test, in words.
    pub anchor: String,
    pub pass: bool,
    pub detail: String,
    pub counterexamples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub points: usize,
    pub checks: Vec<Check>,
    /// Witnesses re-validated while running the suite.
    pub witnesses_validated: usize,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Builder {
    report: SuiteReport,
}

impl Builder {
    fn new(suite: Suite, points: usize) -> Self {
        Builder {
            report: SuiteReport {
                suite,
                points,
                checks: Vec::new(),
                witnesses_validated: 0,
            },
        }
    }

    fn check(
        &mut self,
        name: &str,
        anchor: &str,
        pass: bool,
        detail: String,
        mut counterexamples: Vec<String>,
    ) {
        counterexamples.truncate(MAX_COUNTEREXAMPLES);
        self.report.checks.push(Check {
            name: name.into(),
            anchor: anchor.into(),
            pass,
            detail,
            counterexamples,
        });
    }

    /// A measured value that carries no claim.
    fn record(&mut self, name: &str, anchor: &str, detail: String) {
        self.check(name, anchor, true, detail, Vec::new());
    }

    /// Re-validates every step witness; returns the failures.
    fn witnesses(&mut self, seq: &RotationSequence) -> Vec<String> {
        let mut bad = Vec::new();
        for s in &seq.steps {
            self.report.witnesses_validated += 1;
            if let Err(v) = validate_witness(&s.witness, &s.before, &s.after) {
                bad.push(format!("{} -> {}: {v}", s.before, s.after));
            }
        }
        bad
    }
}

pub fn verify_suite(config: ConvexConfig, suite: Suite) -> Result<SuiteReport> {
    let mut b = Builder::new(suite, config.size());
    match suite {
        Suite::TreeDiameter => tree_diameter(&mut b, config)?,
        Suite::TreeLowerBound => tree_lower_bound(&mut b, config)?,
        Suite::SharedPerimeter => shared_perimeter(&mut b, config)?,
        Suite::Caterpillar => caterpillar(&mut b, config, false)?,
        Suite::OneLegged => caterpillar(&mut b, config, true)?,
        Suite::PathIsolation => path_isolation(&mut b, config)?,
        Suite::PathComponents => path_components(&mut b, config)?,
        Suite::SmallSizes => small_sizes(&mut b)?,
        Suite::ConstructionsVsBfs => constructions_vs_bfs(&mut b, config)?,
    }
    Ok(b.report)
}

fn require(config: ConvexConfig, min: usize) -> Result<()> {
    if config.size() < min {
        Err(Error::SizeTooSmall {
            size: config.size(),
            min,
        })
    } else {
        Ok(())
    }
}

fn show(d: Option<usize>) -> String {
    d.map_or_else(|| "undefined (disconnected)".into(), |d| d.to_string())
}

fn vertex(g: &Dcg, m: &PlaneMatching) -> usize {
    g.index_of(m).expect("every matching is a vertex")
}

fn tree_diameter(b: &mut Builder, config: ConvexConfig) -> Result<()> {
    require(config, 10)?;
    let g = build_dcg(config, Family::Tree)?;
    let r = analyze(&g);
    b.check(
        "connected",
        "the tree compatibility graph is connected from ten points on",
        r.connected,
        format!(
            "{} vertices, {} edges, components {:?}",
            r.vertices, r.edges, r.component_sizes
        ),
        Vec::new(),
    );
    let pair = r
        .diameter_pair
        .map(|(x, y)| format!(" attained by {} and {}", g.vertices()[x], g.vertices()[y]))
        .unwrap_or_default();
    b.check(
        "diameter",
        "the tree compatibility graph has diameter 4 or 5",
        matches!(r.diameter, Some(4 | 5)),
        format!(
            "diameter {}{pair}; eccentricities {:?}",
            show(r.diameter),
            r.eccentricity_histogram
        ),
        Vec::new(),
    );
    Ok(())
}

fn tree_lower_bound(b: &mut Builder, config: ConvexConfig) -> Result<()> {
    require(config, 8)?;
    let g = build_dcg(config, Family::Tree)?;
    let near = config.size() % 4 == 2;
    let (even, odd) = if near {
        (
            near_two_semiear_matching(config, Parity::Even)?,
            near_two_semiear_matching(config, Parity::Odd)?,
        )
    } else {
        (
            two_semiear_matching(config, Parity::Even)?,
            two_semiear_matching(config, Parity::Odd)?,
        )
    };
    let d = g.distance(vertex(&g, &even), vertex(&g, &odd));
    let label = if near { "near-2-semiear" } else { "2-semiear" };
    b.check(
        "distance",
        "the even and odd (near-)2-semiear matchings are at least four steps apart",
        d.is_none_or(|d| d >= 4),
        format!("{label} {even} to {odd}: distance {d:?}"),
        Vec::new(),
    );
    // neighbours of a 2-semiear matching avoid the other perimeter parity
    let allowed = if near { 1 } else { 0 };
    let mut bad = Vec::new();
    for (m, parity) in [(&even, Parity::Even), (&odd, Parity::Odd)] {
        for &j in g.neighbors(vertex(&g, m)) {
            let n = &g.vertices()[j];
            let foreign: Vec<_> = n
                .perimeter_edges()
                .filter(|e| config.perimeter_parity(*e) == Some(parity.flip()) && !m.contains(*e))
                .collect();
            if n.count_perimeter(parity.flip()) > allowed || !foreign.is_empty() {
                bad.push(format!("{m} ~ {n}"));
            }
        }
    }
    b.check(
        "neighbour-parity",
        "neighbours of a (near-)2-semiear matching carry no perimeter edge of the other parity beyond its own",
        bad.is_empty(),
        format!("{} violations", bad.len()),
        bad,
    );
    Ok(())
}

fn shared_perimeter(b: &mut Builder, config: ConvexConfig) -> Result<()> {
    let g = build_dcg(config, Family::Tree)?;
    let v = g.vertices();
    let bad: Vec<String> = g
        .edges()
        .filter(|&(i, j)| shared_perimeter_edges(&v[i], &v[j]) < 2)
        .map(|(i, j)| format!("{} ~ {}", v[i], v[j]))
        .collect();
    b.check(
        "shared-perimeter",
        "tree-compatible matchings share at least two perimeter edges",
        bad.is_empty(),
        format!("{} edges checked, {} violations", g.edge_count(), bad.len()),
        bad,
    );
    Ok(())
}

fn caterpillar(b: &mut Builder, config: ConvexConfig, one_legged: bool) -> Result<()> {
    require(config, 10)?;
    let family = if one_legged {
        Family::OneLeggedCaterpillar
    } else {
        Family::Caterpillar
    };
    let g = build_dcg(config, family)?;
    let r = analyze(&g);
    b.check(
        "connected",
        "the caterpillar compatibility graph is connected from ten points on",
        r.connected,
        format!(
            "{} vertices, {} edges, components {:?}, diameter {}",
            r.vertices,
            r.edges,
            r.component_sizes,
            show(r.diameter)
        ),
        Vec::new(),
    );
    // 5n/2 with n = size/2, compared as 4d <= 5 size
    let size = config.size();
    if !one_legged {
        b.check(
            "diameter",
            "the caterpillar compatibility graph has diameter at most 5n/2",
            r.diameter.is_some_and(|d| 4 * d <= 5 * size),
            format!("diameter {}", show(r.diameter)),
            Vec::new(),
        );
    }
    let v = g.vertices();
    let pairs: Vec<(usize, usize)> = (0..v.len())
        .flat_map(|i| (0..v.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<RotationSequence>> = pairs
        .par_iter()
        .map(|&(i, j)| caterpillar_path_between(&v[i], &v[j], one_legged))
        .collect();
    let mut bad = Vec::new();
    let mut longest = 0;
    let dist: Vec<Vec<Option<usize>>> = (0..v.len()).into_par_iter().map(|i| g.bfs(i)).collect();
    for (&(i, j), res) in pairs.iter().zip(results) {
        match res {
            Err(e) => bad.push(format!("{} to {}: {e}", v[i], v[j])),
            Ok(seq) => {
                bad.extend(b.witnesses(&seq));
                longest = longest.max(seq.len());
                let steps_ok = seq.steps.iter().all(|s| {
                    s.rotated.as_ref().is_some_and(|set| {
                        set.len() == 1
                            && set[0].kind == SemicycleKind::InsideCycle
                            && (!one_legged || set[0].len() == 2)
                    })
                });
                if !steps_ok {
                    bad.push(format!(
                        "{} to {}: a step is not a single inside cycle rotation",
                        v[i], v[j]
                    ));
                }
                if dist[i][j].is_none_or(|d| seq.len() < d) {
                    bad.push(format!(
                        "{} to {}: shorter than the graph distance",
                        v[i], v[j]
                    ));
                }
                if !one_legged && 4 * seq.len() > 5 * size {
                    bad.push(format!("{} to {}: {} steps", v[i], v[j], seq.len()));
                }
            }
        }
    }
    let what = if one_legged {
        "inside 2-cycle"
    } else {
        "inside cycle"
    };
    b.check(
        "constructed-walks",
        if one_legged {
            "every pair is joined by a walk of inside 2-cycle rotations with one-legged caterpillar witnesses"
        } else {
            "every pair is joined by at most 5n/2 inside cycle rotations with caterpillar witnesses"
        },
        bad.is_empty(),
        format!("{} pairs, longest walk {longest} {what} steps", pairs.len()),
        bad,
    );
    Ok(())
}

fn path_isolation(b: &mut Builder, config: ConvexConfig) -> Result<()> {
    let g = build_dcg(config, Family::Path)?;
    let v = g.vertices();
    let mut bad = Vec::new();
    let mut checked = 0;
    for (i, m) in v.iter().enumerate() {
        if dual_tree(m).leaves().len() >= 3 {
            checked += 1;
            if g.degree(i) > 0 {
                bad.push(format!("{m} has degree {}", g.degree(i)));
            }
        }
    }
    b.check(
        "isolated",
        "matchings with at least three semiears have no path-compatible partner",
        bad.is_empty(),
        format!(
            "{checked} matchings with three or more semiears, {} isolated vertices in total",
            analyze(&g).isolated.len()
        ),
        bad,
    );
    let degrees: Vec<String> = [Parity::Even, Parity::Odd]
        .into_iter()
        .map(|p| {
            format!(
                "{} perimeter: degree {}",
                p.name(),
                g.degree(vertex(&g, &perimeter_matching(config, p)))
            )
        })
        .collect();
    b.record(
        "perimeter-degree",
        "degree of the perimeter matchings in the path graph",
        degrees.join(", "),
    );
    Ok(())
}

fn path_components(b: &mut Builder, config: ConvexConfig) -> Result<()> {
    require(config, 4)?;
    let g = build_dcg(config, Family::Path)?;
    let even = vertex(&g, &perimeter_matching(config, Parity::Even));
    let odd = vertex(&g, &perimeter_matching(config, Parity::Odd));
    let dist = g.bfs(even);
    let r = analyze(&g);
    b.check(
        "perimeters-separated",
        "the two perimeter matchings lie in different components of the path graph",
        dist[odd].is_none(),
        format!("components {:?}", r.component_sizes),
        Vec::new(),
    );
    let mut bad = Vec::new();
    let members: Vec<usize> = (0..g.vertex_count())
        .filter(|&i| dist[i].is_some())
        .collect();
    for &i in &members {
        let m = &g.vertices()[i];
        if semiears(m)
            .iter()
            .any(|s| semiear_parity(&config, s) != Some(Parity::Even))
        {
            bad.push(m.to_string());
        }
    }
    b.check(
        "even-component",
        "every matching path-reachable from the even perimeter matching has only even semiears",
        bad.is_empty(),
        format!("{} matchings in the even component", members.len()),
        bad,
    );
    Ok(())
}

fn small_sizes(b: &mut Builder) -> Result<()> {
    for size in [4, 6, 8] {
        let config = ConvexConfig::new(size)?;
        for family in [Family::Tree, Family::Caterpillar] {
            let r = analyze(&build_dcg(config, family)?);
            let detail = format!(
                "{} vertices, {} edges, components {:?}, component diameters {:?}",
                r.vertices, r.edges, r.component_sizes, r.component_diameters
            );
            let name = format!("{family}-{size}");
            if size == 4 {
                b.check(
                    &name,
                    "the compatibility graph on four points is connected",
                    r.connected,
                    detail,
                    Vec::new(),
                );
            } else {
                b.record(
                    &name,
                    "connectivity below ten points, reported as computed",
                    format!("connected: {}; {detail}", r.connected),
                );
            }
        }
    }
    Ok(())
}

fn constructions_vs_bfs(b: &mut Builder, config: ConvexConfig) -> Result<()> {
    require(config, 10)?;
    let g = build_dcg(config, Family::Tree)?;
    let v = g.vertices();
    let dist: Vec<Vec<Option<usize>>> = (0..v.len()).into_par_iter().map(|i| g.bfs(i)).collect();
    let pairs: Vec<(usize, usize)> = (0..v.len())
        .flat_map(|i| (0..v.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<RotationSequence>> = pairs
        .par_iter()
        .map(|&(i, j)| tree_path_between(&v[i], &v[j]))
        .collect();
    let mut bad = Vec::new();
    let mut longest = 0;
    for (&(i, j), res) in pairs.iter().zip(results) {
        match res {
            Err(e) => bad.push(format!("{} to {}: {e}", v[i], v[j])),
            Ok(seq) => {
                bad.extend(b.witnesses(&seq));
                longest = longest.max(seq.len());
                if seq.len() > 5 || dist[i][j].is_none_or(|d| seq.len() < d) {
                    bad.push(format!(
                        "{} to {}: {} steps, distance {:?}",
                        v[i],
                        v[j],
                        seq.len(),
                        dist[i][j]
                    ));
                }
            }
        }
    }
    b.check(
        "tree-walks",
        "every pair is joined by a constructed walk of at most five tree-compatible steps",
        bad.is_empty(),
        format!("{} pairs, longest walk {longest}", pairs.len()),
        bad,
    );
    let even = perimeter_matching(config, Parity::Even);
    let odd = perimeter_matching(config, Parity::Odd);
    let d = dist[vertex(&g, &even)][vertex(&g, &odd)];
    b.check(
        "perimeter-distance",
        "the two perimeter matchings are at most three steps apart",
        d.is_some_and(|d| d <= 3),
        format!("distance {d:?}"),
        Vec::new(),
    );
    if config.size() < 12 {
        return Ok(());
    }
    let mut bad = Vec::new();
    let mut ears = 0;
    for m in v {
        for ear in all_semicycles(m)
            .into_iter()
            .filter(|s| s.kind == SemicycleKind::Semiear && s.len() >= 6)
        {
            ears += 1;
            let target = rotate(m, &ear)?;
            match ear_rotation_sequence(m, &ear) {
                Err(e) => bad.push(format!("{m}: {e}")),
                Ok(seq) => {
                    bad.extend(b.witnesses(&seq));
                    let inside = seq.steps.iter().all(|s| {
                        s.rotated
                            .as_ref()
                            .is_some_and(|x| x.iter().all(|c| c.kind == SemicycleKind::InsideCycle))
                    });
                    let bfs = dist[vertex(&g, m)][vertex(&g, &target)];
                    if seq.len() != 3 || seq.end != target || !inside || bfs.is_none_or(|d| d > 3)
                    {
                        bad.push(format!("{m}: {} steps, distance {bfs:?}", seq.len()));
                    }
                }
            }
        }
    }
    b.check(
        "ear-rotations",
        "an ear with at least six edges rotates in three inside-cycle steps",
        bad.is_empty() && ears > 0,
        format!("{ears} ears"),
        bad,
    );
    let mut bad = Vec::new();
    for m in v {
        match route_to_perimeter(m) {
            Err(e) => bad.push(format!("{m}: {e}")),
            Ok(r) => {
                bad.extend(b.witnesses(&r.to_odd));
                bad.extend(b.witnesses(&r.to_even));
                let (lo, hi) = r.class.bounds();
                let (x, y) = (r.to_odd.len(), r.to_even.len());
                if x.min(y) > lo || x.max(y) > hi {
                    bad.push(format!(
                        "{m}: class {} with lengths {x}, {y}",
                        r.class.name()
                    ));
                }
            }
        }
    }
    b.check(
        "perimeter-routes",
        "each matching reaches both perimeter matchings within its class bounds",
        bad.is_empty(),
        format!("{} matchings", v.len()),
        bad,
    );
    Ok(())
}
