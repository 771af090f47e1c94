//! Text formats, exports and size guards behind the `dcompat` binary.

use dcompat_core::dcg::{default_bound, quotient_by_rotation, Dcg, GraphReport};
use dcompat_core::matching::classify_matching;
use dcompat_core::verify::SuiteReport;
use dcompat_core::{Chord, ConvexConfig, Error, Family, MatchingViolation, PlaneMatching};
use serde::{Deserialize, Serialize};
use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write as _;
use std::path::Path;

/// Parse failure with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

fn violation(v: &MatchingViolation) -> String {
    match v {
        MatchingViolation::Uncovered(p) => format!("coverage: point {p} is not matched"),
        MatchingViolation::Duplicate(p) => format!("duplicate: point {p} is matched twice"),
        MatchingViolation::Crossing(a, b) => format!("crossing: chords {a} and {b} cross"),
    }
}

/// Parses `a-b,c-d,...`. Without `points`, the point count is twice the
/// number of chords.
pub fn parse_matching(text: &str, points: Option<usize>) -> Result<PlaneMatching, ParseError> {
    let mut chords = Vec::new();
    let mut starts = Vec::new();
    let mut offset = 0;
    for token in text.split(',') {
        let at = offset + (token.len() - token.trim_start().len());
        offset += token.len() + 1;
        let t = token.trim();
        let err = |message: String| ParseError {
            offset: at,
            message,
        };
        if t.is_empty() {
            return Err(err("empty chord".into()));
        }
        let (a, b) = t
            .split_once('-')
            .ok_or_else(|| err(format!("expected `a-b`, got `{t}`")))?;
        let num = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| err(format!("`{}` is not a point index", s.trim())))
        };
        let (a, b) = (num(a)?, num(b)?);
        if a == b {
            return Err(err(format!("chord {a}-{b} joins a point to itself")));
        }
        chords.push(Chord::new(a, b));
        starts.push(at);
    }
    let size = points.unwrap_or(2 * chords.len());
    let config = ConvexConfig::new(size).map_err(|e| ParseError {
        offset: 0,
        message: e.to_string(),
    })?;
    let locate = |p: usize| {
        chords
            .iter()
            .position(|c| c.contains(p))
            .map_or(0, |i| starts[i])
    };
    PlaneMatching::from_chords(config, &chords).map_err(|e| match e {
        Error::NotAMatching(v) => {
            let offset = match v {
                MatchingViolation::Uncovered(_) => 0,
                MatchingViolation::Duplicate(p) => {
                    let mut hits = chords
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| c.contains(p))
                        .map(|(i, _)| starts[i]);
                    hits.nth(1).unwrap_or(0)
                }
                MatchingViolation::Crossing(_, b) => locate_chord(&chords, &starts, b),
            };
            ParseError {
                offset,
                message: violation(&v),
            }
        }
        Error::IndexOutOfRange { index, size } => ParseError {
            offset: locate(index),
            message: format!("point {index} out of range for {size} points"),
        },
        other => ParseError {
            offset: 0,
            message: other.to_string(),
        },
    })
}

fn locate_chord(chords: &[Chord], starts: &[usize], c: Chord) -> usize {
    chords.iter().position(|x| *x == c).map_or(0, |i| starts[i])
}

/// Rejects sizes above the family's default bound unless `unsafe_size`.
pub fn guard_size(points: usize, family: Family, unsafe_size: bool) -> Result<(), Error> {
    let bound = default_bound(family);
    if points > bound && !unsafe_size {
        return Err(Error::AboveBound {
            size: points,
            bound,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub matching: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientJson {
    pub orbit_sizes: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
    pub edges: Vec<[usize; 2]>,
    pub internal: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub points: usize,
    pub family: String,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientJson>,
}

impl GraphJson {
    pub fn from_dcg(g: &Dcg, with_quotient: bool) -> Self {
        let vertices = g
            .vertices()
            .iter()
            .enumerate()
            .map(|(id, m)| VertexJson {
                id,
                matching: m.to_string(),
                class: classify_matching(m).name().into(),
            })
            .collect();
        let quotient = with_quotient.then(|| {
            let q = quotient_by_rotation(g);
            QuotientJson {
                orbit_sizes: q.orbit_sizes(),
                orbits: q.orbits,
                edges: q.edges.into_iter().map(|(a, b)| [a, b]).collect(),
                internal: q.internal,
            }
        });
        GraphJson {
            points: g.config().size(),
            family: g.family().name().into(),
            vertices,
            edges: g.edges().map(|(a, b)| [a, b]).collect(),
            quotient,
        }
    }

    /// Matchings of the vertex list, re-parsed from their text.
    pub fn matchings(&self) -> Result<Vec<PlaneMatching>, ParseError> {
        self.vertices
            .iter()
            .map(|v| parse_matching(&v.matching, Some(self.points)))
            .collect()
    }
}

/// Undirected DOT graph; node labels carry the matching text and class.
pub fn to_dot(g: &Dcg) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "graph dcg_{}_{} {{",
        g.family().name(),
        g.config().size()
    );
    for (id, m) in g.vertices().iter().enumerate() {
        let _ = writeln!(
            out,
            "  {id} [label=\"{m}\\n{}\"];",
            classify_matching(m).name()
        );
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub anchor: String,
    pub pass: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub suite: String,
    pub points: usize,
    pub checks: Vec<CheckJson>,
    pub witnesses_validated: usize,
}

impl From<&SuiteReport> for ReportJson {
    fn from(r: &SuiteReport) -> Self {
        ReportJson {
            suite: r.suite.name().into(),
            points: r.points,
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name.clone(),
                    anchor: c.anchor.clone(),
                    pass: c.pass,
                    detail: c.detail.clone(),
                    counterexamples: c.counterexamples.clone(),
                })
                .collect(),
            witnesses_validated: r.witnesses_validated,
        }
    }
}

/// One-line `key=value` summary of a graph report.
pub fn stats_line(r: &GraphReport) -> String {
    let diameter = r
        .diameter
        .map_or_else(|| "disconnected".to_string(), |d| d.to_string());
    format!(
        "vertices={} edges={} components={} connected={} diameter={} largest_component_diameter={} isolated={}",
        r.vertices,
        r.edges,
        r.component_count(),
        r.connected,
        diameter,
        r.largest_component_diameter,
        r.isolated.len()
    )
}

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

pub const WORKERS_ENV: &str = "DCOMPAT_WORKERS";

/// Worker count from the flag, else from the environment value. The
/// environment is only parsed when the flag is absent.
pub fn resolve_workers(flag: Option<usize>, env: Option<&str>) -> Result<Option<usize>, String> {
    match (flag, env) {
        (Some(n), _) => Ok(Some(n)),
        (None, Some(v)) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{WORKERS_ENV}=`{v}` is not a worker count")),
        _ => Ok(None),
    }
}

/// Sizes the global worker pool; `None` keeps the default.
pub fn configure_workers(workers: Option<usize>) -> Result<(), rayon::ThreadPoolBuildError> {
    match workers {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global(),
        _ => Ok(()),
    }
}
