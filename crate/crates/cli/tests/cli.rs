use dcompat::{parse_matching, GraphJson, ReportJson};
use dcompat_core::{enumerate_matchings, Chord, ConvexConfig};
use proptest::prelude::*;
use std::process::{Command, Output};

fn dcompat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcompat"))
        .args(args)
        .env_remove("DCOMPAT_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(args: &[&str]) -> i32 {
    dcompat(args).status.code().expect("exit code")
}

const P10_EVEN: &str = "0-1,2-3,4-5,6-7,8-9";
const P10_ODD: &str = "0-9,1-2,3-4,5-6,7-8";

#[test]
fn golden_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let report = report.to_str().unwrap();
    let cases: &[(&[&str], i32)] = &[
        (&["enumerate", "--points", "4"], 0),
        (&["enumerate", "--points", "7"], 2),
        (&["enumerate", "--points", "0"], 2),
        (
            &[
                "compat", "--family", "tree", "--m1", P10_EVEN, "--m2", P10_EVEN,
            ],
            0,
        ),
        (
            &[
                "compat", "--family", "tree", "--m1", P10_EVEN, "--m2", P10_ODD,
            ],
            1,
        ),
        (
            &[
                "compat", "--family", "tree", "--m1", "0-2,1-3", "--m2", "0-1,2-3",
            ],
            2,
        ),
        (
            &[
                "compat",
                "--family",
                "tree",
                "--m1",
                "0-1,2-3",
                "--m2",
                "0-1,2-3,4-5",
            ],
            2,
        ),
        (
            &[
                "compat", "--family", "shrub", "--m1", "0-1,2-3", "--m2", "0-1,2-3",
            ],
            2,
        ),
        (
            &[
                "route",
                "--m1",
                "0-1,2-3,4-5,6-7",
                "--m2",
                "0-1,2-3,4-5,6-7",
            ],
            2,
        ),
        (&["dcg", "--points", "14", "--family", "path"], 2),
        (&["verify", "--suite", "nope"], 2),
        (
            &[
                "verify",
                "--suite",
                "tree-diameter",
                "--points",
                "10",
                "--report",
                report,
            ],
            0,
        ),
        (&["verify", "--suite", "small-sizes", "--report", report], 1),
    ];
    for (args, want) in cases {
        assert_eq!(code(args), *want, "{args:?}");
    }
}

#[test]
fn enumerate_lists_and_classifies() {
    let o = dcompat(&["enumerate", "--points", "10", "--classify"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 42);
    assert_eq!(
        text.lines().filter(|l| l.contains("\tPerimeter")).count(),
        2
    );
    assert_eq!(
        stdout(&dcompat(&["enumerate", "--points", "4"]))
            .lines()
            .count(),
        2
    );
}

#[test]
fn compat_prints_witness_and_obstruction() {
    let o = dcompat(&[
        "compat", "--family", "tree", "--m1", P10_EVEN, "--m2", P10_ODD,
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("no\n"));
    assert!(text.contains("obstruction SharedPerimeterDeficit"));

    // three semiears at 12 points: blocks 1-2, 5-6, 9-10 under diagonals
    let three = "0-3,1-2,4-7,5-6,8-11,9-10";
    let o = dcompat(&["compat", "--family", "path", "--m1", three, "--m2", three]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains("obstruction ThreeSemiears"),
        "{}",
        stdout(&o)
    );

    let m = "0-1,2-5,3-4,6-7";
    let o = dcompat(&[
        "compat",
        "--family",
        "caterpillar",
        "--m1",
        m,
        "--m2",
        m,
        "--witness",
        "--oracle",
    ]);
    let text = stdout(&o);
    assert!(text.contains("witness "), "{text}");
    assert!(text.contains("oracle: agrees"));
}

#[test]
fn route_sequences() {
    let pe = "0-1,2-3,4-5,6-7,8-9,10-11";
    let po = "0-11,1-2,3-4,5-6,7-8,9-10";
    let steps = |args: &[&str]| -> usize {
        let text = stdout(&dcompat(args));
        text.lines()
            .next()
            .and_then(|l| l.strip_prefix("steps="))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(steps(&["route", "--m1", pe, "--m2", po]) <= 3);
    assert_eq!(steps(&["route", "--m1", pe, "--m2", pe]), 0);
    let other = "0-1,2-11,3-6,4-5,7-10,8-9";
    assert!(
        steps(&[
            "route",
            "--family",
            "caterpillar",
            "--m1",
            other,
            "--m2",
            pe
        ]) <= 15
    );
    assert!(steps(&["route", "--family", "onelegged", "--m1", other, "--m2", po]) <= 30);
}

#[test]
fn dcg_stats_and_exports() {
    let o = dcompat(&["dcg", "--points", "10", "--family", "tree", "--stats"]);
    let text = stdout(&o);
    assert!(
        text.contains("vertices=42 ") && text.contains("connected=true diameter=5"),
        "{text}"
    );

    let o = dcompat(&["dcg", "--points", "12", "--family", "path", "--stats"]);
    let text = stdout(&o);
    assert!(text.contains("connected=false"));
    let isolated: usize = text
        .split("isolated=")
        .nth(1)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(isolated > 0);

    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("g.json");
    let dot = dir.path().join("g.dot");
    assert_eq!(
        code(&[
            "dcg",
            "--points",
            "8",
            "--out",
            json.to_str().unwrap(),
            "--quotient"
        ]),
        0
    );
    assert_eq!(
        code(&[
            "dcg",
            "--points",
            "8",
            "--out",
            dot.to_str().unwrap(),
            "--format",
            "dot"
        ]),
        0
    );

    let body = std::fs::read_to_string(&json).unwrap();
    let g: GraphJson = serde_json::from_str(&body).unwrap();
    assert_eq!(
        (g.points, g.family.as_str(), g.vertices.len()),
        (8, "tree", 14)
    );
    assert_eq!(serde_json::to_string_pretty(&g).unwrap() + "\n", body);
    let ms = g.matchings().unwrap();
    assert_eq!(ms, enumerate_matchings(ConvexConfig::new(8).unwrap()));
    assert!(g.edges.iter().all(|[a, b]| a < b && *b < 14));
    assert_eq!(g.quotient.unwrap().orbit_sizes.iter().sum::<usize>(), 14);

    let dot = std::fs::read_to_string(&dot).unwrap();
    assert!(dot.starts_with("graph ") && dot.trim_end().ends_with('}'));
    assert_eq!(dot.matches(" -- ").count(), g.edges.len());
    assert_eq!(dot.matches("[label=\"").count(), 14);
    assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(
        leftovers.len(),
        2,
        "temporary files left behind: {leftovers:?}"
    );
}

#[test]
fn outputs_are_deterministic_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |workers: &str, name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_dcompat"))
            .args([
                "dcg",
                "--points",
                "10",
                "--family",
                "caterpillar",
                "--out",
                path.to_str().unwrap(),
            ])
            .env("DCOMPAT_WORKERS", workers)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("1", "a.json"), run("4", "b.json"));
    // flag wins over the environment
    let o = Command::new(env!("CARGO_BIN_EXE_dcompat"))
        .args(["--workers", "2", "enumerate", "--points", "4"])
        .env("DCOMPAT_WORKERS", "not-a-number")
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_dcompat"))
        .args(["enumerate", "--points", "4"])
        .env("DCOMPAT_WORKERS", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_report_is_always_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.json");
    let o = dcompat(&[
        "verify",
        "--suite",
        "small-sizes",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r: ReportJson = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.suite, "small-sizes");
    assert!(r.checks.iter().any(|c| !c.pass));
    let again: ReportJson = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(again, r);
}

/// Independent validity check: perfect, and no two chords interleave.
fn is_plane_matching(size: usize, pairs: &[(usize, usize)]) -> bool {
    let mut seen = vec![0u8; size];
    for &(a, b) in pairs {
        if a == b || a >= size || b >= size {
            return false;
        }
        seen[a] += 1;
        seen[b] += 1;
    }
    if seen.iter().any(|&c| c != 1) {
        return false;
    }
    let inside = |x: usize, lo: usize, hi: usize| lo < x && x < hi;
    pairs.iter().enumerate().all(|(i, &(a, b))| {
        let (lo, hi) = (a.min(b), a.max(b));
        pairs[i + 1..]
            .iter()
            .all(|&(c, d)| inside(c, lo, hi) == inside(d, lo, hi))
    })
}

fn render(pairs: &[(usize, usize)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect::<Vec<_>>()
        .join(",")
}

proptest! {
    #[test]
    fn parse_accepts_exactly_plane_matchings(
        half in 1usize..=5,
        raw in prop::collection::vec((0usize..12, 0usize..12), 1..=6),
    ) {
        let size = 2 * half;
        let text = render(&raw);
        let parsed = parse_matching(&text, Some(size));
        prop_assert_eq!(parsed.is_ok(), is_plane_matching(size, &raw), "{}", text);
    }

    #[test]
    fn display_round_trips(half in 1usize..=6, pick in any::<prop::sample::Index>()) {
        let ms = enumerate_matchings(ConvexConfig::new(2 * half).unwrap());
        let m = &ms[pick.index(ms.len())];
        let back = parse_matching(&m.to_string(), None).unwrap();
        prop_assert_eq!(&back, m);
        let mut pairs: Vec<(usize, usize)> = m.edges().iter().map(|c: &Chord| (c.b, c.a)).collect();
        pairs.reverse();
        prop_assert_eq!(&parse_matching(&render(&pairs), None).unwrap(), m);
    }
}
