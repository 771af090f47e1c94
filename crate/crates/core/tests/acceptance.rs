//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p dcompat-core --test acceptance -- --nocapture` to
//! see the lines. Criteria known to be false for the stated sizes are listed
//! in `KNOWN_FALSE`; the test fails if the set of failing criteria differs.

use dcompat_core::compat::{
    exists_witness, shared_perimeter_edges, tree_prefilter, validate_witness, Family,
};
use dcompat_core::constructions::{
    caterpillar_path_between, ear_rotation_sequence, tree_for_inside_cycles, tree_path_between,
    RotationSequence,
};
use dcompat_core::dcg::{analyze, build_dcg, Dcg};
use dcompat_core::geometry::{ConvexConfig, Parity};
use dcompat_core::matching::{
    all_semicycles, dual_tree, enumerate_matchings, inside_semicycles, near_two_semiear_matching,
    perimeter_matching, rotate, rotate_all, semiear_parity, semiears, two_semiear_matching,
    PlaneMatching, Semicycle, SemicycleKind,
};
use dcompat_core::oracle::OracleTable;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

/// Criteria whose claims do not hold at the stated sizes.
/// 6: the perimeter matchings on ten points are five steps apart.
/// 12: the two matchings on four points are not adjacent.
const KNOWN_FALSE: [usize; 2] = [6, 12];

const ENUMERATION_LIMIT: Duration = Duration::from_secs(1);
const TREE_GRAPH_LIMIT: Duration = Duration::from_secs(60);
const TREE_WALK_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_CYCLE_SETS: usize = 1000;
const TREE_DIAMETERS: [usize; 2] = [4, 5];
const LOWER_BOUND: usize = 4;
const EAR_STEPS: usize = 3;
const TREE_WALK_MAX: usize = 5;

static WITNESSES: AtomicUsize = AtomicUsize::new(0);
static BAD_WITNESSES: AtomicUsize = AtomicUsize::new(0);

fn cfg(n: usize) -> ConvexConfig {
    ConvexConfig::new(n).unwrap()
}

fn count_witness(ok: bool) {
    WITNESSES.fetch_add(1, Ordering::Relaxed);
    if !ok {
        BAD_WITNESSES.fetch_add(1, Ordering::Relaxed);
    }
}

fn check_sequence(seq: &RotationSequence) -> bool {
    let mut ok = seq.validate().is_ok();
    for s in &seq.steps {
        let v = validate_witness(&s.witness, &s.before, &s.after).is_ok();
        count_witness(v);
        ok &= v;
    }
    ok
}

fn idx(g: &Dcg, m: &PlaneMatching) -> usize {
    g.index_of(m).unwrap()
}

struct Gate {
    results: Vec<(usize, bool)>,
}

impl Gate {
    fn report(&mut self, n: usize, pass: bool, detail: String) {
        println!(
            "criterion {n:>2}: {} ({detail})",
            if pass { "PASS" } else { "FAIL" }
        );
        self.results.push((n, pass));
    }
}

/// Plane perfect matchings counted by splitting at the partner of point 0.
fn independent_count(points: usize) -> u64 {
    let n = points / 2;
    let mut c = vec![1u64; n + 1];
    for k in 1..=n {
        c[k] = (0..k).map(|i| c[i] * c[k - 1 - i]).sum();
    }
    c[n]
}

fn criterion_1(g: &mut Gate) {
    let t = Instant::now();
    let counts: Vec<usize> = (2..=16)
        .step_by(2)
        .map(|s| enumerate_matchings(cfg(s)).len())
        .collect();
    let elapsed = t.elapsed();
    let expected: Vec<u64> = (2..=16).step_by(2).map(independent_count).collect();
    let ok = counts.iter().zip(&expected).all(|(a, b)| *a as u64 == *b)
        && expected == [1, 2, 5, 14, 42, 132, 429, 1430]
        && elapsed < ENUMERATION_LIMIT;
    g.report(1, ok, format!("counts {counts:?} in {elapsed:.2?}"));
}

fn criterion_2(g: &mut Gate) {
    let mut ok = true;
    let mut detail = Vec::new();
    for size in [10, 12] {
        let t = Instant::now();
        let graph = build_dcg(cfg(size), Family::Tree).unwrap();
        let r = analyze(&graph);
        let elapsed = t.elapsed();
        // adjacency must equal the exhaustive tree scan
        let table = OracleTable::build(cfg(size)).unwrap();
        let n = graph.vertex_count();
        let same = (0..n).all(|i| {
            (0..n).all(|j| i == j || graph.adjacent(i, j) == table.compatible(i, j, Family::Tree))
        });
        ok &= same
            && r.connected
            && r.diameter.is_some_and(|d| TREE_DIAMETERS.contains(&d))
            && elapsed < TREE_GRAPH_LIMIT;
        detail.push(format!(
            "2n={size}: diameter {:?}, oracle agreement {same}, {elapsed:.2?}",
            r.diameter
        ));
    }
    g.report(2, ok, detail.join("; "));
}

fn criterion_3(g: &mut Gate) {
    let t12 = build_dcg(cfg(12), Family::Tree).unwrap();
    let d12 = t12.distance(
        idx(&t12, &two_semiear_matching(cfg(12), Parity::Even).unwrap()),
        idx(&t12, &two_semiear_matching(cfg(12), Parity::Odd).unwrap()),
    );
    let t10 = build_dcg(cfg(10), Family::Tree).unwrap();
    let d10 = t10.distance(
        idx(
            &t10,
            &near_two_semiear_matching(cfg(10), Parity::Even).unwrap(),
        ),
        idx(
            &t10,
            &near_two_semiear_matching(cfg(10), Parity::Odd).unwrap(),
        ),
    );
    let ok = [d12, d10]
        .iter()
        .all(|d| d.is_none_or(|d| d >= LOWER_BOUND));
    g.report(
        3,
        ok,
        format!("2-semiear pair at 2n=12: {d12:?}; near-2-semiear pair at 2n=10: {d10:?}"),
    );
}

fn criterion_4(g: &mut Gate) {
    let mut edges = 0;
    let mut bad = 0;
    for size in (2..=12).step_by(2) {
        let graph = build_dcg(cfg(size), Family::Tree).unwrap();
        let v = graph.vertices();
        for (i, j) in graph.edges() {
            edges += 1;
            if shared_perimeter_edges(&v[i], &v[j]) < 2 {
                bad += 1;
            }
        }
    }
    g.report(
        4,
        bad == 0,
        format!("{edges} edges at 2n<=12, {bad} violations"),
    );
}

/// Random set of pairwise disjoint inside cycles of `m`, at least two when possible.
fn random_cycle_set(m: &PlaneMatching, rng: &mut ChaCha8Rng) -> Vec<Semicycle> {
    let mut cycles = inside_semicycles(m, None);
    cycles.shuffle(rng);
    let mut used = BTreeSet::new();
    let mut out = Vec::new();
    for c in cycles {
        if c.points.iter().any(|p| used.contains(p)) || !(out.is_empty() || rng.gen_bool(0.8)) {
            continue;
        }
        out.push(c);
        if rotate_all(m, &out).is_ok() {
            used.extend(out.last().unwrap().points.iter().copied());
        } else {
            out.pop();
        }
    }
    out
}

fn criterion_5(g: &mut Gate) {
    let mut single = 0;
    let mut failures = 0;
    for size in (4..=10).step_by(2) {
        for m in enumerate_matchings(cfg(size)) {
            for k in inside_semicycles(&m, None) {
                single += 1;
                let after = rotate(&m, &k).unwrap();
                let ok = tree_for_inside_cycles(&m, std::slice::from_ref(&k))
                    .is_ok_and(|w| validate_witness(&w, &m, &after).is_ok());
                count_witness(ok);
                failures += usize::from(!ok);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut multi = 0;
    let mut sets = 0;
    for size in [12, 14] {
        let all = enumerate_matchings(cfg(size));
        let target = if size == 12 {
            RANDOM_CYCLE_SETS
        } else {
            RANDOM_CYCLE_SETS / 4
        };
        let mut done = 0;
        while done < target {
            let m = all.choose(&mut rng).unwrap();
            let set = random_cycle_set(m, &mut rng);
            if set.is_empty() {
                continue;
            }
            done += 1;
            sets += 1;
            multi += usize::from(set.len() >= 2);
            let after = rotate_all(m, &set).unwrap();
            let ok = tree_for_inside_cycles(m, &set)
                .is_ok_and(|w| validate_witness(&w, m, &after).is_ok());
            count_witness(ok);
            failures += usize::from(!ok);
        }
    }
    g.report(
        5,
        failures == 0 && multi > 0,
        format!("{single} single cycles at 2n<=10, {sets} random sets at 2n=12,14 ({multi} with two or more cycles), {failures} failures"),
    );
}

fn criterion_6(g: &mut Gate) {
    let t12 = build_dcg(cfg(12), Family::Tree).unwrap();
    let mut ears = 0;
    let mut bad = 0;
    for m in t12.vertices() {
        for ear in all_semicycles(m)
            .into_iter()
            .filter(|s| s.kind == SemicycleKind::Semiear && s.len() >= 6)
        {
            ears += 1;
            let target = rotate(m, &ear).unwrap();
            let ok = ear_rotation_sequence(m, &ear).is_ok_and(|seq| {
                let inside = seq.steps.iter().all(|s| {
                    s.rotated
                        .as_ref()
                        .is_some_and(|x| x.iter().all(|c| c.kind == SemicycleKind::InsideCycle))
                });
                check_sequence(&seq) && seq.len() == EAR_STEPS && seq.end == target && inside
            });
            let d = t12.distance(idx(&t12, m), idx(&t12, &target));
            bad += usize::from(!ok || d.is_none_or(|d| d > EAR_STEPS));
        }
    }
    let mut perimeter = Vec::new();
    for size in [10, 12] {
        let t = build_dcg(cfg(size), Family::Tree).unwrap();
        let d = t.distance(
            idx(&t, &perimeter_matching(cfg(size), Parity::Even)),
            idx(&t, &perimeter_matching(cfg(size), Parity::Odd)),
        );
        perimeter.push((size, d));
    }
    let perimeter_ok = perimeter
        .iter()
        .all(|(_, d)| d.is_some_and(|d| d <= EAR_STEPS));
    g.report(
        6,
        ears > 0 && bad == 0 && perimeter_ok,
        format!("{ears} ears at 2n=12 with {bad} failures; perimeter distances {perimeter:?}"),
    );
}

fn criterion_7(g: &mut Gate) {
    let graph = build_dcg(cfg(12), Family::Tree).unwrap();
    let v = graph.vertices();
    let t = Instant::now();
    let mut pairs = 0;
    let mut bad = 0;
    let mut longest = 0;
    for i in 0..v.len() {
        let dist = graph.bfs(i);
        for j in i + 1..v.len() {
            pairs += 1;
            match tree_path_between(&v[i], &v[j]) {
                Ok(seq) => {
                    longest = longest.max(seq.len());
                    let ok = check_sequence(&seq)
                        && seq.len() <= TREE_WALK_MAX
                        && dist[j].is_some_and(|d| seq.len() >= d);
                    bad += usize::from(!ok);
                }
                Err(_) => bad += 1,
            }
        }
    }
    let elapsed = t.elapsed();
    g.report(
        7,
        pairs == 8646 && bad == 0 && elapsed < TREE_WALK_LIMIT,
        format!("{pairs} pairs, longest {longest}, {bad} failures, {elapsed:.2?}"),
    );
}

fn criterion_8(g: &mut Gate) {
    let mut ok = true;
    let mut detail = Vec::new();
    for size in [10, 12] {
        let c = analyze(&build_dcg(cfg(size), Family::Caterpillar).unwrap());
        let c3 = analyze(&build_dcg(cfg(size), Family::OneLeggedCaterpillar).unwrap());
        let all = enumerate_matchings(cfg(size));
        let mut longest = 0;
        let mut bad = 0;
        for a in &all {
            for b in &all {
                match caterpillar_path_between(a, b, false) {
                    Ok(seq) => {
                        longest = longest.max(seq.len());
                        // 5n/2 with n = size/2
                        bad += usize::from(!check_sequence(&seq) || 4 * seq.len() > 5 * size);
                    }
                    Err(_) => bad += 1,
                }
            }
        }
        ok &= c.connected && c3.connected && bad == 0;
        detail.push(format!(
            "2n={size}: C diameter {:?}, C3 diameter {:?}, longest walk {longest}, {bad} failures",
            c.diameter, c3.diameter
        ));
    }
    g.report(8, ok, detail.join("; "));
}

fn criterion_9(g: &mut Gate) {
    let graph = build_dcg(cfg(12), Family::Path).unwrap();
    let mut checked = 0;
    let mut bad = 0;
    for (i, m) in graph.vertices().iter().enumerate() {
        if dual_tree(m).leaves().len() >= 3 {
            checked += 1;
            bad += usize::from(graph.degree(i) > 0);
        }
    }
    g.report(
        9,
        checked > 0 && bad == 0,
        format!("{checked} matchings with three or more leaves, {bad} with a neighbour"),
    );
}

fn criterion_10(g: &mut Gate) {
    let mut ok = true;
    let mut detail = Vec::new();
    for size in [10, 12] {
        let graph = build_dcg(cfg(size), Family::Path).unwrap();
        let even = idx(&graph, &perimeter_matching(cfg(size), Parity::Even));
        let odd = idx(&graph, &perimeter_matching(cfg(size), Parity::Odd));
        let dist = graph.bfs(even);
        let component: Vec<&PlaneMatching> = graph
            .vertices()
            .iter()
            .enumerate()
            .filter(|(i, _)| dist[*i].is_some())
            .map(|(_, m)| m)
            .collect();
        let only_even = component.iter().all(|m| {
            semiears(m)
                .iter()
                .all(|s| semiear_parity(&cfg(size), s) == Some(Parity::Even))
        });
        ok &= dist[odd].is_none() && only_even;
        detail.push(format!(
            "2n={size}: separated {}, even component size {}",
            dist[odd].is_none(),
            component.len()
        ));
    }
    g.report(10, ok, detail.join("; "));
}

fn criterion_11(g: &mut Gate) {
    let mut pairs = 0;
    let mut disagreements = 0;
    let mut prefilter_agree = 0;
    for size in (2..=10).step_by(2) {
        let table = OracleTable::build(cfg(size)).unwrap();
        let v = table.matchings();
        for i in 0..v.len() {
            for j in i..v.len() {
                pairs += 1;
                for family in Family::ALL {
                    let w = exists_witness(&v[i], &v[j], family).unwrap();
                    if let Some(w) = &w {
                        count_witness(validate_witness(w, &v[i], &v[j]).is_ok());
                    }
                    disagreements += usize::from(w.is_some() != table.compatible(i, j, family));
                }
                let exact = table.compatible(i, j, Family::Tree);
                prefilter_agree += usize::from(tree_prefilter(&v[i], &v[j]).unwrap() == exact);
            }
        }
    }
    g.report(
        11,
        disagreements == 0,
        format!("{pairs} pairs x 4 families, {disagreements} disagreements; prefilter agrees on {prefilter_agree}/{pairs}"),
    );
}

fn criterion_12(g: &mut Gate) {
    let mut detail = Vec::new();
    let mut four = false;
    for size in [4, 6, 8] {
        let r = analyze(&build_dcg(cfg(size), Family::Tree).unwrap());
        if size == 4 {
            four = r.connected;
        }
        detail.push(format!(
            "2n={size}: connected {}, components {:?}",
            r.connected, r.component_sizes
        ));
    }
    g.report(12, four, detail.join("; "));
}

fn criterion_13(g: &mut Gate) {
    let total = WITNESSES.load(Ordering::Relaxed);
    let bad = BAD_WITNESSES.load(Ordering::Relaxed);
    g.report(
        13,
        total > 0 && bad == 0,
        format!("{total} witnesses validated, {bad} rejected"),
    );
}

// Runs without the libtest harness so the criterion lines are never captured.
fn main() {
    let mut g = Gate {
        results: Vec::new(),
    };
    criterion_1(&mut g);
    criterion_2(&mut g);
    criterion_3(&mut g);
    criterion_4(&mut g);
    criterion_5(&mut g);
    criterion_6(&mut g);
    criterion_7(&mut g);
    criterion_8(&mut g);
    criterion_9(&mut g);
    criterion_10(&mut g);
    criterion_11(&mut g);
    criterion_12(&mut g);
    criterion_13(&mut g);
    let failing: Vec<usize> = g
        .results
        .iter()
        .filter(|(_, p)| !p)
        .map(|(n, _)| *n)
        .collect();
    assert_eq!(
        failing, KNOWN_FALSE,
        "failing criteria differ from the known-false set"
    );
    println!("acceptance: failing set {failing:?} matches the known-false set");
}
