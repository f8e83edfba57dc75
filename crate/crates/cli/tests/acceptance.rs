//! The acceptance criteria, one PASS/FAIL line each.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ribbon_kh::arrows::Arrow;
use ribbon_kh::complex::{self, EdgeAssignment};
use ribbon_kh::homology::{self, GroupEntry, Report};
use ribbon_kh::links::{self, catalog};
use ribbon_kh::moves::{self, MoveSite};
use ribbon_kh::quasitree;
use ribbon_kh::{ArrowPresentation, Basepoint, BigradedGroup, PdCode, RibbonGraph};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ribbon-kh")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn free(cells: &[(i32, i32, usize)]) -> BigradedGroup {
    let mut g = BigradedGroup::default();
    for &(i, j, rank) in cells {
        g.insert(i, j, GroupEntry { rank, torsion: vec![] });
    }
    g
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Outcome {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn report(r: Report) -> Outcome {
    if r.passed() {
        Ok(())
    } else {
        Err(r.to_string())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn kh_json(cmd: &str) -> Result<BigradedGroup, String> {
    let three_loops = data("three_loops.arrows");
    BigradedGroup::from_json(&cli(&[cmd, &three_loops, "--json"])?).map_err(|e| e.to_string())
}

fn unreduced_three_loops() -> Outcome {
    let t = Instant::now();
    let kh = kh_json("kh")?;
    within(t.elapsed(), Duration::from_secs(1))?;
    expect("Kh", kh, free(&[(1, -1, 2), (1, 1, 3), (1, 3, 1), (3, 3, 1), (3, 5, 1)]))
}

fn reduced_three_loops() -> Outcome {
    let t = Instant::now();
    let rkh = kh_json("rkh")?;
    within(t.elapsed(), Duration::from_secs(1))?;
    expect("reduced Kh", rkh, free(&[(1, 0, 2), (1, 2, 1), (3, 4, 1)]))
}

fn quasi_trees_three_loops() -> Outcome {
    let out = cli(&["qtrees", &data("three_loops.arrows"), "--edge-order", "1,2,3", "--json"])?;
    let rows: Vec<serde_json::Value> = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let rows: Vec<[i64; 5]> = rows
        .iter()
        .map(|r| ["genus", "ia", "ea", "i_grading", "j_grading"].map(|k| r[k].as_i64().unwrap_or(i64::MIN)))
        .collect();
    expect("rows", rows, vec![[0, 0, 1, 1, 2], [1, 1, 0, 1, 0], [1, 1, 0, 1, 0], [1, 0, 1, 3, 4]])
}

fn unknot_cube() -> Outcome {
    let (g, signs) = catalog::three_crossing_unknot().all_a_graph().map_err(|e| e.to_string())?;
    let kh = homology::khovanov(&g).map_err(|e| e.to_string())?;
    expect("total rank", kh.total_rank(), 2)?;
    let (r, s) = signs.grading_shift();
    expect("shifted Kh", kh.shift(r, s), free(&[(0, -1, 1), (0, 1, 1)]))?;
    let via_cli = BigradedGroup::from_json(&cli(&["kh", &data("three_crossing_unknot.pd"), "--json"])?)
        .map_err(|e| e.to_string())?;
    expect("cli Kh", via_cli, free(&[(0, -1, 1), (0, 1, 1)]))
}

fn lemma_pds() -> Vec<PdCode> {
    vec![
        catalog::kink(),
        catalog::hopf(),
        catalog::right_trefoil(),
        catalog::left_trefoil(),
        catalog::three_crossing_unknot(),
        catalog::figure_eight(),
        catalog::cinquefoil(),
        catalog::three_twist(),
        catalog::stevedore(),
        catalog::six_two(),
    ]
}

fn state_circles() -> Outcome {
    let t = Instant::now();
    for pd in lemma_pds() {
        if pd.crossing_count() > 6 {
            return Err("diagram over six crossings".into());
        }
        report(links::check_state_circles(&pd).map_err(|e| e.to_string())?)?;
    }
    within(t.elapsed(), Duration::from_secs(10))
}

/// Twenty connected graphs with at most eight edges.
fn random_graphs() -> Vec<RibbonGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    (0..20)
        .map(|_| {
            let v = rng.gen_range(1..=4);
            let e = rng.gen_range(v - 1..=8).max(1);
            RibbonGraph::random_connected(v, e, &mut rng).expect("valid sizes")
        })
        .collect()
}

/// The random graphs plus named graphs and larger random ones, up to twelve edges.
fn test_graphs() -> Vec<RibbonGraph> {
    let mut out = random_graphs();
    for text in ["circle: 1+ 2+ 3+ 1+ 2+ 3+", "circle: 1+ 3+ 2+ 3+ ; circle: 2+ 1+", "circle:"] {
        out.push(ArrowPresentation::parse(text).unwrap().to_ribbon_graph().unwrap());
    }
    out.push(RibbonGraph::new(vec![vec![0], vec![1]]).unwrap());
    out.push(RibbonGraph::new(vec![vec![0, 1]]).unwrap());
    out.push(RibbonGraph::new(vec![vec![0, 2, 4], vec![5, 3, 1]]).unwrap());
    for pd in lemma_pds() {
        out.push(pd.all_a_graph().unwrap().0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for e in 9..=12 {
        let v = rng.gen_range(1..=4);
        out.push(RibbonGraph::random_connected(v, e, &mut rng).unwrap());
    }
    out
}

fn assignment_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (k, g) in random_graphs().iter().enumerate() {
        let reference = homology::khovanov(g).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let eps = EdgeAssignment::random(g.edge_count(), &mut rng);
            if !eps.is_valid() {
                return Err(format!("graph {k}: invalid assignment"));
            }
            let kh = homology::homology(&complex::build_complex(g, &eps).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if kh != reference {
                return Err(format!("graph {k}: homology depends on the edge assignment"));
            }
        }
    }
    Ok(())
}

fn duality() -> Outcome {
    for g in random_graphs() {
        report(homology::check_duality(&g).map_err(|e| e.to_string())?)?;
    }
    Ok(())
}

fn orders(g: &RibbonGraph, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let base = quasitree::resolve_order(g, None).unwrap();
    let mut out = vec![base.clone()];
    for _ in 0..10 {
        let mut o = base.clone();
        o.shuffle(rng);
        out.push(o);
    }
    out
}

/// Census and both grading routes under ten random orders.
fn quasi_tree_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for g in test_graphs() {
        let brute = quasitree::quasi_trees_brute_force(&g);
        for order in orders(&g, &mut rng) {
            let records = quasitree::quasi_trees(&g, &order).map_err(|e| e.to_string())?;
            let mut found: Vec<u64> = records.iter().map(|r| r.edges).collect();
            found.sort();
            expect("census", &found, &brute)?;
            for r in &records {
                let via = quasitree::gradings_via_activities(&g, r.edges, &order).map_err(|e| e.to_string())?;
                expect("gradings", via, (r.i_grading, r.j_grading))?;
            }
        }
    }
    Ok(())
}

fn euler_bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for g in test_graphs() {
        // check_quasi_trees compares the quasi-tree sum with the reduced complex
        report(quasitree::check_quasi_trees(&g, &orders(&g, &mut rng)[..2]).map_err(|e| e.to_string())?)?;
    }
    for pd in [catalog::right_trefoil(), catalog::figure_eight(), catalog::three_crossing_unknot()] {
        let (g, signs) = pd.all_a_graph().map_err(|e| e.to_string())?;
        let (r, s) = signs.grading_shift();
        let chi = homology::reduced_khovanov(&g, Basepoint::default())
            .map_err(|e| e.to_string())?
            .shift(r, s)
            .euler_characteristic();
        expect("jones expansion", quasitree::jones_expansion(&pd).map_err(|e| e.to_string())?, chi)?;
    }
    Ok(())
}

fn grading_theorems() -> Outcome {
    for g in test_graphs() {
        report(homology::check_grading_theorems(&g).map_err(|e| e.to_string())?)?;
    }
    Ok(())
}

/// Adds fresh arrows `a y b` on one circle, `b a` and `y` elsewhere, so
/// that an R3 move applies.
fn plant_r3(ap: &ArrowPresentation, rng: &mut ChaCha8Rng) -> Option<ArrowPresentation> {
    let top = ap.labels().into_iter().max().unwrap_or(0);
    let (a, y, b) = (top + 1, top + 2, top + 3);
    let mut circles = ap.circles.clone();
    let pick = |circles: &Vec<Vec<Arrow>>, rng: &mut ChaCha8Rng| {
        let c = rng.gen_range(0..circles.len());
        (c, rng.gen_range(0..=circles[c].len()))
    };
    let (c, p) = pick(&circles, rng);
    circles[c].splice(p..p, [a, y, b].map(Arrow::plus));
    let (c, p) = pick(&circles, rng);
    circles[c].splice(p..p, [b, a].map(Arrow::plus));
    let (c, p) = pick(&circles, rng);
    circles[c].insert(p, Arrow::plus(y));
    let planted = ArrowPresentation::new(circles).ok()?;
    let sites = moves::applicable_sites(&planted).ok()?;
    sites.iter().any(|s| matches!(s, MoveSite::R3 { .. })).then_some(planted)
}

fn move_graphs() -> Vec<ArrowPresentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut out = Vec::new();
    while out.len() < 10 {
        let v = rng.gen_range(1..=2);
        let e = rng.gen_range(v - 1..=3);
        let g = RibbonGraph::random_connected(v, e, &mut rng).unwrap();
        let ap = ArrowPresentation::from_ribbon_graph(&g);
        if let Some(planted) = plant_r3(&ap, &mut rng) {
            out.push(planted);
        }
    }
    out
}

fn reidemeister() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    let mut r3 = 0;
    for ap in move_graphs() {
        for site in moves::applicable_sites(&ap).map_err(|e| e.to_string())? {
            let after = moves::apply_move(&ap, site).map_err(|e| e.to_string())?;
            if after.edge_count() > 10 {
                return Err(format!("{site} gives {} edges", after.edge_count()));
            }
            report(moves::check_invariance(&ap, site).map_err(|e| e.to_string())?)?;
            count += 1;
            r3 += matches!(site, MoveSite::R3 { .. }) as usize;
        }
    }
    if r3 == 0 {
        return Err("no R3 site exercised".into());
    }
    println!("    {count} sites, {r3} of them R3");
    within(t.elapsed(), Duration::from_secs(60))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("unreduced homology of the three-loop graph", unreduced_three_loops),
        ("reduced homology of the three-loop graph", reduced_three_loops),
        ("quasi-trees of the three-loop graph", quasi_trees_three_loops),
        ("three-crossing unknot homology", unknot_cube),
        ("state circles equal boundary components", state_circles),
        ("edge-assignment independence", assignment_independence),
        ("duality", duality),
        ("quasi-tree census and gradings", quasi_tree_oracle),
        ("Euler characteristic bridge", euler_bridge),
        ("grading theorems", grading_theorems),
        ("Reidemeister invariance", reidemeister),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = run();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("PASS {:>2}. {name} ({secs:.2} s)", n + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2}. {name} ({secs:.2} s): {e}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
