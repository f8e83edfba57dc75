#![allow(dead_code)]

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ribbon_kh::links::catalog;
use ribbon_kh::{ArrowPresentation, PdCode, RibbonGraph};

pub fn arrows(text: &str) -> RibbonGraph {
    ArrowPresentation::parse(text).unwrap().to_ribbon_graph().unwrap()
}

pub fn three_loops() -> RibbonGraph {
    arrows("circle: 1+ 2+ 3+ 1+ 2+ 3+")
}

pub fn two_vertex() -> RibbonGraph {
    arrows("circle: 1+ 3+ 2+ 3+ ; circle: 2+ 1+")
}

pub fn pds() -> Vec<(&'static str, PdCode)> {
    vec![
        ("kink", catalog::kink()),
        ("hopf", catalog::hopf()),
        ("right trefoil", catalog::right_trefoil()),
        ("left trefoil", catalog::left_trefoil()),
        ("three-crossing unknot", catalog::three_crossing_unknot()),
        ("figure eight", catalog::figure_eight()),
        ("cinquefoil", catalog::cinquefoil()),
        ("three twist", catalog::three_twist()),
        ("stevedore", catalog::stevedore()),
        ("six two", catalog::six_two()),
    ]
}

/// Named graphs used across the suites, all connected.
pub fn corpus() -> Vec<(String, RibbonGraph)> {
    let mut out: Vec<(String, RibbonGraph)> = vec![
        ("point".into(), RibbonGraph::point()),
        ("bridge".into(), RibbonGraph::new(vec![vec![0], vec![1]]).unwrap()),
        ("loop".into(), RibbonGraph::new(vec![vec![0, 1]]).unwrap()),
        ("interlaced loops".into(), RibbonGraph::new(vec![vec![0, 2, 1, 3]]).unwrap()),
        ("theta".into(), RibbonGraph::new(vec![vec![0, 2, 4], vec![5, 3, 1]]).unwrap()),
        ("three_loops".into(), three_loops()),
        ("two vertex".into(), two_vertex()),
    ];
    for (name, pd) in pds() {
        out.push((format!("all-A {name}"), pd.all_a_graph().unwrap().0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..8 {
        let v = 1 + k % 4;
        let e = (v - 1) + 1 + k % 3;
        out.push((format!("random {k}"), RibbonGraph::random_connected(v, e, &mut rng).unwrap()));
    }
    out
}

/// Connected graphs with at most `max_edges` edges.
pub fn graphs(max_edges: usize) -> impl Strategy<Value = RibbonGraph> {
    (1..=4usize, 0..=max_edges, any::<u64>()).prop_map(move |(v, extra, seed)| {
        let v = v.min(max_edges + 1);
        let e = (v - 1).max(extra);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RibbonGraph::random_connected(v, e, &mut rng).unwrap()
    })
}
