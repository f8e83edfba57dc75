use std::process::{Command, Output};

use ribbon_kh::homology::{self, BigradedGroup};
use ribbon_kh::{ArrowPresentation, Basepoint};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ribbon-kh")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn kh_table_layout() {
    let expected = "\
j\\i    1  2  3
  5          Z
  3    Z     Z
  1  Z^3
 -1  Z^2
";
    assert_eq!(stdout(&["kh", &data("three_loops.arrows")]), expected);
}

#[test]
fn rkh_table_layout() {
    let expected = "\
j\\i    1  2  3
  4          Z
  2    Z
  0  Z^2
";
    assert_eq!(stdout(&["rkh", &data("three_loops.arrows")]), expected);
}

#[test]
fn qtrees_table_layout() {
    let out = stdout(&["qtrees", &data("three_loops.arrows"), "--edge-order", "1,2,3"]);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).take(4).map(|l| l.split_whitespace().skip(1).collect()).collect();
    assert_eq!(
        rows,
        vec![
            vec!["0", "0", "1", "1", "2"],
            vec!["1", "1", "0", "1", "0"],
            vec!["1", "1", "0", "1", "0"],
            vec!["1", "0", "1", "3", "4"]
        ]
    );
    assert!(out.contains("differential vanishes"));
}

#[test]
fn json_round_trips() {
    let g = ArrowPresentation::parse("circle: 1+ 2+ 3+ 1+ 2+ 3+").unwrap().to_ribbon_graph().unwrap();
    let kh = BigradedGroup::from_json(&stdout(&["kh", &data("three_loops.arrows"), "--json"])).unwrap();
    assert_eq!(kh, homology::khovanov(&g).unwrap());
    let rkh = BigradedGroup::from_json(&stdout(&["rkh", &data("three_loops.arrows"), "--json"])).unwrap();
    assert_eq!(rkh, homology::reduced_khovanov(&g, Basepoint::default()).unwrap());
    assert_eq!(BigradedGroup::from_json(&rkh.to_json().unwrap()).unwrap(), rkh);
}

#[test]
fn info_single_vertex() {
    let out = stdout(&["info", &data("single_vertex.arrows")]);
    assert!(out.starts_with("V=1 E=0 F=1 g=0 "), "{out}");
}

#[test]
fn pd_input_gets_link_gradings() {
    let shifted = BigradedGroup::from_json(&stdout(&["kh", &data("three_crossing_unknot.pd"), "--json"])).unwrap();
    assert_eq!(shifted.entries.keys().copied().collect::<Vec<_>>(), vec![(0, -1), (0, 1)]);
    let raw = BigradedGroup::from_json(&stdout(&["kh", &data("three_crossing_unknot.pd"), "--json", "--raw"])).unwrap();
    assert_eq!(raw.shift(-2, -3), shifted);
}

#[test]
fn inline_input_and_seed() {
    let a = stdout(&["kh", "circle: 1+ 2+ 1+ 2+", "--seed", "3"]);
    let b = stdout(&["kh", "circle: 1+ 2+ 1+ 2+"]);
    assert_eq!(a, b);
}

#[test]
fn jones_of_trefoil() {
    assert_eq!(stdout(&["jones", &data("right_trefoil.pd")]).trim(), "q^2 + q^6 - q^8");
}

#[test]
fn dual_output_parses() {
    let out = stdout(&["dual", &data("two_vertex.arrows")]);
    let d = ArrowPresentation::parse(&out).unwrap().to_ribbon_graph().unwrap();
    assert_eq!(d.vertex_count(), 1);
}

#[test]
fn move_script() {
    let out = stdout(&["move", &data("three_loops.arrows"), "R1b c0 p2; R1b- x4", "--check"]);
    let g = ArrowPresentation::parse(&out).unwrap().to_ribbon_graph().unwrap();
    let three_loops = ArrowPresentation::parse("circle: 1+ 2+ 3+ 1+ 2+ 3+").unwrap().to_ribbon_graph().unwrap();
    assert!(g.is_isomorphic(&three_loops));
}

#[test]
fn check_passes_and_exits_zero() {
    for file in ["three_loops.arrows", "two_vertex.arrows", "right_trefoil.pd", "three_crossing_unknot.pd"] {
        let out = run(&["check", &data(file), "--samples", "3"]);
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(out.status.success(), "{file}: {text}");
        assert!(text.lines().all(|l| l.starts_with("PASS")), "{file}: {text}");
    }
}

#[test]
fn errors_exit_nonzero() {
    for args in [
        vec!["kh", "not a presentation"],
        vec!["kh", "circle: 1+ 1-"],
        vec!["kh", "circle: 1+ 2+ 1+ 2+", "--max-edges", "1"],
        vec!["kh", "circle: 1+ 1+", "--basepoint", "0", "0"],
        vec!["qtrees", "circle: 1+ 2+ 1+ 2+", "--edge-order", "1,3"],
        vec!["move", "circle: 1+ 1+", "R3 c0 p0"],
    ] {
        let out = run(&args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{args:?}");
    }
}
