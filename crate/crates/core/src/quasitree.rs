//! Spanning quasi-trees, the deletion/contraction resolution tree, chord
//! diagrams and activities.
//!
//! An edge order is a sequence of edge labels `e_1, …, e_n`. The
//! resolution tree handles `e_n` first and `e_1` last.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{LaurentPoly, Report};
use crate::links::PdCode;
use crate::ribbon::{edge_of, Basepoint, EdgeClass, RibbonGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionLeaf {
    /// Edges of the quasi-tree, as a mask over the input graph's edges.
    pub edges_kept: u64,
    pub loop_count: usize,
    pub bridge_count: usize,
    pub con_count: usize,
}

impl ResolutionLeaf {
    /// `(Loop + Con, 2 Loop - Bridge + Con)`.
    pub fn gradings(&self) -> (i32, i32) {
        let (l, b, c) = (self.loop_count as i32, self.bridge_count as i32, self.con_count as i32);
        (l + c, 2 * l - b + c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiTreeRecord {
    pub edges: u64,
    pub genus: usize,
    pub ia: usize,
    pub ea: usize,
    pub i_grading: i32,
    pub j_grading: i32,
}

/// Cyclic word of edge labels; each label occurs twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChordDiagram {
    pub word: Vec<u32>,
}

impl ChordDiagram {
    pub fn chords(&self) -> Vec<(u32, usize, usize)> {
        let mut first = std::collections::BTreeMap::new();
        let mut out = Vec::new();
        for (p, &l) in self.word.iter().enumerate() {
            if let Some(q) = first.insert(l, p) {
                out.push((l, q, p));
            }
        }
        out.sort();
        out
    }

    pub fn crosses(&self, a: u32, b: u32) -> bool {
        let ends = |l: u32| {
            let ps: Vec<usize> = self.word.iter().enumerate().filter(|(_, &x)| x == l).map(|(p, _)| p).collect();
            (ps[0], ps[1])
        };
        let (a1, a2) = ends(a);
        let (b1, b2) = ends(b);
        (a1 < b1 && b1 < a2) != (a1 < b2 && b2 < a2)
    }

    /// The word with every occurrence of `label` removed.
    pub fn without(&self, label: u32) -> ChordDiagram {
        ChordDiagram { word: self.word.iter().copied().filter(|&l| l != label).collect() }
    }

    /// Equality as cyclic words.
    pub fn same_cycle(&self, other: &ChordDiagram) -> bool {
        let n = self.word.len();
        n == other.word.len() && (n == 0 || (0..n).any(|r| (0..n).all(|i| self.word[(i + r) % n] == other.word[i])))
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.word.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Edge order given as labels; `None` means ascending label order.
pub fn resolve_order(g: &RibbonGraph, order: Option<&[u32]>) -> Result<Vec<u32>> {
    let mut labels = g.labels().to_vec();
    labels.sort();
    let Some(order) = order else { return Ok(labels) };
    let mut sorted = order.to_vec();
    sorted.sort();
    if sorted != labels {
        return Err(Error::InvalidOrder(format!("{order:?} is not a permutation of the edge labels")));
    }
    Ok(order.to_vec())
}

fn mask_of_label(g: &RibbonGraph, label: u32) -> u64 {
    1u64 << g.edge_by_label(label).expect("label present")
}

pub fn resolution_tree_leaves(g: &RibbonGraph, order: &[u32]) -> Result<Vec<ResolutionLeaf>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let order = resolve_order(g, Some(order))?;
    let mut out = Vec::new();
    descend(g, g, &order, order.len(), 0, 0, &mut out)?;
    Ok(out)
}

fn descend(
    root: &RibbonGraph,
    g: &RibbonGraph,
    order: &[u32],
    remaining: usize,
    kept: u64,
    con: usize,
    out: &mut Vec<ResolutionLeaf>,
) -> Result<()> {
    if remaining == 0 {
        let loops = g.loop_count();
        out.push(ResolutionLeaf {
            edges_kept: kept,
            loop_count: loops,
            bridge_count: g.edge_count() - loops,
            con_count: con,
        });
        return Ok(());
    }
    let label = order[remaining - 1];
    let e = g.edge_by_label(label).expect("edge survives until processed");
    let bit = mask_of_label(root, label);
    match g.classify_edge(e)? {
        EdgeClass::Bridge => descend(root, g, order, remaining - 1, kept | bit, con, out),
        EdgeClass::SeparatingLoop => descend(root, g, order, remaining - 1, kept, con, out),
        _ => {
            descend(root, &g.delete_edge(e)?, order, remaining - 1, kept, con, out)?;
            descend(root, &g.contract_edge(e)?, order, remaining - 1, kept | bit, con + 1, out)
        }
    }
}

/// Quasi-trees in resolution-tree order, gradings from the leaf counters
/// and activities from the chord diagrams.
pub fn quasi_trees(g: &RibbonGraph, order: &[u32]) -> Result<Vec<QuasiTreeRecord>> {
    let leaves = resolution_tree_leaves(g, order)?;
    leaves
        .iter()
        .map(|leaf| {
            let cd = chord_diagram(g, leaf.edges_kept)?;
            let (ia, ea) = activities(g, &cd, order, leaf.edges_kept);
            let (i, j) = leaf.gradings();
            Ok(QuasiTreeRecord {
                edges: leaf.edges_kept,
                genus: quasi_tree_genus(g, leaf.edges_kept),
                ia,
                ea,
                i_grading: i,
                j_grading: j,
            })
        })
        .collect()
}

/// `2g = |E(T)| - |V| + 1` for a quasi-tree `T`.
pub fn quasi_tree_genus(g: &RibbonGraph, t: u64) -> usize {
    (t.count_ones() as usize + 1 - g.vertex_count()) / 2
}

/// Edge markers along the single boundary walk of `t`, starting at corner
/// 0 of vertex 0: band midpoints for edges of `t`, attachment points for
/// the others.
pub fn chord_diagram(g: &RibbonGraph, t: u64) -> Result<ChordDiagram> {
    let walks = g.boundary_components(t);
    if walks.count() != 1 {
        return Err(Error::NotAQuasiTree);
    }
    let word = walks.walks[0].iter().filter_map(|s| s.half_edge).map(|h| g.label(edge_of(h))).collect();
    Ok(ChordDiagram { word })
}

/// `(ia, ea)`: a chord is active when it crosses no chord earlier in
/// `order`; `internal` marks the edges of the quasi-tree.
pub fn activities(g: &RibbonGraph, cd: &ChordDiagram, order: &[u32], internal: u64) -> (usize, usize) {
    let rank = |l: u32| order.iter().position(|&x| x == l).expect("label in order");
    let (mut ia, mut ea) = (0, 0);
    for &l in order {
        let active = order.iter().filter(|&&m| rank(m) < rank(l)).all(|&m| !cd.crosses(l, m));
        if active {
            if internal & mask_of_label(g, l) != 0 {
                ia += 1;
            } else {
                ea += 1;
            }
        }
    }
    (ia, ea)
}

/// `i = 2g + ea - ia + |V| - 1`, `j = 2(g + ea - ia) + |V| - 1`.
pub fn gradings_via_activities(g: &RibbonGraph, t: u64, order: &[u32]) -> Result<(i32, i32)> {
    let cd = chord_diagram(g, t)?;
    let (ia, ea) = activities(g, &cd, order, t);
    let genus = quasi_tree_genus(g, t) as i32;
    let v = g.vertex_count() as i32;
    let (ia, ea) = (ia as i32, ea as i32);
    Ok((2 * genus + ea - ia + v - 1, 2 * (genus + ea - ia) + v - 1))
}

/// Every subset of edges with one boundary component.
pub fn quasi_trees_brute_force(g: &RibbonGraph) -> Vec<u64> {
    (0..=g.all_edges()).filter(|&m| g.face_count(m) == 1).collect()
}

/// `Σ (-1)^i q^j` over quasi-trees.
pub fn quasi_tree_euler(records: &[QuasiTreeRecord]) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for r in records {
        p.add_term(r.j_grading, if r.i_grading.rem_euclid(2) == 0 { 1 } else { -1 });
    }
    p
}

/// True when no two generators sit at `(i, j)` and `(i + 1, j)`, so any
/// differential on the quasi-tree complex vanishes for degree reasons.
pub fn is_differential_forced_zero(records: &[QuasiTreeRecord]) -> bool {
    let degrees: std::collections::BTreeSet<(i32, i32)> = records.iter().map(|r| (r.i_grading, r.j_grading)).collect();
    !degrees.iter().any(|&(i, j)| degrees.contains(&(i + 1, j)))
}

/// `Σ_T (-1)^{i(T) - n₋} q^{j(T) + n₊ - 2n₋}` over the quasi-trees of the
/// all-A ribbon graph.
pub fn jones_expansion(pd: &PdCode) -> Result<LaurentPoly> {
    let (g, signs) = pd.all_a_graph()?;
    let order = resolve_order(&g, None)?;
    let records = quasi_trees(&g, &order)?;
    let (r, s) = signs.grading_shift();
    let mut p = LaurentPoly::zero();
    for t in &records {
        let i = t.i_grading + r;
        p.add_term(t.j_grading + s, if i.rem_euclid(2) == 0 { 1 } else { -1 });
    }
    Ok(p)
}

/// Census against brute force, leaf gradings against activity gradings
/// under each order, and the quasi-tree Euler sum against the reduced
/// cube complex.
pub fn check_quasi_trees(g: &RibbonGraph, orders: &[Vec<u32>]) -> Result<Report> {
    let mut report = Report::new("quasi-trees");
    let brute = quasi_trees_brute_force(g);
    let reduced = crate::complex::build_reduced_complex(g, Basepoint::default())?;
    let mut chi = LaurentPoly::zero();
    for (j, c) in reduced.euler_terms() {
        chi.add_term(j + reduced.shift.1, c * if reduced.shift.0 % 2 == 0 { 1 } else { -1 });
    }
    let v = g.vertex_count() as i32;
    for order in orders {
        let records = quasi_trees(g, order)?;
        let mut found: Vec<u64> = records.iter().map(|r| r.edges).collect();
        found.sort();
        report
            .require(found == brute, || format!("order {order:?}: resolution tree gives {found:?}, census {brute:?}"));
        for r in &records {
            let via = gradings_via_activities(g, r.edges, order)?;
            report.require(via == (r.i_grading, r.j_grading), || {
                format!(
                    "order {order:?}, tree {:#b}: leaf ({}, {}), activities {via:?}",
                    r.edges, r.i_grading, r.j_grading
                )
            });
            let delta2 = r.j_grading - 2 * r.i_grading;
            report.require(delta2 == -2 * r.genus as i32 - (v - 1), || {
                format!("order {order:?}, tree {:#b}: 2δ = {delta2}", r.edges)
            });
        }
        let sum = quasi_tree_euler(&records);
        report.require(sum == chi, || format!("order {order:?}: quasi-tree sum {sum}, reduced complex {chi}"));
        if !report.passed() {
            break;
        }
    }
    Ok(report)
}

/// Rows mirroring the layout of a quasi-tree table.
pub fn table(g: &RibbonGraph, records: &[QuasiTreeRecord]) -> String {
    let mut out = String::from("edges      g  ia  ea  i   j\n");
    for r in records {
        let labels: Vec<String> =
            (0..g.edge_count()).filter(|&e| r.edges >> e & 1 == 1).map(|e| g.label(e).to_string()).collect();
        let edges = format!("{{{}}}", labels.join(","));
        out.push_str(&format!(
            "{:<9} {:>2} {:>3} {:>3} {:>2} {:>3}\n",
            edges, r.genus, r.ia, r.ea, r.i_grading, r.j_grading
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrows::ArrowPresentation;
    use crate::links::catalog;

    fn graph(text: &str) -> RibbonGraph {
        ArrowPresentation::parse(text).unwrap().to_ribbon_graph().unwrap()
    }

    fn three_loops() -> RibbonGraph {
        graph("circle: 1+ 2+ 3+ 1+ 2+ 3+")
    }

    fn two_vertex() -> RibbonGraph {
        graph("circle: 1+ 3+ 2+ 3+ ; circle: 2+ 1+")
    }

    fn rows(records: &[QuasiTreeRecord]) -> Vec<(usize, usize, usize, i32, i32)> {
        records.iter().map(|r| (r.genus, r.ia, r.ea, r.i_grading, r.j_grading)).collect()
    }

    #[test]
    fn three_loops_table() {
        let r = quasi_trees(&three_loops(), &[1, 2, 3]).unwrap();
        assert_eq!(rows(&r), vec![(0, 0, 1, 1, 2), (1, 1, 0, 1, 0), (1, 1, 0, 1, 0), (1, 0, 1, 3, 4)]);
        assert!(is_differential_forced_zero(&r));
    }

    #[test]
    fn two_vertex_activities() {
        let g = two_vertex();
        let r = quasi_trees(&g, &[1, 2, 3]).unwrap();
        assert_eq!(r.len(), 3);
        let by_edges = |m: u64| r.iter().find(|x| x.edges == m).map(|x| (x.ia, x.ea)).unwrap();
        assert_eq!(by_edges(0b001), (1, 0));
        assert_eq!(by_edges(0b010), (0, 1));
        assert_eq!(by_edges(0b111), (2, 0));
    }

    #[test]
    fn two_vertex_full_chord_diagram() {
        let g = two_vertex();
        let cd = chord_diagram(&g, 0b111).unwrap();
        assert!(cd.crosses(3, 1) && cd.crosses(3, 2));
        assert!(!cd.crosses(1, 2));
        assert!(chord_diagram(&g, 0b011).is_err());
    }

    #[test]
    fn small_cases() {
        let bridge = RibbonGraph::new(vec![vec![0], vec![1]]).unwrap();
        let r = quasi_trees(&bridge, &[1]).unwrap();
        assert_eq!(rows(&r), vec![(0, 1, 0, 0, -1)]);
        assert_eq!(gradings_via_activities(&bridge, 1, &[1]).unwrap(), (0, -1));
        let one_loop = RibbonGraph::new(vec![vec![0, 1]]).unwrap();
        assert_eq!(chord_diagram(&one_loop, 0).unwrap().word, vec![1, 1]);
        assert_eq!(gradings_via_activities(&one_loop, 0, &[1]).unwrap(), (1, 2));
        let leaves = resolution_tree_leaves(&RibbonGraph::point(), &[]).unwrap();
        assert_eq!(leaves.len(), 1);
        assert_eq!(leaves[0].edges_kept, 0);
    }

    #[test]
    fn three_loops_empty_tree_word() {
        let cd = chord_diagram(&three_loops(), 0).unwrap();
        assert_eq!(cd.word, vec![1, 2, 3, 1, 2, 3]);
        assert_eq!(activities(&three_loops(), &cd, &[1, 2, 3], 0), (0, 1));
    }

    #[test]
    fn jones_values() {
        assert_eq!(jones_expansion(&catalog::unknot()).unwrap(), LaurentPoly::monomial(1, 0));
        let t = jones_expansion(&catalog::right_trefoil()).unwrap();
        assert_eq!(t, LaurentPoly::from_terms(&[(1, 2), (1, 6), (-1, 8)]));
    }

    #[test]
    fn disconnected_rejected() {
        let g = RibbonGraph::new(vec![vec![], vec![]]).unwrap();
        assert_eq!(resolution_tree_leaves(&g, &[]), Err(Error::Disconnected));
    }
}
