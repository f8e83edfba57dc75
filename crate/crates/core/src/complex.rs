//! The hypercube complex of spanning subgraphs.
//!
//! A state is a bitmask `I` of edges; bit `k` is edge `k` in label order.
//! The state `I` contributes `V^{⊗F(I)}[h]{h}` with `h = |I|`, one tensor
//! factor per boundary component of the spanning subgraph `I`, with `v₊`
//! in degree `+1` and `v₋` in degree `-1`.
//!
//! A labeling is stored as a bitmask in which component `c` of `F`
//! components sits at bit `F - 1 - c` and a set bit means `v₊`. Numeric
//! order is then lexicographic order with `v₋ < v₊`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ribbon::{Basepoint, RibbonGraph};
use crate::snf::IntMatrix;

pub const DEFAULT_MAX_EDGES: usize = 14;

/// Signs on the edges of the `n`-cube. The edge leaving state `I` in
/// direction `k` (bit `k` clear in `I`) is stored at `I * n + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeAssignment {
    n: usize,
    signs: Vec<i8>,
}

fn standard_sign(state: u64, k: usize) -> i8 {
    let below = state & ((1u64 << k) - 1);
    if below.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl EdgeAssignment {
    /// `ε(ξ) = (-1)^{#{i < k : m_i = 1}}`.
    pub fn standard(n: usize) -> Self {
        Self::from_fn(n, standard_sign)
    }

    pub fn from_fn(n: usize, f: impl Fn(u64, usize) -> i8) -> Self {
        assert!(n < 31, "cube too large");
        let mut signs = vec![0i8; (1usize << n) * n];
        for s in 0..(1u64 << n) {
            for k in (0..n).filter(|&k| s >> k & 1 == 0) {
                signs[s as usize * n + k] = f(s, k);
            }
        }
        EdgeAssignment { n, signs }
    }

    /// The standard assignment twisted by a random vertex labeling
    /// `η`: `ε'(I→J) = ε(I→J) η(I) η(J)`. Every square keeps its parity.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let eta: Vec<i8> = (0..1usize << n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        Self::from_fn(n, |s, k| standard_sign(s, k) * eta[s as usize] * eta[(s | 1 << k) as usize])
    }

    pub fn edge_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn sign(&self, state: u64, k: usize) -> i8 {
        debug_assert!(state >> k & 1 == 0);
        self.signs[state as usize * self.n + k]
    }

    /// Every square carries an odd number of `-1` edges.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        (0..1u64 << n).all(|s| {
            (0..n).filter(|&k| s >> k & 1 == 0).all(|k| {
                (k + 1..n).filter(|&l| s >> l & 1 == 0).all(|l| {
                    let p = self.sign(s, k) * self.sign(s | 1 << k, l) * self.sign(s, l) * self.sign(s | 1 << l, k);
                    p == -1
                })
            })
        })
    }
}

pub fn standard_edge_assignment(n: usize) -> EdgeAssignment {
    EdgeAssignment::standard(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Generator {
    pub state: u64,
    pub labeling: u64,
    pub faces: u32,
}

impl Generator {
    /// `true` for `v₊`, one entry per boundary component.
    pub fn signs(&self) -> Vec<bool> {
        (0..self.faces).map(|c| self.labeling >> (self.faces - 1 - c) & 1 == 1).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedComplex {
    pub generators: BTreeMap<(i32, i32), Vec<Generator>>,
    /// `d^{i,j}: C^{i,j} → C^{i+1,j}`, rows indexed by the target basis.
    pub differentials: BTreeMap<(i32, i32), IntMatrix>,
    /// Pending `[r]{s}` applied when homology is taken.
    pub shift: (i32, i32),
}

#[derive(Serialize)]
struct DumpEntry<'a> {
    i: i32,
    j: i32,
    generators: usize,
    differential: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<&'a [Generator]>,
}

impl BigradedComplex {
    pub fn rank(&self, i: i32, j: i32) -> usize {
        self.generators.get(&(i, j)).map_or(0, Vec::len)
    }

    pub fn total_rank(&self) -> usize {
        self.generators.values().map(Vec::len).sum()
    }

    /// `Σ (-1)^i rank C^{i,j} q^j`, before the pending shift.
    pub fn euler_terms(&self) -> BTreeMap<i32, i64> {
        let mut out = BTreeMap::new();
        for (&(i, j), g) in &self.generators {
            let s = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            *out.entry(j).or_insert(0) += s * g.len() as i64;
        }
        out.retain(|_, v| *v != 0);
        out
    }

    pub fn with_shift(mut self, r: i32, s: i32) -> Self {
        self.shift = (self.shift.0 + r, self.shift.1 + s);
        self
    }

    /// Per bidegree: generator count and the differential as row-major lists.
    pub fn dump_json(&self, with_basis: bool) -> serde_json::Value {
        let entries: Vec<DumpEntry> = self
            .generators
            .iter()
            .map(|(&(i, j), gens)| DumpEntry {
                i,
                j,
                generators: gens.len(),
                differential: self.differentials.get(&(i, j)).map(IntMatrix::to_rows).unwrap_or_default(),
                basis: with_basis.then_some(gens.as_slice()),
            })
            .collect();
        serde_json::json!({ "shift": [self.shift.0, self.shift.1], "entries": entries })
    }
}

/// Component bookkeeping for one state.
struct StateFaces {
    corner: Vec<usize>,
    count: usize,
}

/// How one cube edge acts on boundary components.
enum Change {
    Merge { a: usize, b: usize, into: usize },
    Split { from: usize, x: usize, y: usize },
}

struct EdgeMapShape {
    to: Vec<usize>,
    change: Change,
    target_faces: usize,
}

fn edge_shape(g: &RibbonGraph, src: &StateFaces, dst: &StateFaces, k: usize) -> EdgeMapShape {
    let mut to = vec![usize::MAX; src.count];
    for (c, &comp) in src.corner.iter().enumerate() {
        to[comp] = dst.corner[c];
    }
    let c0 = g.corner(g.vertex_of(2 * k), g.slot_of(2 * k));
    let c1 = g.corner(g.vertex_of(2 * k + 1), g.slot_of(2 * k + 1));
    let (a, b) = (src.corner[c0], src.corner[c1]);
    let change = if a != b {
        debug_assert_eq!(dst.corner[c0], dst.corner[c1]);
        Change::Merge { a, b, into: dst.corner[c0] }
    } else {
        debug_assert_ne!(dst.corner[c0], dst.corner[c1]);
        Change::Split { from: a, x: dst.corner[c0], y: dst.corner[c1] }
    };
    EdgeMapShape { to, change, target_faces: dst.count }
}

/// Image of one labeling under the unsigned edge map `m` or `Δ`.
fn apply_shape(shape: &EdgeMapShape, src_faces: usize, lab: u64, out: &mut Vec<u64>) {
    out.clear();
    let fs = src_faces;
    let ft = shape.target_faces;
    let bit = |l: u64, c: usize, f: usize| l >> (f - 1 - c) & 1;
    let put = |c: usize| 1u64 << (ft - 1 - c);
    let mut base = 0u64;
    for c in 0..fs {
        let skip = match shape.change {
            Change::Merge { a, b, .. } => c == a || c == b,
            Change::Split { from, .. } => c == from,
        };
        if !skip && bit(lab, c, fs) == 1 {
            base |= put(shape.to[c]);
        }
    }
    match shape.change {
        Change::Merge { a, b, into } => match (bit(lab, a, fs), bit(lab, b, fs)) {
            (1, 1) => out.push(base | put(into)),
            (0, 0) => {}
            _ => out.push(base),
        },
        Change::Split { from, x, y } => {
            if bit(lab, from, fs) == 1 {
                out.push(base | put(x));
                out.push(base | put(y));
            } else {
                out.push(base);
            }
        }
    }
}

fn state_faces(g: &RibbonGraph, n: usize) -> Vec<StateFaces> {
    (0..1u64 << n)
        .into_par_iter()
        .map(|s| {
            let (corner, count) = g.corner_components(s);
            StateFaces { corner, count }
        })
        .collect()
}

/// Unsigned edge map `V(G(I)) → V(G(I ∪ k))` in the labeling bases.
pub fn edge_map_matrix(g: &RibbonGraph, state: u64, k: usize) -> IntMatrix {
    assert!(state >> k & 1 == 0);
    let (corner, count) = g.corner_components(state);
    let src = StateFaces { corner, count };
    let (corner, count) = g.corner_components(state | 1 << k);
    let dst = StateFaces { corner, count };
    let shape = edge_shape(g, &src, &dst, k);
    let mut m = IntMatrix::zeros(1 << dst.count, 1 << src.count);
    let mut out = Vec::new();
    for lab in 0..1u64 << src.count {
        apply_shape(&shape, src.count, lab, &mut out);
        for &t in &out {
            m.add(t as usize, lab as usize, 1);
        }
    }
    m
}

pub fn build_complex(g: &RibbonGraph, eps: &EdgeAssignment) -> Result<BigradedComplex> {
    build(g, eps, None, DEFAULT_MAX_EDGES)
}

pub fn build_reduced_complex(g: &RibbonGraph, basepoint: Basepoint) -> Result<BigradedComplex> {
    build(g, &EdgeAssignment::standard(g.edge_count()), Some(basepoint), DEFAULT_MAX_EDGES)
}

/// General builder. With a basepoint, only labelings carrying `v₋` on the
/// marked component are kept and `j` is raised by one.
pub fn build(
    g: &RibbonGraph,
    eps: &EdgeAssignment,
    basepoint: Option<Basepoint>,
    max_edges: usize,
) -> Result<BigradedComplex> {
    let n = g.edge_count();
    if n > max_edges {
        return Err(Error::TooManyEdges(n, max_edges));
    }
    assert_eq!(eps.edge_count(), n, "edge assignment has the wrong dimension");
    let marked_corner = basepoint.map(|b| g.basepoint_corner(b)).transpose()?;
    let reduced_shift = marked_corner.is_some() as i32;
    let faces = state_faces(g, n);

    let mut generators: BTreeMap<(i32, i32), Vec<Generator>> = BTreeMap::new();
    let mut index: Vec<Vec<u32>> = Vec::with_capacity(faces.len());
    for (s, sf) in faces.iter().enumerate() {
        let h = (s as u64).count_ones() as i32;
        let f = sf.count;
        let marked_bit = marked_corner.map(|c| 1u64 << (f - 1 - sf.corner[c]));
        let mut idx = vec![u32::MAX; 1 << f];
        for lab in 0..1u64 << f {
            if marked_bit.is_some_and(|m| lab & m != 0) {
                continue;
            }
            let j = h + 2 * lab.count_ones() as i32 - f as i32 + reduced_shift;
            let block = generators.entry((h, j)).or_default();
            idx[lab as usize] = block.len() as u32;
            block.push(Generator { state: s as u64, labeling: lab, faces: f as u32 });
        }
        index.push(idx);
    }

    let mut differentials: BTreeMap<(i32, i32), IntMatrix> = generators
        .iter()
        .map(|(&(i, j), gens)| {
            let rows = generators.get(&(i + 1, j)).map_or(0, Vec::len);
            ((i, j), IntMatrix::zeros(rows, gens.len()))
        })
        .collect();

    let mut targets = Vec::new();
    for (s, sf) in faces.iter().enumerate() {
        let s = s as u64;
        let h = s.count_ones() as i32;
        for k in (0..n).filter(|&k| s >> k & 1 == 0) {
            let t = s | 1 << k;
            let shape = edge_shape(g, sf, &faces[t as usize], k);
            let sign = eps.sign(s, k) as i64;
            for lab in 0..1u64 << sf.count {
                let col = index[s as usize][lab as usize];
                if col == u32::MAX {
                    continue;
                }
                let j = h + 2 * lab.count_ones() as i32 - sf.count as i32 + reduced_shift;
                apply_shape(&shape, sf.count, lab, &mut targets);
                let d = differentials.get_mut(&(h, j)).expect("block exists");
                for &tl in &targets {
                    let row = index[t as usize][tl as usize];
                    debug_assert_ne!(row, u32::MAX, "differential leaves the reduced subcomplex");
                    d.add(row as usize, col as usize, sign);
                }
            }
        }
    }
    Ok(BigradedComplex { generators, differentials, shift: (0, 0) })
}
