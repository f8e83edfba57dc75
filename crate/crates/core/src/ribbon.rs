//! Oriented ribbon graphs as rotation systems.
//!
//! Edge `k` owns half-edges `2k` and `2k+1`. Each vertex carries the
//! counterclockwise cyclic order of the half-edges attached to it.
//!
//! The boundary of a spanning subgraph is traced through *corners*: the
//! arcs of a vertex disk between consecutive attachment points. Corner
//! `(v, k)` is the gap just before the `k`-th half-edge of `v`; a vertex of
//! degree zero has a single corner. A walk leaves a corner through the
//! half-edge at its end: if that edge lies in the subgraph it crosses the
//! band and resumes after the partner half-edge, otherwise it passes the
//! attachment point and stays on the disk.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

pub type HalfEdge = usize;

pub const MAX_EDGES: usize = 64;

#[inline]
pub fn partner(h: HalfEdge) -> HalfEdge {
    h ^ 1
}

#[inline]
pub fn edge_of(h: HalfEdge) -> usize {
    h >> 1
}

#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A point on a vertex boundary that misses the bands.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Basepoint {
    pub vertex: usize,
    pub gap: usize,
}

impl Basepoint {
    pub fn new(vertex: usize, gap: usize) -> Self {
        Basepoint { vertex, gap }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    Bridge,
    SeparatingLoop,
    NonseparatingLoop,
    Ordinary,
}

/// One step of a boundary walk: the corner it starts from and the
/// half-edge at the end of that corner. `crossed` is true when the walk
/// follows the band of that half-edge. Isolated vertices give a single
/// step with no half-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkStep {
    pub vertex: usize,
    pub gap: usize,
    pub half_edge: Option<HalfEdge>,
    pub crossed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryWalkSet {
    pub walks: Vec<Vec<WalkStep>>,
}

impl BoundaryWalkSet {
    pub fn count(&self) -> usize {
        self.walks.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RibbonGraph {
    rotations: Vec<Vec<HalfEdge>>,
    labels: Vec<u32>,
    vertex_of: Vec<usize>,
    slot_of: Vec<usize>,
    corner_base: Vec<usize>,
    corner_vertex: Vec<usize>,
}

impl RibbonGraph {
    /// Builds a graph from rotations, labelling edges `1..=n`.
    pub fn new(rotations: Vec<Vec<HalfEdge>>) -> Result<Self> {
        let total: usize = rotations.iter().map(Vec::len).sum();
        let labels = (1..=(total / 2) as u32).collect();
        Self::with_labels(rotations, labels)
    }

    pub fn with_labels(rotations: Vec<Vec<HalfEdge>>, labels: Vec<u32>) -> Result<Self> {
        let total: usize = rotations.iter().map(Vec::len).sum();
        if !total.is_multiple_of(2) {
            return Err(Error::InvalidRotation("odd number of half-edges".into()));
        }
        let n = total / 2;
        if n > MAX_EDGES {
            return Err(Error::TooManyEdges(n, MAX_EDGES));
        }
        if labels.len() != n {
            return Err(Error::InvalidRotation(format!("{} labels for {} edges", labels.len(), n)));
        }
        let mut vertex_of = vec![usize::MAX; total];
        let mut slot_of = vec![0; total];
        for (v, rot) in rotations.iter().enumerate() {
            for (k, &h) in rot.iter().enumerate() {
                if h >= total || vertex_of[h] != usize::MAX {
                    return Err(Error::InvalidRotation(format!("half-edge {h} misplaced")));
                }
                vertex_of[h] = v;
                slot_of[h] = k;
            }
        }
        let mut corner_base = Vec::with_capacity(rotations.len() + 1);
        let mut corner_vertex = Vec::new();
        corner_base.push(0);
        for (v, rot) in rotations.iter().enumerate() {
            let c = rot.len().max(1);
            corner_vertex.extend(std::iter::repeat_n(v, c));
            corner_base.push(corner_base[v] + c);
        }
        Ok(RibbonGraph { rotations, labels, vertex_of, slot_of, corner_base, corner_vertex })
    }

    /// A random connected graph: a random spanning tree plus extra edges
    /// with random ends, in random rotations. Needs `edges + 1 >= vertices`.
    pub fn random_connected<R: Rng + ?Sized>(vertices: usize, edges: usize, rng: &mut R) -> Result<Self> {
        if vertices == 0 || edges + 1 < vertices {
            return Err(Error::InvalidRotation(format!("no connected graph with {vertices} vertices, {edges} edges")));
        }
        let mut rotations = vec![Vec::new(); vertices];
        for e in 0..edges {
            let (u, v) = if e + 1 < vertices {
                (rng.gen_range(0..=e), e + 1)
            } else {
                (rng.gen_range(0..vertices), rng.gen_range(0..vertices))
            };
            rotations[u].push(2 * e);
            rotations[v].push(2 * e + 1);
        }
        for rot in &mut rotations {
            rot.shuffle(rng);
        }
        Self::new(rotations)
    }

    /// A single vertex with no edges.
    pub fn point() -> Self {
        Self::new(vec![vec![]]).expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    pub fn rotations(&self) -> &[Vec<HalfEdge>] {
        &self.rotations
    }

    pub fn rotation(&self, v: usize) -> &[HalfEdge] {
        &self.rotations[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> u32 {
        self.labels[e]
    }

    pub fn edge_by_label(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        self.vertex_of[h]
    }

    pub fn slot_of(&self, h: HalfEdge) -> usize {
        self.slot_of[h]
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.vertex_of[2 * e], self.vertex_of[2 * e + 1])
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.endpoints(e);
        u == v
    }

    pub fn loop_count(&self) -> usize {
        (0..self.edge_count()).filter(|&e| self.is_loop(e)).count()
    }

    pub fn all_edges(&self) -> u64 {
        full_mask(self.edge_count())
    }

    fn check_edge(&self, e: usize) -> Result<()> {
        if e < self.edge_count() {
            Ok(())
        } else {
            Err(Error::UnknownEdge(e))
        }
    }

    // ---- corners and boundary walks ----

    pub fn corner_count(&self) -> usize {
        self.corner_vertex.len()
    }

    pub fn corner(&self, v: usize, gap: usize) -> usize {
        self.corner_base[v] + gap
    }

    /// Corner index of a basepoint, validating it.
    pub fn basepoint_corner(&self, b: Basepoint) -> Result<usize> {
        if b.vertex >= self.vertex_count() || b.gap >= self.degree(b.vertex).max(1) {
            return Err(Error::InvalidBasepoint(b.vertex, b.gap));
        }
        Ok(self.corner(b.vertex, b.gap))
    }

    fn corner_location(&self, c: usize) -> (usize, usize) {
        let v = self.corner_vertex[c];
        (v, c - self.corner_base[v])
    }

    /// Next corner along the boundary of the subgraph `mask`, together with
    /// the half-edge met on the way and whether its band was crossed.
    #[inline]
    fn corner_step(&self, c: usize, mask: u64) -> (usize, Option<HalfEdge>, bool) {
        let (v, k) = self.corner_location(c);
        let rot = &self.rotations[v];
        if rot.is_empty() {
            return (c, None, false);
        }
        let h = rot[k];
        if mask >> edge_of(h) & 1 == 1 {
            let p = partner(h);
            let w = self.vertex_of[p];
            let next = (self.slot_of[p] + 1) % self.rotations[w].len();
            (self.corner_base[w] + next, Some(h), true)
        } else {
            (self.corner_base[v] + (k + 1) % rot.len(), Some(h), false)
        }
    }

    /// Boundary walks of the spanning subgraph with edge set `mask`.
    /// Walks are ordered by their smallest corner, each starting there.
    pub fn boundary_components(&self, mask: u64) -> BoundaryWalkSet {
        let mut seen = vec![false; self.corner_count()];
        let mut walks = Vec::new();
        for start in 0..self.corner_count() {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut c = start;
            loop {
                seen[c] = true;
                let (v, gap) = self.corner_location(c);
                let (next, half_edge, crossed) = self.corner_step(c, mask);
                walk.push(WalkStep { vertex: v, gap, half_edge, crossed });
                c = next;
                if c == start {
                    break;
                }
            }
            walks.push(walk);
        }
        BoundaryWalkSet { walks }
    }

    /// Boundary component of every corner, numbered in walk order.
    pub fn corner_components(&self, mask: u64) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.corner_count()];
        let mut count = 0;
        for start in 0..self.corner_count() {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut c = start;
            loop {
                comp[c] = count;
                c = self.corner_step(c, mask).0;
                if c == start {
                    break;
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn face_count(&self, mask: u64) -> usize {
        self.corner_components(mask).1
    }

    /// Boundary count from the cycles of `next-in-rotation ∘ partner`
    /// restricted to the subgraph, plus one per isolated vertex.
    pub fn face_count_by_permutation(&self, mask: u64) -> usize {
        let inside = |h: HalfEdge| mask >> edge_of(h) & 1 == 1;
        let next_inside = |h: HalfEdge| {
            let rot = &self.rotations[self.vertex_of[h]];
            let d = rot.len();
            let k = self.slot_of[h];
            (1..=d).map(|s| rot[(k + s) % d]).find(|&x| inside(x)).expect("h itself is inside")
        };
        let total = 2 * self.edge_count();
        let mut seen = vec![false; total];
        let mut cycles = 0;
        for h in (0..total).filter(|&h| inside(h)) {
            if seen[h] {
                continue;
            }
            cycles += 1;
            let mut x = h;
            while !seen[x] {
                seen[x] = true;
                x = next_inside(partner(x));
            }
        }
        let isolated = self.rotations.iter().filter(|rot| !rot.iter().any(|&h| inside(h))).count();
        cycles + isolated
    }

    // ---- connectivity and genus ----

    /// Connected component of every vertex in the subgraph `mask`.
    pub fn components(&self, mask: u64) -> (Vec<usize>, usize) {
        let v = self.vertex_count();
        let mut parent: Vec<usize> = (0..v).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in 0..self.edge_count() {
            if mask >> e & 1 == 1 {
                let (a, b) = self.endpoints(e);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut id = vec![usize::MAX; v];
        let mut comp = vec![0; v];
        let mut count = 0;
        for x in 0..v {
            let r = find(&mut parent, x);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            comp[x] = id[r];
        }
        (comp, count)
    }

    pub fn component_count(&self) -> usize {
        self.components(self.all_edges()).1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Total genus of the spanning subgraph `mask`, summed over components.
    pub fn subgraph_genus(&self, mask: u64) -> usize {
        let c = self.components(mask).1 as i64;
        let v = self.vertex_count() as i64;
        let e = mask.count_ones() as i64;
        let f = self.face_count(mask) as i64;
        let twice = 2 * c - v + e - f;
        debug_assert!(twice >= 0 && twice % 2 == 0);
        (twice / 2) as usize
    }

    pub fn genus(&self) -> usize {
        self.subgraph_genus(self.all_edges())
    }

    // ---- constructions ----

    /// The spanning ribbon subgraph on the edges of `mask`, keeping labels.
    pub fn spanning_subgraph(&self, mask: u64) -> RibbonGraph {
        let keep: Vec<usize> = (0..self.edge_count()).filter(|&e| mask >> e & 1 == 1).collect();
        self.restrict_edges(&keep)
    }

    fn restrict_edges(&self, keep: &[usize]) -> RibbonGraph {
        let mut new_id = vec![usize::MAX; self.edge_count()];
        for (i, &e) in keep.iter().enumerate() {
            new_id[e] = i;
        }
        let rotations = self
            .rotations
            .iter()
            .map(|rot| {
                rot.iter()
                    .filter(|&&h| new_id[edge_of(h)] != usize::MAX)
                    .map(|&h| 2 * new_id[edge_of(h)] + (h & 1))
                    .collect()
            })
            .collect();
        let labels = keep.iter().map(|&e| self.labels[e]).collect();
        RibbonGraph::with_labels(rotations, labels).expect("restriction is valid")
    }

    pub fn delete_edge(&self, e: usize) -> Result<RibbonGraph> {
        self.check_edge(e)?;
        let keep: Vec<usize> = (0..self.edge_count()).filter(|&x| x != e).collect();
        Ok(self.restrict_edges(&keep))
    }

    /// Ribbon contraction. A non-loop merges its endpoints, reading the
    /// rotation of the first endpoint after `e` and then that of the second.
    /// A loop `(e, a.., e, b..)` splits its vertex into `(a..)`, kept in
    /// place, and `(b..)`, appended last.
    pub fn contract_edge(&self, e: usize) -> Result<RibbonGraph> {
        self.check_edge(e)?;
        let (h0, h1) = (2 * e, 2 * e + 1);
        let (u, v) = self.endpoints(e);
        let after = |h: HalfEdge, stop: &dyn Fn(HalfEdge) -> bool| -> Vec<HalfEdge> {
            let rot = &self.rotations[self.vertex_of[h]];
            let d = rot.len();
            let k = self.slot_of[h];
            (1..d).map(|s| rot[(k + s) % d]).take_while(|&x| !stop(x)).collect()
        };
        let mut rotations = self.rotations.clone();
        if u != v {
            let mut merged = after(h0, &|_| false);
            merged.extend(after(h1, &|_| false));
            rotations[u] = merged;
            rotations.remove(v);
        } else {
            let (first, second) = if self.slot_of[h0] < self.slot_of[h1] { (h0, h1) } else { (h1, h0) };
            let is_e = |x: HalfEdge| edge_of(x) == e;
            rotations[u] = after(first, &is_e);
            rotations.push(after(second, &is_e));
        }
        let renumber = |h: HalfEdge| if edge_of(h) > e { h - 2 } else { h };
        let rotations = rotations.into_iter().map(|rot| rot.into_iter().map(renumber).collect()).collect();
        let mut labels = self.labels.clone();
        labels.remove(e);
        RibbonGraph::with_labels(rotations, labels)
    }

    pub fn classify_edge(&self, e: usize) -> Result<EdgeClass> {
        self.check_edge(e)?;
        let c = self.component_count();
        Ok(if self.is_loop(e) {
            if self.contract_edge(e)?.component_count() > c {
                EdgeClass::SeparatingLoop
            } else {
                EdgeClass::NonseparatingLoop
            }
        } else if self.delete_edge(e)?.component_count() > c {
            EdgeClass::Bridge
        } else {
            EdgeClass::Ordinary
        })
    }

    /// Geometric dual: one vertex per boundary walk of the whole graph,
    /// whose rotation lists the half-edges crossed along the walk.
    pub fn dual(&self) -> RibbonGraph {
        let walks = self.boundary_components(self.all_edges());
        let rotations = walks.walks.iter().map(|w| w.iter().filter_map(|s| s.half_edge).collect()).collect();
        RibbonGraph::with_labels(rotations, self.labels.clone()).expect("dual is valid")
    }

    pub fn is_adequate(&self) -> bool {
        self.loop_count() == 0 && self.dual().loop_count() == 0
    }

    // ---- isomorphism ----

    /// Canonical code invariant under relabelling vertices, edges and
    /// half-edge ends. Two graphs are isomorphic iff their codes agree.
    pub fn canonical_form(&self) -> Vec<Vec<usize>> {
        let (comp, count) = self.components(self.all_edges());
        let mut codes = Vec::with_capacity(count);
        for c in 0..count {
            let verts: Vec<usize> = (0..self.vertex_count()).filter(|&v| comp[v] == c).collect();
            let darts: Vec<HalfEdge> = verts.iter().flat_map(|&v| self.rotations[v].iter().copied()).collect();
            let code = if darts.is_empty() {
                vec![0]
            } else {
                darts.iter().map(|&d| self.code_from(d)).min().expect("nonempty")
            };
            codes.push(code);
        }
        codes.sort();
        codes
    }

    fn code_from(&self, start: HalfEdge) -> Vec<usize> {
        let nv = self.vertex_count();
        let mut number = vec![usize::MAX; nv];
        let mut entry = vec![0; nv];
        let mut queue = std::collections::VecDeque::new();
        let v0 = self.vertex_of[start];
        number[v0] = 0;
        entry[v0] = self.slot_of[start];
        queue.push_back(v0);
        let mut next = 1;
        let mut code = Vec::new();
        while let Some(v) = queue.pop_front() {
            let rot = &self.rotations[v];
            let d = rot.len();
            code.push(d);
            for s in 0..d {
                let p = partner(rot[(entry[v] + s) % d]);
                let w = self.vertex_of[p];
                if number[w] == usize::MAX {
                    number[w] = next;
                    next += 1;
                    entry[w] = self.slot_of[p];
                    queue.push_back(w);
                }
                let dw = self.rotations[w].len();
                code.push(number[w]);
                code.push((self.slot_of[p] + dw - entry[w]) % dw);
            }
        }
        code
    }

    pub fn is_isomorphic(&self, other: &RibbonGraph) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.edge_count() == other.edge_count()
            && self.canonical_form() == other.canonical_form()
    }
}
