//! Classical link diagrams in PD notation and their all-A ribbon graphs.
//!
//! `X[a,b,c,d]` lists the arcs at a crossing counterclockwise, starting
//! with the incoming under-strand `a`; the over-strand is `b`–`d`. Slots
//! are numbered 0..4 in that order. The A-smoothing joins slots (0,1) and
//! (2,3), the B-smoothing joins (0,3) and (1,2).

use std::collections::BTreeMap;
use std::fmt;

use crate::arrows::{Arrow, ArrowPresentation};
use crate::error::{Error, Result};
use crate::homology::Report;
use crate::ribbon::RibbonGraph;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdCode {
    pub crossings: Vec<[u32; 4]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignCount {
    pub n_plus: usize,
    pub n_minus: usize,
}

impl SignCount {
    pub fn writhe(&self) -> i32 {
        self.n_plus as i32 - self.n_minus as i32
    }

    /// `[-n₋]{n₊ - 2n₋}` taking ribbon-graph gradings to link gradings.
    pub fn grading_shift(&self) -> (i32, i32) {
        let (p, m) = (self.n_plus as i32, self.n_minus as i32);
        (-m, p - 2 * m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KauffmanState {
    /// Bit `k` set means the B-smoothing at crossing `k`.
    pub resolution: u64,
    pub circle_count: usize,
}

type Slot = (usize, usize);

impl PdCode {
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self> {
        let pd = PdCode { crossings };
        if pd.crossings.len() > 64 {
            return Err(Error::InvalidPd("more than 64 crossings".into()));
        }
        for (label, slots) in pd.arc_slots() {
            if slots.len() != 2 {
                return Err(Error::InvalidPd(format!("arc {label} appears {} times", slots.len())));
            }
        }
        pd.orientation()?;
        Ok(pd)
    }

    /// Reads `X[a,b,c,d]` tokens, optionally wrapped in `PD[...]`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = text.trim();
        if let Some(inner) = s.strip_prefix("PD[").and_then(|t| t.strip_suffix(']')) {
            s = inner;
        }
        let mut crossings = Vec::new();
        loop {
            s = s.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
            if s.is_empty() {
                break;
            }
            let rest = s.strip_prefix("X[").ok_or_else(|| Error::InvalidPd(format!("unexpected {s:?}")))?;
            let end = rest.find(']').ok_or_else(|| Error::InvalidPd("unclosed X[".into()))?;
            let nums: Vec<u32> = rest[..end]
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| Error::InvalidPd(format!("bad arc {t:?}"))))
                .collect::<Result<_>>()?;
            let quad: [u32; 4] = nums.try_into().map_err(|_| Error::InvalidPd("a crossing needs four arcs".into()))?;
            crossings.push(quad);
            s = &rest[end + 1..];
        }
        Self::new(crossings)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    fn arc_slots(&self) -> BTreeMap<u32, Vec<Slot>> {
        let mut m: BTreeMap<u32, Vec<Slot>> = BTreeMap::new();
        for (k, x) in self.crossings.iter().enumerate() {
            for (s, &a) in x.iter().enumerate() {
                m.entry(a).or_default().push((k, s));
            }
        }
        m
    }

    /// The other end of the arc leaving `slot`.
    fn across(&self, slots: &BTreeMap<u32, Vec<Slot>>, slot: Slot) -> Slot {
        let ends = &slots[&self.crossings[slot.0][slot.1]];
        if ends[0] == slot {
            ends[1]
        } else {
            ends[0]
        }
    }

    /// Incoming slot of the over-strand at every crossing (1 or 3).
    fn orientation(&self) -> Result<Vec<usize>> {
        let n = self.crossings.len();
        let slots = self.arc_slots();
        let mut incoming: Vec<Option<bool>> = vec![None; 4 * n];
        let trace = |start: Slot, incoming: &mut Vec<Option<bool>>| -> Result<()> {
            let mut at = start;
            loop {
                let (k, s) = at;
                let out = (k, (s + 2) % 4);
                for (slot, is_in) in [(at, true), (out, false)] {
                    match incoming[4 * slot.0 + slot.1] {
                        Some(v) if v != is_in => {
                            return Err(Error::InvalidPd(format!("inconsistent orientation at crossing {}", k + 1)))
                        }
                        _ => incoming[4 * slot.0 + slot.1] = Some(is_in),
                    }
                }
                at = self.across(&slots, out);
                if at == start {
                    return Ok(());
                }
                if incoming[4 * at.0 + at.1].is_some() {
                    return Err(Error::InvalidPd("strand does not close up".into()));
                }
            }
        };
        for k in 0..n {
            if incoming[4 * k].is_none() {
                trace((k, 0), &mut incoming)?;
            }
        }
        // components passing over everything: follow increasing arc numbers
        while let Some(free) = (0..4 * n).find(|&i| incoming[i].is_none()) {
            let slot = (free / 4, free % 4);
            let label = self.crossings[slot.0][slot.1];
            let other = self.across(&slots, slot);
            let next_label = self.crossings[slot.0][(slot.1 + 2) % 4];
            let start = if next_label == label + 1 { slot } else { other };
            trace(start, &mut incoming)?;
        }
        for k in 0..n {
            if incoming[4 * k] != Some(true) {
                return Err(Error::InvalidPd(format!("crossing {} is not entered along its first arc", k + 1)));
            }
        }
        Ok((0..n).map(|k| if incoming[4 * k + 3] == Some(true) { 3 } else { 1 }).collect())
    }

    /// `+1` when the over-strand runs from `d` to `b`.
    pub fn crossing_signs(&self) -> Vec<i8> {
        self.orientation().expect("validated").into_iter().map(|s| if s == 3 { 1 } else { -1 }).collect()
    }

    pub fn sign_count(&self) -> SignCount {
        let signs = self.crossing_signs();
        let n_plus = signs.iter().filter(|&&s| s > 0).count();
        SignCount { n_plus, n_minus: signs.len() - n_plus }
    }

    /// Writhe from arc numbering alone: a crossing is positive when
    /// `b = d + 1`, or `d > b + 1` (wrap-around). Only meaningful when
    /// every component has at least three arcs.
    pub fn writhe_from_numbering(&self) -> i32 {
        self.crossings.iter().map(|&[_, b, _, d]| if b == d + 1 || d > b + 1 { 1 } else { -1 }).sum()
    }

    fn smoothing_partner(s: usize, b_smoothing: bool) -> usize {
        if b_smoothing {
            3 - s
        } else {
            s ^ 1
        }
    }

    /// Circles of the state; each is a list of passes `(crossing, from, to)`.
    fn state_circles(&self, mask: u64) -> Vec<Vec<(usize, usize, usize)>> {
        let n = self.crossings.len();
        let slots = self.arc_slots();
        let mut seen = vec![false; 4 * n];
        let mut circles = Vec::new();
        for start in 0..4 * n {
            if seen[start] {
                continue;
            }
            let mut circle = Vec::new();
            let mut at = (start / 4, start % 4);
            loop {
                let (k, s) = at;
                let t = Self::smoothing_partner(s, mask >> k & 1 == 1);
                seen[4 * k + s] = true;
                seen[4 * k + t] = true;
                circle.push((k, s, t));
                at = self.across(&slots, (k, t));
                if at == (start / 4, start % 4) {
                    break;
                }
            }
            circles.push(circle);
        }
        circles
    }

    pub fn kauffman_state(&self, mask: u64) -> KauffmanState {
        let count = if self.crossings.is_empty() { 1 } else { self.state_circles(mask).len() };
        KauffmanState { resolution: mask, circle_count: count }
    }

    /// All-A state circles with one `+` arrow per crossing trace.
    ///
    /// Circles are oriented so that at every crossing both passes run the
    /// same way through their slot pairs (both `0→1`/`2→3`, or both
    /// reversed); the first circle of each component keeps its traversal
    /// direction. Edge `k` is the trace of crossing `k`, with half-edge
    /// `2k` on the pass through slots (0,1).
    pub fn all_a_ribbon_graph(&self) -> Result<(ArrowPresentation, SignCount)> {
        let signs = self.sign_count();
        if self.crossings.is_empty() {
            return Ok((ArrowPresentation { circles: vec![vec![]] }, signs));
        }
        let circles = self.state_circles(0);
        let n = self.crossings.len();
        // per crossing: (circle, direction) of the passes through pairs 0 and 1
        let mut pass: Vec<[(usize, i8); 2]> = vec![[(0, 0); 2]; n];
        for (c, circle) in circles.iter().enumerate() {
            for &(k, s, t) in circle {
                let dir = if t == s + 1 { 1 } else { -1 };
                pass[k][s / 2] = (c, dir);
            }
        }
        let mut flip = vec![0i8; circles.len()];
        let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); circles.len()];
        for [(c0, d0), (c1, d1)] in &pass {
            adj[*c0].push((*c1, d0 * d1));
            adj[*c1].push((*c0, d0 * d1));
        }
        for root in 0..circles.len() {
            if flip[root] != 0 {
                continue;
            }
            flip[root] = 1;
            let mut stack = vec![root];
            while let Some(c) = stack.pop() {
                for &(d, rel) in &adj[c] {
                    let want = flip[c] * rel;
                    if flip[d] == 0 {
                        flip[d] = want;
                        stack.push(d);
                    } else if flip[d] != want {
                        return Err(Error::InvalidPd("all-A surface is non-orientable; diagram is not planar".into()));
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(circles.len());
        for (c, circle) in circles.iter().enumerate() {
            let mut arrows: Vec<Arrow> = circle.iter().map(|&(k, _, _)| Arrow::plus(k as u32 + 1)).collect();
            if flip[c] < 0 {
                arrows.reverse();
            }
            out.push(arrows);
        }
        Ok((ArrowPresentation { circles: out }, signs))
    }

    /// The all-A ribbon graph itself; edge `k` is crossing `k`.
    pub fn all_a_graph(&self) -> Result<(RibbonGraph, SignCount)> {
        let (ap, signs) = self.all_a_ribbon_graph()?;
        Ok((ap.to_ribbon_graph()?, signs))
    }
}

/// Kauffman circle count against the boundary count of the matching
/// spanning subgraph of the all-A ribbon graph, for every state.
pub fn check_state_circles(pd: &PdCode) -> Result<Report> {
    let (g, _) = pd.all_a_graph()?;
    let n = pd.crossing_count();
    let mut report = Report::new("state circles");
    for mask in 0..1u64 << n {
        let kauffman = pd.kauffman_state(mask).circle_count;
        let faces = g.face_count(mask);
        report.require(kauffman == faces, || format!("state {mask:0n$b}: {kauffman} circles, {faces} boundaries"));
        if !report.passed() {
            break;
        }
    }
    Ok(report)
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.crossings.iter().map(|x| format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3])).collect();
        write!(f, "PD[{}]", parts.join(", "))
    }
}

/// A few standard diagrams.
pub mod catalog {
    use super::PdCode;

    pub fn unknot() -> PdCode {
        PdCode::new(vec![]).unwrap()
    }

    /// Unknot with one positive kink.
    pub fn kink() -> PdCode {
        PdCode::new(vec![[1, 1, 2, 2]]).unwrap()
    }

    pub fn right_trefoil() -> PdCode {
        PdCode::new(vec![[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]).unwrap()
    }

    pub fn left_trefoil() -> PdCode {
        PdCode::new(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap()
    }

    pub fn figure_eight() -> PdCode {
        PdCode::new(vec![[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]]).unwrap()
    }

    pub fn hopf() -> PdCode {
        PdCode::new(vec![[1, 3, 2, 4], [3, 1, 4, 2]]).unwrap()
    }

    pub fn cinquefoil() -> PdCode {
        PdCode::new(vec![[1, 6, 2, 7], [3, 8, 4, 9], [5, 10, 6, 1], [7, 2, 8, 3], [9, 4, 10, 5]]).unwrap()
    }

    pub fn three_twist() -> PdCode {
        PdCode::new(vec![[1, 4, 2, 5], [3, 8, 4, 9], [5, 10, 6, 1], [9, 6, 10, 7], [7, 2, 8, 3]]).unwrap()
    }

    pub fn stevedore() -> PdCode {
        PdCode::new(vec![[1, 4, 2, 5], [7, 10, 8, 11], [3, 9, 4, 8], [9, 3, 10, 2], [5, 12, 6, 1], [11, 6, 12, 7]])
            .unwrap()
    }

    /// A three-crossing unknot whose all-A ribbon graph has two vertices
    /// and genus one.
    pub fn three_crossing_unknot() -> PdCode {
        PdCode::new(vec![[1, 4, 2, 5], [3, 6, 4, 1], [2, 6, 3, 5]]).unwrap()
    }

    pub fn six_two() -> PdCode {
        PdCode::new(vec![[1, 4, 2, 5], [5, 10, 6, 11], [3, 9, 4, 8], [9, 3, 10, 2], [7, 12, 8, 1], [11, 6, 12, 7]])
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;

    #[test]
    fn parse_forms() {
        let a = PdCode::parse("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]").unwrap();
        let b = PdCode::parse("PD[X[1, 5, 2, 4], X[3, 1, 4, 6], X[5, 3, 6, 2]]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, right_trefoil());
        assert!(PdCode::parse("X[1,5,2]").is_err());
        assert!(PdCode::parse("X[1,5,2,4] X[3,1,4,6]").is_err());
        assert!(PdCode::parse("Y[1,1,2,2]").is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(right_trefoil().sign_count(), SignCount { n_plus: 3, n_minus: 0 });
        assert_eq!(left_trefoil().sign_count(), SignCount { n_plus: 0, n_minus: 3 });
        assert_eq!(figure_eight().sign_count().writhe(), 0);
        assert_eq!(kink().sign_count(), SignCount { n_plus: 1, n_minus: 0 });
        assert_eq!(unknot().sign_count(), SignCount { n_plus: 0, n_minus: 0 });
    }

    #[test]
    fn kink_is_a_bridge() {
        let (ap, signs) = kink().all_a_ribbon_graph().unwrap();
        assert_eq!(signs, SignCount { n_plus: 1, n_minus: 0 });
        let g = ap.to_ribbon_graph().unwrap();
        assert!(g.is_isomorphic(&RibbonGraph::new(vec![vec![0], vec![1]]).unwrap()));
    }

    #[test]
    fn empty_diagram() {
        let (ap, signs) = unknot().all_a_ribbon_graph().unwrap();
        assert_eq!(ap.to_string(), "circle:");
        assert_eq!(signs.writhe(), 0);
        assert_eq!(unknot().kauffman_state(0).circle_count, 1);
    }

    #[test]
    fn trefoil_states() {
        let t = right_trefoil();
        assert_eq!(t.kauffman_state(0b000).circle_count, 2);
        assert_eq!(t.kauffman_state(0b111).circle_count, 3);
        assert_eq!(t.kauffman_state(0b001).circle_count, 1);
    }
}
