//! Reidemeister moves on arrow presentations.
//!
//! Moves act on the oriented form of a presentation (every arrow `+`, see
//! [`ArrowPresentation::oriented`]); circle and gap indices refer to that
//! form. Gap `p` of a circle is the gap just before its arrow `p`, and a
//! circle of length `m` has gaps `0..=m`, with `m` and `0` naming the same
//! gap except where stated.
//!
//! Script syntax, one move per line:
//!
//! ```text
//! R1a c0 p3          # new vertex joined by an edge at gap 3 of circle 0
//! R1b c0 p3          # adjacent pair x x at gap 3
//! R2 c0 p1 c1 p4     # R2 on two arcs
//! R3 c0 p2           # R3 with x y z starting at arrow 2 (its own inverse)
//! R1a- x4            # inverse moves: by label for R1
//! R1b- x4
//! R2- c0 p5          # x y x starting at arrow 5
//! ```

use std::fmt;

use crate::arrows::{Arrow, ArrowPresentation};
use crate::error::{Error, Result};
use crate::homology::{khovanov, reduced_khovanov, Report};
use crate::ribbon::Basepoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    R1VertexEdge,
    R1DoubleArrow,
    R2,
    R3,
}

impl MoveKind {
    /// `(r, s)` with `Kh(after) = Kh(before)[r]{s}` for the forward move.
    /// Reduced homology shifts the same way.
    pub fn shift(self) -> (i32, i32) {
        match self {
            MoveKind::R1VertexEdge => (0, -1),
            MoveKind::R1DoubleArrow => (1, 2),
            MoveKind::R2 => (1, 1),
            MoveKind::R3 => (0, 0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveSite {
    R1VertexEdge { circle: usize, gap: usize },
    R1DoubleArrow { circle: usize, gap: usize },
    R2 { first: (usize, usize), second: (usize, usize) },
    R3 { circle: usize, start: usize },
    R1VertexEdgeInverse { label: u32 },
    R1DoubleArrowInverse { label: u32 },
    R2Inverse { circle: usize, start: usize },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::R1VertexEdge { .. } | MoveSite::R1VertexEdgeInverse { .. } => MoveKind::R1VertexEdge,
            MoveSite::R1DoubleArrow { .. } | MoveSite::R1DoubleArrowInverse { .. } => MoveKind::R1DoubleArrow,
            MoveSite::R2 { .. } | MoveSite::R2Inverse { .. } => MoveKind::R2,
            MoveSite::R3 { .. } => MoveKind::R3,
        }
    }

    pub fn is_inverse(&self) -> bool {
        matches!(
            self,
            MoveSite::R1VertexEdgeInverse { .. } | MoveSite::R1DoubleArrowInverse { .. } | MoveSite::R2Inverse { .. }
        )
    }

    /// Shift taking `Kh(before)` to `Kh(after)`.
    pub fn shift(&self) -> (i32, i32) {
        let (r, s) = self.kind().shift();
        if self.is_inverse() {
            (-r, -s)
        } else {
            (r, s)
        }
    }

    pub fn parse(line: &str) -> Result<MoveSite> {
        let bad = || Error::Parse(format!("malformed move {line:?}"));
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |tok: &str, prefix: char| -> Result<usize> {
            tok.strip_prefix(prefix).and_then(|t| t.parse().ok()).ok_or_else(bad)
        };
        let gap = |i: usize| -> Result<(usize, usize)> {
            match (toks.get(i), toks.get(i + 1)) {
                (Some(c), Some(p)) => Ok((num(c, 'c')?, num(p, 'p')?)),
                _ => Err(bad()),
            }
        };
        let label = || -> Result<u32> {
            let l = toks.get(1).ok_or_else(bad).and_then(|t| num(t, 'x'))?;
            u32::try_from(l).map_err(|_| bad())
        };
        let expect = |n: usize| if toks.len() == n { Ok(()) } else { Err(bad()) };
        let site = match toks.first().copied() {
            Some("R1a") => {
                expect(3)?;
                let (circle, gap) = gap(1)?;
                MoveSite::R1VertexEdge { circle, gap }
            }
            Some("R1b") => {
                expect(3)?;
                let (circle, gap) = gap(1)?;
                MoveSite::R1DoubleArrow { circle, gap }
            }
            Some("R2") => {
                expect(5)?;
                MoveSite::R2 { first: gap(1)?, second: gap(3)? }
            }
            Some("R3") => {
                expect(3)?;
                let (circle, start) = gap(1)?;
                MoveSite::R3 { circle, start }
            }
            Some("R1a-") => {
                expect(2)?;
                MoveSite::R1VertexEdgeInverse { label: label()? }
            }
            Some("R1b-") => {
                expect(2)?;
                MoveSite::R1DoubleArrowInverse { label: label()? }
            }
            Some("R2-") => {
                expect(3)?;
                let (circle, start) = gap(1)?;
                MoveSite::R2Inverse { circle, start }
            }
            _ => return Err(bad()),
        };
        Ok(site)
    }
}

impl fmt::Display for MoveSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MoveSite::R1VertexEdge { circle, gap } => write!(f, "R1a c{circle} p{gap}"),
            MoveSite::R1DoubleArrow { circle, gap } => write!(f, "R1b c{circle} p{gap}"),
            MoveSite::R2 { first, second } => write!(f, "R2 c{} p{} c{} p{}", first.0, first.1, second.0, second.1),
            MoveSite::R3 { circle, start } => write!(f, "R3 c{circle} p{start}"),
            MoveSite::R1VertexEdgeInverse { label } => write!(f, "R1a- x{label}"),
            MoveSite::R1DoubleArrowInverse { label } => write!(f, "R1b- x{label}"),
            MoveSite::R2Inverse { circle, start } => write!(f, "R2- c{circle} p{start}"),
        }
    }
}

/// Parses a move script, skipping blank lines and `#` comments.
pub fn parse_script(text: &str) -> Result<Vec<MoveSite>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(MoveSite::parse)
        .collect()
}

/// An arrow together with its position before the move, if it was not
/// touched by the move.
#[derive(Clone, Copy, Debug)]
struct Tok {
    label: u32,
    from: Option<(usize, usize)>,
}

impl Tok {
    fn new(label: u32) -> Self {
        Tok { label, from: None }
    }
}

struct Work {
    circles: Vec<Vec<Tok>>,
    origin: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
pub struct MoveOutcome {
    pub presentation: ArrowPresentation,
    /// Site of the move undoing this one.
    pub inverse: MoveSite,
    from: Vec<Vec<Option<(usize, usize)>>>,
    origin: Vec<Option<usize>>,
}

impl MoveOutcome {
    /// Image of a basepoint lying away from the move, if there is one.
    pub fn track(&self, b: Basepoint) -> Option<Basepoint> {
        for (c, circle) in self.from.iter().enumerate() {
            if circle.is_empty() && self.origin[c] == Some(b.vertex) {
                return Some(Basepoint::new(c, 0));
            }
            if let Some(i) = circle.iter().position(|&f| f == Some((b.vertex, b.gap))) {
                return Some(Basepoint::new(c, i));
            }
        }
        None
    }
}

pub fn apply_move(ap: &ArrowPresentation, site: MoveSite) -> Result<ArrowPresentation> {
    Ok(apply_move_tracked(ap, site)?.presentation)
}

pub fn apply_move_tracked(ap: &ArrowPresentation, site: MoveSite) -> Result<MoveOutcome> {
    let ap = ap.oriented()?;
    let mut w = Work {
        circles: ap
            .circles
            .iter()
            .enumerate()
            .map(|(c, circle)| {
                circle.iter().enumerate().map(|(i, a)| Tok { label: a.label, from: Some((c, i)) }).collect()
            })
            .collect(),
        origin: (0..ap.circles.len()).map(Some).collect(),
    };
    let inverse = match site {
        MoveSite::R1VertexEdge { circle, gap } => r1_vertex_edge(&mut w, circle, gap)?,
        MoveSite::R1DoubleArrow { circle, gap } => r1_double_arrow(&mut w, circle, gap)?,
        MoveSite::R2 { first, second } => r2(&mut w, first, second)?,
        MoveSite::R3 { circle, start } => r3(&mut w, circle, start)?,
        MoveSite::R1VertexEdgeInverse { label } => r1_vertex_edge_inverse(&mut w, label)?,
        MoveSite::R1DoubleArrowInverse { label } => r1_double_arrow_inverse(&mut w, label)?,
        MoveSite::R2Inverse { circle, start } => r2_inverse(&mut w, circle, start)?,
    };
    let presentation =
        ArrowPresentation::new(w.circles.iter().map(|c| c.iter().map(|t| Arrow::plus(t.label)).collect()).collect())?;
    if !presentation.check_orientable() {
        return Err(Error::NonOrientable);
    }
    let from = w.circles.iter().map(|c| c.iter().map(|t| t.from).collect()).collect();
    Ok(MoveOutcome { presentation, inverse, from, origin: w.origin })
}

fn inapplicable(site: impl fmt::Display, why: &str) -> Error {
    Error::InapplicableMove(format!("{site}: {why}"))
}

fn fresh_label(w: &Work) -> u32 {
    w.circles.iter().flatten().map(|t| t.label).max().unwrap_or(0) + 1
}

fn check_gap(w: &Work, circle: usize, gap: usize) -> Result<()> {
    match w.circles.get(circle) {
        Some(c) if gap <= c.len() => Ok(()),
        _ => Err(inapplicable(format!("c{circle} p{gap}"), "no such gap")),
    }
}

fn rotated(c: &[Tok], p: usize) -> Vec<Tok> {
    let p = if c.is_empty() { 0 } else { p % c.len() };
    c[p..].iter().chain(&c[..p]).copied().collect()
}

fn find(w: &Work, label: u32) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (c, circle) in w.circles.iter().enumerate() {
        for (i, t) in circle.iter().enumerate() {
            if t.label == label {
                out.push((c, i));
            }
        }
    }
    out
}

fn r1_vertex_edge(w: &mut Work, circle: usize, gap: usize) -> Result<MoveSite> {
    check_gap(w, circle, gap)?;
    let x = fresh_label(w);
    w.circles[circle].insert(gap, Tok::new(x));
    w.origin[circle] = None;
    w.circles.push(vec![Tok::new(x)]);
    w.origin.push(None);
    Ok(MoveSite::R1VertexEdgeInverse { label: x })
}

fn r1_vertex_edge_inverse(w: &mut Work, label: u32) -> Result<MoveSite> {
    let site = MoveSite::R1VertexEdgeInverse { label };
    let pos = find(w, label);
    if pos.len() != 2 {
        return Err(inapplicable(site, "unknown label"));
    }
    let lone = |p: (usize, usize)| w.circles[p.0].len() == 1;
    let (keep, gone) = if lone(pos[1]) {
        (pos[0], pos[1])
    } else if lone(pos[0]) {
        (pos[1], pos[0])
    } else {
        return Err(inapplicable(site, "neither arrow is alone on its circle"));
    };
    w.circles[keep.0].remove(keep.1);
    w.origin[keep.0] = None;
    w.circles.remove(gone.0);
    w.origin.remove(gone.0);
    let circle = keep.0 - usize::from(gone.0 < keep.0);
    Ok(MoveSite::R1VertexEdge { circle, gap: keep.1 })
}

fn r1_double_arrow(w: &mut Work, circle: usize, gap: usize) -> Result<MoveSite> {
    check_gap(w, circle, gap)?;
    let x = fresh_label(w);
    w.circles[circle].insert(gap, Tok::new(x));
    w.circles[circle].insert(gap, Tok::new(x));
    w.origin[circle] = None;
    Ok(MoveSite::R1DoubleArrowInverse { label: x })
}

fn r1_double_arrow_inverse(w: &mut Work, label: u32) -> Result<MoveSite> {
    let site = MoveSite::R1DoubleArrowInverse { label };
    let pos = find(w, label);
    if pos.len() != 2 || pos[0].0 != pos[1].0 {
        return Err(inapplicable(site, "arrows are not on one circle"));
    }
    let c = pos[0].0;
    let m = w.circles[c].len();
    let (i, j) = (pos[0].1, pos[1].1);
    let gap = if j == i + 1 {
        i
    } else if i == 0 && j == m - 1 {
        m - 2
    } else {
        return Err(inapplicable(site, "arrows are not adjacent"));
    };
    w.circles[c].remove(j);
    w.circles[c].remove(i);
    w.origin[c] = None;
    Ok(MoveSite::R1DoubleArrow { circle: c, gap })
}

fn r2(w: &mut Work, first: (usize, usize), second: (usize, usize)) -> Result<MoveSite> {
    check_gap(w, first.0, first.1)?;
    check_gap(w, second.0, second.1)?;
    let x = fresh_label(w);
    let y = x + 1;
    let (tx, ty) = (Tok::new(x), Tok::new(y));
    let (c1, p1) = first;
    let (c2, p2) = second;
    if c1 != c2 {
        let a = rotated(&w.circles[c1], p1);
        let b = rotated(&w.circles[c2], p2);
        let mut merged = vec![tx, ty, tx];
        merged.extend(b);
        merged.push(ty);
        merged.extend(a);
        w.circles[c1] = merged;
        w.origin[c1] = None;
        w.circles.remove(c2);
        w.origin.remove(c2);
        let circle = c1 - usize::from(c2 < c1);
        Ok(MoveSite::R2Inverse { circle, start: 0 })
    } else {
        let m = w.circles[c1].len();
        let s = rotated(&w.circles[c1], p1);
        let k = if p2 >= p1 { p2 - p1 } else { p2 + m - p1 };
        let mut outer = vec![tx, ty, tx];
        outer.extend_from_slice(&s[k..]);
        let mut inner = vec![ty];
        inner.extend_from_slice(&s[..k]);
        w.circles[c1] = outer;
        w.origin[c1] = None;
        w.circles.push(inner);
        w.origin.push(None);
        Ok(MoveSite::R2Inverse { circle: c1, start: 0 })
    }
}

fn r2_inverse(w: &mut Work, circle: usize, start: usize) -> Result<MoveSite> {
    let site = MoveSite::R2Inverse { circle, start };
    let Some(c) = w.circles.get(circle) else {
        return Err(inapplicable(site, "no such circle"));
    };
    let m = c.len();
    if m < 3 || start >= m {
        return Err(inapplicable(site, "no arrow triple there"));
    }
    let t = rotated(c, start);
    let (x, y) = (t[0].label, t[1].label);
    if t[2].label != x || x == y {
        return Err(inapplicable(site, "arrows do not read x y x"));
    }
    if let Some(r) = t[3..].iter().position(|tok| tok.label == y) {
        let r = r + 3;
        let b = t[3..r].to_vec();
        let a = t[r + 1..].to_vec();
        w.circles[circle] = a;
        w.origin[circle] = None;
        w.circles.push(b);
        w.origin.push(None);
        Ok(MoveSite::R2 { first: (circle, 0), second: (w.circles.len() - 1, 0) })
    } else {
        let (d, iy) = find(w, y).into_iter().find(|p| p.0 != circle).expect("label occurs twice");
        let p1 = rotated(&w.circles[d], iy)[1..].to_vec();
        let k = p1.len();
        let mut merged = p1;
        merged.extend_from_slice(&t[3..]);
        w.circles[circle] = merged;
        w.origin[circle] = None;
        w.circles.remove(d);
        w.origin.remove(d);
        let circle = circle - usize::from(d < circle);
        Ok(MoveSite::R2 { first: (circle, 0), second: (circle, k) })
    }
}

/// `x y z` becomes `z y x`, the other ends `z x` merge into one `y`, and
/// the other `y` splits into `x z`. The result matches the same pattern at
/// the same place, so the move undoes itself.
fn r3(w: &mut Work, circle: usize, start: usize) -> Result<MoveSite> {
    let site = MoveSite::R3 { circle, start };
    let Some(c) = w.circles.get(circle) else {
        return Err(inapplicable(site, "no such circle"));
    };
    let m = c.len();
    if m < 3 || start >= m {
        return Err(inapplicable(site, "no arrow triple there"));
    }
    let triple = [start, (start + 1) % m, (start + 2) % m];
    let [a, y, b] = triple.map(|i| c[i].label);
    if a == y || y == b || a == b {
        return Err(inapplicable(site, "triple labels are not distinct"));
    }
    let other = |label: u32, not: usize| {
        find(w, label).into_iter().find(|&p| p != (circle, triple[not])).expect("label occurs twice")
    };
    let (pa, py, pb) = (other(a, 0), other(y, 1), other(b, 2));
    let next = |p: (usize, usize)| (p.0, (p.1 + 1) % w.circles[p.0].len());
    let (p_first, p_second) = (pb, pa);
    if next(p_first) != p_second {
        return Err(inapplicable(site, "other ends of the outer arrows are not adjacent in order"));
    }
    let mut new_start = 0;
    let circles: Vec<Vec<Tok>> = w
        .circles
        .iter()
        .enumerate()
        .map(|(ci, circ)| {
            let mut out = Vec::with_capacity(circ.len() + 1);
            for (i, &tok) in circ.iter().enumerate() {
                let p = (ci, i);
                if p == (circle, triple[0]) {
                    new_start = out.len();
                    out.push(Tok::new(b));
                } else if p == (circle, triple[1]) {
                    out.push(Tok::new(y));
                } else if p == (circle, triple[2]) {
                    out.push(Tok::new(a));
                } else if p == p_first {
                    out.push(Tok::new(y));
                } else if p == p_second {
                } else if p == py {
                    out.extend([Tok::new(a), Tok::new(b)]);
                } else {
                    out.push(tok);
                }
            }
            out
        })
        .collect();
    for (ci, circ) in circles.iter().enumerate() {
        if circ.len() != w.circles[ci].len() {
            w.origin[ci] = None;
        }
    }
    w.circles = circles;
    Ok(MoveSite::R3 { circle, start: new_start })
}

/// Every site at which a move applies.
pub fn applicable_sites(ap: &ArrowPresentation) -> Result<Vec<MoveSite>> {
    let ap = ap.oriented()?;
    let gaps: Vec<(usize, usize)> =
        ap.circles.iter().enumerate().flat_map(|(c, circle)| (0..circle.len().max(1)).map(move |p| (c, p))).collect();
    let mut out = Vec::new();
    for &(circle, gap) in &gaps {
        out.push(MoveSite::R1VertexEdge { circle, gap });
        out.push(MoveSite::R1DoubleArrow { circle, gap });
    }
    for &first in &gaps {
        for &second in &gaps {
            out.push(MoveSite::R2 { first, second });
        }
    }
    let mut candidates = Vec::new();
    for label in ap.labels() {
        candidates.push(MoveSite::R1VertexEdgeInverse { label });
        candidates.push(MoveSite::R1DoubleArrowInverse { label });
    }
    for (circle, c) in ap.circles.iter().enumerate() {
        for start in 0..c.len() {
            candidates.push(MoveSite::R2Inverse { circle, start });
            candidates.push(MoveSite::R3 { circle, start });
        }
    }
    for site in candidates {
        match apply_move_tracked(&ap, site) {
            Ok(_) => out.push(site),
            Err(Error::InapplicableMove(_)) | Err(Error::NonOrientable) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Compares unreduced and reduced homology before and after the move,
/// allowing the move's shift. The reduced comparison uses the first gap
/// whose arrow the move leaves alone, carried across the move.
pub fn check_invariance(ap: &ArrowPresentation, site: MoveSite) -> Result<Report> {
    let ap = ap.oriented()?;
    let outcome = apply_move_tracked(&ap, site)?;
    let before = ap.to_ribbon_graph()?;
    let after = outcome.presentation.to_ribbon_graph()?;
    let (r, s) = site.shift();
    let mut report = Report::new(&format!("invariance under {site}"));
    let (kb, ka) = (khovanov(&before)?, khovanov(&after)?);
    report.require(kb.shift(r, s) == ka, || format!("unreduced homology differs after [{r}]{{{s}}}"));
    let basepoint = (0..before.vertex_count())
        .flat_map(|v| (0..before.degree(v).max(1)).map(move |g| Basepoint::new(v, g)))
        .find_map(|b| outcome.track(b).map(|t| (b, t)));
    if let Some((b, t)) = basepoint {
        let (rb, ra) = (reduced_khovanov(&before, b)?, reduced_khovanov(&after, t)?);
        report
            .require(rb.shift(r, s) == ra, || format!("reduced homology at {b:?} / {t:?} differs after [{r}]{{{s}}}"));
    }
    Ok(report)
}
