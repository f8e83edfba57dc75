//! Arrow presentations: circles carrying labelled marking arrows.
//!
//! Text form, one circle per `circle:` clause:
//!
//! ```text
//! # the genus one graph on one vertex
//! circle: 1+ 2+ 3+ 1+ 2+ 3+
//! ```
//!
//! Clauses are separated by `;` or newlines. An arrow is `+` when it points
//! counterclockwise along its circle.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ribbon::RibbonGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    fn sign(self) -> i8 {
        match self {
            Direction::Plus => 1,
            Direction::Minus => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub label: u32,
    pub dir: Direction,
}

impl Arrow {
    pub fn plus(label: u32) -> Self {
        Arrow { label, dir: Direction::Plus }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ArrowPresentation {
    pub circles: Vec<Vec<Arrow>>,
}

impl ArrowPresentation {
    /// Validates that every label occurs on exactly two arrows.
    pub fn new(circles: Vec<Vec<Arrow>>) -> Result<Self> {
        let ap = ArrowPresentation { circles };
        for (label, count) in ap.label_counts() {
            if count != 2 {
                return Err(Error::Parse(format!("label {label} appears {count} times")));
            }
        }
        Ok(ap)
    }

    fn label_counts(&self) -> BTreeMap<u32, usize> {
        let mut counts = BTreeMap::new();
        for a in self.circles.iter().flatten() {
            *counts.entry(a.label).or_insert(0) += 1;
        }
        counts
    }

    pub fn edge_count(&self) -> usize {
        self.circles.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> Vec<u32> {
        self.label_counts().into_keys().collect()
    }

    /// Positions `(circle, index)` of the two arrows carrying `label`.
    pub fn positions(&self, label: u32) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(2);
        for (c, circle) in self.circles.iter().enumerate() {
            for (i, a) in circle.iter().enumerate() {
                if a.label == label {
                    out.push((c, i));
                }
            }
        }
        out
    }

    /// Relabels to `1..=n`, keeping the numeric order of the labels.
    pub fn normalized(&self) -> ArrowPresentation {
        let rank: BTreeMap<u32, u32> = self.labels().into_iter().enumerate().map(|(i, l)| (l, i as u32 + 1)).collect();
        let circles = self
            .circles
            .iter()
            .map(|c| c.iter().map(|a| Arrow { label: rank[&a.label], dir: a.dir }).collect())
            .collect();
        ArrowPresentation { circles }
    }

    /// Per-circle flips making every band untwisted, if they exist. Arrows
    /// with the same cyclic direction on their (possibly flipped) circles
    /// glue to an untwisted band.
    fn orientation(&self) -> Option<Vec<i8>> {
        let m = self.circles.len();
        let mut ends: BTreeMap<u32, Vec<(usize, i8)>> = BTreeMap::new();
        for (c, circle) in self.circles.iter().enumerate() {
            for a in circle {
                ends.entry(a.label).or_default().push((c, a.dir.sign()));
            }
        }
        let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); m];
        for pair in ends.values() {
            if let [(c1, d1), (c2, d2)] = pair[..] {
                // s[c1] * d1 == s[c2] * d2
                adj[c1].push((c2, d1 * d2));
                adj[c2].push((c1, d1 * d2));
            }
        }
        let mut s = vec![0i8; m];
        for root in 0..m {
            if s[root] != 0 {
                continue;
            }
            s[root] = 1;
            let mut stack = vec![root];
            while let Some(c) = stack.pop() {
                for &(d, rel) in &adj[c] {
                    let want = s[c] * rel;
                    if s[d] == 0 {
                        s[d] = want;
                        stack.push(d);
                    } else if s[d] != want {
                        return None;
                    }
                }
            }
        }
        Some(s)
    }

    pub fn check_orientable(&self) -> bool {
        self.orientation().is_some()
    }

    /// Glues bands to the circles. Flipped circles are read backwards so
    /// that every rotation is counterclockwise.
    pub fn to_ribbon_graph(&self) -> Result<RibbonGraph> {
        let s = self.orientation().ok_or(Error::NonOrientable)?;
        let labels = self.labels();
        let index: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut used = vec![false; labels.len()];
        let mut rotations: Vec<Vec<usize>> = Vec::with_capacity(self.circles.len());
        for circle in &self.circles {
            let mut rot = Vec::with_capacity(circle.len());
            for a in circle {
                let e = index[&a.label];
                rot.push(2 * e + used[e] as usize);
                used[e] = true;
            }
            rotations.push(rot);
        }
        for (rot, &sign) in rotations.iter_mut().zip(&s) {
            if sign < 0 {
                rot.reverse();
            }
        }
        RibbonGraph::with_labels(rotations, labels)
    }

    /// All-`+` presentation reading each rotation in order.
    pub fn from_ribbon_graph(g: &RibbonGraph) -> ArrowPresentation {
        let circles =
            g.rotations().iter().map(|rot| rot.iter().map(|&h| Arrow::plus(g.label(h >> 1))).collect()).collect();
        ArrowPresentation { circles }
    }

    /// Equivalent presentation with every arrow `+`, reading each circle
    /// along the rotation of its vertex. Labels are kept.
    pub fn oriented(&self) -> Result<ArrowPresentation> {
        if self.circles.iter().flatten().all(|a| a.dir == Direction::Plus) {
            return Ok(self.clone());
        }
        Ok(ArrowPresentation::from_ribbon_graph(&self.to_ribbon_graph()?))
    }

    pub fn parse(text: &str) -> Result<ArrowPresentation> {
        let mut circles = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            for clause in line.split(';') {
                let clause = clause.trim();
                if clause.is_empty() {
                    continue;
                }
                let body = clause
                    .strip_prefix("circle:")
                    .ok_or_else(|| Error::Parse(format!("expected `circle:` in {clause:?}")))?;
                let mut circle = Vec::new();
                for tok in body.split_whitespace() {
                    circle.push(parse_arrow(tok)?);
                }
                circles.push(circle);
            }
        }
        Ok(ArrowPresentation::new(circles)?.normalized())
    }
}

fn parse_arrow(tok: &str) -> Result<Arrow> {
    let bad = || Error::Parse(format!("malformed arrow {tok:?}"));
    let (num, dir) = match tok.chars().last() {
        Some('+') => (&tok[..tok.len() - 1], Direction::Plus),
        Some('-') => (&tok[..tok.len() - 1], Direction::Minus),
        _ => return Err(bad()),
    };
    if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let label: u32 = num.parse().map_err(|_| bad())?;
    if label == 0 {
        return Err(bad());
    }
    Ok(Arrow { label, dir })
}

impl fmt::Display for ArrowPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, circle) in self.circles.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "circle:")?;
            for a in circle {
                let d = if a.dir == Direction::Plus { '+' } else { '-' };
                write!(f, " {}{}", a.label, d)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let ap = ArrowPresentation::parse("circle: 1+ 2+ 3+ 1+ 2+ 3+").unwrap();
        assert_eq!(ap.circles.len(), 1);
        assert_eq!(ap.circles[0].len(), 6);
        assert_eq!(ap.edge_count(), 3);
        let ap = ArrowPresentation::parse("circle: 1+ 3+ 2- 3- ; circle: 1- 2+").unwrap();
        assert_eq!((ap.circles.len(), ap.edge_count()), (2, 3));
        let ap = ArrowPresentation::parse("circle:").unwrap();
        assert_eq!((ap.circles.len(), ap.edge_count()), (1, 0));
    }

    #[test]
    fn parse_errors() {
        assert!(ArrowPresentation::parse("circle: 1+ 2+ 1+").is_err());
        assert!(ArrowPresentation::parse("circle: 1+ 1+ 1+").is_err());
        assert!(ArrowPresentation::parse("circle: 1* 1+").is_err());
        assert!(ArrowPresentation::parse("loop: 1+ 1+").is_err());
        assert!(ArrowPresentation::parse("circle: +1 1+").is_err());
    }

    #[test]
    fn comments_and_newlines() {
        let ap = ArrowPresentation::parse("# two circles\ncircle: 1+ 2+\ncircle: 2+ 1+ # end").unwrap();
        assert_eq!(ap.circles.len(), 2);
    }

    #[test]
    fn labels_compacted_in_numeric_order() {
        let ap = ArrowPresentation::parse("circle: 7+ 4+ 7+ 4+").unwrap();
        assert_eq!(ap.circles[0].iter().map(|a| a.label).collect::<Vec<_>>(), vec![2, 1, 2, 1]);
    }

    #[test]
    fn orientability() {
        let twisted = ArrowPresentation::parse("circle: 1+ 1-").unwrap();
        assert!(!twisted.check_orientable());
        assert_eq!(twisted.to_ribbon_graph(), Err(Error::NonOrientable));
        assert!(ArrowPresentation::default().check_orientable());
        assert!(ArrowPresentation::parse("circle: 1+ 2+ 3+ 1+ 2+ 3+").unwrap().check_orientable());
        // flipping the second circle untwists both bands
        let ap = ArrowPresentation::parse("circle: 1+ 2+ ; circle: 1- 2-").unwrap();
        assert!(ap.check_orientable());
        let g = ap.to_ribbon_graph().unwrap();
        let plain = ArrowPresentation::parse("circle: 1+ 2+ ; circle: 2+ 1+").unwrap();
        assert!(g.is_isomorphic(&plain.to_ribbon_graph().unwrap()));
    }

    #[test]
    fn three_loops_graph() {
        let g = ArrowPresentation::parse("circle: 1+ 2+ 3+ 1+ 2+ 3+").unwrap().to_ribbon_graph().unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 3));
        assert_eq!(g.loop_count(), 3);
        assert_eq!(g.genus(), 1);
    }

    #[test]
    fn round_trip() {
        let ap = ArrowPresentation::parse("circle: 1+ 3+ 2+ 3+ ; circle: 2+ 1+").unwrap();
        let g = ap.to_ribbon_graph().unwrap();
        let text = ArrowPresentation::from_ribbon_graph(&g).to_string();
        let back = ArrowPresentation::parse(&text).unwrap().to_ribbon_graph().unwrap();
        assert!(back.is_isomorphic(&g));
        assert_eq!(back, g);
    }
}
