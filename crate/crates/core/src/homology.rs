//! Integer homology of bigraded complexes and the invariants read off it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{self, BigradedComplex, EdgeAssignment};
use crate::error::{Error, Result};
use crate::ribbon::{Basepoint, RibbonGraph};
use crate::snf::{smith_normal_form, SmithForm};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupEntry {
    pub rank: usize,
    /// Divisor chain `d_1 | d_2 | …`, each at least 2.
    pub torsion: Vec<BigInt>,
}

impl GroupEntry {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for GroupEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// `(i, j) ↦ Z^rank ⊕ torsion`; absent keys are trivial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BigradedGroup {
    pub entries: BTreeMap<(i32, i32), GroupEntry>,
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    i: i32,
    j: i32,
    rank: usize,
    torsion: Vec<u64>,
}

impl BigradedGroup {
    pub fn insert(&mut self, i: i32, j: i32, entry: GroupEntry) {
        if !entry.is_trivial() {
            self.entries.insert((i, j), entry);
        }
    }

    pub fn get(&self, i: i32, j: i32) -> Option<&GroupEntry> {
        self.entries.get(&(i, j))
    }

    pub fn rank(&self, i: i32, j: i32) -> usize {
        self.get(i, j).map_or(0, |e| e.rank)
    }

    pub fn torsion(&self, i: i32, j: i32) -> &[BigInt] {
        self.get(i, j).map_or(&[], |e| &e.torsion)
    }

    pub fn total_rank(&self) -> usize {
        self.entries.values().map(|e| e.rank).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.entries.values().any(|e| !e.torsion.is_empty())
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.is_empty()
    }

    /// `M[r]{s}`: the entry at `(i, j)` moves to `(i + r, j + s)`.
    pub fn shift(&self, r: i32, s: i32) -> BigradedGroup {
        let entries = self.entries.iter().map(|(&(i, j), e)| ((i + r, j + s), e.clone())).collect();
        BigradedGroup { entries }
    }

    pub fn j_range(&self) -> Option<(i32, i32)> {
        let js = self.entries.keys().map(|&(_, j)| j);
        Some((js.clone().min()?, js.max()?))
    }

    /// `Σ (-1)^i rank^{i,j} q^j`; torsion is ignored.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&(i, j), e) in &self.entries {
            let s = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(j, s * e.rank as i64);
        }
        p
    }

    /// Number of occupied diagonals `δ = j/2 - i`, counted from the lowest
    /// to the highest.
    pub fn homological_width(&self) -> Result<i32> {
        if self.is_trivial() {
            return Err(Error::TrivialGroup);
        }
        let parity = self.entries.keys().next().map(|&(_, j)| j.rem_euclid(2)).unwrap_or(0);
        if self.entries.keys().any(|&(_, j)| j.rem_euclid(2) != parity) {
            return Err(Error::MixedParity);
        }
        // 2δ = j - 2i
        let twice: Vec<i32> = self.entries.keys().map(|&(i, j)| j - 2 * i).collect();
        let (lo, hi) = (twice.iter().min().unwrap(), twice.iter().max().unwrap());
        Ok((hi - lo) / 2 + 1)
    }

    /// Sorted by `(j, i)`.
    pub fn to_json(&self) -> Result<String> {
        let mut rows: Vec<JsonEntry> = Vec::with_capacity(self.entries.len());
        for (&(i, j), e) in &self.entries {
            let torsion = e
                .torsion
                .iter()
                .map(|t| t.to_u64().ok_or_else(|| Error::Parse(format!("torsion {t} exceeds 64 bits"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(JsonEntry { i, j, rank: e.rank, torsion });
        }
        rows.sort_by_key(|r| (r.j, r.i));
        serde_json::to_string(&rows).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<BigradedGroup> {
        let rows: Vec<JsonEntry> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut g = BigradedGroup::default();
        for r in rows {
            g.insert(r.i, r.j, GroupEntry { rank: r.rank, torsion: r.torsion.into_iter().map(BigInt::from).collect() });
        }
        Ok(g)
    }

    /// Rows `j` descending, columns `i` ascending.
    pub fn table(&self) -> String {
        if self.is_trivial() {
            return "0\n".to_string();
        }
        let is: Vec<i32> = {
            let lo = self.entries.keys().map(|k| k.0).min().unwrap();
            let hi = self.entries.keys().map(|k| k.0).max().unwrap();
            (lo..=hi).collect()
        };
        let (jlo, jhi) = self.j_range().unwrap();
        let step = if self.entries.keys().all(|k| (k.1 - jlo) % 2 == 0) { 2 } else { 1 };
        let mut cells: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["j\\i".to_string()];
        header.extend(is.iter().map(|i| i.to_string()));
        cells.push(header);
        let mut j = jhi;
        while j >= jlo {
            let mut row = vec![j.to_string()];
            for &i in &is {
                row.push(self.get(i, j).map_or(String::new(), |e| e.to_string()));
            }
            cells.push(row);
            j -= step;
        }
        let widths: Vec<usize> = (0..cells[0].len()).map(|c| cells.iter().map(|r| r[c].len()).max().unwrap()).collect();
        let mut out = String::new();
        for row in &cells {
            let line: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// Finite Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms(terms: &[(i64, i32)]) -> Self {
        let mut p = Self::zero();
        for &(c, e) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        let c = self.coeffs.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplies by `q^k`.
    pub fn shifted(&self, k: i32) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut p = Self::zero();
        for (e, c) in self.terms() {
            p.add_term(e, c * k);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in other.terms() {
            p.add_term(e, c);
        }
        p
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let mag = c.unsigned_abs();
            if k == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "q")?,
                (1, m) => write!(f, "{m}q")?,
                (e, 1) => write!(f, "q^{e}")?,
                (e, m) => write!(f, "{m}q^{e}")?,
            }
        }
        Ok(())
    }
}

/// `ker d^{i,j} / im d^{i-1,j}`, with the complex's pending shift applied.
pub fn homology(c: &BigradedComplex) -> Result<BigradedGroup> {
    for (&(i, j), d) in &c.differentials {
        if let Some(next) = c.differentials.get(&(i + 1, j)) {
            if d.rows > 0 && next.rows > 0 && next.mul_wide(d).iter().any(|&x| x != 0) {
                return Err(Error::NotAComplex(i, j));
            }
        }
    }
    let forms: BTreeMap<(i32, i32), SmithForm> =
        c.differentials.par_iter().map(|(&k, d)| (k, smith_normal_form(d))).collect::<Vec<_>>().into_iter().collect();
    let mut g = BigradedGroup::default();
    for (&(i, j), gens) in &c.generators {
        let out_rank = forms.get(&(i, j)).map_or(0, |f| f.rank);
        let (in_rank, torsion) = forms.get(&(i - 1, j)).map_or((0, Vec::new()), |f| (f.rank, f.torsion()));
        let rank = gens.len() - out_rank - in_rank;
        g.insert(i + c.shift.0, j + c.shift.1, GroupEntry { rank, torsion });
    }
    Ok(g)
}

pub fn shift(g: &BigradedGroup, r: i32, s: i32) -> BigradedGroup {
    g.shift(r, s)
}

pub fn graded_euler_characteristic(g: &BigradedGroup) -> LaurentPoly {
    g.euler_characteristic()
}

pub fn homological_width(g: &BigradedGroup) -> Result<i32> {
    g.homological_width()
}

/// Unreduced Khovanov homology with the standard edge assignment.
pub fn khovanov(g: &RibbonGraph) -> Result<BigradedGroup> {
    homology(&complex::build_complex(g, &EdgeAssignment::standard(g.edge_count()))?)
}

/// Reduced Khovanov homology at the given basepoint.
pub fn reduced_khovanov(g: &RibbonGraph, basepoint: Basepoint) -> Result<BigradedGroup> {
    homology(&complex::build_reduced_complex(g, basepoint)?)
}

/// Outcome of a property check: empty `failures` means it passed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(name: &str) -> Self {
        Report { name: name.to_string(), failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    pub fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fail(msg());
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "PASS {}", self.name)
        } else {
            write!(f, "FAIL {}: {}", self.name, self.failures[0])
        }
    }
}

/// Compares `kh(dual)` with `kh(g)` under
/// `rank^{i,j}(G*) = rank^{n-i,n-j}(G)` and
/// `Tor^{i,j}(G*) = Tor^{n-i+1,n-j}(G)`. The differential preserves `j`,
/// so universal coefficients move torsion in `i` only.
pub fn compare_dual(g: &BigradedGroup, dual: &BigradedGroup, n: i32, report: &mut Report, tag: &str) {
    let keys: Vec<(i32, i32)> = dual
        .entries
        .keys()
        .copied()
        .chain(g.entries.keys().map(|&(i, j)| (n - i, n - j)))
        .chain(g.entries.keys().map(|&(i, j)| (n - i + 1, n - j)))
        .collect();
    for (i, j) in keys {
        if !report.failures.is_empty() {
            return;
        }
        let (a, b) = (dual.rank(i, j), g.rank(n - i, n - j));
        report.require(a == b, || format!("{tag} rank at ({i},{j}): dual {a}, graph {b} at ({},{})", n - i, n - j));
        let (a, b) = (dual.torsion(i, j), g.torsion(n - i + 1, n - j));
        report.require(a == b, || format!("{tag} torsion at ({i},{j}): dual {a:?}, graph {b:?}"));
    }
}

/// Duality of unreduced and reduced homology between `g` and its dual.
pub fn check_duality(g: &RibbonGraph) -> Result<Report> {
    let mut report = Report::new("duality");
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let d = g.dual();
    let n = g.edge_count() as i32;
    compare_dual(&khovanov(g)?, &khovanov(&d)?, n, &mut report, "unreduced");
    let b = Basepoint::default();
    compare_dual(&reduced_khovanov(g, b)?, &reduced_khovanov(&d, b)?, n, &mut report, "reduced");
    Ok(report)
}

/// Width, loopless, adequate and polynomial-range statements about
/// reduced homology.
pub fn check_grading_theorems(g: &RibbonGraph) -> Result<Report> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let rkh = reduced_khovanov(g, Basepoint::default())?;
    let genus = g.genus() as i32;
    let v = g.vertex_count() as i32;
    let e = g.edge_count() as i32;
    let f = g.face_count(g.all_edges()) as i32;
    let mut report = Report::new("grading theorems");
    let hw = rkh.homological_width()?;
    report.require(hw <= genus + 1, || format!("width {hw} exceeds genus + 1 = {}", genus + 1));
    let (jmin, jmax) = rkh.j_range().ok_or(Error::TrivialGroup)?;
    report.require(jmin >= 1 - v, || format!("j_min {jmin} below 1 - |V| = {}", 1 - v));
    report.require(jmax < e + f, || format!("j_max {jmax} above |E| + |F| - 1 = {}", e + f - 1));
    report.require(jmax - jmin <= 2 * (e - genus), || format!("j range {} exceeds 2(|E| - g)", jmax - jmin));
    let z = GroupEntry { rank: 1, torsion: vec![] };
    let only_at = |j: i32, i: i32| -> bool {
        rkh.entries.iter().filter(|(k, _)| k.1 == j).map(|(k, x)| (k.0, x)).collect::<Vec<_>>() == vec![(i, &z)]
    };
    if g.loop_count() == 0 {
        report.require(jmin == 1 - v, || format!("loopless: j_min {jmin} != {}", 1 - v));
        report.require(only_at(1 - v, 0), || format!("loopless: row j = {} is not Z at i = 0", 1 - v));
        if g.is_adequate() {
            report.require(jmax == e + f - 1, || format!("adequate: j_max {jmax} != {}", e + f - 1));
            report.require(only_at(e + f - 1, e), || format!("adequate: row j = {} is not Z at i = {e}", e + f - 1));
            report.require(hw == genus + 1, || format!("adequate: width {hw} != {}", genus + 1));
            report.require(jmax - jmin == 2 * (e - genus), || "adequate: j range not 2(|E| - g)".into());
        }
    }
    Ok(report)
}
