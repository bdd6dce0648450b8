//! The 3d² lines of the Fermat surface as indexed objects, and the exact
//! pairwise intersection predicate.
//!
//! Lines come in three strata ℒ⁰, ℒ¹, ℒ², each indexed by a column `k` and a
//! row `i` in `R_d`. Two distinct lines meet exactly when a residue congruence
//! holds; the full rule table (after normalizing so the lower stratum comes
//! first) is
//!
//! | strata | meet iff                         |
//! |--------|----------------------------------|
//! | 0, 0   | `k = t` or `i = j`               |
//! | s, s (s=1,2) | `i = j` or `k+i ≡ t+j`     |
//! | 0, 1   | `i − k ≡ t`                      |
//! | 0, 2   | `i + k ≡ t`                      |
//! | 1, 2   | `k + 2i ≡ t + 2j + c`            |
//!
//! where `c` is the residue with `v² = η^c`. For odd `d` (canonical `v = −1`,
//! `c = 0`) the last rule is the classical `k+2i ≡ t+2j`; for even `d` it
//! forces `L¹_{k,i} ∩ L²_{k,j} = ∅` since `2(i−j) ≡ c` is unsolvable for odd
//! `c`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::residue::{phi_minus, phi_plus, psi, Residue, SurfaceParams};

/// Which of the three line strata a line belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stratum {
    L0 = 0,
    L1 = 1,
    L2 = 2,
}

impl Stratum {
    pub const ALL: [Stratum; 3] = [Stratum::L0, Stratum::L1, Stratum::L2];

    pub fn index(self) -> u32 {
        self as u32
    }

    pub fn from_index(s: u32) -> Option<Stratum> {
        match s {
            0 => Some(Stratum::L0),
            1 => Some(Stratum::L1),
            2 => Some(Stratum::L2),
            _ => None,
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A line `L^s_{k,i}`. Ordering is canonical: by stratum, then column, then
/// row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineId {
    s: Stratum,
    k: Residue,
    i: Residue,
}

impl LineId {
    /// Range-checked constructor.
    pub fn new(d: u32, s: Stratum, k: Residue, i: Residue) -> Result<LineId> {
        let id = LineId { s, k, i };
        if k >= d || i >= d {
            return Err(Error::LineOutOfRange(id, d));
        }
        Ok(id)
    }

    pub fn s(&self) -> Stratum {
        self.s
    }

    pub fn k(&self) -> Residue {
        self.k
    }

    pub fn i(&self) -> Residue {
        self.i
    }

    pub fn in_range(&self, d: u32) -> bool {
        self.k < d && self.i < d
    }

    /// Canonical vertex number `s·d² + k·d + i`.
    pub fn vertex_id(&self, d: u32) -> usize {
        (self.s.index() * d * d + self.k * d + self.i) as usize
    }

    pub fn from_vertex_id(d: u32, v: usize) -> Result<LineId> {
        let n = 3 * (d as usize) * (d as usize);
        if v >= n {
            return Err(Error::InvalidCertificate(format!(
                "vertex id {v} out of range for d={d}"
            )));
        }
        let d = d as usize;
        let s = Stratum::from_index((v / (d * d)) as u32).unwrap();
        Ok(LineId {
            s,
            k: ((v / d) % d) as Residue,
            i: (v % d) as Residue,
        })
    }
}

impl fmt::Display for LineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.s, self.k, self.i)
    }
}

impl FromStr for LineId {
    type Err = Error;

    /// Parses the canonical `s k i` rendering, e.g. `0 2 0`.
    fn from_str(text: &str) -> Result<LineId> {
        let mut parts = text.split_whitespace();
        let mut next = |name: &str| {
            parts
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {name} in line id `{text}`")))?
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("bad {name} in line id `{text}`: {e}")))
        };
        let s = next("stratum")?;
        let k = next("column")?;
        let i = next("row")?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens in line id `{text}`")));
        }
        let s = Stratum::from_index(s)
            .ok_or_else(|| Error::Parse(format!("stratum must be 0, 1 or 2, got {s}")))?;
        Ok(LineId { s, k, i })
    }
}

/// All 3d² lines in canonical order.
pub fn enumerate_lines(params: &SurfaceParams) -> Vec<LineId> {
    let d = params.d();
    let mut out = Vec::with_capacity(3 * (d as usize) * (d as usize));
    for s in Stratum::ALL {
        for k in 0..d {
            for i in 0..d {
                out.push(LineId { s, k, i });
            }
        }
    }
    out
}

/// Whether two distinct lines intersect in P³.
pub fn meets(params: &SurfaceParams, a: LineId, b: LineId) -> Result<bool> {
    let d = params.d();
    if !a.in_range(d) {
        return Err(Error::LineOutOfRange(a, d));
    }
    if !b.in_range(d) {
        return Err(Error::LineOutOfRange(b, d));
    }
    if a == b {
        return Err(Error::IdenticalLines(a));
    }
    Ok(meets_raw(params, a, b))
}

/// Intersection rule table for distinct in-range lines.
pub(crate) fn meets_raw(params: &SurfaceParams, a: LineId, b: LineId) -> bool {
    let d = params.d();
    let (a, b) = if a.s <= b.s { (a, b) } else { (b, a) };
    let (k, i) = (a.k, a.i);
    let (t, j) = (b.k, b.i);
    match (a.s, b.s) {
        (Stratum::L0, Stratum::L0) => k == t || i == j,
        (Stratum::L1, Stratum::L1) | (Stratum::L2, Stratum::L2) => {
            i == j || phi_plus(d, k, i) == phi_plus(d, t, j)
        }
        (Stratum::L0, Stratum::L1) => phi_minus(d, k, i) == t,
        (Stratum::L0, Stratum::L2) => phi_plus(d, k, i) == t,
        (Stratum::L1, Stratum::L2) => psi(d, k, i) == (psi(d, t, j) + params.c()) % d,
        _ => unreachable!("strata are ordered"),
    }
}

/// Number of lines meeting `l` (always `4d − 2`).
pub fn degree_of(params: &SurfaceParams, l: LineId) -> usize {
    assert!(l.in_range(params.d()), "line {l} out of range");
    enumerate_lines(params)
        .into_iter()
        .filter(|&b| b != l && meets_raw(params, l, b))
        .count()
}

/// A named d-line subset: a column ℒ^s_k, a diagonal or anti-diagonal of ℒ⁰,
/// or a ψ-fiber of ℒ¹/ℒ².
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineSetView {
    /// `ℒ^s_k = {L^s_{k,i} | i ∈ R_d}`.
    Column { s: Stratum, k: Residue },
    /// `D⁰_{u,−}`: the lines of ℒ⁰ with `i − k ≡ u`.
    Diagonal { u: Residue },
    /// `D⁰_{u,+}`: the lines of ℒ⁰ with `i + k ≡ u`.
    AntiDiagonal { u: Residue },
    /// `D^s_u`: the lines of ℒ^s (s = 1, 2) with `k + 2i ≡ u`.
    PsiFiber { s: Stratum, u: Residue },
}

/// The d lines selected by a view, in canonical order.
pub fn resolve_view(params: &SurfaceParams, view: LineSetView) -> Result<Vec<LineId>> {
    let d = params.d();
    let check = |r: Residue| -> Result<()> {
        if r >= d {
            return Err(Error::ResidueOutOfRange { value: r, d });
        }
        Ok(())
    };
    let lines = match view {
        LineSetView::Column { s, k } => {
            check(k)?;
            (0..d).map(|i| LineId { s, k, i }).collect()
        }
        LineSetView::Diagonal { u } => {
            check(u)?;
            (0..d)
                .map(|k| LineId {
                    s: Stratum::L0,
                    k,
                    i: (k + u) % d,
                })
                .collect()
        }
        LineSetView::AntiDiagonal { u } => {
            check(u)?;
            (0..d)
                .map(|k| LineId {
                    s: Stratum::L0,
                    k,
                    i: (d + u - k) % d,
                })
                .collect()
        }
        LineSetView::PsiFiber { s, u } => {
            if s == Stratum::L0 {
                return Err(Error::UnsupportedView);
            }
            check(u)?;
            // One line per column: k + 2i ≡ u has exactly one i per k when d
            // is odd; for even d the fiber still has d members, two per
            // solvable column.
            let mut v: Vec<LineId> = (0..d)
                .flat_map(|k| (0..d).map(move |i| (k, i)))
                .filter(|&(k, i)| psi(d, k, i) == u)
                .map(|(k, i)| LineId { s, k, i })
                .collect();
            v.sort_unstable();
            v
        }
    };
    debug_assert_eq!(lines.len(), d as usize);
    Ok(lines)
}
