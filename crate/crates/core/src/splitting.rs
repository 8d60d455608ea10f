//! Well-splitting of a space by two subsets.
//!
//! `E_P` below is the set of edges lying wholly inside A or wholly inside B,
//! the structure of the glued space `A ⊔_{A∩B} B` moved back onto X.

use crate::error::{Error, Result};
use crate::space::{components, is_connected_within, FiniteSpace, Scale};
use serde::Serialize;

/// Two vertex sets whose union is the whole space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub a: Vec<bool>,
    pub b: Vec<bool>,
}

impl Cover {
    pub fn new(space: &FiniteSpace, a: &[usize], b: &[usize]) -> Result<Cover> {
        let n = space.len();
        let mut ma = vec![false; n];
        let mut mb = vec![false; n];
        for (set, mask) in [(a, &mut ma), (b, &mut mb)] {
            for &v in set {
                if v >= n {
                    return Err(Error::UnknownVertex(v.to_string()));
                }
                mask[v] = true;
            }
        }
        Cover::from_masks(ma, mb)
    }

    pub fn from_masks(a: Vec<bool>, b: Vec<bool>) -> Result<Cover> {
        if a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| !x && !y) {
            return Err(Error::NotACover);
        }
        if !a.iter().any(|&x| x) || !b.iter().any(|&x| x) {
            return Err(Error::NotACover);
        }
        Ok(Cover { a, b })
    }

    pub fn swapped(&self) -> Cover {
        Cover { a: self.b.clone(), b: self.a.clone() }
    }

    pub fn in_both(&self, v: usize) -> bool {
        self.a[v] && self.b[v]
    }

    pub fn intersection(&self) -> Vec<bool> {
        self.a.iter().zip(&self.b).map(|(x, y)| *x && *y).collect()
    }

    pub fn a_vertices(&self) -> Vec<usize> {
        (0..self.a.len()).filter(|&v| self.a[v]).collect()
    }

    pub fn b_vertices(&self) -> Vec<usize> {
        (0..self.b.len()).filter(|&v| self.b[v]).collect()
    }

    /// `(u,v)` is an edge with both ends in A or both in B.
    #[inline]
    pub fn in_pushout(&self, space: &FiniteSpace, u: usize, v: usize) -> bool {
        space.is_edge(u, v) && ((self.a[u] && self.a[v]) || (self.b[u] && self.b[v]))
    }

    #[inline]
    pub fn pushout_or_diag(&self, space: &FiniteSpace, u: usize, v: usize) -> bool {
        u == v || self.in_pushout(space, u, v)
    }

    /// Edges of X that leave the glued structure.
    pub fn crossing_edges(&self, space: &FiniteSpace) -> Vec<(usize, usize)> {
        space.edges().into_iter().filter(|&(u, v)| !self.in_pushout(space, u, v)).collect()
    }
}

/// Edges inside A or inside B, as pairs `u < v`.
pub fn pushout_edge_set(space: &FiniteSpace, cover: &Cover) -> Vec<(usize, usize)> {
    space.edges().into_iter().filter(|&(u, v)| cover.in_pushout(space, u, v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub triple: (usize, usize, usize),
    pub condition: u8,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellSplitReport {
    pub verdict: bool,
    pub pushout_edges: Vec<(usize, usize)>,
    pub triples_checked: usize,
    pub failures: Vec<Failure>,
    /// Crossing edges with no midpoint in A∩B. Empty whenever condition 1
    /// holds on the degenerate triples.
    pub unbridged_edges: Vec<(usize, usize)>,
}

/// Checks both well-splitting conditions on every premise triple.
///
/// A triple `(x,y,y')` is a premise when `(x,y)` and `(x,y')` are edges or
/// diagonal, at least one of them leaves `E_P`, and `(y,y')` is in `E_P` or
/// diagonal. Condition 1 asks for a common midpoint `m`; condition 2 asks
/// that the midpoint set of `(x,y)` induce a connected subgraph of X.
pub fn well_split(space: &FiniteSpace, cover: &Cover) -> WellSplitReport {
    let n = space.len();
    let ep = |u: usize, v: usize| cover.pushout_or_diag(space, u, v);
    let mut midpoints: Vec<Option<Vec<usize>>> = vec![None; n * n];
    let mut failures = Vec::new();
    let mut checked = 0;
    for x in 0..n {
        for y in 0..n {
            if !space.controlled(x, y) {
                continue;
            }
            for y2 in 0..n {
                if !space.controlled(x, y2) || !ep(y, y2) {
                    continue;
                }
                if ep(x, y) && ep(x, y2) {
                    continue;
                }
                checked += 1;
                let m_xy = midpoints[x * n + y]
                    .get_or_insert_with(|| (0..n).filter(|&m| ep(x, m) && ep(m, y)).collect())
                    .clone();
                if !m_xy.iter().any(|&m| ep(m, y2)) {
                    failures.push(Failure { triple: (x, y, y2), condition: 1, witness: m_xy.clone() });
                }
                let mut mask = vec![false; n];
                for &m in &m_xy {
                    mask[m] = true;
                }
                if !is_connected_within(space, &mask) {
                    failures.push(Failure { triple: (x, y, y2), condition: 2, witness: m_xy });
                }
            }
        }
    }
    let unbridged_edges = cover
        .crossing_edges(space)
        .into_iter()
        .filter(|&(u, v)| bridge(space, cover, u, v).is_err())
        .collect();
    WellSplitReport {
        verdict: failures.is_empty(),
        pushout_edges: pushout_edge_set(space, cover),
        triples_checked: checked,
        failures,
        unbridged_edges,
    }
}

/// Least `m ∈ A∩B` with both hops `(u,m)`, `(m,v)` in `E_P` or diagonal.
pub fn bridge(space: &FiniteSpace, cover: &Cover, u: usize, v: usize) -> Result<usize> {
    if !space.is_edge(u, v) {
        return Err(Error::Precondition(format!(
            "({}, {}) is not an edge",
            space.label(u),
            space.label(v)
        )));
    }
    if cover.in_pushout(space, u, v) {
        return Err(Error::Precondition(format!(
            "({}, {}) already lies in A or in B",
            space.label(u),
            space.label(v)
        )));
    }
    (0..space.len())
        .find(|&m| cover.in_both(m) && cover.pushout_or_diag(space, u, m) && cover.pushout_or_diag(space, m, v))
        .ok_or_else(|| Error::NoBridge(space.label(u).to_string(), space.label(v).to_string()))
}

/// Edges of `E_P` that run from A into X−A (or from B into X−B) starting
/// outside A∩B. Always empty; the check guards the `E_P` construction.
pub fn which_side_check(space: &FiniteSpace, cover: &Cover) -> Vec<(usize, usize)> {
    let n = space.len();
    let mut bad = Vec::new();
    for x1 in 0..n {
        for x2 in 0..n {
            if !cover.in_pushout(space, x1, x2) {
                continue;
            }
            let leaves_a = cover.a[x1] && !cover.a[x2];
            let leaves_b = cover.b[x1] && !cover.b[x2];
            if (leaves_a || leaves_b) && !cover.in_both(x1) {
                bad.push((x1, x2));
            }
        }
    }
    bad
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisconnectionReport {
    pub components: usize,
    pub disconnected: bool,
    /// A disjoint well-split pair, if one exists.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub bipartitions_checked: usize,
    /// Disconnected exactly when some disjoint pair well-splits.
    pub holds: bool,
}

/// Sweeps every split of X into two non-empty disjoint parts.
pub fn disconnected_iff_empty_intersection(space: &FiniteSpace) -> Result<DisconnectionReport> {
    let n = space.len();
    if n > 20 {
        return Err(Error::ResourceCap(format!("{n} vertices")));
    }
    let comps = components(space).len();
    let mut witness = None;
    let mut checked = 0;
    if n >= 2 {
        // Vertex 0 always sits in A, so each split is visited once.
        for mask in 1..1u32 << (n - 1) {
            let a: Vec<bool> = (0..n).map(|v| v == 0 || mask >> (v - 1) & 1 == 0).collect();
            let b: Vec<bool> = a.iter().map(|x| !x).collect();
            let cover = Cover::from_masks(a, b)?;
            checked += 1;
            if well_split(space, &cover).verdict {
                witness = Some((cover.a_vertices(), cover.b_vertices()));
                break;
            }
        }
    }
    let disconnected = comps > 1;
    Ok(DisconnectionReport {
        components: comps,
        disconnected,
        holds: disconnected == witness.is_some(),
        witness,
        bipartitions_checked: checked,
    })
}

/// A subset of the integer line as it may appear in a cover or atlas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LineRegion {
    AtLeast(i64),
    AtMost(i64),
    Residue { modulus: i64, residue: i64 },
    Points(Vec<i64>),
}

impl LineRegion {
    pub fn contains(&self, z: i64) -> bool {
        match self {
            LineRegion::AtLeast(p) => z >= *p,
            LineRegion::AtMost(q) => z <= *q,
            LineRegion::Residue { modulus, residue } => z.rem_euclid(*modulus) == residue.rem_euclid(*modulus),
            LineRegion::Points(ps) => ps.contains(&z),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineFailure {
    pub triple: (i64, i64, i64),
    pub condition: u8,
    pub witness: Vec<i64>,
}

/// Well-splitting of the integer line by a right half-line `[p,∞)` and a
/// left half-line `(−∞,q]` with `p ≤ q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfLineReport {
    pub verdict: bool,
    pub scale: Option<u64>,
    pub right_from: i64,
    pub left_to: i64,
    /// Midpoint used for every crossing pair.
    pub bridge: i64,
    /// `None` when decided in closed form.
    pub triples_checked: Option<u64>,
    pub failures: Vec<LineFailure>,
}

impl HalfLineReport {
    pub fn in_right(&self, z: i64) -> bool {
        z >= self.right_from
    }

    pub fn in_left(&self, z: i64) -> bool {
        z <= self.left_to
    }

    /// Whether `(x,y)` is controlled in the glued structure.
    pub fn in_pushout(&self, x: i64, y: i64) -> bool {
        let close = match self.scale {
            Some(n) => x.abs_diff(y) <= n,
            None => true,
        };
        close && ((self.in_right(x) && self.in_right(y)) || (self.in_left(x) && self.in_left(y)))
    }
}

/// Largest finite scale whose crossing patterns are enumerated.
pub const HALF_LINE_SCALE_CAP: u64 = 64;

pub fn well_split_half_lines(scale: Scale, a: &LineRegion, b: &LineRegion) -> Result<HalfLineReport> {
    let (p, q) = match (a, b) {
        (LineRegion::AtLeast(p), LineRegion::AtMost(q)) | (LineRegion::AtMost(q), LineRegion::AtLeast(p)) => (*p, *q),
        _ => return Err(Error::UnsupportedCover(format!("{a:?} / {b:?}"))),
    };
    if p > q {
        return Err(Error::NotACover);
    }
    let mut report = HalfLineReport {
        verdict: true,
        scale: match scale {
            Scale::Finite(n) => Some(n),
            Scale::Inf => None,
        },
        right_from: p,
        left_to: q,
        bridge: p,
        triples_checked: None,
        failures: Vec::new(),
    };
    let n = match scale {
        // Every point of the overlap joins both sides, and every non-empty
        // set is connected at infinite scale.
        Scale::Inf => return Ok(report),
        Scale::Finite(n) if n > HALF_LINE_SCALE_CAP => {
            return Err(Error::ResourceCap(format!("scale {n} above {HALF_LINE_SCALE_CAP}")))
        }
        Scale::Finite(n) => n as i64,
    };
    let ep = |u: i64, v: i64| u == v || report.in_pushout(u, v);
    // Only points outside the overlap and within `n` of it meet a crossing pair.
    let xs: Vec<i64> = (p - n..p).chain(q + 1..=q + n).collect();
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for &x in &xs {
        for y in x - n..=x + n {
            for y2 in x - n..=x + n {
                if !ep(y, y2) || (ep(x, y) && ep(x, y2)) {
                    continue;
                }
                checked += 1;
                let mids: Vec<i64> = (x - n..=x + n).filter(|&m| ep(x, m) && ep(m, y)).collect();
                if !mids.iter().any(|&m| ep(m, y2)) {
                    failures.push(LineFailure { triple: (x, y, y2), condition: 1, witness: mids.clone() });
                }
                if mids.windows(2).any(|w| w[1] - w[0] > n) {
                    failures.push(LineFailure { triple: (x, y, y2), condition: 2, witness: mids });
                }
            }
        }
    }
    report.verdict = failures.is_empty();
    report.triples_checked = Some(checked);
    report.failures = failures;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::graphs::*;
    use crate::space::{disjoint_union, FiniteSpace};

    #[test]
    fn full_cover_keeps_every_edge() {
        let c4 = cycle(4);
        let all: Vec<usize> = (0..4).collect();
        let cover = Cover::new(&c4, &all, &all).unwrap();
        assert_eq!(pushout_edge_set(&c4, &cover), c4.edges());
        assert!(well_split(&c4, &cover).verdict);
        assert!(which_side_check(&c4, &cover).is_empty());
    }

    #[test]
    fn not_a_cover() {
        let c4 = cycle(4);
        assert_eq!(Cover::new(&c4, &[0, 1], &[2]).unwrap_err(), Error::NotACover);
    }

    #[test]
    fn parity_cover_of_eight_cycle() {
        let c8 = cycle(8);
        let odd: Vec<usize> = (0..8).filter(|v| v % 2 == 1).collect();
        let even: Vec<usize> = (0..8).filter(|v| v % 2 == 0).collect();
        let cover = Cover::new(&c8, &odd, &even).unwrap();
        assert!(pushout_edge_set(&c8, &cover).is_empty());
        let r = well_split(&c8, &cover);
        assert!(!r.verdict);
        assert!(r.failures.iter().all(|f| f.condition == 1));
        assert_eq!(bridge(&c8, &cover, 0, 1), Err(Error::NoBridge("0".into(), "1".into())));
    }

    #[test]
    fn bridge_precondition() {
        let c4 = cycle(4);
        let all: Vec<usize> = (0..4).collect();
        let cover = Cover::new(&c4, &all, &all).unwrap();
        assert!(matches!(bridge(&c4, &cover, 0, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn disconnection() {
        let kk = disjoint_union(&[point(), point()]);
        let r = disconnected_iff_empty_intersection(&kk).unwrap();
        assert!(r.disconnected && r.witness.is_some() && r.holds);
        let r = disconnected_iff_empty_intersection(&cycle(4)).unwrap();
        assert!(!r.disconnected && r.witness.is_none() && r.holds);
        assert_eq!(r.bipartitions_checked, 7);
    }

    #[test]
    fn half_lines() {
        let a = LineRegion::AtLeast(0);
        let b = LineRegion::AtMost(0);
        let r = well_split_half_lines(Scale::Inf, &a, &b).unwrap();
        assert!(r.verdict && r.bridge == 0);
        assert!(!r.in_pushout(-3, 3));
        let r1 = well_split_half_lines(Scale::Finite(1), &a, &b).unwrap();
        assert!(r1.verdict);
        assert_eq!(r1.triples_checked, Some(0));
        let r2 = well_split_half_lines(Scale::Finite(2), &a, &b).unwrap();
        assert!(r2.verdict);
        assert!(r2.triples_checked.unwrap() > 0);
        let odd = LineRegion::Residue { modulus: 2, residue: 1 };
        let even = LineRegion::Residue { modulus: 2, residue: 0 };
        assert!(matches!(well_split_half_lines(Scale::Inf, &odd, &even), Err(Error::UnsupportedCover(_))));
    }

    #[test]
    fn star_graph_split_at_centre() {
        // Two triangles sharing vertex 2; splitting at the shared vertex works.
        let s = FiniteSpace::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]);
        let cover = Cover::new(&s, &[0, 1, 2], &[2, 3, 4]).unwrap();
        let r = well_split(&s, &cover);
        assert!(r.verdict);
        assert_eq!(r.triples_checked, 0);
    }
}
