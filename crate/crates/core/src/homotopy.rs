//! Discrete homotopy: finite paths, rays, and the add/delete point calculus.

use crate::error::{Error, Result};
use crate::space::{Scale, Space};
use crate::strings::Trace;
use crate::tail::{lcm, search_rows, tails_step_ok, RowSearch, RowShape, Tail};
use crate::zmap::{PointMove, ZMap};
use std::collections::{HashMap, VecDeque};

/// Certificate that the ray `r` is homotopic to `z ↦ s(z + shift)`.
/// `rows` runs from `r` to the shifted `s`; empty means they are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayCert {
    pub shift: i64,
    pub rows: Vec<Tail>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Exact,
    Rows(Vec<Vec<i64>>),
    Ray(RayCert),
    Moves(Vec<PointMove>),
    Trace(Trace),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Proved(Evidence),
    Refuted(String),
    Unknown(String),
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Proved(_) => "PROVED",
            Verdict::Refuted(_) => "REFUTED",
            Verdict::Unknown(_) => "UNKNOWN",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Proved(_) => 0,
            Verdict::Refuted(_) => 1,
            Verdict::Unknown(_) => 2,
        }
    }
}

/// Every pair `(r(i), r'(i'))` with `|i − i'| ≤ 1` is controlled.
pub fn step_ok(space: &Space, r: &[i64], r2: &[i64]) -> Result<bool> {
    if r.len() != r2.len() {
        return Err(Error::LengthMismatch(r.len(), r2.len()));
    }
    let n = r.len();
    Ok((0..n).all(|i| {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(n - 1);
        (lo..=hi).all(|j| space.controlled(r[i], r2[j]))
    }))
}

pub fn is_path(space: &Space, p: &[i64]) -> bool {
    p.windows(2).all(|w| space.controlled(w[0], w[1]))
}

/// Which path ends stay fixed during a homotopy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Both,
    Right,
    Free,
}

#[derive(Debug, Clone, Copy)]
pub struct FiniteOptions {
    pub anchor: Anchor,
    pub max_rows: usize,
    pub padding: usize,
    pub max_states: usize,
}

impl Default for FiniteOptions {
    fn default() -> Self {
        FiniteOptions { anchor: Anchor::Both, max_rows: 64, padding: 0, max_states: 200_000 }
    }
}

fn pad(p: &[i64], len: usize) -> Vec<i64> {
    let mut v = p.to_vec();
    let last = *p.last().unwrap();
    v.resize(len, last);
    v
}

pub fn path_candidates(space: &Space, around: &[i64]) -> Vec<i64> {
    match space {
        Space::Finite(f) => (0..f.len() as i64).filter(|&v| around.iter().all(|&a| space.controlled(a, v))).collect(),
        Space::IntLine(Scale::Finite(n)) => {
            let n = *n as i64;
            (around.iter().max().unwrap() - n..=around.iter().min().unwrap() + n).collect()
        }
        Space::IntLine(Scale::Inf) => (*around.iter().min().unwrap()..=*around.iter().max().unwrap()).collect(),
    }
}

/// Paths one homotopy step from `p`, in lexicographic order.
pub fn path_neighbors(space: &Space, p: &[i64], anchor: Anchor) -> Vec<Vec<i64>> {
    let n = p.len();
    let cand: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let fixed = match anchor {
                Anchor::Both => i == 0 || i == n - 1,
                Anchor::Right => i == n - 1,
                Anchor::Free => false,
            };
            if fixed {
                vec![p[i]]
            } else {
                let around: Vec<i64> = (i.saturating_sub(1)..=(i + 1).min(n - 1)).map(|j| p[j]).collect();
                path_candidates(space, &around)
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(space: &Space, p: &[i64], cand: &[Vec<i64>], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let i = cur.len();
        if i == cand.len() {
            if cur.as_slice() != p {
                out.push(cur.clone());
            }
            return;
        }
        for &v in &cand[i] {
            if i > 0 && !space.controlled(cur[i - 1], v) {
                continue;
            }
            if i > 0 && !space.controlled(p[i - 1], v) {
                continue;
            }
            if i > 0 && !space.controlled(cur[i - 1], p[i]) {
                continue;
            }
            cur.push(v);
            go(space, p, cand, cur, out);
            cur.pop();
        }
    }
    go(space, p, &cand, &mut cur, &mut out);
    out
}

/// Breadth-first search for a homotopy between two finite paths, padded
/// on the right with their last value to a common length.
pub fn homotopic_finite(space: &Space, p: &[i64], q: &[i64], opts: &FiniteOptions) -> Verdict {
    if p.is_empty() || q.is_empty() {
        return Verdict::Refuted("empty path".into());
    }
    let len = p.len().max(q.len()) + opts.padding;
    let (p, q) = (pad(p, len), pad(q, len));
    if !is_path(space, &p) || !is_path(space, &q) {
        return Verdict::Refuted("input is not a bornologous path".into());
    }
    let ends_fixed = match opts.anchor {
        Anchor::Both => p[0] == q[0] && p[len - 1] == q[len - 1],
        Anchor::Right => p[len - 1] == q[len - 1],
        Anchor::Free => true,
    };
    if !ends_fixed {
        return Verdict::Refuted("fixed endpoints differ".into());
    }
    if p == q {
        return Verdict::Proved(Evidence::Rows(vec![p]));
    }
    if matches!(space, Space::IntLine(Scale::Inf)) {
        return Verdict::Proved(Evidence::Rows(vec![p, q]));
    }
    let mut parent: HashMap<Vec<i64>, Option<Vec<i64>>> = HashMap::from([(p.clone(), None)]);
    let mut queue = VecDeque::from([(p.clone(), 0usize)]);
    let mut capped = false;
    while let Some((w, depth)) = queue.pop_front() {
        if depth >= opts.max_rows {
            capped = true;
            continue;
        }
        for nb in path_neighbors(space, &w, opts.anchor) {
            if parent.contains_key(&nb) {
                continue;
            }
            parent.insert(nb.clone(), Some(w.clone()));
            if nb == q {
                let mut rows = vec![nb];
                while let Some(Some(prev)) = parent.get(rows.last().unwrap()) {
                    rows.push(prev.clone());
                }
                rows.reverse();
                return Verdict::Proved(Evidence::Rows(rows));
            }
            if parent.len() >= opts.max_states {
                return Verdict::Unknown(format!("state cap {} reached", opts.max_states));
            }
            queue.push_back((nb, depth + 1));
        }
    }
    if capped {
        Verdict::Unknown(format!("row cap {} reached", opts.max_rows))
    } else {
        Verdict::Refuted(format!("all {} reachable paths of length {len} exhausted", parent.len()))
    }
}

/// State cap per unit of `bound` for the ray searches.
pub const RAY_STATES_PER_BOUND: usize = 500;

fn component_of(space: &Space) -> Option<Vec<usize>> {
    let f = space.finite()?;
    let mut comp = vec![0; f.len()];
    for (k, c) in crate::space::components(f).iter().enumerate() {
        for &v in c {
            comp[v] = k;
        }
    }
    Some(comp)
}

/// Decides, or bounded-searches, whether the ray `r` is homotopic to some
/// shift `z ↦ s(z + d)` of `s`, both read towards `+∞`.
pub fn rays_equivalent(space: &Space, r: &Tail, s: &Tail, bound: usize) -> Verdict {
    if let Some((d, _)) = r.align(s) {
        return Verdict::Proved(Evidence::Ray(RayCert { shift: d, rows: vec![] }));
    }
    if r.slope() != s.slope() {
        return Verdict::Refuted(format!(
            "slopes {} and {} give unbounded displacement",
            r.slope(),
            s.slope()
        ));
    }
    let slope = r.slope();
    let period = lcm(r.period(), s.period());
    let shape = RowShape { slope, period };
    let max_states = RAY_STATES_PER_BOUND * bound.max(1);
    match space {
        Space::IntLine(Scale::Inf) => {
            // Equal slopes differ by a bounded amount.
            Verdict::Proved(Evidence::Ray(RayCert { shift: 0, rows: vec![r.clone(), s.clone()] }))
        }
        Space::Finite(_) => {
            let comp = component_of(space).unwrap();
            let p = period as i64;
            let same_components =
                |d: i64| (0..p).all(|z| comp[r.eval(z) as usize] == comp[s.eval(z + d) as usize]);
            if !(0..p).any(same_components) {
                return Verdict::Refuted("every column would join different components".into());
            }
            let targets: Vec<(i64, Vec<i64>)> =
                (0..p).map(|d| (d, (0..p).map(|z| s.eval(z + d)).collect())).collect();
            finish_ray_search(space, shape, r, &targets, max_states)
        }
        Space::IntLine(Scale::Finite(_)) => {
            let d0 = if slope == 0 { 0 } else { (r.eval(0) - s.eval(0)).div_euclid(slope) };
            let p = period as i64;
            let targets: Vec<(i64, Vec<i64>)> = (d0 - 2 * p..=d0 + 2 * p)
                .map(|d| (d, (0..p).map(|z| s.eval(z + d)).collect()))
                .collect();
            finish_ray_search(space, shape, r, &targets, max_states)
        }
    }
}

fn finish_ray_search(space: &Space, shape: RowShape, r: &Tail, targets: &[(i64, Vec<i64>)], max_states: usize) -> Verdict {
    let start = shape.word_of(r);
    match search_rows(space, shape, start, |w| targets.iter().any(|(_, t)| t == w), max_states) {
        RowSearch::Found(rows) => {
            let last = rows.last().unwrap();
            let shift = targets.iter().find(|(_, t)| t == last).unwrap().0;
            let rows = rows.iter().map(|w| shape.tail_of(w)).collect();
            Verdict::Proved(Evidence::Ray(RayCert { shift, rows }))
        }
        RowSearch::Exhausted => Verdict::Unknown(format!("no homotopy through rows of period {}", shape.period)),
        RowSearch::Capped => Verdict::Unknown(format!("state cap {max_states} reached")),
    }
}

/// Checks a ray certificate against its endpoints.
pub fn check_ray_cert(space: &Space, r: &Tail, s: &Tail, cert: &RayCert) -> bool {
    let target = s.shift(-cert.shift);
    if cert.rows.is_empty() {
        return *r == target;
    }
    cert.rows[0] == *r
        && *cert.rows.last().unwrap() == target
        && cert.rows.iter().all(|t| t.step_violation(space).is_none())
        && cert.rows.windows(2).all(|w| tails_step_ok(space, &w[0], &w[1]))
}

/// Ray homotopy of the right halves, up to shifting.
pub fn homotopic_ray(f: &ZMap, g: &ZMap, bound: usize) -> Result<Verdict> {
    f.same_space(g)?;
    Ok(rays_equivalent(f.space(), f.right(), g.right(), bound))
}

/// Equality of objects: eventual equality, or a ray homotopy.
pub fn object_equal(f: &ZMap, g: &ZMap, bound: usize) -> Result<Verdict> {
    f.same_space(g)?;
    if f.eventually_equal(g)? {
        return Ok(Verdict::Proved(Evidence::Exact));
    }
    homotopic_ray(f, g, bound)
}

/// Translates a rel-endpoint homotopy of the window `[lo, lo + len)` into
/// add/delete point moves: each row step rewrites one column at a time by
/// adding the new value and deleting the old one.
pub fn homotopy_to_dmoves(f: &ZMap, g: &ZMap, lo: i64, rows: &[Vec<i64>]) -> Result<Vec<PointMove>> {
    let bad = |m: &str| Error::CertificateInvalid(m.to_string());
    f.same_space(g)?;
    if rows.is_empty() {
        return if f == g { Ok(vec![]) } else { Err(bad("empty certificate for distinct maps")) };
    }
    let len = rows[0].len();
    if len == 0 || rows.iter().any(|r| r.len() != len) {
        return Err(bad("rows of unequal length"));
    }
    let hi = lo + len as i64 - 1;
    if rows[0] != f.sample(lo, hi) || *rows.last().unwrap() != g.sample(lo, hi) {
        return Err(bad("end rows do not match the maps"));
    }
    if rows.iter().any(|r| r[0] != rows[0][0] || r[len - 1] != rows[0][len - 1]) {
        return Err(bad("endpoints move"));
    }
    let space = f.space();
    if rows.iter().any(|r| !is_path(space, r)) {
        return Err(bad("row is not bornologous"));
    }
    for w in rows.windows(2) {
        if !step_ok(space, &w[0], &w[1])? {
            return Err(bad("consecutive rows are not one step apart"));
        }
    }
    let (a, b) = (f.lo().min(lo), f.hi().max(hi));
    let last = rows.last().unwrap();
    let patched = ZMap::from_fn(
        f.space_arc().clone(),
        a,
        b,
        |z| if (lo..=hi).contains(&z) { last[(z - lo) as usize] } else { f.eval(z) },
        f.left().clone(),
        f.right().clone(),
    )?;
    if patched != *g {
        return Err(bad("maps differ outside the window"));
    }
    let mut moves = Vec::new();
    for w in rows.windows(2) {
        for i in 0..len.saturating_sub(2) as i64 {
            moves.push(PointMove::Add { at: lo + i + 1, value: w[1][(i + 1) as usize] });
            moves.push(PointMove::Delete { at: lo + i + 2 });
        }
    }
    Ok(moves)
}

/// Applies moves in order; fails on the first invalid one.
pub fn replay_moves(f: &ZMap, moves: &[PointMove]) -> Result<ZMap> {
    moves.iter().try_fold(f.clone(), |h, m| m.apply(&h))
}

fn point_moves(h: &ZMap, max_len: usize) -> Vec<(PointMove, ZMap)> {
    let mut out = Vec::new();
    let (a, b) = (h.lo() - 1, h.hi() + 2);
    for z in a..=b {
        if let Ok(g) = h.delete_point(z) {
            out.push((PointMove::Delete { at: z }, g));
        }
    }
    if h.values().len() < max_len {
        for z in a..=b {
            let around = [h.eval(z - 1), h.eval(z)];
            for v in path_candidates(h.space(), &around) {
                if let Ok(g) = h.add_point(z, v) {
                    out.push((PointMove::Add { at: z, value: v }, g));
                }
            }
        }
    }
    out
}

fn inverse(m: &PointMove, before: &ZMap) -> PointMove {
    match *m {
        PointMove::Add { at, .. } => PointMove::Delete { at },
        PointMove::Delete { at } => PointMove::Add { at, value: before.eval(at) },
    }
}

/// State cap for `simd_equiv`.
pub const SIMD_STATE_CAP: usize = 200_000;

/// Bidirectional search over add/delete point moves, at most `bound` moves.
pub fn simd_equiv(f: &ZMap, g: &ZMap, bound: usize) -> Result<Verdict> {
    f.same_space(g)?;
    if f.left() != g.left() {
        return Ok(Verdict::Refuted("left tails differ and point moves preserve them".into()));
    }
    if f.right().align(g.right()).is_none() {
        return Ok(Verdict::Refuted("right tails differ beyond a shift".into()));
    }
    if f == g {
        return Ok(Verdict::Proved(Evidence::Moves(vec![])));
    }
    let max_len = f.values().len().max(g.values().len()) + 3;
    // Each side maps a state to the move that reached it and its predecessor.
    type Side = HashMap<ZMap, Option<(PointMove, ZMap)>>;
    let mut fwd: Side = HashMap::from([(f.clone(), None)]);
    let mut bwd: Side = HashMap::from([(g.clone(), None)]);
    let mut fq = VecDeque::from([f.clone()]);
    let mut bq = VecDeque::from([g.clone()]);
    let mut depth = 0;
    let meet = |fwd: &Side, bwd: &Side, mid: &ZMap| -> Vec<PointMove> {
        let mut head = Vec::new();
        let mut cur = mid.clone();
        while let Some(Some((m, prev))) = fwd.get(&cur) {
            head.push(m.clone());
            cur = prev.clone();
        }
        head.reverse();
        let mut cur = mid.clone();
        while let Some(Some((m, next))) = bwd.get(&cur) {
            head.push(m.clone());
            cur = next.clone();
        }
        head
    };
    while depth < bound && (!fq.is_empty() || !bq.is_empty()) {
        let forward = fq.len() <= bq.len() && !fq.is_empty() || bq.is_empty();
        let (queue, this, other) = if forward { (&mut fq, &mut fwd, &bwd) } else { (&mut bq, &mut bwd, &fwd) };
        let layer: Vec<ZMap> = queue.drain(..).collect();
        for h in layer {
            for (m, next) in point_moves(&h, max_len) {
                if this.contains_key(&next) {
                    continue;
                }
                // Backward edges store the move from `next` back towards `g`.
                let entry = if forward { (m, h.clone()) } else { (inverse(&m, &h), h.clone()) };
                this.insert(next.clone(), Some(entry));
                if other.contains_key(&next) {
                    let (fw, bw) = if forward { (&*this, other) } else { (other, &*this) };
                    let moves = meet(fw, bw, &next);
                    return Ok(Verdict::Proved(Evidence::Moves(moves)));
                }
                if this.len() + other.len() > SIMD_STATE_CAP {
                    return Ok(Verdict::Unknown(format!("state cap {SIMD_STATE_CAP} reached")));
                }
                queue.push_back(next);
            }
        }
        depth += 1;
    }
    Ok(Verdict::Unknown(format!("no move sequence within bound {bound}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::graphs::{complete, cycle};
    use std::sync::Arc;

    fn c4() -> Space {
        Space::Finite(cycle(4))
    }

    #[test]
    fn step_examples() {
        assert!(step_ok(&c4(), &[0, 0, 0], &[0, 1, 0]).unwrap());
        assert!(!step_ok(&c4(), &[0, 1, 2, 3, 0], &[0, 1, 2, 1, 0]).unwrap());
        assert!(step_ok(&c4(), &[0, 1, 2], &[0, 1, 2]).unwrap());
        assert_eq!(step_ok(&c4(), &[0], &[0, 1]), Err(Error::LengthMismatch(1, 2)));
    }

    #[test]
    fn finite_search() {
        let v = homotopic_finite(&c4(), &[0, 0, 0], &[0, 1, 0], &FiniteOptions::default());
        assert_eq!(v, Verdict::Proved(Evidence::Rows(vec![vec![0, 0, 0], vec![0, 1, 0]])));
        let c3 = Space::Finite(cycle(3));
        let v = homotopic_finite(&c3, &[0, 1, 2, 0], &[0, 0, 0, 0], &FiniteOptions { padding: 2, ..Default::default() });
        assert!(v.is_proved());
        let v = homotopic_finite(&c4(), &[0, 1, 2, 3, 0], &[0, 0, 0, 0, 0], &FiniteOptions::default());
        assert!(v.is_refuted());
    }

    #[test]
    fn ray_verdicts() {
        let line = Space::IntLine(Scale::Inf);
        let v = rays_equivalent(&line, &Tail::affine(1, 0, vec![0]), &Tail::affine(2, 0, vec![0]), 8);
        assert!(v.is_refuted());
        let v = rays_equivalent(&c4(), &Tail::Const(0), &Tail::Const(2), 8);
        assert!(v.is_proved());
        let k3 = Space::Finite(complete(3));
        let v = rays_equivalent(&k3, &Tail::periodic(vec![0, 1, 2]), &Tail::Const(1), 8);
        let Verdict::Proved(Evidence::Ray(cert)) = v else { panic!("{v:?}") };
        assert!(check_ray_cert(&k3, &Tail::periodic(vec![0, 1, 2]), &Tail::Const(1), &cert));
    }

    #[test]
    fn dmoves_replay() {
        let s = Arc::new(c4());
        let f = ZMap::from_path(s.clone(), 0, &[0, 0, 0]).unwrap();
        let g = ZMap::from_path(s, 0, &[0, 1, 0]).unwrap();
        let moves = homotopy_to_dmoves(&f, &g, 0, &[vec![0, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(moves, vec![PointMove::Add { at: 1, value: 1 }, PointMove::Delete { at: 2 }]);
        assert_eq!(replay_moves(&f, &moves).unwrap(), g);
        assert_eq!(homotopy_to_dmoves(&f, &f, 0, &[]).unwrap(), vec![]);
        assert!(homotopy_to_dmoves(&f, &g, 0, &[vec![0, 0, 0], vec![0, 2, 0]]).is_err());
    }

    #[test]
    fn simd_shift() {
        let s = Arc::new(c4());
        let e1 = ZMap::new(s, 0, vec![0, 1, 2, 3], Tail::Const(0), Tail::Const(0)).unwrap();
        let v = simd_equiv(&e1, &e1.shift(1), 8).unwrap();
        let Verdict::Proved(Evidence::Moves(m)) = v else { panic!("{v:?}") };
        assert_eq!(replay_moves(&e1, &m).unwrap(), e1.shift(1));
    }
}
