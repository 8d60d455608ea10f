//! Strings of maps, their rewrite moves and the equivalence prover.
//!
//! A string `(f_1, …, f_n)` from object `O_L` to object `O_R` carries one
//! junction certificate per adjacent pair, objects included. Map positions
//! in moves are 1-based.

use crate::error::{Error, Result};
use crate::homotopy::{homotopy_to_dmoves, object_equal, path_candidates, rays_equivalent, Evidence, Verdict};
use crate::space::Space;
use crate::splitting::LineRegion;
use crate::tail::{lcm, tails_step_ok, Tail};
use crate::zmap::{PointMove, ZMap};
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

/// `R(z) ≃ L(align − z)` for the right tail `R` of one map and the left
/// tail `L` of the next. `rows` runs from `R` to `z ↦ L(align − z)` and is
/// empty when the two are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Junction {
    pub align: i64,
    pub rows: Vec<Tail>,
}

impl Junction {
    pub fn exact(align: i64) -> Junction {
        Junction { align, rows: vec![] }
    }

    pub fn is_exact(&self) -> bool {
        self.rows.is_empty()
    }

    /// The map after the junction had its left tail moved by `k`.
    fn after_moved(&self, k: i64) -> Junction {
        Junction { align: self.align + k, rows: self.rows.clone() }
    }

    /// The map before the junction had its right tail moved by `k`.
    fn before_moved(&self, k: i64) -> Junction {
        Junction { align: self.align + k, rows: shift_rows(&self.rows, k) }
    }

    /// The same junction read from the other side, after both maps are reversed.
    fn mirrored(&self) -> Junction {
        let mut rows = shift_rows(&self.rows, -self.align);
        rows.reverse();
        Junction { align: -self.align, rows }
    }
}

fn shift_rows(rows: &[Tail], k: i64) -> Vec<Tail> {
    rows.iter().map(|t| t.shift(k)).collect()
}

fn concat_rows(a: Vec<Tail>, b: Vec<Tail>) -> Vec<Tail> {
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    debug_assert_eq!(a.last(), b.first());
    let mut out = a;
    out.extend(b.into_iter().skip(1));
    if out.len() == 1 {
        out.clear();
    }
    out
}

/// `z ↦ l(align − z)`.
pub fn junction_target(l: &Tail, align: i64) -> Tail {
    l.reverse().shift(align)
}

pub fn check_junction(space: &Space, r: &Tail, l: &Tail, j: &Junction) -> bool {
    let target = junction_target(l, j.align);
    if j.rows.is_empty() {
        return *r == target;
    }
    j.rows[0] == *r
        && *j.rows.last().unwrap() == target
        && j.rows.iter().all(|t| t.step_violation(space).is_none())
        && j.rows.windows(2).all(|w| tails_step_ok(space, &w[0], &w[1]))
}

pub fn prove_junction(space: &Space, r: &Tail, l: &Tail, bound: usize) -> Verdict {
    rays_equivalent(space, r, &l.reverse(), bound)
}

fn junction_from(space: &Space, r: &Tail, l: &Tail, bound: usize) -> Option<Junction> {
    match prove_junction(space, r, l, bound) {
        Verdict::Proved(Evidence::Ray(c)) => Some(Junction { align: -c.shift, rows: c.rows }),
        _ => None,
    }
}

/// Symmetric map whose right tail is `t`.
pub fn object_with_right_tail(space: Arc<Space>, t: &Tail) -> Result<ZMap> {
    ZMap::new(space, 0, vec![], t.reverse(), t.clone())
}

/// `k` with `f = g.shift(k)`, if any.
pub fn find_shift(f: &ZMap, g: &ZMap) -> Option<i64> {
    if f.space() != g.space() || f.values().len() != g.values().len() {
        return None;
    }
    let pure = f.values().is_empty() && f.left() == f.right();
    if !pure {
        let k = f.lo() - g.lo();
        return (g.shift(k) == *f).then_some(k);
    }
    if !(g.values().is_empty() && g.left() == g.right()) {
        return None;
    }
    let (d, _) = f.right().align(g.right())?;
    // f(z) = g(z + d) means f = g.shift(−d).
    (g.shift(-d) == *f).then_some(-d)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StringOfMaps {
    maps: Vec<ZMap>,
    left: ZMap,
    right: ZMap,
    junctions: Vec<Junction>,
}

/// One rewrite move. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    /// Delete the opposite pair at `at`, `at + 1`.
    Dop { at: usize },
    /// Insert `(map, reverse(map).shift(shift))` after position `after`
    /// (0 inserts at the front).
    InsertOpposite { after: usize, map: ZMap, shift: i64 },
    Merge { at: usize, point: i64 },
    Split { at: usize, point: i64 },
    Point { map: usize, mv: PointMove },
    Shift { map: usize, by: i64 },
    Cut { at: usize },
    /// Inverse of a cut: replace position `at` by the pair.
    Uncut { at: usize, first: ZMap, second: ZMap },
    /// Rel-endpoint homotopy of the window `[lo, lo + len)` of one map.
    Hstep { map: usize, lo: i64, rows: Vec<Vec<i64>> },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Dop { at } => write!(f, "d_op({at})"),
            Step::InsertOpposite { after, shift, .. } => write!(f, "d_op^-1(after {after}, shift {shift})"),
            Step::Merge { at, point } => write!(f, "m({at},{point})"),
            Step::Split { at, point } => write!(f, "m^-1({at},{point})"),
            Step::Point { map, mv } => write!(f, "{mv}@{map}"),
            Step::Shift { map, by } => write!(f, "shift({map},{by})"),
            Step::Cut { at } => write!(f, "cut({at})"),
            Step::Uncut { at, .. } => write!(f, "cut^-1({at})"),
            Step::Hstep { map, rows, .. } => write!(f, "hstep@{map}[{} rows]", rows.len()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn replay(&self, start: &StringOfMaps) -> Result<StringOfMaps> {
        self.steps.iter().try_fold(start.clone(), |s, step| s.apply(step))
    }
}

/// Bound on ray-homotopy search while building strings.
pub const JUNCTION_BOUND: usize = 64;

impl StringOfMaps {
    /// A string with objects read off the outer tails.
    pub fn new(maps: Vec<ZMap>) -> Result<StringOfMaps> {
        let first = maps.first().ok_or(Error::Precondition("a string needs at least one map".into()))?;
        let space = first.space_arc().clone();
        let left = object_with_right_tail(space.clone(), &first.left().reverse())?;
        let right = object_with_right_tail(space, maps.last().unwrap().right())?;
        StringOfMaps::with_objects(maps, left, right, JUNCTION_BOUND)
    }

    pub fn with_objects(maps: Vec<ZMap>, left: ZMap, right: ZMap, bound: usize) -> Result<StringOfMaps> {
        if maps.is_empty() {
            return Err(Error::Precondition("a string needs at least one map".into()));
        }
        for m in maps.iter().chain([&left, &right]) {
            m.same_space(&maps[0])?;
        }
        if !left.is_symmetric() || !right.is_symmetric() {
            return Err(Error::Precondition("objects must be symmetric maps".into()));
        }
        let space = maps[0].space();
        let mut junctions = Vec::with_capacity(maps.len() + 1);
        let chain: Vec<&ZMap> = std::iter::once(&left).chain(maps.iter()).chain([&right]).collect();
        for (k, w) in chain.windows(2).enumerate() {
            let j = junction_from(space, w[0].right(), w[1].left(), bound).ok_or(Error::JunctionUnverified(k))?;
            junctions.push(j);
        }
        Ok(StringOfMaps { maps, left, right, junctions })
    }

    /// `(O)` at the object `O`.
    pub fn identity(object: &ZMap) -> Result<StringOfMaps> {
        StringOfMaps::with_objects(vec![object.clone()], object.clone(), object.clone(), JUNCTION_BOUND)
    }

    pub fn maps(&self) -> &[ZMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn left_object(&self) -> &ZMap {
        &self.left
    }

    pub fn right_object(&self) -> &ZMap {
        &self.right
    }

    pub fn junctions(&self) -> &[Junction] {
        &self.junctions
    }

    pub fn space(&self) -> &Space {
        self.maps[0].space()
    }

    fn space_arc(&self) -> Arc<Space> {
        self.maps[0].space_arc().clone()
    }

    /// The map at chain position `k`, where 0 and `n + 1` are the objects.
    fn chain_map(&self, k: usize) -> &ZMap {
        if k == 0 {
            &self.left
        } else if k == self.maps.len() + 1 {
            &self.right
        } else {
            &self.maps[k - 1]
        }
    }

    /// Re-checks every stored junction certificate.
    pub fn validate(&self) -> Result<()> {
        if self.junctions.len() != self.maps.len() + 1 {
            return Err(Error::CertificateInvalid("junction count".into()));
        }
        for (k, j) in self.junctions.iter().enumerate() {
            let (a, b) = (self.chain_map(k), self.chain_map(k + 1));
            if !check_junction(self.space(), a.right(), b.left(), j) {
                return Err(Error::JunctionUnverified(k));
            }
        }
        Ok(())
    }

    pub fn same_maps(&self, other: &StringOfMaps) -> bool {
        self.maps == other.maps
    }

    /// Concatenation; the middle junction is composed from the two outer
    /// certificates and a proof that the objects agree.
    pub fn star(&self, other: &StringOfMaps) -> Result<StringOfMaps> {
        self.maps[0].same_space(&other.maps[0])?;
        let space = self.space();
        let (rf, rg) = (self.right.right(), other.left.right());
        let obj = match rays_equivalent(space, rf, rg, JUNCTION_BOUND) {
            Verdict::Proved(Evidence::Ray(c)) => c,
            _ => return Err(Error::ObjectsNotComposable),
        };
        let j1 = self.junctions.last().unwrap();
        let j2 = &other.junctions[0];
        let a1 = j1.align;
        let rows = concat_rows(
            concat_rows(j1.rows.clone(), shift_rows(&obj.rows, a1)),
            shift_rows(&j2.rows, a1 - obj.shift),
        );
        let middle = Junction { align: a1 + j2.align - obj.shift, rows };
        let mut maps = self.maps.clone();
        maps.extend(other.maps.iter().cloned());
        let mut junctions = self.junctions[..self.junctions.len() - 1].to_vec();
        junctions.push(middle);
        junctions.extend(other.junctions[1..].iter().cloned());
        let s = StringOfMaps { maps, left: self.left.clone(), right: other.right.clone(), junctions };
        debug_assert!(s.validate().is_ok());
        Ok(s)
    }

    pub fn reverse(&self) -> StringOfMaps {
        let maps = self.maps.iter().rev().map(|m| m.reverse()).collect();
        let junctions = self.junctions.iter().rev().map(|j| j.mirrored()).collect();
        StringOfMaps { maps, left: self.right.reverse(), right: self.left.reverse(), junctions }
    }

    fn check_pos(&self, at: usize, width: usize) -> Result<usize> {
        if at == 0 || at + width - 1 > self.maps.len() {
            return Err(Error::IndexOutOfRange(at));
        }
        Ok(at - 1)
    }

    /// Replaces the map at 0-based `i` by `g`, whose left and right tails
    /// are those of the old map moved by `kl` and `kr`.
    fn replace_map(&self, i: usize, g: ZMap, kl: i64, kr: i64) -> StringOfMaps {
        let mut s = self.clone();
        s.maps[i] = g;
        s.junctions[i] = self.junctions[i].after_moved(kl);
        s.junctions[i + 1] = self.junctions[i + 1].before_moved(kr);
        s
    }

    pub fn apply_dop(&self, at: usize) -> Result<StringOfMaps> {
        let i = self.check_pos(at, 2)?;
        if self.maps.len() < 3 {
            return Err(Error::Precondition("deleting an opposite pair needs at least three maps".into()));
        }
        let (f, g) = (&self.maps[i], &self.maps[i + 1]);
        // f = reverse(g).shift(k), so f(z) = reverse(g)(z + n) with n = −k.
        let k = find_shift(f, &g.reverse()).ok_or(Error::NotOpposite(at, at + 1))?;
        let n = -k;
        let j1 = &self.junctions[i];
        let j3 = &self.junctions[i + 2];
        let shift = j1.align + n;
        let joined = Junction { align: j1.align + j3.align + n, rows: concat_rows(j1.rows.clone(), shift_rows(&j3.rows, shift)) };
        let mut s = self.clone();
        s.maps.drain(i..i + 2);
        s.junctions.splice(i..i + 3, [joined]);
        debug_assert!(s.validate().is_ok(), "{:?}", s.validate());
        Ok(s)
    }

    /// Inserts `(h, reverse(h).shift(k))` after position `after`.
    pub fn insert_opposite(&self, after: usize, h: &ZMap, k: i64) -> Result<StringOfMaps> {
        if after > self.maps.len() {
            return Err(Error::IndexOutOfRange(after));
        }
        h.same_space(&self.maps[0])?;
        let hbar = h.reverse().shift(k);
        let space = self.space();
        let (prev, next) = (self.chain_map(after), self.chain_map(after + 1));
        let ja = junction_from(space, prev.right(), h.left(), JUNCTION_BOUND).ok_or(Error::JunctionUnverified(after))?;
        let jb = junction_from(space, h.right(), hbar.left(), JUNCTION_BOUND).ok_or(Error::JunctionUnverified(after + 1))?;
        let jc = junction_from(space, hbar.right(), next.left(), JUNCTION_BOUND).ok_or(Error::JunctionUnverified(after + 2))?;
        let mut s = self.clone();
        s.maps.splice(after..after, [h.clone(), hbar]);
        s.junctions.splice(after..after + 1, [ja, jb, jc]);
        Ok(s)
    }

    /// Merge window `[N, M]` of the constant junction after position `at`.
    pub fn merge_window(&self, at: usize) -> Result<(Option<i64>, Option<i64>)> {
        let i = self.check_pos(at, 2)?;
        let (f, g) = (&self.maps[i], &self.maps[i + 1]);
        let x0 = match (f.right(), g.left()) {
            (Tail::Const(a), Tail::Const(b)) if a == b => *a,
            _ => return Err(Error::NonConstantJunction(at)),
        };
        let n = if f.constant_value() == Some(x0) { None } else { Some(last_not(f, x0) + 1) };
        let m = if g.constant_value() == Some(x0) { None } else { Some(first_not(g, x0) - 1) };
        Ok((n, m))
    }

    pub fn apply_merge(&self, at: usize, j: i64) -> Result<StringOfMaps> {
        let (n, m) = self.merge_window(at)?;
        if n.is_some_and(|n| j < n) || m.is_some_and(|m| j > m) || matches!((n, m), (Some(n), Some(m)) if n > m) {
            return Err(Error::EmptyMergeWindow(n.unwrap_or(i64::MIN), m.unwrap_or(i64::MAX)));
        }
        let i = at - 1;
        let (f, h) = (&self.maps[i], &self.maps[i + 1]);
        let g = ZMap::from_fn(
            self.space_arc(),
            f.lo().min(j),
            h.hi().max(j + 1),
            |z| if z <= j { f.eval(z) } else { h.eval(z) },
            f.left().clone(),
            h.right().clone(),
        )?;
        g.check_guards(j)?;
        let mut s = self.clone();
        s.maps.splice(i..i + 2, [g]);
        s.junctions.remove(i + 1);
        debug_assert!(s.validate().is_ok());
        Ok(s)
    }

    /// Inverse of a merge: cuts the map at `at` after `j`, where it must
    /// take a value `x0` that then fills both new tails.
    pub fn split(&self, at: usize, j: i64) -> Result<StringOfMaps> {
        let i = self.check_pos(at, 1)?;
        let g = &self.maps[i];
        g.check_guards(j)?;
        let first = g.truncate_right_of(j);
        let second = g.truncate_left_of(j);
        let x0 = g.eval(j);
        let mut s = self.clone();
        s.maps.splice(i..i + 1, [first, second]);
        s.junctions.insert(i + 1, Junction::exact(0));
        debug_assert!(matches!(s.maps[i].right(), Tail::Const(v) if *v == x0));
        debug_assert!(s.validate().is_ok());
        Ok(s)
    }

    pub fn apply_point(&self, map: usize, mv: &PointMove) -> Result<StringOfMaps> {
        let i = self.check_pos(map, 1)?;
        let g = mv.apply(&self.maps[i])?;
        let k = match mv {
            PointMove::Add { .. } => 1,
            PointMove::Delete { .. } => -1,
        };
        Ok(self.replace_map(i, g, 0, k))
    }

    pub fn apply_shift(&self, map: usize, by: i64) -> Result<StringOfMaps> {
        let i = self.check_pos(map, 1)?;
        let g = self.maps[i].shift(by);
        Ok(self.replace_map(i, g, by, by))
    }

    pub fn apply_hstep(&self, map: usize, lo: i64, rows: &[Vec<i64>]) -> Result<StringOfMaps> {
        let i = self.check_pos(map, 1)?;
        let f = &self.maps[i];
        let last = rows.last().ok_or(Error::CertificateInvalid("no rows".into()))?;
        let hi = lo + last.len() as i64 - 1;
        let g = ZMap::from_fn(
            self.space_arc(),
            f.lo().min(lo),
            f.hi().max(hi),
            |z| if (lo..=hi).contains(&z) { last[(z - lo) as usize] } else { f.eval(z) },
            f.left().clone(),
            f.right().clone(),
        )?;
        homotopy_to_dmoves(f, &g, lo, rows)?;
        Ok(self.replace_map(i, g, 0, 0))
    }

    /// Splices two maps whose facing tails are exactly equal, cancelling as
    /// much of the facing windows as possible.
    pub fn cut_equal_tails(&self, at: usize) -> Result<StringOfMaps> {
        let i = self.check_pos(at, 2)?;
        let (f, h) = (&self.maps[i], &self.maps[i + 1]);
        let (p, c) = cut_point(f, h).ok_or(Error::TailsNotEqual(at, at + 1))?;
        let q = c - p;
        // g(z) = f(z + p) for z ≤ 0 and h(z + q) for z > 0.
        let g = ZMap::from_fn(
            self.space_arc(),
            (f.lo() - p).min(0),
            (h.hi() - q).max(1),
            |z| if z <= 0 { f.eval(z + p) } else { h.eval(z + q) },
            f.left().shift(-p),
            h.right().shift(-q),
        )?;
        let mut s = self.clone();
        let jl = self.junctions[i].after_moved(-p);
        let jr = self.junctions[i + 2].before_moved(-q);
        s.maps.splice(i..i + 2, [g]);
        s.junctions.splice(i..i + 3, [jl, jr]);
        debug_assert!(s.validate().is_ok(), "{:?}", s.validate());
        Ok(s)
    }

    pub fn apply(&self, step: &Step) -> Result<StringOfMaps> {
        match step {
            Step::Dop { at } => self.apply_dop(*at),
            Step::InsertOpposite { after, map, shift } => self.insert_opposite(*after, map, *shift),
            Step::Merge { at, point } => self.apply_merge(*at, *point),
            Step::Split { at, point } => self.split(*at, *point),
            Step::Point { map, mv } => self.apply_point(*map, mv),
            Step::Shift { map, by } => self.apply_shift(*map, *by),
            Step::Cut { at } => self.cut_equal_tails(*at),
            Step::Uncut { at, first, second } => {
                let i = self.check_pos(*at, 1)?;
                let mut pair = self.clone();
                pair.maps.splice(i..i + 1, [first.clone(), second.clone()]);
                let space = self.space();
                let (prev, next) = (self.chain_map(i), self.chain_map(i + 2));
                let ja = junction_from(space, prev.right(), first.left(), JUNCTION_BOUND);
                let jb = junction_from(space, first.right(), second.left(), JUNCTION_BOUND);
                let jc = junction_from(space, second.right(), next.left(), JUNCTION_BOUND);
                let (Some(ja), Some(jb), Some(jc)) = (ja, jb, jc) else {
                    return Err(Error::MoveInapplicable("uncut pair does not form a string".into()));
                };
                pair.junctions.splice(i..i + 1, [ja, jb, jc]);
                let back = pair.cut_equal_tails(*at)?;
                if back.maps[i] != self.maps[i] {
                    return Err(Error::MoveInapplicable("uncut pair does not cut back to the map".into()));
                }
                Ok(pair)
            }
            Step::Hstep { map, lo, rows } => self.apply_hstep(*map, *lo, rows),
        }
    }

    /// The step undoing `step`, read against the string it was applied to.
    pub fn inverse_step(&self, step: &Step) -> Result<Step> {
        Ok(match step {
            Step::Dop { at } => {
                let i = at - 1;
                let f = &self.maps[i];
                let k = find_shift(&self.maps[i + 1], &f.reverse()).ok_or(Error::NotOpposite(*at, at + 1))?;
                Step::InsertOpposite { after: i, map: f.clone(), shift: k }
            }
            Step::InsertOpposite { after, .. } => Step::Dop { at: after + 1 },
            Step::Merge { at, point } => Step::Split { at: *at, point: *point },
            Step::Split { at, point } => Step::Merge { at: *at, point: *point },
            Step::Point { map, mv } => {
                let f = &self.maps[map - 1];
                let inv = match mv {
                    PointMove::Add { at, .. } => PointMove::Delete { at: *at },
                    PointMove::Delete { at } => PointMove::Add { at: *at, value: f.eval(*at) },
                };
                Step::Point { map: *map, mv: inv }
            }
            Step::Shift { map, by } => Step::Shift { map: *map, by: -by },
            Step::Cut { at } => Step::Uncut { at: *at, first: self.maps[at - 1].clone(), second: self.maps[*at].clone() },
            Step::Uncut { at, .. } => Step::Cut { at: *at },
            Step::Hstep { map, lo, rows } => {
                let mut r = rows.clone();
                r.reverse();
                Step::Hstep { map: *map, lo: *lo, rows: r }
            }
        })
    }
}

fn last_not(f: &ZMap, x0: i64) -> i64 {
    (f.lo() - 1..=f.hi()).rev().find(|&z| f.eval(z) != x0).unwrap_or(f.lo() - 1)
}

fn first_not(g: &ZMap, x0: i64) -> i64 {
    (g.lo()..=g.hi() + 1).find(|&z| g.eval(z) != x0).unwrap_or(g.hi() + 1)
}

/// For maps `f`, `h` with `f(w) = h(c − w)` on a ray, the cut `(p, c)`:
/// `p` is the least point with agreement on `[p, ∞)`, minimized over the
/// alignments `c`, ties to the least `c`.
fn cut_point(f: &ZMap, h: &ZMap) -> Option<(i64, i64)> {
    let r = f.right();
    let lrev = h.left().reverse();
    let (d, period) = r.align(&lrev)?;
    // r(z) = lrev(z + d) = l(−z − d), so c ≡ −d.
    let base = -d;
    let cands: Vec<i64> = match period {
        None => vec![base],
        Some(p) => {
            let lo = f.hi() + h.lo() - p - 1;
            let hi = f.hi() + h.hi() + p + 1;
            let first = base + (lo - base).div_euclid(p) * p;
            (0..)
                .map(|k| first + k * p)
                .take_while(|&c| c <= hi)
                .filter(|&c| c >= lo)
                .collect()
        }
    };
    let span = lcm(f.left().period().max(1), h.right().period().max(1)) as i64;
    let mut best: Option<(i64, i64)> = None;
    for c in cands {
        // Above `top` both sides are inside the facing tails.
        let top = f.hi().max(c - h.lo()) + 1;
        let floor = f.lo().min(c - h.hi()) - span - 1;
        let mismatch = (floor..top).rev().find(|&w| f.eval(w) != h.eval(c - w));
        let p = match mismatch {
            Some(w) => w + 1,
            // The maps are opposite everywhere; keep the cut at the window.
            None => f.lo().min(c - h.hi()),
        };
        if best.is_none_or(|(bp, _)| p < bp) {
            best = Some((p, c));
        }
    }
    best
}

/// Result of `normalize`.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub string: StringOfMaps,
    pub trace: Trace,
}

fn least_rotation_shift(f: &ZMap) -> i64 {
    match f.right() {
        Tail::Periodic(w) => {
            let n = w.len() as i64;
            (0..n)
                .min_by_key(|&k| (0..n).map(|i| w[(i - k).rem_euclid(n) as usize]).collect::<Vec<_>>())
                .unwrap()
        }
        _ => 0,
    }
}

/// Rule order: shift each window to start at 0, delete stutters and
/// back-and-forth spikes, cancel opposite pairs, merge constant
/// junctions, cut equal non-constant tails. Repeats to a fixpoint.
pub fn normalize(s: &StringOfMaps) -> Normalized {
    let mut cur = s.clone();
    let mut trace = Trace::default();
    fn push(cur: &mut StringOfMaps, trace: &mut Trace, step: Step) -> bool {
        match cur.apply(&step) {
            Ok(next) => {
                *cur = next;
                trace.steps.push(step);
                true
            }
            Err(_) => false,
        }
    }
    'outer: loop {
        for m in 1..=cur.len() {
            let f = &cur.maps[m - 1];
            let pure = f.values().is_empty() && f.left() == f.right();
            let by = if pure { least_rotation_shift(f) } else if f.values().is_empty() { 0 } else { -f.lo() };
            if by != 0 && push(&mut cur, &mut trace, Step::Shift { map: m, by }) {
                continue 'outer;
            }
        }
        for m in 1..=cur.len() {
            let f = cur.maps[m - 1].clone();
            if f.values().is_empty() {
                continue;
            }
            for z in f.lo() - 1..=f.hi() + 1 {
                let stutter = f.eval(z) == f.eval(z + 1);
                let spike = f.eval(z - 1) == f.eval(z + 1) && f.eval(z) != f.eval(z + 1);
                if !(stutter || spike) {
                    continue;
                }
                let step = Step::Point { map: m, mv: PointMove::Delete { at: z } };
                // Deleting inside a tail only moves the window.
                match cur.apply(&step) {
                    Ok(next) if next.maps[m - 1].values().len() < f.values().len() => {
                        cur = next;
                        trace.steps.push(step);
                        continue 'outer;
                    }
                    _ => {}
                }
            }
        }
        if cur.len() >= 3 {
            for at in 1..cur.len() {
                if push(&mut cur, &mut trace, Step::Dop { at }) {
                    continue 'outer;
                }
            }
        }
        for at in 1..cur.len() {
            let Ok((n, m)) = cur.merge_window(at) else { continue };
            // Line the second map up so the window is exactly {n}; the shift
            // and the merge are taken together or not at all.
            let (pre, j) = match (n, m) {
                (Some(n), Some(m)) if n != m => (Some(Step::Shift { map: at + 1, by: n - m }), n),
                (Some(n), _) => (None, n),
                (None, Some(m)) => (None, m),
                (None, None) => (None, 0),
            };
            let merge = Step::Merge { at, point: j };
            let next = match &pre {
                Some(p) => cur.apply(p).and_then(|s| s.apply(&merge)),
                None => cur.apply(&merge),
            };
            if let Ok(next) = next {
                cur = next;
                trace.steps.extend(pre);
                trace.steps.push(merge);
                continue 'outer;
            }
        }
        for at in 1..cur.len() {
            let (f, h) = (&cur.maps[at - 1], &cur.maps[at]);
            if f.right().is_constant() && h.left().is_constant() {
                continue;
            }
            if push(&mut cur, &mut trace, Step::Cut { at }) {
                continue 'outer;
            }
        }
        break;
    }
    Normalized { string: cur, trace }
}

/// State cap for `string_equiv`.
pub const STRING_STATE_CAP: usize = 20_000;

/// Inverse of a whole trace applied from `start`.
pub fn invert_trace(start: &StringOfMaps, trace: &Trace) -> Result<Trace> {
    let mut cur = start.clone();
    let mut inv = Vec::with_capacity(trace.len());
    for step in &trace.steps {
        inv.push(cur.inverse_step(step)?);
        cur = cur.apply(step)?;
    }
    inv.reverse();
    Ok(Trace { steps: inv })
}

fn point_successors(s: &StringOfMaps, max_len: usize) -> Vec<Step> {
    let mut out = Vec::new();
    for (i, f) in s.maps.iter().enumerate() {
        let (a, b) = (f.lo() - 1, f.hi() + 2);
        for z in a..=b {
            out.push(Step::Point { map: i + 1, mv: PointMove::Delete { at: z } });
        }
        if f.values().len() < max_len {
            for z in a..=b {
                for v in path_candidates(f.space(), &[f.eval(z - 1), f.eval(z)]) {
                    out.push(Step::Point { map: i + 1, mv: PointMove::Add { at: z, value: v } });
                }
            }
        }
    }
    out
}

type Visited = HashMap<Vec<ZMap>, (StringOfMaps, Option<(Vec<ZMap>, Trace)>)>;

/// Decides `F ≃ G` by normal forms, then by a bidirectional search over
/// point moves with normalization after every move.
pub fn string_equiv(f: &StringOfMaps, g: &StringOfMaps, bound: usize) -> Result<Verdict> {
    f.maps[0].same_space(&g.maps[0])?;
    for (a, b) in [(&f.left, &g.left), (&f.right, &g.right)] {
        match object_equal(a, b, bound)? {
            Verdict::Proved(_) => {}
            Verdict::Refuted(r) => return Ok(Verdict::Refuted(format!("end objects differ: {r}"))),
            Verdict::Unknown(r) => return Ok(Verdict::Unknown(format!("end objects undecided: {r}"))),
        }
    }
    let nf = normalize(f);
    let ng = normalize(g);
    let join = |mid_f: Trace, mid_g: Trace| -> Result<Verdict> {
        let mut steps = nf.trace.steps.clone();
        steps.extend(mid_f.steps);
        let reached = Trace { steps: steps.clone() }.replay(f)?;
        // `mid_g` leads from G's normal form to the same maps.
        let g_path = Trace { steps: ng.trace.steps.iter().cloned().chain(mid_g.steps).collect() };
        steps.extend(invert_trace(g, &g_path)?.steps);
        let _ = reached;
        Ok(Verdict::Proved(Evidence::Trace(Trace { steps })))
    };
    if nf.string.same_maps(&ng.string) {
        return join(Trace::default(), Trace::default());
    }
    let max_len = nf.string.maps.iter().chain(ng.string.maps.iter()).map(|m| m.values().len()).max().unwrap_or(0) + 2;
    let key = |s: &StringOfMaps| s.maps.clone();
    let mut fwd: Visited = HashMap::from([(key(&nf.string), (nf.string.clone(), None))]);
    let mut bwd: Visited = HashMap::from([(key(&ng.string), (ng.string.clone(), None))]);
    let mut fq = VecDeque::from([key(&nf.string)]);
    let mut bq = VecDeque::from([key(&ng.string)]);
    let path_to = |side: &Visited, mut k: Vec<ZMap>| -> Trace {
        let mut parts = Vec::new();
        while let Some((_, Some((prev, t)))) = side.get(&k) {
            parts.push(t.clone());
            k = prev.clone();
        }
        parts.reverse();
        Trace { steps: parts.into_iter().flat_map(|t| t.steps).collect() }
    };
    for _ in 0..bound {
        if fq.is_empty() && bq.is_empty() {
            break;
        }
        let forward = (fq.len() <= bq.len() && !fq.is_empty()) || bq.is_empty();
        let (queue, this, other) = if forward { (&mut fq, &mut fwd, &bwd) } else { (&mut bq, &mut bwd, &fwd) };
        let layer: Vec<Vec<ZMap>> = queue.drain(..).collect();
        for k in layer {
            let s = this[&k].0.clone();
            for step in point_successors(&s, max_len) {
                let Ok(next) = s.apply(&step) else { continue };
                let n = normalize(&next);
                let nk = key(&n.string);
                if this.contains_key(&nk) {
                    continue;
                }
                let mut t = Trace { steps: vec![step] };
                t.steps.extend(n.trace.steps);
                this.insert(nk.clone(), (n.string.clone(), Some((k.clone(), t))));
                if other.contains_key(&nk) {
                    let (fw, bw) = if forward { (&*this, other) } else { (other, &*this) };
                    let (tf, tg) = (path_to(fw, nk.clone()), path_to(bw, nk));
                    return join(tf, tg);
                }
                if this.len() + other.len() > STRING_STATE_CAP {
                    return Ok(Verdict::Unknown(format!("state cap {STRING_STATE_CAP} reached")));
                }
                queue.push_back(nk);
            }
        }
    }
    Ok(Verdict::Unknown(format!("no rewrite sequence within bound {bound}")))
}

/// A set that tails may be required to live in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    Vertices(Vec<bool>),
    Line(LineRegion),
}

fn tail_in(t: &Tail, region: &Region) -> Result<bool> {
    match region {
        Region::Vertices(mask) => Ok(match t.image() {
            Some(img) => img.iter().all(|&v| v >= 0 && mask.get(v as usize).copied().unwrap_or(false)),
            None => false,
        }),
        Region::Line(r) => match r {
            LineRegion::AtLeast(p) => Ok(tail_bounded(t, *p, true)),
            LineRegion::AtMost(q) => Ok(tail_bounded(t, *q, false)),
            other => Err(Error::UnsupportedRegion(format!("{other:?}"))),
        },
    }
}

/// Whether a tail, as it heads to its own end, stays on one side of `b`.
/// Left tails are passed reversed, so both head to `+∞`.
fn tail_bounded(t: &Tail, b: i64, above: bool) -> bool {
    let s = t.slope();
    if (above && s < 0) || (!above && s > 0) {
        return false;
    }
    // Eventually the tail is monotone past `b` or periodic; check one period
    // far out, where the ray actually lives.
    let p = t.period() as i64;
    let far = if s == 0 { 0 } else { (b.abs() + 1) * p };
    (far..far + p).all(|z| if above { t.eval(z) >= b } else { t.eval(z) <= b })
}

/// Every tail of every map lies inside one member of the family.
pub fn tails_controlled(s: &StringOfMaps, family: &[Region]) -> Result<bool> {
    for f in s.maps() {
        for t in [f.left().reverse(), f.right().clone()] {
            let mut inside = false;
            for r in family {
                if tail_in(&t, r)? {
                    inside = true;
                    break;
                }
            }
            if !inside {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The based loop as a 1-string at the constant object.
pub fn pi1_embedding(space: Arc<Space>, base: i64, path: &[i64]) -> Result<StringOfMaps> {
    if path.first() != Some(&base) || path.last() != Some(&base) {
        return Err(Error::Precondition("loop must start and end at the basepoint".into()));
    }
    let f = ZMap::from_path(space.clone(), 0, path)?;
    let o = ZMap::constant(space, base)?;
    StringOfMaps::with_objects(vec![f], o.clone(), o, JUNCTION_BOUND)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeResult {
    pub incoming: usize,
    pub outgoing: usize,
    pub cuttable: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminableReport {
    pub probes: Vec<ProbeResult>,
    pub all_cuttable: bool,
}

/// For every pair of an incoming string `F` and an outgoing string `G` at
/// the object, whether `F ⋆ G` can be cut exactly at the joint.
pub fn eliminable_check(object: &ZMap, incoming: &[StringOfMaps], outgoing: &[StringOfMaps]) -> EliminableReport {
    let mut probes = Vec::new();
    for (a, f) in incoming.iter().enumerate() {
        for (b, g) in outgoing.iter().enumerate() {
            let checked = (|| -> Result<()> {
                let ends = object_equal(f.right_object(), object, JUNCTION_BOUND)?;
                let starts = object_equal(g.left_object(), object, JUNCTION_BOUND)?;
                if !ends.is_proved() || !starts.is_proved() {
                    return Err(Error::ObjectsNotComposable);
                }
                let fg = f.star(g)?;
                fg.cut_equal_tails(f.len()).map(|_| ())
            })();
            probes.push(ProbeResult {
                incoming: a,
                outgoing: b,
                cuttable: checked.is_ok(),
                reason: checked.err().map(|e| e.to_string()),
            });
        }
    }
    let all_cuttable = probes.iter().all(|p| p.cuttable);
    EliminableReport { probes, all_cuttable }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::graphs::{cycle, path};
    use crate::space::Scale;

    fn c4() -> Arc<Space> {
        Arc::new(Space::Finite(cycle(4)))
    }

    fn e1() -> ZMap {
        ZMap::new(c4(), 0, vec![0, 1, 2, 3], Tail::Const(0), Tail::Const(0)).unwrap()
    }

    #[test]
    fn three_turns_merge_in_either_order() {
        let s = StringOfMaps::new(vec![e1(), e1().shift(4), e1().shift(8)]).unwrap();
        let a = s.apply_merge(1, 4).unwrap().apply_merge(1, 8).unwrap();
        let b = s.apply_merge(2, 8).unwrap().apply_merge(1, 4).unwrap();
        assert_eq!(a.maps(), b.maps());
        assert_eq!(a.maps()[0].values(), &[1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3]);
        let twice = StringOfMaps::new(vec![e1(), e1()]).unwrap();
        assert_eq!(twice.apply_merge(1, 2).unwrap_err(), Error::EmptyMergeWindow(4, 0));
    }

    #[test]
    fn disconnected_junction_is_refused() {
        let two = Arc::new(Space::Finite(crate::space::disjoint_union(&[path(2), path(2)])));
        let f = ZMap::constant(two.clone(), 0).unwrap();
        let g = ZMap::constant(two, 2).unwrap();
        assert_eq!(StringOfMaps::new(vec![f, g]).unwrap_err(), Error::JunctionUnverified(1));
    }

    #[test]
    fn star_reverse_and_dop() {
        let f = StringOfMaps::new(vec![e1(), e1().shift(4)]).unwrap();
        let r = f.reverse();
        r.validate().unwrap();
        assert_eq!(r.reverse().maps(), f.maps());
        let fr = f.star(&r).unwrap();
        fr.validate().unwrap();
        let d = fr.apply_dop(2).unwrap();
        assert_eq!(d.len(), 2);
        assert!(matches!(f.apply_dop(1), Err(Error::Precondition(_))));
        let three = StringOfMaps::new(vec![e1(), e1().shift(4), e1()]).unwrap();
        assert_eq!(three.apply_dop(1).unwrap_err(), Error::NotOpposite(1, 2));
    }

    #[test]
    fn normal_form_of_loop_and_inverse() {
        let f = StringOfMaps::new(vec![e1(), e1().shift(4)]).unwrap();
        let n = normalize(&f.star(&f.reverse()).unwrap());
        assert_eq!(n.string.maps(), &[ZMap::constant(c4(), 0).unwrap()]);
        assert_eq!(n.trace.replay(&f.star(&f.reverse()).unwrap()).unwrap().maps(), n.string.maps());
        let again = normalize(&n.string);
        assert!(again.trace.is_empty());
    }

    #[test]
    fn equivalence_with_trace() {
        let s = StringOfMaps::new(vec![e1(), e1().shift(4), e1().shift(8)]).unwrap();
        let e3 = StringOfMaps::new(vec![s.apply_merge(1, 4).unwrap().apply_merge(1, 8).unwrap().maps()[0].clone()]).unwrap();
        let v = string_equiv(&e3, &s, 64).unwrap();
        let Verdict::Proved(Evidence::Trace(t)) = v else { panic!("{v:?}") };
        assert!(t.replay(&e3).unwrap().same_maps(&s));
    }

    #[test]
    fn cut_on_the_line() {
        let line = Arc::new(Space::IntLine(Scale::Inf));
        let abs = ZMap::new(line.clone(), 0, vec![], Tail::affine(-1, 0, vec![0]), Tail::affine(1, 0, vec![0])).unwrap();
        let s = StringOfMaps::new(vec![abs.clone(), abs.reverse().shift(3)]).unwrap();
        let cut = s.cut_equal_tails(1).unwrap();
        assert_eq!(cut.len(), 1);
        let jiggle = ZMap::new(line, 0, vec![], Tail::affine(-1, 0, vec![-1, 0]), Tail::affine(1, 0, vec![-1, 0])).unwrap();
        let t = StringOfMaps::new(vec![abs, jiggle]).unwrap();
        assert_eq!(t.cut_equal_tails(1).unwrap_err(), Error::TailsNotEqual(1, 2));
    }
}
