//! Bornologous maps `ℤ → X` with an explicit finite window and symbolic tails.

use crate::error::{Error, Result};
use crate::space::{Scale, Space};
use crate::tail::{lcm, periodic_null_homotopy, RowSearch, Tail};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// State cap for the null-homotopy search behind the periodicity guards.
pub const GUARD_SEARCH_CAP: usize = 20_000;

/// `f(z) = left(z)` below the window, `values[z − lo]` on it and `right(z)`
/// above it. Always stored in canonical form: the window cannot shrink, and
/// an empty window sits at the least valid boundary (0 when both tails are
/// the same function).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZMap {
    space: Arc<Space>,
    lo: i64,
    values: Vec<i64>,
    left: Tail,
    right: Tail,
}

/// One add/delete point move.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum PointMove {
    Add { at: i64, value: i64 },
    Delete { at: i64 },
}

impl PointMove {
    pub fn apply(&self, f: &ZMap) -> Result<ZMap> {
        match *self {
            PointMove::Add { at, value } => f.add_point(at, value),
            PointMove::Delete { at } => f.delete_point(at),
        }
    }
}

impl fmt::Display for PointMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointMove::Add { at, value } => write!(f, "a({at},{value})"),
            PointMove::Delete { at } => write!(f, "d({at})"),
        }
    }
}

fn check_tail(space: &Space, t: &Tail) -> Result<()> {
    match (space, t) {
        (Space::Finite(_), Tail::Affine { .. }) => return Err(Error::IllegalTailKind("affine".into())),
        (Space::Finite(f), _) => {
            for v in t.image().unwrap() {
                if v < 0 || v as usize >= f.len() {
                    return Err(Error::UnknownVertex(v.to_string()));
                }
            }
        }
        _ => {}
    }
    if let Some((a, b)) = t.step_violation(space) {
        return Err(Error::NotBornologous(space.show(a), space.show(b)));
    }
    Ok(())
}

impl ZMap {
    pub fn new(space: Arc<Space>, lo: i64, values: Vec<i64>, left: Tail, right: Tail) -> Result<ZMap> {
        check_tail(&space, &left)?;
        check_tail(&space, &right)?;
        for &v in &values {
            if !space.contains(v) {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        let mut f = ZMap { space, lo, values, left, right };
        f.canonicalize();
        f.check_steps()?;
        Ok(f)
    }

    pub fn constant(space: Arc<Space>, v: i64) -> Result<ZMap> {
        ZMap::new(space, 0, vec![], Tail::Const(v), Tail::Const(v))
    }

    /// A finite path `p` on `[lo, lo + len)`, extended by its end values.
    pub fn from_path(space: Arc<Space>, lo: i64, path: &[i64]) -> Result<ZMap> {
        let (first, last) = (*path.first().ok_or(Error::Precondition("empty path".into()))?, *path.last().unwrap());
        ZMap::new(space, lo, path.to_vec(), Tail::Const(first), Tail::Const(last))
    }

    /// Window `[a, b]` filled from `value`; `left` applies below `a` and
    /// `right` above `b`.
    pub fn from_fn(
        space: Arc<Space>,
        a: i64,
        b: i64,
        value: impl Fn(i64) -> i64,
        left: Tail,
        right: Tail,
    ) -> Result<ZMap> {
        let values = if b >= a { (a..=b).map(value).collect() } else { vec![] };
        ZMap::new(space, a, values, left, right)
    }

    fn canonicalize(&mut self) {
        let mut start = 0;
        while start < self.values.len() && self.values[start] == self.left.eval(self.lo + start as i64) {
            start += 1;
        }
        self.values.drain(..start);
        self.lo += start as i64;
        while let Some(&v) = self.values.last() {
            if v == self.right.eval(self.lo + self.values.len() as i64 - 1) {
                self.values.pop();
            } else {
                break;
            }
        }
        if self.values.is_empty() {
            if self.left == self.right {
                self.lo = 0;
            } else {
                let cap = lcm(self.left.period(), self.right.period()) as i64 + 2;
                let mut moved = 0;
                while moved < cap && self.left.eval(self.lo - 1) == self.right.eval(self.lo - 1) {
                    self.lo -= 1;
                    moved += 1;
                }
            }
        }
    }

    fn check_steps(&self) -> Result<()> {
        if matches!(*self.space, Space::IntLine(Scale::Inf)) {
            return Ok(());
        }
        for z in self.lo - 1..=self.hi() {
            let (a, b) = (self.eval(z), self.eval(z + 1));
            if !self.space.controlled(a, b) {
                return Err(Error::NotBornologous(self.space.show(a), self.space.show(b)));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Last window index; `lo − 1` for an empty window.
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn left(&self) -> &Tail {
        &self.left
    }

    pub fn right(&self) -> &Tail {
        &self.right
    }

    pub fn eval(&self, z: i64) -> i64 {
        if z < self.lo {
            self.left.eval(z)
        } else if z > self.hi() {
            self.right.eval(z)
        } else {
            self.values[(z - self.lo) as usize]
        }
    }

    pub fn same_space(&self, other: &ZMap) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn constant_value(&self) -> Option<i64> {
        match (&self.left, &self.right) {
            (Tail::Const(a), Tail::Const(b)) if a == b && self.values.is_empty() => Some(*a),
            _ => None,
        }
    }

    /// `z ↦ f(z − k)`.
    pub fn shift(&self, k: i64) -> ZMap {
        let mut g = ZMap {
            space: self.space.clone(),
            lo: self.lo + k,
            values: self.values.clone(),
            left: self.left.shift(k),
            right: self.right.shift(k),
        };
        g.canonicalize();
        g
    }

    /// `z ↦ f(−z)`.
    pub fn reverse(&self) -> ZMap {
        let mut values = self.values.clone();
        values.reverse();
        let mut g = ZMap {
            space: self.space.clone(),
            lo: -self.hi(),
            values,
            left: self.right.reverse(),
            right: self.left.reverse(),
        };
        g.canonicalize();
        g
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.reverse()
    }

    /// Equal to `f` on `[from, ∞)` and constant below.
    pub fn truncate_left_of(&self, from: i64) -> ZMap {
        let c = self.eval(from);
        let hi = self.hi().max(from);
        let mut g = ZMap {
            space: self.space.clone(),
            lo: from,
            values: (from..=hi).map(|z| self.eval(z)).collect(),
            left: Tail::Const(c),
            right: self.right.clone(),
        };
        g.canonicalize();
        g
    }

    /// Equal to `f` on `(−∞, to]` and constant above.
    pub fn truncate_right_of(&self, to: i64) -> ZMap {
        let c = self.eval(to);
        let lo = self.lo.min(to);
        let mut g = ZMap {
            space: self.space.clone(),
            lo,
            values: (lo..=to).map(|z| self.eval(z)).collect(),
            left: self.left.clone(),
            right: Tail::Const(c),
        };
        g.canonicalize();
        g
    }

    /// Decides `∃ N, M: f(N + k) = g(M + k)` for all `k ≥ 0`.
    pub fn eventually_equal(&self, other: &ZMap) -> Result<bool> {
        self.same_space(other)?;
        Ok(self.right.align(&other.right).is_some())
    }

    /// Last `z` with `f(z) ≠ right(z)`, if any.
    fn last_right_difference(&self) -> Option<i64> {
        if !self.values.is_empty() {
            Some(self.hi())
        } else if self.left == self.right {
            None
        } else {
            Some(self.lo - 1)
        }
    }

    /// First `z` with `f(z) ≠ left(z)`, if any.
    fn first_left_difference(&self) -> Option<i64> {
        if !self.values.is_empty() {
            return Some(self.lo);
        }
        if self.left == self.right {
            return None;
        }
        let cap = lcm(self.left.period(), self.right.period()) as i64;
        (self.lo..=self.lo + cap).find(|&z| self.left.eval(z) != self.right.eval(z))
    }

    /// Whether `f|[from, ∞)` is periodic.
    pub fn periodic_from(&self, from: i64) -> bool {
        self.right.is_periodic() && self.last_right_difference().is_none_or(|d| d < from)
    }

    /// Whether `f|(−∞, to]` is periodic.
    pub fn periodic_until(&self, to: i64) -> bool {
        self.left.is_periodic() && self.first_left_difference().is_none_or(|d| d > to)
    }

    /// Periodicity guards at `j`: a side that is periodic with margin two
    /// past `j` must be null-homotopic from `j` on.
    pub fn check_guards(&self, j: i64) -> Result<()> {
        if self.periodic_from(j - 2) && !self.null_homotopic_tail(&self.right) {
            return Err(Error::GuardUnproved(j));
        }
        if self.periodic_until(j + 2) && !self.null_homotopic_tail(&self.left) {
            return Err(Error::GuardUnproved(j));
        }
        Ok(())
    }

    fn null_homotopic_tail(&self, t: &Tail) -> bool {
        if t.is_constant() {
            return true;
        }
        if matches!(*self.space, Space::IntLine(Scale::Inf)) {
            return true;
        }
        matches!(periodic_null_homotopy(&self.space, t, GUARD_SEARCH_CAP), RowSearch::Found(_))
    }

    /// `g(z) = f(z)` below `z0` and `f(z + 1)` from `z0` on.
    pub fn delete_point(&self, z0: i64) -> Result<ZMap> {
        let a = self.lo.min(z0);
        let b = self.hi().max(z0);
        let g = ZMap::from_fn(
            self.space.clone(),
            a,
            b,
            |z| if z < z0 { self.eval(z) } else { self.eval(z + 1) },
            self.left.clone(),
            self.right.shift(-1),
        )?;
        g.check_guards(z0)?;
        Ok(g)
    }

    /// `g(z) = f(z)` below `z0`, `x0` at `z0` and `f(z − 1)` above.
    pub fn add_point(&self, z0: i64, x0: i64) -> Result<ZMap> {
        if !self.space.contains(x0) {
            return Err(Error::UnknownVertex(x0.to_string()));
        }
        self.check_guards(z0)?;
        let a = self.lo.min(z0);
        let b = self.hi().max(z0) + 1;
        ZMap::from_fn(
            self.space.clone(),
            a,
            b,
            |z| match z.cmp(&z0) {
                std::cmp::Ordering::Less => self.eval(z),
                std::cmp::Ordering::Equal => x0,
                std::cmp::Ordering::Greater => self.eval(z - 1),
            },
            self.left.clone(),
            self.right.shift(1),
        )
    }

    /// Values on `[a, b]`.
    pub fn sample(&self, a: i64, b: i64) -> Vec<i64> {
        (a..=b).map(|z| self.eval(z)).collect()
    }

    /// Distinct values, when the image is finite.
    pub fn image(&self) -> Option<Vec<i64>> {
        let mut v = self.left.image()?;
        v.extend(self.right.image()?);
        v.extend_from_slice(&self.values);
        v.sort_unstable();
        v.dedup();
        Some(v)
    }
}

impl fmt::Display for ZMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show_tail = |t: &Tail| match t {
            Tail::Const(v) => self.space.show(*v),
            Tail::Periodic(w) => format!("({})*", w.iter().map(|&v| self.space.show(v)).collect::<Vec<_>>().join(" ")),
            Tail::Affine { slope, offset, corr } => format!("{slope}z{offset:+}+{corr:?}"),
        };
        write!(f, "{} | ", show_tail(&self.left))?;
        if self.values.is_empty() {
            write!(f, "@{}", self.lo)?;
        } else {
            let vals: Vec<String> = self.values.iter().map(|&v| self.space.show(v)).collect();
            write!(f, "{}: {}", self.lo, vals.join(" "))?;
        }
        write!(f, " | {}", show_tail(&self.right))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::graphs::cycle;

    fn c4() -> Arc<Space> {
        Arc::new(Space::Finite(cycle(4)))
    }

    fn e1() -> ZMap {
        ZMap::new(c4(), 0, vec![0, 1, 2, 3], Tail::Const(0), Tail::Const(0)).unwrap()
    }

    #[test]
    fn window_is_trimmed() {
        let f = e1();
        assert_eq!(f.lo(), 1);
        assert_eq!(f.values(), &[1, 2, 3]);
        assert_eq!(f.shift(4).lo(), 5);
        let k = ZMap::new(c4(), 7, vec![0, 0], Tail::Const(0), Tail::Const(0)).unwrap();
        assert_eq!(k, ZMap::constant(c4(), 0).unwrap());
    }

    #[test]
    fn empty_window_boundary_is_least() {
        let f = ZMap::new(c4(), 5, vec![], Tail::Const(0), Tail::Const(1)).unwrap();
        assert_eq!(f.lo(), 5);
        let g = ZMap::new(c4(), 6, vec![], Tail::periodic(vec![0, 1]), Tail::Const(1)).unwrap();
        assert_eq!(g.lo(), 5);
        assert_eq!(g.eval(5), 1);
        assert_eq!(g.eval(4), 0);
    }

    #[test]
    fn rejects_non_edges() {
        let err = ZMap::new(c4(), 0, vec![0, 2], Tail::Const(0), Tail::Const(2)).unwrap_err();
        assert!(matches!(err, Error::NotBornologous(..)));
        let err = ZMap::new(c4(), 0, vec![], Tail::affine(1, 0, vec![0]), Tail::Const(0)).unwrap_err();
        assert_eq!(err, Error::IllegalTailKind("affine".into()));
    }

    #[test]
    fn reverse_is_involution() {
        let f = e1();
        assert_eq!(f.reverse().reverse(), f);
        for z in -5..9 {
            assert_eq!(f.reverse().eval(z), f.eval(-z));
            assert_eq!(f.shift(3).eval(z), f.eval(z - 3));
        }
        let line = Arc::new(Space::IntLine(Scale::Inf));
        let abs = ZMap::new(line, 0, vec![], Tail::affine(-1, 0, vec![0]), Tail::affine(1, 0, vec![0])).unwrap();
        assert!(abs.is_symmetric());
    }

    #[test]
    fn delete_and_add() {
        let dup = ZMap::new(c4(), 0, vec![0, 1, 1, 2, 3], Tail::Const(0), Tail::Const(0)).unwrap();
        let del = dup.delete_point(2).unwrap();
        assert_eq!(del, e1());
        assert_eq!(del.add_point(2, 1).unwrap(), dup);
        assert!(matches!(e1().delete_point(2), Err(Error::NotBornologous(..))));
    }

    #[test]
    fn guard_blocks_winding_tail() {
        let turn = Tail::periodic(vec![0, 1, 2, 3]);
        let wind = ZMap::new(c4(), 0, vec![], Tail::Const(0), turn.clone()).unwrap();
        let stutter =
            ZMap::from_fn(c4(), 0, 11, |z| turn.eval(if z <= 9 { z } else { z - 1 }), Tail::Const(0), turn.shift(1))
                .unwrap();
        assert_eq!(stutter.delete_point(10), Err(Error::GuardUnproved(10)));
        assert_eq!(wind.add_point(10, wind.eval(9)), Err(Error::GuardUnproved(10)));
        // Near the start of the winding the guard has no margin and stays silent.
        assert!(wind.add_point(0, 0).is_ok());
        let wiggle = ZMap::new(c4(), 0, vec![], Tail::Const(0), Tail::periodic(vec![0, 1])).unwrap();
        assert!(wiggle.delete_point(10).is_ok());
    }

    #[test]
    fn truncations() {
        let f = e1();
        let r = f.truncate_left_of(2);
        assert_eq!(r.sample(-1, 5), vec![2, 2, 2, 2, 3, 0, 0]);
        let l = f.truncate_right_of(2);
        assert_eq!(l.sample(-1, 5), vec![0, 0, 1, 2, 2, 2, 2]);
    }
}
