//! Symbolic tails of maps `ℤ → X`.
//!
//! A tail is a function on all of ℤ; a map uses its left tail below the
//! window and its right tail above it. Phases are absolute: a periodic word
//! `w` means `z ↦ w[z mod len]`, and a quasi-affine tail means
//! `z ↦ slope·z + offset + corr[z mod len]`.
//!
//! Canonical forms make equality of tails equality of functions:
//! periodic words are primitive with length ≥ 2, quasi-affine tails have a
//! nonzero slope, a primitive correction and `corr[0] == 0`.

use crate::space::{Scale, Space};
use std::collections::{HashMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tail {
    Const(i64),
    Periodic(Vec<i64>),
    Affine { slope: i64, offset: i64, corr: Vec<i64> },
}

fn primitive_len(w: &[i64]) -> usize {
    let n = w.len();
    (1..=n).find(|&p| n.is_multiple_of(p) && (0..n).all(|i| w[i] == w[i % p])).unwrap_or(n)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a as i64, b as i64) as usize * b
}

impl Tail {
    pub fn constant(v: i64) -> Tail {
        Tail::Const(v)
    }

    /// Canonical periodic tail; a word of one letter becomes a constant.
    pub fn periodic(word: Vec<i64>) -> Tail {
        assert!(!word.is_empty(), "periodic word must be non-empty");
        let p = primitive_len(&word);
        if p == 1 {
            Tail::Const(word[0])
        } else {
            Tail::Periodic(word[..p].to_vec())
        }
    }

    /// Canonical quasi-affine tail; slope zero falls back to periodic.
    pub fn affine(slope: i64, offset: i64, corr: Vec<i64>) -> Tail {
        assert!(!corr.is_empty(), "correction must be non-empty");
        if slope == 0 {
            return Tail::periodic(corr.iter().map(|c| c + offset).collect());
        }
        let p = primitive_len(&corr);
        let base = corr[0];
        Tail::Affine { slope, offset: offset + base, corr: corr[..p].iter().map(|c| c - base).collect() }
    }

    pub fn eval(&self, z: i64) -> i64 {
        match self {
            Tail::Const(v) => *v,
            Tail::Periodic(w) => w[z.rem_euclid(w.len() as i64) as usize],
            Tail::Affine { slope, offset, corr } => slope * z + offset + corr[z.rem_euclid(corr.len() as i64) as usize],
        }
    }

    pub fn period(&self) -> usize {
        match self {
            Tail::Const(_) => 1,
            Tail::Periodic(w) => w.len(),
            Tail::Affine { corr, .. } => corr.len(),
        }
    }

    pub fn slope(&self) -> i64 {
        match self {
            Tail::Affine { slope, .. } => *slope,
            _ => 0,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Tail::Const(_))
    }

    pub fn constant_value(&self) -> Option<i64> {
        match self {
            Tail::Const(v) => Some(*v),
            _ => None,
        }
    }

    /// Bounded tails repeat; quasi-affine ones do not.
    pub fn is_periodic(&self) -> bool {
        !matches!(self, Tail::Affine { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Tail::Const(_) => "const",
            Tail::Periodic(_) => "periodic",
            Tail::Affine { .. } => "affine",
        }
    }

    /// Distinct values taken, for bounded tails.
    pub fn image(&self) -> Option<Vec<i64>> {
        match self {
            Tail::Const(v) => Some(vec![*v]),
            Tail::Periodic(w) => {
                let mut v = w.clone();
                v.sort_unstable();
                v.dedup();
                Some(v)
            }
            Tail::Affine { .. } => None,
        }
    }

    /// `z ↦ self(z − k)`.
    pub fn shift(&self, k: i64) -> Tail {
        match self {
            Tail::Const(v) => Tail::Const(*v),
            Tail::Periodic(w) => {
                let n = w.len() as i64;
                Tail::periodic((0..n).map(|i| w[(i - k).rem_euclid(n) as usize]).collect())
            }
            Tail::Affine { slope, offset, corr } => {
                let n = corr.len() as i64;
                Tail::affine(*slope, offset - slope * k, (0..n).map(|i| corr[(i - k).rem_euclid(n) as usize]).collect())
            }
        }
    }

    /// `z ↦ self(−z)`.
    pub fn reverse(&self) -> Tail {
        match self {
            Tail::Const(v) => Tail::Const(*v),
            Tail::Periodic(w) => {
                let n = w.len() as i64;
                Tail::periodic((0..n).map(|i| w[(-i).rem_euclid(n) as usize]).collect())
            }
            Tail::Affine { slope, offset, corr } => {
                let n = corr.len() as i64;
                Tail::affine(-slope, *offset, (0..n).map(|i| corr[(-i).rem_euclid(n) as usize]).collect())
            }
        }
    }

    /// Maps every value through `f`. Used to move tails between spaces.
    pub fn map_values(&self, f: impl Fn(i64) -> i64) -> Tail {
        match self {
            Tail::Const(v) => Tail::Const(f(*v)),
            Tail::Periodic(w) => Tail::periodic(w.iter().map(|&v| f(v)).collect()),
            Tail::Affine { .. } => self.clone(),
        }
    }

    /// First consecutive pair `(t(z), t(z+1))` that is not controlled.
    pub fn step_violation(&self, space: &Space) -> Option<(i64, i64)> {
        if matches!(space, Space::IntLine(Scale::Inf)) {
            return None;
        }
        (0..self.period() as i64)
            .map(|z| (self.eval(z), self.eval(z + 1)))
            .find(|&(a, b)| !space.controlled(a, b))
    }

    /// Shifts `d` with `self(z) = other(z + d)` for every `z`: the least
    /// non-negative one and the period of the solution set (`None` when the
    /// solution is unique).
    pub fn align(&self, other: &Tail) -> Option<(i64, Option<i64>)> {
        match (self, other) {
            (Tail::Const(a), Tail::Const(b)) => (a == b).then_some((0, Some(1))),
            (Tail::Periodic(a), Tail::Periodic(b)) if a.len() == b.len() => {
                let n = a.len();
                (0..n)
                    .find(|&d| (0..n).all(|i| a[i] == b[(i + d) % n]))
                    .map(|d| (d as i64, Some(n as i64)))
            }
            (Tail::Affine { slope: s, offset: oa, corr: ca }, Tail::Affine { slope: t, offset: ob, corr: cb })
                if s == t && ca.len() == cb.len() =>
            {
                let n = ca.len() as i64;
                for d0 in 0..n {
                    let c = ca[0] - cb[d0 as usize];
                    if !(0..n).all(|i| ca[i as usize] - cb[((i + d0) % n) as usize] == c) {
                        continue;
                    }
                    // s·(d0 + t·n) + ob − oa − c = 0
                    let num = oa + c - ob - s * d0;
                    if num % (s * n) == 0 {
                        return Some((d0 + num / (s * n) * n, None));
                    }
                }
                None
            }
            _ => None,
        }
    }
}

/// Rows of a tail homotopy: each row is `z ↦ word[z mod P] + slope·P·(z div P)`.
#[derive(Debug, Clone, Copy)]
pub struct RowShape {
    pub slope: i64,
    pub period: usize,
}

impl RowShape {
    pub fn value(&self, word: &[i64], z: i64) -> i64 {
        let p = self.period as i64;
        word[z.rem_euclid(p) as usize] + self.slope * p * z.div_euclid(p)
    }

    pub fn word_of(&self, t: &Tail) -> Vec<i64> {
        (0..self.period as i64).map(|z| t.eval(z)).collect()
    }

    pub fn tail_of(&self, word: &[i64]) -> Tail {
        if self.slope == 0 {
            Tail::periodic(word.to_vec())
        } else {
            let corr: Vec<i64> = (0..self.period as i64).map(|z| word[z as usize] - self.slope * z).collect();
            Tail::affine(self.slope, 0, corr)
        }
    }

    /// Both rows bornologous and every pair `(w(z), w'(z'))`, `|z−z'| ≤ 1`,
    /// controlled.
    pub fn step_ok(&self, space: &Space, w: &[i64], w2: &[i64]) -> bool {
        let p = self.period as i64;
        (0..p).all(|z| {
            let a = self.value(w, z);
            (-1..=1).all(|dz| space.controlled(a, self.value(w2, z + dz)))
        })
    }

    pub fn bornologous(&self, space: &Space, w: &[i64]) -> bool {
        (0..self.period as i64).all(|z| space.controlled(self.value(w, z), self.value(w, z + 1)))
    }
}

/// Whether two tails, read as rows, are one homotopy step apart.
pub fn tails_step_ok(space: &Space, a: &Tail, b: &Tail) -> bool {
    if a.slope() != b.slope() {
        return false;
    }
    if matches!(space, Space::IntLine(Scale::Inf)) {
        return true;
    }
    let p = lcm(a.period(), b.period());
    let shape = RowShape { slope: a.slope(), period: p };
    shape.step_ok(space, &shape.word_of(a), &shape.word_of(b))
}

/// Outcome of a bounded search over periodic rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowSearch {
    Found(Vec<Vec<i64>>),
    Exhausted,
    Capped,
}

/// Breadth-first search over rows of the given shape, from `start` to any
/// word accepted by `is_target`. Candidate values come from the finite
/// space, or from a box around the current row on the integer line.
pub fn search_rows(
    space: &Space,
    shape: RowShape,
    start: Vec<i64>,
    is_target: impl Fn(&[i64]) -> bool,
    max_states: usize,
) -> RowSearch {
    if is_target(&start) {
        return RowSearch::Found(vec![start]);
    }
    let mut parent: HashMap<Vec<i64>, Option<Vec<i64>>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    let mut order: Vec<Vec<i64>> = Vec::new();
    while let Some(w) = queue.pop_front() {
        order.clear();
        row_neighbors(space, shape, &w, &mut order);
        for nb in order.drain(..) {
            if parent.contains_key(&nb) {
                continue;
            }
            parent.insert(nb.clone(), Some(w.clone()));
            if is_target(&nb) {
                let mut rows = vec![nb];
                while let Some(Some(p)) = parent.get(rows.last().unwrap()) {
                    rows.push(p.clone());
                }
                rows.reverse();
                return RowSearch::Found(rows);
            }
            if parent.len() >= max_states {
                return RowSearch::Capped;
            }
            queue.push_back(nb);
        }
    }
    RowSearch::Exhausted
}

fn candidates(space: &Space, around: &[i64]) -> Vec<i64> {
    match space {
        Space::Finite(f) => (0..f.len() as i64).filter(|&v| around.iter().all(|&a| space.controlled(a, v))).collect(),
        Space::IntLine(Scale::Finite(n)) => {
            let n = *n as i64;
            let lo = around.iter().max().unwrap() - n;
            let hi = around.iter().min().unwrap() + n;
            (lo..=hi).collect()
        }
        Space::IntLine(Scale::Inf) => {
            let lo = *around.iter().min().unwrap();
            let hi = *around.iter().max().unwrap();
            (lo..=hi).collect()
        }
    }
}

/// All bornologous rows one step from `w`, in lexicographic order.
fn row_neighbors(space: &Space, shape: RowShape, w: &[i64], out: &mut Vec<Vec<i64>>) {
    let p = shape.period;
    let cand: Vec<Vec<i64>> = (0..p as i64)
        .map(|z| {
            let around = [shape.value(w, z - 1), shape.value(w, z), shape.value(w, z + 1)];
            candidates(space, &around)
        })
        .collect();
    let mut cur = Vec::with_capacity(p);
    fn go(
        space: &Space,
        shape: RowShape,
        w: &[i64],
        cand: &[Vec<i64>],
        cur: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        let i = cur.len();
        if i == cand.len() {
            if shape.bornologous(space, cur) && shape.step_ok(space, w, cur) && cur.as_slice() != w {
                out.push(cur.clone());
            }
            return;
        }
        for &v in &cand[i] {
            if i > 0 && !space.controlled(cur[i - 1], v) {
                continue;
            }
            cur.push(v);
            go(space, shape, w, cand, cur, out);
            cur.pop();
        }
    }
    go(space, shape, w, &cand, &mut cur, out);
}

/// Searches for a homotopy from the periodic tail to a constant, through
/// periodic rows of the same period.
pub fn periodic_null_homotopy(space: &Space, t: &Tail, max_states: usize) -> RowSearch {
    if t.is_constant() {
        return RowSearch::Found(vec![vec![t.eval(0)]]);
    }
    if !t.is_periodic() {
        return RowSearch::Exhausted;
    }
    let shape = RowShape { slope: 0, period: t.period() };
    search_rows(space, shape, shape.word_of(t), |w| w.iter().all(|&v| v == w[0]), max_states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::graphs::cycle;

    #[test]
    fn canonical_forms() {
        assert_eq!(Tail::periodic(vec![3, 3, 3]), Tail::Const(3));
        assert_eq!(Tail::periodic(vec![0, 1, 0, 1]), Tail::Periodic(vec![0, 1]));
        assert_eq!(Tail::affine(0, 2, vec![0, 1]), Tail::Periodic(vec![2, 3]));
        assert_eq!(Tail::affine(1, 0, vec![5, 5]), Tail::Affine { slope: 1, offset: 5, corr: vec![0] });
    }

    #[test]
    fn shift_and_reverse() {
        let t = Tail::periodic(vec![0, 1, 2, 3]);
        assert_eq!(t.shift(1).eval(1), t.eval(0));
        assert_eq!(t.shift(4), t);
        assert_eq!(t.reverse().reverse(), t);
        assert_eq!(t.reverse().eval(1), t.eval(-1));
        let a = Tail::affine(2, 1, vec![0, 1, 0]);
        for z in -7..7 {
            assert_eq!(a.shift(3).eval(z), a.eval(z - 3));
            assert_eq!(a.reverse().eval(z), a.eval(-z));
        }
    }

    #[test]
    fn alignment() {
        let t = Tail::periodic(vec![0, 1, 2, 3]);
        assert_eq!(t.align(&t.shift(1)), Some((1, Some(4))));
        let a = Tail::affine(1, 0, vec![0]);
        assert_eq!(a.align(&a.shift(3)), Some((3, None)));
        assert_eq!(a.align(&Tail::affine(2, 0, vec![0])), None);
        let jig = Tail::affine(1, 0, vec![0, 1]);
        assert_eq!(jig.align(&jig.shift(-5)), Some((-5, None)));
    }

    #[test]
    fn winding_word_is_not_null_homotopic_in_c4() {
        let c4 = Space::Finite(cycle(4));
        let t = Tail::periodic(vec![0, 1, 2, 3]);
        assert_eq!(periodic_null_homotopy(&c4, &t, 10_000), RowSearch::Exhausted);
        let back_and_forth = Tail::periodic(vec![0, 1]);
        assert!(matches!(periodic_null_homotopy(&c4, &back_and_forth, 10_000), RowSearch::Found(_)));
    }

    #[test]
    fn tail_steps() {
        let c4 = Space::Finite(cycle(4));
        assert!(tails_step_ok(&c4, &Tail::Const(0), &Tail::Const(1)));
        assert!(!tails_step_ok(&c4, &Tail::Const(0), &Tail::Const(2)));
        let zinf = Space::IntLine(Scale::Inf);
        assert!(tails_step_ok(&zinf, &Tail::affine(1, 0, vec![0]), &Tail::affine(1, 9, vec![0])));
        assert!(!tails_step_ok(&zinf, &Tail::affine(1, 0, vec![0]), &Tail::affine(2, 0, vec![0])));
    }
}
