//! Brute-force reference counts, kept separate from the main enumerators.

use crate::space::FiniteSpace;
use std::collections::{HashMap, VecDeque};

fn loops(space: &FiniteSpace, base: usize, len: usize) -> Vec<Vec<u8>> {
    let mut layer: Vec<Vec<u8>> = vec![vec![base as u8]];
    for _ in 1..len {
        let mut next = Vec::new();
        for p in &layer {
            let last = *p.last().unwrap() as usize;
            for v in 0..space.len() {
                if space.controlled(last, v) {
                    let mut q = p.clone();
                    q.push(v as u8);
                    next.push(q);
                }
            }
        }
        layer = next;
    }
    layer.retain(|p| *p.last().unwrap() as usize == base);
    layer
}

/// Rows `q` with fixed ends such that `p(i)` and `q(j)` are controlled
/// whenever `|i − j| ≤ 1`.
fn one_step(space: &FiniteSpace, p: &[u8]) -> Vec<Vec<u8>> {
    let n = p.len();
    let ok = |i: usize, v: usize| {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(n - 1);
        (lo..=hi).all(|j| space.controlled(p[j] as usize, v))
    };
    let mut out = Vec::new();
    let mut cur = vec![p[0]];
    fn go(space: &FiniteSpace, p: &[u8], ok: &dyn Fn(usize, usize) -> bool, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let i = cur.len();
        if i == p.len() {
            out.push(cur.clone());
            return;
        }
        let prev = cur[i - 1] as usize;
        let choices: Vec<usize> = if i == p.len() - 1 { vec![p[i] as usize] } else { (0..space.len()).collect() };
        for v in choices {
            if ok(i, v) && space.controlled(prev, v) {
                cur.push(v as u8);
                go(space, p, ok, cur, out);
                cur.pop();
            }
        }
    }
    if n == 1 {
        return vec![p.to_vec()];
    }
    if !ok(0, p[0] as usize) {
        return out;
    }
    go(space, p, &ok, &mut cur, &mut out);
    out
}

/// Number of rel-endpoint classes among loops of exactly `len` values at
/// `base`.
pub fn loop_class_count(space: &FiniteSpace, base: usize, len: usize) -> usize {
    let all = loops(space, base, len);
    let mut seen: HashMap<Vec<u8>, bool> = all.into_iter().map(|p| (p, false)).collect();
    let keys: Vec<Vec<u8>> = seen.keys().cloned().collect();
    let mut count = 0;
    for start in keys {
        if seen[&start] {
            continue;
        }
        count += 1;
        seen.insert(start.clone(), true);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            for q in one_step(space, &p) {
                if let Some(flag) = seen.get_mut(&q) {
                    if !*flag {
                        *flag = true;
                        queue.push_back(q);
                    }
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::graphs;

    #[test]
    fn agrees_on_small_cycles() {
        assert_eq!(loop_class_count(&graphs::cycle(3), 0, 8), 1);
        assert_eq!(loop_class_count(&graphs::cycle(4), 0, 8), 3);
        assert_eq!(loop_class_count(&graphs::cycle(5), 0, 8), 3);
    }
}
