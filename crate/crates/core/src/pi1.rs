//! Based loops of a fixed length and their rel-endpoint homotopy classes.

use crate::error::{Error, Result};
use crate::homotopy::{path_neighbors, Anchor};
use crate::space::{FiniteSpace, Space};
use crate::uf::UnionFind;
use serde::{Deserialize, Serialize};

pub const MAX_VERTICES: usize = 8;
pub const MAX_LENGTH: usize = 14;

const BITS: u32 = 3;

fn encode(p: &[i64]) -> u64 {
    p.iter().fold(0u64, |acc, &v| (acc << BITS) | v as u64)
}

fn decode(mut code: u64, len: usize) -> Vec<i64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (code & ((1 << BITS) - 1)) as i64;
        code >>= BITS;
    }
    out
}

/// All loops of exactly `len` values at `base`, in lexicographic order.
pub fn based_loops(space: &FiniteSpace, base: usize, len: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![base as i64];
    fn go(space: &FiniteSpace, base: usize, len: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            if *cur.last().unwrap() == base as i64 {
                out.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().unwrap() as usize;
        for v in space.closed_neighbors(last) {
            cur.push(v as i64);
            go(space, base, len, cur, out);
            cur.pop();
        }
    }
    if len == 1 {
        return vec![cur];
    }
    go(space, base, len, &mut cur, &mut out);
    out
}

/// Right-pads a loop with its basepoint to `len` values.
pub fn stabilize(p: &[i64], len: usize) -> Vec<i64> {
    let mut v = p.to_vec();
    v.resize(len.max(p.len()), p[0]);
    v
}

/// A loop with trailing basepoint values removed, keeping at least one.
pub fn trim(p: &[i64]) -> Vec<i64> {
    let base = p[0];
    let keep = p.iter().rposition(|&v| v != base).map_or(1, |i| i + 2);
    p[..keep].to_vec()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopClass {
    /// The shortest trimmed member, ties broken lexicographically.
    pub representative: Vec<i64>,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Classes {
    pub basepoint: usize,
    pub length_cap: usize,
    pub loop_count: usize,
    pub classes: Vec<LoopClass>,
    /// `product_table[a][b]` is the class of `rep(a) ⋆ rep(b)` when that
    /// product fits under the cap.
    pub product_table: Vec<Vec<Option<usize>>>,
    pub previous_count: Option<usize>,
    /// The class count at `length_cap − 2` equals the count at the cap.
    pub stabilization_flag: bool,
    /// How many classes at the cap contain a stabilized loop of length
    /// `length_cap − 2`.
    pub shared_count: Option<usize>,
    #[serde(skip)]
    codes: Vec<u64>,
    #[serde(skip)]
    class_of: Vec<usize>,
}

struct Partition {
    codes: Vec<u64>,
    class_of: Vec<usize>,
    count: usize,
}

fn partition(space: &Space, fin: &FiniteSpace, base: usize, len: usize) -> Partition {
    let loops = based_loops(fin, base, len);
    let codes: Vec<u64> = loops.iter().map(|p| encode(p)).collect();
    let mut uf = UnionFind::new(codes.len());
    for (i, p) in loops.iter().enumerate() {
        for nb in path_neighbors(space, p, Anchor::Both) {
            if let Ok(j) = codes.binary_search(&encode(&nb)) {
                uf.union(i, j);
            }
        }
    }
    let mut ids = std::collections::HashMap::new();
    let class_of: Vec<usize> = (0..codes.len())
        .map(|i| {
            let root = uf.find(i);
            let next = ids.len();
            *ids.entry(root).or_insert(next)
        })
        .collect();
    Partition { codes, class_of, count: ids.len() }
}

pub fn pi1_classes(space: &Space, basepoint: usize, length_cap: usize) -> Result<Pi1Classes> {
    let fin = space.finite().ok_or(Error::Precondition("loop classes need a finite space".into()))?;
    if fin.len() > MAX_VERTICES || length_cap > MAX_LENGTH {
        return Err(Error::ResourceCap(format!(
            "loop enumeration is capped at {MAX_VERTICES} vertices and length {MAX_LENGTH}"
        )));
    }
    if length_cap < 2 {
        return Err(Error::Precondition("length cap must be at least 2".into()));
    }
    if basepoint >= fin.len() {
        return Err(Error::UnknownVertex(basepoint.to_string()));
    }
    let part = partition(space, fin, basepoint, length_cap);
    let mut best: Vec<Option<Vec<i64>>> = vec![None; part.count];
    let mut sizes = vec![0usize; part.count];
    for (i, &code) in part.codes.iter().enumerate() {
        let c = part.class_of[i];
        sizes[c] += 1;
        let t = trim(&decode(code, length_cap));
        let better = match &best[c] {
            None => true,
            Some(b) => (t.len(), &t) < (b.len(), b),
        };
        if better {
            best[c] = Some(t);
        }
    }
    let classes: Vec<LoopClass> = best
        .into_iter()
        .zip(sizes)
        .map(|(r, size)| LoopClass { representative: r.unwrap(), size })
        .collect();
    let mut out = Pi1Classes {
        basepoint,
        length_cap,
        loop_count: part.codes.len(),
        classes,
        product_table: vec![],
        previous_count: None,
        stabilization_flag: false,
        shared_count: None,
        codes: part.codes,
        class_of: part.class_of,
    };
    out.product_table = out
        .classes
        .iter()
        .map(|a| out.classes.iter().map(|b| out.class_of_loop(&concat(&a.representative, &b.representative))).collect())
        .collect();
    if length_cap >= 4 {
        let prev = partition(space, fin, basepoint, length_cap - 2);
        let mut hit: Vec<usize> = prev
            .codes
            .iter()
            .filter_map(|&c| out.class_of_loop(&decode(c, length_cap - 2)))
            .collect();
        hit.sort_unstable();
        hit.dedup();
        out.previous_count = Some(prev.count);
        out.shared_count = Some(hit.len());
        out.stabilization_flag = prev.count == out.classes.len();
    }
    Ok(out)
}

/// Loop concatenation at the shared basepoint.
pub fn concat(p: &[i64], q: &[i64]) -> Vec<i64> {
    let mut v = p.to_vec();
    v.extend_from_slice(&q[1..]);
    v
}

impl Pi1Classes {
    /// The class of a loop after stabilizing it to the cap.
    pub fn class_of_loop(&self, p: &[i64]) -> Option<usize> {
        let t = trim(p);
        if t.len() > self.length_cap || t[0] != self.basepoint as i64 {
            return None;
        }
        let code = encode(&stabilize(&t, self.length_cap));
        self.codes.binary_search(&code).ok().map(|i| self.class_of[i])
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// The class holding the constant loop.
    pub fn identity_class(&self) -> usize {
        self.class_of_loop(&[self.basepoint as i64]).expect("constant loop is always enumerated")
    }
}
