//! Seeded generators for the property suites.

use crate::error::Result;
use crate::homotopy::{path_neighbors, Anchor, Verdict};
use crate::space::{FiniteSpace, Space};
use crate::splitting::Cover;
use crate::strings::{string_equiv, Step, StringOfMaps};
use crate::zmap::{PointMove, ZMap};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A connected graph on `n` vertices: a random spanning tree plus extra
/// edges with probability one half.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize) -> FiniteSpace {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((a, b));
            }
        }
    }
    FiniteSpace::from_edges(n, &edges)
}

pub fn random_walk<R: Rng>(rng: &mut R, space: &FiniteSpace, start: usize, len: usize) -> Vec<i64> {
    let mut p = vec![start as i64];
    while p.len() < len {
        let nb = space.closed_neighbors(*p.last().unwrap() as usize);
        p.push(*nb.choose(rng).unwrap() as i64);
    }
    p
}

/// Up to `max_maps` maps with constant tails meeting exactly.
pub fn random_string<R: Rng>(rng: &mut R, space: &Arc<Space>, start: usize, max_maps: usize) -> Result<StringOfMaps> {
    let fin = space.finite().expect("finite space");
    let k = rng.gen_range(1..=max_maps);
    let mut maps = Vec::with_capacity(k);
    let mut at = start;
    for _ in 0..k {
        let len = rng.gen_range(1..=6);
        let p = random_walk(rng, fin, at, len);
        at = *p.last().unwrap() as usize;
        maps.push(ZMap::from_path(space.clone(), rng.gen_range(-3..=3), &p)?);
    }
    StringOfMaps::new(maps)
}

/// Candidate one-step rewrites of `s`, in a fixed order.
pub fn rewrite_candidates<R: Rng>(rng: &mut R, s: &StringOfMaps) -> Vec<Step> {
    let mut out = Vec::new();
    let fin = s.space().finite().expect("finite space");
    for (i, f) in s.maps().iter().enumerate() {
        let m = i + 1;
        for z in f.lo() - 1..=f.hi() + 1 {
            out.push(Step::Point { map: m, mv: PointMove::Add { at: z, value: f.eval(z) } });
            out.push(Step::Point { map: m, mv: PointMove::Delete { at: z } });
            for v in fin.closed_neighbors(f.eval(z) as usize) {
                out.push(Step::Point { map: m, mv: PointMove::Add { at: z + 1, value: v as i64 } });
            }
        }
        out.push(Step::Shift { map: m, by: rng.gen_range(-2..=2) });
        if f.values().len() > 1 {
            out.push(Step::Split { at: m, point: f.lo() + rng.gen_range(0..f.values().len() as i64) });
        }
    }
    for at in 1..s.len() {
        if let Ok((n, mm)) = s.merge_window(at) {
            let lo = n.unwrap_or(mm.unwrap_or(0) - 2);
            let hi = mm.unwrap_or(lo + 2);
            for j in lo..=hi {
                out.push(Step::Merge { at, point: j });
            }
        }
    }
    for after in 0..=s.len() {
        let c = if after == 0 { s.maps()[0].left() } else { s.maps()[after - 1].right() };
        if let Some(c) = c.constant_value() {
            let len = rng.gen_range(2..=4);
            let p = random_walk(rng, fin, c as usize, len);
            if let Ok(h) = ZMap::from_path(s.maps()[0].space_arc().clone(), 0, &p) {
                out.push(Step::InsertOpposite { after, map: h, shift: rng.gen_range(-2..=2) });
            }
        }
    }
    if s.len() >= 3 {
        for at in 1..s.len() {
            out.push(Step::Dop { at });
        }
    }
    out
}

/// A random applicable one-step rewrite and its result.
pub fn random_rewrite<R: Rng>(rng: &mut R, s: &StringOfMaps) -> Option<(Step, StringOfMaps)> {
    let mut cands = rewrite_candidates(rng, s);
    cands.shuffle(rng);
    cands.into_iter().find_map(|step| {
        let next = s.apply(&step).ok()?;
        // Moves that only re-index a tail leave nothing to test.
        (!next.same_maps(s)).then_some((step, next))
    })
}

/// A rel-endpoint homotopy: a path of `len` values and a list of rows, each
/// one step from the last.
pub fn random_homotopy<R: Rng>(rng: &mut R, space: &Space, len: usize, rows: usize) -> Vec<Vec<i64>> {
    let fin = space.finite().expect("finite space");
    let start = rng.gen_range(0..fin.len());
    let p = random_walk(rng, fin, start, len);
    let mut out = vec![p];
    while out.len() < rows {
        let nb = path_neighbors(space, out.last().unwrap(), Anchor::Both);
        match nb.choose(rng) {
            Some(r) => out.push(r.clone()),
            None => break,
        }
    }
    out
}

/// A walk that visits both `A − B` and `B − A`.
pub fn random_crossing_map<R: Rng>(rng: &mut R, space: &Arc<Space>, cover: &Cover) -> Result<ZMap> {
    let fin = space.finite().expect("finite space");
    loop {
        let start = rng.gen_range(0..fin.len());
        let len = rng.gen_range(3..=8);
        let p = random_walk(rng, fin, start, len);
        let a_only = p.iter().any(|&v| cover.a[v as usize] && !cover.b[v as usize]);
        let b_only = p.iter().any(|&v| cover.b[v as usize] && !cover.a[v as usize]);
        if a_only && b_only {
            return ZMap::from_path(space.clone(), rng.gen_range(-3..=3), &p);
        }
    }
}

/// `F ⋆ reverse(F) ≃ (f₁, reverse f₁)`.
pub fn law_inverse(f: &StringOfMaps, bound: usize) -> Result<Verdict> {
    let f1 = &f.maps()[0];
    let pair = StringOfMaps::new(vec![f1.clone(), f1.reverse()])?;
    string_equiv(&f.star(&f.reverse())?, &pair, bound)
}

/// `(O) ⋆ F ≃ F` for the left object `O`.
pub fn law_left_identity(f: &StringOfMaps, bound: usize) -> Result<Verdict> {
    let id = StringOfMaps::identity(f.left_object())?;
    string_equiv(&id.star(f)?, f, bound)
}

/// `F ⋆ (O) ≃ F` for the right object `O`.
pub fn law_right_identity(f: &StringOfMaps, bound: usize) -> Result<Verdict> {
    let id = StringOfMaps::identity(f.right_object())?;
    string_equiv(&f.star(&id)?, f, bound)
}

/// `F ⋆ G ≃ F′ ⋆ G` where `F′` is one rewrite away from `F`.
pub fn law_rewrite(f: &StringOfMaps, f2: &StringOfMaps, g: &StringOfMaps, bound: usize) -> Result<Verdict> {
    string_equiv(&f.star(g)?, &f2.star(g)?, bound)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawSummary {
    pub seed: u64,
    pub strings: usize,
    pub checks: usize,
    pub proved: usize,
    pub unknown: usize,
    pub refuted: usize,
    pub failures: usize,
    pub notes: Vec<String>,
}

/// One random case for the groupoid laws: a graph, `F`, a rewrite of `F`
/// and a string `G` starting where `F` ends.
pub struct LawCase {
    pub space: Arc<Space>,
    pub f: StringOfMaps,
    pub step: Step,
    pub rewritten: StringOfMaps,
    pub g: StringOfMaps,
}

pub fn law_case<R: Rng>(rng: &mut R) -> Result<LawCase> {
    loop {
        let n = rng.gen_range(1..=6);
        let space = Arc::new(Space::Finite(random_graph(rng, n)));
        let start = rng.gen_range(0..n);
        let f = random_string(rng, &space, start, 3)?;
        let Some((step, rewritten)) = random_rewrite(rng, &f) else { continue };
        let end = f.maps().last().unwrap().right().constant_value().unwrap() as usize;
        let g = random_string(rng, &space, end, 3)?;
        return Ok(LawCase { space, f, step, rewritten, g });
    }
}

/// Runs the four law checks on `count` random cases.
pub fn law_sample(seed: u64, count: usize, bound: usize) -> LawSummary {
    let mut r = rng(seed);
    let mut s = LawSummary { seed, strings: count, checks: 0, proved: 0, unknown: 0, refuted: 0, failures: 0, notes: vec![] };
    for k in 0..count {
        let case = match law_case(&mut r) {
            Ok(c) => c,
            Err(e) => {
                s.failures += 1;
                s.notes.push(format!("case {k}: {e}"));
                continue;
            }
        };
        let checks = [
            ("inverse", law_inverse(&case.f, bound)),
            ("left identity", law_left_identity(&case.f, bound)),
            ("right identity", law_right_identity(&case.f, bound)),
            ("rewrite", law_rewrite(&case.f, &case.rewritten, &case.g, bound)),
        ];
        for (name, v) in checks {
            s.checks += 1;
            match v {
                Ok(Verdict::Proved(_)) => s.proved += 1,
                Ok(Verdict::Unknown(why)) => {
                    s.unknown += 1;
                    s.failures += 1;
                    s.notes.push(format!("case {k} {name}: UNKNOWN ({why})"));
                }
                Ok(Verdict::Refuted(why)) => {
                    s.refuted += 1;
                    s.failures += 1;
                    s.notes.push(format!("case {k} {name}: REFUTED ({why})"));
                }
                Err(e) => {
                    s.failures += 1;
                    s.notes.push(format!("case {k} {name}: {e}"));
                }
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = random_graph(&mut rng(7), 5);
        let b = random_graph(&mut rng(7), 5);
        assert_eq!(a, b);
        assert!(crate::space::is_connected(&Space::Finite(a)));
    }

    #[test]
    fn homotopy_rows_step() {
        let space = Space::Finite(crate::space::graphs::cycle(5));
        let rows = random_homotopy(&mut rng(3), &space, 6, 5);
        for w in rows.windows(2) {
            assert!(crate::homotopy::step_ok(&space, &w[0], &w[1]).unwrap());
            assert_eq!((w[0][0], w[0][5]), (w[1][0], w[1][5]));
        }
    }

    #[test]
    fn small_law_sample() {
        let s = law_sample(11, 5, 64);
        assert_eq!(s.failures, 0, "{:?}", s.notes);
        assert_eq!(s, law_sample(11, 5, 64));
    }
}
