//! Factorization of strings over a well-split cover `A ∪ B` and the
//! decomposition into words of the amalgamated groupoid.

use crate::error::{Error, Result};
use crate::homotopy::{object_equal, Verdict};
use crate::space::{components_within, shortest_path_within, subspace, FiniteSpace, Space};
use crate::splitting::{bridge, well_split, Cover, WellSplitReport};
use crate::strings::{normalize, string_equiv, tails_controlled, Region, Step, StringOfMaps, Trace};
use crate::tail::Tail;
use crate::zmap::{PointMove, ZMap};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

impl Side {
    fn mask<'a>(&self, cover: &'a Cover) -> &'a [bool] {
        match self {
            Side::A => &cover.a,
            Side::B => &cover.b,
        }
    }
}

fn finite(space: &Space) -> Result<&FiniteSpace> {
    space.finite().ok_or(Error::Precondition("van Kampen checks need a finite space".into()))
}

fn mask_of(n: usize, vs: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in vs {
        m[v] = true;
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentCheck {
    /// "A", "B" or "A∩B".
    pub region: String,
    pub component: Vec<usize>,
    /// First atlas member meeting the component in a connected set.
    pub member: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub ok: bool,
    /// One well-splitting report per component of X.
    pub well_split: Vec<WellSplitReport>,
    pub components: Vec<ComponentCheck>,
    pub disconnected_members: Vec<usize>,
    pub straddling_members: Vec<usize>,
}

/// Well-split, every component of A, B and A∩B meets a connected atlas
/// member, and every member sits inside A or inside B. A disconnected X is
/// checked one component at a time.
pub fn verify_cover_hypotheses(space: &FiniteSpace, cover: &Cover, atlas: &[Vec<usize>]) -> Result<CoverReport> {
    let n = space.len();
    if cover.a.len() != n || cover.b.len() != n {
        return Err(Error::CoverMismatch);
    }
    let mut well = Vec::new();
    for comp in crate::space::components(space) {
        let sub = subspace(space, &comp)?;
        let a: Vec<usize> = (0..comp.len()).filter(|&i| cover.a[comp[i]]).collect();
        let b: Vec<usize> = (0..comp.len()).filter(|&i| cover.b[comp[i]]).collect();
        if a.is_empty() || b.is_empty() {
            // The component sits inside one set; nothing to split.
            continue;
        }
        let report = well_split(&sub, &Cover::new(&sub, &a, &b)?);
        well.push(report);
    }
    let masks: Vec<Vec<bool>> = atlas.iter().map(|u| mask_of(n, u)).collect();
    let disconnected_members: Vec<usize> = (0..atlas.len())
        .filter(|&k| atlas[k].is_empty() || !crate::space::is_connected_within(space, &masks[k]))
        .collect();
    let straddling_members: Vec<usize> = (0..atlas.len())
        .filter(|&k| !(atlas[k].iter().all(|&v| cover.a[v]) || atlas[k].iter().all(|&v| cover.b[v])))
        .collect();
    let mut components = Vec::new();
    for (name, mask) in [("A", cover.a.clone()), ("B", cover.b.clone()), ("A∩B", cover.intersection())] {
        for comp in components_within(space, &mask) {
            let member = (0..atlas.len())
                .find(|&k| !disconnected_members.contains(&k) && atlas[k].iter().any(|v| comp.contains(v)));
            components.push(ComponentCheck { region: name.into(), component: comp, member });
        }
    }
    let ok = well.iter().all(|r| r.verdict)
        && components.iter().all(|c| c.member.is_some())
        && disconnected_members.is_empty()
        && straddling_members.is_empty();
    Ok(CoverReport { ok, well_split: well, components, disconnected_members, straddling_members })
}

fn image_inside(f: &ZMap, mask: &[bool]) -> bool {
    f.image().is_some_and(|img| img.iter().all(|&v| mask[v as usize]))
}

fn tail_side(t: &Tail, cover: &Cover) -> Option<Side> {
    let img = t.image()?;
    [Side::A, Side::B].into_iter().find(|s| img.iter().all(|&v| s.mask(cover)[v as usize]))
}

/// A factor's tag: A whenever its image fits in A.
pub fn side_of(f: &ZMap, cover: &Cover) -> Option<Side> {
    [Side::A, Side::B].into_iter().find(|s| image_inside(f, s.mask(cover)))
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub string: StringOfMaps,
    /// Rewrites from the input string to `string`.
    pub trace: Trace,
    pub tags: Vec<Side>,
    /// `splits[k]` is true when the junction after map `k + 1` was created
    /// by the factorization.
    pub splits: Vec<bool>,
}

/// Splits every map of `s` into pieces lying wholly in A or wholly in B,
/// inserting a bridge vertex of A∩B at each edge that leaves both sets.
pub fn factorize_string(s: &StringOfMaps, cover: &Cover) -> Result<Factorization> {
    let fin = finite(s.space())?;
    if cover.a.len() != fin.len() {
        return Err(Error::CoverMismatch);
    }
    let family = [Region::Vertices(cover.a.clone()), Region::Vertices(cover.b.clone())];
    if !tails_controlled(s, &family)? {
        return Err(Error::TailsNotControlled);
    }
    let mut cur = s.clone();
    let mut trace = Trace::default();
    let mut at = 1;
    while at <= cur.len() {
        // Bridges first, so every step of the map stays inside A or B.
        loop {
            let f = &cur.maps()[at - 1];
            let span = f.left().period().max(f.right().period()) as i64;
            let crossing = (f.lo() - 1..=f.hi() + span).find(|&z| !cover.pushout_or_diag(fin, f.eval(z) as usize, f.eval(z + 1) as usize));
            let Some(z) = crossing else { break };
            let m = bridge(fin, cover, f.eval(z) as usize, f.eval(z + 1) as usize)?;
            let step = Step::Point { map: at, mv: PointMove::Add { at: z + 1, value: m as i64 } };
            cur = cur.apply(&step)?;
            trace.steps.push(step);
        }
        let f = cur.maps()[at - 1].clone();
        let span = f.right().period() as i64;
        // A piece starting in A∩B belongs to the set it enters first.
        let inter = cover.intersection();
        let entered = (f.lo() - 1..=f.hi() + span + 1).map(|z| f.eval(z) as usize).find(|&v| !inter[v]);
        let side = match (tail_side(f.left(), cover), entered) {
            (None, _) => return Err(Error::TailsNotControlled),
            (Some(_), Some(v)) if f.left().image().is_some_and(|img| img.iter().all(|&u| inter[u as usize])) => {
                if cover.a[v] { Side::A } else { Side::B }
            }
            (Some(s), _) => s,
        };
        let exit = (f.lo() - 1..=f.hi() + span + 1).find(|&z| !side.mask(cover)[f.eval(z) as usize]);
        if let Some(z) = exit {
            // f(z − 1) is in `side` and on an edge inside the other set.
            let step = Step::Split { at, point: z - 1 };
            cur = cur.apply(&step)?;
            trace.steps.push(step);
        }
        at += 1;
    }
    let tags = cur.maps().iter().map(|f| side_of(f, cover).ok_or(Error::TailsNotControlled)).collect::<Result<Vec<_>>>()?;
    let splits = split_flags(s.len(), &trace);
    Ok(Factorization { string: cur, trace, tags, splits })
}

fn split_flags(n: usize, trace: &Trace) -> Vec<bool> {
    let mut flags = vec![false; n];
    for step in &trace.steps {
        if let Step::Split { at, .. } = step {
            // The old junction after `at` now follows `at + 1`.
            flags.insert(*at - 1, true);
        }
    }
    flags
}

pub fn factorize(f: &ZMap, cover: &Cover) -> Result<Factorization> {
    factorize_string(&StringOfMaps::new(vec![f.clone()])?, cover)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connector {
    pub region: Side,
    pub from: usize,
    /// Inside one component of A∩B, ending at a vertex of an atlas member.
    pub path: Vec<usize>,
}

/// Shortest path inside the A∩B component of `c` to the least vertex of the
/// first atlas member meeting that component.
pub fn connector(space: &FiniteSpace, cover: &Cover, atlas: &[Vec<usize>], c: usize) -> Result<Vec<usize>> {
    let mask = cover.intersection();
    let comp = components_within(space, &mask)
        .into_iter()
        .find(|k| k.contains(&c))
        .ok_or(Error::Precondition(format!("{} is not in A∩B", space.label(c))))?;
    let target = atlas
        .iter()
        .find_map(|u| u.iter().copied().filter(|v| comp.contains(v)).min())
        .ok_or_else(|| Error::NoAtlasMember(comp.iter().map(|&v| space.label(v).to_string()).collect::<Vec<_>>().join(",")))?;
    shortest_path_within(space, &mask, c, target).ok_or(Error::NoAtlasMember(space.label(c).to_string()))
}

/// Connector paths from every vertex of A∩B.
pub fn connectors(space: &FiniteSpace, cover: &Cover, atlas: &[Vec<usize>]) -> Result<Vec<Connector>> {
    (0..space.len())
        .filter(|&v| cover.in_both(v))
        .map(|v| Ok(Connector { region: Side::A, from: v, path: connector(space, cover, atlas, v)? }))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub tag: Side,
    pub piece: StringOfMaps,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedWord {
    pub factors: Vec<Factor>,
}

impl TaggedWord {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The product of all factors in the whole groupoid.
    pub fn flatten(&self) -> Result<StringOfMaps> {
        let mut it = self.factors.iter();
        let first = it.next().ok_or(Error::Precondition("empty word".into()))?.piece.clone();
        it.try_fold(first, |acc, f| acc.star(&f.piece))
    }
}

impl fmt::Display for TaggedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, fac) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ⋆ ")?;
            }
            let maps: Vec<String> = fac.piece.maps().iter().map(|m| m.to_string()).collect();
            write!(f, "{}[{}]", fac.tag, maps.join(", "))?;
        }
        Ok(())
    }
}

fn connector_map(space: Arc<Space>, path: &[usize]) -> Result<ZMap> {
    let p: Vec<i64> = path.iter().map(|&v| v as i64).collect();
    ZMap::from_path(space, 0, &p)
}

fn atlas_regions(n: usize, atlas: &[Vec<usize>]) -> Vec<Region> {
    atlas.iter().map(|u| Region::Vertices(mask_of(n, u))).collect()
}

/// Factorizes every map, then closes each split junction with a connector
/// into an atlas member so that every factor runs between atlas objects.
pub fn decompose(s: &StringOfMaps, cover: &Cover, atlas: &[Vec<usize>]) -> Result<TaggedWord> {
    let fin = finite(s.space())?;
    if !tails_controlled(s, &atlas_regions(fin.len(), atlas))? {
        return Err(Error::TailsNotControlled);
    }
    let fz = factorize_string(s, cover)?;
    let maps = fz.string.maps();
    let space = maps[0].space_arc().clone();
    let mut factors = Vec::with_capacity(maps.len());
    for (k, g) in maps.iter().enumerate() {
        let mut pieces = Vec::new();
        if k > 0 && fz.splits[k - 1] {
            let c = g.left().constant_value().expect("split tails are constant") as usize;
            let path = connector(fin, cover, atlas, c)?;
            if path.len() > 1 {
                pieces.push(connector_map(space.clone(), &path)?.reverse());
            }
        }
        pieces.push(g.clone());
        if fz.splits[k] {
            let c = g.right().constant_value().expect("split tails are constant") as usize;
            let path = connector(fin, cover, atlas, c)?;
            if path.len() > 1 {
                pieces.push(connector_map(space.clone(), &path)?);
            }
        }
        let piece = StringOfMaps::new(pieces)?;
        factors.push(Factor { tag: fz.tags[k], piece });
    }
    Ok(TaggedWord { factors })
}

fn is_identity(s: &StringOfMaps) -> bool {
    let n = normalize(s).string;
    n.len() == 1 && {
        let m = &n.maps()[0];
        m.is_symmetric() && crate::strings::find_shift(m, s.left_object()).is_some()
    }
}

/// Reduced form in the amalgamated groupoid: retag factors inside A∩B,
/// fuse neighbours with equal tags, drop identities, normalize.
pub fn reduce_word(w: &TaggedWord, cover: &Cover) -> Result<TaggedWord> {
    let inter = cover.intersection();
    let mut out: Vec<Factor> = Vec::new();
    for f in &w.factors {
        let inside = f.piece.maps().iter().all(|m| image_inside(m, &inter));
        let tag = if inside { Side::A } else { f.tag };
        let piece = f.piece.clone();
        match out.last_mut() {
            Some(prev) if prev.tag == tag => prev.piece = prev.piece.star(&piece)?,
            _ => out.push(Factor { tag, piece }),
        }
        if let Some(last) = out.last() {
            if out.len() > 1 && is_identity(&last.piece) {
                out.pop();
                // Neighbours may now share a tag.
                if out.len() >= 2 && out[out.len() - 1].tag == out[out.len() - 2].tag {
                    let b = out.pop().unwrap();
                    let a = out.last_mut().unwrap();
                    a.piece = a.piece.star(&b.piece)?;
                }
            }
        }
    }
    if out.len() > 1 {
        if let Some(pos) = out.iter().position(|f| is_identity(&f.piece)) {
            out.remove(pos);
        }
    }
    for f in out.iter_mut() {
        f.piece = normalize(&f.piece).string;
        let inside = f.piece.maps().iter().all(|m| image_inside(m, &inter));
        if inside {
            f.tag = Side::A;
        }
    }
    Ok(TaggedWord { factors: out })
}

/// Equality of words after reduction; factors are compared by the string
/// prover inside their tag.
pub fn words_equal(w1: &TaggedWord, w2: &TaggedWord, cover: &Cover, bound: usize) -> Result<Verdict> {
    for w in [w1, w2] {
        for f in &w.factors {
            if f.piece.left_object().space().finite().map(|s| s.len()) != Some(cover.a.len()) {
                return Err(Error::CoverMismatch);
            }
        }
    }
    let (a, b) = (w1.flatten()?, w2.flatten()?);
    for (x, y) in [(a.left_object(), b.left_object()), (a.right_object(), b.right_object())] {
        if let Verdict::Refuted(r) = object_equal(x, y, bound)? {
            return Ok(Verdict::Refuted(format!("words run between different objects: {r}")));
        }
    }
    let (r1, r2) = (reduce_word(w1, cover)?, reduce_word(w2, cover)?);
    if r1.len() != r2.len() {
        return Ok(Verdict::Unknown(format!("reduced words have {} and {} factors", r1.len(), r2.len())));
    }
    for (k, (f, g)) in r1.factors.iter().zip(&r2.factors).enumerate() {
        if f.tag != g.tag {
            return Ok(Verdict::Unknown(format!("factor {} is tagged {} and {}", k + 1, f.tag, g.tag)));
        }
        if f.piece.same_maps(&g.piece) {
            continue;
        }
        let v = string_equiv(&f.piece, &g.piece, bound)?;
        if !v.is_proved() {
            return Ok(Verdict::Unknown(format!("factor {} undecided: {}", k + 1, v.name())));
        }
        let in_tag = match &v {
            Verdict::Proved(crate::homotopy::Evidence::Trace(t)) => trace_stays_in(&f.piece, t, f.tag.mask(cover))?,
            _ => true,
        };
        if !in_tag {
            return Ok(Verdict::Unknown(format!("factor {} only proved equal outside {}", k + 1, f.tag)));
        }
    }
    Ok(Verdict::Proved(crate::homotopy::Evidence::Exact))
}

fn trace_stays_in(start: &StringOfMaps, t: &Trace, mask: &[bool]) -> Result<bool> {
    let mut cur = start.clone();
    for step in &t.steps {
        cur = cur.apply(step)?;
        if !cur.maps().iter().all(|m| image_inside(m, mask)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `decompose(F)` against `decompose(step(F))`.
pub fn relation_preservation_test(
    s: &StringOfMaps,
    step: &Step,
    cover: &Cover,
    atlas: &[Vec<usize>],
    bound: usize,
) -> Result<Verdict> {
    let moved = s.apply(step).map_err(|e| Error::MoveInapplicable(format!("{step}: {e}")))?;
    let w1 = decompose(s, cover, atlas)?;
    let w2 = decompose(&moved, cover, atlas)?;
    words_equal(&w1, &w2, cover, bound)
}

/// The six-vertex example with `A = {x, x′, w, w′}` and `B = {y, y′, w, w′}`.
pub mod fixtures {
    use super::*;
    use crate::label::Label;

    pub const NAMES: [&str; 6] = ["w", "w'", "x", "x'", "y", "y'"];

    pub fn six_vertex() -> FiniteSpace {
        let edges = [
            ("w", "x"),
            ("w", "y"),
            ("w", "y'"),
            ("w", "w'"),
            ("x", "x'"),
            ("x", "y"),
            ("x", "y'"),
            ("x", "w'"),
            ("x'", "y'"),
            ("x'", "w'"),
            ("y'", "y"),
            ("y'", "w'"),
        ];
        FiniteSpace::build(
            NAMES.iter().map(|n| Label::Name(n.to_string())),
            edges.iter().map(|(a, b)| (Label::Name(a.to_string()), Label::Name(b.to_string()))),
        )
        .expect("fixture is valid")
    }

    pub fn v(name: &str) -> usize {
        NAMES.iter().position(|n| *n == name).expect("fixture vertex")
    }

    pub fn six_vertex_cover(space: &FiniteSpace) -> Cover {
        let a: Vec<usize> = ["x", "x'", "w", "w'"].iter().map(|n| v(n)).collect();
        let b: Vec<usize> = ["y", "y'", "w", "w'"].iter().map(|n| v(n)).collect();
        Cover::new(space, &a, &b).expect("fixture cover")
    }

    pub fn six_vertex_atlas() -> Vec<Vec<usize>> {
        vec![vec![v("w'")], vec![v("x")], vec![v("y")]]
    }

    /// The five-vertex cover that fails the second condition.
    pub fn five_vertex() -> (FiniteSpace, Cover) {
        let names = ["a", "b", "x", "y", "z"];
        let edges = [("a", "x"), ("a", "y"), ("a", "z"), ("b", "x"), ("b", "y"), ("b", "z"), ("a", "b")];
        let s = FiniteSpace::build(
            names.iter().map(|n| Label::Name(n.to_string())),
            edges.iter().map(|(a, b)| (Label::Name(a.to_string()), Label::Name(b.to_string()))),
        )
        .expect("fixture is valid");
        let idx = |n: &str| names.iter().position(|m| *m == n).unwrap();
        let a: Vec<usize> = ["a", "x", "y", "z"].iter().map(|n| idx(n)).collect();
        let b: Vec<usize> = ["b", "x", "y", "z"].iter().map(|n| idx(n)).collect();
        let c = Cover::new(&s, &a, &b).expect("fixture cover");
        (s, c)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn setup() -> (Arc<Space>, Cover, Vec<Vec<usize>>) {
        let s = six_vertex();
        let c = six_vertex_cover(&s);
        (Arc::new(Space::Finite(s)), c, six_vertex_atlas())
    }

    fn path(space: &Arc<Space>, names: &[&str]) -> ZMap {
        let p: Vec<i64> = names.iter().map(|n| v(n) as i64).collect();
        ZMap::from_path(space.clone(), 0, &p).unwrap()
    }

    #[test]
    fn hypotheses_on_fixtures() {
        let (space, cover, atlas) = setup();
        let r = verify_cover_hypotheses(space.finite().unwrap(), &cover, &atlas).unwrap();
        assert!(r.ok, "{r:?}");
        let singletons: Vec<Vec<usize>> = (0..6).map(|v| vec![v]).collect();
        assert!(verify_cover_hypotheses(space.finite().unwrap(), &cover, &singletons).unwrap().ok);
        let (s5, c5) = five_vertex();
        let r5 = verify_cover_hypotheses(&s5, &c5, &[(0..5).collect::<Vec<_>>()]).unwrap();
        assert!(!r5.ok && !r5.well_split[0].verdict);
        let missing = verify_cover_hypotheses(space.finite().unwrap(), &cover, &[vec![v("x")], vec![v("y")]]).unwrap();
        assert!(!missing.ok);
    }

    #[test]
    fn factorize_inserts_bridge() {
        let (space, cover, _) = setup();
        let f = path(&space, &["x'", "x", "y", "y'"]);
        let fz = factorize(&f, &cover).unwrap();
        assert_eq!(fz.string.len(), 2);
        assert_eq!(fz.tags, vec![Side::A, Side::B]);
        assert_eq!(fz.splits, vec![true, false]);
        assert_eq!(fz.string.maps()[0].right(), &Tail::Const(v("w") as i64));
        assert!(fz.trace.replay(&StringOfMaps::new(vec![f.clone()]).unwrap()).unwrap().same_maps(&fz.string));
        let inside = path(&space, &["x'", "x", "w'"]);
        assert_eq!(factorize(&inside, &cover).unwrap().string.len(), 1);
    }

    #[test]
    fn connectors_follow_intersection() {
        let (space, cover, atlas) = setup();
        let fin = space.finite().unwrap();
        assert_eq!(connector(fin, &cover, &atlas, v("w")).unwrap(), vec![v("w"), v("w'")]);
        assert_eq!(connector(fin, &cover, &atlas, v("w'")).unwrap(), vec![v("w'")]);
        assert!(matches!(connector(fin, &cover, &[vec![v("x")]], v("w")), Err(Error::NoAtlasMember(_))));
    }

    #[test]
    fn decompose_and_preserve() {
        let (space, cover, atlas) = setup();
        let f = path(&space, &["x", "y"]);
        let s = StringOfMaps::new(vec![f]).unwrap();
        let w = decompose(&s, &cover, &atlas).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w.factors[0].tag, Side::A);
        assert_eq!(w.factors[1].tag, Side::B);
        let back = w.flatten().unwrap();
        assert!(string_equiv(&back, &s, 64).unwrap().is_proved());
        let dup = Step::Point { map: 1, mv: PointMove::Add { at: 0, value: v("x") as i64 } };
        assert!(relation_preservation_test(&s, &dup, &cover, &atlas, 64).unwrap().is_proved());
    }
}
