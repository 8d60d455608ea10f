//! Semi-coarse spaces and their constructions.
//!
//! A finite space is stored as its union edge set: a reflexive symmetric
//! relation with the diagonal left implicit. Vertex indices follow label
//! order, so "least vertex" and "least index" agree everywhere.
//!
//! The integer line is kept intensional. At a finite scale a pair is
//! controlled when the two points are at most `scale` apart; at infinite
//! scale every finite pair set is controlled.

use crate::error::{Error, Result};
use crate::label::Label;
use crate::uf::UnionFind;
use std::collections::BTreeMap;

/// Scale of the integer line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scale {
    Finite(u64),
    Inf,
}

/// A finite reflexive symmetric graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    labels: Vec<Label>,
    adj: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Space {
    Finite(FiniteSpace),
    IntLine(Scale),
}

impl FiniteSpace {
    /// Builds a space from labelled vertices and edges. Duplicate vertices
    /// and edges collapse, loops are dropped.
    pub fn build<V, E>(vertices: V, edges: E) -> Result<FiniteSpace>
    where
        V: IntoIterator<Item = Label>,
        E: IntoIterator<Item = (Label, Label)>,
    {
        let mut labels: Vec<Label> = vertices.into_iter().collect();
        labels.sort();
        labels.dedup();
        let index: BTreeMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let ia = *index.get(&a).ok_or_else(|| Error::UnknownVertex(a.to_string()))?;
            let ib = *index.get(&b).ok_or_else(|| Error::UnknownVertex(b.to_string()))?;
            pairs.push((ia, ib));
        }
        let n = labels.len();
        let mut s = FiniteSpace { labels, adj: vec![false; n * n] };
        for (a, b) in pairs {
            s.set_edge(a, b);
        }
        Ok(s)
    }

    /// Builds from labels in any order and edges between their positions.
    pub fn from_indexed(labels: Vec<Label>, edges: &[(usize, usize)]) -> FiniteSpace {
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        let mut rank = vec![0; labels.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let n = labels.len();
        let sorted: Vec<Label> = order.iter().map(|&i| labels[i].clone()).collect();
        let mut s = FiniteSpace { labels: sorted, adj: vec![false; n * n] };
        for &(a, b) in edges {
            s.set_edge(rank[a], rank[b]);
        }
        s
    }

    /// Vertices `0..n` labelled by integers, with the given edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> FiniteSpace {
        let labels = (0..n as i64).map(Label::Int).collect();
        FiniteSpace::from_indexed(labels, edges)
    }

    fn set_edge(&mut self, a: usize, b: usize) {
        if a != b {
            let n = self.labels.len();
            self.adj[a * n + b] = true;
            self.adj[b * n + a] = true;
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &Label {
        &self.labels[v]
    }

    pub fn index_of(&self, l: &Label) -> Option<usize> {
        self.labels.binary_search(l).ok()
    }

    pub fn vertex(&self, l: &Label) -> Result<usize> {
        self.index_of(l).ok_or_else(|| Error::UnknownVertex(l.to_string()))
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.labels.len() + b]
    }

    /// Edge or diagonal.
    #[inline]
    pub fn controlled(&self, a: usize, b: usize) -> bool {
        a == b || self.adj[a * self.labels.len() + b]
    }

    /// Edges as pairs `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.is_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count() / 2
    }

    /// Closed neighbourhood of `v`, ascending.
    pub fn closed_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.controlled(u, v)).collect()
    }

    /// Edge relation as a boolean matrix including the diagonal.
    pub fn control_matrix(&self) -> Vec<bool> {
        let n = self.len();
        let mut m = self.adj.clone();
        for i in 0..n {
            m[i * n + i] = true;
        }
        m
    }

    pub fn labels_of(&self, vs: &[usize]) -> Vec<Label> {
        vs.iter().map(|&v| self.labels[v].clone()).collect()
    }
}

impl Space {
    pub fn finite(&self) -> Option<&FiniteSpace> {
        match self {
            Space::Finite(f) => Some(f),
            Space::IntLine(_) => None,
        }
    }

    /// Whether a single pair is controlled. Finite values are vertex indices.
    #[inline]
    pub fn controlled(&self, a: i64, b: i64) -> bool {
        match self {
            Space::Finite(f) => f.controlled(a as usize, b as usize),
            Space::IntLine(Scale::Finite(n)) => a.abs_diff(b) <= *n,
            Space::IntLine(Scale::Inf) => true,
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        match self {
            Space::Finite(f) => v >= 0 && (v as usize) < f.len(),
            Space::IntLine(_) => true,
        }
    }

    /// Human-readable name of a value.
    pub fn show(&self, v: i64) -> String {
        match self {
            Space::Finite(f) if v >= 0 && (v as usize) < f.len() => f.label(v as usize).to_string(),
            _ => v.to_string(),
        }
    }
}

/// Whether every pair of the set is controlled.
pub fn is_controlled(space: &Space, pairs: &[(i64, i64)]) -> Result<bool> {
    for &(a, b) in pairs {
        for v in [a, b] {
            if !space.contains(v) {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
    }
    Ok(match space {
        Space::IntLine(Scale::Inf) => true,
        _ => pairs.iter().all(|&(a, b)| space.controlled(a, b)),
    })
}

/// A total assignment between finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMap {
    pub domain: FiniteSpace,
    pub codomain: FiniteSpace,
    pub assign: Vec<usize>,
}

impl FiniteMap {
    pub fn new(domain: FiniteSpace, codomain: FiniteSpace, assign: Vec<usize>) -> Result<FiniteMap> {
        if assign.len() != domain.len() {
            return Err(Error::Validation(format!(
                "assignment has {} entries for {} vertices",
                assign.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = assign.iter().find(|&&v| v >= codomain.len()) {
            return Err(Error::UnknownVertex(bad.to_string()));
        }
        Ok(FiniteMap { domain, codomain, assign })
    }

    pub fn identity(space: &FiniteSpace) -> FiniteMap {
        FiniteMap { domain: space.clone(), codomain: space.clone(), assign: (0..space.len()).collect() }
    }

    /// Every edge goes to an edge or to the diagonal.
    pub fn is_bornologous(&self) -> bool {
        self.first_violation().is_none()
    }

    pub fn first_violation(&self) -> Option<(usize, usize)> {
        self.domain
            .edges()
            .into_iter()
            .find(|&(a, b)| !self.codomain.controlled(self.assign[a], self.assign[b]))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FiniteMap) -> Result<FiniteMap> {
        if self.codomain != other.domain {
            return Err(Error::SpaceMismatch);
        }
        let assign = self.assign.iter().map(|&v| other.assign[v]).collect();
        Ok(FiniteMap { domain: self.domain.clone(), codomain: other.codomain.clone(), assign })
    }
}

/// Induced subgraph on the given vertices.
pub fn subspace(space: &FiniteSpace, vertices: &[usize]) -> Result<FiniteSpace> {
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    vs.dedup();
    if let Some(&bad) = vs.iter().find(|&&v| v >= space.len()) {
        return Err(Error::UnknownVertex(bad.to_string()));
    }
    let mut edges = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        for (j, &b) in vs.iter().enumerate().skip(i + 1) {
            if space.is_edge(a, b) {
                edges.push((i, j));
            }
        }
    }
    Ok(FiniteSpace::from_indexed(space.labels_of(&vs), &edges))
}

/// Strong product: both coordinates diagonal-or-edge, pair off-diagonal.
pub fn product(x: &FiniteSpace, y: &FiniteSpace) -> FiniteSpace {
    let (n, m) = (x.len(), y.len());
    let mut labels = Vec::with_capacity(n * m);
    for a in 0..n {
        for b in 0..m {
            labels.push(Label::pair(x.label(a).clone(), y.label(b).clone()));
        }
    }
    let mut edges = Vec::new();
    for p in 0..n * m {
        for q in p + 1..n * m {
            let (a, b) = (p / m, p % m);
            let (c, d) = (q / m, q % m);
            if x.controlled(a, c) && y.controlled(b, d) {
                edges.push((p, q));
            }
        }
    }
    FiniteSpace::from_indexed(labels, &edges)
}

/// Quotient along a surjection onto `targets`; diagonal images are dropped.
pub fn quotient(space: &FiniteSpace, assign: &[usize], targets: Vec<Label>) -> Result<FiniteSpace> {
    if assign.len() != space.len() {
        return Err(Error::Validation("assignment is not total".into()));
    }
    let mut hit = vec![false; targets.len()];
    for &t in assign {
        if t >= targets.len() {
            return Err(Error::UnknownVertex(t.to_string()));
        }
        hit[t] = true;
    }
    if let Some(i) = hit.iter().position(|h| !h) {
        return Err(Error::NotSurjective(targets[i].to_string()));
    }
    let edges: Vec<(usize, usize)> = space.edges().into_iter().map(|(a, b)| (assign[a], assign[b])).collect();
    Ok(FiniteSpace::from_indexed(targets, &edges))
}

/// Identifies the given pairs (and their closure). Classes are named by
/// their least original label. Returns the quotient and the projection.
pub fn identify(space: &FiniteSpace, pairs: &[(usize, usize)]) -> (FiniteSpace, Vec<usize>) {
    let n = space.len();
    let mut uf = UnionFind::new(n);
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    // The least index of a class is its least label.
    let mut class_min = vec![usize::MAX; n];
    for v in 0..n {
        let r = uf.find(v);
        class_min[r] = class_min[r].min(v);
    }
    let mut reps: Vec<usize> = (0..n).filter(|&v| class_min[uf.find(v)] == v).collect();
    reps.sort_unstable();
    let mut slot = vec![0; n];
    for (i, &r) in reps.iter().enumerate() {
        slot[r] = i;
    }
    let proj: Vec<usize> = (0..n).map(|v| slot[class_min[uf.find(v)]]).collect();
    let targets = space.labels_of(&reps);
    let q = quotient(space, &proj, targets).expect("projection onto class representatives is surjective");
    (q, proj)
}

/// Tagged disjoint union. Part `i` occupies a contiguous index block.
pub fn disjoint_union(spaces: &[FiniteSpace]) -> FiniteSpace {
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut offset = 0;
    for (t, s) in spaces.iter().enumerate() {
        labels.extend(s.labels().iter().map(|l| Label::tagged(t, l.clone())));
        edges.extend(s.edges().into_iter().map(|(a, b)| (a + offset, b + offset)));
        offset += s.len();
    }
    FiniteSpace::from_indexed(labels, &edges)
}

/// Result of gluing two spaces along a common source.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub space: FiniteSpace,
    pub from_a: FiniteMap,
    pub from_b: FiniteMap,
}

/// Glues `a` and `b` along `f: c → a` and `g: c → b`.
pub fn pushout(a: &FiniteSpace, b: &FiniteSpace, f: &FiniteMap, g: &FiniteMap) -> Result<Pushout> {
    if f.codomain != *a || g.codomain != *b || f.domain != g.domain {
        return Err(Error::SpaceMismatch);
    }
    for m in [f, g] {
        if let Some((x, y)) = m.first_violation() {
            return Err(Error::NotBornologous(m.domain.label(x).to_string(), m.domain.label(y).to_string()));
        }
    }
    let sum = disjoint_union(&[a.clone(), b.clone()]);
    let off = a.len();
    let pairs: Vec<(usize, usize)> = (0..f.domain.len()).map(|c| (f.assign[c], g.assign[c] + off)).collect();
    let (space, proj) = identify(&sum, &pairs);
    let from_a = FiniteMap::new(a.clone(), space.clone(), (0..a.len()).map(|v| proj[v]).collect())?;
    let from_b = FiniteMap::new(b.clone(), space.clone(), (0..b.len()).map(|v| proj[v + off]).collect())?;
    debug_assert!(from_a.is_bornologous() && from_b.is_bornologous());
    Ok(Pushout { space, from_a, from_b })
}

/// How many times to compose the edge relation with itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    Times(u32),
    Inf,
}

/// Product extension: `E∘E` once per step, or the component-complete
/// relation for `Inf`.
pub fn product_extension(space: &FiniteSpace, k: Extension) -> FiniteSpace {
    match k {
        Extension::Inf => {
            let mut edges = Vec::new();
            for comp in components(space) {
                for (i, &a) in comp.iter().enumerate() {
                    for &b in &comp[i + 1..] {
                        edges.push((a, b));
                    }
                }
            }
            FiniteSpace::from_indexed(space.labels().to_vec(), &edges)
        }
        Extension::Times(t) => {
            let mut cur = space.clone();
            for _ in 0..t {
                let next = compose_once(&cur);
                if next == cur {
                    break;
                }
                cur = next;
            }
            cur
        }
    }
}

fn compose_once(space: &FiniteSpace) -> FiniteSpace {
    let n = space.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if (0..n).any(|m| space.controlled(a, m) && space.controlled(m, b)) {
                edges.push((a, b));
            }
        }
    }
    FiniteSpace::from_indexed(space.labels().to_vec(), &edges)
}

/// Closed under composition, i.e. the relation with the diagonal is an
/// equivalence relation.
pub fn is_coarse(space: &Space) -> bool {
    match space {
        Space::IntLine(Scale::Inf) => true,
        Space::IntLine(Scale::Finite(_)) => false,
        Space::Finite(f) => {
            let n = f.len();
            for a in 0..n {
                for m in 0..n {
                    if !f.is_edge(a, m) {
                        continue;
                    }
                    for b in 0..n {
                        if f.is_edge(m, b) && !f.controlled(a, b) {
                            return false;
                        }
                    }
                }
            }
            true
        }
    }
}

/// Connected components, each ascending, ordered by least vertex.
pub fn components(space: &FiniteSpace) -> Vec<Vec<usize>> {
    components_within(space, &vec![true; space.len()])
}

/// Components of the subgraph induced on `mask`.
pub fn components_within(space: &FiniteSpace, mask: &[bool]) -> Vec<Vec<usize>> {
    let n = space.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if !mask[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for u in 0..n {
                if mask[u] && !seen[u] && space.is_edge(u, v) {
                    seen[u] = true;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Whether the induced subgraph on `mask` is connected. The empty set counts
/// as connected.
pub fn is_connected_within(space: &FiniteSpace, mask: &[bool]) -> bool {
    components_within(space, mask).len() <= 1
}

/// Connectedness. The integer line is connected at every scale.
pub fn is_connected(space: &Space) -> bool {
    match space {
        Space::Finite(f) => components(f).len() <= 1,
        Space::IntLine(_) => true,
    }
}

/// Shortest path inside `mask` from `from` to `to`, ties broken toward
/// smaller vertices.
pub fn shortest_path_within(space: &FiniteSpace, mask: &[bool], from: usize, to: usize) -> Option<Vec<usize>> {
    if !mask[from] || !mask[to] {
        return None;
    }
    let n = space.len();
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for u in 0..n {
            if mask[u] && !seen[u] && space.is_edge(u, v) {
                seen[u] = true;
                prev[u] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

/// Common small graphs.
pub mod graphs {
    use super::FiniteSpace;

    pub fn cycle(n: usize) -> FiniteSpace {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        FiniteSpace::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> FiniteSpace {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteSpace::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> FiniteSpace {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        FiniteSpace::from_edges(n, &edges)
    }

    pub fn point() -> FiniteSpace {
        FiniteSpace::from_edges(1, &[])
    }

    /// Graph on `n` vertices whose edges are the set bits of `mask`, in the
    /// order (0,1),(0,2),…,(1,2),… .
    pub fn from_mask(n: usize, mask: u64) -> FiniteSpace {
        let mut edges = Vec::new();
        let mut bit = 0;
        for a in 0..n {
            for b in a + 1..n {
                if mask >> bit & 1 == 1 {
                    edges.push((a, b));
                }
                bit += 1;
            }
        }
        FiniteSpace::from_edges(n, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use graphs::*;

    fn lbl(v: i64) -> Label {
        Label::Int(v)
    }

    #[test]
    fn builds_four_cycle() {
        let c4 = FiniteSpace::build(
            (0..4).map(lbl),
            [(0, 1), (1, 2), (2, 3), (3, 0)].into_iter().map(|(a, b)| (lbl(a), lbl(b))),
        )
        .unwrap();
        assert_eq!(c4, cycle(4));
        assert_eq!(c4.edge_count(), 4);
    }

    #[test]
    fn symmetric_duplicates_are_stored_once() {
        let s = FiniteSpace::build((0..2).map(lbl), [(lbl(0), lbl(1)), (lbl(1), lbl(0))]).unwrap();
        assert_eq!(s.edges(), vec![(0, 1)]);
    }

    #[test]
    fn unknown_vertex_is_rejected() {
        let e = FiniteSpace::build((0..2).map(lbl), [(lbl(0), lbl(5))]).unwrap_err();
        assert_eq!(e, Error::UnknownVertex("5".into()));
    }

    #[test]
    fn controlled_sets() {
        let c4 = Space::Finite(cycle(4));
        assert!(is_controlled(&c4, &[(0, 1), (2, 3)]).unwrap());
        assert!(!is_controlled(&c4, &[(0, 2)]).unwrap());
        assert!(is_controlled(&c4, &[(3, 3)]).unwrap());
        let zinf = Space::IntLine(Scale::Inf);
        assert!(is_controlled(&zinf, &[(-1000, 1000)]).unwrap());
        let z2 = Space::IntLine(Scale::Finite(2));
        assert!(is_controlled(&z2, &[(0, 2)]).unwrap());
        assert!(!is_controlled(&z2, &[(0, 3)]).unwrap());
    }

    #[test]
    fn bornologous_maps() {
        let c4 = cycle(4);
        assert!(FiniteMap::identity(&c4).is_bornologous());
        assert!(FiniteMap::new(c4.clone(), c4.clone(), vec![0; 4]).unwrap().is_bornologous());
        let p3 = path(3);
        let m = FiniteMap::new(c4, p3, vec![0, 1, 2, 0]).unwrap();
        assert_eq!(m.first_violation(), Some((2, 3)));
    }

    #[test]
    fn subspaces() {
        let c4 = cycle(4);
        assert_eq!(subspace(&c4, &[0, 1]).unwrap().edge_count(), 1);
        let s = subspace(&c4, &[0, 2]).unwrap();
        assert_eq!((s.len(), s.edge_count()), (2, 0));
        assert_eq!(subspace(&c4, &[0, 1, 2, 3]).unwrap(), c4);
    }

    #[test]
    fn products() {
        let p2 = path(2);
        let sq = product(&p2, &p2);
        assert_eq!((sq.len(), sq.edge_count()), (4, 6));
        let c4 = cycle(4);
        assert_eq!(product(&c4, &point()).edge_count(), 4);
        assert_eq!(product(&point(), &c4).len(), 4);
    }

    #[test]
    fn quotient_of_four_cycle() {
        let (q, proj) = identify(&cycle(4), &[(0, 2)]);
        assert_eq!(q.labels(), &[lbl(0), lbl(1), lbl(3)]);
        assert_eq!(proj, vec![0, 1, 0, 2]);
        assert_eq!(q.edges(), vec![(0, 1), (0, 2)]);
        let (one, _) = identify(&cycle(4), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!((one.len(), one.edge_count()), (1, 0));
        assert_eq!(identify(&cycle(4), &[]).0, cycle(4));
    }

    #[test]
    fn quotient_requires_surjection() {
        let e = quotient(&path(2), &[0, 0], vec![lbl(0), lbl(1)]).unwrap_err();
        assert_eq!(e, Error::NotSurjective("1".into()));
    }

    #[test]
    fn disjoint_unions() {
        let u = disjoint_union(&[cycle(4), path(2)]);
        assert_eq!((u.len(), u.edge_count()), (6, 5));
        let kk = disjoint_union(&[point(), point()]);
        assert_eq!(components(&kk).len(), 2);
        assert_eq!(disjoint_union(&[cycle(3)]).edge_count(), 3);
    }

    #[test]
    fn pushout_glues_two_edges() {
        let a = path(2);
        let b = FiniteSpace::from_edges(2, &[(0, 1)]);
        let c = point();
        let f = FiniteMap::new(c.clone(), a.clone(), vec![1]).unwrap();
        let g = FiniteMap::new(c, b.clone(), vec![0]).unwrap();
        let po = pushout(&a, &b, &f, &g).unwrap();
        assert_eq!((po.space.len(), po.space.edge_count()), (3, 2));
        assert!(!is_coarse(&Space::Finite(po.space.clone())));
        assert_eq!(components(&po.space).len(), 1);
    }

    #[test]
    fn product_extension_of_path() {
        let p4 = path(4);
        let e = product_extension(&p4, Extension::Times(1));
        assert_eq!(e.edges(), vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let full = product_extension(&p4, Extension::Inf);
        assert_eq!(full, complete(4));
        assert!(is_coarse(&Space::Finite(full)));
    }

    #[test]
    fn coarseness() {
        assert!(is_coarse(&Space::Finite(complete(4))));
        assert!(!is_coarse(&Space::Finite(cycle(4))));
        assert!(is_coarse(&Space::IntLine(Scale::Inf)));
        assert!(!is_coarse(&Space::IntLine(Scale::Finite(3))));
    }

    #[test]
    fn shortest_paths() {
        let c5 = cycle(5);
        let all = vec![true; 5];
        assert_eq!(shortest_path_within(&c5, &all, 0, 2), Some(vec![0, 1, 2]));
        assert_eq!(shortest_path_within(&c5, &all, 0, 3), Some(vec![0, 4, 3]));
        let mut m = all.clone();
        m[1] = false;
        assert_eq!(shortest_path_within(&c5, &m, 0, 2), Some(vec![0, 4, 3, 2]));
    }
}
