//! Half-edge multigraphs with vertex weights.
//!
//! Edge `i` is stored as an ordered vertex pair `(u, v)` and owns the two
//! half-edges `2i` (attached to `u`) and `2i + 1` (attached to `v`). The
//! involution pairs `2i` with `2i + 1`; legs are not represented. A pair
//! `(v, v)` is a tadpole. Weight zero everywhere means "unweighted".

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfEdgeGraph {
    weights: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

/// Edge `i` of a graph viewed as a set of half-edges.
#[inline]
pub fn half_edges_of(edge: usize) -> (usize, usize) {
    (2 * edge, 2 * edge + 1)
}

/// The involution on half-edges.
#[inline]
pub fn opposite(half_edge: usize) -> usize {
    half_edge ^ 1
}

#[inline]
pub fn edge_of(half_edge: usize) -> usize {
    half_edge / 2
}

impl HalfEdgeGraph {
    /// Unweighted graph on `vertex_count` vertices.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::with_weights(vec![0; vertex_count], edges)
    }

    pub fn with_weights(weights: Vec<u32>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = weights.len();
        for &(u, v) in &edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        count: n,
                    });
                }
            }
        }
        Ok(HalfEdgeGraph { weights, edges })
    }

    pub(crate) fn from_parts_unchecked(weights: Vec<u32>, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges
            .iter()
            .all(|&(u, v)| u < weights.len() && v < weights.len()));
        HalfEdgeGraph { weights, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn total_weight(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// The incidence map: vertex carrying a half-edge.
    pub fn half_edge_vertex(&self, h: usize) -> usize {
        let (u, v) = self.edges[h / 2];
        if h.is_multiple_of(2) {
            u
        } else {
            v
        }
    }

    /// Half-edges attached to `v`, in increasing id order.
    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.half_edge_count())
            .filter(|&h| self.half_edge_vertex(h) == v)
            .collect()
    }

    pub fn is_tadpole(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    pub fn has_tadpole(&self) -> bool {
        (0..self.edge_count()).any(|e| self.is_tadpole(e))
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertex_count()];
        for &(u, v) in &self.edges {
            val[u] += 1;
            val[v] += 1;
        }
        val
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn min_valence(&self) -> usize {
        self.valences().into_iter().min().unwrap_or(0)
    }

    fn check_edge(&self, e: usize) -> Result<()> {
        if e >= self.edge_count() {
            return Err(Error::EdgeOutOfRange {
                edge: e,
                count: self.edge_count(),
            });
        }
        Ok(())
    }

    /// Connected components of the vertex set using only edges accepted by `keep`.
    pub(crate) fn components_with(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let n = self.vertex_count();
        let mut uf = UnionFind::new(n);
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if keep(e) {
                uf.union(u, v);
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut comp = vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = uf.find(x);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            comp[x] = label[r];
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() <= 1 {
            return true;
        }
        self.components_with(|_| true).iter().all(|&c| c == 0)
    }

    fn require_connected(&self) -> Result<()> {
        if self.vertex_count() == 0 || !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// First Betti number `e - v + 1` of a connected graph.
    pub fn loop_number(&self) -> Result<usize> {
        self.require_connected()?;
        Ok(self.edge_count() + 1 - self.vertex_count())
    }

    /// Loop number plus total vertex weight.
    pub fn genus(&self) -> Result<usize> {
        Ok(self.loop_number()? + self.total_weight() as usize)
    }

    /// Every vertex satisfies `2 w(v) + val(v) > 2`.
    pub fn is_stable(&self) -> bool {
        self.valences()
            .iter()
            .zip(&self.weights)
            .all(|(&val, &w)| 2 * w as usize + val > 2)
    }

    /// Contract a single edge.
    ///
    /// A non-tadpole merges its endpoints (the higher-numbered endpoint is
    /// removed, weights add). A tadpole is deleted and its vertex weight goes
    /// up by one, so the genus is preserved in both cases. Surviving edges keep
    /// their relative order and their half-edge orientation.
    pub fn contract_edge(&self, e: usize) -> Result<(HalfEdgeGraph, Morphism)> {
        self.check_edge(e)?;
        let (u, v) = self.edges[e];
        let n = self.vertex_count();
        let mut weights = self.weights.clone();
        let vertex_map: Vec<usize> = if u == v {
            weights[u] += 1;
            (0..n).collect()
        } else {
            let (keep, drop) = (u.min(v), u.max(v));
            weights[keep] += weights[drop];
            weights.remove(drop);
            (0..n)
                .map(|x| match x.cmp(&drop) {
                    std::cmp::Ordering::Less => x,
                    std::cmp::Ordering::Equal => keep,
                    std::cmp::Ordering::Greater => x - 1,
                })
                .collect()
        };
        let mut edges = Vec::with_capacity(self.edge_count() - 1);
        let mut half_edge_map = vec![None; self.half_edge_count()];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if i == e {
                continue;
            }
            let j = edges.len();
            edges.push((vertex_map[a], vertex_map[b]));
            half_edge_map[2 * i] = Some(2 * j);
            half_edge_map[2 * i + 1] = Some(2 * j + 1);
        }
        let graph = HalfEdgeGraph { weights, edges };
        let morphism = Morphism {
            kind: MorphismKind::EdgeCollapse,
            vertex_map,
            half_edge_map,
            collapsed_edges: vec![e],
        };
        Ok((graph, morphism))
    }

    /// Delete an edge, keeping every vertex. The result may be disconnected.
    pub fn delete_edge(&self, e: usize) -> Result<HalfEdgeGraph> {
        self.check_edge(e)?;
        let mut edges = self.edges.clone();
        edges.remove(e);
        Ok(HalfEdgeGraph {
            weights: self.weights.clone(),
            edges,
        })
    }

    /// Collapse every connected component of the edge subset to a vertex.
    /// A component with loop number `h` and weights `w_i` becomes a vertex of
    /// weight `h + sum w_i`.
    pub fn collapse_subgraph(&self, subset: &SubgraphMask) -> HalfEdgeGraph {
        let comp = self.components_with(|e| subset.contains(e));
        let k = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut weights = vec![0u32; k];
        let mut verts = vec![0i64; k];
        let mut inner = vec![0i64; k];
        for (x, &c) in comp.iter().enumerate() {
            weights[c] += self.weights[x];
            verts[c] += 1;
        }
        let mut edges = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if subset.contains(e) {
                inner[comp[u]] += 1;
            } else {
                edges.push((comp[u], comp[v]));
            }
        }
        for c in 0..k {
            weights[c] += (inner[c] - verts[c] + 1) as u32;
        }
        HalfEdgeGraph { weights, edges }
    }

    /// Relabel vertices by `vertex_perm` (old -> new) and edges by `edge_perm`
    /// (old -> new); `flips[e]` reverses the stored direction of old edge `e`.
    pub fn relabel(
        &self,
        vertex_perm: &[usize],
        edge_perm: &[usize],
        flips: &[bool],
    ) -> (HalfEdgeGraph, Morphism) {
        let n = self.vertex_count();
        let mut weights = vec![0; n];
        for v in 0..n {
            weights[vertex_perm[v]] = self.weights[v];
        }
        let mut edges = vec![(0, 0); self.edge_count()];
        let mut half_edge_map = vec![None; self.half_edge_count()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let j = edge_perm[e];
            let (a, b) = (vertex_perm[u], vertex_perm[v]);
            if flips[e] {
                edges[j] = (b, a);
                half_edge_map[2 * e] = Some(2 * j + 1);
                half_edge_map[2 * e + 1] = Some(2 * j);
            } else {
                edges[j] = (a, b);
                half_edge_map[2 * e] = Some(2 * j);
                half_edge_map[2 * e + 1] = Some(2 * j + 1);
            }
        }
        let m = Morphism {
            kind: MorphismKind::Isomorphism,
            vertex_map: vertex_perm.to_vec(),
            half_edge_map,
            collapsed_edges: vec![],
        };
        (HalfEdgeGraph { weights, edges }, m)
    }

    /// Bridges, tadpoles and vertex-irreducibility of a connected graph.
    pub fn structural_predicates(&self) -> Result<StructuralPredicates> {
        self.require_connected()?;
        let base = self
            .components_with(|_| true)
            .into_iter()
            .max()
            .unwrap_or(0)
            + 1;
        let bridges: Vec<usize> = (0..self.edge_count())
            .filter(|&e| !self.is_tadpole(e))
            .filter(|&e| {
                let comps = self.components_with(|f| f != e);
                comps.into_iter().max().unwrap_or(0) + 1 > base
            })
            .collect();
        let is_one_vertex_irreducible = (0..self.vertex_count()).all(|v| !self.is_cut_vertex(v));
        Ok(StructuralPredicates {
            has_tadpole: self.has_tadpole(),
            is_bridge_free: bridges.is_empty(),
            bridges,
            is_one_vertex_irreducible,
        })
    }

    /// `v` separates the graph: detaching each half-edge at `v` onto its own
    /// endpoint splits the edge set into at least two connected pieces.
    fn is_cut_vertex(&self, v: usize) -> bool {
        if self.edge_count() < 2 {
            return false;
        }
        // Vertices 0..n, plus one private endpoint per half-edge at v.
        let n = self.vertex_count();
        let mut uf = UnionFind::new(n + self.half_edge_count());
        let end = |h: usize| {
            let x = self.half_edge_vertex(h);
            if x == v {
                n + h
            } else {
                x
            }
        };
        for e in 0..self.edge_count() {
            uf.union(end(2 * e), end(2 * e + 1));
        }
        let first = uf.find(end(0));
        (1..self.edge_count()).any(|e| uf.find(end(2 * e)) != first)
    }

    /// Breadth-first spanning tree from vertex 0, scanning edges in index order.
    pub fn bfs_spanning_tree(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut tree = Vec::new();
        if n == 0 {
            return tree;
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if u != v {
                incident[u].push(e);
                incident[v].push(e);
            }
        }
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &e in &incident[x] {
                let (u, v) = self.edges[e];
                let y = if u == x { v } else { u };
                if !seen[y] {
                    seen[y] = true;
                    tree.push(e);
                    queue.push_back(y);
                }
            }
        }
        tree.sort_unstable();
        tree
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralPredicates {
    pub has_tadpole: bool,
    pub bridges: Vec<usize>,
    pub is_bridge_free: bool,
    pub is_one_vertex_irreducible: bool,
}

/// A set of edges of some parent graph, as a bit mask (at most 64 edges).
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct SubgraphMask(pub u64);

impl SubgraphMask {
    pub const EMPTY: SubgraphMask = SubgraphMask(0);

    pub fn full(edge_count: usize) -> Result<Self> {
        if edge_count > 64 {
            return Err(Error::TooManyEdges(edge_count));
        }
        Ok(SubgraphMask(if edge_count == 64 {
            u64::MAX
        } else {
            (1u64 << edge_count) - 1
        }))
    }

    pub fn from_edges(edges: impl IntoIterator<Item = usize>) -> Self {
        SubgraphMask(edges.into_iter().fold(0u64, |m, e| m | (1u64 << e)))
    }

    pub fn contains(&self, e: usize) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn with(&self, e: usize) -> Self {
        SubgraphMask(self.0 | 1u64 << e)
    }

    pub fn without(&self, e: usize) -> Self {
        SubgraphMask(self.0 & !(1u64 << e))
    }

    /// Edge indices in increasing order.
    pub fn edges(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut m = self.0;
        while m != 0 {
            out.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        out
    }

    /// Position of `e` among the members (0-based), if present.
    pub fn rank_of(&self, e: usize) -> Option<usize> {
        if !self.contains(e) {
            return None;
        }
        Some((self.0 & ((1u64 << e) - 1)).count_ones() as usize)
    }

    /// Acyclic in `parent` (no tadpoles, no cycles).
    pub fn is_forest(&self, parent: &HalfEdgeGraph) -> bool {
        let mut uf = UnionFind::new(parent.vertex_count());
        for e in self.edges() {
            let (u, v) = parent.endpoints(e);
            if !uf.union(u, v) {
                return false;
            }
        }
        true
    }

    /// Image of the subset under a morphism (collapsed edges are dropped).
    pub fn map(&self, m: &Morphism) -> SubgraphMask {
        SubgraphMask::from_edges(
            self.edges()
                .into_iter()
                .filter_map(|e| m.half_edge_map.get(2 * e).copied().flatten().map(|h| h / 2)),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MorphismKind {
    Isomorphism,
    EdgeCollapse,
    EdgeDeletion,
}

/// A graph morphism given on vertices and half-edges. Half-edges of collapsed
/// or deleted edges map to `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub kind: MorphismKind,
    pub vertex_map: Vec<usize>,
    pub half_edge_map: Vec<Option<usize>>,
    pub collapsed_edges: Vec<usize>,
}

impl Morphism {
    pub fn identity(g: &HalfEdgeGraph) -> Self {
        Morphism {
            kind: MorphismKind::Isomorphism,
            vertex_map: (0..g.vertex_count()).collect(),
            half_edge_map: (0..g.half_edge_count()).map(Some).collect(),
            collapsed_edges: vec![],
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Morphism) -> Morphism {
        let kind = match (self.kind, next.kind) {
            (MorphismKind::Isomorphism, k) | (k, MorphismKind::Isomorphism) => k,
            (k, _) => k,
        };
        // Collapsed edges are reported in the source numbering.
        let mut collapsed = self.collapsed_edges.clone();
        for (e, img) in self.half_edge_map.chunks(2).enumerate() {
            if let Some(h) = img[0] {
                if next.collapsed_edges.contains(&(h / 2)) {
                    collapsed.push(e);
                }
            }
        }
        collapsed.sort_unstable();
        Morphism {
            kind,
            vertex_map: self
                .vertex_map
                .iter()
                .map(|&v| next.vertex_map[v])
                .collect(),
            half_edge_map: self
                .half_edge_map
                .iter()
                .map(|h| h.and_then(|h| next.half_edge_map[h]))
                .collect(),
            collapsed_edges: collapsed,
        }
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<Morphism> {
        if self.kind != MorphismKind::Isomorphism {
            return Err(Error::InvalidMorphism(
                "only isomorphisms are invertible".into(),
            ));
        }
        let mut vertex_map = vec![usize::MAX; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            vertex_map[w] = v;
        }
        let mut half_edge_map = vec![None; self.half_edge_map.len()];
        for (h, &img) in self.half_edge_map.iter().enumerate() {
            let img = img.ok_or_else(|| Error::InvalidMorphism("partial half-edge map".into()))?;
            half_edge_map[img] = Some(h);
        }
        Ok(Morphism {
            kind: self.kind,
            vertex_map,
            half_edge_map,
            collapsed_edges: vec![],
        })
    }

    /// Induced map on edges: `(target edge, direction preserved)`.
    pub fn edge_images(&self) -> Vec<Option<(usize, bool)>> {
        self.half_edge_map
            .chunks(2)
            .map(|pair| pair[0].map(|h| (h / 2, h % 2 == 0)))
            .collect()
    }

    /// Checks the morphism law against `src` and `dst`: incidence and the
    /// involution commute with the maps; isomorphisms are bijective.
    pub fn is_valid(&self, src: &HalfEdgeGraph, dst: &HalfEdgeGraph) -> bool {
        if self.vertex_map.len() != src.vertex_count()
            || self.half_edge_map.len() != src.half_edge_count()
        {
            return false;
        }
        if self.vertex_map.iter().any(|&w| w >= dst.vertex_count()) {
            return false;
        }
        for h in 0..src.half_edge_count() {
            match (self.half_edge_map[h], self.half_edge_map[opposite(h)]) {
                (Some(a), Some(b)) => {
                    if a >= dst.half_edge_count() || opposite(a) != b {
                        return false;
                    }
                    if dst.half_edge_vertex(a) != self.vertex_map[src.half_edge_vertex(h)] {
                        return false;
                    }
                }
                (None, None) => {
                    if self.kind == MorphismKind::Isomorphism {
                        return false;
                    }
                    // A collapsed edge must have its endpoints identified.
                    if self.kind == MorphismKind::EdgeCollapse {
                        let (u, v) = src.endpoints(h / 2);
                        if self.vertex_map[u] != self.vertex_map[v] {
                            return false;
                        }
                    }
                }
                _ => return false,
            }
        }
        if self.kind == MorphismKind::Isomorphism {
            let mut seen_v = vec![false; dst.vertex_count()];
            for &w in &self.vertex_map {
                if std::mem::replace(&mut seen_v[w], true) {
                    return false;
                }
            }
            let mut seen_h = vec![false; dst.half_edge_count()];
            for h in self.half_edge_map.iter().flatten() {
                if std::mem::replace(&mut seen_h[*h], true) {
                    return false;
                }
            }
            return src.vertex_count() == dst.vertex_count()
                && src.edge_count() == dst.edge_count();
        }
        true
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Standard families used throughout the tests and the verification suites.
pub mod families {
    use super::HalfEdgeGraph;

    /// Banana `B_n`: two vertices joined by `n` parallel edges.
    pub fn banana(n: usize) -> HalfEdgeGraph {
        HalfEdgeGraph::from_parts_unchecked(vec![0, 0], vec![(0, 1); n])
    }

    pub fn theta() -> HalfEdgeGraph {
        banana(3)
    }

    /// Cycle `C_n` on `n` vertices; `C_1` is a single tadpole.
    pub fn cycle(n: usize) -> HalfEdgeGraph {
        assert!(n >= 1);
        let edges = (0..n)
            .map(|i| (i.min((i + 1) % n), i.max((i + 1) % n)))
            .collect();
        HalfEdgeGraph::from_parts_unchecked(vec![0; n], edges)
    }

    /// Wheel `W_n`: hub 0, rim vertices 1..=n.
    pub fn wheel(n: usize) -> HalfEdgeGraph {
        assert!(n >= 1);
        let mut edges: Vec<(usize, usize)> = (1..=n).map(|i| (0, i)).collect();
        for i in 1..=n {
            let j = if i == n { 1 } else { i + 1 };
            edges.push((i.min(j), i.max(j)));
        }
        HalfEdgeGraph::from_parts_unchecked(vec![0; n + 1], edges)
    }

    /// Rose `R_n`: one vertex with `n` tadpoles.
    pub fn rose(n: usize) -> HalfEdgeGraph {
        HalfEdgeGraph::from_parts_unchecked(vec![0], vec![(0, 0); n])
    }

    /// Two tadpoles joined by a bridge (edge 1).
    pub fn dumbbell() -> HalfEdgeGraph {
        HalfEdgeGraph::from_parts_unchecked(vec![0, 0], vec![(0, 0), (0, 1), (1, 1)])
    }

    pub fn complete(n: usize) -> HalfEdgeGraph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        HalfEdgeGraph::from_parts_unchecked(vec![0; n], edges)
    }
}
