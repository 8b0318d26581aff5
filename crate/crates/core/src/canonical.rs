//! Canonical forms, certificates and automorphism groups.
//!
//! Plain (and edge-colored) graphs are canonicalized at the vertex level by
//! partition refinement plus individualization, keeping the lexicographically
//! smallest adjacency code; the half-edge structure is recovered by matching
//! parallel classes in index order. Ribbon graphs are labeled by a
//! breadth-first walk over `sigma` and `epsilon` from every starting half-edge.

use std::collections::HashMap;
use std::fmt::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{HalfEdgeGraph, Morphism, MorphismKind, SubgraphMask};
use crate::orientation::{morphism_sign, reference_orientation_for, Orientation, Parity};
use crate::ribbon::RibbonStructure;

const COLOR: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub graph: HalfEdgeGraph,
    /// The distinguished edge subset, for pairs.
    pub subset: Option<SubgraphMask>,
    pub ribbon: Option<RibbonStructure>,
    pub certificate: String,
    /// Isomorphism from the input onto `graph`.
    #[serde(skip)]
    pub to_canonical: Morphism,
}

impl CanonicalForm {
    /// The reference orientation attached to this isomorphism class.
    pub fn reference_orientation(&self) -> Orientation {
        reference_orientation(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroup {
    pub generators: Vec<Morphism>,
    pub order: u128,
}

pub fn reference_orientation(c: &CanonicalForm) -> Orientation {
    reference_orientation_for(&c.graph, c.subset.as_ref())
}

pub fn canonical_form(
    graph: &HalfEdgeGraph,
    ribbon: Option<&RibbonStructure>,
) -> Result<CanonicalForm> {
    Ok(analyze(graph, None, ribbon)?.0)
}

/// Canonical form of the pair `(G, subset)`: isomorphisms must carry the
/// subset onto the subset.
pub fn canonical_pair(graph: &HalfEdgeGraph, subset: &SubgraphMask) -> Result<CanonicalForm> {
    Ok(analyze(graph, Some(subset), None)?.0)
}

pub fn automorphism_group(
    graph: &HalfEdgeGraph,
    ribbon: Option<&RibbonStructure>,
) -> Result<AutGroup> {
    Ok(analyze(graph, None, ribbon)?.1)
}

/// The stabilizer of `subset` in `Aut(G)`.
pub fn pair_automorphisms(graph: &HalfEdgeGraph, subset: &SubgraphMask) -> Result<AutGroup> {
    Ok(analyze(graph, Some(subset), None)?.1)
}

/// Induced edge map of a morphism (`None` on collapsed or deleted edges).
pub fn edge_action(m: &Morphism) -> Vec<Option<usize>> {
    m.edge_images()
        .into_iter()
        .map(|x| x.map(|(e, _)| e))
        .collect()
}

/// Whether some automorphism (stabilizing `forest` when given) reverses the
/// orientation of the given parity.
pub fn has_odd_symmetry(
    graph: &HalfEdgeGraph,
    parity: Parity,
    forest: Option<&SubgraphMask>,
) -> Result<bool> {
    let aut = match forest {
        Some(f) => pair_automorphisms(graph, f)?,
        None => automorphism_group(graph, None)?,
    };
    odd_symmetry_in(&aut, graph, parity, forest)
}

/// Checks the generators of an already computed automorphism group.
pub fn odd_symmetry_in(
    aut: &AutGroup,
    graph: &HalfEdgeGraph,
    parity: Parity,
    subset: Option<&SubgraphMask>,
) -> Result<bool> {
    let eta = reference_orientation_for(graph, subset);
    for m in &aut.generators {
        if morphism_sign(m, parity, graph, &eta, graph, &eta)? < 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Canonical form and automorphism group in one search.
pub fn analyze(
    graph: &HalfEdgeGraph,
    subset: Option<&SubgraphMask>,
    ribbon: Option<&RibbonStructure>,
) -> Result<(CanonicalForm, AutGroup)> {
    if graph.vertex_count() == 0 || !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(s) = subset {
        if graph.edge_count() > 64 {
            return Err(Error::TooManyEdges(graph.edge_count()));
        }
        if let Some(&e) = s.edges().last() {
            if e >= graph.edge_count() {
                return Err(Error::EdgeOutOfRange {
                    edge: e,
                    count: graph.edge_count(),
                });
            }
        }
    }
    match ribbon {
        Some(r) if graph.edge_count() > 0 => {
            if subset.is_some() {
                return Err(Error::InconsistentSpec(
                    "ribbon pairs are not supported".into(),
                ));
            }
            analyze_ribbon(graph, r)
        }
        Some(_) => {
            let (mut form, aut) = analyze_plain(graph, None);
            form.ribbon = Some(RibbonStructure::new(&form.graph, vec![Vec::new()])?);
            form.certificate.push_str(";r=");
            Ok((form, aut))
        }
        None => Ok(analyze_plain(graph, subset)),
    }
}

struct Search<'a> {
    n: usize,
    adj: Vec<u32>,
    weights: &'a [u32],
    best: Option<(Vec<u32>, Vec<usize>)>,
    ties: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn signature(&self, v: usize, cells: &[Vec<usize>]) -> Vec<u32> {
        let mut sig = Vec::with_capacity(self.n);
        for cell in cells {
            let start = sig.len();
            sig.extend(cell.iter().map(|&u| self.adj[v * self.n + u]));
            sig[start..].sort_unstable();
        }
        sig
    }

    fn refine(&self, cells: &mut Vec<Vec<usize>>) {
        loop {
            let mut next = Vec::with_capacity(self.n);
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, usize)> = cell
                    .iter()
                    .map(|&v| (self.signature(v, cells), v))
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|k| k.1).collect());
                        start = i;
                    }
                }
            }
            let stable = next.len() == cells.len();
            *cells = next;
            if stable {
                return;
            }
        }
    }

    fn search(&mut self, cells: Vec<Vec<usize>>) {
        match cells.iter().position(|c| c.len() > 1) {
            Some(idx) => {
                for &v in &cells[idx] {
                    let mut next = Vec::with_capacity(cells.len() + 1);
                    next.extend_from_slice(&cells[..idx]);
                    next.push(vec![v]);
                    next.push(cells[idx].iter().copied().filter(|&u| u != v).collect());
                    next.extend_from_slice(&cells[idx + 1..]);
                    self.refine(&mut next);
                    self.search(next);
                }
            }
            None => {
                let labeling: Vec<usize> = cells.iter().map(|c| c[0]).collect();
                let code = self.code(&labeling);
                match &self.best {
                    Some((best, _)) if code > *best => {}
                    Some((best, _)) if code == *best => self.ties.push(labeling),
                    _ => {
                        self.best = Some((code, labeling));
                        self.ties.clear();
                    }
                }
            }
        }
    }

    fn code(&self, labeling: &[usize]) -> Vec<u32> {
        let n = self.n;
        let mut code = Vec::with_capacity(n + n * (n + 1) / 2);
        code.extend(labeling.iter().map(|&v| self.weights[v]));
        for i in 0..n {
            for j in i..n {
                code.push(self.adj[labeling[i] * n + labeling[j]]);
            }
        }
        code
    }
}

fn analyze_plain(
    graph: &HalfEdgeGraph,
    subset: Option<&SubgraphMask>,
) -> (CanonicalForm, AutGroup) {
    let n = graph.vertex_count();
    let colored = |e: usize| subset.is_some_and(|s| s.contains(e));
    let mut adj = vec![0u32; n * n];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        let c = if colored(e) { COLOR } else { 1 };
        adj[u * n + v] += c;
        if u != v {
            adj[v * n + u] += c;
        }
    }
    let valences = graph.valences();
    let mut initial: Vec<((u32, u32, usize), usize)> = (0..n)
        .map(|v| ((graph.weight(v), adj[v * n + v], valences[v]), v))
        .collect();
    initial.sort();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for (i, &(key, v)) in initial.iter().enumerate() {
        if i > 0 && initial[i - 1].0 == key {
            cells.last_mut().expect("nonempty").push(v);
        } else {
            cells.push(vec![v]);
        }
    }
    let mut search = Search {
        n,
        adj,
        weights: graph.weights(),
        best: None,
        ties: Vec::new(),
    };
    search.refine(&mut cells);
    search.search(cells);
    let (_, best) = search.best.take().expect("at least one leaf");

    let mut pos = vec![0; n];
    for (i, &v) in best.iter().enumerate() {
        pos[v] = i;
    }
    let mut edges = Vec::with_capacity(graph.edge_count());
    let mut colored_edges = Vec::new();
    for i in 0..n {
        for j in i..n {
            let code = search.adj[best[i] * n + best[j]];
            for _ in 0..code % COLOR {
                edges.push((i, j));
            }
            for _ in 0..code / COLOR {
                colored_edges.push(edges.len());
                edges.push((i, j));
            }
        }
    }
    let weights: Vec<u32> = best.iter().map(|&v| graph.weight(v)).collect();
    let canon = HalfEdgeGraph::from_parts_unchecked(weights, edges);
    let canon_subset = subset.map(|_| SubgraphMask::from_edges(colored_edges));

    let lift = |labeling: &[usize]| -> Morphism {
        let mut pos = vec![0; n];
        for (i, &v) in labeling.iter().enumerate() {
            pos[v] = i;
        }
        lift_vertex_map(graph, &canon, canon_subset.as_ref(), subset, &pos)
    };
    let to_canonical = lift(&best);
    debug_assert!(to_canonical.is_valid(graph, &canon));

    let back = to_canonical.inverse().expect("isomorphism");
    let mut generators: Vec<Morphism> = search
        .ties
        .iter()
        .map(|lab| lift(lab).then(&back))
        .collect();
    let mut order = (search.ties.len() + 1) as u128;

    // Automorphisms fixing every vertex: permute parallel edges, flip tadpoles.
    let mut classes: HashMap<(usize, usize, bool), Vec<usize>> = HashMap::new();
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        classes
            .entry((u.min(v), u.max(v), colored(e)))
            .or_default()
            .push(e);
    }
    let mut keys: Vec<_> = classes.keys().copied().collect();
    keys.sort_unstable();
    let identity_vertices: Vec<usize> = (0..n).collect();
    for key in keys {
        let class = &classes[&key];
        let m = class.len();
        let tadpole = key.0 == key.1;
        order *= factorial(m);
        if tadpole {
            order <<= m;
            let mut flips = vec![false; graph.edge_count()];
            flips[class[0]] = true;
            let (_, flip) = graph.relabel(
                &identity_vertices,
                &(0..graph.edge_count()).collect::<Vec<_>>(),
                &flips,
            );
            generators.push(flip);
        }
        for w in class.windows(2) {
            let mut perm: Vec<usize> = (0..graph.edge_count()).collect();
            perm.swap(w[0], w[1]);
            let mut flips = vec![false; graph.edge_count()];
            if graph.endpoints(w[0]) != graph.endpoints(w[1]) {
                flips[w[0]] = true;
                flips[w[1]] = true;
            }
            let (same, swap) = graph.relabel(&identity_vertices, &perm, &flips);
            debug_assert_eq!(&same, graph);
            generators.push(swap);
        }
    }

    let certificate = certificate(&canon, canon_subset.as_ref(), None);
    let form = CanonicalForm {
        graph: canon,
        subset: canon_subset,
        ribbon: None,
        certificate,
        to_canonical,
    };
    (form, AutGroup { generators, order })
}

/// Lifts a vertex bijection `pos` (input vertex -> canonical position) to
/// half-edges, matching each parallel class in index order.
fn lift_vertex_map(
    graph: &HalfEdgeGraph,
    canon: &HalfEdgeGraph,
    canon_subset: Option<&SubgraphMask>,
    subset: Option<&SubgraphMask>,
    pos: &[usize],
) -> Morphism {
    let mut buckets: HashMap<(usize, usize, bool), Vec<usize>> = HashMap::new();
    for (j, &(a, b)) in canon.edges().iter().enumerate().rev() {
        buckets
            .entry((a, b, canon_subset.is_some_and(|s| s.contains(j))))
            .or_default()
            .push(j);
    }
    let mut half_edge_map = vec![None; graph.half_edge_count()];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        let (x, y) = (pos[u], pos[v]);
        let key = (x.min(y), x.max(y), subset.is_some_and(|s| s.contains(e)));
        let j = buckets
            .get_mut(&key)
            .and_then(Vec::pop)
            .expect("matching edge class");
        let straight = x <= y;
        half_edge_map[2 * e] = Some(if straight { 2 * j } else { 2 * j + 1 });
        half_edge_map[2 * e + 1] = Some(if straight { 2 * j + 1 } else { 2 * j });
    }
    Morphism {
        kind: MorphismKind::Isomorphism,
        vertex_map: pos.to_vec(),
        half_edge_map,
        collapsed_edges: vec![],
    }
}

fn factorial(m: usize) -> u128 {
    (1..=m as u128).product()
}

fn certificate(
    graph: &HalfEdgeGraph,
    subset: Option<&SubgraphMask>,
    ribbon: Option<&RibbonStructure>,
) -> String {
    let mut s = String::with_capacity(8 + 6 * graph.edge_count());
    s.push_str("w=");
    for (i, w) in graph.weights().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{w}").expect("write to string");
    }
    s.push_str(";e=");
    for (i, &(a, b)) in graph.edges().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{a}-{b}").expect("write to string");
        if subset.is_some_and(|m| m.contains(i)) {
            s.push('*');
        }
    }
    if let Some(r) = ribbon {
        s.push_str(";r=");
        for (i, cycle) in r.rotations().iter().enumerate() {
            if i > 0 {
                s.push('|');
            }
            for (k, h) in cycle.iter().enumerate() {
                if k > 0 {
                    s.push('.');
                }
                write!(s, "{h}").expect("write to string");
            }
        }
    }
    s
}

fn ribbon_labels(graph: &HalfEdgeGraph, sigma: &[usize], start: usize) -> (Vec<u32>, Vec<usize>) {
    let n = sigma.len();
    let mut label = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[start] = 0;
    order.push(start);
    let mut i = 0;
    while i < order.len() {
        let h = order[i];
        for next in [sigma[h], h ^ 1] {
            if label[next] == usize::MAX {
                label[next] = order.len();
                order.push(next);
            }
        }
        i += 1;
    }
    let mut code = Vec::with_capacity(3 * n);
    for &h in &order {
        code.push(label[sigma[h]] as u32);
        code.push(label[h ^ 1] as u32);
        code.push(graph.weight(graph.half_edge_vertex(h)));
    }
    (code, order)
}

fn analyze_ribbon(
    graph: &HalfEdgeGraph,
    ribbon: &RibbonStructure,
) -> Result<(CanonicalForm, AutGroup)> {
    let sigma = ribbon.sigma();
    if sigma.len() != graph.half_edge_count() {
        return Err(Error::InvalidRibbon("ribbon does not match graph".into()));
    }
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    let mut ties = Vec::new();
    for start in 0..sigma.len() {
        let (code, order) = ribbon_labels(graph, &sigma, start);
        match &best {
            Some((b, _)) if code > *b => {}
            Some((b, _)) if code == *b => ties.push(order),
            _ => {
                best = Some((code, order));
                ties.clear();
            }
        }
    }
    let (_, order) = best.expect("graph has half-edges");

    // Vertices by first appearance, edges by their first labeled half-edge.
    let mut vertex_id = vec![usize::MAX; graph.vertex_count()];
    let mut weights = Vec::with_capacity(graph.vertex_count());
    for &h in &order {
        let v = graph.half_edge_vertex(h);
        if vertex_id[v] == usize::MAX {
            vertex_id[v] = weights.len();
            weights.push(graph.weight(v));
        }
    }
    let mut half_edge_map = vec![None; graph.half_edge_count()];
    let mut edges = Vec::with_capacity(graph.edge_count());
    for &h in &order {
        if half_edge_map[h].is_some() {
            continue;
        }
        let k = edges.len();
        let (a, b) = (
            vertex_id[graph.half_edge_vertex(h)],
            vertex_id[graph.half_edge_vertex(h ^ 1)],
        );
        // `h` is the lower label; it stays first unless its vertex is higher.
        let (first, second) = if a <= b { (h, h ^ 1) } else { (h ^ 1, h) };
        half_edge_map[first] = Some(2 * k);
        half_edge_map[second] = Some(2 * k + 1);
        edges.push((a.min(b), a.max(b)));
    }
    let canon = HalfEdgeGraph::from_parts_unchecked(weights, edges);
    let to_canonical = Morphism {
        kind: MorphismKind::Isomorphism,
        vertex_map: vertex_id,
        half_edge_map,
        collapsed_edges: vec![],
    };
    let canon_ribbon = ribbon.relabel(&to_canonical)?;

    let generators = ties
        .iter()
        .map(|other| {
            let mut hmap = vec![None; graph.half_edge_count()];
            for (l, &h) in other.iter().enumerate() {
                hmap[h] = Some(order[l]);
            }
            let mut vmap = vec![0; graph.vertex_count()];
            for h in 0..graph.half_edge_count() {
                vmap[graph.half_edge_vertex(h)] =
                    graph.half_edge_vertex(hmap[h].expect("bijection"));
            }
            Morphism {
                kind: MorphismKind::Isomorphism,
                vertex_map: vmap,
                half_edge_map: hmap,
                collapsed_edges: vec![],
            }
        })
        .collect::<Vec<_>>();
    let order_count = generators.len() as u128 + 1;
    let certificate = certificate(&canon, None, Some(&canon_ribbon));
    let form = CanonicalForm {
        graph: canon,
        subset: None,
        ribbon: Some(canon_ribbon),
        certificate,
        to_canonical,
    };
    Ok((
        form,
        AutGroup {
            generators,
            order: order_count,
        },
    ))
}
