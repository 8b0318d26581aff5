//! Ribbon (fat) graphs: cyclic orders at vertices, contraction, face tracing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{opposite, HalfEdgeGraph, Morphism};

/// A cyclic order of the half-edges at each vertex. Each cycle is stored
/// starting from its smallest half-edge id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RibbonStructure {
    rotations: Vec<Vec<usize>>,
}

impl RibbonStructure {
    pub fn new(graph: &HalfEdgeGraph, rotations: Vec<Vec<usize>>) -> Result<Self> {
        if rotations.len() != graph.vertex_count() {
            return Err(Error::InvalidRibbon(format!(
                "{} rotations for {} vertices",
                rotations.len(),
                graph.vertex_count()
            )));
        }
        let mut seen = vec![false; graph.half_edge_count()];
        for (v, cycle) in rotations.iter().enumerate() {
            for &h in cycle {
                if h >= seen.len() {
                    return Err(Error::InvalidRibbon(format!(
                        "half-edge {h} does not exist"
                    )));
                }
                if std::mem::replace(&mut seen[h], true) {
                    return Err(Error::InvalidRibbon(format!("half-edge {h} listed twice")));
                }
                if graph.half_edge_vertex(h) != v {
                    return Err(Error::InvalidRibbon(format!(
                        "half-edge {h} is not attached to vertex {v}"
                    )));
                }
            }
        }
        if let Some(h) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidRibbon(format!("half-edge {h} missing")));
        }
        Ok(Self::normalized(rotations))
    }

    fn normalized(mut rotations: Vec<Vec<usize>>) -> Self {
        for cycle in &mut rotations {
            if let Some(k) = cycle
                .iter()
                .enumerate()
                .min_by_key(|&(_, h)| *h)
                .map(|(k, _)| k)
            {
                cycle.rotate_left(k);
            }
        }
        RibbonStructure { rotations }
    }

    /// Half-edges at each vertex in increasing id order.
    pub fn from_incidence(graph: &HalfEdgeGraph) -> Self {
        let rotations = (0..graph.vertex_count())
            .map(|v| graph.half_edges_at(v))
            .collect();
        RibbonStructure { rotations }
    }

    /// Build from the successor permutation `sigma` on half-edges.
    pub fn from_sigma(graph: &HalfEdgeGraph, sigma: &[usize]) -> Result<Self> {
        let mut rotations = vec![Vec::new(); graph.vertex_count()];
        let mut seen = vec![false; sigma.len()];
        for start in 0..sigma.len() {
            if seen[start] {
                continue;
            }
            let v = graph.half_edge_vertex(start);
            if !rotations[v].is_empty() {
                return Err(Error::InvalidRibbon(format!(
                    "vertex {v} carries more than one cycle"
                )));
            }
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                rotations[v].push(h);
                h = sigma[h];
            }
        }
        Self::new(graph, rotations)
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotations
    }

    /// Successor permutation on half-edges.
    pub fn sigma(&self) -> Vec<usize> {
        let n: usize = self.rotations.iter().map(Vec::len).sum();
        let mut sigma = vec![0; n];
        for cycle in &self.rotations {
            for (k, &h) in cycle.iter().enumerate() {
                sigma[h] = cycle[(k + 1) % cycle.len()];
            }
        }
        sigma
    }

    /// Transport along a half-edge bijection (e.g. an isomorphism).
    pub fn relabel(&self, m: &Morphism) -> Result<Self> {
        let mut rotations = vec![Vec::new(); self.rotations.len()];
        for (v, cycle) in self.rotations.iter().enumerate() {
            let target = m.vertex_map[v];
            rotations[target] = cycle
                .iter()
                .map(|&h| {
                    m.half_edge_map[h]
                        .ok_or_else(|| Error::InvalidMorphism("partial half-edge map".into()))
                })
                .collect::<Result<_>>()?;
        }
        Ok(Self::normalized(rotations))
    }
}

/// Contract a non-tadpole edge and splice the two cyclic orders: with
/// `sigma_v = (a_1 .. a_s)` ending in `h` and `sigma_w = (b_1 .. b_k)` starting
/// with `h'`, the merged vertex gets `(a_1 .. a_{s-1} b_2 .. b_k)`.
pub fn contract_ribbon(
    graph: &HalfEdgeGraph,
    ribbon: &RibbonStructure,
    e: usize,
) -> Result<(HalfEdgeGraph, RibbonStructure, Morphism)> {
    if e >= graph.edge_count() {
        return Err(Error::EdgeOutOfRange {
            edge: e,
            count: graph.edge_count(),
        });
    }
    if graph.is_tadpole(e) {
        return Err(Error::TadpoleContraction(e));
    }
    let (h, h2) = (2 * e, 2 * e + 1);
    let (v, w) = graph.endpoints(e);
    let mut at_v = ribbon.rotations[v].clone();
    let pos = at_v
        .iter()
        .position(|&x| x == h)
        .expect("half-edge in its rotation");
    at_v.rotate_left(pos + 1);
    at_v.pop();
    let mut at_w = ribbon.rotations[w].clone();
    let pos = at_w
        .iter()
        .position(|&x| x == h2)
        .expect("half-edge in its rotation");
    at_w.rotate_left(pos);
    let merged: Vec<usize> = at_v.into_iter().chain(at_w.into_iter().skip(1)).collect();

    let (contracted, m) = graph.contract_edge(e)?;
    let keep = v.min(w);
    let mut rotations = vec![Vec::new(); contracted.vertex_count()];
    for (x, cycle) in ribbon.rotations.iter().enumerate() {
        if x == v || x == w {
            continue;
        }
        rotations[m.vertex_map[x]] = cycle
            .iter()
            .map(|&k| m.half_edge_map[k].expect("surviving half-edge"))
            .collect();
    }
    rotations[m.vertex_map[keep]] = merged
        .iter()
        .map(|&k| m.half_edge_map[k].expect("surviving half-edge"))
        .collect();
    let ribbon = RibbonStructure::new(&contracted, rotations)?;
    Ok((contracted, ribbon, m))
}

/// Boundary cycles of the thickened surface: orbits of `sigma . epsilon`.
pub fn faces(graph: &HalfEdgeGraph, ribbon: &RibbonStructure) -> Vec<Vec<usize>> {
    let sigma = ribbon.sigma();
    let mut seen = vec![false; graph.half_edge_count()];
    let mut out = Vec::new();
    for start in 0..graph.half_edge_count() {
        if seen[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            face.push(h);
            h = sigma[opposite(h)];
        }
        out.push(face);
    }
    out
}

/// `(genus, boundary count)` of the thickened surface, from
/// `v - e + b = 2 - 2 g`.
pub fn surface_invariants(
    graph: &HalfEdgeGraph,
    ribbon: &RibbonStructure,
) -> Result<(usize, usize)> {
    if !graph.is_connected() || graph.vertex_count() == 0 {
        return Err(Error::Disconnected);
    }
    let b = faces(graph, ribbon).len() as i64;
    let chi = graph.vertex_count() as i64 - graph.edge_count() as i64 + b;
    let twice_genus = 2 - chi;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(Error::InvalidRibbon(format!(
            "Euler characteristic {chi} is not that of a surface"
        )));
    }
    Ok(((twice_genus / 2) as usize, b as usize))
}
