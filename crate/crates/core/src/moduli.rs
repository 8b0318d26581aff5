//! Combinatorial cells of the moduli space of stable graphs and its spine.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::{analyze, canonical_form, canonical_pair, odd_symmetry_in, CanonicalForm};
use crate::enumerate::{enumerate_forests, enumerate_graphs, EnumSpec};
use crate::error::{Error, Result};
use crate::graph::SubgraphMask;
use crate::orientation::Parity;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellNode {
    pub certificate: String,
    pub edges: usize,
    pub dimension: usize,
    pub weight: u32,
    /// Carries an odd symmetry for the edge-order orientation.
    pub odd_symmetry: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellPoset {
    pub genus: usize,
    pub nodes: Vec<CellNode>,
    /// `(face, cell)` index pairs, one per single-edge collapse class.
    pub covers: Vec<(usize, usize)>,
    pub max_dimension: usize,
}

impl CellPoset {
    /// Nodes of total weight zero.
    pub fn weight_zero(&self) -> impl Iterator<Item = &CellNode> {
        self.nodes.iter().filter(|n| n.weight == 0)
    }
}

fn check_genus(g: usize) -> Result<()> {
    if g < 2 {
        return Err(Error::InconsistentSpec(format!(
            "moduli space needs genus at least 2, got {g}"
        )));
    }
    Ok(())
}

pub fn build_cell_poset(g: usize) -> Result<CellPoset> {
    check_genus(g)?;
    let mut spec = EnumSpec::new(g);
    spec.weighted = true;
    spec.min_edges = 1;
    let forms = enumerate_graphs(&spec)?;
    let index: HashMap<&str, usize> = forms
        .iter()
        .enumerate()
        .map(|(i, f)| (f.certificate.as_str(), i))
        .collect();
    let rows = forms
        .par_iter()
        .enumerate()
        .map(|(i, f)| -> Result<(CellNode, Vec<(usize, usize)>)> {
            let graph = &f.graph;
            let (_, aut) = analyze(graph, None, None)?;
            let node = CellNode {
                certificate: f.certificate.clone(),
                edges: graph.edge_count(),
                dimension: graph.edge_count() - 1,
                weight: graph.total_weight(),
                odd_symmetry: odd_symmetry_in(&aut, graph, Parity::Even, None)?,
            };
            let mut covers = Vec::new();
            for e in 0..graph.edge_count() {
                let (face, _) = graph.contract_edge(e)?;
                if face.edge_count() == 0 {
                    continue;
                }
                if let Some(&j) = index.get(canonical_form(&face, None)?.certificate.as_str()) {
                    covers.push((j, i));
                }
            }
            covers.sort_unstable();
            covers.dedup();
            Ok((node, covers))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut nodes = Vec::with_capacity(rows.len());
    let mut covers = Vec::new();
    for (node, c) in rows {
        nodes.push(node);
        covers.extend(c);
    }
    let max_dimension = nodes.iter().map(|n| n.dimension).max().unwrap_or(0);
    Ok(CellPoset {
        genus: g,
        nodes,
        covers,
        max_dimension,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cube {
    pub certificate: String,
    pub graph_certificate: String,
    pub dimension: usize,
    pub aut_order: u128,
    pub odd_symmetry: bool,
    /// Facets `c(G/e, gamma/e)`; `None` when the collapse leaves the catalog.
    pub collapse_facets: Vec<Option<usize>>,
    /// Facets `c(G, gamma - e)`.
    pub delete_facets: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeCatalog {
    pub genus: usize,
    pub forests_only: bool,
    pub cubes: Vec<Cube>,
    pub max_dimension: usize,
}

impl CubeCatalog {
    /// Every declared facet exists in the catalog.
    pub fn is_closed(&self) -> bool {
        self.cubes.iter().all(|c| {
            c.delete_facets.iter().all(Option::is_some)
                && (!self.forests_only || c.collapse_facets.iter().all(Option::is_some))
        })
    }
}

/// Orbit representatives of pairs `(G, gamma)` with `G` of weight zero and
/// `gamma` a proper edge subset (a forest when `forests_only`).
pub fn build_cube_catalog(g: usize, forests_only: bool) -> Result<CubeCatalog> {
    check_genus(g)?;
    let mut spec = EnumSpec::new(g);
    spec.allow_tadpoles = true;
    let forms = enumerate_graphs(&spec)?;
    let pairs = forms
        .par_iter()
        .map(|f| -> Result<Vec<(String, SubgraphMask, CanonicalForm)>> {
            let graph = &f.graph;
            let subsets: Vec<SubgraphMask> = if forests_only {
                enumerate_forests(graph)
            } else {
                (0..(1u64 << graph.edge_count()) - 1)
                    .map(SubgraphMask)
                    .collect()
            };
            let mut seen = HashMap::new();
            for s in subsets {
                let pair = canonical_pair(graph, &s)?;
                seen.entry(pair.certificate.clone()).or_insert(pair);
            }
            Ok(seen
                .into_values()
                .map(|p| (f.certificate.clone(), p.subset.expect("pair form"), p))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pairs: Vec<_> = pairs.into_iter().flatten().collect();
    pairs.sort_by(|a, b| (a.1.len(), &a.2.certificate).cmp(&(b.1.len(), &b.2.certificate)));
    let index: HashMap<&str, usize> = pairs
        .iter()
        .enumerate()
        .map(|(i, p)| (p.2.certificate.as_str(), i))
        .collect();
    let cubes = pairs
        .par_iter()
        .map(|(graph_certificate, gamma, pair)| -> Result<Cube> {
            let graph = &pair.graph;
            let (_, aut) = analyze(graph, Some(gamma), None)?;
            let mut collapse_facets = Vec::new();
            let mut delete_facets = Vec::new();
            for e in gamma.edges() {
                collapse_facets.push(if graph.is_tadpole(e) {
                    None
                } else {
                    let (face, m) = graph.contract_edge(e)?;
                    let c = canonical_pair(&face, &gamma.without(e).map(&m))?;
                    index.get(c.certificate.as_str()).copied()
                });
                let c = canonical_pair(graph, &gamma.without(e))?;
                delete_facets.push(index.get(c.certificate.as_str()).copied());
            }
            Ok(Cube {
                certificate: pair.certificate.clone(),
                graph_certificate: graph_certificate.clone(),
                dimension: gamma.len(),
                aut_order: aut.order,
                odd_symmetry: odd_symmetry_in(&aut, graph, Parity::Even, Some(gamma))?,
                collapse_facets,
                delete_facets,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_dimension = cubes.iter().map(|c| c.dimension).max().unwrap_or(0);
    Ok(CubeCatalog {
        genus: g,
        forests_only,
        cubes,
        max_dimension,
    })
}

/// The cubes `(G, F)` with `F` a forest.
pub fn build_spine(g: usize) -> Result<CubeCatalog> {
    build_cube_catalog(g, true)
}

pub enum Cells<'a> {
    Poset(&'a CellPoset),
    Catalog(&'a CubeCatalog),
}

/// Orbit classes per dimension, optionally only those free of odd symmetries.
pub fn f_vector(cells: Cells<'_>, symmetry_free_only: bool) -> Vec<usize> {
    let dims: Vec<usize> = match cells {
        Cells::Poset(p) => p
            .nodes
            .iter()
            .filter(|n| !symmetry_free_only || !n.odd_symmetry)
            .map(|n| n.dimension)
            .collect(),
        Cells::Catalog(c) => c
            .cubes
            .iter()
            .filter(|n| !symmetry_free_only || !n.odd_symmetry)
            .map(|n| n.dimension)
            .collect(),
    };
    let top = match cells {
        Cells::Poset(p) => p.max_dimension,
        Cells::Catalog(c) => c.max_dimension,
    };
    let mut out = vec![0; top + 1];
    for d in dims {
        out[d] += 1;
    }
    out
}
