//! Duplicate-free generation of graphs, forests, subgraph pairs and ribbon
//! structures.
//!
//! Weight-zero graphs of minimal valence three are produced from degree
//! sequences: each sequence is completed to a symmetric multiplicity matrix
//! (loops on the diagonal) by backtracking, and the results are deduplicated
//! by certificate. Valence-two variants subdivide the edges of such cores.
//! Weighted graphs pair every underlying graph with the weight vectors that
//! make it stable.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_form, canonical_pair, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::{families, HalfEdgeGraph, SubgraphMask, UnionFind};
use crate::ribbon::RibbonStructure;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumSpec {
    pub genus: usize,
    pub min_valence: usize,
    pub allow_tadpoles: bool,
    pub weighted: bool,
    pub max_edges: Option<usize>,
    #[serde(default)]
    pub min_edges: usize,
    pub ribbon: bool,
}

impl EnumSpec {
    pub fn new(genus: usize) -> Self {
        EnumSpec {
            genus,
            min_valence: 3,
            allow_tadpoles: false,
            weighted: false,
            max_edges: None,
            min_edges: 0,
            ribbon: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.min_valence) {
            return Err(Error::InconsistentSpec(format!(
                "min_valence must be 2 or 3, got {}",
                self.min_valence
            )));
        }
        if self.weighted && self.ribbon {
            return Err(Error::InconsistentSpec(
                "ribbon graphs are unweighted".into(),
            ));
        }
        if self.weighted && self.min_valence == 2 {
            return Err(Error::InconsistentSpec(
                "weighted graphs use the stability condition, not min_valence 2".into(),
            ));
        }
        if self.min_valence == 2 && self.max_edges.is_none() {
            return Err(Error::Unbounded("min_valence 2 requires max_edges".into()));
        }
        Ok(())
    }

    fn edge_range(&self, e: usize) -> bool {
        e >= self.min_edges && self.max_edges.is_none_or(|m| e <= m)
    }
}

/// All isomorphism classes matching `spec`, sorted by edge count and then
/// certificate.
pub fn enumerate_graphs(spec: &EnumSpec) -> Result<Vec<CanonicalForm>> {
    spec.validate()?;
    let plain: Vec<CanonicalForm> = if spec.weighted {
        weighted_graphs(spec)?
    } else if spec.min_valence == 3 {
        trivalent_cores(spec.genus, spec.allow_tadpoles)?
            .into_iter()
            .filter(|c| spec.edge_range(c.graph.edge_count()))
            .collect()
    } else {
        bivalent_graphs(spec)?
    };
    if !spec.ribbon {
        return Ok(plain);
    }
    let mut out: Vec<CanonicalForm> = plain
        .par_iter()
        .map(|c| -> Result<Vec<CanonicalForm>> {
            enumerate_ribbon_structures(&c.graph)?
                .iter()
                .map(|r| canonical_form(&c.graph, Some(r)))
                .collect()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    sort_forms(&mut out);
    Ok(out)
}

fn sort_forms(forms: &mut [CanonicalForm]) {
    forms.sort_by(|a, b| {
        (a.graph.edge_count(), &a.certificate).cmp(&(b.graph.edge_count(), &b.certificate))
    });
}

fn dedup(forms: impl IntoIterator<Item = CanonicalForm>) -> Vec<CanonicalForm> {
    let map: BTreeMap<(usize, String), CanonicalForm> = forms
        .into_iter()
        .map(|c| ((c.graph.edge_count(), c.certificate.clone()), c))
        .collect();
    map.into_values().collect()
}

/// Non-increasing sequences of length `len`, entries `>= min`, summing to `total`.
fn degree_sequences(len: usize, total: usize, min: usize) -> Vec<Vec<usize>> {
    fn rec(
        len: usize,
        total: usize,
        min: usize,
        cap: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if len == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if total < min * len || total > cap * len {
            return;
        }
        for d in (min..=cap.min(total)).rev() {
            cur.push(d);
            rec(len - 1, total - d, min, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, total, min, total, &mut Vec::new(), &mut out);
    out
}

/// Every labeled connected multigraph with the given degrees.
fn fill_multigraphs(degrees: &[usize], tadpoles: bool, mut sink: impl FnMut(Vec<(usize, usize)>)) {
    struct Fill<'a, F> {
        rem: Vec<usize>,
        edges: Vec<(usize, usize)>,
        tadpoles: bool,
        sink: &'a mut F,
    }
    impl<F: FnMut(Vec<(usize, usize)>)> Fill<'_, F> {
        fn at_vertex(&mut self, i: usize) {
            let n = self.rem.len();
            if i == n {
                if connected(n, &self.edges) {
                    (self.sink)(self.edges.clone());
                }
                return;
            }
            let max_loops = if self.tadpoles { self.rem[i] / 2 } else { 0 };
            for l in 0..=max_loops {
                self.rem[i] -= 2 * l;
                let base = self.edges.len();
                self.edges.extend(std::iter::repeat_n((i, i), l));
                self.pair(i, i + 1);
                self.edges.truncate(base);
                self.rem[i] += 2 * l;
            }
        }

        fn pair(&mut self, i: usize, j: usize) {
            let n = self.rem.len();
            if self.rem[i] == 0 {
                self.at_vertex(i + 1);
                return;
            }
            if j == n {
                return;
            }
            let later: usize = self.rem[j + 1..].iter().sum();
            let hi = self.rem[i].min(self.rem[j]);
            for k in (0..=hi).rev() {
                if self.rem[i] - k > later {
                    break;
                }
                self.rem[i] -= k;
                self.rem[j] -= k;
                let base = self.edges.len();
                self.edges.extend(std::iter::repeat_n((i, j), k));
                self.pair(i, j + 1);
                self.edges.truncate(base);
                self.rem[i] += k;
                self.rem[j] += k;
            }
        }
    }
    let mut f = Fill {
        rem: degrees.to_vec(),
        edges: Vec::new(),
        tadpoles,
        sink: &mut sink,
    };
    f.at_vertex(0);
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut uf = UnionFind::new(n);
    let mut parts = n;
    for &(u, v) in edges {
        if uf.union(u, v) {
            parts -= 1;
        }
    }
    parts <= 1
}

/// Connected graphs with loop number `h`, `v` vertices and degrees >= `min`.
fn underlying_graphs(
    v: usize,
    h: usize,
    min: usize,
    tadpoles: bool,
    keep: impl Fn(&[usize]) -> bool + Sync,
) -> Result<Vec<CanonicalForm>> {
    let e = v + h - 1;
    let sequences: Vec<Vec<usize>> = degree_sequences(v, 2 * e, min)
        .into_iter()
        .filter(|d| keep(d))
        .collect();
    let forms = sequences
        .par_iter()
        .map(|degrees| -> Result<Vec<CanonicalForm>> {
            let mut seen: BTreeMap<String, CanonicalForm> = BTreeMap::new();
            let mut err = None;
            fill_multigraphs(degrees, tadpoles, |edges| {
                let g = HalfEdgeGraph::from_parts_unchecked(vec![0; v], edges);
                match canonical_form(&g, None) {
                    Ok(c) => {
                        seen.entry(c.certificate.clone()).or_insert(c);
                    }
                    Err(e) => err = Some(e),
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok(seen.into_values().collect()),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(dedup(forms.into_iter().flatten()))
}

/// Weight-zero graphs of loop number `g` with every valence at least three.
fn trivalent_cores(g: usize, tadpoles: bool) -> Result<Vec<CanonicalForm>> {
    if g < 2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for v in 1..=2 * g - 2 {
        out.extend(underlying_graphs(v, g, 3, tadpoles, |_| true)?);
    }
    let mut out = dedup(out);
    sort_forms(&mut out);
    Ok(out)
}

/// Compositions of at most `budget` into `parts` non-negative pieces.
fn subdivision_vectors(parts: usize, budget: usize) -> Vec<Vec<usize>> {
    fn rec(parts: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == parts {
            out.push(cur.clone());
            return;
        }
        for s in 0..=budget {
            cur.push(s);
            rec(parts, budget - s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(parts, budget, &mut Vec::new(), &mut out);
    out
}

/// Replace edge `i` of `core` by a path with `subdivisions[i]` inner vertices.
pub fn subdivide(core: &HalfEdgeGraph, subdivisions: &[usize]) -> HalfEdgeGraph {
    let mut weights = core.weights().to_vec();
    let mut edges = Vec::new();
    for (i, &(u, v)) in core.edges().iter().enumerate() {
        let mut prev = u;
        for _ in 0..subdivisions[i] {
            let x = weights.len();
            weights.push(0);
            edges.push((prev.min(x), prev.max(x)));
            prev = x;
        }
        edges.push((prev.min(v), prev.max(v)));
    }
    HalfEdgeGraph::from_parts_unchecked(weights, edges)
}

fn bivalent_graphs(spec: &EnumSpec) -> Result<Vec<CanonicalForm>> {
    let max_edges = spec.max_edges.expect("validated");
    let g = spec.genus;
    let mut forms = Vec::new();
    if g == 1 {
        let first = if spec.allow_tadpoles { 1 } else { 2 };
        for n in first..=max_edges {
            forms.push(canonical_form(&families::cycle(n), None)?);
        }
    } else if g >= 2 {
        let cores = trivalent_cores(g, true)?;
        let batches = cores
            .par_iter()
            .filter(|c| c.graph.edge_count() <= max_edges)
            .map(|core| -> Result<Vec<CanonicalForm>> {
                let e = core.graph.edge_count();
                let mut seen: BTreeMap<String, CanonicalForm> = BTreeMap::new();
                for s in subdivision_vectors(e, max_edges - e) {
                    let graph = subdivide(&core.graph, &s);
                    if !spec.allow_tadpoles && graph.has_tadpole() {
                        continue;
                    }
                    let c = canonical_form(&graph, None)?;
                    seen.entry(c.certificate.clone()).or_insert(c);
                }
                Ok(seen.into_values().collect())
            })
            .collect::<Result<Vec<_>>>()?;
        forms.extend(batches.into_iter().flatten());
    }
    let mut out: Vec<CanonicalForm> = dedup(forms)
        .into_iter()
        .filter(|c| spec.edge_range(c.graph.edge_count()))
        .collect();
    sort_forms(&mut out);
    Ok(out)
}

/// Multisets of size `extra` over `n` positions, as count vectors.
fn weight_distributions(n: usize, extra: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, extra: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(extra as u32);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=extra {
            cur.push(k as u32);
            rec(n, extra - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, extra, &mut Vec::new(), &mut out);
    out
}

fn weighted_graphs(spec: &EnumSpec) -> Result<Vec<CanonicalForm>> {
    let g = spec.genus;
    let mut forms = Vec::new();
    if g >= 1 && spec.edge_range(0) {
        forms.push(canonical_form(
            &HalfEdgeGraph::from_parts_unchecked(vec![g as u32], vec![]),
            None,
        )?);
    }
    let vmax = (2 * g).saturating_sub(2).max(1);
    for v in 1..=vmax {
        for h in 0..=g {
            if v == 1 && h == 0 {
                continue;
            }
            let e = v + h - 1;
            if !spec.edge_range(e) {
                continue;
            }
            let budget = g - h;
            let min = if v == 1 { 0 } else { 1 };
            let unders = underlying_graphs(v, h, min, true, |d| {
                d.iter().filter(|&&x| x <= 2).count() <= budget
            })?;
            let batch = unders
                .par_iter()
                .map(|u| -> Result<Vec<CanonicalForm>> {
                    let val = u.graph.valences();
                    let base: Vec<u32> = val.iter().map(|&x| u32::from(x <= 2)).collect();
                    let need: u32 = base.iter().sum();
                    let mut seen: BTreeMap<String, CanonicalForm> = BTreeMap::new();
                    for extra in weight_distributions(v, budget - need as usize) {
                        let w: Vec<u32> = base.iter().zip(&extra).map(|(a, b)| a + b).collect();
                        let graph =
                            HalfEdgeGraph::from_parts_unchecked(w, u.graph.edges().to_vec());
                        debug_assert!(graph.is_stable());
                        let c = canonical_form(&graph, None)?;
                        seen.entry(c.certificate.clone()).or_insert(c);
                    }
                    Ok(seen.into_values().collect())
                })
                .collect::<Result<Vec<_>>>()?;
            forms.extend(batch.into_iter().flatten());
        }
    }
    let mut out = dedup(forms);
    sort_forms(&mut out);
    Ok(out)
}

/// All acyclic edge subsets (including the empty one), by size then edges.
pub fn enumerate_forests(graph: &HalfEdgeGraph) -> Vec<SubgraphMask> {
    fn rec(g: &HalfEdgeGraph, e: usize, mask: SubgraphMask, out: &mut Vec<SubgraphMask>) {
        if e == g.edge_count() {
            out.push(mask);
            return;
        }
        rec(g, e + 1, mask, out);
        if !g.is_tadpole(e) {
            let with = mask.with(e);
            if with.is_forest(g) {
                rec(g, e + 1, with, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(graph, 0, SubgraphMask::EMPTY, &mut out);
    out.sort_by_key(|m| (m.len(), m.edges()));
    out
}

/// Proper edge subsets grouped into orbits under `Aut(G)`. Orbits are listed
/// by size, each starting with its smallest member.
pub fn enumerate_subgraph_pairs(graph: &HalfEdgeGraph) -> Result<Vec<Vec<SubgraphMask>>> {
    let e = graph.edge_count();
    if e >= 64 {
        return Err(Error::TooManyEdges(e));
    }
    let mut orbits: BTreeMap<String, Vec<SubgraphMask>> = BTreeMap::new();
    for bits in 0..(1u64 << e) - 1 {
        let mask = SubgraphMask(bits);
        orbits
            .entry(canonical_pair(graph, &mask)?.certificate)
            .or_default()
            .push(mask);
    }
    let mut out: Vec<Vec<SubgraphMask>> = orbits
        .into_values()
        .map(|mut o| {
            o.sort_by_key(|m| (m.len(), m.edges()));
            o
        })
        .collect();
    out.sort_by_key(|o| (o[0].len(), o[0].edges()));
    Ok(out)
}

/// One representative per ribbon isomorphism class of cyclic orders on `graph`.
pub fn enumerate_ribbon_structures(graph: &HalfEdgeGraph) -> Result<Vec<RibbonStructure>> {
    let at: Vec<Vec<usize>> = (0..graph.vertex_count())
        .map(|v| graph.half_edges_at(v))
        .collect();
    let per_vertex: Vec<Vec<Vec<usize>>> = at.iter().map(|hs| cyclic_orders(hs)).collect();
    let mut seen: BTreeMap<String, RibbonStructure> = BTreeMap::new();
    let mut choice = vec![0usize; per_vertex.len()];
    loop {
        let rotations: Vec<Vec<usize>> = choice
            .iter()
            .enumerate()
            .map(|(v, &k)| per_vertex[v][k].clone())
            .collect();
        let r = RibbonStructure::new(graph, rotations)?;
        let c = canonical_form(graph, Some(&r))?;
        seen.entry(c.certificate).or_insert(r);
        // Advance the mixed-radix counter.
        let mut v = 0;
        loop {
            if v == choice.len() {
                let mut out: Vec<RibbonStructure> = seen.into_values().collect();
                out.sort_by(|a, b| a.rotations().cmp(b.rotations()));
                return Ok(out);
            }
            choice[v] += 1;
            if choice[v] < per_vertex[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
    }
}

/// All cyclic orders of `items`, each starting with the first item.
fn cyclic_orders(items: &[usize]) -> Vec<Vec<usize>> {
    fn permute(rest: &mut Vec<usize>, k: usize, head: usize, out: &mut Vec<Vec<usize>>) {
        if k == rest.len() {
            let mut cycle = vec![head];
            cycle.extend_from_slice(rest);
            out.push(cycle);
            return;
        }
        for i in k..rest.len() {
            rest.swap(k, i);
            permute(rest, k + 1, head, out);
            rest.swap(k, i);
        }
    }
    let Some((&head, tail)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    permute(&mut tail.to_vec(), 0, head, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn genus_two_trivalent() {
        let forms = enumerate_graphs(&EnumSpec::new(2)).unwrap();
        assert_eq!(forms.len(), 1);
        assert_eq!(
            forms[0].certificate,
            canonical_form(&theta(), None).unwrap().certificate
        );
        assert!(enumerate_graphs(&EnumSpec::new(1)).unwrap().is_empty());
        let with_tad = enumerate_graphs(&EnumSpec {
            allow_tadpoles: true,
            ..EnumSpec::new(2)
        })
        .unwrap();
        assert_eq!(with_tad.len(), 3);
    }

    #[test]
    fn genus_two_weighted() {
        let spec = EnumSpec {
            weighted: true,
            min_edges: 1,
            ..EnumSpec::new(2)
        };
        let forms = enumerate_graphs(&spec).unwrap();
        assert_eq!(forms.len(), 6);
        assert!(forms
            .iter()
            .all(|c| c.graph.is_stable() && c.graph.genus().unwrap() == 2));
        let all = enumerate_graphs(&EnumSpec {
            weighted: true,
            ..EnumSpec::new(2)
        })
        .unwrap();
        assert_eq!(all.len(), 7);
    }

    #[test]
    fn invalid_requests() {
        let unbounded = EnumSpec {
            min_valence: 2,
            ..EnumSpec::new(2)
        };
        assert!(matches!(
            enumerate_graphs(&unbounded),
            Err(Error::Unbounded(_))
        ));
        let bad = EnumSpec {
            weighted: true,
            ribbon: true,
            ..EnumSpec::new(2)
        };
        assert!(matches!(
            enumerate_graphs(&bad),
            Err(Error::InconsistentSpec(_))
        ));
    }

    #[test]
    fn bivalent_genus_one_cycles() {
        let spec = EnumSpec {
            genus: 1,
            min_valence: 2,
            max_edges: Some(5),
            ..EnumSpec::new(1)
        };
        let forms = enumerate_graphs(&spec).unwrap();
        assert_eq!(
            forms
                .iter()
                .map(|c| c.graph.edge_count())
                .collect::<Vec<_>>(),
            vec![2, 3, 4, 5]
        );
        let tad = EnumSpec {
            allow_tadpoles: true,
            ..spec
        };
        assert_eq!(enumerate_graphs(&tad).unwrap().len(), 5);
    }

    #[test]
    fn forests() {
        assert_eq!(enumerate_forests(&theta()).len(), 4);
        assert_eq!(enumerate_forests(&rose(2)), vec![SubgraphMask::EMPTY]);
        let fig = HalfEdgeGraph::new(3, vec![(0, 2), (0, 1), (1, 2), (1, 2)]).unwrap();
        let trees = enumerate_forests(&fig)
            .into_iter()
            .filter(|f| f.len() == 2)
            .count();
        assert_eq!(trees, 5);
    }

    #[test]
    fn subgraph_orbits() {
        let orbits = enumerate_subgraph_pairs(&theta()).unwrap();
        assert_eq!(orbits.len(), 3);
        assert_eq!(orbits.iter().map(Vec::len).sum::<usize>(), 7);
        assert_eq!(
            enumerate_subgraph_pairs(&banana(1)).unwrap(),
            vec![vec![SubgraphMask::EMPTY]]
        );
        let rose_orbits = enumerate_subgraph_pairs(&rose(2)).unwrap();
        assert_eq!(rose_orbits.len(), 2);
        assert_eq!(rose_orbits.iter().map(Vec::len).sum::<usize>(), 3);
    }

    #[test]
    fn ribbon_classes() {
        assert_eq!(enumerate_ribbon_structures(&theta()).unwrap().len(), 2);
        assert_eq!(enumerate_ribbon_structures(&banana(1)).unwrap().len(), 1);
    }

    #[test]
    fn sequences() {
        assert_eq!(degree_sequences(2, 6, 3), vec![vec![3, 3]]);
        assert_eq!(cyclic_orders(&[0, 1, 2]).len(), 2);
        assert_eq!(subdivision_vectors(2, 1).len(), 3);
        assert_eq!(weight_distributions(3, 2).len(), 6);
    }
}
