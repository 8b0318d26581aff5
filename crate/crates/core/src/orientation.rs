//! Orientations `det Q^E (x) det H_1` and the signs of morphisms acting on them.
//!
//! Every edge carries the reference direction `2i -> 2i+1`. An orientation
//! fixes an ordered list of edges together with a spanning tree; each edge
//! outside the tree, taken in order and direction, closes one cycle of the
//! tree basis of `H_1`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{HalfEdgeGraph, Morphism, MorphismKind, SubgraphMask, UnionFind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::InconsistentSpec(format!("unknown parity `{other}`"))),
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    /// Ordered edges whose wedge forms the `det Q^E` factor.
    pub edge_order: Vec<usize>,
    /// Spanning tree, sorted by edge index.
    pub tree: Vec<usize>,
    /// Complement edges in cycle order; `true` means the reference direction.
    pub directed_complement: Vec<(usize, bool)>,
}

/// Rows are cycles of the tree basis, columns are edges in their reference
/// direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl CycleMatrix {
    pub fn rank(&self) -> usize {
        let m: Vec<Vec<i128>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        integer_rank(m)
    }
}

/// The deterministic orientation used for generators: edges (or the edges of
/// `subset`) in index order, breadth-first tree from vertex 0, complement
/// edges in index order and reference direction.
pub fn reference_orientation_for(
    graph: &HalfEdgeGraph,
    subset: Option<&SubgraphMask>,
) -> Orientation {
    let edge_order = match subset {
        Some(s) => s.edges(),
        None => (0..graph.edge_count()).collect(),
    };
    let tree = graph.bfs_spanning_tree();
    let directed_complement = complement_of(graph, &tree)
        .into_iter()
        .map(|e| (e, true))
        .collect();
    Orientation {
        edge_order,
        tree,
        directed_complement,
    }
}

/// Orientation with a prescribed spanning tree; complement edges in index
/// order and reference direction.
pub fn orientation_with_tree(
    graph: &HalfEdgeGraph,
    edge_order: Vec<usize>,
    tree: Vec<usize>,
) -> Result<Orientation> {
    let mut tree = tree;
    tree.sort_unstable();
    check_tree(graph, &tree)?;
    let directed_complement = complement_of(graph, &tree)
        .into_iter()
        .map(|e| (e, true))
        .collect();
    Ok(Orientation {
        edge_order,
        tree,
        directed_complement,
    })
}

fn complement_of(graph: &HalfEdgeGraph, tree: &[usize]) -> Vec<usize> {
    let mut in_tree = vec![false; graph.edge_count()];
    for &t in tree {
        in_tree[t] = true;
    }
    (0..graph.edge_count()).filter(|&e| !in_tree[e]).collect()
}

fn check_tree(graph: &HalfEdgeGraph, tree: &[usize]) -> Result<()> {
    let n = graph.vertex_count();
    if n == 0 || !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    if tree.len() + 1 != n {
        return Err(Error::InvalidMorphism(format!(
            "{} tree edges for {} vertices",
            tree.len(),
            n
        )));
    }
    let mut uf = UnionFind::new(n);
    for &t in tree {
        if t >= graph.edge_count() {
            return Err(Error::EdgeOutOfRange {
                edge: t,
                count: graph.edge_count(),
            });
        }
        let (u, v) = graph.endpoints(t);
        if !uf.union(u, v) {
            return Err(Error::InvalidMorphism(format!(
                "tree edges contain a cycle at edge {t}"
            )));
        }
    }
    Ok(())
}

struct RootedTree {
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
}

impl RootedTree {
    fn new(graph: &HalfEdgeGraph, tree: &[usize]) -> Self {
        let n = graph.vertex_count();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for &t in tree {
            let (u, v) = graph.endpoints(t);
            adj[u].push((v, t));
            adj[v].push((u, t));
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &(y, t) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, t));
                    depth[y] = depth[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        RootedTree { parent, depth }
    }

    /// Adds the tree path from `from` to `to` into `row`.
    fn add_path(&self, graph: &HalfEdgeGraph, from: usize, to: usize, row: &mut [i64]) {
        let (mut a, mut b) = (from, to);
        let mut down = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let (p, t) = self.parent[a].expect("non-root has a parent");
                row[t] += traversal_sign(graph, t, a);
                a = p;
            } else {
                let (p, t) = self.parent[b].expect("non-root has a parent");
                down.push((t, p));
                b = p;
            }
        }
        for (t, p) in down {
            row[t] += traversal_sign(graph, t, p);
        }
    }
}

/// +1 if walking edge `t` starting at vertex `start` follows its reference direction.
fn traversal_sign(graph: &HalfEdgeGraph, t: usize, start: usize) -> i64 {
    if graph.endpoints(t).0 == start {
        1
    } else {
        -1
    }
}

/// The tree basis of `H_1`: row `i` is the cycle closed by the `i`-th
/// complement edge, walked in its chosen direction and back along the tree.
pub fn cycle_basis(graph: &HalfEdgeGraph, eta: &Orientation) -> Result<CycleMatrix> {
    check_tree(graph, &eta.tree)?;
    let rooted = RootedTree::new(graph, &eta.tree);
    let e = graph.edge_count();
    let rows = eta
        .directed_complement
        .iter()
        .map(|&(f, forward)| {
            let mut row = vec![0i64; e];
            let (u, v) = graph.endpoints(f);
            let (start, end) = if forward { (u, v) } else { (v, u) };
            row[f] += if forward { 1 } else { -1 };
            rooted.add_path(graph, end, start, &mut row);
            row
        })
        .collect();
    Ok(CycleMatrix { rows })
}

/// Moves the orientation to `new_tree` by exchanging one edge at a time.
/// Each exchange puts the departing tree edge into the slot of the entering
/// complement edge, directed so that the slot keeps the same cycle; this
/// leaves the class of the wedge of cycles unchanged.
pub fn rebase(graph: &HalfEdgeGraph, eta: &Orientation, new_tree: &[usize]) -> Result<Orientation> {
    let mut target = new_tree.to_vec();
    target.sort_unstable();
    check_tree(graph, &target)?;
    let mut current = eta.clone();
    loop {
        let Some(&incoming) = target.iter().find(|t| !current.tree.contains(t)) else {
            break;
        };
        let slot = current
            .directed_complement
            .iter()
            .position(|&(f, _)| f == incoming)
            .ok_or_else(|| {
                Error::InvalidMorphism(format!("edge {incoming} is neither tree nor complement"))
            })?;
        let cycle = cycle_basis(graph, &current)?.rows.swap_remove(slot);
        let outgoing = current
            .tree
            .iter()
            .copied()
            .find(|t| cycle[*t] != 0 && !target.contains(t))
            .expect("the fundamental cycle leaves the target tree");
        current.directed_complement[slot] = (outgoing, cycle[outgoing] > 0);
        current.tree.retain(|&t| t != outgoing);
        current.tree.push(incoming);
        current.tree.sort_unstable();
    }
    Ok(current)
}

/// Image of the source cycle basis, written in the target tree basis.
fn h1_matrix(
    m: &Morphism,
    src: &HalfEdgeGraph,
    eta_src: &Orientation,
    dst: &HalfEdgeGraph,
    eta_dst: &Orientation,
) -> Result<Vec<Vec<i128>>> {
    let basis = cycle_basis(src, eta_src)?;
    if basis.rows.len() != eta_dst.directed_complement.len() {
        return Err(Error::DimensionMismatch(format!(
            "H_1 ranks differ: {} vs {}",
            basis.rows.len(),
            eta_dst.directed_complement.len()
        )));
    }
    let images = m.edge_images();
    let mut col_of = vec![None; dst.edge_count()];
    for (r, &(f, forward)) in eta_dst.directed_complement.iter().enumerate() {
        col_of[f] = Some((r, if forward { 1i128 } else { -1 }));
    }
    let h = basis.rows.len();
    let mut out = vec![vec![0i128; h]; h];
    for (i, row) in basis.rows.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            if x == 0 {
                continue;
            }
            if let Some((j, preserved)) = images[k] {
                if let Some((r, s)) = col_of[j] {
                    let x = if preserved { x as i128 } else { -(x as i128) };
                    out[i][r] += s * x;
                }
            }
        }
    }
    Ok(out)
}

/// Sign of the determinant of the induced map on `H_1` relative to the two
/// tree bases. Errors if the map is singular (e.g. a tadpole collapse).
pub fn h1_determinant_sign(
    m: &Morphism,
    src: &HalfEdgeGraph,
    eta_src: &Orientation,
    dst: &HalfEdgeGraph,
    eta_dst: &Orientation,
) -> Result<i32> {
    let mat = h1_matrix(m, src, eta_src, dst, eta_dst)?;
    match determinant(mat).signum() {
        0 => Err(Error::InvalidMorphism(
            "induced map on H_1 is singular".into(),
        )),
        s => Ok(s as i32),
    }
}

/// Sign relating `m_* eta_src` to `eta_dst`. A single collapsed edge at
/// 1-based position `i` in the source order contributes `(-1)^i`.
pub fn morphism_sign(
    m: &Morphism,
    parity: Parity,
    src: &HalfEdgeGraph,
    eta_src: &Orientation,
    dst: &HalfEdgeGraph,
    eta_dst: &Orientation,
) -> Result<i32> {
    let removed = match m.collapsed_edges.len() {
        0 => None,
        1 => Some(m.collapsed_edges[0]),
        n => return Err(Error::MultiEdgeCollapse(n)),
    };
    if m.kind == MorphismKind::EdgeDeletion {
        return Err(Error::InvalidMorphism(
            "deletions do not transport orientations".into(),
        ));
    }
    transport_sign(parity, src, eta_src, removed, m, dst, eta_dst)
}

/// Shared sign computation. `removed` is dropped from the source order (a
/// collapsed edge, or an edge leaving the ordered subset) and contributes
/// `(-1)^i`; the remaining ordered edges must map onto the target order.
pub(crate) fn transport_sign(
    parity: Parity,
    src: &HalfEdgeGraph,
    eta_src: &Orientation,
    removed: Option<usize>,
    m: &Morphism,
    dst: &HalfEdgeGraph,
    eta_dst: &Orientation,
) -> Result<i32> {
    let mut slot = vec![None; dst.edge_count()];
    for (k, &e) in eta_dst.edge_order.iter().enumerate() {
        slot[e] = Some(k);
    }
    let images = m.edge_images();
    let mut sign = 1i32;
    let mut perm = Vec::with_capacity(eta_dst.edge_order.len());
    for (k, &e) in eta_src.edge_order.iter().enumerate() {
        if Some(e) == removed {
            if k % 2 == 0 {
                sign = -sign;
            }
            continue;
        }
        let (j, _) = images[e]
            .ok_or_else(|| Error::InvalidMorphism(format!("ordered edge {e} has no image")))?;
        let k = slot[j].ok_or_else(|| {
            Error::InvalidMorphism(format!("image of edge {e} is not an ordered edge"))
        })?;
        perm.push(k);
    }
    if perm.len() != eta_dst.edge_order.len() {
        return Err(Error::DimensionMismatch(format!(
            "ordered edge counts differ: {} vs {}",
            perm.len(),
            eta_dst.edge_order.len()
        )));
    }
    sign *= permutation_sign(&perm);
    if parity == Parity::Odd {
        sign *= h1_determinant_sign(m, src, eta_src, dst, eta_dst)?;
    }
    Ok(sign)
}

/// Sign of a permutation given as a list of images.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub(crate) fn determinant(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn integer_rank(mut a: Vec<Vec<i128>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(p, rank);
        for r in rank + 1..rows {
            if a[r][c] != 0 {
                let (x, y) = (a[rank][c], a[r][c]);
                for j in c..cols {
                    a[r][j] = a[r][j] * x - a[rank][j] * y;
                }
                let g = a[r].iter().fold(0i128, |g, &v| num_integer::gcd(g, v));
                if g > 1 {
                    a[r].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn theta_cycles_with_prescribed_trees() {
        let g = theta();
        let eta = orientation_with_tree(&g, vec![0, 1, 2], vec![2]).unwrap();
        let c = cycle_basis(&g, &eta).unwrap();
        assert_eq!(c.rows, vec![vec![1, 0, -1], vec![0, 1, -1]]);

        let moved = rebase(&g, &eta, &[1]).unwrap();
        let c2 = cycle_basis(&g, &moved).unwrap();
        assert_eq!(c2.rows, vec![vec![1, -1, 0], vec![0, 1, -1]]);
        let id = Morphism::identity(&g);
        assert_eq!(h1_determinant_sign(&id, &g, &eta, &g, &moved).unwrap(), 1);
    }

    #[test]
    fn rose_basis_is_identity() {
        let g = rose(2);
        let eta = reference_orientation_for(&g, None);
        assert!(eta.tree.is_empty());
        assert_eq!(
            cycle_basis(&g, &eta).unwrap().rows,
            vec![vec![1, 0], vec![0, 1]]
        );
    }

    #[test]
    fn tadpole_flip_reverses_h1() {
        let g = rose(1);
        let eta = reference_orientation_for(&g, None);
        let (_, flip) = g.relabel(&[0], &[0], &[true]);
        assert_eq!(h1_determinant_sign(&flip, &g, &eta, &g, &eta).unwrap(), -1);
        assert_eq!(
            morphism_sign(&flip, Parity::Even, &g, &eta, &g, &eta).unwrap(),
            1
        );
        assert_eq!(
            morphism_sign(&flip, Parity::Odd, &g, &eta, &g, &eta).unwrap(),
            -1
        );
    }

    #[test]
    fn parallel_transposition_is_odd() {
        let g = banana(3);
        let eta = reference_orientation_for(&g, None);
        let (_, swap) = g.relabel(&[0, 1], &[1, 0, 2], &[false, false, false]);
        assert_eq!(
            morphism_sign(&swap, Parity::Even, &g, &eta, &g, &eta).unwrap(),
            -1
        );
        let id = Morphism::identity(&g);
        assert_eq!(
            morphism_sign(&id, Parity::Odd, &g, &eta, &g, &eta).unwrap(),
            1
        );
    }

    #[test]
    fn collapse_signs_follow_position() {
        let g = theta();
        let eta = reference_orientation_for(&g, None);
        for e in 0..3 {
            let (r2, m) = g.contract_edge(e).unwrap();
            let eta2 = reference_orientation_for(&r2, None);
            let expected = if e % 2 == 0 { -1 } else { 1 };
            assert_eq!(
                morphism_sign(&m, Parity::Even, &g, &eta, &r2, &eta2).unwrap(),
                expected
            );
        }
        let r = rose(2);
        let (r1, tad) = r.contract_edge(0).unwrap();
        let (eta, eta1) = (
            reference_orientation_for(&r, None),
            reference_orientation_for(&r1, None),
        );
        assert!(morphism_sign(&tad, Parity::Odd, &r, &eta, &r1, &eta1).is_err());
        assert_eq!(
            morphism_sign(&tad, Parity::Even, &r, &eta, &r1, &eta1).unwrap(),
            -1
        );
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(
            determinant(vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]),
            4
        );
        assert_eq!(determinant(vec![vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
    }

    #[test]
    fn cycle_matrix_rank_is_loop_number() {
        for g in [theta(), wheel(4), complete(4), dumbbell(), rose(3)] {
            let eta = reference_orientation_for(&g, None);
            assert_eq!(
                cycle_basis(&g, &eta).unwrap().rank(),
                g.loop_number().unwrap()
            );
        }
    }
}
