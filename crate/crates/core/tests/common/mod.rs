//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use gch_core::canonical::{automorphism_group, canonical_form, canonical_pair, pair_automorphisms};
use gch_core::complexes::{build_complex, homology, ComplexKind, ComplexSpec, Generator};
use gch_core::enumerate::{
    enumerate_forests, enumerate_graphs, enumerate_ribbon_structures, EnumSpec,
};
use gch_core::graph::SubgraphMask;
use gch_core::linalg::{rank, SparseMatrix};
use gch_core::orientation::{
    morphism_sign, orientation_with_tree, rebase, reference_orientation_for, Orientation,
};
use gch_core::{HalfEdgeGraph, Morphism, Parity};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub type Check = Result<String, String>;

/// Isomorphism invariant computed by trying every vertex permutation.
pub type BruteKey = (Vec<u32>, Vec<Vec<usize>>);

pub fn brute_key(g: &HalfEdgeGraph) -> BruteKey {
    let n = g.vertex_count();
    let mut adj = vec![vec![0usize; n]; n];
    for &(a, b) in g.edges() {
        adj[a][b] += 1;
        if a != b {
            adj[b][a] += 1;
        }
    }
    (0..n)
        .permutations(n)
        .map(|p| {
            let w = p.iter().map(|&v| g.weight(v)).collect();
            let m = p
                .iter()
                .map(|&i| p.iter().map(|&j| adj[i][j]).collect())
                .collect();
            (w, m)
        })
        .min()
        .unwrap()
}

fn sequences(len: usize, min: usize, max: usize, total: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for d in min..=max.min(total) {
        for mut rest in sequences(len - 1, min, d, total - d) {
            rest.insert(0, d);
            out.push(rest);
        }
    }
    out
}

fn matchings(stubs: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if stubs.is_empty() {
        return vec![vec![]];
    }
    let first = stubs[0];
    let mut out = Vec::new();
    for k in 1..stubs.len() {
        let mut rest = stubs[1..].to_vec();
        let partner = rest.remove(k - 1);
        for mut m in matchings(&rest) {
            m.push((first.min(partner), first.max(partner)));
            out.push(m);
        }
    }
    out
}

/// Every connected multigraph with the given loop number and edge count,
/// obtained by pairing stubs of every degree sequence.
fn pairings(h: usize, e: usize, min_valence: usize, tadpoles: bool) -> Vec<HalfEdgeGraph> {
    if e + 1 < h {
        return vec![];
    }
    let v = e + 1 - h;
    let mut labeled: HashSet<Vec<(usize, usize)>> = HashSet::new();
    let mut out = Vec::new();
    for degrees in sequences(v, min_valence, 2 * e, 2 * e) {
        let stubs: Vec<usize> = degrees
            .iter()
            .enumerate()
            .flat_map(|(i, &d)| std::iter::repeat_n(i, d))
            .collect();
        let ids: Vec<usize> = (0..stubs.len()).collect();
        for m in matchings(&ids) {
            let mut edges: Vec<(usize, usize)> =
                m.iter().map(|&(a, b)| (stubs[a], stubs[b])).collect();
            if !tadpoles && edges.iter().any(|(a, b)| a == b) {
                continue;
            }
            edges.sort_unstable();
            if !labeled.insert(edges.clone()) {
                continue;
            }
            if let Ok(g) = HalfEdgeGraph::new(v, edges) {
                if g.is_connected() {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// Naive enumeration of the isomorphism classes `enumerate_graphs` should return.
pub fn naive_classes(spec: &EnumSpec) -> BTreeSet<BruteKey> {
    let max_e = spec.max_edges.unwrap_or(3 * spec.genus.saturating_sub(1));
    let mut out = BTreeSet::new();
    if !spec.weighted {
        for e in spec.min_edges.max(1)..=max_e {
            for g in pairings(spec.genus, e, spec.min_valence, spec.allow_tadpoles) {
                out.insert(brute_key(&g));
            }
        }
        return out;
    }
    for h in 0..=spec.genus {
        for e in spec.min_edges.max(1)..=max_e {
            let underlying: BTreeSet<BruteKey> =
                pairings(h, e, 1, true).iter().map(brute_key).collect();
            for (_, adj) in underlying {
                let v = adj.len();
                let edges: Vec<(usize, usize)> = (0..v)
                    .flat_map(|i| (i..v).map(move |j| (i, j)))
                    .flat_map(|(i, j)| {
                        std::iter::repeat_n((i, j), if i == j { adj[i][i] } else { adj[i][j] })
                    })
                    .collect();
                for w in (0..v)
                    .map(|_| 0..=(spec.genus - h) as u32)
                    .multi_cartesian_product()
                {
                    if w.iter().sum::<u32>() as usize != spec.genus - h {
                        continue;
                    }
                    let g = HalfEdgeGraph::with_weights(w, edges.clone()).unwrap();
                    if g.is_stable() {
                        out.insert(brute_key(&g));
                    }
                }
            }
        }
    }
    out
}

/// All half-edge permutations commuting with the edge involution and induced
/// by a weight-preserving vertex bijection.
pub fn brute_automorphisms(g: &HalfEdgeGraph) -> Vec<Vec<usize>> {
    let e = g.edge_count();
    let n = g.vertex_count();
    let mut out = Vec::new();
    for perm in (0..e).permutations(e) {
        for flips in 0u32..(1 << e) {
            let mut map = vec![0; 2 * e];
            for (i, &j) in perm.iter().enumerate() {
                let f = (flips >> i) & 1 == 1;
                map[2 * i] = 2 * j + usize::from(f);
                map[2 * i + 1] = 2 * j + usize::from(!f);
            }
            let mut vmap: Vec<Option<usize>> = vec![None; n];
            let ok = (0..2 * e).all(|h| {
                let (a, b) = (g.half_edge_vertex(h), g.half_edge_vertex(map[h]));
                match vmap[a] {
                    Some(x) => x == b,
                    None => {
                        vmap[a] = Some(b);
                        true
                    }
                }
            });
            if ok {
                let vmap: Vec<usize> = vmap
                    .into_iter()
                    .map(|v| v.expect("connected graph"))
                    .collect();
                let bijective = vmap.iter().collect::<HashSet<_>>().len() == n;
                if bijective && (0..n).all(|v| g.weight(v) == g.weight(vmap[v])) {
                    out.push(map);
                }
            }
        }
    }
    out
}

fn preserves_subset(map: &[usize], s: &SubgraphMask) -> bool {
    s.edges().iter().all(|&e| s.contains(map[2 * e] / 2))
}

fn commutes_with(map: &[usize], sigma: &[usize]) -> bool {
    (0..map.len()).all(|h| map[sigma[h]] == sigma[map[h]])
}

/// Number of ribbon structures on `g` up to automorphisms of `g`.
pub fn brute_ribbon_orbits(g: &HalfEdgeGraph) -> usize {
    let autos = brute_automorphisms(g);
    let per_vertex: Vec<Vec<Vec<usize>>> = (0..g.vertex_count())
        .map(|v| {
            let hs = g.half_edges_at(v);
            let (first, rest) = hs.split_first().unwrap();
            rest.iter()
                .copied()
                .permutations(rest.len())
                .map(|p| std::iter::once(*first).chain(p).collect())
                .collect()
        })
        .collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut orbits = 0;
    for choice in per_vertex
        .iter()
        .map(|c| c.iter())
        .multi_cartesian_product()
    {
        let mut sigma = vec![0; g.half_edge_count()];
        for cycle in &choice {
            for (k, &h) in cycle.iter().enumerate() {
                sigma[h] = cycle[(k + 1) % cycle.len()];
            }
        }
        if seen.contains(&sigma) {
            continue;
        }
        orbits += 1;
        for a in &autos {
            let mut conj = vec![0; sigma.len()];
            for h in 0..sigma.len() {
                conj[a[h]] = a[sigma[h]];
            }
            seen.insert(conj);
        }
    }
    orbits
}

pub fn dense_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                for j in c..cols {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}

/// Small graphs covering every enumeration mode, all with at most `max_e` edges.
pub fn small_graphs(max_e: usize) -> Vec<HalfEdgeGraph> {
    let mut out = Vec::new();
    for spec in small_specs(max_e) {
        out.extend(
            enumerate_graphs(&spec)
                .unwrap()
                .into_iter()
                .map(|f| f.graph),
        );
    }
    out
}

pub fn small_specs(max_e: usize) -> Vec<EnumSpec> {
    let mut specs = Vec::new();
    for g in 1..=3 {
        for min_valence in [2, 3] {
            for tadpoles in [false, true] {
                specs.push(EnumSpec {
                    min_valence,
                    allow_tadpoles: tadpoles,
                    max_edges: Some(max_e),
                    ..EnumSpec::new(g)
                });
            }
        }
        if g >= 2 {
            specs.push(EnumSpec {
                weighted: true,
                min_edges: 1,
                max_edges: Some(max_e),
                ..EnumSpec::new(g)
            });
        }
    }
    specs
}

pub fn enumeration_vs_pairings() -> Check {
    let mut compared = 0;
    for spec in small_specs(6) {
        let got = enumerate_graphs(&spec).map_err(|e| e.to_string())?;
        let keys: BTreeSet<BruteKey> = got.iter().map(|f| brute_key(&f.graph)).collect();
        if keys.len() != got.len() {
            return Err(format!("{spec:?}: duplicate classes"));
        }
        let naive = naive_classes(&spec);
        if keys != naive {
            return Err(format!(
                "{spec:?}: {} classes, naive oracle {}",
                keys.len(),
                naive.len()
            ));
        }
        compared += naive.len();
    }
    Ok(format!("{compared} classes agree"))
}

pub fn aut_orders_vs_brute() -> Check {
    let mut graphs = 0;
    for g in small_graphs(5) {
        let autos = brute_automorphisms(&g);
        let order = automorphism_group(&g, None)
            .map_err(|e| e.to_string())?
            .order;
        if order != autos.len() as u128 {
            return Err(format!(
                "{:?}: order {order}, brute {}",
                g.edges(),
                autos.len()
            ));
        }
        if g.total_weight() == 0 {
            for s in enumerate_forests(&g).into_iter().chain([SubgraphMask(1)]) {
                let want = autos.iter().filter(|a| preserves_subset(a, &s)).count() as u128;
                let got = pair_automorphisms(&g, &s).map_err(|e| e.to_string())?.order;
                if got != want {
                    return Err(format!(
                        "{:?} with {:?}: order {got}, brute {want}",
                        g.edges(),
                        s.edges()
                    ));
                }
            }
            if g.edge_count() <= 4 && !g.has_tadpole() || g.edge_count() <= 3 {
                let ribbons = enumerate_ribbon_structures(&g).map_err(|e| e.to_string())?;
                if ribbons.len() != brute_ribbon_orbits(&g) {
                    return Err(format!(
                        "{:?}: {} ribbon classes, brute {}",
                        g.edges(),
                        ribbons.len(),
                        brute_ribbon_orbits(&g)
                    ));
                }
                for r in ribbons {
                    let want = autos
                        .iter()
                        .filter(|a| commutes_with(a, &r.sigma()))
                        .count() as u128;
                    let got = automorphism_group(&g, Some(&r))
                        .map_err(|e| e.to_string())?
                        .order;
                    if got != want {
                        return Err(format!(
                            "{:?} ribbon {:?}: order {got}, brute {want}",
                            g.edges(),
                            r.rotations()
                        ));
                    }
                }
            }
        }
        graphs += 1;
    }
    Ok(format!("{graphs} graphs"))
}

pub fn random_relabel(g: &HalfEdgeGraph, rng: &mut StdRng) -> (HalfEdgeGraph, Morphism) {
    let mut vp: Vec<usize> = (0..g.vertex_count()).collect();
    let mut ep: Vec<usize> = (0..g.edge_count()).collect();
    vp.shuffle(rng);
    ep.shuffle(rng);
    let flips: Vec<bool> = (0..g.edge_count()).map(|_| rng.gen()).collect();
    g.relabel(&vp, &ep, &flips)
}

/// Distinct generators of every complex kind in genus at most 3.
pub fn all_small_generators() -> Vec<Generator> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for kind in ComplexKind::ALL {
        for parity in [Parity::Even, Parity::Odd] {
            let genera: Vec<usize> = if kind.needs_max_edges() {
                vec![1, 2, 3]
            } else {
                vec![2, 3]
            };
            for g in genera {
                let mut spec = ComplexSpec::new(kind, parity, g);
                if kind.needs_max_edges() {
                    spec.max_edges = Some(if g == 1 { 9 } else { 7 });
                }
                for gen in build_complex(&spec)
                    .unwrap()
                    .generators
                    .into_iter()
                    .flatten()
                {
                    if seen.insert(gen.form.certificate.clone()) {
                        out.push(gen);
                    }
                }
            }
        }
    }
    out
}

pub fn relabeling_invariance(per_generator: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let gens = all_small_generators();
    for gen in &gens {
        let form = &gen.form;
        for _ in 0..per_generator {
            let (h, m) = random_relabel(&form.graph, &mut rng);
            let cert = match (&form.subset, &form.ribbon) {
                (Some(s), _) => canonical_pair(&h, &s.map(&m)),
                (None, Some(r)) => {
                    canonical_form(&h, Some(&r.relabel(&m).map_err(|e| e.to_string())?))
                }
                (None, None) => canonical_form(&h, None),
            }
            .map_err(|e| e.to_string())?
            .certificate;
            if cert != form.certificate {
                return Err(format!("{} relabeled to {cert}", form.certificate));
            }
        }
    }
    Ok(format!(
        "{} generators x {per_generator} relabelings",
        gens.len()
    ))
}

fn sign(
    m: &Morphism,
    parity: Parity,
    a: &HalfEdgeGraph,
    ea: &Orientation,
    b: &HalfEdgeGraph,
    eb: &Orientation,
) -> Result<i32, String> {
    morphism_sign(m, parity, a, ea, b, eb).map_err(|e| e.to_string())
}

pub fn sign_multiplicativity() -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    let mut spec = EnumSpec::new(3);
    spec.allow_tadpoles = true;
    let mut graphs = small_graphs(6);
    graphs.extend(
        enumerate_graphs(&spec)
            .unwrap()
            .into_iter()
            .map(|f| f.graph),
    );
    for g in graphs.iter().filter(|g| g.total_weight() == 0) {
        for parity in [Parity::Even, Parity::Odd] {
            for _ in 0..4 {
                let eta = reference_orientation_for(g, None);
                let (g1, m1) = random_relabel(g, &mut rng);
                let eta1 = reference_orientation_for(&g1, None);
                let (g2, m2) = random_relabel(&g1, &mut rng);
                let eta2 = reference_orientation_for(&g2, None);
                let s1 = sign(&m1, parity, g, &eta, &g1, &eta1)?;
                let s2 = sign(&m2, parity, &g1, &eta1, &g2, &eta2)?;
                if sign(&m1.then(&m2), parity, g, &eta, &g2, &eta2)? != s1 * s2 {
                    return Err(format!("{:?}: isomorphism composite", g.edges()));
                }
                for e in (0..g1.edge_count()).filter(|&e| !g1.is_tadpole(e)) {
                    let (c, psi) = g1.contract_edge(e).map_err(|e| e.to_string())?;
                    let etac = reference_orientation_for(&c, None);
                    let sp = sign(&psi, parity, &g1, &eta1, &c, &etac)?;
                    if sign(&m1.then(&psi), parity, g, &eta, &c, &etac)? != s1 * sp {
                        return Err(format!("{:?}: collapse composite at {e}", g.edges()));
                    }
                    checked += 1;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} composites"))
}

pub fn tree_independence() -> Check {
    let mut rng = StdRng::seed_from_u64(11);
    let mut checked = 0;
    for g in small_graphs(5).iter().filter(|g| g.total_weight() == 0) {
        let eta = reference_orientation_for(g, None);
        let trees: Vec<SubgraphMask> = enumerate_forests(g)
            .into_iter()
            .filter(|f| f.len() + 1 == g.vertex_count())
            .collect();
        let (h, m) = random_relabel(g, &mut rng);
        let eta_h = reference_orientation_for(&h, None);
        let id = Morphism::identity(g);
        for t in &trees {
            let moved = rebase(g, &eta, &t.edges()).map_err(|e| e.to_string())?;
            let fresh = orientation_with_tree(g, eta.edge_order.clone(), t.edges())
                .map_err(|e| e.to_string())?;
            for parity in [Parity::Even, Parity::Odd] {
                if sign(&id, parity, g, &eta, g, &moved)? != 1 {
                    return Err(format!(
                        "{:?}: rebase to {:?} changed the class",
                        g.edges(),
                        t.edges()
                    ));
                }
                let back = rebase(g, &moved, &eta.tree).map_err(|e| e.to_string())?;
                if sign(&id, parity, g, &back, g, &eta)? != 1 {
                    return Err(format!(
                        "{:?}: round trip through {:?}",
                        g.edges(),
                        t.edges()
                    ));
                }
                let rel = sign(&id, parity, g, &eta, g, &fresh)?;
                if sign(&m, parity, g, &fresh, &h, &eta_h)?
                    != rel * sign(&m, parity, g, &eta, &h, &eta_h)?
                {
                    return Err(format!(
                        "{:?}: transport depends on the tree {:?}",
                        g.edges(),
                        t.edges()
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} tree changes"))
}

pub fn random_matrix(rng: &mut StdRng) -> Vec<Vec<BigRational>> {
    let rows = rng.gen_range(1..=14);
    let cols = rng.gen_range(1..=14);
    let density: f64 = rng.gen_range(0.1..0.9);
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(density) {
                        BigRational::new(
                            BigInt::from(rng.gen_range(-9i64..=9)),
                            BigInt::from(rng.gen_range(1i64..=3)),
                        )
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    if rows > 2 && rng.gen_bool(0.5) {
        let k = rng.gen_range(0..rows);
        let dup: Vec<BigRational> = m[0]
            .iter()
            .zip(&m[1])
            .map(|(a, b)| a * BigRational::from_integer(3.into()) - b)
            .collect();
        m[k] = dup;
    }
    m
}

pub fn to_sparse(dense: &[Vec<BigRational>]) -> SparseMatrix {
    let cols = dense.first().map_or(0, Vec::len);
    let triplets = dense
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, v.clone())));
    SparseMatrix::from_triplets(dense.len(), cols, triplets).unwrap()
}

pub fn rank_vs_dense(count: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(42);
    for k in 0..count {
        let d = random_matrix(&mut rng);
        let (a, b) = (rank(&to_sparse(&d)), dense_rank(d.clone()));
        if a != b {
            return Err(format!("matrix {k}: sparse rank {a}, dense {b}"));
        }
    }
    Ok(format!("{count} matrices"))
}

pub fn euler_everywhere() -> Check {
    let mut count = 0;
    for kind in ComplexKind::ALL {
        for parity in [Parity::Even, Parity::Odd] {
            let genera: Vec<usize> = if kind.needs_max_edges() {
                vec![1, 2, 3, 4]
            } else {
                vec![2, 3, 4]
            };
            for g in genera {
                let mut spec = ComplexSpec::new(kind, parity, g);
                if kind.needs_max_edges() {
                    spec.max_edges = Some(9);
                }
                let r = homology(&build_complex(&spec).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                if r.euler_generators() != r.euler_homology() {
                    return Err(format!("{kind}/{parity}/g={g}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} complexes"))
}
