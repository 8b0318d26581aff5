//! Graph complexes: graded generators, exact boundary matrices, homology.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{analyze, canonical_form, canonical_pair, odd_symmetry_in, CanonicalForm};
use crate::enumerate::{enumerate_forests, enumerate_graphs, EnumSpec};
use crate::error::{Error, Result};
use crate::graph::{HalfEdgeGraph, Morphism, SubgraphMask};
use crate::linalg::{homology_dims, multiply, rank, SparseMatrix};
use crate::orientation::{transport_sign, Orientation, Parity};
use crate::ribbon::{contract_ribbon, surface_invariants};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplexKind {
    #[serde(rename = "com")]
    Com,
    #[serde(rename = "com_geq2")]
    ComGeq2,
    #[serde(rename = "com_tad")]
    ComTad,
    #[serde(rename = "com_tad_geq2")]
    ComTadGeq2,
    #[serde(rename = "cellular_MG")]
    CellularMg,
    #[serde(rename = "cellular_MG_relative")]
    CellularMgRelative,
    #[serde(rename = "gf")]
    Gf,
    #[serde(rename = "gp")]
    Gp,
    #[serde(rename = "ass")]
    Ass,
}

impl ComplexKind {
    pub const ALL: [ComplexKind; 9] = [
        ComplexKind::Com,
        ComplexKind::ComGeq2,
        ComplexKind::ComTad,
        ComplexKind::ComTadGeq2,
        ComplexKind::CellularMg,
        ComplexKind::CellularMgRelative,
        ComplexKind::Gf,
        ComplexKind::Gp,
        ComplexKind::Ass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComplexKind::Com => "com",
            ComplexKind::ComGeq2 => "com_geq2",
            ComplexKind::ComTad => "com_tad",
            ComplexKind::ComTadGeq2 => "com_tad_geq2",
            ComplexKind::CellularMg => "cellular_MG",
            ComplexKind::CellularMgRelative => "cellular_MG_relative",
            ComplexKind::Gf => "gf",
            ComplexKind::Gp => "gp",
            ComplexKind::Ass => "ass",
        }
    }

    /// Graded by `|gamma|` rather than by edge count.
    pub fn is_cubical(self) -> bool {
        matches!(self, ComplexKind::Gf | ComplexKind::Gp)
    }

    pub fn needs_max_edges(self) -> bool {
        matches!(self, ComplexKind::ComGeq2 | ComplexKind::ComTadGeq2)
    }
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ComplexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ComplexKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InconsistentSpec(format!("unknown complex kind `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub kind: ComplexKind,
    pub parity: Parity,
    pub genus: usize,
    pub max_edges: Option<usize>,
    /// Only used to label degrees.
    #[serde(default)]
    pub n: i64,
}

impl ComplexSpec {
    pub fn new(kind: ComplexKind, parity: Parity, genus: usize) -> Self {
        ComplexSpec {
            kind,
            parity,
            genus,
            max_edges: None,
            n: 0,
        }
    }

    pub fn with_max_edges(mut self, max_edges: usize) -> Self {
        self.max_edges = Some(max_edges);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind.needs_max_edges() && self.max_edges.is_none() {
            return Err(Error::Unbounded(format!(
                "{} requires max_edges",
                self.kind
            )));
        }
        Ok(())
    }

    fn natural_max_edges(&self) -> Option<usize> {
        match self.kind {
            ComplexKind::ComGeq2 | ComplexKind::ComTadGeq2 => None,
            _ => Some((3 * self.genus).saturating_sub(3)),
        }
    }

    /// Whether the requested edge bound cuts off part of the complex.
    pub fn is_truncated(&self) -> bool {
        match (self.max_edges, self.natural_max_edges()) {
            (Some(m), Some(n)) => m < n,
            (Some(_), None) => true,
            (None, _) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub grade: usize,
    pub form: CanonicalForm,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub spec: ComplexSpec,
    /// Consecutive internal grades.
    pub grades: Vec<usize>,
    pub generators: Vec<Vec<Generator>>,
    /// `boundaries[i]` maps grade `grades[i + 1]` to grade `grades[i]`.
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn counts(&self) -> Vec<usize> {
        self.generators.iter().map(Vec::len).collect()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.iter().map(Vec::len).sum()
    }

    /// Every composite `d d` vanishes exactly.
    pub fn d_squared_is_zero(&self) -> Result<bool> {
        for w in self.boundaries.windows(2) {
            if !multiply(&w[0], &w[1])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Position of a certificate as `(grade index, generator index)`.
    pub fn locate(&self, certificate: &str) -> Option<(usize, usize)> {
        self.generators.iter().enumerate().find_map(|(gi, gens)| {
            gens.iter()
                .position(|g| g.form.certificate == certificate)
                .map(|k| (gi, k))
        })
    }
}

/// Assemble the complex described by `spec`.
pub fn build_complex(spec: &ComplexSpec) -> Result<ChainComplex> {
    spec.validate()?;
    let candidates = generators_for(spec)?;
    let mut by_grade: BTreeMap<usize, Vec<Generator>> = BTreeMap::new();
    for g in candidates {
        by_grade.entry(g.grade).or_default().push(g);
    }
    let (Some(&lo), Some(&hi)) = (by_grade.keys().next(), by_grade.keys().next_back()) else {
        return Ok(ChainComplex {
            spec: spec.clone(),
            grades: vec![],
            generators: vec![],
            boundaries: vec![],
        });
    };
    let grades: Vec<usize> = (lo..=hi).collect();
    let generators: Vec<Vec<Generator>> = grades
        .iter()
        .map(|k| {
            let mut gens = by_grade.remove(k).unwrap_or_default();
            gens.sort_by(|a, b| a.form.certificate.cmp(&b.form.certificate));
            gens
        })
        .collect();
    let index: HashMap<&str, (usize, usize)> = generators
        .iter()
        .enumerate()
        .flat_map(|(gi, gens)| {
            gens.iter()
                .enumerate()
                .map(move |(k, g)| (g.form.certificate.as_str(), (gi, k)))
        })
        .collect();

    let mut boundaries = Vec::with_capacity(grades.len().saturating_sub(1));
    for gi in 1..grades.len() {
        let columns: Vec<Vec<(usize, i64)>> = generators[gi]
            .par_iter()
            .map(|g| -> Result<Vec<(usize, i64)>> {
                let mut col: BTreeMap<usize, i64> = BTreeMap::new();
                for (target, coeff) in boundary_terms(spec, g)? {
                    if let Some(&(tg, row)) = index.get(target.as_str()) {
                        if tg + 1 == gi {
                            *col.entry(row).or_insert(0) += coeff;
                        }
                    }
                }
                Ok(col.into_iter().filter(|&(_, v)| v != 0).collect())
            })
            .collect::<Result<_>>()?;
        let triplets = columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i, j, v)));
        boundaries.push(SparseMatrix::from_integer_triplets(
            generators[gi - 1].len(),
            generators[gi].len(),
            triplets,
        )?);
    }
    Ok(ChainComplex {
        spec: spec.clone(),
        grades,
        generators,
        boundaries,
    })
}

fn base_spec(spec: &ComplexSpec) -> EnumSpec {
    let mut e = EnumSpec::new(spec.genus);
    e.max_edges = spec.max_edges;
    match spec.kind {
        ComplexKind::Com | ComplexKind::Ass => {}
        ComplexKind::ComGeq2 => e.min_valence = 2,
        ComplexKind::ComTad
        | ComplexKind::CellularMgRelative
        | ComplexKind::Gf
        | ComplexKind::Gp => e.allow_tadpoles = true,
        ComplexKind::ComTadGeq2 => {
            e.min_valence = 2;
            e.allow_tadpoles = true;
        }
        ComplexKind::CellularMg => {
            e.weighted = true;
            e.min_edges = 1;
        }
    }
    if spec.kind == ComplexKind::CellularMgRelative {
        e.min_edges = 1;
    }
    e.ribbon = spec.kind == ComplexKind::Ass;
    e
}

fn generators_for(spec: &ComplexSpec) -> Result<Vec<Generator>> {
    let graphs = enumerate_graphs(&base_spec(spec))?;
    let parity = spec.parity;
    if !spec.kind.is_cubical() {
        let kept = graphs
            .into_par_iter()
            .map(|form| -> Result<Option<Generator>> {
                let (_, aut) = analyze(&form.graph, None, form.ribbon.as_ref())?;
                if odd_symmetry_in(&aut, &form.graph, parity, None)? {
                    return Ok(None);
                }
                let orientation = form.reference_orientation();
                Ok(Some(Generator {
                    grade: form.graph.edge_count(),
                    form,
                    orientation,
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(kept.into_iter().flatten().collect());
    }
    let forests_only = spec.kind == ComplexKind::Gf;
    let batches = graphs
        .par_iter()
        .map(|form| -> Result<Vec<Generator>> {
            let g = &form.graph;
            let subsets: Vec<SubgraphMask> = if forests_only {
                enumerate_forests(g)
            } else {
                (0..(1u64 << g.edge_count()) - 1)
                    .map(SubgraphMask)
                    .collect()
            };
            let mut seen: BTreeMap<String, Generator> = BTreeMap::new();
            for s in subsets {
                let (pair, aut) = analyze(g, Some(&s), None)?;
                if seen.contains_key(&pair.certificate) {
                    continue;
                }
                let canon_subset = pair.subset.expect("pair form");
                let (_, canon_aut) = analyze(&pair.graph, Some(&canon_subset), None)?;
                debug_assert_eq!(aut.order, canon_aut.order);
                if odd_symmetry_in(&canon_aut, &pair.graph, parity, Some(&canon_subset))? {
                    continue;
                }
                let orientation = pair.reference_orientation();
                seen.insert(
                    pair.certificate.clone(),
                    Generator {
                        grade: canon_subset.len(),
                        form: pair,
                        orientation,
                    },
                );
            }
            Ok(seen.into_values().collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(batches.into_iter().flatten().collect())
}

/// The terms of the differential of one generator, as `(certificate, coefficient)`.
/// Targets that are not generators of the complex are filtered by the caller.
pub fn boundary_terms(spec: &ComplexSpec, gen: &Generator) -> Result<Vec<(String, i64)>> {
    let g = &gen.form.graph;
    let eta = &gen.orientation;
    let parity = spec.parity;
    let mut terms = Vec::new();
    match spec.kind {
        ComplexKind::Gf | ComplexKind::Gp => {
            let gamma = gen.form.subset.expect("pair generator");
            for e in gamma.edges() {
                if !g.is_tadpole(e) {
                    let (collapsed, m) = g.contract_edge(e)?;
                    let image = gamma.without(e).map(&m);
                    let target = canonical_pair(&collapsed, &image)?;
                    let sign = transported(parity, g, eta, e, &m, &target)?;
                    terms.push((target.certificate, sign));
                }
                let target = canonical_pair(g, &gamma.without(e))?;
                let eta_t = target.reference_orientation();
                let sign = transport_sign(
                    parity,
                    g,
                    eta,
                    Some(e),
                    &target.to_canonical,
                    &target.graph,
                    &eta_t,
                )?;
                terms.push((target.certificate, -i64::from(sign)));
            }
        }
        ComplexKind::Ass => {
            let ribbon = gen.form.ribbon.as_ref().expect("ribbon generator");
            for e in 0..g.edge_count() {
                if g.is_tadpole(e) {
                    continue;
                }
                let (collapsed, r, m) = contract_ribbon(g, ribbon, e)?;
                let target = canonical_form(&collapsed, Some(&r))?;
                let sign = transported(parity, g, eta, e, &m, &target)?;
                terms.push((target.certificate, sign));
            }
        }
        kind => {
            for e in 0..g.edge_count() {
                if g.is_tadpole(e) && kind != ComplexKind::CellularMg {
                    continue;
                }
                let (collapsed, m) = g.contract_edge(e)?;
                if collapsed.edge_count() == 0 {
                    continue;
                }
                if g.is_tadpole(e) && parity == Parity::Odd {
                    // The source carries the tadpole flip, an odd symmetry.
                    continue;
                }
                let target = canonical_form(&collapsed, None)?;
                let sign = transported(parity, g, eta, e, &m, &target)?;
                terms.push((target.certificate, sign));
            }
        }
    }
    Ok(terms)
}

fn transported(
    parity: Parity,
    g: &HalfEdgeGraph,
    eta: &Orientation,
    e: usize,
    m: &Morphism,
    target: &CanonicalForm,
) -> Result<i64> {
    let composite = m.then(&target.to_canonical);
    let eta_t = target.reference_orientation();
    Ok(i64::from(transport_sign(
        parity,
        g,
        eta,
        Some(e),
        &composite,
        &target.graph,
        &eta_t,
    )?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradeReport {
    pub grade: usize,
    pub generators: usize,
    /// Rank of the differential leaving this grade.
    pub rank: usize,
    pub dim: usize,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub spec: ComplexSpec,
    pub grades: Vec<GradeReport>,
}

impl HomologyReport {
    pub fn dim_at(&self, grade: usize) -> usize {
        self.grades
            .iter()
            .find(|r| r.grade == grade)
            .map_or(0, |r| r.dim)
    }

    /// Nonzero homology as `(grade, dim)`.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.grades
            .iter()
            .filter(|r| r.dim > 0)
            .map(|r| (r.grade, r.dim))
            .collect()
    }

    pub fn euler_generators(&self) -> i64 {
        self.grades
            .iter()
            .map(|r| sign_of(r.grade) * r.generators as i64)
            .sum()
    }

    pub fn euler_homology(&self) -> i64 {
        self.grades
            .iter()
            .map(|r| sign_of(r.grade) * r.dim as i64)
            .sum()
    }
}

fn sign_of(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn homology(c: &ChainComplex) -> Result<HomologyReport> {
    let counts = c.counts();
    let dims = homology_dims(&c.boundaries, &counts)?;
    let ranks: Vec<usize> = c.boundaries.par_iter().map(rank).collect();
    let truncated_top = c.spec.is_truncated();
    let top = c.grades.last().copied();
    let grades = c
        .grades
        .iter()
        .enumerate()
        .map(|(i, &grade)| GradeReport {
            grade,
            generators: counts[i],
            rank: if i == 0 { 0 } else { ranks[i - 1] },
            dim: dims[i],
            truncated: truncated_top
                && (c.spec.kind.is_cubical()
                    || Some(grade) == top
                    || Some(grade) == c.spec.max_edges),
        })
        .collect();
    Ok(HomologyReport {
        spec: c.spec.clone(),
        grades,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    pub grade: usize,
    pub dim: usize,
    pub labels: BTreeMap<String, i64>,
}

/// Relabels internal grades by the conventional degrees for parameter `n`.
pub fn degree_report(r: &HomologyReport, n: i64) -> Vec<DegreeEntry> {
    let g = r.spec.genus as i64;
    r.grades
        .iter()
        .map(|row| {
            let k = row.grade as i64;
            let mut labels = BTreeMap::new();
            match r.spec.kind {
                ComplexKind::CellularMg | ComplexKind::CellularMgRelative => {
                    labels.insert("cell_dimension".into(), k - 1);
                    labels.insert("degree".into(), k - n * g);
                }
                ComplexKind::Gf => {
                    let degree = k - n * g;
                    labels.insert("degree".into(), degree);
                    labels.insert("spine_degree".into(), k);
                    labels.insert("lie_degree".into(), (3 - 2 * n) * g - 3 - degree);
                }
                ComplexKind::Gp => {
                    labels.insert("cube_dimension".into(), k);
                    labels.insert("degree".into(), k + 1 - n * g);
                }
                _ => {
                    labels.insert("degree".into(), k - n * g);
                }
            }
            DegreeEntry {
                grade: row.grade,
                dim: row.dim,
                labels,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vanishing {
    pub vanishes: bool,
    pub reason: Option<String>,
}

/// Whether the class of `graph` is zero for the given parity.
pub fn generator_vanishes(graph: &HalfEdgeGraph, parity: Parity) -> Result<Vanishing> {
    let (_, aut) = analyze(graph, None, None)?;
    if odd_symmetry_in(&aut, graph, parity, None)? {
        let reason = if parity == Parity::Odd && graph.has_tadpole() {
            "tadpole"
        } else {
            "odd symmetry"
        };
        return Ok(Vanishing {
            vanishes: true,
            reason: Some(reason.into()),
        });
    }
    Ok(Vanishing {
        vanishes: false,
        reason: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceBlock {
    pub surface_genus: usize,
    pub boundaries: usize,
    /// Generator indices per grade of the parent complex.
    pub members: Vec<Vec<usize>>,
    pub complex: ChainComplex,
}

/// Splits a ribbon complex by the surface `(genus, boundary count)` of its
/// generators. Errors if some differential connects two different surfaces.
pub fn split_by_surface(c: &ChainComplex) -> Result<Vec<SurfaceBlock>> {
    if c.spec.kind != ComplexKind::Ass {
        return Err(Error::InconsistentSpec(
            "surface splitting needs a ribbon complex".into(),
        ));
    }
    let keys: Vec<Vec<(usize, usize)>> = c
        .generators
        .iter()
        .map(|gens| {
            gens.iter()
                .map(|g| {
                    surface_invariants(
                        &g.form.graph,
                        g.form.ribbon.as_ref().expect("ribbon generator"),
                    )
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    for (i, b) in c.boundaries.iter().enumerate() {
        for (row, col, _) in b.triplets() {
            if keys[i][row] != keys[i + 1][col] {
                return Err(Error::DimensionMismatch(format!(
                    "differential joins surfaces {:?} and {:?}",
                    keys[i + 1][col],
                    keys[i][row]
                )));
            }
        }
    }
    let mut all: Vec<(usize, usize)> = keys.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    Ok(all
        .into_iter()
        .map(|key| {
            let members: Vec<Vec<usize>> = keys
                .iter()
                .map(|ks| {
                    ks.iter()
                        .enumerate()
                        .filter(|(_, k)| **k == key)
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect();
            let generators = members
                .iter()
                .enumerate()
                .map(|(gi, idx)| idx.iter().map(|&k| c.generators[gi][k].clone()).collect())
                .collect();
            let boundaries = c
                .boundaries
                .iter()
                .enumerate()
                .map(|(i, b)| b.submatrix(&members[i], &members[i + 1]))
                .collect();
            let complex = ChainComplex {
                spec: c.spec.clone(),
                grades: c.grades.clone(),
                generators,
                boundaries,
            };
            SurfaceBlock {
                surface_genus: key.0,
                boundaries: key.1,
                members,
                complex,
            }
        })
        .collect())
}

/// Matrix entries as exact rationals, for export.
pub fn entry(value: i64) -> BigRational {
    BigRational::from_integer(value.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn build(kind: ComplexKind, parity: Parity, g: usize) -> ChainComplex {
        build_complex(&ComplexSpec::new(kind, parity, g)).unwrap()
    }

    #[test]
    fn commutative_genus_two() {
        assert_eq!(
            build(ComplexKind::Com, Parity::Even, 2).generator_count(),
            0
        );
        let odd = build(ComplexKind::Com, Parity::Odd, 2);
        assert_eq!(odd.generator_count(), 1);
        assert_eq!(odd.grades, vec![3]);
        assert!(odd.boundaries.is_empty());
    }

    #[test]
    fn commutative_genus_three() {
        let c = build(ComplexKind::Com, Parity::Even, 3);
        assert!(c.d_squared_is_zero().unwrap());
        let r = homology(&c).unwrap();
        assert_eq!(r.support(), vec![(6, 1)]);
        assert_eq!(r.euler_generators(), r.euler_homology());
    }

    #[test]
    fn moduli_genus_two() {
        let c = build(ComplexKind::CellularMg, Parity::Even, 2);
        assert_eq!(c.counts(), vec![2, 1]);
        let r = homology(&c).unwrap();
        assert_eq!(r.support(), vec![(1, 1)]);
        assert!(build(ComplexKind::CellularMgRelative, Parity::Even, 2)
            .generators
            .is_empty());
    }

    #[test]
    fn forested_genus_two() {
        let even = build(ComplexKind::Gf, Parity::Even, 2);
        assert!(even.d_squared_is_zero().unwrap());
        assert_eq!(homology(&even).unwrap().support(), vec![(0, 1)]);
        let odd = build(ComplexKind::Gf, Parity::Odd, 2);
        assert!(homology(&odd).unwrap().support().is_empty());
    }

    #[test]
    fn cubical_matches_commutative() {
        let gp = build(ComplexKind::Gp, Parity::Even, 3);
        assert!(gp.d_squared_is_zero().unwrap());
        assert_eq!(homology(&gp).unwrap().support(), vec![(5, 1)]);
    }

    #[test]
    fn vanishing_examples() {
        assert!(
            generator_vanishes(&cycle(4), Parity::Even)
                .unwrap()
                .vanishes
        );
        assert!(!generator_vanishes(&cycle(7), Parity::Odd).unwrap().vanishes);
        assert!(!generator_vanishes(&wheel(7), Parity::Odd).unwrap().vanishes);
        assert_eq!(
            generator_vanishes(&rose(1), Parity::Odd)
                .unwrap()
                .reason
                .as_deref(),
            Some("tadpole")
        );
    }

    #[test]
    fn ribbon_split() {
        let c = build(ComplexKind::Ass, Parity::Odd, 2);
        let blocks = split_by_surface(&c).unwrap();
        let keys: Vec<(usize, usize)> = blocks
            .iter()
            .map(|b| (b.surface_genus, b.boundaries))
            .collect();
        assert_eq!(keys, vec![(0, 3), (1, 1)]);
        assert!(split_by_surface(&build(ComplexKind::Com, Parity::Odd, 2)).is_err());
    }

    #[test]
    fn degree_labels() {
        let r = homology(&build(ComplexKind::Com, Parity::Even, 3)).unwrap();
        let d = degree_report(&r, 0);
        let six = d.iter().find(|x| x.grade == 6).unwrap();
        assert_eq!(six.labels["degree"], 6);
        let odd = degree_report(&r, 1);
        assert_eq!(
            odd.iter().find(|x| x.grade == 6).unwrap().labels["degree"],
            3
        );
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ComplexKind::ALL {
            assert_eq!(k.name().parse::<ComplexKind>().unwrap(), k);
        }
        assert!("lie".parse::<ComplexKind>().is_err());
        let unbounded = ComplexSpec::new(ComplexKind::ComGeq2, Parity::Even, 1);
        assert!(matches!(
            build_complex(&unbounded),
            Err(Error::Unbounded(_))
        ));
    }
}
