//! Built-in verification suites with pass/fail records.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::canonical_form;
use crate::complexes::{
    build_complex, generator_vanishes, homology, split_by_surface, ComplexKind, ComplexSpec,
    HomologyReport,
};
use crate::enumerate::{
    enumerate_forests, enumerate_graphs, enumerate_ribbon_structures, EnumSpec,
};
use crate::error::Result;
use crate::graph::families::{banana, cycle, theta, wheel};
use crate::graph::HalfEdgeGraph;
use crate::io::{parse_graph, read_sms, serialize_canonical, write_sms};
use crate::moduli::{build_cell_poset, build_spine};
use crate::orientation::Parity;
use crate::ribbon::{contract_ribbon, surface_invariants, RibbonStructure};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Core,
    Paper,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "core" => Ok(Suite::Core),
            "paper" => Ok(Suite::Paper),
            other => Err(format!("unknown suite `{other}` (expected core or paper)")),
        }
    }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Paper => (1..=10).map(criterion).collect(),
        Suite::Core => core_checks(),
    }
}

type Outcome = Result<(bool, String)>;

fn timed(id: impl Into<String>, anchor: &'static str, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Check {
        id: id.into(),
        anchor,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Acceptance criteria 1 through 10.
pub fn criterion(n: usize) -> Check {
    let id = format!("criterion-{n}");
    match n {
        1 => timed(id, "d^2 = 0", d_squared_everywhere),
        2 => timed(
            id,
            "[B_n]=0 iff n even; [W_{2n+1}]=0 iff n even",
            vanishing_table,
        ),
        3 => timed(id, "pair non-trivially with the wheels", commutative_small),
        4 => timed(id, "MG_2 is contractible", moduli_genus_two),
        5 => timed(
            id,
            "H(Com) = H(MG_g, MG_g^{>=1}); MG_g^{>=1} contractible",
            relative_cross_check,
        ),
        6 => timed(id, "sum of Q[C_{4n+1}] and Q[C_{4n+3}]", cycle_window),
        7 => timed(
            id,
            "forested graph complex computes the homology of the spine",
            forested_genus_two,
        ),
        8 => timed(
            id,
            "cubical complex that computes commutative graph homology",
            cubical_experiment,
        ),
        9 => timed(
            id,
            "dimension of MG_g is 3g-4; the spine S_g is 2g-3",
            moduli_dimensions,
        ),
        10 => timed(id, "S_G = S_{G/e}", ribbon_checks),
        _ => Check {
            id,
            anchor: "",
            passed: false,
            detail: "no such criterion".into(),
            seconds: 0.0,
        },
    }
}

fn spec(kind: ComplexKind, parity: Parity, g: usize) -> ComplexSpec {
    let s = ComplexSpec::new(kind, parity, g);
    if kind.needs_max_edges() {
        s.with_max_edges(9)
    } else {
        s
    }
}

fn report(kind: ComplexKind, parity: Parity, g: usize) -> Result<HomologyReport> {
    homology(&build_complex(&spec(kind, parity, g))?)
}

fn support(r: &HomologyReport) -> BTreeMap<usize, usize> {
    r.support().into_iter().collect()
}

fn d_squared_everywhere() -> Outcome {
    let jobs: Vec<(ComplexKind, Parity, usize)> = ComplexKind::ALL
        .into_iter()
        .flat_map(|k| {
            [Parity::Even, Parity::Odd]
                .into_iter()
                .flat_map(move |p| (2..=4).map(move |g| (k, p, g)))
        })
        .collect();
    let failures: Vec<String> = jobs
        .par_iter()
        .map(|&(k, p, g)| -> Result<Option<String>> {
            let c = build_complex(&spec(k, p, g))?;
            Ok((!c.d_squared_is_zero()?).then(|| format!("{k}/{p}/g={g}")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok((
        failures.is_empty(),
        format!("{} complexes, failures: {failures:?}", jobs.len()),
    ))
}

fn vanishing_table() -> Outcome {
    let mut mismatches = Vec::new();
    let mut check =
        |name: String, g: &HalfEdgeGraph, parity: Parity, expected: bool| -> Result<()> {
            if generator_vanishes(g, parity)?.vanishes != expected {
                mismatches.push(format!("{name}/{parity}"));
            }
            Ok(())
        };
    for n in 1..=9 {
        let c = cycle(n);
        check(format!("C_{n}"), &c, Parity::Even, n % 4 != 1)?;
        check(format!("C_{n}"), &c, Parity::Odd, n % 4 != 3)?;
        if n >= 2 {
            let b = banana(n);
            check(format!("B_{n}"), &b, Parity::Even, true)?;
            check(format!("B_{n}"), &b, Parity::Odd, n % 2 == 0)?;
            let w = wheel(2 * n);
            check(format!("W_{}", 2 * n), &w, Parity::Even, true)?;
            check(format!("W_{}", 2 * n), &w, Parity::Odd, true)?;
        }
        let w = wheel(2 * n + 1);
        check(format!("W_{}", 2 * n + 1), &w, Parity::Even, false)?;
        check(format!("W_{}", 2 * n + 1), &w, Parity::Odd, n % 2 == 0)?;
    }
    Ok((mismatches.is_empty(), format!("mismatches: {mismatches:?}")))
}

fn commutative_small() -> Outcome {
    let two = build_complex(&spec(ComplexKind::Com, Parity::Even, 2))?;
    let three = support(&report(ComplexKind::Com, Parity::Even, 3)?);
    let expected: BTreeMap<usize, usize> = [(6, 1)].into();
    Ok((
        two.generator_count() == 0 && three == expected,
        format!(
            "g=2 generators {}, g=3 homology {three:?}",
            two.generator_count()
        ),
    ))
}

fn moduli_genus_two() -> Outcome {
    let c = build_complex(&spec(ComplexKind::CellularMg, Parity::Even, 2))?;
    let r = homology(&c)?;
    let reduced_zero = r.support() == vec![(1, 1)];
    let cert = |weights: Vec<u32>, edges: Vec<(usize, usize)>| -> Result<String> {
        Ok(canonical_form(&HalfEdgeGraph::with_weights(weights, edges)?, None)?.certificate)
    };
    let mut dim0 = vec![
        cert(vec![1, 1], vec![(0, 1)])?,
        cert(vec![1], vec![(0, 0)])?,
    ];
    dim0.sort();
    let dim1 = vec![cert(vec![0, 1], vec![(0, 0), (0, 1)])?];
    let certs = |i: usize| -> Vec<String> {
        c.generators
            .get(i)
            .map(|gs| gs.iter().map(|g| g.form.certificate.clone()).collect())
            .unwrap_or_default()
    };
    let ranks = c
        .boundaries
        .iter()
        .map(crate::linalg::rank)
        .collect::<Vec<_>>();
    let ok = reduced_zero
        && c.grades == vec![1, 2]
        && certs(0) == dim0
        && certs(1) == dim1
        && ranks == vec![1];
    Ok((
        ok,
        format!(
            "counts {:?}, boundary ranks {ranks:?}, homology {:?}",
            c.counts(),
            r.support()
        ),
    ))
}

fn reduced(r: &HomologyReport) -> BTreeMap<usize, usize> {
    let mut s = support(r);
    if let Some(d) = s.get_mut(&1) {
        *d -= 1;
        if *d == 0 {
            s.remove(&1);
        }
    }
    s
}

fn relative_cross_check() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for g in [2, 3] {
        let com = support(&report(ComplexKind::Com, Parity::Even, g)?);
        let rel = support(&report(ComplexKind::CellularMgRelative, Parity::Even, g)?);
        let abs = reduced(&report(ComplexKind::CellularMg, Parity::Even, g)?);
        ok &= com == rel && rel == abs;
        detail.push(format!(
            "g={g}: com {com:?} relative {rel:?} reduced {abs:?}"
        ));
    }
    Ok((ok, detail.join("; ")))
}

fn cycle_window() -> Outcome {
    let even = support(&report(ComplexKind::ComGeq2, Parity::Even, 1)?);
    let odd = support(&report(ComplexKind::ComGeq2, Parity::Odd, 1)?);
    let ok = even == [(5, 1), (9, 1)].into() && odd == [(3, 1), (7, 1)].into();
    Ok((ok, format!("even {even:?}, odd {odd:?}")))
}

fn forested_genus_two() -> Outcome {
    let even = support(&report(ComplexKind::Gf, Parity::Even, 2)?);
    let odd = support(&report(ComplexKind::Gf, Parity::Odd, 2)?);
    Ok((
        even == [(0, 1)].into() && odd.is_empty(),
        format!("edge-only {even:?}, twisted {odd:?}"),
    ))
}

fn cubical_experiment() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for g in [2, 3] {
        let com = support(&report(ComplexKind::Com, Parity::Even, g)?);
        let gp: BTreeMap<usize, usize> = support(&report(ComplexKind::Gp, Parity::Even, g)?)
            .into_iter()
            .map(|(k, d)| (k + 1, d))
            .collect();
        ok &= com == gp;
        detail.push(format!("g={g}: com {com:?} gp(shifted) {gp:?}"));
    }
    Ok((ok, detail.join("; ")))
}

fn moduli_dimensions() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for g in 2..=4 {
        let cell = build_cell_poset(g)?.max_dimension;
        let spine = build_spine(g)?;
        ok &= cell == 3 * g - 4 && spine.max_dimension == 2 * g - 3 && spine.is_closed();
        detail.push(format!(
            "g={g}: cells {cell}, spine {}",
            spine.max_dimension
        ));
    }
    let fig = HalfEdgeGraph::new(3, vec![(0, 2), (0, 1), (1, 2), (1, 2)])?;
    let trees = enumerate_forests(&fig)
        .into_iter()
        .filter(|f| f.len() == fig.vertex_count() - 1)
        .count();
    ok &= trees == 5;
    detail.push(format!("spanning trees {trees}"));
    Ok((ok, detail.join("; ")))
}

fn ribbon_checks() -> Outcome {
    let t = theta();
    let mut thetas: Vec<(usize, usize)> = enumerate_ribbon_structures(&t)?
        .iter()
        .map(|r| surface_invariants(&t, r))
        .collect::<Result<_>>()?;
    thetas.sort_unstable();
    let mut ok = thetas == vec![(0, 3), (1, 1)];
    let mut pairs = 0usize;
    let mut broken = 0usize;
    for g in 2..=4 {
        let mut s = EnumSpec::new(g);
        s.allow_tadpoles = true;
        s.max_edges = Some(6);
        for form in enumerate_graphs(&s)? {
            let graph = &form.graph;
            for r in enumerate_ribbon_structures(graph)? {
                let key = surface_invariants(graph, &r)?;
                for e in (0..graph.edge_count()).filter(|&e| !graph.is_tadpole(e)) {
                    let (h, rh, _) = contract_ribbon(graph, &r, e)?;
                    pairs += 1;
                    if surface_invariants(&h, &rh)? != key {
                        broken += 1;
                    }
                }
            }
        }
    }
    ok &= broken == 0;
    let mut blocks = 0;
    for g in [2, 3] {
        for p in [Parity::Even, Parity::Odd] {
            blocks += split_by_surface(&build_complex(&spec(ComplexKind::Ass, p, g))?)?.len();
        }
    }
    Ok((ok, format!("theta surfaces {thetas:?}, {pairs} contractions checked, {broken} changed, {blocks} blocks")))
}

fn core_checks() -> Vec<Check> {
    let mut out = vec![timed(
        "euler-identity",
        "sum (-1)^k n_k = sum (-1)^k dim H_k",
        || {
            let mut bad = Vec::new();
            for k in ComplexKind::ALL {
                for p in [Parity::Even, Parity::Odd] {
                    for g in [2, 3] {
                        let r = report(k, p, g)?;
                        if r.euler_generators() != r.euler_homology() {
                            bad.push(format!("{k}/{p}/g={g}"));
                        }
                    }
                }
            }
            Ok((bad.is_empty(), format!("failures: {bad:?}")))
        },
    )];
    out.push(timed(
        "graph-round-trip",
        "GraphDocument round trip",
        || {
            let mut s = EnumSpec::new(3);
            s.allow_tadpoles = true;
            let forms = enumerate_graphs(&s)?;
            let mut bad = 0;
            for f in &forms {
                let (g, _) = parse_graph(&serialize_canonical(&f.graph, None)?)?;
                if canonical_form(&g, None)?.certificate != f.certificate {
                    bad += 1;
                }
            }
            Ok((
                bad == 0,
                format!("{} graphs, {bad} mismatches", forms.len()),
            ))
        },
    ));
    out.push(timed("matrix-round-trip", "SMS round trip", || {
        let c = build_complex(&spec(ComplexKind::Gf, Parity::Even, 3))?;
        let ok = c
            .boundaries
            .iter()
            .all(|b| read_sms(&write_sms(b)).map(|m| &m == b).unwrap_or(false));
        Ok((ok, format!("{} matrices", c.boundaries.len())))
    }));
    out.push(timed(
        "ribbon-thetas",
        "two surfaces for the theta graph",
        || {
            let t = theta();
            let planar = RibbonStructure::new(&t, vec![vec![0, 2, 4], vec![1, 5, 3]])?;
            let other = RibbonStructure::new(&t, vec![vec![0, 2, 4], vec![1, 3, 5]])?;
            let got = (
                surface_invariants(&t, &planar)?,
                surface_invariants(&t, &other)?,
            );
            Ok((got == ((0, 3), (1, 1)), format!("{got:?}")))
        },
    ));
    out
}
