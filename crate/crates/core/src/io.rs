//! JSON graph documents and the SMS sparse matrix text format.

use std::fmt::Write as _;
use std::path::Path;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::canonical::canonical_form;
use crate::complexes::ChainComplex;
use crate::error::{Error, Result};
use crate::graph::HalfEdgeGraph;
use crate::linalg::SparseMatrix;
use crate::ribbon::RibbonStructure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub ribbon: Option<Vec<Vec<usize>>>,
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        field: field.into(),
        message: message.into(),
    }
}

impl GraphDocument {
    pub fn from_graph(graph: &HalfEdgeGraph, ribbon: Option<&RibbonStructure>) -> Self {
        let weights = graph.weights();
        GraphDocument {
            vertices: graph.vertex_count(),
            weights: weights.iter().any(|&w| w > 0).then(|| weights.to_vec()),
            edges: graph.edges().iter().map(|&(a, b)| [a, b]).collect(),
            ribbon: ribbon.map(|r| r.rotations().to_vec()),
        }
    }

    /// The graph and ribbon this document describes.
    pub fn to_graph(&self) -> Result<(HalfEdgeGraph, Option<RibbonStructure>)> {
        if self.vertices == 0 {
            return Err(schema("vertices", "must be positive"));
        }
        for (i, &[u, v]) in self.edges.iter().enumerate() {
            if u >= self.vertices || v >= self.vertices {
                return Err(schema(
                    format!("edges[{i}]"),
                    format!("endpoint out of range 0..{}", self.vertices),
                ));
            }
        }
        let edges = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        let weights = match &self.weights {
            Some(w) if w.len() != self.vertices => {
                return Err(schema(
                    "weights",
                    format!("expected {} entries, got {}", self.vertices, w.len()),
                ));
            }
            Some(w) => w.clone(),
            None => vec![0; self.vertices],
        };
        let graph = HalfEdgeGraph::with_weights(weights, edges)
            .map_err(|e| schema("edges", e.to_string()))?;
        let ribbon = match &self.ribbon {
            None => None,
            Some(rot) => Some(
                RibbonStructure::new(&graph, rot.clone())
                    .map_err(|e| schema("ribbon", e.to_string()))?,
            ),
        };
        Ok((graph, ribbon))
    }
}

pub fn parse_graph(text: &str) -> Result<(HalfEdgeGraph, Option<RibbonStructure>)> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    doc.to_graph()
}

pub fn serialize_graph(graph: &HalfEdgeGraph, ribbon: Option<&RibbonStructure>) -> Result<String> {
    Ok(serde_json::to_string(&GraphDocument::from_graph(
        graph, ribbon,
    ))?)
}

/// Serializes the canonical representative, so isomorphic inputs give equal text.
pub fn serialize_canonical(
    graph: &HalfEdgeGraph,
    ribbon: Option<&RibbonStructure>,
) -> Result<String> {
    let c = canonical_form(graph, ribbon)?;
    serialize_graph(&c.graph, c.ribbon.as_ref())
}

pub fn read_graph_file(path: &Path) -> Result<(HalfEdgeGraph, Option<RibbonStructure>)> {
    parse_graph(&std::fs::read_to_string(path)?)
}

/// Header `rows cols M`, one `i j value` line per nonzero (1-indexed), then `0 0 0`.
pub fn write_sms(m: &SparseMatrix) -> String {
    let mut out = format!("{} {} M\n", m.rows(), m.cols());
    for (i, j, v) in m.triplets() {
        let _ = writeln!(out, "{} {} {}", i + 1, j + 1, v);
    }
    out.push_str("0 0 0\n");
    out
}

pub fn read_sms(text: &str) -> Result<SparseMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parse_usize = |s: &str, line: usize| {
        s.parse::<usize>().map_err(|e| Error::Parse {
            line,
            message: format!("`{s}`: {e}"),
        })
    };
    if fields.len() != 3 {
        return Err(Error::Parse {
            line: 1,
            message: "expected `rows cols M`".into(),
        });
    }
    let (rows, cols) = (parse_usize(fields[0], 1)?, parse_usize(fields[1], 1)?);
    let mut triplets = Vec::new();
    let mut terminated = false;
    for (n, line) in lines {
        let n = n + 1;
        if terminated {
            return Err(Error::Parse {
                line: n,
                message: "content after terminator".into(),
            });
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::Parse {
                line: n,
                message: "expected `i j value`".into(),
            });
        }
        let (i, j) = (parse_usize(f[0], n)?, parse_usize(f[1], n)?);
        let v: BigRational = f[2].parse().map_err(|e| Error::Parse {
            line: n,
            message: format!("`{}`: {e:?}", f[2]),
        })?;
        if i == 0 && j == 0 {
            if !v.is_zero() {
                return Err(Error::Parse {
                    line: n,
                    message: "malformed terminator".into(),
                });
            }
            terminated = true;
            continue;
        }
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(Error::Parse {
                line: n,
                message: format!("entry ({i}, {j}) outside {rows}x{cols}"),
            });
        }
        triplets.push((i - 1, j - 1, v));
    }
    if !terminated {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: "missing `0 0 0` terminator".into(),
        });
    }
    SparseMatrix::from_triplets(rows, cols, triplets)
}

#[derive(Serialize)]
struct ManifestLine<'a> {
    grade: usize,
    index: usize,
    certificate: &'a str,
    graph: GraphDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    subset: Option<Vec<usize>>,
}

/// One JSON line per generator, in canonical order.
pub fn generator_manifest(c: &ChainComplex) -> Result<String> {
    let mut out = String::new();
    for (gi, gens) in c.generators.iter().enumerate() {
        for (index, g) in gens.iter().enumerate() {
            let line = ManifestLine {
                grade: c.grades[gi],
                index,
                certificate: &g.form.certificate,
                graph: GraphDocument::from_graph(&g.form.graph, g.form.ribbon.as_ref()),
                subset: g.form.subset.map(|s| s.edges()),
            };
            out.push_str(&serde_json::to_string(&line)?);
            out.push('\n');
        }
    }
    Ok(out)
}

/// Writes `generators.jsonl` and one `d_<k>.sms` per boundary, `k` the source grade.
pub fn export_complex(c: &ChainComplex, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let manifest = dir.join("generators.jsonl");
    std::fs::write(&manifest, generator_manifest(c)?)?;
    written.push(manifest);
    for (i, b) in c.boundaries.iter().enumerate() {
        let path = dir.join(format!("d_{}.sms", c.grades[i + 1]));
        std::fs::write(&path, write_sms(b))?;
        written.push(path);
    }
    Ok(written)
}
