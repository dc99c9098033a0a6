//! Edwards–Sokal colouring of random-cluster configurations, and the
//! vertex-to-edge factor that hands each edge its own i.i.d. payload.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{clusters, Site, SiteGraph, Spin, Window};
use crate::rng::{Stream, SweepRandomness};

/// Per-vertex labels `z` and uniform colours `sigma` in `1..=q`, indexed by base vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorSources {
    pub z: Vec<f64>,
    pub sigma: Vec<u32>,
}

impl ColorSources {
    pub fn new(z: Vec<f64>, sigma: Vec<u32>) -> Result<Self> {
        if z.len() != sigma.len() {
            return Err(Error::ConfigurationLength {
                got: sigma.len(),
                expected: z.len(),
            });
        }
        if sigma.contains(&0) {
            return Err(Error::Parameter("colours start at 1".into()));
        }
        Ok(Self { z, sigma })
    }

    /// Sources for `n` vertices read from `randomness` at layer `time`.
    pub fn draw(randomness: &SweepRandomness, n: usize, q: u32, time: u64) -> Self {
        let z = (0..n).map(|v| randomness.uniform(v, time, Stream::ColorRank)).collect();
        let sigma = (0..n).map(|v| randomness.below(v, time, Stream::ColorSpin, q) + 1).collect();
        Self { z, sigma }
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// How a cluster picks the vertex whose colour it adopts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorVariant {
    /// The vertex with the smallest `z`.
    ArgminZ,
    /// The lexicographically smallest vertex coordinates.
    Lexicographic,
}

/// Colours the base vertices touched by a line-graph window.
///
/// Every open cluster of `edge_config` adopts the source colour of its
/// representative. In Plus mode the cluster joined to the exterior takes
/// `boundary_color` instead. Returns `(base vertex, colour)` in the window's
/// local vertex order.
pub fn es_color(
    edge_config: &[Spin],
    window: &Window,
    sources: &ColorSources,
    variant: ColorVariant,
    boundary_color: u32,
) -> Result<Vec<(Site, u32)>> {
    let wired = window.mode() == crate::lattice::BoundaryMode::Plus;
    let labels = clusters(edge_config, window, wired)?;
    let base = window
        .ambient()
        .edge_structure()
        .expect("cluster labelling succeeded on a line graph")
        .base()
        .clone();
    if sources.len() < base.len() {
        return Err(Error::ConfigurationLength {
            got: sources.len(),
            expected: base.len(),
        });
    }
    if variant == ColorVariant::Lexicographic && base.coords(0).is_none() {
        return Err(Error::InvalidGraph("lexicographic colouring needs coordinates".into()));
    }
    let count = labels.label.iter().copied().max().map_or(0, |m| m + 1);
    let mut rep: Vec<Option<Site>> = vec![None; count.max(labels.ghost_cluster.map_or(0, |g| g + 1))];
    for (&v, &l) in labels.vertices.iter().zip(&labels.label) {
        let better = match rep[l] {
            None => true,
            Some(cur) => precedes(&base, sources, variant, v, cur),
        };
        if better {
            rep[l] = Some(v);
        }
    }
    Ok(labels
        .vertices
        .iter()
        .zip(&labels.label)
        .map(|(&v, &l)| {
            let c = if Some(l) == labels.ghost_cluster {
                boundary_color
            } else {
                sources.sigma[rep[l].expect("every cluster has a vertex")]
            };
            (v, c)
        })
        .collect())
}

fn precedes(base: &SiteGraph, sources: &ColorSources, variant: ColorVariant, a: Site, b: Site) -> bool {
    match variant {
        ColorVariant::ArgminZ => sources.z[a].total_cmp(&sources.z[b]).then(a.cmp(&b)) == Ordering::Less,
        ColorVariant::Lexicographic => base.coords(a) < base.coords(b),
    }
}

/// Which endpoint and slot an edge draws its payload from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiVariant {
    /// The `z`-smaller endpoint `u` gives slot `k = |{w ~ u : z_u < z_w <= z_v}|`.
    OrderBased,
    /// Edge `{v, v + e_i}` takes slot `i` of `v`.
    Direction,
}

/// Payload assigned to one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgePayload {
    pub edge: (Site, Site),
    pub source: Site,
    /// One-based slot of the source's tuple.
    pub slot: usize,
    pub value: u64,
}

/// Hands every edge of `graph` one payload slot of one endpoint.
///
/// `y[v]` is the payload tuple of vertex `v`. Edges are listed in
/// [`SiteGraph::edge_list`] order.
pub fn edge_factor_psi(graph: &SiteGraph, y: &[Vec<u64>], z: &[f64], variant: PsiVariant) -> Result<Vec<EdgePayload>> {
    if y.len() != graph.len() {
        return Err(Error::ConfigurationLength {
            got: y.len(),
            expected: graph.len(),
        });
    }
    let needed = match variant {
        PsiVariant::OrderBased => graph.max_degree(),
        PsiVariant::Direction => graph
            .dimension()
            .ok_or_else(|| Error::InvalidGraph("direction variant needs a box".into()))?,
    };
    if let Some(v) = y.iter().position(|t| t.len() < needed) {
        return Err(Error::Parameter(format!("payload tuple at vertex {v} is shorter than {needed}")));
    }
    if variant == PsiVariant::OrderBased {
        if z.len() != graph.len() {
            return Err(Error::ConfigurationLength {
                got: z.len(),
                expected: graph.len(),
            });
        }
        for v in 0..graph.len() {
            if let Some(&w) = graph.neighbors(v).iter().find(|&&w| z[w] == z[v]) {
                return Err(Error::DuplicateLabel(v.min(w), v.max(w)));
            }
        }
    }
    graph
        .edge_list()
        .into_iter()
        .map(|(a, b)| {
            let (source, slot) = match variant {
                PsiVariant::OrderBased => {
                    let (u, v) = if z[a] < z[b] { (a, b) } else { (b, a) };
                    let k = graph
                        .neighbors(u)
                        .iter()
                        .filter(|&&w| z[u] < z[w] && z[w] <= z[v])
                        .count();
                    (u, k)
                }
                PsiVariant::Direction => {
                    let (ca, cb) = (graph.coords(a).expect("box"), graph.coords(b).expect("box"));
                    let axis = ca.iter().zip(cb).position(|(x, y)| x != y).expect("distinct endpoints");
                    let source = if ca[axis] < cb[axis] { a } else { b };
                    (source, axis + 1)
                }
            };
            Ok(EdgePayload {
                edge: (a, b),
                source,
                slot,
                value: y[source][slot - 1],
            })
        })
        .collect()
}
