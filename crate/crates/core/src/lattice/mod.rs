//! Finite graph substrate: truncated `Z^d` boxes, line graphs, balls and
//! spheres, and cluster labelling with a ghost vertex for wired boundaries.
//!
//! A box built by [`build_grid`] remembers that it is a piece of the infinite
//! lattice: every site knows the degree it would have in `Z^d`, and anything
//! missing from the box is treated as exterior by the models.

mod clusters;
mod union_find;
mod window;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};

pub use clusters::{clusters, ClusterLabels};
pub use union_find::UnionFind;
pub use window::{ball, BoundaryMode, EdgeFrame, Window};

/// Dense site index.
pub type Site = usize;

/// Spin value; `0` is the minimal element of every spin space.
pub type Spin = u8;

#[derive(Debug, Clone)]
struct BoxShape {
    extents: Vec<usize>,
    strides: Vec<usize>,
}

/// Extra bookkeeping carried by a line graph: which base edge each site is.
#[derive(Debug, Clone)]
pub struct EdgeStructure {
    base: Arc<SiteGraph>,
    endpoints: Vec<(Site, Site)>,
    index: HashMap<(Site, Site), Site>,
}

impl EdgeStructure {
    pub fn base(&self) -> &Arc<SiteGraph> {
        &self.base
    }

    /// Endpoints of the base edge, smaller index first.
    pub fn endpoints(&self, e: Site) -> (Site, Site) {
        self.endpoints[e]
    }

    pub fn edge_between(&self, a: Site, b: Site) -> Option<Site> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.index.get(&key).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }
}

/// Finite graph with symmetric, irreflexive adjacency.
#[derive(Debug, Clone)]
pub struct SiteGraph {
    adjacency: Vec<Vec<Site>>,
    coords: Option<Vec<Vec<i64>>>,
    orbit: Vec<u32>,
    shape: Option<BoxShape>,
    lattice_degree: Option<usize>,
    edges: Option<EdgeStructure>,
}

impl SiteGraph {
    /// Graph on `n` sites from an explicit edge list. Not embedded in any lattice.
    pub fn from_edges(n: usize, edges: &[(Site, Site)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::UnknownSite { site: a.max(b), len: n });
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
            nb.dedup();
        }
        Ok(Self {
            adjacency,
            coords: None,
            orbit: vec![0; n],
            shape: None,
            lattice_degree: None,
            edges: None,
        })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, v: Site) -> &[Site] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Site) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Degree the site would have in the infinite lattice this graph truncates;
    /// the actual degree for graphs with no lattice embedding.
    pub fn full_degree(&self, v: Site) -> usize {
        self.lattice_degree.unwrap_or_else(|| self.degree(v))
    }

    /// Number of neighbours lost to the truncation.
    pub fn missing_neighbors(&self, v: Site) -> usize {
        self.full_degree(v) - self.degree(v)
    }

    pub fn lattice_degree(&self) -> Option<usize> {
        self.lattice_degree
    }

    pub fn coords(&self, v: Site) -> Option<&[i64]> {
        self.coords.as_ref().map(|c| c[v].as_slice())
    }

    pub fn orbit(&self, v: Site) -> u32 {
        self.orbit[v]
    }

    /// Box side lengths when this graph (or its base, for a line graph) is a box.
    pub fn extents(&self) -> Option<&[usize]> {
        match (&self.shape, &self.edges) {
            (Some(s), _) => Some(&s.extents),
            (None, Some(e)) => e.base.extents(),
            _ => None,
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        self.extents().map(<[usize]>::len)
    }

    pub fn edge_structure(&self) -> Option<&EdgeStructure> {
        self.edges.as_ref()
    }

    pub fn is_line_graph(&self) -> bool {
        self.edges.is_some()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, w)` with `u < w`, ordered by `u` then `w`.
    pub fn edge_list(&self) -> Vec<(Site, Site)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nb) in self.adjacency.iter().enumerate() {
            out.extend(nb.iter().filter(|&&w| w > u).map(|&w| (u, w)));
        }
        out
    }

    pub fn check_site(&self, v: Site) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownSite { site: v, len: self.len() })
        }
    }

    /// Site at the given box coordinates.
    pub fn site_at(&self, coords: &[i64]) -> Option<Site> {
        let shape = self.shape.as_ref()?;
        if coords.len() != shape.extents.len() {
            return None;
        }
        let mut idx = 0usize;
        for ((&c, &ext), &stride) in coords.iter().zip(&shape.extents).zip(&shape.strides) {
            if c < 0 || c as usize >= ext {
                return None;
            }
            idx += c as usize * stride;
        }
        Some(idx)
    }

    /// Site nearest the geometric centre of a box.
    pub fn center(&self) -> Option<Site> {
        match (&self.shape, &self.edges) {
            (Some(s), _) => {
                let c: Vec<i64> = s.extents.iter().map(|&e| (e / 2) as i64).collect();
                self.site_at(&c)
            }
            (None, Some(es)) => {
                let bc = es.base.center()?;
                let d = es.base.dimension()?;
                let mut c = es.base.coords(bc)?.to_vec();
                c[0] += 1;
                let other = es.base.site_at(&c).or_else(|| {
                    c[0] -= 2;
                    es.base.site_at(&c)
                })?;
                debug_assert!(d >= 1);
                es.edge_between(bc, other)
            }
            _ => None,
        }
    }

    /// Image of `v` under the lattice translation by `offset`, if it stays in the box.
    pub fn translate(&self, v: Site, offset: &[i64]) -> Option<Site> {
        if self.shape.is_some() {
            let c: Vec<i64> = self
                .coords(v)?
                .iter()
                .zip(offset)
                .map(|(a, b)| a + b)
                .collect();
            return self.site_at(&c);
        }
        let es = self.edges.as_ref()?;
        let (a, b) = es.endpoints[v];
        let ta = es.base.translate(a, offset)?;
        let tb = es.base.translate(b, offset)?;
        es.edge_between(ta, tb)
    }

    /// Breadth-first layers around `v`: `layers[k]` holds the sites at distance `k`.
    pub fn bfs_layers(&self, v: Site, max_depth: usize) -> Vec<Vec<Site>> {
        let mut dist = HashMap::new();
        dist.insert(v, 0usize);
        let mut layers = vec![vec![v]];
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            if du == max_depth {
                continue;
            }
            for &w in &self.adjacency[u] {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(du + 1);
                    if layers.len() <= du + 1 {
                        layers.push(Vec::new());
                    }
                    layers[du + 1].push(w);
                    queue.push_back(w);
                }
            }
        }
        for layer in &mut layers {
            layer.sort_unstable();
        }
        layers
    }

    /// Graph distance, `None` when disconnected.
    pub fn distance(&self, u: Site, v: Site) -> Option<usize> {
        if u == v {
            return Some(0);
        }
        let mut seen = vec![false; self.len()];
        seen[u] = true;
        let mut frontier = vec![u];
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for x in frontier {
                for &w in &self.adjacency[x] {
                    if !seen[w] {
                        if w == v {
                            return Some(d);
                        }
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        None
    }
}

/// Box `[0, extents[0]) x ... x [0, extents[d-1])` of `Z^d` with nearest-neighbour edges.
pub fn build_grid(extents: &[usize]) -> Result<SiteGraph> {
    if extents.is_empty() {
        return Err(Error::InvalidGraph("dimension must be at least 1".into()));
    }
    if extents.contains(&0) {
        return Err(Error::InvalidGraph(format!("zero extent in {extents:?}")));
    }
    let d = extents.len();
    let mut strides = vec![1usize; d];
    for i in 1..d {
        strides[i] = strides[i - 1] * extents[i - 1];
    }
    let n: usize = extents.iter().product();
    let mut coords = Vec::with_capacity(n);
    let mut adjacency = Vec::with_capacity(n);
    for idx in 0..n {
        let c: Vec<i64> = (0..d).map(|i| ((idx / strides[i]) % extents[i]) as i64).collect();
        let mut nb = Vec::with_capacity(2 * d);
        for i in 0..d {
            if c[i] > 0 {
                nb.push(idx - strides[i]);
            }
            if (c[i] as usize) + 1 < extents[i] {
                nb.push(idx + strides[i]);
            }
        }
        nb.sort_unstable();
        adjacency.push(nb);
        coords.push(c);
    }
    Ok(SiteGraph {
        adjacency,
        coords: Some(coords),
        orbit: vec![0; n],
        shape: Some(BoxShape {
            extents: extents.to_vec(),
            strides,
        }),
        lattice_degree: Some(2 * d),
        edges: None,
    })
}

/// Line graph: one site per edge of `g`, adjacent when the edges share an endpoint.
///
/// For a box, the site of edge `{v, v + e_i}` gets coordinates `2v + e_i` and orbit `i`.
pub fn line_graph(g: &Arc<SiteGraph>) -> Result<SiteGraph> {
    let endpoints = g.edge_list();
    if endpoints.is_empty() {
        return Err(Error::InvalidGraph("line graph of an edgeless graph".into()));
    }
    let mut incident: Vec<Vec<Site>> = vec![Vec::new(); g.len()];
    let mut index = HashMap::with_capacity(endpoints.len());
    for (e, &(a, b)) in endpoints.iter().enumerate() {
        incident[a].push(e);
        incident[b].push(e);
        index.insert((a, b), e);
    }
    let mut adjacency = vec![Vec::new(); endpoints.len()];
    for inc in &incident {
        for (i, &e) in inc.iter().enumerate() {
            for &f in &inc[i + 1..] {
                adjacency[e].push(f);
                adjacency[f].push(e);
            }
        }
    }
    for nb in &mut adjacency {
        nb.sort_unstable();
        nb.dedup();
    }
    let (coords, orbit) = match g.coords.as_ref() {
        Some(_) => {
            let mut coords = Vec::with_capacity(endpoints.len());
            let mut orbit = Vec::with_capacity(endpoints.len());
            for &(a, b) in &endpoints {
                let ca = g.coords(a).expect("box coords");
                let cb = g.coords(b).expect("box coords");
                let axis = ca.iter().zip(cb).position(|(x, y)| x != y).unwrap_or(0);
                coords.push(ca.iter().zip(cb).map(|(x, y)| x + y).collect());
                orbit.push(axis as u32);
            }
            (Some(coords), orbit)
        }
        None => (None, vec![0; endpoints.len()]),
    };
    Ok(SiteGraph {
        adjacency,
        coords,
        orbit,
        shape: None,
        lattice_degree: g.lattice_degree.map(|k| 2 * (k - 1)),
        edges: Some(EdgeStructure {
            base: Arc::clone(g),
            endpoints,
            index,
        }),
    })
}

/// Sites at distance exactly `n` from `v`; `{v}` for `n = 0`.
pub fn sphere_shell(g: &SiteGraph, v: Site, n: usize) -> Vec<Site> {
    g.bfs_layers(v, n).into_iter().nth(n).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        let g = build_grid(&[3]).unwrap();
        assert_eq!((g.len(), g.edge_count()), (3, 2));
        let g = build_grid(&[2, 2]).unwrap();
        assert_eq!((g.len(), g.edge_count()), (4, 4));
        let g = build_grid(&[3, 3]).unwrap();
        // enumerated: 3 rows of 2 horizontal edges plus 3 columns of 2 vertical edges
        let horizontal = (0..3).map(|_| 2).sum::<usize>();
        let vertical = (0..3).map(|_| 2).sum::<usize>();
        assert_eq!(g.edge_count(), horizontal + vertical);
        assert_eq!(g.edge_count(), 12);
        assert!(build_grid(&[3, 0]).is_err());
        assert!(build_grid(&[]).is_err());
    }

    #[test]
    fn grid_adjacency_is_symmetric_and_irreflexive() {
        let g = build_grid(&[4, 3, 2]).unwrap();
        for v in 0..g.len() {
            for &w in g.neighbors(v) {
                assert_ne!(v, w);
                assert!(g.neighbors(w).contains(&v));
            }
        }
        let c = g.site_at(&[1, 1, 0]).unwrap();
        assert_eq!(g.full_degree(c), 6);
        assert_eq!(g.missing_neighbors(c), 1);
    }

    #[test]
    fn line_graph_examples() {
        let path = Arc::new(build_grid(&[3]).unwrap());
        let lg = line_graph(&path).unwrap();
        assert_eq!((lg.len(), lg.edge_count()), (2, 1));

        let sq = Arc::new(build_grid(&[2, 2]).unwrap());
        let lg = line_graph(&sq).unwrap();
        assert_eq!(lg.len(), 4);
        assert!((0..4).all(|e| lg.degree(e) == 2));
        assert_eq!(lg.edge_count(), 4);

        let big = Arc::new(build_grid(&[5, 5]).unwrap());
        let lg = line_graph(&big).unwrap();
        let e = lg.center().unwrap();
        assert_eq!(lg.degree(e), 6);
        assert_eq!(lg.lattice_degree(), Some(6));

        let lone = Arc::new(build_grid(&[1]).unwrap());
        assert!(line_graph(&lone).is_err());
    }

    #[test]
    fn balls_and_shells_on_z2() {
        let g = build_grid(&[9, 9]).unwrap();
        let c = g.center().unwrap();
        let layers = g.bfs_layers(c, 2);
        assert_eq!(layers[0], vec![c]);
        assert_eq!(layers[1].len(), 4);
        assert_eq!(layers[2].len(), 8);
        assert_eq!(1 + 4 + 8, 13);
        assert_eq!(sphere_shell(&g, c, 0), vec![c]);
        assert_eq!(sphere_shell(&g, c, 2).len(), 8);
    }

    #[test]
    fn translation_moves_edges() {
        let base = Arc::new(build_grid(&[6, 6]).unwrap());
        let lg = line_graph(&base).unwrap();
        let e = lg.center().unwrap();
        let f = lg.translate(e, &[1, -1]).unwrap();
        let c_e = lg.coords(e).unwrap();
        let c_f = lg.coords(f).unwrap();
        assert_eq!(c_f[0] - c_e[0], 2);
        assert_eq!(c_f[1] - c_e[1], -2);
        assert_eq!(lg.orbit(e), lg.orbit(f));
    }

    #[test]
    fn distance_on_path() {
        let g = build_grid(&[7]).unwrap();
        assert_eq!(g.distance(0, 6), Some(6));
        let split = SiteGraph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(split.distance(0, 2), None);
    }
}
