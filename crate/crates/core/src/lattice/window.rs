use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Site, SiteGraph};
use crate::error::{Error, Result};

/// Which extreme configuration the exterior of a window is frozen to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryMode {
    Plus,
    Minus,
}

impl BoundaryMode {
    pub fn flip(self) -> Self {
        match self {
            BoundaryMode::Plus => BoundaryMode::Minus,
            BoundaryMode::Minus => BoundaryMode::Plus,
        }
    }
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryMode::Plus => "plus",
            BoundaryMode::Minus => "minus",
        })
    }
}

/// Base-graph view of a window on a line graph: the vertices its edges touch,
/// which of them see the exterior, and local incidence lists.
#[derive(Debug, Clone)]
pub struct EdgeFrame {
    /// Base vertex id of each local vertex.
    pub vertices: Vec<Site>,
    /// Local endpoints of each interior edge, in interior order.
    pub ends: Vec<(u32, u32)>,
    /// Local vertices incident to at least one non-window edge of the lattice.
    pub touches_exterior: Vec<bool>,
    /// Per local vertex: `(interior position of edge, other endpoint)`.
    pub incidence: Vec<Vec<(u32, u32)>>,
}

impl EdgeFrame {
    fn build(ambient: &SiteGraph, interior: &[Site]) -> Option<Self> {
        let es = ambient.edge_structure()?;
        let base = es.base();
        let mut local: HashMap<Site, u32> = HashMap::new();
        let mut vertices = Vec::new();
        let mut ends = Vec::with_capacity(interior.len());
        let mut id = |v: Site, vertices: &mut Vec<Site>| {
            *local.entry(v).or_insert_with(|| {
                vertices.push(v);
                (vertices.len() - 1) as u32
            })
        };
        for &e in interior {
            let (a, b) = es.endpoints(e);
            let la = id(a, &mut vertices);
            let lb = id(b, &mut vertices);
            ends.push((la, lb));
        }
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (pos, &(a, b)) in ends.iter().enumerate() {
            incidence[a as usize].push((pos as u32, b));
            incidence[b as usize].push((pos as u32, a));
        }
        let touches_exterior = vertices
            .iter()
            .zip(&incidence)
            .map(|(&v, inc)| inc.len() < base.full_degree(v))
            .collect();
        Some(Self {
            vertices,
            ends,
            touches_exterior,
            incidence,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

/// Finite window `V_{v,r}` (or an explicit site set) inside an ambient graph,
/// with the exterior frozen to one extreme.
#[derive(Debug, Clone)]
pub struct Window {
    ambient: Arc<SiteGraph>,
    center: Site,
    radius: Option<usize>,
    interior: Vec<Site>,
    position: Vec<u32>,
    mode: BoundaryMode,
    touches_sides: bool,
    frame: Option<EdgeFrame>,
}

const OUTSIDE: u32 = u32::MAX;

impl Window {
    /// Ball of radius `r` around `center`.
    pub fn ball(ambient: &Arc<SiteGraph>, center: Site, radius: usize, mode: BoundaryMode) -> Result<Self> {
        ambient.check_site(center)?;
        let layers = ambient.bfs_layers(center, radius);
        let touches_sides = layers
            .iter()
            .take(radius)
            .flatten()
            .any(|&u| ambient.missing_neighbors(u) > 0);
        let interior: Vec<Site> = layers.into_iter().flatten().collect();
        let mut w = Self::assemble(ambient, center, Some(radius), interior, mode);
        w.touches_sides = touches_sides;
        Ok(w)
    }

    /// Window with an arbitrary non-empty interior. `center` is the first listed site.
    pub fn from_sites(ambient: &Arc<SiteGraph>, sites: &[Site], mode: BoundaryMode) -> Result<Self> {
        let first = *sites
            .first()
            .ok_or_else(|| Error::InvalidGraph("empty window".into()))?;
        for &s in sites {
            ambient.check_site(s)?;
        }
        let touches_sides = sites.iter().any(|&u| ambient.missing_neighbors(u) > 0);
        let mut w = Self::assemble(ambient, first, None, sites.to_vec(), mode);
        w.touches_sides = touches_sides;
        Ok(w)
    }

    fn assemble(
        ambient: &Arc<SiteGraph>,
        center: Site,
        radius: Option<usize>,
        mut interior: Vec<Site>,
        mode: BoundaryMode,
    ) -> Self {
        interior.sort_unstable();
        interior.dedup();
        let mut position = vec![OUTSIDE; ambient.len()];
        for (i, &s) in interior.iter().enumerate() {
            position[s] = i as u32;
        }
        let frame = EdgeFrame::build(ambient, &interior);
        Self {
            ambient: Arc::clone(ambient),
            center,
            radius,
            interior,
            position,
            mode,
            touches_sides: false,
            frame,
        }
    }

    /// Same interior with the other boundary mode.
    pub fn with_mode(&self, mode: BoundaryMode) -> Self {
        Self {
            mode,
            ..self.clone()
        }
    }

    pub fn ambient(&self) -> &Arc<SiteGraph> {
        &self.ambient
    }

    pub fn center(&self) -> Site {
        self.center
    }

    pub fn radius(&self) -> Option<usize> {
        self.radius
    }

    /// Interior sites in increasing index order.
    pub fn interior(&self) -> &[Site] {
        &self.interior
    }

    pub fn len(&self) -> usize {
        self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn contains(&self, s: Site) -> bool {
        self.position.get(s).is_some_and(|&p| p != OUTSIDE)
    }

    /// Index of `s` in [`Window::interior`].
    pub fn position(&self, s: Site) -> Option<usize> {
        self.position
            .get(s)
            .and_then(|&p| (p != OUTSIDE).then_some(p as usize))
    }

    /// `true` when the window reaches the sides of the truncated lattice, so the
    /// finite box no longer agrees with the infinite-lattice ball.
    pub fn touches_sides(&self) -> bool {
        self.touches_sides
    }

    /// Base-graph view; present only when the ambient graph is a line graph.
    pub fn edge_frame(&self) -> Option<&EdgeFrame> {
        self.frame.as_ref()
    }
}

/// Ball of radius `r` around `v` with the given boundary mode.
pub fn ball(g: &Arc<SiteGraph>, v: Site, r: usize, mode: BoundaryMode) -> Result<Window> {
    Window::ball(g, v, r, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_grid, line_graph};

    #[test]
    fn ball_sizes_on_z2() {
        let g = Arc::new(build_grid(&[11, 11]).unwrap());
        let c = g.center().unwrap();
        let sizes: Vec<usize> = (0..4)
            .map(|r| ball(&g, c, r, BoundaryMode::Plus).unwrap().len())
            .collect();
        assert_eq!(sizes, vec![1, 5, 13, 25]);
        assert!(!ball(&g, c, 4, BoundaryMode::Plus).unwrap().touches_sides());
        assert!(!ball(&g, c, 5, BoundaryMode::Plus).unwrap().touches_sides());
        assert!(ball(&g, c, 6, BoundaryMode::Plus).unwrap().touches_sides());
    }

    #[test]
    fn radius_zero_is_singleton() {
        let g = Arc::new(build_grid(&[4, 4]).unwrap());
        for v in 0..g.len() {
            assert_eq!(ball(&g, v, 0, BoundaryMode::Minus).unwrap().interior(), &[v]);
        }
    }

    #[test]
    fn edge_frame_marks_exterior_vertices() {
        let base = Arc::new(build_grid(&[9, 9]).unwrap());
        let lg = Arc::new(line_graph(&base).unwrap());
        let e = lg.center().unwrap();
        let w = ball(&lg, e, 1, BoundaryMode::Plus).unwrap();
        assert_eq!(w.len(), 7);
        let frame = w.edge_frame().unwrap();
        // both endpoints of the centre edge have all four edges inside the window
        assert_eq!(frame.vertex_count(), 8);
        assert_eq!(frame.touches_exterior.iter().filter(|&&t| !t).count(), 2);

        let w2 = ball(&lg, e, 2, BoundaryMode::Plus).unwrap();
        assert_eq!(w2.len(), 23);
    }
}
