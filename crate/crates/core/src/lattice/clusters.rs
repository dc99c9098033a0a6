use super::{Spin, UnionFind, Window};
use crate::error::{Error, Result};

/// Open clusters of the base vertices touched by a line-graph window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    /// Base vertex ids, in the window's local vertex order.
    pub vertices: Vec<usize>,
    /// Cluster id per local vertex; ids are assigned in order of first appearance.
    pub label: Vec<usize>,
    /// Id of the cluster holding the ghost vertex (wired only).
    pub ghost_cluster: Option<usize>,
    /// Clusters that avoid the ghost.
    pub count_interior: usize,
}

impl ClusterLabels {
    pub fn same_cluster(&self, a: usize, b: usize) -> bool {
        self.label[a] == self.label[b]
    }
}

/// Labels the open clusters of `edge_config` restricted to the window's edges.
///
/// `edge_config` is indexed by line-graph site. With `wired`, every vertex that
/// also touches an exterior edge is joined to a single ghost vertex, standing in
/// for the all-open exterior; without it the exterior is all closed.
pub fn clusters(edge_config: &[Spin], window: &Window, wired: bool) -> Result<ClusterLabels> {
    let expected = window.ambient().len();
    if edge_config.len() != expected {
        return Err(Error::ConfigurationLength {
            got: edge_config.len(),
            expected,
        });
    }
    let frame = window
        .edge_frame()
        .ok_or_else(|| Error::InvalidGraph("cluster labelling needs a line-graph window".into()))?;
    let n = frame.vertex_count();
    let ghost = n;
    let mut uf = UnionFind::new(n + 1);
    for (&e, &(a, b)) in window.interior().iter().zip(&frame.ends) {
        if edge_config[e] != 0 {
            uf.union(a as usize, b as usize);
        }
    }
    if wired {
        for (v, &t) in frame.touches_exterior.iter().enumerate() {
            if t {
                uf.union(v, ghost);
            }
        }
    }
    let mut root_label = vec![usize::MAX; n + 1];
    let mut next = 0;
    let mut label = Vec::with_capacity(n);
    for v in 0..n {
        let r = uf.find(v);
        if root_label[r] == usize::MAX {
            root_label[r] = next;
            next += 1;
        }
        label.push(root_label[r]);
    }
    let ghost_cluster = wired.then(|| {
        let r = uf.find(ghost);
        if root_label[r] == usize::MAX {
            root_label[r] = next;
            next += 1;
        }
        root_label[r]
    });
    let count_interior = next - usize::from(ghost_cluster.is_some());
    Ok(ClusterLabels {
        vertices: frame.vertices.clone(),
        label,
        ghost_cluster,
        count_interior,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lattice::{ball, build_grid, line_graph, BoundaryMode, SiteGraph};

    fn square() -> (Arc<SiteGraph>, Window) {
        let base = Arc::new(build_grid(&[2, 2]).unwrap());
        let lg = Arc::new(line_graph(&base).unwrap());
        let w = ball(&lg, 0, 2, BoundaryMode::Plus).unwrap();
        assert_eq!(w.len(), 4);
        (lg, w)
    }

    #[test]
    fn all_closed_free_gives_singletons() {
        let (lg, w) = square();
        let c = clusters(&vec![0; lg.len()], &w, false).unwrap();
        assert_eq!(c.count_interior, 4);
        assert_eq!(c.ghost_cluster, None);
    }

    #[test]
    fn all_closed_wired_merges_boundary() {
        let (lg, w) = square();
        let c = clusters(&vec![0; lg.len()], &w, true).unwrap();
        // every vertex of a 2x2 box sees the exterior
        assert_eq!(c.count_interior, 0);
        assert!(c.label.iter().all(|&l| Some(l) == c.ghost_cluster));
    }

    #[test]
    fn single_open_edge_wired_joins_ghost() {
        let (lg, w) = square();
        let mut cfg = vec![0; lg.len()];
        cfg[0] = 1;
        let wired = clusters(&cfg, &w, true).unwrap();
        assert_eq!(wired.count_interior, 0);
        let free = clusters(&cfg, &w, false).unwrap();
        assert_eq!(free.count_interior, 3);
    }

    #[test]
    fn interior_vertices_stay_off_the_ghost() {
        let base = Arc::new(build_grid(&[9, 9]).unwrap());
        let lg = Arc::new(line_graph(&base).unwrap());
        let e = lg.center().unwrap();
        let w = ball(&lg, e, 1, BoundaryMode::Plus).unwrap();
        let c = clusters(&vec![0; lg.len()], &w, true).unwrap();
        // the two endpoints of the centre edge are isolated, everything else is wired
        assert_eq!(c.count_interior, 2);
    }

    #[test]
    fn rejects_short_config() {
        let (_, w) = square();
        assert!(clusters(&[0, 1], &w, false).is_err());
    }
}
