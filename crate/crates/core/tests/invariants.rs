use std::collections::VecDeque;
use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;

use cftp_lab::cftp::{ChainPair, Dynamics, SweepRandomness};
use cftp_lab::escoupling::{es_color, ColorSources, ColorVariant};
use cftp_lab::lattice::{build_grid, clusters, line_graph, sphere_shell, BoundaryMode, Site, SiteGraph, UnionFind, Window};
use cftp_lab::oracle::{self, EnumerationOptions};
use cftp_lab::order::{compare, sort_window, OrderLabels};
use cftp_lab::spec::{Ising, RandomCluster};

fn edges_of(extents: &[usize]) -> (Arc<SiteGraph>, Arc<SiteGraph>) {
    let base = Arc::new(build_grid(extents).unwrap());
    let lg = Arc::new(line_graph(&base).unwrap());
    (base, lg)
}

fn mode_of(plus: bool) -> BoundaryMode {
    if plus {
        BoundaryMode::Plus
    } else {
        BoundaryMode::Minus
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chains_stay_sandwiched(seed in any::<u64>(), p in 0.05f64..0.95, q in 1.0f64..4.0, radius in 1usize..3, plus in any::<bool>(), n in 1u64..10) {
        let (_, lg) = edges_of(&[7, 7]);
        let spec = RandomCluster::new(lg.clone(), p, q).unwrap();
        let d = Dynamics::new(&spec, SweepRandomness::new(seed));
        let w = Window::ball(&lg, lg.center().unwrap(), radius, mode_of(plus)).unwrap();
        let mut pair = ChainPair::new(&spec, &w);
        for t in (1..=n).rev() {
            let order = d.order_at(&w, t);
            pair.sweep(&d, &order.sites, t);
            prop_assert!(pair.is_sandwiched());
        }
    }

    #[test]
    fn larger_windows_and_longer_pasts_tighten(seed in any::<u64>(), beta in 0.0f64..1.0, radius in 1usize..3, n in 1u64..8) {
        let g = Arc::new(build_grid(&[9, 9]).unwrap());
        let spec = Ising::new(g.clone(), beta).unwrap();
        let d = Dynamics::new(&spec, SweepRandomness::new(seed));
        let v = g.center().unwrap();
        for mode in [BoundaryMode::Plus, BoundaryMode::Minus] {
            let small = Window::ball(&g, v, radius, mode).unwrap();
            let big = Window::ball(&g, v, radius + 1, mode).unwrap();
            let f_small = d.run_from_extreme(&small, n).0;
            let f_big = d.run_from_extreme(&big, n).0;
            let f_longer = d.run_from_extreme(&small, n + 1).0;
            let sites = small.interior();
            match mode {
                BoundaryMode::Plus => {
                    prop_assert!(f_big.le_on(&f_small, sites));
                    prop_assert!(f_longer.le_on(&f_small, sites));
                }
                BoundaryMode::Minus => {
                    prop_assert!(f_small.le_on(&f_big, sites));
                    prop_assert!(f_small.le_on(&f_longer, sites));
                }
            }
        }
    }

    #[test]
    fn finite_update_has_the_conditional_law(num in 1i64..10, q in 1i64..4, plus in any::<bool>()) {
        let (_, lg) = edges_of(&[2, 2]);
        let p = BigRational::new(num.into(), 10.into());
        let spec = RandomCluster::new_rational(lg.clone(), p, BigRational::from_integer(q.into())).unwrap();
        let sites: Vec<Site> = (0..lg.len()).collect();
        let w = Window::from_sites(&lg, &sites, mode_of(plus)).unwrap();
        let rep = oracle::finite_alphabet_fidelity(&spec, &w, EnumerationOptions::default()).unwrap();
        prop_assert_eq!(rep.mismatches, 0);
        prop_assert_eq!(rep.max_discrepancy, 0.0);
    }

    #[test]
    fn finite_and_continuous_cftp_agree_in_law(seed in 0u64..1000) {
        let (_, lg) = edges_of(&[2, 2]);
        let spec = RandomCluster::new(lg.clone(), 0.5, 2.0).unwrap();
        let sites: Vec<Site> = (0..lg.len()).collect();
        let w = Window::from_sites(&lg, &sites, BoundaryMode::Minus).unwrap();
        let dist = oracle::enumerate_gibbs(&spec, &w, EnumerationOptions::default()).unwrap();
        let open = |d: &Dynamics<RandomCluster>| {
            let draws = 2000u64;
            let mut hits = 0;
            for i in 0..draws {
                let s = d.with_randomness(SweepRandomness::new(seed).replica(i)).cftp_window_sample(&w).unwrap();
                hits += u64::from(s.config.get(sites[0]));
            }
            hits as f64 / draws as f64
        };
        let exact = dist.probability(|c| c[dist.sites().iter().position(|&s| s == sites[0]).unwrap()] == 1);
        let base = Dynamics::new(&spec, SweepRandomness::new(seed));
        let finite = base.clone().with_finite_alphabet().unwrap();
        let tol = 5.0 * (exact * (1.0 - exact) / 2000.0).sqrt();
        prop_assert!((open(&base) - exact).abs() < tol);
        prop_assert!((open(&finite) - exact).abs() < tol);
    }

    #[test]
    fn order_is_antisymmetric_and_sorted(labels in proptest::collection::vec(1u32..5, 121)) {
        let g = Arc::new(build_grid(&[11, 11]).unwrap());
        let labels = OrderLabels::digits(labels, 4).unwrap();
        let u = g.center().unwrap();
        for &v in g.neighbors(u) {
            let a = compare(&g, &labels, u, v);
            let b = compare(&g, &labels, v, u);
            prop_assert_eq!(a.ordering, b.ordering.reverse());
            prop_assert_eq!(a.decided_at, b.decided_at);
        }
        let w = Window::ball(&g, u, 2, BoundaryMode::Plus).unwrap();
        let sorted = sort_window(&labels, &w);
        for pair in sorted.sites.windows(2) {
            prop_assert!(compare(&g, &labels, pair[0], pair[1]).precedes());
        }
    }

    #[test]
    fn order_is_shift_equivariant(labels in proptest::collection::vec(1u32..5, 441), x in 7i64..14, y in 7i64..14, sx in -3i64..4, sy in -3i64..4) {
        let g = Arc::new(build_grid(&[21, 21]).unwrap());
        let shifted: Vec<u32> = (0..g.len())
            .map(|w| {
                let c = g.coords(w).unwrap();
                g.site_at(&[c[0] - sx, c[1] - sy]).map_or(1, |o| labels[o])
            })
            .collect();
        let a = OrderLabels::digits(labels, 4).unwrap();
        let b = OrderLabels::digits(shifted, 4).unwrap();
        let u = g.site_at(&[x, y]).unwrap();
        let v = g.site_at(&[x + 1, y]).unwrap();
        let here = compare(&g, &a, u, v);
        if here.decided_at.is_some_and(|k| k <= 3) {
            let there = compare(&g, &b, g.translate(u, &[sx, sy]).unwrap(), g.translate(v, &[sx, sy]).unwrap());
            prop_assert_eq!(here, there);
        }
    }

    #[test]
    fn clusters_match_a_direct_search(open in proptest::collection::vec(any::<bool>(), 60), plus in any::<bool>()) {
        let (base, lg) = edges_of(&[6, 6]);
        let config: Vec<u8> = open.iter().map(|&o| u8::from(o)).collect();
        let w = Window::ball(&lg, lg.center().unwrap(), 3, mode_of(plus)).unwrap();
        let labels = clusters(&config, &w, plus).unwrap();
        let es = lg.edge_structure().unwrap();
        let frame = w.edge_frame().unwrap();
        let n = base.len();
        let mut uf = UnionFind::new(n + 1);
        for &e in w.interior() {
            if config[e] == 1 {
                let (a, b) = es.endpoints(e);
                uf.union(a, b);
            }
        }
        if plus {
            for (k, &v) in frame.vertices.iter().enumerate() {
                if frame.touches_exterior[k] {
                    uf.union(v, n);
                }
            }
        }
        for (i, &a) in labels.vertices.iter().enumerate() {
            for (j, &b) in labels.vertices.iter().enumerate() {
                prop_assert_eq!(labels.same_cluster(i, j), uf.connected(a, b));
            }
            prop_assert_eq!(Some(labels.label[i]) == labels.ghost_cluster, plus && uf.connected(a, n));
        }
    }

    #[test]
    fn colours_are_constant_on_clusters_and_local(open in proptest::collection::vec(any::<bool>(), 60), seed in any::<u64>(), plus in any::<bool>()) {
        let (base, lg) = edges_of(&[6, 6]);
        let config: Vec<u8> = open.iter().map(|&o| u8::from(o)).collect();
        let w = Window::ball(&lg, lg.center().unwrap(), 2, mode_of(plus)).unwrap();
        let sources = ColorSources::draw(&SweepRandomness::new(seed), base.len(), 3, 0);
        let out = es_color(&config, &w, &sources, ColorVariant::ArgminZ, 2).unwrap();
        let labels = clusters(&config, &w, plus).unwrap();
        for i in 0..out.len() {
            for j in 0..out.len() {
                if labels.same_cluster(i, j) {
                    prop_assert_eq!(out[i].1, out[j].1);
                }
            }
        }
        let mut far = sources.clone();
        for v in 0..base.len() {
            if !labels.vertices.contains(&v) {
                far.z[v] = 0.0;
                far.sigma[v] = 1;
            }
        }
        prop_assert_eq!(es_color(&config, &w, &far, ColorVariant::ArgminZ, 2).unwrap(), out);
    }

    #[test]
    fn cftp_is_reproducible(seed in any::<u64>()) {
        let g = Arc::new(build_grid(&[5, 5]).unwrap());
        let spec = Ising::new(g.clone(), 0.3).unwrap();
        let w = Window::ball(&g, g.center().unwrap(), 1, BoundaryMode::Plus).unwrap();
        let d = Dynamics::new(&spec, SweepRandomness::new(seed));
        let a = d.cftp_window_sample(&w).unwrap();
        let b = d.cftp_window_sample(&w).unwrap();
        prop_assert_eq!(a.config, b.config);
        prop_assert_eq!(a.horizon, b.horizon);
    }
}

fn bfs_distance(g: &SiteGraph, v: Site) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.len()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

#[test]
fn balls_nest_and_shells_have_lattice_sizes() {
    let (base, lg) = edges_of(&[21, 21]);
    let v = base.center().unwrap();
    for n in 1..8 {
        assert_eq!(sphere_shell(&base, v, n).len(), 4 * n);
    }
    let e = lg.center().unwrap();
    let sizes: Vec<usize> = (0..5)
        .map(|r| Window::ball(&lg, e, r, BoundaryMode::Plus).unwrap().len())
        .collect();
    assert_eq!(sizes, vec![1, 7, 23, 47, 79]);
    let dist = bfs_distance(&lg, e);
    for r in 0..6 {
        let inner = Window::ball(&lg, e, r, BoundaryMode::Plus).unwrap();
        let outer = Window::ball(&lg, e, r + 1, BoundaryMode::Plus).unwrap();
        assert!(inner.interior().iter().all(|&s| outer.contains(s)));
        assert_eq!(inner.len(), dist.iter().filter(|&&d| d <= r).count());
    }
}

#[test]
fn wired_law_dominates_free_law_on_a_block() {
    let (_, lg) = edges_of(&[3, 3]);
    let spec = RandomCluster::new(lg.clone(), 0.4, 2.5).unwrap();
    let sites: Vec<Site> = (0..lg.len()).collect();
    let opts = EnumerationOptions::default().float_only();
    let plus = oracle::enumerate_gibbs(&spec, &Window::from_sites(&lg, &sites, BoundaryMode::Plus).unwrap(), opts).unwrap();
    let minus = oracle::enumerate_gibbs(&spec, &Window::from_sites(&lg, &sites, BoundaryMode::Minus).unwrap(), opts).unwrap();
    assert!(oracle::check_domination(&minus, &plus, 200, 3).unwrap() <= 1e-12);
}
