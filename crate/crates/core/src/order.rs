//! Site orders used to schedule the single-site updates of one sweep.
//!
//! Real labels order sites by a uniform label. Digit labels (uniform on
//! `1..=D`) order sites by the lexicographic order of their shell-sum
//! sequences `(Z_{v,0}, Z_{v,1}, ...)`, where `Z_{v,n}` adds the labels on the
//! sphere of radius `n` around `v`. Shell sums are evaluated lazily: most pairs
//! are decided by their own labels.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Site, SiteGraph, Window};
use crate::rng::SweepRandomness;

/// Which order family is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "order", rename_all = "snake_case")]
pub enum OrderKind {
    Real,
    Digits { d: u32 },
}

impl OrderKind {
    /// `D = 3 * max_degree^2 + 1`.
    pub fn default_digits(graph: &SiteGraph) -> Self {
        let delta = graph.lattice_degree().unwrap_or_else(|| graph.max_degree()) as u32;
        OrderKind::Digits { d: 3 * delta * delta + 1 }
    }
}

#[derive(Debug, Clone)]
enum Source {
    Reals(Vec<f64>),
    Digits(Vec<u32>),
    Derived { randomness: SweepRandomness, time: u64 },
}

/// Per-site order labels `eta`.
#[derive(Debug, Clone)]
pub struct OrderLabels {
    kind: OrderKind,
    source: Source,
}

impl OrderLabels {
    pub fn reals(labels: Vec<f64>) -> Self {
        Self {
            kind: OrderKind::Real,
            source: Source::Reals(labels),
        }
    }

    pub fn digits(labels: Vec<u32>, d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Parameter(format!("digit order needs D >= 2, got {d}")));
        }
        if let Some(bad) = labels.iter().find(|&&l| l == 0 || l > d) {
            return Err(Error::Parameter(format!("digit label {bad} outside 1..={d}")));
        }
        Ok(Self {
            kind: OrderKind::Digits { d },
            source: Source::Digits(labels),
        })
    }

    /// Labels `B_{., time}` read lazily from the sweep randomness.
    pub fn derived(kind: OrderKind, randomness: SweepRandomness, time: u64) -> Result<Self> {
        if let OrderKind::Digits { d } = kind {
            if d < 2 {
                return Err(Error::Parameter(format!("digit order needs D >= 2, got {d}")));
            }
        }
        Ok(Self {
            kind,
            source: Source::Derived { randomness, time },
        })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn real(&self, u: Site) -> f64 {
        match &self.source {
            Source::Reals(v) => v[u],
            Source::Digits(v) => f64::from(v[u]),
            Source::Derived { randomness, time } => randomness.order_real(u, *time),
        }
    }

    pub fn digit(&self, u: Site) -> u32 {
        match (&self.source, self.kind) {
            (Source::Digits(v), _) => v[u],
            (Source::Derived { randomness, time }, OrderKind::Digits { d }) => randomness.order_digit(u, *time, d),
            _ => panic!("digit label requested from a real-label order"),
        }
    }

    fn resample(&self, u: Site, attempt: u64) -> Option<f64> {
        match &self.source {
            Source::Derived { randomness, time } => Some(randomness.order_real_resample(u, *time, attempt)),
            _ => None,
        }
    }
}

/// Outcome of comparing two sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    pub ordering: Ordering,
    /// Shell index that decided the comparison; `None` for a tie.
    pub decided_at: Option<usize>,
}

impl Comparison {
    /// `u` precedes `v` (`u <= v` in the induced preorder).
    pub fn precedes(&self) -> bool {
        self.ordering != Ordering::Greater
    }
}

#[derive(Debug)]
struct ShellState {
    sums: Vec<u64>,
    seen: std::collections::HashSet<Site>,
    frontier: Vec<Site>,
}

/// Lazily extended shell sums, memoised per site. One per set of labels.
pub struct ShellSums<'a> {
    graph: &'a SiteGraph,
    labels: &'a OrderLabels,
    depth_cap: usize,
    states: RefCell<HashMap<Site, ShellState>>,
}

impl<'a> ShellSums<'a> {
    pub fn new(graph: &'a SiteGraph, labels: &'a OrderLabels) -> Self {
        Self::with_depth_cap(graph, labels, usize::MAX)
    }

    pub fn with_depth_cap(graph: &'a SiteGraph, labels: &'a OrderLabels, depth_cap: usize) -> Self {
        Self {
            graph,
            labels,
            depth_cap,
            states: RefCell::new(HashMap::new()),
        }
    }

    /// `Z_{v,n}`, or `None` once the ambient graph has no sites at distance `n`.
    pub fn shell_sum(&self, v: Site, n: usize) -> Option<u64> {
        let mut states = self.states.borrow_mut();
        let st = states.entry(v).or_insert_with(|| ShellState {
            sums: vec![u64::from(self.labels.digit(v))],
            seen: std::iter::once(v).collect(),
            frontier: vec![v],
        });
        while st.sums.len() <= n {
            if st.frontier.is_empty() {
                return None;
            }
            let mut next = Vec::new();
            for &x in &st.frontier {
                for &w in self.graph.neighbors(x) {
                    if st.seen.insert(w) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                st.frontier.clear();
                return None;
            }
            st.sums.push(next.iter().map(|&w| u64::from(self.labels.digit(w))).sum());
            st.frontier = next;
        }
        Some(st.sums[n])
    }

    /// Lexicographic comparison of shell-sum sequences.
    pub fn compare(&self, u: Site, v: Site) -> Comparison {
        let mut n = 0;
        while n <= self.depth_cap {
            match (self.shell_sum(u, n), self.shell_sum(v, n)) {
                (Some(a), Some(b)) if a != b => {
                    return Comparison {
                        ordering: a.cmp(&b),
                        decided_at: Some(n),
                    }
                }
                (Some(_), Some(_)) => n += 1,
                // a finite truncation ran out of sites: no further information
                _ => break,
            }
        }
        Comparison {
            ordering: Ordering::Equal,
            decided_at: None,
        }
    }
}

/// Compares two distinct sites under `labels`.
pub fn compare(graph: &SiteGraph, labels: &OrderLabels, u: Site, v: Site) -> Comparison {
    match labels.kind() {
        OrderKind::Real => compare_real(labels, u, v),
        OrderKind::Digits { .. } => ShellSums::new(graph, labels).compare(u, v),
    }
}

fn compare_real(labels: &OrderLabels, u: Site, v: Site) -> Comparison {
    let (a, b) = (labels.real(u), labels.real(v));
    if a != b {
        return Comparison {
            ordering: a.total_cmp(&b),
            decided_at: Some(0),
        };
    }
    for attempt in 0..4 {
        match (labels.resample(u, attempt), labels.resample(v, attempt)) {
            (Some(x), Some(y)) if x != y => {
                return Comparison {
                    ordering: x.total_cmp(&y),
                    decided_at: Some(0),
                }
            }
            (Some(_), Some(_)) => continue,
            _ => break,
        }
    }
    Comparison {
        ordering: Ordering::Equal,
        decided_at: None,
    }
}

/// Minimal radius around `u` and `v` that decides their relative order.
pub fn order_radius(graph: &SiteGraph, labels: &OrderLabels, u: Site, v: Site) -> Result<usize> {
    match labels.kind() {
        OrderKind::Real => Ok(0),
        OrderKind::Digits { .. } => ShellSums::new(graph, labels)
            .compare(u, v)
            .decided_at
            .ok_or(Error::UnresolvedOrder(u, v)),
    }
}

/// Window interior listed in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedWindow {
    pub sites: Vec<Site>,
    /// Pairs that compared equal and fell back to site index.
    pub ties: usize,
}

/// Sorts the window interior; unresolved pairs fall back to site index and are counted.
pub fn sort_window(labels: &OrderLabels, window: &Window) -> SortedWindow {
    let graph = window.ambient();
    let mut sites = window.interior().to_vec();
    let mut ties = 0usize;
    match labels.kind() {
        OrderKind::Real => {
            let mut keyed: Vec<(f64, Site)> = sites.iter().map(|&s| (labels.real(s), s)).collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut i = 0;
            while i < keyed.len() {
                let mut j = i + 1;
                while j < keyed.len() && keyed[j].0 == keyed[i].0 {
                    j += 1;
                }
                if j - i > 1 {
                    keyed[i..j].sort_by(|a, b| {
                        let c = compare_real(labels, a.1, b.1);
                        if c.decided_at.is_none() {
                            ties += 1;
                        }
                        c.ordering.then(a.1.cmp(&b.1))
                    });
                }
                i = j;
            }
            sites = keyed.into_iter().map(|(_, s)| s).collect();
        }
        OrderKind::Digits { .. } => {
            let sums = ShellSums::new(graph, labels);
            sites.sort_by(|&a, &b| {
                let (da, db) = (labels.digit(a), labels.digit(b));
                if da != db {
                    return da.cmp(&db);
                }
                let c = sums.compare(a, b);
                if c.decided_at.is_none() {
                    ties += 1;
                }
                c.ordering.then(a.cmp(&b))
            });
        }
    }
    SortedWindow { sites, ties }
}
