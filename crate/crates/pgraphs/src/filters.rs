//! Filters and ultrafilters of a finite P-graph, and the translation
//! actions λ·U and λ*·V.
//!
//! A filter is a nonempty path set that is downward closed (F1) and directed
//! (F2); it contains exactly one vertex r(U). In a finite graph every filter
//! is principal, so ultrafilters are exactly the principal filters of
//! maximal paths.

use crate::pgraph::{Graph, PathId};
use crate::{Error, Result};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    graph: String,
    paths: BTreeSet<PathId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterStatus {
    NotFilter,
    Filter,
    Ultrafilter,
}

impl Filter {
    pub fn paths(&self) -> &BTreeSet<PathId> {
        &self.paths
    }

    pub fn contains(&self, p: PathId) -> bool {
        self.paths.contains(&p)
    }

    /// The unique vertex in the filter.
    pub fn range(&self, g: &Graph) -> PathId {
        *self
            .paths
            .iter()
            .find(|p| g.path(**p).is_vertex)
            .expect("a filter contains a vertex")
    }

    /// The maximum element (always exists in a finite graph).
    pub fn top(&self, g: &Graph) -> PathId {
        *self
            .paths
            .iter()
            .find(|m| self.paths.iter().all(|n| g.leq_paths(*n, **m)))
            .expect("a finite filter has a maximum")
    }

    pub fn render(&self, g: &Graph) -> String {
        g.render_path_set(&self.paths.iter().copied().collect::<Vec<_>>())
    }
}

/// U_α = { μ : μ ≤ α }.
pub fn principal_filter(g: &Graph, alpha: PathId) -> Filter {
    let paths: BTreeSet<PathId> = g
        .paths_sorted()
        .iter()
        .copied()
        .filter(|mu| g.leq_paths(*mu, alpha))
        .collect();
    Filter {
        graph: g.name().to_string(),
        paths,
    }
}

fn is_filter(g: &Graph, set: &BTreeSet<PathId>) -> bool {
    if set.is_empty() {
        return false;
    }
    // F1: downward closure.
    for &mu in set {
        for &lam in g.paths_sorted() {
            if g.leq_paths(lam, mu) && !set.contains(&lam) {
                return false;
            }
        }
    }
    // F2: directedness within the set.
    for &mu in set {
        for &nu in set {
            if !set
                .iter()
                .any(|&lam| g.leq_paths(mu, lam) && g.leq_paths(nu, lam))
            {
                return false;
            }
        }
    }
    true
}

/// Classify a path set; maximality is decided by exhaustive superset search
/// over the (finitely many) filters of the graph.
pub fn filter_status(g: &Graph, set: &BTreeSet<PathId>) -> FilterStatus {
    if !is_filter(g, set) {
        return FilterStatus::NotFilter;
    }
    for &alpha in g.paths_sorted() {
        let candidate = principal_filter(g, alpha);
        if candidate.paths.len() > set.len() && candidate.paths.is_superset(set) {
            return FilterStatus::Filter;
        }
    }
    FilterStatus::Ultrafilter
}

/// All ultrafilters, canonically ordered by their maximal path. Finite
/// graphs satisfy the chain condition, so these are exactly the principal
/// filters of maximal paths.
pub fn ultrafilters(g: &Graph) -> Vec<Filter> {
    g.paths_sorted()
        .iter()
        .copied()
        .filter(|p| g.is_maximal(*p))
        .map(|p| principal_filter(g, p))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// λ·U (forward, defined when r(U) = s(λ)) or λ*·V (backward, defined when
/// λ ∈ V); None signals the undefined case.
pub fn translate(
    g: &Graph,
    lam: PathId,
    filter: &Filter,
    direction: Direction,
) -> Result<Option<Filter>> {
    if filter.graph != g.name() {
        return Err(Error::GraphMismatch(format!(
            "filter over {} used with graph {}",
            filter.graph,
            g.name()
        )));
    }
    match direction {
        Direction::Forward => {
            if filter.range(g) != g.path(lam).source {
                return Ok(None);
            }
            // λ·U = ∪_{μ ∈ U} { α ≤ λμ }
            let mut paths = BTreeSet::new();
            for &mu in &filter.paths {
                let lm = g.compose_paths(lam, mu)?;
                paths.extend(principal_filter(g, lm).paths);
            }
            Ok(Some(Filter {
                graph: g.name().to_string(),
                paths,
            }))
        }
        Direction::Backward => {
            if !filter.contains(lam) {
                return Ok(None);
            }
            // λ*·V = { μ : λμ ∈ V }
            let mut paths = BTreeSet::new();
            for &mu in g.paths_sorted() {
                if g.path(mu).range == g.path(lam).source {
                    let lm = g.compose_paths(lam, mu)?;
                    if filter.contains(lm) {
                        paths.insert(mu);
                    }
                }
            }
            Ok(Some(Filter {
                graph: g.name().to_string(),
                paths,
            }))
        }
    }
}

/// All filters of the graph, by brute force over path subsets. Test oracle;
/// exponential in the number of paths.
pub fn all_filters_brute_force(g: &Graph) -> Vec<BTreeSet<PathId>> {
    let n = g.len();
    assert!(
        n <= 16,
        "brute-force filter enumeration needs a small graph"
    );
    let paths: Vec<PathId> = g.paths_sorted().to_vec();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let set: BTreeSet<PathId> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| paths[i])
            .collect();
        if is_filter(g, &set) {
            out.push(set);
        }
    }
    out
}
