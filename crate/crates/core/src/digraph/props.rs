use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::Digraph;
use crate::hom::{HomOutcome, HomSearch};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WalkBound {
    /// Vertex count of a longest directed walk.
    Finite(usize),
    Unbounded,
}

/// Length (in vertices) of a longest directed walk.
pub fn longest_directed_walk(d: &Digraph) -> WalkBound {
    match topological_levels(d) {
        None => WalkBound::Unbounded,
        Some(levels) => WalkBound::Finite(levels.iter().copied().max().unwrap_or(0)),
    }
}

/// For an acyclic digraph, the vertex count of a longest directed walk ending
/// at each vertex (sources get 1). `None` when there is a directed cycle.
pub fn topological_levels(d: &Digraph) -> Option<Vec<usize>> {
    let n = d.n();
    let mut indeg: Vec<usize> = (0..n).map(|v| d.in_degree(v)).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut level = vec![1usize; n];
    let mut seen = 0;
    while let Some(u) = queue.pop_front() {
        seen += 1;
        for &v in d.out_neighbors(u) {
            level[v] = level[v].max(level[u] + 1);
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    (seen == n).then_some(level)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

/// 2 when there is a symmetric pair, otherwise the girth of the underlying
/// simple graph. Loops are ignored.
pub fn girth(d: &Digraph) -> Girth {
    if !d.symmetric_pairs().is_empty() {
        return Girth::Finite(2);
    }
    let n = d.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| d.neighbors(v)).collect();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        dist[s] = 0;
        parent[s] = usize::MAX;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    best = best.min(dist[u] + dist[v] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// Weak components, each sorted, listed by smallest vertex.
pub fn weak_components(d: &Digraph) -> Vec<Vec<usize>> {
    let n = d.n();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in d.out_neighbors(u).iter().chain(d.in_neighbors(u)) {
                if comp[v] == usize::MAX {
                    comp[v] = id;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Whether three distinct vertices form a directed 3-cycle.
pub fn has_directed_triangle(d: &Digraph) -> bool {
    d.arcs().iter().any(|&(u, v)| {
        u != v
            && d
                .out_neighbors(v)
                .iter()
                .any(|&w| w != u && w != v && d.has_arc(w, u))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    pub is_oriented: bool,
    pub has_loop: bool,
    pub is_acyclic: bool,
    pub girth: Girth,
    pub weak_components: Vec<Vec<usize>>,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

pub fn structural_predicates(d: &Digraph) -> StructuralReport {
    let has_loop = d.has_loop();
    StructuralReport {
        is_oriented: !has_loop && d.symmetric_pairs().is_empty(),
        has_loop,
        is_acyclic: topological_levels(d).is_some(),
        girth: girth(d),
        weak_components: weak_components(d),
        sources: d.vertices().filter(|&v| d.in_degree(v) == 0).collect(),
        sinks: d.vertices().filter(|&v| d.out_degree(v) == 0).collect(),
    }
}

/// Vertices surviving repeated deletion of sources and sinks, ascending.
pub fn smooth_reduct_vertices(d: &Digraph) -> Vec<usize> {
    let n = d.n();
    let mut alive = vec![true; n];
    let mut indeg: Vec<usize> = (0..n).map(|v| d.in_degree(v)).collect();
    let mut outdeg: Vec<usize> = (0..n).map(|v| d.out_degree(v)).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0 || outdeg[v] == 0).collect();
    while let Some(u) = stack.pop() {
        if !alive[u] {
            continue;
        }
        alive[u] = false;
        for &v in d.out_neighbors(u) {
            if alive[v] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        for &v in d.in_neighbors(u) {
            if alive[v] {
                outdeg[v] -= 1;
                if outdeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

pub fn smooth_reduct(d: &Digraph) -> Digraph {
    d.induced(&smooth_reduct_vertices(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgraphMode {
    Subgraph,
    Induced,
}

/// An injective map from `f` into `d` witnessing a (possibly induced) copy.
pub fn contains_subgraph(d: &Digraph, f: &Digraph, mode: SubgraphMode) -> Option<Vec<usize>> {
    if f.n() > d.n() {
        return None;
    }
    match HomSearch::new(f, d)
        .injective(true)
        .induced(mode == SubgraphMode::Induced)
        .find()
    {
        HomOutcome::Found(m) => Some(m),
        _ => None,
    }
}
