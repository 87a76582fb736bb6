//! Homomorphism search between finite digraphs with optional marks.
//!
//! The solver is a depth-first search over bit-set candidate domains. Arc
//! consistency is maintained with an AC-3 queue, the next variable minimises
//! candidates divided by the number of domain wipeouts it has been involved in
//! (lowest index on ties) and values are tried in ascending order. Domain changes are trailed so backtracking never copies
//! whole domain tables.

mod cores;

pub use cores::{
    classify_smooth, core, core_marked, core_with_cap, is_core, CoreResult, SmoothClass,
    DEFAULT_CORE_CAP,
};

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::bitset::{BitMatrix, BitSet, Ones};
use crate::digraph::{Digraph, Structure};

/// Targets up to this size get dense neighbourhood rows; larger ones are
/// scanned through adjacency lists.
const DENSE_TARGET: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Consistency {
    None,
    #[default]
    Arc,
    /// Arc consistency plus singleton arc consistency at the root.
    ArcPlusSingleton,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SearchBudget {
    /// Maximum number of value assignments tried; 0 means unlimited.
    pub max_nodes: u64,
    pub consistency: Consistency,
}

impl SearchBudget {
    pub const UNLIMITED: SearchBudget = SearchBudget {
        max_nodes: 0,
        consistency: Consistency::Arc,
    };

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HomOutcome {
    Found(Vec<usize>),
    NotFound,
    BudgetExhausted,
}

impl HomOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, HomOutcome::Found(_))
    }

    /// The map, treating an exhausted budget like absence.
    pub fn found(self) -> Option<Vec<usize>> {
        match self {
            HomOutcome::Found(m) => Some(m),
            _ => None,
        }
    }
}

/// How an enumeration ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchEnd {
    Complete,
    Stopped,
    BudgetExhausted,
}

/// Configurable homomorphism search from `source` to `target`.
#[derive(Clone, Debug)]
pub struct HomSearch<'a> {
    source: Structure<'a>,
    target: Structure<'a>,
    budget: SearchBudget,
    injective: bool,
    induced: bool,
    restrictions: Vec<(usize, BitSet)>,
}

impl<'a> HomSearch<'a> {
    pub fn new(source: impl Into<Structure<'a>>, target: impl Into<Structure<'a>>) -> Self {
        HomSearch {
            source: source.into(),
            target: target.into(),
            budget: SearchBudget::UNLIMITED,
            injective: false,
            induced: false,
            restrictions: Vec::new(),
        }
    }

    pub fn budget(mut self, budget: SearchBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn injective(mut self, yes: bool) -> Self {
        self.injective = yes;
        self
    }

    /// Injective, and non-arcs must map to non-arcs.
    pub fn induced(mut self, yes: bool) -> Self {
        self.induced = yes;
        if yes {
            self.injective = true;
        }
        self
    }

    /// Forces source vertex `v` onto target vertex `a`.
    pub fn pin(mut self, v: usize, a: usize) -> Self {
        let set = BitSet::from_iter_with_capacity(self.target.graph.n(), [a]);
        self.restrictions.push((v, set));
        self
    }

    /// Restricts the images allowed for source vertex `v`.
    pub fn restrict(mut self, v: usize, allowed: BitSet) -> Self {
        self.restrictions.push((v, allowed));
        self
    }

    /// Restricts every source vertex to `allowed`.
    pub fn restrict_all(mut self, allowed: &BitSet) -> Self {
        for v in 0..self.source.graph.n() {
            self.restrictions.push((v, allowed.clone()));
        }
        self
    }

    pub fn find(self) -> HomOutcome {
        let mut found = None;
        let end = self.for_each(|m| {
            found = Some(m.to_vec());
            ControlFlow::Break(())
        });
        match (found, end) {
            (Some(m), _) => HomOutcome::Found(m),
            (None, SearchEnd::BudgetExhausted) => HomOutcome::BudgetExhausted,
            (None, _) => HomOutcome::NotFound,
        }
    }

    /// Calls `visit` on every homomorphism, in search order, until it breaks.
    pub fn for_each<F>(self, visit: F) -> SearchEnd
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut engine = Engine::new(&self);
        engine.run(visit)
    }
}

/// Search with the given budget.
pub fn find_hom<'a>(
    source: impl Into<Structure<'a>>,
    target: impl Into<Structure<'a>>,
    budget: SearchBudget,
) -> HomOutcome {
    HomSearch::new(source, target).budget(budget).find()
}

/// Unlimited search.
pub fn hom_exists<'a>(source: impl Into<Structure<'a>>, target: impl Into<Structure<'a>>) -> bool {
    HomSearch::new(source, target).find().is_found()
}

pub fn hom_equivalent<'a>(a: impl Into<Structure<'a>>, b: impl Into<Structure<'a>>) -> bool {
    let (a, b) = (a.into(), b.into());
    hom_exists(a, b) && hom_exists(b, a)
}

/// Whether `map` sends arcs to arcs and marked vertices to marked vertices.
pub fn verify_hom<'a>(
    source: impl Into<Structure<'a>>,
    target: impl Into<Structure<'a>>,
    map: &[usize],
) -> bool {
    let (s, t) = (source.into(), target.into());
    if map.len() != s.graph.n() || map.iter().any(|&a| a >= t.graph.n()) {
        return false;
    }
    if !s.graph.arcs().iter().all(|&(u, v)| t.graph.has_arc(map[u], map[v])) {
        return false;
    }
    match (s.marks, t.marks) {
        (Some(sm), Some(tm)) => sm.iter().all(|v| tm.contains(map[v])),
        (Some(sm), None) => sm.is_empty(),
        _ => true,
    }
}

/// Whether `map` is injective and reflects arcs as well as preserving them.
pub fn verify_induced_embedding(source: &Digraph, target: &Digraph, map: &[usize]) -> bool {
    if !verify_hom(source, target, map) {
        return false;
    }
    let n = source.n();
    for u in 0..n {
        for v in 0..n {
            if u != v && map[u] == map[v] {
                return false;
            }
            if source.has_arc(u, v) != target.has_arc(map[u], map[v]) {
                return false;
            }
        }
    }
    true
}

enum Neigh<'a> {
    Dense(BitMatrix, BitMatrix),
    Sparse(&'a Digraph),
}

struct Engine<'a> {
    ns: usize,
    nt: usize,
    src_out: Vec<Vec<usize>>,
    src_in: Vec<Vec<usize>>,
    neigh: Neigh<'a>,
    dom: BitMatrix,
    stamp: Vec<u64>,
    clock: u64,
    trail_vars: Vec<(usize, u64)>,
    trail_words: Vec<u64>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    scratch: Vec<u64>,
    /// Domain wipeouts each variable took part in, plus one.
    weight: Vec<u64>,
    nodes: u64,
    budget: SearchBudget,
    injective: bool,
    induced: bool,
    infeasible: bool,
    source: Structure<'a>,
    target: Structure<'a>,
}

impl<'a> Engine<'a> {
    fn new(cfg: &HomSearch<'a>) -> Self {
        let (s, t) = (cfg.source.graph, cfg.target.graph);
        let (ns, nt) = (s.n(), t.n());
        let src_out = (0..ns)
            .map(|u| s.out_neighbors(u).iter().copied().filter(|&v| v != u).collect())
            .collect();
        let src_in = (0..ns)
            .map(|u| s.in_neighbors(u).iter().copied().filter(|&v| v != u).collect())
            .collect();
        let neigh = if nt <= DENSE_TARGET {
            let mut out = BitMatrix::new(nt, nt);
            let mut inn = BitMatrix::new(nt, nt);
            for &(a, b) in t.arcs() {
                out.set(a, b);
                inn.set(b, a);
            }
            Neigh::Dense(out, inn)
        } else {
            Neigh::Sparse(t)
        };
        let mut dom = BitMatrix::new(ns, nt);
        let stride = dom.stride();
        let mut infeasible = nt == 0 && ns > 0;
        if cfg.injective && ns > nt {
            infeasible = true;
        }
        let loops = BitSet::from_iter_with_capacity(nt, (0..nt).filter(|&a| t.has_loop_at(a)));
        let restrictions_for = |v: usize| cfg.restrictions.iter().filter(move |(w, _)| *w == v);
        for v in 0..ns {
            dom.fill_row(v);
            let row = dom.row_mut(v);
            if let Some(sm) = cfg.source.marks {
                if sm.contains(v) {
                    match cfg.target.marks {
                        Some(tm) => and_words(row, tm.as_words()),
                        None => row.iter_mut().for_each(|w| *w = 0),
                    }
                }
            }
            if s.has_loop_at(v) {
                and_words(row, loops.as_words());
            } else if cfg.induced {
                and_not_words(row, loops.as_words());
            }
            for (_, allowed) in restrictions_for(v) {
                and_words(row, allowed.as_words());
            }
        }
        Engine {
            ns,
            nt,
            src_out,
            src_in,
            neigh,
            dom,
            stamp: vec![0; ns],
            clock: 0,
            trail_vars: Vec::new(),
            trail_words: Vec::new(),
            queue: VecDeque::new(),
            queued: vec![false; ns],
            scratch: vec![0; stride],
            weight: vec![1; ns],
            nodes: 0,
            budget: cfg.budget,
            injective: cfg.injective,
            induced: cfg.induced,
            infeasible,
            source: cfg.source,
            target: cfg.target,
        }
    }

    fn run<F>(&mut self, mut visit: F) -> SearchEnd
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if self.infeasible {
            return SearchEnd::Complete;
        }
        if (0..self.ns).any(|v| self.dom.row(v).iter().all(|&w| w == 0)) {
            return SearchEnd::Complete;
        }
        let arc = self.budget.consistency != Consistency::None;
        if arc {
            for v in 0..self.ns {
                self.enqueue(v);
            }
            if !self.propagate() {
                return SearchEnd::Complete;
            }
        }
        if self.budget.consistency == Consistency::ArcPlusSingleton && !self.singleton_pass() {
            return SearchEnd::Complete;
        }

        struct Frame {
            var: usize,
            cands: Vec<usize>,
            next: usize,
            mark: usize,
        }
        let mut stack: Vec<Frame> = Vec::new();
        let mut map = vec![0usize; self.ns];
        loop {
            match self.choose_var() {
                None => {
                    for (v, slot) in map.iter_mut().enumerate() {
                        *slot = self.dom.row_ones(v).next().unwrap_or(0);
                    }
                    if self.verify(&map) && visit(&map).is_break() {
                        return SearchEnd::Stopped;
                    }
                }
                Some(v) => {
                    let cands = self.dom.row_ones(v).collect();
                    stack.push(Frame {
                        var: v,
                        cands,
                        next: 0,
                        mark: self.trail_vars.len(),
                    });
                }
            }
            loop {
                let Some(frame) = stack.last_mut() else {
                    return SearchEnd::Complete;
                };
                let (var, mark) = (frame.var, frame.mark);
                if frame.next >= frame.cands.len() {
                    stack.pop();
                    self.undo_to(mark);
                    continue;
                }
                let a = frame.cands[frame.next];
                frame.next += 1;
                self.undo_to(mark);
                self.nodes += 1;
                if self.budget.max_nodes != 0 && self.nodes > self.budget.max_nodes {
                    return SearchEnd::BudgetExhausted;
                }
                if self.assign(var, a, arc) {
                    break;
                }
            }
        }
    }

    /// Smallest ratio of domain size to failure weight (dom/wdeg).
    fn choose_var(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, u64)> = None;
        for v in 0..self.ns {
            let c = self.dom.row_count(v);
            if c <= 1 {
                continue;
            }
            let w = self.weight[v];
            if best.is_none_or(|(_, bc, bw)| (c as u64) * bw < (bc as u64) * w) {
                best = Some((v, c, w));
            }
        }
        best.map(|(v, _, _)| v)
    }

    /// Sets `v := a`, forward-checks and, when `arc` is set, propagates.
    fn assign(&mut self, v: usize, a: usize, arc: bool) -> bool {
        self.clock += 1;
        self.save(v);
        let row = self.dom.row_mut(v);
        row.iter_mut().for_each(|w| *w = 0);
        row[a / 64] |= 1 << (a % 64);
        if self.injective && !self.forward_injective(v, a) {
            return false;
        }
        if self.induced && !self.forward_induced(v, a) {
            return false;
        }
        if arc {
            self.enqueue(v);
            self.propagate()
        } else {
            self.revise_from(v)
        }
    }

    fn forward_injective(&mut self, v: usize, a: usize) -> bool {
        for w in 0..self.ns {
            if w != v && self.dom.get(w, a) {
                self.save(w);
                self.dom.unset(w, a);
                if self.dom.row(w).iter().all(|&x| x == 0) {
                    return false;
                }
                self.enqueue(w);
            }
        }
        true
    }

    fn forward_induced(&mut self, v: usize, a: usize) -> bool {
        let stride = self.dom.stride();
        let mut out_row = vec![0u64; stride];
        let mut in_row = vec![0u64; stride];
        self.neighbour_row(a, true, &mut out_row);
        self.neighbour_row(a, false, &mut in_row);
        let full = {
            let mut f = BitSet::full(self.nt);
            f.remove(a);
            f
        };
        for w in 0..self.ns {
            if w == v {
                continue;
            }
            let fwd = self.src_out[v].binary_search(&w).is_ok();
            let bwd = self.src_in[v].binary_search(&w).is_ok();
            let mut changed = false;
            let mut mask = full.as_words().to_vec();
            if fwd {
                and_words(&mut mask, &out_row);
            } else {
                and_not_words(&mut mask, &out_row);
            }
            if bwd {
                and_words(&mut mask, &in_row);
            } else {
                and_not_words(&mut mask, &in_row);
            }
            let row = self.dom.row(w);
            if row.iter().zip(&mask).any(|(r, m)| r & !m != 0) {
                changed = true;
            }
            if changed {
                self.save(w);
                let row = self.dom.row_mut(w);
                and_words(row, &mask);
                if row.iter().all(|&x| x == 0) {
                    return false;
                }
                self.enqueue(w);
            }
        }
        true
    }

    fn singleton_pass(&mut self) -> bool {
        loop {
            let mut changed = false;
            for v in 0..self.ns {
                if self.dom.row_count(v) <= 1 {
                    continue;
                }
                let cands: Vec<usize> = self.dom.row_ones(v).collect();
                for a in cands {
                    let mark = self.trail_vars.len();
                    let saved_clock = self.clock;
                    let ok = self.assign(v, a, true);
                    self.undo_to(mark);
                    self.clock = saved_clock;
                    if !ok {
                        // Root-level removal, never undone.
                        self.dom.unset(v, a);
                        if self.dom.row(v).iter().all(|&x| x == 0) {
                            return false;
                        }
                        self.enqueue(v);
                        if !self.propagate() {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn enqueue(&mut self, v: usize) {
        if !self.queued[v] {
            self.queued[v] = true;
            self.queue.push_back(v);
        }
    }

    fn clear_queue(&mut self) {
        while let Some(v) = self.queue.pop_front() {
            self.queued[v] = false;
        }
    }

    fn propagate(&mut self) -> bool {
        while let Some(u) = self.queue.pop_front() {
            self.queued[u] = false;
            if !self.revise_from(u) {
                self.clear_queue();
                return false;
            }
        }
        true
    }

    /// Narrows the neighbours of `u` to candidates supported by `D(u)`.
    fn revise_from(&mut self, u: usize) -> bool {
        for forward in [true, false] {
            let count = if forward {
                self.src_out[u].len()
            } else {
                self.src_in[u].len()
            };
            if count == 0 {
                continue;
            }
            self.support(u, forward);
            for i in 0..count {
                let w = if forward {
                    self.src_out[u][i]
                } else {
                    self.src_in[u][i]
                };
                let row = self.dom.row(w);
                if row.iter().zip(&self.scratch).all(|(r, s)| r & !s == 0) {
                    continue;
                }
                self.save(w);
                let row = self.dom.row_mut(w);
                and_words(row, &self.scratch);
                if row.iter().all(|&x| x == 0) {
                    self.weight[u] += 1;
                    self.weight[w] += 1;
                    return false;
                }
                self.enqueue(w);
            }
        }
        true
    }

    /// Union of out- (or in-) neighbourhoods of `D(u)` into `scratch`.
    fn support(&mut self, u: usize, forward: bool) {
        let mut acc = core::mem::take(&mut self.scratch);
        acc.iter_mut().for_each(|w| *w = 0);
        match &self.neigh {
            Neigh::Dense(out, inn) => {
                let m = if forward { out } else { inn };
                for a in Ones::new(self.dom.row(u)) {
                    for (x, y) in acc.iter_mut().zip(m.row(a)) {
                        *x |= *y;
                    }
                }
            }
            Neigh::Sparse(t) => {
                for a in Ones::new(self.dom.row(u)) {
                    let list = if forward {
                        t.out_neighbors(a)
                    } else {
                        t.in_neighbors(a)
                    };
                    for &b in list {
                        acc[b / 64] |= 1 << (b % 64);
                    }
                }
            }
        }
        self.scratch = acc;
    }

    fn neighbour_row(&self, a: usize, forward: bool, out: &mut [u64]) {
        out.iter_mut().for_each(|w| *w = 0);
        match &self.neigh {
            Neigh::Dense(o, i) => out.copy_from_slice(if forward { o.row(a) } else { i.row(a) }),
            Neigh::Sparse(t) => {
                let list = if forward {
                    t.out_neighbors(a)
                } else {
                    t.in_neighbors(a)
                };
                for &b in list {
                    out[b / 64] |= 1 << (b % 64);
                }
            }
        }
    }

    fn save(&mut self, v: usize) {
        if self.stamp[v] != self.clock {
            self.trail_vars.push((v, self.stamp[v]));
            self.trail_words.extend_from_slice(self.dom.row(v));
            self.stamp[v] = self.clock;
        }
    }

    fn undo_to(&mut self, mark: usize) {
        let stride = self.dom.stride();
        while self.trail_vars.len() > mark {
            let (v, old) = self.trail_vars.pop().unwrap();
            let start = self.trail_words.len() - stride;
            self.dom.set_row(v, &self.trail_words[start..]);
            self.trail_words.truncate(start);
            self.stamp[v] = old;
        }
    }

    fn verify(&self, map: &[usize]) -> bool {
        if !verify_hom(self.source, self.target, map) {
            return false;
        }
        if self.induced {
            return verify_induced_embedding(self.source.graph, self.target.graph, map);
        }
        if self.injective {
            let mut seen = BitSet::new(self.nt);
            return map.iter().all(|&a| seen.insert(a));
        }
        true
    }
}

fn and_words(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x &= *y;
    }
}

fn and_not_words(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x &= !*y;
    }
}
