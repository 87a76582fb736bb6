//! Small digraph enumeration, canonical forms and isomorphism tests.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::hom::HomSearch;
use crate::rng::StreamRng;
use rand::Rng;

/// Largest vertex count with a canonical form (the key is an `n * n` bit word).
pub const MAX_CANONICAL: usize = 8;
/// Largest vertex count for labeled enumeration.
pub const MAX_LABELED: usize = 32;

/// Dense adjacency rows for at most 32 vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Adj {
    n: usize,
    out: [u32; MAX_LABELED],
}

impl Adj {
    fn new(n: usize) -> Self {
        Adj {
            n,
            out: [0; MAX_LABELED],
        }
    }

    fn from_digraph(d: &Digraph) -> Self {
        let mut a = Adj::new(d.n());
        for &(u, v) in d.arcs() {
            a.out[u] |= 1 << v;
        }
        a
    }

    #[inline]
    fn arc(&self, u: usize, v: usize) -> bool {
        self.out[u] >> v & 1 == 1
    }

    fn to_digraph(self) -> Digraph {
        let mut arcs = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if self.arc(u, v) {
                    arcs.push((u, v));
                }
            }
        }
        Digraph::from_arcs_unchecked(self.n, arcs)
    }

    fn weakly_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen: u32 = 1;
        let mut frontier: u32 = 1;
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let mut nb = self.out[u];
            for v in 0..self.n {
                if self.arc(v, u) {
                    nb |= 1 << v;
                }
            }
            let new = nb & !seen;
            seen |= new;
            frontier |= new;
        }
        seen.count_ones() as usize == self.n
    }

    /// Whether some directed path on four distinct vertices among `0..=v`
    /// passes through `v`.
    fn has_p4_through(&self, v: usize) -> bool {
        let live: u32 = if v + 1 >= 32 { u32::MAX } else { (1 << (v + 1)) - 1 };
        for b in 0..=v {
            for c in 0..=v {
                if b == c || !self.arc(b, c) {
                    continue;
                }
                let ins: u32 = (0..=v).filter(|&a| self.arc(a, b)).fold(0, |m, a| m | 1 << a);
                let ins = ins & !(1 << b | 1 << c);
                let outs = self.out[c] & live & !(1 << b | 1 << c);
                if ins == 0 || outs == 0 {
                    continue;
                }
                let through_mid = b == v || c == v;
                for a in Ones32(ins) {
                    let ds = outs & !(1 << a);
                    if ds == 0 {
                        continue;
                    }
                    if through_mid || a == v || ds >> v & 1 == 1 {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Whether `{x, y, z}` induces a directed path on three vertices.
    fn induces_p3(&self, x: usize, y: usize, z: usize) -> bool {
        let t = [x, y, z];
        let mut count = 0;
        for &a in &t {
            for &b in &t {
                if self.arc(a, b) {
                    if a == b {
                        return false;
                    }
                    count += 1;
                }
            }
        }
        if count != 2 {
            return false;
        }
        // two arcs on three vertices form a path iff some vertex has one in and one out
        t.iter().any(|&m| {
            let outs = t.iter().filter(|&&w| w != m && self.arc(m, w)).count();
            let ins = t.iter().filter(|&&w| w != m && self.arc(w, m)).count();
            outs == 1 && ins == 1
        })
    }
}

struct Ones32(u32);

impl Iterator for Ones32 {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Restrictions applied while a digraph is built vertex by vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct EnumFilter {
    pub loopless: bool,
    /// No loops and no symmetric pairs.
    pub oriented: bool,
    /// Exactly one arc between any two distinct vertices, no loops.
    pub tournament: bool,
    pub induced_p3_free: bool,
    /// No directed path on four distinct vertices, induced or not.
    pub p4_subgraph_free: bool,
    /// Checked on complete digraphs only.
    pub weakly_connected: bool,
}

impl EnumFilter {
    pub fn tournaments() -> Self {
        EnumFilter {
            tournament: true,
            ..Self::default()
        }
    }

    pub fn loopless() -> Self {
        EnumFilter {
            loopless: true,
            ..Self::default()
        }
    }

    fn loops_allowed(&self) -> bool {
        !(self.loopless || self.oriented || self.tournament)
    }

    /// Relation codes between a new vertex `v` and an older vertex `u`:
    /// bit 0 is `v → u`, bit 1 is `u → v`.
    fn pair_codes(&self) -> &'static [u8] {
        if self.tournament {
            &[1, 2]
        } else if self.oriented {
            &[0, 1, 2]
        } else {
            &[0, 1, 2, 3]
        }
    }

    /// Checks every condition that involves the newest vertex `v`.
    fn accepts_new_vertex(&self, a: &Adj, v: usize) -> bool {
        if self.p4_subgraph_free && a.has_p4_through(v) {
            return false;
        }
        if self.induced_p3_free {
            for x in 0..v {
                for y in x + 1..v {
                    if a.induces_p3(x, y, v) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn accepts(&self, d: &Digraph) -> bool {
        if d.n() > MAX_LABELED {
            return false;
        }
        let a = Adj::from_digraph(d);
        let n = a.n;
        if !self.loops_allowed() && d.has_loop() {
            return false;
        }
        for u in 0..n {
            for v in u + 1..n {
                let code = a.arc(u, v) as u8 | (a.arc(v, u) as u8) << 1;
                if !self.pair_codes().contains(&code) {
                    return false;
                }
            }
        }
        if !(0..n).all(|v| self.accepts_new_vertex(&a, v)) {
            return false;
        }
        !self.weakly_connected || a.weakly_connected()
    }
}

/// Canonical key of a digraph with at most [`MAX_CANONICAL`] vertices.
///
/// Two digraphs of equal order get the same key exactly when they are
/// isomorphic. The key is the lexicographically least adjacency bit string
/// over all labelings that list vertices by a refined degree colouring; the
/// colouring is isomorphism invariant, so the minimum is too.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    pub n: u8,
    pub bits: u64,
}

/// Colour classes from iterated degree refinement, as a colour per vertex;
/// colours are ranks of isomorphism-invariant signatures.
fn refine_colours(a: &Adj) -> Vec<usize> {
    let n = a.n;
    let mut colour: Vec<usize> = {
        let sig: Vec<(bool, usize, usize, usize)> = (0..n)
            .map(|v| {
                let outs = (0..n).filter(|&w| w != v && a.arc(v, w)).count();
                let ins = (0..n).filter(|&w| w != v && a.arc(w, v)).count();
                let sym = (0..n).filter(|&w| w != v && a.arc(v, w) && a.arc(w, v)).count();
                (a.arc(v, v), outs, ins, sym)
            })
            .collect();
        rank(&sig)
    };
    loop {
        let classes = distinct(&colour);
        let sig: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut o: Vec<usize> = (0..n).filter(|&w| w != v && a.arc(v, w)).map(|w| colour[w]).collect();
                let mut i: Vec<usize> = (0..n).filter(|&w| w != v && a.arc(w, v)).map(|w| colour[w]).collect();
                o.sort_unstable();
                i.sort_unstable();
                (colour[v], o, i)
            })
            .collect();
        let next = rank(&sig);
        if distinct(&next) == classes {
            return colour;
        }
        colour = next;
    }
}

fn rank<T: Ord + Clone>(sig: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sig.to_vec();
    sorted.sort();
    sorted.dedup();
    sig.iter()
        .map(|s| sorted.binary_search(s).expect("present"))
        .collect()
}

fn distinct(c: &[usize]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

struct Canon<'a> {
    a: &'a Adj,
    slot_colour: Vec<usize>,
    colour: Vec<usize>,
    order: Vec<usize>,
    used: u32,
    best: Option<u64>,
    best_order: Vec<usize>,
    total_bits: u32,
}

impl Canon<'_> {
    /// Bits contributed by placing `order[k]` at position `k`: the diagonal
    /// entry, then for each earlier position `j` the entries `(j, k)` and
    /// `(k, j)`.
    fn step_bits(&self, k: usize) -> (u64, u32) {
        let a = self.a;
        let vk = self.order[k];
        let mut bits = a.arc(vk, vk) as u64;
        for j in 0..k {
            let vj = self.order[j];
            bits = bits << 2 | (a.arc(vj, vk) as u64) << 1 | a.arc(vk, vj) as u64;
        }
        (bits, 2 * k as u32 + 1)
    }

    fn search(&mut self, k: usize, prefix: u64, len: u32) {
        let n = self.a.n;
        if k == n {
            if self.best.is_none_or(|b| prefix < b) {
                self.best = Some(prefix);
                self.best_order = self.order.clone();
            }
            return;
        }
        for v in 0..n {
            if self.used >> v & 1 == 1 || self.colour[v] != self.slot_colour[k] {
                continue;
            }
            self.order.push(v);
            self.used |= 1 << v;
            let (bits, w) = self.step_bits(k);
            let p = prefix << w | bits;
            let l = len + w;
            if self.best.is_none_or(|b| p <= b >> (self.total_bits - l)) {
                self.search(k + 1, p, l);
            }
            self.used &= !(1 << v);
            self.order.pop();
        }
    }
}

fn canonical_adj(a: &Adj) -> (u64, Vec<usize>) {
    let n = a.n;
    let colour = refine_colours(a);
    let mut slot_colour = colour.clone();
    slot_colour.sort_unstable();
    let mut c = Canon {
        a,
        slot_colour,
        colour,
        order: Vec::with_capacity(n),
        used: 0,
        best: None,
        best_order: Vec::new(),
        total_bits: (n * n) as u32,
    };
    c.search(0, 0, 0);
    // position of each vertex
    let mut perm = vec![0; n];
    for (pos, &v) in c.best_order.iter().enumerate() {
        perm[v] = pos;
    }
    (c.best.unwrap_or(0), perm)
}

pub fn canonical_key(d: &Digraph) -> Result<CanonicalKey> {
    if d.n() > MAX_CANONICAL {
        return Err(Error::Precondition(alloc::format!(
            "canonical forms need at most {MAX_CANONICAL} vertices, got {}",
            d.n()
        )));
    }
    let (bits, _) = canonical_adj(&Adj::from_digraph(d));
    Ok(CanonicalKey {
        n: d.n() as u8,
        bits,
    })
}

/// The canonical relabeling and the permutation used (`perm[v]` is the new
/// name of `v`).
pub fn canonical_form(d: &Digraph) -> Result<(Digraph, Vec<usize>)> {
    canonical_key(d)?;
    let (_, perm) = canonical_adj(&Adj::from_digraph(d));
    Ok((d.relabel(&perm), perm))
}

/// Isomorphism test by searching for a bijective induced embedding.
pub fn is_isomorphic(a: &Digraph, b: &Digraph) -> bool {
    if a.n() != b.n() || a.arc_count() != b.arc_count() {
        return false;
    }
    let mut da: Vec<(usize, usize)> = (0..a.n()).map(|v| (a.out_degree(v), a.in_degree(v))).collect();
    let mut db: Vec<(usize, usize)> = (0..b.n()).map(|v| (b.out_degree(v), b.in_degree(v))).collect();
    da.sort_unstable();
    db.sort_unstable();
    da == db && HomSearch::new(a, b).induced(true).find().is_found()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct EnumStats {
    /// Digraphs passed to the visitor.
    pub visited: u64,
    /// Whether the visitor stopped the enumeration.
    pub stopped: bool,
}

/// Visits the digraphs on `n` vertices accepted by `filter`.
///
/// With `dedup` one canonical representative per isomorphism class is
/// visited, in increasing key order (`n ≤ 8`). Without it every labeled
/// digraph is visited; `budget` then caps the number of visits and running
/// out is reported as [`Error::EnumerationBudget`].
pub fn enumerate_digraphs<F>(
    n: usize,
    filter: &EnumFilter,
    dedup: bool,
    budget: Option<u64>,
    mut visit: F,
) -> Result<EnumStats>
where
    F: FnMut(&Digraph) -> ControlFlow<()>,
{
    let mut stats = EnumStats::default();
    if dedup {
        for d in digraph_classes(n, filter)? {
            if let Some(b) = budget {
                if stats.visited >= b {
                    return Err(Error::EnumerationBudget(b));
                }
            }
            stats.visited += 1;
            if visit(&d).is_break() {
                stats.stopped = true;
                break;
            }
        }
        return Ok(stats);
    }
    if n > MAX_LABELED {
        return Err(Error::Precondition(alloc::format!(
            "labeled enumeration supports at most {MAX_LABELED} vertices"
        )));
    }
    let mut adj = Adj::new(n);
    let mut result = Ok(());
    let _ = labeled(&mut adj, 0, filter, &mut |a: &Adj| {
        if let Some(b) = budget {
            if stats.visited >= b {
                result = Err(Error::EnumerationBudget(b));
                return ControlFlow::Break(());
            }
        }
        stats.visited += 1;
        if visit(&a.to_digraph()).is_break() {
            stats.stopped = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    result.map(|_| stats)
}

/// Fills in vertex `v` and recurses; `adj` has vertices `0..v` settled.
fn labeled(
    adj: &mut Adj,
    v: usize,
    filter: &EnumFilter,
    visit: &mut dyn FnMut(&Adj) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if v == adj.n {
        if filter.weakly_connected && !adj.weakly_connected() {
            return ControlFlow::Continue(());
        }
        return visit(adj);
    }
    for_each_extension(adj, v, filter, &mut |a| {
        let mut b = *a;
        labeled(&mut b, v + 1, filter, visit)
    })
}

/// Every way to join vertex `v` to `0..v` (and optionally a loop) that keeps
/// the hereditary conditions of `filter`.
fn for_each_extension(
    base: &Adj,
    v: usize,
    filter: &EnumFilter,
    f: &mut dyn FnMut(&Adj) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let codes = filter.pair_codes();
    let loops: &[bool] = if filter.loops_allowed() {
        &[false, true]
    } else {
        &[false]
    };
    let mut choice = vec![0usize; v];
    for &lp in loops {
        choice.iter_mut().for_each(|c| *c = 0);
        loop {
            let mut a = *base;
            a.out[v] = 0;
            for u in 0..v {
                a.out[u] &= !(1 << v);
            }
            if lp {
                a.out[v] |= 1 << v;
            }
            for (u, &c) in choice.iter().enumerate() {
                let code = codes[c];
                if code & 1 != 0 {
                    a.out[v] |= 1 << u;
                }
                if code & 2 != 0 {
                    a.out[u] |= 1 << v;
                }
            }
            if filter.accepts_new_vertex(&a, v) {
                f(&a)?;
            }
            let mut i = v;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < codes.len() {
                    break;
                }
                choice[i] = 0;
            }
            if choice.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    ControlFlow::Continue(())
}

/// Visits every digraph on `base.n() + 1` vertices that restricts to `base`
/// on `0..base.n()` and passes the hereditary conditions of `filter` at the
/// new vertex. Weak connectivity is checked on each result.
///
/// Extending one representative per class of size `n` reaches every class of
/// size `n + 1` of a hereditary family, usually several times.
pub fn for_each_one_vertex_extension<F>(base: &Digraph, filter: &EnumFilter, mut visit: F) -> Result<()>
where
    F: FnMut(&Digraph) -> ControlFlow<()>,
{
    let v = base.n();
    if v + 1 > MAX_LABELED {
        return Err(Error::Precondition(alloc::format!(
            "labeled enumeration supports at most {MAX_LABELED} vertices"
        )));
    }
    let mut grown = Adj::from_digraph(base);
    grown.n = v + 1;
    let _ = for_each_extension(&grown, v, filter, &mut |a| {
        if filter.weakly_connected && !a.weakly_connected() {
            return ControlFlow::Continue(());
        }
        visit(&a.to_digraph())
    });
    Ok(())
}

/// One canonical representative per isomorphism class, sorted by key.
pub fn digraph_classes(n: usize, filter: &EnumFilter) -> Result<Vec<Digraph>> {
    if n > MAX_CANONICAL {
        return Err(Error::Precondition(alloc::format!(
            "deduplicated enumeration supports at most {MAX_CANONICAL} vertices, got {n}"
        )));
    }
    let mut level: Vec<Adj> = vec![Adj::new(0)];
    for v in 0..n {
        let mut next: BTreeMap<u64, Adj> = BTreeMap::new();
        for base in &level {
            let mut grown = *base;
            grown.n = v + 1;
            let _ = for_each_extension(&grown, v, filter, &mut |a| {
                let (key, perm) = canonical_adj(a);
                next.entry(key).or_insert_with(|| relabel_adj(a, &perm));
                ControlFlow::Continue(())
            });
        }
        level = next.into_values().collect();
    }
    Ok(level
        .into_iter()
        .filter(|a| !filter.weakly_connected || a.weakly_connected())
        .map(Adj::to_digraph)
        .collect())
}

fn relabel_adj(a: &Adj, perm: &[usize]) -> Adj {
    let mut b = Adj::new(a.n);
    for u in 0..a.n {
        for v in 0..a.n {
            if a.arc(u, v) {
                b.out[perm[u]] |= 1 << perm[v];
            }
        }
    }
    b
}

/// A random digraph grown one arc at a time: `attempts` arcs are drawn
/// uniformly among ordered pairs (loops only when `loops`), and each is kept
/// when `keep` accepts the digraph with it.
///
/// With a hereditary `keep` this reaches every digraph of the class with
/// positive probability.
pub fn random_greedy<F>(n: usize, attempts: usize, loops: bool, rng: &mut StreamRng, mut keep: F) -> Digraph
where
    F: FnMut(&Digraph) -> bool,
{
    let mut d = Digraph::empty(n);
    if n == 0 {
        return d;
    }
    for _ in 0..attempts {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if (u == v && !loops) || d.has_arc(u, v) {
            continue;
        }
        let next = d.with_arcs([(u, v)]).expect("in range");
        if keep(&next) {
            d = next;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{contains_subgraph, directed_path, make_family, Family, SubgraphMode};

    #[test]
    fn p4_filter_matches_subgraph_search() {
        let f = EnumFilter {
            p4_subgraph_free: true,
            ..EnumFilter::loopless()
        };
        let p4 = directed_path(4);
        for n in 1..=5 {
            let mut filtered = 0u64;
            let mut brute = 0u64;
            enumerate_digraphs(n, &EnumFilter::loopless(), true, None, |d| {
                if f.accepts(d) {
                    filtered += 1;
                }
                if contains_subgraph(d, &p4, SubgraphMode::Subgraph).is_none() {
                    brute += 1;
                }
                ControlFlow::Continue(())
            })
            .unwrap();
            assert_eq!(filtered, brute, "n = {n}");
            assert_eq!(digraph_classes(n, &f).unwrap().len() as u64, brute);
        }
    }

    #[test]
    fn tournament_counts() {
        let f = EnumFilter::tournaments();
        let counts: Vec<usize> = (1..=6)
            .map(|n| digraph_classes(n, &f).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 12, 56]);
    }

    #[test]
    fn loopless_single_vertex() {
        assert_eq!(digraph_classes(1, &EnumFilter::loopless()).unwrap().len(), 1);
        assert_eq!(digraph_classes(1, &EnumFilter::default()).unwrap().len(), 2);
    }

    #[test]
    fn loopless_counts_match_known_sequence() {
        // unlabeled loopless digraphs: 1, 3, 16, 218
        let f = EnumFilter::loopless();
        let counts: Vec<usize> = (1..=4)
            .map(|n| digraph_classes(n, &f).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 3, 16, 218]);
    }

    #[test]
    fn keys_identify_relabelings() {
        let tc4 = make_family(Family::Tc(4)).unwrap();
        let r = tc4.relabel(&[2, 0, 3, 1]);
        assert_eq!(canonical_key(&tc4).unwrap(), canonical_key(&r).unwrap());
        assert!(is_isomorphic(&tc4, &r));
        let tt4 = make_family(Family::TransitiveTournament(4)).unwrap();
        assert_ne!(canonical_key(&tc4).unwrap(), canonical_key(&tt4).unwrap());
    }

    #[test]
    fn labeled_budget() {
        let f = EnumFilter::tournaments();
        let mut seen = 0;
        let stats = enumerate_digraphs(3, &f, false, None, |_| {
            seen += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!((seen, stats.visited), (8, 8));
        assert_eq!(
            enumerate_digraphs(3, &f, false, Some(5), |_| ControlFlow::Continue(())),
            Err(Error::EnumerationBudget(5))
        );
    }
}
