//! Finite digraphs, digraphs with a unary mark relation, and orientation words.

mod families;
mod props;

pub use families::{directed_path, make_family, make_path, named_digraph, Family, Named, NAMED_DIGRAPHS};
pub use props::{
    contains_subgraph, girth, has_directed_triangle, longest_directed_walk, smooth_reduct,
    smooth_reduct_vertices, structural_predicates, topological_levels, weak_components, Girth,
    StructuralReport, SubgraphMode, WalkBound,
};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Digraphs above this size keep adjacency lists only; below it a dense bit
/// matrix backs O(1) arc lookups.
const DENSE_LIMIT: usize = 4096;

/// An immutable finite digraph on vertices `0..n`.
///
/// Arcs form a set; constructing from a list with repeats keeps one copy.
/// Arcs iterate in ascending lexicographic order.
#[derive(Clone)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    out_bits: Option<Vec<BitSet>>,
}

impl Digraph {
    pub fn new<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::ArcOutOfRange(u, v, n));
            }
            list.push((u, v));
        }
        Ok(Self::from_arcs_unchecked(n, list))
    }

    /// Builds a digraph from arcs already known to be in range.
    pub(crate) fn from_arcs_unchecked(n: usize, mut arcs: Vec<(usize, usize)>) -> Self {
        arcs.sort_unstable();
        arcs.dedup();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in &arcs {
            out[u].push(v);
            inn[v].push(u);
        }
        for l in inn.iter_mut() {
            l.sort_unstable();
        }
        let out_bits = (n <= DENSE_LIMIT).then(|| {
            out.iter()
                .map(|l| BitSet::from_iter_with_capacity(n, l.iter().copied()))
                .collect()
        });
        Digraph {
            n,
            arcs,
            out,
            inn,
            out_bits,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_arcs_unchecked(n, Vec::new())
    }

    /// The one-vertex digraph with a loop.
    pub fn looped_vertex() -> Self {
        Self::from_arcs_unchecked(1, vec![(0, 0)])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> core::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        match &self.out_bits {
            Some(rows) => rows[u].contains(v),
            None => self.out[u].binary_search(&v).is_ok(),
        }
    }

    /// Adjacent in either direction.
    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    #[inline]
    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    #[inline]
    pub fn in_neighbors(&self, u: usize) -> &[usize] {
        &self.inn[u]
    }

    #[inline]
    pub fn out_degree(&self, u: usize) -> usize {
        self.out[u].len()
    }

    #[inline]
    pub fn in_degree(&self, u: usize) -> usize {
        self.inn[u].len()
    }

    /// Out- plus in-degree, loops excluded.
    pub fn total_degree(&self, u: usize) -> usize {
        self.out[u].iter().filter(|&&v| v != u).count() + self.inn[u].iter().filter(|&&v| v != u).count()
    }

    /// Vertices joined to `u` by an arc in either direction, loops excluded.
    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut all: Vec<usize> = self.out[u]
            .iter()
            .chain(self.inn[u].iter())
            .copied()
            .filter(|&v| v != u)
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub fn has_loop_at(&self, u: usize) -> bool {
        self.has_arc(u, u)
    }

    pub fn has_loop(&self) -> bool {
        self.arcs.iter().any(|&(u, v)| u == v)
    }

    /// Whether `u` lies on a symmetric pair of arcs.
    pub fn on_symmetric_pair(&self, u: usize) -> bool {
        self.out[u].iter().any(|&v| v != u && self.has_arc(v, u))
    }

    /// Unordered symmetric pairs `(u, v)` with `u < v`.
    pub fn symmetric_pairs(&self) -> Vec<(usize, usize)> {
        self.arcs
            .iter()
            .copied()
            .filter(|&(u, v)| u < v && self.has_arc(v, u))
            .collect()
    }

    /// The subdigraph induced by `keep`; vertex `keep[i]` becomes `i`.
    pub fn induced(&self, keep: &[usize]) -> Digraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let arcs = keep
            .iter()
            .flat_map(|&u| self.out[u].iter().map(move |&v| (u, v)))
            .filter(|&(_, v)| index[v] != usize::MAX)
            .map(|(u, v)| (index[u], index[v]))
            .collect();
        Digraph::from_arcs_unchecked(keep.len(), arcs)
    }

    /// Renames vertex `v` to `perm[v]`; `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Digraph {
        debug_assert_eq!(perm.len(), self.n);
        let arcs = self.arcs.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Digraph::from_arcs_unchecked(self.n, arcs)
    }

    /// Every arc reversed.
    pub fn reverse(&self) -> Digraph {
        Digraph::from_arcs_unchecked(self.n, self.arcs.iter().map(|&(u, v)| (v, u)).collect())
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let shift = self.n;
        let arcs = self
            .arcs
            .iter()
            .copied()
            .chain(other.arcs.iter().map(|&(u, v)| (u + shift, v + shift)))
            .collect();
        Digraph::from_arcs_unchecked(self.n + other.n, arcs)
    }

    /// Adds arcs, returning a new digraph.
    pub fn with_arcs<I: IntoIterator<Item = (usize, usize)>>(&self, extra: I) -> Result<Digraph> {
        Digraph::new(self.n, self.arcs.iter().copied().chain(extra))
    }

    /// Removes arcs, returning a new digraph.
    pub fn without_arcs(&self, drop: &[(usize, usize)]) -> Digraph {
        let arcs = self
            .arcs
            .iter()
            .copied()
            .filter(|a| !drop.contains(a))
            .collect();
        Digraph::from_arcs_unchecked(self.n, arcs)
    }

    /// Keeps one arc of every symmetric pair: `(min, max)` when `keep_forward`,
    /// otherwise `(max, min)`.
    pub fn orient_symmetric_pairs(&self, keep_forward: bool) -> Digraph {
        let arcs = self
            .arcs
            .iter()
            .copied()
            .filter(|&(u, v)| {
                if u == v || !self.has_arc(v, u) {
                    return true;
                }
                (u < v) == keep_forward
            })
            .collect();
        Digraph::from_arcs_unchecked(self.n, arcs)
    }

}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.arcs == other.arcs
    }
}

impl Eq for Digraph {}

impl Hash for Digraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.arcs.hash(state);
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n, self.arcs)
    }
}

/// A digraph together with a unary relation `U` of marked vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MarkedDigraph {
    base: Digraph,
    marks: BitSet,
}

impl MarkedDigraph {
    pub fn new<I: IntoIterator<Item = usize>>(base: Digraph, marks: I) -> Result<Self> {
        let n = base.n();
        let mut set = BitSet::new(n);
        for m in marks {
            if m >= n {
                return Err(Error::MarkOutOfRange(m, n));
            }
            set.insert(m);
        }
        Ok(MarkedDigraph { base, marks: set })
    }

    /// Marks every vertex.
    pub fn all_marked(base: Digraph) -> Self {
        let marks = BitSet::full(base.n());
        MarkedDigraph { base, marks }
    }

    pub fn base(&self) -> &Digraph {
        &self.base
    }

    pub fn marks(&self) -> &BitSet {
        &self.marks
    }

    pub fn is_marked(&self, v: usize) -> bool {
        self.marks.contains(v)
    }

    pub fn induced(&self, keep: &[usize]) -> MarkedDigraph {
        let base = self.base.induced(keep);
        let marks = BitSet::from_iter_with_capacity(
            keep.len(),
            keep.iter().enumerate().filter(|(_, &v)| self.marks.contains(v)).map(|(i, _)| i),
        );
        MarkedDigraph { base, marks }
    }

    /// Categorical product: a pair is marked when both coordinates are.
    pub fn product(&self, other: &MarkedDigraph) -> MarkedDigraph {
        let base = crate::exponential::product(&self.base, &other.base);
        let m = other.base.n();
        let marks = BitSet::from_iter_with_capacity(
            base.n(),
            (0..base.n()).filter(|&p| self.marks.contains(p / m) && other.marks.contains(p % m)),
        );
        MarkedDigraph { base, marks }
    }
}

impl fmt::Debug for MarkedDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MarkedDigraph({:?}, marks={:?})", self.base, self.marks)
    }
}

/// Read-only view of a digraph with an optional mark relation.
///
/// A structure without marks has no unary relation at all; mapping into it
/// constrains nothing, while mapping a structure with marks into one without
/// is treated as mapping into an empty relation.
#[derive(Clone, Copy, Debug)]
pub struct Structure<'a> {
    pub graph: &'a Digraph,
    pub marks: Option<&'a BitSet>,
}

impl<'a> From<&'a Digraph> for Structure<'a> {
    fn from(graph: &'a Digraph) -> Self {
        Structure { graph, marks: None }
    }
}

impl<'a> From<&'a MarkedDigraph> for Structure<'a> {
    fn from(m: &'a MarkedDigraph) -> Self {
        Structure {
            graph: &m.base,
            marks: Some(&m.marks),
        }
    }
}

/// Direction of one arc along an oriented path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// A word over `{Forward, Backward}`; a word of length `k` describes an
/// oriented path on `k + 1` vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OrientationWord(pub Vec<Direction>);

impl OrientationWord {
    pub fn forward(len: usize) -> Self {
        OrientationWord(vec![Direction::Forward; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl core::str::FromStr for OrientationWord {
    type Err = Error;

    /// Accepts `>`/`f`/`F` for forward and `<`/`b`/`B` for backward.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '>' | 'f' | 'F' => Ok(Direction::Forward),
                '<' | 'b' | 'B' => Ok(Direction::Backward),
                other => Err(Error::Invalid(alloc::format!(
                    "orientation letter `{other}` is not one of > < f b"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(OrientationWord)
    }
}
