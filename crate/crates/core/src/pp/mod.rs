//! Primitive positive definitions of a binary relation, pp-powers and gadget
//! replacements.

mod parse;

pub use parse::parse_pp;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::hom::HomSearch;

/// Size cap for pp-powers.
pub const DEFAULT_POWER_CAP: usize = 200_000;

/// A dimension-`d` definition `δ(x1..xd, y1..yd)` of the arc relation.
///
/// Variables are numbered `0..var_count`. `free` lists the variable standing
/// at each of the `2d` free positions; after equalities are merged the same
/// variable may stand at several positions. Every other variable is
/// existentially quantified.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PPDefinition {
    dim: usize,
    var_count: usize,
    free: Vec<usize>,
    atoms: Vec<(usize, usize)>,
    names: Vec<String>,
}

/// The digraph of a formula together with its free positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDatabase {
    pub gadget: Digraph,
    pub distinguished: Vec<usize>,
}

impl PPDefinition {
    pub fn new(
        dim: usize,
        var_count: usize,
        free: Vec<usize>,
        atoms: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::SizeTooSmall { min: 1, got: 0 });
        }
        if free.len() != 2 * dim {
            return Err(Error::Invalid(format!(
                "dimension {dim} needs {} free positions, got {}",
                2 * dim,
                free.len()
            )));
        }
        if let Some(&v) = free
            .iter()
            .chain(atoms.iter().flat_map(|(a, b)| [a, b]))
            .find(|&&v| v >= var_count)
        {
            return Err(Error::Invalid(format!("variable {v} is undeclared")));
        }
        let names = (0..var_count).map(|v| default_name(v, &free, dim)).collect();
        Ok(PPDefinition {
            dim,
            var_count,
            free,
            atoms,
            names,
        })
    }

    pub(crate) fn with_names(mut self, names: Vec<String>) -> Self {
        debug_assert_eq!(names.len(), self.var_count);
        self.names = names;
        self
    }

    /// `δ(x, y) := E(x, y)`.
    pub fn trivial() -> Self {
        Self::new(1, 2, vec![0, 1], vec![(0, 1)]).expect("well formed")
    }

    /// `δ(x, y) := ∃ z1..z(k-1) . E(x, z1) ∧ … ∧ E(z(k-1), y)`, a directed walk
    /// with `k` arcs.
    pub fn walk(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::SizeTooSmall { min: 1, got: 0 });
        }
        // x = 0, y = 1, z_i = i + 1
        let chain: Vec<usize> = core::iter::once(0)
            .chain(2..k + 1)
            .chain(core::iter::once(1))
            .collect();
        let atoms = chain.windows(2).map(|w| (w[0], w[1])).collect();
        Self::new(1, k + 1, vec![0, 1], atoms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn atoms(&self) -> &[(usize, usize)] {
        &self.atoms
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn has_existentials(&self) -> bool {
        let mut is_free = vec![false; self.var_count];
        self.free.iter().for_each(|&v| is_free[v] = true);
        is_free.iter().any(|f| !f)
    }

    pub fn canonical_database(&self) -> CanonicalDatabase {
        CanonicalDatabase {
            gadget: Digraph::from_arcs_unchecked(self.var_count, self.atoms.clone()),
            distinguished: self.free.clone(),
        }
    }
}

fn default_name(v: usize, free: &[usize], dim: usize) -> String {
    match free.iter().position(|&f| f == v) {
        Some(p) if dim == 1 => String::from(if p == 0 { "x" } else { "y" }),
        Some(p) if p < dim => format!("x{}", p + 1),
        Some(p) => format!("y{}", p - dim + 1),
        None => format!("z{}", v),
    }
}

impl fmt::Display for PPDefinition {
    /// Renders in the input syntax; repeated free variables come out as
    /// equality atoms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.var_count];
        let mut head = Vec::new();
        let mut equalities = Vec::new();
        for (p, &v) in self.free.iter().enumerate() {
            if seen[v] {
                let alias = format!("_p{p}");
                equalities.push(format!("{alias}={}", self.names[v]));
                head.push(alias);
            } else {
                seen[v] = true;
                head.push(self.names[v].clone());
            }
        }
        write!(f, "def E({}) :=", head.join(","))?;
        let ex: Vec<&str> = (0..self.var_count)
            .filter(|&v| !seen[v])
            .map(|v| self.names[v].as_str())
            .collect();
        if !ex.is_empty() {
            write!(f, " exists {} .", ex.join(","))?;
        }
        let body: Vec<String> = self
            .atoms
            .iter()
            .map(|&(a, b)| format!("E({},{})", self.names[a], self.names[b]))
            .chain(equalities)
            .collect();
        if body.is_empty() {
            // an always-true body still needs one conjunct
            let v = self.free[0];
            write!(f, " {}={}", self.names[v], self.names[v])
        } else {
            write!(f, " {}", body.join(" & "))
        }
    }
}

impl fmt::Debug for PPDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PPDefinition({self})")
    }
}

/// Number of `d`-tuples over `n` elements, or `CapExceeded`.
pub(crate) fn checked_power(n: usize, d: usize, cap: usize) -> Result<usize> {
    let mut total: u128 = 1;
    for _ in 0..d {
        total = total.saturating_mul(n as u128);
    }
    if total > cap as u128 {
        return Err(Error::CapExceeded { needed: total, cap });
    }
    Ok(total as usize)
}

/// Writes the row-major digits of `index` (base `n`, `d` digits) into `out`.
pub(crate) fn tuple_of(mut index: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
}

/// The pp-power on `d`-tuples of `a`, indexed row-major.
pub fn pp_power(def: &PPDefinition, a: &Digraph) -> Result<Digraph> {
    pp_power_with_cap(def, a, DEFAULT_POWER_CAP)
}

pub fn pp_power_with_cap(def: &PPDefinition, a: &Digraph, cap: usize) -> Result<Digraph> {
    let d = def.dim;
    let n = a.n();
    let total = checked_power(n, d, cap)?;
    let mut arcs = Vec::new();
    if total == 0 {
        return Ok(Digraph::empty(0));
    }
    let db = def.canonical_database();
    let existentials = def.has_existentials();
    let mut xs = vec![0usize; d];
    let mut ys = vec![0usize; d];
    let mut values = vec![usize::MAX; def.var_count];
    for s in 0..total {
        tuple_of(s, n, &mut xs);
        for t in 0..total {
            tuple_of(t, n, &mut ys);
            values.iter_mut().for_each(|v| *v = usize::MAX);
            let consistent = def
                .free
                .iter()
                .zip(xs.iter().chain(ys.iter()))
                .all(|(&var, &val)| {
                    let slot = &mut values[var];
                    if *slot == usize::MAX {
                        *slot = val;
                        true
                    } else {
                        *slot == val
                    }
                });
            if !consistent {
                continue;
            }
            let holds = if existentials {
                let mut search = HomSearch::new(&db.gadget, a);
                for (var, &val) in values.iter().enumerate() {
                    if val != usize::MAX {
                        search = search.pin(var, val);
                    }
                }
                search.find().is_found()
            } else {
                def.atoms
                    .iter()
                    .all(|&(u, v)| a.has_arc(values[u], values[v]))
            };
            if holds {
                arcs.push((s, t));
            }
        }
    }
    Ok(Digraph::from_arcs_unchecked(total, arcs))
}

/// Minimal union-find over `0..n`.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn push(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        id
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the classes; the smaller root survives.
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    /// Dense class ids, numbered by smallest member.
    pub fn compact(&mut self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            out[x] = id[r];
        }
        (out, next)
    }
}

/// Replaces every arc `(u, v)` of `b` by a fresh copy of the canonical
/// database, gluing its free positions to the `d` vertices of `u` and of `v`.
/// Vertex `u * d + i` carries coordinate `i` of `u`; existential copies follow,
/// arc by arc. Vertices merged by repeated free variables are renumbered
/// densely in order of their smallest member.
pub fn gadget_replacement(def: &PPDefinition, b: &Digraph) -> Digraph {
    let d = def.dim;
    let mut uf = UnionFind::new(b.n() * d);
    let mut arcs = Vec::new();
    for &(u, v) in b.arcs() {
        let mut local = vec![usize::MAX; def.var_count];
        for (p, &var) in def.free.iter().enumerate() {
            let vertex = if p < d { u * d + p } else { v * d + p - d };
            if local[var] == usize::MAX {
                local[var] = vertex;
            } else {
                uf.union(local[var], vertex);
            }
        }
        for slot in local.iter_mut() {
            if *slot == usize::MAX {
                *slot = uf.push();
            }
        }
        arcs.extend(def.atoms.iter().map(|&(x, y)| (local[x], local[y])));
    }
    let (ids, count) = uf.compact();
    Digraph::from_arcs_unchecked(count, arcs.into_iter().map(|(x, y)| (ids[x], ids[y])).collect())
}

/// The definition of dimension `d1 * d2` whose pp-power is the pp-power by
/// `outer` of the pp-power by `inner`, with tuples flattened row-major.
pub fn compose_pp(outer: &PPDefinition, inner: &PPDefinition) -> PPDefinition {
    let (d1, d2) = (outer.dim, inner.dim);
    // component c of outer variable w is w * d2 + c
    let mut uf = UnionFind::new(outer.var_count * d2);
    let mut atoms = Vec::new();
    for &(s, t) in &outer.atoms {
        let mut local = vec![usize::MAX; inner.var_count];
        for (p, &var) in inner.free.iter().enumerate() {
            let vertex = if p < d2 { s * d2 + p } else { t * d2 + p - d2 };
            if local[var] == usize::MAX {
                local[var] = vertex;
            } else {
                uf.union(local[var], vertex);
            }
        }
        for slot in local.iter_mut() {
            if *slot == usize::MAX {
                *slot = uf.push();
            }
        }
        atoms.extend(inner.atoms.iter().map(|&(x, y)| (local[x], local[y])));
    }
    let (ids, count) = uf.compact();
    let free = outer
        .free
        .iter()
        .flat_map(|&w| (0..d2).map(move |c| w * d2 + c))
        .map(|v| ids[v])
        .collect();
    let mut atoms: Vec<(usize, usize)> = atoms.into_iter().map(|(x, y)| (ids[x], ids[y])).collect();
    atoms.sort_unstable();
    atoms.dedup();
    PPDefinition::new(d1 * d2, count, free, atoms).expect("composition is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{make_family, Family};

    #[test]
    fn walk_definition_database() {
        let p = PPDefinition::walk(3).unwrap();
        let db = p.canonical_database();
        assert_eq!(db.gadget.arc_count(), 3);
        assert_eq!(db.distinguished.len(), 2);
        assert_eq!(
            crate::digraph::longest_directed_walk(&db.gadget),
            crate::digraph::WalkBound::Finite(4)
        );
    }

    #[test]
    fn trivial_power_is_identity() {
        let tc4 = make_family(Family::Tc(4)).unwrap();
        assert_eq!(pp_power(&PPDefinition::trivial(), &tc4).unwrap(), tc4);
        assert_eq!(gadget_replacement(&PPDefinition::trivial(), &tc4), tc4);
    }

    #[test]
    fn single_arc_gadget() {
        let p = PPDefinition::walk(3).unwrap();
        let tt2 = make_family(Family::TransitiveTournament(2)).unwrap();
        let g = gadget_replacement(&p, &tt2);
        assert_eq!((g.n(), g.arc_count()), (4, 3));
    }

    #[test]
    fn cap_is_enforced() {
        let k5 = make_family(Family::Complete(5)).unwrap();
        let def = crate::exponential::exponential_pp_definition(&make_family(Family::Complete(3)).unwrap())
            .unwrap();
        assert!(matches!(
            pp_power_with_cap(&def, &k5, 100),
            Err(Error::CapExceeded { needed: 125, cap: 100 })
        ));
    }

    #[test]
    fn display_round_trips() {
        let p = PPDefinition::walk(3).unwrap();
        let text = alloc::string::ToString::to_string(&p);
        assert_eq!(parse_pp(&text).unwrap(), p);
    }
}
