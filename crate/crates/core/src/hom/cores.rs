use alloc::vec;
use alloc::vec::Vec;

use super::HomSearch;
use crate::bitset::BitSet;
use crate::digraph::{smooth_reduct_vertices, Digraph, MarkedDigraph, Structure};
use crate::error::{Error, Result};

pub const DEFAULT_CORE_CAP: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreResult<G> {
    pub core: G,
    /// Vertex of the input for each core vertex.
    pub vertices: Vec<usize>,
    /// Retraction: input vertex to core vertex index.
    pub retraction: Vec<usize>,
}

/// Core with the default size cap.
pub fn core(h: &Digraph) -> Result<CoreResult<Digraph>> {
    core_with_cap(h, DEFAULT_CORE_CAP)
}

pub fn core_with_cap(h: &Digraph, cap: usize) -> Result<CoreResult<Digraph>> {
    let r = shrink(h.into(), cap)?;
    Ok(CoreResult {
        core: h.induced(&r.0),
        vertices: r.0,
        retraction: r.1,
    })
}

/// Core of a marked digraph; endomorphisms must preserve the marks.
pub fn core_marked(h: &MarkedDigraph, cap: usize) -> Result<CoreResult<MarkedDigraph>> {
    let r = shrink(h.into(), cap)?;
    Ok(CoreResult {
        core: h.induced(&r.0),
        vertices: r.0,
        retraction: r.1,
    })
}

/// Repeatedly finds an endomorphism missing some vertex and restricts to its
/// image. Returns the surviving vertices and the composed retraction.
fn shrink(h: Structure<'_>, cap: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = h.graph.n();
    if n > cap {
        return Err(Error::CapExceeded {
            needed: n as u128,
            cap,
        });
    }
    let mut alive: Vec<usize> = (0..n).collect();
    // retraction into original vertex ids
    let mut retract: Vec<usize> = (0..n).collect();
    'outer: loop {
        let g = h.graph.induced(&alive);
        let marks = h.marks.map(|m| {
            BitSet::from_iter_with_capacity(
                alive.len(),
                alive.iter().enumerate().filter(|(_, &v)| m.contains(v)).map(|(i, _)| i),
            )
        });
        let s = Structure {
            graph: &g,
            marks: marks.as_ref(),
        };
        for x in 0..alive.len() {
            let mut allowed = BitSet::full(alive.len());
            allowed.remove(x);
            if let Some(f) = HomSearch::new(s, s).restrict_all(&allowed).find().found() {
                let image: Vec<usize> = {
                    let mut seen = BitSet::new(alive.len());
                    f.iter().for_each(|&a| {
                        seen.insert(a);
                    });
                    seen.iter().collect()
                };
                for r in retract.iter_mut() {
                    let local = alive.binary_search(r).expect("retraction lands in alive set");
                    *r = alive[f[local]];
                }
                alive = image.iter().map(|&i| alive[i]).collect();
                continue 'outer;
            }
        }
        break;
    }
    let retraction: Vec<usize> = retract
        .iter()
        .map(|r| alive.binary_search(r).expect("retraction lands in core"))
        .collect();
    // on the core the map is an automorphism; undo it so core vertices stay put
    let mut inverse = vec![0; alive.len()];
    for (i, &v) in alive.iter().enumerate() {
        inverse[retraction[v]] = i;
    }
    Ok((alive, retraction.iter().map(|&r| inverse[r]).collect()))
}

/// Whether every endomorphism is surjective.
pub fn is_core(h: &Digraph) -> bool {
    let n = h.n();
    (0..n).all(|x| {
        let mut allowed = BitSet::full(n);
        allowed.remove(x);
        !HomSearch::new(h, h).restrict_all(&allowed).find().is_found()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SmoothClass {
    PolyTime,
    NpComplete,
    NotSmooth,
}

/// Classifies a digraph without sources and sinks by whether its core is a
/// disjoint union of directed cycles.
pub fn classify_smooth(h: &Digraph, cap: usize) -> Result<SmoothClass> {
    if smooth_reduct_vertices(h).len() != h.n() || h.n() == 0 {
        return Ok(SmoothClass::NotSmooth);
    }
    let c = core_with_cap(h, cap)?.core;
    let cycles = c
        .vertices()
        .all(|v| c.out_degree(v) == 1 && c.in_degree(v) == 1);
    Ok(if cycles {
        SmoothClass::PolyTime
    } else {
        SmoothClass::NpComplete
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{make_family, named_digraph, Family};
    use crate::hom::{hom_equivalent, verify_hom};

    #[test]
    fn isolated_vertex_retracts() {
        let tt2 = make_family(Family::TransitiveTournament(2)).unwrap();
        let h = tt2.disjoint_union(&Digraph::empty(1));
        let r = core(&h).unwrap();
        assert_eq!(r.core, tt2);
        assert!(verify_hom(&h, &r.core, &r.retraction));
    }

    #[test]
    fn cores_of_named() {
        let c3p = named_digraph("C3plus").unwrap().into_digraph();
        assert_eq!(core(&c3p).unwrap().core, c3p);
        let k2 = make_family(Family::Complete(2)).unwrap();
        assert_eq!(core(&k2).unwrap().core.n(), 2);
        let big = make_family(Family::TransitiveTournament(11)).unwrap();
        assert!(matches!(core(&big), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn dominated_duplicate() {
        let tt3 = make_family(Family::TransitiveTournament(3)).unwrap();
        let dup = Digraph::new(4, [(0, 1), (0, 2), (1, 2), (0, 3), (3, 2)]).unwrap();
        assert!(hom_equivalent(&tt3, &dup));
        assert_eq!(core(&dup).unwrap().core.n(), 3);
    }

    #[test]
    fn smooth_classes() {
        let c3 = make_family(Family::DirectedCycle(3)).unwrap();
        let c5 = make_family(Family::DirectedCycle(5)).unwrap();
        let u = c3.disjoint_union(&c5);
        assert_eq!(classify_smooth(&u, 10).unwrap(), SmoothClass::PolyTime);
        let tc4 = make_family(Family::Tc(4)).unwrap();
        assert_eq!(classify_smooth(&tc4, 10).unwrap(), SmoothClass::NpComplete);
        let tt3 = make_family(Family::TransitiveTournament(3)).unwrap();
        assert_eq!(classify_smooth(&tt3, 10).unwrap(), SmoothClass::NotSmooth);
    }
}
