use alloc::string::ToString;
use alloc::vec::Vec;

use super::{Digraph, Direction, MarkedDigraph, OrientationWord};
use crate::error::{Error, Result};

/// Oriented path on `w.len() + 1` vertices following `w`.
pub fn make_path(w: &OrientationWord) -> Digraph {
    let arcs = w
        .0
        .iter()
        .enumerate()
        .map(|(i, d)| match d {
            Direction::Forward => (i, i + 1),
            Direction::Backward => (i + 1, i),
        })
        .collect();
    Digraph::from_arcs_unchecked(w.len() + 1, arcs)
}

/// The directed path on `k` vertices.
pub fn directed_path(k: usize) -> Digraph {
    make_path(&OrientationWord::forward(k.saturating_sub(1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    TransitiveTournament(usize),
    DirectedCycle(usize),
    Complete(usize),
    /// Transitive tournament with the source-to-sink arc reversed.
    Tc(usize),
}

pub fn make_family(kind: Family) -> Result<Digraph> {
    let (k, min) = match kind {
        Family::Tc(k) => (k, 2),
        Family::TransitiveTournament(k) | Family::DirectedCycle(k) | Family::Complete(k) => (k, 1),
    };
    if k < min {
        return Err(Error::SizeTooSmall { min, got: k });
    }
    let mut arcs = Vec::new();
    match kind {
        Family::TransitiveTournament(k) => {
            for i in 0..k {
                for j in i + 1..k {
                    arcs.push((i, j));
                }
            }
        }
        Family::DirectedCycle(k) => arcs.extend((0..k).map(|i| (i, (i + 1) % k))),
        Family::Complete(k) => {
            for i in 0..k {
                for j in 0..k {
                    if i != j {
                        arcs.push((i, j));
                    }
                }
            }
        }
        Family::Tc(k) => {
            for i in 0..k {
                for j in i + 1..k {
                    arcs.push(if (i, j) == (0, k - 1) { (j, i) } else { (i, j) });
                }
            }
        }
    }
    Ok(Digraph::from_arcs_unchecked(k, arcs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Named {
    Plain(Digraph),
    Marked(MarkedDigraph),
}

impl Named {
    pub fn digraph(&self) -> &Digraph {
        match self {
            Named::Plain(d) => d,
            Named::Marked(m) => m.base(),
        }
    }

    pub fn into_digraph(self) -> Digraph {
        match self {
            Named::Plain(d) => d,
            Named::Marked(m) => m.base().clone(),
        }
    }
}

pub const NAMED_DIGRAPHS: &[&str] = &[
    "C3plus",
    "C3plusplus",
    "K3",
    "T4",
    "TC4",
    "T4a",
    "T4b",
    "RT5",
    "T5c",
    "GU",
];

fn one_indexed(n: usize, arcs: &[(usize, usize)]) -> Digraph {
    Digraph::from_arcs_unchecked(n, arcs.iter().map(|&(u, v)| (u - 1, v - 1)).collect())
}

/// Looks up one of [`NAMED_DIGRAPHS`], case-insensitively.
///
/// Vertex `i` of the figures is stored as `i - 1`. In the three-vertex
/// digraphs with symmetric arcs, vertex 1 is the only vertex outside every
/// symmetric pair of `C3plus`, and `C3plusplus` adds the pair {1, 2}.
pub fn named_digraph(name: &str) -> Result<Named> {
    let lower = name.to_ascii_lowercase();
    let d = match lower.as_str() {
        "c3plus" | "c3+" => one_indexed(3, &[(1, 3), (3, 2), (2, 1), (2, 3)]),
        "c3plusplus" | "c3++" => one_indexed(3, &[(1, 3), (3, 2), (2, 1), (2, 3), (1, 2)]),
        "k3" => make_family(Family::Complete(3))?,
        "t4" | "tt4" => make_family(Family::TransitiveTournament(4))?,
        "tc4" => make_family(Family::Tc(4))?,
        "t4a" => one_indexed(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (4, 2), (3, 4)]),
        "t4b" => one_indexed(4, &[(2, 1), (3, 1), (4, 1), (2, 3), (4, 2), (3, 4)]),
        "rt5" => one_indexed(
            5,
            &[
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 1),
                (3, 1),
                (1, 4),
                (4, 2),
                (2, 5),
                (5, 3),
            ],
        ),
        "t5c" => one_indexed(
            5,
            &[
                (1, 2),
                (2, 3),
                (3, 4),
                (1, 3),
                (1, 4),
                (2, 4),
                (5, 1),
                (5, 2),
                (3, 5),
                (4, 5),
            ],
        ),
        "gu" => {
            let base = one_indexed(
                7,
                &[(3, 2), (2, 1), (3, 4), (5, 4), (6, 5), (6, 1), (6, 7), (7, 1)],
            );
            return Ok(Named::Marked(MarkedDigraph::new(base, 0..6)?));
        }
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    Ok(Named::Plain(d))
}
