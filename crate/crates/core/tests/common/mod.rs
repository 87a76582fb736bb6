#![allow(dead_code)]

use pplab_core::digraph::Digraph;
use proptest::prelude::*;

/// Digraphs on `1..=max_n` vertices, loops allowed when `loops`.
pub fn arb_digraph(max_n: usize, loops: bool) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::bool::weighted(0.35), n * n).prop_map(move |bits| {
            let arcs = (0..n * n)
                .filter(|&i| bits[i] && (loops || i / n != i % n))
                .map(|i| (i / n, i % n));
            Digraph::new(n, arcs).unwrap()
        })
    })
}

pub fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Every map `0..n → 0..m`, as a flat odometer.
pub fn all_maps(n: usize, m: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if n == 0 {
        visit(&[]);
        return;
    }
    if m == 0 {
        return;
    }
    let mut map = vec![0usize; n];
    loop {
        if !visit(&map) {
            return;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            map[i] += 1;
            if map[i] < m {
                break;
            }
            map[i] = 0;
        }
    }
}

pub fn naive_hom(d: &Digraph, h: &Digraph) -> Option<Vec<usize>> {
    let mut found = None;
    all_maps(d.n(), h.n(), |m| {
        if d.arcs().iter().all(|&(u, v)| h.has_arc(m[u], m[v])) {
            found = Some(m.to_vec());
            false
        } else {
            true
        }
    });
    found
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Smallest adjacency word over all relabelings.
pub fn brute_canonical(d: &Digraph, perms: &[Vec<usize>]) -> u64 {
    let n = d.n();
    perms
        .iter()
        .map(|p| {
            d.arcs()
                .iter()
                .fold(0u64, |acc, &(u, v)| acc | 1 << (p[u] * n + p[v]))
        })
        .min()
        .unwrap_or(0)
}

pub fn brute_isomorphic(a: &Digraph, b: &Digraph) -> bool {
    if a.n() != b.n() || a.arc_count() != b.arc_count() {
        return false;
    }
    let perms = permutations(a.n());
    brute_canonical(a, &perms) == brute_canonical(b, &perms)
}
