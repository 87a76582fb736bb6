//! Parallel sweeps whose reports do not depend on scheduling: work is split
//! into indexed blocks, each block draws from its own substream, and block
//! results are merged in index order.

use std::ops::ControlFlow;

use pplab_core::digraph::Digraph;
use pplab_core::enumerate::{for_each_one_vertex_extension, random_greedy, EnumFilter};
use pplab_core::hom::{hom_exists, verify_hom};
use pplab_core::obstructions::{check_characterization, in_harness_class, random_oriented, Characterization, Disagreement};
use pplab_core::rng::substream;
use pplab_core::solvers::Algorithm;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Samples per block in seeded sweeps.
pub const BLOCK: u64 = 1_000;

/// Runs `f` on a pool with `jobs` workers, or the global pool when `None`.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolverSweep {
    pub checked: u64,
    pub yes: u64,
    pub fallback_components: u64,
    /// First input, in sweep order, where the solver and the search differ
    /// or the certificate does not verify.
    pub mismatch: Option<Vec<[usize; 2]>>,
    pub mismatch_n: Option<usize>,
}

impl SolverSweep {
    fn merge(mut self, other: SolverSweep) -> SolverSweep {
        self.checked += other.checked;
        self.yes += other.yes;
        self.fallback_components += other.fallback_components;
        if self.mismatch.is_none() {
            self.mismatch = other.mismatch;
            self.mismatch_n = other.mismatch_n;
        }
        self
    }

    fn record(&mut self, algo: Algorithm, n_param: usize, template: &Digraph, d: &Digraph) {
        self.checked += 1;
        let ok = match algo.solve(d, n_param) {
            Ok(out) => {
                self.yes += out.decision as u64;
                self.fallback_components += out.fallback_components as u64;
                out.decision == hom_exists(d, template)
                    && out.certificate.as_ref().is_none_or(|c| verify_hom(d, template, c))
            }
            Err(_) => false,
        };
        if !ok && self.mismatch.is_none() {
            self.mismatch = Some(d.arcs().iter().map(|&(u, v)| [u, v]).collect());
            self.mismatch_n = Some(d.n());
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares the solver with the search on every given digraph.
pub fn solver_on(algo: Algorithm, n_param: usize, inputs: &[Digraph]) -> SolverSweep {
    let template = algo.template(n_param).expect("valid template parameter");
    inputs
        .par_chunks(256)
        .map(|chunk| {
            let mut s = SolverSweep::default();
            chunk.iter().for_each(|d| s.record(algo, n_param, &template, d));
            s
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(SolverSweep::default(), SolverSweep::merge)
}

/// Compares the solver with the search on every one-vertex extension of the
/// bases that passes `filter` and `keep`. Extensions of all classes on `k` vertices
/// cover every class on `k + 1` vertices of an induced-hereditary filter.
pub fn solver_on_extensions(
    algo: Algorithm,
    n_param: usize,
    bases: &[Digraph],
    filter: &EnumFilter,
    keep: impl Fn(&Digraph) -> bool + Sync,
) -> pplab_core::Result<SolverSweep> {
    let template = algo.template(n_param)?;
    let parts = bases
        .par_iter()
        .map(|b| {
            let mut s = SolverSweep::default();
            for_each_one_vertex_extension(b, filter, |d| {
                if keep(d) {
                    s.record(algo, n_param, &template, d);
                }
                ControlFlow::Continue(())
            })
            .map(|()| s)
        })
        .collect::<pplab_core::Result<Vec<_>>>()?;
    Ok(parts.into_iter().fold(SolverSweep::default(), SolverSweep::merge))
}

/// A random loopless input of the solver's precondition class, grown one
/// arc at a time.
pub fn random_input(algo: Algorithm, n: usize, rng: &mut pplab_core::rng::StreamRng) -> Digraph {
    let attempts = rng.random_range(n..=6 * n);
    random_greedy(n, attempts, false, rng, |g| algo.accepts_input(g))
}

/// Compares the solver with the search on `count` seeded random inputs.
pub fn solver_random(algo: Algorithm, n_param: usize, n: usize, count: u64, seed: u64) -> SolverSweep {
    let template = algo.template(n_param).expect("valid template parameter");
    let name = format!("solver-{}", algo.name());
    (0..count.div_ceil(BLOCK))
        .into_par_iter()
        .map(|block| {
            let mut rng = substream(seed, &name, block);
            let mut s = SolverSweep::default();
            for _ in block * BLOCK..count.min((block + 1) * BLOCK) {
                let d = random_input(algo, n, &mut rng);
                s.record(algo, n_param, &template, &d);
            }
            s
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(SolverSweep::default(), SolverSweep::merge)
}

#[derive(Clone, Debug, Default)]
pub struct SampleSweep {
    pub checked: u64,
    pub drawn: u64,
    pub counterexample: Option<Disagreement>,
}

/// Checks a characterization on `samples` random inputs of the harness
/// class on `n` vertices.
pub fn sample_characterization(
    c: Characterization,
    n: usize,
    samples: u64,
    seed: u64,
) -> pplab_core::Result<SampleSweep> {
    let parts = (0..samples.div_ceil(BLOCK))
        .into_par_iter()
        .map(|block| {
            let mut rng = substream(seed, "characterization-sample", block);
            let mut s = SampleSweep::default();
            let want = samples.min((block + 1) * BLOCK) - block * BLOCK;
            while s.checked < want {
                s.drawn += 1;
                let d = random_oriented(n, &mut rng);
                if !in_harness_class(&d) {
                    continue;
                }
                s.checked += 1;
                if let Some(bad) = check_characterization(&d, c)? {
                    s.counterexample = Some(bad);
                    break;
                }
            }
            Ok(s)
        })
        .collect::<pplab_core::Result<Vec<_>>>()?;
    Ok(parts.into_iter().fold(SampleSweep::default(), |mut acc, s| {
        acc.checked += s.checked;
        acc.drawn += s.drawn;
        if acc.counterexample.is_none() {
            acc.counterexample = s.counterexample;
        }
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_sweeps_ignore_worker_count() {
        let one = with_jobs(Some(1), || solver_random(Algorithm::C3pP3Free, 0, 7, 2_500, 9));
        let four = with_jobs(Some(4), || solver_random(Algorithm::C3pP3Free, 0, 7, 2_500, 9));
        assert_eq!(one, four);
        assert_eq!(one.checked, 2_500);
        assert!(one.passed());
    }

    #[test]
    fn samples_are_reproducible() {
        let a = sample_characterization(Characterization::Tcn(4), 6, 1_500, 3).unwrap();
        let b = with_jobs(Some(2), || sample_characterization(Characterization::Tcn(4), 6, 1_500, 3).unwrap());
        assert_eq!((a.checked, a.drawn), (b.checked, b.drawn));
        assert!(a.counterexample.is_none());
    }
}
