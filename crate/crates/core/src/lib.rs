//! Finite digraph homomorphism problems: search, cores, pp-constructions,
//! exponentials, polymorphisms, obstruction sets, special-case solvers and
//! hardness gadgets.
#![no_std]

extern crate alloc;

pub mod bitset;
pub mod digraph;
pub mod enumerate;
mod error;
pub mod exponential;
pub mod gadgets;
pub mod hom;
pub mod obstructions;
pub mod polymorphism;
pub mod pp;
pub mod rng;
pub mod solvers;

pub use bitset::BitSet;
pub use digraph::{Digraph, MarkedDigraph, Structure};
pub use error::{Error, Result};
