//! Concrete random models with exact moment oracles.

pub mod pairings;
pub mod random_graphs;
pub mod permutations;
pub mod ssep;
pub mod markov;
