//! Generators and ground-truth oracles for tests and benchmarks.

mod gen;
mod oracle;

pub use gen::{
    gen_clustered, gen_erdos_renyi, gen_star_of_triples, gen_two_star_hard, StarOfTriples, TwoStar, WeightProfile,
};
pub use oracle::{brute_force_all_pairs, for_each_cut, oracle_all_pairs, oracle_latest_cut, EXHAUSTIVE_LIMIT};
