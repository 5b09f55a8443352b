//! Exact cut-equivalent (Gomory-Hu) trees for undirected graphs.
//!
//! The crate provides the classic Gomory-Hu and Gusfield builders, a
//! recursive builder driven by expander decompositions and isolating cuts
//! ([`subcubic::build_tree`]), and the pieces it is made of: a capped
//! max-flow engine with latest-cut extraction, Nagamochi-Ibaraki
//! sparsification, a conductance-based decomposition, and tree stitching.
//! Every builder's output can be checked with [`verify::verify_tree`].

pub mod combine;
pub mod egq;
pub mod error;
pub mod expander;
pub mod flow;
pub mod gomory_hu;
pub mod graph;
pub mod harness;
pub mod io;
pub mod isolating;
pub mod meter;
pub mod seed;
pub mod sparsify;
pub mod subcubic;
pub mod tree;
pub mod verify;

pub use combine::combine;
pub use error::{Error, Result};
pub use flow::{latest_min_cut, max_flow_capped, FlowResult, FlowStatus};
pub use gomory_hu::{gomory_hu_classic, gusfield, k_partial_tree, partial_tree_for_subset};
pub use graph::{build_auxiliary, contract, cut_value, degree_and_volume, AuxiliaryGraph, CapGraph, CutSide, NodeId};
pub use meter::{Meter, MeterSnapshot};
pub use subcubic::{build_tree, AlgoParams, BuildReport, Profile};
pub use tree::{apmf_query, GHTree, PartitionTree, PathMinIndex};
pub use verify::{verify_tree, Verdict};
