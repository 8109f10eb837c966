//! Exhaustive search over finite frames and models.
//!
//! Frames are visited size by size, each size in lexicographic order of the
//! betterness matrix; valuations in lexicographic order of the searched
//! atoms. Work is split across threads but the reported witness is always
//! the least one, so results do not depend on the worker count.

mod chain;
mod enumerate;
mod search;

pub use chain::{longest_chain_in, longest_strict_chain, ChainLength};
pub use enumerate::{
    enumerate_frames, is_canonical, orbit_size, permutations, scan_frames, with_workers, Budget,
    FrameFilter, FrameScan, MAX_ENUM_WORLDS, MAX_PLAIN_WORLDS,
};
pub use search::{
    all_models, find_model, find_satisfying_model, SearchError, SearchMode, SearchResult, SearchSpec,
    SearchStatus,
};
