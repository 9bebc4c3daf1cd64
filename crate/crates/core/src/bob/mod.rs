//! Bob's tiling strategies: block partitions, the pairing response, and a
//! static check that a fully tiled pattern leaves Alice no room.

mod crack;
mod pairing;
mod partition;

use thiserror::Error;

pub use crack::{block_responses, find_crack, verify_partition_static, DEFAULT_WINDOW_BLOCKS};
pub use pairing::{canonical_placement, spiral_block, PairingBob};
pub use partition::{
    candidate_partition, depth_in_square, partition_for, u_shift, BlockIndex, BlockPartition,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BobError {
    #[error("unsupported animal: {0}")]
    UnsupportedAnimal(String),
    #[error("hole too shallow: need a removed cell at depth {needed}, deepest is {deepest}")]
    HoleTooShallow { needed: i32, deepest: i32 },
    /// Alice's block was free of Bob copies yet no copy fits inside it.
    #[error("strategy falsified: no placement in Bob-free block {block:?} after Alice played {cell}")]
    StrategyFalsified { block: BlockIndex, cell: crate::animal::Cell },
    #[error("window must span at least 3 blocks, got {0}")]
    WindowTooSmall(i32),
    #[error("the animal does not fit inside a single block")]
    DoesNotFitBlock,
}
