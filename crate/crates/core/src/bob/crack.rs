use rustc_hash::FxHashSet;

use super::{canonical_placement, BlockPartition, BobError};
use crate::animal::{Animal, Cell, Rect};
use crate::engine::{BoardBounds, GameState};

pub const DEFAULT_WINDOW_BLOCKS: i32 = 5;

/// Every cell set the pairing response can leave in a block, relative to the
/// block's bottom-left cell: the empty-block placement, plus the placement
/// answering a first Alice cell at each position of the block. Positions
/// where no copy fits are skipped (that failure is a separate check).
pub fn block_responses(animal: &Animal, partition: &BlockPartition) -> Result<Vec<Vec<Cell>>, BobError> {
    let block = Rect::with_size(Cell::ORIGIN, partition.block_w, partition.block_h);
    let empty = GameState::new(animal.clone(), BoardBounds::Infinite).expect("infinite board");
    let base = canonical_placement(block, animal, &empty).ok_or(BobError::DoesNotFitBlock)?;
    let mut seen = FxHashSet::default();
    let mut out = Vec::new();
    let mut push = |cells: Vec<Cell>| {
        let mut key = cells.clone();
        key.sort();
        if seen.insert(key) {
            out.push(cells);
        }
    };
    push(animal.shape().place(base));
    for c in block.cells() {
        let mut g = empty.clone();
        g.apply_alice(c).expect("free cell");
        if let Some(pl) = canonical_placement(block, animal, &g) {
            push(animal.shape().place(pl));
        }
    }
    Ok(out)
}

/// A copy of the animal lying inside `window` such that every block it meets
/// admits some pairing response disjoint from it. Alice can realize such a
/// copy against the pairing strategy: she opens each block it meets with the
/// cell that steers Bob's response away, then fills in the copy.
pub fn find_crack(animal: &Animal, partition: &BlockPartition, window: Rect) -> Result<Option<Vec<Cell>>, BobError> {
    let responses = block_responses(animal, partition)?;
    let (bw, bh) = (partition.block_w, partition.block_h);
    // Per response, a dense occupancy mask over the block.
    let masks: Vec<Vec<bool>> = responses
        .iter()
        .map(|cells| {
            let mut m = vec![false; (bw * bh) as usize];
            for c in cells {
                m[(c.y * bw + c.x) as usize] = true;
            }
            m
        })
        .collect();
    let mut per_block: Vec<((i32, i32), Vec<usize>)> = Vec::new();
    for o in animal.orientations() {
        let (ow, oh) = (o.shape.width(), o.shape.height());
        for y in window.y_min..=window.y_max - oh + 1 {
            for x in window.x_min..=window.x_max - ow + 1 {
                let corner = Cell::new(x, y);
                per_block.clear();
                for c in o.cells_at(corner) {
                    let b = partition.block_of(c);
                    let rel = c - partition.block(b).bottom_left();
                    let i = (rel.y * bw + rel.x) as usize;
                    match per_block.iter_mut().find(|(k, _)| *k == b) {
                        Some((_, v)) => v.push(i),
                        None => per_block.push((b, vec![i])),
                    }
                }
                let open = per_block
                    .iter()
                    .all(|(_, cells)| masks.iter().any(|m| cells.iter().all(|&i| !m[i])));
                if open {
                    return Ok(Some(o.cells_at(corner).collect()));
                }
            }
        }
    }
    Ok(None)
}

/// True when no copy inside a `window_blocks × window_blocks` window anchored
/// at the partition origin is a crack in the sense of [`find_crack`].
pub fn verify_partition_static(animal: &Animal, partition: &BlockPartition, window_blocks: i32) -> Result<bool, BobError> {
    if window_blocks < 3 {
        return Err(BobError::WindowTooSmall(window_blocks));
    }
    let o = partition.origin;
    let window = Rect::new(
        o.x,
        o.x + window_blocks * partition.block_w - 1,
        o.y,
        o.y + window_blocks * partition.block_h - 1,
    );
    Ok(find_crack(animal, partition, window)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bob::{candidate_partition, partition_for};

    fn verify(d: &str) -> bool {
        let a = Animal::parse(d).unwrap();
        let p = partition_for(&a).unwrap();
        verify_partition_static(&a, &p, 5).unwrap()
    }

    #[test]
    fn supported_partitions_have_no_crack() {
        assert!(verify("O 4 6 1"));
        assert!(verify("L 2"));
        assert!(verify("U 2 3 1"));
    }

    #[test]
    fn u_2_4_has_a_crack() {
        let a = Animal::parse("U 2 4 1").unwrap();
        let p = candidate_partition(a.spec(), Some(2)).unwrap();
        assert!(!verify_partition_static(&a, &p, 5).unwrap());
    }

    #[test]
    fn window_is_translation_invariant() {
        for d in ["U 2 3 1", "U 2 4 1", "U 2 6 1", "L 2"] {
            let a = Animal::parse(d).unwrap();
            let p = candidate_partition(a.spec(), None).unwrap();
            let mut shifted = p;
            shifted.origin = Cell::new(p.shift_t, p.block_h);
            let base = verify_partition_static(&a, &p, 5).unwrap();
            assert_eq!(base, verify_partition_static(&a, &shifted, 5).unwrap());
            shifted.origin = Cell::new(p.block_w, 0);
            assert_eq!(base, verify_partition_static(&a, &shifted, 5).unwrap());
        }
    }

    #[test]
    fn small_window_rejected() {
        let a = Animal::parse("L 2").unwrap();
        let p = partition_for(&a).unwrap();
        assert_eq!(verify_partition_static(&a, &p, 2), Err(BobError::WindowTooSmall(2)));
    }
}
