use std::fmt;

use serde::{Deserialize, Serialize};

use super::BobError;
use crate::animal::{Animal, AnimalSpec, Cell, Rect};

/// Index `(i, j)` of a block: `i` counts along a row, `j` counts rows.
pub type BlockIndex = (i32, i32);

/// A tiling of the plane by `block_w × block_h` rectangles where row `j` is
/// shifted right by `j · shift_t`:
///
/// `B(i,j) = [ox + i·w + j·t, ox + i·w + w − 1 + j·t] × [oy + j·h, oy + j·h + h − 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockPartition {
    pub block_w: i32,
    pub block_h: i32,
    pub shift_t: i32,
    pub origin: Cell,
}

fn floor_div(a: i32, b: i32) -> i32 {
    a.div_euclid(b)
}

impl BlockPartition {
    pub fn new(block_w: i32, block_h: i32, shift_t: i32) -> Self {
        assert!(block_w > 0 && block_h > 0, "blocks must be nonempty");
        BlockPartition { block_w, block_h, shift_t, origin: Cell::ORIGIN }
    }

    pub fn block(&self, (i, j): BlockIndex) -> Rect {
        let x0 = self.origin.x + i * self.block_w + j * self.shift_t;
        let y0 = self.origin.y + j * self.block_h;
        Rect::new(x0, x0 + self.block_w - 1, y0, y0 + self.block_h - 1)
    }

    pub fn block_of(&self, c: Cell) -> BlockIndex {
        let j = floor_div(c.y - self.origin.y, self.block_h);
        let i = floor_div(c.x - self.origin.x - j * self.shift_t, self.block_w);
        (i, j)
    }

    /// Blocks meeting `r`, row by row.
    pub fn blocks_meeting(&self, r: Rect) -> Vec<BlockIndex> {
        let j0 = floor_div(r.y_min - self.origin.y, self.block_h);
        let j1 = floor_div(r.y_max - self.origin.y, self.block_h);
        let mut out = Vec::new();
        for j in j0..=j1 {
            let i0 = floor_div(r.x_min - self.origin.x - j * self.shift_t, self.block_w);
            let i1 = floor_div(r.x_max - self.origin.x - j * self.shift_t, self.block_w);
            out.extend((i0..=i1).map(|i| (i, j)));
        }
        out
    }
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "block {}x{} shift {} origin ({},{})",
            self.block_w, self.block_h, self.shift_t, self.origin.x, self.origin.y
        )
    }
}

/// Distance from a cell of an `n × n` square to its boundary ring; boundary
/// cells are at distance zero.
pub fn depth_in_square(n: i32, c: Cell) -> i32 {
    c.x.min(c.y).min(n - 1 - c.x).min(n - 1 - c.y)
}

/// Slant used for `U(h, w, 1)`.
pub fn u_shift(h: i32, w: i32) -> i32 {
    if h == 2 {
        2
    } else if h >= 3 && 2 * h - 2 >= w && w >= h - 2 {
        (w + 1) / 2
    } else {
        0
    }
}

/// Block dimensions the pairing construction would use for a family,
/// ignoring whether the construction is known to work. `shift` overrides the
/// default slant.
pub fn candidate_partition(spec: &AnimalSpec, shift: Option<i32>) -> Option<BlockPartition> {
    let (w, h, t) = match *spec {
        AnimalSpec::Ring { n, m, k } => (n + k, m + k, 0),
        AnimalSpec::L { n } => (2 * n, 2, 0),
        AnimalSpec::U { h, w, k } => (w + k, h, u_shift(h, w)),
        AnimalSpec::Punched { n, .. } => {
            let side = n + (n - 1) / 2;
            (side, side, 0)
        }
        _ => return None,
    };
    Some(BlockPartition::new(w, h, shift.unwrap_or(t)))
}

/// The partition Bob pairs against, for the families where the construction
/// is known to defeat Alice.
pub fn partition_for(animal: &Animal) -> Result<BlockPartition, BobError> {
    let spec = animal.spec();
    let unsupported = |why: &str| Err(BobError::UnsupportedAnimal(format!("{spec}: {why}")));
    match spec {
        AnimalSpec::Ring { .. } => {}
        &AnimalSpec::L { n } => {
            if n < 2 {
                return unsupported("L(1) is the El tromino, which Alice wins");
            }
        }
        &AnimalSpec::U { h, w, k } => {
            if k != 1 {
                return unsupported("pairing is only known for thickness 1");
            }
            if (h, w) == (2, 4) {
                return unsupported("the (h,w) = (2,4) case is excluded: no slanted tiling is crack-free, conjectured cannibal with no known partition");
            }
        }
        AnimalSpec::Punched { n, removed } => {
            let n = *n;
            if n < 4 {
                return unsupported("punched squares need n >= 4");
            }
            let needed = n / 4;
            let deepest = removed.iter().map(|&c| depth_in_square(n, c)).max().unwrap_or(0);
            if deepest < needed {
                return Err(BobError::HoleTooShallow { needed, deepest });
            }
        }
        AnimalSpec::Rect { .. } => return unsupported("rectangles are won by Alice"),
        AnimalSpec::El => return unsupported("animals of three or fewer cells are won by Alice"),
        AnimalSpec::Cells(_) => return unsupported("no partition for an explicit cell set"),
    }
    Ok(candidate_partition(spec, None).expect("family has dimensions"))
}
