//! Named animal families and the descriptor text format.
//!
//! Grammar (keywords are case-insensitive, tokens whitespace-separated):
//!
//! ```text
//! R n m                      n wide, m tall rectangle
//! O n m k                    n × m ring of thickness k
//! U h w k                    U of height h, width w, thickness k (opening up)
//! L n                        n El trominoes side by side
//! EL                         the L-shaped tromino
//! CELLS (x,y);(x,y);...      explicit cell set
//! PUNCHED n REMOVED (x,y);...  n × n square minus interior cells
//! ```

use std::fmt;
use std::str::FromStr;

use super::geometry::{Cell, Rect};
use super::polyomino::{is_connected, Orientation, Polyomino};
use super::AnimalError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AnimalSpec {
    Rect { n: i32, m: i32 },
    Ring { n: i32, m: i32, k: i32 },
    U { h: i32, w: i32, k: i32 },
    L { n: i32 },
    El,
    Cells(Vec<Cell>),
    Punched { n: i32, removed: Vec<Cell> },
}

impl AnimalSpec {
    pub fn is_rectangle(&self) -> bool {
        matches!(self, AnimalSpec::Rect { .. })
    }

    /// `Some(n)` for `R(n, n)`.
    pub fn square_side(&self) -> Option<i32> {
        match *self {
            AnimalSpec::Rect { n, m } if n == m => Some(n),
            _ => None,
        }
    }

    pub fn build(&self) -> Result<Polyomino, AnimalError> {
        make_animal(self)
    }
}

fn out_of_range(msg: impl Into<String>) -> AnimalError {
    AnimalError::ParameterOutOfRange(msg.into())
}

/// Builds the canonical cell set of a descriptor.
pub fn make_animal(spec: &AnimalSpec) -> Result<Polyomino, AnimalError> {
    let cells: Vec<Cell> = match spec {
        &AnimalSpec::Rect { n, m } => {
            if n < 1 || m < 1 {
                return Err(out_of_range(format!("R({n},{m}) needs n, m >= 1")));
            }
            Rect::new(0, n - 1, 0, m - 1).cells().collect()
        }
        &AnimalSpec::Ring { n, m, k } => {
            if k < 1 || 2 * k >= n || 2 * k >= m {
                return Err(out_of_range(format!("O({n},{m},{k}) needs 1 <= k < min(n/2, m/2)")));
            }
            Rect::new(0, n - 1, 0, m - 1)
                .cells()
                .filter(|c| c.x < k || c.x >= n - k || c.y < k || c.y >= m - k)
                .collect()
        }
        &AnimalSpec::U { h, w, k } => {
            if h < 2 || w < 3 || k < 1 || k >= h || 2 * k >= w {
                return Err(out_of_range(format!(
                    "U({h},{w},{k}) needs h >= 2, w >= 3, 1 <= k < min(h, w/2)"
                )));
            }
            Rect::new(0, w - 1, 0, h - 1)
                .cells()
                .filter(|c| c.x < k || c.x >= w - k || c.y < k)
                .collect()
        }
        &AnimalSpec::L { n } => {
            if n < 1 {
                return Err(out_of_range(format!("L({n}) needs n >= 1")));
            }
            (0..n)
                .flat_map(|i| {
                    let x = 2 * i;
                    [Cell::new(x, 0), Cell::new(x + 1, 0), Cell::new(x, 1)]
                })
                .collect()
        }
        AnimalSpec::El => vec![Cell::new(0, 0), Cell::new(1, 0), Cell::new(0, 1)],
        AnimalSpec::Cells(cells) => cells.clone(),
        AnimalSpec::Punched { n, removed } => {
            let n = *n;
            if n < 3 {
                return Err(out_of_range(format!("punched square needs n >= 3, got {n}")));
            }
            if removed.is_empty() {
                return Err(out_of_range("punched square needs at least one removed cell"));
            }
            let interior = Rect::new(1, n - 2, 1, n - 2);
            if let Some(c) = removed.iter().find(|c| !interior.contains(**c)) {
                return Err(AnimalError::RemovedNotInterior(*c));
            }
            let cells: Vec<Cell> = Rect::new(0, n - 1, 0, n - 1)
                .cells()
                .filter(|c| !removed.contains(c))
                .collect();
            if !is_connected(&cells) {
                return Err(AnimalError::RemovalDisconnects);
            }
            cells
        }
    };
    Polyomino::from_cells(cells)
}

impl fmt::Display for AnimalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnimalSpec::Rect { n, m } => write!(f, "R {n} {m}"),
            AnimalSpec::Ring { n, m, k } => write!(f, "O {n} {m} {k}"),
            AnimalSpec::U { h, w, k } => write!(f, "U {h} {w} {k}"),
            AnimalSpec::L { n } => write!(f, "L {n}"),
            AnimalSpec::El => write!(f, "EL"),
            AnimalSpec::Cells(cells) => write!(f, "CELLS {}", format_cell_list(cells)),
            AnimalSpec::Punched { n, removed } => {
                write!(f, "PUNCHED {n} REMOVED {}", format_cell_list(removed))
            }
        }
    }
}

pub fn format_cell_list(cells: &[Cell]) -> String {
    cells.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
}

/// Parses `(x,y);(x,y);...`; whitespace anywhere is ignored.
pub fn parse_cell_list(text: &str) -> Result<Vec<Cell>, AnimalError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Ok(Vec::new());
    }
    compact
        .split(';')
        .filter(|s| !s.is_empty())
        .map(|item| {
            let inner = item
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| AnimalError::Parse(format!("expected (x,y), got {item:?}")))?;
            let (x, y) = inner
                .split_once(',')
                .ok_or_else(|| AnimalError::Parse(format!("expected (x,y), got {item:?}")))?;
            let parse = |s: &str| {
                s.parse::<i32>()
                    .map_err(|_| AnimalError::Parse(format!("bad coordinate {s:?}")))
            };
            Ok(Cell::new(parse(x)?, parse(y)?))
        })
        .collect()
}

impl FromStr for AnimalSpec {
    type Err = AnimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, rest) = match s.find(char::is_whitespace) {
            Some(i) => (&s[..i], s[i..].trim()),
            None => (s, ""),
        };
        let ints = |expected: usize| -> Result<Vec<i32>, AnimalError> {
            let vals: Vec<i32> = rest
                .split_whitespace()
                .map(|t| t.parse::<i32>().map_err(|_| AnimalError::Parse(format!("bad integer {t:?}"))))
                .collect::<Result<_, _>>()?;
            if vals.len() != expected {
                return Err(AnimalError::Parse(format!(
                    "{head} takes {expected} integer(s), got {}",
                    vals.len()
                )));
            }
            Ok(vals)
        };
        match head.to_ascii_uppercase().as_str() {
            "R" => {
                let v = ints(2)?;
                Ok(AnimalSpec::Rect { n: v[0], m: v[1] })
            }
            "O" => {
                let v = ints(3)?;
                Ok(AnimalSpec::Ring { n: v[0], m: v[1], k: v[2] })
            }
            "U" => {
                let v = ints(3)?;
                Ok(AnimalSpec::U { h: v[0], w: v[1], k: v[2] })
            }
            "L" => {
                let v = ints(1)?;
                Ok(AnimalSpec::L { n: v[0] })
            }
            "EL" => {
                ints(0)?;
                Ok(AnimalSpec::El)
            }
            "CELLS" => Ok(AnimalSpec::Cells(parse_cell_list(rest)?)),
            "PUNCHED" => {
                let (n, tail) = match rest.find(char::is_whitespace) {
                    Some(i) => (&rest[..i], rest[i..].trim()),
                    None => (rest, ""),
                };
                let n: i32 = n.parse().map_err(|_| AnimalError::Parse(format!("bad integer {n:?}")))?;
                let (kw, list) = match tail.find(char::is_whitespace) {
                    Some(i) => (&tail[..i], &tail[i..]),
                    None => (tail, ""),
                };
                if !kw.eq_ignore_ascii_case("REMOVED") {
                    return Err(AnimalError::Parse("expected PUNCHED n REMOVED (x,y);...".into()));
                }
                Ok(AnimalSpec::Punched { n, removed: parse_cell_list(list)? })
            }
            "" => Err(AnimalError::Parse("empty animal descriptor".into())),
            other => Err(AnimalError::Parse(format!("unknown animal keyword {other:?}"))),
        }
    }
}

/// An animal together with its descriptor and its distinct orientations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Animal {
    spec: AnimalSpec,
    shape: Polyomino,
    orientations: Vec<Orientation>,
}

impl Animal {
    pub fn new(spec: AnimalSpec) -> Result<Self, AnimalError> {
        let shape = make_animal(&spec)?;
        let orientations = shape.orientations();
        Ok(Animal { spec, shape, orientations })
    }

    pub fn parse(descriptor: &str) -> Result<Self, AnimalError> {
        Animal::new(descriptor.parse()?)
    }

    pub fn spec(&self) -> &AnimalSpec {
        &self.spec
    }

    pub fn shape(&self) -> &Polyomino {
        &self.shape
    }

    pub fn orientations(&self) -> &[Orientation] {
        &self.orientations
    }

    pub fn len(&self) -> usize {
        self.shape.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn diameter(&self) -> i32 {
        self.shape.diameter()
    }

    /// The orientation entry whose shape equals the image under `pl.orientation`.
    pub fn orientation_of(&self, pl: crate::animal::Placement) -> &Orientation {
        let img = self.shape.oriented(pl.orientation);
        self.orientations
            .iter()
            .find(|o| o.shape == img)
            .expect("orientation table covers D4")
    }
}

impl fmt::Display for Animal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

/// A cannibal and a non-cannibal animal of exactly `n` cells, `n >= 5`.
pub fn size_witnesses(n: i32) -> Result<(Animal, Animal), AnimalError> {
    if n < 5 {
        return Err(out_of_range(format!("size witnesses exist for n >= 5, got {n}")));
    }
    let cannibal = if n == 6 { AnimalSpec::L { n: 2 } } else { AnimalSpec::U { h: 2, w: n - 2, k: 1 } };
    Ok((Animal::new(cannibal)?, Animal::new(AnimalSpec::Rect { n: 1, m: n })?))
}
