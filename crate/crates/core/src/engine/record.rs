//! Line-oriented game records.
//!
//! ```text
//! CANNIBAL-RECORD 1
//! ANIMAL <descriptor>
//! BOUNDS INFINITE | BOUNDS RECT <x_min> <x_max> <y_min> <y_max>
//! SEED <u64> | SEED NONE
//! RNG <identifier>          (optional)
//! BUDGET <max plies>        (optional)
//! MOVES
//! A <x> <y>
//! B <orientation 0-7> <dx> <dy>
//! BPASS
//! END
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. `END` is mandatory so
//! that a truncated file is detected.

use thiserror::Error;

use super::{BoardBounds, EngineError, GameState, Move};
use crate::animal::{Animal, AnimalSpec, Cell, D4Element, Placement, Rect};

pub const RECORD_MAGIC: &str = "CANNIBAL-RECORD 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: illegal move {mv}: {source}")]
    IllegalMove {
        line: usize,
        mv: String,
        #[source]
        source: EngineError,
    },
    #[error("record does not fit the board: {0}")]
    Setup(EngineError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameRecord {
    pub animal: AnimalSpec,
    pub bounds: BoardBounds,
    pub seed: Option<u64>,
    pub rng: Option<String>,
    pub budget: Option<usize>,
    pub moves: Vec<Move>,
    /// Source line of each move, for error reporting.
    move_lines: Vec<usize>,
}

impl GameRecord {
    pub fn new(animal: AnimalSpec, bounds: BoardBounds) -> Self {
        GameRecord { animal, bounds, seed: None, rng: None, budget: None, moves: Vec::new(), move_lines: Vec::new() }
    }

    pub fn from_state(state: &GameState) -> Self {
        GameRecord {
            animal: state.animal().spec().clone(),
            bounds: state.bounds(),
            seed: None,
            rng: None,
            budget: state.move_budget(),
            moves: state.history().to_vec(),
            move_lines: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: Option<u64>, rng: Option<&str>) -> Self {
        self.seed = seed;
        self.rng = rng.map(str::to_owned);
        self
    }

    pub fn encode(&self) -> String {
        let mut out = String::new();
        out.push_str(RECORD_MAGIC);
        out.push('\n');
        out.push_str(&format!("ANIMAL {}\n", self.animal));
        match self.bounds {
            BoardBounds::Infinite => out.push_str("BOUNDS INFINITE\n"),
            BoardBounds::Rect(r) => {
                out.push_str(&format!("BOUNDS RECT {} {} {} {}\n", r.x_min, r.x_max, r.y_min, r.y_max))
            }
        }
        match self.seed {
            Some(s) => out.push_str(&format!("SEED {s}\n")),
            None => out.push_str("SEED NONE\n"),
        }
        if let Some(rng) = &self.rng {
            out.push_str(&format!("RNG {rng}\n"));
        }
        if let Some(b) = self.budget {
            out.push_str(&format!("BUDGET {b}\n"));
        }
        out.push_str("MOVES\n");
        for m in &self.moves {
            out.push_str(&m.to_string());
            out.push('\n');
        }
        out.push_str("END\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self, RecordError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let err = |line: usize, message: &str| RecordError::Parse { line, message: message.to_owned() };
        let mut last_line = 0;

        match lines.next() {
            Some((_, l)) if l == RECORD_MAGIC => {}
            Some((n, _)) => return Err(err(n, "expected record header")),
            None => return Err(err(1, "empty record")),
        }

        let mut animal = None;
        let mut bounds = None;
        let mut seed = None;
        let mut rng = None;
        let mut budget = None;
        loop {
            let Some((n, l)) = lines.next() else {
                return Err(err(last_line + 1, "missing MOVES section"));
            };
            last_line = n;
            let (key, value) = l.split_once(char::is_whitespace).map_or((l, ""), |(k, v)| (k, v.trim()));
            match key {
                "ANIMAL" => {
                    animal = Some(value.parse::<AnimalSpec>().map_err(|e| err(n, &e.to_string()))?);
                }
                "BOUNDS" => bounds = Some(parse_bounds(value).ok_or_else(|| err(n, "bad BOUNDS"))?),
                "SEED" => {
                    seed = Some(if value == "NONE" {
                        None
                    } else {
                        Some(value.parse::<u64>().map_err(|_| err(n, "bad SEED"))?)
                    });
                }
                "RNG" => rng = Some(value.to_owned()),
                "BUDGET" => budget = Some(value.parse::<usize>().map_err(|_| err(n, "bad BUDGET"))?),
                "MOVES" => break,
                _ => return Err(err(n, &format!("unknown header field {key:?}"))),
            }
        }
        let animal = animal.ok_or_else(|| err(last_line, "missing ANIMAL"))?;
        let bounds = bounds.ok_or_else(|| err(last_line, "missing BOUNDS"))?;
        let seed = seed.ok_or_else(|| err(last_line, "missing SEED"))?;

        let mut moves = Vec::new();
        let mut move_lines = Vec::new();
        let mut ended = false;
        for (n, l) in lines.by_ref() {
            last_line = n;
            if l == "END" {
                ended = true;
                break;
            }
            moves.push(parse_move(l).ok_or_else(|| err(n, &format!("bad move {l:?}")))?);
            move_lines.push(n);
        }
        if !ended {
            return Err(err(last_line + 1, "truncated record: missing END"));
        }
        if let Some((n, _)) = lines.next() {
            return Err(err(n, "content after END"));
        }
        Ok(GameRecord { animal, bounds, seed, rng, budget, moves, move_lines })
    }

    /// Plays every move through the rules from the empty board.
    pub fn replay(&self) -> Result<GameState, RecordError> {
        let animal = Animal::new(self.animal.clone())
            .map_err(|e| RecordError::Parse { line: 2, message: e.to_string() })?;
        let mut state = GameState::new(animal, self.bounds).map_err(RecordError::Setup)?;
        for (i, &mv) in self.moves.iter().enumerate() {
            state.apply(mv).map_err(|source| RecordError::IllegalMove {
                line: self.move_lines.get(i).copied().unwrap_or(0),
                mv: mv.to_string(),
                source,
            })?;
        }
        // The budget only applies once all recorded moves are in.
        Ok(state.with_move_budget(self.budget))
    }
}

fn parse_bounds(v: &str) -> Option<BoardBounds> {
    let toks: Vec<&str> = v.split_whitespace().collect();
    match toks.as_slice() {
        ["INFINITE"] => Some(BoardBounds::Infinite),
        ["RECT", a, b, c, d] => {
            let r = Rect::new(a.parse().ok()?, b.parse().ok()?, c.parse().ok()?, d.parse().ok()?);
            (!r.is_empty()).then_some(BoardBounds::Rect(r))
        }
        _ => None,
    }
}

impl std::str::FromStr for Move {
    type Err = RecordError;

    /// One move line: `A x y`, `B o dx dy` or `BPASS`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_move(s.trim()).ok_or_else(|| RecordError::Parse { line: 1, message: format!("bad move {s:?}") })
    }
}

fn parse_move(l: &str) -> Option<Move> {
    let toks: Vec<&str> = l.split_whitespace().collect();
    match toks.as_slice() {
        ["A", x, y] => Some(Move::Alice(Cell::new(x.parse().ok()?, y.parse().ok()?))),
        ["B", o, dx, dy] => Some(Move::Bob(Placement::new(
            D4Element::new(o.parse().ok()?)?,
            dx.parse().ok()?,
            dy.parse().ok()?,
        ))),
        ["BPASS"] => Some(Move::BobPass),
        _ => None,
    }
}

pub fn encode_record(state: &GameState, seed: Option<u64>) -> String {
    GameRecord::from_state(state).with_seed(seed, None).encode()
}

pub fn decode_record(text: &str) -> Result<GameState, RecordError> {
    GameRecord::parse(text)?.replay()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Status;

    /// An El game where Alice completes her third cell: she builds the corner
    /// at (0,0),(1,0),(0,1) while Bob's copies land elsewhere.
    fn el_transcript() -> GameState {
        let mut g = GameState::new(Animal::parse("EL").unwrap(), BoardBounds::Infinite).unwrap();
        g.apply_alice(Cell::new(0, 0)).unwrap();
        g.apply_bob(Placement::new(D4Element::ROT180, 1, 1)).unwrap();
        g.apply_alice(Cell::new(1, 0)).unwrap();
        g.apply_bob(Placement::new(D4Element::IDENTITY, 2, -1)).unwrap();
        g.apply_alice(Cell::new(0, -1)).unwrap();
        g
    }

    #[test]
    fn el_game_round_trip() {
        let g = el_transcript();
        assert_eq!(g.status(), Status::AliceWon);
        let text = encode_record(&g, Some(7));
        let back = decode_record(&text).unwrap();
        assert_eq!(back.status(), g.status());
        assert_eq!(back.to_move(), g.to_move());
        let mut a: Vec<_> = g.occupancy().collect();
        let mut b: Vec<_> = back.occupancy().collect();
        a.sort_by_key(|x| x.0);
        b.sort_by_key(|x| x.0);
        assert_eq!(a, b);
        assert_eq!(GameRecord::parse(&text).unwrap().seed, Some(7));
    }

    #[test]
    fn empty_game_is_header_only() {
        let g = GameState::new(Animal::parse("R 2 2").unwrap(), BoardBounds::board(3, 3)).unwrap();
        let text = encode_record(&g, None);
        assert_eq!(
            text,
            "CANNIBAL-RECORD 1\nANIMAL R 2 2\nBOUNDS RECT 0 2 0 2\nSEED NONE\nMOVES\nEND\n"
        );
        assert_eq!(decode_record(&text).unwrap().ply(), 0);
    }

    #[test]
    fn truncation_and_garbage_are_parse_errors() {
        let text = encode_record(&el_transcript(), None);
        let cut = &text[..text.len() - 4];
        assert!(matches!(decode_record(cut), Err(RecordError::Parse { .. })));
        let half = &text[..text.find("MOVES").unwrap()];
        assert!(matches!(decode_record(half), Err(RecordError::Parse { .. })));
        let bad = text.replace("A 1 0", "A 1");
        match decode_record(&bad) {
            Err(RecordError::Parse { line, .. }) => assert_eq!(line, 8),
            other => panic!("{other:?}"),
        }
        assert!(matches!(decode_record(""), Err(RecordError::Parse { line: 1, .. })));
    }

    #[test]
    fn illegal_moves_are_reported_with_line() {
        let text = "CANNIBAL-RECORD 1\nANIMAL R 1 1\nBOUNDS INFINITE\nSEED NONE\nMOVES\nA 0 0\nB 0 0 0\nEND\n";
        match decode_record(text) {
            Err(RecordError::IllegalMove { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn budget_survives_round_trip() {
        let mut g = GameState::new(Animal::parse("R 3 3").unwrap(), BoardBounds::Infinite)
            .unwrap()
            .with_move_budget(Some(2));
        g.apply_alice(Cell::ORIGIN).unwrap();
        g.apply_bob(Placement::new(D4Element::IDENTITY, 9, 9)).unwrap();
        let back = decode_record(&encode_record(&g, None)).unwrap();
        assert_eq!(back.status(), g.status());
    }
}
