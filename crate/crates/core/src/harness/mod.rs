//! Strategy registry, single matches and seeded series.

mod runner;
mod strategies;

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::alice::AliceError;
use crate::animal::Animal;
use crate::bob::BobError;
use crate::engine::{BoardBounds, EngineError, GameRecord, GameState, Move, Side};
use crate::solver::SolverError;

pub use runner::{run_match, run_series, run_series_reports, Failure, MatchConfig, MatchReport, SeriesStats};
pub use strategies::{random_window, AdjacentBlockerBob, GreedyAlice, RandomAlice, RandomBob, ScriptedBob};

/// Identifier of the generator every stochastic choice is drawn from.
pub const RNG_ALGORITHM: &str = "chacha8";

pub type Rng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("unknown strategy {0:?}")]
    Unknown(String),
    #[error("{id} plays {plays}, not {wanted}")]
    WrongSide { id: String, plays: Side, wanted: Side },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Alice(#[from] AliceError),
    #[error(transparent)]
    Bob(#[from] BobError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("strategy chose an illegal move: {0}")]
    Illegal(#[from] EngineError),
}

impl StrategyError {
    /// A strategy's own correctness claim failed in play.
    pub fn is_falsification(&self) -> bool {
        matches!(
            self,
            StrategyError::Bob(BobError::StrategyFalsified { .. })
                | StrategyError::Alice(AliceError::CaseNotCovered(_) | AliceError::NoTarget | AliceError::EmptyIntersection)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StrategyError::Unknown(_) => "UnknownStrategy",
            StrategyError::WrongSide { .. } => "WrongSide",
            StrategyError::Unsupported(_) => "Unsupported",
            StrategyError::Alice(e) => match e {
                AliceError::CaseNotCovered(_) => "CaseNotCovered",
                AliceError::NoTarget => "NoTarget",
                AliceError::EmptyIntersection => "EmptyIntersection",
                _ => "UnsupportedAnimal",
            },
            StrategyError::Bob(e) => match e {
                BobError::StrategyFalsified { .. } => "StrategyFalsified",
                BobError::HoleTooShallow { .. } => "HoleTooShallow",
                _ => "UnsupportedAnimal",
            },
            StrategyError::Solver(_) => "SolverError",
            StrategyError::Illegal(_) => "IllegalMove",
        }
    }
}

/// A player. One instance plays one game.
pub trait Strategy: Send {
    fn next_move(&mut self, state: &GameState, rng: &mut Rng) -> Result<Move, StrategyError>;

    /// Per-move self-check messages gathered since the last call.
    fn take_violations(&mut self) -> Vec<String> {
        Vec::new()
    }

    /// Label of the case the strategy ended up in, if it tracks one.
    fn branch(&self) -> Option<String> {
        None
    }
}

/// A registered strategy identifier such as `alice:fast-square` or
/// `bob:scripted(B 0 -6 0; B 0 3 -1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategySpec {
    AliceRandom,
    AliceGreedy,
    AliceFastSquare,
    AliceBounding,
    AliceBoundedHelly,
    AliceSolver,
    BobPairing,
    BobRandom,
    BobLocalRandom,
    BobAdjacentBlocker,
    BobSolver,
    /// Fixed Bob moves, then `bob:random`.
    BobScripted(Vec<Move>),
}

impl StrategySpec {
    pub const REGISTERED: [&'static str; 12] = [
        "alice:random",
        "alice:greedy",
        "alice:fast-square",
        "alice:bounding",
        "alice:bounded-helly",
        "alice:solver",
        "bob:pairing",
        "bob:random",
        "bob:local-random",
        "bob:adjacent-blocker",
        "bob:solver",
        "bob:scripted(...)",
    ];

    pub fn side(&self) -> Side {
        use StrategySpec::*;
        match self {
            AliceRandom | AliceGreedy | AliceFastSquare | AliceBounding | AliceBoundedHelly | AliceSolver => Side::Alice,
            _ => Side::Bob,
        }
    }

    pub fn expect_side(&self, wanted: Side) -> Result<(), StrategyError> {
        if self.side() == wanted {
            Ok(())
        } else {
            Err(StrategyError::WrongSide { id: self.to_string(), plays: self.side(), wanted })
        }
    }

    /// Instantiates the strategy for one game, rejecting animals or boards
    /// it does not handle.
    pub fn build(&self, animal: &Animal, bounds: BoardBounds) -> Result<Box<dyn Strategy>, StrategyError> {
        strategies::build(self, animal, bounds)
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use StrategySpec::*;
        let id = match self {
            AliceRandom => "alice:random",
            AliceGreedy => "alice:greedy",
            AliceFastSquare => "alice:fast-square",
            AliceBounding => "alice:bounding",
            AliceBoundedHelly => "alice:bounded-helly",
            AliceSolver => "alice:solver",
            BobPairing => "bob:pairing",
            BobRandom => "bob:random",
            BobLocalRandom => "bob:local-random",
            BobAdjacentBlocker => "bob:adjacent-blocker",
            BobSolver => "bob:solver",
            BobScripted(moves) => {
                let body: Vec<String> = moves.iter().map(Move::to_string).collect();
                return write!(f, "bob:scripted({})", body.join("; "));
            }
        };
        f.write_str(id)
    }
}

impl FromStr for StrategySpec {
    type Err = StrategyError;

    /// `bob:scripted(...)` takes `;`-separated move lines, or `@path` to take
    /// the Bob moves of a game record file.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use StrategySpec::*;
        let s = s.trim();
        if let Some(body) = s.strip_prefix("bob:scripted(").and_then(|r| r.strip_suffix(')')) {
            return parse_script(body.trim()).map(BobScripted);
        }
        Ok(match s {
            "alice:random" => AliceRandom,
            "alice:greedy" => AliceGreedy,
            "alice:fast-square" => AliceFastSquare,
            "alice:bounding" => AliceBounding,
            "alice:bounded-helly" => AliceBoundedHelly,
            "alice:solver" => AliceSolver,
            "bob:pairing" => BobPairing,
            "bob:random" => BobRandom,
            "bob:local-random" => BobLocalRandom,
            "bob:adjacent-blocker" => BobAdjacentBlocker,
            "bob:solver" => BobSolver,
            _ => return Err(StrategyError::Unknown(s.to_owned())),
        })
    }
}

fn parse_script(body: &str) -> Result<Vec<Move>, StrategyError> {
    let bad = |msg: String| StrategyError::Unknown(format!("bob:scripted: {msg}"));
    if let Some(path) = body.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{path}: {e}")))?;
        let rec = GameRecord::parse(&text).map_err(|e| bad(format!("{path}: {e}")))?;
        return Ok(rec.moves.into_iter().filter(|m| m.mover() == Side::Bob).collect());
    }
    body.split(';')
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| match l.parse::<Move>() {
            Ok(m) if m.mover() == Side::Bob => Ok(m),
            Ok(m) => Err(bad(format!("{m} is not a Bob move"))),
            Err(e) => Err(bad(e.to_string())),
        })
        .collect()
}
