//! C interface to the game engine, strategies and solver.
//!
//! Games and strategies are opaque handles created by `*_new` functions and
//! released by the matching `*_free`. Every fallible call returns a
//! [`CannibalStatus`]; the message for the most recent failure on the
//! calling thread is available from [`cannibal_last_error`]. Strings handed
//! out by the library are freed with [`cannibal_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cannibal::animal::{Animal, Cell, D4Element, Placement};
use cannibal::engine::{decode_record, encode_record, BoardBounds, EngineError, GameState, Move, Side, Status};
use cannibal::harness::{seeded_rng, Rng, Strategy, StrategySpec};
use cannibal::solver::{SolveConfig, Solver};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CannibalStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    CellOccupied = 3,
    OverlapsOccupied = 4,
    OutOfBounds = 5,
    NotYourTurn = 6,
    GameOver = 7,
    PassNotAllowed = 8,
    AnimalDoesNotFit = 9,
    StrategyFailed = 10,
    /// A strategy's correctness claim failed in play.
    StrategyFalsified = 11,
    BadRecord = 12,
    SolverFailed = 13,
    Panic = 14,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CannibalMoveKind {
    Alice = 0,
    Bob = 1,
    BobPass = 2,
}

/// A move. Alice uses `x`, `y`; Bob uses `orientation` (0..8) and `x`, `y`
/// as the copy's bottom-left corner.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CannibalMove {
    pub kind: CannibalMoveKind,
    pub x: i32,
    pub y: i32,
    pub orientation: u8,
}

impl From<Move> for CannibalMove {
    fn from(m: Move) -> Self {
        match m {
            Move::Alice(c) => CannibalMove { kind: CannibalMoveKind::Alice, x: c.x, y: c.y, orientation: 0 },
            Move::Bob(p) => {
                CannibalMove { kind: CannibalMoveKind::Bob, x: p.offset.x, y: p.offset.y, orientation: p.orientation.index() }
            }
            Move::BobPass => CannibalMove { kind: CannibalMoveKind::BobPass, x: 0, y: 0, orientation: 0 },
        }
    }
}

/// 0 ongoing, 1 Alice won, 2 Bob won.
pub const CANNIBAL_ONGOING: i32 = 0;
pub const CANNIBAL_ALICE_WON: i32 = 1;
pub const CANNIBAL_BOB_WON: i32 = 2;

/// Opaque game handle.
pub struct CannibalGame {
    state: GameState,
}

/// Opaque strategy handle: one strategy instance and its generator.
pub struct CannibalStrategy {
    strategy: Box<dyn Strategy>,
    rng: Rng,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: CannibalStatus, msg: impl Into<String>) -> CannibalStatus {
    set_error(msg);
    status
}

fn engine_status(e: &EngineError) -> CannibalStatus {
    let s = match e {
        EngineError::CellOccupied(_) => CannibalStatus::CellOccupied,
        EngineError::OverlapsOccupied(_) => CannibalStatus::OverlapsOccupied,
        EngineError::OutOfBounds(_) => CannibalStatus::OutOfBounds,
        EngineError::NotYourTurn(_) => CannibalStatus::NotYourTurn,
        EngineError::GameOver(_) => CannibalStatus::GameOver,
        EngineError::PassNotAllowed => CannibalStatus::PassNotAllowed,
        EngineError::AnimalDoesNotFit => CannibalStatus::AnimalDoesNotFit,
    };
    fail(s, e.to_string())
}

/// Runs `f`, turning panics into [`CannibalStatus::Panic`].
fn guard(f: impl FnOnce() -> CannibalStatus) -> CannibalStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == CannibalStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(CannibalStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, CannibalStatus> {
    if p.is_null() {
        return Err(fail(CannibalStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(CannibalStatus::InvalidArgument, "string is not UTF-8"))
}

fn bounds_of(width: i32, height: i32) -> BoardBounds {
    if width <= 0 || height <= 0 {
        BoardBounds::Infinite
    } else {
        BoardBounds::board(width, height)
    }
}

fn give_string(s: String, out: *mut *mut c_char) -> CannibalStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            CannibalStatus::Ok
        }
        Err(_) => fail(CannibalStatus::InvalidArgument, "string holds a NUL byte"),
    }
}

/// Message describing the last failure on this thread; empty after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cannibal_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cannibal_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// New game for `animal` (e.g. `"R 3 3"`). A non-positive width or height
/// means the infinite board.
///
/// # Safety
/// `animal` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cannibal_game_new(
    animal: *const c_char,
    width: i32,
    height: i32,
    out: *mut *mut CannibalGame,
) -> CannibalStatus {
    guard(|| {
        if out.is_null() {
            return fail(CannibalStatus::NullPointer, "null output pointer");
        }
        let desc = match read_str(animal) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let animal = match Animal::parse(desc) {
            Ok(a) => a,
            Err(e) => return fail(CannibalStatus::InvalidArgument, e.to_string()),
        };
        match GameState::new(animal, bounds_of(width, height)) {
            Ok(state) => {
                *out = Box::into_raw(Box::new(CannibalGame { state }));
                CannibalStatus::Ok
            }
            Err(e) => engine_status(&e),
        }
    })
}

/// Rebuilds a game by replaying a record.
///
/// # Safety
/// `record` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cannibal_game_from_record(record: *const c_char, out: *mut *mut CannibalGame) -> CannibalStatus {
    guard(|| {
        if out.is_null() {
            return fail(CannibalStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(record) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match decode_record(text) {
            Ok(state) => {
                *out = Box::into_raw(Box::new(CannibalGame { state }));
                CannibalStatus::Ok
            }
            Err(e) => fail(CannibalStatus::BadRecord, e.to_string()),
        }
    })
}

/// # Safety
/// `game` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cannibal_game_free(game: *mut CannibalGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

unsafe fn with_game(game: *mut CannibalGame, f: impl FnOnce(&mut GameState) -> CannibalStatus) -> CannibalStatus {
    guard(|| match game.as_mut() {
        Some(g) => f(&mut g.state),
        None => fail(CannibalStatus::NullPointer, "null game"),
    })
}

fn apply(state: &mut GameState, mv: Move) -> CannibalStatus {
    match state.apply(mv) {
        Ok(()) => CannibalStatus::Ok,
        Err(e) => engine_status(&e),
    }
}

fn to_move(m: &CannibalMove) -> Result<Move, CannibalStatus> {
    Ok(match m.kind {
        CannibalMoveKind::Alice => Move::Alice(Cell::new(m.x, m.y)),
        CannibalMoveKind::Bob => {
            let o = D4Element::new(m.orientation)
                .ok_or_else(|| fail(CannibalStatus::InvalidArgument, "orientation must be in 0..8"))?;
            Move::Bob(Placement::new(o, m.x, m.y))
        }
        CannibalMoveKind::BobPass => Move::BobPass,
    })
}

/// # Safety
/// `game` must be a live handle; `mv` must point to a move.
#[no_mangle]
pub unsafe extern "C" fn cannibal_game_play(game: *mut CannibalGame, mv: *const CannibalMove) -> CannibalStatus {
    with_game(game, |state| match mv.as_ref() {
        None => fail(CannibalStatus::NullPointer, "null move"),
        Some(m) => match to_move(m) {
            Ok(m) => apply(state, m),
            Err(s) => s,
        },
    })
}

/// # Safety
/// `game` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cannibal_game_play_alice(game: *mut CannibalGame, x: i32, y: i32) -> CannibalStatus {
    with_game(game, |state| apply(state, Move::Alice(Cell::new(x, y))))
}

/// # Safety
/// `game` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cannibal_game_play_bob(game: *mut CannibalGame, orientation: u8, dx: i32, dy: i32) -> CannibalStatus {
    with_game(game, |state| match D4Element::new(orientation) {
        Some(o) => apply(state, Move::Bob(Placement::new(o, dx, dy))),
        None => fail(CannibalStatus::InvalidArgument, "orientation must be in 0..8"),
    })
}

/// Writes [`CANNIBAL_ONGOING`], [`CANNIBAL_ALICE_WON`] or
/// [`CANNIBAL_BOB_WON`].
///
/// # Safety
/// `game` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cannibal_game_status(game: *mut CannibalGame, out: *mut i32) -> CannibalStatus {
    with_game(game, |state| {
        if out.is_null() {
            return fail(CannibalStatus::NullPointer, "null output pointer");
        }
        *out = match state.status() {
            Status::Ongoing => CANNIBAL_ONGOING,
            Status::AliceWon => CANNIBAL_ALICE_WON,
            Status::BobWon(_) => CANNIBAL_BOB_WON,
        };
        CannibalStatus::Ok
    })
}

/// Plies played so far, and whether Alice (1) or Bob (0) moves next.
///
/// # Safety
/// `game` must be a live handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn cannibal_game_progress(game: *mut CannibalGame, ply: *mut u32, alice_to_move: *mut i32) -> CannibalStatus {
    with_game(game, |state| {
        if let Some(p) = ply.as_mut() {
            *p = state.ply() as u32;
        }
        if let Some(a) = alice_to_move.as_mut() {
            *a = i32::from(state.to_move() == Side::Alice);
        }
        CannibalStatus::Ok
    })
}

/// The game record text; free it with [`cannibal_string_free`].
///
/// # Safety
/// `game` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cannibal_game_record(game: *mut CannibalGame, out: *mut *mut c_char) -> CannibalStatus {
    with_game(game, |state| {
        if out.is_null() {
            return fail(CannibalStatus::NullPointer, "null output pointer");
        }
        give_string(encode_record(state, None), out)
    })
}

/// A strategy such as `"bob:pairing"` for `game`'s animal and board.
///
/// # Safety
/// `game` must be a live handle, `id` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cannibal_strategy_new(
    game: *mut CannibalGame,
    id: *const c_char,
    seed: u64,
    out: *mut *mut CannibalStrategy,
) -> CannibalStatus {
    with_game(game, |state| {
        if out.is_null() {
            return fail(CannibalStatus::NullPointer, "null output pointer");
        }
        let id = match read_str(id) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let spec: StrategySpec = match id.parse() {
            Ok(s) => s,
            Err(e) => return fail(CannibalStatus::InvalidArgument, format!("{e}")),
        };
        match spec.build(state.animal(), state.bounds()) {
            Ok(strategy) => {
                *out = Box::into_raw(Box::new(CannibalStrategy { strategy, rng: seeded_rng(seed) }));
                CannibalStatus::Ok
            }
            Err(e) => fail(CannibalStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `strategy` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cannibal_strategy_free(strategy: *mut CannibalStrategy) {
    if !strategy.is_null() {
        drop(Box::from_raw(strategy));
    }
}

/// Lets the strategy choose a move and plays it. The move is written to
/// `out` when it is not null.
///
/// # Safety
/// Both handles must be live; `out` may be null.
#[no_mangle]
pub unsafe extern "C" fn cannibal_strategy_play(
    strategy: *mut CannibalStrategy,
    game: *mut CannibalGame,
    out: *mut CannibalMove,
) -> CannibalStatus {
    let Some(s) = strategy.as_mut() else {
        return fail(CannibalStatus::NullPointer, "null strategy");
    };
    with_game(game, |state| {
        let mv = match s.strategy.next_move(state, &mut s.rng) {
            Ok(mv) => mv,
            Err(e) if e.is_falsification() => return fail(CannibalStatus::StrategyFalsified, e.to_string()),
            Err(e) => return fail(CannibalStatus::StrategyFailed, e.to_string()),
        };
        let status = apply(state, mv);
        if status == CannibalStatus::Ok {
            if let Some(o) = out.as_mut() {
                *o = mv.into();
            }
        }
        status
    })
}

/// Side of Alice's bounding square for `R(n, m)`, or -1 for bad sides.
#[no_mangle]
pub extern "C" fn cannibal_choose_n(n: i32, m: i32) -> i32 {
    if n < 1 || m < 1 {
        return -1;
    }
    cannibal::alice::choose_n(n, m)
}

/// Exact solve of the empty `width × height` board. `winner` receives
/// [`CANNIBAL_ALICE_WON`] or [`CANNIBAL_BOB_WON`]; `ply_to_win` the plies to
/// Alice's win, or -1.
///
/// # Safety
/// `animal` must be a NUL-terminated string; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn cannibal_solve(
    animal: *const c_char,
    width: i32,
    height: i32,
    winner: *mut i32,
    ply_to_win: *mut i32,
) -> CannibalStatus {
    guard(|| {
        let desc = match read_str(animal) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let animal = match Animal::parse(desc) {
            Ok(a) => a,
            Err(e) => return fail(CannibalStatus::InvalidArgument, e.to_string()),
        };
        let Some(board) = bounds_of(width, height).rect() else {
            return fail(CannibalStatus::InvalidArgument, "the solver needs a bounded board");
        };
        let out = match Solver::new(SolveConfig::new(animal, board)).and_then(|s| s.solve()) {
            Ok(o) => o,
            Err(e) => return fail(CannibalStatus::SolverFailed, e.to_string()),
        };
        if let Some(w) = winner.as_mut() {
            *w = if out.winner == Side::Alice { CANNIBAL_ALICE_WON } else { CANNIBAL_BOB_WON };
        }
        if let Some(p) = ply_to_win.as_mut() {
            *p = out.ply_to_win.map_or(-1, |p| p as i32);
        }
        CannibalStatus::Ok
    })
}
