#ifndef CANNIBAL_H
#define CANNIBAL_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// 0 ongoing, 1 Alice won, 2 Bob won.
#define CANNIBAL_ONGOING 0

#define CANNIBAL_ALICE_WON 1

#define CANNIBAL_BOB_WON 2

typedef enum CannibalMoveKind {
  CANNIBAL_MOVE_KIND_ALICE = 0,
  CANNIBAL_MOVE_KIND_BOB = 1,
  CANNIBAL_MOVE_KIND_BOB_PASS = 2,
} CannibalMoveKind;

typedef enum CannibalStatus {
  CANNIBAL_STATUS_OK = 0,
  CANNIBAL_STATUS_NULL_POINTER = 1,
  CANNIBAL_STATUS_INVALID_ARGUMENT = 2,
  CANNIBAL_STATUS_CELL_OCCUPIED = 3,
  CANNIBAL_STATUS_OVERLAPS_OCCUPIED = 4,
  CANNIBAL_STATUS_OUT_OF_BOUNDS = 5,
  CANNIBAL_STATUS_NOT_YOUR_TURN = 6,
  CANNIBAL_STATUS_GAME_OVER = 7,
  CANNIBAL_STATUS_PASS_NOT_ALLOWED = 8,
  CANNIBAL_STATUS_ANIMAL_DOES_NOT_FIT = 9,
  CANNIBAL_STATUS_STRATEGY_FAILED = 10,
  // A strategy's correctness claim failed in play.
  CANNIBAL_STATUS_STRATEGY_FALSIFIED = 11,
  CANNIBAL_STATUS_BAD_RECORD = 12,
  CANNIBAL_STATUS_SOLVER_FAILED = 13,
  CANNIBAL_STATUS_PANIC = 14,
} CannibalStatus;

// Opaque game handle.
typedef struct CannibalGame CannibalGame;

// Opaque strategy handle: one strategy instance and its generator.
typedef struct CannibalStrategy CannibalStrategy;

// A move. Alice uses `x`, `y`; Bob uses `orientation` (0..8) and `x`, `y`
// as the copy's bottom-left corner.
typedef struct CannibalMove {
  enum CannibalMoveKind kind;
  int32_t x;
  int32_t y;
  uint8_t orientation;
} CannibalMove;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread; empty after a
// success. Valid until the next call on the same thread.
const char *cannibal_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void cannibal_string_free(char *s);

// New game for `animal` (e.g. `"R 3 3"`). A non-positive width or height
// means the infinite board.
//
// # Safety
// `animal` must be a NUL-terminated string and `out` a writable pointer.
enum CannibalStatus cannibal_game_new(const char *animal,
                                      int32_t width,
                                      int32_t height,
                                      struct CannibalGame **out);

// Rebuilds a game by replaying a record.
//
// # Safety
// `record` must be a NUL-terminated string and `out` a writable pointer.
enum CannibalStatus cannibal_game_from_record(const char *record, struct CannibalGame **out);

// # Safety
// `game` must come from this library and not be used afterwards.
void cannibal_game_free(struct CannibalGame *game);

// # Safety
// `game` must be a live handle; `mv` must point to a move.
enum CannibalStatus cannibal_game_play(struct CannibalGame *game, const struct CannibalMove *mv);

// # Safety
// `game` must be a live handle.
enum CannibalStatus cannibal_game_play_alice(struct CannibalGame *game, int32_t x, int32_t y);

// # Safety
// `game` must be a live handle.
enum CannibalStatus cannibal_game_play_bob(struct CannibalGame *game,
                                           uint8_t orientation,
                                           int32_t dx,
                                           int32_t dy);

// Writes [`CANNIBAL_ONGOING`], [`CANNIBAL_ALICE_WON`] or
// [`CANNIBAL_BOB_WON`].
//
// # Safety
// `game` must be a live handle and `out` writable.
enum CannibalStatus cannibal_game_status(struct CannibalGame *game, int32_t *out);

// Plies played so far, and whether Alice (1) or Bob (0) moves next.
//
// # Safety
// `game` must be a live handle; output pointers may be null.
enum CannibalStatus cannibal_game_progress(struct CannibalGame *game,
                                           uint32_t *ply,
                                           int32_t *alice_to_move);

// The game record text; free it with [`cannibal_string_free`].
//
// # Safety
// `game` must be a live handle and `out` writable.
enum CannibalStatus cannibal_game_record(struct CannibalGame *game, char **out);

// A strategy such as `"bob:pairing"` for `game`'s animal and board.
//
// # Safety
// `game` must be a live handle, `id` a NUL-terminated string and `out`
// writable.
enum CannibalStatus cannibal_strategy_new(struct CannibalGame *game,
                                          const char *id,
                                          uint64_t seed,
                                          struct CannibalStrategy **out);

// # Safety
// `strategy` must come from this library and not be used afterwards.
void cannibal_strategy_free(struct CannibalStrategy *strategy);

// Lets the strategy choose a move and plays it. The move is written to
// `out` when it is not null.
//
// # Safety
// Both handles must be live; `out` may be null.
enum CannibalStatus cannibal_strategy_play(struct CannibalStrategy *strategy,
                                           struct CannibalGame *game,
                                           struct CannibalMove *out);

// Side of Alice's bounding square for `R(n, m)`, or -1 for bad sides.
int32_t cannibal_choose_n(int32_t n, int32_t m);

// Exact solve of the empty `width × height` board. `winner` receives
// [`CANNIBAL_ALICE_WON`] or [`CANNIBAL_BOB_WON`]; `ply_to_win` the plies to
// Alice's win, or -1.
//
// # Safety
// `animal` must be a NUL-terminated string; output pointers may be null.
enum CannibalStatus cannibal_solve(const char *animal,
                                   int32_t width,
                                   int32_t height,
                                   int32_t *winner,
                                   int32_t *ply_to_win);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CANNIBAL_H */
