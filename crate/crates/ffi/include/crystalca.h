#ifndef CRYSTALCA_H
#define CRYSTALCA_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  CCA_STATUS_OK = 0,
  CCA_STATUS_NULL_ARGUMENT = 1,
  CCA_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed label, tableau, state or content text.
   */
  CCA_STATUS_PARSE = 3,
  /**
   * The state has no well-defined image or content.
   */
  CCA_STATUS_NOT_EVOLVABLE = 4,
  /**
   * Bethe-side quantity undefined for this content.
   */
  CCA_STATUS_UNDEFINED = 5,
  /**
   * Result does not fit the output type.
   */
  CCA_STATUS_OVERFLOW = 6,
  CCA_STATUS_INTERNAL = 7,
  CCA_STATUS_PANIC = 8,
} CcaStatus;

/**
 * Shared R-table engine.
 */
typedef struct CcaEngine CcaEngine;

/**
 * A tensor product of KR crystals, bound to an engine.
 */
typedef struct CcaSpace CcaSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *cca_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void cca_string_free(char *s);

/**
 * Creates an engine. `cache_dir` may be null for an in-memory engine.
 *
 * # Safety
 * `cache_dir` must be null or a NUL-terminated string; `out` must be writable.
 */
CcaStatus cca_engine_new(const char *cache_dir, CcaEngine **out);

/**
 * # Safety
 * `engine` must be null or a handle from [`cca_engine_new`], freed once.
 * Spaces created from it remain usable.
 */
void cca_engine_free(CcaEngine *engine);

/**
 * Opens the space of A(1)n with factors `"r,l;r,l;..."`.
 *
 * # Safety
 * `engine` must be a live handle, `factors` NUL-terminated, `out` writable.
 */
CcaStatus cca_space_new(const CcaEngine *engine,
                        uintptr_t rank,
                        const char *factors,
                        CcaSpace **out);

/**
 * # Safety
 * `space` must be null or a handle from [`cca_space_new`], freed once.
 */
void cca_space_free(CcaSpace *space);

/**
 * Number of factors of the space.
 *
 * # Safety
 * `space` must be a live handle and `out` writable.
 */
CcaStatus cca_space_len(const CcaSpace *space, uintptr_t *out);

/**
 * Image of `state` under T(r,l), written as a dotted state string.
 * Returns `NotEvolvable` when the image is 0.
 *
 * # Safety
 * `space` must be a live handle, `state` NUL-terminated, `out` writable.
 */
CcaStatus cca_evolve(const CcaSpace *space,
                     const char *state,
                     uintptr_t r,
                     uintptr_t l,
                     char **out);

/**
 * Soliton content in tuple notation, e.g. `((21),(1),∅)`.
 *
 * # Safety
 * `space` must be a live handle, `state` NUL-terminated, `out` writable.
 */
CcaStatus cca_content(const CcaSpace *space, const char *state, char **out);

/**
 * Predicted period of `state` under T(r,l) and the measured one, searched
 * up to `max(cap, predicted)` steps. `measured` is 0 if the orbit did not
 * return.
 *
 * # Safety
 * `space` must be a live handle, `state` NUL-terminated, outputs writable.
 */
CcaStatus cca_period(const CcaSpace *space,
                     const char *state,
                     uintptr_t r,
                     uintptr_t l,
                     uint64_t cap,
                     uint64_t *predicted,
                     uint64_t *measured);

/**
 * Fermionic count of a content written as `"2,1/1/-"` (colors by '/',
 * rows by ',', '-' empty), as a decimal string.
 *
 * # Safety
 * `space` must be a live handle, `content` NUL-terminated, `out` writable.
 */
CcaStatus cca_omega(const CcaSpace *space, const char *content, char **out);

/**
 * Replays all published tables; writes the number of passing and failing checks.
 *
 * # Safety
 * `engine` must be a live handle and outputs writable.
 */
CcaStatus cca_verify(const CcaEngine *engine, uint32_t *passed, uint32_t *failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRYSTALCA_H */
