#ifndef DNALEX_H
#define DNALEX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DnalexStatus {
  DNALEX_STATUS_OK = 0,
  DNALEX_STATUS_NULL_POINTER = 1,
  DNALEX_STATUS_INVALID_UTF8 = 2,
  DNALEX_STATUS_INVALID_ARGUMENT = 3,
  DNALEX_STATUS_NON_MULTIPLICATIVE = 4,
  DNALEX_STATUS_OUT_OF_RANGE = 5,
  DNALEX_STATUS_PANIC = 6,
} DnalexStatus;

// Opaque handle to a constructed code.
typedef struct DnalexCode DnalexCode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer is
// valid until the next call into the library on this thread.
const char *dnalex_last_error(void);

// # Safety
// `s` must come from this library and not have been freed.
void dnalex_string_free(char *s);

// Edit distance between two strands. `cost_model` may be NULL for unit
// costs, otherwise it holds the text of a cost file.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum DnalexStatus dnalex_edit_distance(const char *s,
                                       const char *t,
                                       const char *cost_model,
                                       double *out);

// Hamming distance between two strands of equal length.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum DnalexStatus dnalex_hamming_distance(const char *s, const char *t, size_t *out);

// Maps a Z4 digit string to its strand. Free the result with
// [`dnalex_string_free`].
//
// # Safety
// `word` must be NUL-terminated; `out` must be writable.
enum DnalexStatus dnalex_phi(const char *word, char **out);

// Maps a strand to its Z4 digit string. Free the result with
// [`dnalex_string_free`].
//
// # Safety
// `strand` must be NUL-terminated; `out` must be writable.
enum DnalexStatus dnalex_phi_inv(const char *strand, char **out);

// Builds the lexicode of length `n` over the canonical basis. `mode` is
// `"full-check"`, `"as-written"`, or NULL for full-check.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable. The
// handle must be released with [`dnalex_code_free`].
enum DnalexStatus dnalex_code_build(size_t n,
                                    const char *property,
                                    const char *mode,
                                    struct DnalexCode **out);

// Number of codewords, or 0 for a NULL handle.
//
// # Safety
// `code` must be NULL or a live handle.
size_t dnalex_code_size(const struct DnalexCode *code);

// Word length, or 0 for a NULL handle.
//
// # Safety
// `code` must be NULL or a live handle.
size_t dnalex_code_length(const struct DnalexCode *code);

// Minimum Hamming weight over nonzero codewords; 0 if the code is `{0}`.
//
// # Safety
// `code` must be NULL or a live handle.
size_t dnalex_code_min_distance(const struct DnalexCode *code);

// Codeword `index` in construction order, as a strand (`as_dna`) or as
// Z4 digits. Free the result with [`dnalex_string_free`].
//
// # Safety
// `code` must be a live handle; `out` must be writable.
enum DnalexStatus dnalex_code_word(const struct DnalexCode *code,
                                   size_t index,
                                   bool as_dna,
                                   char **out);

// # Safety
// `code` must be NULL or a handle from [`dnalex_code_build`] that has not
// been freed.
void dnalex_code_free(struct DnalexCode *code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DNALEX_H */
