#ifndef CDB_CDB_H
#define CDB_CDB_H

/* C interface to the constrained de Bruijn code library. Every call returns a
 * cdb_status; on failure cdb_last_error() describes the problem for the
 * calling thread. Strings handed out through char** parameters are owned by
 * the caller and released with cdb_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CDB_API __declspec(dllexport)
#else
#define CDB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cdb_status {
  CDB_OK = 0,
  CDB_ERR_INVALID = 1,
  CDB_ERR_DOMAIN = 2,
  CDB_ERR_RESOURCE = 3,
  CDB_ERR_DECODE = 4,
  CDB_ERR_NUMERIC = 5,
  CDB_ERR_INTERNAL = 6
} cdb_status;

typedef uint16_t cdb_symbol;

/* (b, k) over an alphabet of size sigma. */
typedef struct cdb_params {
  uint32_t b;
  uint32_t k;
  uint32_t sigma;
} cdb_params;

typedef enum cdb_mode { CDB_ACYCLIC = 0, CDB_CYCLIC = 1 } cdb_mode;
typedef enum cdb_format { CDB_FORMAT_TEXT = 0, CDB_FORMAT_JSON = 1, CDB_FORMAT_CSV = 2 } cdb_format;

CDB_API const char* cdb_version(void);
/* Message for the last failed call on this thread; empty after success. */
CDB_API const char* cdb_last_error(void);
CDB_API void cdb_string_free(char* s);

/* ---- words ---- */

CDB_API cdb_status cdb_is_constrained(const cdb_params* p, const cdb_symbol* word, size_t n, cdb_mode mode,
                                      int* result);
/* Checks every word of a word file (first line "# sigma=<q>" optional).
 * Writes a JSON report {schema, b, k, mode, sigma, results: [{line, word,
 * pass}], all_pass}. */
CDB_API cdb_status cdb_verify_text(const char* text, uint32_t b, uint32_t k, cdb_mode mode, char** report_json);

/* ---- counting and capacity ---- */

/* Decimal count of constrained words of length n. */
CDB_API cdb_status cdb_count(const cdb_params* p, size_t n, char** decimal);
CDB_API cdb_status cdb_count_brute(const cdb_params* p, size_t n, char** decimal);
/* Largest eigenvalue of the constraint graph and log_sigma of it. */
CDB_API cdb_status cdb_capacity(const cdb_params* p, double tol, double* lambda, double* capacity,
                                size_t* iterations);
/* Grid over b in [b_min, b_max] and k in [k_min, k_max]; CSV or JSON. */
CDB_API cdb_status cdb_capacity_table(uint32_t sigma, uint32_t b_min, uint32_t b_max, uint32_t k_min,
                                      uint32_t k_max, double tol, cdb_format format, char** out);
/* {schema, b, k, sigma, reduced, patterns: [...]} */
CDB_API cdb_status cdb_forbidden(const cdb_params* p, int reduced, char** json);
/* Prefix automaton as JSON; state_budget 0 uses the default. */
CDB_API cdb_status cdb_automaton_json(const cdb_params* p, size_t state_budget, char** json);

/* ---- rank / unrank ---- */

typedef struct cdb_enumerator cdb_enumerator;

CDB_API cdb_status cdb_enumerator_new(const cdb_params* p, size_t n, cdb_enumerator** out);
CDB_API void cdb_enumerator_free(cdb_enumerator* e);
CDB_API cdb_status cdb_enumerator_count(const cdb_enumerator* e, char** decimal);
CDB_API cdb_status cdb_enumerator_rank(const cdb_enumerator* e, const cdb_symbol* word, size_t n, char** decimal);
/* Writes n symbols into out, which must hold cdb_enumerator_length(e). */
CDB_API cdb_status cdb_enumerator_unrank(const cdb_enumerator* e, const char* decimal, cdb_symbol* out,
                                         size_t capacity);
CDB_API size_t cdb_enumerator_length(const cdb_enumerator* e);

/* ---- finite fields and m-sequences ---- */

/* Number of primitive polynomials of degree k over F_q, by enumeration. */
CDB_API cdb_status cdb_primitive_count(uint32_t q, uint32_t k, uint64_t* count);
/* {schema, q, k, modulus, sequences: [{generator, word}]} */
CDB_API cdb_status cdb_msequences(uint32_t q, uint32_t k, char** json);
/* {schema, connection, cycles: [{length, count}]} for a connection polynomial
 * written low to high ("1,1,0,1"). */
CDB_API cdb_status cdb_lfsr_cycles(uint32_t q, const char* connection, char** json);

/* ---- Construction 1 ---- */

typedef struct cdb_construction1 cdb_construction1;

CDB_API cdb_status cdb_construction1_new(uint32_t q, uint32_t k, uint32_t ell, cdb_construction1** out);
CDB_API void cdb_construction1_free(cdb_construction1* c);
/* {schema, q, k, ell, size, block_choices, period, min_length, max_length,
 * fixed_length, constraint: {b, k, sigma}} */
CDB_API cdb_status cdb_construction1_info(const cdb_construction1* c, char** json);
/* Codeword for a decimal index below the code size. fixed != 0 pads to the
 * fixed length. *length receives the word length; out may be NULL to query. */
CDB_API cdb_status cdb_construction1_encode(const cdb_construction1* c, const char* index, int fixed,
                                            cdb_symbol* out, size_t capacity, size_t* length);

/* {schema, sigma, k, delta, seed, cycles, conflicts, size, members: [...]} */
CDB_API cdb_status cdb_independent_set(uint32_t sigma, uint32_t k, uint32_t delta, uint64_t seed,
                                       uint64_t iterations, char** json);

/* ---- channels ---- */

typedef struct cdb_simulation {
  uint64_t seed;
  size_t n;
  cdb_params params;
  cdb_mode mode;
  size_t t1;
  size_t trials;
  double sticky_probability;
  size_t m; /* racetrack segments */
} cdb_simulation;

CDB_API void cdb_simulation_defaults(cdb_simulation* s);
CDB_API cdb_status cdb_simulate_lsymbol(const cdb_simulation* s, char** manifest_json);
CDB_API cdb_status cdb_simulate_racetrack(const cdb_simulation* s, char** manifest_json);

/* reads holds count reads of length k + b - 2, back to back. Writes the
 * recovered word (n symbols) into out. pad < 0 means unknown. */
CDB_API cdb_status cdb_decode_lsymbol(const cdb_params* p, const cdb_symbol* reads, size_t count, size_t n,
                                      cdb_mode mode, int pad, cdb_symbol* out, size_t capacity);

typedef enum cdb_rate_regime { CDB_RATE_DELETIONS = 0, CDB_RATE_STICKY = 1, CDB_RATE_EXTRA_HEADS = 2 } cdb_rate_regime;

CDB_API cdb_status cdb_rate_bound(cdb_rate_regime regime, double delta, double epsilon, uint32_t b, double q,
                                  size_t m, double db_rate, double* rate);

#ifdef __cplusplus
}
#endif

#endif
