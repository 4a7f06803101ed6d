/* C interface to the bubblebs pricing library.
 *
 * All entry points return a bbs_status; out-parameters are written only on
 * BBS_OK. Handles are opaque and owned by the caller via the matching
 * _destroy call. bbs_last_error() returns a thread-local message for the
 * most recent failure on the calling thread.
 */
#ifndef BUBBLEBS_BUBBLEBS_H
#define BUBBLEBS_BUBBLEBS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bbs_status {
  BBS_OK = 0,
  BBS_ERR_INVALID_ARGUMENT = 1,
  BBS_ERR_SINGULAR_BUBBLE = 2,
  BBS_ERR_ZERO_BUBBLE = 3,
  BBS_ERR_OUT_OF_HORIZON = 4,
  BBS_ERR_ORDER_TOO_HIGH = 5,
  BBS_ERR_OVERFLOW = 6,
  BBS_ERR_RANGE = 7,
  BBS_ERR_GRID_TOO_COARSE = 8,
  BBS_ERR_STIFF_REGIME = 9,
  BBS_ERR_OUT_OF_GRID = 10,
  BBS_ERR_BUFFER_TOO_SMALL = 11,
  BBS_ERR_INTERNAL = 99
} bbs_status;

typedef enum bbs_method {
  BBS_METHOD_PERTURB3 = 0,
  BBS_METHOD_EXACT = 1,
  BBS_METHOD_TRUNC3 = 2,
  BBS_METHOD_DUAL_EXACT = 3,
  BBS_METHOD_DUAL_TRUNC3 = 4
} bbs_method;

typedef enum bbs_regime {
  BBS_REGIME_PRE_BUBBLE = 0,
  BBS_REGIME_IN_BUBBLE = 1,
  BBS_REGIME_POST_BUBBLE = 2
} bbs_regime;

typedef enum bbs_rate_basis {
  BBS_RATE_INTEREST = 0,
  BBS_RATE_DRIFT = 1
} bbs_rate_basis;

typedef enum bbs_pde_form {
  BBS_PDE_LOW_ENERGY = 0,
  BBS_PDE_HIGH_ENERGY = 1
} bbs_pde_form;

typedef struct bbs_model bbs_model;
typedef struct bbs_quote bbs_quote;
typedef struct bbs_grid bbs_grid;

/* Static description of a status code. */
const char* bbs_status_message(bbs_status status);
/* Thread-local detail for the last failing call on this thread. */
const char* bbs_last_error(void);

/* ------------------------------------------------------------------ */
/* Model: market parameters plus the square bubble.                    */
/* ------------------------------------------------------------------ */

bbs_status bbs_model_create(double r, double alpha, double sigma,
                            double strike, double maturity, double f0,
                            double tau1, double tau2, bbs_model** out);
void bbs_model_destroy(bbs_model* model);

/* Cap on derivative / series orders (default 16, hard limit 32). */
bbs_status bbs_model_set_max_order(bbs_model* model, int max_order);
int bbs_model_max_order(const bbs_model* model);

/* v0, v0*, h = f0/sigma, h* = sigma/f0 (h* is +inf when f0 = 0). */
bbs_status bbs_model_potential(const bbs_model* model, double* v0,
                               double* v0_star, double* h, double* h_star);
bbs_status bbs_model_regime(const bbs_model* model, double tau,
                            bbs_regime* out);
bbs_status bbs_model_interaction_clock(const bbs_model* model, double tau,
                                       double* out);
/* r <-> alpha swapped, bubble re-expressed through h* = sigma/f0. */
bbs_status bbs_model_dual(const bbs_model* model, bbs_model** out);

/* ------------------------------------------------------------------ */
/* Closed-form call and its S-derivatives.                             */
/* ------------------------------------------------------------------ */

bbs_status bbs_call_price(const bbs_model* model, double spot, double tau,
                          bbs_rate_basis basis, double* out);
bbs_status bbs_call_derivative(const bbs_model* model, int order, double spot,
                               double tau, bbs_rate_basis basis, double* out);

/* ------------------------------------------------------------------ */
/* Series pricing.                                                     */
/* ------------------------------------------------------------------ */

bbs_status bbs_price(const bbs_model* model, double spot, double tau,
                     bbs_method method, int n_max, bbs_quote** out);
double bbs_quote_value(const bbs_quote* quote);
bbs_regime bbs_quote_regime(const bbs_quote* quote);
bbs_method bbs_quote_method(const bbs_quote* quote);
bbs_rate_basis bbs_quote_rate_basis(const bbs_quote* quote);
double bbs_quote_interaction_x(const bbs_quote* quote);
int bbs_quote_num_terms(const bbs_quote* quote);
bbs_status bbs_quote_term(const bbs_quote* quote, int index, int* order,
                          double* weight, double* contribution);
void bbs_quote_destroy(bbs_quote* quote);

/* ------------------------------------------------------------------ */
/* Finite-difference oracle.                                           */
/* ------------------------------------------------------------------ */

bbs_status bbs_pde_solve(const bbs_model* model, double s_min, double s_max,
                         int n_s, int n_tau, bbs_pde_form form, int log_space,
                         bbs_grid** out);
bbs_status bbs_pde_sample(const bbs_grid* grid, double spot, double tau,
                          double* out);
int bbs_grid_num_s(const bbs_grid* grid);
int bbs_grid_num_tau(const bbs_grid* grid);
bbs_status bbs_grid_node(const bbs_grid* grid, int i_tau, int i_s, double* s,
                         double* tau, double* value);
void bbs_grid_destroy(bbs_grid* grid);

/* ------------------------------------------------------------------ */
/* Euler-operator coefficient triangle (exact integers as text).       */
/* ------------------------------------------------------------------ */

bbs_status bbs_triangle_entry(int n, int m, char* buffer, size_t length);
/* Space-separated row, e.g. n = 6 -> "1 31 90 65 15 1". */
bbs_status bbs_triangle_row(int n, char* buffer, size_t length);

#ifdef __cplusplus
}
#endif

#endif /* BUBBLEBS_BUBBLEBS_H */
