/* C ABI for the cla-core continuous-logic library.
 *
 * Conventions:
 *   - Every fallible call returns a cla_status; on failure a description is
 *     available from cla_last_error() until the next library call on the
 *     same thread.
 *   - Handles are created by *_new / *_parse / *_sample and released with
 *     the matching *_free. Freeing NULL is a no-op. Handles are not
 *     reference-counted; do not free twice.
 *   - char* values returned by the library are owned by the caller and
 *     released with cla_string_free(). The pointers returned by
 *     cla_last_error() and cla_version() are borrowed and must not be freed.
 *   - Assignments and probability patterns bind a formula's free variables
 *     in variable-name order, 0-based elements.
 *   - All functions may be called from any thread; handles are immutable
 *     after creation and safe to share across threads.
 */

#ifndef CLA_H
#define CLA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cla_status {
  CLA_OK = 0,
  /* Validation or configuration failure (bad JSON, unknown relation,
   * arity mismatch, out-of-range argument, null pointer). */
  CLA_ERR_INVALID = 2,
  /* Numeric or runtime failure, including aggregation over an empty
   * index set. */
  CLA_ERR_NUMERIC = 3,
  /* An internal invariant was violated. State is unchanged. */
  CLA_ERR_PANIC = 4,
} cla_status;

/* A signature plus one density per relation/identity-pattern cell. */
typedef struct cla_model cla_model;
/* A parsed formula. */
typedef struct cla_formula cla_formula;
/* A sampled continuous structure: one [0,1] value per relation tuple. */
typedef struct cla_structure cla_structure;
/* A formula compiled for repeated evaluation. */
typedef struct cla_evaluator cla_evaluator;

/* Last error message on this thread, or NULL. Borrowed pointer; valid
 * until the next library call on the same thread. */
const char *cla_last_error(void);

/* Library version, e.g. "0.1.0". Static; do not free. */
const char *cla_version(void);

/* ---- models ---------------------------------------------------------- */

/* signature_json: {"relations":[{"name":"E","arity":2}, ...]}
 * model_json:     {"densities":[{"relation":"E","pattern":[[1,2]],
 *                  "density":{...}}, ...]} or NULL for the all-uniform
 *                  model. Cells without an entry fall back to uniform. */
cla_status cla_model_new(const char *signature_json, const char *model_json,
                         cla_model **out);
void cla_model_free(cla_model *model);

/* ---- formulas -------------------------------------------------------- */

/* Text like "min2(R(x), am{y}(E(x, y)))". Relation symbols must exist in
 * the model's signature with matching arities. */
cla_status cla_formula_parse(const cla_model *model, const char *formula_text,
                             cla_formula **out);
void cla_formula_free(cla_formula *formula);

/* Canonical text of the formula. Caller owns the string (release with
 * cla_string_free); NULL if the handle is NULL. */
char *cla_formula_display(const cla_formula *formula);

/* 1 if the formula has no aggregation or quantifier, 0 if it has one,
 * -1 if the handle is NULL. */
int cla_formula_is_aggregation_free(const cla_formula *formula);

void cla_string_free(char *s);

/* ---- structures ------------------------------------------------------ */

/* Draws the structure with the given index from the deterministic family
 * identified by (model, n, seed). Same arguments, same structure. */
cla_status cla_structure_sample(const cla_model *model, size_t n,
                                uint64_t seed, uint64_t index,
                                cla_structure **out);
void cla_structure_free(cla_structure *structure);

/* Domain size; 0 if the handle is NULL. */
size_t cla_structure_size(const cla_structure *structure);

/* Reads the value of one relation cell. tuple holds tuple_len elements in
 * 0..n-1; tuple_len must equal the relation's arity. */
cla_status cla_structure_value(const cla_model *model,
                               const cla_structure *structure,
                               const char *relation, const size_t *tuple,
                               size_t tuple_len, double *out);

/* ---- evaluation ------------------------------------------------------ */

/* Compiles the formula over its free variables in name order. */
cla_status cla_evaluator_new(const cla_model *model,
                             const cla_formula *formula,
                             cla_evaluator **out);
void cla_evaluator_free(cla_evaluator *evaluator);

/* Number of assignment slots the evaluator expects; 0 on NULL. */
size_t cla_evaluator_arity(const cla_evaluator *evaluator);

/* Value of the formula on the structure at the assignment (one 0-based
 * element per free variable, in name order). Aggregating over an empty
 * index set yields CLA_ERR_NUMERIC. */
cla_status cla_evaluator_eval(const cla_evaluator *evaluator,
                              const cla_structure *structure,
                              const size_t *assignment, size_t len,
                              double *out);

/* ---- probabilities and limits ---------------------------------------- */

/* P(value in [lo, hi]) for an aggregation-free formula at a tuple with the
 * given identity pattern; the answer does not depend on the domain size.
 *
 * pattern_json is a 1-based block list over the free variables in name
 * order, e.g. "[[1,2],[3]]" to identify the first two; NULL means all
 * distinct. use_monte_carlo == 0 selects midpoint quadrature with `budget`
 * cells per axis; nonzero selects Monte Carlo with `budget` samples.
 * out_half_width receives an error bound: |alpha - truth| <= half_width
 * for quadrature, and a 99%-confidence Hoeffding radius for Monte Carlo. */
cla_status cla_prob_in_interval(const cla_model *model,
                                const cla_formula *formula,
                                const char *pattern_json, double lo, double hi,
                                int use_monte_carlo, size_t budget,
                                uint64_t seed, double *out_alpha,
                                double *out_half_width);

/* Replaces every aggregation (innermost first) by its deterministic limit
 * and expands quantifiers, producing an aggregation-free formula that the
 * originals converge to on large sampled structures.
 *
 * pattern_json: as in cla_prob_in_interval, over the free variables of
 * `formula` in name order; NULL means all distinct.
 * grid_nodes: nodes per axis of tabulated limit connectives (>= 2).
 * quad_cells / mc_samples / support_resolution: budgets for the numeric
 * estimates behind each limit.
 * out_value_error: bound on the absolute error of the constructed limits,
 * accumulated through enclosing connectives. */
cla_status cla_eliminate(const cla_model *model, const cla_formula *formula,
                         const char *pattern_json, size_t grid_nodes,
                         size_t quad_cells, size_t mc_samples,
                         size_t support_resolution, uint64_t seed,
                         cla_formula **out_formula, double *out_value_error);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CLA_H */
