/* C interface to the gpoisson library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible call returns a gp_status; on failure gp_last_error()
 * holds a message for the calling thread. Strings returned through char**
 * out-parameters are owned by the caller and released with gp_string_free.
 * Indices are 0-based.
 */
#ifndef GP_GP_H
#define GP_GP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GP_BUILDING_LIBRARY)
#    define GP_API __declspec(dllexport)
#  else
#    define GP_API __declspec(dllimport)
#  endif
#else
#  define GP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gp_status {
  GP_OK = 0,
  GP_ERR_ANTISYMMETRY = 1,
  GP_ERR_JACOBI = 2,
  GP_ERR_DIMENSION_MISMATCH = 3,
  GP_ERR_SINGULAR_KILLING_FORM = 4,
  GP_ERR_NO_MATRIX_BASIS = 5,
  GP_ERR_BASIS_GRAM_SINGULAR = 6,
  GP_ERR_NON_FINITE = 7,
  GP_ERR_UNRESOLVABLE_FRAME_FIELD = 8,
  GP_ERR_OFF_ORBIT = 9,
  GP_ERR_WEYL_WALL = 10,
  GP_ERR_UNSUPPORTED_ALGEBRA = 11,
  GP_ERR_NOT_ABELIAN = 12,
  GP_ERR_EMPTY_TRAJECTORY = 13,
  GP_ERR_CONFIG_PARSE = 14,
  GP_ERR_EXPRESSION_PARSE = 15,
  GP_ERR_INVALID_ARGUMENT = 16,
  GP_ERR_IO = 17,
  GP_ERR_INTERNAL = 99
} gp_status;

/* Process exit classes used by the command-line front end. */
enum { GP_EXIT_OK = 0, GP_EXIT_CHECK_FAILED = 1, GP_EXIT_CONFIG = 2, GP_EXIT_NUMERICAL = 3 };

typedef struct gp_algebra gp_algebra;
typedef struct gp_config gp_config;
typedef struct gp_trajectory gp_trajectory;

GP_API const char* gp_version(void);
GP_API const char* gp_status_name(gp_status status);
/* Message of the last failed call on this thread ("" if none). */
GP_API const char* gp_last_error(void);
/* Exit class for a status (GP_EXIT_*). */
GP_API int gp_exit_code(gp_status status);
GP_API void gp_string_free(char* s);

/* ---- algebra ---- */

/* spec: a built-in name (u1, so3, su2, su3) or JSON text. */
GP_API gp_status gp_algebra_load(const char* spec, gp_algebra** out);
GP_API void gp_algebra_free(gp_algebra* a);
GP_API int gp_algebra_dim(const gp_algebra* a);
/* c^k_ij */
GP_API gp_status gp_algebra_structure_constant(const gp_algebra* a, int k, int i, int j, double* out);
GP_API gp_status gp_algebra_bracket(const gp_algebra* a, const double* X, const double* Y, double* out);
GP_API gp_status gp_algebra_ad_star(const gp_algebra* a, const double* X, const double* xi, double* out);
/* dim*dim row-major */
GP_API gp_status gp_algebra_killing_form(const gp_algebra* a, double* out);
GP_API gp_status gp_algebra_casimir(const gp_algebra* a, const double* xi, double* out);
GP_API gp_status gp_algebra_jacobi_defect(const gp_algebra* a, double* out);
/* Lie-Poisson bracket of two expressions in x1..xn at x. */
GP_API gp_status gp_lie_poisson_bracket(const gp_algebra* a, const char* f, const char* g, const double* x, double* out);

/* ---- run configuration ---- */

GP_API gp_status gp_config_default(gp_config** out);
GP_API gp_status gp_config_load(const char* path, gp_config** out);
GP_API gp_status gp_config_parse(const char* json_text, gp_config** out);
GP_API void gp_config_free(gp_config* c);
GP_API gp_status gp_config_set_seed(gp_config* c, uint64_t seed);
GP_API gp_status gp_config_set_output_dir(gp_config* c, const char* dir);
/* Same forms as gp_algebra_load. */
GP_API gp_status gp_config_set_algebra(gp_config* c, const char* spec);

/* ---- commands ----
 * exit_code receives the GP_EXIT_* class of the outcome. report (JSON) and
 * summary (human text) may be NULL when not wanted. A command that ran to
 * completion returns GP_OK even when its checks failed. */
GP_API gp_status gp_verify(const gp_config* c, int* exit_code, char** report, char** summary);
GP_API gp_status gp_reduce(const gp_config* c, int* exit_code, char** report, char** summary);
GP_API gp_status gp_simulate(const gp_config* c, int* exit_code, char** report, char** summary);
GP_API gp_status gp_root_system(const gp_config* c, int* exit_code, char** report, char** summary);
/* engine: lie_poisson, orbit, tstar, gauged, cartan, cartan_gauged. */
GP_API gp_status gp_bracket(const gp_config* c, const char* engine, const char* f, const char* g,
                            const char* point_json, double* out);

/* ---- dynamics ---- */

/* Wong field of the configured algebra and potential; q, p have the base
 * dimension, I the algebra dimension. */
GP_API gp_status gp_wong_field(const gp_config* c, const double* q, const double* p, const double* I, double* dq,
                               double* dp, double* dI);
GP_API gp_status gp_trajectory_integrate(const gp_config* c, gp_trajectory** out);
GP_API gp_status gp_trajectory_read_csv(const char* path, gp_trajectory** out);
GP_API gp_status gp_trajectory_write_csv(const gp_trajectory* t, const char* path);
GP_API void gp_trajectory_free(gp_trajectory* t);
GP_API size_t gp_trajectory_size(const gp_trajectory* t);
GP_API int gp_trajectory_blew_up(const gp_trajectory* t);
GP_API int gp_trajectory_base_dim(const gp_trajectory* t);
GP_API int gp_trajectory_charge_dim(const gp_trajectory* t);
/* Any output pointer may be NULL. */
GP_API gp_status gp_trajectory_sample(const gp_trajectory* t, size_t i, double* time, double* q, double* p, double* I,
                                      double* energy, double* casimir);

#ifdef __cplusplus
}
#endif

#endif /* GP_GP_H */
