/* Plain C interface to the environment, for language bindings. */
#ifndef QUADSIM_C_API_H_
#define QUADSIM_C_API_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct quadsim_env quadsim_env;

#define QUADSIM_OBS_DIM 18
#define QUADSIM_ACT_DIM 4
#define QUADSIM_STATE_DIM 18 /* position, velocity, R row-major, omega */

/* config_json: {"episode": {...}, "randomization": {...}}, both optional.
 * Returns NULL on error and writes a message into err (if non-NULL). */
quadsim_env* quadsim_env_create(const char* config_json, char* err, size_t err_len);
void quadsim_env_destroy(quadsim_env* env);

/* Effective configuration as JSON; valid until the next call on env. */
const char* quadsim_env_config(quadsim_env* env);

/* Samples dynamics parameters and an initial state.  With has_seed == 0 the
 * environment continues its current random streams.  Returns 0 on success. */
int quadsim_env_reset(quadsim_env* env, int has_seed, uint64_t seed, double obs[18]);

/* reward = -cost.  terminated: aborted episode; truncated: time limit.
 * state (optional) receives the true post-step state.  Returns 0 on success. */
int quadsim_env_step(quadsim_env* env, const double action[4], double obs[18],
                     double* reward, int* terminated, int* truncated, double state[18]);

int quadsim_env_max_steps(const quadsim_env* env);

/* Message for the last failed call on env. */
const char* quadsim_env_last_error(const quadsim_env* env);

#ifdef __cplusplus
}
#endif

#endif /* QUADSIM_C_API_H_ */
