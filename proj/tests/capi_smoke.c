/* Copyright 2026 The ef-lab Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ============================================================================= */

/* Compiles the public header as C and drives a short EF run. */
#include <stdio.h>

#include "eflab/eflab.h"

int main(void) {
  eflab_oracle* oracle = NULL;
  eflab_optimizer* opt = NULL;
  double x[2] = {1.0, 1.0};
  double g[2];
  double f = 0.0;
  int t;

  if (eflab_oracle_create("ce3", 0.5, 0, 0, 0, &oracle) != EFLAB_OK) goto fail;
  if (eflab_optimizer_create("ec_sgd", "sign_scaled", 0.01, 0.0, NULL, x, 2, 1, &opt) !=
      EFLAB_OK) {
    goto fail;
  }
  for (t = 0; t < 2000; ++t) {
    if (eflab_optimizer_get(opt, x, NULL, NULL, 2, NULL) != EFLAB_OK) goto fail;
    if (eflab_oracle_sample(oracle, x, 2, g) != EFLAB_OK) goto fail;
    if (eflab_optimizer_step(opt, g, 2) != EFLAB_OK) goto fail;
  }
  eflab_optimizer_get(opt, x, NULL, NULL, 2, NULL);
  eflab_oracle_loss(oracle, x, 2, &f);
  eflab_optimizer_destroy(opt);
  eflab_oracle_destroy(oracle);
  printf("final f = %g\n", f);
  return f < 0.01 ? 0 : 1;

fail:
  fprintf(stderr, "error: %s\n", eflab_last_error());
  eflab_optimizer_destroy(opt);
  eflab_oracle_destroy(oracle);
  return 1;
}
