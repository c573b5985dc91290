#include <math.h>
#include <stdio.h>
#include <string.h>

#include "boseq.h"

#define CHECK(expr)                                                        \
  do {                                                                     \
    if ((expr) != BOSEQ_STATUS_OK) {                                       \
      fprintf(stderr, "%s failed: %s\n", #expr, boseq_last_error());       \
      return 1;                                                            \
    }                                                                      \
  } while (0)

int main(void) {
  const double h = sqrt(0.5);
  const double plus[8] = {h, 0.0, h, 0.0, h, 0.0, h, 0.0};
  BoseqState *psi = NULL, *out = NULL;
  BoseqOperator *z1 = NULL, *z2 = NULL, *zz = NULL;
  size_t keep[1] = {1};
  double entropy = -1.0;
  BoseqDeutschResult r;
  char *compiled = NULL;

  CHECK(boseq_state_coherent(1, 2, plus, &psi));
  CHECK(boseq_operator_spin(BOSEQ_AXIS_Z, 1, 2, 1, &z1));
  CHECK(boseq_operator_spin(BOSEQ_AXIS_Z, 2, 2, 1, &z2));
  CHECK(boseq_operator_multiply(z1, z2, &zz));
  CHECK(boseq_evolve(psi, zz, 0.78539816339744831, &out));
  CHECK(boseq_entanglement_entropy(out, keep, 1, &entropy));
  if (fabs(entropy - 1.0) > 1e-10) {
    fprintf(stderr, "entropy %.17g\n", entropy);
    return 1;
  }

  CHECK(boseq_deutsch(BOSEQ_ORACLE_BAL01, 3, 3.14159265358979312 / 6.0, &r));
  if (r.classification != 1) return 1;
  if (boseq_deutsch(BOSEQ_ORACLE_BAL01, 3, 3.14159265358979312 / 12.0, &r) !=
      BOSEQ_STATUS_AMBIGUOUS)
    return 1;

  CHECK(boseq_compile_schedule("qubits 1\nterm 1.0 X1\nevolve pi/2\n", 4, &compiled));
  if (strstr(compiled, "bosons 4") == NULL) return 1;
  boseq_string_free(compiled);

  boseq_state_free(psi);
  boseq_state_free(out);
  boseq_operator_free(z1);
  boseq_operator_free(z2);
  boseq_operator_free(zz);
  printf("ok %s %.6f\n", boseq_version(), entropy);
  return 0;
}
