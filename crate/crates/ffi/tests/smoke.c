#include <math.h>
#include <stdio.h>
#include "h2ion.h"

int main(void) {
    H2ionResult *g = NULL, *u = NULL;
    if (h2ion_solve("1ssg", 2.0, 0, 0, &g) != H2ION_STATUS_OK) return 10;
    if (h2ion_solve("2psu", 2.0, 0, 0, &u) != H2ION_STATUS_OK) return 11;
    double e = 0.0;
    h2ion_result_total_energy(g, &e);
    H2ionTransition t;
    if (h2ion_result_transition(g, u, &t) != H2ION_STATUS_OK) return 12;
    h2ion_result_free(g);
    h2ion_result_free(u);
    H2ionResult *bad = NULL;
    if (h2ion_solve("9xx", 2.0, 0, 0, &bad) == H2ION_STATUS_OK || bad != NULL) return 13;
    if (h2ion_last_error() == NULL) return 14;
    printf("%.12f %.8f\n", e, t.f01);
    return fabs(e + 1.205268429) < 1e-8 ? 0 : 15;
}
