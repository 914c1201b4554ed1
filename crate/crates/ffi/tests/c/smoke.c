#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "localphoton.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "line %d: %s\n", __LINE__, #cond);   \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    LpPulse *pulse = NULL;
    CHECK(lp_pulse_new(3.0, 2.0, 12, &pulse) == LP_STATUS_OK);
    CHECK(lp_last_error() == NULL);

    double eta = 0.0;
    CHECK(lp_pulse_eta(pulse, &eta) == LP_STATUS_OK);
    CHECK(eta > 0.0 && eta < 0.5);

    size_t len = 0;
    CHECK(lp_pulse_len(pulse, &len) == LP_STATUS_OK);
    double *t = malloc(len * sizeof(double));
    double *v = malloc(len * sizeof(double));
    CHECK(t && v);
    CHECK(lp_pulse_energy_density(pulse, LP_REPRESENTATION_LOCALIZED, t, v, len) == LP_STATUS_OK);
    double peak = 0.0, before = 0.0;
    for (size_t k = 0; k < len; k++) {
        double a = fabs(v[k]);
        if (a > peak) peak = a;
        if (t[k] < 0.0 && a > before) before = a;
    }
    CHECK(peak > 0.0 && before / peak < 1e-6);

    CHECK(lp_pulse_energy_density(pulse, LP_REPRESENTATION_LOCALIZED, NULL, v, len + 1) == LP_STATUS_BUFFER_SIZE);
    CHECK(lp_last_error() != NULL);
    free(t);
    free(v);
    lp_pulse_free(pulse);

    LpPulse *bad = NULL;
    CHECK(lp_pulse_new(0.0, 2.0, 12, &bad) == LP_STATUS_INVALID_ARGUMENT);
    CHECK(bad == NULL);

    LpFidelity fid;
    CHECK(lp_fidelity(1.0, 2.0, 12, 30, &fid) == LP_STATUS_OK);
    CHECK(fid.one_minus_f > 0.0);

    printf("%s %.6e\n", lp_version(), eta);
    return 0;
}
