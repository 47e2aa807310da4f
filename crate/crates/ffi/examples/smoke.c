#include <stdio.h>
#include <string.h>

#include "feature_clock.h"

int main(void) {
    double x[6 * 2] = {0, 1, 1, 0, 2, 2, 3, 1, 4, 5, 5, 3};
    double y[6 * 2] = {0, 1, 1, 0, 2, 2, 3, 1, 4, 5, 5, 3};
    const char *names[2] = {"a", "b"};
    FcDataset *ds = NULL;
    FcResult *res = NULL;

    if (fc_dataset_from_arrays(6, 2, x, y, names, &ds) != FC_STATUS_OK) {
        fprintf(stderr, "load: %s\n", fc_last_error_message());
        return 1;
    }
    FcConfig *cfg = fc_config_new();
    fc_config_set_alpha(cfg, 0.05);
    if (fc_run_global(ds, cfg, &res) != FC_STATUS_OK) {
        fprintf(stderr, "run: %s\n", fc_last_error_message());
        return 1;
    }
    const char *json = fc_result_json(res);
    if (strstr(json, "\"schema_version\": 1") == NULL) {
        fprintf(stderr, "unexpected report\n");
        return 1;
    }
    if (fc_run_local(ds, cfg, NULL) != FC_STATUS_NULL_ARGUMENT) {
        return 1;
    }
    printf("ok %s\n", fc_version());
    fc_result_free(res);
    fc_config_free(cfg);
    fc_dataset_free(ds);
    return 0;
}
