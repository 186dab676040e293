#include <stdio.h>
#include <string.h>
#include "propsizer.h"

int main(void) {
    PsEngine *engine = NULL;
    if (ps_engine_new_bundled(&engine) != PS_STATUS_OK) {
        fprintf(stderr, "engine: %s\n", ps_last_error_message());
        return 10;
    }
    char *out = NULL;
    const char *req = "{\"total_weight_n\":196,\"rotor_count\":4,\"endurance_min\":17,\"altitude_m\":50}";
    PsStatus s = ps_optimize(engine, req, &out);
    if (s != PS_STATUS_OK || out == NULL || strstr(out, "U11 KV90") == NULL) {
        fprintf(stderr, "optimize: %d %s\n", (int)s, ps_last_error_message());
        return 11;
    }
    ps_string_free(out);
    out = NULL;
    s = ps_optimize(engine, "{bad", &out);
    if (s != PS_STATUS_INVALID_INPUT || ps_last_error_message() == NULL) {
        return 12;
    }
    ps_string_free(out);
    ps_engine_free(engine);
    printf("%s\n", ps_version());
    return 0;
}
