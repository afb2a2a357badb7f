#include <stdio.h>
#include "groundc.h"

int main(void) {
    GcSession *s = gc_session_new();
    GcTerm *t = NULL, *nf = NULL;
    char *out = NULL;
    if (gc_term_parse(s, "identity.gterm", &t) != GC_STATUS_OK) return 1;
    if (gc_term_check(s, t, &out) != GC_STATUS_OK) return 2;
    printf("%s\n", out);
    gc_string_free(out);
    gc_term_free(t);

    if (gc_session_use_language(s, "props.glang") != GC_STATUS_OK) return 3;
    if (gc_term_parse(s, "andE1_pair.gterm", &t) != GC_STATUS_OK) return 4;
    uint64_t steps = 0;
    if (gc_term_normalize(s, t, &nf, &steps) != GC_STATUS_OK || steps != 1) return 5;
    out = gc_term_to_string(nf);
    printf("%s\n", out);
    gc_string_free(out);
    gc_term_free(nf);
    gc_term_free(t);

    GcStatus st = gc_run(s, "check unknown_delta.gterm", &out);
    gc_string_free(out);
    printf("status %d: %s\n", (int)st, gc_last_error(s));
    gc_session_free(s);
    return 0;
}
