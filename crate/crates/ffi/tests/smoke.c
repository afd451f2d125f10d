#include <stdio.h>
#include <string.h>
#include "starmoments.h"

int main(void) {
    SmWord *w = NULL;
    if (sm_word_parse("1*1*", &w) != SM_STATUS_OK) return 1;
    uint64_t m = 0;
    if (sm_star_moment_u64(w, 3, &m) != SM_STATUS_OK || m != 15) return 2;
    char *s = NULL;
    if (sm_star_moment(w, 2, &s) != SM_STATUS_OK || strcmp(s, "6") != 0) return 3;
    sm_string_free(s);
    sm_word_free(w);

    SmWord *bad = NULL;
    if (sm_word_parse("1?", &bad) != SM_STATUS_PARSE_ERROR) return 4;
    if (strstr(sm_last_error_message(), "position 2") == NULL) return 5;

    SmGraph *g = NULL;
    if (sm_graph_sample(100, 2, 7, SM_MODEL_CONFIGURATION_MODEL, 0, &g) != SM_STATUS_OK) return 6;
    if (sm_graph_arc_count(g) != 200) return 7;
    sm_graph_free(g);
    printf("ok %s\n", sm_version());
    return 0;
}
