#include <stdio.h>
#include <string.h>
#include "dirflag.h"

int main(void) {
    struct DirflagDigraph *g = NULL;
    const char *text = "dim 0\n0 0 0 0\ndim 1\n0 1\n1 0\n2 0\n2 1\n3 0\n3 1\n";
    if (dirflag_digraph_parse(text, &g) != DIRFLAG_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", dirflag_last_error());
        return 1;
    }
    size_t betti[3];
    if (dirflag_flag_betti(g, 2, 0, betti, 3) != DIRFLAG_STATUS_OK) {
        return 2;
    }
    printf("%zu %zu %zu\n", betti[0], betti[1], betti[2]);
    dirflag_digraph_free(g);

    if (dirflag_digraph_parse("dim 0\n0\ndim 1\n0 0\n", &g) != DIRFLAG_STATUS_PARSE_ERROR) {
        return 3;
    }
    if (strstr(dirflag_last_error(), "line") == NULL) {
        return 4;
    }

    struct DirflagWeightedDigraph *w = NULL;
    struct DirflagBarcode *b = NULL;
    if (dirflag_weighted_parse("edgelist\na b 1\nb a 1\n", &w) != DIRFLAG_STATUS_OK) {
        return 5;
    }
    if (dirflag_barcode_compute(w, DIRFLAG_PIPELINE_SP_DFL, 1, 2, &b) != DIRFLAG_STATUS_OK) {
        return 6;
    }
    printf("%zu bars\n", dirflag_barcode_len(b));
    dirflag_barcode_free(b);
    dirflag_weighted_free(w);
    return 0;
}
