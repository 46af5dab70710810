#include <stdio.h>
#include <string.h>

#include "qlie.h"

#define CHECK(cond)                                                    \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                  \
        }                                                              \
    } while (0)

int main(void) {
    QlieOperator *sigma = NULL;
    CHECK(qlie_operator_new(QLIE_MATRIX_SIGMA, 2, &sigma) == QLIE_STATUS_OK);

    size_t nnz = 0;
    CHECK(qlie_operator_nnz(sigma, &nnz) == QLIE_STATUS_OK);
    CHECK(nnz == 5);

    char *entry = NULL;
    CHECK(qlie_operator_get(sigma, 1, 2, 2, 1, &entry) == QLIE_STATUS_OK);
    CHECK(strcmp(entry, "1 - b") == 0);
    qlie_string_free(entry);

    QlieOperator *ext = NULL;
    CHECK(qlie_operator_new(QLIE_MATRIX_EXTENDED, 2, &ext) == QLIE_STATUS_OK);
    char *report = NULL;
    CHECK(qlie_check_braid(ext, NULL, NULL, NULL, &report) == QLIE_STATUS_OK);
    CHECK(strstr(report, "\"pass\": true") != NULL);
    qlie_string_free(report);

    CHECK(qlie_operator_set(ext, 0, 2, 2, 1, "2*C") == QLIE_STATUS_OK);
    CHECK(qlie_check_braid(ext, NULL, NULL, NULL, &report) == QLIE_STATUS_VERIFY_FAILED);
    qlie_string_free(report);

    CHECK(qlie_operator_new(QLIE_MATRIX_SIGMA, 0, &sigma) == QLIE_STATUS_INVALID_ARGUMENT);
    CHECK(qlie_last_error() != NULL);

    qlie_operator_free(ext);
    qlie_operator_free(sigma);
    puts("ok");
    return 0;
}
