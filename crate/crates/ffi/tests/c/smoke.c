#include <stdio.h>
#include <string.h>

#include "selmon.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "line %d: %s: %s\n", __LINE__, #cond,      \
              selmon_last_error_message());                      \
      return 1;                                                  \
    }                                                            \
  } while (0)

int main(void) {
  SelmonInstance *inst = NULL;
  SelmonVerdict v;
  char *json = NULL;

  CHECK(selmon_instance_generate(7, 3, selmon_dns_bounds_default(), &inst) ==
        SELMON_STATUS_OK);
  CHECK(selmon_verify_dns(inst, &v, NULL) == SELMON_STATUS_OK);
  CHECK(v.holds);
  CHECK(v.n >= 1);

  CHECK(selmon_instance_to_json(inst, &json) == SELMON_STATUS_OK);
  selmon_instance_free(inst);
  inst = NULL;
  CHECK(selmon_instance_from_json(json, &inst) == SELMON_STATUS_OK);
  selmon_string_free(json);
  selmon_instance_free(inst);

  inst = NULL;
  CHECK(selmon_instance_from_json("{\"X\":", &inst) == SELMON_STATUS_PARSE);
  CHECK(inst == NULL);
  CHECK(strstr(selmon_last_error_message(), "parse error") != NULL);
  CHECK(selmon_verify_dns(NULL, &v, NULL) == SELMON_STATUS_NULL_POINTER);

  printf("ok %s\n", selmon_version());
  return 0;
}
