#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "cusp/cusp.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static int contains(const char* s, const char* sub) { return s && strstr(s, sub) != NULL; }

static void test_rates(void) {
  char* out = NULL;
  EXPECT(cusp_rates("{\"p\":2,\"q\":2,\"r\":1,\"d\":2,\"sigma\":3}", -1, 0.0, &out) == CUSP_OK);
  EXPECT(contains(out, "\"exponent\": \"-1/3\""));
  cusp_string_free(out);

  out = NULL;
  EXPECT(cusp_rates("{\"p\":2,\"q\":2,\"r\":2,\"d\":2,\"sigma\":2}", -1, 0.0, &out) == CUSP_ERR_DEGENERATE);
  EXPECT(out == NULL);
  EXPECT(strcmp(cusp_last_error(), "degenerate: alpha1 == alpha2") == 0);
  EXPECT(contains(cusp_last_error_json(), "\"degenerate\""));

  EXPECT(cusp_rates("{\"p\":2,\"q\":100,\"r\":1,\"d\":2,\"sigma\":8}", -1, 0.0, &out) == CUSP_ERR_INFEASIBLE);
  EXPECT(cusp_rates("{\"p\":2}", -1, 0.0, &out) == CUSP_ERR_PARAMETER);
  EXPECT(cusp_rates(NULL, -1, 0.0, &out) == CUSP_ERR_NULL_ARGUMENT);

  EXPECT(cusp_rates("{\"p\":2,\"q\":4,\"r\":2,\"d\":3,\"sigma\":2,\"theta\":1}", 1, 0.0, &out) == CUSP_OK);
  EXPECT(contains(out, "\"rho\": \"1\""));
  cusp_string_free(out);

  double t = 0.0;
  EXPECT(cusp_solve_scale(2.0, "const", 16.0, &t) == CUSP_OK);
  EXPECT(fabs(t - 4.0) < 1e-10);
  EXPECT(cusp_solve_scale(2.0, "bogus", 16.0, &t) == CUSP_ERR_PARAMETER);
}

static void test_hset_and_domain(void) {
  cusp_hset* h = NULL;
  EXPECT(cusp_hset_build(1.0, 3, 6, "cantor", &h) == CUSP_OK);
  EXPECT(h != NULL);
  EXPECT(cusp_hset_build(2.0, 3, 6, "plane", &h) == CUSP_ERR_PARAMETER);
  EXPECT(cusp_hset_build(1.0, 3, 6, "spiral", &h) == CUSP_ERR_PARAMETER);
  cusp_hset_free(h);
  cusp_hset* g = NULL;
  EXPECT(cusp_hset_build(1.0, 3, 6, "cantor", &g) == CUSP_OK);

  double x[2] = {0.5, 0.5}, dist = 0.0;
  EXPECT(cusp_hset_distance(g, x, &dist) == CUSP_OK);
  EXPECT(fabs(dist - 1.0 / 6.0) < 1e-3);

  char* js = NULL;
  EXPECT(cusp_hset_regularity(g, 200, 12345, 1, &js) == CUSP_OK);
  EXPECT(contains(js, "ratio_max"));
  cusp_string_free(js);

  cusp_domain* dom = NULL;
  EXPECT(cusp_domain_hset_cusp(2.0, g, &dom) == CUSP_OK);
  int d = 0;
  EXPECT(cusp_domain_dim(dom, &d) == CUSP_OK && d == 3);
  double psi = 0.0;
  double xp[2] = {0.0, 0.0};
  EXPECT(cusp_domain_psi(dom, xp, &psi) == CUSP_OK);
  EXPECT(psi >= 1.0 && psi <= 2.0);
  int inside = -1;
  double pt[3] = {0.5, 0.5, 0.5};
  EXPECT(cusp_domain_contains(dom, pt, &inside) == CUSP_OK && inside == 1);
  cusp_domain_free(dom);
  cusp_hset_free(g);

  EXPECT(cusp_domain_from_json("{\"dim\":2,\"colour\":1}", &dom) == CUSP_ERR_CONFIG);
  EXPECT(cusp_domain_from_json("not json", &dom) == CUSP_ERR_DATA);
  EXPECT(cusp_domain_constant(2, 2.5, 2.0, &dom) == CUSP_ERR_DOMAIN);
  cusp_hset_free(NULL);
  cusp_domain_free(NULL);
}

static void test_tree(void) {
  cusp_domain* dom = NULL;
  EXPECT(cusp_domain_constant(2, 2.0, 2.0, &dom) == CUSP_OK);
  double m = 0.0;
  EXPECT(cusp_domain_measure(dom, &m) == CUSP_OK && fabs(m - 2.0) < 1e-12);
  cusp_tree* t = NULL;
  EXPECT(cusp_tree_build(dom, 3, 0, 0, &t) == CUSP_OK);
  size_t n = 0, n0 = 0;
  EXPECT(cusp_tree_size(t, &n) == CUSP_OK && n > 1);
  EXPECT(cusp_tree_level_size(t, 0, &n0) == CUSP_OK && n0 == 1);
  EXPECT(cusp_tree_level_size(t, 9, &n0) == CUSP_ERR_RANGE);
  char* js = NULL;
  EXPECT(cusp_tree_audit(t, &js) == CUSP_OK);
  EXPECT(contains(js, "\"tiling_violations\": 0"));
  cusp_string_free(js);
  EXPECT(cusp_tree_volume_check(t, 10000, 7, &js) == CUSP_OK);
  EXPECT(contains(js, "within_3se"));
  cusp_string_free(js);
  cusp_tree_free(t);
  EXPECT(cusp_tree_build(dom, 3, 0, 10, &t) == CUSP_ERR_SIZE);

  char* csv = NULL;
  uint64_t rec[2] = {4, 8};
  EXPECT(cusp_approx(dom, "x2", 16, 1, 2.0, 2.0, rec, 2, &csv, NULL) == CUSP_OK);
  EXPECT(contains(csv, "budget,pieces,error,fringe_defect"));
  cusp_string_free(csv);
  EXPECT(cusp_approx(dom, "x2", 16, 9, 2.0, 2.0, NULL, 0, &csv, NULL) == CUSP_ERR_PARAMETER);
  cusp_domain_free(dom);

  double res = 0.0;
  EXPECT(cusp_box_residual("x2", 2, 1, 2.0, &res) == CUSP_OK);
  EXPECT(fabs(res - 1.0 / sqrt(12.0)) < 1e-12);
}

static void test_treeop_and_empirics(void) {
  const char* chain = "{\"parents\":[-1,0,1,2,3],\"g\":[1,1,1,1,1],\"v\":[1,0.5,0.25,0.125,0.0625]}";
  char* js = NULL;
  EXPECT(cusp_treeop_norm(chain, 2.0, 2.0, "spectral", 1, &js) == CUSP_OK);
  EXPECT(contains(js, "1.20018051138865"));
  cusp_string_free(js);
  EXPECT(cusp_treeop_norm(chain, 2.0, 2.0, "magic", 1, &js) == CUSP_ERR_PARAMETER);
  EXPECT(cusp_treeop_bound(chain, 2.0, 2.0, 2.0, 1.0, 1, &js) == CUSP_OK);
  EXPECT(contains(js, "\"violated\": false"));
  cusp_string_free(js);
  EXPECT(cusp_treeop_bound(chain, 2.0, 2.0, 3.0, 1.0, 1, &js) == CUSP_ERR_PRECONDITION);

  double n[5] = {4, 16, 64, 256, 1024}, e[5];
  for (int i = 0; i < 5; ++i) e[i] = 1.0 / sqrt(n[i]);
  EXPECT(cusp_fit_slope(n, e, 5, &js) == CUSP_OK);
  EXPECT(contains(js, "\"slope\": -0.5") || contains(js, "\"slope\": -0.49999999"));
  cusp_string_free(js);
  EXPECT(cusp_fit_slope(n, e, 3, &js) == CUSP_ERR_PARAMETER);
  EXPECT(cusp_fit_slope_csv("n,e\n1,x\n", "n", "e", &js) == CUSP_ERR_DATA);

  char* csv = NULL;
  EXPECT(cusp_interval_widths(64, 1, 4, &csv) == CUSP_OK);
  EXPECT(contains(csv, "n,width,method"));
  cusp_string_free(csv);
  EXPECT(cusp_interval_widths(8192, 1, 4, &csv) == CUSP_ERR_SIZE);
}

int main(void) {
  EXPECT(cusp_version() != NULL && strlen(cusp_version()) > 0);
  EXPECT(strcmp(cusp_status_name(CUSP_ERR_DEGENERATE), "degenerate") == 0);
  test_rates();
  test_hset_and_domain();
  test_tree();
  test_treeop_and_empirics();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
