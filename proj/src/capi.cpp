#include "cusp/cusp.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "cusp/empirics.hpp"
#include "cusp/error.hpp"
#include "cusp/fields.hpp"
#include "cusp/geometry.hpp"
#include "cusp/hset.hpp"
#include "cusp/json_io.hpp"
#include "cusp/local_approx.hpp"
#include "cusp/partition.hpp"
#include "cusp/rates.hpp"
#include "cusp/tree_summation.hpp"

struct cusp_hset {
  std::shared_ptr<const cusp::HSet> g;
};

struct cusp_domain {
  std::shared_ptr<const cusp::DomainSpec> dom;
};

struct cusp_tree {
  cusp::PartitionTree tree;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_error_json;

void set_error(cusp::ErrorKind kind, const std::string& msg) {
  g_last_error = msg;
  g_last_error_json = cusp::error_json(kind, msg).dump();
}

cusp_status status_of(cusp::ErrorKind k) {
  using cusp::ErrorKind;
  switch (k) {
    case ErrorKind::parameter: return CUSP_ERR_PARAMETER;
    case ErrorKind::domain: return CUSP_ERR_DOMAIN;
    case ErrorKind::configuration: return CUSP_ERR_CONFIG;
    case ErrorKind::degenerate: return CUSP_ERR_DEGENERATE;
    case ErrorKind::infeasible: return CUSP_ERR_INFEASIBLE;
    case ErrorKind::precondition: return CUSP_ERR_PRECONDITION;
    case ErrorKind::size: return CUSP_ERR_SIZE;
    case ErrorKind::evaluation: return CUSP_ERR_EVALUATION;
    case ErrorKind::data: return CUSP_ERR_DATA;
    case ErrorKind::io: return CUSP_ERR_IO;
    case ErrorKind::out_of_range: return CUSP_ERR_RANGE;
  }
  return CUSP_ERR_INTERNAL;
}

template <class F>
cusp_status guard(F&& fn) {
  g_last_error.clear();
  g_last_error_json.clear();
  try {
    fn();
    return CUSP_OK;
  } catch (const cusp::Error& e) {
    set_error(e.kind(), e.what());
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    set_error(cusp::ErrorKind::size, "out of memory");
    return CUSP_ERR_SIZE;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal: ") + e.what();
    g_last_error_json = cusp::Json{{"error", {{"kind", "internal"}, {"message", g_last_error}}}}.dump();
    return CUSP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "internal: unknown exception";
    g_last_error_json = cusp::Json{{"error", {{"kind", "internal"}, {"message", g_last_error}}}}.dump();
    return CUSP_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cusp::Json parse_json(const char* text) {
  try {
    return cusp::Json::parse(text);
  } catch (const cusp::Json::exception& e) {
    throw cusp::DataError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

#define CUSP_NULL_CHECK(p)                                  \
  do {                                                      \
    if (!(p)) {                                             \
      g_last_error = #p " is null";                         \
      g_last_error_json = cusp::error_json(cusp::ErrorKind::parameter, g_last_error).dump(); \
      return CUSP_ERR_NULL_ARGUMENT;                        \
    }                                                       \
  } while (0)

extern "C" {

const char* cusp_version(void) { return "1.0.0"; }

const char* cusp_status_name(cusp_status s) {
  switch (s) {
    case CUSP_OK: return "ok";
    case CUSP_ERR_PARAMETER: return "parameter";
    case CUSP_ERR_DOMAIN: return "domain";
    case CUSP_ERR_CONFIG: return "configuration";
    case CUSP_ERR_DEGENERATE: return "degenerate";
    case CUSP_ERR_INFEASIBLE: return "infeasible";
    case CUSP_ERR_PRECONDITION: return "precondition";
    case CUSP_ERR_SIZE: return "size";
    case CUSP_ERR_EVALUATION: return "evaluation";
    case CUSP_ERR_DATA: return "data";
    case CUSP_ERR_IO: return "io";
    case CUSP_ERR_RANGE: return "range";
    case CUSP_ERR_NULL_ARGUMENT: return "null_argument";
    case CUSP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* cusp_last_error(void) { return g_last_error.c_str(); }
const char* cusp_last_error_json(void) { return g_last_error_json.c_str(); }
void cusp_string_free(char* s) { std::free(s); }

cusp_status cusp_rates(const char* params_json, int hset_variant, double tau_n, char** out_json) {
  CUSP_NULL_CHECK(params_json);
  CUSP_NULL_CHECK(out_json);
  return guard([&] {
    cusp::ParamSet ps = cusp::params_from_json(parse_json(params_json));
    cusp::Json j;
    cusp::TauKind tau;
    if (hset_variant < 0) {
      if (ps.theta) throw cusp::ParameterError("theta needs an h-set variant");
      cusp::RatePrediction r =
          ps.width == cusp::WidthKind::entropy ? cusp::entropy_exponents(ps) : cusp::width_exponents(ps);
      j = cusp::to_json(r);
      tau = r.tau;
    } else {
      if (hset_variant > 1) throw cusp::ParameterError("hset_variant must be -1, 0 or 1");
      auto v = hset_variant == 0 ? cusp::HSetVariant::general : cusp::HSetVariant::plane;
      cusp::HSetPrediction h = cusp::hset_exponents(ps, v);
      j = cusp::to_json(h);
      j["variant"] = hset_variant == 0 ? "general" : "plane";
      tau = h.hset.tau;
    }
    j["width"] = cusp::width_kind_name(ps.width);
    j["lambda"] = ps.lambda.str();
    if (tau_n > 0.0) {
      j["n"] = tau_n;
      j["tau_value"] = cusp::tau_factor(ps, tau_n, tau);
    }
    *out_json = dup_string(j.dump(2));
  });
}

cusp_status cusp_solve_scale(double gamma, const char* lambda, double s, double* out_t) {
  CUSP_NULL_CHECK(lambda);
  CUSP_NULL_CHECK(out_t);
  return guard([&] {
    cusp::SlowVariation sv = cusp::SlowVariation::parse(lambda);
    *out_t = cusp::solve_scale(gamma, [&](double t) { return sv.psi(t); }, s);
  });
}

cusp_status cusp_hset_build(double theta, int d, int depth, const char* kind, cusp_hset** out) {
  CUSP_NULL_CHECK(kind);
  CUSP_NULL_CHECK(out);
  return guard([&] {
    std::string k = kind;
    cusp::HSet::Kind hk;
    if (k == "cantor") {
      hk = cusp::HSet::Kind::cantor;
    } else if (k == "plane") {
      hk = cusp::HSet::Kind::plane;
    } else {
      throw cusp::ParameterError("unknown h-set kind '" + k + "'");
    }
    auto g = std::make_shared<const cusp::HSet>(cusp::HSet::build(theta, d, depth, hk));
    *out = new cusp_hset{std::move(g)};
  });
}

cusp_status cusp_hset_from_json(const char* json, cusp_hset** out) {
  CUSP_NULL_CHECK(json);
  CUSP_NULL_CHECK(out);
  return guard([&] { *out = new cusp_hset{std::make_shared<const cusp::HSet>(cusp::HSet::from_json(json))}; });
}

cusp_status cusp_hset_to_json(const cusp_hset* h, char** out_json) {
  CUSP_NULL_CHECK(h);
  CUSP_NULL_CHECK(out_json);
  return guard([&] { *out_json = dup_string(h->g->to_json()); });
}

cusp_status cusp_hset_cells_csv(const cusp_hset* h, int level, char** out_csv) {
  CUSP_NULL_CHECK(h);
  CUSP_NULL_CHECK(out_csv);
  return guard([&] {
    if (level < 0 || level > h->g->depth()) throw cusp::ParameterError("level must lie in [0, depth]");
    std::ostringstream os;
    cusp::write_hset_cells_csv(*h->g, level, os);
    *out_csv = dup_string(os.str());
  });
}

cusp_status cusp_hset_distance(const cusp_hset* h, const double* x, double* out) {
  CUSP_NULL_CHECK(h);
  CUSP_NULL_CHECK(x);
  CUSP_NULL_CHECK(out);
  return guard([&] {
    cusp::Vec v{};
    for (int i = 0; i < h->g->ambient_dim(); ++i) v[i] = x[i];
    *out = h->g->distance(v);
  });
}

cusp_status cusp_hset_regularity(const cusp_hset* h, size_t samples, uint64_t seed, int threads, char** out_json) {
  CUSP_NULL_CHECK(h);
  CUSP_NULL_CHECK(out_json);
  return guard([&] {
    std::vector<double> ts;
    for (int j = 1; j <= h->g->depth(); ++j) ts.push_back(std::ldexp(1.0, -j));
    auto rep = h->g->regularity_check(samples, ts, seed, threads);
    *out_json = dup_string(cusp::to_json(rep).dump(2));
  });
}

cusp_status cusp_hset_near_counts(const cusp_hset* h, double sigma, int levels, char** out_json) {
  CUSP_NULL_CHECK(h);
  CUSP_NULL_CHECK(out_json);
  return guard([&] {
    auto dom = cusp::DomainSpec::hset_cusp(sigma, h->g);
    *out_json = dup_string(cusp::to_json(cusp::near_cell_counts(dom, levels)).dump(2));
  });
}

void cusp_hset_free(cusp_hset* h) { delete h; }

cusp_status cusp_domain_from_json(const char* json, cusp_domain** out) {
  CUSP_NULL_CHECK(json);
  CUSP_NULL_CHECK(out);
  return guard([&] {
    *out = new cusp_domain{std::make_shared<const cusp::DomainSpec>(cusp::DomainSpec::from_json(json))};
  });
}

cusp_status cusp_domain_constant(int d, double value, double sigma, cusp_domain** out) {
  CUSP_NULL_CHECK(out);
  return guard([&] {
    if (d < 2) throw cusp::ParameterError("d must be >= 2");
    std::vector<cusp::BoundaryModulus> mods(d - 1, cusp::BoundaryModulus::power(sigma));
    *out = new cusp_domain{std::make_shared<const cusp::DomainSpec>(cusp::DomainSpec::constant(d, value, mods))};
  });
}

cusp_status cusp_domain_hset_cusp(double sigma, const cusp_hset* h, cusp_domain** out) {
  CUSP_NULL_CHECK(h);
  CUSP_NULL_CHECK(out);
  return guard([&] {
    *out = new cusp_domain{std::make_shared<const cusp::DomainSpec>(cusp::DomainSpec::hset_cusp(sigma, h->g))};
  });
}

cusp_status cusp_domain_to_json(const cusp_domain* dom, char** out_json) {
  CUSP_NULL_CHECK(dom);
  CUSP_NULL_CHECK(out_json);
  return guard([&] { *out_json = dup_string(dom->dom->to_json()); });
}

cusp_status cusp_domain_dim(const cusp_domain* dom, int* out) {
  CUSP_NULL_CHECK(dom);
  CUSP_NULL_CHECK(out);
  *out = dom->dom->dim();
  return CUSP_OK;
}

cusp_status cusp_domain_psi(const cusp_domain* dom, const double* xprime, double* out) {
  CUSP_NULL_CHECK(dom);
  CUSP_NULL_CHECK(xprime);
  CUSP_NULL_CHECK(out);
  return guard([&] {
    cusp::Vec v{};
    for (int i = 0; i < dom->dom->base_dim(); ++i) v[i] = xprime[i];
    *out = dom->dom->psi(v);
  });
}

cusp_status cusp_domain_contains(const cusp_domain* dom, const double* x, int* out) {
  CUSP_NULL_CHECK(dom);
  CUSP_NULL_CHECK(x);
  CUSP_NULL_CHECK(out);
  return guard([&] {
    cusp::Vec v{};
    for (int i = 0; i < dom->dom->dim(); ++i) v[i] = x[i];
    *out = dom->dom->contains(v) ? 1 : 0;
  });
}

cusp_status cusp_domain_measure(const cusp_domain* dom, double* out) {
  CUSP_NULL_CHECK(dom);
  CUSP_NULL_CHECK(out);
  return guard([&] { *out = cusp::domain_measure(*dom->dom); });
}

void cusp_domain_free(cusp_domain* dom) { delete dom; }

cusp_status cusp_tree_build(const cusp_domain* dom, int levels, int pruned, uint64_t max_cells, cusp_tree** out) {
  CUSP_NULL_CHECK(dom);
  CUSP_NULL_CHECK(out);
  return guard([&] {
    cusp::TreeOptions opt;
    if (max_cells > 0) opt.max_cells = max_cells;
    auto t = pruned ? cusp::build_hset_tree(dom->dom, levels, opt) : cusp::build_tree(dom->dom, levels, opt);
    *out = new cusp_tree{std::move(t)};
  });
}

cusp_status cusp_tree_size(const cusp_tree* t, size_t* out) {
  CUSP_NULL_CHECK(t);
  CUSP_NULL_CHECK(out);
  *out = t->tree.size();
  return CUSP_OK;
}

cusp_status cusp_tree_level_size(const cusp_tree* t, int level, size_t* out) {
  CUSP_NULL_CHECK(t);
  CUSP_NULL_CHECK(out);
  return guard([&] {
    if (level < 0 || level > t->tree.max_level()) throw cusp::RangeError("level out of range");
    *out = t->tree.level(level).size();
  });
}

cusp_status cusp_tree_cells_csv(const cusp_tree* t, char** out_csv) {
  CUSP_NULL_CHECK(t);
  CUSP_NULL_CHECK(out_csv);
  return guard([&] {
    std::ostringstream os;
    cusp::write_cells_csv(t->tree, os);
    *out_csv = dup_string(os.str());
  });
}

cusp_status cusp_tree_audit(const cusp_tree* t, char** out_json) {
  CUSP_NULL_CHECK(t);
  CUSP_NULL_CHECK(out_json);
  return guard([&] { *out_json = dup_string(cusp::to_json(cusp::partition_audit(t->tree)).dump(2)); });
}

cusp_status cusp_tree_volume_check(const cusp_tree* t, size_t samples, uint64_t seed, char** out_json) {
  CUSP_NULL_CHECK(t);
  CUSP_NULL_CHECK(out_json);
  return guard([&] {
    *out_json = dup_string(cusp::to_json(cusp::monte_carlo_volume(t->tree, samples, seed)).dump(2));
  });
}

void cusp_tree_free(cusp_tree* t) { delete t; }

cusp_status cusp_predicted_cell_counts(const cusp_domain* dom, int levels, int pruned, char** out_json) {
  CUSP_NULL_CHECK(dom);
  CUSP_NULL_CHECK(out_json);
  return guard([&] {
    auto v = pruned ? cusp::PartitionTree::Variant::hset_pruned : cusp::PartitionTree::Variant::full;
    cusp::Json j = cusp::predicted_cell_counts(*dom->dom, levels, v);
    *out_json = dup_string(j.dump());
  });
}

cusp_status cusp_approx(const cusp_domain* dom, const char* field, uint64_t budget, int r, double p, double q,
                        const uint64_t* record, size_t record_count, char** out_csv, char** out_json) {
  CUSP_NULL_CHECK(dom);
  CUSP_NULL_CHECK(field);
  CUSP_NULL_CHECK(out_csv);
  if (record_count > 0) CUSP_NULL_CHECK(record);
  return guard([&] {
    if (r < 1 || r > 4) throw cusp::ParameterError("r must lie in 1..4");
    if (!(p >= 1.0) || !(q >= 1.0)) throw cusp::ParameterError("p and q must be >= 1");
    if (budget < 1) throw cusp::ParameterError("budget must be positive");
    cusp::FieldOracle f = cusp::field_by_name(field, *dom->dom, r, p);
    cusp::AdaptiveOptions opt;
    opt.r = r;
    opt.p = p;
    opt.q = q;
    opt.record.assign(record, record + record_count);
    if (opt.record.empty() || opt.record.back() != budget) opt.record.push_back(budget);
    auto res = cusp::adaptive_approximate(f, dom->dom, budget, opt);
    std::ostringstream os;
    cusp::write_budget_csv(res.trace, os);
    *out_csv = dup_string(os.str());
    if (out_json) {
      std::vector<double> n, e;
      for (const auto& b : res.trace)
        if (b.error > 0.0) {
          n.push_back(static_cast<double>(b.pieces));
          e.push_back(b.error);
        }
      cusp::Json j{{"field", f.name},       {"pieces", res.pieces}, {"error", res.error},
                   {"fringe_defect", res.fringe_defect}};
      if (n.size() >= 4) j["fit"] = cusp::to_json(cusp::fit_rate(n, e));
      *out_json = dup_string(j.dump(2));
    }
  });
}

cusp_status cusp_box_residual(const char* field, int d, int r, double q, double* out) {
  CUSP_NULL_CHECK(field);
  CUSP_NULL_CHECK(out);
  return guard([&] {
    if (d < 2 || d > cusp::kMaxDim) throw cusp::ParameterError("d must lie in 2..4");
    std::vector<cusp::BoundaryModulus> mods(d - 1, cusp::BoundaryModulus::power(1.0));
    auto dom = cusp::DomainSpec::constant(d, 2.0, mods);
    cusp::FieldOracle f = cusp::field_by_name(field, dom, r, 2.0);
    cusp::Box box{d, {}, {}};
    for (int i = 0; i < d; ++i) box.hi[i] = 1.0;
    auto coeffs = cusp::project_box(f, box, r);
    *out = cusp::cell_error(f, coeffs, box, r, std::isinf(q) ? cusp::kInf : q).value;
  });
}

cusp_status cusp_treeop_norm(const char* tree_json, double p, double q, const char* method, uint64_t seed,
                             char** out_json) {
  CUSP_NULL_CHECK(tree_json);
  CUSP_NULL_CHECK(method);
  CUSP_NULL_CHECK(out_json);
  return guard([&] {
    cusp::WeightedTree wt = cusp::WeightedTree::from_json(tree_json);
    if (p > 0.0) wt.p = p;
    if (q > 0.0) wt.q = q;
    wt.validate();
    cusp::NormOptions opt;
    opt.seed = seed;
    auto est = cusp::operator_norm(wt, cusp::parse_norm_method(method), opt);
    cusp::Json j = cusp::to_json(est);
    j["p"] = std::isinf(wt.p) ? cusp::Json("inf") : cusp::Json(wt.p);
    j["q"] = std::isinf(wt.q) ? cusp::Json("inf") : cusp::Json(wt.q);
    j["vertices"] = wt.size();
    *out_json = dup_string(j.dump(2));
  });
}

cusp_status cusp_treeop_bound(const char* tree_json, double p, double q, double a, double b, uint64_t seed,
                              char** out_json) {
  CUSP_NULL_CHECK(tree_json);
  CUSP_NULL_CHECK(out_json);
  return guard([&] {
    cusp::WeightedTree wt = cusp::WeightedTree::from_json(tree_json);
    if (p > 0.0) wt.p = p;
    if (q > 0.0) wt.q = q;
    wt.validate();
    cusp::NormOptions opt;
    opt.seed = seed;
    *out_json = dup_string(cusp::to_json(cusp::bound_check(wt, a, b, 64.0, opt)).dump(2));
  });
}

cusp_status cusp_verify_bumps(double theta, double sigma, int d, int kmax, double p, double q, int r, char** out_csv,
                              char** out_json) {
  CUSP_NULL_CHECK(out_csv);
  return guard([&] {
    if (kmax < 2) throw cusp::ParameterError("kmax must be >= 2");
    auto g = std::make_shared<const cusp::HSet>(cusp::HSet::build(theta, d, kmax + 1, cusp::HSet::Kind::cantor));
    auto dom = cusp::DomainSpec::hset_cusp(sigma, g);
    auto sc = cusp::norm_scaling(dom, 1, kmax, p, q, r);
    std::ostringstream os;
    cusp::write_bumps_csv(sc, os);
    *out_csv = dup_string(os.str());
    if (out_json) *out_json = dup_string(cusp::to_json(sc).dump(2));
  });
}

cusp_status cusp_verify_widths(const cusp_domain* dom, int r, int grid, int n_max, char** out_csv) {
  CUSP_NULL_CHECK(dom);
  CUSP_NULL_CHECK(out_csv);
  return guard([&] {
    std::ostringstream os;
    cusp::write_widths_csv(cusp::domain_widths(*dom->dom, r, grid, n_max), os);
    *out_csv = dup_string(os.str());
  });
}

cusp_status cusp_interval_widths(int grid, int r, int n_max, char** out_csv) {
  CUSP_NULL_CHECK(out_csv);
  return guard([&] {
    std::ostringstream os;
    cusp::write_widths_csv(cusp::interval_widths(grid, r, n_max), os);
    *out_csv = dup_string(os.str());
  });
}

cusp_status cusp_fit_slope(const double* n, const double* e, size_t count, char** out_json) {
  CUSP_NULL_CHECK(out_json);
  if (count > 0) {
    CUSP_NULL_CHECK(n);
    CUSP_NULL_CHECK(e);
  }
  return guard([&] {
    std::vector<double> xs, ys;
    if (count > 0) {
      xs.assign(n, n + count);
      ys.assign(e, e + count);
    }
    *out_json = dup_string(cusp::to_json(cusp::fit_rate(xs, ys)).dump(2));
  });
}

cusp_status cusp_fit_slope_csv(const char* csv_text, const char* xcol, const char* ycol, char** out_json) {
  CUSP_NULL_CHECK(csv_text);
  CUSP_NULL_CHECK(xcol);
  CUSP_NULL_CHECK(ycol);
  CUSP_NULL_CHECK(out_json);
  return guard([&] {
    std::istringstream is(csv_text);
    auto [xs, ys] = cusp::read_xy_csv(is, xcol, ycol);
    *out_json = dup_string(cusp::to_json(cusp::fit_rate(xs, ys)).dump(2));
  });
}

}  // extern "C"
