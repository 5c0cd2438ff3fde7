#include "cusp/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <locale>
#include <ostream>
#include <sstream>

namespace cusp {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string scalar_text(const Json& v, const char* key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  throw ParameterError(std::string("'") + key + "' must be a number or a string");
}

Json exponent_json(const Exponent& e) { return e.str(); }

Json double_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

ParamSet params_from_json(const Json& j) {
  if (!j.is_object()) throw ParameterError("rate parameters must be a JSON object");
  static const char* known[] = {"p", "q", "r", "d", "sigma", "theta", "width", "lambda"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ParameterError("unknown key '" + it.key() + "'");
  }
  for (const char* k : {"p", "q", "r", "d", "sigma"})
    if (!j.contains(k)) throw ParameterError(std::string("missing key '") + k + "'");
  ParamSet ps;
  try {
    ps.p = Exponent::parse(scalar_text(j["p"], "p"));
    ps.q = Exponent::parse(scalar_text(j["q"], "q"));
    ps.sigma = Rational::parse(scalar_text(j["sigma"], "sigma"));
    Rational r = Rational::parse(scalar_text(j["r"], "r"));
    Rational d = Rational::parse(scalar_text(j["d"], "d"));
    if (r.den() != 1 || d.den() != 1) throw ParameterError("r and d must be integers");
    if (r.num() > 64 || d.num() > 64) throw ParameterError("r and d must be at most 64");
    ps.r = static_cast<int>(r.num());
    ps.d = static_cast<int>(d.num());
    if (j.contains("theta") && !j["theta"].is_null()) ps.theta = Rational::parse(scalar_text(j["theta"], "theta"));
    if (j.contains("width")) ps.width = parse_width_kind(j["width"].get<std::string>());
    if (j.contains("lambda")) ps.lambda = SlowVariation::parse(j["lambda"].get<std::string>());
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("malformed rate parameters: ") + e.what());
  }
  return ps;
}

Json to_json(const RatePrediction& r) {
  Json j;
  j["feasible"] = true;
  j["alpha1"] = r.alpha1.str();
  j["alpha2"] = r.alpha2.str();
  j["rho"] = r.rho.str();
  if (r.thetas) {
    Json t = Json::array();
    for (const auto& x : *r.thetas) t.push_back(x.str());
    j["thetas"] = t;
  } else {
    j["thetas"] = nullptr;
  }
  j["j_star"] = r.j_star;
  j["exponent"] = r.exponent.str();
  j["tau"] = tau_kind_name(r.tau);
  j["q_hat"] = r.q_hat ? exponent_json(*r.q_hat) : Json(nullptr);
  j["width_case"] = r.width_case;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

Json to_json(const HSetPrediction& h) {
  Json j = to_json(h.hset);
  if (h.generic) {
    j["generic"] = to_json(*h.generic);
  } else {
    j["generic"] = {{"feasible", false}, {"error", h.generic_error}};
  }
  return j;
}

Json to_json(const AuditReport& a) {
  Json levels = Json::array();
  for (const auto& l : a.levels)
    levels.push_back({{"level", l.level},
                      {"cells", l.cells},
                      {"near", l.near},
                      {"height_min", l.height_min},
                      {"height_max", l.height_max},
                      {"volume_ratio_min", l.volume_ratio_min},
                      {"volume_ratio_max", l.volume_ratio_max},
                      {"branching_max", l.branching_max}});
  return {{"levels", levels},
          {"root_branching", a.root_branching},
          {"max_branching", a.max_branching},
          {"branching_bound", a.branching_bound},
          {"tiling_violations", a.tiling_violations},
          {"chaining_violations", a.chaining_violations},
          {"height_violations", a.height_violations},
          {"overlap_measure", a.overlap_measure},
          {"covered_measure", a.covered_measure},
          {"covering_defect", a.covering_defect},
          {"defect_bound", a.defect_bound},
          {"domain_measure", a.domain_measure},
          {"root_c_plus", a.root_c_plus}};
}

Json to_json(const VolumeCheck& v) {
  return {{"samples", v.samples},         {"estimate", v.estimate}, {"standard_error", v.standard_error},
          {"exact", v.exact},             {"z", v.z},               {"within_3se", v.within_3se}};
}

Json to_json(const std::vector<NearCount>& counts) {
  Json out = Json::array();
  for (const auto& c : counts)
    out.push_back({{"level", c.level}, {"n", c.n}, {"count", c.count}, {"scaled", c.scaled}});
  return out;
}

Json to_json(const RegularityReport& r) {
  return {{"ratio_min", r.ratio_min}, {"ratio_max", r.ratio_max}, {"spread", r.spread},
          {"c_star", r.c_star},       {"passed", r.passed},       {"evaluations", r.evaluations}};
}

Json to_json(const NormEstimate& n) {
  return {{"method", norm_method_name(n.method)},
          {"value", n.value},
          {"lower_bound", n.lower_bound},
          {"exact", n.exact},
          {"starts", n.starts},
          {"witness", n.witness}};
}

Json to_json(const BoundReport& b) {
  return {{"norm_lower_bound", b.norm_lb},
          {"sup_gv", b.bound},
          {"ratio", b.ratio},
          {"ceiling", b.ceiling},
          {"violated", b.violated}};
}

Json to_json(const NormScaling& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"k", r.k},
                    {"count", r.count},
                    {"b_k", r.b_k},
                    {"lq", r.lq},
                    {"lp", r.lp},
                    {"grad_lp", r.grad_lp},
                    {"separation", r.separation}});
  return {{"rows", rows},
          {"lq_slope", s.lq_slope},
          {"lq_predicted", s.lq_predicted},
          {"grad_slope", s.grad_slope},
          {"grad_predicted", s.grad_predicted},
          {"packing_slope", s.packing_slope},
          {"packing_predicted", s.packing_predicted}};
}

Json to_json(const FitResult& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"max_residual", double_or_null(f.max_residual)},
          {"points", f.points}};
}

Json error_json(ErrorKind kind, const std::string& message) {
  return {{"error", {{"kind", kind_name(kind)}, {"message", message}}}};
}

void write_budget_csv(const std::vector<BudgetPoint>& rows, std::ostream& out) {
  out << "budget,pieces,error,fringe_defect\n";
  for (const auto& r : rows)
    out << r.budget << ',' << r.pieces << ',' << format_double(r.error) << ',' << format_double(r.fringe_defect)
        << '\n';
}

void write_bumps_csv(const NormScaling& s, std::ostream& out) {
  out << "k,count,b_k,lq,lp,grad_lp,separation\n";
  for (const auto& r : s.rows)
    out << r.k << ',' << r.count << ',' << format_double(r.b_k) << ',' << format_double(r.lq) << ','
        << format_double(r.lp) << ',' << format_double(r.grad_lp) << ',' << format_double(r.separation) << '\n';
}

void write_widths_csv(const std::vector<WidthEstimate>& rows, std::ostream& out) {
  out << "n,width,method\n";
  for (const auto& r : rows) out << r.n << ',' << format_double(r.value) << ',' << r.method << '\n';
}

void write_hset_cells_csv(const HSet& g, int level, std::ostream& out) {
  int k = g.ambient_dim();
  out << "level";
  for (int i = 1; i <= k; ++i) out << ",center_" << i;
  out << ",halfwidth,mass\n";
  for (const auto& c : g.cells(level)) {
    out << c.level;
    for (int i = 0; i < k; ++i) out << ',' << format_double(c.center[i]);
    out << ',' << format_double(c.halfwidth) << ',' << format_double(c.mass) << '\n';
  }
}

std::pair<std::vector<double>, std::vector<double>> read_xy_csv(std::istream& in, const std::string& xcol,
                                                                const std::string& ycol) {
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      out.push_back(cell);
    }
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV");
  auto header = split(line);
  int ix = -1, iy = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == xcol) ix = static_cast<int>(i);
    if (header[i] == ycol) iy = static_cast<int>(i);
  }
  if (ix < 0) throw DataError("column '" + xcol + "' not found");
  if (iy < 0) throw DataError("column '" + ycol + "' not found");
  std::vector<double> xs, ys;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (static_cast<int>(cells.size()) <= std::max(ix, iy))
      throw DataError("row " + std::to_string(row) + " is too short");
    auto num = [&](const std::string& s) {
      std::istringstream is(s);
      is.imbue(std::locale::classic());
      double v;
      if (!(is >> v) || !(is >> std::ws).eof()) throw DataError("row " + std::to_string(row) + ": '" + s + "' is not a number");
      return v;
    };
    xs.push_back(num(cells[ix]));
    ys.push_back(num(cells[iy]));
  }
  return {xs, ys};
}

}  // namespace cusp
