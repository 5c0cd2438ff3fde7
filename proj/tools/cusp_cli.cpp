// cusp-cli: command-line front end over the C API in cusp/cusp.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cusp/cusp.h"

namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

// Carries a failed C call out to main with the status and the JSON error text.
struct Failure {
  cusp_status status;
  std::string json;
};

struct Global {
  std::uint64_t seed = 12345;
  int threads = 1;
  std::string out_dir;
};

Global g_opts;

Failure io_failure(const std::string& msg) {
  return {CUSP_ERR_IO, Json{{"error", {{"kind", "io"}, {"message", msg}}}}.dump()};
}

Failure validation_failure(const std::string& msg) {
  return {CUSP_ERR_PARAMETER, Json{{"error", {{"kind", "parameter"}, {"message", msg}}}}.dump()};
}

void check(cusp_status s) {
  if (s != CUSP_OK) throw Failure{s, cusp_last_error_json()};
}

// Owns a string returned by the library.
class CString {
 public:
  CString() = default;
  CString(const CString&) = delete;
  CString& operator=(const CString&) = delete;
  ~CString() { cusp_string_free(p_); }
  char** out() { return &p_; }
  std::string str() const { return p_ ? std::string(p_) : std::string(); }

 private:
  char* p_ = nullptr;
};

template <class T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p_); }
  T** out() { return &p_; }
  T* get() const { return p_; }

 private:
  T* p_ = nullptr;
};

using HSetHandle = Handle<cusp_hset, cusp_hset_free>;
using DomainHandle = Handle<cusp_domain, cusp_domain_free>;
using TreeHandle = Handle<cusp_tree, cusp_tree_free>;

std::string resolve(const std::string& path) {
  if (path.empty() || path == "-" || g_opts.out_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(g_opts.out_dir) / path).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_failure("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  std::string p = resolve(path);
  if (p.empty() || p == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    std::cout.flush();
    return;
  }
  std::error_code ec;
  fs::path parent = fs::path(p).parent_path();
  if (!parent.empty()) fs::create_directories(parent, ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw io_failure("cannot write '" + p + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  out.flush();
  if (!out) throw io_failure("write failed for '" + p + "'");
}

double parse_exponent(const std::string& s, const char* name) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double v;
  if (!(is >> v) || !is.eof()) throw validation_failure(std::string(name) + " must be a number or 'inf'");
  return v;
}

void load_domain(const std::string& path, DomainHandle& dom) {
  std::string text = read_file(path);
  check(cusp_domain_from_json(text.c_str(), dom.out()));
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Log-log scatter with the fitted line.
std::string svg_loglog(const std::vector<double>& x, const std::vector<double>& y, double slope, double intercept,
                       const std::string& xlabel, const std::string& ylabel) {
  const double W = 480, H = 360, L = 60, R = 20, T = 20, B = 50;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (lx.size() >= 2) {
    auto [x0, x1] = std::minmax_element(lx.begin(), lx.end());
    auto [y0, y1] = std::minmax_element(ly.begin(), ly.end());
    double xa = *x0, xb = *x1, ya = *y0, yb = *y1;
    if (xb - xa < 1e-12) xb = xa + 1;
    if (yb - ya < 1e-12) yb = ya + 1;
    auto px = [&](double v) { return L + (v - xa) / (xb - xa) * (W - L - R); };
    auto py = [&](double v) { return H - B - (v - ya) / (yb - ya) * (H - T - B); };
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < lx.size(); ++i)
      os << "<circle cx=\"" << px(lx[i]) << "\" cy=\"" << py(ly[i]) << "\" r=\"3\" fill=\"steelblue\"/>\n";
    os << "<line x1=\"" << px(xa) << "\" y1=\"" << py(intercept + slope * xa) << "\" x2=\"" << px(xb) << "\" y2=\""
       << py(intercept + slope * xb) << "\" stroke=\"firebrick\"/>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">log " << xlabel << "</text>\n";
  os << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15," << H / 2
     << ")\" text-anchor=\"middle\">log " << ylabel << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << T + 10 << "\" text-anchor=\"end\">slope " << fmt(slope) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::pair<std::vector<double>, std::vector<double>> csv_columns(const std::string& text, const std::string& xcol,
                                                                const std::string& ycol) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> head;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) head.push_back(c);
  }
  auto col = [&](const std::string& n) {
    auto it = std::find(head.begin(), head.end(), n);
    return static_cast<std::size_t>(it - head.begin());
  };
  std::size_t ix = col(xcol), iy = col(ycol);
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (ix < cells.size() && iy < cells.size()) {
      xs.push_back(std::strtod(cells[ix].c_str(), nullptr));
      ys.push_back(std::strtod(cells[iy].c_str(), nullptr));
    }
  }
  return {xs, ys};
}

// ---- subcommands ----

struct RatesArgs {
  std::string p, q, sigma, theta, width = "entropy", lambda = "const", out;
  int r = 1, d = 2;
  bool plane = false;
  double n = 0.0;
};

void run_rates(const RatesArgs& a) {
  Json params{{"p", a.p}, {"q", a.q}, {"r", a.r}, {"d", a.d}, {"sigma", a.sigma}, {"width", a.width},
              {"lambda", a.lambda}};
  int variant = -1;
  if (!a.theta.empty()) {
    params["theta"] = a.theta;
    variant = a.plane ? 1 : 0;
  } else if (a.plane) {
    throw validation_failure("--plane needs --theta");
  }
  CString out;
  check(cusp_rates(params.dump().c_str(), variant, a.n, out.out()));
  emit(a.out, out.str());
}

struct PartitionArgs {
  std::string domain, variant = "full", out, audit;
  int levels = 4;
  std::size_t mc_samples = 0;
  std::uint64_t max_cells = 0;
};

void run_partition(const PartitionArgs& a) {
  DomainHandle dom;
  load_domain(a.domain, dom);
  TreeHandle tree;
  check(cusp_tree_build(dom.get(), a.levels, a.variant == "hset" ? 1 : 0, a.max_cells, tree.out()));
  CString csv;
  check(cusp_tree_cells_csv(tree.get(), csv.out()));
  emit(a.out, csv.str());
  if (!a.audit.empty()) {
    CString audit;
    check(cusp_tree_audit(tree.get(), audit.out()));
    Json j = Json::parse(audit.str());
    if (a.mc_samples > 0) {
      CString vol;
      check(cusp_tree_volume_check(tree.get(), a.mc_samples, g_opts.seed, vol.out()));
      j["monte_carlo"] = Json::parse(vol.str());
    }
    emit(a.audit, j.dump(2));
  }
}

struct ApproxArgs {
  std::string domain, function = "cusp_profile", p = "2", q = "2", out, summary;
  std::uint64_t budget = 256;
  int r = 1;
  std::vector<std::uint64_t> record;
};

void run_approx(const ApproxArgs& a) {
  DomainHandle dom;
  load_domain(a.domain, dom);
  std::vector<std::uint64_t> rec = a.record;
  if (rec.empty())
    for (std::uint64_t b = 16; b < a.budget; b *= 2) rec.push_back(b);
  std::sort(rec.begin(), rec.end());
  rec.erase(std::remove_if(rec.begin(), rec.end(), [&](std::uint64_t b) { return b > a.budget; }), rec.end());
  CString csv, summary;
  check(cusp_approx(dom.get(), a.function.c_str(), a.budget, a.r, parse_exponent(a.p, "--p"),
                    parse_exponent(a.q, "--q"), rec.data(), rec.size(), csv.out(), summary.out()));
  emit(a.out, csv.str());
  if (!a.summary.empty()) emit(a.summary, summary.str());
}

struct HSetArgs {
  double theta = 0.5;
  int dim = 2, depth = 6;
  std::string kind = "cantor", out, cells;
  int level = -1;
  std::string check_file;
  std::size_t samples = 1000;
  double sigma = 2.0;
  int levels = 6;
};

void run_hset_build(const HSetArgs& a) {
  HSetHandle h;
  check(cusp_hset_build(a.theta, a.dim, a.depth, a.kind.c_str(), h.out()));
  CString js;
  check(cusp_hset_to_json(h.get(), js.out()));
  emit(a.out, Json::parse(js.str()).dump(2));
  if (!a.cells.empty()) {
    CString csv;
    check(cusp_hset_cells_csv(h.get(), a.level < 0 ? a.depth : a.level, csv.out()));
    emit(a.cells, csv.str());
  }
}

void load_hset(const std::string& path, HSetHandle& h) {
  std::string text = read_file(path);
  check(cusp_hset_from_json(text.c_str(), h.out()));
}

void run_hset_check(const HSetArgs& a) {
  HSetHandle h;
  load_hset(a.check_file, h);
  CString js;
  check(cusp_hset_regularity(h.get(), a.samples, g_opts.seed, g_opts.threads, js.out()));
  emit(a.out, js.str());
}

void run_hset_near(const HSetArgs& a) {
  HSetHandle h;
  load_hset(a.check_file, h);
  CString js;
  check(cusp_hset_near_counts(h.get(), a.sigma, a.levels, js.out()));
  emit(a.out, js.str());
}

struct TreeopArgs {
  std::string tree, p = "2", q = "2", method = "spectral", out;
  double a = 1.0, b = 1.0;
};

void run_treeop_norm(const TreeopArgs& a) {
  std::string text = read_file(a.tree);
  CString js;
  check(cusp_treeop_norm(text.c_str(), parse_exponent(a.p, "--p"), parse_exponent(a.q, "--q"), a.method.c_str(),
                         g_opts.seed, js.out()));
  emit(a.out, js.str());
}

void run_treeop_bound(const TreeopArgs& a) {
  std::string text = read_file(a.tree);
  CString js;
  check(cusp_treeop_bound(text.c_str(), parse_exponent(a.p, "--p"), parse_exponent(a.q, "--q"), a.a, a.b,
                          g_opts.seed, js.out()));
  emit(a.out, js.str());
}

struct BumpArgs {
  double theta = 1.0, sigma = 2.0;
  int d = 3, kmax = 5, r = 1;
  std::string p = "2", q = "2", out, summary, plot;
};

void run_verify_bumps(const BumpArgs& a) {
  CString csv, js;
  check(cusp_verify_bumps(a.theta, a.sigma, a.d, a.kmax, parse_exponent(a.p, "--p"), parse_exponent(a.q, "--q"), a.r,
                          csv.out(), js.out()));
  emit(a.out, csv.str());
  if (!a.summary.empty()) emit(a.summary, js.str());
  if (!a.plot.empty()) {
    Json s = Json::parse(js.str());
    std::vector<double> count, lq;
    for (const auto& row : s["rows"]) {
      count.push_back(row["count"].get<double>());
      lq.push_back(row["lq"].get<double>());
    }
    CString fit;
    check(cusp_fit_slope(count.data(), lq.data(), count.size(), fit.out()));
    Json f = Json::parse(fit.str());
    emit(a.plot, svg_loglog(count, lq, f["slope"], f["intercept"], "#bumps", "||phi_k||_q"));
  }
}

struct WidthArgs {
  std::string domain, out;
  int r = 1, grid = 16, nmax = 32;
  bool interval = false;
};

void run_verify_widths(const WidthArgs& a) {
  CString csv;
  if (a.interval) {
    check(cusp_interval_widths(a.grid, a.r, a.nmax, csv.out()));
  } else {
    if (a.domain.empty()) throw validation_failure("--domain is required unless --interval is given");
    DomainHandle dom;
    load_domain(a.domain, dom);
    check(cusp_verify_widths(dom.get(), a.r, a.grid, a.nmax, csv.out()));
  }
  emit(a.out, csv.str());
}

struct SlopeArgs {
  std::string csv, xcol = "n", ycol = "e", out, plot;
};

void run_verify_slope(const SlopeArgs& a) {
  std::string text = read_file(a.csv);
  CString js;
  check(cusp_fit_slope_csv(text.c_str(), a.xcol.c_str(), a.ycol.c_str(), js.out()));
  emit(a.out, js.str());
  if (!a.plot.empty()) {
    Json f = Json::parse(js.str());
    auto [xs, ys] = csv_columns(text, a.xcol, a.ycol);
    emit(a.plot, svg_loglog(xs, ys, f["slope"], f["intercept"], a.xcol, a.ycol));
  }
}

void print_error(const std::string& json) { std::cerr << json << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximation on cusp domains: rates, partitions, adaptive approximation and checks", "cusp-cli"};
  app.require_subcommand(1);
  app.add_option("--seed", g_opts.seed, "Seed for all stochastic sampling")->capture_default_str();
  app.add_option("--threads", g_opts.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g_opts.out_dir, "Directory for relative output paths");

  RatesArgs rates;
  auto* c_rates = app.add_subcommand("rates", "Exact rate exponents for entropy numbers and widths");
  c_rates->add_option("--p", rates.p, "Source exponent (number, a/b or inf)")->required();
  c_rates->add_option("--q", rates.q, "Target exponent")->required();
  c_rates->add_option("--r", rates.r, "Smoothness")->required();
  c_rates->add_option("--d", rates.d, "Dimension")->required();
  c_rates->add_option("--sigma", rates.sigma, "Hoelder exponent of the boundary modulus")->required();
  c_rates->add_option("--theta", rates.theta, "h-set dimension; switches to the h-set rates");
  c_rates->add_flag("--plane", rates.plane, "h-set is a coordinate plane");
  c_rates->add_option("--width", rates.width, "entropy|kolmogorov|linear|gelfand")
      ->check(CLI::IsMember({"entropy", "kolmogorov", "linear", "gelfand"}))
      ->capture_default_str();
  c_rates->add_option("--lambda", rates.lambda, "Slow variation: const or logpow:B")->capture_default_str();
  c_rates->add_option("--n", rates.n, "Evaluate the tau factor at n");
  c_rates->add_option("--out", rates.out, "Output JSON (default stdout)");
  c_rates->callback([&] { run_rates(rates); });

  PartitionArgs part;
  auto* c_part = app.add_subcommand("partition", "Build the cell tree and dump its cells");
  c_part->add_option("--domain", part.domain, "Domain JSON")->required();
  c_part->add_option("--levels", part.levels, "Deepest level K")->required()->check(CLI::Range(0, 30));
  c_part->add_option("--variant", part.variant, "full|hset")->check(CLI::IsMember({"full", "hset"}))
      ->capture_default_str();
  c_part->add_option("--out", part.out, "Cells CSV (default stdout)");
  c_part->add_option("--audit", part.audit, "Write the invariant audit JSON here");
  c_part->add_option("--mc-samples", part.mc_samples, "Monte-Carlo volume samples for the audit");
  c_part->add_option("--max-cells", part.max_cells, "Refuse trees larger than this");
  c_part->callback([&] { run_partition(part); });

  ApproxArgs approx;
  auto* c_approx = app.add_subcommand("approx", "Greedy adaptive piecewise-polynomial approximation");
  c_approx->add_option("--domain", approx.domain, "Domain JSON")->required();
  c_approx->add_option("--function", approx.function,
                       "const:C, x1..x4, sinprod, smoothstep, cusp_profile or a polynomial JSON file")
      ->capture_default_str();
  c_approx->add_option("--budget", approx.budget, "Number of pieces")->required();
  c_approx->add_option("--r", approx.r, "Polynomial order (degree r-1 per coordinate)")->capture_default_str();
  c_approx->add_option("--p", approx.p, "Sobolev exponent")->capture_default_str();
  c_approx->add_option("--q", approx.q, "Error norm exponent")->capture_default_str();
  c_approx->add_option("--record", approx.record, "Budgets to record (default 16, 32, ... below the budget)");
  c_approx->add_option("--out", approx.out, "Error CSV (default stdout)");
  c_approx->add_option("--summary", approx.summary, "Summary JSON with the fitted slope");
  c_approx->callback([&] { run_approx(approx); });

  HSetArgs hs;
  auto* c_hset = app.add_subcommand("hset", "Cantor-type h-sets");
  c_hset->require_subcommand(1);
  auto* c_hbuild = c_hset->add_subcommand("build", "Generate an h-set");
  c_hbuild->add_option("--theta", hs.theta, "Regularity exponent")->required();
  c_hbuild->add_option("--dim", hs.dim, "Ambient domain dimension d")->required();
  c_hbuild->add_option("--depth", hs.depth, "Generation depth K")->required();
  c_hbuild->add_option("--kind", hs.kind, "cantor|plane")->check(CLI::IsMember({"cantor", "plane"}))
      ->capture_default_str();
  c_hbuild->add_option("--out", hs.out, "h-set JSON (default stdout)");
  c_hbuild->add_option("--cells", hs.cells, "Cell CSV path");
  c_hbuild->add_option("--level", hs.level, "Level for the cell CSV (default depth)");
  c_hbuild->callback([&] { run_hset_build(hs); });
  auto* c_hcheck = c_hset->add_subcommand("check", "Ball-mass regularity ratios");
  c_hcheck->add_option("--hset", hs.check_file, "h-set JSON")->required();
  c_hcheck->add_option("--samples", hs.samples, "Sample points")->capture_default_str();
  c_hcheck->add_option("--out", hs.out, "Report JSON (default stdout)");
  c_hcheck->callback([&] { run_hset_check(hs); });
  auto* c_hnear = c_hset->add_subcommand("near", "Near-cell counts of the pruned tree");
  c_hnear->add_option("--hset", hs.check_file, "h-set JSON")->required();
  c_hnear->add_option("--sigma", hs.sigma, "Cusp exponent")->capture_default_str();
  c_hnear->add_option("--levels", hs.levels, "Deepest level")->capture_default_str();
  c_hnear->add_option("--out", hs.out, "Report JSON (default stdout)");
  c_hnear->callback([&] { run_hset_near(hs); });

  TreeopArgs top;
  auto* c_treeop = app.add_subcommand("treeop", "Weighted summation operators on trees");
  c_treeop->require_subcommand(1);
  auto* c_norm = c_treeop->add_subcommand("norm", "Operator norm from l_p to l_q");
  c_norm->add_option("--tree", top.tree, "Tree JSON")->required();
  c_norm->add_option("--p", top.p, "Source exponent")->capture_default_str();
  c_norm->add_option("--q", top.q, "Target exponent")->capture_default_str();
  c_norm->add_option("--method", top.method, "spectral|ascent|exhaustive")
      ->check(CLI::IsMember({"spectral", "ascent", "exhaustive"}))
      ->capture_default_str();
  c_norm->add_option("--out", top.out, "Report JSON (default stdout)");
  c_norm->callback([&] { run_treeop_norm(top); });
  auto* c_bound = c_treeop->add_subcommand("bound", "Certified norm against 64 sup g v");
  c_bound->add_option("--tree", top.tree, "Tree JSON")->required();
  c_bound->add_option("--p", top.p, "Source exponent")->capture_default_str();
  c_bound->add_option("--q", top.q, "Target exponent")->capture_default_str();
  c_bound->add_option("--a", top.a, "Decay rate a")->capture_default_str();
  c_bound->add_option("--b", top.b, "Decay constant b")->capture_default_str();
  c_bound->add_option("--out", top.out, "Report JSON (default stdout)");
  c_bound->callback([&] { run_treeop_bound(top); });

  auto* c_verify = app.add_subcommand("verify", "Empirical checks");
  c_verify->require_subcommand(1);
  BumpArgs bumps;
  auto* c_bumps = c_verify->add_subcommand("bumps", "Norm scaling of the bump family");
  c_bumps->add_option("--theta", bumps.theta, "h-set dimension")->capture_default_str();
  c_bumps->add_option("--sigma", bumps.sigma, "Cusp exponent")->capture_default_str();
  c_bumps->add_option("--d", bumps.d, "Dimension")->capture_default_str();
  c_bumps->add_option("--kmax", bumps.kmax, "Deepest bump level")->capture_default_str();
  c_bumps->add_option("--p", bumps.p, "Sobolev exponent")->capture_default_str();
  c_bumps->add_option("--q", bumps.q, "Target exponent")->capture_default_str();
  c_bumps->add_option("--r", bumps.r, "Smoothness")->capture_default_str();
  c_bumps->add_option("--out", bumps.out, "Rows CSV (default stdout)");
  c_bumps->add_option("--summary", bumps.summary, "Slopes JSON");
  c_bumps->add_option("--plot", bumps.plot, "SVG log plot of the L_q norms");
  c_bumps->callback([&] { run_verify_bumps(bumps); });
  WidthArgs widths;
  auto* c_widths = c_verify->add_subcommand("widths", "Discrete Sobolev-ball widths by SVD");
  c_widths->add_option("--domain", widths.domain, "Domain JSON");
  c_widths->add_flag("--interval", widths.interval, "Use the unit interval instead of a domain");
  c_widths->add_option("--r", widths.r, "Smoothness")->capture_default_str();
  c_widths->add_option("--grid", widths.grid, "Grid points per unit length")->capture_default_str();
  c_widths->add_option("--nmax", widths.nmax, "Largest n")->capture_default_str();
  c_widths->add_option("--out", widths.out, "Widths CSV (default stdout)");
  c_widths->callback([&] { run_verify_widths(widths); });
  SlopeArgs slope;
  auto* c_slope = c_verify->add_subcommand("slope", "Least-squares log-log slope of a CSV column pair");
  c_slope->add_option("--csv", slope.csv, "Input CSV")->required();
  c_slope->add_option("--xcol", slope.xcol, "Column with n")->capture_default_str();
  c_slope->add_option("--ycol", slope.ycol, "Column with e")->capture_default_str();
  c_slope->add_option("--out", slope.out, "Fit JSON (default stdout)");
  c_slope->add_option("--plot", slope.plot, "SVG log-log plot");
  c_slope->callback([&] { run_verify_slope(slope); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(Json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump());
    return kExitValidation;
  } catch (const Failure& f) {
    print_error(f.json);
    return f.status == CUSP_ERR_IO ? kExitIo : kExitValidation;
  } catch (const Json::exception& e) {
    print_error(Json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump());
    return kExitValidation;
  }
  return 0;
}
