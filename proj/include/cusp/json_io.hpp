#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cusp/empirics.hpp"
#include "cusp/error.hpp"
#include "cusp/hset.hpp"
#include "cusp/local_approx.hpp"
#include "cusp/partition.hpp"
#include "cusp/rates.hpp"
#include "cusp/tree_summation.hpp"

namespace cusp {

using Json = nlohmann::json;

// %.17g in the C locale.
std::string format_double(double x);

// Keys: p, q, r, d, sigma, theta, width, lambda. Exponents and sigma/theta accept "a/b", decimals or "inf".
ParamSet params_from_json(const Json& j);

Json to_json(const RatePrediction& r);
Json to_json(const HSetPrediction& h);
Json to_json(const AuditReport& a);
Json to_json(const VolumeCheck& v);
Json to_json(const std::vector<NearCount>& counts);
Json to_json(const RegularityReport& r);
Json to_json(const NormEstimate& n);
Json to_json(const BoundReport& b);
Json to_json(const NormScaling& s);
Json to_json(const FitResult& f);
Json error_json(ErrorKind kind, const std::string& message);

void write_budget_csv(const std::vector<BudgetPoint>& rows, std::ostream& out);
void write_bumps_csv(const NormScaling& s, std::ostream& out);
void write_widths_csv(const std::vector<WidthEstimate>& rows, std::ostream& out);
// level, center_1..center_k, halfwidth, mass
void write_hset_cells_csv(const HSet& g, int level, std::ostream& out);

// Two numeric columns picked by header name from a comma-separated file.
std::pair<std::vector<double>, std::vector<double>> read_xy_csv(std::istream& in, const std::string& xcol,
                                                                const std::string& ycol);

}  // namespace cusp
