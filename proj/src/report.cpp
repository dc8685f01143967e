#include "mvpois/report.hpp"

#include <charconv>
#include <cmath>

#include "mvpois/errors.hpp"

namespace mvpois {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw InvariantError("CsvTable: row width differs from header");
  rows_.push_back(std::move(cells));
}

void CsvTable::add_footer(std::string line) { footer_.push_back(std::move(line)); }

namespace {

std::string quoted(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void CsvTable::write(std::ostream& os) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << quoted(cells[i]);
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  for (const auto& f : footer_) os << "# " << f << '\n';
}

nlohmann::json to_json(const MomentSet& m) {
  return {{"lambda", m.lambda}, {"variance", m.variance}, {"covariance", m.covariance}};
}

nlohmann::json to_json(const MomentBound& b) {
  return {{"value", b.value},
          {"diagonal_part", b.diagonal_part},
          {"cross_part", b.cross_part},
          {"diagonal_terms", b.diagonal_terms},
          {"negative_warning", b.negative_warning},
          {"coupling", b.certified == CouplingDirection::kIncreasing ? "increasing" : "decreasing"}};
}

nlohmann::json to_json(const T5Bracket& b) {
  return {{"bracket", b.value},
          {"diag_terms", b.diag_terms},
          {"cross_part", b.cross_part},
          {"gamma", b.gamma},
          {"out_of_model", b.out_of_model}};
}

nlohmann::json to_json(const T5bReport& r) {
  nlohmann::json patterns = nlohmann::json::array();
  for (const auto& p : r.patterns) {
    nlohmann::json j = {{"pattern", p.name},
                        {"regime", to_string(p.regime)},
                        {"density", p.density},
                        {"strictly_balanced", p.strictly_balanced},
                        {"lambda", p.lambda}};
    if (p.gamma) j["gamma"] = *p.gamma;
    if (p.eta) j["eta"] = *p.eta;
    if (p.lambda_limit) j["lambda_limit"] = *p.lambda_limit;
    patterns.push_back(j);
  }
  nlohmann::json out = {{"c", r.c}, {"alpha", r.alpha}, {"n", r.n}, {"p", r.p}, {"patterns", patterns},
                        {"warnings", r.warnings}};
  if (r.critical_rate) out["critical_rate"] = *r.critical_rate;
  return out;
}

nlohmann::json to_json(const SharedEdgeStats& s) {
  nlohmann::json ell = nlohmann::json::object();
  for (const auto& [k, l] : s.ell) ell[std::to_string(k)] = l;
  return {{"M", s.max_shared}, {"ell", ell}, {"K", s.feasible}};
}

nlohmann::json to_json(const DistanceEstimate& d) {
  return {{"mode", "mc"},
          {"trials", d.trials},
          {"lambda", d.lambda},
          {"dw", d.dw},
          {"dw_budget", d.dw_budget},
          {"dw_stderr", d.dw_stderr},
          {"tv", d.tv},
          {"tv_budget", d.tv_budget},
          {"tv_stderr", d.tv_stderr},
          {"sample_mean", d.sample_mean},
          {"sample_mean_stderr", d.sample_mean_stderr}};
}

nlohmann::json to_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"slope_stderr", f.slope_stderr}};
}

nlohmann::json to_json(const RateSweepResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"p", row.p},
                    {"trials", row.trials},
                    {"distance", to_json(row.distance)},
                    {"moments", to_json(row.moments)},
                    {"bound_t4", row.bound_t4},
                    {"bracket_t5", row.bracket},
                    {"out_of_model", row.out_of_model}});
  }
  nlohmann::json out = {{"rows", rows}, {"fitted", r.fitted}, {"warnings", r.warnings}};
  if (r.fitted) {
    out["dw_fit"] = to_json(r.dw_fit);
    out["dw_slope_bootstrap_se"] = r.dw_slope_bootstrap_se;
  }
  if (r.rows.size() >= 3) {
    out["bracket_fit"] = to_json(r.bracket_fit);
    out["bound_fit"] = to_json(r.bound_fit);
  }
  return out;
}

nlohmann::json to_json(const UrnBound& b) {
  return {{"value", b.value},
          {"diag_terms", b.diag_terms},
          {"cross_statement", b.cross_statement},
          {"cross_proof", b.cross_proof},
          {"vacuous", b.vacuous}};
}

nlohmann::json to_json(const PoissonComparison& c) {
  return {{"mode", "exact"}, {"dw", c.dw}, {"dw_budget", c.dw_budget}, {"tv", c.tv}, {"tv_budget", c.tv_budget}};
}

nlohmann::json to_json(const TailEstimate& t) {
  return {{"mode", "mc"},
          {"trials", t.trials},
          {"lambda", t.lambda},
          {"tail_frequency", t.frequency},
          {"tail_stderr", t.frequency_stderr},
          {"chebyshev", t.chebyshev},
          {"positive_frequency", t.positive_frequency},
          {"mean", t.mean},
          {"mean_stderr", t.mean_stderr}};
}

}  // namespace mvpois
