#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mvpois/er_moments.hpp"
#include "mvpois/er_simulator.hpp"
#include "mvpois/hypergeometric.hpp"

namespace mvpois {

// Shortest round-trip-safe text for a double ("inf", "nan" when not finite).
std::string format_number(double x);

// Plain CSV with an optional '#'-prefixed footer.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  void add_footer(std::string line);
  std::size_t row_count() const { return rows_.size(); }
  void write(std::ostream& os) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::string> footer_;
};

nlohmann::json to_json(const MomentSet& m);
nlohmann::json to_json(const MomentBound& b);
nlohmann::json to_json(const T5Bracket& b);
nlohmann::json to_json(const T5bReport& r);
nlohmann::json to_json(const SharedEdgeStats& s);
nlohmann::json to_json(const DistanceEstimate& d);
nlohmann::json to_json(const RateSweepResult& r);
nlohmann::json to_json(const UrnBound& b);
nlohmann::json to_json(const PoissonComparison& c);
nlohmann::json to_json(const TailEstimate& t);
nlohmann::json to_json(const LinearFit& f);

}  // namespace mvpois
