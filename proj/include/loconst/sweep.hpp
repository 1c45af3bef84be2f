#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "loconst/json_io.hpp"

namespace loconst {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntRange {
  long lo = 0;
  long hi = -1;

  bool empty() const { return hi < lo; }
  bool contains(long x) const { return lo <= x && x <= hi; }
};

struct SweepConfig {
  std::vector<int> primes{3, 5, 7};
  std::optional<IntRange> b;  // default: every b the suite allows
  std::optional<IntRange> m;
  IntRange t{1, 2};
  IntRange s{1, 2};
  long r_max = 40;            // divconds degree bound
  int samples = 100;          // divconds polynomials per (p, r)
  int m_max = 4;              // divconds
  std::vector<Rational> ap_valuations{Rational::make(1, 1)};
  std::vector<long> ap_units{1, 2};
  std::string precision = "auto";  // "auto" or a fixed absolute precision M
  unsigned long seed = 1;
  int workers = 0;            // 0: LOCONST_WORKERS or the hardware count
  bool timings = false;
  std::string jsonl_path;     // empty: stdout
  std::string csv_path;       // empty: no CSV

  /// Throws ConfigError on empty prime lists, bad primes, empty ranges or an
  /// unknown precision policy.
  void validate() const;
  long fixed_precision() const;  // 0 under the auto policy
  int resolved_workers() const;
};

/// Reads the declarative config file format (JSON). Unknown keys are errors.
SweepConfig config_from_json(const Json& j);

/// Odd primes up to and including max_p.
std::vector<int> odd_primes_upto(int max_p);

struct RunRecord {
  std::string suite;
  std::string claim;
  Json params = Json::object();
  std::string verdict;  // pass, fail, error, report
  Json margin;          // valuation or precision slack; null when not meaningful
  Json detail = Json::object();
  double wall_ms = 0;
};

struct SuiteResult {
  std::string suite;
  std::vector<std::string> csv_columns;
  std::vector<RunRecord> records;

  int count(const std::string& verdict) const;
  /// 0 when every record passes, 1 when a claim failed, 2 on errors.
  int exit_code() const;
};

const std::vector<std::string>& suite_names();

/// Runs one suite over the configured grid. Records come back in canonical
/// parameter order regardless of the worker count.
SuiteResult run_suite(const std::string& name, const SweepConfig& cfg);

void write_jsonl(const SuiteResult& res, std::ostream& os, bool timings);
void write_csv(const SuiteResult& res, std::ostream& os);

}  // namespace loconst
