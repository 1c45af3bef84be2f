#include "loconst/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <random>
#include <thread>

#include "loconst/polymod.hpp"

namespace loconst {

namespace {

struct Point {
  Json params;
  std::function<void(RunRecord&)> run;
};

std::vector<RunRecord> run_points(const std::string& suite, const std::string& claim,
                                  std::vector<Point>& points, int workers) {
  std::vector<RunRecord> out(points.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < points.size();) {
      RunRecord& rec = out[i];
      rec.suite = suite;
      rec.claim = claim;
      rec.params = points[i].params;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        points[i].run(rec);
      } catch (const PrecisionError& e) {
        rec.verdict = "error";
        rec.detail["error"] = std::string("insufficient precision: ") + e.what();
      } catch (const std::exception& e) {
        rec.verdict = "error";
        rec.detail["error"] = e.what();
      }
      rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

std::vector<long> range_values(const IntRange& r) {
  std::vector<long> out;
  for (long x = r.lo; x <= r.hi; ++x) out.push_back(x);
  return out;
}

/// Values of `want` inside [lo, hi], or all of [lo, hi] when unset.
std::vector<long> clipped(const std::optional<IntRange>& want, long lo, long hi) {
  if (want) lo = std::max(lo, want->lo), hi = std::min(hi, want->hi);
  return range_values({lo, hi});
}

long ipow(long p, long t) {
  long out = 1;
  while (t-- > 0) out *= p;
  return out;
}

long pos_mod(long x, long n) {
  x %= n;
  return x < 0 ? x + n : x;
}

HomPoly random_class_poly(std::mt19937_64& rng, int p, int r, int a) {
  std::uniform_int_distribution<long> c(0, p - 1);
  HomPoly f(p, r);
  for (int i = a; i <= r; i += p - 1) f.set(i, c(rng));
  return f;
}

// ------------------------------------------------------------------ suites

SuiteResult suite_divconds(const SweepConfig& cfg) {
  std::vector<Point> pts;
  for (int p : cfg.primes)
    for (long r = 1; r <= cfg.r_max; ++r)
      pts.push_back({{{"p", p}, {"r", r}}, [&cfg, p, r](RunRecord& rec) {
                       std::seed_seq seq{static_cast<unsigned long>(cfg.seed), static_cast<unsigned long>(p),
                                         static_cast<unsigned long>(r)};
                       std::mt19937_64 rng(seq);
                       long samples = 0, comparisons = 0, disagreements = 0;
                       std::vector<long> per_m(cfg.m_max + 1, 0);
                       Json first;
                       for (int n = 0; n < cfg.samples; ++n) {
                         const int a = std::uniform_int_distribution<int>(0, std::min<int>(p - 2, r))(rng);
                         HomPoly f = random_class_poly(rng, p, r, a);
                         if (n % 2 && r >= p + 1) {
                           const int k = std::uniform_int_distribution<int>(
                               1, std::min<int>(cfg.m_max, r / (p + 1)))(rng);
                           const int rg = r - k * (p + 1);
                           f = theta_power(p, k) * random_class_poly(rng, p, rg, std::min(a, rg));
                         }
                         if (f.is_zero()) continue;
                         ++samples;
                         int cls = -1;
                         for (int i = 0; i <= r; ++i)
                           if (f.coeff(i)) cls = i % (p - 1);
                         const int ord = theta_order(f);
                         for (int m = 0; m <= cfg.m_max; ++m) {
                           ++comparisons;
                           const bool crit = divconds_check(f, m, cls);
                           if (crit != (ord >= m)) {
                             ++disagreements;
                             ++per_m[m];
                             if (first.is_null())
                               first = {{"m", m}, {"theta_order", ord}, {"divconds", crit}, {"poly", to_json(f)}};
                           }
                         }
                       }
                       rec.verdict = disagreements == 0 ? "pass" : "fail";
                       rec.detail = {{"samples", samples},
                                     {"comparisons", comparisons},
                                     {"disagreements", disagreements},
                                     {"disagreements_by_m", per_m}};
                       if (!first.is_null()) rec.detail["first_counterexample"] = first;
                     }});
  return {"divconds",
          {"p", "r", "samples", "comparisons", "disagreements", "verdict"},
          run_points("divconds", "theta^m | F iff the support and factorial-binomial conditions hold", pts,
                     cfg.resolved_workers())};
}

template <class Body>
std::vector<Point> polynomial_grid(const SweepConfig& cfg, bool strict, Body body) {
  std::vector<Point> pts;
  for (int p : cfg.primes)
    for (long b : clipped(cfg.b, 1, p - 1))
      for (long m : clipped(cfg.m, 1, b / 2)) {
        if (strict && 2 * m >= b) continue;
        for (long t : range_values(cfg.t))
          for (long s : range_values(cfg.s)) {
            if (s % p == 0) continue;
            const long r = b + s * ipow(p, t) * (p - 1);
            pts.push_back({{{"p", p}, {"r", r}, {"b", b}, {"m", m}, {"t", t}, {"s", s}},
                           [=](RunRecord& rec) { body(rec, p, r, int(b), int(m)); }});
          }
      }
  return pts;
}

SuiteResult suite_polynomial_a(const SweepConfig& cfg) {
  auto pts = polynomial_grid(cfg, false, [](RunRecord& rec, int p, long r, int b, int m) {
    const HomPoly F = make_Fm(p, r, b, m);
    const int ord = theta_order(F);
    const bool dc = divconds_check(F, m, static_cast<int>(pos_mod(b - m, p - 1)));
    rec.verdict = ord == m ? "pass" : "fail";
    rec.margin = ord - m;
    rec.detail = {{"theta_order", ord}, {"divconds", dc}};
  });
  return {"polynomial_a",
          {"p", "r", "b", "m", "t", "s", "theta_order", "divconds", "verdict"},
          run_points("polynomial_a", "F_m has theta-order exactly m", pts, cfg.resolved_workers())};
}

SuiteResult suite_polynomial_b(const SweepConfig& cfg) {
  auto pts = polynomial_grid(cfg, true, [](RunRecord& rec, int p, long r, int b, int m) {
    const int hord = theta_order(make_Hm(p, r, b, m));
    const bool hm_ok = hord >= m + 1;
    const HomPoly q = quotient_coords(make_Fm(p, r, b, m), m);
    const int span = gamma_span_dim({q}, p);
    int expected;
    std::string from;
    if (r <= 300) {
      expected = filtration_dim(p, r, m) - filtration_dim(p, r, m + 1);
      from = "rank";
    } else {
      expected = ThetaQuotient(p, q.r()).dim();
      from = "quotient basis";
    }
    const bool ok = hm_ok && span == expected && expected == p + 1;
    rec.verdict = ok ? "pass" : "fail";
    rec.margin = hord - (m + 1);
    rec.detail = {{"theta_order_Hm", hord}, {"Hm_ok", hm_ok}, {"span_dim", span},
                  {"expected_dim", expected}, {"expected_from", from}};
  });
  return {"polynomial_b",
          {"p", "r", "b", "m", "t", "s", "theta_order_Hm", "Hm_ok", "span_dim", "expected_dim", "verdict"},
          run_points("polynomial_b", "H_m lies in V_r^(m+1) and F_m generates V_r^(m)/V_r^(m+1)", pts,
                     cfg.resolved_workers())};
}

SuiteResult suite_cong2(const SweepConfig& cfg) {
  std::vector<Point> pts;
  for (int p : cfg.primes)
    for (long b : clipped(cfg.b, 1, p - 1))
      for (long s : range_values(cfg.s)) {
        if (s % p == 0) continue;
        for (long t : range_values(cfg.t))
          for (long i = 0; i < b; ++i)
            for (long m : clipped(cfg.m, 0, p - 2)) {
              pts.push_back({{{"p", p}, {"b", b}, {"s", s}, {"t", t}, {"i", i}, {"m", m}},
                             [=](RunRecord& rec) {
                               const SumParams q{p, int(b), s, int(t), int(i), int(m)};
                               const int K = int(t) + 2;
                               mpz_class mod;
                               mpz_ui_pow_ui(mod.get_mpz_t(), p, K);
                               const mpz_class S = S_sum_mod(q, K);
                               const long r = q.r();
                               mpz_class target = binomial(r, i) * (binomial(b - i, m) - binomial(r - i, m));
                               mpz_fdiv_r(target.get_mpz_t(), target.get_mpz_t(), mod.get_mpz_t());
                               mpz_class diff = S - target;
                               mpz_fdiv_r(diff.get_mpz_t(), diff.get_mpz_t(), mod.get_mpz_t());
                               const long vS = S == 0 ? K : vp(S, p);
                               const long vD = diff == 0 ? K : vp(diff, p);
                               const bool pt = vS >= t, pt1 = vD >= t + 1;
                               const bool corner = b == p - 1 && m == 0;
                               rec.verdict = corner ? "report" : (pt && pt1 ? "pass" : "fail");
                               rec.margin = std::min(vS - t, vD - (t + 1));
                               rec.detail = {{"K", K},
                                             {"S", S.get_str()},
                                             {"target", target.get_str()},
                                             {"v_S", vS},
                                             {"v_diff", vD},
                                             {"capped_at_K", S == 0 || diff == 0},
                                             {"pass_t", pt},
                                             {"pass_t1", pt1},
                                             {"boundary_corner", corner}};
                             }});
            }
      }
  return {"cong2",
          {"p", "b", "s", "t", "i", "m", "K", "S", "target", "v_S", "v_diff", "pass_t", "pass_t1", "verdict"},
          run_points("cong2", "v_p(S) >= t and v_p(S - target) >= t+1", pts, cfg.resolved_workers())};
}

SuiteResult suite_witness(const SweepConfig& cfg) {
  std::vector<Point> pts;
  const long fixed_M = cfg.fixed_precision();
  for (int p : cfg.primes)
    for (const Rational& v : cfg.ap_valuations) {
      const long num = v.num, den = v.den;
      // t > 2v - 1
      const long t_min = (2 * num - den) >= 0 ? (2 * num - den) / den + 1 : 1;
      std::vector<long> ts;
      for (long t : range_values(cfg.t))
        if (t >= t_min) ts.push_back(t);
      if (ts.empty()) ts.push_back(t_min);
      const long b_lo = (2 * num + den - 1) / den;
      for (long b : clipped(cfg.b, std::max(1L, b_lo), p - 1)) {
        const bool boundary = 2 * num == b * den;
        if (boundary && b % 2 == 0) continue;
        std::vector<long> units;
        for (long u : cfg.ap_units)
          if (pos_mod(u, p) != 0) units.push_back(u);
        if (units.empty()) continue;
        if (!boundary) units.resize(1);
        for (long m : clipped(cfg.m, 1, num / den))
          for (long t : ts)
            for (long s : range_values(cfg.s)) {
              if (s % p == 0) continue;
              for (long u : units) {
                WitnessParams wp;
                wp.p = p;
                wp.e = static_cast<int>(den);
                wp.h = num;
                wp.unit = {u};
                wp.b = static_cast<int>(b);
                wp.m = static_cast<int>(m);
                wp.t = static_cast<int>(t);
                wp.s = s;
                wp.M = fixed_M;
                Json params = to_json(wp);
                params["v"] = v.to_string();
                params["r"] = wp.r();
                pts.push_back({params, [wp](RunRecord& rec) {
                                 const WitnessReport rep = verify_witness(wp);
                                 long min_val = rep.M, min_prec = rep.M;
                                 for (const auto& c : rep.claims) {
                                   min_val = std::min(min_val, c.min_val);
                                   min_prec = std::min(min_prec, c.min_prec);
                                 }
                                 if (rep.insufficient_precision()) {
                                   rec.verdict = "error";
                                   rec.detail["error"] = "insufficient precision";
                                 } else {
                                   rec.verdict = rep.passed() ? "pass" : "fail";
                                 }
                                 rec.margin = min_val;
                                 const Json full = to_json(rep);
                                 rec.detail = {{"M", rep.M},
                                               {"min_val", min_val},
                                               {"precision_slack", min_prec - 1},
                                               {"integrality", full["integrality"]},
                                               {"match", rep.passed()},
                                               {"generator_vanishes", rep.certifies_generator_vanishes()},
                                               {"boundary", rep.boundary},
                                               {"exceptional", rep.exceptional},
                                               {"boundary_flags", full["boundary_flags"]}};
                                 if (rep.outside_hypotheses) rec.detail["label"] = "outside theorem hypotheses";
                               }});
              }
            }
      }
    }
  return {"witness",
          {"p", "e", "ap_h", "b", "m", "t", "s", "r", "M", "boundary", "exceptional", "match", "min_val",
           "precision_slack", "verdict"},
          run_points("witness", "(T - a_p)(f0 + f1) is integral with the predicted reduction", pts,
                     cfg.resolved_workers())};
}

SuiteResult suite_llc_roundtrip(const SweepConfig& cfg) {
  std::vector<Point> pts;
  for (int p : cfg.primes)
    pts.push_back({{{"p", p}}, [p](RunRecord& rec) {
                     const int g = primitive_root(p);
                     long cases = 0, failures = 0;
                     Json first;
                     auto check = [&](const GaloisDescriptor& raw) {
                       ++cases;
                       const GaloisDescriptor gal = canonical(raw, p);
                       bool ok;
                       try {
                         ok = ll_inverse(ll_forward(gal, p), p) == gal;
                       } catch (const std::invalid_argument&) {
                         ok = false;
                       }
                       if (!ok && failures++ == 0) first = to_json(gal);
                     };
                     for (int j = 0; j < p - 1; ++j)
                       for (int u : {1, g}) {
                         const Character eta{j, u};
                         for (long c = 0; c < long(p) * p - 1; ++c)
                           if (c % (p + 1) != 0) check(GaloisDescriptor::irreducible(c, eta));
                         for (int a = 0; a < p - 1; ++a)
                           for (int lam = 1; lam < p; ++lam) check(GaloisDescriptor::reducible(a, lam, eta));
                       }
                     rec.verdict = failures == 0 ? "pass" : "fail";
                     rec.detail = {{"cases", cases}, {"failures", failures}};
                     if (!first.is_null()) rec.detail["first_failure"] = first;
                   }});
  return {"llc_roundtrip",
          {"p", "cases", "failures", "verdict"},
          run_points("llc_roundtrip", "ll_inverse(ll_forward(g)) = g", pts, cfg.resolved_workers())};
}

SuiteResult suite_reduce(const SweepConfig& cfg) {
  std::vector<Point> pts;
  for (int p : cfg.primes)
    for (const Rational& v : cfg.ap_valuations)
      for (long k0 = 3; k0 <= p + 1; ++k0) {
        std::vector<std::pair<long, long>> ks{{k0, -1}};  // (k, t)
        for (long t : range_values(cfg.t))
          for (long s : range_values(cfg.s))
            if (s % p != 0) ks.push_back({k0 + s * ipow(p, t) * (p - 1), t});
        for (long u : cfg.ap_units) {
          if (pos_mod(u, p) == 0) continue;
          for (const auto& [k, t] : ks) {
            Json params = {{"p", p}, {"k", k}, {"v", v.to_string()}, {"residue", u}, {"k0", k0}};
            params["t"] = t < 0 ? Json("inf") : Json(t);
            pts.push_back({params, [=](RunRecord& rec) {
                             const ReductionReport rep = decide_reduction(p, k, {v, int(u), false});
                             bool all_ok = true;
                             for (const auto& c : rep.checks) all_ok = all_ok && c.ok;
                             bool consistent;
                             if (rep.verdict)
                               consistent = all_ok && rep.exception_flags.empty() &&
                                            *rep.verdict == canonical(GaloisDescriptor::irreducible(k0 - 1), p);
                             else
                               consistent = !all_ok || !rep.exception_flags.empty();
                             rec.verdict = consistent ? "pass" : "fail";
                             rec.detail = {{"verdict", rep.verdict ? rep.verdict->to_string() : "outside known range"},
                                           {"b", rep.b},
                                           {"exception_flags", rep.exception_flags},
                                           {"flags", static_cast<long>(rep.exception_flags.size())}};
                           }});
          }
        }
      }
  return {"reduce",
          {"p", "k", "v", "residue", "k0", "t", "verdict", "flags"},
          run_points("reduce", "reduction verdict consistent with its hypothesis checks", pts,
                     cfg.resolved_workers())};
}

std::string csv_cell(const Json& j) {
  if (j.is_null()) return "";
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return j.dump();
}

}  // namespace

// ------------------------------------------------------------------ config

void SweepConfig::validate() const {
  if (primes.empty()) throw ConfigError("prime list is empty");
  for (int p : primes)
    if (p == 2 || !is_prime(p)) throw ConfigError("not an odd prime: " + std::to_string(p));
  if (b && b->empty()) throw ConfigError("b range is empty");
  if (m && m->empty()) throw ConfigError("m range is empty");
  if (t.empty() || t.lo < 1) throw ConfigError("t range must be nonempty with t >= 1");
  if (s.empty() || s.lo < 1) throw ConfigError("s range must be nonempty with s >= 1");
  if (r_max < 1) throw ConfigError("r_max must be positive");
  if (samples < 1) throw ConfigError("samples must be positive");
  if (m_max < 0) throw ConfigError("m_max must be nonnegative");
  if (ap_valuations.empty()) throw ConfigError("ap valuation list is empty");
  for (const auto& v : ap_valuations)
    if (v.num <= 0) throw ConfigError("ap valuations must be positive");
  if (ap_units.empty()) throw ConfigError("ap unit list is empty");
  fixed_precision();
  if (workers < 0) throw ConfigError("workers must be >= 0");
}

long SweepConfig::fixed_precision() const {
  if (precision == "auto") return 0;
  try {
    size_t used = 0;
    const long M = std::stol(precision, &used);
    if (used == precision.size() && M > 0) return M;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("precision policy must be 'auto' or a positive integer, got '" + precision + "'");
}

int SweepConfig::resolved_workers() const {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("LOCONST_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  SweepConfig cfg;
  auto range = [](const Json& x, const std::string& key) {
    if (!x.is_array() || x.size() != 2) throw ConfigError(key + " must be [lo, hi]");
    return IntRange{x[0].get<long>(), x[1].get<long>()};
  };
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "primes") cfg.primes = val.get<std::vector<int>>();
      else if (key == "max_p") cfg.primes = odd_primes_upto(val.get<int>());
      else if (key == "b") cfg.b = range(val, key);
      else if (key == "m") cfg.m = range(val, key);
      else if (key == "t") cfg.t = range(val, key);
      else if (key == "s") cfg.s = range(val, key);
      else if (key == "r_max") cfg.r_max = val.get<long>();
      else if (key == "samples") cfg.samples = val.get<int>();
      else if (key == "m_max") cfg.m_max = val.get<int>();
      else if (key == "ap_valuations") {
        cfg.ap_valuations.clear();
        for (const auto& x : val) cfg.ap_valuations.push_back(Rational::parse(x.get<std::string>()));
      } else if (key == "ap_units") cfg.ap_units = val.get<std::vector<long>>();
      else if (key == "precision") cfg.precision = val.is_string() ? val.get<std::string>() : val.dump();
      else if (key == "seed") cfg.seed = val.get<unsigned long>();
      else if (key == "workers") cfg.workers = val.get<int>();
      else if (key == "timings") cfg.timings = val.get<bool>();
      else if (key == "jsonl") cfg.jsonl_path = val.get<std::string>();
      else if (key == "csv") cfg.csv_path = val.get<std::string>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

std::vector<int> odd_primes_upto(int max_p) {
  std::vector<int> out;
  for (int p = 3; p <= max_p; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

// ----------------------------------------------------------------- running

int SuiteResult::count(const std::string& verdict) const {
  return static_cast<int>(std::count_if(records.begin(), records.end(),
                                         [&](const RunRecord& r) { return r.verdict == verdict; }));
}

int SuiteResult::exit_code() const {
  if (count("error")) return 2;
  return count("fail") ? 1 : 0;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"divconds", "polynomial_a", "polynomial_b", "cong2",
                                              "witness",  "llc_roundtrip", "reduce"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SweepConfig& cfg) {
  cfg.validate();
  if (name == "divconds") return suite_divconds(cfg);
  if (name == "polynomial_a") return suite_polynomial_a(cfg);
  if (name == "polynomial_b") return suite_polynomial_b(cfg);
  if (name == "cong2") return suite_cong2(cfg);
  if (name == "witness") return suite_witness(cfg);
  if (name == "llc_roundtrip") return suite_llc_roundtrip(cfg);
  if (name == "reduce") return suite_reduce(cfg);
  throw ConfigError("unknown suite '" + name + "'");
}

void write_jsonl(const SuiteResult& res, std::ostream& os, bool timings) {
  for (const auto& rec : res.records) {
    Json j = {{"suite", rec.suite},   {"claim", rec.claim},   {"params", rec.params},
              {"verdict", rec.verdict}, {"margin", rec.margin}, {"detail", rec.detail}};
    if (timings) j["wall_ms"] = rec.wall_ms;
    os << j.dump() << '\n';
  }
}

void write_csv(const SuiteResult& res, std::ostream& os) {
  for (size_t i = 0; i < res.csv_columns.size(); ++i) os << (i ? "," : "") << res.csv_columns[i];
  os << '\n';
  for (const auto& rec : res.records) {
    for (size_t i = 0; i < res.csv_columns.size(); ++i) {
      const auto& col = res.csv_columns[i];
      Json cell;
      if (col == "verdict") cell = rec.verdict;
      else if (rec.params.contains(col)) cell = rec.params[col];
      else if (rec.detail.contains(col)) cell = rec.detail[col];
      os << (i ? "," : "") << csv_cell(cell);
    }
    os << '\n';
  }
}

}  // namespace loconst
