// loconst: command-line front end for the verification suites.
//
// Exit status: 0 all pass, 1 some claim failed, 2 configuration or precision error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "loconst/sweep.hpp"

using namespace loconst;

namespace {

constexpr int kPass = 0, kFail = 1, kError = 2;

Json read_json_arg(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg.front() != '{' && arg.front() != '[') {
    std::ifstream in(arg);
    if (!in) throw ConfigError("cannot open " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

void emit_error(const std::string& command, const std::string& kind, const std::string& what) {
  std::cout << Json{{"command", command}, {"verdict", "error"}, {"error", kind}, {"message", what}}.dump()
            << '\n';
}

/// Sweep options shared by `sweep` and `verify-lemma`; only flags given on
/// the command line override the config file.
struct SweepFlags {
  std::string config;
  std::vector<int> primes;
  int max_p = 0, max_t = 0, max_s = 0, workers = 0, samples = 0;
  long r_max = 0;
  std::vector<std::string> ap_v;
  std::vector<long> ap_units;
  std::string precision, jsonl, csv;
  unsigned long seed = 0;
  bool timings = false;
  std::vector<CLI::Option*> opts;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON config file");
    opts = {app->add_option("--primes", primes, "explicit prime list")->delimiter(','),
            app->add_option("--max-p", max_p, "all odd primes up to this bound"),
            app->add_option("--max-t", max_t, "t ranges over 1..max-t"),
            app->add_option("--max-s", max_s, "s ranges over 1..max-s"),
            app->add_option("--workers", workers, "worker threads (default: LOCONST_WORKERS or all cores)"),
            app->add_option("--samples", samples, "divconds samples per (p, r)"),
            app->add_option("--r-max", r_max, "divconds degree bound"),
            app->add_option("--ap-valuations", ap_v, "slopes such as 1,3/2")->delimiter(','),
            app->add_option("--ap-units", ap_units, "unit residues for a_p")->delimiter(','),
            app->add_option("--precision", precision, "auto or a fixed absolute precision M"),
            app->add_option("--seed", seed, "random seed"),
            app->add_option("--out", jsonl, "JSON-lines output (default stdout)"),
            app->add_option("--csv", csv, "CSV summary path"),
            app->add_flag("--timings", timings, "add wall_ms to records")};
  }

  bool given(size_t i) const { return opts[i]->count() > 0; }

  SweepConfig resolve() const {
    SweepConfig cfg = config.empty() ? SweepConfig{} : config_from_json(read_json_arg(config));
    if (given(0)) cfg.primes = primes;
    if (given(1)) cfg.primes = odd_primes_upto(max_p);
    if (given(2)) cfg.t = {1, max_t};
    if (given(3)) cfg.s = {1, max_s};
    if (given(4)) cfg.workers = workers;
    if (given(5)) cfg.samples = samples;
    if (given(6)) cfg.r_max = r_max;
    if (given(7)) {
      cfg.ap_valuations.clear();
      for (const auto& v : ap_v) cfg.ap_valuations.push_back(Rational::parse(v));
    }
    if (given(8)) cfg.ap_units = ap_units;
    if (given(9)) cfg.precision = precision;
    if (given(10)) cfg.seed = seed;
    if (given(11)) cfg.jsonl_path = jsonl;
    if (given(12)) cfg.csv_path = csv;
    if (timings) cfg.timings = true;
    return cfg;
  }
};

int run_sweep(const std::string& suite, const SweepFlags& flags) {
  const SweepConfig cfg = flags.resolve();
  const SuiteResult res = run_suite(suite, cfg);
  if (cfg.jsonl_path.empty()) {
    write_jsonl(res, std::cout, cfg.timings);
  } else {
    std::ofstream out(cfg.jsonl_path);
    if (!out) throw ConfigError("cannot write " + cfg.jsonl_path);
    write_jsonl(res, out, cfg.timings);
  }
  if (!cfg.csv_path.empty()) {
    std::ofstream out(cfg.csv_path);
    if (!out) throw ConfigError("cannot write " + cfg.csv_path);
    write_csv(res, out);
  }
  std::cerr << suite << ": " << res.records.size() << " records, " << res.count("pass") << " pass, "
            << res.count("fail") << " fail, " << res.count("error") << " error, " << res.count("report")
            << " reported separately\n";
  return res.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of local constancy computations"};
  app.require_subcommand(1);

  // verify-lemma / sweep
  SweepFlags lemma_flags, sweep_flags;
  std::string lemma_name, sweep_name;
  auto* lemma = app.add_subcommand("verify-lemma", "run one lemma suite");
  lemma->add_option("lemma", lemma_name, "divconds | polynomial_a | polynomial_b | cong2")
      ->required()
      ->check(CLI::IsMember({"divconds", "polynomial_a", "polynomial_b", "cong2"}));
  lemma_flags.attach(lemma);
  auto* sweep = app.add_subcommand("sweep", "run any suite over a parameter grid");
  sweep->add_option("suite", sweep_name)->required()->check(CLI::IsMember(suite_names()));
  sweep_flags.attach(sweep);

  // hecke-apply
  std::string hecke_input, hecke_op = "full";
  auto* hecke = app.add_subcommand("hecke-apply", "apply the Hecke operator to a tree function");
  hecke->add_option("--input", hecke_input, "JSON text or file")->required();
  hecke->add_option("--op", hecke_op)->check(CLI::IsMember({"plus", "minus", "full", "raw"}));

  // witness-check
  WitnessParams wp;
  std::vector<long> ap_unit{1};
  long precision = 0;
  bool with_residues = false;
  auto* witness = app.add_subcommand("witness-check", "verify the witness computation for one tuple");
  witness->add_option("--p", wp.p)->required();
  witness->add_option("--e", wp.e);
  witness->add_option("--ap-h", wp.h, "v(a_p) = ap-h / e")->required();
  witness->add_option("--ap-unit", ap_unit, "unit digits of a_p")->delimiter(',');
  witness->add_option("--b", wp.b)->required();
  witness->add_option("--m", wp.m)->required();
  witness->add_option("--t", wp.t)->required();
  witness->add_option("--s", wp.s);
  witness->add_option("--precision", precision, "absolute precision M (default automatic)");
  witness->add_flag("--residues", with_residues, "include residue polynomials");

  // reduce
  int red_p = 0;
  long red_k = 0;
  std::string red_v, cert_dir;
  int red_res = 0;
  bool red_zero = false;
  auto* reduce = app.add_subcommand("reduce", "decide the reduction for (p, k, a_p)");
  reduce->add_option("--p", red_p)->required();
  reduce->add_option("--k", red_k)->required();
  reduce->add_option("--ap-valuation", red_v, "num/den")->required();
  auto* res_opt = reduce->add_option("--ap-residue", red_res, "a_p / p^v mod p");
  reduce->add_flag("--ap-zero", red_zero, "a_p = 0");
  reduce->add_option("--with-certificates", cert_dir, "compute witnesses, store them here, use them");

  // ll
  std::string ll_dir, ll_input;
  int ll_p = 0;
  auto* ll = app.add_subcommand("ll", "semisimple mod p dictionary");
  ll->add_option("--direction", ll_dir)->required()->check(CLI::IsMember({"fwd", "inv"}));
  ll->add_option("--p", ll_p)->required();
  ll->add_option("--input", ll_input, "JSON text or file")->required();

  // alpha
  int al_p = 0;
  long al_r = 0, al_k = 0;
  std::string al_v;
  auto* alpha_cmd = app.add_subcommand("alpha", "alpha(r) and the weight bound");
  alpha_cmd->add_option("--p", al_p)->required();
  alpha_cmd->add_option("--r", al_r)->required();
  alpha_cmd->add_option("--k", al_k, "also evaluate the weight bound at k");
  alpha_cmd->add_option("--ap-valuation", al_v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (*lemma) return run_sweep(lemma_name, lemma_flags);
    if (*sweep) return run_sweep(sweep_name, sweep_flags);

    if (*hecke) {
      const TreeFunc f = treefunc_from_json(read_json_arg(hecke_input));
      TreeFunc out = hecke_op == "plus"    ? T_plus(f)
                     : hecke_op == "minus" ? T_minus(f)
                     : hecke_op == "raw"   ? T_raw(f)
                                           : T_full(f);
      emit({{"op", hecke_op}, {"input", to_json(f)}, {"output", to_json(out)}});
      return kPass;
    }

    if (*witness) {
      wp.unit = ap_unit;
      wp.M = precision;
      try {
        const WitnessReport rep = verify_witness(wp);
        Json j = to_json(rep);
        if (!with_residues) {
          j.erase("residue_terms");
          j.erase("predicted_terms");
        }
        j["verdict"] = rep.insufficient_precision() ? "error" : rep.passed() ? "pass" : "fail";
        emit(j);
        if (rep.insufficient_precision()) return kError;
        return rep.passed() ? kPass : kFail;
      } catch (const HypothesisError& e) {
        emit({{"command", command},
              {"params", to_json(wp)},
              {"verdict", "error"},
              {"error", "hypothesis violation"},
              {"message", e.what()}});
        return kError;
      }
    }

    if (*reduce) {
      ApData ap{Rational::parse(red_v), std::nullopt, red_zero};
      if (res_opt->count()) ap.residue = red_res;
      ReductionReport rep;
      if (cert_dir.empty()) {
        rep = decide_reduction(red_p, red_k, ap);
      } else {
        const ReductionReport plain = decide_reduction(red_p, red_k, ap);
        std::vector<WitnessReport> certs;
        std::filesystem::create_directories(cert_dir);
        if (plain.t > 0 && !ap.is_zero) {
          for (long m = 1; m <= ap.v.num / ap.v.den; ++m) {
            WitnessParams w;
            w.p = red_p;
            w.e = static_cast<int>(ap.v.den);
            w.h = ap.v.num;
            w.unit = {ap.residue.value_or(1)};
            w.b = plain.b;
            w.m = static_cast<int>(m);
            w.t = static_cast<int>(plain.t);
            const long step = (red_k - plain.k0) / (red_p - 1);
            long pt = 1;
            for (int i = 0; i < w.t; ++i) pt *= red_p;
            w.s = step / pt;
            try {
              certs.push_back(verify_witness(w));
            } catch (const HypothesisError& e) {
              std::cerr << "no witness for m = " << m << ": " << e.what() << '\n';
              continue;
            }
            std::ofstream(std::filesystem::path(cert_dir) /
                          ("witness_p" + std::to_string(red_p) + "_b" + std::to_string(w.b) + "_m" +
                           std::to_string(m) + ".json"))
                << to_json(certs.back()).dump(2) << '\n';
          }
        }
        rep = decide_reduction(red_p, red_k, ap, &certs);
      }
      emit(to_json(rep));
      return kPass;
    }

    if (*ll) {
      const Json in = read_json_arg(ll_input);
      if (ll_dir == "fwd") {
        Json out = Json::array();
        for (const auto& s : ll_forward(galois_from_json(in), ll_p)) out.push_back(to_json(s));
        emit({{"direction", "fwd"}, {"p", ll_p}, {"output", out}});
      } else {
        std::vector<SmoothDescriptor> s;
        if (in.is_array())
          for (const auto& x : in) s.push_back(smooth_from_json(x));
        else
          s.push_back(smooth_from_json(in));
        emit({{"direction", "inv"}, {"p", ll_p}, {"output", to_json(ll_inverse(s, ll_p))}});
      }
      return kPass;
    }

    if (*alpha_cmd) {
      Json j = {{"p", al_p}, {"r", al_r}, {"alpha", alpha(al_p, al_r)}};
      if (al_k && !al_v.empty()) {
        const auto bb = berger_bound(al_p, al_k, Rational::parse(al_v));
        j["k"] = al_k;
        j["bound"] = bb.bound.to_string();
        j["satisfied"] = bb.satisfied;
      }
      emit(j);
      return kPass;
    }
  } catch (const ConfigError& e) {
    emit_error(command, "config", e.what());
    return kError;
  } catch (const PrecisionError& e) {
    emit_error(command, "precision", e.what());
    return kError;
  } catch (const std::invalid_argument& e) {
    emit_error(command, "invalid input", e.what());
    return kError;
  } catch (const nlohmann::json::exception& e) {
    emit_error(command, "invalid input", e.what());
    return kError;
  } catch (const std::exception& e) {
    emit_error(command, "internal", e.what());
    return kError;
  }
  return kError;
}
