// cpcdec: batch front-end for CPC-code Ising decoding experiments.
//
// Subcommands: validate, decode, sweep, threshold, sample, export.
// Exit codes: 0 success, 2 invalid config/code, 3 propagation-invariant
// failure, 4 enumeration cap exceeded, 5 non-bracketing threshold.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpcdec/bp.hpp"
#include "cpcdec/cpc_code.hpp"
#include "cpcdec/decoders.hpp"
#include "cpcdec/error_model.hpp"
#include "cpcdec/evaluation.hpp"
#include "cpcdec/ising.hpp"
#include "cpcdec/propagation.hpp"
#include "cpcdec/samplers.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitCap = 4;
constexpr int kExitBracket = 5;

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw CliError(kExitConfig, "unknown key \"" + key + "\" in " + where);
  }
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitConfig, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw CliError(kExitConfig, path + ": " + e.what());
  }
}

struct LoadedCode {
  cpcdec::CpcCode code;
  cpcdec::PropagationModel prop;
  cpcdec::CheckSets checks;
};

LoadedCode load_and_build(const std::string& path) {
  LoadedCode out;
  try {
    out.code = cpcdec::load_code(path);
  } catch (const std::exception& e) {
    throw CliError(kExitConfig, std::string("invalid code: ") + e.what());
  }
  try {
    out.prop = cpcdec::build_propagation_model(out.code);
  } catch (const cpcdec::CodeError& e) {
    throw CliError(kExitInvariant, e.what());
  }
  out.checks = cpcdec::derive_check_sets(out.prop);
  return out;
}

cpcdec::QubitErrorRates parse_rates(const nlohmann::json& j, const std::string& where) {
  reject_unknown_keys(j, {"family", "p", "px", "pz", "py"}, where);
  try {
    if (j.contains("family")) {
      return cpcdec::family_rates(cpcdec::family_from_string(j.at("family").get<std::string>()),
                                  j.at("p").get<double>());
    }
    return cpcdec::QubitErrorRates(j.value("px", 0.0), j.value("pz", 0.0), j.value("py", 0.0));
  } catch (const std::exception& e) {
    throw CliError(kExitConfig, where + ": " + e.what());
  }
}

// The epsilon floor is only for channels where a log-probability would be
// undefined (a whole error class has zero probability). Channels such as
// p_y = 0 with p_x, p_z > 0 factor exactly and must not be perturbed, or
// spurious near-zero couplings leak into the models.
cpcdec::QubitErrorRates decoding_rates(const cpcdec::QubitErrorRates& base) {
  try {
    cpcdec::pbar(base);
    return base;
  } catch (const std::domain_error&) {
    return cpcdec::with_epsilon_floor(base);
  }
}

cpcdec::SamplerConfig parse_sampler(const nlohmann::json& j, std::uint64_t seed) {
  reject_unknown_keys(j, {"sweeps", "burn_in", "chains", "temperature", "metropolis"},
                      "sampler block");
  cpcdec::SamplerConfig cfg;
  cfg.sweeps = j.value("sweeps", cfg.sweeps);
  cfg.burn_in = j.value("burn_in", cfg.burn_in);
  cfg.chains = j.value("chains", cfg.chains);
  cfg.temperature = j.value("temperature", cfg.temperature);
  cfg.metropolis = j.value("metropolis", cfg.metropolis);
  cfg.seed = seed;
  try {
    cpcdec::validate_config(cfg);
  } catch (const std::exception& e) {
    throw CliError(kExitConfig, std::string("sampler block: ") + e.what());
  }
  return cfg;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(kExitConfig, "cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& code_path) {
  const LoadedCode lc = load_and_build(code_path);
  const int r = lc.code.num_parity();
  std::cout << "n: " << lc.code.n << "\n";
  std::cout << "k: " << lc.code.k << "\n";
  const int d = cpcdec::code_distance(lc.prop);
  std::cout << "distance: " << d << "\n";
  std::cout << "inv_x: ok\n";
  std::cout << "check_sets:\n";
  for (int j = 0; j < r; ++j) {
    std::cout << "  Q_" << j << ":";
    for (int v = 0; v < lc.checks.num_explicit(); ++v) {
      if ((lc.checks.q_masks[j] >> v) & 1) std::cout << ' ' << v;
    }
    if (lc.checks.self_loop[j]) std::cout << "  (self-loop)";
    std::cout << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ decode

int cmd_decode(const std::string& code_path, const nlohmann::json& rates_json,
               const std::string& syndrome_bits, const std::string& strategy,
               std::uint64_t seed, const nlohmann::json& sampler_json) {
  const LoadedCode lc = load_and_build(code_path);
  const cpcdec::QubitErrorRates base = parse_rates(rates_json, "error model");
  const cpcdec::QubitErrorRates rates = decoding_rates(base);
  const cpcdec::ErrorModel model = cpcdec::ErrorModel::uniform(lc.code.n, rates);

  cpcdec::Syndrome syndrome;
  try {
    syndrome = cpcdec::Syndrome::from_bit_string(syndrome_bits);
  } catch (const std::exception& e) {
    throw CliError(kExitConfig, e.what());
  }
  if (syndrome.size != lc.code.num_parity()) {
    throw CliError(kExitConfig, "syndrome length does not match code (expected " +
                                    std::to_string(lc.code.num_parity()) + " bits)");
  }

  const cpcdec::IsingModel ising =
      cpcdec::build_decode_hamiltonian(lc.checks, syndrome, model, 1.0);
  cpcdec::Correction corr;
  try {
    if (strategy == "mle") {
      std::mt19937_64 rng(seed);
      corr = cpcdec::mle_decode(ising, lc.prop, lc.checks, syndrome, rng);
    } else if (strategy == "maxent") {
      const cpcdec::BoltzmannDistribution dist = cpcdec::exact_boltzmann(ising, 1.0);
      corr = cpcdec::maxent_decode(ising, lc.prop, lc.checks, syndrome, dist);
    } else if (strategy == "bp") {
      corr = cpcdec::bp_decode(cpcdec::export_factor_graph(ising), lc.prop, lc.checks, syndrome)
                 .correction;
    } else if (strategy == "sampler") {
      cpcdec::GibbsBackend backend;
      corr = cpcdec::sampler_decode(ising, lc.prop, lc.checks, syndrome, backend,
                                    parse_sampler(sampler_json, seed));
    } else if (strategy == "hybrid") {
      corr = cpcdec::hybrid_decode(ising, lc.prop, lc.checks, syndrome,
                                   cpcdec::HybridHeuristic::kAnneal,
                                   parse_sampler(sampler_json, seed));
    } else {
      throw CliError(kExitConfig, "unknown strategy: " + strategy);
    }
  } catch (const cpcdec::EnumerationCapExceeded& e) {
    throw CliError(kExitCap, e.what());
  }

  static const char* kClassNames[] = {"I", "X", "Z", "Y"};
  std::cout << "syndrome: " << syndrome.bit_string() << "\n";
  std::cout << "strategy: " << corr.strategy << "\n";
  std::cout << "correction:";
  for (cpcdec::PauliClass c : corr.classes) std::cout << ' ' << kClassNames[static_cast<int>(c)];
  std::cout << "\n";
  std::cout << "tie: " << (corr.tie ? "yes" : "no") << "\n";
  if (corr.strategy == "mle") std::cout << "degeneracy: " << corr.degeneracy << "\n";
  std::cout << "votes:\n";
  const std::vector<double> margins = corr.margins();
  for (size_t q = 0; q < corr.votes.size(); ++q) {
    std::cout << "  qubit " << q << ":";
    for (int c = 0; c < 4; ++c) {
      std::cout << ' ' << kClassNames[c] << '=' << fmt(corr.votes[q][c]);
    }
    std::cout << "  margin=" << fmt(margins[q]) << "\n";
  }
  return 0;
}

// -------------------------------------------------- config-driven commands

struct Experiment {
  std::string code_path;
  nlohmann::json error_model;
  std::vector<std::string> strategies;
  nlohmann::json grid;
  nlohmann::json bisection;
  nlohmann::json sampler;
  std::uint64_t seed = 0;
  std::string output;
};

Experiment parse_experiment(const std::string& path) {
  const nlohmann::json j = load_json(path);
  reject_unknown_keys(j,
                      {"code", "error_model", "strategies", "grid", "bisection", "sampler",
                       "seed", "output"},
                      "experiment config");
  Experiment e;
  try {
    e.code_path = j.at("code").get<std::string>();
    if (j.contains("error_model")) e.error_model = j.at("error_model");
    if (j.contains("strategies")) e.strategies = j.at("strategies").get<std::vector<std::string>>();
    if (j.contains("grid")) e.grid = j.at("grid");
    if (j.contains("bisection")) e.bisection = j.at("bisection");
    if (j.contains("sampler")) e.sampler = j.at("sampler");
    e.seed = j.value("seed", std::uint64_t{0});
    e.output = j.value("output", std::string{});
  } catch (const nlohmann::json::exception& ex) {
    throw CliError(kExitConfig, path + ": " + ex.what());
  }
  return e;
}

cpcdec::ErrorFamily experiment_family(const Experiment& e) {
  if (!e.error_model.contains("family")) {
    throw CliError(kExitConfig, "experiment requires an error_model block with a family");
  }
  try {
    return cpcdec::family_from_string(e.error_model.at("family").get<std::string>());
  } catch (const std::exception& ex) {
    throw CliError(kExitConfig, ex.what());
  }
}

int cmd_sweep(const std::string& config_path, const std::string& out_override, int threads) {
  const Experiment e = parse_experiment(config_path);
  const LoadedCode lc = load_and_build(e.code_path);
  const cpcdec::ErrorFamily family = experiment_family(e);

  std::vector<double> p_grid;
  if (e.grid.is_null()) throw CliError(kExitConfig, "sweep requires a grid block");
  reject_unknown_keys(e.grid, {"p_values", "start", "stop", "points"}, "grid block");
  if (e.grid.contains("p_values")) {
    p_grid = e.grid.at("p_values").get<std::vector<double>>();
  } else {
    const double start = e.grid.value("start", 0.01);
    const double stop = e.grid.value("stop", 0.2);
    const int points = e.grid.value("points", 20);
    if (points < 2 || !(stop > start)) throw CliError(kExitConfig, "grid needs points >= 2, stop > start");
    for (int i = 0; i < points; ++i) {
      p_grid.push_back(start + (stop - start) * i / (points - 1));
    }
  }

  std::vector<cpcdec::SweepRow> rows;
  try {
    rows = cpcdec::sweep(lc.prop, lc.checks, family, p_grid, threads);
  } catch (const cpcdec::EnumerationCapExceeded& ex) {
    throw CliError(kExitCap, ex.what());
  }
  std::ostringstream os;
  os << cpcdec::sweep_csv_header() << "\n";
  for (const cpcdec::SweepRow& row : rows) os << cpcdec::sweep_row_csv(row) << "\n";
  write_output(out_override.empty() ? e.output : out_override, os.str());
  return 0;
}

int cmd_threshold(const std::string& config_path, const std::string& out_override, int threads) {
  const Experiment e = parse_experiment(config_path);
  const LoadedCode lc = load_and_build(e.code_path);
  const cpcdec::ErrorFamily family = experiment_family(e);

  double tol = 1e-6, p_lo = 1e-3, p_hi = 0.3;
  if (!e.bisection.is_null()) {
    reject_unknown_keys(e.bisection, {"tol", "p_lo", "p_hi"}, "bisection block");
    tol = e.bisection.value("tol", tol);
    p_lo = e.bisection.value("p_lo", p_lo);
    p_hi = e.bisection.value("p_hi", p_hi);
  }
  std::vector<std::string> strategies = e.strategies;
  if (strategies.empty()) strategies = {"mle", "maxent"};

  std::ostringstream os;
  for (const std::string& name : strategies) {
    cpcdec::Strategy strategy;
    try {
      strategy = cpcdec::strategy_from_string(name);
    } catch (const std::exception& ex) {
      throw CliError(kExitConfig, ex.what());
    }
    cpcdec::ThresholdResult r;
    try {
      r = cpcdec::threshold_bisection(lc.prop, lc.checks, family, strategy, tol, p_lo, p_hi,
                                      threads);
    } catch (const std::invalid_argument& ex) {
      throw CliError(kExitBracket, ex.what());
    } catch (const cpcdec::EnumerationCapExceeded& ex) {
      throw CliError(kExitCap, ex.what());
    }
    os << "threshold strategy=" << cpcdec::strategy_to_string(r.strategy)
       << " family=" << cpcdec::family_to_string(r.family) << " p_star=" << fmt(r.p_star)
       << " bracket_width=" << fmt(r.bracket_width) << " iterations=" << r.iterations << "\n";
  }
  write_output(out_override.empty() ? e.output : out_override, os.str());
  return 0;
}

int cmd_sample(const std::string& config_path, const std::string& syndrome_bits,
               const std::string& out_override) {
  const Experiment e = parse_experiment(config_path);
  const LoadedCode lc = load_and_build(e.code_path);
  const cpcdec::QubitErrorRates rates =
      decoding_rates(parse_rates(e.error_model, "error model"));
  const cpcdec::ErrorModel model = cpcdec::ErrorModel::uniform(lc.code.n, rates);

  cpcdec::Syndrome syndrome;
  try {
    syndrome = cpcdec::Syndrome::from_bit_string(syndrome_bits);
  } catch (const std::exception& ex) {
    throw CliError(kExitConfig, ex.what());
  }
  if (syndrome.size != lc.code.num_parity()) {
    throw CliError(kExitConfig, "syndrome length does not match code");
  }

  const cpcdec::IsingModel ising =
      cpcdec::build_decode_hamiltonian(lc.checks, syndrome, model, 1.0);
  const cpcdec::SamplerConfig cfg = parse_sampler(e.sampler, e.seed);
  const std::vector<cpcdec::SpinConfiguration> samples =
      cpcdec::gibbs_sample(ising, cfg.temperature, cfg);

  std::ostringstream os;
  os << "state,energy\n";
  for (const cpcdec::SpinConfiguration& s : samples) {
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(s.minus_mask));
    os << hex << ',' << fmt(cpcdec::energy(ising, s)) << "\n";
  }
  write_output(out_override.empty() ? e.output : out_override, os.str());
  return 0;
}

int cmd_export(const std::string& code_path, const nlohmann::json& rates_json,
               const std::string& syndrome_bits, int time_rounds, const std::string& out_path) {
  const LoadedCode lc = load_and_build(code_path);
  const cpcdec::QubitErrorRates rates =
      decoding_rates(parse_rates(rates_json, "error model"));
  const cpcdec::ErrorModel model = cpcdec::ErrorModel::uniform(lc.code.n, rates);

  cpcdec::Syndrome syndrome;
  try {
    syndrome = cpcdec::Syndrome::from_bit_string(syndrome_bits);
  } catch (const std::exception& ex) {
    throw CliError(kExitConfig, ex.what());
  }
  if (syndrome.size != lc.code.num_parity()) {
    throw CliError(kExitConfig, "syndrome length does not match code");
  }

  cpcdec::IsingModel ising;
  try {
    if (time_rounds <= 1) {
      ising = cpcdec::build_decode_hamiltonian(lc.checks, syndrome, model, 1.0);
    } else {
      const std::vector<cpcdec::Syndrome> rounds(static_cast<size_t>(time_rounds), syndrome);
      ising = cpcdec::build_time_extended(lc.checks, rounds, model, 1.0);
    }
  } catch (const std::invalid_argument& ex) {
    throw CliError(kExitConfig, ex.what());
  }
  write_output(out_path, cpcdec::model_to_json_text(ising));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CPC-code Ising decoding experiments"};
  app.require_subcommand(1);

  std::string code_path, syndrome_bits, strategy = "mle", config_path, out_path;
  std::string family, sampler_json_text = "{}";
  double p = 0.0, px = 0.0, pz = 0.0, py = 0.0;
  std::uint64_t seed = 0;
  int threads = 1, time_rounds = 1;

  auto rates_json = [&]() {
    nlohmann::json j;
    if (!family.empty()) {
      j["family"] = family;
      j["p"] = p;
    } else {
      j["px"] = px;
      j["pz"] = pz;
      j["py"] = py;
    }
    return j;
  };
  auto add_rate_flags = [&](CLI::App* cmd) {
    cmd->add_option("--family", family, "error family: f1, f2, f3");
    cmd->add_option("--p", p, "family rate parameter");
    cmd->add_option("--px", px, "X rate");
    cmd->add_option("--pz", pz, "Z rate");
    cmd->add_option("--py", py, "Y rate");
  };

  CLI::App* validate = app.add_subcommand("validate", "check a code file");
  validate->add_option("--code", code_path, "code JSON file")->required();

  CLI::App* decode = app.add_subcommand("decode", "decode one syndrome");
  decode->add_option("--code", code_path, "code JSON file")->required();
  decode->add_option("--syndrome", syndrome_bits, "bit string, 1 = detected")->required();
  decode->add_option("--strategy", strategy, "mle|maxent|bp|sampler|hybrid");
  decode->add_option("--seed", seed, "root random seed");
  decode->add_option("--sampler", sampler_json_text, "sampler config JSON");
  add_rate_flags(decode);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "logical-error sweep from a config");
  sweep_cmd->add_option("config", config_path, "experiment config JSON")->required();
  sweep_cmd->add_option("--out", out_path, "output path (default from config, else stdout)");
  sweep_cmd->add_option("--threads", threads, "worker threads");

  CLI::App* threshold_cmd = app.add_subcommand("threshold", "threshold bisection from a config");
  threshold_cmd->add_option("config", config_path, "experiment config JSON")->required();
  threshold_cmd->add_option("--out", out_path, "output path");
  threshold_cmd->add_option("--threads", threads, "worker threads");

  CLI::App* sample_cmd = app.add_subcommand("sample", "dump Gibbs samples from a config");
  sample_cmd->add_option("config", config_path, "experiment config JSON")->required();
  sample_cmd->add_option("--syndrome", syndrome_bits, "bit string, 1 = detected")->required();
  sample_cmd->add_option("--out", out_path, "output path");

  CLI::App* export_cmd = app.add_subcommand("export", "export a decode model as JSON");
  export_cmd->add_option("--code", code_path, "code JSON file")->required();
  export_cmd->add_option("--syndrome", syndrome_bits, "bit string, 1 = detected")->required();
  export_cmd->add_option("--time-rounds", time_rounds, "rounds for the time-extended model");
  export_cmd->add_option("--out", out_path, "output path (default stdout)");
  add_rate_flags(export_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(code_path);
    if (decode->parsed()) {
      nlohmann::json sampler_json;
      try {
        sampler_json = nlohmann::json::parse(sampler_json_text);
      } catch (const nlohmann::json::parse_error& e) {
        throw CliError(kExitConfig, std::string("--sampler: ") + e.what());
      }
      return cmd_decode(code_path, rates_json(), syndrome_bits, strategy, seed, sampler_json);
    }
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, out_path, threads);
    if (threshold_cmd->parsed()) return cmd_threshold(config_path, out_path, threads);
    if (sample_cmd->parsed()) return cmd_sample(config_path, syndrome_bits, out_path);
    if (export_cmd->parsed()) {
      return cmd_export(code_path, rates_json(), syndrome_bits, time_rounds, out_path);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
