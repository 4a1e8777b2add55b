// gaussprg: generation, fooling-gap experiments, and diagnostics with
// reproducible JSON reports.
//
// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 configuration error.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gaussprg/gaussian.hpp"
#include "gaussprg/harness.hpp"
#include "gaussprg/json_io.hpp"
#include "gaussprg/mollifier.hpp"
#include "gaussprg/version.hpp"

namespace {

using gaussprg::Json;

// JSON config files: scalars become option values, nested objects become
// subcommand sections.  Flags given on the command line win.
class JsonConfigReader : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    Json j = Json::parse(input);
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static void walk(const Json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, val] : j.items()) {
      if (val.is_object()) {
        auto deeper = parents;
        deeper.push_back(key);
        walk(val, deeper, out);
      } else {
        CLI::ConfigItem item;
        item.parents = parents;
        item.name = key;
        if (val.is_array()) {
          for (const auto& v : val) item.inputs.push_back(scalar(v));
        } else {
          item.inputs.push_back(scalar(val));
        }
        out.push_back(item);
      }
    }
  }
  static std::string scalar(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }
};

struct OutputOpts {
  std::string out_path;
  bool pretty = false;
};

void add_output_options(CLI::App* cmd, OutputOpts& o) {
  cmd->add_option("--out", o.out_path, "write the JSON report to this file instead of stdout");
  cmd->add_flag("--pretty", o.pretty, "indent the JSON report");
}

void emit(const Json& report, const OutputOpts& o) {
  std::string text = o.pretty ? report.dump(2) : report.dump();
  text.push_back('\n');
  if (o.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + o.out_path);
    f << text;
  }
}

struct ParamOpts {
  uint32_t k = 1, d = 1, n = 1;
  double eps = 0.1;
  double C = 2.0, C_L = 1.0, C_M = 1.0;
  uint32_t bias_margin = 32;
  std::optional<uint64_t> R, L, wiseness, field_modulus;
  std::optional<uint32_t> M;
};

void add_param_options(CLI::App* cmd, ParamOpts& p) {
  cmd->add_option("--k", p.k, "number of threshold polynomials")->required();
  cmd->add_option("--d", p.d, "polynomial degree")->required();
  cmd->add_option("--eps", p.eps, "target fooling error in (0,1)")->required();
  cmd->add_option("--n", p.n, "ambient dimension")->required();
  cmd->add_option("--C", p.C, "constant in R = ceil(C log2(kd/eps))");
  cmd->add_option("--C-L", p.C_L, "constant in the block-count formula");
  cmd->add_option("--C-M", p.C_M, "constant in the grid-precision formula");
  cmd->add_option("--bias-margin", p.bias_margin, "extra modulus bits above 2^M");
  cmd->add_option("--override-R", p.R, "fix the moment order R");
  cmd->add_option("--override-L", p.L, "fix the block count L");
  cmd->add_option("--override-M", p.M, "fix the grid precision M");
  cmd->add_option("--override-wiseness", p.wiseness, "fix the source wiseness (default 2dR)");
  cmd->add_option("--field-modulus", p.field_modulus, "explicit prime modulus >= 2^M");
}

gaussprg::PrgParams resolve_params(const ParamOpts& p) {
  gaussprg::PrgOverrides ov;
  ov.R = p.R;
  ov.L = p.L;
  ov.M = p.M;
  ov.wiseness = p.wiseness;
  ov.field_modulus = p.field_modulus;
  ov.C = p.C;
  ov.C_L = p.C_L;
  ov.C_M = p.C_M;
  ov.bias_margin = p.bias_margin;
  return gaussprg::derive_params(p.k, p.d, p.eps, p.n, ov);
}

Json param_config_json(const ParamOpts& p) {
  Json j{{"k", p.k}, {"d", p.d},     {"eps", p.eps}, {"n", p.n},
         {"C", p.C}, {"C_L", p.C_L}, {"C_M", p.C_M}, {"bias_margin", p.bias_margin}};
  if (p.R) j["override_R"] = *p.R;
  if (p.L) j["override_L"] = *p.L;
  if (p.M) j["override_M"] = *p.M;
  if (p.wiseness) j["override_wiseness"] = *p.wiseness;
  if (p.field_modulus) j["field_modulus"] = *p.field_modulus;
  return j;
}

struct FamilyOpts {
  uint64_t family_seed = 10;
  std::string family_file;
  std::string preset;
  bool no_normalize = false;
};

void add_family_options(CLI::App* cmd, FamilyOpts& f) {
  cmd->add_option("--family-seed", f.family_seed, "seed for a random normalized family");
  cmd->add_option("--family", f.family_file, "JSON file with an explicit family");
  cmd->add_option("--family-preset", f.preset, "named family: axis-and")
      ->check(CLI::IsMember({"axis-and"}));
  cmd->add_flag("--no-normalize", f.no_normalize, "skip unit-norm scaling of random polynomials");
}

gaussprg::PtfFunction resolve_family(const FamilyOpts& f, uint32_t n, uint32_t d, uint32_t k) {
  if (!f.family_file.empty()) {
    std::ifstream in(f.family_file);
    if (!in) throw std::runtime_error("cannot open family file " + f.family_file);
    try {
      return gaussprg::family_from_json(Json::parse(in));
    } catch (const std::exception& e) {
      throw std::runtime_error("family file " + f.family_file + ": " + e.what());
    }
  }
  if (f.preset == "axis-and") return gaussprg::axis_intersection_family(n, k);
  return gaussprg::random_family(f.family_seed, n, d, k, !f.no_normalize);
}

Json family_config_json(const FamilyOpts& f) {
  Json j{{"family_seed", f.family_seed}, {"normalize", !f.no_normalize}};
  if (!f.family_file.empty()) j["family_file"] = f.family_file;
  if (!f.preset.empty()) j["family_preset"] = f.preset;
  return j;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> point;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) point.push_back(std::stod(item));
  return point;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudorandom generator for functions of low-degree polynomial "
               "threshold functions over Gaussian space"};
  app.config_formatter(std::make_shared<JsonConfigReader>());
  app.set_config("--config", "", "JSON config file merged under flags");
  app.require_subcommand(1);

  int exit_code = 0;

  // ---- params ----
  auto* cmd_params = app.add_subcommand("params", "derive parameters and exact seed length");
  auto params_p = std::make_shared<ParamOpts>();
  auto params_o = std::make_shared<OutputOpts>();
  add_param_options(cmd_params, *params_p);
  add_output_options(cmd_params, *params_o);
  cmd_params->callback([params_p, params_o] {
    auto params = resolve_params(*params_p);
    Json result{{"params", gaussprg::params_to_json(params)},
                {"seed_length_bits", gaussprg::seed_length_bits(params)}};
    emit(gaussprg::make_report("params", param_config_json(*params_p), "", result), *params_o);
  });

  // ---- gen ----
  auto* cmd_gen = app.add_subcommand("gen", "generate one output vector from a seed");
  auto gen_p = std::make_shared<ParamOpts>();
  auto gen_o = std::make_shared<OutputOpts>();
  auto gen_seed_hex = std::make_shared<std::string>();
  auto gen_vector_out = std::make_shared<std::string>();
  add_param_options(cmd_gen, *gen_p);
  add_output_options(cmd_gen, *gen_o);
  cmd_gen->add_option("--seed-hex", *gen_seed_hex, "seed material as a hex string")->required();
  cmd_gen->add_option("--vector-out", *gen_vector_out,
                      "binary sidecar (little-endian doubles) for large vectors");
  cmd_gen->callback([gen_p, gen_o, gen_seed_hex, gen_vector_out] {
    auto params = resolve_params(*gen_p);
    auto seed = gaussprg::bytes_from_hex(*gen_seed_hex);
    auto out = gaussprg::generate(params, seed);
    Json result{{"params", gaussprg::params_to_json(params)},
                {"seed_digest", out.seed_digest},
                {"n", params.n}};
    if (params.n <= 64) {
      result["x"] = out.x;
    } else {
      result["x_digest"] = gaussprg::vector_digest(out.x);
    }
    if (!gen_vector_out->empty()) {
      std::ofstream f(*gen_vector_out, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open vector output file " + *gen_vector_out);
      for (double v : out.x) f.write(reinterpret_cast<const char*>(&v), sizeof(v));
      result["vector_out"] = *gen_vector_out;
    }
    Json config = param_config_json(*gen_p);
    config["seed_hex"] = *gen_seed_hex;
    emit(gaussprg::make_report("gen", config, *gen_seed_hex, result), *gen_o);
  });

  // ---- fool ----
  auto* cmd_fool = app.add_subcommand("fool", "estimate the fooling gap of the generator");
  auto fool_p = std::make_shared<ParamOpts>();
  auto fool_o = std::make_shared<OutputOpts>();
  auto fool_f = std::make_shared<FamilyOpts>();
  auto fool_N = std::make_shared<uint64_t>(20000);
  auto fool_master = std::make_shared<std::string>();
  add_param_options(cmd_fool, *fool_p);
  add_output_options(cmd_fool, *fool_o);
  add_family_options(cmd_fool, *fool_f);
  cmd_fool->add_option("--N", *fool_N, "samples per arm (>= 1000)");
  cmd_fool->add_option("--master-seed", *fool_master, "master seed as a hex string")->required();
  cmd_fool->callback([fool_p, fool_o, fool_f, fool_N, fool_master, &exit_code] {
    auto params = resolve_params(*fool_p);
    auto family = resolve_family(*fool_f, fool_p->n, fool_p->d, fool_p->k);
    auto master = gaussprg::bytes_from_hex(*fool_master);
    auto rep = gaussprg::fooling_gap(family, params, *fool_N, master);
    Json config = param_config_json(*fool_p);
    config.update(family_config_json(*fool_f));
    config["N"] = *fool_N;
    config["master_seed"] = *fool_master;
    Json report = gaussprg::make_report("fool", config, *fool_master, gaussprg::gap_report_to_json(rep));
    report["pass"] = rep.pass;
    emit(report, *fool_o);
    exit_code = rep.pass ? 0 : 1;
  });

  // ---- diag ----
  auto* cmd_diag = app.add_subcommand("diag", "diagnostic and validation suites");
  cmd_diag->require_subcommand(1);

  auto* diag_ind = cmd_diag->add_subcommand("independence", "exhaustive joint-uniformity check");
  auto ind_o = std::make_shared<OutputOpts>();
  auto ind_p = std::make_shared<uint64_t>(13);
  auto ind_t = std::make_shared<uint32_t>(3);
  auto ind_test_t = std::make_shared<uint32_t>(0);
  auto ind_indices = std::make_shared<std::vector<uint64_t>>();
  add_output_options(diag_ind, *ind_o);
  diag_ind->add_option("--p", *ind_p, "field modulus (prime)")->required();
  diag_ind->add_option("--t", *ind_t, "source wiseness")->required();
  diag_ind->add_option("--test-t", *ind_test_t, "tested subset size (default: t)");
  diag_ind->add_option("--indices", *ind_indices, "evaluation indices")->delimiter(',');
  diag_ind->callback([ind_o, ind_p, ind_t, ind_test_t, ind_indices, &exit_code] {
    uint32_t test_t = *ind_test_t == 0 ? *ind_t : *ind_test_t;
    std::vector<uint64_t> indices = *ind_indices;
    if (indices.empty()) {
      for (uint64_t j = 0; j < 6 && j < *ind_p; ++j) indices.push_back(j);
    }
    auto rep = gaussprg::exhaustive_independence_test(*ind_p, *ind_t, test_t, indices);
    Json config{{"p", *ind_p}, {"t", *ind_t}, {"test_t", test_t}, {"indices", indices}};
    Json report = gaussprg::make_report("diag-independence", config, "", gaussprg::independence_to_json(rep));
    report["pass"] = rep.pass;
    emit(report, *ind_o);
    exit_code = rep.pass ? 0 : 1;
  });

  auto* diag_cpl = cmd_diag->add_subcommand("coupling", "exact-vs-truncated Box-Muller closeness");
  auto cpl_o = std::make_shared<OutputOpts>();
  auto cpl_M = std::make_shared<int>(16);
  auto cpl_delta = std::make_shared<double>(-1.0);
  auto cpl_N = std::make_shared<uint64_t>(100000);
  auto cpl_seed = std::make_shared<uint64_t>(0x636f75706c696e67ull);
  add_output_options(diag_cpl, *cpl_o);
  diag_cpl->add_option("--M", *cpl_M, "grid precision bits")->required();
  diag_cpl->add_option("--delta", *cpl_delta, "closeness bound (default 2^(-M/2+1), capped at 2^-7)");
  diag_cpl->add_option("--N", *cpl_N, "sample count");
  diag_cpl->add_option("--seed", *cpl_seed, "RNG seed");
  diag_cpl->callback([cpl_o, cpl_M, cpl_delta, cpl_N, cpl_seed, &exit_code] {
    // the M-derived default stops being a probability for tiny M; cap it so
    // coarse grids are judged against the same bound the fine grids pass
    double delta = *cpl_delta < 0.0
                       ? std::min(gaussprg::default_coupling_delta(*cpl_M), std::exp2(-7))
                       : *cpl_delta;
    auto rep = gaussprg::coupling_test(*cpl_M, delta, *cpl_N, *cpl_seed);
    Json config{{"M", *cpl_M}, {"delta", delta}, {"N", *cpl_N}, {"seed", *cpl_seed}};
    Json report = gaussprg::make_report("diag-coupling", config, "", gaussprg::coupling_to_json(rep));
    report["pass"] = rep.pass;
    emit(report, *cpl_o);
    exit_code = rep.pass ? 0 : 1;
  });

  auto* diag_ac = cmd_diag->add_subcommand("anticonc", "small-ball probability of unit-norm polynomials");
  auto ac_o = std::make_shared<OutputOpts>();
  auto ac_d = std::make_shared<uint32_t>(2);
  auto ac_eps = std::make_shared<double>(0.01);
  auto ac_n = std::make_shared<uint32_t>(2);
  auto ac_N = std::make_shared<uint64_t>(100000);
  auto ac_trials = std::make_shared<uint32_t>(20);
  auto ac_c = std::make_shared<double>(5.0);
  auto ac_seed = std::make_shared<uint64_t>(0x616e7469636f6e63ull);
  add_output_options(diag_ac, *ac_o);
  diag_ac->add_option("--d", *ac_d, "polynomial degree")->required();
  diag_ac->add_option("--eps", *ac_eps, "interval half width")->required();
  diag_ac->add_option("--n", *ac_n, "dimension");
  diag_ac->add_option("--N", *ac_N, "samples per trial");
  diag_ac->add_option("--trials", *ac_trials, "number of random polynomials");
  diag_ac->add_option("--c", *ac_c, "test constant in c * d * eps^(1/d)");
  diag_ac->add_option("--seed", *ac_seed, "RNG seed");
  diag_ac->callback([ac_o, ac_d, ac_eps, ac_n, ac_N, ac_trials, ac_c, ac_seed, &exit_code] {
    auto rep = gaussprg::anti_concentration_test(*ac_d, *ac_eps, *ac_N, *ac_trials, *ac_c, *ac_n, *ac_seed);
    Json config{{"d", *ac_d},           {"eps", *ac_eps}, {"n", *ac_n},      {"N", *ac_N},
                {"trials", *ac_trials}, {"c", *ac_c},     {"seed", *ac_seed}};
    Json report = gaussprg::make_report("diag-anticonc", config, "", gaussprg::anticonc_to_json(rep));
    report["pass"] = rep.pass;
    emit(report, *ac_o);
    exit_code = rep.pass ? 0 : 1;
  });

  auto* diag_lem = cmd_diag->add_subcommand("lemmas", "expansion, hypercontractivity, gradient and bump suites");
  auto lem_o = std::make_shared<OutputOpts>();
  auto lem_seed = std::make_shared<uint64_t>(gaussprg::kDefaultSuiteSeed);
  add_output_options(diag_lem, *lem_o);
  diag_lem->add_option("--seed", *lem_seed, "suite RNG seed");
  diag_lem->callback([lem_o, lem_seed, &exit_code] {
    auto rep = gaussprg::lemma_suite(*lem_seed);
    Json config{{"seed", *lem_seed}};
    Json report = gaussprg::make_report("diag-lemmas", config, "", gaussprg::lemma_suite_to_json(rep));
    report["pass"] = rep.all_pass;
    emit(report, *lem_o);
    exit_code = rep.all_pass ? 0 : 1;
  });

  auto* diag_mol = cmd_diag->add_subcommand("mollifier", "per-factor mollifier values at supplied points");
  auto mol_o = std::make_shared<OutputOpts>();
  auto mol_f = std::make_shared<FamilyOpts>();
  auto mol_eps = std::make_shared<double>(0.1);
  auto mol_n = std::make_shared<uint32_t>(2);
  auto mol_d = std::make_shared<uint32_t>(2);
  auto mol_k = std::make_shared<uint32_t>(1);
  auto mol_points = std::make_shared<std::vector<std::string>>();
  add_output_options(diag_mol, *mol_o);
  add_family_options(diag_mol, *mol_f);
  diag_mol->add_option("--eps", *mol_eps, "mollifier eps")->required();
  diag_mol->add_option("--n", *mol_n, "family dimension");
  diag_mol->add_option("--d", *mol_d, "family degree");
  diag_mol->add_option("--k", *mol_k, "family size");
  diag_mol->add_option("--point", *mol_points, "evaluation point as comma-separated reals")
      ->required()
      ->take_all();
  diag_mol->callback([mol_o, mol_f, mol_eps, mol_n, mol_d, mol_k, mol_points] {
    auto family = resolve_family(*mol_f, *mol_n, *mol_d, *mol_k);
    gaussprg::MollifierConfig cfg{*mol_eps, &family};
    Json points = Json::array();
    for (const auto& text : *mol_points) {
      auto point = parse_point(text);
      if (point.size() != family.dimension()) {
        throw std::runtime_error("point dimension " + std::to_string(point.size()) +
                                 " != family dimension " + std::to_string(family.dimension()));
      }
      Json factors = Json::array();
      for (const auto& fac : gaussprg::mollifier_factors(cfg, point)) {
        factors.push_back(Json{{"poly", fac.poly_index},
                               {"t", fac.t},
                               {"grad_sq", fac.grad_sq},
                               {"grad_next_sq", fac.grad_next_sq},
                               {"factor", fac.factor}});
      }
      points.push_back(Json{{"point", point},
                            {"factors", factors},
                            {"G", gaussprg::mollifier_G(cfg, point)}});
    }
    Json config = family_config_json(*mol_f);
    config["eps"] = *mol_eps;
    config["n"] = *mol_n;
    config["d"] = *mol_d;
    config["k"] = *mol_k;
    Json result{{"family_digest", gaussprg::family_digest(family)}, {"points", points}};
    emit(gaussprg::make_report("diag-mollifier", config, "", result), *mol_o);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
