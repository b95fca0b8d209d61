// Command line driver: runs one configured experiment and writes its
// artifacts under a content-addressed output directory.
//
//   graded-weyl <command> --config <path> [--out <dir>] [--threads N] [--no-cache]
//
// The output directory name is the digest of the fully defaulted config, so
// identical runs land in the same place and reruns are served from cache.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gw/config.hpp"
#include "gw/coverings.hpp"
#include "gw/csv.hpp"
#include "gw/digest.hpp"
#include "gw/errors.hpp"
#include "gw/experiments.hpp"
#include "gw/lie_core.hpp"
#include "gw/residue.hpp"
#include "gw/trace_formulas.hpp"
#include "gw/version.hpp"

namespace fs = std::filesystem;
using namespace gw;

namespace {

struct CliArgs {
  std::string command;
  std::string config_path;
  std::string out_root;
  long threads = 1;
  bool no_cache = false;
};

CliArgs parse_args(int argc, char** argv) {
  if (argc < 2) throw ConfigError("command", "usage: graded-weyl <command> --config <path>");
  CliArgs args;
  args.command = argv[1];
  for (int i = 2; i < argc; ++i) {
    const std::string flag = argv[i];
    auto need_value = [&](const char* name) -> std::string {
      if (i + 1 >= argc) throw ConfigError(name, "flag needs a value");
      return argv[++i];
    };
    if (flag == "--config") {
      args.config_path = need_value("config");
    } else if (flag == "--out") {
      args.out_root = need_value("out");
    } else if (flag == "--threads") {
      const std::string v = need_value("threads");
      char* stop = nullptr;
      args.threads = std::strtol(v.c_str(), &stop, 10);
      if (*stop != '\0' || args.threads < 1)
        throw ConfigError("threads", "expected a positive integer, got '" + v + "'");
    } else if (flag == "--no-cache") {
      args.no_cache = true;
    } else {
      throw ConfigError(flag, "unknown flag");
    }
  }
  if (args.config_path.empty()) throw ConfigError("config", "missing --config <path>");
  return args;
}

std::string output_root(const CliArgs& args) {
  if (!args.out_root.empty()) return args.out_root;
  if (const char* env = std::getenv("GRADED_WEYL_CACHE"); env && *env) return env;
  return "outputs";
}

// Every artifact starts with the config digest and toolkit version.
std::string stamp(const std::string& hash) {
  return "# config " + hash + "\n# version " + std::string(kToolkitVersion) + "\n";
}

std::string svg_stamp(const std::string& hash) {
  return "<!-- config " + hash + " version " + std::string(kToolkitVersion) + " -->\n";
}

void append_ledger(const fs::path& root, const std::string& hash, const std::string& command,
                   const std::string& status) {
  const fs::path ledger = root / "ledger.csv";
  const bool fresh = !fs::exists(ledger);
  std::ofstream out(ledger, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + ledger.string());
  if (fresh) out << "config_hash,command,status\n";
  out << hash << ',' << command << ',' << status << '\n';
}

ExperimentSpec to_spec(const ExperimentConfig& cfg) {
  ExperimentSpec spec;
  spec.group = cfg.group;
  spec.op = cfg.op;
  spec.weight = cfg.weight;
  spec.weight_scales = cfg.weight_scales;
  spec.gamma = cfg.gamma;
  spec.points = cfg.points;
  spec.half_widths = cfg.half_widths;
  spec.count = cfg.count;
  spec.k_min = cfg.k_min;
  spec.k_max = cfg.k_max;
  spec.seed = cfg.seed;
  return spec;
}

Symbol quartic_mixed_symbol() {  // xi^4 + eta^2
  Symbol p;
  p.d = 2;
  p.add_term({4, 0}, 1.0);
  p.add_term({0, 2}, 1.0);
  return p;
}

struct GroupTrace {
  TraceResult tau;
  double d_hom = 0.0;
  double order = 0.0;
};

GroupTrace group_trace(const ExperimentConfig& cfg) {
  GroupTrace g;
  if (cfg.group == "line") {
    g.tau = tau_exp_gaussian(Eigen::MatrixXd::Identity(1, 1));
    g.d_hom = 1.0;
    g.order = 2.0;
  } else if (cfg.group == "plane_aniso") {
    g.tau = tau_exp_aniso(quartic_mixed_symbol(), {1, 2}, 4);
    g.d_hom = 3.0;
    g.order = 4.0;
  } else {  // heisenberg
    g.tau = tau_exp_heisenberg(Eigen::MatrixXd::Identity(2, 2), 1);
    g.d_hom = 4.0;
    g.order = 2.0;
  }
  return g;
}

GradedLieAlgebra cover_algebra(const std::string& group) {
  if (group == "line") return abelian_algebra({1});
  if (group == "plane") return abelian_algebra({1, 1});
  if (group == "graded_plane") return abelian_algebra({1, 2});
  return heisenberg_algebra(1);
}

std::string join_longs(const std::vector<long>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string sv_csv(const std::vector<double>& mu) {
  std::string out = "k,mu\n";
  for (std::size_t k = 0; k < mu.size(); ++k)
    out += std::to_string(k + 1) + "," + format_double(mu[k]) + "\n";
  return out;
}

void run_command(const ExperimentConfig& cfg, const fs::path& dir, const std::string& hash) {
  const std::string head = stamp(hash);

  if (cfg.command == "trace") {
    const GroupTrace g = group_trace(cfg);
    std::string csv = "group,op_digest,method,value,error_estimate\n";
    csv += trace_csv_row(cfg.group, short_digest(cfg.op), g.tau);
    if (csv.back() != '\n') csv += '\n';
    write_text_file((dir / "summary.csv").string(), head + csv);
    return;
  }

  if (cfg.command == "residue") {
    const GroupTrace g = group_trace(cfg);
    const double closed = residue_closed_form(g.d_hom, g.order, g.tau);
    const ResidueResult def = residue_via_definition(g.d_hom, g.order, cfg.s_values, g.tau);
    std::string csv = "group,op_digest,closed_form,definition,spread\n";
    csv += residue_csv_row(cfg.group, short_digest(cfg.op), closed, def.value, def.spread);
    if (csv.back() != '\n') csv += '\n';
    write_text_file((dir / "summary.csv").string(), head + csv);
    return;
  }

  if (cfg.command == "weyl" || cfg.command == "spectrum") {
    const WeylExperimentResult r = weyl_experiment(to_spec(cfg));
    std::string csv;
    if (cfg.command == "weyl") {
      csv =
          "group,op,weight,points,exponent,fitted_constant,predicted_constant,"
          "relative_error,std_error,d_hom,order\n";
      csv += cfg.group + "," + cfg.op + "," + cfg.weight + "," + join_longs(cfg.points) + "," +
             format_double(r.fit.exponent) + "," + format_double(r.fit.constant) + "," +
             format_double(r.predicted.value) + "," + format_double(r.relative_error) + "," +
             format_double(r.fit.std_error) + "," + format_double(r.d_hom) + "," +
             format_double(r.order) + "\n";
    } else {
      csv = "group,op,weight,points,count,exponent,constant,std_error\n";
      csv += cfg.group + "," + cfg.op + "," + cfg.weight + "," + join_longs(cfg.points) + "," +
             std::to_string(r.sv.count()) + "," + format_double(r.fit.exponent) + "," +
             format_double(r.fit.constant) + "," + format_double(r.fit.std_error) + "\n";
    }
    write_text_file((dir / "summary.csv").string(), head + csv);
    write_text_file((dir / "singular_values.csv").string(), head + sv_csv(r.sv.mu));
    write_text_file((dir / "plot.svg").string(),
                    svg_stamp(hash) + spectrum_svg(r.sv.mu, cfg.group + " " + cfg.op));
    return;
  }

  if (cfg.command == "signed") {
    const SignedExperimentResult r = signed_experiment(to_spec(cfg));
    std::string csv =
        "group,op,weight,points,side,exponent,fitted_constant,predicted_constant,"
        "relative_error\n";
    const std::string base =
        cfg.group + "," + cfg.op + "," + cfg.weight + "," + join_longs(cfg.points) + ",";
    csv += base + "positive," + format_double(r.fit_positive.exponent) + "," +
           format_double(r.fit_positive.constant) + "," + format_double(r.predicted_positive) +
           "," + format_double(r.rel_positive) + "\n";
    csv += base + "negative," + format_double(r.fit_negative.exponent) + "," +
           format_double(r.fit_negative.constant) + "," + format_double(r.predicted_negative) +
           "," + format_double(r.rel_negative) + "\n";
    write_text_file((dir / "summary.csv").string(), head + csv);
    write_text_file((dir / "singular_values.csv").string(), head + sv_csv(r.positive.mu));
    write_text_file((dir / "negative_values.csv").string(), head + sv_csv(r.negative.mu));
    write_text_file((dir / "plot.svg").string(),
                    svg_stamp(hash) +
                        spectrum_svg(r.positive.mu, cfg.group + " " + cfg.op + " positive"));
    return;
  }

  if (cfg.command == "zeta") {
    const std::vector<ZetaRow> rows = zeta_trace_check(to_spec(cfg), cfg.z_values);
    std::string csv = "z,trace_lattice,trace_corrected,formula,rel_lattice,rel_corrected\n";
    for (const ZetaRow& row : rows)
      csv += format_double(row.z) + "," + format_double(row.trace_lattice) + "," +
             format_double(row.trace_corrected) + "," + format_double(row.formula) + "," +
             format_double(row.rel_lattice) + "," + format_double(row.rel_corrected) + "\n";
    write_text_file((dir / "summary.csv").string(), head + csv);
    return;
  }

  // cover
  const GradedLieAlgebra alg = cover_algebra(cfg.group);
  Region region;
  region.bounds = cfg.region;
  const Covering cov = greedy_cover(alg, region, cfg.eps);
  std::string csv = "group,eps,delta,centers,coverage_radius,max_multiplicity,measure_constant\n";
  csv += cfg.group + "," + format_double(cfg.eps) + "," + format_double(cov.delta) + "," +
         std::to_string(cov.centers.size()) + "," + format_double(cov.coverage_radius) + "," +
         std::to_string(cov.max_multiplicity()) + "," + format_double(cov.measure_constant) +
         "\n";
  write_text_file((dir / "summary.csv").string(), head + csv);
  write_text_file((dir / "covering.csv").string(), head + covering_csv(cov));
}

int run(int argc, char** argv) {
  const CliArgs args = parse_args(argc, argv);

  std::string text;
  try {
    text = read_text_file(args.config_path);
  } catch (const std::exception& e) {
    throw ConfigError("config", e.what());
  }
  const ConfigMap raw = parse_config(text);
  const ExperimentConfig cfg = validate_config(raw, args.command);

  const std::string hash = config_digest(cfg.effective);
  const fs::path root = output_root(args);
  const fs::path dir = root / hash;

  if (!args.no_cache && fs::exists(dir / "summary.csv")) {
    append_ledger(root, hash, cfg.command, "cached");
    std::cout << "cached " << dir.string() << "\n";
    return 0;
  }

  fs::create_directories(dir);
  write_text_file((dir / "config.txt").string(), stamp(hash) + canonicalize(cfg.effective));
  run_command(cfg, dir, hash);
  append_ledger(root, hash, cfg.command, "computed");
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
