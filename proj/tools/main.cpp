// lasso_path: worst-case instances, exact and approximate Lasso paths, and
// duality-gap verification from the command line.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lassopath/adversarial.hpp"
#include "lassopath/approx_homotopy.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/io.hpp"
#include "lassopath/verify.hpp"

using namespace lassopath;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kIoError = 2, kTruncated = 3 };

// 0 quiet, 1 errors (default), 2 info, 3 debug
int log_level() {
  static const int level = [] {
    const char* v = std::getenv("LASSO_PATH_LOG");
    if (!v) return 1;
    const std::string s = v;
    if (s == "quiet" || s == "0") return 0;
    if (s == "info" || s == "2") return 2;
    if (s == "debug" || s == "3") return 3;
    return 1;
  }();
  return level;
}

void log(int level, const std::string& msg) {
  if (level <= log_level()) std::cerr << "lasso_path: " << msg << '\n';
}

// Writes through `fn` to --out, or stdout when it is empty or "-".
template <typename Fn>
void emit(const std::string& out, Fn&& fn) {
  if (out.empty() || out == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream f(out);
  if (!f) throw IoError("cannot write " + out);
  fn(f);
  if (!f) throw IoError("write failed: " + out);
}

struct GenArgs {
  Index p = 0;
  double alpha_factor = kDefaultAlphaFactor;
  bool random = false;
  Index n = 100;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  if (a.random) {
    const ProblemInstance inst = gaussian_instance(a.n, a.p, a.seed);
    emit(a.out, [&](std::ostream& o) {
      write_instance(o, inst, {"gaussian-" + std::to_string(a.seed), "gaussian", std::nullopt});
    });
    return kOk;
  }
  try {
    const ProblemInstance inst = gen_pathological(a.p, a.alpha_factor);
    emit(a.out, [&](std::ostream& o) {
      write_instance(o, inst, {"pathological-" + std::to_string(a.p), "pathological", a.alpha_factor});
    });
    log(2, "generated pathological instance, p=" + std::to_string(a.p));
    return kOk;
  } catch (const PrecisionExhausted& e) {
    log(1, std::string("precision exhausted: ") + e.what());
    // Keep the deepest level whose path was reproduced.
    const Index achieved = std::max<Index>(e.achieved_p(), 1);
    const auto levels = pathological_chain({achieved, a.alpha_factor, 1.0});
    emit(a.out, [&](std::ostream& o) {
      write_instance(o, levels.back().instance,
                     {"pathological-" + std::to_string(achieved), "pathological", a.alpha_factor});
    });
    log(1, "achieved p=" + std::to_string(achieved));
    return kTruncated;
  }
}

struct InputArgs {
  std::string file;
  std::string format;
  bool normalize = false;
};

LoadedInstance load(const InputArgs& in) {
  DataFormat fmt = format_from_extension(in.file);
  if (!in.format.empty()) fmt = *parse_format(in.format);
  return ingest(in.file, fmt, in.normalize);
}

struct PathArgs {
  InputArgs input;
  bool approx = false;
  double eps = 0.1;
  std::optional<double> lambda1;
  std::optional<double> lambda_min;
  std::string out;
};

int run_path(const PathArgs& a) {
  const LoadedInstance data = load(a.input);
  const ProblemInstance& inst = data.instance;
  const bool pathological = data.meta.generated_by == "pathological";
  RegularizationPath path;
  if (a.approx) {
    ApproxOptions opts;
    opts.epsilon = a.eps;
    opts.lambda_1 = a.lambda1;
    opts.extended_precision = pathological;
    path = compute_approx_path(inst, opts);
  } else {
    HomotopyOptions opts = pathological ? pathological_options() : HomotopyOptions{};
    if (a.lambda_min) opts.lambda_min = a.lambda_min;
    path = compute_exact_path(inst, opts);
  }
  emit(a.out, [&](std::ostream& o) { write_path(o, path); });
  log(2, std::to_string(count_segments(path)) + " segments, status " + to_string(path.status) +
             ", " + std::to_string(path.simultaneous_events) + " simultaneous events");
  if (path.truncated()) {
    log(1, "path truncated (" + to_string(path.status) + ") at lambda " +
               std::to_string(path.lambda_end()));
    return kTruncated;
  }
  return kOk;
}

struct VerifyArgs {
  InputArgs input;
  std::string path_file;
  std::optional<double> eps;
  std::size_t samples = 100;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  const LoadedInstance data = load(a.input);
  const RegularizationPath path = read_path(a.path_file);
  if (!path.kinks.empty() && path.kinks.front().coeffs.size() != data.instance.p()) {
    throw IoError("path has " + std::to_string(path.kinks.front().coeffs.size()) +
                  " variables, instance has " + std::to_string(data.instance.p()));
  }
  const double eps = a.eps.value_or(path.kind == PathKind::Approximate ? path.epsilon : 1e-9);
  const VerificationReport rep = verify_path(data.instance, path, eps, a.samples);
  emit(a.out, [&](std::ostream& o) { o << report_json(rep) << '\n'; });
  if (!rep.pass) {
    log(1, "verification failed: relative gap " + std::to_string(rep.max_relative_gap) +
               " at lambda " + std::to_string(rep.worst_lambda));
    return kVerifyFailed;
  }
  return path.truncated() ? kTruncated : kOk;
}

int run_stats(const std::string& path_file, const std::string& out) {
  const RegularizationPath path = read_path(path_file);
  const StructuralBounds b = check_structural_bounds(path);
  nlohmann::json doc;
  doc["kind"] = path.kind == PathKind::Exact ? "exact" : "approx";
  doc["segments"] = count_segments(path);
  doc["status"] = to_string(path.status);
  doc["lambda_max"] = path.lambda_max;
  doc["lambda_end"] = path.lambda_end();
  doc["p"] = path.kinks.empty() ? 0 : path.kinks.front().coeffs.size();
  doc["upper_bound_ok"] = b.upper_bound_ok;
  doc["antipodal_free"] = b.antipodal_free;
  if (path.kind == PathKind::Approximate) {
    doc["epsilon"] = path.epsilon;
    doc["first_order_steps"] = path.first_order_steps;
  }
  emit(out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
  return path.truncated() ? kTruncated : kOk;
}

int run_plot(const std::string& path_file, const std::string& out) {
  const RegularizationPath path = read_path(path_file);
  emit(out, [&](std::ostream& o) { emit_plot_data(path, o); });
  return kOk;
}

void add_input(CLI::App* cmd, InputArgs& in) {
  cmd->add_option("instance", in.file, "instance file (.json or .csv)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", in.format, "input format, default from extension")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--normalize", in.normalize, "center and scale columns of X and y");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lasso regularization paths: worst cases, exact and approximate homotopy"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a worst-case (or random) instance");
  gen_cmd->add_option("--p", gen.p, "number of variables")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--alpha-factor", gen.alpha_factor, "fraction of the admissible alpha")
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_flag("--random", gen.random, "i.i.d. Gaussian instance instead");
  gen_cmd->add_option("--n", gen.n, "observations for --random")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "seed for --random");
  gen_cmd->add_option("--out", gen.out, "output file (default stdout)");

  PathArgs path;
  auto* path_cmd = app.add_subcommand("path", "compute an exact or approximate path");
  add_input(path_cmd, path.input);
  auto* exact_flag = path_cmd->add_flag("--exact", "exact homotopy (default)");
  auto* approx_flag = path_cmd->add_flag("--approx", path.approx, "approximate homotopy");
  exact_flag->excludes(approx_flag);
  path_cmd->add_option("--eps", path.eps, "target relative duality gap")->check(CLI::Range(0.0, 1.0));
  path_cmd->add_option("--lambda1", path.lambda1, "lower end of an approximate path");
  path_cmd->add_option("--lambda-min", path.lambda_min, "lower end of an exact path");
  path_cmd->add_option("--out", path.out, "output path file (default stdout)");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "check duality gaps along a path");
  add_input(verify_cmd, verify.input);
  verify_cmd->add_option("path", verify.path_file, "path file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--eps", verify.eps, "relative gap target (default: the path's own)");
  verify_cmd->add_option("--samples", verify.samples, "number of log-spaced lambdas")
      ->check(CLI::Range(2, 100000000));
  verify_cmd->add_option("--out", verify.out, "report file (default stdout)");

  std::string stats_path, stats_out;
  auto* stats_cmd = app.add_subcommand("stats", "summarize a path file");
  stats_cmd->add_option("path", stats_path, "path file")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--out", stats_out, "output file (default stdout)");

  std::string plot_path, plot_out;
  auto* plot_cmd = app.add_subcommand("plot-data", "CSV of sign(w)|w|^0.1 per record");
  plot_cmd->add_option("path", plot_path, "path file")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--out", plot_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIoError;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*path_cmd) return run_path(path);
    if (*verify_cmd) return run_verify(verify);
    if (*stats_cmd) return run_stats(stats_path, stats_out);
    if (*plot_cmd) return run_plot(plot_path, plot_out);
  } catch (const PrecisionExhausted& e) {
    log(1, e.what());
    return kTruncated;
  } catch (const std::exception& e) {
    log(1, e.what());
    return kIoError;
  }
  return kOk;
}
