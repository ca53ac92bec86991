#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wco/classify.hpp"
#include "wco/io.hpp"
#include "wco/oracle.hpp"

namespace wco::cli {

enum ExitCode : int { ok = 0, input_error = 1, finding = 2 };

/// 2 when the report carries any finding, 0 otherwise.
inline int exit_status(const Json& report) {
  return report.contains("findings") && !report.at("findings").empty() ? finding : ok;
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse_error, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string render(const Json& report, const std::string& format) {
  if (format == "text") {
    std::string out;
    render_text(report, out);
    return out;
  }
  return report.dump(2) + "\n";
}

inline Json header(const std::string& command, const SpecDocument& spec) {
  Json out;
  out["tool"] = "wco " + command;
  out["version"] = std::string(kToolVersion);
  out["input_digest"] = input_digest(spec);
  out["field"] = std::string(field_mode_name(spec.field()));
  return out;
}

template <class T>
T pick(const CLI::Option* flag, const T& flag_value, const std::optional<T>& doc_value, const T& fallback) {
  if (flag->count() > 0) return flag_value;
  return doc_value ? *doc_value : fallback;
}

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classify weighted composition operators on discrete L2 spaces"};
  app.require_subcommand(1);

  std::string spec_path, format = "json";
  unsigned max_order = 4, alt_shifts = 4, alt_depth = 4, trials = 100;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;

  auto* classify_cmd = app.add_subcommand("classify", "Pointwise verdicts, J-table and audits");
  classify_cmd->add_option("spec", spec_path, "Spec document (JSON)")->required();
  auto* c_order = classify_cmd->add_option("--max-order", max_order, "Highest order K");
  auto* c_shifts = classify_cmd->add_option("--alt-shifts", alt_shifts, "Completely-alternating shifts m_max");
  auto* c_depth = classify_cmd->add_option("--alt-depth", alt_depth, "Completely-alternating depth n_max");
  auto* c_tol = classify_cmd->add_option("--tolerance", tolerance, "Zero tolerance in float mode");
  classify_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force matrix verdicts and agreement check");
  oracle_cmd->add_option("spec", spec_path, "Spec document (JSON)")->required();
  auto* o_order = oracle_cmd->add_option("--max-order", max_order, "Highest order K");
  auto* o_trials = oracle_cmd->add_option("--trials", trials, "Random vectors per order");
  auto* o_seed = oracle_cmd->add_option("--seed", seed, "Seed for the random vectors");
  auto* o_tol = oracle_cmd->add_option("--tolerance", tolerance, "Zero tolerance in float mode");
  oracle_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));

  std::string example_name, output_path;
  std::vector<std::string> example_params;
  auto* example_cmd = app.add_subcommand("example", "Write a built-in spec document");
  example_cmd->add_option("name", example_name, "identity, constant-mult, dirichlet, star-tail, two-cycle")->required();
  example_cmd->add_option("params", example_params, "Example parameters");
  example_cmd->add_option("-o,--output", output_path, "Write to a file instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }

  try {
    if (*example_cmd) {
      const std::string doc = generate_example(example_name, example_params).dump(2) + "\n";
      if (output_path.empty()) out << doc;
      else {
        std::ofstream file(output_path, std::ios::binary);
        if (!file) throw Error(ErrorKind::parse_error, output_path + ": cannot write");
        file << doc;
      }
      return ok;
    }

    const SpecDocument spec = parse_spec_text(detail::read_file(spec_path));
    const auto& o = spec.options;

    if (*classify_cmd) {
      ClassifyOptions opt;
      opt.max_order = detail::pick(c_order, max_order, o.max_order, opt.max_order);
      opt.alt_shifts = detail::pick(c_shifts, alt_shifts, o.alt_shifts, opt.alt_shifts);
      opt.alt_depth = detail::pick(c_depth, alt_depth, o.alt_depth, opt.alt_depth);
      opt.tolerance = detail::pick(c_tol, tolerance, o.tolerance, opt.tolerance);
      if (opt.max_order < 1) throw Error(ErrorKind::parse_error, "--max-order must be at least 1");
      Json report = detail::header("classify", spec);
      Json options{{"max_order", opt.max_order}, {"alt_shifts", opt.alt_shifts}, {"alt_depth", opt.alt_depth}};
      options["tolerance"] = spec.field() == FieldMode::rational ? Json("exact") : Json(opt.tolerance);
      report["options"] = options;
      report.update(std::visit([&](const auto& sys) { return classification_json(sys, classify(sys, opt), opt); }, spec.system));
      out << detail::render(report, format);
      return exit_status(report);
    }

    const unsigned k = detail::pick(o_order, max_order, o.max_order, 4u);
    const unsigned n_trials = detail::pick(o_trials, trials, o.trials, 100u);
    const bool have_seed = o_seed->count() > 0 || o.seed.has_value();
    if (n_trials > 0 && !have_seed) throw Error(ErrorKind::parse_error, "--seed is required when --trials is nonzero");
    const std::uint64_t s = detail::pick(o_seed, seed, o.seed, std::uint64_t{0});
    const double tol = detail::pick(o_tol, tolerance, o.tolerance, 1e-9);
    if (k < 1) throw Error(ErrorKind::parse_error, "--max-order must be at least 1");
    Json report = detail::header("oracle", spec);
    report["options"] = Json{{"max_order", k}, {"trials", n_trials}, {"seed", s}};
    report.update(std::visit([&](const auto& sys) { return oracle_json(oracle_verdicts(sys, k, n_trials, s, tol)); }, spec.system));
    out << detail::render(report, format);
    return exit_status(report);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_input_error() ? input_error : finding;
  }
}

inline int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace wco::cli
