#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "holoscope/pipeline.hpp"

using namespace holoscope;
using report::json;

namespace {

struct Output {
  std::string path;
  std::string format = "json";
};

bool read_file(const std::string& path, std::string& text, std::string& error) {
  std::ifstream in(path);
  if (!in) {
    error = "cannot open " + path;
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    if (j.contains("float") && j.contains("decimal") && j.size() == 2) {
      out << prefix << " = " << j["decimal"].get<std::string>() << "\n";
      return;
    }
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    if (j.empty()) out << prefix << " = []\n";
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_string()) {
    out << prefix << " = " << j.get<std::string>() << "\n";
  } else {
    out << prefix << " = " << j.dump() << "\n";
  }
}

int emit(const Outcome& o, const Output& opt) {
  std::ofstream file;
  if (!opt.path.empty()) {
    file.open(opt.path);
    if (!file) {
      std::cerr << "holoscope: cannot write " << opt.path << "\n";
      return exit_code::kFailure;
    }
  }
  std::ostream& out = opt.path.empty() ? std::cout : file;
  if (opt.format == "text")
    flatten(o.report, "", out);
  else
    out << o.report.dump(2) << "\n";
  for (const auto& e : o.report["errors"]) std::cerr << "holoscope: " << e["stage"].get<std::string>() << ": " << e["message"].get<std::string>() << "\n";
  return o.exit_code;
}

Outcome input_failure(const std::string& command, const std::string& source, int code, const std::string& message) {
  Outcome o;
  o.report = json{{"command", command}, {"tool", report::tool()}, {"input", json{{"source", source}}}, {"errors", json::array()}};
  o.report["errors"].push_back(json{{"stage", "input"}, {"code", code}, {"message", message}});
  o.report["exit_code"] = code;
  o.report["timing"] = json{{"seconds", 0.0}};
  o.exit_code = code;
  return o;
}

/// Sequence file, or exit code on failure.
int load_sequence(const std::string& path, ExactSequence& s, std::string& error) {
  std::string text;
  if (!read_file(path, text, error)) return exit_code::kFailure;
  try {
    std::istringstream in(text);
    s = read_sequence(in);
  } catch (const Error& e) {
    error = e.what();
    return exit_code::kParse;
  }
  return exit_code::kOk;
}

std::vector<Rational> parse_initials(const std::string& text) {
  std::vector<Rational> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error("empty entry in --initials");
    out.push_back(parse_rational(item.substr(b, e - b + 1)));
  }
  return out;
}

void add_output(CLI::App* cmd, Output& out, bool csv) {
  cmd->add_option("--out", out.path, "Write the report here instead of stdout");
  std::vector<std::string> formats{"json", "text"};
  if (csv) formats.push_back("csv");
  cmd->add_option("--format", out.format, "Report format")->check(CLI::IsMember(formats))->capture_default_str();
}

void add_search(CLI::App* cmd, PipelineOptions& p) {
  cmd->add_option("--max-order", p.max_order, "Largest recurrence order tried")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--max-degree", p.max_degree, "Largest coefficient degree tried")->check(CLI::NonNegativeNumber)->capture_default_str();
}

void add_fit(CLI::App* cmd, PipelineOptions& p) {
  cmd->add_option("--depth", p.depth, "Richardson depth")->check(CLI::Range(0, 12))->capture_default_str();
  cmd->add_option("--fit-nmax", p.fit_n_max, "Extend through this index before fitting")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis of multisum and holonomic sequences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(report::kToolVersion));

  Output out;
  PipelineOptions popt;
  std::string input, initials, curve = "denominator";

  auto* analyze = app.add_subcommand("analyze-term", "Full pipeline for a term file");
  analyze->add_option("term_file", input, "Term file")->required();
  analyze->add_option("--nmax", popt.n_max, "Evaluate a_0 .. a_nmax")->check(CLI::NonNegativeNumber)->capture_default_str();
  add_search(analyze, popt);
  add_fit(analyze, popt);
  add_output(analyze, out, false);

  PipelineOptions oopt;
  oopt.n_max = 200;
  auto* obstruct = app.add_subcommand("obstruct", "Exponent obstruction test for a recurrence with initial values");
  obstruct->add_option("recurrence_file", input, "Recurrence file")->required();
  obstruct->add_option("--initials", initials, "Comma-separated a_0, ..., a_{d-1}")->required();
  obstruct->add_option("--nmax", oopt.n_max, "Extend through a_nmax")->check(CLI::NonNegativeNumber)->capture_default_str();
  add_fit(obstruct, oopt);
  add_output(obstruct, out, false);

  PipelineOptions fopt;
  auto* fit = app.add_subcommand("fit", "Growth, exponent and Gevrey class of a sequence file");
  fit->add_option("sequence_file", input, "Sequence file")->required();
  fit->add_option("--depth", fopt.depth, "Richardson depth")->check(CLI::Range(0, 12))->capture_default_str();
  add_output(fit, out, false);

  PipelineOptions copt;
  auto* certify = app.add_subcommand("certify", "Height and denominator certificates of a sequence file");
  certify->add_option("sequence_file", input, "Sequence file")->required();
  certify->add_option("--curve", curve, "Curve written in csv format")->check(CLI::IsMember({"height", "denominator"}))->capture_default_str();
  add_search(certify, copt);
  add_output(certify, out, true);

  long lcm_n = 500;
  auto* lcm = app.add_subcommand("lcm-table", "lcm of binomial coefficients, log L_n / n");
  lcm->add_option("--nmax", lcm_n, "Last row")->check(CLI::PositiveNumber)->capture_default_str();
  add_output(lcm, out, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::kParse;
  }

  try {
    if (*analyze) {
      std::string text, error;
      if (!read_file(input, text, error)) return emit(input_failure("analyze-term", input, exit_code::kFailure, error), out);
      return emit(analyze_term(text, input, popt), out);
    }
    if (*obstruct) {
      std::string text, error;
      if (!read_file(input, text, error)) return emit(input_failure("obstruct", input, exit_code::kFailure, error), out);
      Recurrence r;
      std::vector<Rational> init;
      try {
        std::istringstream in(text);
        r = read_recurrence(in);
        init = parse_initials(initials);
      } catch (const Error& e) {
        return emit(input_failure("obstruct", input, exit_code::kParse, e.what()), out);
      }
      return emit(holoscope::obstruct(r, init, input, oopt), out);
    }
    if (*fit) {
      ExactSequence s;
      std::string error;
      if (int rc = load_sequence(input, s, error)) return emit(input_failure("fit", input, rc, error), out);
      return emit(fit_only(s, input, fopt.depth), out);
    }
    if (*certify) {
      ExactSequence s;
      std::string error;
      if (int rc = load_sequence(input, s, error)) return emit(input_failure("certify", input, rc, error), out);
      if (out.format == "csv") {
        auto g = g_certificate(s, false);
        std::ofstream file;
        if (!out.path.empty()) file.open(out.path);
        std::ostream& os = out.path.empty() ? std::cout : file;
        write_curve_csv(os, curve == "height" ? g.height.curve : g.denominators.cert.curve);
        return exit_code::kOk;
      }
      return emit(holoscope::certify(s, input, copt), out);
    }
    if (*lcm) {
      if (out.format == "csv") {
        std::ofstream file;
        if (!out.path.empty()) file.open(out.path);
        std::ostream& os = out.path.empty() ? std::cout : file;
        write_lcm_csv(os, lcm_binomial_table(lcm_n));
        return exit_code::kOk;
      }
      return emit(lcm_table(lcm_n), out);
    }
  } catch (const std::exception& e) {
    std::cerr << "holoscope: " << e.what() << "\n";
    return exit_code::kFailure;
  }
  return exit_code::kFailure;
}
