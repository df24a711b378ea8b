#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "forestfact/compose.hpp"
#include "forestfact/sim.hpp"
#include "forestfact/verify.hpp"
#include "forestfact/window.hpp"

using namespace forestfact;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2 };

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

/// A file path, or a built-in family name when no such file exists.
FamilySpec load_spec(const std::string& where) {
  if (!std::filesystem::exists(where)) {
    if (auto b = builtin_family(where)) return *b;
    throw ValidationError("no spec file or built-in family named '" + where + "'");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp(where));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  return FamilySpec::from_json(j);
}

FamilySpec valid_spec(const std::string& where) {
  auto spec = load_spec(where);
  auto report = validate(spec);
  if (!report.ok()) {
    std::string msg;
    for (const auto& v : report.violations) msg += (msg.empty() ? "" : "; ") + v;
    throw ValidationError(msg);
  }
  return spec;
}

struct Target {
  std::unique_ptr<Engine> engine;
  std::unique_ptr<Pipeline> pipeline;
  const Factorization& get() const {
    if (pipeline) return *pipeline;
    return *engine;
  }
};

Target make_target(const std::string& spec_path, bool pipeline, Nat max_depth) {
  EngineOptions opts;
  opts.max_depth = max_depth;
  auto spec = valid_spec(spec_path);
  Target t;
  if (pipeline)
    t.pipeline = std::make_unique<Pipeline>(std::move(spec), opts);
  else
    t.engine = std::make_unique<Engine>(std::make_shared<SpecFamily>(std::move(spec)), opts);
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forestfact: lazy forest factorizations of the omega-regular tree"};
  app.require_subcommand(1);

  std::string spec = "k2-family", out, format = "json", address = "/", config_path, trace_path;
  Nat radius = 2, sons = 3, factors = 4, max_depth = 6, slot = 0, factor = 0, index = 0;
  bool pipeline = false;

  auto add_spec = [&](CLI::App* c) {
    c->add_option("--spec", spec, "spec JSON file or built-in name (" + [] {
      std::string s;
      for (const auto& n : builtin_family_names()) s += (s.empty() ? "" : ", ") + n;
      return s;
    }() + ")")->capture_default_str();
    c->add_option("--max-depth", max_depth, "depth cap for the engine")->capture_default_str();
    c->add_flag("--pipeline", pipeline, "use the two-stage composed factorization");
  };
  auto add_window = [&](CLI::App* c) {
    c->add_option("--radius", radius, "ball radius d")->capture_default_str();
    c->add_option("--sons", sons, "sons per vertex k")->capture_default_str();
    c->add_option("--factors", factors, "factors M to label")->capture_default_str();
  };

  auto* validate_cmd = app.add_subcommand("validate", "validate a spec and print its normalized form");
  validate_cmd->add_option("spec", spec, "spec JSON file or built-in name")->required();

  auto* ball_cmd = app.add_subcommand("ball", "materialize and export a finite ball");
  add_spec(ball_cmd);
  add_window(ball_cmd);
  ball_cmd->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}))->capture_default_str();
  ball_cmd->add_option("--out", out, "output path (stdout when omitted)");

  auto* edge_cmd = app.add_subcommand("edge", "factor and endpoint labels of the edge to a son");
  add_spec(edge_cmd);
  edge_cmd->add_option("--address", address, "parent address, e.g. /3/1")->capture_default_str();
  edge_cmd->add_option("--slot", slot, "son slot")->capture_default_str();

  auto* label_cmd = app.add_subcommand("label", "label of a vertex in one factor");
  add_spec(label_cmd);
  label_cmd->add_option("--address", address, "vertex address")->capture_default_str();
  label_cmd->add_option("--factor", factor, "factor m")->capture_default_str();

  auto* vertex_cmd = app.add_subcommand("vertex", "address carrying a forest vertex");
  add_spec(vertex_cmd);
  vertex_cmd->add_option("--factor", factor, "factor m")->capture_default_str();
  vertex_cmd->add_option("--index", index, "forest vertex index")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "run window checks");
  add_spec(verify_cmd);
  add_window(verify_cmd);

  auto* sim_cmd = app.add_subcommand("simulate", "run the finite scheduler on a host graph");
  sim_cmd->add_option("--config", config_path, "config JSON")->required();
  sim_cmd->add_option("--trace", trace_path, "trace output (JSONL)")->required();

  auto* check_cmd = app.add_subcommand("check-trace", "replay a trace and check it");
  check_cmd->add_option("--trace", trace_path, "trace JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate_cmd) {
      auto s = valid_spec(spec);
      std::cout << s.normalized() << "\n";
      return kOk;
    }
    if (*ball_cmd) {
      auto t = make_target(spec, pipeline, max_depth);
      auto b = materialize_ball(t.get(), radius, sons, factors);
      write_out(out, format == "dot" ? export_dot(b) : export_json(b));
      return kOk;
    }
    if (*edge_cmd) {
      auto t = make_target(spec, pipeline, max_depth);
      auto a = t.get().factor_of_edge(TreeAddress::parse(address), slot);
      std::cout << nlohmann::json{{"m", a.m}, {"i", a.i}, {"j", a.j}}.dump() << "\n";
      return kOk;
    }
    if (*label_cmd) {
      auto t = make_target(spec, pipeline, max_depth);
      std::cout << t.get().label_of(TreeAddress::parse(address), factor) << "\n";
      return kOk;
    }
    if (*vertex_cmd) {
      auto t = make_target(spec, pipeline, max_depth);
      std::cout << t.get().vertex_of(factor, index).str() << "\n";
      return kOk;
    }
    if (*verify_cmd) {
      auto t = make_target(spec, pipeline, max_depth);
      auto b = materialize_ball(t.get(), radius, sons, factors);
      WindowChecks checks;
      checks.depth_law = !pipeline;
      auto reports = verify_window(b, t.get(), checks);
      std::cout << to_json(reports).dump(1) << "\n";
      return all_pass(reports) ? kOk : kVerifyFailed;
    }
    if (*sim_cmd) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(slurp(config_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
      }
      auto trace = run(SimConfig::from_json(j));
      write_out(trace_path, export_trace(trace));
      std::cout << check_C(trace).to_json().dump(1) << "\n";
      return kOk;
    }
    if (*check_cmd) {
      std::vector<VerificationReport> reports;
      try {
        reports = verify_trace(parse_trace(slurp(trace_path)));
      } catch (const ValidationError& e) {
        reports.push_back({"trace parse", nlohmann::json{{"trace", trace_path}}, false, nlohmann::json{{"error", e.what()}}});
      }
      std::cout << to_json(reports).dump(1) << "\n";
      return all_pass(reports) ? kOk : kVerifyFailed;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
