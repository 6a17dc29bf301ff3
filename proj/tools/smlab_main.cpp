#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "smlab/error.hpp"

using namespace smlab;
using namespace smlab::cli;

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotConverged:
    case ErrorCode::ToleranceNotMet:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::HessianDegenerate:
      return 3;
    default:
      return 2;
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

std::string render(const Json& doc, bool csv) {
  require_finite(doc);
  return csv ? flatten_csv(doc) : doc.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hessian and semi-flat Kahler geometry of exponential families"};
  app.set_config("--config", "", "TOML/INI file with default flag values; flags win");
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions opt;
  FlowOptions flow;
  bool json_out = false;
  bool csv_out = false;
  std::string out_path;
  std::string summary_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", opt.spec, "Catalogue potential name");
    sub->add_option("--family", opt.family, "Statistical family; --point is then in familiar parameters");
    sub->add_option("--side", opt.side, "primal or dual");
    sub->add_option("--point", opt.point, "Comma-separated base point");
    sub->add_option("--samples", opt.samples, "Sample count");
    sub->add_option("--seed", opt.seed, "Generator seed");
    sub->add_option("--tol", opt.tol, "Tolerance for pass/fail fields");
    sub->add_flag("--json", json_out, "JSON output (default)");
    sub->add_flag("--csv", csv_out, "CSV output");
    sub->add_option("--out", out_path, "Write output to a file");
  };

  auto* report = app.add_subcommand("report", "Metric, Ricci and sampled curvature at a point");
  auto* legendre = app.add_subcommand("legendre", "Fenchel, involution and dual-Hessian checks");
  auto* wdvv = app.add_subcommand("wdvv", "WDVV residuals and reductions");
  auto* mirror = app.add_subcommand("mirror", "Side-by-side primal and dual reports");
  auto* flow_cmd = app.add_subcommand("flow", "Hesse-Koszul grid flow or soliton check");
  for (auto* sub : {report, legendre, wdvv, mirror, flow_cmd}) add_common(sub);
  flow_cmd->add_option("--init", flow.init, "quad-n, aniso:a,b, separable:a,c or normal");
  flow_cmd->add_option("--grid", flow.grid, "Nodes per axis, NxM");
  flow_cmd->add_option("--bounds", flow.bounds, "lo1,hi1,lo2,hi2");
  flow_cmd->add_option("--dt", flow.dt, "Time step or auto");
  flow_cmd->add_option("--steps", flow.steps, "Number of steps");
  flow_cmd->add_option("--record-every", flow.record_every, "Snapshot interval for the CSV trajectory");
  flow_cmd->add_option("--summary", summary_path, "With --csv, write the JSON summary here");
  flow_cmd->add_option("--check", flow.check, "soliton");
  flow_cmd->add_option("--tmin", flow.tmin, "Smallest soliton time");
  flow_cmd->add_option("--tmax", flow.tmax, "Largest soliton time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (json_out && csv_out) throw Error(ErrorCode::ParseError, "--json and --csv are exclusive");
    if (*flow_cmd) {
      const FlowResult res = cmd_flow(opt, flow);
      if (csv_out && !res.csv.empty()) {
        emit(res.csv, out_path);
        if (!summary_path.empty()) emit(render(res.summary, false), summary_path);
      } else {
        emit(render(res.summary, csv_out), out_path);
      }
      if (res.degenerate) {
        std::cerr << "flow stopped: Hessian degenerate\n";
        return 3;
      }
      return 0;
    }
    Json doc;
    if (*report) doc = cmd_report(opt);
    if (*legendre) doc = cmd_legendre(opt);
    if (*wdvv) doc = cmd_wdvv(opt);
    if (*mirror) doc = cmd_mirror(opt);
    emit(render(doc, csv_out), out_path);
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.code());
  }
}
