#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace smlab::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kArtifactVersion = "0.1.0";

struct CommonOptions {
  std::string spec;
  std::string family;
  std::string side = "primal";
  std::string point;
  int samples = 100;
  unsigned long long seed = 1;
  double tol = 1e-9;
};

struct FlowOptions {
  std::string init = "quad-2";
  std::string grid = "33x33";
  std::string bounds;
  std::string dt = "auto";
  int steps = 100;
  int record_every = 0;
  std::string check;
  double tmin = 0.1;
  double tmax = 10.0;
};

Json cmd_report(const CommonOptions& opt);
Json cmd_legendre(const CommonOptions& opt);
Json cmd_wdvv(const CommonOptions& opt);
Json cmd_mirror(const CommonOptions& opt);

struct FlowResult {
  Json summary;
  std::string csv;  // trajectory, empty for --check runs
  bool degenerate = false;
};
FlowResult cmd_flow(const CommonOptions& opt, const FlowOptions& flow);

// "a,b,c" -> {a, b, c}. Throws ParseError.
std::vector<double> parse_list(const std::string& text);

// One "path,value" row per numeric leaf.
std::string flatten_csv(const Json& doc);

// Throws NotConverged when a number in the document is not finite.
void require_finite(const Json& doc);

}  // namespace smlab::cli
