#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gcf/errors.hpp"

namespace gcf {

/// Flat key-value run configuration: a text file of `key = value` lines
/// ('#' comments), overridden by command-line `key=value` pairs, later
/// wins. The GCF_LAB_OUT environment variable overrides the output dir.
class RunConfig {
 public:
  RunConfig(std::string subcommand, std::map<std::string, std::string> kv)
      : subcommand_(std::move(subcommand)), kv_(std::move(kv)) {
    validate();
  }

  static RunConfig load(const std::string& subcommand,
                        const std::string& path,
                        const std::vector<std::string>& overrides) {
    std::map<std::string, std::string> kv;
    if (!path.empty()) {
      std::ifstream f(path);
      if (!f) throw ConfigError("cannot read config file " + path);
      std::string line;
      int lineno = 0;
      while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
          throw ConfigError("config line " + std::to_string(lineno) +
                            " is not key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
      }
    }
    for (const auto& ov : overrides) {
      const auto eq = ov.find('=');
      if (eq == std::string::npos)
        throw ConfigError("override must be key=value: " + ov);
      kv[trim(ov.substr(0, eq))] = trim(ov.substr(eq + 1));
    }
    if (const char* env = std::getenv("GCF_LAB_OUT")) kv["out"] = env;
    return RunConfig(subcommand, std::move(kv));
  }

  const std::string& subcommand() const { return subcommand_; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_string(const std::string& key,
                         const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
  }

  double get_double(const std::string& key, double dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    try {
      size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("key " + key + " is not a number: " + it->second);
    }
  }

  int get_int(const std::string& key, int dflt) const {
    const double v = get_double(key, dflt);
    if (v != std::floor(v))
      throw ConfigError("key " + key + " is not an integer");
    return static_cast<int>(v);
  }

  bool get_bool(const std::string& key, bool dflt) const {
    const std::string v = get_string(key, dflt ? "true" : "false");
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key " + key + " is not a boolean: " + v);
  }

  /// Comma-separated doubles, for sweep axes.
  std::vector<double> get_list(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(get_string(key, ""));
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stod(trim(tok)));
    return out;
  }

 private:
  void validate() const {
    static const std::set<std::string> subcommands = {
        "flow", "soliton", "bounds", "ode", "holder", "measure", "sweep"};
    if (!subcommands.count(subcommand_))
      throw ConfigError("unknown subcommand: '" + subcommand_ + "'");
    static const std::set<std::string> keys = {
        "out",          "n",           "alpha",        "p",
        "f",            "body",        "grid.nodes",   "t_end",
        "safety",       "min_radius",  "snapshots",    "dump.snapshots",
        "window.lo",    "window.hi",   "ratio.cap",    "r0",
        "tol",          "mesh.size",   "source",       "frac",
        "snap.tol",     "expected.slope", "slope.tol", "partition.width",
        "check.barrier","tol.soliton", "residual.cap", "workers",
    };
    for (const auto& [k, v] : kv_) {
      if (k.rfind("sweep.", 0) == 0) {
        if (!keys.count(k.substr(6)))
          throw ConfigError("unknown sweep axis: " + k);
        continue;
      }
      if (!keys.count(k)) throw ConfigError("unknown config key: " + k);
    }
    if (has("alpha") && has("p")) {
      const double alpha = get_double("alpha", 0.0);
      const double p = get_double("p", 0.0);
      if (std::abs(p - (1.0 - 1.0 / alpha)) > 1e-12)
        throw ConfigError("alpha and p are inconsistent: expected p = 1 - 1/alpha");
    }
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }

  std::string subcommand_;
  std::map<std::string, std::string> kv_;
};

}  // namespace gcf
