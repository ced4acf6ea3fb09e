#include "config.hpp"

#include <fstream>
#include <sstream>

#include "gca/error.hpp"

namespace gca::cli {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
  throw Error(ErrorCode::config, "line " + std::to_string(line) + ": " + message);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double to_double(const std::string& tok, int line, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::logic_error&) {
    fail(line, "field '" + field + "': bad number '" + tok + "'");
  }
}

long to_long(const std::string& tok, int line, const std::string& field) {
  try {
    std::size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::logic_error&) {
    fail(line, "field '" + field + "': bad integer '" + tok + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  bool saw_model = false, saw_kappa = false, saw_orbit = false, saw_eps = false,
       saw_l = false;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    if (split_tokens(raw).empty()) continue;
    const auto colon = raw.find(':');
    if (colon == std::string::npos) fail(line, "expected 'key: value'");
    const auto keys = split_tokens(raw.substr(0, colon));
    if (keys.size() != 1) fail(line, "expected a single key before ':'");
    const std::string& key = keys[0];
    const std::string value = raw.substr(colon + 1);
    const auto toks = split_tokens(value);

    if (key == "model") {
      if (toks.size() != 1) fail(line, "field 'model': expected one path");
      cfg.model_path = toks[0];
      saw_model = true;
    } else if (key == "kappa") {
      // nodes as `x y ; x y ; ...`
      std::vector<double> current;
      auto flush = [&]() {
        if (current.empty()) return;
        if (current.size() != 2) fail(line, "field 'kappa': node needs 'x y'");
        cfg.kappa_nodes.emplace_back(current[0], current[1]);
        current.clear();
      };
      for (const std::string& tok : toks) {
        if (tok == ";") {
          flush();
        } else {
          current.push_back(to_double(tok, line, "kappa"));
          if (current.size() == 2) flush();
        }
      }
      flush();
      saw_kappa = true;
    } else if (key == "quasi_orbit") {
      if (toks.empty()) fail(line, "field 'quasi_orbit': expected boundary names");
      cfg.quasi_orbit = toks;
      saw_orbit = true;
    } else if (key == "eps") {
      for (const std::string& tok : toks) {
        const double e = to_double(tok, line, "eps");
        if (!(e > 0.0)) fail(line, "field 'eps': values must be positive");
        cfg.eps_ladder.push_back(e);
      }
      saw_eps = true;
    } else if (key == "L") {
      for (const std::string& tok : toks) {
        const long l = to_long(tok, line, "L");
        if (l < 1) fail(line, "field 'L': values must be positive");
        if (!cfg.truncation_ladder.empty() && l <= cfg.truncation_ladder.back())
          fail(line, "field 'L': ladder must be strictly increasing");
        cfg.truncation_ladder.push_back(static_cast<int>(l));
      }
      saw_l = true;
    } else if (key == "t_grid") {
      if (toks.size() != 3) fail(line, "field 't_grid': expected 'begin end step'");
      cfg.t_begin = to_double(toks[0], line, "t_grid");
      cfg.t_end = to_double(toks[1], line, "t_grid");
      cfg.t_step = to_double(toks[2], line, "t_grid");
      if (!(cfg.t_step > 0.0) || cfg.t_end < cfg.t_begin)
        fail(line, "field 't_grid': need begin <= end and step > 0");
    } else if (key == "probes") {
      const long p = to_long(toks.size() == 1 ? toks[0] : "", line, "probes");
      if (p < 1) fail(line, "field 'probes': must be at least 1");
      cfg.probes = static_cast<int>(p);
    } else if (key == "seed") {
      if (toks.size() != 1) fail(line, "field 'seed': expected one integer");
      try {
        cfg.seed = std::stoull(toks[0]);
      } catch (const std::logic_error&) {
        fail(line, "field 'seed': bad integer '" + toks[0] + "'");
      }
    } else if (key == "out") {
      if (toks.size() != 1) fail(line, "field 'out': expected one path");
      cfg.out_dir = toks[0];
    } else if (key == "threads") {
      const long t = to_long(toks.size() == 1 ? toks[0] : "", line, "threads");
      if (t < 1) fail(line, "field 'threads': must be at least 1");
      cfg.threads = static_cast<int>(t);
    } else if (key == "grid") {
      const long g = to_long(toks.size() == 1 ? toks[0] : "", line, "grid");
      if (g < 2) fail(line, "field 'grid': must be at least 2");
      cfg.symbol_grid = static_cast<int>(g);
    } else {
      fail(line, "unknown field '" + key + "'");
    }
  }

  if (!saw_model) throw Error(ErrorCode::config, "missing field 'model'");
  if (!saw_kappa) throw Error(ErrorCode::config, "missing field 'kappa'");
  if (!saw_orbit) throw Error(ErrorCode::config, "missing field 'quasi_orbit'");
  if (!saw_eps) throw Error(ErrorCode::config, "missing field 'eps'");
  if (!saw_l) throw Error(ErrorCode::config, "missing field 'L'");
  if (cfg.kappa_nodes.size() < 2)
    throw Error(ErrorCode::config, "field 'kappa': need at least two nodes");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::config, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gca::cli
