#include "gca/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gca::io {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const std::complex<double>& v) {
  return fmt(v.real()) + " " + fmt(v.imag());
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw Error(ErrorCode::model_file, "line " + std::to_string(line) + ": " + message);
}

// Whitespace-token scanner with line tracking.
class Scanner {
 public:
  explicit Scanner(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::vector<std::string> tokens;
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if (!tokens.empty()) lines_.push_back({number, std::move(tokens)});
    }
  }

  bool done() const { return pos_ >= lines_.size(); }
  int line() const {
    return done() ? (lines_.empty() ? 0 : lines_.back().number) : lines_[pos_].number;
  }
  const std::vector<std::string>& peek() const {
    if (done()) fail(line(), "unexpected end of file");
    return lines_[pos_].tokens;
  }
  std::vector<std::string> next() {
    auto tokens = peek();
    ++pos_;
    return tokens;
  }

 private:
  struct Line {
    int number;
    std::vector<std::string> tokens;
  };
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

double parse_double(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) fail(line, "bad number '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(line, "bad number '" + tok + "'");
  }
}

long parse_int(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used != tok.size()) fail(line, "bad integer '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(line, "bad integer '" + tok + "'");
  }
}

LatticePoint parse_point(const std::string& tok, int line) {
  if (tok.size() < 3 || tok.front() != '(' || tok.back() != ')')
    fail(line, "bad lattice point '" + tok + "'");
  const std::string body = tok.substr(1, tok.size() - 2);
  const auto comma = body.find(',');
  LatticePoint p{0, 0};
  if (comma == std::string::npos) {
    p[0] = static_cast<int>(parse_int(body, line));
  } else {
    p[0] = static_cast<int>(parse_int(body.substr(0, comma), line));
    p[1] = static_cast<int>(parse_int(body.substr(comma + 1), line));
  }
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string write_groupoid(const FiniteGroupoid& g) {
  std::ostringstream out;
  out << "gca-groupoid\n";
  out << "units " << g.unit_count();
  for (const std::string& u : g.units()) out << ' ' << u;
  out << '\n';
  out << "arrows " << g.arrow_count() << '\n';
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    const Arrow& arr = g.arrow(a);
    out << arr.id << ' ' << g.unit_id(arr.source) << ' ' << g.unit_id(arr.range)
        << ' ' << g.arrow(g.inverse(a)).id << ' ' << fmt(g.weight(a)) << '\n';
  }
  bool any_truncated = false;
  for (UnitIndex x = 0; x < g.unit_count(); ++x) any_truncated |= g.is_truncated_unit(x);
  if (any_truncated) {
    out << "truncated";
    for (UnitIndex x = 0; x < g.unit_count(); ++x)
      if (g.is_truncated_unit(x)) out << ' ' << g.unit_id(x);
    out << '\n';
  }
  std::size_t rows = 0;
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a)
    for (ArrowIndex b : g.range_fiber(g.source(a)))
      if (g.compose(a, b) != kNoArrow) ++rows;
  out << "compose " << rows << '\n';
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a)
    for (ArrowIndex b : g.range_fiber(g.source(a))) {
      const ArrowIndex ab = g.compose(a, b);
      if (ab != kNoArrow)
        out << g.arrow(a).id << ' ' << g.arrow(b).id << ' ' << g.arrow(ab).id << '\n';
    }
  return out.str();
}

GroupoidPtr read_groupoid(const std::string& text) {
  Scanner sc(text);
  if (sc.next() != std::vector<std::string>{"gca-groupoid"})
    fail(sc.line(), "expected 'gca-groupoid' header");

  FiniteGroupoid::Tables t;
  {
    const auto toks = sc.next();
    if (toks.size() < 2 || toks[0] != "units") fail(sc.line(), "expected units line");
    const long n = parse_int(toks[1], sc.line());
    if (static_cast<long>(toks.size()) != n + 2)
      fail(sc.line(), "unit count does not match the list");
    t.units.assign(toks.begin() + 2, toks.end());
  }
  std::unordered_map<std::string, UnitIndex> unit_of;
  for (std::size_t i = 0; i < t.units.size(); ++i)
    unit_of[t.units[i]] = static_cast<UnitIndex>(i);

  long arrow_count = 0;
  {
    const auto toks = sc.next();
    if (toks.size() != 2 || toks[0] != "arrows") fail(sc.line(), "expected arrows line");
    arrow_count = parse_int(toks[1], sc.line());
  }
  std::vector<std::string> inverse_ids;
  std::unordered_map<std::string, ArrowIndex> arrow_of;
  for (long i = 0; i < arrow_count; ++i) {
    const int line = sc.line();
    const auto toks = sc.next();
    if (toks.size() != 5) fail(line, "arrow line needs 'id d r inverse weight'");
    auto d = unit_of.find(toks[1]);
    auto r = unit_of.find(toks[2]);
    if (d == unit_of.end()) fail(line, "unknown source unit '" + toks[1] + "'");
    if (r == unit_of.end()) fail(line, "unknown range unit '" + toks[2] + "'");
    arrow_of[toks[0]] = static_cast<ArrowIndex>(t.arrows.size());
    t.arrows.push_back({toks[0], d->second, r->second});
    inverse_ids.push_back(toks[3]);
    t.weights.push_back(parse_double(toks[4], line));
  }
  t.inverse.reserve(inverse_ids.size());
  for (std::size_t i = 0; i < inverse_ids.size(); ++i) {
    auto it = arrow_of.find(inverse_ids[i]);
    if (it == arrow_of.end()) fail(0, "unknown inverse arrow '" + inverse_ids[i] + "'");
    t.inverse.push_back(it->second);
  }

  if (!sc.done() && sc.peek()[0] == "truncated") {
    const int line = sc.line();
    const auto toks = sc.next();
    for (std::size_t i = 1; i < toks.size(); ++i) {
      auto it = unit_of.find(toks[i]);
      if (it == unit_of.end()) fail(line, "unknown truncated unit '" + toks[i] + "'");
      t.truncated_units.push_back(it->second);
    }
  }

  {
    const auto toks = sc.next();
    if (toks.size() != 2 || toks[0] != "compose")
      fail(sc.line(), "expected compose line");
    const long rows = parse_int(toks[1], sc.line());
    for (long i = 0; i < rows; ++i) {
      const int line = sc.line();
      const auto row = sc.next();
      if (row.size() != 3) fail(line, "compose line needs 'left right result'");
      std::array<ArrowIndex, 3> entry{};
      for (int j = 0; j < 3; ++j) {
        auto it = arrow_of.find(row[j]);
        if (it == arrow_of.end()) fail(line, "unknown arrow '" + row[j] + "'");
        entry[j] = it->second;
      }
      t.composition.push_back(entry);
    }
  }
  if (!sc.done()) fail(sc.line(), "trailing content");

  try {
    return std::make_shared<FiniteGroupoid>(std::move(t));
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::model_file, e.what());
  }
}

// ---------------------------------------------------------------------------

std::string write_kernel(const Kernel& f) {
  std::ostringstream out;
  for (ArrowIndex a : f.support())
    out << f.parent()->arrow(a).id << ' ' << fmt(f.at(a)) << '\n';
  return out.str();
}

Kernel read_kernel(const GroupoidPtr& parent, const std::string& text) {
  Scanner sc(text);
  Kernel f(parent);
  while (!sc.done()) {
    const int line = sc.line();
    const auto toks = sc.next();
    if (toks.size() != 3) fail(line, "kernel line needs 'arrow_id re im'");
    const auto a = parent->find_arrow(toks[0]);
    if (!a) fail(line, "unknown arrow '" + toks[0] + "'");
    f.set(*a, {parse_double(toks[1], line), parse_double(toks[2], line)});
  }
  return f;
}

std::string write_unit_function(const UnitFunction& psi) {
  std::ostringstream out;
  const FiniteGroupoid& g = *psi.parent();
  for (UnitIndex x = 0; x < g.unit_count(); ++x)
    out << g.unit_id(x) << ' ' << fmt(psi.at(x)) << '\n';
  return out.str();
}

UnitFunction read_unit_function(const GroupoidPtr& parent, const std::string& text) {
  Scanner sc(text);
  UnitFunction psi(parent);
  while (!sc.done()) {
    const int line = sc.line();
    const auto toks = sc.next();
    if (toks.size() != 3) fail(line, "unit function line needs 'unit_id re im'");
    const auto x = parent->find_unit(toks[0]);
    if (!x) fail(line, "unknown unit '" + toks[0] + "'");
    psi.set(*x, {parse_double(toks[1], line), parse_double(toks[2], line)});
  }
  return psi;
}

std::string write_matrix(const OperatorMatrix& m) {
  std::ostringstream out;
  out << "basis";
  for (const std::string& b : m.basis) out << ' ' << b;
  out << '\n';
  if (!m.unit_weights()) {
    out << "weights";
    for (int i = 0; i < m.weights.size(); ++i) out << ' ' << fmt(m.weights[i]);
    out << '\n';
  }
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) {
      if (j) out << ' ';
      out << fmt(m.entries(i, j));
    }
    out << '\n';
  }
  return out.str();
}

std::string write_spectrum_csv(const SpectrumSet& s) {
  std::ostringstream out;
  out << "# kind="
      << (s.kind == SpectrumKind::exact_eigenvalues ? "exact-eigenvalues"
                                                    : "sampled-range")
      << " step=" << fmt(s.resolution) << '\n';
  out << "re,im\n";
  for (const auto& p : s.points) out << fmt(p.real()) << ',' << fmt(p.imag()) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

std::string write_group(const BoundaryGroup& g) {
  if (std::holds_alternative<LatticeGroup>(g)) return "Z";
  if (const auto* ab = std::get_if<FiniteAbelianGroup>(&g)) {
    std::string s = "cyclic";
    for (int o : ab->orders) s += " " + std::to_string(o);
    return s;
  }
  throw Error(ErrorCode::bad_model,
              "table isotropy groups have no file representation");
}

std::string write_rule(const CoefficientRule& rule) {
  if (const auto* c = std::get_if<ConstCoefficient>(&rule))
    return "const " + fmt(c->value);
  if (const auto* s = std::get_if<StepCoefficient>(&rule))
    return "step " + fmt(s->left) + " " + fmt(s->right);
  if (const auto* t = std::get_if<TanhCoefficient>(&rule))
    return "tanh " + fmt(t->base) + " " + fmt(t->amplitude) + " " + fmt(t->scale);
  if (const auto* d = std::get_if<DecayCoefficient>(&rule)) {
    std::string s = "decay " + fmt(d->inner) + " " + fmt(d->amplitude) + " " +
                    fmt(d->rate) + (d->exponential ? " exp" : " pow");
    for (const auto& lim : d->limits) s += " " + fmt(lim);
    return s;
  }
  const auto& table = std::get<TableCoefficient>(rule);
  std::string s = "table " + fmt(table.fallback) + " " +
                  std::to_string(table.values.size());
  return s;
}

}  // namespace

std::string write_band_model(const BandModel& bm) {
  const CompactificationModel& cm = bm.model;
  std::ostringstream out;
  out << "gca-model\n";
  out << "name " << cm.name << '\n';
  out << "dim " << cm.dim << '\n';
  out << "inner_radius " << cm.inner_radius << '\n';
  out << "fiber_map " << (cm.fiber_map == FiberMap::sign ? "sign" : "all") << '\n';
  out << "truncation " << cm.default_truncation << '\n';
  for (const auto& b : cm.boundary)
    out << "boundary " << b.name << ' ' << write_group(b.group) << '\n';
  out << "self_adjoint " << (bm.band.self_adjoint ? "true" : "false") << '\n';
  for (const auto& [offset, rule] : bm.band.coefficients) {
    out << "coeff " << point_name(offset, cm.dim) << ' ' << write_rule(rule) << '\n';
    if (const auto* table = std::get_if<TableCoefficient>(&rule)) {
      for (const auto& [p, v] : table->values)
        out << "at " << point_name(p, cm.dim) << ' ' << fmt(v) << '\n';
      out << "limits";
      for (const auto& lim : table->limits) out << ' ' << fmt(lim);
      out << '\n';
    }
  }
  return out.str();
}

BandModel read_band_model(const std::string& text) {
  Scanner sc(text);
  if (sc.next() != std::vector<std::string>{"gca-model"})
    fail(sc.line(), "expected 'gca-model' header");

  BandModel bm;
  CompactificationModel& cm = bm.model;
  cm.boundary.clear();
  bool saw_dim = false;

  auto complex_at = [&](const std::vector<std::string>& toks, std::size_t i,
                        int line) -> std::complex<double> {
    if (i + 1 >= toks.size()) fail(line, "expected 're im' pair");
    return {parse_double(toks[i], line), parse_double(toks[i + 1], line)};
  };

  while (!sc.done()) {
    const int line = sc.line();
    const auto toks = sc.next();
    const std::string& key = toks[0];
    if (key == "name" && toks.size() == 2) {
      cm.name = toks[1];
    } else if (key == "dim" && toks.size() == 2) {
      cm.dim = static_cast<int>(parse_int(toks[1], line));
      saw_dim = true;
    } else if (key == "inner_radius" && toks.size() == 2) {
      cm.inner_radius = static_cast<int>(parse_int(toks[1], line));
    } else if (key == "fiber_map" && toks.size() == 2) {
      if (toks[1] == "sign")
        cm.fiber_map = FiberMap::sign;
      else if (toks[1] == "all")
        cm.fiber_map = FiberMap::all;
      else
        fail(line, "unknown fiber map '" + toks[1] + "'");
    } else if (key == "truncation" && toks.size() == 2) {
      cm.default_truncation = static_cast<int>(parse_int(toks[1], line));
    } else if (key == "boundary") {
      if (toks.size() < 3) fail(line, "boundary line needs a name and a group");
      ModelBoundaryPoint bp;
      bp.name = toks[1];
      if (toks[2] == "Z") {
        bp.group = LatticeGroup{saw_dim ? cm.dim : 1};
      } else if (toks[2] == "cyclic") {
        FiniteAbelianGroup ab;
        for (std::size_t i = 3; i < toks.size(); ++i)
          ab.orders.push_back(static_cast<int>(parse_int(toks[i], line)));
        if (ab.orders.empty()) fail(line, "cyclic group needs at least one order");
        bp.group = ab;
      } else {
        fail(line, "unknown isotropy group '" + toks[2] + "'");
      }
      cm.boundary.push_back(std::move(bp));
    } else if (key == "self_adjoint" && toks.size() == 2) {
      if (toks[1] == "true")
        bm.band.self_adjoint = true;
      else if (toks[1] == "false")
        bm.band.self_adjoint = false;
      else
        fail(line, "self_adjoint must be true or false");
    } else if (key == "coeff") {
      if (toks.size() < 3) fail(line, "coeff line needs an offset and a rule");
      const LatticePoint offset = parse_point(toks[1], line);
      const std::string& rule = toks[2];
      if (rule == "const" && toks.size() == 5) {
        bm.band.coefficients[offset] = ConstCoefficient{complex_at(toks, 3, line)};
      } else if (rule == "step" && toks.size() == 7) {
        bm.band.coefficients[offset] =
            StepCoefficient{complex_at(toks, 3, line), complex_at(toks, 5, line)};
      } else if (rule == "tanh" && toks.size() == 8) {
        bm.band.coefficients[offset] =
            TanhCoefficient{complex_at(toks, 3, line), complex_at(toks, 5, line),
                            parse_double(toks[7], line)};
      } else if (rule == "decay") {
        DecayCoefficient d;
        if (toks.size() < 9) fail(line, "decay rule is too short");
        d.inner = complex_at(toks, 3, line);
        d.amplitude = complex_at(toks, 5, line);
        d.rate = parse_double(toks[7], line);
        if (toks[8] == "exp")
          d.exponential = true;
        else if (toks[8] == "pow")
          d.exponential = false;
        else
          fail(line, "decay kind must be exp or pow");
        for (std::size_t i = 9; i + 1 < toks.size(); i += 2)
          d.limits.push_back(complex_at(toks, i, line));
        bm.band.coefficients[offset] = std::move(d);
      } else if (rule == "table" && toks.size() == 6) {
        TableCoefficient table;
        table.fallback = complex_at(toks, 3, line);
        const long count = parse_int(toks[5], line);
        for (long i = 0; i < count; ++i) {
          const int at_line = sc.line();
          const auto at = sc.next();
          if (at.size() != 4 || at[0] != "at")
            fail(at_line, "expected 'at (p) re im'");
          table.values[parse_point(at[1], at_line)] = complex_at(at, 2, at_line);
        }
        const int lim_line = sc.line();
        const auto lim = sc.next();
        if (lim.empty() || lim[0] != "limits") fail(lim_line, "expected limits line");
        for (std::size_t i = 1; i + 1 < lim.size(); i += 2)
          table.limits.push_back(complex_at(lim, i, lim_line));
        bm.band.coefficients[offset] = std::move(table);
      } else {
        fail(line, "unknown or malformed coefficient rule '" + rule + "'");
      }
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }

  try {
    cm.check();
  } catch (const Error& e) {
    throw Error(ErrorCode::model_file, e.what());
  }
  return bm;
}

BandModel load_band_model(const std::string& path) {
  return read_band_model(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::model_file, "cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

FileKind sniff_kind(const std::string& text) {
  Scanner sc(text);
  if (sc.done()) throw Error(ErrorCode::model_file, "empty file");
  const auto header = sc.peek();
  if (header[0] == "gca-groupoid") return FileKind::groupoid;
  if (header[0] == "gca-model") return FileKind::band_model;
  throw Error(ErrorCode::model_file, "line 1: unknown header '" + header[0] + "'");
}

}  // namespace gca::io
