#include "inspect.hpp"

#include <cstdio>
#include <sstream>

#include "gca/io.hpp"
#include "gca/verifier.hpp"

namespace gca::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string describe_group(const BoundaryGroup& g) {
  if (const auto* lat = std::get_if<LatticeGroup>(&g))
    return lat->dim == 1 ? "Z" : "Z^2";
  if (const auto* ab = std::get_if<FiniteAbelianGroup>(&g)) {
    std::string s;
    for (int o : ab->orders) {
      if (!s.empty()) s += " x ";
      s += "Z/" + std::to_string(o);
    }
    return s;
  }
  return "finite group (order " +
         std::to_string(std::get<GroupTable>(g).elements.size()) + ")";
}

std::string spectrum_summary(const SpectrumSet& s) {
  if (s.points.empty()) return "{}";
  double re_lo = 1e300, re_hi = -1e300, im_max = 0.0;
  for (const auto& p : s.points) {
    re_lo = std::min(re_lo, p.real());
    re_hi = std::max(re_hi, p.real());
    im_max = std::max(im_max, std::abs(p.imag()));
  }
  std::string out;
  if (im_max < 1e-9) {
    out = "[" + fmt(re_lo) + ", " + fmt(re_hi) + "]";
  } else {
    out = "re [" + fmt(re_lo) + ", " + fmt(re_hi) + "], |im| <= " + fmt(im_max);
  }
  if (s.kind == SpectrumKind::sampled_range)
    out += " (sampled, step " + fmt(s.resolution) + ")";
  else
    out += " (" + std::to_string(s.points.size()) + " exact points)";
  return out;
}

std::string inspect_groupoid(const std::string& text) {
  const GroupoidPtr g = io::read_groupoid(text);
  std::ostringstream out;
  out << "groupoid: " << g->unit_count() << " units, " << g->arrow_count()
      << " arrows\n";
  const ValidationReport report = validate(*g);
  out << "axioms: " << (report.ok() ? "ok" : std::to_string(report.violations.size()) +
                                                 " violation(s)")
      << "\n";
  if (!report.ok())
    out << "  first: " << report.violations.front().axiom << " at "
        << report.violations.front().witness << "\n";
  const auto orbs = orbits(*g);
  out << "orbits: " << orbs.size() << "\n";
  for (std::size_t i = 0; i < orbs.size(); ++i) {
    std::size_t isotropy = 0;
    for (ArrowIndex a : g->source_fiber(orbs[i].front()))
      if (g->range(a) == orbs[i].front()) ++isotropy;
    out << "  orbit " << i << ": " << orbs[i].size() << " unit(s), isotropy order "
        << isotropy << (isotropy == 1 ? " (trivial)" : "") << "\n";
  }
  return out.str();
}

std::string inspect_model(const std::string& text) {
  const io::BandModel bm = io::read_band_model(text);
  const CompactificationModel& cm = bm.model;
  std::ostringstream out;
  out << "model: " << cm.name << " (dim " << cm.dim << ", inner radius "
      << cm.inner_radius << ", fiber map "
      << (cm.fiber_map == FiberMap::sign ? "sign" : "all") << ")\n";
  out << "band: bandwidth " << bm.band.bandwidth() << ", "
      << bm.band.coefficients.size() << " offset(s), "
      << (bm.band.self_adjoint ? "self-adjoint" : "general") << "\n";
  out << "default truncation: " << cm.default_truncation << "\n";
  out << "boundary points: " << cm.boundary.size() << "\n";
  const int grid = cm.dim == 1 ? 4096 : 256;
  for (std::size_t b = 0; b < cm.boundary.size(); ++b) {
    out << "  " << cm.boundary[b].name << ": Sigma = "
        << describe_group(cm.boundary[b].group);
    if (std::holds_alternative<GroupTable>(cm.boundary[b].group)) {
      out << ", sp via truncated convolution only\n";
      continue;
    }
    const SpectrumSet s =
        fourier_symbol_spectrum(bm.band, cm, static_cast<int>(b), grid);
    out << ", sp(F) = " << spectrum_summary(s) << "\n";
  }
  return out.str();
}

}  // namespace

std::string inspect_file(const std::string& path) {
  const std::string text = io::read_text_file(path);
  switch (io::sniff_kind(text)) {
    case io::FileKind::groupoid:
      return inspect_groupoid(text);
    case io::FileKind::band_model:
      return inspect_model(text);
  }
  throw Error(ErrorCode::model_file, "unrecognized file kind");
}

}  // namespace gca::cli
