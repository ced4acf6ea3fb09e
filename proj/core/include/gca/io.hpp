#pragma once

#include <string>

#include "gca/boundary.hpp"
#include "gca/kernel.hpp"
#include "gca/operator_matrix.hpp"
#include "gca/spectral.hpp"

// Plain-text interchange formats. Writers print doubles with 17 significant
// digits so every format round-trips bit-exactly; readers report failures as
// E_MODEL with the offending line number.
namespace gca::io {

// groupoid: "gca-groupoid" header, unit list, arrow lines
// `id d r inverse_id weight`, optional truncated-unit line, composition
// lines `left right result`.
std::string write_groupoid(const FiniteGroupoid& g);
GroupoidPtr read_groupoid(const std::string& text);

// kernel: one line per supported arrow, `arrow_id re im`.
std::string write_kernel(const Kernel& f);
Kernel read_kernel(const GroupoidPtr& parent, const std::string& text);

// unit function: one line per unit, `unit_id re im`.
std::string write_unit_function(const UnitFunction& psi);
UnitFunction read_unit_function(const GroupoidPtr& parent, const std::string& text);

// matrix dump: basis-label header line, then dense rows of `re im` pairs;
// a weights line is emitted when the inner product is not the counting one.
std::string write_matrix(const OperatorMatrix& m);

// spectrum dump: metadata comment with kind and grid step, then `re,im` rows.
std::string write_spectrum_csv(const SpectrumSet& s);

// band model file: sections for the geometry, boundary points, band
// coefficients and boundary limits.
struct BandModel {
  CompactificationModel model;
  BandKernel band;
};
std::string write_band_model(const BandModel& bm);
BandModel read_band_model(const std::string& text);
BandModel load_band_model(const std::string& path);

std::string read_text_file(const std::string& path);  // E_MODEL when unreadable
void write_text_file_atomic(const std::string& path, const std::string& content);

enum class FileKind { groupoid, band_model };
FileKind sniff_kind(const std::string& text);  // E_MODEL on unknown header

}  // namespace gca::io
