#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "volvol/estimators.hpp"
#include "volvol/gof.hpp"
#include "volvol/mc.hpp"
#include "volvol/model.hpp"

namespace volvol::io {

// Outcome of reading an observation series from CSV: the log-price column
// with the time axis validated as equidistant and rescaled to [0, 1].
struct IngestResult {
  std::vector<double> x;
  double t0 = 0.0;        // first timestamp in source units (0 if untimed)
  double t1 = 1.0;        // last timestamp in source units
  double dt = 0.0;        // source spacing (0 if untimed)
  std::size_t rows = 0;   // data rows consumed
  bool had_header = false;
  bool had_time = false;  // source provided an explicit time column
};

// Accepts one column (the series) or two (time, series), comma-separated,
// with an optional header line. Throws IngestError naming the offending row
// on short input, unparsable fields, non-finite values, or a time axis that
// is not equidistant to within 1e-9 of its span.
IngestResult ingest_csv(const std::string& path);
IngestResult ingest_csv(std::istream& in, const std::string& name);

// Writes "time,x" rows (plus "sigma2" when requested and the path carries
// its latent state) with round-trip-exact number formatting.
void write_path_csv(const std::string& path, const SampledPath& sampled,
                    bool with_sigma2);
void write_path_csv(std::ostream& out, const SampledPath& sampled,
                    bool with_sigma2);

// Shortest representation of a double that parses back to the same bits.
std::string fmt_double(double v);

std::string model_name(const ModelSpec& spec);

nlohmann::ordered_json model_json(const ModelSpec& spec);

// Companion metadata for a simulated path: model, stream, discretization,
// and the latent integrated functionals the estimators target.
nlohmann::ordered_json sidecar_json(const ModelSpec& spec,
                                    const SampledPath& sampled,
                                    int substeps);

nlohmann::ordered_json report_json(const VolvolReport& report);
nlohmann::ordered_json report_json(const GofReport& report);

std::string report_text(const VolvolReport& report);
std::string report_text(const GofReport& report);

// Study rows as CSV (header + one row per sample size) and the comparison
// against the stored full-scale references as JSON.
std::string rows_csv(const std::vector<mc::TableRow>& rows, mc::Table table,
                     const std::vector<double>& levels);
nlohmann::ordered_json compare_json(const mc::CompareReport& report);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace volvol::io
