#include "volvol/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "volvol/errors.hpp"
#include "volvol/version.hpp"

namespace volvol::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

bool parse_double(std::string_view field, double& out) {
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

[[noreturn]] void ingest_fail(const std::string& name, std::size_t line_no,
                              const std::string& what) {
  throw IngestError(name + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
  return std::string(buf, ptr);
}

IngestResult ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IngestError(path + ": cannot open for reading");
  }
  return ingest_csv(in, path);
}

IngestResult ingest_csv(std::istream& in, const std::string& name) {
  IngestResult result;
  std::vector<double> times;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  bool saw_data = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view view = trim(line);
    if (view.empty()) continue;

    const std::vector<std::string_view> fields = split_fields(view);
    if (fields.size() > 2) {
      ingest_fail(name, line_no,
                  "expected 1 or 2 columns, got " +
                      std::to_string(fields.size()));
    }

    std::vector<double> values(fields.size());
    bool ok = true;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parse_double(fields[i], values[i])) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      if (!saw_data) {
        result.had_header = true;  // leading label row
        continue;
      }
      ingest_fail(name, line_no, "unparsable numeric field");
    }

    if (!saw_data) {
      saw_data = true;
      columns = fields.size();
      result.had_time = columns == 2;
    } else if (fields.size() != columns) {
      ingest_fail(name, line_no,
                  "inconsistent column count (expected " +
                      std::to_string(columns) + ")");
    }

    for (double v : values) {
      if (!std::isfinite(v)) {
        ingest_fail(name, line_no, "non-finite value");
      }
    }
    if (columns == 2) {
      times.push_back(values[0]);
      result.x.push_back(values[1]);
    } else {
      result.x.push_back(values[0]);
    }
  }

  result.rows = result.x.size();
  if (result.rows < 5) {
    throw IngestError(name + ": need at least 5 observations, got " +
                      std::to_string(result.rows));
  }

  if (result.had_time) {
    const double base = times[1] - times[0];
    if (!(base > 0.0)) {
      ingest_fail(name, result.had_header ? 3 : 2,
                  "time axis must be strictly increasing");
    }
    const double span = times.back() - times.front();
    const double tol = 1e-9 * std::max({span, base, 1.0});
    for (std::size_t i = 1; i < times.size(); ++i) {
      const double dt = times[i] - times[i - 1];
      if (std::abs(dt - base) > tol) {
        // Report with the source line number: data starts after any header.
        const std::size_t row = i + 1 + (result.had_header ? 1 : 0);
        ingest_fail(name, row,
                    "non-equidistant time step " + fmt_double(dt) +
                        " (expected " + fmt_double(base) + ")");
      }
    }
    result.t0 = times.front();
    result.t1 = times.back();
    result.dt = base;
  } else {
    result.t0 = 0.0;
    result.t1 = 1.0;
    result.dt = 0.0;
  }
  return result;
}

void write_path_csv(const std::string& path, const SampledPath& sampled,
                    bool with_sigma2) {
  std::ofstream out(path);
  if (!out) {
    throw IngestError(path + ": cannot open for writing");
  }
  write_path_csv(out, sampled, with_sigma2);
  if (!out) {
    throw IngestError(path + ": write failed");
  }
}

void write_path_csv(std::ostream& out, const SampledPath& sampled,
                    bool with_sigma2) {
  const bool sigma2 = with_sigma2 && sampled.latent.has_value();
  out << (sigma2 ? "time,x,sigma2\n" : "time,x\n");
  const std::size_t n = sampled.n;
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    out << fmt_double(static_cast<double>(i) / nd) << ','
        << fmt_double(sampled.x[i]);
    if (sigma2) {
      const std::size_t fine =
          i * static_cast<std::size_t>(sampled.latent->substeps);
      out << ',' << fmt_double(sampled.latent->sigma2[fine]);
    }
    out << '\n';
  }
}

std::string model_name(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::Heston: return "heston";
    case ModelKind::Vasicek: return "vasicek";
    case ModelKind::Cev: return "cev:" + fmt_double(spec.gamma);
  }
  return "unknown";
}

nlohmann::ordered_json model_json(const ModelSpec& spec) {
  nlohmann::ordered_json j;
  j["name"] = model_name(spec);
  j["elasticity"] = spec.elasticity();
  j["beta"] = spec.beta;
  j["kappa"] = spec.kappa;
  j["alpha"] = spec.alpha;
  j["xi"] = spec.xi;
  j["rho"] = spec.rho;
  j["x0"] = spec.x0;
  j["v0"] = spec.v0;
  j["drift"] = spec.drift == PriceDrift::LogHeston ? "log_heston" : "none";
  return j;
}

nlohmann::ordered_json sidecar_json(const ModelSpec& spec,
                                    const SampledPath& sampled,
                                    int substeps) {
  nlohmann::ordered_json j;
  j["type"] = "simulated_path";
  j["version"] = kVersion;
  j["model"] = model_json(spec);
  j["n"] = sampled.n;
  j["substeps"] = substeps;
  if (sampled.latent) {
    const PathLatent& lat = *sampled.latent;
    j["seed"] = {{"key", lat.seed_key}, {"id", lat.seed_id}};
    j["truncation_rate"] = lat.truncation_rate;
    j["latent"] = {{"iv_tau2", lat.iv_tau2},
                   {"iv_tau4", lat.iv_tau4},
                   {"iv_alpha2", lat.iv_alpha2},
                   {"alpha2_c", lat.alpha2_c}};
  }
  return j;
}

nlohmann::ordered_json report_json(const VolvolReport& report) {
  nlohmann::ordered_json j;
  j["type"] = "volvol_estimate";
  j["n"] = report.n;
  j["kn"] = report.kn;
  j["t"] = report.t;
  j["c"] = report.c;
  j["v_hat"] = report.v_hat;
  j["g1"] = report.g1;
  j["g2"] = report.g2;
  j["g3"] = report.g3;
  j["c_hat"] = report.c_hat;
  j["t_hat"] = report.t_hat;
  j["ci_level"] = report.ci_level;
  j["ci_lo"] = report.ci_lo ? nlohmann::ordered_json(*report.ci_lo)
                            : nlohmann::ordered_json(nullptr);
  j["ci_hi"] = report.ci_hi ? nlohmann::ordered_json(*report.ci_hi)
                            : nlohmann::ordered_json(nullptr);
  j["truth"] = report.truth ? nlohmann::ordered_json(*report.truth)
                            : nlohmann::ordered_json(nullptr);
  j["z"] = report.z ? nlohmann::ordered_json(*report.z)
                    : nlohmann::ordered_json(nullptr);
  return j;
}

nlohmann::ordered_json report_json(const GofReport& report) {
  nlohmann::ordered_json j;
  j["type"] = "gof_test";
  j["f"] = report.f_label;
  j["n"] = report.n;
  j["kn"] = report.kn;
  j["theta_hat"] = report.theta_hat;
  j["d_hat"] = report.d_hat;
  j["c_hat_f"] = report.c_hat_f;
  j["y_n"] = report.y_n;
  j["discarded_grid"] = report.discarded_grid;
  j["B"] = report.B;
  j["p_value"] = report.p_value ? nlohmann::ordered_json(*report.p_value)
                                : nlohmann::ordered_json(nullptr);
  j["discarded_boot"] = report.discarded_boot;
  j["alpha_rv"] = report.alpha_rv;
  j["kappa_star"] = report.kappa_star;
  j["xi_star"] = report.xi_star;
  j["boot"] = report.boot;
  return j;
}

namespace {

void text_row(std::ostringstream& out, const char* label, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "  %-12s % .10e\n", label, value);
  out << buf;
}

}  // namespace

std::string report_text(const VolvolReport& report) {
  std::ostringstream out;
  out << "integrated variance-of-variance estimate (n=" << report.n
      << ", k=" << report.kn << ", t=" << fmt_double(report.t) << ")\n";
  text_row(out, "v_hat", report.v_hat);
  text_row(out, "g1", report.g1);
  text_row(out, "g2", report.g2);
  text_row(out, "g3", report.g3);
  text_row(out, "c_hat", report.c_hat);
  text_row(out, "t_hat", report.t_hat);
  if (report.ci_lo && report.ci_hi) {
    out << "  " << fmt_double(report.ci_level * 100.0) << "% CI ["
        << fmt_double(*report.ci_lo) << ", " << fmt_double(*report.ci_hi)
        << "]\n";
  } else {
    out << "  CI unavailable: estimated limiting variance is not positive\n";
  }
  if (report.truth) {
    out << "  truth " << fmt_double(*report.truth);
    if (report.z) out << "  z " << fmt_double(*report.z);
    out << '\n';
  }
  return std::move(out).str();
}

std::string report_text(const GofReport& report) {
  std::ostringstream out;
  out << "goodness-of-fit for tau^2 = theta * " << report.f_label
      << " (n=" << report.n << ", k=" << report.kn << ")\n";
  text_row(out, "theta_hat", report.theta_hat);
  text_row(out, "y_n", report.y_n);
  if (report.B > 0) {
    out << "  bootstrap B=" << report.B << " kept=" << report.boot.size()
        << " discarded=" << report.discarded_boot << '\n';
    if (report.p_value) {
      out << "  p-value " << fmt_double(*report.p_value) << '\n';
    }
  }
  if (report.discarded_grid > 0) {
    out << "  grid points skipped (studentizer at floor): "
        << report.discarded_grid << '\n';
  }
  return std::move(out).str();
}

std::string rows_csv(const std::vector<mc::TableRow>& rows, mc::Table table,
                     const std::vector<double>& levels) {
  const bool estimation = table == mc::Table::InfeasibleRho0 ||
                          table == mc::Table::InfeasibleRho ||
                          table == mc::Table::FeasibleRho0 ||
                          table == mc::Table::FeasibleRho;
  std::ostringstream out;
  out << "n,reps,mean,variance";
  if (estimation) {
    for (double q : mc::coverage_grid()) out << ",cov@" << fmt_double(q);
  } else {
    for (double lvl : levels) out << ",rej@" << fmt_double(lvl);
  }
  out << ",discarded,wall_ms\n";
  for (const mc::TableRow& row : rows) {
    out << row.n << ',' << row.reps << ',' << fmt_double(row.mean) << ','
        << fmt_double(row.variance);
    for (double cell : row.cells) out << ',' << fmt_double(cell);
    out << ',' << row.discarded << ',' << fmt_double(row.wall_ms) << '\n';
  }
  return std::move(out).str();
}

nlohmann::ordered_json compare_json(const mc::CompareReport& report) {
  nlohmann::ordered_json j;
  j["type"] = "reference_comparison";
  j["table"] = static_cast<int>(report.table);
  j["se_multiple"] = report.mult;
  j["all_pass"] = report.all_pass;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const mc::CellCheck& c : report.cells) {
    nlohmann::ordered_json cell;
    cell["n"] = c.n;
    cell["cell"] = c.cell;
    cell["ours"] = c.ours;
    cell["reference"] = c.ref;
    cell["se"] = c.se;
    cell["z"] = c.z;
    cell["pass"] = c.pass;
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw IngestError(path + ": cannot open for writing");
  }
  out << content;
  if (!out) {
    throw IngestError(path + ": write failed");
  }
}

}  // namespace volvol::io
