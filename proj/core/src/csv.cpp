#include "logmap/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace logmap {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
}

void write_density_csv(std::ostream& out, const HistogramDensity& density, const Metadata& meta) {
  write_metadata(out, meta);
  out << "bin_index,bin_left,bin_right,probability\n";
  for (std::size_t i = 0; i < density.bins(); ++i) {
    out << i << ',' << format_real(density.bin_left(i)) << ',' << format_real(density.bin_right(i))
        << ',' << format_real(density[i]) << '\n';
  }
}

void write_quantifier_csv(std::ostream& out, const std::vector<QuantifierRecord>& records,
                          const Metadata& meta) {
  write_metadata(out, meta);
  out << "mu,fisher,variance,cr_complexity,n_steps,w_bins,seed\n";
  for (const auto& r : records) {
    out << format_real(r.mu) << ',' << format_real(r.fisher) << ',' << format_real(r.variance) << ','
        << format_real(r.cr_complexity) << ',' << r.n_steps << ',' << r.w_bins << ',' << r.seed
        << '\n';
  }
}

void write_temperature_series_csv(std::ostream& out, const std::vector<TemperatureSeries>& series,
                                  const Metadata& meta) {
  write_metadata(out, meta);
  out << "mu,step,temperature\n";
  for (const auto& s : series) {
    const std::string mu = format_real(s.mu);
    for (std::size_t n = 0; n < s.temperature.size(); ++n) {
      out << mu << ',' << n << ',' << format_real(s.temperature[n]) << '\n';
    }
  }
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.emplace_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line = line.substr(comma + 1);
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') fields.back().pop_back();
  return fields;
}

}  // namespace logmap
