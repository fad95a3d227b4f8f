#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logmap/density.hpp"
#include "logmap/quantifiers.hpp"
#include "logmap/thermo.hpp"

namespace logmap {

/// Shortest round-trip decimal form ("nan" for NaN).
std::string format_real(double v);

/// `# key=value` header lines written before the column row.
using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_metadata(std::ostream& out, const Metadata& meta);

/// Columns: bin_index, bin_left, bin_right, probability.
void write_density_csv(std::ostream& out, const HistogramDensity& density, const Metadata& meta = {});

/// Columns: mu, fisher, variance, cr_complexity, n_steps, w_bins, seed.
void write_quantifier_csv(std::ostream& out, const std::vector<QuantifierRecord>& records,
                          const Metadata& meta = {});

/// Columns: mu, step, temperature. Several series are concatenated.
void write_temperature_series_csv(std::ostream& out, const std::vector<TemperatureSeries>& series,
                                  const Metadata& meta = {});

/// Splits one CSV line on commas; no quoting (our files never need it).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace logmap
