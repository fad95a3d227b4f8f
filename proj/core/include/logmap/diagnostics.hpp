#pragma once

#include <functional>
#include <string_view>

namespace logmap {

using WarningHandler = std::function<void(std::string_view)>;

/// Routes non-fatal diagnostics (undersampled histograms, transient fallbacks).
/// The default handler writes to stderr. Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

/// RAII capture of warnings, used by tests and the CLI summary.
class ScopedWarningHandler {
 public:
  explicit ScopedWarningHandler(WarningHandler handler)
      : previous_(set_warning_handler(std::move(handler))) {}
  ~ScopedWarningHandler() { set_warning_handler(std::move(previous_)); }

  ScopedWarningHandler(const ScopedWarningHandler&) = delete;
  ScopedWarningHandler& operator=(const ScopedWarningHandler&) = delete;

 private:
  WarningHandler previous_;
};

}  // namespace logmap
