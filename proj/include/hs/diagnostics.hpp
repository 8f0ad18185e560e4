#pragma once

#include <functional>
#include <string>

namespace hs {

/// Non-fatal numerical warnings (ill-conditioning, truncated sums). The
/// default sink prints to stderr; tests and the CLI may replace it.
using WarningSink = std::function<void(const std::string&)>;

void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace hs
