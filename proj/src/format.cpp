#include "omin/format.hpp"

#include <charconv>

namespace omin {

std::string format_number(double value) {
  if (value == 0.0)
    value = 0.0; // no "-0"
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

double round_significant(double value) {
  const std::string text = format_number(value);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

} // namespace omin
