#ifndef OMIN_FORMAT_HPP_INCLUDED
#define OMIN_FORMAT_HPP_INCLUDED

#include <string>

namespace omin {

// Shortest "%g"-style text with at most 6 significant digits, locale-free.
std::string format_number(double value);

// value rounded to 6 significant digits (the double nearest format_number).
double round_significant(double value);

} // namespace omin

#endif // OMIN_FORMAT_HPP_INCLUDED
