#pragma once

// Text formats for families, dense functions and spectra.
//
// Family file:   "q,n,m", optionally "context <restriction json>", then one
//                matrix literal per line.
// Function file: "q,n,m", then q^{nm} rationals ("p/q" or integers) in
//                matrix-index order, separated by whitespace.
// Lines starting with '#' and blank lines are skipped.

#include <string>

#include "linex/families.hpp"
#include "linex/fourier.hpp"

namespace linex {

Family parse_family(const std::string& text);
std::string format_family(const Family& fam);

DenseFunction parse_function(const std::string& text);
/// Throws NotRational for complex-valued functions; requires a full-space function.
std::string format_function(const DenseFunction& f);

/// Inverse of Spectrum::to_json; absent entries are zero.
Spectrum spectrum_from_json(const Field& f, int n, int m, const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace linex
