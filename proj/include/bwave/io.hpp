#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwave/evolver.hpp"
#include "bwave/grid.hpp"
#include "bwave/minimizer.hpp"
#include "bwave/wave.hpp"

namespace bwave {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits.
std::string format_double(double v);

// Field:       "# n=<n> L=<L>" then "x value" rows.
// Pair:        grid header, "# mu=.. lambda=.. a=.. c=..", then "x f g" rows.
// Wave:        grid header, "# omega=.. mu=.. lambda=..", then "x phi psi" rows.
// Diagnostics: "# t H mass_u mass_eta momentum prop_err" then rows.
void write_field(std::ostream& os, const Field& u);
Field read_field(std::istream& is);

struct PairFile {
  FieldPair pair;
  double mu = 0.0;
  double lambda = 0.0;
  double a = 0.0;
  double c = 0.0;
};

void write_pair(std::ostream& os, const MinimizerResult& r, double a, double c);
PairFile read_pair(std::istream& is);

void write_wave(std::ostream& os, const Wave& w);
Wave read_wave(std::istream& is);

void write_diagnostics(std::ostream& os, const EvolutionDiagnostics& d);
void write_history(std::ostream& os, const std::vector<IterationRecord>& history);

// File helpers; throw ParseError (read) or std::runtime_error (write).
void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace bwave
