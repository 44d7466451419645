#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "holoscope/rational.hpp"
#include "holoscope/term.hpp"

namespace holoscope {

enum class Provenance { Multisum, RecurrenceExtension, External };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Multisum:
      return "multisum";
    case Provenance::RecurrenceExtension:
      return "recurrence-extension";
    case Provenance::External:
      return "external";
  }
  return "external";
}

/// values[i] = a_{offset + i}, contiguous.
struct ExactSequence {
  long offset = 0;
  std::vector<Rational> values;
  Provenance provenance = Provenance::External;

  std::size_t size() const { return values.size(); }
  long last_index() const { return offset + static_cast<long>(values.size()) - 1; }
  const Rational& at(long n) const {
    if (n < offset || n > last_index()) throw PreconditionError("sequence index " + std::to_string(n) + " out of range");
    return values[static_cast<std::size_t>(n - offset)];
  }
  ExactSequence scaled(const Rational& s) const {
    ExactSequence out = *this;
    for (auto& v : out.values) v *= s;
    return out;
  }
  ExactSequence prefix(std::size_t count) const {
    ExactSequence out = *this;
    if (count < out.values.size()) out.values.resize(count);
    return out;
  }
  friend bool operator==(const ExactSequence&, const ExactSequence&) = default;
};

/// a_n = sum over the support slice of t at n, for n = 0..n_max. Summation in
/// lexicographic order of k.
inline ExactSequence eval_sequence(const BalancedTerm& t, long n_max) {
  if (auto d = recession_direction(t)) throw InfiniteSupportError(*d);
  ExactSequence s{0, {}, Provenance::Multisum};
  s.values.reserve(static_cast<std::size_t>(n_max + 1));
  FactorialCache fac;
  for (long n = 0; n <= n_max; ++n) {
    Rational sum = 0;
    for (const auto& k : enumerate_support(t, n).points) sum += eval_term(t, n, k, fac);
    s.values.push_back(sum);
  }
  return s;
}

/// Text format: '#' comments, first non-comment line "offset N", then one
/// value per line ("p/q" or an integer).
inline ExactSequence read_sequence(std::istream& in) {
  ExactSequence s;
  s.provenance = Provenance::External;
  std::string line;
  bool have_offset = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (!have_offset) {
      long off = 0;
      std::string extra;
      if (word != "offset" || !(ls >> off) || off < 0 || (ls >> extra))
        throw Error("sequence file line " + std::to_string(lineno) + ": expected 'offset N'");
      s.offset = off;
      have_offset = true;
      continue;
    }
    std::string extra;
    if (ls >> extra) throw Error("sequence file line " + std::to_string(lineno) + ": one value per line");
    try {
      s.values.push_back(parse_rational(word));
    } catch (const Error& e) {
      throw Error("sequence file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_offset) throw Error("sequence file: missing 'offset N' line");
  return s;
}

inline void write_sequence(std::ostream& out, const ExactSequence& s) {
  out << "# provenance: " << to_string(s.provenance) << "\n";
  out << "offset " << s.offset << "\n";
  for (const auto& v : s.values) out << to_string(v) << "\n";
}

}  // namespace holoscope
