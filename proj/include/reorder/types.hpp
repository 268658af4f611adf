// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_TYPES_HPP
#define REORDER_TYPES_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace reorder {

// The four reordering orientations. The enum order doubles as the
// tie-break order for argmax decisions (M < S < DL < DR).
enum class Orientation : std::uint8_t { M = 0, S = 1, DL = 2, DR = 3 };

constexpr std::array<Orientation, 4> kOrientations = {
    Orientation::M, Orientation::S, Orientation::DL, Orientation::DR};

inline const char* to_string(Orientation o) {
  switch (o) {
    case Orientation::M: return "M";
    case Orientation::S: return "S";
    case Orientation::DL: return "DL";
    case Orientation::DR: return "DR";
  }
  return "?";
}

// Side::Left scores a phrase-pair against the previously translated
// phrase, Side::Right against the next one.
enum class Side : std::uint8_t { Left = 0, Right = 1 };

constexpr std::array<Side, 2> kSides = {Side::Left, Side::Right};

inline const char* to_string(Side s) { return s == Side::Left ? "L" : "R"; }

// 1-based inclusive token span.
struct Span {
  int start = 1;
  int end = 1;

  int length() const { return end - start + 1; }
  bool contains(int i) const { return start <= i && i <= end; }
  bool contains(const Span& other) const {
    return start <= other.start && other.end <= end;
  }
  auto operator<=>(const Span&) const = default;
};

// A source/target span rectangle within one sentence pair.
struct PhrasePair {
  Span src;
  Span tgt;

  int m() const { return src.length(); }
  int n() const { return tgt.length(); }
  auto operator<=>(const PhrasePair&) const = default;
};

// One alignment link, 1-based on both axes.
struct Link {
  int src = 0;
  int tgt = 0;
  auto operator<=>(const Link&) const = default;
};

using CountVector = std::array<std::uint64_t, 4>;

inline std::uint64_t total(const CountVector& c) {
  return c[0] + c[1] + c[2] + c[3];
}

// A probability distribution over the four orientations.
struct Distribution {
  std::array<double, 4> p{0.0, 0.0, 0.0, 0.0};

  double& operator[](Orientation o) { return p[static_cast<int>(o)]; }
  double operator[](Orientation o) const { return p[static_cast<int>(o)]; }
  double& operator[](int i) { return p[i]; }
  double operator[](int i) const { return p[i]; }

  double sum() const { return p[0] + p[1] + p[2] + p[3]; }

  bool is_valid(double eps = 1e-9) const {
    for (double v : p)
      if (!(v >= 0.0) || std::isnan(v)) return false;
    return std::abs(sum() - 1.0) <= eps;
  }

  Orientation argmax() const {
    int best = 0;
    for (int i = 1; i < 4; ++i)
      if (p[i] > p[best]) best = i;
    return static_cast<Orientation>(best);
  }

  bool operator==(const Distribution&) const = default;
};

inline Distribution uniform_distribution() {
  return Distribution{{0.25, 0.25, 0.25, 0.25}};
}

// Error taxonomy. The CLI maps IoError to exit code 2 and everything
// else to exit code 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed file contents (bad alignment token, bad CoNLL-U block, ...).
struct FormatError : Error {
  using Error::Error;
};

// Cannot open/read/write a file.
struct IoError : Error {
  using Error::Error;
};

// Invalid run configuration (missing flag, absent lambda bucket, ...).
struct ConfigError : Error {
  using Error::Error;
};

// A distribution was requested where none is defined (all-zero counts
// with zero smoothing mass).
struct UndefinedDistributionError : Error {
  using Error::Error;
};

// An operation was called outside its contract.
struct ContractError : Error {
  using Error::Error;
};

}  // namespace reorder

#endif  // REORDER_TYPES_HPP
