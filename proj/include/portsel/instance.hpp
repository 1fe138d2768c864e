#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace portsel {

/// Asset universe for one benchmark market plus the cardinality and
/// quantity bounds. Indices are 0-based internally; files are 1-based.
struct Instance {
  Eigen::VectorXd returns;     // expected return per period, r_i
  Eigen::MatrixXd covariance;  // sigma_ij, symmetric
  Eigen::VectorXd min_frac;    // epsilon_i
  Eigen::VectorXd max_frac;    // delta_i
  int max_assets = 10;         // k

  int size() const { return static_cast<int>(returns.size()); }

  /// Standard deviation of asset i, sqrt(sigma_ii).
  double std_dev(int i) const;
};

inline constexpr double kDefaultMinFraction = 0.01;
inline constexpr double kDefaultMaxFraction = 1.0;
inline constexpr int kDefaultMaxAssets = 10;

/// Unconstrained efficient frontier reference points, ascending in return.
struct UefPoint {
  double ret;
  double variance;
};

struct UefReference {
  std::vector<UefPoint> points;

  double mean_variance() const;
};

/// Parses the OR-Library "port" format: n, then n pairs "mean sd", then
/// triples "i j rho" covering every pair i <= j. Bounds are set to the
/// defaults above.
Instance parse_instance(std::istream& in);
Instance parse_instance(const std::string& text);
Instance load_instance(const std::filesystem::path& path);

/// Writes an instance back in the "port" format (correlations recovered from
/// the covariance matrix). Bounds are not part of the format.
void serialize_instance(const Instance& inst, std::ostream& out);

/// Parses a "portef" file: one "R V" pair per line.
UefReference parse_uef(std::istream& in);
UefReference parse_uef(const std::string& text);
UefReference load_uef(const std::filesystem::path& path);

/// Target returns of the benchmark sweep: the reference frontier's abscissae.
std::vector<double> return_grid(const UefReference& uef);

/// Overwrites every asset's bounds with uniform values.
void set_uniform_bounds(Instance& inst, double min_frac, double max_frac);

/// Checks the structural invariants (shapes, symmetry, bound ordering,
/// existence of a feasible subset). Throws ValidationError.
void validate(const Instance& inst);

/// Largest m <= k for which some m-asset subset admits a feasible split, or
/// nullopt when none does. Exact for uniform bounds, greedy otherwise.
std::optional<int> max_feasible_size(const Instance& inst);

/// Whether an m-asset subset with feasible bounds can be found.
bool has_feasible_subset(const Instance& inst, int m);

}  // namespace portsel
