#include "portsel/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "portsel/errors.hpp"
#include "portsel/format.hpp"

namespace portsel {

namespace {

constexpr double kCorrelationSlack = 1e-9;

// Whitespace tokenizer that remembers the line each token came from.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  bool next(std::string& token) {
    token.clear();
    int c;
    while ((c = in_.get()) != EOF) {
      if (c == '\n') {
        ++line_;
      } else if (!std::isspace(c)) {
        break;
      }
    }
    if (c == EOF) return false;
    token_line_ = line_;
    token.push_back(static_cast<char>(c));
    while ((c = in_.peek()) != EOF && !std::isspace(c)) token.push_back(static_cast<char>(in_.get()));
    return true;
  }

  int line() const { return token_line_; }

  double number(const char* what) {
    std::string tok;
    if (!next(tok)) throw ParseError(std::string("unexpected end of input, expected ") + what, line_);
    return to_double(tok, what);
  }

  double to_double(const std::string& tok, const char* what) const {
    double v = 0.0;
    const char* first = tok.data();
    // from_chars rejects a leading '+', which some writers emit.
    if (!tok.empty() && tok.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
      throw ParseError("malformed " + std::string(what) + " '" + tok + "'", token_line_);
    return v;
  }

  long integer(const std::string& tok, const char* what) const {
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw ParseError("malformed " + std::string(what) + " '" + tok + "'", token_line_);
    return v;
  }

 private:
  std::istream& in_;
  int line_ = 1;
  int token_line_ = 1;
};

bool subset_ok(const Instance& inst, const std::vector<int>& order, int m) {
  double eps = 0.0, del = 0.0;
  for (int t = 0; t < m; ++t) {
    eps += inst.min_frac(order[t]);
    del += inst.max_frac(order[t]);
  }
  return eps <= 1.0 + 1e-12 && del >= 1.0 - 1e-12;
}

}  // namespace

double Instance::std_dev(int i) const { return std::sqrt(std::max(0.0, covariance(i, i))); }

double UefReference::mean_variance() const {
  if (points.empty()) return 0.0;
  double s = 0.0;
  for (const auto& p : points) s += p.variance;
  return s / static_cast<double>(points.size());
}

Instance parse_instance(std::istream& in) {
  TokenReader reader(in);
  std::string tok;
  if (!reader.next(tok)) throw ParseError("empty instance", 1);
  const long n = reader.integer(tok, "asset count");
  if (n <= 0) throw ParseError("asset count must be positive", reader.line());

  Instance inst;
  inst.returns.resize(n);
  Eigen::VectorXd sd(n);
  for (long i = 0; i < n; ++i) {
    inst.returns(i) = reader.number("mean return");
    sd(i) = reader.number("standard deviation");
    if (sd(i) < 0.0) throw ValidationError("negative standard deviation for asset " + std::to_string(i + 1));
  }

  Eigen::MatrixXd rho = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  while (reader.next(tok)) {
    const long i = reader.integer(tok, "asset index");
    const int line = reader.line();
    if (!reader.next(tok)) throw ParseError("truncated correlation triple", line);
    const long j = reader.integer(tok, "asset index");
    double r = reader.number("correlation");
    if (i < 1 || i > n || j < 1 || j > n)
      throw ParseError("asset index out of range in correlation triple", line);
    if (std::abs(r) > 1.0 + kCorrelationSlack)
      throw ValidationError("line " + std::to_string(line) + ": correlation " + format_double(r) +
                            " outside [-1, 1]");
    r = std::clamp(r, -1.0, 1.0);
    rho(i - 1, j - 1) = r;
    rho(j - 1, i - 1) = r;
  }

  for (long i = 0; i < n; ++i)
    for (long j = i; j < n; ++j)
      if (std::isnan(rho(i, j)))
        throw ValidationError("incomplete correlation matrix: missing pair (" + std::to_string(i + 1) + ", " +
                              std::to_string(j + 1) + ")");

  inst.covariance = sd.asDiagonal() * rho * sd.asDiagonal();
  // Enforce exact symmetry regardless of rounding in the product.
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j) inst.covariance(j, i) = inst.covariance(i, j);

  inst.min_frac = Eigen::VectorXd::Constant(n, kDefaultMinFraction);
  inst.max_frac = Eigen::VectorXd::Constant(n, kDefaultMaxFraction);
  inst.max_assets = static_cast<int>(std::min<long>(kDefaultMaxAssets, n));
  return inst;
}

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  return parse_instance(in);
}

void serialize_instance(const Instance& inst, std::ostream& out) {
  const int n = inst.size();
  out << n << '\n';
  for (int i = 0; i < n; ++i) out << ' ' << format_double(inst.returns(i)) << ' ' << format_double(inst.std_dev(i)) << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double denom = inst.std_dev(i) * inst.std_dev(j);
      double r = denom > 0.0 ? inst.covariance(i, j) / denom : (i == j ? 1.0 : 0.0);
      out << ' ' << i + 1 << ' ' << j + 1 << ' ' << format_double(r) << '\n';
    }
  }
}

UefReference parse_uef(std::istream& in) {
  TokenReader reader(in);
  UefReference uef;
  std::string tok;
  while (reader.next(tok)) {
    const double r = reader.to_double(tok, "return");
    const double v = reader.number("variance");
    uef.points.push_back({r, v});
  }
  if (uef.points.empty()) throw ValidationError("empty reference frontier");
  std::stable_sort(uef.points.begin(), uef.points.end(),
                   [](const UefPoint& a, const UefPoint& b) { return a.ret < b.ret; });
  for (std::size_t i = 0; i < uef.points.size(); ++i) {
    if (!(uef.points[i].variance > 0.0))
      throw ValidationError("reference frontier variance must be positive at R = " +
                            format_double(uef.points[i].ret));
    if (i > 0 && !(uef.points[i].ret > uef.points[i - 1].ret))
      throw ValidationError("duplicate return value " + format_double(uef.points[i].ret) +
                            " in reference frontier");
  }
  return uef;
}

UefReference parse_uef(const std::string& text) {
  std::istringstream in(text);
  return parse_uef(in);
}

UefReference load_uef(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open frontier file " + path.string());
  return parse_uef(in);
}

std::vector<double> return_grid(const UefReference& uef) {
  if (uef.points.empty()) throw ValidationError("empty reference frontier");
  std::vector<double> grid;
  grid.reserve(uef.points.size());
  for (const auto& p : uef.points) grid.push_back(p.ret);
  return grid;
}

void set_uniform_bounds(Instance& inst, double min_frac, double max_frac) {
  inst.min_frac = Eigen::VectorXd::Constant(inst.size(), min_frac);
  inst.max_frac = Eigen::VectorXd::Constant(inst.size(), max_frac);
}

bool has_feasible_subset(const Instance& inst, int m) {
  const int n = inst.size();
  if (m < 1 || m > n) return false;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  auto try_order = [&](auto key) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
    return subset_ok(inst, order, m);
  };
  return try_order([&](int i) { return inst.min_frac(i); }) ||
         try_order([&](int i) { return -inst.max_frac(i); }) ||
         try_order([&](int i) { return inst.min_frac(i) - inst.max_frac(i); });
}

std::optional<int> max_feasible_size(const Instance& inst) {
  for (int m = std::min(inst.max_assets, inst.size()); m >= 1; --m)
    if (has_feasible_subset(inst, m)) return m;
  return std::nullopt;
}

void validate(const Instance& inst) {
  const int n = inst.size();
  if (n == 0) throw ValidationError("instance has no assets");
  if (inst.covariance.rows() != n || inst.covariance.cols() != n)
    throw ValidationError("covariance shape does not match asset count");
  if (inst.min_frac.size() != n || inst.max_frac.size() != n)
    throw ValidationError("bound vectors do not match asset count");
  if (inst.max_assets < 1 || inst.max_assets > n)
    throw ValidationError("max assets must lie in [1, " + std::to_string(n) + "]");
  for (int i = 0; i < n; ++i) {
    if (inst.covariance(i, i) < 0.0) throw ValidationError("negative variance for asset " + std::to_string(i + 1));
    for (int j = i + 1; j < n; ++j)
      if (inst.covariance(i, j) != inst.covariance(j, i)) throw ValidationError("covariance matrix is not symmetric");
    const double lo = inst.min_frac(i), hi = inst.max_frac(i);
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0))
      throw ValidationError("quantity bounds must satisfy 0 <= min <= max <= 1 (asset " + std::to_string(i + 1) + ")");
  }
  if (!max_feasible_size(inst))
    throw ValidationError("no subset of at most " + std::to_string(inst.max_assets) +
                          " assets can satisfy the quantity bounds");
}

}  // namespace portsel
