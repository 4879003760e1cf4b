#include "scalecpt/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace scalecpt {

namespace {

void require_size(std::span<const double> x, std::size_t min_n, const char* who) {
  if (x.size() < min_n)
    throw std::invalid_argument(std::string(who) + ": needs at least " + std::to_string(min_n) +
                                " observations, got " + std::to_string(x.size()));
}

double median_of_sorted(const std::vector<double>& s) {
  const std::size_t n = s.size();
  const double hi = s[n / 2];
  if (n % 2 == 1) return hi;
  const double lo = s[n / 2 - 1];
  return lo + (hi - lo) / 2.0;
}

// Destructive median via selection.
double median_inplace(std::vector<double>& s) {
  const std::size_t n = s.size();
  auto mid = s.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(s.begin(), mid, s.end());
  const double hi = *mid;
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(s.begin(), mid);
  return lo + (hi - lo) / 2.0;
}

// Pairs i<j with s[j] - s[i] <= t, s ascending.
long long count_pairs_leq_sorted(const std::vector<double>& s, double t) {
  if (t < 0.0) return 0;
  long long cnt = 0;
  std::size_t lo = 0;
  for (std::size_t j = 1; j < s.size(); ++j) {
    while (s[j] - s[lo] > t) ++lo;
    cnt += static_cast<long long>(j - lo);
  }
  return cnt;
}

// All differences d = s[j]-s[i], i<j, with lo < d <= hi, evaluated with the
// same floating-point predicate as count_pairs_leq_sorted.
void gather_diff_range(const std::vector<double>& s, double lo, double hi,
                       std::vector<double>& out) {
  std::size_t a = 0, b = 0;
  for (std::size_t j = 1; j < s.size(); ++j) {
    while (s[j] - s[a] > hi) ++a;
    if (b < a) b = a;
    while (b < j && s[j] - s[b] > lo) ++b;
    for (std::size_t i = a; i < b; ++i) out.push_back(s[j] - s[i]);
  }
}

// m-th smallest difference of a sorted sample (1-based m).
double kth_diff_sorted(const std::vector<double>& s, long long m) {
  const std::size_t n = s.size();
  const long long total = pair_count(n);
  if (m < 1 || m > total) throw std::invalid_argument("pairwise rank out of range");
  double hi = s.back() - s.front();
  if (hi <= 0.0) return 0.0;
  double lo = 0.0;
  long long clo = count_pairs_leq_sorted(s, 0.0);
  if (m <= clo) return 0.0;
  long long chi = total;
  while (chi - clo > 2048) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;  // interval exhausted to fp resolution
    const long long c = count_pairs_leq_sorted(s, mid);
    if (c >= m) {
      hi = mid;
      chi = c;
    } else {
      lo = mid;
      clo = c;
    }
  }
  std::vector<double> cand;
  cand.reserve(static_cast<std::size_t>(chi - clo));
  gather_diff_range(s, lo, hi, cand);
  auto nth = cand.begin() + static_cast<std::ptrdiff_t>(m - clo - 1);
  std::nth_element(cand.begin(), nth, cand.end());
  return *nth;
}

}  // namespace

void EstimatorKind::validate() const {
  if (kind == ScaleKind::qn_alpha && !(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("qn estimator: alpha must lie strictly inside (0,1)");
}

std::string EstimatorKind::name() const {
  switch (kind) {
    case ScaleKind::variance:
      return "var";
    case ScaleKind::sd:
      return "sd";
    case ScaleKind::mean_dev:
      return "md";
    case ScaleKind::gini:
      return "gmd";
    case ScaleKind::mad:
      return "mad";
    case ScaleKind::qn_alpha: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "qn(%g)", alpha);
      return buf;
    }
    case ScaleKind::qn_original:
      return "qn-orig";
  }
  return "?";
}

EstimatorKind parse_estimator(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s == "var" || s == "variance") return EstimatorKind::variance();
  if (s == "sd") return EstimatorKind::sd();
  if (s == "md" || s == "mean-dev") return EstimatorKind::mean_dev();
  if (s == "gmd" || s == "gini") return EstimatorKind::gini();
  if (s == "mad") return EstimatorKind::mad();
  if (s == "qn-orig" || s == "qn-original") return EstimatorKind::qn_original();
  if (s == "qn") return EstimatorKind::qn(0.8);
  if (s.rfind("qn(", 0) == 0 && s.back() == ')') {
    const std::string tok = s.substr(3, s.size() - 4);
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty())
      throw std::invalid_argument("unrecognized estimator: '" + text + "'");
    const EstimatorKind k = EstimatorKind::qn(alpha);
    k.validate();
    return k;
  }
  throw std::invalid_argument("unrecognized estimator: '" + text + "'");
}

double sample_median(std::span<const double> x) {
  require_size(x, 1, "sample_median");
  std::vector<double> s(x.begin(), x.end());
  return median_inplace(s);
}

double sample_variance(std::span<const double> x) {
  require_size(x, 2, "sample_variance");
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double v : x) {
    ++k;
    const double d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (v - mean);
  }
  return m2 / static_cast<double>(k - 1);
}

double mean_deviation(std::span<const double> x) {
  require_size(x, 2, "mean_deviation");
  const double med = sample_median(x);
  double acc = 0.0;
  for (double v : x) acc += std::abs(v - med);
  return acc / static_cast<double>(x.size() - 1);
}

double gini_mean_difference(std::span<const double> x) {
  require_size(x, 2, "gini_mean_difference");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    acc += (2.0 * static_cast<double>(i + 1) - n - 1.0) * s[i];
  return 2.0 * acc / (n * (n - 1.0));
}

double mad(std::span<const double> x) {
  require_size(x, 2, "mad");
  const double med = sample_median(x);
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::abs(x[i] - med);
  return median_inplace(dev);
}

long long pair_count(std::size_t n) {
  return static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
}

long long qn_rank(std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  const long long total = pair_count(n);
  const auto r = static_cast<long long>(std::ceil(alpha * static_cast<double>(total) - 1e-9));
  return std::clamp(r, 1LL, total);
}

long long qn_original_rank(std::size_t n) {
  const long long h = static_cast<long long>(n / 2) + 1;
  return h * (h - 1) / 2;
}

double kth_pairwise_difference(std::span<const double> x, long long m) {
  require_size(x, 2, "kth_pairwise_difference");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return kth_diff_sorted(s, m);
}

long long pairwise_count_leq(std::span<const double> x, double t) {
  require_size(x, 2, "pairwise_count_leq");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return count_pairs_leq_sorted(s, t);
}

double qn_alpha(std::span<const double> x, double alpha) {
  require_size(x, 2, "qn_alpha");
  return kth_pairwise_difference(x, qn_rank(x.size(), alpha));
}

double qn_original(std::span<const double> x) {
  require_size(x, 2, "qn_original");
  return kth_pairwise_difference(x, qn_original_rank(x.size()));
}

double scale_estimate(std::span<const double> x, const EstimatorKind& kind) {
  kind.validate();
  switch (kind.kind) {
    case ScaleKind::variance:
      return sample_variance(x);
    case ScaleKind::sd:
      return std::sqrt(sample_variance(x));
    case ScaleKind::mean_dev:
      return mean_deviation(x);
    case ScaleKind::gini:
      return gini_mean_difference(x);
    case ScaleKind::mad:
      return mad(x);
    case ScaleKind::qn_alpha:
      return qn_alpha(x, kind.alpha);
    case ScaleKind::qn_original:
      return qn_original(x);
  }
  return 0.0;
}

namespace {

// Fenwick tree over value ranks holding counts and sums; supports the
// incremental Gini update sum_{u in S} |v - u| in O(log n).
class OrderStatTree {
 public:
  explicit OrderStatTree(std::vector<double> sorted_unique)
      : keys_(std::move(sorted_unique)),
        count_(keys_.size() + 1, 0),
        sum_(keys_.size() + 1, 0.0) {}

  void insert(double v) {
    for (std::size_t i = rank_of(v); i < count_.size(); i += i & (~i + 1)) {
      ++count_[i];
      sum_[i] += v;
    }
    ++size_;
    total_ += v;
  }

  // count and sum of inserted values <= v
  void below_or_equal(double v, long long& cnt, double& sum) const {
    cnt = 0;
    sum = 0.0;
    for (std::size_t i = rank_of(v); i > 0; i -= i & (~i + 1)) {
      cnt += count_[i];
      sum += sum_[i];
    }
  }

  long long size() const { return size_; }
  double total() const { return total_; }

 private:
  std::size_t rank_of(double v) const {
    return static_cast<std::size_t>(
        std::upper_bound(keys_.begin(), keys_.end(), v) - keys_.begin());
  }

  std::vector<double> keys_;
  std::vector<long long> count_;
  std::vector<double> sum_;
  long long size_ = 0;
  double total_ = 0.0;
};

PrefixCurve prefix_variance(std::span<const double> x, bool take_root) {
  PrefixCurve c;
  c.values.reserve(x.size() - 1);
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double v : x) {
    ++k;
    const double d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (v - mean);
    if (k >= 2) {
      const double var = m2 / static_cast<double>(k - 1);
      c.values.push_back(take_root ? std::sqrt(var) : var);
    }
  }
  return c;
}

PrefixCurve prefix_mean_dev(std::span<const double> x) {
  PrefixCurve c;
  c.values.reserve(x.size() - 1);
  std::vector<double> sorted;
  sorted.reserve(x.size());
  for (std::size_t k = 1; k <= x.size(); ++k) {
    const double v = x[k - 1];
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), v), v);
    if (k < 2) continue;
    const double med = median_of_sorted(sorted);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::abs(x[i] - med);
    c.values.push_back(acc / static_cast<double>(k - 1));
  }
  return c;
}

PrefixCurve prefix_gini(std::span<const double> x) {
  PrefixCurve c;
  c.values.reserve(x.size() - 1);
  std::vector<double> keys(x.begin(), x.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  OrderStatTree tree(std::move(keys));
  double abs_sum = 0.0;
  for (std::size_t k = 1; k <= x.size(); ++k) {
    const double v = x[k - 1];
    long long cnt_le = 0;
    double sum_le = 0.0;
    tree.below_or_equal(v, cnt_le, sum_le);
    const auto below = static_cast<double>(cnt_le);
    const auto above = static_cast<double>(tree.size() - cnt_le);
    abs_sum += below * v - sum_le + (tree.total() - sum_le) - above * v;
    tree.insert(v);
    if (k < 2) continue;
    const auto kk = static_cast<double>(k);
    c.values.push_back(2.0 * abs_sum / (kk * (kk - 1.0)));
  }
  return c;
}

PrefixCurve prefix_mad(std::span<const double> x) {
  PrefixCurve c;
  c.values.reserve(x.size() - 1);
  std::vector<double> sorted, dev;
  sorted.reserve(x.size());
  for (std::size_t k = 1; k <= x.size(); ++k) {
    const double v = x[k - 1];
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), v), v);
    if (k < 2) continue;
    const double med = median_of_sorted(sorted);
    dev.resize(k);
    for (std::size_t i = 0; i < k; ++i) dev[i] = std::abs(x[i] - med);
    c.values.push_back(median_inplace(dev));
  }
  return c;
}

PrefixCurve prefix_qn(std::span<const double> x, const EstimatorKind& kind) {
  PrefixCurve c;
  c.values.reserve(x.size() - 1);
  std::vector<double> sorted;
  sorted.reserve(x.size());
  for (std::size_t k = 1; k <= x.size(); ++k) {
    const double v = x[k - 1];
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), v), v);
    if (k < 2) continue;
    const long long rank = kind.kind == ScaleKind::qn_alpha ? qn_rank(k, kind.alpha)
                                                            : qn_original_rank(k);
    c.values.push_back(kth_diff_sorted(sorted, rank));
  }
  return c;
}

}  // namespace

PrefixCurve prefix_estimates(std::span<const double> x, const EstimatorKind& kind) {
  kind.validate();
  require_size(x, 2, "prefix_estimates");
  PrefixCurve c;
  switch (kind.kind) {
    case ScaleKind::variance:
      c = prefix_variance(x, false);
      break;
    case ScaleKind::sd:
      c = prefix_variance(x, true);
      break;
    case ScaleKind::mean_dev:
      c = prefix_mean_dev(x);
      break;
    case ScaleKind::gini:
      c = prefix_gini(x);
      break;
    case ScaleKind::mad:
      c = prefix_mad(x);
      break;
    case ScaleKind::qn_alpha:
    case ScaleKind::qn_original:
      c = prefix_qn(x, kind);
      break;
  }
  // The final entry is pinned to the batch estimate; incremental paths may
  // differ from it by summation order at the last few digits.
  c.values.back() = scale_estimate(x, kind);
  return c;
}

}  // namespace scalecpt
