// Copyright 2026 The eKG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ekg/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include "ekg/simd/kernels.hpp"

namespace ekg {

namespace {

std::string canon(const std::string& v, const SynonymDictionary* d) { return d ? d->canonical_of(v) : v; }

bool matches(const std::optional<std::string>& v, const std::string& want, const SynonymDictionary* d) {
  if (!v) return false;
  return d ? d->same_cluster(*v, want) : *v == want;
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1) < kEps) break;
  }
  return h;
}

}  // namespace

std::string pair_label(const std::string& country, const std::string& disease) { return country + " - " + disease; }

std::vector<LabelCount> top_counts(const std::vector<EnsembleRecord>& records, CountKey key, std::size_t n,
                                   const SynonymDictionaries* dicts) {
  const SynonymDictionary* dd = dicts ? &dicts->disease : nullptr;
  const SynonymDictionary* cd = dicts ? &dicts->country : nullptr;
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) {
    switch (key) {
      case CountKey::disease:
        if (r.disease) ++counts[canon(*r.disease, dd)];
        break;
      case CountKey::country:
        if (r.country) ++counts[canon(*r.country, cd)];
        break;
      case CountKey::pair:
        if (r.disease && r.country) ++counts[pair_label(canon(*r.country, cd), canon(*r.disease, dd))];
        break;
    }
  }
  std::vector<LabelCount> out;
  out.reserve(counts.size());
  for (auto& [label, c] : counts) out.push_back({label, c});
  std::stable_sort(out.begin(), out.end(), [](const LabelCount& a, const LabelCount& b) { return a.count > b.count; });
  if (n && out.size() > n) out.resize(n);
  return out;
}

DatasetSummary dataset_summary(const std::vector<EnsembleRecord>& records, const SynonymDictionaries* dicts) {
  DatasetSummary s;
  std::set<std::string> diseases, countries;
  for (const auto& r : records) {
    if (!r.disease && !r.country) continue;
    ++s.entries;
    if (r.disease) diseases.insert(canon(*r.disease, dicts ? &dicts->disease : nullptr));
    if (r.country) countries.insert(canon(*r.country, dicts ? &dicts->country : nullptr));
  }
  s.unique_diseases = diseases.size();
  s.unique_countries = countries.size();
  return s;
}

std::vector<SeriesPoint> time_series(const std::vector<EnsembleRecord>& records, const std::string& disease,
                                     const std::string& country, const SynonymDictionaries* dicts) {
  std::vector<SeriesPoint> out;
  for (const auto& r : records) {
    if (!r.cases) continue;
    auto when = r.date ? r.date : r.imputed_date;
    if (!when) continue;
    if (!matches(r.disease, disease, dicts ? &dicts->disease : nullptr)) continue;
    if (!matches(r.country, country, dicts ? &dicts->country : nullptr)) continue;
    out.push_back({*when, *r.cases, r.fileid});
  }
  std::stable_sort(out.begin(), out.end(), [](const SeriesPoint& a, const SeriesPoint& b) {
    if (a.date != b.date) return a.date < b.date;
    return a.fileid < b.fileid;
  });
  return out;
}

std::vector<std::pair<int, std::int64_t>> yearly_aggregate(const std::vector<SeriesPoint>& series) {
  std::map<int, std::int64_t> totals;
  for (const auto& p : series) totals[year_of(p.date)] += p.cases;
  return {totals.begin(), totals.end()};
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw std::invalid_argument("incomplete_beta: a and b must be positive");
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  double bt = std::exp(lbt);
  if (x < (a + 1) / (a + b + 2)) return bt * beta_cf(a, b, x) / a;
  return 1 - bt * beta_cf(b, a, 1 - x) / b;
}

double students_t_cdf(double t, double df) {
  if (!(df > 0)) throw std::invalid_argument("students_t_cdf: df must be positive");
  if (std::isinf(t)) return t > 0 ? 1 : 0;
  double tail = 0.5 * incomplete_beta(df / 2, 0.5, df / (df + t * t));
  return t > 0 ? 1 - tail : tail;
}

double students_t_quantile(double p, double df) {
  if (!(p > 0 && p < 1)) throw std::invalid_argument("students_t_quantile: p must be in (0, 1)");
  if (p == 0.5) return 0;
  if (p < 0.5) return -students_t_quantile(1 - p, df);
  double lo = 0, hi = 1;
  while (students_t_cdf(hi, df) < p) {
    lo = hi;
    hi *= 2;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (students_t_cdf(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

RegressionResult ols_regression(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("ols_regression: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("ols_regression: need at least 3 points");
  const double nd = static_cast<double>(n);
  const double mx = simd::sum(x) / nd, my = simd::sum(y) / nd;
  std::vector<double> dx(n), dy(n);
  for (std::size_t i = 0; i < n; ++i) {
    dx[i] = x[i] - mx;
    dy[i] = y[i] - my;
  }
  const double sxx = simd::dot(dx, dx), sxy = simd::dot(dx, dy), syy = simd::dot(dy, dy);
  if (!(sxx > 0)) throw std::invalid_argument("ols_regression: x is constant");

  RegressionResult r;
  r.n = n;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = dy[i] - r.slope * dx[i];
  const double df = nd - 2;
  const double sse = std::max(0.0, simd::dot(e, e));
  r.slope_se = std::sqrt(sse / df / sxx);
  const double tq = students_t_quantile(0.975, df);
  r.ci95_low = r.slope - tq * r.slope_se;
  r.ci95_high = r.slope + tq * r.slope_se;
  if (r.slope_se > 0) {
    r.t_stat = r.slope / r.slope_se;
    r.p_value = incomplete_beta(df / 2, 0.5, df / (df + r.t_stat * r.t_stat));
  } else {
    r.t_stat = r.slope == 0 ? 0 : std::copysign(std::numeric_limits<double>::infinity(), r.slope);
    r.p_value = r.slope == 0 ? 1 : 0;
  }
  r.r = syy > 0 ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0;
  return r;
}

}  // namespace ekg
