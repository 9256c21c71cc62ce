#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace wgd {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  // Worst observed discrepancy in the units of the threshold.
  double metric = 0.0;
  double threshold = 0.0;
  std::string summary;
  double seconds = 0.0;
  nlohmann::json details;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
};

// Suite names: zonal, wishart, normalization, moments, cf, eigen, lmax,
// sampler, mle, bayes, identity, or all.
std::vector<std::string> verify_suites();
std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opts);
CheckResult run_check(int id, const VerifyOptions& opts);
nlohmann::json to_json(const CheckResult& r);

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
// Asymptotic P(D_n > d) with the small-sample correction of Stephens.
double ks_pvalue(double d, long n);

}  // namespace wgd
