#include "wgd/partitions_zonal.hpp"

#include "wgd/error.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <sstream>

namespace wgd {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 0) fail(ErrorKind::InvalidInput, "partition parts must be non-negative");
    if (i > 0 && parts_[i] > parts_[i - 1]) fail(ErrorKind::InvalidInput, "partition parts must be non-increasing");
    weight_ += parts_[i];
  }
}

Partition Partition::parse(const std::string& text) {
  std::vector<int> parts;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      size_t used = 0;
      int v = std::stoi(cell, &used);
      if (cell.find_first_not_of(" ", used) != std::string::npos) throw std::invalid_argument(cell);
      parts.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "bad partition '" + text + "'");
    }
  }
  return Partition(std::move(parts));
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
  os << ')';
  return os.str();
}

namespace {

void extend(int remaining, int cap, int slots, std::vector<int>& cur, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(cur);
    return;
  }
  if (slots == 0) return;
  for (int p = std::min(remaining, cap); p >= 1; --p) {
    cur.push_back(p);
    extend(remaining - p, p, slots - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_of(int k, int max_parts) {
  if (k < 0 || max_parts < 0) fail(ErrorKind::InvalidInput, "partitions_of needs k >= 0 and max_parts >= 0");
  std::vector<Partition> out;
  std::vector<int> cur;
  extend(k, k, max_parts, cur, out);
  return out;
}

double gen_pochhammer(double b, const Partition& kappa) {
  double r = 1.0;
  for (int i = 0; i < kappa.length(); ++i)
    for (int j = 0; j < kappa[i]; ++j) r *= b - 0.5 * i + j;
  return r;
}

double gamma_m_partition_ln(double a, const Partition& kappa, int m) {
  if (kappa.length() > m) fail(ErrorKind::DimensionMismatch, "partition has more parts than the dimension");
  if (!(a > 0.5 * (m - 1))) fail(ErrorKind::DomainError, "Gamma_m(a, kappa) needs a > (m-1)/2");
  double r = 0.25 * m * (m - 1) * std::log(boost::math::constants::pi<double>());
  for (int i = 0; i < m; ++i) r += boost::math::lgamma(a + kappa[i] - 0.5 * i);
  return r;
}

}  // namespace wgd
