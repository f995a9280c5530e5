#include "monitor/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "monitor/errors.hpp"

namespace monitor {

Eigen::VectorXd Hyperparameters::to_vector() const {
  Eigen::VectorXd v(count());
  v(0) = log_sigma_n2;
  v(1) = log_sigma_f2;
  v.tail(log_lengths.size()) = log_lengths;
  return v;
}

Hyperparameters Hyperparameters::from_vector(const Eigen::VectorXd& v) {
  if (v.size() < 3) throw ContractError("Hyperparameters: need at least 3 entries");
  Hyperparameters h;
  h.log_sigma_n2 = v(0);
  h.log_sigma_f2 = v(1);
  h.log_lengths = v.tail(v.size() - 2);
  return h;
}

std::string Hyperparameters::serialize() const {
  char buf[64];
  std::string out;
  auto emit = [&](const std::string& key, double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += key + "=" + buf + "\n";
  };
  emit("log_sigma_n2", log_sigma_n2);
  emit("log_sigma_f2", log_sigma_f2);
  for (int d = 0; d < dim(); ++d) emit("log_l_" + std::to_string(d), log_lengths(d));
  return out;
}

Hyperparameters Hyperparameters::parse(const std::string& text) {
  Hyperparameters h;
  std::vector<double> lens;
  bool got_n = false, got_f = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const double val = std::strtod(line.c_str() + eq + 1, nullptr);
    if (key == "log_sigma_n2") {
      h.log_sigma_n2 = val;
      got_n = true;
    } else if (key == "log_sigma_f2") {
      h.log_sigma_f2 = val;
      got_f = true;
    } else if (key.rfind("log_l_", 0) == 0) {
      const std::size_t idx = std::stoul(key.substr(6));
      if (lens.size() <= idx) lens.resize(idx + 1, 0.0);
      lens[idx] = val;
    }
  }
  if (!got_n || !got_f || lens.empty())
    throw FormatError("Hyperparameters::parse: missing keys");
  h.log_lengths = Eigen::Map<Eigen::VectorXd>(lens.data(), static_cast<long>(lens.size()));
  return h;
}

Hyperparameters Hyperparameters::manual2d() {
  Hyperparameters h;
  h.log_sigma_n2 = -2.0;
  h.log_sigma_f2 = 2.0;
  h.log_lengths = Eigen::Vector2d(1.0, 1.0);
  return h;
}

namespace {

void check_dim(const Hyperparameters& h, const Point& x, const Point& x_prime) {
  if (h.dim() != x.size() || h.dim() != x_prime.size())
    throw ContractError("kernel: point dimension does not match log_lengths");
}

double noise_free_eval(const Hyperparameters& h, const Point& x, const Point& x_prime) {
  const Eigen::VectorXd l = h.lengths();
  const Eigen::Vector2d d = x - x_prime;
  double s = 0.0;
  for (int i = 0; i < d.size(); ++i) s += d(i) * d(i) / (l(i) * l(i));
  return h.sigma_f2() * std::exp(-0.5 * s);
}

}  // namespace

double kernel_eval(const Hyperparameters& h, const Point& x, const Point& x_prime,
                   bool same_index) {
  check_dim(h, x, x_prime);
  return noise_free_eval(h, x, x_prime) + (same_index ? h.sigma_n2() : 0.0);
}

Eigen::VectorXd kernel_grad(const Hyperparameters& h, const Point& x, const Point& x_prime,
                            bool same_index) {
  check_dim(h, x, x_prime);
  const double knf = noise_free_eval(h, x, x_prime);
  const Eigen::VectorXd l = h.lengths();
  Eigen::VectorXd g(h.count());
  g(0) = same_index ? h.sigma_n2() : 0.0;
  g(1) = knf;
  for (int d = 0; d < h.dim(); ++d) {
    const double z = (x(d) - x_prime(d)) / l(d);
    g(2 + d) = knf * z * z;
  }
  return g;
}

Eigen::MatrixXd kernel_gram(const Hyperparameters& h, const std::vector<Point>& points) {
  Eigen::MatrixXd K = kernel_gram_noise_free(h, points);
  K.diagonal().array() += h.sigma_n2();
  return K;
}

Eigen::MatrixXd kernel_gram_noise_free(const Hyperparameters& h,
                                       const std::vector<Point>& points) {
  if (points.empty()) throw ContractError("kernel_gram: empty point set");
  const long n = static_cast<long>(points.size());
  Eigen::MatrixXd K(n, n);
  for (long i = 0; i < n; ++i) {
    K(i, i) = h.sigma_f2();
    for (long j = i + 1; j < n; ++j) {
      const double v = noise_free_eval(h, points[i], points[j]);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

Eigen::VectorXd kernel_vector(const Hyperparameters& h, const std::vector<Point>& points,
                              const Point& x) {
  Eigen::VectorXd k(static_cast<long>(points.size()));
  for (long i = 0; i < k.size(); ++i) k(i) = noise_free_eval(h, points[i], x);
  return k;
}

}  // namespace monitor
