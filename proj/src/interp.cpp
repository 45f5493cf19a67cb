#include "sircov/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sircov {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw std::invalid_argument("MonotoneCubic: need >= 2 nodes and matching sizes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("MonotoneCubic: x must be strictly increasing");

    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);

    // three-point one-sided endpoint slopes, limited to preserve monotonicity
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0)
            return 0.0;
        if (d0 * d1 <= 0.0 && std::fabs(m) > 3.0 * std::fabs(d0))
            return 3.0 * d0;
        return m;
    };

    m_.resize(n);
    if (n == 2) {
        m_[0] = d[0];
        m_[1] = d[0];
    } else {
        m_[0] = end_slope(x_[1] - x_[0], x_[2] - x_[1], d[0], d[1]);
        m_[n - 1] = end_slope(x_[n - 1] - x_[n - 2], x_[n - 2] - x_[n - 3], d[n - 2],
                              d[n - 3]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i)
        m_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);

    // Fritsch-Carlson limiter keeps each interval's Hermite cubic monotone.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m_[i] = 0.0;
            m_[i + 1] = 0.0;
            continue;
        }
        const double a = m_[i] / d[i];
        const double b = m_[i + 1] / d[i];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double tau = 3.0 / std::sqrt(s);
            m_[i] = tau * a * d[i];
            m_[i + 1] = tau * b * d[i];
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    if (x <= x_.front())
        return y_.front();
    if (x >= x_.back())
        return y_.back();

    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;

    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;

    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;

    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

}  // namespace sircov
