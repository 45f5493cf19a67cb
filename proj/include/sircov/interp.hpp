#pragma once

#include <cstddef>
#include <vector>

namespace sircov {

// Monotone cubic Hermite interpolant (Fritsch-Carlson slope limiting).
// Preserves monotonicity of the data; evaluation clamps to the grid ends.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;

    bool empty() const { return x_.empty(); }
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    double slope_front() const { return m_.front(); }
    double slope_back() const { return m_.back(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // endpoint slopes per node
};

}  // namespace sircov
