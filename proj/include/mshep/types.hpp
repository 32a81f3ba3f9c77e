#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <utility>

namespace mshep {

using Real = double;

// the domain is the triangle (0,0), (8,0), (0,8)
inline constexpr Real kDomainSide = 8.0;

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Points = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

using Vec2 = Vector2<Real>;
using Mat2 = Matrix2<Real>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Runtime failure tagged with the subsystem that raised it.  The CLI prints
// "[module] message" and exits nonzero; tests match on the message text.
class SolverError : public std::runtime_error {
public:
    SolverError(std::string module, const std::string& message)
        : std::runtime_error(message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

} // namespace mshep
