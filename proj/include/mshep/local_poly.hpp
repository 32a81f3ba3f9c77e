#pragma once

// Fundamental Lagrange polynomials on a unisolvent point subset, with
// analytic gradients and Hessians.  Coefficients are computed once against a
// shifted-scaled monomial basis; evaluation is a pair of power tables.

#include "mshep/nodes.hpp"
#include "mshep/types.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace mshep {

// Bivariate monomials of total degree <= p in graded order:
// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
template <typename Scalar = Real>
class MonomialBasis {
public:
    explicit MonomialBasis(int degree) : degree_(degree) {
        if (degree < 0) throw SolverError("local-poly", "negative polynomial degree");
        for (int d = 0; d <= degree; ++d)
            for (int a = d; a >= 0; --a) exps_.emplace_back(a, d - a);
    }

    int degree() const { return degree_; }
    int size() const { return static_cast<int>(exps_.size()); }
    const std::vector<std::pair<int, int>>& exponents() const { return exps_; }

    Eigen::RowVectorX<Scalar> row(const Vector2<Scalar>& u) const {
        Eigen::RowVectorX<Scalar> v(size());
        auto [pu, pv] = power_tables(u);
        for (int b = 0; b < size(); ++b) v[b] = pu[exps_[b].first] * pv[exps_[b].second];
        return v;
    }

    // value/derivative rows with respect to the scaled coordinates
    void rows(const Vector2<Scalar>& u, Eigen::RowVectorX<Scalar>& val,
              Eigen::RowVectorX<Scalar>& du, Eigen::RowVectorX<Scalar>& dv,
              Eigen::RowVectorX<Scalar>& duu, Eigen::RowVectorX<Scalar>& duv,
              Eigen::RowVectorX<Scalar>& dvv) const {
        auto [pu, pv] = power_tables(u);
        const int nb = size();
        val.resize(nb); du.resize(nb); dv.resize(nb);
        duu.resize(nb); duv.resize(nb); dvv.resize(nb);
        auto pow_or_zero = [](const std::vector<Scalar>& t, int e) {
            return e < 0 ? Scalar(0) : t[static_cast<size_t>(e)];
        };
        for (int b = 0; b < nb; ++b) {
            const auto [a, c] = exps_[b];
            val[b] = pu[a] * pv[c];
            du[b] = a * pow_or_zero(pu, a - 1) * pv[c];
            dv[b] = c * pu[a] * pow_or_zero(pv, c - 1);
            duu[b] = Scalar(a) * (a - 1) * pow_or_zero(pu, a - 2) * pv[c];
            duv[b] = Scalar(a) * c * pow_or_zero(pu, a - 1) * pow_or_zero(pv, c - 1);
            dvv[b] = Scalar(c) * (c - 1) * pu[a] * pow_or_zero(pv, c - 2);
        }
    }

private:
    std::pair<std::vector<Scalar>, std::vector<Scalar>>
    power_tables(const Vector2<Scalar>& u) const {
        std::vector<Scalar> pu(degree_ + 1), pv(degree_ + 1);
        pu[0] = pv[0] = Scalar(1);
        for (int e = 1; e <= degree_; ++e) {
            pu[e] = pu[e - 1] * u[0];
            pv[e] = pv[e - 1] * u[1];
        }
        return {std::move(pu), std::move(pv)};
    }

    int degree_;
    std::vector<std::pair<int, int>> exps_;
};

template <typename Scalar = Real>
class LocalInterpolant {
public:
    struct Evaluation {
        Eigen::VectorX<Scalar> values;                       // tau
        Eigen::Matrix<Scalar, 2, Eigen::Dynamic> grads;      // d/dx, d/dy
        Eigen::Matrix<Scalar, 3, Eigen::Dynamic> hessians;   // xx, xy, yy
    };

    // The basis is centered at the first subset point and scaled by the
    // largest in-subset distance from it, mirroring the covering's pivoting
    // basis so the conditioning guarantee transfers.
    LocalInterpolant(const Points<Scalar>& subset_points, int degree)
        : basis_(degree), center_(subset_points.row(0).transpose()) {
        const int tau = basis_.size();
        if (subset_points.rows() != tau)
            throw SolverError("local-poly", "subset size does not match basis dimension");
        scale_ = Scalar(0);
        for (int k = 0; k < tau; ++k)
            scale_ = std::max(scale_, (subset_points.row(k).transpose() - center_).norm());
        if (!(scale_ > Scalar(0)))
            throw SolverError("local-poly", "degenerate subset");

        Eigen::MatrixX<Scalar> V(tau, tau);
        for (int k = 0; k < tau; ++k)
            V.row(k) = basis_.row((subset_points.row(k).transpose() - center_) / scale_);
        Eigen::FullPivLU<Eigen::MatrixX<Scalar>> lu(V);
        if (!lu.isInvertible())
            throw SolverError("local-poly", "degenerate subset");
        coeffs_ = lu.solve(Eigen::MatrixX<Scalar>::Identity(tau, tau));
        if ((V * coeffs_ - Eigen::MatrixX<Scalar>::Identity(tau, tau)).cwiseAbs().maxCoeff() >
            Scalar(1e-10))
            throw SolverError("local-poly", "degenerate subset");
    }

    int size() const { return basis_.size(); }
    int degree() const { return basis_.degree(); }
    const Vector2<Scalar>& center() const { return center_; }
    Scalar scale() const { return scale_; }

    Eigen::VectorX<Scalar> values(const Vector2<Scalar>& x) const {
        return (basis_.row((x - center_) / scale_) * coeffs_).transpose();
    }

    Evaluation evaluate(const Vector2<Scalar>& x) const {
        Eigen::RowVectorX<Scalar> val, du, dv, duu, duv, dvv;
        basis_.rows((x - center_) / scale_, val, du, dv, duu, duv, dvv);
        const Scalar is = Scalar(1) / scale_, is2 = is * is;
        Evaluation out;
        out.values = (val * coeffs_).transpose();
        out.grads.resize(2, size());
        out.grads.row(0) = du * coeffs_ * is;
        out.grads.row(1) = dv * coeffs_ * is;
        out.hessians.resize(3, size());
        out.hessians.row(0) = duu * coeffs_ * is2;
        out.hessians.row(1) = duv * coeffs_ * is2;
        out.hessians.row(2) = dvv * coeffs_ * is2;
        return out;
    }

private:
    MonomialBasis<Scalar> basis_;
    Vector2<Scalar> center_;
    Scalar scale_;
    Eigen::MatrixX<Scalar> coeffs_;  // column i holds the coefficients of lambda_i
};

template <typename Scalar = Real>
LocalInterpolant<Scalar> build_local_interpolant(const NodeSet& nodes,
                                                 const std::vector<int>& subset, int p) {
    Points<Scalar> pts(static_cast<int>(subset.size()), 2);
    for (int k = 0; k < pts.rows(); ++k)
        pts.row(k) = nodes.point(subset[static_cast<size_t>(k)]).template cast<Scalar>().transpose();
    return LocalInterpolant<Scalar>(pts, p);
}

} // namespace mshep
