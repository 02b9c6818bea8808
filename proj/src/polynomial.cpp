#include "pdg/polynomial.hpp"

#include <algorithm>

#include <Eigen/QR>

#include "pdg/errors.hpp"

namespace pdg {

namespace {

// Small integer powers; faster and exact compared to std::pow.
inline double ipow(double x, int n)
{
    double r = 1.0;
    for (int i = 0; i < n; ++i)
        r *= x;
    return r;
}

} // namespace

LocalFrame make_frame(std::span<const Point> nodes, const Point& center)
{
    LocalFrame frame;
    frame.center = center;
    double radius = 0.0;
    for (const auto& p : nodes)
        radius = std::max(radius, (p - center).norm());
    frame.scale = radius > 0.0 ? radius : 1.0;
    return frame;
}

int polynomial_dimension(int m, int dim)
{
    if (m < 0)
        return 0;
    return dim == 1 ? m + 1 : (m + 1) * (m + 2) / 2;
}

MonomialBasis::MonomialBasis(int degree, int dim) : degree_(degree), dim_(dim)
{
    if (degree < 0)
        throw InvalidParameter("polynomial degree must be non-negative");
    if (dim != 1 && dim != 2)
        throw InvalidParameter("monomial basis supports dimension 1 or 2");
    for (int d = 0; d <= degree; ++d) {
        if (dim == 1) {
            exponents_.push_back({d, 0});
            continue;
        }
        for (int i = d; i >= 0; --i)
            exponents_.push_back({i, d - i});
    }
}

void MonomialBasis::evaluate(const Point& xi, Eigen::Ref<Eigen::VectorXd> out) const
{
    for (int j = 0; j < size(); ++j)
        out[j] = ipow(xi.x(), exponents_[j][0]) * ipow(xi.y(), exponents_[j][1]);
}

void MonomialBasis::gradient(const Point& xi, Eigen::Ref<Eigen::VectorXd> dx, Eigen::Ref<Eigen::VectorXd> dy) const
{
    for (int j = 0; j < size(); ++j) {
        const int p = exponents_[j][0], q = exponents_[j][1];
        dx[j] = p > 0 ? p * ipow(xi.x(), p - 1) * ipow(xi.y(), q) : 0.0;
        dy[j] = q > 0 ? q * ipow(xi.x(), p) * ipow(xi.y(), q - 1) : 0.0;
    }
}

Eigen::MatrixXd vandermonde(const MonomialBasis& basis, const LocalFrame& frame, std::span<const Point> nodes)
{
    Eigen::MatrixXd a(static_cast<Eigen::Index>(nodes.size()), basis.size());
    Eigen::VectorXd row(basis.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        basis.evaluate(frame.to_local(nodes[i]), row);
        a.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return a;
}

Eigen::MatrixXd least_squares_operator(const Eigen::MatrixXd& a)
{
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-12);
    if (qr.rank() < a.cols())
        throw UnisolvenceError("least-squares system is rank deficient (rank " + std::to_string(qr.rank()) +
                               " < " + std::to_string(a.cols()) + ")");
    // Row j of the result solves the least-squares problem for nodal data e_j.
    return qr.solve(Eigen::MatrixXd::Identity(a.rows(), a.rows()));
}

} // namespace pdg
