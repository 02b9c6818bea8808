#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pdg/mesh.hpp"

namespace pdg {

// Affine map x -> (x - center) / scale used to keep Vandermonde matrices
// well conditioned independently of h.
struct LocalFrame {
    Point center = Point::Zero();
    double scale = 1.0;

    Point to_local(const Point& x) const { return (x - center) / scale; }
};

// Frame centered at `center` and scaled by the largest node distance.
LocalFrame make_frame(std::span<const Point> nodes, const Point& center);

// Monomials of total degree <= m in graded lexicographic order
// (1, x, y, x^2, xy, y^2, ...). With dim == 1 only powers of x are used.
class MonomialBasis {
public:
    MonomialBasis(int degree, int dim = 2);

    int degree() const { return degree_; }
    int dim() const { return dim_; }
    int size() const { return static_cast<int>(exponents_.size()); }
    const std::array<int, 2>& exponent(int j) const { return exponents_[j]; }

    // Values at a point given in local coordinates.
    void evaluate(const Point& xi, Eigen::Ref<Eigen::VectorXd> out) const;
    // Partial derivatives with respect to the local coordinates.
    void gradient(const Point& xi, Eigen::Ref<Eigen::VectorXd> dx, Eigen::Ref<Eigen::VectorXd> dy) const;

private:
    int degree_;
    int dim_;
    std::vector<std::array<int, 2>> exponents_;
};

// dim P_m in `dim` variables.
int polynomial_dimension(int m, int dim = 2);

// Rows: nodes, columns: monomials evaluated in the frame.
Eigen::MatrixXd vandermonde(const MonomialBasis& basis, const LocalFrame& frame, std::span<const Point> nodes);

// (A^T A)^{-1} A^T computed with a column-pivoted QR factorization, without
// forming the normal equations. Throws UnisolvenceError if A is rank deficient.
Eigen::MatrixXd least_squares_operator(const Eigen::MatrixXd& a);

} // namespace pdg
