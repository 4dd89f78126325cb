#ifndef SPSREG_ELLIPSOID_HPP
#define SPSREG_ELLIPSOID_HPP

#include <Eigen/Core>
#include <string>

namespace spsreg {

// The set { theta : (theta - center)' shape (theta - center) <= radius }.
// shape is symmetric positive definite; radius lives in [0, +inf], with +inf
// encoding an unbounded region as a first-class value.
struct Ellipsoid {
    Eigen::VectorXd center;
    Eigen::MatrixXd shape;
    double radius = 0.0;
};

// Size of the region, measured as the longest axis 2*sqrt(radius/lambda_min(shape)).
// Infinite radius gives +inf, radius zero gives 0.
double ellipsoid_size(const Ellipsoid& e);

// JSON round-trip, e.g.
//   {"center":[0.1,0.2],"shape":[[1.0,0.0],[0.0,1.0]],"radius":0.25}
// An infinite radius serializes as the string "inf".
std::string ellipsoid_to_json(const Ellipsoid& e);
Ellipsoid ellipsoid_from_json(const std::string& text);

} // namespace spsreg

#endif
