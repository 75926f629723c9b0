#include "hybridspin/pauli.hpp"

#include <cmath>
#include <string>

#include "hybridspin/errors.hpp"

namespace hybridspin {

HermitianOp2 to_hermitian(const ComplexOp2& A, double tau_herm) {
    double dev = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            dev = std::max(dev, std::abs(A.m[i][j] - std::conj(A.m[j][i])));
    if (dev > tau_herm)
        throw ContractViolation("ComplexOp2 is not Hermitian within tolerance: deviation " +
                                std::to_string(dev));
    const double a0 = 0.5 * std::real(A.m[0][0] + A.m[1][1]);
    const double az = 0.5 * std::real(A.m[0][0] - A.m[1][1]);
    const double ax = 0.5 * std::real(A.m[0][1] + A.m[1][0]);
    const double ay = 0.5 * std::imag(A.m[1][0] - A.m[0][1]);
    return {a0, {ax, ay, az}};
}

}  // namespace hybridspin
