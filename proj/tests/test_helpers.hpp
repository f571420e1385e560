#pragma once

#include <vector>

#include "locert/linalg.hpp"
#include "locert/random_instances.hpp"

namespace locert::testutil {

inline ComplexMatrix mat2(cx a, cx b, cx c, cx d) {
    ComplexMatrix m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

inline ComplexMatrix diag(const std::vector<double> &d) {
    ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

inline ComplexMatrix sigma_x() { return mat2(0, 1, 1, 0); }
inline ComplexMatrix sigma_z() { return mat2(1, 0, 0, -1); }

inline ComplexMatrix plus_projector() { return mat2(0.5, 0.5, 0.5, 0.5); }

inline ComplexMatrix random_hermitian(int dim, Rng &rng) {
    ComplexMatrix g(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = rng.cx_gaussian();
    return hermitize(g);
}

inline ComplexMatrix random_psd(int dim, Rng &rng) {
    ComplexMatrix g(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = rng.cx_gaussian();
    return hermitize(g * g.adjoint());
}

} // namespace locert::testutil
