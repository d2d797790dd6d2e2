/// @file forcing.cpp
/// @brief Evaluation and grid sampling of closed-form periodic forcings.

#include "poros/forcing.hpp"

#include "poros/errors.hpp"

#include <cmath>

namespace poros {

Forcing::Forcing(std::vector<ForcingTerm> f1_terms, std::vector<ForcingTerm> f2_terms,
                 double period)
    : f1_(std::move(f1_terms)), f2_(std::move(f2_terms)), period_(period) {
    if (!(period_ > 0.0)) {
        throw ConfigError("forcing period must be positive");
    }
}

Forcing Forcing::constant(double f1, double f2) {
    std::vector<ForcingTerm> t1, t2;
    if (f1 != 0.0) t1.push_back(ForcingTerm{f1, 0, ForcingTerm::Mode::Const, 0});
    if (f2 != 0.0) t2.push_back(ForcingTerm{f2, 0, ForcingTerm::Mode::Const, 0});
    return Forcing(std::move(t1), std::move(t2), 1.0);
}

double Forcing::eval(const std::vector<ForcingTerm>& terms, double x, double y) const {
    double s = 0.0;
    for (const ForcingTerm& t : terms) {
        double v = t.coef;
        for (int p = 0; p < t.ypow; ++p) v *= y;
        switch (t.mode) {
        case ForcingTerm::Mode::Const: break;
        case ForcingTerm::Mode::Sin: v *= std::sin(2.0 * M_PI * t.k * x / period_); break;
        case ForcingTerm::Mode::Cos: v *= std::cos(2.0 * M_PI * t.k * x / period_); break;
        }
        s += v;
    }
    return s;
}

VectorField sample_forcing(const StaggeredGrid& g, const Forcing& f) {
    VectorField out(g);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            out.u(i, j) = f.f1(g.uface_x(i), g.uface_y(j));
        }
    }
    for (int j = 0; j < g.n_v_rows(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            out.v(i, j) = f.f2(g.vface_x(i), g.vface_y(j));
        }
    }
    return out;
}

} // namespace poros
