/// @file forcing.hpp
/// @brief Smooth x1-periodic body forcings from a small closed grammar:
///        per component, sums of coef * x2^p * {1 | sin | cos}(2 pi k x1 / L).

#pragma once

#include "poros/grid.hpp"

#include <vector>

namespace poros {

struct ForcingTerm {
    enum class Mode { Const, Sin, Cos };
    double coef = 0.0;
    int ypow = 0;
    Mode mode = Mode::Const;
    int k = 1; ///< x1 wavenumber (ignored for Mode::Const)
};

/// Closed-form periodic forcing f(x1, x2). The period L fixes the
/// wavenumber scaling so every term is automatically L-periodic.
class Forcing {
public:
    Forcing() = default;
    Forcing(std::vector<ForcingTerm> f1_terms, std::vector<ForcingTerm> f2_terms,
            double period);

    static Forcing constant(double f1, double f2);

    double f1(double x, double y) const { return eval(f1_, x, y); }
    double f2(double x, double y) const { return eval(f2_, x, y); }
    double period() const { return period_; }

    const std::vector<ForcingTerm>& f1_terms() const { return f1_; }
    const std::vector<ForcingTerm>& f2_terms() const { return f2_; }

private:
    double eval(const std::vector<ForcingTerm>& terms, double x, double y) const;

    std::vector<ForcingTerm> f1_, f2_;
    double period_ = 1.0;
};

/// Samples the forcing at every velocity face of the grid.
VectorField sample_forcing(const StaggeredGrid& g, const Forcing& f);

} // namespace poros
