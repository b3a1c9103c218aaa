#include "dbar2/fit.hpp"
#include <cmath>
#include <stdexcept>

namespace dbar2 {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("fit_line: degenerate x");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / n);
    return f;
}

PlaneFit fit_plane(const std::vector<double>& x1, const std::vector<double>& x2,
                   const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (n < 3 || x1.size() != n || x2.size() != n)
        throw std::invalid_argument("fit_plane: need >= 3 points");
    // normal equations for columns [1, x1, x2]
    double m[3][3] = {{0}}, rhs[3] = {0};
    for (std::size_t i = 0; i < n; ++i) {
        const double c[3] = {1.0, x1[i], x2[i]};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += c[r] * y[i];
            for (int s = 0; s < 3; ++s) m[r][s] += c[r] * c[s];
        }
    }
    // Gaussian elimination with partial pivoting
    int piv[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(m[piv[r]][col]) > std::fabs(m[piv[best]][col])) best = r;
        std::swap(piv[col], piv[best]);
        const double d = m[piv[col]][col];
        if (d == 0.0) throw std::invalid_argument("fit_plane: singular system");
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[piv[r]][col] / d;
            for (int s = col; s < 3; ++s) m[piv[r]][s] -= f * m[piv[col]][s];
            rhs[piv[r]] -= f * rhs[piv[col]];
        }
    }
    double sol[3];
    for (int col = 2; col >= 0; --col) {
        double v = rhs[piv[col]];
        for (int s = col + 1; s < 3; ++s) v -= m[piv[col]][s] * sol[s];
        sol[col] = v / m[piv[col]][col];
    }
    PlaneFit f;
    f.intercept = sol[0];
    f.a = sol[1];
    f.b = sol[2];
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.a * x1[i] + f.b * x2[i]);
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / n);
    return f;
}

const char* asym_model_name(AsymModel m) {
    switch (m) {
        case AsymModel::PowerOfD: return "PowerOfD";
        case AsymModel::PowerOfLog: return "PowerOfLog";
        case AsymModel::PowerOfLogLog: return "PowerOfLogLog";
    }
    return "?";
}

ModelFit select_model(const std::vector<std::vector<double>>& regressors,
                      const std::vector<AsymModel>& names,
                      const std::vector<double>& y) {
    if (regressors.empty() || regressors.size() != names.size())
        throw std::invalid_argument("select_model: bad inputs");
    ModelFit best;
    bool first = true;
    for (std::size_t k = 0; k < regressors.size(); ++k) {
        const LineFit f = fit_line(regressors[k], y);
        if (first || f.residual_rms < best.residual_rms) {
            best.model = names[k];
            best.exponent = f.slope;
            best.residual_rms = f.residual_rms;
            first = false;
        }
    }
    return best;
}

} // namespace dbar2
