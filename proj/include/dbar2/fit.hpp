#pragma once
// Small least-squares kit for asymptotic exponent extraction.
#include <vector>
#include <string>

namespace dbar2 {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0; // rms of (y - fit)
};

// y ~ intercept + slope * x
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct PlaneFit {
    double a = 0.0; // coefficient of x1
    double b = 0.0; // coefficient of x2
    double intercept = 0.0;
    double residual_rms = 0.0;
};

// y ~ intercept + a * x1 + b * x2 (normal equations, 3x3 solve)
PlaneFit fit_plane(const std::vector<double>& x1, const std::vector<double>& x2,
                   const std::vector<double>& y);

enum class AsymModel { PowerOfD, PowerOfLog, PowerOfLogLog };

const char* asym_model_name(AsymModel m);

struct ModelFit {
    AsymModel model = AsymModel::PowerOfD;
    double exponent = 0.0;
    double residual_rms = 0.0;
};

// Chooses among y ~ c + e*x for the candidate regressor columns; best rms wins.
ModelFit select_model(const std::vector<std::vector<double>>& regressors,
                      const std::vector<AsymModel>& names,
                      const std::vector<double>& y);

} // namespace dbar2
