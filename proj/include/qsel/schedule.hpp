// schedule.hpp - Time-dependent HP coefficient schedules (drift G, Lindblad
// operators L_j, optional scattering S) on a uniform grid, plus the unitarity
// condition and the Lindblad generator they induce.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsel/ops.hpp"

namespace qsel::hp {

struct TimeGrid {
    double t_end{1.0};
    int steps{1};

    TimeGrid() = default;
    TimeGrid(double T, int m) : t_end(T), steps(m) {
        if (!(T > 0.0) || m <= 0) throw std::invalid_argument("TimeGrid: need t_end > 0 and steps > 0");
    }
    double tau() const { return t_end / steps; }
    double time(int i) const { return i * tau(); }

    // exact-multiple check for grid-aligned times
    int index_of(double t) const {
        const double x = t / tau();
        const int i = static_cast<int>(std::lround(x));
        if (std::abs(x - i) > 1e-9 || i < 0 || i > steps)
            throw std::invalid_argument("TimeGrid: time is not on the grid");
        return i;
    }
};

// Piecewise-constant coefficients; index i holds the value on [t_i, t_{i+1}).
class CoefficientSchedule {
  public:
    CoefficientSchedule(int dim_h, int noise_dim, TimeGrid grid,
                        std::vector<Matrix> drift,
                        std::vector<std::vector<Matrix>> lindblads,
                        std::optional<std::vector<Matrix>> scattering = std::nullopt);

    int dim_h() const { return dim_h_; }
    int noise_dim() const { return noise_dim_; }
    const TimeGrid& grid() const { return grid_; }
    double tau() const { return grid_.tau(); }
    int steps() const { return grid_.steps; }

    const Matrix& drift(int i) const { return drift_.at(check_index(i)); }
    const std::vector<Matrix>& lindblads(int i) const { return lindblads_.at(check_index(i)); }
    bool has_scattering() const { return scattering_.has_value(); }
    const Matrix& scattering(int i) const;

    // H(t) = i(G + 1/2 Σ L_j†L_j); hermitian exactly when the unitarity
    // condition Σ L_j†L_j + 2 Re G = 0 holds
    Matrix hamiltonian_part(int i) const;

    bool flagged_unitary() const { return unitary_flag_; }
    void set_unitary_flag(bool f) { unitary_flag_ = f; }

  private:
    std::size_t check_index(int i) const {
        if (i < 0 || i >= grid_.steps) throw std::out_of_range("CoefficientSchedule: grid index out of range");
        return static_cast<std::size_t>(i);
    }

    int dim_h_;
    int noise_dim_;
    TimeGrid grid_;
    std::vector<Matrix> drift_;
    std::vector<std::vector<Matrix>> lindblads_;
    std::optional<std::vector<Matrix>> scattering_;
    bool unitary_flag_{false};
};

// Piecewise-constant C^d test function on the grid (left-endpoint values),
// used for exponential-vector matrix elements on both backends.
struct StepFunction {
    int dim{0};
    std::vector<Vector> values; // one value per grid cell

    static StepFunction zero(int d, int steps) {
        StepFunction f;
        f.dim = d;
        f.values.assign(static_cast<std::size_t>(steps), Vector::Zero(d));
        return f;
    }
    static StepFunction constant(const Vector& c, int steps) {
        StepFunction f;
        f.dim = static_cast<int>(c.size());
        f.values.assign(static_cast<std::size_t>(steps), c);
        return f;
    }
    const Vector& at(int i) const { return values.at(static_cast<std::size_t>(i)); }
};

struct UnitarityReport {
    double max_residual;     // max_i ‖Σ L_j†L_j + G + G†‖
    double hermitian_defect; // max_i ‖H(t_i) − H(t_i)†‖
};

UnitarityReport validate_unitarity(const CoefficientSchedule& sched);

// 𝓛(t_i)ρ = Gρ + ρG† + Σ_j L_j ρ L_j†
Matrix lindblad_apply(const CoefficientSchedule& sched, int i, const Matrix& rho);

// dim_h² x dim_h² matrix of 𝓛(t_i) acting on column-stacked ρ
Matrix lindblad_superop(const CoefficientSchedule& sched, int i);

Eigen::VectorXcd vectorize(const Matrix& rho);
Matrix unvectorize(const Eigen::VectorXcd& v, Index dim);

// Named schedules: trivial, constant-AD, two-lindblad, time-ramp,
// conservation-demo (the last carries S ≠ 1 and is the non-Gaussian control).
CoefficientSchedule builtin_schedule(const std::string& name, double t_end, int steps);

// Assemble a unitary schedule from extracted coefficients: H is projected to
// its hermitian part and G rebuilt as −iH − 1/2 Σ L†L. Returns the schedule and
// the largest discarded anti-hermitian defect.
std::pair<CoefficientSchedule, double>
schedule_from_coefficients(const std::vector<Matrix>& drift,
                           const std::vector<std::vector<Matrix>>& lindblads,
                           const TimeGrid& grid);

nlohmann::json schedule_to_json(const CoefficientSchedule& sched);
CoefficientSchedule schedule_from_json(const nlohmann::json& j);

} // namespace qsel::hp
