// flows.hpp - Extraction of the vacuum-expectation flow T_{s,t} and the trace
// flow Z_{s,t} from a process backend, finite-difference generators, and the
// integral-equation / regularity diagnostics.

#pragma once

#include <map>
#include <ostream>

#include "qsel/element_ode.hpp"
#include "qsel/toyfock.hpp"

namespace qsel::flow {

using hp::TimeGrid;

// Anything that can serve matrix elements of a unitary process with a
// reference vector: T on h and Z on column-stacked densities.
class ProcessBackend {
  public:
    virtual ~ProcessBackend() = default;
    virtual int dim_h() const = 0;
    virtual const TimeGrid& grid() const = 0;
    virtual Matrix vacuum_flow(int i, int j) const = 0; // T_{s,t}
    virtual Matrix trace_flow(int i, int j) const = 0;  // Z_{s,t} superoperator
};

// Extracts flows from the toy process through vacuum matrix elements only
// (the process is treated as a black box of inner products).
class ToyBackend final : public ProcessBackend {
  public:
    explicit ToyBackend(const toy::ToyFockProcess& proc) : proc_(proc) {}
    int dim_h() const override { return proc_.dim_h(); }
    const TimeGrid& grid() const override { return proc_.schedule().grid(); }
    Matrix vacuum_flow(int i, int j) const override;
    Matrix trace_flow(int i, int j) const override;
    const toy::ToyFockProcess& process() const { return proc_; }

  private:
    const toy::ToyFockProcess& proc_;
};

class OdeBackend final : public ProcessBackend {
  public:
    explicit OdeBackend(const hp::CoefficientSchedule& sched, double rk4_step = 0.0)
        : sched_(sched), rk4_step_(rk4_step) {}
    int dim_h() const override { return sched_.dim_h(); }
    const TimeGrid& grid() const override { return sched_.grid(); }
    Matrix vacuum_flow(int i, int j) const override { return ode::vacuum_flow_ode(sched_, i, j, rk4_step_); }
    Matrix trace_flow(int i, int j) const override { return ode::extract_Z_ode(sched_, i, j, rk4_step_); }
    const hp::CoefficientSchedule& schedule() const { return sched_; }

  private:
    const hp::CoefficientSchedule& sched_;
    double rk4_step_;
};

inline Matrix extract_T(const ProcessBackend& b, int i, int j) { return b.vacuum_flow(i, j); }
inline Matrix extract_Z(const ProcessBackend& b, int i, int j) { return b.trace_flow(i, j); }

enum class FlowKind { VacuumFlow, TraceFlow };

struct FlowSnapshot {
    FlowKind kind{FlowKind::VacuumFlow};
    TimeGrid grid;
    int dim{0}; // matrix side: dim_h or dim_h²
    std::map<std::pair<int, int>, Matrix> values;
    std::map<int, Matrix> generator;
    double fd_step{0.0};

    const Matrix& at(int i, int j) const {
        const auto it = values.find({i, j});
        if (it == values.end()) throw std::out_of_range("FlowSnapshot: pair not stored");
        return it->second;
    }
    bool has(int i, int j) const { return values.count({i, j}) > 0; }
};

// Fills all pairs i <= j when the grid is small, otherwise the row from
// `base_row` plus a band j - i <= band (enough for fd windows).
FlowSnapshot build_snapshot(const ProcessBackend& backend, FlowKind kind,
                            int band = 8, int base_row = 0, bool full = false);

// (values(t, t+h) - 1)/h, optionally Richardson-extrapolated with h and h/2.
// h must be a positive multiple of the grid step; the needed pairs must be
// stored in the snapshot.
Matrix fd_generator(const FlowSnapshot& flow, int t, double h, bool richardson = true);

// Same differencing straight off a backend (no snapshot required).
Matrix fd_generator(const ProcessBackend& backend, FlowKind kind, int t, double h,
                    bool richardson = true);

// ‖values(s,t) − 1 − Σ_i values(s,t_i) gen(t_i) τ‖ (left Riemann sum)
double integral_residual(const FlowSnapshot& flow, const std::map<int, Matrix>& gen, int s, int t);

// max over stored pairs of ‖values(s,t) − 1‖ / (t − s)
double regularity_constant(const FlowSnapshot& flow);

// CSV dump: columns s,t,entry_index,re,im
void dump_flow_csv(const FlowSnapshot& flow, std::ostream& os);

} // namespace qsel::flow
