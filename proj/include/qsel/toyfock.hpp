// toyfock.hpp - Repeated-interaction realization of the unitary process: one
// exactly-unitary interaction per grid cell on h ⊗ (C^{1+d})^{⊗m}, with
// matrix-free application, compressions, multi-interval words and discrete
// exponential vectors.

#pragma once

#include "qsel/schedule.hpp"

namespace qsel::toy {

using hp::CoefficientSchedule;
using hp::StepFunction;

struct SliceUnitary {
    Matrix matrix; // on dim_h * (1+d)
    int source_index{0};
};

struct BuildOptions {
    int max_slices{12};
    bool allow_nonunitary{false}; // negative controls only
};

class ToyFockProcess {
  public:
    ToyFockProcess(CoefficientSchedule sched, const BuildOptions& opts);

    const CoefficientSchedule& schedule() const { return sched_; }
    int dim_h() const { return sched_.dim_h(); }
    int slice_dim() const { return slice_dim_; }
    int slices() const { return static_cast<int>(slices_.size()); }
    Index fock_dim() const { return fock_dim_; }
    Index total_dim() const { return static_cast<Index>(dim_h()) * fock_dim_; }
    const SliceUnitary& slice(int i) const { return slices_.at(static_cast<std::size_t>(i)); }

    Vector vacuum() const { return basis_vec(fock_dim_, 0); }

    // U_{s,t} applied to a vector of h⊗Fock; grid indices i <= j. The ordered
    // product composes left-to-right in time, so the latest slice acts first.
    // adjoint applies U_{s,t}^*; reversed flips the slice order (A1 control).
    void apply_in_place(int i, int j, Eigen::Ref<Vector> psi,
                        bool adjoint = false, bool reversed = false) const;
    Vector apply(int i, int j, const Vector& psi, bool adjoint = false) const;

    // compression U_{s,t}^{(eps)}(u,v) applied to a Fock vector
    Vector compress_apply(int i, int j, const Vector& u, const Vector& v,
                          const Vector& phi, int eps = 0, bool reversed = false) const;

    // dense assembly of the compression on the Fock factor (fock_dim <= cap)
    Matrix compress_dense(int i, int j, const Vector& u, const Vector& v,
                          int eps = 0, Index cap = 4096) const;

    // vacuum block <0|U_k|0> of one slice, an operator on h
    Matrix slice_vacuum_block(int k) const;

  private:
    void apply_slice(int k, Eigen::Ref<Vector> psi, bool adjoint) const;

    CoefficientSchedule sched_;
    int slice_dim_;
    Index fock_dim_;
    std::vector<SliceUnitary> slices_;
    std::vector<Index> slice_stride_; // stride of slice i in the Fock index
};

ToyFockProcess build_process(const CoefficientSchedule& sched, const BuildOptions& opts = {});

// Π_k U^{(eps_k)}_{s_k,t_k}(u_k,v_k) Ω for 0 <= s_1 <= t_1 <= ... <= s_n <= t_n
// (grid indices); the product is ordered 1..n, the n-th factor acting first.
Vector multi_interval_vector(const ToyFockProcess& proc,
                             const std::vector<std::pair<int, int>>& intervals,
                             const std::vector<Vector>& us, const std::vector<Vector>& vs,
                             const std::vector<int>& eps);

// ⊗_i (1, sqrt(tau) f(t_i)) - unnormalized discrete exponential vector;
// <e(f),e(g)> = Π_i (1 + tau <f_i,g_i>)
Vector discrete_exponential_vector(const ToyFockProcess& proc, const StepFunction& f);

} // namespace qsel::toy
