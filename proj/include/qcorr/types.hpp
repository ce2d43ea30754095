#pragma once

#include <atomic>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-9;
inline constexpr double clip = 1e-12;
inline constexpr double num = 1e-8;
inline constexpr double recon = 1e-8;
inline constexpr double povm = 1e-8;
inline constexpr double chain = 1e-6;
inline constexpr double kw = 1e-3;
inline constexpr double zero_prob = 1e-14;
inline constexpr int max_ambient_dim = 256;  // default cap; see dim_cap()
}  // namespace tol

namespace detail {
inline std::atomic<int> g_dim_cap{tol::max_ambient_dim};
}

/// Configurable ambient-dimension cap (default 256).
inline int dim_cap() { return detail::g_dim_cap.load(); }
inline void set_dim_cap(int cap) { detail::g_dim_cap.store(cap < 1 ? 1 : cap); }

/// Scoped cap raise for named large examples.
struct DimCapGuard {
    int saved;
    explicit DimCapGuard(int cap) : saved(dim_cap()) {
        if (cap > saved) set_dim_cap(cap);
    }
    ~DimCapGuard() { set_dim_cap(saved); }
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad caller input (dimension mismatch, empty keep set, ...).
struct ArgumentError : Error {
    using Error::Error;
};

// Requested object exceeds the configured ambient-dimension cap.
struct CapacityError : Error {
    using Error::Error;
};

// A matrix claimed to be a state violates Hermiticity/PSD/trace.
struct InvalidStateError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

/// Ordered subsystem dimensions of a multipartite Hilbert space.
struct DimSpec {
    std::vector<int> dims;
    std::vector<std::string> labels;  // optional, empty or same length as dims

    DimSpec() = default;
    DimSpec(std::initializer_list<int> d) : dims(d) { check(); }
    explicit DimSpec(std::vector<int> d, std::vector<std::string> l = {})
        : dims(std::move(d)), labels(std::move(l)) {
        check();
    }

    int total() const {
        long long t = 1;
        for (int d : dims) t *= d;
        return static_cast<int>(t);
    }

    std::size_t size() const { return dims.size(); }

    void check() const {
        if (dims.empty()) throw ArgumentError("DimSpec: empty dimension list");
        long long t = 1;
        for (int d : dims) {
            if (d < 1) throw ArgumentError("DimSpec: subsystem dimension must be >= 1");
            t *= d;
            if (t > dim_cap())
                throw CapacityError("DimSpec: ambient dimension exceeds cap " +
                                    std::to_string(dim_cap()));
        }
        if (!labels.empty() && labels.size() != dims.size())
            throw ArgumentError("DimSpec: label count does not match dims");
    }

    bool operator==(const DimSpec& o) const { return dims == o.dims; }
};

class DensityMatrix {
  public:
    DensityMatrix(DimSpec spec, Matrix entries, bool separable_by_construction = false);

    const DimSpec& dim_spec() const { return spec_; }
    const Matrix& entries() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    bool separable_by_construction() const { return separable_; }

    /// Marks a state whose separability is known from how it was built.
    DensityMatrix flagged_separable() const {
        DensityMatrix c = *this;
        c.separable_ = true;
        return c;
    }

  private:
    DimSpec spec_;
    Matrix m_;
    bool separable_ = false;
};

class PureState {
  public:
    PureState(DimSpec spec, Vector amplitudes);

    const DimSpec& dim_spec() const { return spec_; }
    const Vector& amplitudes() const { return v_; }
    int dim() const { return static_cast<int>(v_.size()); }

    DensityMatrix to_density() const;

  private:
    DimSpec spec_;
    Vector v_;
};

struct EnsembleOfStates {
    RealVector probs;
    std::vector<DensityMatrix> states;

    EnsembleOfStates(RealVector p, std::vector<DensityMatrix> s);
};

}  // namespace qcorr
