#include "qcorr/povm_opt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>

#include "qcorr/qstate.hpp"

namespace qcorr {

namespace {

std::atomic<int> g_max_threads{0};

int default_threads() {
    if (const char* env = std::getenv("QCORR_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hc == 0 ? 1u : hc, 8u));
}

Matrix unpack_complex(const std::vector<double>& params, int rows, int cols, std::size_t offset = 0) {
    Matrix m(rows, cols);
    std::size_t p = offset;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            m(i, j) = Complex(params[p], params[p + 1]);
            p += 2;
        }
    return m;
}

void pack_complex(const Matrix& m, std::vector<double>& params) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            params.push_back(m(i, j).real());
            params.push_back(m(i, j).imag());
        }
}

// Closest matrix with orthonormal columns (polar factor M = USV' -> UV'),
// computed via the SVD so the output is exact even for rank-deficient input.
Matrix polar_orthonormalize(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

bool numerically_full_rank(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1) >= 1e-12 * std::max(1.0, sv(0));
}

Povm rank1_povm_from_stiefel(const Matrix& m_st) {
    const int k = static_cast<int>(m_st.rows());
    const int d = static_cast<int>(m_st.cols());
    std::vector<Matrix> eff;
    eff.reserve(k);
    for (int i = 0; i < k; ++i) {
        Vector a = m_st.row(i).adjoint();
        eff.push_back(a * a.adjoint());
    }
    return Povm(d, std::move(eff));
}

double entropy_unnormalized(const Matrix& s, double p) {
    if (s.rows() == 1) return 0.0;
    if (s.rows() == 2) {
        const double t = s.trace().real();
        const double det = (s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0)).real();
        double disc = t * t - 4.0 * det;
        if (disc < 0.0) disc = 0.0;
        const double r = std::sqrt(disc);
        double l1 = (t + r) / (2.0 * p);
        double l2 = (t - r) / (2.0 * p);
        double out = 0.0;
        if (l1 > tol::clip) out -= l1 * std::log2(l1);
        if (l2 > tol::clip) out -= l2 * std::log2(l2);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
    double out = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()[i] / p;
        if (lam > tol::clip) out -= lam * std::log2(lam);
    }
    return out;
}

struct SearchOutcome {
    std::vector<double> x;
    double value = -1.0;
    bool converged = false;
    int sweeps = 0;
    std::vector<std::pair<int, double>> trace;
};

// Greedy coordinate pattern search with step halving.
SearchOutcome pattern_search(std::vector<double> x, const std::function<double(const std::vector<double>&)>& obj,
                             int max_sweeps, double conv_tol) {
    constexpr double kStepMin = 8e-8;
    SearchOutcome out;
    double f = obj(x);
    out.trace.emplace_back(0, f);
    double step = 0.25;
    int sweep = 0;
    int stale_fine_sweeps = 0;  // failed sweeps at already-fine steps
    while (sweep < max_sweeps && step > kStepMin) {
        bool improved = false;
        const double f_before = f;
        for (std::size_t c = 0; c < x.size(); ++c) {
            for (double sgn : {1.0, -1.0}) {
                x[c] += sgn * step;
                const double fn = obj(x);
                if (fn > f) {
                    f = fn;
                    improved = true;
                    break;
                }
                x[c] -= sgn * step;
            }
        }
        ++sweep;
        if (improved) {
            out.trace.emplace_back(sweep, f);
            stale_fine_sweeps = 0;
            if (f - f_before < conv_tol && step < 1e-5) break;
        } else {
            step *= 0.5;
            // below 1e-5 the residual gain of a smooth objective is O(step^2);
            // two consecutive empty sweeps there means we are done
            if (step < 1e-5 && ++stale_fine_sweeps >= 2) break;
        }
    }
    out.x = std::move(x);
    out.value = f;
    out.sweeps = sweep;
    out.converged = (sweep < max_sweeps);
    return out;
}

// Runs one search per start, possibly in parallel; reduction is by max value
// with ties broken by the lowest start index.
std::vector<SearchOutcome> run_starts(const std::vector<std::vector<double>>& starts,
                                      const std::function<double(const std::vector<double>&)>& obj,
                                      int max_sweeps, double conv_tol) {
    std::vector<SearchOutcome> results(starts.size());
    const int threads = std::min<int>(max_threads(), static_cast<int>(starts.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < starts.size(); ++i)
            results[i] = pattern_search(starts[i], obj, max_sweeps, conv_tol);
        return results;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= starts.size()) return;
            results[i] = pattern_search(starts[i], obj, max_sweeps, conv_tol);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return results;
}

std::size_t best_index(const std::vector<SearchOutcome>& results) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].value > results[best].value) best = i;
    return best;
}

std::vector<double> random_params(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> p(n);
    for (double& v : p) v = gauss(rng);
    return p;
}

std::vector<double> stiefel_params_padded(const Matrix& rows, int k) {
    const int d = static_cast<int>(rows.cols());
    Matrix m = Matrix::Zero(k, d);
    const int n = std::min<int>(k, static_cast<int>(rows.rows()));
    m.topRows(n) = rows.topRows(n);
    std::vector<double> p;
    p.reserve(2 * static_cast<std::size_t>(k) * d);
    pack_complex(m, p);
    return p;
}

Matrix marginal_of_side(const DensityMatrix& rho, Side side) {
    DensityMatrix m = partial_trace(rho, {side == Side::A ? 0 : 1});
    return m.entries();
}

// Canonical + seeded + random starting points for one side.
std::vector<std::vector<double>> build_starts(const DensityMatrix& rho, Side side, int d, int k,
                                              const OptConfig& cfg, std::uint64_t seed_salt) {
    std::vector<std::vector<double>> starts;
    starts.push_back(stiefel_params_padded(Matrix::Identity(d, d), k));
    Eigen::SelfAdjointEigenSolver<Matrix> es(marginal_of_side(rho, side));
    starts.push_back(stiefel_params_padded(es.eigenvectors().adjoint(), k));
    for (const Povm& s : cfg.seeds_in) {
        if (s.dim != d) throw ArgumentError("seeds_in: POVM dimension mismatch");
        starts.push_back(rank1_params_from_povm(s, k));
    }
    const std::size_t n_params = 2 * static_cast<std::size_t>(k) * d;
    for (int r = 0; r < cfg.restarts; ++r)
        starts.push_back(random_params(n_params, derive_seed(cfg.seed + seed_salt, r)));
    return starts;
}

}  // namespace

void set_max_threads(int n) { g_max_threads.store(n < 1 ? 1 : n); }

int max_threads() {
    int n = g_max_threads.load();
    if (n == 0) {
        n = default_threads();
        g_max_threads.store(n);
    }
    return n;
}

void OptConfig::validate(int measured_dim) const {
    if (restarts < 0) throw ArgumentError("OptConfig: negative restarts");
    if (max_iters < 1) throw ArgumentError("OptConfig: max_iters must be >= 1");
    if (conv_tol <= 0.0) throw ArgumentError("OptConfig: conv_tol must be > 0");
    if (mode == OptMode::Projective && n_outcomes != 0 && n_outcomes != measured_dim)
        throw ArgumentError("OptConfig: projective mode forces n_outcomes = dim");
    if (n_outcomes < 0 || (n_outcomes != 0 && n_outcomes < 1))
        throw ArgumentError("OptConfig: n_outcomes must be >= 1");
}

int OptConfig::outcomes_for(int measured_dim) const {
    if (mode == OptMode::Projective) return measured_dim;
    if (n_outcomes > 0) return n_outcomes;
    return measured_dim * measured_dim;
}

Povm parameterize_rank1(const std::vector<double>& params, int d, int k) {
    if (params.size() != 2 * static_cast<std::size_t>(k) * d)
        throw ArgumentError("parameterize_rank1: params length must be 2*k*d");
    if (k < d) throw ArgumentError("parameterize_rank1: need at least d outcomes");
    Matrix m = unpack_complex(params, k, d);
    for (int attempt = 0; !numerically_full_rank(m); ++attempt) {
        if (attempt >= 3)
            throw ArgumentError("parameterize_rank1: raw matrix is numerically rank-deficient");
        // deterministic diagonal perturbation before giving up
        for (int i = 0; i < std::min(k, d); ++i) m(i, i) += 1e-6 * (attempt + 1);
    }
    return rank1_povm_from_stiefel(polar_orthonormalize(m));
}

namespace detail {

// Non-throwing variant for the search objective: the polar factor of a
// rank-deficient raw matrix is still a valid (arbitrary-completion) POVM.
Povm rank1_relaxed(const std::vector<double>& params, int d, int k) {
    return rank1_povm_from_stiefel(polar_orthonormalize(unpack_complex(params, k, d)));
}

}  // namespace detail

Povm parameterize_general(const std::vector<Matrix>& param_mats) {
    if (param_mats.empty()) throw ArgumentError("parameterize_general: no matrices");
    const int d = static_cast<int>(param_mats[0].rows());
    Matrix s = Matrix::Zero(d, d);
    for (const Matrix& b : param_mats) {
        if (b.rows() != d || b.cols() != d)
            throw ArgumentError("parameterize_general: matrix size mismatch");
        s += b.adjoint() * b;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    if (es.eigenvalues().minCoeff() < tol::psd)
        throw ArgumentError("parameterize_general: normalizer is singular");
    RealVector inv_sqrt(d);
    for (int i = 0; i < d; ++i) inv_sqrt[i] = 1.0 / std::sqrt(es.eigenvalues()[i]);
    Matrix s_inv_sqrt = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
    std::vector<Matrix> eff;
    for (const Matrix& b : param_mats) {
        Matrix e = s_inv_sqrt * b.adjoint() * b * s_inv_sqrt;
        eff.push_back(((e + e.adjoint()) / 2.0).eval());
    }
    return Povm(d, std::move(eff));
}

std::vector<double> rank1_params_from_povm(const Povm& povm, int k) {
    struct Row {
        Vector v;
        double w;
    };
    std::vector<Row> rows;
    for (const Matrix& e : povm.effects) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(e);
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            const double lam = es.eigenvalues()[i];
            if (lam > 1e-12) rows.push_back({std::sqrt(lam) * es.eigenvectors().col(i), lam});
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.w > b.w; });
    Matrix m = Matrix::Zero(k, povm.dim);
    for (int i = 0; i < std::min<int>(k, static_cast<int>(rows.size())); ++i)
        m.row(i) = rows[i].v.adjoint();
    std::vector<double> p;
    p.reserve(2 * static_cast<std::size_t>(k) * povm.dim);
    pack_complex(m, p);
    return p;
}

namespace {

Povm povm_from_params(OptMode mode, const std::vector<double>& params, int d, int k) {
    if (mode == OptMode::General) {
        std::vector<Matrix> mats;
        for (int i = 0; i < k; ++i)
            mats.push_back(unpack_complex(params, d, d, 2 * static_cast<std::size_t>(i) * d * d));
        return parameterize_general(mats);
    }
    return detail::rank1_relaxed(params, d, k);  // projective mode uses k = d
}

std::size_t param_count(OptMode mode, int d, int k) {
    return mode == OptMode::General ? 2 * static_cast<std::size_t>(k) * d * d
                                    : 2 * static_cast<std::size_t>(k) * d;
}

}  // namespace

OptResult maximize_single(const DensityMatrix& rho, Side side, const OptConfig& cfg) {
    if (rho.dim_spec().size() != 2)
        throw ArgumentError("maximize_single: state must be bipartite");
    const int da = rho.dim_spec().dims[0];
    const int db = rho.dim_spec().dims[1];
    const int d = (side == Side::A) ? da : db;
    cfg.validate(d);
    const int k = cfg.outcomes_for(d);

    Matrix kept = marginal_of_side(rho, side == Side::A ? Side::B : Side::A);
    const double s_kept = entropy_unnormalized(kept, 1.0);
    const Matrix& rm = rho.entries();

    auto objective = [&](const std::vector<double>& params) -> double {
        Povm povm;
        try {
            povm = povm_from_params(cfg.mode, params, d, k);
        } catch (const ArgumentError&) {
            return -1e300;  // reject degenerate parameter points
        }
        auto conds = detail::unnormalized_conditionals(rm, da, db, side, povm.effects);
        double avg_cond = 0.0;
        for (const Matrix& s : conds) {
            const double p = s.trace().real();
            if (p < tol::zero_prob) continue;
            avg_cond += p * entropy_unnormalized(s, p);
        }
        return s_kept - avg_cond;
    };

    std::vector<std::vector<double>> starts;
    if (cfg.mode == OptMode::General) {
        const std::size_t n = param_count(cfg.mode, d, k);
        std::vector<double> comp(n, 0.0);
        for (int i = 0; i < std::min(k, d); ++i)
            comp[2 * (static_cast<std::size_t>(i) * d * d + static_cast<std::size_t>(i) * d + i)] = 1.0;
        starts.push_back(std::move(comp));
        for (int r = 0; r < cfg.restarts; ++r)
            starts.push_back(random_params(n, derive_seed(cfg.seed, r)));
    } else {
        starts = build_starts(rho, side, d, k, cfg, /*seed_salt=*/0);
    }

    auto results = run_starts(starts, objective, cfg.max_iters, cfg.conv_tol);
    const std::size_t bi = best_index(results);
    OptResult out;
    out.value = results[bi].value;
    out.certificate = povm_from_params(cfg.mode, results[bi].x, d, k);
    out.converged = results[bi].converged;
    out.restarts_used = static_cast<int>(starts.size());
    out.iters = results[bi].sweeps;
    out.best_restart_trace = results[bi].trace;
    return out;
}

OptResult maximize_product(const DensityMatrix& rho, const OptConfig& cfg_a, const OptConfig& cfg_b,
                           int sweeps) {
    if (rho.dim_spec().size() != 2)
        throw ArgumentError("maximize_product: state must be bipartite");
    if (sweeps < 1) throw ArgumentError("maximize_product: sweeps must be >= 1");
    const int da = rho.dim_spec().dims[0];
    const int db = rho.dim_spec().dims[1];
    cfg_a.validate(da);
    cfg_b.validate(db);
    if (cfg_a.mode == OptMode::General || cfg_b.mode == OptMode::General)
        throw ArgumentError("maximize_product: general mode not supported here");
    const int ka = cfg_a.outcomes_for(da);
    const int kb = cfg_b.outcomes_for(db);
    const Matrix& rm = rho.entries();

    // Classical MI with one side's effects frozen.
    auto mi_given = [&](const std::vector<Matrix>& fixed_conds, const Povm& moving) {
        RealMatrix t(fixed_conds.size(), moving.effects.size());
        for (std::size_t i = 0; i < fixed_conds.size(); ++i)
            for (std::size_t j = 0; j < moving.effects.size(); ++j) {
                double p = (moving.effects[j] * fixed_conds[i]).trace().real();
                t(static_cast<int>(i), static_cast<int>(j)) = p < 0.0 ? 0.0 : p;
            }
        double h_joint = 0.0, ha = 0.0, hb = 0.0;
        for (int i = 0; i < t.rows(); ++i) {
            const double pa = t.row(i).sum();
            if (pa > tol::clip) ha -= pa * std::log2(pa);
        }
        for (int j = 0; j < t.cols(); ++j) {
            const double pb = t.col(j).sum();
            if (pb > tol::clip) hb -= pb * std::log2(pb);
        }
        for (int i = 0; i < t.rows(); ++i)
            for (int j = 0; j < t.cols(); ++j)
                if (t(i, j) > tol::clip) h_joint -= t(i, j) * std::log2(t(i, j));
        return ha + hb - h_joint;
    };

    struct Pair {
        std::vector<double> a, b;
    };
    std::vector<Pair> starts;
    {
        auto a_starts = build_starts(rho, Side::A, da, ka, cfg_a, /*seed_salt=*/0x51);
        auto b_starts = build_starts(rho, Side::B, db, kb, cfg_b, /*seed_salt=*/0x52);
        // canonical pairs: computational/computational, eigenbasis/eigenbasis
        starts.push_back({a_starts[0], b_starts[0]});
        starts.push_back({a_starts[1], b_starts[1]});
        const std::size_t n_seeds = std::max(cfg_a.seeds_in.size(), cfg_b.seeds_in.size());
        for (std::size_t s = 0; s < n_seeds; ++s) {
            Pair p;
            p.a = s < cfg_a.seeds_in.size() ? a_starts[2 + s] : a_starts[0];
            p.b = s < cfg_b.seeds_in.size() ? b_starts[2 + s] : b_starts[0];
            starts.push_back(std::move(p));
        }
        for (int r = 0; r < cfg_a.restarts; ++r) {
            Pair p;
            p.a = random_params(param_count(cfg_a.mode, da, ka), derive_seed(cfg_a.seed, 2 * r));
            p.b = random_params(param_count(cfg_b.mode, db, kb), derive_seed(cfg_b.seed, 2 * r + 1));
            starts.push_back(std::move(p));
        }
    }

    struct PairOutcome {
        Pair x;
        double value = -1.0;
        bool converged = true;
        int sweeps_done = 0;
        std::vector<std::pair<int, double>> trace;
    };

    auto run_pair = [&](Pair start) {
        PairOutcome out;
        out.x = std::move(start);
        double prev = -1.0;
        for (int sw = 0; sw < sweeps; ++sw) {
            // B step with A frozen
            Povm pa = povm_from_params(cfg_a.mode, out.x.a, da, ka);
            auto conds_a = detail::unnormalized_conditionals(rm, da, db, Side::A, pa.effects);
            auto obj_b = [&](const std::vector<double>& pb_params) {
                return mi_given(conds_a, povm_from_params(cfg_b.mode, pb_params, db, kb));
            };
            auto rb = pattern_search(out.x.b, obj_b, cfg_b.max_iters, cfg_b.conv_tol);
            out.x.b = rb.x;
            out.converged = out.converged && rb.converged;
            // A step with B frozen
            Povm pb = povm_from_params(cfg_b.mode, out.x.b, db, kb);
            auto conds_b = detail::unnormalized_conditionals(rm, da, db, Side::B, pb.effects);
            auto obj_a = [&](const std::vector<double>& pa_params) {
                return mi_given(conds_b, povm_from_params(cfg_a.mode, pa_params, da, ka));
            };
            auto ra = pattern_search(out.x.a, obj_a, cfg_a.max_iters, cfg_a.conv_tol);
            out.x.a = ra.x;
            out.converged = out.converged && ra.converged;
            out.value = ra.value;
            out.trace.emplace_back(sw + 1, out.value);
            out.sweeps_done = sw + 1;
            if (sw > 0 && out.value - prev < cfg_a.conv_tol) break;
            prev = out.value;
        }
        return out;
    };

    std::vector<PairOutcome> results(starts.size());
    const int threads = std::min<int>(max_threads(), static_cast<int>(starts.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < starts.size(); ++i) results[i] = run_pair(starts[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= starts.size()) return;
                results[i] = run_pair(starts[i]);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::size_t bi = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].value > results[bi].value) bi = i;

    OptResult out;
    out.value = results[bi].value;
    out.certificate = povm_from_params(cfg_a.mode, results[bi].x.a, da, ka);
    out.certificate_b = povm_from_params(cfg_b.mode, results[bi].x.b, db, kb);
    out.converged = results[bi].converged;
    out.restarts_used = static_cast<int>(starts.size());
    out.iters = results[bi].sweeps_done;
    out.best_restart_trace = results[bi].trace;
    return out;
}

}  // namespace qcorr
