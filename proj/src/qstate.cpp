#include "qcorr/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

namespace qcorr {

namespace {

std::vector<long long> strides_of(const std::vector<int>& dims) {
    std::vector<long long> s(dims.size());
    long long acc = 1;
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
        s[i] = acc;
        acc *= dims[i];
    }
    return s;
}

void check_eigenvalues_psd(const RealVector& ev) {
    for (int i = 0; i < ev.size(); ++i)
        if (ev[i] < -tol::psd)
            throw InvalidStateError("matrix has eigenvalue " + std::to_string(ev[i]) +
                                    " below -psd tolerance");
}

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

Matrix ginibre(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    return g;
}

}  // namespace

DensityMatrix::DensityMatrix(DimSpec spec, Matrix entries, bool separable_by_construction)
    : spec_(std::move(spec)), m_(std::move(entries)), separable_(separable_by_construction) {
    spec_.check();
    if (m_.rows() != m_.cols()) throw InvalidStateError("density matrix is not square");
    if (m_.rows() != spec_.total())
        throw InvalidStateError("density matrix size does not match dim_spec");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol::herm)
        throw InvalidStateError("density matrix is not Hermitian within tolerance");
    if (std::abs(m_.trace().real() - 1.0) > tol::trace || std::abs(m_.trace().imag()) > tol::trace)
        throw InvalidStateError("density matrix trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    check_eigenvalues_psd(es.eigenvalues());
}

PureState::PureState(DimSpec spec, Vector amplitudes)
    : spec_(std::move(spec)), v_(std::move(amplitudes)) {
    spec_.check();
    if (v_.size() != spec_.total()) throw InvalidStateError("amplitude vector size mismatch");
    if (std::abs(v_.squaredNorm() - 1.0) > tol::trace)
        throw InvalidStateError("pure state is not normalized");
}

DensityMatrix PureState::to_density() const {
    return DensityMatrix(spec_, v_ * v_.adjoint());
}

EnsembleOfStates::EnsembleOfStates(RealVector p, std::vector<DensityMatrix> s)
    : probs(std::move(p)), states(std::move(s)) {
    if (static_cast<std::size_t>(probs.size()) != states.size())
        throw ArgumentError("ensemble: probability/state count mismatch");
    if (probs.minCoeff() < -tol::trace) throw ArgumentError("ensemble: negative probability");
    if (std::abs(probs.sum() - 1.0) > tol::trace)
        throw ArgumentError("ensemble: probabilities do not sum to 1");
    for (std::size_t i = 1; i < states.size(); ++i)
        if (!(states[i].dim_spec() == states[0].dim_spec()))
            throw ArgumentError("ensemble: states carry different dim_specs");
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    long long total = static_cast<long long>(a.dim()) * b.dim();
    if (total > dim_cap())
        throw CapacityError("tensor: ambient dimension exceeds cap");
    std::vector<int> dims = a.dim_spec().dims;
    dims.insert(dims.end(), b.dim_spec().dims.begin(), b.dim_spec().dims.end());
    Matrix m = Eigen::kroneckerProduct(a.entries(), b.entries()).eval();
    return DensityMatrix(DimSpec(dims), std::move(m),
                         a.separable_by_construction() && b.separable_by_construction());
}

PureState tensor(const PureState& a, const PureState& b) {
    long long total = static_cast<long long>(a.dim()) * b.dim();
    if (total > dim_cap())
        throw CapacityError("tensor: ambient dimension exceeds cap");
    std::vector<int> dims = a.dim_spec().dims;
    dims.insert(dims.end(), b.dim_spec().dims.begin(), b.dim_spec().dims.end());
    Vector v = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
    return PureState(DimSpec(dims), std::move(v));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    if (keep.empty()) throw ArgumentError("partial_trace: empty keep set");
    const auto& dims = rho.dim_spec().dims;
    const int n = static_cast<int>(dims.size());
    std::vector<int> keep_sorted = keep;
    std::sort(keep_sorted.begin(), keep_sorted.end());
    if (std::adjacent_find(keep_sorted.begin(), keep_sorted.end()) != keep_sorted.end())
        throw ArgumentError("partial_trace: duplicate keep index");
    for (int k : keep_sorted)
        if (k < 0 || k >= n) throw ArgumentError("partial_trace: keep index out of range");

    std::vector<int> trace_out;
    for (int i = 0; i < n; ++i)
        if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), i)) trace_out.push_back(i);

    std::vector<int> kept_dims, traced_dims;
    for (int k : keep_sorted) kept_dims.push_back(dims[k]);
    for (int t : trace_out) traced_dims.push_back(dims[t]);

    const auto in_strides = strides_of(dims);
    long long dk = 1, dt = 1;
    for (int d : kept_dims) dk *= d;
    for (int d : traced_dims) dt *= d;

    // in_index(kept multi-index K, traced multi-index T)
    auto flat = [&](const std::vector<int>& kidx, const std::vector<int>& tidx) {
        long long idx = 0;
        for (std::size_t i = 0; i < keep_sorted.size(); ++i) idx += kidx[i] * in_strides[keep_sorted[i]];
        for (std::size_t i = 0; i < trace_out.size(); ++i) idx += tidx[i] * in_strides[trace_out[i]];
        return idx;
    };
    auto advance = [](std::vector<int>& idx, const std::vector<int>& d) {
        for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) {
            if (++idx[i] < d[i]) return true;
            idx[i] = 0;
        }
        return false;
    };

    Matrix out = Matrix::Zero(dk, dt == 0 ? dk : dk);
    const Matrix& in = rho.entries();
    std::vector<int> ki(keep_sorted.size(), 0);
    long long row = 0;
    do {
        std::vector<int> kj(keep_sorted.size(), 0);
        long long col = 0;
        do {
            Complex acc(0, 0);
            if (trace_out.empty()) {
                acc = in(flat(ki, {}), flat(kj, {}));
            } else {
                std::vector<int> ti(trace_out.size(), 0);
                do {
                    acc += in(flat(ki, ti), flat(kj, ti));
                } while (advance(ti, traced_dims));
            }
            out(row, col) = acc;
            ++col;
        } while (advance(kj, kept_dims));
        ++row;
    } while (advance(ki, kept_dims));

    std::vector<std::string> labels;
    if (!rho.dim_spec().labels.empty())
        for (int k : keep_sorted) labels.push_back(rho.dim_spec().labels[k]);
    return DensityMatrix(DimSpec(kept_dims, labels), std::move(out));
}

namespace {

std::vector<long long> permuted_flat_map(const std::vector<int>& dims, const std::vector<int>& perm) {
    const int n = static_cast<int>(dims.size());
    if (static_cast<int>(perm.size()) != n) throw ArgumentError("permute: wrong permutation size");
    std::vector<int> seen(n, 0);
    for (int p : perm) {
        if (p < 0 || p >= n || seen[p]++) throw ArgumentError("permute: invalid permutation");
    }
    std::vector<int> new_dims(n);
    for (int i = 0; i < n; ++i) new_dims[i] = dims[perm[i]];
    const auto in_strides = strides_of(dims);
    const auto out_dims_strides = strides_of(new_dims);
    long long total = 1;
    for (int d : dims) total *= d;
    // map[new_flat] = old_flat
    std::vector<long long> map(total);
    std::vector<int> idx(n, 0);  // multi-index in the NEW ordering
    long long flat_new = 0;
    while (true) {
        long long flat_old = 0;
        for (int i = 0; i < n; ++i) flat_old += static_cast<long long>(idx[i]) * in_strides[perm[i]];
        map[flat_new] = flat_old;
        ++flat_new;
        int i = n - 1;
        for (; i >= 0; --i) {
            if (++idx[i] < new_dims[i]) break;
            idx[i] = 0;
        }
        if (i < 0) break;
    }
    return map;
}

}  // namespace

DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<int>& perm) {
    const auto& dims = rho.dim_spec().dims;
    auto map = permuted_flat_map(dims, perm);
    const long long d = rho.dim();
    Matrix out(d, d);
    for (long long i = 0; i < d; ++i)
        for (long long j = 0; j < d; ++j) out(i, j) = rho.entries()(map[i], map[j]);
    std::vector<int> new_dims(dims.size());
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        new_dims[i] = dims[perm[i]];
        if (!rho.dim_spec().labels.empty()) labels.push_back(rho.dim_spec().labels[perm[i]]);
    }
    return DensityMatrix(DimSpec(new_dims, labels), std::move(out), rho.separable_by_construction());
}

PureState permute_subsystems(const PureState& psi, const std::vector<int>& perm) {
    const auto& dims = psi.dim_spec().dims;
    auto map = permuted_flat_map(dims, perm);
    Vector out(psi.dim());
    for (long long i = 0; i < psi.dim(); ++i) out(i) = psi.amplitudes()(map[i]);
    std::vector<int> new_dims(dims.size());
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        new_dims[i] = dims[perm[i]];
        if (!psi.dim_spec().labels.empty()) labels.push_back(psi.dim_spec().labels[perm[i]]);
    }
    return PureState(DimSpec(new_dims, labels), std::move(out));
}

DensityMatrix group_bipartite(const DensityMatrix& rho, const std::vector<int>& party_a,
                              const std::vector<int>& party_b) {
    const int n = static_cast<int>(rho.dim_spec().size());
    if (party_a.empty() || party_b.empty()) throw ArgumentError("group_bipartite: empty party");
    if (static_cast<int>(party_a.size() + party_b.size()) != n)
        throw ArgumentError("group_bipartite: parties do not partition the subsystems");
    std::vector<int> perm = party_a;
    perm.insert(perm.end(), party_b.begin(), party_b.end());
    DensityMatrix p = permute_subsystems(rho, perm);
    int da = 1, db = 1;
    for (int i : party_a) da *= rho.dim_spec().dims[i];
    for (int i : party_b) db *= rho.dim_spec().dims[i];
    return DensityMatrix(DimSpec({da, db}), p.entries(), rho.separable_by_construction());
}

PureState purify(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries());
    const RealVector& ev = es.eigenvalues();
    check_eigenvalues_psd(ev);
    std::vector<int> support;
    for (int i = 0; i < ev.size(); ++i)
        if (ev[i] > tol::clip) support.push_back(i);
    const int rank = static_cast<int>(support.size());
    const int d = rho.dim();
    Vector v = Vector::Zero(static_cast<long long>(d) * rank);
    for (int k = 0; k < rank; ++k) {
        const double amp = std::sqrt(ev[support[k]]);
        for (int m = 0; m < d; ++m) v(static_cast<long long>(m) * rank + k) = amp * es.eigenvectors()(m, support[k]);
    }
    v /= v.norm();
    return PureState(DimSpec({d, rank}), std::move(v));
}

double entropy_of_spectrum(const RealVector& eigenvalues) {
    check_eigenvalues_psd(eigenvalues);
    double s = 0.0;
    for (int i = 0; i < eigenvalues.size(); ++i) {
        double lam = eigenvalues[i];
        if (lam <= tol::clip) continue;  // 0 log 0 := 0
        s -= lam * std::log2(lam);
    }
    return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries(), Eigen::EigenvaluesOnly);
    return entropy_of_spectrum(es.eigenvalues());
}

PureState computational_basis_state(int dim, int index) {
    if (index < 0 || index >= dim) throw ArgumentError("basis state index out of range");
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return PureState(DimSpec({dim}), std::move(v));
}

PureState epr_state() {
    Vector v = Vector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return PureState(DimSpec({2, 2}), std::move(v));
}

PureState ghz_state() {
    Vector v = Vector::Zero(8);
    v(0) = v(7) = 1.0 / std::sqrt(2.0);
    return PureState(DimSpec({2, 2, 2}), std::move(v));
}

DensityMatrix cc_state() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(3, 3) = 0.5;
    return DensityMatrix(DimSpec({2, 2}), std::move(m), /*separable=*/true);
}

DensityMatrix maximally_mixed(int dim) {
    return DensityMatrix(DimSpec({dim}), Matrix::Identity(dim, dim) / double(dim),
                         /*separable=*/true);
}

DensityMatrix make_cq_state(const RealVector& probs, const std::vector<DensityMatrix>& cond_states) {
    if (static_cast<std::size_t>(probs.size()) != cond_states.size())
        throw ArgumentError("make_cq_state: probs/states length mismatch");
    EnsembleOfStates ens(probs, cond_states);  // validates
    const int da = static_cast<int>(probs.size());
    const int db = cond_states[0].dim();
    Matrix m = Matrix::Zero(da * db, da * db);
    for (int i = 0; i < da; ++i)
        m.block(i * db, i * db, db, db) = probs[i] * cond_states[i].entries();
    return DensityMatrix(DimSpec({da, db}), std::move(m), /*separable=*/true);
}

PureState trine_qubit(int i) {
    const double theta = 2.0 * M_PI * i / 3.0;
    Vector v(2);
    v(0) = 1.0 / std::sqrt(2.0);
    v(1) = std::polar(1.0 / std::sqrt(2.0), theta);
    return PureState(DimSpec({2}), std::move(v));
}

DensityMatrix make_trine() {
    RealVector p(3);
    p.setConstant(1.0 / 3.0);
    std::vector<DensityMatrix> states;
    for (int i = 0; i < 3; ++i) states.push_back(trine_qubit(i).to_density());
    return make_cq_state(p, states);
}

PureState make_ghz_epr_psi() {
    // build order [a1 b1 c1 a2 b2 a3 c2] -> target [a1 a2 a3 b1 b2 c1 c2]
    PureState built = tensor(tensor(ghz_state(), epr_state()), epr_state());
    return permute_subsystems(built, {0, 3, 5, 1, 4, 2, 6});
}

PureState make_ghz_epr_phi() {
    DimCapGuard guard(512);  // named 9-qubit example exceeds the default cap
    // build order [a1 b1 c1 a2 b2 a3 c2 b3 c3] -> target [a1 a2 a3 b1 b2 b3 c1 c2 c3]
    PureState built = tensor(tensor(tensor(ghz_state(), epr_state()), epr_state()), epr_state());
    return permute_subsystems(built, {0, 3, 5, 1, 4, 7, 2, 6, 8});
}

DensityMatrix ghz_epr_psi_rho_ac() {
    DensityMatrix full = make_ghz_epr_psi().to_density();
    DensityMatrix ac = partial_trace(full, {0, 1, 2, 5, 6});  // a1 a2 a3 c1 c2
    return group_bipartite(ac, {0, 1, 2}, {3, 4});
}

DensityMatrix ghz_epr_psi_rho_ab() {
    DensityMatrix full = make_ghz_epr_psi().to_density();
    DensityMatrix ab = partial_trace(full, {0, 1, 2, 3, 4});  // a1 a2 a3 b1 b2
    return group_bipartite(ab, {0, 1, 2}, {3, 4});
}

DensityMatrix ghz_epr_phi_rho_ac() {
    DimCapGuard guard(512);
    DensityMatrix full = make_ghz_epr_phi().to_density();
    DensityMatrix ac = partial_trace(full, {0, 1, 2, 6, 7, 8});  // a1 a2 a3 c1 c2 c3
    return group_bipartite(ac, {0, 1, 2}, {3, 4, 5});
}

DensityMatrix ghz_epr_phi_rho_ab() {
    DimCapGuard guard(512);
    DensityMatrix full = make_ghz_epr_phi().to_density();
    DensityMatrix ab = partial_trace(full, {0, 1, 2, 3, 4, 5});
    return group_bipartite(ab, {0, 1, 2}, {3, 4, 5});
}

BipartiteSplit ghz_epr_psi_ac_split() {
    // rho_AC = EPR_{a3 c2} (x) [CC_{a1 c1} (x) I_{a2}/2]
    DensityMatrix pure_part = epr_state().to_density();  // [a3 | c2]
    // separable factor across (a1 a2 | c1): permute CC_{a1 c1} (x) I_{a2}/2
    DensityMatrix cc_mix = tensor(cc_state(), maximally_mixed(2));  // [a1 c1 a2]
    DensityMatrix sep = group_bipartite(cc_mix, {0, 2}, {1});       // [a1 a2 | c1] -> [4, 2]
    return {pure_part, sep.flagged_separable()};
}

BipartiteSplit ghz_epr_phi_ac_split() {
    // rho_AC = EPR_{a3 c2} (x) [CC_{a1 c1} (x) I_{a2}/2 (x) I_{c3}/2]
    DensityMatrix pure_part = epr_state().to_density();
    DensityMatrix m = tensor(tensor(cc_state(), maximally_mixed(2)), maximally_mixed(2));
    // order [a1 c1 a2 c3] -> (a1 a2 | c1 c3) -> [4, 4]
    DensityMatrix sep = group_bipartite(m, {0, 2}, {1, 3});
    return {pure_part, sep.flagged_separable()};
}

DensityMatrix make_one_way_mcs(const RealVector& probs, const std::vector<PureState>& a_states,
                               const Matrix& overlaps) {
    const int n = static_cast<int>(probs.size());
    if (static_cast<int>(a_states.size()) != n || overlaps.rows() != n || overlaps.cols() != n)
        throw ArgumentError("make_one_way_mcs: inconsistent lengths");
    if (std::abs(probs.sum() - 1.0) > tol::trace || probs.minCoeff() < -tol::trace)
        throw ArgumentError("make_one_way_mcs: invalid probability vector");
    const int da = a_states[0].dim();
    Matrix m = Matrix::Zero(da * n, da * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Complex w = std::sqrt(probs[i] * probs[j]) * overlaps(i, j);
            // |a_i><a_j| (x) |i><j|
            for (int r = 0; r < da; ++r)
                for (int c = 0; c < da; ++c)
                    m(r * n + i, c * n + j) +=
                        w * a_states[i].amplitudes()(r) * std::conj(a_states[j].amplitudes()(c));
        }
    }
    try {
        return DensityMatrix(DimSpec({da, n}), std::move(m));
    } catch (const InvalidStateError& e) {
        throw ArgumentError(std::string("make_one_way_mcs: overlaps do not form a state: ") +
                            e.what());
    }
}

DensityMatrix random_density(const DimSpec& spec, int rank, std::uint64_t seed) {
    const int d = spec.total();
    if (rank < 1 || rank > d) throw ArgumentError("random_density: invalid rank");
    auto rng = make_rng(seed);
    Matrix g = ginibre(d, rank, rng);
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    m = (m + m.adjoint().eval()) / 2.0;
    return DensityMatrix(spec, std::move(m));
}

PureState random_pure(const DimSpec& spec, std::uint64_t seed) {
    auto rng = make_rng(seed);
    Matrix g = ginibre(spec.total(), 1, rng);
    Vector v = g.col(0);
    v /= v.norm();
    return PureState(spec, std::move(v));
}

RealVector random_prob_vector(int n, std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    RealVector p(n);
    for (int i = 0; i < n; ++i) p[i] = unif(rng);
    p /= p.sum();
    return p;
}

DensityMatrix random_separable(int dim_a, int dim_b, int terms, std::uint64_t seed) {
    if (terms < 1) throw ArgumentError("random_separable: terms must be >= 1");
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    RealVector q(terms);
    for (int k = 0; k < terms; ++k) q[k] = unif(rng);
    q /= q.sum();
    Matrix m = Matrix::Zero(dim_a * dim_b, dim_a * dim_b);
    for (int k = 0; k < terms; ++k) {
        Matrix ga = ginibre(dim_a, dim_a, rng);
        Matrix gb = ginibre(dim_b, dim_b, rng);
        Matrix ra = ga * ga.adjoint();
        ra /= ra.trace().real();
        Matrix rb = gb * gb.adjoint();
        rb /= rb.trace().real();
        m += q[k] * Eigen::kroneckerProduct(ra, rb).eval();
    }
    m = (m + m.adjoint().eval()) / 2.0;
    return DensityMatrix(DimSpec({dim_a, dim_b}), std::move(m), /*separable=*/true);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (n + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace qcorr
