#include "ncqed/hilbert.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "ncqed/errors.hpp"

namespace ncqed {

namespace {

constexpr std::size_t kMaxTerms = 32;

// out += c * M * in for a row-major sparse M.
void accumulate(const SparseOperator& m, Complex c, const Complex* in, Complex* out)
{
    const auto* outer = m.outerIndexPtr();
    const auto* inner = m.innerIndexPtr();
    const auto* values = m.valuePtr();
    for (Eigen::Index row = 0; row < m.outerSize(); ++row) {
        Complex sum = 0.0;
        for (auto k = outer[row]; k < outer[row + 1]; ++k)
            sum += values[k] * in[inner[k]];
        out[row] += c * sum;
    }
}

} // namespace

char atom_label(Atom atom)
{
    return atom == Atom::Ground ? 'g' : 'e';
}

Space::Space(int n_max) : m_n_max(n_max)
{
    if (n_max < 2)
        throw ConfigError("n_max must be >= 2, got " + std::to_string(n_max));
}

int Space::index(Atom atom, int m) const
{
    if (m < 0 || m > m_n_max)
        throw std::out_of_range("photon number " + std::to_string(m) + " outside 0.." +
                                std::to_string(m_n_max));
    return static_cast<int>(atom) * levels() + m;
}

std::pair<Atom, int> Space::label(int index) const
{
    if (index < 0 || index >= dim())
        throw std::out_of_range("basis index out of range");
    return {index < levels() ? Atom::Ground : Atom::Excited, index % levels()};
}

Space build_space(int n_max)
{
    return Space(n_max);
}

Operators build_operators(const Space& space)
{
    const int levels = space.levels();
    Eigen::MatrixXcd a_field = Eigen::MatrixXcd::Zero(levels, levels);
    for (int m = 1; m < levels; ++m)
        a_field(m - 1, m) = std::sqrt(static_cast<double>(m));

    Eigen::Matrix2cd sp = Eigen::Matrix2cd::Zero();
    sp(1, 0) = 1.0; // |e><g|
    Eigen::Matrix2cd sz = Eigen::Matrix2cd::Zero();
    sz(0, 0) = -1.0;
    sz(1, 1) = 1.0;

    const Eigen::MatrixXcd field_id = Eigen::MatrixXcd::Identity(levels, levels);
    const Eigen::Matrix2cd atom_id = Eigen::Matrix2cd::Identity();

    // Atom-major ordering: atom index is the slow (outer) factor.
    auto kron = [&](const Eigen::Matrix2cd& atom, const Eigen::MatrixXcd& field) {
        Operator out = Operator::Zero(2 * levels, 2 * levels);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                out.block(i * levels, j * levels, levels, levels) = atom(i, j) * field;
        return out;
    };

    Operators ops;
    ops.a = kron(atom_id, a_field);
    ops.a_dag = ops.a.adjoint();
    ops.n = ops.a_dag * ops.a;
    ops.sigma_plus = kron(sp, field_id);
    ops.sigma_minus = ops.sigma_plus.adjoint();
    ops.sigma_z = kron(sz, field_id);
    ops.identity = Operator::Identity(space.dim(), space.dim());
    return ops;
}

QuantumState::QuantumState(Space space, StateVector amplitudes)
    : m_space(space), m_amplitudes(std::move(amplitudes))
{
    if (m_amplitudes.size() != m_space.dim())
        throw std::invalid_argument("state dimension does not match space");
    if (std::abs(m_amplitudes.squaredNorm() - 1.0) > 1e-8)
        throw std::invalid_argument("state is not normalized");
}

QuantumState QuantumState::basis(const Space& space, Atom atom, int m)
{
    StateVector v = StateVector::Zero(space.dim());
    v(space.index(atom, m)) = 1.0;
    return QuantumState(space, std::move(v));
}

double Populations::at(Atom atom, int m) const
{
    const auto& side = atom == Atom::Ground ? ground : excited;
    return side.at(static_cast<std::size_t>(m));
}

double Populations::tail(int m_min) const
{
    double sum = 0.0;
    for (std::size_t m = std::max(0, m_min); m < ground.size(); ++m)
        sum += ground[m] + excited[m];
    return sum;
}

Populations populations(const Space& space, const StateVector& psi)
{
    if (psi.size() != space.dim())
        throw std::invalid_argument("state dimension does not match space");
    Populations p;
    const int levels = space.levels();
    p.ground.resize(levels);
    p.excited.resize(levels);
    for (int m = 0; m < levels; ++m) {
        p.ground[m] = std::norm(psi(m));
        p.excited[m] = std::norm(psi(levels + m));
        p.p_g += p.ground[m];
        p.p_e += p.excited[m];
        p.mean_photons += m * (p.ground[m] + p.excited[m]);
    }
    return p;
}

Populations populations(const QuantumState& psi)
{
    return populations(psi.space(), psi.amplitudes());
}

double population_distance(const Populations& lhs, const Populations& rhs)
{
    if (lhs.ground.size() != rhs.ground.size())
        throw std::invalid_argument("population tables have different truncation");
    double d = 0.0;
    for (std::size_t m = 0; m < lhs.ground.size(); ++m) {
        d = std::max(d, std::abs(lhs.ground[m] - rhs.ground[m]));
        d = std::max(d, std::abs(lhs.excited[m] - rhs.excited[m]));
    }
    return d;
}

Complex expectation(const Operator& op, const QuantumState& psi)
{
    const auto& v = psi.amplitudes();
    if (op.rows() != v.size() || op.cols() != v.size())
        throw std::invalid_argument("operator/state dimension mismatch");
    return v.dot(op * v);
}

double expectation_real(const Operator& op, const QuantumState& psi)
{
    const Complex value = expectation(op, psi);
    if (std::abs(value.imag()) > 1e-10)
        throw std::logic_error("expectation of non-Hermitian operator has imaginary part " +
                               std::to_string(value.imag()));
    return value.real();
}

double hermiticity_defect(const Operator& op)
{
    if (op.size() == 0)
        return 0.0;
    const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
    return (op - op.adjoint()).cwiseAbs().maxCoeff() / scale;
}

void require_hermitian(const Operator& op, const char* what)
{
    if (!(hermiticity_defect(op) < 1e-12))
        throw std::logic_error(std::string(what) + " is not Hermitian");
}

SparseOperator to_sparse(const Operator& op)
{
    return op.sparseView(0.0, 0.0);
}

TimeDependentOperator::TimeDependentOperator(int dim, std::vector<Term> terms,
                                             CoefficientFn coefficients)
    : m_dim(dim), m_terms(std::move(terms)), m_coefficients(std::move(coefficients))
{
    if (m_terms.size() > kMaxTerms)
        throw std::invalid_argument("too many operator terms");
    m_adjoints.reserve(m_terms.size());
    for (auto& term : m_terms) {
        if (term.matrix.rows() != dim || term.matrix.cols() != dim)
            throw std::invalid_argument("term dimension mismatch");
        term.matrix.makeCompressed();
        SparseOperator adj = term.add_adjoint ? SparseOperator(term.matrix.adjoint())
                                              : SparseOperator(dim, dim);
        adj.makeCompressed();
        m_adjoints.push_back(std::move(adj));
    }
}

TimeDependentOperator TimeDependentOperator::constant(const Operator& op)
{
    std::vector<Term> terms;
    terms.push_back({to_sparse(op), false});
    return TimeDependentOperator(static_cast<int>(op.rows()), std::move(terms));
}

TimeDependentOperator TimeDependentOperator::from_builder(int dim, Builder builder)
{
    TimeDependentOperator out(dim, {});
    out.m_builder = std::move(builder);
    return out;
}

Operator TimeDependentOperator::at(double t) const
{
    if (m_builder)
        return m_builder(t);
    std::array<Complex, kMaxTerms> c;
    std::fill(c.begin(), c.end(), Complex(1.0));
    if (m_coefficients)
        m_coefficients(t, std::span<Complex>(c.data(), m_terms.size()));
    Operator h = Operator::Zero(m_dim, m_dim);
    for (std::size_t j = 0; j < m_terms.size(); ++j) {
        h += c[j] * Operator(m_terms[j].matrix);
        if (m_terms[j].add_adjoint)
            h += std::conj(c[j]) * Operator(m_adjoints[j]);
    }
    return h;
}

void TimeDependentOperator::apply(double t, std::span<const Complex> in,
                                  std::span<Complex> out) const
{
    if (m_builder) {
        Eigen::Map<const StateVector> x(in.data(), m_dim);
        Eigen::Map<StateVector> y(out.data(), m_dim);
        y.noalias() = m_builder(t) * x;
        return;
    }
    std::array<Complex, kMaxTerms> c;
    std::fill(c.begin(), c.begin() + static_cast<long>(m_terms.size()), Complex(1.0));
    if (m_coefficients)
        m_coefficients(t, std::span<Complex>(c.data(), m_terms.size()));
    std::fill(out.begin(), out.end(), Complex(0.0));
    for (std::size_t j = 0; j < m_terms.size(); ++j) {
        accumulate(m_terms[j].matrix, c[j], in.data(), out.data());
        if (m_terms[j].add_adjoint)
            accumulate(m_adjoints[j], std::conj(c[j]), in.data(), out.data());
    }
}

} // namespace ncqed
