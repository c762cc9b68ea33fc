#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace ncqed {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using SparseOperator = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

enum class Atom { Ground = 0, Excited = 1 };

char atom_label(Atom atom);

/**
 * Truncated two-level atom (x) Fock space.
 *
 * Basis ordering is atom-major: index = atom_bit * (n_max + 1) + m with
 * atom_bit 0 for |g> and 1 for |e>. Every CSV column and every population
 * table in the library follows this ordering.
 */
class Space
{
public:
    explicit Space(int n_max);

    int n_max() const { return m_n_max; }
    int levels() const { return m_n_max + 1; }
    int dim() const { return 2 * (m_n_max + 1); }

    int index(Atom atom, int m) const;
    std::pair<Atom, int> label(int index) const;

    bool operator==(const Space&) const = default;

private:
    int m_n_max;
};

/// Throws ConfigError when n_max < 2.
Space build_space(int n_max);

struct Operators
{
    Operator a;
    Operator a_dag;
    Operator n;
    Operator sigma_plus;
    Operator sigma_minus;
    Operator sigma_z;
    Operator identity;
};

Operators build_operators(const Space& space);

/// Normalized pure state on a Space.
class QuantumState
{
public:
    QuantumState(Space space, StateVector amplitudes);

    static QuantumState basis(const Space& space, Atom atom, int m);

    const Space& space() const { return m_space; }
    const StateVector& amplitudes() const { return m_amplitudes; }
    double norm_squared() const { return m_amplitudes.squaredNorm(); }

private:
    Space m_space;
    StateVector m_amplitudes;
};

/// Joint-basis probabilities P_{x,m} plus atomic marginals.
struct Populations
{
    std::vector<double> ground;
    std::vector<double> excited;
    double p_g = 0.0;
    double p_e = 0.0;
    double mean_photons = 0.0;

    double at(Atom atom, int m) const;
    double total() const { return p_g + p_e; }
    /// Population with photon number m >= m_min, summed over both atomic states.
    double tail(int m_min) const;
};

Populations populations(const Space& space, const StateVector& psi);
Populations populations(const QuantumState& psi);

/// L-infinity distance between two population tables of the same space.
double population_distance(const Populations& lhs, const Populations& rhs);

/// psi^dagger O psi. Throws std::invalid_argument on dimension mismatch.
Complex expectation(const Operator& op, const QuantumState& psi);

/// Real part of the expectation of a Hermitian operator; throws if the
/// imaginary residual exceeds 1e-10.
double expectation_real(const Operator& op, const QuantumState& psi);

/// max|H - H^dagger| relative to max(1, max|H|).
double hermiticity_defect(const Operator& op);

/// Throws std::logic_error when hermiticity_defect(op) >= 1e-12.
void require_hermitian(const Operator& op, const char* what);

/**
 * H(t) = sum_j c_j(t) M_j (+ conj(c_j(t)) M_j^dagger for paired terms).
 *
 * The matrices are fixed at construction and the coefficient callback is a
 * pure function of time, so one instance can be shared between threads.
 * A missing callback means every coefficient is 1.
 */
class TimeDependentOperator
{
public:
    using CoefficientFn = std::function<void(double t, std::span<Complex> out)>;
    using Builder = std::function<Operator(double t)>;

    struct Term
    {
        SparseOperator matrix;
        bool add_adjoint = false;
    };

    TimeDependentOperator(int dim, std::vector<Term> terms, CoefficientFn coefficients = {});

    static TimeDependentOperator constant(const Operator& op);
    static TimeDependentOperator from_builder(int dim, Builder builder);

    int dim() const { return m_dim; }
    std::size_t term_count() const { return m_terms.size(); }

    Operator at(double t) const;

    /// out = H(t) in; both spans have length dim().
    void apply(double t, std::span<const Complex> in, std::span<Complex> out) const;

private:
    int m_dim;
    std::vector<Term> m_terms;
    std::vector<SparseOperator> m_adjoints;
    CoefficientFn m_coefficients;
    Builder m_builder;
};

SparseOperator to_sparse(const Operator& op);

} // namespace ncqed
