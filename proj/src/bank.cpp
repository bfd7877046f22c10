#include "mfc/bank.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace mfc {
namespace {

StateSpaceSystem scalar_delayed(double a, double a_tau, double b, double tau,
                                std::string label, std::string description) {
    StateSpaceSystem sys;
    sys.a_matrix = Matrix::Constant(1, 1, a);
    sys.b_vector = Vector::Constant(1, b);
    sys.c_vector = RowVector::Constant(1, 1.0);
    sys.state_delay = StateDelay{Matrix::Constant(1, 1, a_tau), tau};
    sys.label = std::move(label);
    sys.description = std::move(description);
    return sys;
}

} // namespace

std::vector<StateSpaceSystem> builtin_bank() {
    std::vector<StateSpaceSystem> bank;
    bank.reserve(10);

    bank.push_back(make_first_order(
        50.0, 50.0, "sigma1",
        "50/(s+50): first-order lag, time constant 0.02 s; step rises monotonically"));
    bank.push_back(make_second_order(
        144.0, 6400.0, 0.0, 6400.0, "sigma2",
        "6400/(s^2+144s+6400): second-order, wn=80, zeta=0.9; step rises with no undershoot"));
    bank.push_back(make_second_order(
        160.0, 4800.0, -32.0, 4800.0, "sigma3",
        "4800(1-s/150)/((s+40)(s+120)): right-half-plane zero at 150; step dips negative first"));
    bank.push_back(make_second_order(
        150.0, 5000.0, -62.5, 5000.0, "sigma4",
        "5000(1-s/80)/((s+50)(s+100)): right-half-plane zero at 80; step dips negative first"));
    bank.push_back(make_second_order(
        90.0, 10000.0, 0.0, 10000.0, "sigma5",
        "10000/(s^2+90s+10000): second-order, wn=100, zeta=0.45; step overshoots then rings down"));
    bank.push_back(make_first_order(
        8.0, 8.0, "sigma6",
        "8/(s+8): first-order lag, time constant 0.125 s; step rises monotonically"));
    bank.push_back(make_second_order(
        20.4, 144.0, 0.0, 144.0, "sigma7",
        "144/(s^2+20.4s+144): second-order, wn=12, zeta=0.85; step rises with slight overshoot"));
    bank.push_back(make_second_order(
        17.0, 60.0, -4.0, 60.0, "sigma8",
        "60(1-s/15)/((s+5)(s+12)): right-half-plane zero at 15; slow step with initial undershoot"));
    bank.push_back(scalar_delayed(
        -4.0, -2.0, 6.0, kTau1, "sigma1td",
        "x' = -4x - 2x(t-tau) + 6u: scalar delayed state, stable for every tau (4 > 2)"));

    StateSpaceSystem td2;
    td2.a_matrix = Matrix(2, 2);
    td2.a_matrix << 0.0, 1.0,
                    -49.0, -11.2;
    Matrix a_tau = Matrix::Zero(2, 2);
    a_tau(1, 0) = -12.0;
    td2.b_vector = Vector(2);
    td2.b_vector << 0.0, 61.0;
    td2.c_vector = RowVector(2);
    td2.c_vector << 1.0, 0.0;
    td2.state_delay = StateDelay{a_tau, kTau3};
    td2.label = "sigma2td";
    td2.description =
        "x'' = -49x - 11.2x' - 12x(t-tau) + 61u: delayed stiffness, stable for every tau "
        "(|s^2+11.2s+49| >= 49 > 12 on the imaginary axis)";
    bank.push_back(std::move(td2));

    for (const auto& sys : bank) {
        sys.validate();
    }
    return bank;
}

int builtin_bank_index(const std::string& label) {
    const auto bank = builtin_bank();
    for (std::size_t i = 0; i < bank.size(); ++i) {
        if (bank[i].label == label) {
            return static_cast<int>(i);
        }
    }
    throw ConfigError("unknown bank label: " + label);
}

bool has_rhp_zero(const StateSpaceSystem& sys) {
    // Transmission zeros are the finite generalized eigenvalues of the
    // Rosenbrock pencil ([A B; C 0], diag(I, 0)).
    const Eigen::Index n = sys.order();
    Matrix pencil = Matrix::Zero(n + 1, n + 1);
    pencil.topLeftCorner(n, n) = sys.a_matrix;
    pencil.topRightCorner(n, 1) = sys.b_vector;
    pencil.bottomLeftCorner(1, n) = sys.c_vector;
    Matrix mass = Matrix::Zero(n + 1, n + 1);
    mass.topLeftCorner(n, n).setIdentity();

    Eigen::GeneralizedEigenSolver<Matrix> solver(pencil, mass, false);
    const auto& alphas = solver.alphas();
    const auto& betas = solver.betas();
    for (Eigen::Index i = 0; i < alphas.size(); ++i) {
        if (std::abs(betas(i)) < 1e-9) {
            continue; // infinite eigenvalue, not a finite zero
        }
        const auto zero = alphas(i) / betas(i);
        if (zero.real() > 1e-9) {
            return true;
        }
    }
    return false;
}

double dominant_time_constant(const StateSpaceSystem& sys) {
    // For delayed entries the DC-equivalent A + A_tau approximates the
    // long-horizon decay; exact delayed modes are transcendental.
    Matrix a = sys.a_matrix;
    if (sys.state_delay) {
        a += sys.state_delay->a_tau;
    }
    const Eigen::EigenSolver<Matrix> solver(a, false);
    double slowest = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        slowest = std::max(slowest, solver.eigenvalues()(i).real());
    }
    if (slowest >= 0.0) {
        throw ConfigError("dominant_time_constant requires a stable system: " + sys.label);
    }
    return -1.0 / slowest;
}

} // namespace mfc
