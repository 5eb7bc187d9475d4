#pragma once

#include <string>
#include <variant>

#include "dyson/common.hpp"
#include "dyson/tridiag.hpp"

namespace dyson {

struct Constant {
  Real value = 1.0;
};
/// Density proportional to v^(alpha-1) e^(-rate v).
struct GammaLaw {
  Real alpha = 1.0;
  Real rate = 1.0;
};
/// Value `light` with probability p, otherwise `heavy`.
struct TwoPoint {
  Real light = 1.0;
  Real heavy = 2.0;
  Real p = 0.5;
};
/// Centred normal site energies.
struct GaussianPotential {
  Real variance = 1.0;
};

using DisorderLaw = std::variant<Constant, GammaLaw, TwoPoint, GaussianPotential>;

/// Throws ParameterError unless every parameter is in range.
void validate(const DisorderLaw& law);
Real draw(const DisorderLaw& law, Rng& rng);
Real mean(const DisorderLaw& law);
/// E[log v]; not defined for GaussianPotential.
Real mean_log(const DisorderLaw& law);
std::string describe(const DisorderLaw& law);

enum class ChainKind { TypeI, TypeII, Anderson };

struct ChainSpec {
  ChainKind kind = ChainKind::TypeI;
  Eigen::Index n_masses = 1;
  DisorderLaw law = Constant{};
  Real spring_k = 1.0;
  Seed seed = 0;
};

/// One draw of a chain.
///
/// lambdas[i] holds the (i+1)-th spring-to-mass ratio in interleaved order,
/// K_1/m_1, K_1/m_2, K_2/m_2, K_2/m_3, ..., and has length 2N-1: the last
/// entry K/m_N belongs to a wall spring that only fixed boundaries use.
/// TypeII fills masses; Anderson fills potentials and leaves lambdas empty.
struct ChainRealization {
  RealVector lambdas;
  RealVector masses;
  RealVector potentials;
  ChainSpec spec;

  Eigen::Index n() const { return spec.n_masses; }
};

ChainRealization realize(const ChainSpec& spec);

/// (2N-1) x (2N-1) antisymmetric matrix with off-diagonals sqrt(lambda).
AntisymTridiag<Real> lambda_matrix(const ChainRealization& r);

/// N x N matrix A of the equations of motion u'' = A u, free ends.
Tridiag<Real> dynamical_matrix(const ChainRealization& r);

/// Symmetric form of -A; its eigenvalues are the squared frequencies.
SymTridiag<Real> squared_frequency_matrix(const ChainRealization& r);

/// Symmetric form of the TypeII matrix with both end masses tied to walls
/// by springs K: diagonal 2K/m_j, off-diagonal -K/sqrt(m_j m_{j+1}).
SymTridiag<Real> fixed_end_matrix(const ChainRealization& r);

/// Tight-binding Hamiltonian with zero diagonal and hoppings sqrt(lambda)
/// on 2N-1 sites. Same spectrum as i times lambda_matrix.
SymTridiag<Real> anderson_hopping(const ChainSpec& spec);

}  // namespace dyson
