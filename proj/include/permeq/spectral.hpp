#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "permeq/linalg.hpp"
#include "permeq/perm.hpp"

namespace permeq {

enum class Field { real, complex };
std::string to_string(Field f);
Field parse_field(const std::string& s);

// Eigenvalue zeta_l^m = exp(2 pi i m / l), primitive l-th root; (1,1) stands for the eigenvalue 1.
struct ComplexBlock {
  int l = 1, m = 1;
  int size = 0;    // d_l
  int offset = 0;  // first column in the grouped basis
  cdouble eigenvalue() const;
};

enum class RealKind { real_plus, real_minus, complex_pair };
std::string to_string(RealKind k);

struct RealBlock {
  RealKind kind = RealKind::real_plus;
  int l = 1, m = 1;  // for pairs, the representative with 1/2 < m/l < 1
  int size = 0;      // d_l
  int offset = 0;    // first row/column in the Q basis
  int dim() const { return kind == RealKind::complex_pair ? 2 * size : size; }
  // Rotation appearing in Q^T P Q for this block: exp(2 pi i (l-m)/l) for pairs, +-1 otherwise.
  cdouble rotation() const;
};

struct BlockSpectrum {
  int n = 0;
  int k = 0;
  std::vector<int> cycle_lengths;
  std::map<int, std::int64_t> multiplicities;  // l -> d_l
  std::vector<ComplexBlock> complex_blocks;
  std::vector<RealBlock> real_blocks;

  std::int64_t d(int l) const;
};

int euler_phi(int l);
std::vector<int> divisors(int n);

BlockSpectrum eigen_multiplicities(const CycleDecomposition& c);
BlockSpectrum spectrum_from_lengths(const std::vector<int>& lengths);

// sum over l of phi(l) * d_l^2
std::int64_t commutant_dimension(const CycleDecomposition& c);
std::int64_t commutant_dimension(const BlockSpectrum& s);

// 0-based labels in the order used by T1: each cycle starts at its smallest label and walks sigma^{-1},
// so T1^T P T1 is a direct sum of the circulants C_l with C[0][l-1] = C[i][i-1] = 1.
std::vector<int> cycle_sort_order(const Permutation& p);
// Column j of T1 is e_{order[j]}.
IntMatrix cycle_sort_matrix(const Permutation& p);

struct ComplexBaseChange {
  ComplexMatrix matrix;   // T = T1 T2 T3
  ComplexMatrix inverse;
  BlockSpectrum layout;
  IntMatrix t1;
  ComplexMatrix t2;       // direct sum of Vandermonde blocks V[j][k] = zeta^{jk}, not normalized
  IntMatrix t3;           // grouping permutation
  std::vector<cdouble> step2_diagonal;  // diagonal of (T1 T2)^{-1} P (T1 T2)
};

struct RealBaseChange {
  Matrix matrix;   // orthogonal Q
  Matrix inverse;  // Q^T
  BlockSpectrum layout;
  Matrix q1;                  // per-cycle real Fourier basis in the T1 ordering
  std::vector<int> grouping;  // column j of (T1 Q1) that becomes column i of Q is grouping[i]
};

ComplexBaseChange complex_base_change(const Permutation& p);
RealBaseChange real_base_change(const Permutation& p);

// Expected conjugated forms: diag of grouped eigenvalues, and Id (+) -Id (+) R(rotation) blocks.
ComplexMatrix complex_block_form(const BlockSpectrum& s);
Matrix real_block_form(const BlockSpectrum& s);

}  // namespace permeq
