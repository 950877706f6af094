#pragma once

#include <stdexcept>
#include <vector>

#include "cospec/matrix.hpp"

namespace cospec {

// Default relative tolerance for floating-point checks. Double precision with
// well-conditioned desk-scale matrices; overridable per call.
inline constexpr double kDefaultTol = 1e-9;

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Polar/singular data of a square complex matrix L = left_frame * diag(singular_values) * right_frame.
// Values sorted non-increasing; frames unitary.
struct SingularData {
  std::vector<double> singular_values;
  CMat left_frame;
  CMat right_frame;  // stored as the factor on the right, i.e. L = U * S * right_frame

  double reconstruction_residual(const CMat& L) const;
};

struct EigenData {
  std::vector<cdouble> eigenvalues;  // sorted by |.| desc, ties by ascending argument
  CMat eigenvectors;                 // unit columns, matching order
};

SingularData singular_decomposition(const CMat& L);
EigenData eigen_decomposition(const CMat& B);

double operator_norm(const CMat& m);     // largest singular value
double smallest_singular(const CMat& m);

// Thin QR of a tall matrix (rows >= cols): Q has orthonormal columns,
// diag entries returned as |r_ii|.
void thin_qr(const CMat& in, CMat& q, std::vector<double>& log_abs_diag);

// Orthonormal basis of the column span (rank decided at tol * largest sv).
CMat orthonormal_columns(const CMat& in, double tol = 1e-12);

double vector_norm(const std::vector<cdouble>& v);

}  // namespace cospec
