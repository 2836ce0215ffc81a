#pragma once

#include <Eigen/Dense>
#include <filesystem>

namespace epiwave {

// Fitted principal-component model for one coefficient band.
// components has orthonormal rows; eigenvalues are the matching sample
// variances, non-increasing, clamped at zero.
struct PcaModel {
  Eigen::VectorXd mean;         // d
  Eigen::MatrixXd components;   // k x d
  Eigen::VectorXd eigenvalues;  // k
  int k = 0;
  int d = 0;
};

// Covariance uses the n-1 divisor. For wide matrices (d > n) the n x n Gram
// matrix is diagonalized and its eigenvectors mapped back; the contract is
// the eigen-residual, not the method. Sign convention: the first entry of
// each component with magnitude > 1e-12 is positive.
PcaModel pca_fit(const Eigen::MatrixXd& rows, int k);

// scores = (rows - mean) * components^T
Eigen::MatrixXd pca_transform(const PcaModel& model, const Eigen::MatrixXd& rows);

void save_pca_model(const std::filesystem::path& file, const PcaModel& model);
PcaModel load_pca_model(const std::filesystem::path& file);

}  // namespace epiwave
