#include "epiwave/pca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "epiwave/errors.hpp"
#include "epiwave/text_io.hpp"

namespace epiwave {

namespace {

// Eigenvalues below this fraction of the largest are treated as rank
// deficiency when mapping Gram eigenvectors back to feature space.
constexpr double kRankTol = 1e-12;

void apply_sign_convention(Eigen::MatrixXd& components) {
  for (Eigen::Index r = 0; r < components.rows(); ++r) {
    for (Eigen::Index c = 0; c < components.cols(); ++c) {
      const double v = components(r, c);
      if (std::abs(v) > 1e-12) {
        if (v < 0) components.row(r) = -components.row(r);
        break;
      }
    }
  }
}

// Deterministic completion of near-null components: walk the identity basis,
// project out the span of the rows already chosen, keep the first candidate
// with usable norm.
Eigen::VectorXd complete_component(const Eigen::MatrixXd& existing, Eigen::Index n_existing,
                                   Eigen::Index d) {
  for (Eigen::Index c = 0; c < d; ++c) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v(c) = 1.0;
    for (Eigen::Index r = 0; r < n_existing; ++r) {
      v -= existing.row(r).dot(v) * existing.row(r).transpose();
    }
    const double norm = v.norm();
    if (norm > 1e-6) return v / norm;
  }
  throw RankError("could not complete an orthonormal basis");
}

}  // namespace

PcaModel pca_fit(const Eigen::MatrixXd& rows, int k) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index d = rows.cols();
  if (n < 2) throw RankError("pca_fit needs at least 2 rows, got " + std::to_string(n));
  if (k < 1 || k > std::min<Eigen::Index>(d, n - 1)) {
    throw RankError("k=" + std::to_string(k) + " outside [1, min(d=" + std::to_string(d) +
                    ", n-1=" + std::to_string(n - 1) + ")]");
  }
  if (!rows.allFinite()) throw NonFiniteInput("pca_fit input contains NaN or Inf");

  PcaModel model;
  model.k = k;
  model.d = static_cast<int>(d);
  model.mean = rows.colwise().mean();

  const Eigen::MatrixXd centered = rows.rowwise() - model.mean.transpose();
  const double divisor = static_cast<double>(n - 1);

  model.components.resize(k, d);
  model.eigenvalues.resize(k);

  if (d <= n) {
    // Direct route: diagonalize the d x d covariance.
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / divisor;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) {
      throw ConvergenceError(static_cast<std::uint64_t>(d));
    }
    // Eigen returns ascending order; take the top k from the back.
    for (int j = 0; j < k; ++j) {
      const Eigen::Index src = d - 1 - j;
      model.eigenvalues(j) = std::max(solver.eigenvalues()(src), 0.0);
      model.components.row(j) = solver.eigenvectors().col(src).transpose();
    }
  } else {
    // Gram route: the nonzero spectrum of X'X/(n-1) and XX'/(n-1) coincide;
    // eigenvectors map back through X' u / sqrt((n-1) * lambda).
    const Eigen::MatrixXd gram = (centered * centered.transpose()) / divisor;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) {
      throw ConvergenceError(static_cast<std::uint64_t>(n));
    }
    const double lambda_max = std::max(solver.eigenvalues()(n - 1), 0.0);
    for (int j = 0; j < k; ++j) {
      const Eigen::Index src = n - 1 - j;
      const double lambda = std::max(solver.eigenvalues()(src), 0.0);
      model.eigenvalues(j) = lambda;
      if (lambda > kRankTol * std::max(lambda_max, 1.0)) {
        model.components.row(j) =
            (centered.transpose() * solver.eigenvectors().col(src)).transpose() /
            std::sqrt(divisor * lambda);
      } else {
        model.eigenvalues(j) = 0.0;
        model.components.row(j) = complete_component(model.components, j, d).transpose();
      }
    }
  }

  apply_sign_convention(model.components);
  return model;
}

Eigen::MatrixXd pca_transform(const PcaModel& model, const Eigen::MatrixXd& rows) {
  if (rows.cols() != model.d) {
    throw DimensionMismatch("pca_transform expects " + std::to_string(model.d) +
                            " columns, got " + std::to_string(rows.cols()));
  }
  if (rows.rows() == 0) return Eigen::MatrixXd(0, model.k);
  return (rows.rowwise() - model.mean.transpose()) * model.components.transpose();
}

void save_pca_model(const std::filesystem::path& file, const PcaModel& model) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << "epiwave-pca v1\n";
  out << model.k << ',' << model.d << '\n';
  auto write_row = [&out](const double* values, Eigen::Index count) {
    for (Eigen::Index i = 0; i < count; ++i) {
      if (i) out << ',';
      out << fmt_full(values[i]);
    }
    out << '\n';
  };
  write_row(model.mean.data(), model.mean.size());
  write_row(model.eigenvalues.data(), model.eigenvalues.size());
  for (int r = 0; r < model.k; ++r) {
    const Eigen::VectorXd row = model.components.row(r);
    write_row(row.data(), row.size());
  }
}

PcaModel load_pca_model(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read " + file.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != "epiwave-pca v1") {
    throw IoError("not a pca model file: " + file.string());
  }
  if (!std::getline(in, line)) throw IoError("truncated pca model: " + file.string());
  const auto dims = split(trim(line), ',');
  if (dims.size() != 2) throw IoError("bad dimension line in " + file.string());

  PcaModel model;
  model.k = static_cast<int>(parse_int(dims[0]));
  model.d = static_cast<int>(parse_int(dims[1]));

  auto read_row = [&](Eigen::Index expect) {
    if (!std::getline(in, line)) throw IoError("truncated pca model: " + file.string());
    const auto cells = split(trim(line), ',');
    if (static_cast<Eigen::Index>(cells.size()) != expect) {
      throw IoError("bad row width in " + file.string());
    }
    Eigen::VectorXd row(expect);
    for (Eigen::Index i = 0; i < expect; ++i) row(i) = parse_double(cells[static_cast<std::size_t>(i)]);
    return row;
  };

  model.mean = read_row(model.d);
  model.eigenvalues = read_row(model.k);
  model.components.resize(model.k, model.d);
  for (int r = 0; r < model.k; ++r) model.components.row(r) = read_row(model.d).transpose();
  return model;
}

}  // namespace epiwave
