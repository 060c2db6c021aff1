#include "resgas/readout.hpp"

#include <Eigen/Cholesky>

#include "resgas/errors.hpp"

namespace resgas {

void StateTargetPair::validate() const {
    if (V.rows() != y.size()) throw DataError("StateTargetPair: V rows must match y length");
    if (washout < 0 || washout >= V.rows()) {
        throw DataError("StateTargetPair: washout must lie in [0, K)");
    }
}

namespace {

Eigen::MatrixXd with_bias_column(const Eigen::MatrixXd& V) {
    Eigen::MatrixXd out(V.rows(), V.cols() + 1);
    out.leftCols(V.cols()) = V;
    out.col(V.cols()).setOnes();
    return out;
}

}  // namespace

RidgeReadout ridge_fit(const StateTargetPair& data, double mu, bool add_bias) {
    data.validate();
    if (mu < 0.0) throw DataError("ridge_fit: mu must be >= 0");

    const Eigen::Index rows = data.effective_rows();
    Eigen::MatrixXd V = data.V.bottomRows(rows);
    if (add_bias) V = with_bias_column(V);
    const Eigen::VectorXd y = data.y.tail(rows);

    const Eigen::Index n = V.cols();
    Eigen::MatrixXd gram = V.transpose() * V;
    gram.diagonal().array() += mu;
    const Eigen::VectorXd rhs = V.transpose() * y;

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    bool singular = ldlt.info() != Eigen::Success;
    if (!singular && mu == 0.0) {
        // LDLT tolerates semi-definite systems; detect rank deficiency from
        // the pivot spread instead.
        const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
        const double dmax = d.maxCoeff();
        singular = dmax <= 0.0 ||
                   d.minCoeff() <= dmax * static_cast<double>(n) * 1e-14;
    }
    if (singular) {
        throw NumericalError(
            "ridge_fit: normal equations are singular with mu = 0; "
            "use a regularization mu > 0");
    }

    RidgeReadout readout;
    readout.w_out = ldlt.solve(rhs);
    readout.mu = mu;
    readout.has_bias = add_bias;
    return readout;
}

Eigen::VectorXd ridge_predict(const RidgeReadout& readout, const Eigen::MatrixXd& V) {
    const Eigen::Index expected = readout.w_out.size() - (readout.has_bias ? 1 : 0);
    if (V.cols() != expected) throw DataError("ridge_predict: dimension mismatch");
    if (!readout.has_bias) return V * readout.w_out;
    return (V * readout.w_out.head(expected)).array() + readout.w_out[expected];
}

double ridge_loss(const RidgeReadout& readout, const StateTargetPair& data) {
    data.validate();
    const Eigen::Index rows = data.effective_rows();
    const Eigen::VectorXd yhat =
        ridge_predict(readout, data.V.bottomRows(rows));
    const double fit = (yhat - data.y.tail(rows)).squaredNorm();
    return 0.5 * fit + 0.5 * readout.mu * readout.w_out.squaredNorm();
}

}  // namespace resgas
