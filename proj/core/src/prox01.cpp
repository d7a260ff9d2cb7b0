#include "qshs/prox01.hpp"

namespace qshs {

Eigen::VectorXd prox(const Eigen::VectorXd& v, const ProxParams& p) {
    Eigen::VectorXd out(v.size());
    const double thr = p.threshold();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double vi = v[i];
        out[i] = (vi > 0.0 && vi <= thr) ? 0.0 : vi;
    }
    return out;
}

}  // namespace qshs
