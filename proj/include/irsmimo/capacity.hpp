// SPDX-License-Identifier: Apache-2.0
//
// irsmimo - double-IRS aided MIMO channel simulation and capacity optimization
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef IRSMIMO_CAPACITY_HPP
#define IRSMIMO_CAPACITY_HPP

#include "channel.hpp"

#include <vector>

namespace irsmimo
{
    /// Transmit covariance Q with its trace budget P.
    struct TransmitCovariance
    {
        CMat q;
        double budget = 0.0;

        void validate() const
        {
            if (q.rows() != q.cols())
                throw std::invalid_argument("TransmitCovariance: Q must be square");
            const double scale = std::max(1.0, q.norm());
            if ((q - q.adjoint()).norm() > 1e-10 * scale)
                throw std::invalid_argument("TransmitCovariance: Q must be Hermitian");
            Eigen::SelfAdjointEigenSolver<CMat> es(q, Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -1e-10 * scale)
                throw std::invalid_argument("TransmitCovariance: Q must be positive semi-definite");
            if (q.trace().real() > budget * (1.0 + 1e-9))
                throw std::invalid_argument("TransmitCovariance: trace exceeds power budget");
        }
    };

    /// Truncated SVD of a channel: singular values above the numerical-rank
    /// threshold and the matching right singular vectors.
    struct SpectralDecomposition
    {
        Eigen::VectorXd singular_values; // descending, length K
        CMat right_vectors;              // N_t x K
        int numerical_rank = 0;
    };

    struct PowerAllocation
    {
        std::vector<double> levels;
        double water_level = 0.0;

        double total() const
        {
            double t = 0.0;
            for (double p : levels)
                t += p;
            return t;
        }
    };

    /// log2 det(I + H Q H^H / sigma2) in bits/s/Hz, via Cholesky of the
    /// Hermitian positive-definite argument.
    inline double log_det_rate(const CMat &h, const TransmitCovariance &q, double sigma2)
    {
        if (q.q.rows() != h.cols())
            throw std::invalid_argument("log_det_rate: dimension mismatch between H and Q");
        q.validate();
        const CMat g = CMat::Identity(h.rows(), h.rows()) + (h * q.q * h.adjoint()) / sigma2;
        Eigen::LLT<CMat> llt(g);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("log_det_rate: Cholesky factorization failed");
        double r = 0.0;
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            r += std::log2(llt.matrixLLT()(i, i).real());
        return std::max(2.0 * r, 0.0);
    }

    inline SpectralDecomposition spectral(const CMat &h, double rank_tol = 1e-8)
    {
        Eigen::JacobiSVD<CMat> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd sv = svd.singularValues();
        int k = 0;
        if (sv.size() > 0 && sv(0) > 0.0)
            for (Eigen::Index i = 0; i < sv.size(); ++i)
                if (sv(i) > rank_tol * sv(0))
                    ++k;
        SpectralDecomposition sd;
        sd.numerical_rank = k;
        sd.singular_values = sv.head(k);
        sd.right_vectors = svd.matrixV().leftCols(k);
        return sd;
    }

    /// Water-filling over eigenchannel gains: P_k = max(mu - sigma2/delta_k^2, 0)
    /// with the water level mu found by bisection so that the levels sum to P.
    inline PowerAllocation waterfill(const std::vector<double> &deltas, double power, double sigma2)
    {
        if (deltas.empty())
            throw std::invalid_argument("waterfill: empty singular-value list");
        for (double d : deltas)
            if (!(d > 0.0))
                throw std::invalid_argument("waterfill: singular values must be positive");
        if (!(power > 0.0) || !(sigma2 > 0.0))
            throw std::invalid_argument("waterfill: power and noise must be positive");

        std::vector<double> floors(deltas.size());
        double lo = std::numeric_limits<double>::max(), hi = 0.0;
        for (size_t k = 0; k < deltas.size(); ++k)
        {
            floors[k] = sigma2 / (deltas[k] * deltas[k]);
            lo = std::min(lo, floors[k]);
            hi = std::max(hi, floors[k]);
        }
        hi += power;

        auto allocated = [&](double mu) {
            double t = 0.0;
            for (double f : floors)
                t += std::max(mu - f, 0.0);
            return t;
        };
        for (int it = 0; it < 200 && hi - lo > 1e-12 * power; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (allocated(mid) < power ? lo : hi) = mid;
        }
        const double mu = 0.5 * (lo + hi);

        PowerAllocation pa;
        pa.water_level = mu;
        pa.levels.resize(deltas.size());
        int active = 0;
        double total = 0.0;
        for (size_t k = 0; k < deltas.size(); ++k)
        {
            pa.levels[k] = std::max(mu - floors[k], 0.0);
            total += pa.levels[k];
            if (pa.levels[k] > 0.0)
                ++active;
        }
        // Spread the bisection residual over the active channels so the
        // budget is met exactly.
        if (active > 0)
        {
            const double resid = (power - total) / active;
            for (double &p : pa.levels)
                if (p > 0.0)
                    p += resid;
        }
        return pa;
    }

    /// Capacity-achieving covariance: eigenbeams along the right singular
    /// vectors of H with water-filled powers.
    inline TransmitCovariance optimal_covariance(const CMat &h, double power, double sigma2)
    {
        const SpectralDecomposition sd = spectral(h);
        TransmitCovariance tc;
        tc.budget = power;
        if (sd.numerical_rank == 0)
        {
            // Zero channel: any feasible Q achieves rate 0; spend the budget uniformly.
            tc.q = (power / h.cols()) * CMat::Identity(h.cols(), h.cols());
            return tc;
        }
        std::vector<double> deltas(sd.singular_values.data(),
                                   sd.singular_values.data() + sd.numerical_rank);
        const PowerAllocation pa = waterfill(deltas, power, sigma2);
        Eigen::VectorXd lv = Eigen::Map<const Eigen::VectorXd>(pa.levels.data(), pa.levels.size());
        tc.q = sd.right_vectors * lv.asDiagonal() * sd.right_vectors.adjoint();
        // Symmetrize away rounding so downstream PSD checks are exact.
        tc.q = 0.5 * (tc.q + tc.q.adjoint()).eval();
        return tc;
    }

} // namespace irsmimo

#endif
