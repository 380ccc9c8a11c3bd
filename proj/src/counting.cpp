#include "copop/counting.hpp"

#include <algorithm>
#include <cmath>

#include "copop/numerics.hpp"

namespace copop {

CountingSample counting_function(const SelfMap& phi, const Weight& w, cplx z,
                                 const CountingOptions& opt) {
    CountingSample s;
    s.z = z;
    s.at_phi0 = std::abs(z - phi.phi0()) <= 1e-12;
    const auto pre = phi.preimages(z);
    double total = 0.0;
    int count = 0;
    for (const Preimage& p : pre) {
        const int mult = opt.with_multiplicity ? p.multiplicity : 1;
        total += mult * w(std::abs(p.point));
        count += mult;
    }
    s.value = total;
    s.preimage_count = count;
    return s;
}

double tau(const SelfMap& phi, const Weight& w, cplx z, const CountingOptions& opt) {
    return counting_function(phi, w, z, opt).value / w(std::abs(z));
}

CountingGrid::CountingGrid(const SelfMap& phi, std::vector<double> breaks,
                           int radial_per_segment, int angular)
    : phi_(phi), user_breaks_(std::move(breaks)), angular_(angular) {
    if (user_breaks_.empty())
        throw std::invalid_argument("CountingGrid: at least one break required");
    for (std::size_t i = 0; i < user_breaks_.size(); ++i) {
        if (!(user_breaks_[i] > 0.0 && user_breaks_[i] <= 1.0))
            throw std::invalid_argument("CountingGrid: breaks must lie in (0, 1]");
        if (i > 0 && !(user_breaks_[i] > user_breaks_[i - 1]))
            throw std::invalid_argument("CountingGrid: breaks must increase");
    }
    if (radial_per_segment < 4 || angular_ < 4)
        throw std::invalid_argument("CountingGrid: rule too small");

    // segment edges: user breaks plus the support radius, where the counting
    // integrand switches off (keeps each segment smooth)
    std::vector<double> edges = user_breaks_;
    const double support = phi.support_radius();
    if (support > 1e-6 && support < user_breaks_.back()) {
        bool known = false;
        for (double b : edges)
            if (std::abs(b - support) < 1e-12) known = true;
        if (!known) edges.push_back(support);
    }
    std::sort(edges.begin(), edges.end());

    double lo = 0.0;
    for (double hi : edges) {
        const auto seg = quad::radial_segment(lo, hi, radial_per_segment);
        r_.insert(r_.end(), seg.r.begin(), seg.r.end());
        wr_.insert(wr_.end(), seg.w.begin(), seg.w.end());
        lo = hi;
        // record the exclusive radial index for each user break as we pass it
        for (std::size_t j = 0; j < user_breaks_.size(); ++j)
            if (std::abs(user_breaks_[j] - hi) < 1e-15) {
                break_end_.resize(j + 1);
                break_end_[j] = r_.size();
            }
    }

    const auto critical = phi_.critical_values();
    const std::size_t total = r_.size() * static_cast<std::size_t>(angular_);
    pre_.resize(total);
    parallel_for(total, [&](std::size_t idx) {
        const std::size_t i = idx / angular_;
        const std::size_t k = idx % angular_;
        const double th = 2.0 * M_PI * double(k) / angular_;
        double rr = r_[i];
        cplx z = rr * cplx(std::cos(th), std::sin(th));
        for (const cplx& v : critical)
            if (std::abs(z - v) < 1e-10) {
                rr += 1e-8;
                z = rr * cplx(std::cos(th), std::sin(th));
                break;
            }
        pre_[idx] = phi_.preimages(z);
    });
}

cplx CountingGrid::node(std::size_t i, std::size_t k) const {
    const double th = 2.0 * M_PI * double(k) / angular_;
    return r_[i] * cplx(std::cos(th), std::sin(th));
}

std::vector<double> CountingGrid::counting_values(const Weight& w,
                                                  const CountingOptions& opt) const {
    std::vector<double> N(pre_.size(), 0.0);
    for (std::size_t idx = 0; idx < pre_.size(); ++idx) {
        double total = 0.0;
        for (const Preimage& p : pre_[idx])
            total += (opt.with_multiplicity ? p.multiplicity : 1) * w(std::abs(p.point));
        N[idx] = total;
    }
    return N;
}

std::vector<double> CountingGrid::cumulative(std::span<const double> N,
                                             const std::function<double(cplx, double)>& h) const {
    if (N.size() != pre_.size())
        throw std::invalid_argument("CountingGrid::cumulative: value size mismatch");
    const double dth = 2.0 * M_PI / angular_;
    std::vector<double> radial_parts(r_.size(), 0.0);
    for (std::size_t i = 0; i < r_.size(); ++i) {
        double ring = 0.0;
        for (int k = 0; k < angular_; ++k) {
            const std::size_t idx = i * angular_ + k;
            ring += h(node(i, k), N[idx]);
        }
        radial_parts[i] = wr_[i] * r_[i] * ring * dth / M_PI;
    }
    std::vector<double> out(user_breaks_.size(), 0.0);
    for (std::size_t j = 0; j < user_breaks_.size(); ++j) {
        const std::size_t end = break_end_[j];
        out[j] = pairwise_sum(std::span<const double>(radial_parts.data(), end));
    }
    return out;
}

CovCheck verify_change_of_variables(const SelfMap& phi, const Weight& w,
                                    const std::function<double(cplx)>& f,
                                    const quad::QuadratureRule& rule) {
    if (phi.is_constant())
        throw ConstantMapError("verify_change_of_variables: constant map");

    const auto lhs_integrand = [&](cplx z) {
        const double fv = f(phi.eval(z, 0));
        if (fv < 0.0)
            throw std::invalid_argument("verify_change_of_variables: f must be non-negative");
        const cplx dp = phi.eval(z, 1);
        return fv * std::norm(dp);
    };
    const auto lhs = quad::integrate(lhs_integrand, quad::Region::disk(1.0), rule,
                                     quad::Measure::weighted(w));

    CountingGrid grid(phi, {1.0}, rule.radial_nodes, rule.angular_nodes);
    const auto N = grid.counting_values(w);
    const auto rhs = grid.cumulative(N, [&](cplx z, double n) { return f(z) * n; });

    CovCheck out;
    out.lhs = lhs.value;
    out.rhs = rhs.back();
    out.rel_diff =
        std::abs(out.lhs - out.rhs) / std::max({std::abs(out.lhs), std::abs(out.rhs), 1e-300});
    return out;
}

SubmeanCheck check_submean(const SelfMap& phi, const Weight& w, cplx z, double r,
                           const quad::QuadratureRule& rule) {
    if (!(std::abs(z) - r > 0.5 && std::abs(z) + r < 1.0))
        throw GeometryError("check_submean: D(z, r) must avoid D(0, 1/2) and stay in the disk");
    SubmeanCheck out;
    out.lhs = counting_function(phi, w, z).value;
    const auto integral = quad::integrate(
        [&](cplx zeta) { return counting_function(phi, w, zeta).value; },
        quad::Region::euclidean_disk(z, r), rule, quad::Measure::area());
    out.rhs = 2.0 / (r * r) * integral.value;
    out.holds = out.lhs <= out.rhs + 1e-9 * std::max({1.0, out.lhs, out.rhs});
    return out;
}

}  // namespace copop
