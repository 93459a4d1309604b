#include "ccorr/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ccorr/error.hpp"
#include "ccorr/special.hpp"
#include "ccorr/wh_series.hpp"

namespace ccorr {

namespace {

constexpr double kMaxSupportPoints = 2.0e7;

LatticePoint to_lattice(const std::vector<std::int64_t>& v) {
    LatticePoint p;
    std::copy(v.begin(), v.end(), p.c.begin());
    return p;
}

bool in_region(const HalfSpaceRegion& h, const LatticePoint& p, std::size_t dim) {
    std::array<double, kMaxLatticeDim> x{};
    for (std::size_t i = 0; i < dim; ++i) {
        x[i] = static_cast<double>(p.c[i]);
    }
    return h.contains(std::span<const double>(x.data(), dim));
}

void check_inputs(const LatticeWalk& walk, const HalfSpaceRegion& region, std::size_t n_max) {
    walk.validate();
    require(walk.dim <= kMaxLatticeDim, ErrorKind::InvalidParameter,
            "dim: lattice walks support at most 4 dimensions");
    require(region.dim() == walk.dim, ErrorKind::InvalidRegion,
            "region dimension differs from lattice dimension");
    std::int64_t reach = 0;
    for (const auto& st : walk.steps) {
        for (auto c : st.point) {
            reach = std::max(reach, c < 0 ? -c : c);
        }
    }
    const double side = 2.0 * static_cast<double>(reach) * static_cast<double>(n_max) + 1.0;
    require(std::pow(side, static_cast<double>(walk.dim)) <= kMaxSupportPoints, ErrorKind::Resource,
            "n_max: lattice support would exceed the memory budget");
}

LatticeMeasure convolve(const LatticeMeasure& m, const std::vector<std::pair<LatticePoint, double>>& steps,
                        std::size_t dim) {
    LatticeMeasure out;
    out.reserve(m.size() * 2 + steps.size());
    for (const auto& [x, p] : m) {
        for (const auto& [dx, w] : steps) {
            LatticePoint y = x;
            for (std::size_t i = 0; i < dim; ++i) {
                y.c[i] += dx.c[i];
            }
            out[y] += p * w;
        }
    }
    return out;
}

std::vector<std::pair<LatticePoint, double>> step_table(const LatticeWalk& walk) {
    std::vector<std::pair<LatticePoint, double>> steps;
    for (const auto& st : walk.steps) {
        if (st.prob > 0.0) {
            steps.emplace_back(to_lattice(st.point), st.prob);
        }
    }
    return steps;
}

}  // namespace

double total_mass(const LatticeMeasure& m) {
    CompensatedSum acc;
    for (const auto& [x, p] : m) {
        acc.add(p);
    }
    return acc.value();
}

LatticeMeasureSequence lattice_rq_recursion(const LatticeWalk& walk, const HalfSpaceRegion& region,
                                            std::size_t n_max) {
    check_inputs(walk, region, n_max);
    require(region.strict(), ErrorKind::InvalidRegion,
            "region: 0 must not lie in H (use a strict half-space)");
    const HalfSpaceRegion h = region.translated();
    const auto steps = step_table(walk);

    LatticeMeasureSequence seq;
    seq.dim = walk.dim;
    seq.R.resize(n_max + 1);
    seq.Q.resize(n_max + 1);
    seq.Q[0][LatticePoint{}] = 1.0;
    for (std::size_t n = 0; n < n_max; ++n) {
        const auto next = convolve(seq.Q[n], steps, walk.dim);
        auto& r = seq.R[n + 1];
        auto& q = seq.Q[n + 1];
        for (const auto& [x, p] : next) {
            (in_region(h, x, walk.dim) ? r : q)[x] = p;
        }
    }
    return seq;
}

std::vector<double> lattice_halfspace_masses(const LatticeWalk& walk, const HalfSpaceRegion& region,
                                             std::size_t n_max) {
    check_inputs(walk, region, n_max);
    std::vector<double> masses(n_max + 1, 0.0);
    const auto& alpha = region.alpha();
    const bool integral = std::all_of(alpha.begin(), alpha.end(), [](double a) {
        return a == std::round(a) && std::fabs(a) < 1e6;
    });

    if (integral) {
        // project each step onto alpha and convolve the one-dimensional law
        std::map<std::int64_t, double> proj;
        for (const auto& st : walk.steps) {
            std::int64_t v = 0;
            for (std::size_t i = 0; i < walk.dim; ++i) {
                v += static_cast<std::int64_t>(alpha[i]) * st.point[i];
            }
            proj[v] += st.prob;
        }
        const std::int64_t lo = std::min<std::int64_t>(proj.begin()->first, 0);
        const std::int64_t hi = std::max<std::int64_t>(proj.rbegin()->first, 0);
        const auto n = static_cast<std::int64_t>(n_max);
        const std::int64_t offset = -lo * n;
        std::vector<double> dist(static_cast<std::size_t>((hi - lo) * n + 1), 0.0);
        std::vector<double> next(dist.size(), 0.0);
        dist[static_cast<std::size_t>(offset)] = 1.0;
        std::int64_t cur_lo = 0;
        std::int64_t cur_hi = 0;
        for (std::size_t step = 1; step <= n_max; ++step) {
            std::fill(next.begin() + (cur_lo + lo + offset), next.begin() + (cur_hi + hi + offset) + 1, 0.0);
            for (std::int64_t v = cur_lo; v <= cur_hi; ++v) {
                const double p = dist[static_cast<std::size_t>(v + offset)];
                if (p == 0.0) {
                    continue;
                }
                for (const auto& [dv, w] : proj) {
                    next[static_cast<std::size_t>(v + dv + offset)] += p * w;
                }
            }
            cur_lo += lo;
            cur_hi += hi;
            std::swap(dist, next);
            CompensatedSum acc;
            for (std::int64_t v = cur_lo; v <= cur_hi; ++v) {
                const bool inside = region.strict() ? v < 0 : v <= 0;
                if (inside) {
                    acc.add(dist[static_cast<std::size_t>(v + offset)]);
                }
            }
            masses[step] = acc.value();
        }
        return masses;
    }

    const HalfSpaceRegion h = region.translated();
    const auto steps = step_table(walk);
    LatticeMeasure dist;
    dist[LatticePoint{}] = 1.0;
    for (std::size_t step = 1; step <= n_max; ++step) {
        dist = convolve(dist, steps, walk.dim);
        CompensatedSum acc;
        for (const auto& [x, p] : dist) {
            if (in_region(h, x, walk.dim)) {
                acc.add(p);
            }
        }
        masses[step] = acc.value();
    }
    return masses;
}

double lattice_first_entry_transform(const LatticeMeasureSequence& seq, double q) {
    CompensatedSum acc;
    double qn = 1.0;
    for (std::size_t n = 1; n < seq.R.size(); ++n) {
        qn *= q;
        acc.add(qn * total_mass(seq.R[n]));
    }
    return acc.value();
}

WienerHopfCheck wiener_hopf_zero_freq_check(const LatticeWalk& walk, const HalfSpaceRegion& region,
                                            double q, std::size_t n_max) {
    require(q > 0.0 && q < 1.0, ErrorKind::InvalidParameter, "q: must lie in (0, 1)");
    require(n_max >= 1, ErrorKind::InvalidParameter, "n_max: must be at least 1");
    require(region.strict(), ErrorKind::InvalidRegion,
            "region: 0 must not lie in H (use a strict half-space)");

    // both H and its complement must be +-closed on the reachable lattice
    const HalfSpaceRegion h = region.translated();
    std::vector<PointPair> pairs;
    for (const auto& a : walk.steps) {
        for (const auto& b : walk.steps) {
            Point pa(a.point.begin(), a.point.end());
            Point pb(b.point.begin(), b.point.end());
            pairs.emplace_back(pa, pb);
        }
    }
    require(plus_closed_check(h, pairs), ErrorKind::InvalidRegion,
            "region: H or its complement is not +-closed");

    const auto seq = lattice_rq_recursion(walk, region, n_max);
    const auto masses = lattice_halfspace_masses(walk, region, n_max);

    WienerHopfCheck out;
    out.q = q;
    out.n_max = n_max;
    out.lhs = 1.0 - lattice_first_entry_transform(seq, q);
    CompensatedSum acc;
    const double log_q = std::log(q);
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double nd = static_cast<double>(n);
        acc.add(std::exp(nd * log_q) / nd * masses[n]);
    }
    out.rhs = std::exp(-acc.value());
    out.gap = std::fabs(out.lhs - out.rhs);
    const double qn1 = std::exp((static_cast<double>(n_max) + 1.0) * log_q);
    out.tail_bound = qn1 * total_mass(seq.Q[n_max]) / (1.0 - q) + series_tail_bound(q, n_max);
    return out;
}

}  // namespace ccorr
