#include "spps/aberth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spps {

namespace {

// p(z) and p'(z) by Horner.
std::pair<cplx, cplx> horner_pair(const std::vector<cplx>& c, cplx z) {
    cplx v = 0.0, d = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) {
        d = d * z + v;
        v = v * z + c[k];
    }
    return {v, d};
}

double abs_horner(const std::vector<double>& a, double x) {
    double s = 0.0;
    for (std::size_t k = a.size(); k-- > 0;) s = s * x + a[k];
    return s;
}

// Newton ratio p(z)/p'(z), using the reversed polynomial for |z| > 1 to
// avoid overflow at high degree. at_floor reports that |p(z)| is already
// below the evaluation roundoff bound, so the root cannot be improved.
cplx newton_ratio(const std::vector<cplx>& c, const std::vector<cplx>& crev,
                  const std::vector<double>& cabs,
                  const std::vector<double>& crev_abs, cplx z, bool& at_floor) {
    const int deg = (int)c.size() - 1;
    const double floor_factor =
        4.0 * double(deg + 1) * std::numeric_limits<double>::epsilon();
    if (std::abs(z) <= 1.0) {
        auto [v, d] = horner_pair(c, z);
        at_floor = std::abs(v) <= floor_factor * abs_horner(cabs, std::abs(z));
        if (std::abs(d) == 0.0) return cplx(0.0, 0.0);
        return v / d;
    }
    cplx w = 1.0 / z;
    auto [qv, qd] = horner_pair(crev, w);
    at_floor = std::abs(qv) <= floor_factor * abs_horner(crev_abs, std::abs(w));
    cplx denom = double(deg) * qv - w * qd;
    if (std::abs(denom) == 0.0) return cplx(0.0, 0.0);
    return z * qv / denom;
}

// Initial guesses on annuli given by the upper convex hull of (k, ln|c_k|).
std::vector<cplx> initial_points(const std::vector<cplx>& c) {
    const int deg = (int)c.size() - 1;
    std::vector<double> lg(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        double a = std::abs(c[k]);
        lg[k] = a > 0.0 ? std::log(a) : -1e300;
    }
    std::vector<int> hull;
    for (int k = 0; k <= deg; ++k) {
        if (lg[k] <= -1e299 && k != 0 && k != deg) continue;
        while (hull.size() >= 2) {
            int i = hull[hull.size() - 2], j = hull[hull.size() - 1];
            // drop j if it lies below the segment i..k
            if ((lg[j] - lg[i]) * (k - i) <= (lg[k] - lg[i]) * (j - i))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(k);
    }
    std::vector<cplx> z;
    z.reserve(deg);
    int idx = 0;
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        int k1 = hull[e], k2 = hull[e + 1];
        double u = std::exp((lg[k1] - lg[k2]) / double(k2 - k1));
        for (int j = 0; j < k2 - k1; ++j) {
            double ang = 2.0 * M_PI * idx / double(deg) + 0.7;
            z.push_back(u * cplx(std::cos(ang), std::sin(ang)));
            ++idx;
        }
    }
    while ((int)z.size() < deg) {
        double ang = 2.0 * M_PI * z.size() / double(deg) + 0.7;
        z.push_back(cplx(std::cos(ang), std::sin(ang)));
    }
    return z;
}

} // namespace

RootResult polynomial_roots(const std::vector<cplx>& coeffs) {
    RootResult out;
    std::vector<cplx> c = coeffs;
    while (!c.empty() && std::abs(c.back()) < 1e-300) c.pop_back();
    std::size_t zero_roots = 0;
    while (c.size() > 1 && std::abs(c.front()) < 1e-300) {
        c.erase(c.begin());
        ++zero_roots;
    }
    for (std::size_t k = 0; k < zero_roots; ++k) out.roots.push_back(cplx(0.0, 0.0));
    if (c.size() <= 1) return out;

    double scale = 0.0;
    for (cplx v : c) scale = std::max(scale, std::abs(v));
    for (cplx& v : c) v /= scale;

    if (c.size() == 2) {
        out.roots.push_back(-c[0] / c[1]);
        return out;
    }

    std::vector<cplx> crev(c.rbegin(), c.rend());
    std::vector<double> cabs(c.size()), crev_abs(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        cabs[k] = std::abs(c[k]);
        crev_abs[k] = std::abs(crev[k]);
    }
    std::vector<cplx> z = initial_points(c);
    const int n = (int)z.size();
    std::vector<bool> done(n, false);
    const int max_iter = 200;
    bool all_done = false;
    for (int iter = 0; iter < max_iter && !all_done; ++iter) {
        all_done = true;
        for (int i = 0; i < n; ++i) {
            if (done[i]) continue;
            bool at_floor = false;
            cplx ratio = newton_ratio(c, crev, cabs, crev_abs, z[i], at_floor);
            if (at_floor) {
                done[i] = true;
                continue;
            }
            cplx sum = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                cplx d = z[i] - z[j];
                if (std::abs(d) < 1e-300) d = cplx(1e-300, 0.0);
                sum += 1.0 / d;
            }
            cplx denom = 1.0 - ratio * sum;
            cplx step = std::abs(denom) > 0.0 ? ratio / denom : ratio;
            z[i] -= step;
            if (std::abs(step) < 1e-14 * (1.0 + std::abs(z[i])))
                done[i] = true;
            else
                all_done = false;
        }
    }
    out.converged = all_done;
    out.roots.insert(out.roots.end(), z.begin(), z.end());
    return out;
}

} // namespace spps
