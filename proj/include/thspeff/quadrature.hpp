// SPDX-License-Identifier: Apache-2.0
//
// Globally adaptive 1-D quadrature to an absolute tolerance. Each panel is a
// 15-point Gauss-Kronrod rule; the panel with the largest error estimate is
// bisected until the summed estimate meets the tolerance.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "error.hpp"

namespace thspeff {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    unsigned panels = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    unsigned max_panels = 20000;
    double rel_tol = 0.0;                                     // target max(abs_tol, rel_tol |I|) ...
    double abs_cap = std::numeric_limits<double>::infinity(); // ... capped at abs_cap
};

namespace detail {

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const noexcept { return error < o.error; }
};

template <class F>
Panel gk_panel(F& f, double a, double b)
{
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    return {a, b, v, err};
}

} // namespace detail

/// ∫ f over [breaks.front(), breaks.back()], with panels seeded at every breakpoint.
template <class F>
QuadratureResult integrate(F f, std::vector<double> breaks, const QuadratureOptions& opt = {})
{
    require(breaks.size() >= 2, "integrate: need at least two breakpoints");
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::priority_queue<detail::Panel> heap;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const auto p = detail::gk_panel(f, breaks[i], breaks[i + 1]);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    unsigned panels = static_cast<unsigned>(heap.size());
    auto target = [&]() { return std::min(opt.abs_cap, std::max(opt.abs_tol, opt.rel_tol * std::abs(total))); };
    while (err > target()) {
        if (panels >= opt.max_panels) {
            std::ostringstream msg;
            msg << "integrate: tolerance " << target() << " not reached, achieved " << err << " after "
                << panels << " panels";
            throw NumericalError(msg.str());
        }
        const detail::Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            std::ostringstream msg;
            msg << "integrate: panel too narrow to bisect, achieved " << err;
            throw NumericalError(msg.str());
        }
        heap.pop();
        const auto l = detail::gk_panel(f, worst.a, mid);
        const auto r = detail::gk_panel(f, mid, worst.b);
        heap.push(l);
        heap.push(r);
        ++panels;
        // Re-sum from the heap now and then to stop drift in the running totals.
        if (panels % 256 == 0) {
            auto copy = heap;
            total = err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        } else {
            total += l.value + r.value - worst.value;
            err += l.error + r.error - worst.error;
        }
    }
    // Final sum left to right.
    std::vector<detail::Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    long double s = 0, e = 0;
    for (const auto& p : all) {
        s += p.value;
        e += p.error;
    }
    return {static_cast<double>(s), static_cast<double>(e), panels};
}

template <class F>
QuadratureResult integrate(F f, double a, double b, const QuadratureOptions& opt = {})
{
    return integrate(std::move(f), std::vector<double>{a, b}, opt);
}

} // namespace thspeff
