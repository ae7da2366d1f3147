#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "zs/common.hpp"
#include "zs/errors.hpp"

namespace zs {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 1e-3;
    double max_step = 0.5;
    long max_steps = 2'000'000;
};

// Adaptive embedded Dormand-Prince 5(4) over a two-component complex state.
// Integrates from t0 to t1 (either direction) and invokes on_sample(t, y) at
// each requested sample time; sample_ts must be sorted in integration order
// and contained in [t0, t1]. Steps land exactly on requested samples. Error
// control: mixed absolute/relative per component, safety factor 0.9.
template <class RHS, class Sampler>
void integrate_dp54(RHS&& rhs, Vec2 y, double t0, double t1,
                    const std::vector<double>& sample_ts, const OdeOptions& opt,
                    Sampler&& on_sample) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // embedded 4th-order weights
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    size_t next_sample = 0;
    auto emit_due = [&](double tcur, const Vec2& ycur) {
        while (next_sample < sample_ts.size() &&
               dir * (sample_ts[next_sample] - tcur) <= span * 1e-15) {
            on_sample(sample_ts[next_sample], ycur);
            ++next_sample;
        }
    };
    if (span == 0.0) {
        emit_due(t0, y);
        return;
    }
    const double hmin = std::max(span * 1e-14, 1e-300);
    double t = t0;
    double h_work = std::min(opt.initial_step, opt.max_step);  // magnitude kept by the controller
    emit_due(t, y);

    Vec2 k1;
    rhs(t, y, k1);
    for (long step = 0; step < opt.max_steps; ++step) {
        if (dir * (t1 - t) <= span * 1e-15) break;
        double limit = t1;
        if (next_sample < sample_ts.size() && dir * (sample_ts[next_sample] - limit) < 0)
            limit = sample_ts[next_sample];
        double room = std::abs(limit - t);
        bool clipped = h_work >= room;
        double h = dir * std::min(h_work, room);
        if (std::abs(h) < hmin)
            throw StepSizeUnderflow("step size " + std::to_string(std::abs(h)) +
                                    " below minimum at t = " + std::to_string(t));

        Vec2 k2, k3, k4, k5, k6, k7, ynew, yerr, tmp;
        auto stage = [&](double frac, const Vec2& yy, Vec2& out) { rhs(t + frac * h, yy, out); };
        for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a21 * k1[i]);
        stage(c2, tmp, k2);
        for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        stage(c3, tmp, k3);
        for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        stage(c4, tmp, k4);
        for (int i = 0; i < 2; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        stage(c5, tmp, k5);
        for (int i = 0; i < 2; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        stage(1.0, tmp, k6);
        for (int i = 0; i < 2; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);
        for (int i = 0; i < 2; ++i) {
            cplx y4 = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                  e7 * k7[i]);
            yerr[i] = ynew[i] - y4;
        }
        double err = 0.0;
        bool finite = true;
        for (int i = 0; i < 2; ++i) {
            double scale = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            double e = std::abs(yerr[i]) / scale;
            if (!std::isfinite(e) || !std::isfinite(std::abs(ynew[i]))) finite = false;
            err = std::max(err, e);
        }
        if (finite && err <= 1.0) {
            t = clipped ? limit : t + h;
            y = ynew;
            k1 = k7;  // first-same-as-last
            emit_due(t, y);
            double grow = (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            // a clipped (shortened) step says nothing about the controller's own scale
            if (!clipped) h_work = std::min(h_work * grow, opt.max_step);
        } else {
            // non-finite stages carry no usable error signal; shrink hard
            double shrink = finite ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1;
            h_work = std::abs(h) * shrink;
        }
    }
    if (dir * (t1 - t) > span * 1e-12)
        throw StepSizeUnderflow("integration exhausted max_steps before reaching endpoint");
    emit_due(t1, y);
}

}  // namespace zs
