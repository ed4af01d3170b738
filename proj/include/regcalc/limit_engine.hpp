#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "regcalc/errors.hpp"
#include "regcalc/ext_real.hpp"

namespace regcalc {

enum class LimitStatus { converged, diverged_pos, diverged_neg, no_limit, inconclusive };

inline const char* limit_status_name(LimitStatus s) {
    switch (s) {
        case LimitStatus::converged: return "converged";
        case LimitStatus::diverged_pos: return "diverged_pos";
        case LimitStatus::diverged_neg: return "diverged_neg";
        case LimitStatus::no_limit: return "no_limit";
        case LimitStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

// Verdict of a numeric limit computation along a fixed evaluation-point
// schedule. value is finite for converged, +-inf for diverged, 0 otherwise.
// For no_limit, subseq_lo/subseq_hi are two sample-subsequence levels whose
// separation exceeds 10x the acceptance tolerance.
struct LimitEstimate {
    LimitStatus status = LimitStatus::inconclusive;
    ExtReal value = ExtReal(0.0);
    double err_estimate = std::numeric_limits<double>::infinity();
    int samples_used = 0;
    double subseq_lo = 0, subseq_hi = 0;
    std::string note;
};

struct LimitOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    int max_samples = 53;  // k = 0 .. max_samples-1
    int min_samples = 5;
    int max_leading_failures = 8;
};

namespace detail {

// One Aitken delta-squared step; falls back to the last raw value when the
// second difference is too small to divide by safely.
inline double aitken(double a, double b, double c) {
    double d = (c - b) - (b - a);
    double scale = std::abs(a) + std::abs(b) + std::abs(c);
    if (std::abs(d) <= 1e-14 * scale + 1e-300) return c;
    double r = c - (c - b) * (c - b) / d;
    if (!std::isfinite(r)) return c;
    return r;
}

inline bool strictly_monotone(const std::vector<double>& v, std::size_t from) {
    if (v.size() - from < 2) return false;
    bool inc = true, dec = true;
    for (std::size_t i = from + 1; i < v.size(); ++i) {
        if (v[i] <= v[i - 1]) inc = false;
        if (v[i] >= v[i - 1]) dec = false;
    }
    return inc || dec;
}

}  // namespace detail

// Classifies lim v_k from samples produced on demand. sample(k) returns the
// k-th value or nullopt when it cannot be evaluated (domain error, overflow);
// leading failures are skipped, a failure after data has started ends
// sampling and the collected prefix is classified.
//
// Convergence: the three latest Aitken extrapolants agree pairwise within
// atol + rtol*|value|, and recent raw increments are contracting (this blocks
// period-2 oscillation, whose extrapolants stabilize at the oscillation mean).
//
// Divergence: the last 8 raw samples are strictly monotone, the latest
// magnitude has grown at least 10x beyond the starting scale, and increments
// are not dying out. This is an asymptotic classification over the sample
// budget: slower-than-polynomial escapes (and slower-than-geometric drifts)
// come back inconclusive rather than guessed.
//
// No limit: (a) the even- and odd-indexed extrapolant subsequences each
// stabilize but more than 10x tolerance apart, or (b) at end of budget the raw
// tail is bounded, non-monotone, and spans more than 10x tolerance without
// contracting.
inline LimitEstimate estimate_limit(const std::function<std::optional<double>(int)>& sample,
                                    const LimitOptions& opt = {}) {
    std::vector<double> raw;       // accepted samples
    std::vector<double> c1, c2;    // Aitken columns
    std::vector<double> extrap;    // best extrapolant after each accepted sample
    LimitEstimate out;

    int attempts = 0;
    int leading_failures = 0;
    bool truncated = false;
    for (int k = 0; k < opt.max_samples; ++k) {
        std::optional<double> v;
        try {
            v = sample(k);
        } catch (const Error&) {
            v = std::nullopt;
        }
        ++attempts;
        if (!v || !std::isfinite(*v)) {
            if (raw.empty()) {
                if (++leading_failures > opt.max_leading_failures) {
                    out.status = LimitStatus::inconclusive;
                    out.note = "samples could not be evaluated";
                    out.samples_used = 0;
                    return out;
                }
                continue;
            }
            truncated = true;
            break;
        }
        raw.push_back(*v);
        std::size_t m = raw.size();
        if (m >= 3) c1.push_back(detail::aitken(raw[m - 3], raw[m - 2], raw[m - 1]));
        std::size_t m1 = c1.size();
        if (m1 >= 3) c2.push_back(detail::aitken(c1[m1 - 3], c1[m1 - 2], c1[m1 - 1]));
        if (!c2.empty()) extrap.push_back(c2.back());
        else if (!c1.empty()) extrap.push_back(c1.back());
        else extrap.push_back(raw.back());

        // convergence
        if (static_cast<int>(m) >= opt.min_samples && extrap.size() >= 3) {
            double e0 = extrap[extrap.size() - 3];
            double e1 = extrap[extrap.size() - 2];
            double e2 = extrap[extrap.size() - 1];
            double scale = std::max({std::abs(e0), std::abs(e1), std::abs(e2)});
            double tol = opt.atol + opt.rtol * scale;
            double spread = std::max({std::abs(e0 - e1), std::abs(e1 - e2), std::abs(e0 - e2)});
            if (spread <= tol) {
                // raw increments must be contracting, or already at noise
                // level. Without this, exactly geometric escapes (whose Aitken
                // columns are constant) would read as converged. Before two
                // full 3-increment windows exist, only a noise-level last
                // increment may pass.
                bool contracting;
                if (m >= 7) {
                    double recent = 0, prior = 0;
                    for (std::size_t i = m - 3; i < m; ++i)
                        recent = std::max(recent, std::abs(raw[i] - raw[i - 1]));
                    for (std::size_t i = m - 6; i < m - 3; ++i)
                        prior = std::max(prior, std::abs(raw[i] - raw[i - 1]));
                    contracting = recent <= 10 * tol || recent <= 0.99 * prior;
                } else {
                    contracting = std::abs(raw[m - 1] - raw[m - 2]) <= 10 * tol;
                }
                if (contracting) {
                    out.status = LimitStatus::converged;
                    out.value = ExtReal(e2);
                    out.err_estimate = spread;
                    out.samples_used = static_cast<int>(m);
                    return out;
                }
            }
        }

        // even/odd extrapolant flapping
        if (extrap.size() >= 12) {
            auto level = [&](std::size_t parity, double& lv, double& sp) {
                std::vector<double> tail;
                for (std::size_t i = extrap.size(); i-- > 0 && tail.size() < 3;)
                    if (i % 2 == parity) tail.push_back(extrap[i]);
                lv = tail[0];
                sp = std::max(std::abs(tail[0] - tail[1]),
                              std::max(std::abs(tail[1] - tail[2]), std::abs(tail[0] - tail[2])));
            };
            double ev, esp, ov, osp;
            level(0, ev, esp);
            level(1, ov, osp);
            double scale = std::max(std::abs(ev), std::abs(ov));
            double tol = opt.atol + opt.rtol * scale;
            if (esp <= tol && osp <= tol && std::abs(ev - ov) > 10 * tol) {
                out.status = LimitStatus::no_limit;
                out.subseq_lo = std::min(ev, ov);
                out.subseq_hi = std::max(ev, ov);
                out.samples_used = static_cast<int>(m);
                out.note = "alternating sample subsequences stabilized apart";
                return out;
            }
        }

        // divergence
        if (m >= 8) {
            std::size_t from = m - 8;
            if (detail::strictly_monotone(raw, from)) {
                double start_scale = 1.0 + std::abs(raw.front());
                double dmax = 0, dlast = std::abs(raw[m - 1] - raw[m - 2]);
                for (std::size_t i = from + 1; i < m; ++i)
                    dmax = std::max(dmax, std::abs(raw[i] - raw[i - 1]));
                if (std::abs(raw.back()) >= 10 * start_scale && dlast >= 0.3 * dmax) {
                    bool up = raw[m - 1] > raw[m - 2];
                    out.status = up ? LimitStatus::diverged_pos : LimitStatus::diverged_neg;
                    out.value = up ? ExtReal::pos_inf() : ExtReal::neg_inf();
                    out.err_estimate = std::numeric_limits<double>::infinity();
                    out.samples_used = static_cast<int>(m);
                    return out;
                }
            }
        }
    }

    out.samples_used = static_cast<int>(raw.size());
    if (raw.size() < 4) {
        out.status = LimitStatus::inconclusive;
        out.note = truncated ? "sampling stopped early" : "too few samples";
        return out;
    }

    // end-of-budget: bounded oscillation?
    std::size_t tail_len = std::min<std::size_t>(12, raw.size() / 2);
    std::size_t from = raw.size() - tail_len;
    double lo = raw[from], hi = raw[from], scale = 0;
    for (std::size_t i = from; i < raw.size(); ++i) {
        lo = std::min(lo, raw[i]);
        hi = std::max(hi, raw[i]);
        scale = std::max(scale, std::abs(raw[i]));
    }
    double tol = opt.atol + opt.rtol * scale;
    bool monotone_tail = detail::strictly_monotone(raw, from);
    if (!monotone_tail && hi - lo > 10 * tol && raw.size() >= 16) {
        // compare against the previous window: a steadily contracting spread
        // means slow convergence, not oscillation
        std::size_t pfrom = from >= tail_len ? from - tail_len : 0;
        double plo = raw[pfrom], phi = raw[pfrom];
        for (std::size_t i = pfrom; i < from; ++i) {
            plo = std::min(plo, raw[i]);
            phi = std::max(phi, raw[i]);
        }
        if (hi - lo >= 0.5 * (phi - plo)) {
            out.status = LimitStatus::no_limit;
            out.subseq_lo = lo;
            out.subseq_hi = hi;
            out.note = "bounded non-contracting oscillation at end of budget";
            return out;
        }
    }

    out.status = LimitStatus::inconclusive;
    out.note = truncated ? "sampling stopped early" : "budget exhausted without classification";
    return out;
}

// Evaluation-point schedules. All limits in this library are realized as
// sequence limits along one of these.

// h_k = h0 * 2^-k, stopping where x +- h_k is no longer distinguishable from x.
inline std::vector<double> shrink_steps(double h0, double x, int count) {
    std::vector<double> hs;
    hs.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        double h = std::ldexp(h0, -k);
        if (x + h == x || x - h == x) break;
        hs.push_back(h);
    }
    return hs;
}

// x_k marching toward +inf (x0 * 2^k) or toward a finite endpoint b from side
// sign (points b - sign * h0 * 2^-k).
inline double toward_infinity(double x0, int k) { return std::ldexp(x0, k); }
inline double toward_point(double b, double h0, int sign, int k) {
    return b - sign * std::ldexp(h0, -k);
}

}  // namespace regcalc
