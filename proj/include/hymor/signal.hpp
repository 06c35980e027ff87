#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hymor/hybrid_time.hpp"
#include "hymor/types.hpp"

namespace hymor {

/// Piecewise trajectory over a hybrid time domain. Segment k holds samples on
/// the k-th flow interval, endpoints included, so at a jump instant the
/// pre-jump value is the last sample of segment j and the post-jump value is
/// the first sample of segment j+1. When the domain ends with a jump the final
/// post-jump value is kept separately.
class HybridSignal {
public:
    struct Segment {
        int j;
        std::vector<double> t;
        std::vector<Mat> v;
    };

    HybridSignal() = default;
    HybridSignal(std::string name, std::vector<Segment> segments, std::optional<Mat> final_jump_value = {})
        : name_(std::move(name)), segments_(std::move(segments)), final_jump_value_(std::move(final_jump_value)) {
        for (const auto& s : segments_) {
            if (s.t.size() != s.v.size() || s.t.empty())
                throw ValidationError("signal segment grid/value mismatch");
            for (size_t i = 1; i < s.t.size(); ++i)
                if (!(s.t[i] > s.t[i - 1])) throw ValidationError("signal segment grid must be increasing");
        }
    }

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }
    const std::vector<Segment>& segments() const { return segments_; }
    const std::optional<Mat>& final_jump_value() const { return final_jump_value_; }
    bool empty() const { return segments_.empty(); }

    Eigen::Index value_rows() const { return segments_.at(0).v.at(0).rows(); }
    Eigen::Index value_cols() const { return segments_.at(0).v.at(0).cols(); }

    const Mat& first_value() const { return segments_.front().v.front(); }
    const Mat& last_value() const {
        return final_jump_value_ ? *final_jump_value_ : segments_.back().v.back();
    }

    /// Value at (t, j); t must lie inside segment j's range. Samples are
    /// interpolated linearly between grid points.
    Mat at(double t, int j) const {
        const Segment& s = segment_by_j(j);
        if (t < s.t.front() - 1e-9 || t > s.t.back() + 1e-9)
            throw ValidationError("signal evaluation time outside segment range");
        if (t <= s.t.front()) return s.v.front();
        if (t >= s.t.back()) return s.v.back();
        size_t hi = 1;
        while (s.t[hi] < t) ++hi;
        const double a = (t - s.t[hi - 1]) / (s.t[hi] - s.t[hi - 1]);
        return (1.0 - a) * s.v[hi - 1] + a * s.v[hi];
    }

    const Segment& segment_by_j(int j) const {
        for (const auto& s : segments_)
            if (s.j == j) return s;
        throw ValidationError("signal has no segment with jump index " + std::to_string(j));
    }

    /// True when both signals are sampled on exactly the same hybrid grid.
    bool same_grid(const HybridSignal& other, double tol = 1e-12) const {
        if (segments_.size() != other.segments_.size()) return false;
        for (size_t k = 0; k < segments_.size(); ++k) {
            const auto& a = segments_[k];
            const auto& b = other.segments_[k];
            if (a.j != b.j || a.t.size() != b.t.size()) return false;
            for (size_t i = 0; i < a.t.size(); ++i)
                if (std::abs(a.t[i] - b.t[i]) > tol) return false;
        }
        return true;
    }

    /// Restricts the signal to samples with t >= t_from (segment-preserving).
    HybridSignal tail_from(double t_from) const {
        std::vector<Segment> out;
        for (const auto& s : segments_) {
            if (s.t.back() < t_from - 1e-12) continue;
            Segment ns{s.j, {}, {}};
            for (size_t i = 0; i < s.t.size(); ++i) {
                if (s.t[i] >= t_from - 1e-12) {
                    ns.t.push_back(s.t[i]);
                    ns.v.push_back(s.v[i]);
                }
            }
            if (!ns.t.empty()) out.push_back(std::move(ns));
        }
        return HybridSignal(name_, std::move(out), final_jump_value_);
    }

private:
    std::string name_;
    std::vector<Segment> segments_;
    std::optional<Mat> final_jump_value_;
};

/// Componentwise map over one signal (used to derive outputs from states).
template <typename F>
HybridSignal transform_signal(const HybridSignal& in, const std::string& name, F&& f) {
    std::vector<HybridSignal::Segment> segs;
    segs.reserve(in.segments().size());
    for (const auto& s : in.segments()) {
        HybridSignal::Segment ns{s.j, s.t, {}};
        ns.v.reserve(s.v.size());
        for (size_t i = 0; i < s.v.size(); ++i) ns.v.push_back(f(s.t[i], s.j, s.v[i]));
        segs.push_back(std::move(ns));
    }
    std::optional<Mat> fin;
    if (in.final_jump_value()) {
        const auto& s = in.segments().back();
        fin = f(s.t.back(), s.j + 1, *in.final_jump_value());
    }
    return HybridSignal(name, std::move(segs), std::move(fin));
}

}  // namespace hymor
