#pragma once

// Local functions of the environment: zeta depends on the weights in a finite
// support set. Evaluation at a shifted base point theta_x omega reads the
// weights at x + support.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rwre/environment.hpp"

namespace rwre {

struct Observable {
    std::vector<Site> support;
    std::function<double(const std::vector<DiagWeights>&)> evaluator;
    double bound = 1.0;  // >= sup |zeta|
    std::string name = "zeta";

    double evaluate(const Environment& env, const Site& base = Site{}) const {
        std::vector<DiagWeights> ws;
        ws.reserve(support.size());
        for (const Site& s : support) ws.push_back(env.site_weights(base + s));
        return evaluator(ws);
    }

    int support_radius(int dim) const {
        long r = 0;
        for (const Site& s : support) r = std::max(r, s.norm1(dim));
        return static_cast<int>(r);
    }

    // zeta(omega) = omega_axis(0).
    static Observable weight_component(int axis) {
        Observable o;
        o.support = {Site{}};
        o.evaluator = [axis](const std::vector<DiagWeights>& ws) { return ws[0][axis]; };
        o.bound = 1.0;
        o.name = "omega_" + std::to_string(axis + 1) + "(0)";
        return o;
    }

    static Observable constant(double c) {
        Observable o;
        o.support = {};
        o.evaluator = [c](const std::vector<DiagWeights>&) { return c; };
        o.bound = std::abs(c);
        o.name = "const";
        return o;
    }
};

}  // namespace rwre
