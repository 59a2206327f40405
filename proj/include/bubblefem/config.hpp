#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bubblefem/mesh.hpp"

namespace bubblefem {

/// Scalar field f(x, y). An empty function means f == 0.
using ScalarField = std::function<double(double, double)>;

enum class Scheme { galerkin, rfb, hp };

inline std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::galerkin: return "galerkin";
        case Scheme::rfb: return "rfb";
        case Scheme::hp: return "hp";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view name) {
    if (name == "galerkin") return Scheme::galerkin;
    if (name == "rfb") return Scheme::rfb;
    if (name == "hp") return Scheme::hp;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

/// Advection field, either one global constant or one constant per element.
class Advection {
public:
    Advection() = default;
    Advection(Vec2 w) : global_(w) {}  // NOLINT(google-explicit-constructor)
    explicit Advection(std::vector<Vec2> per_element) : per_element_(std::move(per_element)) {}

    [[nodiscard]] bool is_global() const { return per_element_.empty(); }
    [[nodiscard]] Vec2 on(int element) const {
        return is_global() ? global_ : per_element_.at(static_cast<std::size_t>(element));
    }
    [[nodiscard]] int size() const { return static_cast<int>(per_element_.size()); }
    [[nodiscard]] double max_norm() const {
        if (is_global()) return global_.norm();
        double m = 0.0;
        for (const Vec2& w : per_element_) m = std::max(m, w.norm());
        return m;
    }

private:
    Vec2 global_;
    std::vector<Vec2> per_element_;
};

struct SolverConfig {
    double k = 1.0;
    Advection w;
    int p = 1;
    Scheme scheme = Scheme::galerkin;
    std::optional<int> quad_order;
    int threads = 1;

    void validate(const QuadMesh& mesh) const {
        if (!(k > 0.0)) throw std::invalid_argument("diffusion coefficient k must be positive");
        if (scheme != Scheme::galerkin && p < 1) throw std::invalid_argument("order p must be >= 1");
        if (!w.is_global() && w.size() != mesh.num_elements())
            throw std::invalid_argument("per-element advection does not match the element count");
        if (quad_order && (*quad_order < 1 || *quad_order > kMaxGaussOrder))
            throw std::invalid_argument("quadrature order override outside [1, 64]");
        if (threads < 1) throw std::invalid_argument("thread count must be >= 1");
    }
};

/// Mesh Peclet number of a configuration, maximised over elements.
inline double mesh_peclet(const SolverConfig& config, const QuadMesh& mesh) {
    if (!(config.k > 0.0)) throw std::invalid_argument("mesh_peclet: diffusion coefficient must be positive");
    return config.w.max_norm() * mesh.max_edge() / (2.0 * config.k);
}

}  // namespace bubblefem
