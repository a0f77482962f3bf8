// Copyright 2026 The cfcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFC_OPTICS_MESH_HPP
#define CFC_OPTICS_MESH_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cfc {

using ComplexAmp = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr double kHalfPi = std::numbers::pi / 2;
inline constexpr double kTwoPi = 2 * std::numbers::pi;

enum class NodeRole { Mirror, Swap, Beamsplitter, Custom };

inline const char *role_name(NodeRole role) {
    switch (role) {
        case NodeRole::Mirror:
            return "mirror";
        case NodeRole::Swap:
            return "swap";
        case NodeRole::Beamsplitter:
            return "beamsplitter";
        case NodeRole::Custom:
            return "custom";
    }
    return "?";
}

/// A two-mode Mach-Zehnder node acting on modes (upper_mode, upper_mode + 1).
///
/// The node is parameterized by its mixing angle rather than the internal
/// MZI phase: the bar-state probability (reflectivity) is cos^2(mixing_angle).
/// Mirror is the bar state (angle 0), Swap the cross state (angle pi/2), and a
/// protocol beamsplitter for an N-stage chain has angle pi/(2N).
struct MziNode {
    std::size_t column = 0;
    std::size_t upper_mode = 0;
    double mixing_angle = 0.0;
    double phase = 0.0;
    NodeRole role = NodeRole::Custom;

    static MziNode mirror(std::size_t column, std::size_t upper_mode) {
        return {column, upper_mode, 0.0, 0.0, NodeRole::Mirror};
    }

    static MziNode swap(std::size_t column, std::size_t upper_mode) {
        return {column, upper_mode, kHalfPi, 0.0, NodeRole::Swap};
    }

    static MziNode beamsplitter(std::size_t column, std::size_t upper_mode, int num_beamsplitters) {
        if (num_beamsplitters < 1) {
            throw std::domain_error("beamsplitter node needs N >= 1, got " + std::to_string(num_beamsplitters));
        }
        return {column, upper_mode, kHalfPi / num_beamsplitters, 0.0, NodeRole::Beamsplitter};
    }

    /// Arbitrary node. The phase is wrapped into [0, 2pi).
    static MziNode custom(std::size_t column, std::size_t upper_mode, double mixing_angle, double phase = 0.0) {
        if (!(mixing_angle >= 0.0 && mixing_angle <= kHalfPi)) {
            throw std::domain_error("mixing angle outside [0, pi/2]: " + std::to_string(mixing_angle));
        }
        if (!std::isfinite(phase)) {
            throw std::domain_error("node phase is not finite");
        }
        double wrapped = std::fmod(phase, kTwoPi);
        if (wrapped < 0) {
            wrapped += kTwoPi;
        }
        if (wrapped >= kTwoPi) {
            wrapped = 0.0;
        }
        return {column, upper_mode, mixing_angle, wrapped, NodeRole::Custom};
    }

    double reflectivity() const {
        double c = std::cos(mixing_angle);
        return c * c;
    }
};

/// 2x2 transfer matrix of a node: exp(i*theta*X) applied after a phase phi on
/// the upper input. Bar amplitude cos(theta), cross amplitude i*sin(theta).
inline Matrix2c node_unitary(const MziNode &node) {
    if (!(node.mixing_angle >= 0.0 && node.mixing_angle <= kHalfPi)) {
        throw std::domain_error("mixing angle outside [0, pi/2]: " + std::to_string(node.mixing_angle));
    }
    if (!std::isfinite(node.phase)) {
        throw std::domain_error("node phase is not finite");
    }
    // Exact cross state, so a Swap leaves no residual bar amplitude.
    const bool cross = node.mixing_angle == kHalfPi;
    const double c = cross ? 0.0 : std::cos(node.mixing_angle);
    const double s = cross ? 1.0 : std::sin(node.mixing_angle);
    const ComplexAmp e = std::polar(1.0, node.phase);
    Matrix2c u;
    u(0, 0) = c * e;
    u(0, 1) = ComplexAmp(0.0, s);
    u(1, 0) = ComplexAmp(0.0, s) * e;
    u(1, 1) = c;
    return u;
}

/// Columns of MZI nodes over `num_modes` waveguides. Nodes within a column act
/// on disjoint mode pairs, so their order inside the column does not matter.
class MeshCircuit {
   public:
    explicit MeshCircuit(std::size_t num_modes) : num_modes_(num_modes) {
        if (num_modes < 2) {
            throw std::invalid_argument("a mesh needs at least 2 modes");
        }
    }

    /// Places the node in column `node.column`, creating empty columns as needed.
    void add_node(const MziNode &node) {
        if (node.upper_mode + 1 >= num_modes_) {
            throw std::invalid_argument(
                "node on modes (" + std::to_string(node.upper_mode) + ", " + std::to_string(node.upper_mode + 1) +
                ") outside a " + std::to_string(num_modes_) + "-mode mesh");
        }
        if (!(node.mixing_angle >= 0.0 && node.mixing_angle <= kHalfPi)) {
            throw std::domain_error("mixing angle outside [0, pi/2]: " + std::to_string(node.mixing_angle));
        }
        if (node.column >= columns_.size()) {
            columns_.resize(node.column + 1);
        }
        for (const auto &other : columns_[node.column]) {
            bool disjoint = other.upper_mode + 1 < node.upper_mode || node.upper_mode + 1 < other.upper_mode;
            if (!disjoint) {
                throw std::invalid_argument(
                    "column " + std::to_string(node.column) + " already has a node touching mode " +
                    std::to_string(node.upper_mode) + " or " + std::to_string(node.upper_mode + 1));
            }
        }
        columns_[node.column].push_back(node);
    }

    std::size_t num_modes() const {
        return num_modes_;
    }
    std::size_t num_columns() const {
        return columns_.size();
    }
    std::span<const MziNode> column(std::size_t index) const {
        return columns_.at(index);
    }
    const std::vector<std::vector<MziNode>> &columns() const {
        return columns_;
    }
    std::size_t num_nodes() const {
        std::size_t n = 0;
        for (const auto &c : columns_) {
            n += c.size();
        }
        return n;
    }

   private:
    std::size_t num_modes_;
    std::vector<std::vector<MziNode>> columns_;
};

/// Single-photon path state: one complex amplitude per waveguide mode.
/// The squared norm is the probability the photon is still in the mesh.
class ModeState {
   public:
    explicit ModeState(std::size_t num_modes) : amplitudes_(VectorXc::Zero(static_cast<Eigen::Index>(num_modes))) {
    }

    explicit ModeState(VectorXc amplitudes) : amplitudes_(std::move(amplitudes)) {
        if (!amplitudes_.allFinite()) {
            throw std::domain_error("mode amplitudes must be finite");
        }
    }

    static ModeState basis(std::size_t num_modes, std::size_t mode) {
        if (mode >= num_modes) {
            throw std::out_of_range("basis mode " + std::to_string(mode) + " out of range");
        }
        ModeState s(num_modes);
        s.amplitudes_(static_cast<Eigen::Index>(mode)) = 1.0;
        return s;
    }

    std::size_t num_modes() const {
        return static_cast<std::size_t>(amplitudes_.size());
    }
    ComplexAmp operator[](std::size_t mode) const {
        return amplitudes_(static_cast<Eigen::Index>(mode));
    }
    ComplexAmp &operator[](std::size_t mode) {
        return amplitudes_(static_cast<Eigen::Index>(mode));
    }
    const VectorXc &amplitudes() const {
        return amplitudes_;
    }

    double probability(std::size_t mode) const {
        return std::norm((*this)[mode]);
    }
    double norm_squared() const {
        return amplitudes_.squaredNorm();
    }

    /// Projects the photon out of `mode` and returns the removed probability.
    double collapse(std::size_t mode) {
        double p = probability(mode);
        (*this)[mode] = 0.0;
        return p;
    }

   private:
    VectorXc amplitudes_;
};

/// Applies every node of column `index` to `state` in place.
inline void apply_column(const MeshCircuit &circuit, std::size_t index, ModeState &state) {
    for (const auto &node : circuit.column(index)) {
        Matrix2c u = node_unitary(node);
        ComplexAmp a = state[node.upper_mode];
        ComplexAmp b = state[node.upper_mode + 1];
        state[node.upper_mode] = u(0, 0) * a + u(0, 1) * b;
        state[node.upper_mode + 1] = u(1, 0) * a + u(1, 1) * b;
    }
}

inline ModeState propagate(const MeshCircuit &circuit, const ModeState &input) {
    if (input.num_modes() != circuit.num_modes()) {
        throw std::invalid_argument(
            "state has " + std::to_string(input.num_modes()) + " modes, circuit has " +
            std::to_string(circuit.num_modes()));
    }
    ModeState out = input;
    for (std::size_t c = 0; c < circuit.num_columns(); ++c) {
        apply_column(circuit, c, out);
    }
    return out;
}

/// Full W x W transfer matrix, assembled by embedding each node's 2x2 block
/// into a column matrix and multiplying the columns in propagation order.
inline MatrixXc total_unitary(const MeshCircuit &circuit) {
    const auto w = static_cast<Eigen::Index>(circuit.num_modes());
    MatrixXc total = MatrixXc::Identity(w, w);
    for (const auto &col : circuit.columns()) {
        MatrixXc layer = MatrixXc::Identity(w, w);
        for (const auto &node : col) {
            auto m = static_cast<Eigen::Index>(node.upper_mode);
            layer.block<2, 2>(m, m) = node_unitary(node);
        }
        total = layer * total;
    }
    return total;
}

}  // namespace cfc

#endif
