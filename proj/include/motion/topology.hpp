#pragma once

#include "motion/types.hpp"

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace motion {

// Pixel role inside a plus-shaped unit cell.
enum class Role { center = 0, up = 1, down = 2, left = 3, right = 4 };

inline constexpr std::array<Role, 5> all_roles{Role::center, Role::up, Role::down, Role::left,
                                               Role::right};

std::string_view to_string(Role r);
Role role_of(Direction d);
std::pair<int, int> role_offset(Role r);

struct PixelOwner {
    int cell = 0;
    Role role = Role::center;

    bool operator==(const PixelOwner &) const = default;
};

struct CellLayout {
    int width = 0;
    int height = 0;
    int lattice_offset = 0;
    std::vector<std::pair<int, int>> centers; // ordered by (y, x)
    std::vector<int> owner;                   // per pixel: cell * 5 + role, or -1

    std::size_t cell_count() const { return centers.size(); }
    std::size_t covered_pixels() const;
};

// Plus-pentomino tiling on the lattice (2x + y) mod 5 == c, best c kept.
CellLayout tessellate(int field_width, int field_height);

std::optional<PixelOwner> pixel_owner(const CellLayout &layout, int x, int y);

enum class Layer { input, hidden, output };
enum class HiddenKind { excitatory_relay, inhibitory_relay, center_relay };

std::string_view to_string(Layer l);
std::string_view to_string(HiddenKind k);

struct NeuronInfo {
    Layer layer = Layer::input;
    int cell = -1;                   // -1 for output neurons
    Role role = Role::center;        // input pixel role or relay source role
    HiddenKind kind = HiddenKind::center_relay;
    Direction direction = Direction::up; // relay direction or output group
    int rank = 0;                    // output tau rank within its group
    LifParams params;
};

// Connection strengths and neuron classes used when wiring the network.
struct NetworkParams {
    LifParams input = LifParams::make(1e-3, 0.5);
    LifParams excitatory_relay = LifParams::make(0.02, 0.5);
    LifParams inhibitory_relay = LifParams::make(0.02, 0.5);
    LifParams center_relay = LifParams::make(0.002, 0.5);
    LifParams output = LifParams::make(0.5, 1.5); // tau_m replaced per neuron

    double w_input_hidden = 1.0;
    double w_excitatory = 1.0;
    double w_center = 1.0;
    double w_inhibitory = 1.0;
    double w_lateral = 1.0;
    bool lateral_inhibition = true;

    void validate() const;
};

// Local wiring of one cell. Local ids: inputs 0..4 (role order), hidden 5..13.
struct CellSubgraph {
    std::pair<int, int> center;
    std::vector<NeuronInfo> neurons;
    std::vector<Synapse> synapses; // input -> hidden
    struct OutputLink {
        int hidden = 0; // local id
        Direction target = Direction::up;
        Sign sign = Sign::excitatory;
    };
    std::vector<OutputLink> output_links; // one entry per output group direction and source
};

inline constexpr int inputs_per_cell = 5;
inline constexpr int hidden_per_cell = 9;

// Local hidden index (0..8) of a relay; center relay has index 8.
int hidden_slot(HiddenKind kind, Direction d);

CellSubgraph build_unit_cell(int field_width, int field_height, std::pair<int, int> center,
                             const NetworkParams &params = {});

struct NetworkGraph {
    CellLayout layout;
    int n_per_dir = 1;
    std::vector<double> output_taus; // ascending, index = rank
    std::vector<NeuronInfo> neurons;
    std::vector<Synapse> synapses; // feed-forward first, lateral after
    std::size_t n_input = 0;
    std::size_t n_hidden = 0;
    std::size_t n_output = 0;
    std::size_t n_feedforward = 0;
    std::size_t n_lateral = 0;
    std::vector<int> input_of_pixel;         // per pixel: input neuron id or -1
    std::vector<std::vector<int>> outgoing;  // per neuron: synapse indices

    int input_id(int cell, Role r) const;
    int hidden_id(int cell, int slot) const;
    int output_id(Direction d, int rank) const;
    int input_for_pixel(int x, int y) const;
};

NetworkGraph assemble_network(const CellLayout &layout, int n_per_dir,
                              std::vector<double> output_taus, const NetworkParams &params = {});

// n values spaced evenly in log between lo and hi (inclusive).
std::vector<double> log_spaced(double lo, double hi, int n);

} // namespace motion
