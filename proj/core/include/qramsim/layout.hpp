#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace qramsim {

// Qutrit wires use the {|W>, |0>, |1>} ordering: value 0 is the wait state,
// values 1 and 2 are the active (qubit) levels. Qubit wires use {|0>, |1>}.
// All-zero labels are therefore the natural initial state of a routing tree.
inline constexpr uint8_t kWaitValue = 0;

enum class RegisterKind : uint8_t {
    Address,
    InputRail,
    Bus,
    RouterInternal,
    RouterOutput,
    CopyAncilla,
};

struct Register {
    std::string name;
    RegisterKind kind;
    uint32_t first = 0;
    uint32_t count = 0;
};

// Wire layout for one circuit family. Wires are indexed 0..wire_count-1 and
// every wire belongs to exactly one register. Tree layouts carry the
// (level, position) <-> router wire bijection plus the output-mode wiring;
// QROM layouts are just address + bus.
class WireLayout {
  public:
    // Tree layout for depth n: address[address_bits], input_rail[1], bus[1],
    // router_internal[2^n - 1], router_output[2 (2^n - 1)], and optionally one
    // copy ancilla (double-query circuits). dim is 2 or 3 and uniform.
    // Hybrid circuits carry more address bits than tree levels.
    static std::shared_ptr<const WireLayout> tree(int n, int dim, bool with_copy_ancilla = false,
                                                  int address_bits = 0);

    // QROM layout: address[n] + bus[1], all qubits.
    static std::shared_ptr<const WireLayout> qrom(int n);

    // Bare address[n] + bus[1] layout of the given dimension (ideal outputs,
    // QROM-like hybrid degenerate case).
    static std::shared_ptr<const WireLayout> address_bus(int n, int dim);

    uint32_t wire_count() const { return wire_count_; }
    int dim() const { return dim_; }
    const std::vector<uint8_t>& wire_dims() const { return wire_dims_; }
    uint8_t wire_dim(uint32_t w) const { return wire_dims_[w]; }
    const std::vector<Register>& registers() const { return registers_; }

    int tree_depth() const { return n_; }  // 0 for QROM layouts
    bool is_tree() const { return router_count_ > 0; }
    uint32_t router_count() const { return router_count_; }

    uint32_t address_wire(int bit) const { return address_first_ + static_cast<uint32_t>(bit); }
    int address_bits() const { return address_bits_; }
    uint32_t bus_wire() const { return bus_; }
    uint32_t input_rail() const { return input_rail_; }
    bool has_copy_ancilla() const { return copy_ancilla_ != kNoWire; }
    uint32_t copy_ancilla() const { return copy_ancilla_; }

    // (level l in [0, n), position k in [0, 2^l)) -> router wire.
    uint32_t router_wire(int level, uint32_t pos) const {
        return router_first_ + ((1u << level) - 1) + pos;
    }
    // Inverse of router_wire; returns {level, pos}.
    std::pair<int, uint32_t> router_level_pos(uint32_t wire) const;

    // Output modes of router (level, pos); side 0 = left, 1 = right.
    uint32_t output_wire(int level, uint32_t pos, int side) const {
        return output_first_ + 2 * ((1u << level) - 1 + pos) + static_cast<uint32_t>(side);
    }
    // Incident mode of router (level, pos): the input rail for the root,
    // otherwise the parent's output mode.
    uint32_t incident_wire(int level, uint32_t pos) const {
        if (level == 0) return input_rail_;
        return output_wire(level - 1, pos >> 1, static_cast<int>(pos & 1));
    }
    // Bottom-level output holding memory cell `cell`.
    uint32_t bottom_output(uint32_t cell) const {
        return output_wire(n_ - 1, cell >> 1, static_cast<int>(cell & 1));
    }

    // Encoded local values of the logical qubit levels: |0> -> 0 (qubit) or 1
    // (qutrit), |1> -> 1 or 2.
    uint8_t enc0() const { return dim_ == 3 ? 1 : 0; }
    uint8_t enc1() const { return dim_ == 3 ? 2 : 1; }
    uint8_t encode_bit(int b) const { return b ? enc1() : enc0(); }

    // Every wire that is not address or bus (used when tracing out ancillas).
    std::vector<uint32_t> ancilla_wires() const;

    bool same_shape(const WireLayout& other) const {
        return wire_dims_ == other.wire_dims_;
    }

  private:
    static constexpr uint32_t kNoWire = UINT32_MAX;

    uint32_t wire_count_ = 0;
    int dim_ = 2;
    int n_ = 0;
    int address_bits_ = 0;
    uint32_t address_first_ = 0;
    uint32_t input_rail_ = kNoWire;
    uint32_t bus_ = kNoWire;
    uint32_t router_first_ = kNoWire;
    uint32_t router_count_ = 0;
    uint32_t output_first_ = kNoWire;
    uint32_t copy_ancilla_ = kNoWire;
    std::vector<uint8_t> wire_dims_;
    std::vector<Register> registers_;
};

// Computational basis label: one local value per wire, packed 2 bits each.
// Packing keys the label for exact equality and keeps per-term constant
// factors small (term counts are O(N), so these dominate runtime).
class BasisLabel {
  public:
    BasisLabel() = default;
    explicit BasisLabel(uint32_t wire_count)
        : size_(wire_count), words_((wire_count + 31) / 32, 0) {}

    uint32_t size() const { return size_; }

    uint8_t get(uint32_t wire) const {
        return static_cast<uint8_t>((words_[wire >> 5] >> ((wire & 31u) * 2)) & 3u);
    }
    void set(uint32_t wire, uint8_t value) {
        uint64_t& w = words_[wire >> 5];
        const unsigned shift = (wire & 31u) * 2;
        w = (w & ~(3ull << shift)) | (static_cast<uint64_t>(value) << shift);
    }

    bool operator==(const BasisLabel& o) const { return words_ == o.words_; }
    bool operator!=(const BasisLabel& o) const { return !(*this == o); }
    bool operator<(const BasisLabel& o) const { return words_ < o.words_; }

    uint64_t hash() const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (uint64_t w : words_) {
            h ^= w;
            h *= 0x100000001b3ull;
        }
        return h;
    }

    const std::vector<uint64_t>& words() const { return words_; }

  private:
    uint32_t size_ = 0;
    std::vector<uint64_t> words_;
};

struct BasisLabelHash {
    size_t operator()(const BasisLabel& l) const { return static_cast<size_t>(l.hash()); }
};

}  // namespace qramsim
