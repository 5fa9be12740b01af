#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vndim/group_operator.hpp"
#include "vndim/tiling.hpp"

namespace vndim {

enum class SequenceKind { Folner, Quotient, Diagonal };

/// One experiment: a group, an operator, a graph sequence and its schedule.
/// Parsed from / serialized to JSON; fully determines a run together with the seed.
struct ExperimentSpec {
  std::string group = "Z";
  std::string operator_path;    // file with a GroupRingMatrix, or
  std::string operator_inline;  // the same text inline (takes precedence)
  SequenceKind kind = SequenceKind::Folner;
  std::vector<std::int64_t> schedule;                  // radii or moduli, strictly increasing
  std::vector<std::vector<std::int64_t>> subgroups;    // diagonal: moduli vector per step
  Rat epsilon = rat(1, 4);
  Rat delta = rat(1, 10);
  std::string csv_path, json_path, svg_path;
  std::uint64_t seed = 1;

  static ExperimentSpec from_json(const std::string& text);
  std::string to_json() const;
};

struct StepRecord {
  std::int64_t n = 0;         // schedule entry
  std::int64_t vertices = 0;
  std::int64_t dim_ker = 0;
  Rat normalized{0};
  std::optional<std::int64_t> dim_ker_compressed;  // diagonal runs: ker of P A_n P*
  double wall_seconds = 0;  // console only; excluded from CSV/JSON for reproducibility
  bool failed = false;
  std::string error;
};

struct DimensionReport {
  ExperimentSpec spec;
  std::vector<StepRecord> steps;
  std::optional<Rat> oracle;
  /// Without an oracle (Heisenberg runs): max pairwise gap of the normalized
  /// dimension over the tail half of the schedule, as a self-consistency stat.
  std::optional<Rat> tail_gap;

  /// Deterministic: header row, exact rationals as "p/q", decimals to 12 digits.
  std::string to_csv() const;
  std::string to_json() const;
  std::string to_svg() const;
};

/// Induced Cayley subgraphs on boxes [-n,n]^d (free abelian) or balls B_n(1)
/// (Heisenberg) for each schedule entry.
std::vector<ColoredGraph> folner_sequence(const GroupContext& ctx,
                                          std::span<const std::int64_t> schedule);

/// Full Cayley graphs of (Z/m)^d for each modulus of the strictly increasing schedule.
std::vector<ColoredGraph> quotient_sequence(const GroupContext& ctx,
                                            std::span<const std::int64_t> moduli);

/// Induced subgraphs of quotient Cayley graphs along a subgroup chain: step j
/// uses Z^d / (m_1 Z x ... x m_d Z) with moduli[j] (0 keeps a Z factor) and the
/// Folner box of radius folner[j] in the surviving coordinates, full residue
/// range in the finite ones.
std::vector<ColoredGraph> diagonal_sequence(int d,
                                            std::span<const std::vector<std::int64_t>> moduli,
                                            std::span<const std::int64_t> folner);

/// The Folner box/ball used by folner_sequence, as a set.
FolnerSet folner_shape(const GroupContext& ctx, std::int64_t n);

/// dim_G(ker A) for A over Z^d: d minus the generic rank of the Laurent symbol
/// matrix, evaluated at random rational points (three points, majority; a
/// persistent disagreement throws Error(OracleInconclusive)).
Rat torus_oracle(const GroupRingMatrix& A, std::uint64_t seed);

DimensionReport dimension_sequence(const ExperimentSpec& spec);

struct BoundSide {
  Rat bound{0};
  bool holds = false;
};

struct BoundReport {
  Rat target{0};
  Rat normalized_dim{0};
  std::int64_t dim_ker = 0;
  std::int64_t vertices = 0;
  Rat cover{0};
  std::int64_t tile_mass = 0;      // sum |H_i| over tiles
  BoundSide lower, upper;          // (target-delta)(1-eps)  <=  dim/|V|  <=  (1-eps)^-1(target+delta)+eps
  std::vector<std::int64_t> per_tile_dims;
  std::vector<Verdict> shape_minus, shape_plus;
};

/// Verifies the two-sided kernel-dimension bounds for the operator on one
/// graph with a verified eps-quasi-tiling. Property checks on the tiling's
/// shapes gate the run: any Refuted verdict throws Error(PreconditionViolation).
/// The minus checks run unnormalized, the plus checks normalized.
BoundReport bound_check(const GroupContext& ctx, const GroupRingMatrix& A, const ColoredGraph& B,
                        const Tiling& tiling, const Rat& eps, const Rat& delta, const Rat& target,
                        std::uint64_t seed, std::int64_t trials = 20);

/// Worker count for schedule-parallel runs: VNDIM_WORKERS or hardware concurrency.
int worker_count();

}  // namespace vndim
