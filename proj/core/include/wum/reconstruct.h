#pragma once

// Session reconstruction heuristics over per-user request streams.
//
//   TO1  - total session time: a session spans less than delta.
//   TO2  - page-stay time: consecutive requests at most rho apart.
//   NO   - navigation oriented: link-connected, inserting backward moves.
//   SSRA - Smart-SRA: time split (rho, delta) followed by maximal
//          link-connected sub-sessions built from dangling pages.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wum/topology.h"
#include "wum/types.h"

namespace wum::recon {

enum class Heuristic { kTO1, kTO2, kNO, kSSRA };

inline constexpr Heuristic kAllHeuristics[] = {Heuristic::kTO1, Heuristic::kTO2,
                                               Heuristic::kNO, Heuristic::kSSRA};

// "to1", "to2", "no", "ssra".
std::string_view to_string(Heuristic h);
std::optional<Heuristic> parse_heuristic(std::string_view text);

struct ReconstructionParams {
  Timestamp page_stay_rho = 600;            // seconds
  Timestamp session_duration_delta = 1800;  // seconds
  Heuristic heuristic = Heuristic::kSSRA;

  // Requires 0 < rho <= delta. Throws std::invalid_argument.
  void validate() const;
};

std::vector<Session> to1_reconstruct(const VisitStream& stream,
                                     const ReconstructionParams& params);

std::vector<Session> to2_reconstruct(const VisitStream& stream,
                                     const ReconstructionParams& params);

// Backward moves are inserted with timestamps one second apart ending one
// second before the request that needed them.
std::vector<Session> no_reconstruct(const VisitStream& stream,
                                    const WebTopology& topology);

// Phase 1: split where a gap exceeds rho, then greedily so that every
// candidate spans less than delta.
std::vector<Session> ssra_phase1(const VisitStream& stream,
                                 const ReconstructionParams& params);

// Phase 2: maximal link-connected sub-sessions of one candidate.
std::vector<Session> ssra_phase2(const Session& candidate,
                                 const WebTopology& topology,
                                 const ReconstructionParams& params);

std::vector<Session> smart_sra(const VisitStream& stream,
                               const WebTopology& topology,
                               const ReconstructionParams& params);

// Runs params.heuristic.
std::vector<Session> reconstruct(const VisitStream& stream,
                                 const WebTopology& topology,
                                 const ReconstructionParams& params);

// All streams; output grouped by stream order, then by first timestamp. The
// result does not depend on `workers`.
std::vector<Session> reconstruct_all(std::span<const VisitStream> streams,
                                     const WebTopology& topology,
                                     const ReconstructionParams& params,
                                     unsigned workers = 1);

}  // namespace wum::recon
