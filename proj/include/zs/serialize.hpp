#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "zs/reconstruct.hpp"
#include "zs/scattering.hpp"
#include "zs/spectrum.hpp"

namespace zs {

// Complex numbers serialize as [re, im] pairs everywhere.
nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ScatteringData& sd);
nlohmann::json to_json(const GridEntry& e);
nlohmann::json to_json(const DiscreteEigen& e);
nlohmann::json to_json(const SpectrumResult& sr);
nlohmann::json to_json(const StokesFactorization& st);
nlohmann::json to_json(const ReflectionlessReport& rr);
nlohmann::json to_json(const RecoveredPotential& rp);
nlohmann::json to_json(const RoundtripReport& rr);

DiscreteEigen discrete_eigen_from_json(const nlohmann::json& j);
// { "upper": [...], "lower": [...] } with the spectrum-module eigen schema.
ReconstructionInput reconstruction_input_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ReconstructionInput& input);

// CSV emission. Columns:
//   scattering grid: k_re,k_im,a_re,a_im,abar_re,abar_im,b_re,b_im,
//                    bbar_re,bbar_im,unitarity_residual,spread
//   potential samples: x,q_re,q_im,r_re,r_im
//   trajectory: xi,w1_re,w1_im,w2_re,w2_im
std::string scattering_csv(const std::vector<GridEntry>& grid);
std::string potential_csv(const std::vector<PotentialSample>& samples);
std::string trajectory_csv(const JostSolution& js);

// Deterministic serialization: keys sorted (nlohmann objects are ordered
// maps), doubles rendered shortest-roundtrip, no timestamps.
std::string dump_json(const nlohmann::json& j);

}  // namespace zs
