#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tamed/studies.hpp"

namespace tamed {

inline constexpr std::string_view kVersion = "0.3.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view text);

/// First line of every emitted file: "# tamed <version> key=value ...".
struct Metadata {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> extra;

  std::string line() const;
};

/// Shortest round-trip decimal form; output is a pure function of the bits.
std::string format_real(double value);

/// Columns h,rmse,ci,steps,mse,mse_ci.
void write_order_csv(std::ostream& out, const Metadata& meta, const OrderStudy& study);
/// Columns t,alpha,mse,ci.
void write_evolution_csv(std::ostream& out, const Metadata& meta, const EvolutionStudy& study);
/// Columns coordinate,ks,n_a,n_b,mean_a,mean_b,var_a,var_b.
void write_distribution_csv(std::ostream& out, const Metadata& meta,
                            const DistributionStudy& study);

}  // namespace tamed
