#include "tamed/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace tamed {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Metadata::line() const {
  std::ostringstream s;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
  s << "# tamed " << kVersion << " command=" << command << " config_hash=" << hash
    << " seed=" << seed;
  for (const auto& [k, v] : extra) s << ' ' << k << '=' << v;
  return s.str();
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_order_csv(std::ostream& out, const Metadata& meta, const OrderStudy& study) {
  out << meta.line() << '\n';
  out << "h,rmse,ci,steps,mse,mse_ci\n";
  for (const auto& p : study.points) {
    out << format_real(p.h) << ',' << format_real(p.rmse) << ',' << format_real(p.rmse_ci) << ','
        << p.steps << ',' << format_real(p.mse) << ',' << format_real(p.mse_ci) << '\n';
  }
}

void write_evolution_csv(std::ostream& out, const Metadata& meta, const EvolutionStudy& study) {
  out << meta.line() << '\n';
  out << "t,alpha,mse,ci\n";
  for (const auto& r : study.rows) {
    out << format_real(r.t) << ',' << format_real(r.alpha) << ',' << format_real(r.mse) << ','
        << format_real(r.ci) << '\n';
  }
}

void write_distribution_csv(std::ostream& out, const Metadata& meta,
                            const DistributionStudy& study) {
  out << meta.line() << '\n';
  out << "coordinate,ks,n_a,n_b,mean_a,mean_b,var_a,var_b\n";
  for (const auto& c : study.coordinates) {
    out << c.coordinate << ',' << format_real(c.ks.statistic) << ',' << c.ks.n_a << ','
        << c.ks.n_b << ',' << format_real(c.a.mean) << ',' << format_real(c.b.mean) << ','
        << format_real(c.a.variance) << ',' << format_real(c.b.variance) << '\n';
  }
}

}  // namespace tamed
