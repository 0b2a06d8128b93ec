#include "vshock/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "vshock/errors.hpp"

namespace vshock {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

void write_ledger_csv(const std::string& path, const std::vector<Ledger>& rows,
                      const std::vector<double>* away_errors) {
  if (away_errors && away_errors->size() != rows.size()) {
    throw ValidationError(
        "write_ledger_csv: away_errors size differs from rows");
  }
  std::ofstream out(path);
  if (!out) throw ParseError("write_ledger_csv: cannot open " + path);
  out << "tau,weighted_entropy,G1,G2,Gs,D1,D2,Xdot,shift_quadratic,"
         "identity_residual,perturb_l2,psi_linf";
  if (away_errors) out << ",away_error";
  out << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Ledger& r = rows[i];
    out << format_double(r.tau) << "," << format_double(r.weighted_entropy)
        << "," << format_double(r.G1) << "," << format_double(r.G2) << ","
        << format_double(r.Gs) << "," << format_double(r.D1) << ","
        << format_double(r.D2) << "," << format_double(r.Xdot) << ","
        << format_double(r.shift_quadratic) << ","
        << format_double(r.identity_residual) << ","
        << format_double(r.perturb_l2) << "," << format_double(r.psi_linf);
    if (away_errors) out << "," << format_double((*away_errors)[i]);
    out << "\n";
  }
  if (!out) throw ParseError("write_ledger_csv: write failed on " + path);
}

void write_snapshot_csv(const std::string& path, const Field& field,
                        const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw ParseError("write_snapshot_csv: cannot open " + path);
  out << "# tau=" << format_double(field.tau) << "\n";
  out << "# X=" << format_double(field.X) << "\n";
  out << "# config=" << config_hash << "\n";
  out << "y,v,u,theta\n";
  for (int i = 0; i < field.grid.N; ++i) {
    out << format_double(grid_y(field.grid, i)) << ","
        << format_double(field.v[i]) << "," << format_double(field.u[i])
        << "," << format_double(field.theta[i]) << "\n";
  }
  if (!out) throw ParseError("write_snapshot_csv: write failed on " + path);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("ls_slope: needs two equally sized samples of >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ValidationError("ls_slope: abscissae are constant");
  return sxy / sxx;
}

}  // namespace vshock
