#ifndef VSHOCK_CSV_HPP_
#define VSHOCK_CSV_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vshock/entropy.hpp"
#include "vshock/field.hpp"

namespace vshock {

// Shortest decimal form that parses back to exactly x, stable across
// repeated invocations on one platform.
std::string format_double(double x);

// FNV-1a 64-bit over the bytes of s, and its fixed-width hex form.
std::uint64_t fnv1a64(const std::string& s);
std::string hash_hex(std::uint64_t h);

// Ledger time series: one row per output time, columns
// tau,weighted_entropy,G1,G2,Gs,D1,D2,Xdot,shift_quadratic,identity_residual,
// perturb_l2,psi_linf[,away_error].
void write_ledger_csv(const std::string& path, const std::vector<Ledger>& rows,
                      const std::vector<double>* away_errors = nullptr);

// Field snapshot: columns y,v,u,theta with "# key=value" header comments
// carrying tau, X and the config hash.
void write_snapshot_csv(const std::string& path, const Field& field,
                        const std::string& config_hash);

// Least-squares slope of y against x (both size >= 2).
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace vshock

#endif  // VSHOCK_CSV_HPP_
