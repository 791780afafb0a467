#pragma once

#include <iosfwd>
#include <string>

#include "cqnls/grid.hpp"

namespace cqnls {

// Binary field snapshot:
//   ASCII header "CQNLS1 J K a b c d t\n" (reals printed with 17 significant digits),
//   then (J+1)(K+1) little-endian float64 pairs (re, im), row-major in j then k.
inline constexpr const char* snapshot_magic = "CQNLS";
inline constexpr int snapshot_version = 1;

struct Snapshot {
    Field field;
    double t = 0;
};

void write_snapshot(std::ostream& out, const Field& field, double t);
Snapshot read_snapshot(std::istream& in);

/// File wrappers; failures to open or write throw IoError.
void write_snapshot(const std::string& path, const Field& field, double t);
Snapshot read_snapshot(const std::string& path);

}  // namespace cqnls
