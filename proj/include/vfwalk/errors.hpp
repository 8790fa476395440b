#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vfwalk {

// Every failure the library reports carries one of these codes so callers
// (the CLI in particular) can branch on the kind of failure.
enum class Errc {
  shape,               // matrix dimensions or symmetry
  parse,               // malformed text input
  asymmetric,          // v in rot(u) but u not in rot(v)
  loop,                // vertex adjacent to itself
  duplicate_neighbor,  // neighbor listed twice in one rotation
  disconnected,        // graph (or cover) not connected
  invalid_embedding,   // Euler defect odd or negative
  unsupported,         // precondition on embedding shape not met
  domain,              // numeric argument out of range
  parameter,           // bad generator / builtin parameter
  not_permutation,     // voltage image is not a permutation
  missing_edge,        // voltage file lacks an edge, or names a non-edge
  group_order,         // voltage closure order differs from declared r
  not_a_cycle,         // cycle-lift input is not a cycle
  io,                  // file could not be read or written
};

inline std::string_view to_string(Errc c) {
  switch (c) {
    case Errc::shape: return "shape";
    case Errc::parse: return "parse";
    case Errc::asymmetric: return "asymmetric";
    case Errc::loop: return "loop";
    case Errc::duplicate_neighbor: return "duplicate-neighbor";
    case Errc::disconnected: return "disconnected";
    case Errc::invalid_embedding: return "invalid-embedding";
    case Errc::unsupported: return "unsupported";
    case Errc::domain: return "domain";
    case Errc::parameter: return "parameter";
    case Errc::not_permutation: return "not-permutation";
    case Errc::missing_edge: return "missing-edge";
    case Errc::group_order: return "group-order";
    case Errc::not_a_cycle: return "not-a-cycle";
    case Errc::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace vfwalk
