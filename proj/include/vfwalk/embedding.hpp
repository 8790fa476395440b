#pragma once

// Rotation systems and the orientable embeddings they describe.
//
// A rotation system lists, for every vertex, its neighbours in cyclic order.
// Faces are the orbits of the successor map on arcs
//     next(u, v) = (v, succ_v(u)),
// where succ_v is the cyclic successor in rot(v).  Arcs are ordered
// lexicographically by (tail, head); faces are ordered by their least arc and
// every facial walk starts at that least arc.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <fstream>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vfwalk/errors.hpp"

namespace vfwalk {

struct Arc {
  int tail = 0;
  int head = 0;

  auto operator<=>(const Arc&) const = default;

  Arc reversed() const { return {head, tail}; }
};

inline std::string to_string(const Arc& a) {
  return std::to_string(a.tail) + "->" + std::to_string(a.head);
}

class RotationSystem {
 public:
  RotationSystem() = default;

  /// Validates: indices in range, no loops, no repeated neighbours, symmetric
  /// adjacency, at least one edge, connected.
  explicit RotationSystem(std::vector<std::vector<int>> rot) : rot_(std::move(rot)) { validate(); }

  int vertex_count() const { return static_cast<int>(rot_.size()); }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& r : rot_) twice += r.size();
    return twice / 2;
  }

  int degree(int v) const { return static_cast<int>(rot_.at(static_cast<std::size_t>(v)).size()); }

  const std::vector<int>& rotation(int v) const { return rot_.at(static_cast<std::size_t>(v)); }

  const std::vector<std::vector<int>>& rotations() const { return rot_; }

  bool adjacent(int u, int v) const {
    const auto& r = rotation(u);
    return std::find(r.begin(), r.end(), v) != r.end();
  }

  /// Cyclic successor of u in rot(v).
  int successor(int v, int u) const {
    const auto& r = rotation(v);
    auto it = std::find(r.begin(), r.end(), u);
    if (it == r.end()) {
      throw Error(Errc::unsupported, "successor: " + std::to_string(u) + " is not a neighbour of " +
                                         std::to_string(v));
    }
    ++it;
    return it == r.end() ? r.front() : *it;
  }

  bool operator==(const RotationSystem&) const = default;

 private:
  void validate() const {
    const int n = vertex_count();
    if (n == 0) throw Error(Errc::parse, "rotation system has no vertices");
    for (int u = 0; u < n; ++u) {
      const auto& r = rot_[static_cast<std::size_t>(u)];
      for (int w : r) {
        if (w < 0 || w >= n) {
          throw Error(Errc::parse, "vertex " + std::to_string(u) + " lists out-of-range neighbour " +
                                       std::to_string(w));
        }
        if (w == u) throw Error(Errc::loop, "loop at vertex " + std::to_string(u));
      }
      std::vector<int> sorted = r;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(Errc::duplicate_neighbor,
                    "vertex " + std::to_string(u) + " lists a neighbour more than once");
      }
    }
    for (int u = 0; u < n; ++u) {
      for (int w : rot_[static_cast<std::size_t>(u)]) {
        if (!adjacent(w, u)) {
          throw Error(Errc::asymmetric, "vertex " + std::to_string(u) + " lists " +
                                            std::to_string(w) + " but not conversely");
        }
      }
    }
    if (edge_count() == 0) throw Error(Errc::parse, "rotation system has no edges");

    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::queue<int> todo;
    todo.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!todo.empty()) {
      const int u = todo.front();
      todo.pop();
      for (int w : rot_[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++reached;
          todo.push(w);
        }
      }
    }
    if (reached != n) {
      throw Error(Errc::disconnected, "graph is disconnected (" + std::to_string(reached) + " of " +
                                          std::to_string(n) + " vertices reachable from 0)");
    }
  }

  std::vector<std::vector<int>> rot_;
};

struct FacialWalk {
  std::vector<Arc> arcs;  // cyclic; arcs.front() is the least arc

  std::size_t degree() const { return arcs.size(); }

  /// Tails in walk order (with repeats if the walk revisits a vertex).
  std::vector<int> vertices() const {
    std::vector<int> out;
    out.reserve(arcs.size());
    for (const auto& a : arcs) out.push_back(a.tail);
    return out;
  }

  bool contains_vertex(int v) const {
    return std::any_of(arcs.begin(), arcs.end(), [v](const Arc& a) { return a.tail == v; });
  }

  bool operator==(const FacialWalk&) const = default;
};

struct EmbeddingType {
  int k = 0;  // vertices per face
  int d = 0;  // neighbours per vertex

  bool operator==(const EmbeddingType&) const = default;
};

class Embedding {
 public:
  Embedding() = default;

  Embedding(RotationSystem rotation, std::vector<Arc> arcs, std::vector<FacialWalk> faces)
      : rotation_(std::move(rotation)), arcs_(std::move(arcs)), faces_(std::move(faces)) {
    face_of_arc_.assign(arcs_.size(), -1);
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      for (const auto& a : faces_[f].arcs) face_of_arc_[arc_index(a)] = static_cast<int>(f);
    }
  }

  const RotationSystem& rotation() const { return rotation_; }
  int vertex_count() const { return rotation_.vertex_count(); }
  int edge_count() const { return static_cast<int>(arcs_.size() / 2); }
  int face_count() const { return static_cast<int>(faces_.size()); }
  int arc_count() const { return static_cast<int>(arcs_.size()); }

  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<FacialWalk>& faces() const { return faces_; }
  const FacialWalk& face(int f) const { return faces_.at(static_cast<std::size_t>(f)); }

  std::size_t arc_index(const Arc& a) const {
    auto it = std::lower_bound(arcs_.begin(), arcs_.end(), a);
    if (it == arcs_.end() || *it != a) {
      throw Error(Errc::unsupported, "arc " + to_string(a) + " is not in the embedding");
    }
    return static_cast<std::size_t>(it - arcs_.begin());
  }

  int face_of(std::size_t arc) const { return face_of_arc_.at(arc); }
  int face_of(const Arc& a) const { return face_of(arc_index(a)); }

  int vertex_degree(int v) const { return rotation_.degree(v); }
  int face_degree(int f) const { return static_cast<int>(face(f).degree()); }

  bool operator==(const Embedding& o) const {
    return rotation_ == o.rotation_ && arcs_ == o.arcs_ && faces_ == o.faces_;
  }

 private:
  RotationSystem rotation_;
  std::vector<Arc> arcs_;
  std::vector<FacialWalk> faces_;
  std::vector<int> face_of_arc_;
};

inline std::vector<Arc> sorted_arcs(const RotationSystem& rot) {
  std::vector<Arc> arcs;
  arcs.reserve(2 * rot.edge_count());
  for (int u = 0; u < rot.vertex_count(); ++u) {
    for (int w : rot.rotation(u)) arcs.push_back({u, w});
  }
  std::sort(arcs.begin(), arcs.end());
  return arcs;
}

/// Faces as orbits of next(u,v) = (v, succ_v(u)).
inline Embedding trace_faces(const RotationSystem& rot) {
  std::vector<Arc> arcs = sorted_arcs(rot);
  std::vector<char> used(arcs.size(), 0);
  auto index = [&](const Arc& a) {
    return static_cast<std::size_t>(std::lower_bound(arcs.begin(), arcs.end(), a) - arcs.begin());
  };

  std::vector<FacialWalk> faces;
  // Scanning arcs in sorted order means each orbit is first met at its least
  // arc, so walks already start canonically and come out sorted.
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (used[i]) continue;
    FacialWalk walk;
    Arc a = arcs[i];
    do {
      used[index(a)] = 1;
      walk.arcs.push_back(a);
      a = Arc{a.head, rot.successor(a.head, a.tail)};
    } while (a != arcs[i]);
    faces.push_back(std::move(walk));
  }
  return Embedding(rot, std::move(arcs), std::move(faces));
}

/// Genus from Euler's relation n - l + s = 2 - 2g.
inline int genus(const Embedding& emb) {
  const int defect = 2 - emb.vertex_count() + emb.edge_count() - emb.face_count();
  if (defect < 0 || defect % 2 != 0) {
    throw Error(Errc::invalid_embedding,
                "Euler defect " + std::to_string(defect) + " is not a non-negative even integer");
  }
  return defect / 2;
}

inline bool is_circular(const Embedding& emb) {
  for (const auto& f : emb.faces()) {
    if (f.degree() < 3) return false;  // a 2-walk u->v->u is not a cycle
    std::vector<int> vs = f.vertices();
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) return false;
  }
  return true;
}

inline std::optional<EmbeddingType> embedding_type(const Embedding& emb) {
  const int d = emb.vertex_degree(0);
  for (int v = 1; v < emb.vertex_count(); ++v) {
    if (emb.vertex_degree(v) != d) return std::nullopt;
  }
  const int k = emb.face_degree(0);
  for (int f = 1; f < emb.face_count(); ++f) {
    if (emb.face_degree(f) != k) return std::nullopt;
  }
  return EmbeddingType{k, d};
}

inline bool vertex_regular(const Embedding& emb) {
  for (int v = 1; v < emb.vertex_count(); ++v) {
    if (emb.vertex_degree(v) != emb.vertex_degree(0)) return false;
  }
  return true;
}

inline bool face_regular(const Embedding& emb) {
  for (int f = 1; f < emb.face_count(); ++f) {
    if (emb.face_degree(f) != emb.face_degree(0)) return false;
  }
  return true;
}

inline void require_circular(const Embedding& emb, const char* what) {
  if (!is_circular(emb)) {
    throw Error(Errc::unsupported, std::string(what) + ": embedding is not circular");
  }
}

/// Arc of the dual corresponding to arc a: from the face of a to the face of
/// its reverse.
inline Arc dual_arc(const Embedding& emb, const Arc& a) {
  return {emb.face_of(a), emb.face_of(a.reversed())};
}

/// Dual embedding. Vertex f of the dual is face f of emb; its rotation lists
/// the faces across each arc of f, in walk order.
inline Embedding dual(const Embedding& emb) {
  require_circular(emb, "dual");
  std::vector<std::vector<int>> rot(static_cast<std::size_t>(emb.face_count()));
  for (int f = 0; f < emb.face_count(); ++f) {
    for (const auto& a : emb.face(f).arcs) {
      rot[static_cast<std::size_t>(f)].push_back(emb.face_of(a.reversed()));
    }
  }
  try {
    return trace_faces(RotationSystem(std::move(rot)));
  } catch (const Error& e) {
    if (e.code() == Errc::loop || e.code() == Errc::duplicate_neighbor) {
      throw Error(Errc::unsupported, std::string("dual: dual graph is not simple (") + e.what() + ")");
    }
    throw;
  }
}

/// The other consistent orientation: every rotation reversed, which reverses
/// every facial walk.
inline Embedding reverse_orientation(const Embedding& emb) {
  std::vector<std::vector<int>> rot = emb.rotation().rotations();
  for (auto& r : rot) std::reverse(r.begin(), r.end());
  return trace_faces(RotationSystem(std::move(rot)));
}

inline Embedding generate_k4_planar() {
  return trace_faces(RotationSystem({{1, 3, 2}, {0, 2, 3}, {0, 3, 1}, {0, 1, 2}}));
}

/// Toroidal embedding of C_n x C_n; vertex (i,j) has index i*n + j.
inline Embedding generate_torus_grid(int n) {
  if (n < 3) throw Error(Errc::parameter, "torus grid needs n >= 3, got " + std::to_string(n));
  auto id = [n](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
  std::vector<std::vector<int>> rot(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rot[static_cast<std::size_t>(id(i, j))] = {id(i, j + 1), id(i + 1, j), id(i, j - 1), id(i - 1, j)};
    }
  }
  return trace_faces(RotationSystem(std::move(rot)));
}

// ---------------------------------------------------------------------------
// Text format
//
//   emb 1
//   n <count>
//   rot <v>: <w1> <w2> ... <wd>
//
// '#' at the start of a line makes it a comment; blank lines are skipped.

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Non-blank, non-comment lines paired with their 1-based line numbers.
inline std::vector<std::pair<int, std::string>> significant_lines(std::string_view text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(number, std::string(t));
  }
  return out;
}

inline long parse_int(std::string_view token, int line, const char* what) {
  std::string s(token);
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw Error(Errc::parse, "line " + std::to_string(line) + ": expected integer " + what + ", got '" + s + "'");
  }
  return value;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline RotationSystem parse_embedding(std::string_view text) {
  const auto lines = detail::significant_lines(text);
  if (lines.empty() || detail::split_ws(lines[0].second) != std::vector<std::string>{"emb", "1"}) {
    throw Error(Errc::parse, "embedding file must start with 'emb 1'");
  }
  if (lines.size() < 2) throw Error(Errc::parse, "missing 'n <count>' line");
  const auto header = detail::split_ws(lines[1].second);
  if (header.size() != 2 || header[0] != "n") {
    throw Error(Errc::parse, "line " + std::to_string(lines[1].first) + ": expected 'n <count>'");
  }
  const long n = detail::parse_int(header[1], lines[1].first, "vertex count");
  if (n <= 0) throw Error(Errc::parse, "vertex count must be positive");

  std::vector<std::vector<int>> rot(static_cast<std::size_t>(n));
  std::vector<char> given(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto& [number, line] = lines[i];
    const auto colon = line.find(':');
    const auto head = detail::split_ws(std::string_view(line).substr(0, colon));
    if (colon == std::string::npos || head.size() != 2 || head[0] != "rot") {
      throw Error(Errc::parse, "line " + std::to_string(number) + ": expected 'rot <v>: <neighbours>'");
    }
    const long v = detail::parse_int(head[1], number, "vertex");
    if (v < 0 || v >= n) {
      throw Error(Errc::parse, "line " + std::to_string(number) + ": vertex " + std::to_string(v) + " out of range");
    }
    if (given[static_cast<std::size_t>(v)]) {
      throw Error(Errc::parse, "line " + std::to_string(number) + ": rotation of vertex " + std::to_string(v) +
                                   " given twice");
    }
    given[static_cast<std::size_t>(v)] = 1;
    for (const auto& tok : detail::split_ws(std::string_view(line).substr(colon + 1))) {
      rot[static_cast<std::size_t>(v)].push_back(static_cast<int>(detail::parse_int(tok, number, "neighbour")));
    }
  }
  for (long v = 0; v < n; ++v) {
    if (!given[static_cast<std::size_t>(v)]) {
      throw Error(Errc::parse, "no rotation given for vertex " + std::to_string(v));
    }
  }
  return RotationSystem(std::move(rot));
}

inline std::string format_embedding(const RotationSystem& rot) {
  std::ostringstream out;
  out << "emb 1\n"
      << "n " << rot.vertex_count() << "\n";
  for (int v = 0; v < rot.vertex_count(); ++v) {
    out << "rot " << v << ":";
    for (int w : rot.rotation(v)) out << ' ' << w;
    out << "\n";
  }
  return out.str();
}

inline RotationSystem read_embedding_file(const std::string& path) {
  return parse_embedding(detail::read_file(path));
}

}  // namespace vfwalk
