#pragma once

// Line-oriented model files.
//
//   # comment
//   n = 2
//   N = 3
//   statistics = fermion            # boson | fermion
//   coupling = spin_half_params     # spin_half_params | explicit | yang_gaudin | zero
//   a_d = 0.5                       # spin_half_params: a_d b_d f_d g_d real,
//   c_x = 0.1,-0.2                  #   c_x e1 e2 complex "re,im"
//   alpha = 1.0                     # yang_gaudin: alpha * I + beta * swap
//   matrix h                        # explicit coupling: n^2 rows of n^2 entries
//   1,0 0,0 ...
//   end
//   matrix G                        # separated G+ = G- (or G_plus / G_minus)
//   a = 1                           # bound-state exponent scalars
//   c = 0
//   seed = 7
//   spin_vector = 1,0 0,0 ...       # u_identity, n^N entries
//   bc = delta                      # delta | bound1 | bound2 | explicit | scalar
//   bc_scalar = theta a b c d       # for bc = scalar
//   matrix bc_B ... end             # for bound1 / bound2
//   matrix A ... end                # A B C D for bc = explicit
//
// Complex entries are "re,im" without inner whitespace, or a bare real.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spincontact/models.hpp"

namespace spincontact::cli {

enum class CouplingKind { Zero, SpinHalfParams, Explicit, YangGaudin };

struct ModelFile {
  int n = 0;
  int N = 0;
  Statistics statistics = Statistics::Boson;
  CouplingKind coupling_kind = CouplingKind::Zero;
  SpinHalfParams params;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<Matrix> h_explicit;
  std::optional<Matrix> g_plus;
  std::optional<Matrix> g_minus;
  std::optional<Vector> spin_vector;
  double a = 1.0;
  double c = 0.0;
  std::optional<std::uint64_t> seed;
  std::string bc_kind;
  std::optional<ScalarBC> scalar_bc;
  std::map<std::string, Matrix> bc_blocks;  ///< "bc_B", "A", "B", "C", "D"
  std::string digest;                        ///< FNV-1a 64 of the source text

  SpinConfig config(int particles_override = 0) const {
    return SpinConfig(particles_override > 0 ? particles_override : N, n, statistics);
  }

  CouplingMatrix coupling() const {
    const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
    switch (coupling_kind) {
      case CouplingKind::SpinHalfParams:
        if (n != 2) throw ValidationError("coupling spin_half_params requires n = 2");
        return spin_half_coupling(params);
      case CouplingKind::Explicit:
        return CouplingMatrix(*h_explicit);
      case CouplingKind::YangGaudin:
        return yang_gaudin_coupling(n, alpha, beta);
      case CouplingKind::Zero:
        break;
    }
    return CouplingMatrix(Matrix::Zero(n2, n2));
  }

  bool has_separated() const { return g_plus.has_value(); }

  SeparatedModel separated() const {
    if (!g_plus) throw ValidationError("model has no separated G");
    return SeparatedModel(*g_plus, g_minus ? *g_minus : *g_plus);
  }
};

inline std::string fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << hash;
  return os.str();
}

namespace detail {

struct Cursor {
  std::size_t line;
  std::size_t column;
};

inline std::string_view trim(std::string_view s, std::size_t* offset = nullptr) {
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  std::size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  if (offset) *offset = b;
  return s.substr(b, e - b);
}

inline double parse_real(std::string_view tok, Cursor at) {
  const std::string s(tok);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("expected a real number, got '" + s + "'", at.line, at.column);
  }
  if (used != s.size())
    throw ParseError("trailing characters in number '" + s + "'", at.line, at.column);
  return v;
}

inline Complex parse_complex(std::string_view tok, Cursor at) {
  const auto comma = tok.find(',');
  if (comma == std::string_view::npos) return {parse_real(tok, at), 0.0};
  const double re = parse_real(tok.substr(0, comma), at);
  const double im =
      parse_real(tok.substr(comma + 1), {at.line, at.column + comma + 1});
  return {re, im};
}

/// Whitespace-separated tokens with their columns (1-based).
inline std::vector<std::pair<std::string_view, std::size_t>> tokens(std::string_view s,
                                                                    std::size_t col0) {
  std::vector<std::pair<std::string_view, std::size_t>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > b) out.emplace_back(s.substr(b, i - b), col0 + b);
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

}  // namespace detail

inline ModelFile parse_model(std::string_view text) {
  ModelFile m;
  m.digest = fnv1a64(text);
  std::vector<std::string_view> lines;
  {
    std::size_t b = 0;
    while (b <= text.size()) {
      const auto e = text.find('\n', b);
      if (e == std::string_view::npos) {
        lines.push_back(text.substr(b));
        break;
      }
      lines.push_back(text.substr(b, e - b));
      b = e + 1;
    }
  }

  std::map<std::string, Matrix> matrices;
  std::map<std::string, std::pair<std::string, detail::Cursor>> values;

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line_no = ln + 1;
    std::size_t off = 0;
    const std::string_view body = detail::trim(detail::strip_comment(lines[ln]), &off);
    if (body.empty()) continue;
    if (body.rfind("matrix", 0) == 0 && (body.size() == 6 || body[6] == ' ' || body[6] == '\t')) {
      const std::string name(detail::trim(body.substr(6)));
      if (name.empty()) throw ParseError("matrix block needs a name", line_no, off + 1);
      std::vector<std::vector<Complex>> rows;
      std::size_t start_line = line_no;
      bool closed = false;
      while (++ln < lines.size()) {
        std::size_t roff = 0;
        const std::string_view row = detail::trim(detail::strip_comment(lines[ln]), &roff);
        if (row.empty()) continue;
        if (row == "end") {
          closed = true;
          break;
        }
        std::vector<Complex> entries;
        for (const auto& [tok, col] : detail::tokens(row, roff + 1))
          entries.push_back(detail::parse_complex(tok, {ln + 1, col}));
        if (!rows.empty() && entries.size() != rows.front().size())
          throw ParseError("matrix '" + name + "' row has " + std::to_string(entries.size()) +
                               " entries, expected " + std::to_string(rows.front().size()),
                           ln + 1, roff + 1);
        rows.push_back(std::move(entries));
      }
      if (!closed) throw ParseError("matrix '" + name + "' missing 'end'", start_line, off + 1);
      if (rows.empty() || rows.size() != rows.front().size())
        throw ParseError("matrix '" + name + "' must be square", start_line, off + 1);
      Matrix mat(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows.size(); ++c)
          mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
      if (matrices.count(name))
        throw ParseError("duplicate matrix '" + name + "'", start_line, off + 1);
      matrices.emplace(name, std::move(mat));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected 'key = value' or 'matrix NAME'", line_no, off + 1);
    const std::string key(detail::trim(body.substr(0, eq)));
    std::size_t voff = 0;
    const std::string value(detail::trim(body.substr(eq + 1), &voff));
    if (key.empty()) throw ParseError("empty key", line_no, off + 1);
    if (values.count(key)) throw ParseError("duplicate key '" + key + "'", line_no, off + 1);
    values.emplace(key, std::make_pair(value, detail::Cursor{line_no, off + eq + 2 + voff}));
  }

  auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, detail::Cursor>> {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    auto v = it->second;
    values.erase(it);
    return v;
  };
  auto take_int = [&](const std::string& key) -> std::optional<long long> {
    auto v = take(key);
    if (!v) return std::nullopt;
    const double d = detail::parse_real(v->first, v->second);
    if (d != static_cast<double>(static_cast<long long>(d)))
      throw ParseError("'" + key + "' must be an integer", v->second.line, v->second.column);
    return static_cast<long long>(d);
  };
  auto take_real = [&](const std::string& key, double& out) {
    if (auto v = take(key)) out = detail::parse_real(v->first, v->second);
  };
  auto take_complex = [&](const std::string& key, Complex& out) {
    if (auto v = take(key)) out = detail::parse_complex(v->first, v->second);
  };

  const auto n = take_int("n");
  const auto N = take_int("N");
  if (!n) throw ParseError("missing required key 'n'", 1, 1);
  if (!N) throw ParseError("missing required key 'N'", 1, 1);
  m.n = static_cast<int>(*n);
  m.N = static_cast<int>(*N);
  if (m.n < 1 || m.N < 1) throw ParseError("'n' and 'N' must be >= 1", 1, 1);

  if (auto s = take("statistics")) {
    if (s->first == "boson")
      m.statistics = Statistics::Boson;
    else if (s->first == "fermion")
      m.statistics = Statistics::Fermion;
    else
      throw ParseError("statistics must be 'boson' or 'fermion'", s->second.line, s->second.column);
  }

  std::string coupling = matrices.count("h") ? "explicit" : "zero";
  std::optional<detail::Cursor> coupling_at;
  if (auto s = take("coupling")) {
    coupling = s->first;
    coupling_at = s->second;
  }
  if (coupling == "spin_half_params") {
    m.coupling_kind = CouplingKind::SpinHalfParams;
    take_real("a_d", m.params.a_d);
    take_real("b_d", m.params.b_d);
    take_real("f_d", m.params.f_d);
    take_real("g_d", m.params.g_d);
    take_complex("c_x", m.params.c_x);
    take_complex("e1", m.params.e1);
    take_complex("e2", m.params.e2);
  } else if (coupling == "explicit") {
    m.coupling_kind = CouplingKind::Explicit;
    auto it = matrices.find("h");
    if (it == matrices.end())
      throw ParseError("coupling = explicit needs a 'matrix h' block",
                       coupling_at ? coupling_at->line : 1, 1);
    m.h_explicit = it->second;
    matrices.erase(it);
  } else if (coupling == "yang_gaudin") {
    m.coupling_kind = CouplingKind::YangGaudin;
    take_real("alpha", m.alpha);
    take_real("beta", m.beta);
  } else if (coupling == "zero") {
    m.coupling_kind = CouplingKind::Zero;
  } else {
    throw ParseError("unknown coupling kind '" + coupling + "'",
                     coupling_at ? coupling_at->line : 1, coupling_at ? coupling_at->column : 1);
  }

  take_real("a", m.a);
  take_real("c", m.c);
  if (auto s = take_int("seed")) m.seed = static_cast<std::uint64_t>(*s);

  if (auto v = take("spin_vector")) {
    const auto toks = detail::tokens(v->first, v->second.column);
    Vector vec(static_cast<Eigen::Index>(toks.size()));
    for (std::size_t t = 0; t < toks.size(); ++t)
      vec(static_cast<Eigen::Index>(t)) =
          detail::parse_complex(toks[t].first, {v->second.line, toks[t].second});
    m.spin_vector = std::move(vec);
  }

  if (auto b = take("bc")) {
    m.bc_kind = b->first;
    static const char* kinds[] = {"delta", "bound1", "bound2", "explicit", "scalar"};
    bool ok = false;
    for (const char* k : kinds) ok = ok || m.bc_kind == k;
    if (!ok) throw ParseError("unknown bc kind '" + m.bc_kind + "'", b->second.line, b->second.column);
  }
  if (auto s = take("bc_scalar")) {
    const auto toks = detail::tokens(s->first, s->second.column);
    if (toks.size() != 5)
      throw ParseError("bc_scalar needs 'theta a b c d'", s->second.line, s->second.column);
    double v[5];
    for (int t = 0; t < 5; ++t)
      v[t] = detail::parse_real(toks[static_cast<std::size_t>(t)].first,
                                {s->second.line, toks[static_cast<std::size_t>(t)].second});
    m.scalar_bc = ScalarBC{v[0], v[1], v[2], v[3], v[4]};
  }

  auto take_matrix = [&](const std::string& name) -> std::optional<Matrix> {
    auto it = matrices.find(name);
    if (it == matrices.end()) return std::nullopt;
    Matrix out = it->second;
    matrices.erase(it);
    return out;
  };
  if (auto g = take_matrix("G")) {
    m.g_plus = *g;
    m.g_minus = *g;
  }
  if (auto g = take_matrix("G_plus")) m.g_plus = *g;
  if (auto g = take_matrix("G_minus")) m.g_minus = *g;
  if (m.g_minus && !m.g_plus) throw ParseError("G_minus given without G_plus", 1, 1);
  if (m.g_plus && !m.g_minus) m.g_minus = m.g_plus;
  for (const char* name : {"bc_B", "A", "B", "C", "D"})
    if (auto b = take_matrix(name)) m.bc_blocks.emplace(name, *b);

  if (!values.empty()) {
    const auto& [key, v] = *values.begin();
    throw ParseError("unknown key '" + key + "'", v.second.line, 1);
  }
  if (!matrices.empty()) throw ParseError("unknown matrix '" + matrices.begin()->first + "'", 1, 1);

  const Eigen::Index n2 = static_cast<Eigen::Index>(m.n) * m.n;
  auto check_dim = [&](const Matrix& mat, const std::string& name) {
    if (mat.rows() != n2)
      throw ParseError("matrix '" + name + "' is " + std::to_string(mat.rows()) + "x" +
                           std::to_string(mat.rows()) + ", expected n^2 = " + std::to_string(n2),
                       1, 1);
  };
  if (m.h_explicit) check_dim(*m.h_explicit, "h");
  if (m.g_plus) check_dim(*m.g_plus, "G_plus");
  if (m.g_minus) check_dim(*m.g_minus, "G_minus");
  for (const auto& [name, mat] : m.bc_blocks) check_dim(mat, name);
  return m;
}

inline ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

inline std::string format_complex_entry(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << ',' << z.imag();
  return os.str();
}

inline std::string format_matrix_block(const std::string& name, const Matrix& m) {
  std::ostringstream os;
  os << "matrix " << name << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << format_complex_entry(m(r, c));
    }
    os << '\n';
  }
  os << "end\n";
  return os.str();
}

/// Seeded random swap-commuting explicit model.
inline std::string generate_model(int n, int N, Statistics stats, std::uint64_t seed) {
  SpinConfig(N, n, stats);
  Xoshiro256 rng(seed);
  const CouplingMatrix h = random_commutant(rng, n);
  std::ostringstream os;
  os << "# random swap-commuting coupling, seed " << seed << '\n';
  os << "n = " << n << '\n' << "N = " << N << '\n';
  os << "statistics = " << to_string(stats) << '\n';
  os << "seed = " << seed << '\n';
  os << "coupling = explicit\n";
  os << format_matrix_block("h", h.matrix());
  return os.str();
}

}  // namespace spincontact::cli
