#include "lchca/ca.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace lchca {

std::string config_to_string(Prime p, const Configuration& cells) {
  std::ostringstream os;
  const bool compact = p.value() <= 10;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!compact && i) os << ',';
    os << cells[i];
  }
  return os.str();
}

Configuration parse_configuration(Prime p, std::string_view text,
                                  std::optional<std::uint32_t> expected_len) {
  Configuration cells;
  if (text.find(',') != std::string_view::npos) {
    std::istringstream is{std::string(text)};
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("configuration: bad digit \"" + tok + "\"");
      }
      std::uint64_t d = std::stoull(tok);
      if (d >= p.value()) {
        throw ParseError("configuration: digit " + tok + " not reduced mod " +
                         std::to_string(p.value()));
      }
      cells.push_back(static_cast<std::uint32_t>(d));
    }
  } else {
    if (p.value() > 10) {
      throw ParseError("configuration: commas required for p > 10");
    }
    for (char ch : text) {
      if (ch < '0' || ch > '9') {
        throw ParseError(std::string("configuration: bad digit '") + ch + "'");
      }
      std::uint32_t d = static_cast<std::uint32_t>(ch - '0');
      if (d >= p.value()) {
        throw ParseError("configuration: digit " + std::string(1, ch) +
                         " not reduced mod " + std::to_string(p.value()));
      }
      cells.push_back(d);
    }
  }
  if (cells.empty()) throw ParseError("configuration: empty");
  if (expected_len && cells.size() != *expected_len) {
    throw ParseError("configuration: expected " + std::to_string(*expected_len) +
                     " cells, got " + std::to_string(cells.size()));
  }
  return cells;
}

MatrixFp build_matrix(const RuleSpec& spec) {
  if (spec.cells == 0) throw DomainError("build_matrix: no cells");
  if (spec.weights.size() != spec.cells) {
    throw DomainError("build_matrix: need one weight map per cell");
  }
  MatrixFp m(spec.p, spec.cells, spec.cells);
  for (std::uint32_t i = 0; i < spec.cells; ++i) {
    for (const auto& [offset, w] : spec.weights[i]) {
      if (std::find(spec.neighborhood.begin(), spec.neighborhood.end(), offset) ==
          spec.neighborhood.end()) {
        throw DomainError("build_matrix: cell " + std::to_string(i) +
                          " uses offset " + std::to_string(offset) +
                          " outside the declared neighborhood");
      }
      const std::int64_t col = std::int64_t{i} + offset;
      if (col < 0 || col >= spec.cells) continue;  // null boundary
      m.set(i, static_cast<std::uint32_t>(col), w % spec.p.value());
    }
  }
  return m;
}

std::string_view to_string(CaClass c) {
  switch (c) {
    case CaClass::uniform:
      return "uniform";
    case CaClass::hybrid_group:
      return "hybrid-group";
    case CaClass::hybrid_max_length:
      return "hybrid-max-length";
  }
  return "?";
}

namespace {
CaClass classify_poly(const Polynomial& fm) {
  if (!is_irreducible(fm)) return CaClass::uniform;
  return is_primitive(fm) ? CaClass::hybrid_max_length : CaClass::hybrid_group;
}
}  // namespace

CaClass classify(const MatrixFp& m) {
  if (!m.is_square()) throw DomainError("classify: matrix must be square");
  return classify_poly(char_poly(m));
}

Lchca::Lchca(MatrixFp m, Polynomial fm, CaClass cls)
    : m_(std::move(m)), fm_(std::move(fm)), class_(cls) {
  build_sparse_rows();
}

void Lchca::build_sparse_rows() {
  sparse_.resize(m_.rows());
  for (std::uint32_t i = 0; i < m_.rows(); ++i) {
    sparse_[i].clear();
    for (std::uint32_t j = 0; j < m_.cols(); ++j) {
      if (m_(i, j) != 0) sparse_[i].emplace_back(j, m_(i, j));
    }
  }
}

Lchca Lchca::from_matrix(MatrixFp m) {
  if (!m.is_square()) throw DomainError("Lchca: transition matrix must be square");
  Polynomial fm = char_poly(m);
  CaClass cls = classify_poly(fm);
  return Lchca(std::move(m), std::move(fm), cls);
}

Lchca Lchca::from_rule(const RuleSpec& spec) { return from_matrix(build_matrix(spec)); }

std::uint64_t Lchca::order() const {
  if (!is_hybrid()) {
    throw UnsupportedError("Lchca::order: characteristic polynomial is reducible");
  }
  return mat_order(m_);
}

Configuration Lchca::step(const Configuration& s) const {
  if (s.size() != cells()) throw DomainError("Lchca::step: length mismatch");
  const std::uint64_t p = modulus().value();
  Configuration t(s.size(), 0);
  for (std::uint32_t i = 0; i < cells(); ++i) {
    std::uint64_t acc = 0;
    for (const auto& [j, w] : sparse_[i]) {
      acc += std::uint64_t{w} * s[j];
    }
    t[i] = static_cast<std::uint32_t>(acc % p);
  }
  return t;
}

Configuration Lchca::run(const Configuration& s, std::uint64_t tau) const {
  if (s.size() != cells()) throw DomainError("Lchca::run: length mismatch");
  if (tau == 0) return s;
  return mat_vec(mat_pow(m_, tau), s);
}

std::optional<std::uint64_t> Lchca::cycle_length(const Configuration& s) const {
  if (s.size() != cells()) throw DomainError("Lchca::cycle_length: length mismatch");
  if (!is_hybrid()) {
    throw UnsupportedError("Lchca::cycle_length: requires an irreducible characteristic polynomial");
  }
  if (std::all_of(s.begin(), s.end(), [](std::uint32_t d) { return d == 0; })) {
    return std::nullopt;  // dead configuration
  }
  // With an irreducible characteristic polynomial every nonzero orbit has
  // the full matrix order.
  return order();
}

namespace {

std::uint64_t state_index(const Configuration& s, std::uint64_t p) {
  std::uint64_t idx = 0;
  for (std::uint32_t d : s) idx = idx * p + d;
  return idx;
}

Configuration state_from_index(std::uint64_t idx, std::uint64_t p, std::uint32_t n) {
  Configuration s(n, 0);
  for (std::uint32_t i = n; i-- > 0;) {
    s[i] = static_cast<std::uint32_t>(idx % p);
    idx /= p;
  }
  return s;
}

}  // namespace

std::vector<Lchca::Cycle> Lchca::enumerate_cycles() const {
  if (!is_hybrid()) {
    throw UnsupportedError("Lchca::enumerate_cycles: requires a hybrid CA");
  }
  const std::uint64_t p = modulus().value();
  auto total = checked_pow_u64(modulus().value(), cells());
  if (!total || *total > (std::uint64_t{1} << 24)) {
    throw CapacityError("Lchca::enumerate_cycles: state space exceeds 2^24");
  }
  std::vector<bool> visited(*total, false);
  std::vector<Cycle> cycles;
  for (std::uint64_t idx = 1; idx < *total; ++idx) {
    if (visited[idx]) continue;
    Configuration rep = state_from_index(idx, p, cells());
    Configuration v = rep;
    std::uint64_t len = 0;
    do {
      visited[state_index(v, p)] = true;
      v = step(v);
      ++len;
    } while (state_index(v, p) != idx);
    cycles.push_back({std::move(rep), len});
  }
  return cycles;
}

std::size_t UniformityReport::pair_index(std::uint32_t i, std::uint32_t j) const {
  // row-major upper triangle, i < j
  return static_cast<std::size_t>(i) * cells - static_cast<std::size_t>(i) * (i + 1) / 2 +
         (j - i - 1);
}

double UniformityReport::cell_frequency(std::uint32_t cell, std::uint32_t digit) const {
  if (samples == 0) return 0.0;
  return static_cast<double>(cell_counts[cell][digit]) / static_cast<double>(samples);
}

double UniformityReport::chi_square(std::uint32_t cell) const {
  if (samples == 0) return 0.0;
  const double expected = static_cast<double>(samples) / p;
  double stat = 0.0;
  for (std::uint32_t d = 0; d < p; ++d) {
    const double diff = static_cast<double>(cell_counts[cell][d]) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

double UniformityReport::pair_deviation(std::uint32_t i, std::uint32_t j) const {
  if (samples == 0) return 0.0;
  const auto& joint = pair_counts[pair_index(i, j)];
  double worst = 0.0;
  for (std::uint32_t a = 0; a < p; ++a) {
    for (std::uint32_t b = 0; b < p; ++b) {
      const double pj = static_cast<double>(joint[a * p + b]) / static_cast<double>(samples);
      const double pa = cell_frequency(i, a);
      const double pb = cell_frequency(j, b);
      worst = std::max(worst, std::abs(pj - pa * pb));
    }
  }
  return worst;
}

double UniformityReport::max_pair_deviation() const {
  double worst = 0.0;
  for (std::uint32_t i = 0; i < cells; ++i) {
    for (std::uint32_t j = i + 1; j < cells; ++j) {
      worst = std::max(worst, pair_deviation(i, j));
    }
  }
  return worst;
}

UniformityReport uniformity_report(const Lchca& ca, std::uint64_t samples,
                                   std::uint64_t seed, unsigned jobs) {
  if (!ca.is_max_length()) {
    throw UnsupportedError("uniformity_report: requires a maximum-length CA");
  }
  const std::uint32_t n = ca.cells();
  const std::uint32_t p = ca.modulus().value();
  auto pn = checked_pow_u64(p, n);
  if (!pn || *pn - 1 > kMaxGroupOrder) {
    throw CapacityError("uniformity_report: state space exceeds the 2^48 cap");
  }
  const std::uint64_t period = *pn - 1;

  UniformityReport report;
  report.samples = samples;
  report.cells = n;
  report.p = p;
  report.cell_counts.assign(n, std::vector<std::uint64_t>(p, 0));
  report.pair_counts.assign(std::size_t{n} * (n - 1) / 2,
                            std::vector<std::uint64_t>(std::size_t{p} * p, 0));

  // Fixed nonzero start configuration derived from the seed.
  SplitMix64 srng(seed ^ 0x5eedc0de5eedc0deULL);
  Configuration start(n, 0);
  do {
    for (auto& d : start) d = static_cast<std::uint32_t>(srng.below(p));
  } while (std::all_of(start.begin(), start.end(),
                       [](std::uint32_t d) { return d == 0; }));
  report.start = start;
  if (samples == 0) return report;

  // Binary powers of the transition matrix: applying M^tau to a vector then
  // costs log(tau) banded multiplies instead of a full mat_pow per sample.
  std::vector<MatrixFp> powers;
  powers.push_back(ca.matrix());
  for (std::uint64_t span = 1; span < period; span <<= 1) {
    powers.push_back(powers.back() * powers.back());
  }

  auto tally_range = [&](std::uint64_t lo, std::uint64_t hi, UniformityReport& out) {
    for (std::uint64_t k = lo; k < hi; ++k) {
      SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ULL + k * 0xbf58476d1ce4e5b9ULL));
      const std::uint64_t tau = rng.below(period);
      Configuration v = start;
      std::uint64_t bits = tau;
      std::size_t b = 0;
      while (bits != 0) {
        if (bits & 1) v = mat_vec(powers[b], v);
        bits >>= 1;
        ++b;
      }
      for (std::uint32_t i = 0; i < n; ++i) ++out.cell_counts[i][v[i]];
      std::size_t pair = 0;
      for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j, ++pair) {
          ++out.pair_counts[pair][std::size_t{v[i]} * p + v[j]];
        }
      }
    }
  };

  if (jobs <= 1) {
    tally_range(0, samples, report);
    return report;
  }

  std::vector<UniformityReport> shards(jobs);
  for (auto& shard : shards) {
    shard.cells = n;
    shard.p = p;
    shard.cell_counts.assign(n, std::vector<std::uint64_t>(p, 0));
    shard.pair_counts.assign(std::size_t{n} * (n - 1) / 2,
                             std::vector<std::uint64_t>(std::size_t{p} * p, 0));
  }
  std::vector<std::thread> workers;
  const std::uint64_t chunk = (samples + jobs - 1) / jobs;
  for (unsigned w = 0; w < jobs; ++w) {
    const std::uint64_t lo = std::min<std::uint64_t>(samples, w * chunk);
    const std::uint64_t hi = std::min<std::uint64_t>(samples, lo + chunk);
    workers.emplace_back([&, lo, hi, w] { tally_range(lo, hi, shards[w]); });
  }
  for (auto& t : workers) t.join();
  for (const auto& shard : shards) {
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t d = 0; d < p; ++d) {
        report.cell_counts[i][d] += shard.cell_counts[i][d];
      }
    }
    for (std::size_t q = 0; q < report.pair_counts.size(); ++q) {
      for (std::size_t c = 0; c < report.pair_counts[q].size(); ++c) {
        report.pair_counts[q][c] += shard.pair_counts[q][c];
      }
    }
  }
  return report;
}

// ---- spec file io ----------------------------------------------------

namespace {

constexpr std::string_view kSpecHeader = "lchca v1";

std::string trimmed(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c); };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && issp(s[i])) ++i;
  return s.substr(i);
}

}  // namespace

void Lchca::save(std::ostream& out) const {
  out << kSpecHeader << '\n';
  out << "p " << modulus().value() << '\n';
  out << "n " << cells() << '\n';
  out << "matrix " << m_.to_string() << '\n';
  out << "charpoly " << fm_.to_string() << '\n';
}

void Lchca::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ParseError("Lchca::save_file: cannot open " + path);
  save(out);
}

Lchca Lchca::load(std::istream& in) {
  try {
    return load_impl(in);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("Lchca::load: ") + e.what());
  }
}

Lchca Lchca::load_impl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trimmed(line) != kSpecHeader) {
    throw ParseError("Lchca::load: missing \"lchca v1\" header");
  }
  std::optional<std::uint32_t> p_decl, n_decl;
  std::optional<MatrixFp> matrix;
  std::optional<Polynomial> declared_fm;
  std::optional<std::vector<std::int32_t>> neighborhood;
  std::map<std::uint32_t, std::map<std::int32_t, std::uint32_t>> weight_lines;

  while (std::getline(in, line)) {
    line = trimmed(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string key;
    is >> key;
    std::string rest;
    std::getline(is, rest);
    rest = trimmed(rest);
    if (key == "p") {
      p_decl = static_cast<std::uint32_t>(std::stoul(rest));
    } else if (key == "n") {
      n_decl = static_cast<std::uint32_t>(std::stoul(rest));
    } else if (key == "matrix") {
      matrix = MatrixFp::parse(rest);
    } else if (key == "charpoly") {
      declared_fm = Polynomial::parse(rest);
    } else if (key == "neighborhood") {
      std::vector<std::int32_t> offs;
      std::istringstream os(rest);
      std::string tok;
      while (std::getline(os, tok, ',')) {
        offs.push_back(static_cast<std::int32_t>(std::stol(trimmed(tok))));
      }
      neighborhood = std::move(offs);
    } else if (key == "weights") {
      std::istringstream ws(rest);
      std::uint32_t cell = 0;
      ws >> cell;
      std::string body;
      std::getline(ws, body);
      body = trimmed(body);
      std::map<std::int32_t, std::uint32_t> taps;
      std::istringstream bs(body);
      std::string tok;
      while (std::getline(bs, tok, ',')) {
        tok = trimmed(tok);
        auto eq = tok.find('=');
        if (eq == std::string::npos) {
          throw ParseError("Lchca::load: weights entry \"" + tok + "\" lacks '='");
        }
        taps[static_cast<std::int32_t>(std::stol(tok.substr(0, eq)))] =
            static_cast<std::uint32_t>(std::stoul(tok.substr(eq + 1)));
      }
      weight_lines[cell] = std::move(taps);
    } else {
      throw ParseError("Lchca::load: unknown field \"" + key + "\"");
    }
  }

  if (!p_decl || !n_decl) throw ParseError("Lchca::load: missing p or n");
  Prime p(*p_decl);

  MatrixFp m(p, 1, 1);
  if (matrix) {
    if (neighborhood || !weight_lines.empty()) {
      throw ParseError("Lchca::load: give either a matrix or a rule, not both");
    }
    m = *matrix;
  } else {
    if (!neighborhood) throw ParseError("Lchca::load: missing matrix or neighborhood");
    RuleSpec spec{p, *n_decl, *neighborhood, {}};
    spec.weights.resize(*n_decl);
    for (const auto& [cell, taps] : weight_lines) {
      if (cell >= *n_decl) throw ParseError("Lchca::load: weights for cell out of range");
      for (const auto& [off, w] : taps) {
        if (w >= p.value()) throw ParseError("Lchca::load: weight not reduced mod p");
      }
      spec.weights[cell] = taps;
    }
    m = build_matrix(spec);
  }

  if (m.modulus() != p) throw ParseError("Lchca::load: matrix modulus disagrees with p");
  if (m.rows() != *n_decl || m.cols() != *n_decl) {
    throw ParseError("Lchca::load: matrix dimensions disagree with n");
  }

  Lchca ca = Lchca::from_matrix(std::move(m));
  if (declared_fm && *declared_fm != ca.characteristic_poly()) {
    throw ParseError("Lchca::load: declared charpoly does not match the matrix");
  }
  return ca;
}

Lchca Lchca::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("Lchca::load_file: cannot open " + path);
  return load(in);
}

}  // namespace lchca
