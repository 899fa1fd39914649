#include "lchca/reductions.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace lchca {

namespace {

bool all_zero(const Configuration& s) {
  return std::all_of(s.begin(), s.end(), [](std::uint32_t d) { return d == 0; });
}

}  // namespace

DdpInstance::DdpInstance(Lchca automaton, Configuration start_config,
                         Configuration target_config)
    : ca(std::move(automaton)), start(std::move(start_config)),
      target(std::move(target_config)) {
  if (start.size() != ca.cells() || target.size() != ca.cells()) {
    throw DomainError("DdpInstance: configuration length mismatch");
  }
  if (all_zero(start)) throw DomainError("DdpInstance: start must be nonzero");
}

std::uint64_t DdpSolution::tau() const {
  if (!tau_) throw DomainError("DdpSolution: unreachable has no distance");
  return *tau_;
}

std::string DdpSolution::to_string() const {
  return tau_ ? std::to_string(*tau_) : "unreachable";
}

DdpSolution solve_ddp_bruteforce(const DdpInstance& inst, std::uint64_t bound) {
  if (bound > (std::uint64_t{1} << 26)) {
    throw CapacityError("solve_ddp_bruteforce: bound exceeds 2^26");
  }
  Configuration v = inst.start;
  for (std::uint64_t tau = 0; tau < bound; ++tau) {
    if (v == inst.target) return DdpSolution::at(tau);
    v = inst.ca.step(v);
  }
  return DdpSolution::unreachable();
}

Diagonalization diagonalize(const MatrixFp& m) {
  if (!m.is_square()) throw DomainError("diagonalize: matrix must be square");
  Polynomial fm = char_poly(m);
  if (!is_irreducible(fm)) {
    throw UnsupportedError("diagonalize: characteristic polynomial is reducible");
  }
  const std::uint32_t n = m.rows();
  ExtFieldPtr field = detail::make_ext_field_any_degree(fm);
  const ExtFieldElement root = field->gen();

  MatrixExt vectors(field, n, n);
  MatrixExt values(field, n, n);
  const MatrixExt lifted = lift(m, field);
  ExtFieldElement eigenvalue = root;
  for (std::uint32_t i = 0; i < n; ++i) {
    values.set(i, i, eigenvalue);
    // kernel of (M - eigenvalue I), normalized to leading entry 1
    MatrixExt shifted = lifted;
    for (std::uint32_t d = 0; d < n; ++d) {
      shifted.set(d, d, lifted(d, d) - eigenvalue);
    }
    const std::vector<ExtFieldElement> v = null_space_vector(shifted);
    for (std::uint32_t r = 0; r < n; ++r) vectors.set(r, i, v[r]);
    eigenvalue = eigenvalue.frobenius();
  }
  MatrixExt inverse = mat_inv(vectors);
  return Diagonalization{std::move(field), root, std::move(vectors),
                         std::move(values), std::move(inverse)};
}

namespace {

// root^tau from w = Q^{-1} s and u = Q^{-1} t. Coordinate i gives
// u_i / w_i = (root^tau)^{p^i}; undo the Frobenius twist by raising to
// p^{n-i}. nullopt when the coordinates are inconsistent, i.e. the target
// is not in the F_p[M]-orbit of the start (impossible for nonzero
// configurations, kept as a guard).
std::optional<ExtFieldElement> power_of_root(const Diagonalization& diag,
                                             const Configuration& s,
                                             const Configuration& t,
                                             DlpReductionPath path) {
  const std::uint32_t n = diag.eigenvectors.rows();
  const auto& field = diag.field;
  const std::vector<ExtFieldElement> w =
      mat_vec(diag.eigenvectors_inv, lift_vec(s, field));

  std::vector<ExtFieldElement> u;
  if (path == DlpReductionPath::full_system) {
    // eliminate against Q directly instead of applying the precomputed inverse
    u = gauss_solve(diag.eigenvectors, lift_vec(t, field));
  } else {
    u = mat_vec(diag.eigenvectors_inv, lift_vec(t, field));
  }

  std::uint32_t lead = n;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!w[i].is_zero()) {
      lead = i;
      break;
    }
  }
  if (lead == n) throw DomainError("ddp_to_dlp: start maps to the zero vector");

  const ExtFieldElement ratio = u[lead] / w[lead];
  const ExtFieldElement a =
      lead == 0 ? ratio : ratio.frobenius(n - lead);  // (x^{p^i})^{p^{n-i}} = x

  // Consistency across every coordinate: u_i = a^{p^i} w_i. For any
  // nonzero t this holds automatically; a zero coordinate pattern that
  // disagrees means no field element maps s to t.
  ExtFieldElement conjugate = a;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!(u[i] == conjugate * w[i])) return std::nullopt;
    conjugate = conjugate.frobenius();
  }
  return a;
}

}  // namespace

DlpInstance ddp_to_dlp(const DdpInstance& inst, DlpReductionPath path) {
  if (!inst.ca.is_hybrid()) {
    throw UnsupportedError("ddp_to_dlp: requires a hybrid CA");
  }
  if (all_zero(inst.target)) {
    throw DomainError("ddp_to_dlp: zero target is never reachable");
  }
  const Diagonalization diag = diagonalize(inst.ca.matrix());
  auto a = power_of_root(diag, inst.start, inst.target, path);
  if (!a) throw DomainError("ddp_to_dlp: target not reachable");
  return DlpInstance{diag.root, *a};
}

DdpSolution solve_ddp(const DdpInstance& inst, DlpReductionPath path) {
  if (!inst.ca.is_hybrid()) {
    throw UnsupportedError("solve_ddp: requires a hybrid CA");
  }
  if (all_zero(inst.target)) return DdpSolution::unreachable();
  const Diagonalization diag = diagonalize(inst.ca.matrix());
  auto a = power_of_root(diag, inst.start, inst.target, path);
  if (!a) return DdpSolution::unreachable();
  // Reachability for group CA reduces to the discrete log existing inside
  // the subgroup generated by the root.
  auto tau = dlog(diag.root, *a);
  if (!tau) return DdpSolution::unreachable();
  return DdpSolution::at(*tau);
}

MatrixFp multiplication_matrix(const ExtFieldElement& a) {
  const ExtField& field = *a.field();
  const std::uint32_t n = field.degree();
  MatrixFp m(field.characteristic(), n, n);
  ExtFieldElement column = a;  // a * x^j, built incrementally
  const ExtFieldElement x = field.gen();
  for (std::uint32_t j = 0; j < n; ++j) {
    for (std::uint32_t i = 0; i < n; ++i) m.set(i, j, column.coeffs()[i]);
    if (j + 1 < n) column = column * x;
  }
  return m;
}

std::uint64_t DlpViaDdp::decode(const DdpSolution& s) const { return s.tau(); }

DlpViaDdp dlp_to_ddp(const ExtFieldElement& base, const ExtFieldElement& value) {
  if (!base.field()->same(*value.field())) {
    throw DomainError("dlp_to_ddp: elements of different fields");
  }
  if (base.is_zero() || value.is_zero()) {
    throw DomainError("dlp_to_ddp: arguments must be units");
  }
  const auto group = base.field()->unit_group_order();
  if (!group || *group > kMaxGroupOrder) {
    throw CapacityError("dlp_to_ddp: group order exceeds the 2^48 cap");
  }
  if (multiplicative_order(base) != *group) {
    throw DomainError("dlp_to_ddp: base must be primitive");
  }
  Lchca ca = Lchca::from_matrix(multiplication_matrix(base));
  const std::uint32_t n = ca.cells();
  Configuration s(n, 0);
  s[0] = 1;  // coefficients of 1: any nonzero choice works, this one is canonical
  Configuration t = mat_vec(multiplication_matrix(value), s);
  return DlpViaDdp{DdpInstance(std::move(ca), std::move(s), std::move(t))};
}

namespace {

bool prefix_matches(const Configuration& v, std::span<const std::uint32_t> x,
                    std::span<const std::uint32_t> coords) {
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (v[coords[i]] != x[i]) return false;
  }
  return true;
}

void validate_fixed_coords(const Lchca& ca, const Configuration& s,
                           std::span<const std::uint32_t> x,
                           std::span<const std::uint32_t> coords) {
  if (s.size() != ca.cells()) throw DomainError("fixed-coordinate scan: length mismatch");
  if (x.size() != coords.size()) {
    throw DomainError("fixed-coordinate scan: x and coords lengths differ");
  }
  if (x.size() >= ca.cells()) {
    throw DomainError("fixed-coordinate scan: k must be smaller than the cell count");
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= ca.cells()) {
      throw DomainError("fixed-coordinate scan: coordinate out of range");
    }
    if (x[i] >= ca.modulus().value()) {
      throw DomainError("fixed-coordinate scan: digit not reduced");
    }
  }
  for (std::size_t i = 0; i + 1 < coords.size(); ++i) {
    for (std::size_t j = i + 1; j < coords.size(); ++j) {
      if (coords[i] == coords[j]) {
        throw DomainError("fixed-coordinate scan: repeated coordinate");
      }
    }
  }
}

}  // namespace

std::optional<std::uint64_t> solve_fdp(const Lchca& ca, const Configuration& s,
                                       std::span<const std::uint32_t> x,
                                       std::span<const std::uint32_t> coords) {
  validate_fixed_coords(ca, s, x, coords);
  if (!ca.is_hybrid()) throw UnsupportedError("solve_fdp: requires a hybrid CA");
  const std::uint64_t period = ca.order();
  Configuration v = s;
  for (std::uint64_t tau = 0; tau < period; ++tau) {
    if (prefix_matches(v, x, coords)) return tau;
    v = ca.step(v);
  }
  return std::nullopt;
}

SddpInstance::SddpInstance(Lchca automaton, Configuration start_config,
                           std::vector<std::uint32_t> fixed_digits, std::uint64_t bound,
                           std::vector<std::uint32_t> fixed_coords)
    : ca(std::move(automaton)), start(std::move(start_config)),
      x(std::move(fixed_digits)), coords(std::move(fixed_coords)), delta(bound) {
  if (coords.empty()) {
    coords.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) coords[i] = static_cast<std::uint32_t>(i);
  }
  validate_fixed_coords(ca, start, x, coords);
  if (all_zero(start)) throw DomainError("SddpInstance: start must be nonzero");
  if (delta == 0) throw DomainError("SddpInstance: delta must be positive");
}

std::optional<std::uint64_t> solve_sddp(const SddpInstance& inst, SddpScanStats* stats) {
  Configuration v = inst.start;
  std::uint64_t examined = 0;
  std::optional<std::uint64_t> found;
  for (std::uint64_t tau = 0; tau < inst.delta; ++tau) {
    ++examined;
    if (prefix_matches(v, inst.x, inst.coords)) {
      found = tau;
      break;
    }
    v = inst.ca.step(v);
  }
  if (stats) stats->configurations_examined = examined;
  return found;
}

std::optional<std::uint64_t> solve_sddp_parallel(const SddpInstance& inst, unsigned jobs) {
  if (jobs <= 1) return solve_sddp(inst);
  const std::uint64_t delta = inst.delta;
  // Chunks big enough that the mat_pow warm-up per claim stays negligible.
  const std::uint64_t chunk =
      std::max<std::uint64_t>(256, (delta + jobs * 8 - 1) / (jobs * 8));
  std::atomic<std::uint64_t> next_chunk{0};
  std::atomic<std::uint64_t> best{delta};  // delta = "nothing found yet"

  auto worker = [&] {
    while (true) {
      const std::uint64_t index = next_chunk.fetch_add(1);
      const std::uint64_t lo = index * chunk;
      if (lo >= delta || lo >= best.load()) return;  // abandon: cannot beat best
      const std::uint64_t hi = std::min(delta, lo + chunk);
      Configuration v =
          lo == 0 ? inst.start : mat_vec(mat_pow(inst.ca.matrix(), lo), inst.start);
      for (std::uint64_t tau = lo; tau < hi; ++tau) {
        if (tau >= best.load()) return;
        if (prefix_matches(v, inst.x, inst.coords)) {
          // publish monotonically decreasing best
          std::uint64_t seen = best.load();
          while (tau < seen && !best.compare_exchange_weak(seen, tau)) {
          }
          break;  // later offsets in this chunk are larger
        }
        v = inst.ca.step(v);
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const std::uint64_t result = best.load();
  if (result == delta) return std::nullopt;
  return result;
}

// ---- problem statement files -------------------------------------------

std::string_view to_string(ProblemStatement::Kind k) {
  switch (k) {
    case ProblemStatement::Kind::ddp:
      return "ddp";
    case ProblemStatement::Kind::fdp:
      return "fdp";
    case ProblemStatement::Kind::sddp:
      return "sddp";
  }
  return "?";
}

namespace {

constexpr std::string_view kProblemHeader = "lchca-problem v1";

ProblemStatement::Kind kind_from_string(const std::string& text) {
  if (text == "ddp") return ProblemStatement::Kind::ddp;
  if (text == "fdp") return ProblemStatement::Kind::fdp;
  if (text == "sddp") return ProblemStatement::Kind::sddp;
  throw ParseError("ProblemStatement: unknown kind \"" + text + "\"");
}

}  // namespace

std::string ProblemStatement::to_text() const {
  std::ostringstream os;
  os << kProblemHeader << '\n';
  os << "kind " << lchca::to_string(kind) << '\n';
  os << "spec " << spec_ref << '\n';
  os << "s " << start << '\n';
  if (kind == Kind::ddp) {
    os << "t " << target << '\n';
  } else {
    os << "x " << (x.empty() ? "-" : x) << '\n';
    if (!coords.empty()) os << "coords " << coords << '\n';
    if (kind == Kind::sddp) os << "delta " << (delta ? *delta : 0) << '\n';
  }
  return os.str();
}

ProblemStatement ProblemStatement::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kProblemHeader) {
    throw ParseError("ProblemStatement: missing \"lchca-problem v1\" header");
  }
  ProblemStatement st;
  bool have_kind = false, have_spec = false, have_start = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string key, rest;
    is >> key;
    std::getline(is, rest);
    if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
    if (key == "kind") {
      st.kind = kind_from_string(rest);
      have_kind = true;
    } else if (key == "spec") {
      st.spec_ref = rest;
      have_spec = true;
    } else if (key == "s") {
      st.start = rest;
      have_start = true;
    } else if (key == "t") {
      st.target = rest;
    } else if (key == "x") {
      st.x = rest == "-" ? "" : rest;
    } else if (key == "coords") {
      st.coords = rest;
    } else if (key == "delta") {
      if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("ProblemStatement: bad delta \"" + rest + "\"");
      }
      st.delta = std::stoull(rest);
    } else {
      throw ParseError("ProblemStatement: unknown field \"" + key + "\"");
    }
  }
  if (!have_kind || !have_spec || !have_start) {
    throw ParseError("ProblemStatement: kind, spec and s are required");
  }
  if (st.kind == Kind::ddp && st.target.empty()) {
    throw ParseError("ProblemStatement: ddp requires a target t");
  }
  if (st.kind == Kind::sddp && !st.delta) {
    throw ParseError("ProblemStatement: sddp requires delta");
  }
  return st;
}

ResolvedProblem resolve(const ProblemStatement& statement, Lchca ca) {
  ResolvedProblem problem{statement.kind, std::move(ca), {}, {}, {}, {}, 0};
  const Prime p = problem.ca.modulus();
  const std::uint32_t n = problem.ca.cells();
  problem.start = parse_configuration(p, statement.start, n);
  if (statement.kind == ProblemStatement::Kind::ddp) {
    problem.target = parse_configuration(p, statement.target, n);
    return problem;
  }
  if (!statement.x.empty()) {
    problem.x = parse_configuration(p, statement.x, std::nullopt);
  }
  if (!statement.coords.empty()) {
    std::istringstream is(statement.coords);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("ProblemStatement: bad coordinate \"" + tok + "\"");
      }
      problem.coords.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    }
  } else {
    problem.coords.resize(problem.x.size());
    for (std::size_t i = 0; i < problem.x.size(); ++i) {
      problem.coords[i] = static_cast<std::uint32_t>(i);
    }
  }
  validate_fixed_coords(problem.ca, problem.start, problem.x, problem.coords);
  if (statement.kind == ProblemStatement::Kind::sddp) {
    problem.delta = *statement.delta;
    if (problem.delta == 0) throw DomainError("ProblemStatement: delta must be positive");
  }
  return problem;
}

ResolvedProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_problem_file: cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  ProblemStatement st = ProblemStatement::parse(os.str());
  std::filesystem::path spec_path(st.spec_ref);
  if (spec_path.is_relative()) {
    spec_path = std::filesystem::path(path).parent_path() / spec_path;
  }
  return resolve(st, Lchca::load_file(spec_path.string()));
}

}  // namespace lchca
