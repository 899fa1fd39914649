#include "lchca/pow.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <sstream>

namespace lchca {

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.size()) {
    throw Error("sha256: digest failure");
  }
  return out;
}

std::string hex_encode(std::span<const std::uint8_t> data) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

std::vector<std::uint8_t> hex_decode(std::string_view text) {
  if (text.size() % 2 != 0) throw ParseError("hex_decode: odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 2);
  for (std::size_t i = 0; i < text.size(); i += 2) {
    const int hi = nibble(text[i]);
    const int lo = nibble(text[i + 1]);
    if (hi < 0 || lo < 0) throw ParseError("hex_decode: bad hex digit");
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

std::uint64_t PowParams::recommended_delta(Prime p, std::uint32_t n, std::uint32_t k) {
  auto period = checked_pow_u64(p.value(), n);
  if (!period) throw CapacityError("PowParams: p^n exceeds 64 bits");
  auto pk = checked_pow_u64(p.value(), k);
  if (!pk || *pk > (*period - 1) / 8) return *period - 1;
  return 8 * *pk;
}

PowParams PowParams::standard(Prime p, std::uint32_t n, std::uint32_t k,
                              std::uint64_t seed) {
  PowParams params{p, n, find_irreducible(p, n, /*want_primitive=*/true, seed), k,
                   0};
  params.delta = recommended_delta(p, n, k);
  params.validate();
  return params;
}

void PowParams::validate() const {
  if (f.modulus() != p) throw DomainError("PowParams: f is over the wrong prime");
  if (f.degree() != static_cast<int>(n) || n < 2) {
    throw DomainError("PowParams: f must have degree n >= 2");
  }
  if (k >= n) throw DomainError("PowParams: difficulty k must be below n");
  auto period = checked_pow_u64(p.value(), n);
  if (!period || *period - 1 > kMaxGroupOrder) {
    throw CapacityError("PowParams: p^n exceeds the desk-scale cap");
  }
  if (delta == 0 || delta > *period - 1) {
    throw DomainError("PowParams: delta must lie in [1, p^n - 1]");
  }
  if (!is_primitive(f)) throw DomainError("PowParams: f must be primitive");
}

namespace {

// Rejection-sampled digit stream: bytes of SHA-256(digest || label ||
// counter_be32) for counter = 0, 1, ...; a byte b is kept iff
// b < p * floor(256 / p) and contributes b mod p.
class DigitStream {
 public:
  DigitStream(const std::array<std::uint8_t, 32>& digest, std::uint8_t label,
              std::uint32_t p)
      : digest_(digest), label_(label), p_(p), limit_((256 / p) * p) {}

  std::uint32_t next() {
    for (;;) {
      if (pos_ == block_.size()) {
        refill();
      }
      const std::uint8_t b = block_[pos_++];
      if (b < limit_) return b % p_;
    }
  }

 private:
  void refill() {
    std::array<std::uint8_t, 32 + 1 + 4> input{};
    std::copy(digest_.begin(), digest_.end(), input.begin());
    input[32] = label_;
    input[33] = static_cast<std::uint8_t>(counter_ >> 24);
    input[34] = static_cast<std::uint8_t>(counter_ >> 16);
    input[35] = static_cast<std::uint8_t>(counter_ >> 8);
    input[36] = static_cast<std::uint8_t>(counter_);
    block_ = sha256(input);
    pos_ = 0;
    ++counter_;
  }

  std::array<std::uint8_t, 32> digest_;
  std::uint8_t label_;
  std::uint32_t p_;
  std::uint32_t limit_;
  std::array<std::uint8_t, 32> block_{};
  std::size_t pos_ = 32;  // empty until the first refill
  std::uint32_t counter_ = 0;
};

constexpr std::uint8_t kLabelStart = 0x01;
constexpr std::uint8_t kLabelPrefix = 0x02;
constexpr std::uint8_t kLabelStartRetry = 0x03;

}  // namespace

PowChallenge make_challenge(std::span<const std::uint8_t> message,
                            const PowParams& params) {
  params.validate();
  PowChallenge challenge;
  challenge.params = params;
  challenge.digest = sha256(message);

  // start configuration: labels 0x01, then 0x03, 0x04, ... until nonzero
  std::uint8_t label = kLabelStart;
  for (;;) {
    DigitStream stream(challenge.digest, label, params.p.value());
    Configuration s(params.n, 0);
    for (auto& d : s) d = stream.next();
    if (!std::all_of(s.begin(), s.end(), [](std::uint32_t d) { return d == 0; })) {
      challenge.start = std::move(s);
      break;
    }
    label = label == kLabelStart ? kLabelStartRetry
                                 : static_cast<std::uint8_t>(label + 1);
  }

  DigitStream stream(challenge.digest, kLabelPrefix, params.p.value());
  challenge.prefix.resize(params.k);
  for (auto& d : challenge.prefix) d = stream.next();
  return challenge;
}

PowChallenge make_challenge(std::string_view message, const PowParams& params) {
  return make_challenge(
      std::span<const std::uint8_t>(
          reinterpret_cast<const std::uint8_t*>(message.data()), message.size()),
      params);
}

std::optional<PowSolution> prove(const PowChallenge& challenge, unsigned jobs,
                                 SddpScanStats* stats) {
  // make_challenge validated the parameters; the CA classification below
  // re-derives max-length from f anyway.
  Lchca ca = Lchca::from_matrix(companion_matrix(challenge.params.f));
  SddpInstance instance(std::move(ca), challenge.start, challenge.prefix,
                        challenge.params.delta);
  std::optional<std::uint64_t> tau;
  if (jobs > 1 && !stats) {
    tau = solve_sddp_parallel(instance, jobs);
  } else {
    tau = solve_sddp(instance, stats);
  }
  if (!tau) return std::nullopt;
  return PowSolution{*tau};
}

std::string_view to_string(VerifyResult::Status s) {
  switch (s) {
    case VerifyResult::Status::accepted:
      return "accept";
    case VerifyResult::Status::rejected_bound:
      return "bound-exceeded";
    case VerifyResult::Status::rejected_prefix:
      return "prefix-mismatch";
    case VerifyResult::Status::rejected_malformed:
      return "malformed";
  }
  return "?";
}

VerifyResult verify(const PowChallenge& challenge, const PowSolution& solution) {
  VerifyResult result;
  const PowParams& params = challenge.params;

  // Structural checks; anything inconsistent is malformed, not a prefix miss.
  if (params.k >= params.n || params.n < 2 || params.delta == 0 ||
      params.f.degree() != static_cast<int>(params.n) ||
      params.f.modulus() != params.p || !params.f.is_monic()) {
    result.detail = "parameters violate their invariants";
    return result;
  }
  if (challenge.start.size() != params.n || challenge.prefix.size() != params.k) {
    result.detail = "configuration lengths disagree with the parameters";
    return result;
  }
  const std::uint32_t p = params.p.value();
  for (std::uint32_t d : challenge.start) {
    if (d >= p) {
      result.detail = "start digit not reduced";
      return result;
    }
  }
  for (std::uint32_t d : challenge.prefix) {
    if (d >= p) {
      result.detail = "prefix digit not reduced";
      return result;
    }
  }
  if (std::all_of(challenge.start.begin(), challenge.start.end(),
                  [](std::uint32_t d) { return d == 0; })) {
    result.detail = "start configuration is zero";
    return result;
  }

  if (solution.tau >= params.delta) {
    result.status = VerifyResult::Status::rejected_bound;
    result.detail = "tau is not below delta";
    return result;
  }

  const MatrixFp m = companion_matrix(params.f);
  std::uint64_t mults = 0;
  const MatrixFp power = mat_pow_counted(m, solution.tau, mults);
  result.matrix_mults = mults;
  const Configuration reached = mat_vec(power, challenge.start);
  for (std::uint32_t i = 0; i < params.k; ++i) {
    if (reached[i] != challenge.prefix[i]) {
      result.status = VerifyResult::Status::rejected_prefix;
      result.detail = "cell " + std::to_string(i) + " differs";
      return result;
    }
  }
  result.status = VerifyResult::Status::accepted;
  result.detail.clear();
  return result;
}

// ---- wire format ------------------------------------------------------

namespace {
constexpr std::string_view kChallengeHeader = "pow-challenge v1";
}

std::string PowChallenge::to_text() const {
  std::ostringstream os;
  os << kChallengeHeader << '\n';
  os << "p " << params.p.value() << '\n';
  os << "n " << params.n << '\n';
  os << "f " << params.f.to_string() << '\n';
  os << "k " << params.k << '\n';
  os << "delta " << params.delta << '\n';
  os << "digest " << hex_encode(digest) << '\n';
  os << "s " << config_to_string(params.p, start) << '\n';
  os << "x "
     << (params.k == 0 ? std::string("-")
                       : config_to_string(params.p, Configuration(prefix)))
     << '\n';
  return os.str();
}

PowChallenge PowChallenge::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kChallengeHeader) {
    throw ParseError("PowChallenge::parse: missing \"pow-challenge v1\" header");
  }
  std::optional<std::uint32_t> p_raw, n, k;
  std::optional<std::uint64_t> delta;
  std::optional<Polynomial> f;
  std::optional<std::string> digest_hex, s_text, x_text;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string key, rest;
    is >> key;
    std::getline(is, rest);
    if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
    try {
      if (key == "p") {
        p_raw = static_cast<std::uint32_t>(std::stoul(rest));
      } else if (key == "n") {
        n = static_cast<std::uint32_t>(std::stoul(rest));
      } else if (key == "f") {
        f = Polynomial::parse(rest);
      } else if (key == "k") {
        k = static_cast<std::uint32_t>(std::stoul(rest));
      } else if (key == "delta") {
        delta = std::stoull(rest);
      } else if (key == "digest") {
        digest_hex = rest;
      } else if (key == "s") {
        s_text = rest;
      } else if (key == "x") {
        x_text = rest;
      } else {
        throw ParseError("PowChallenge::parse: unknown field \"" + key + "\"");
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError("PowChallenge::parse: bad value for \"" + key + "\"");
    }
  }
  if (!p_raw || !n || !f || !k || !delta || !digest_hex || !s_text || !x_text) {
    throw ParseError("PowChallenge::parse: missing field");
  }

  PowChallenge challenge;
  Prime p(*p_raw);
  challenge.params = PowParams{p, *n, *f, *k, *delta};

  auto digest_bytes = hex_decode(*digest_hex);
  if (digest_bytes.size() != challenge.digest.size()) {
    throw ParseError("PowChallenge::parse: digest must be 32 bytes");
  }
  std::copy(digest_bytes.begin(), digest_bytes.end(), challenge.digest.begin());

  challenge.start = parse_configuration(p, *s_text, *n);
  if (*k == 0) {
    if (*x_text != "-") throw ParseError("PowChallenge::parse: expected \"-\" for k = 0");
  } else {
    challenge.prefix = parse_configuration(p, *x_text, *k);
  }
  return challenge;
}

}  // namespace lchca
