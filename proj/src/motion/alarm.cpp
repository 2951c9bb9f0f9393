#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <stdexcept>

#include "sentry/motion.hpp"

namespace sentry {

std::string_view to_string(AlarmPhase p) {
  switch (p) {
    case AlarmPhase::Idle: return "IDLE";
    case AlarmPhase::Monitoring: return "MONITORING";
    case AlarmPhase::Alarm: return "ALARM";
  }
  return "?";
}

namespace {

std::array<std::uint8_t, PasswordDigest::kDigestSize> salted_sha256(
    std::span<const std::uint8_t> salt, std::string_view password) {
  std::array<std::uint8_t, PasswordDigest::kDigestSize> out{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, salt.data(), salt.size()) == 1 &&
                  EVP_DigestUpdate(ctx, password.data(), password.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, out.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok || len != out.size()) throw std::runtime_error("SHA-256 failed");
  return out;
}

}  // namespace

PasswordDigest PasswordDigest::create(std::string_view password) {
  std::array<std::uint8_t, kSaltSize> salt{};
  if (RAND_bytes(salt.data(), int(salt.size())) != 1)
    throw std::runtime_error("RAND_bytes failed");
  return create(password, salt);
}

PasswordDigest PasswordDigest::create(std::string_view password,
                                      const std::array<std::uint8_t, kSaltSize>& salt) {
  PasswordDigest d;
  d.salt_ = salt;
  d.digest_ = salted_sha256(d.salt_, password);
  return d;
}

bool PasswordDigest::matches(std::string_view password) const {
  const auto candidate = salted_sha256(salt_, password);
  return CRYPTO_memcmp(candidate.data(), digest_.data(), digest_.size()) == 0;
}

AlarmState AlarmState::idle(std::string_view password) {
  return AlarmState{AlarmPhase::Idle, 0, PasswordDigest::create(password)};
}

AlarmState start_monitoring(AlarmState s) {
  if (s.phase == AlarmPhase::Idle) {
    s.phase = AlarmPhase::Monitoring;
    s.consecutive_hits = 0;
  }
  return s;
}

AlarmStep alarm_step(AlarmState s, const MotionMask& m, const DetectorConfig& cfg) {
  AlarmStep out{std::move(s), {}};
  auto& st = out.state;
  switch (st.phase) {
    case AlarmPhase::Idle:
      throw StateError("alarm_step called while idle");
    case AlarmPhase::Alarm:
      return out;  // latched
    case AlarmPhase::Monitoring:
      break;
  }
  if (motion_ratio(m) >= cfg.min_ratio) {
    ++st.consecutive_hits;
  } else {
    st.consecutive_hits = 0;
  }
  if (st.consecutive_hits >= cfg.persist_k) {
    st.consecutive_hits = cfg.persist_k;
    st.phase = AlarmPhase::Alarm;
    out.events.push_back(AlarmEvent::AlarmRaised);
  }
  return out;
}

DisarmOutcome disarm(const AlarmState& s, std::string_view password) {
  if (s.phase == AlarmPhase::Idle) throw StateError("disarm called while idle");
  if (!s.password.matches(password)) return DisarmRejected{};
  AlarmState next = s;
  next.phase = AlarmPhase::Idle;
  next.consecutive_hits = 0;
  return next;
}

}  // namespace sentry
