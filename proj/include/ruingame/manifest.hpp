#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include <openssl/evp.h>

#include <json.hpp>

namespace ruingame {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

/// Lower-case hex SHA-256 of a byte string.
inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

/// Provenance record written next to every output set.
struct RunManifest {
  std::string command;
  std::string config_hash;  ///< SHA-256 of the canonical config dump
  std::string started_utc;
  double wall_clock_seconds = 0.0;
  std::map<std::string, std::string> tables;  ///< file name -> SHA-256

  nlohmann::json to_json() const {
    return {{"command", command},
            {"artifact_version", std::string(kArtifactVersion)},
            {"config_hash", config_hash},
            {"started_utc", started_utc},
            {"wall_clock_seconds", wall_clock_seconds},
            {"tables", tables}};
  }
};

inline std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace ruingame
