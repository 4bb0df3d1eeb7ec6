#pragma once

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itac/error.hpp"

namespace itac {

inline constexpr std::string_view kToolVersion = "1.0.0";

inline std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "sha256 digest failed");
    }
    std::string hex;
    hex.reserve(len * 2);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

struct InputDigest {
    std::string name;
    std::string sha256;
};

/// Comment block placed at the top of every written artifact. Holds no timestamps.
inline std::string provenance_header(const std::vector<InputDigest>& inputs) {
    std::string out = "# itac " + std::string(kToolVersion) + "\n";
    for (const auto& in : inputs) out += "# input " + in.name + " sha256=" + in.sha256 + "\n";
    return out;
}

}  // namespace itac
