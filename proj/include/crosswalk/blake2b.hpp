/*
 * Copyright (c) 2026, The crosswalk authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crosswalk {

/// Incremental BLAKE2b (RFC 7693), unkeyed, digest length 1..64 bytes.
class Blake2b {
 public:
  static constexpr std::size_t kBlockBytes = 128;
  static constexpr std::size_t kMaxDigestBytes = 64;

  explicit Blake2b(std::size_t digest_bytes = kMaxDigestBytes);

  void update(std::span<const std::uint8_t> data);
  void update(std::string_view data);
  /// Finalizes; the object must not be updated afterwards.
  std::vector<std::uint8_t> finish();

 private:
  void compress(bool last);

  std::array<std::uint64_t, 8> h_{};
  std::array<std::uint64_t, 2> t_{};
  std::array<std::uint8_t, kBlockBytes> buf_{};
  std::size_t buf_len_ = 0;
  std::size_t digest_bytes_;
  bool finished_ = false;
};

std::string to_hex(std::span<const std::uint8_t> bytes);

/// BLAKE2b-512 of `content`, 128 lowercase hex characters.
std::string hash_bytes(std::span<const std::uint8_t> content);
std::string hash_bytes(std::string_view content);
/// Streams the file through BLAKE2b-512. Throws IoError.
std::string hash_file(const std::filesystem::path& path);

bool is_digest(std::string_view text) noexcept;

}  // namespace crosswalk
