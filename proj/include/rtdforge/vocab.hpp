#pragma once

// Token-id vocabulary with designated special roles.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rtdforge/config.hpp"
#include "rtdforge/error.hpp"

namespace rtdforge {

enum class SpecialRole : uint8_t { Mask = 0, Unk = 1, Pad = 2, Cls = 3, Sep = 4 };

inline const char* role_name(SpecialRole role) {
  switch (role) {
    case SpecialRole::Mask: return "MASK";
    case SpecialRole::Unk: return "UNK";
    case SpecialRole::Pad: return "PAD";
    case SpecialRole::Cls: return "CLS";
    case SpecialRole::Sep: return "SEP";
  }
  return "?";
}

class Vocab {
 public:
  Vocab(uint32_t size, std::map<SpecialRole, uint32_t> special_ids)
      : size_(size), special_ids_(std::move(special_ids)) {
    if (size_ < 2 + special_ids_.size()) {
      throw validation_error("vocab size " + std::to_string(size_) +
                             " too small for " + std::to_string(special_ids_.size()) +
                             " special roles (need size >= roles + 2)");
    }
    for (const auto& [role, id] : special_ids_) {
      if (id >= size_) {
        throw validation_error(std::string("special id for ") + role_name(role) +
                               " out of range: " + std::to_string(id));
      }
      for (const auto& [other_role, other_id] : special_ids_) {
        if (role != other_role && id == other_id) {
          throw validation_error(std::string("special ids must be distinct: ") +
                                 role_name(role) + " and " + role_name(other_role) +
                                 " both map to " + std::to_string(id));
        }
      }
      special_list_.push_back(id);
    }
  }

  uint32_t size() const { return size_; }

  bool has(SpecialRole role) const { return special_ids_.count(role) != 0; }

  uint32_t special(SpecialRole role) const {
    auto it = special_ids_.find(role);
    if (it == special_ids_.end()) {
      throw validation_error(std::string("vocab has no ") + role_name(role) + " token");
    }
    return it->second;
  }

  bool is_special(uint32_t id) const {
    for (uint32_t s : special_list_) {
      if (s == id) return true;
    }
    return false;
  }

  size_t special_count() const { return special_list_.size(); }
  const std::vector<uint32_t>& special_ids() const { return special_list_; }

  uint32_t mask_id() const { return special(SpecialRole::Mask); }
  uint32_t unk_id() const { return special(SpecialRole::Unk); }
  uint32_t pad_id() const { return special(SpecialRole::Pad); }

  // Optional id -> surface string table for debugging output.
  void set_surface(std::shared_ptr<const std::vector<std::string>> table) {
    surface_ = std::move(table);
  }

  std::optional<std::string> surface(uint32_t id) const {
    if (surface_ && id < surface_->size()) return (*surface_)[id];
    return std::nullopt;
  }

  // Stable one-line rendering used in config hashing.
  std::string descriptor() const {
    std::string out = "vocab size=" + std::to_string(size_);
    for (const auto& [role, id] : special_ids_) {
      out += std::string(" ") + role_name(role) + "=" + std::to_string(id);
    }
    return out;
  }

  // Reads `vocab_size` plus `special_mask`, `special_unk`, `special_pad`,
  // `special_cls`, `special_sep` (the last two optional).
  static Vocab from_config(const KvConfig& cfg) {
    const uint64_t size = cfg.get_u64("vocab_size");
    if (size == 0 || size > 0xFFFFFFFFULL) {
      throw config_error("vocab_size out of range: " + std::to_string(size));
    }
    std::map<SpecialRole, uint32_t> ids;
    const std::array<std::pair<SpecialRole, const char*>, 5> keys = {{
        {SpecialRole::Mask, "special_mask"},
        {SpecialRole::Unk, "special_unk"},
        {SpecialRole::Pad, "special_pad"},
        {SpecialRole::Cls, "special_cls"},
        {SpecialRole::Sep, "special_sep"},
    }};
    for (const auto& [role, key] : keys) {
      if (cfg.has(key)) {
        ids[role] = static_cast<uint32_t>(cfg.get_u64(key));
      } else if (role == SpecialRole::Mask || role == SpecialRole::Unk ||
                 role == SpecialRole::Pad) {
        throw config_error(std::string("missing required key `") + key + "`");
      }
    }
    return Vocab(static_cast<uint32_t>(size), std::move(ids));
  }

 private:
  uint32_t size_;
  std::map<SpecialRole, uint32_t> special_ids_;
  std::vector<uint32_t> special_list_;
  std::shared_ptr<const std::vector<std::string>> surface_;
};

using TokenSeq = std::vector<uint32_t>;

}  // namespace rtdforge
