// Copyright 2026 vidlang authors
// Versioned binary weight archive.
//
// Layout: 4-byte magic "VLWA", u32 format version, u64 header length, a JSON
// header describing entries (name, dtype, shape, offset, nbytes) plus free
// metadata, then the raw payload. All integers and doubles are little-endian.
// Entries are sorted by name so identical contents produce identical bytes.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vidlang/tensor.hpp"

namespace vidlang {

class Model;

inline constexpr uint32_t kWeightFormatVersion = 1;

struct ArchiveEntry {
  std::string name;
  std::string dtype;  // "f64"
  std::vector<int64_t> shape;
};

class WeightArchiveWriter {
 public:
  void add(const std::string& name, const Tensor& tensor);
  // Free-form metadata carried in the header; must be a JSON object.
  void set_meta_json(const std::string& json_object);
  void write(const std::string& path) const;

 private:
  std::map<std::string, Tensor> tensors_;  // name-sorted by construction
  std::string meta_json_ = "{}";
};

class WeightArchive {
 public:
  // Throws IoError (unreadable), CorruptArchive (bad magic/truncation/JSON)
  // or VersionMismatch (unsupported format version).
  static WeightArchive load(const std::string& path);

  const std::string& meta_json() const { return meta_json_; }
  std::vector<ArchiveEntry> entries() const;
  bool contains(const std::string& name) const;
  const Tensor& tensor(const std::string& name) const;  // throws CorruptArchive

 private:
  std::map<std::string, Tensor> tensors_;
  std::string meta_json_;
};

// Writes all model parameters (raw names) with the given metadata object.
void export_weights(const Model& model, const std::string& path,
                    const std::string& meta_json = "{}");

// Imports every archive entry whose name matches a model parameter (with or
// without a "param/" prefix) and whose shape agrees; returns the number of
// parameters loaded. A matching name with a mismatched shape throws
// Error(BadConfig).
int64_t import_weights(Model& model, const std::string& path);

}  // namespace vidlang
