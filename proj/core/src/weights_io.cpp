// Copyright 2026 vidlang authors
// Weight archive implementation.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/weights_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "vidlang/errors.hpp"
#include "vidlang/model.hpp"

namespace vidlang {

namespace {
constexpr char kMagic[4] = {'V', 'L', 'W', 'A'};

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

uint32_t get_u32(const uint8_t* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
  return v;
}

uint64_t get_u64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

void put_f64(std::string& out, double d) { put_u64(out, std::bit_cast<uint64_t>(d)); }

double get_f64(const uint8_t* p) { return std::bit_cast<double>(get_u64(p)); }
}  // namespace

void WeightArchiveWriter::add(const std::string& name, const Tensor& tensor) {
  if (!tensors_.emplace(name, tensor).second) {
    throw Error(ErrorCode::BadConfig, "duplicate archive entry " + name);
  }
}

void WeightArchiveWriter::set_meta_json(const std::string& json_object) {
  nlohmann::json parsed = nlohmann::json::parse(json_object, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw Error(ErrorCode::BadConfig, "archive metadata must be a JSON object");
  }
  meta_json_ = parsed.dump();  // canonical (sorted keys)
}

void WeightArchiveWriter::write(const std::string& path) const {
  nlohmann::json header;
  header["meta"] = nlohmann::json::parse(meta_json_);
  header["entries"] = nlohmann::json::array();
  uint64_t offset = 0;
  for (const auto& [name, t] : tensors_) {
    nlohmann::json e;
    e["name"] = name;
    e["dtype"] = "f64";
    e["shape"] = t.shape();
    e["offset"] = offset;
    e["nbytes"] = static_cast<uint64_t>(t.numel()) * 8;
    header["entries"].push_back(e);
    offset += static_cast<uint64_t>(t.numel()) * 8;
  }
  const std::string header_str = header.dump();

  std::string blob;
  blob.reserve(16 + header_str.size() + offset);
  blob.append(kMagic, 4);
  put_u32(blob, kWeightFormatVersion);
  put_u64(blob, header_str.size());
  blob += header_str;
  for (const auto& [name, t] : tensors_) {
    for (int64_t i = 0; i < t.numel(); ++i) put_f64(blob, t[i]);
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

WeightArchive WeightArchive::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const uint8_t*>(bytes.data());

  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::CorruptArchive, path + " is not a weight archive");
  }
  const uint32_t version = get_u32(p + 4);
  if (version != kWeightFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "archive version " + std::to_string(version) + ", expected " +
                    std::to_string(kWeightFormatVersion));
  }
  const uint64_t header_len = get_u64(p + 8);
  if (16 + header_len > bytes.size()) {
    throw Error(ErrorCode::CorruptArchive, "truncated header in " + path);
  }
  nlohmann::json header =
      nlohmann::json::parse(bytes.substr(16, header_len), nullptr, false);
  if (header.is_discarded() || !header.contains("entries")) {
    throw Error(ErrorCode::CorruptArchive, "bad header JSON in " + path);
  }

  WeightArchive archive;
  archive.meta_json_ = header.value("meta", nlohmann::json::object()).dump();
  const uint8_t* payload = p + 16 + header_len;
  const uint64_t payload_len = bytes.size() - 16 - header_len;
  for (const auto& e : header["entries"]) {
    const std::string name = e.at("name").get<std::string>();
    const std::string dtype = e.at("dtype").get<std::string>();
    if (dtype != "f64") {
      throw Error(ErrorCode::CorruptArchive, "unsupported dtype " + dtype);
    }
    const std::vector<int64_t> shape = e.at("shape").get<std::vector<int64_t>>();
    const uint64_t offset = e.at("offset").get<uint64_t>();
    const uint64_t nbytes = e.at("nbytes").get<uint64_t>();
    if (offset + nbytes > payload_len) {
      throw Error(ErrorCode::CorruptArchive, "entry " + name + " exceeds payload");
    }
    Tensor t(shape);
    if (static_cast<uint64_t>(t.numel()) * 8 != nbytes) {
      throw Error(ErrorCode::CorruptArchive, "entry " + name + " shape/size mismatch");
    }
    for (int64_t i = 0; i < t.numel(); ++i) t[i] = get_f64(payload + offset + 8 * i);
    archive.tensors_.emplace(name, std::move(t));
  }
  return archive;
}

std::vector<ArchiveEntry> WeightArchive::entries() const {
  std::vector<ArchiveEntry> out;
  for (const auto& [name, t] : tensors_) out.push_back({name, "f64", t.shape()});
  return out;
}

bool WeightArchive::contains(const std::string& name) const {
  return tensors_.count(name) != 0;
}

const Tensor& WeightArchive::tensor(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) {
    throw Error(ErrorCode::CorruptArchive, "archive has no entry " + name);
  }
  return it->second;
}

void export_weights(const Model& model, const std::string& path,
                    const std::string& meta_json) {
  WeightArchiveWriter writer;
  writer.set_meta_json(meta_json);
  for (const Parameter* p : model.params().all()) writer.add(p->name, p->value);
  writer.write(path);
}

int64_t import_weights(Model& model, const std::string& path) {
  WeightArchive archive = WeightArchive::load(path);
  int64_t loaded = 0;
  for (Parameter* p : model.params().all()) {
    const std::string* key = nullptr;
    const std::string prefixed = "param/" + p->name;
    if (archive.contains(p->name)) {
      key = &p->name;
    } else if (archive.contains(prefixed)) {
      key = &prefixed;
    } else {
      continue;
    }
    const Tensor& t = archive.tensor(*key);
    if (!t.same_shape(p->value)) {
      throw Error(ErrorCode::BadConfig, "shape mismatch importing " + p->name);
    }
    p->value = t;
    ++loaded;
  }
  return loaded;
}

}  // namespace vidlang
