#include "cst/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

#include "cst/error.hpp"
#include "json.hpp"

namespace cst {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'C', 'S', 'T', 'C', 'K', 'P', 'T', '1'};

void write_u64_le(std::ostream& out, uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

uint64_t read_u64_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  require(in.good(), "checkpoint truncated");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return v;
}

std::vector<std::pair<std::string, std::vector<long>>> tensor_shapes(const ModelConfig& m) {
  long b = static_cast<long>(m.hash_buckets);
  return {{"embedding", {b, m.embed_dim}},
          {"w1", {m.repr_dim, m.embed_dim}},
          {"b1", {m.repr_dim}},
          {"w2", {m.n_classes, m.repr_dim}},
          {"b2", {m.n_classes}}};
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  json manifest;
  manifest["classes"] = ck.labels.classes;
  manifest["others"] = ck.labels.others ? json(*ck.labels.others) : json();
  manifest["model"] = {{"hash_buckets", ck.model.hash_buckets},
                       {"embed_dim", ck.model.embed_dim},
                       {"repr_dim", ck.model.repr_dim},
                       {"n_classes", ck.model.n_classes},
                       {"dropout_rate", ck.model.dropout_rate}};
  manifest["features"] = {{"hash_buckets", ck.features.hash_buckets},
                          {"ngram_orders", ck.features.ngram_orders},
                          {"token_window", ck.token_window}};
  manifest["tensors"] = json::array();
  size_t expected = 0;
  for (const auto& [name, shape] : tensor_shapes(ck.model)) {
    manifest["tensors"].push_back({{"name", name}, {"shape", shape}});
    size_t n = 1;
    for (long d : shape) n *= static_cast<size_t>(d);
    expected += n;
  }
  require(ck.params.size() == expected, "checkpoint parameter count does not match shapes");

  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write checkpoint '" + path + "'");
  out.write(kMagic, 8);
  std::string m = manifest.dump();
  write_u64_le(out, m.size());
  out.write(m.data(), static_cast<std::streamsize>(m.size()));
  for (double d : ck.params) write_u64_le(out, std::bit_cast<uint64_t>(d));
  require(out.good(), "failed writing checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open checkpoint '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  require(in.good() && std::equal(magic, magic + 8, kMagic), "not a checkpoint file: bad magic");
  uint64_t mlen = read_u64_le(in);
  require(mlen > 0 && mlen < (1ULL << 24), "checkpoint manifest length out of range");
  std::string mtext(mlen, '\0');
  in.read(mtext.data(), static_cast<std::streamsize>(mlen));
  require(in.good(), "checkpoint truncated in manifest");

  json manifest;
  try {
    manifest = json::parse(mtext);
  } catch (const json::exception& e) {
    throw Error(std::string("checkpoint manifest: ") + e.what());
  }

  Checkpoint ck;
  ck.labels.classes = manifest.at("classes").get<std::vector<std::string>>();
  if (manifest.contains("others") && !manifest["others"].is_null())
    ck.labels.others = manifest["others"].get<std::string>();
  ck.labels.validate();
  const auto& mj = manifest.at("model");
  ck.model.hash_buckets = mj.at("hash_buckets").get<uint32_t>();
  ck.model.embed_dim = mj.at("embed_dim").get<int>();
  ck.model.repr_dim = mj.at("repr_dim").get<int>();
  ck.model.n_classes = mj.at("n_classes").get<int>();
  ck.model.dropout_rate = mj.at("dropout_rate").get<double>();
  require(ck.model.n_classes == ck.labels.size(), "checkpoint class count mismatch");
  const auto& fj = manifest.at("features");
  ck.features.hash_buckets = fj.at("hash_buckets").get<uint32_t>();
  ck.features.ngram_orders = fj.at("ngram_orders").get<std::vector<int>>();
  ck.token_window = fj.at("token_window").get<int>();
  require(ck.features.hash_buckets == ck.model.hash_buckets,
          "featurizer and embedding bucket counts differ");

  size_t expected = 0;
  auto shapes = tensor_shapes(ck.model);
  require(manifest.at("tensors").size() == shapes.size(), "checkpoint tensor list mismatch");
  for (size_t i = 0; i < shapes.size(); ++i) {
    const auto& tj = manifest["tensors"][i];
    require(tj.at("name").get<std::string>() == shapes[i].first,
            "unexpected tensor '" + tj.at("name").get<std::string>() + "'");
    require(tj.at("shape").get<std::vector<long>>() == shapes[i].second,
            "tensor '" + shapes[i].first + "' has unexpected shape");
    size_t n = 1;
    for (long d : shapes[i].second) n *= static_cast<size_t>(d);
    expected += n;
  }

  ck.params.resize(expected);
  for (size_t i = 0; i < expected; ++i) ck.params[i] = std::bit_cast<double>(read_u64_le(in));
  in.peek();
  require(in.eof(), "trailing bytes after checkpoint parameters");
  return ck;
}

}  // namespace cst
