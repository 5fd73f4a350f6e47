#include "cst/config.hpp"

#include <fstream>
#include <sstream>

#include "cst/error.hpp"
#include "cst/kv.hpp"

namespace cst {

namespace {

std::vector<int> parse_orders(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::istringstream in(v);
  std::string part;
  while (std::getline(in, part, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    out.push_back(static_cast<int>(parse_long(key, part)));
  }
  require(!out.empty(), "config key '" + key + "': empty order list");
  return out;
}

void set_key(TrainConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "t1") cfg.t1 = parse_long(key, value);
  else if (key == "t2") cfg.t2 = parse_long(key, value);
  else if (key == "t3") cfg.t3 = parse_long(key, value);
  else if (key == "xi") cfg.xi = parse_double(key, value);
  else if (key == "lambda") cfg.lambda = parse_double(key, value);
  else if (key == "gamma") cfg.gamma = parse_double(key, value);
  else if (key == "beta") cfg.beta = parse_double(key, value);
  else if (key == "distance") {
    if (value == "scaled_euclidean") cfg.distance = Distance::kScaledEuclidean;
    else if (value == "cosine") cfg.distance = Distance::kCosine;
    else throw Error("config key 'distance': expected scaled_euclidean|cosine, got '" + value + "'");
  } else if (key == "similarity") {
    if (value == "hard") cfg.similarity = Similarity::kHard;
    else if (value == "kl_soft") cfg.similarity = Similarity::kKlSoft;
    else if (value == "l2_soft") cfg.similarity = Similarity::kL2Soft;
    else throw Error("config key 'similarity': expected hard|kl_soft|l2_soft, got '" + value + "'");
  } else if (key == "pair_mode") {
    if (value == "sampled") cfg.pair_mode = PairMode::kSampled;
    else if (value == "exhaustive") cfg.pair_mode = PairMode::kExhaustive;
    else throw Error("config key 'pair_mode': expected sampled|exhaustive, got '" + value + "'");
  } else if (key == "learning_rate") cfg.learning_rate = parse_double(key, value);
  else if (key == "weight_decay") cfg.weight_decay = parse_double(key, value);
  else if (key == "warmup_ratio") cfg.warmup_ratio = parse_double(key, value);
  else if (key == "batch_size") cfg.batch_size = parse_long(key, value);
  else if (key == "seed") cfg.seed = parse_u64(key, value);
  else if (key == "use_soft_labels") cfg.use_soft_labels = parse_bool(key, value);
  else if (key == "use_r1") cfg.use_r1 = parse_bool(key, value);
  else if (key == "use_r2") cfg.use_r2 = parse_bool(key, value);
  else if (key == "use_reweighting") cfg.use_reweighting = parse_bool(key, value);
  else if (key == "mode") {
    if (value == "weak") cfg.mode = TrainMode::kWeak;
    else if (value == "semi") cfg.mode = TrainMode::kSemi;
    else if (value == "transductive") cfg.mode = TrainMode::kTransductive;
    else throw Error("config key 'mode': expected weak|semi|transductive, got '" + value + "'");
  } else if (key == "corruption_ratio") cfg.corruption_ratio = parse_double(key, value);
  else if (key == "hash_buckets") cfg.hash_buckets = static_cast<uint32_t>(parse_u64(key, value));
  else if (key == "embed_dim") cfg.embed_dim = static_cast<int>(parse_long(key, value));
  else if (key == "repr_dim") cfg.repr_dim = static_cast<int>(parse_long(key, value));
  else if (key == "dropout_rate") cfg.dropout_rate = parse_double(key, value);
  else if (key == "ngram_orders") cfg.ngram_orders = parse_orders(key, value);
  else if (key == "token_window") cfg.token_window = static_cast<int>(parse_long(key, value));
  else throw Error("unknown config key '" + key + "'");
}

}  // namespace

void TrainConfig::validate() const {
  require(t1 >= 0, "t1 must be >= 0");
  require(t2 >= 0, "t2 must be >= 0");
  require(t3 >= 1, "t3 must be >= 1");
  require(xi >= 0.0 && xi <= 1.0, "xi must lie in [0, 1]");
  require(lambda >= 0.0, "lambda must be >= 0");
  require(gamma > 0.0, "gamma must be positive");
  require(beta > 0.0, "beta must be positive");
  require(learning_rate > 0.0, "learning_rate must be positive");
  require(weight_decay >= 0.0, "weight_decay must be >= 0");
  require(warmup_ratio >= 0.0 && warmup_ratio <= 1.0, "warmup_ratio must lie in [0, 1]");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(corruption_ratio >= 0.0 && corruption_ratio <= 1.0,
          "corruption_ratio must lie in [0, 1]");
  require(hash_buckets > 0, "hash_buckets must be positive");
  require(embed_dim > 0, "embed_dim must be positive");
  require(repr_dim > 0, "repr_dim must be positive");
  require(dropout_rate >= 0.0 && dropout_rate < 1.0, "dropout_rate must lie in [0, 1)");
  require(!ngram_orders.empty(), "ngram_orders must not be empty");
  for (int n : ngram_orders) require(n >= 1, "ngram orders must be >= 1");
  require(token_window >= 0, "token_window must be >= 0");
}

std::string distance_name(Distance d) {
  return d == Distance::kScaledEuclidean ? "scaled_euclidean" : "cosine";
}

std::string similarity_name(Similarity s) {
  switch (s) {
    case Similarity::kHard: return "hard";
    case Similarity::kKlSoft: return "kl_soft";
    case Similarity::kL2Soft: return "l2_soft";
  }
  return "hard";
}

std::string pair_mode_name(PairMode m) {
  return m == PairMode::kSampled ? "sampled" : "exhaustive";
}

std::string train_mode_name(TrainMode m) {
  switch (m) {
    case TrainMode::kWeak: return "weak";
    case TrainMode::kSemi: return "semi";
    case TrainMode::kTransductive: return "transductive";
  }
  return "weak";
}

TrainConfig parse_config(const std::string& text) {
  TrainConfig cfg;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    require(eq != std::string::npos,
            "config line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    require(!key.empty(), "config line " + std::to_string(lineno) + ": empty key");
    set_key(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

TrainConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(TrainConfig& cfg, const std::string& assignment) {
  size_t eq = assignment.find('=');
  require(eq != std::string::npos, "override '" + assignment + "': expected key=value");
  std::string key = trim(assignment.substr(0, eq));
  std::string value = trim(assignment.substr(eq + 1));
  set_key(cfg, key, value);
  cfg.validate();
}

std::string config_to_string(const TrainConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "t1 = " << cfg.t1 << "\n";
  out << "t2 = " << cfg.t2 << "\n";
  out << "t3 = " << cfg.t3 << "\n";
  out << "xi = " << cfg.xi << "\n";
  out << "lambda = " << cfg.lambda << "\n";
  out << "gamma = " << cfg.gamma << "\n";
  out << "beta = " << cfg.beta << "\n";
  out << "distance = " << distance_name(cfg.distance) << "\n";
  out << "similarity = " << similarity_name(cfg.similarity) << "\n";
  out << "pair_mode = " << pair_mode_name(cfg.pair_mode) << "\n";
  out << "learning_rate = " << cfg.learning_rate << "\n";
  out << "weight_decay = " << cfg.weight_decay << "\n";
  out << "warmup_ratio = " << cfg.warmup_ratio << "\n";
  out << "batch_size = " << cfg.batch_size << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "use_soft_labels = " << (cfg.use_soft_labels ? "true" : "false") << "\n";
  out << "use_r1 = " << (cfg.use_r1 ? "true" : "false") << "\n";
  out << "use_r2 = " << (cfg.use_r2 ? "true" : "false") << "\n";
  out << "use_reweighting = " << (cfg.use_reweighting ? "true" : "false") << "\n";
  out << "mode = " << train_mode_name(cfg.mode) << "\n";
  out << "corruption_ratio = " << cfg.corruption_ratio << "\n";
  out << "hash_buckets = " << cfg.hash_buckets << "\n";
  out << "embed_dim = " << cfg.embed_dim << "\n";
  out << "repr_dim = " << cfg.repr_dim << "\n";
  out << "dropout_rate = " << cfg.dropout_rate << "\n";
  out << "ngram_orders = ";
  for (size_t i = 0; i < cfg.ngram_orders.size(); ++i) {
    if (i) out << ",";
    out << cfg.ngram_orders[i];
  }
  out << "\n";
  out << "token_window = " << cfg.token_window << "\n";
  return out.str();
}

}  // namespace cst
