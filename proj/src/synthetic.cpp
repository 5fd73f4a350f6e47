#include "cst/synthetic.hpp"

#include <fstream>
#include <sstream>

#include "cst/error.hpp"
#include "cst/kv.hpp"
#include "cst/rng.hpp"

namespace cst {

void GenSpec::validate() const {
  require(n_classes >= 2, "generator needs at least 2 classes");
  require(n_train >= 0 && n_dev >= 0 && n_test >= 0, "negative split size");
  require(n_train + n_dev + n_test > 0, "generator needs at least one sample");
  require(coverage >= 0.0 && coverage <= 1.0, "coverage must lie in [0, 1]");
  require(precision >= 0.0 && precision <= 1.0, "precision must lie in [0, 1]");
  require(keywords_per_class >= 2, "keywords_per_class must be >= 2");
  require(keywords_per_class / 2 < 10, "at most 9 rule keywords per class");
  require(noise_vocab >= 1, "noise_vocab must be >= 1");
  require(noise_min >= 0 && noise_max >= noise_min, "need 0 <= noise_min <= noise_max");
}

GenSpec parse_gen_spec(const std::string& text) {
  GenSpec spec;
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
            "generator spec line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "n_classes") spec.n_classes = static_cast<int>(parse_long(key, value));
    else if (key == "n_train") spec.n_train = parse_long(key, value);
    else if (key == "n_dev") spec.n_dev = parse_long(key, value);
    else if (key == "n_test") spec.n_test = parse_long(key, value);
    else if (key == "coverage") spec.coverage = parse_double(key, value);
    else if (key == "precision") spec.precision = parse_double(key, value);
    else if (key == "keywords_per_class")
      spec.keywords_per_class = static_cast<int>(parse_long(key, value));
    else if (key == "noise_vocab") spec.noise_vocab = static_cast<int>(parse_long(key, value));
    else if (key == "noise_min") spec.noise_min = static_cast<int>(parse_long(key, value));
    else if (key == "noise_max") spec.noise_max = static_cast<int>(parse_long(key, value));
    else if (key == "pattern_rules") spec.pattern_rules = parse_bool(key, value);
    else if (key == "seed") spec.seed = parse_u64(key, value);
    else throw Error("unknown generator spec key '" + key + "'");
  }
  spec.validate();
  return spec;
}

GenSpec load_gen_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open generator spec '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_gen_spec(ss.str());
}

Generated generate(const GenSpec& spec) {
  spec.validate();
  Generated out;
  for (int c = 0; c < spec.n_classes; ++c) out.rules.labels.classes.push_back("c" + std::to_string(c));

  int k_rule = spec.keywords_per_class / 2;
  int k_plain = spec.keywords_per_class - k_rule;
  for (int c = 0; c < spec.n_classes; ++c) {
    Rule r;
    r.target = c;
    if (spec.pattern_rules && c % 2 == 1) {
      r.kind = Rule::Kind::kPattern;
      // One-digit keyword indices keep this equivalent to the keyword list.
      r.pattern_src = "(^| )r" + std::to_string(c) + "_[0-" + std::to_string(k_rule - 1) + "]( |$)";
      r.pattern = std::regex(r.pattern_src, std::regex::extended);
    } else {
      r.kind = Rule::Kind::kKeyword;
      for (int i = 0; i < k_rule; ++i)
        r.keywords.push_back("r" + std::to_string(c) + "_" + std::to_string(i));
    }
    out.rules.rules.push_back(std::move(r));
  }

  Rng rng = Rng::stream(spec.seed, 8);
  long total = spec.n_train + spec.n_dev + spec.n_test;
  out.data.reserve(total);
  for (long i = 0; i < total; ++i) {
    int y = static_cast<int>(rng.next_below(spec.n_classes));
    std::vector<std::string> tokens;

    int n_plain = 1 + static_cast<int>(rng.next_below(std::min(2, k_plain)));
    int first = static_cast<int>(rng.next_below(k_plain));
    tokens.push_back("k" + std::to_string(y) + "_" + std::to_string(first));
    if (n_plain == 2) {
      int second = (first + 1 + static_cast<int>(rng.next_below(k_plain - 1))) % k_plain;
      tokens.push_back("k" + std::to_string(y) + "_" + std::to_string(second));
    }

    if (rng.next_double() < spec.coverage) {
      int target = y;
      if (rng.next_double() >= spec.precision)
        target = (y + 1 + static_cast<int>(rng.next_below(spec.n_classes - 1))) % spec.n_classes;
      int ridx = static_cast<int>(rng.next_below(k_rule));
      tokens.push_back("r" + std::to_string(target) + "_" + std::to_string(ridx));
    }

    int n_noise = spec.noise_min + static_cast<int>(rng.next_below(spec.noise_max - spec.noise_min + 1));
    for (int j = 0; j < n_noise; ++j)
      tokens.push_back("w" + std::to_string(rng.next_below(spec.noise_vocab)));

    rng.shuffle(tokens);

    Sample s;
    s.id = "s" + std::to_string(i);
    s.kind = TaskKind::kSequence;
    for (size_t t = 0; t < tokens.size(); ++t) {
      if (t) s.text += ' ';
      s.text += tokens[t];
    }
    s.gold = y;
    s.split = i < spec.n_train ? Split::kTrain
                               : (i < spec.n_train + spec.n_dev ? Split::kDev : Split::kTest);
    out.data.push_back(std::move(s));
  }
  return out;
}

}  // namespace cst
