#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cst {

constexpr int kAbstain = -1;

enum class Split { kTrain, kDev, kTest };
enum class TaskKind { kSequence, kToken, kPair };

std::string split_name(Split s);
Split parse_split(const std::string& s);

// Ordered label set. `others`, when set, names the class excluded from
// micro-F1 (slot-filling style "Others" tag).
struct LabelSpace {
  std::vector<std::string> classes;
  std::optional<std::string> others;

  int size() const { return static_cast<int>(classes.size()); }
  int index_of(const std::string& name) const;
  int others_index() const;  // kAbstain when unset
  void validate() const;
};

// One training/eval instance. Token-classification lines are exploded into
// one sample per token at load time; such samples carry the token window and
// the center position instead of `text`.
struct Sample {
  std::string id;
  TaskKind kind = TaskKind::kSequence;
  std::string text;             // sequence kind
  std::string text_a, text_b;   // pair kind
  std::vector<std::string> window;  // token kind: center token +- window
  int center = 0;               // index of the center token inside `window`
  int gold = kAbstain;          // class index, kAbstain = no gold label
  int weak = kAbstain;          // class index, kAbstain = uncovered
  bool clean = false;           // trusted gold label (semi-supervised mode)
  Split split = Split::kTrain;
};

using Dataset = std::vector<Sample>;

// Text a rule is matched against: the sample text, the joined token window,
// or both pair sentences joined.
std::string rule_text(const Sample& s);

// JSON-lines loader. Lines look like
//   {"id": "...", "text": "...", "gold": "name"|null, "split": "train"}
// with "text_a"/"text_b" for sentence pairs and "tokens"/"labels" for token
// tasks. Optional fields: "weak" (class name or null), "clean" (bool).
// Token lines become one sample per token using `token_window`.
Dataset load_dataset(const std::string& path, const LabelSpace& labels, int token_window = 2);
Dataset parse_dataset(const std::string& jsonl, const LabelSpace& labels, int token_window = 2);

// Writes one line per sample. Exploded token samples are written back as
// individual token-window records.
void save_dataset(const std::string& path, const Dataset& data, const LabelSpace& labels);
std::string dataset_to_jsonl(const Dataset& data, const LabelSpace& labels);

std::vector<int> split_indices(const Dataset& data, Split split);

}  // namespace cst
