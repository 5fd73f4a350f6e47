#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cst/checkpoint.hpp"
#include "cst/config.hpp"
#include "cst/data.hpp"
#include "cst/error.hpp"
#include "cst/evaluation.hpp"
#include "cst/objectives.hpp"
#include "cst/rules.hpp"
#include "cst/synthetic.hpp"
#include "cst/trainer.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  cst::require(out.good(), "cannot write '" + path + "'");
  out << content;
  cst::require(out.good(), "failed writing '" + path + "'");
}

json coverage_to_json(const cst::CoverageStats& st) {
  json j;
  j["total"] = st.total;
  j["covered"] = st.covered;
  j["coverage"] = st.coverage();
  j["gold_covered"] = st.gold_covered;
  j["correct_covered"] = st.correct_covered;
  j["precision"] = st.precision() ? json(*st.precision()) : json();
  j["per_rule_hits"] = st.per_rule_hits;
  return j;
}

void cmd_gen(const std::string& spec_path, const std::string& out_dir) {
  cst::GenSpec spec = cst::load_gen_spec(spec_path);
  cst::Generated gen = cst::generate(spec);
  fs::create_directories(out_dir);
  write_file(out_dir + "/rules.json", cst::rules_to_json(gen.rules));
  cst::save_dataset(out_dir + "/data.jsonl", gen.data, gen.rules.labels);
  std::cout << "wrote " << gen.data.size() << " samples and " << gen.rules.rules.size()
            << " rules to " << out_dir << "\n";
}

void cmd_label(const std::string& rules_path, const std::string& data_path,
               const std::string& out_path, const std::string& stats_path, int token_window) {
  cst::RuleFile rf = cst::load_rules(rules_path);
  cst::Dataset data = cst::load_dataset(data_path, rf.labels, token_window);
  cst::CoverageStats st = cst::label_dataset(rf.rules, rf.labels, data);
  cst::save_dataset(out_path, data, rf.labels);
  std::string stats = coverage_to_json(st).dump(2) + "\n";
  if (!stats_path.empty()) write_file(stats_path, stats);
  std::cout << stats;
}

void cmd_train(const std::string& config_path, const std::string& rules_path,
               const std::string& data_path, const std::string& out_dir,
               const std::vector<std::string>& overrides) {
  cst::TrainConfig cfg = cst::load_config(config_path);
  for (const auto& o : overrides) cst::apply_override(cfg, o);
  cst::RuleFile rf = cst::load_rules(rules_path);
  cst::Dataset data = cst::load_dataset(data_path, rf.labels, cfg.token_window);

  json summary;
  if (!rf.rules.empty()) {
    cst::CoverageStats st = cst::label_dataset(rf.rules, rf.labels, data);
    summary["coverage"] = coverage_to_json(st);
  }
  cst::TrainResult res = cst::train(cfg, rf.labels, data);

  fs::create_directories(out_dir);
  write_file(out_dir + "/config.txt", cst::config_to_string(cfg));
  cst::save_checkpoint(out_dir + "/init.ckpt", res.init_checkpoint);
  cst::save_checkpoint(out_dir + "/final.ckpt", res.final_checkpoint);
  write_file(out_dir + "/steps.jsonl", cst::steps_to_jsonl(res.steps));
  write_file(out_dir + "/evals.jsonl", cst::evals_to_jsonl(res.evals));

  summary["refreshes"] = res.refreshes;
  summary["skipped_steps"] = res.skipped_steps;
  summary["final"] = json::object();
  for (const auto& e : res.evals) {
    if (e.step != cfg.t1 + cfg.t2) continue;
    summary["final"][e.split] = {{"accuracy", e.accuracy}, {"micro_f1", e.micro_f1}, {"n", e.n}};
  }
  write_file(out_dir + "/summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
}

void cmd_eval(const std::string& ckpt_path, const std::string& data_path,
              const std::string& split_name, const std::string& out_path, int n_bins,
              const std::string& bins_csv) {
  cst::Checkpoint ck = cst::load_checkpoint(ckpt_path);
  cst::Dataset data = cst::load_dataset(data_path, ck.labels, ck.token_window);
  cst::Split split = cst::parse_split(split_name);

  cst::Model model(ck.model);
  model.params = ck.params;
  std::vector<cst::Features> feats(data.size());
  for (size_t i = 0; i < data.size(); ++i) feats[i] = cst::featurize(data[i], ck.features);

  auto e = cst::evaluate_split(model, feats, data, split, ck.labels.others_index());
  cst::require(e.has_value(), "no gold-labeled samples in split '" + split_name + "'");
  json j = {{"split", e->split}, {"accuracy", e->accuracy}, {"micro_f1", e->micro_f1}, {"n", e->n}};
  if (!out_path.empty()) write_file(out_path, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";

  if (!bins_csv.empty()) {
    cst::Vec conf;
    std::vector<bool> correct;
    for (size_t i = 0; i < data.size(); ++i) {
      if (data[i].split != split || data[i].gold == cst::kAbstain) continue;
      cst::Vec probs = model.forward(feats[i], false).probs;
      conf.push_back(cst::confidence_weight(probs));
      correct.push_back(cst::argmax(probs) == data[i].gold);
    }
    std::string csv = "lo,hi,n,mean_conf,accuracy\n";
    for (const auto& b : cst::confidence_bins(conf, correct, n_bins)) {
      csv += std::to_string(b.lo) + "," + std::to_string(b.hi) + "," + std::to_string(b.n) + "," +
             std::to_string(b.mean_conf) + "," + std::to_string(b.accuracy) + "\n";
    }
    write_file(bins_csv, csv);
  }
}

void cmd_corrupt(const std::string& rules_path, const std::string& data_path, double ratio,
                 uint64_t seed, const std::string& out_path, bool from_gold, int token_window) {
  cst::RuleFile rf = cst::load_rules(rules_path);
  cst::Dataset data = cst::load_dataset(data_path, rf.labels, token_window);
  std::vector<int> labels;
  for (const auto& s : data) labels.push_back(from_gold ? s.gold : s.weak);
  labels = cst::corrupt_labels(labels, ratio, rf.labels.size(), seed);
  for (size_t i = 0; i < data.size(); ++i) data[i].weak = labels[i];
  cst::save_dataset(out_path, data, rf.labels);
  std::cout << "wrote " << data.size() << " samples to " << out_path << "\n";
}

void cmd_ablate(const std::string& config_path, const std::string& rules_path,
                const std::string& data_path, const std::string& seeds_str,
                const std::string& out_path, const std::vector<std::string>& overrides) {
  cst::TrainConfig base = cst::load_config(config_path);
  for (const auto& o : overrides) cst::apply_override(base, o);
  cst::RuleFile rf = cst::load_rules(rules_path);
  cst::Dataset data = cst::load_dataset(data_path, rf.labels, base.token_window);
  if (!rf.rules.empty()) cst::label_dataset(rf.rules, rf.labels, data);

  std::vector<uint64_t> seeds;
  {
    std::istringstream in(seeds_str);
    std::string part;
    while (std::getline(in, part, ',')) {
      if (!part.empty()) seeds.push_back(std::stoull(part));
    }
  }
  cst::require(!seeds.empty(), "ablate needs at least one seed");

  struct Variant {
    std::string name;
    void (*toggle)(cst::TrainConfig&);
  };
  std::vector<Variant> variants = {
      {"full", [](cst::TrainConfig&) {}},
      {"no_r1", [](cst::TrainConfig& c) { c.use_r1 = false; }},
      {"no_r2", [](cst::TrainConfig& c) { c.use_r2 = false; }},
      {"no_reweighting", [](cst::TrainConfig& c) { c.use_reweighting = false; }},
      {"no_soft_labels", [](cst::TrainConfig& c) { c.use_soft_labels = false; }},
  };

  json out;
  out["seeds"] = seeds;
  out["variants"] = json::object();
  for (const auto& v : variants) {
    json accs = json::array();
    double sum = 0.0;
    for (uint64_t seed : seeds) {
      cst::TrainConfig cfg = base;
      cfg.seed = seed;
      v.toggle(cfg);
      cst::TrainResult res = cst::train(cfg, rf.labels, data);
      double acc = -1.0;
      for (const auto& e : res.evals)
        if (e.step == cfg.t1 + cfg.t2 && e.split == "test") acc = e.accuracy;
      cst::require(acc >= 0.0, "ablation run produced no final test evaluation");
      accs.push_back(acc);
      sum += acc;
    }
    out["variants"][v.name] = {{"test_acc", accs},
                               {"mean", sum / static_cast<double>(seeds.size())}};
    std::cout << v.name << ": mean test acc "
              << sum / static_cast<double>(seeds.size()) << "\n";
  }
  write_file(out_path, out.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-rule labeling, training, and evaluation pipeline"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic benchmark (rules + dataset)");
  std::string gen_spec, gen_out;
  gen->add_option("--spec", gen_spec, "generator spec file")->required();
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->callback([&]() { cmd_gen(gen_spec, gen_out); });

  // label
  auto* label = app.add_subcommand("label", "Apply weak rules to a dataset");
  std::string lb_rules, lb_data, lb_out, lb_stats;
  int lb_window = 2;
  label->add_option("--rules", lb_rules, "rule file")->required();
  label->add_option("--data", lb_data, "dataset JSONL")->required();
  label->add_option("--out", lb_out, "labeled dataset output path")->required();
  label->add_option("--stats", lb_stats, "coverage stats JSON output path");
  label->add_option("--token-window", lb_window, "context window for token tasks");
  label->callback([&]() { cmd_label(lb_rules, lb_data, lb_out, lb_stats, lb_window); });

  // train
  auto* train = app.add_subcommand("train", "Run the two-stage training pipeline");
  std::string tr_config, tr_rules, tr_data, tr_out;
  std::vector<std::string> tr_set;
  train->add_option("--config", tr_config, "train config file")->required();
  train->add_option("--rules", tr_rules, "rule file")->required();
  train->add_option("--data", tr_data, "dataset JSONL")->required();
  train->add_option("--out", tr_out, "output directory")->required();
  train->add_option("--set", tr_set, "config override key=value (repeatable)");
  train->callback([&]() { cmd_train(tr_config, tr_rules, tr_data, tr_out, tr_set); });

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on one split");
  std::string ev_ckpt, ev_data, ev_split = "test", ev_out, ev_csv;
  int ev_bins = 10;
  eval->add_option("--checkpoint", ev_ckpt, "checkpoint file")->required();
  eval->add_option("--data", ev_data, "dataset JSONL")->required();
  eval->add_option("--split", ev_split, "train|dev|test");
  eval->add_option("--out", ev_out, "metrics JSON output path");
  eval->add_option("--bins", ev_bins, "confidence bin count");
  eval->add_option("--bins-csv", ev_csv, "confidence-vs-accuracy CSV output path");
  eval->callback([&]() { cmd_eval(ev_ckpt, ev_data, ev_split, ev_out, ev_bins, ev_csv); });

  // corrupt
  auto* corrupt = app.add_subcommand("corrupt", "Randomly flip weak labels");
  std::string co_rules, co_data, co_out;
  double co_ratio = 0.0;
  uint64_t co_seed = 1;
  bool co_gold = false;
  int co_window = 2;
  corrupt->add_option("--rules", co_rules, "rule file")->required();
  corrupt->add_option("--data", co_data, "dataset JSONL")->required();
  corrupt->add_option("--ratio", co_ratio, "corruption probability in [0,1]")->required();
  corrupt->add_option("--seed", co_seed, "corruption seed");
  corrupt->add_option("--out", co_out, "output dataset path")->required();
  corrupt->add_flag("--from-gold", co_gold, "seed weak labels from gold before flipping");
  corrupt->add_option("--token-window", co_window, "context window for token tasks");
  corrupt->callback(
      [&]() { cmd_corrupt(co_rules, co_data, co_ratio, co_seed, co_out, co_gold, co_window); });

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Train full model and flag-off variants");
  std::string ab_config, ab_rules, ab_data, ab_seeds = "1,2,3", ab_out;
  std::vector<std::string> ab_set;
  ablate->add_option("--config", ab_config, "train config file")->required();
  ablate->add_option("--rules", ab_rules, "rule file")->required();
  ablate->add_option("--data", ab_data, "dataset JSONL")->required();
  ablate->add_option("--seeds", ab_seeds, "comma-separated seed list");
  ablate->add_option("--out", ab_out, "results JSON output path")->required();
  ablate->add_option("--set", ab_set, "config override key=value (repeatable)");
  ablate->callback([&]() { cmd_ablate(ab_config, ab_rules, ab_data, ab_seeds, ab_out, ab_set); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
