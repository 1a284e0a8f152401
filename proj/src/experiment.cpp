#include "tsed/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <charconv>
#include <ostream>
#include <unordered_map>

#include "tsed/error.hpp"

namespace tsed {

std::optional<MethodSpec> parse_method(std::string_view name) {
  std::string lowered(name);
  for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  MethodSpec spec;
  std::string_view rest = lowered;
  if (rest.starts_with("t-")) {
    spec.temporal = true;
    rest.remove_prefix(2);
  }
  const std::string prefix = spec.temporal ? "t-" : "";
  if (rest == "lr") {
    spec.family = MethodFamily::LogisticRegression;
    spec.name = prefix + "LR";
    return spec;
  }
  const auto base = parse_base_metric(rest);
  if (!base) return std::nullopt;
  spec.base = *base;
  spec.name = prefix + std::string(to_string(*base));
  return spec;
}

std::vector<std::size_t> default_k_grid() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::vector<double> default_theta_grid() { return {0.0, 0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0}; }

std::string method_slug(std::string_view name) {
  std::string slug;
  for (char c : name) {
    if (c == '/') slug.push_back('_');
    else slug.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return slug;
}

PreparedExperiment prepare_experiment(const Corpus& corpus, const CooccurrenceMatrix& cooccurrence,
                                      const ExperimentConfig& config) {
  PreparedExperiment ex;
  ex.corpus = &corpus;
  ex.cooccurrence = &cooccurrence;

  const auto accounts = labeled_accounts(corpus.items);
  for (RoleLabel label : kAllLabels) {
    if (std::any_of(accounts.begin(), accounts.end(), [&](const auto& a) { return a.label == label; })) {
      ex.classes.push_back(label);
    }
  }
  ex.plan = split_accounts(accounts, config.ratios, config.seed);

  std::unordered_map<std::string, std::vector<TraceItem>> by_account;
  for (const TraceItem& item : corpus.items) {
    if (item.label) by_account[item.account_id].push_back(item);
  }

  auto collect = [&](const std::array<std::vector<std::string>, kNumLabels>& part, std::vector<TraceItem>& items,
                     std::vector<AccountInfo>* infos, std::vector<std::size_t>* owners, ClassCounts* counts) {
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      for (const std::string& account : part[c]) {
        auto sample = sample_tweets(by_account.at(account), config.sample_size, config.seed);
        if (sample.empty()) {
          ++ex.dropped_accounts;
          continue;
        }
        if (counts) ++(*counts)[c];
        if (infos) {
          for (std::size_t i = 0; i < sample.size(); ++i) owners->push_back(infos->size());
          infos->push_back({account, kAllLabels[c]});
        }
        items.insert(items.end(), std::make_move_iterator(sample.begin()), std::make_move_iterator(sample.end()));
      }
    }
  };
  collect(ex.plan.train, ex.train, nullptr, nullptr, &ex.training_accounts);
  collect(ex.plan.validation, ex.validation, &ex.validation_accounts, &ex.validation_owner, nullptr);
  collect(ex.plan.test, ex.test, &ex.test_accounts, &ex.test_owner, nullptr);

  if (ex.train.empty()) throw ConfigError("no training tweets after sampling");
  if (ex.validation_accounts.empty()) throw ConfigError("no validation accounts after splitting");
  if (ex.test_accounts.empty()) throw ConfigError("no test accounts after splitting");
  return ex;
}

namespace {

std::vector<RoleLabel> account_votes(std::span<const RoleLabel> tweet_predictions, std::span<const std::size_t> owner,
                                     std::size_t num_accounts, const ClassCounts& training_accounts) {
  std::vector<std::vector<RoleLabel>> grouped(num_accounts);
  for (std::size_t i = 0; i < tweet_predictions.size(); ++i) grouped[owner[i]].push_back(tweet_predictions[i]);
  std::vector<RoleLabel> out;
  out.reserve(num_accounts);
  for (const auto& g : grouped) out.push_back(vote_account(g, training_accounts));
  return out;
}

std::vector<RoleLabel> truth_of(const std::vector<AccountInfo>& accounts) {
  std::vector<RoleLabel> out;
  for (const auto& a : accounts) out.push_back(a.label);
  return out;
}

}  // namespace

EvalReport run_method(const PreparedExperiment& ex, const MethodSpec& method, const ExperimentConfig& config,
                      std::string dataset_hash) {
  const auto started = std::chrono::steady_clock::now();
  EvalReport report;
  report.method = method.name;
  report.effective_method = method.name;
  report.family = method.family;
  report.seed = config.seed;
  report.sample_size = config.sample_size;
  report.dataset_hash = std::move(dataset_hash);

  const auto valid_truth = truth_of(ex.validation_accounts);
  const auto test_truth = truth_of(ex.test_accounts);

  if (method.family == MethodFamily::LogisticRegression) {
    const LrModel model = train_lr(ex.train, ex.corpus->vocab.size(), method.temporal, config.lr);
    std::vector<RoleLabel> valid_tweets, test_tweets;
    for (const auto& item : ex.validation) valid_tweets.push_back(predict_lr(model, item));
    for (const auto& item : ex.test) test_tweets.push_back(predict_lr(model, item));
    const auto valid_scores = f1_scores(valid_truth, account_votes(valid_tweets, ex.validation_owner,
                                                                   ex.validation_accounts.size(), ex.training_accounts),
                                        ex.classes);
    Selection s;
    s.validation_micro = valid_scores.micro;
    s.validation_macro = valid_scores.macro;
    s.test_tweet_predictions = std::move(test_tweets);
    s.test_account_predictions =
        account_votes(s.test_tweet_predictions, ex.test_owner, ex.test_accounts.size(), ex.training_accounts);
    s.test = f1_scores(test_truth, s.test_account_predictions, ex.classes);
    report.by_macro = s;
    report.by_micro = std::move(s);
  } else {
    const bool use_grid = method.temporal || config.theta_grid_explicit;
    report.k_grid = config.k_grid;
    report.theta_grid = use_grid ? config.theta_grid : std::vector<double>{0.0};
    if (!method.temporal && std::any_of(report.theta_grid.begin(), report.theta_grid.end(), [](double t) { return t > 0; })) {
      report.effective_method = "t-" + method.name;
    }
    DistanceSpec spec{method.base, 0.0, ex.cooccurrence};
    const SweepGrid grid{report.k_grid, report.theta_grid};
    const SweepPredictions valid = knn_sweep(ex.validation, ex.train, spec, grid, config.workers);
    const SweepPredictions test = knn_sweep(ex.test, ex.train, spec, grid, config.workers);

    auto index_of = [&](std::size_t k, double theta) {
      const auto t = static_cast<std::size_t>(std::find(report.theta_grid.begin(), report.theta_grid.end(), theta) -
                                              report.theta_grid.begin());
      const auto ki = static_cast<std::size_t>(std::find(report.k_grid.begin(), report.k_grid.end(), k) -
                                               report.k_grid.begin());
      return std::pair{t, ki};
    };
    const GridSearchResult search = grid_search(report.k_grid, report.theta_grid, [&](std::size_t k, double theta) {
      const auto [t, ki] = index_of(k, theta);
      return f1_scores(valid_truth,
                       account_votes(valid.column(t, ki), ex.validation_owner, ex.validation_accounts.size(),
                                     ex.training_accounts),
                       ex.classes);
    });
    report.validation_surface = search.surface;

    auto select = [&](const GridPoint& p) {
      const auto [t, ki] = index_of(p.k, p.theta);
      Selection s;
      s.k = p.k;
      s.theta = p.theta;
      s.validation_micro = p.micro_f1;
      s.validation_macro = p.macro_f1;
      const auto column = test.column(t, ki);
      s.test_tweet_predictions.assign(column.begin(), column.end());
      s.test_account_predictions =
          account_votes(column, ex.test_owner, ex.test_accounts.size(), ex.training_accounts);
      s.test = f1_scores(test_truth, s.test_account_predictions, ex.classes);
      return s;
    };
    report.by_macro = select(search.best_macro);
    report.by_micro = select(search.best_micro);
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

namespace {

nlohmann::json scores_json(const F1Report& r) {
  nlohmann::json per_class = nlohmann::json::object();
  for (RoleLabel label : r.classes) {
    const auto& s = r.per_class[label_index(label)];
    per_class[std::string(to_string(label))] = {
        {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
  }
  nlohmann::json confusion = nlohmann::json::array();
  for (RoleLabel t : r.classes) {
    nlohmann::json row = nlohmann::json::array();
    for (RoleLabel p : r.classes) row.push_back(r.confusion[label_index(t)][label_index(p)]);
    confusion.push_back(row);
  }
  return {{"micro_f1", r.micro}, {"macro_f1", r.macro}, {"per_class", per_class}, {"confusion", confusion}};
}

nlohmann::json selection_json(const Selection& s) {
  return {{"k", s.k ? nlohmann::json(*s.k) : nlohmann::json(nullptr)},
          {"theta", s.theta ? nlohmann::json(*s.theta) : nlohmann::json(nullptr)},
          {"validation_micro_f1", s.validation_micro},
          {"validation_macro_f1", s.validation_macro},
          {"test", scores_json(s.test)}};
}

nlohmann::json counts_json(const std::array<std::vector<std::string>, kNumLabels>& part) {
  nlohmann::json j = nlohmann::json::object();
  for (RoleLabel label : kAllLabels) j[std::string(to_string(label))] = part[label_index(label)].size();
  return j;
}

void write_number(std::ostream& out, double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  out.write(buffer, result.ptr - buffer);
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& report, const PreparedExperiment& ex) {
  nlohmann::json classes = nlohmann::json::array();
  for (RoleLabel label : ex.classes) classes.push_back(std::string(to_string(label)));
  nlohmann::json surface = nlohmann::json::array();
  for (const GridPoint& p : report.validation_surface) {
    surface.push_back({{"k", p.k}, {"theta", p.theta}, {"micro_f1", p.micro_f1}, {"macro_f1", p.macro_f1}});
  }
  nlohmann::json doc = {
      {"schema_version", kReportSchemaVersion},
      {"method", report.method},
      {"effective_method", report.effective_method},
      {"family", report.family == MethodFamily::Knn ? "knn" : "lr"},
      {"dataset_hash", report.dataset_hash},
      {"seed", report.seed},
      {"sample_size", report.sample_size},
      {"classes", classes},
      {"split",
       {{"train", counts_json(ex.plan.train)},
        {"validation", counts_json(ex.plan.validation)},
        {"test", counts_json(ex.plan.test)},
        {"dropped_accounts", ex.dropped_accounts},
        {"train_tweets", ex.train.size()},
        {"validation_tweets", ex.validation.size()},
        {"test_tweets", ex.test.size()}}},
      {"grid", {{"k", report.k_grid}, {"theta", report.theta_grid}}},
      {"validation_surface", surface},
      {"selected_by_macro", selection_json(report.by_macro)},
      {"selected_by_micro", selection_json(report.by_micro)},
      {"summary",
       {{"micro_f1", report.by_micro.test.micro},
        {"micro_k", report.by_micro.k ? nlohmann::json(*report.by_micro.k) : nlohmann::json(nullptr)},
        {"macro_f1", report.by_macro.test.macro},
        {"macro_k", report.by_macro.k ? nlohmann::json(*report.by_macro.k) : nlohmann::json(nullptr)}}},
  };
  return doc;
}

void write_grid_csv(std::ostream& out, const EvalReport& report) {
  out << "k,theta,micro_f1,macro_f1\n";
  for (const GridPoint& p : report.validation_surface) {
    out << p.k << ',';
    write_number(out, p.theta);
    out << ',';
    write_number(out, p.micro_f1);
    out << ',';
    write_number(out, p.macro_f1);
    out << '\n';
  }
}

void write_predictions_csv(std::ostream& out, const EvalReport& report, const PreparedExperiment& ex) {
  out << "item_id,account_id,true_label,predicted_label,k,metric,theta\n";
  const Selection& s = report.by_macro;
  for (std::size_t i = 0; i < ex.test.size(); ++i) {
    const TraceItem& item = ex.test[i];
    out << item.item_id << ',' << item.account_id << ',' << to_string(*item.label) << ','
        << to_string(s.test_tweet_predictions[i]) << ',';
    if (s.k) out << *s.k;
    out << ',' << report.effective_method << ',';
    if (s.theta) write_number(out, *s.theta);
    out << '\n';
  }
}

}  // namespace tsed
