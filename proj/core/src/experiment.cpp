#include "reckit/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reckit/actr.hpp"
#include "reckit/eval.hpp"
#include "reckit/neighbors.hpp"
#include "reckit/privacy.hpp"
#include "reckit/rng.hpp"
#include "reckit/trust.hpp"
#include "reckit/version.hpp"

namespace reckit::experiment {

namespace {

using nlohmann::json;

const std::set<std::string> kAlgorithms = {
    "userknn", "itemknn", "mostpop", "reuseknn_dp", "bll", "act", "trust_knn"};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return doc;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  const json doc = load_json(path);
  ExperimentConfig cfg;
  cfg.config_path = path;
  try {
    if (!doc.contains("interactions"))
      throw ConfigError("config field 'interactions' is required");
    cfg.interactions = doc.at("interactions").get<std::string>();
    if (!doc.contains("algorithm"))
      throw ConfigError("config field 'algorithm' is required");
    cfg.algorithm = doc.at("algorithm").get<std::string>();
    if (!doc.contains("seed")) throw ConfigError("config field 'seed' is required");
    cfg.seed = doc.at("seed").get<std::uint64_t>();

    if (doc.contains("item_meta")) cfg.item_meta = doc.at("item_meta").get<std::string>();
    if (doc.contains("trust_edges"))
      cfg.trust_edges = doc.at("trust_edges").get<std::string>();
    cfg.k = doc.value("k", cfg.k);
    cfg.top_n = doc.value("top_n", cfg.top_n);
    cfg.train_fraction = doc.value("train_fraction", cfg.train_fraction);
    cfg.tau = doc.value("tau", cfg.tau);
    cfg.dp_levels = doc.value("dp_levels", cfg.dp_levels);
    if (doc.contains("decay")) cfg.decay = doc.at("decay").get<double>();
    if (doc.contains("weights")) {
      const auto w = doc.at("weights").get<std::vector<double>>();
      if (w.size() != 4)
        throw ConfigError("config field 'weights' must have 4 entries (bll, s, v, sc)");
      std::copy(w.begin(), w.end(), cfg.weights.begin());
    }
    cfg.alpha = doc.value("alpha", cfg.alpha);
    cfg.max_hops = doc.value("max_hops", cfg.max_hops);
    if (doc.contains("group_scheme")) {
      const auto s = doc.at("group_scheme").get<std::string>();
      if (s == "tercile")
        cfg.group_scheme = corpus::GroupScheme::TercilePopularity;
      else if (s == "ms_beyms")
        cfg.group_scheme = corpus::GroupScheme::MsBeyms;
      else
        throw ConfigError("config field 'group_scheme' must be 'tercile' or 'ms_beyms'");
    }
    cfg.rating_range.min = doc.value("rating_min", cfg.rating_range.min);
    cfg.rating_range.max = doc.value("rating_max", cfg.rating_range.max);
    cfg.relevance_threshold = doc.value("relevance_threshold", cfg.relevance_threshold);
    cfg.out = doc.value("out", cfg.out);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config value: ") + e.what());
  }

  if (!kAlgorithms.contains(cfg.algorithm))
    throw ConfigError("config field 'algorithm' has unknown value '" + cfg.algorithm +
                      "'");
  if (cfg.k == 0) throw ConfigError("config field 'k' must be >= 1");
  if (cfg.top_n == 0) throw ConfigError("config field 'top_n' must be >= 1");
  if (cfg.train_fraction <= 0.0 || cfg.train_fraction >= 1.0)
    throw ConfigError("config field 'train_fraction' must be in (0, 1)");
  if (cfg.algorithm == "trust_knn" && !cfg.trust_edges)
    throw ConfigError("config field 'trust_edges' is required for trust_knn");
  return cfg;
}

namespace {

using Predictor =
    std::function<std::optional<double>(const std::string&, const std::string&)>;

struct Algorithm {
  neighbors::Scorer scorer;        // per-item score for top-n recommendation
  Predictor predictor;             // for MAE; may be empty
  // Per-user top-n recommender; set when scoring must see the whole
  // candidate set at once (score normalization), otherwise derived from scorer.
  std::function<std::vector<std::string>(const std::string&)> recommend;
  std::function<void(const std::string&)> after;  // extra outputs
};

std::vector<std::string> actr_candidates(const neighbors::RatingMatrix& train,
                                         const std::string& user) {
  std::set<std::string> seen;
  if (const auto u = train.user_index(user))
    for (const auto& [i, v] : train.user_profile(*u)) seen.insert(train.item_ids()[i]);
  std::vector<std::string> out;
  for (const auto& item : train.item_ids())
    if (!seen.contains(item)) out.push_back(item);
  return out;
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out);

  corpus::IngestSchema schema;
  schema.rating_range = cfg.rating_range;
  auto ingest = corpus::ingest_interactions(cfg.interactions, schema);
  corpus::InteractionLog log = [&] {
    if (!cfg.item_meta) return std::move(ingest.log);
    auto meta = corpus::load_item_meta(*cfg.item_meta);
    for (const auto& [item, m] : ingest.log.item_meta())
      meta.try_emplace(item, m);  // keep loaded metadata when both exist
    return corpus::InteractionLog(ingest.log.events(), std::move(meta),
                                  ingest.log.rating_range());
  }();

  const auto split = corpus::chronological_split(log, cfg.train_fraction);
  const auto train_matrix = neighbors::RatingMatrix::from_log(split.train);
  const auto popularity = corpus::item_popularity(split.train);
  const auto groups = corpus::assign_popularity_groups(split.train, cfg.group_scheme);

  const std::uint64_t tau = cfg.tau == 0 ? privacy::kTauInfinity : cfg.tau;
  Rng rng(cfg.seed);

  // Long-lived models, created on demand per algorithm.
  std::optional<neighbors::UserKnn> userknn;
  std::optional<neighbors::ItemKnn> itemknn;
  std::optional<privacy::ReuseKnn> reuseknn;
  std::optional<privacy::DpMechanism> mech;
  std::optional<actr::ActrModel> actr_model;
  std::optional<trust::TrustGraph> trust_graph;
  Eigen::MatrixXd trust_sim;
  double actr_now = 0.0;

  Algorithm algo;
  if (cfg.algorithm == "mostpop") {
    algo.scorer = [&](const std::string&, const std::string& item) {
      auto it = popularity.find(item);
      return it == popularity.end() ? std::nullopt : std::optional<double>(it->second);
    };
  } else if (cfg.algorithm == "userknn") {
    userknn.emplace(train_matrix, neighbors::SimilarityConfig::cosine());
    algo.predictor = [&](const std::string& u, const std::string& i) {
      return userknn->predict(u, i, cfg.k);
    };
    algo.scorer = algo.predictor;
  } else if (cfg.algorithm == "itemknn") {
    itemknn.emplace(train_matrix, neighbors::SimilarityConfig::cosine());
    algo.predictor = [&](const std::string& u, const std::string& i) {
      return itemknn->predict(u, i, cfg.k);
    };
    algo.scorer = algo.predictor;
  } else if (cfg.algorithm == "reuseknn_dp") {
    userknn.emplace(train_matrix, neighbors::SimilarityConfig::cosine());
    reuseknn.emplace(*userknn, tau);
    mech = privacy::DpMechanism{log.rating_range(), cfg.dp_levels, cfg.seed, false};
    algo.predictor = [&](const std::string& u, const std::string& i) {
      return reuseknn->dp_predict(u, i, cfg.k, *mech, rng);
    };
    algo.scorer = algo.predictor;
    algo.after = [&](const std::string& dir) {
      std::ofstream out(dir + "/ledger.csv");
      reuseknn->ledger().write_csv(out, train_matrix.user_ids());
    };
  } else if (cfg.algorithm == "bll" || cfg.algorithm == "act") {
    actr::ActrConfig acfg;
    acfg.decay = cfg.decay ? *cfg.decay
                           : actr::fit_decay_exponent(split.train, actr::UnitKind::Track);
    acfg.weights = cfg.algorithm == "bll" ? actr::kWeightsBllOnly : cfg.weights;
    actr_model = actr::ActrModel::train(split.train, actr::UnitKind::Track, acfg);
    double max_ts = 0.0;
    for (const auto& e : split.train.events())
      max_ts = std::max(max_ts, static_cast<double>(e.timestamp));
    actr_now = max_ts + acfg.time_unit_seconds;
    algo.recommend = [&](const std::string& user) -> std::vector<std::string> {
      const auto candidates = actr_candidates(train_matrix, user);
      if (candidates.empty()) return {};
      const auto ranked = actr_model->rank_units(
          user, candidates, actr_model->default_context(user), actr_now);
      std::vector<std::string> out;
      for (std::size_t i = 0; i < std::min<std::size_t>(cfg.top_n, ranked.size()); ++i)
        out.push_back(ranked[i].unit);
      return out;
    };
    algo.after = [&](const std::string& dir) {
      std::ofstream out(dir + "/attribution.csv");
      out << "user,item,bll,s,v,sc\n";
      for (const auto& user : train_matrix.user_ids()) {
        const auto recs = algo.recommend(user);
        if (recs.empty()) continue;
        const auto matrix = actr_model->attribute_components(
            user, recs, actr_model->default_context(user), actr_now);
        for (const auto& row : matrix.rows) {
          out << user << ',' << row.unit;
          for (double s : row.share) out << ',' << s;
          out << '\n';
        }
      }
    };
  } else {  // trust_knn
    trust_graph = trust::TrustGraph::from_csv(*cfg.trust_edges, cfg.alpha, cfg.max_hops);
    trust_sim = trust::katz_similarity(*trust_graph);
    algo.predictor = [&](const std::string& u, const std::string& i) {
      return trust::trust_knn_predict(u, i, cfg.k, *trust_graph, trust_sim, train_matrix);
    };
    algo.scorer = algo.predictor;
  }
  if (!algo.recommend)
    algo.recommend = [&](const std::string& user) {
      return neighbors::recommend_top_n(train_matrix, user, cfg.top_n, algo.scorer);
    };

  // Per-user evaluation on the held-out split.
  std::map<std::string, std::pair<std::set<std::string>, std::vector<corpus::Interaction>>>
      test_by_user;
  for (const auto& e : split.test.events()) {
    auto& [relevant, events] = test_by_user[e.user];
    if (e.value >= cfg.relevance_threshold) relevant.insert(e.item);
    events.push_back(e);
  }

  std::map<std::string, double> user_mae, user_precision, user_recall, user_f1, user_mrr,
      user_ndcg, user_novelty, user_kl;
  std::map<std::string, double> reco_frequency;
  std::map<std::string, std::vector<std::string>> profile_items, reco_items;
  const bool have_genres = std::any_of(
      log.item_meta().begin(), log.item_meta().end(),
      [](const auto& kv) { return !kv.second.genres.empty(); });

  for (const auto& [user, test] : test_by_user) {
    const auto& [relevant, events] = test;
    if (algo.predictor) {
      std::vector<double> pred, truth;
      for (const auto& e : events) {
        if (const auto p = algo.predictor(e.user, e.item)) {
          pred.push_back(*p);
          truth.push_back(e.value);
        }
      }
      if (!pred.empty()) user_mae[user] = eval::mae(pred, truth);
    }
    const auto recs = algo.recommend(user);
    if (recs.empty()) continue;
    const auto rm = eval::ranking_metrics(recs, relevant, cfg.top_n);
    if (!rm.empty_relevant) {
      user_precision[user] = rm.precision;
      user_recall[user] = rm.recall;
      user_f1[user] = rm.f1;
      user_mrr[user] = rm.mrr;
      user_ndcg[user] = rm.ndcg;
    }
    user_novelty[user] =
        eval::system_novelty(recs, popularity, train_matrix.n_users());
    for (const auto& item : recs) reco_frequency[item] += 1.0;
    reco_items[user] = recs;

    if (const auto u = train_matrix.user_index(user)) {
      auto& profile = profile_items[user];
      for (const auto& [i, v] : train_matrix.user_profile(*u))
        profile.push_back(train_matrix.item_ids()[i]);
      if (have_genres) {
        const auto p = eval::genre_distribution(profile, log.item_meta());
        const auto q = eval::genre_distribution(recs, log.item_meta());
        if (!p.empty()) user_kl[user] = eval::kl_miscalibration(p, q);
      }
    }
  }

  eval::MetricReport report;
  report.algorithm = cfg.algorithm;
  report.seed = cfg.seed;
  report.k = cfg.k;
  report.warnings = ingest.warnings;
  if (!user_mae.empty()) eval::group_report(report, "mae", groups, user_mae);
  if (!user_precision.empty()) {
    eval::group_report(report, "precision", groups, user_precision);
    eval::group_report(report, "recall", groups, user_recall);
    eval::group_report(report, "f1", groups, user_f1);
    eval::group_report(report, "mrr", groups, user_mrr);
    eval::group_report(report, "ndcg", groups, user_ndcg);
  }
  if (!user_novelty.empty()) eval::group_report(report, "novelty", groups, user_novelty);
  if (!user_kl.empty()) eval::group_report(report, "kl_miscalibration", groups, user_kl);

  if (reco_frequency.size() >= 2) {
    try {
      report.values["popularity_correlation"]["overall"] = {
          eval::popularity_reco_correlation(reco_frequency, popularity),
          reco_frequency.size()};
    } catch (const std::invalid_argument& e) {
      report.warnings.emplace_back(std::string("popularity correlation skipped: ") +
                                   e.what());
    }
  }
  std::map<std::string, std::vector<std::string>> users_by_group;
  for (const auto& [user, label] : groups.groups) users_by_group[label].push_back(user);
  for (const auto& [label, members] : users_by_group) {
    try {
      const double gap_p = eval::gap(members, profile_items, popularity);
      const double gap_q = eval::gap(members, reco_items, popularity);
      report.values["gap_profiles"][label] = {gap_p, members.size()};
      report.values["gap_recommendations"][label] = {gap_q, members.size()};
      report.values["popularity_lift"][label] = {eval::popularity_lift(gap_p, gap_q),
                                                 members.size()};
    } catch (const std::invalid_argument& e) {
      report.warnings.emplace_back("popularity lift skipped for group '" + label +
                                   "': " + e.what());
    }
  }

  std::vector<std::string> outputs;
  const std::string csv_path = cfg.out + "/report.csv";
  const std::string json_path = cfg.out + "/report.json";
  {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    report.write_csv(out);
  }
  outputs.push_back(csv_path);
  {
    std::ofstream out(json_path);
    report.write_json(out);
  }
  outputs.push_back(json_path);
  if (algo.after) {
    algo.after(cfg.out);
    outputs.push_back(cfg.out + (cfg.algorithm == "reuseknn_dp" ? "/ledger.csv"
                                                                : "/attribution.csv"));
  }
  write_manifest(cfg.out, cfg.config_path, cfg.seed, outputs);
  outputs.push_back(cfg.out + "/manifest.json");
  return outputs;
}

SimulateConfig load_simulate_config(const std::string& path) {
  const json doc = load_json(path);
  SimulateConfig cfg;
  cfg.config_path = path;
  auto& sim = cfg.sim;
  try {
    if (!doc.contains("seed")) throw ConfigError("config field 'seed' is required");
    sim.seed = doc.at("seed").get<std::uint64_t>();
    sim.n_agents = doc.value("n_agents", sim.n_agents);
    sim.skill_dim = doc.value("skill_dim", sim.skill_dim);
    sim.privileged_mean = doc.value("privileged_mean", sim.privileged_mean);
    sim.protected_mean = doc.value("protected_mean", sim.protected_mean);
    sim.protected_share = doc.value("protected_share", sim.protected_share);
    sim.noise_sd = doc.value("noise_sd", sim.noise_sd);
    sim.iterations = doc.value("iterations", sim.iterations);
    sim.help_boost = doc.value("help_boost", sim.help_boost);
    sim.decay = doc.value("decay", sim.decay);
    sim.hire_threshold = doc.value("hire_threshold", sim.hire_threshold);
    if (doc.contains("variant")) {
      const auto v = doc.at("variant").get<std::string>();
      if (v == "biased")
        sim.variant = fairsim::ClassifierVariant::Biased;
      else if (v == "unbiased")
        sim.variant = fairsim::ClassifierVariant::Unbiased;
      else
        throw ConfigError("config field 'variant' must be 'biased' or 'unbiased'");
    }
    if (doc.contains("help_target")) {
      const auto h = doc.at("help_target").get<std::string>();
      if (h == "low_prospects")
        sim.help_target = fairsim::HelpTarget::LowProspects;
      else if (h == "high_prospects")
        sim.help_target = fairsim::HelpTarget::HighProspects;
      else
        throw ConfigError(
            "config field 'help_target' must be 'low_prospects' or 'high_prospects'");
    }
    cfg.hyper.learning_rate = doc.value("learning_rate", cfg.hyper.learning_rate);
    cfg.hyper.max_epochs = doc.value("max_epochs", cfg.hyper.max_epochs);
    cfg.hyper.tolerance = doc.value("tolerance", cfg.hyper.tolerance);
    cfg.out = doc.value("out", cfg.out);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config value: ") + e.what());
  }
  if (sim.iterations == 0) throw ConfigError("config field 'iterations' must be >= 1");
  return cfg;
}

std::vector<std::string> simulate_fairness(const SimulateConfig& cfg,
                                           const std::vector<std::uint64_t>& seeds) {
  std::filesystem::create_directories(cfg.out);
  std::vector<std::uint64_t> run_seeds = seeds.empty()
                                             ? std::vector<std::uint64_t>{cfg.sim.seed}
                                             : seeds;
  std::vector<std::string> outputs;
  for (const auto seed : run_seeds) {
    fairsim::SimConfig sim = cfg.sim;
    sim.seed = seed;
    const auto traj = fairsim::run_simulation(sim, cfg.hyper);
    const std::string path = cfg.out + "/trajectory_" + std::to_string(seed) + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    fairsim::write_trajectory_csv(out, traj);
    outputs.push_back(path);
  }
  write_manifest(cfg.out, cfg.config_path, run_seeds.front(), outputs);
  outputs.push_back(cfg.out + "/manifest.json");
  return outputs;
}

std::uint64_t file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file: " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

void write_manifest(const std::string& out_dir, const std::string& config_path,
                    std::uint64_t seed, const std::vector<std::string>& outputs) {
  json doc;
  doc["config_hash"] = config_path.empty() ? 0 : file_hash(config_path);
  doc["seed"] = seed;
  doc["version"] = kVersion;
  doc["outputs"] = outputs;
  std::ofstream out(out_dir + "/manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + out_dir);
  out << doc.dump(2) << '\n';
}

}  // namespace reckit::experiment
