// Copyright 2026 The erblock Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "erblock/run.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "erblock/errors.hpp"

namespace erblock {

namespace {

constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

std::string trim(std::string_view s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return std::string(s.substr(begin, end - begin));
}

bool parseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" +
                    value + "'");
}

std::uint64_t parseUint(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::uint64_t parsed = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" +
                      value + "'");
  }
}

double parseDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      value + "'");
  }
}

void applyKey(RunConfig& config, const std::string& key,
              const std::string& value) {
  if (key == "input") {
    const auto space = value.find_first_of(" \t");
    if (space == std::string::npos) {
      throw ConfigError("config key 'input': expected '<tag> <path>'");
    }
    config.inputs.emplace_back(trim(value.substr(0, space)),
                               trim(value.substr(space + 1)));
  } else if (key == "mode") {
    if (value == "clean-clean") config.mode = CollectionMode::clean_clean;
    else if (value == "dirty") config.mode = CollectionMode::dirty;
    else throw ConfigError("config key 'mode': expected clean-clean or dirty");
  } else if (key == "algorithm") {
    config.algorithm = value;
  } else if (key == "gt") {
    config.gtPath = value;
  } else if (key == "gt_predicate") {
    config.gtPredicate = value;
  } else if (key == "gt_restrict") {
    config.gtRestrict = parseBool(key, value);
  } else if (key == "filter_to_gt") {
    config.filterToGt = parseBool(key, value);
  } else if (key == "tokenizer.delimiters") {
    config.tokenizer.delimiters = value;
  } else if (key == "tokenizer.case_fold") {
    config.tokenizer.caseFold = parseBool(key, value);
  } else if (key == "tokenizer.min_token_length") {
    config.tokenizer.minTokenLength = parseUint(key, value);
  } else if (key == "tokenizer.tokenize_resources") {
    config.tokenizer.tokenizeResourceValues = parseBool(key, value);
  } else if (key == "workers") {
    config.workers = static_cast<unsigned>(parseUint(key, value));
  } else if (key == "memory_ceiling_mb") {
    config.memoryCeilingMb = parseUint(key, value);
  } else if (key == "out") {
    config.outDir = value;
  } else if (key == "seed") {
    config.seed = parseUint(key, value);
  } else if (key == "rr_basis") {
    if (value == "aggregate") config.rrBasis = RrBasis::aggregate;
    else if (value == "distinct") config.rrBasis = RrBasis::distinct;
    else throw ConfigError("config key 'rr_basis': expected aggregate or distinct");
  } else if (key == "strict") {
    config.strict = parseBool(key, value);
  } else if (key == "oracle") {
    config.oracle = value;
  } else if (key == "oracle_threshold") {
    config.oracleThreshold = parseDouble(key, value);
  } else if (key == "sample_size") {
    config.sampleSize = parseUint(key, value);
  } else if (key == "blocks") {
    config.blocksPath = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

std::string hashHex(const std::string& bytes) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0')
      << engine::fnv1a64(bytes);
  return out.str();
}

nlohmann::ordered_json resolvedConfigJson(const RunConfig& config) {
  // Scheduling knobs (workers, memory ceiling) and the output directory are
  // left out: they never affect results, and reports must be byte-identical
  // across worker counts.
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(config.mode));
  j["algorithm"] = config.algorithm;
  auto inputs = nlohmann::ordered_json::array();
  for (const auto& [tag, path] : config.inputs) {
    nlohmann::ordered_json in;
    in["tag"] = tag;
    in["path"] = path;
    in["contentHash"] = hashHex(read_file_bytes(path));
    inputs.push_back(std::move(in));
  }
  j["inputs"] = std::move(inputs);
  nlohmann::ordered_json gt;
  gt["path"] = config.gtPath;
  gt["predicate"] = config.gtPredicate;
  gt["restrictToCollection"] = config.gtRestrict;
  if (!config.gtPath.empty()) {
    gt["contentHash"] = hashHex(read_file_bytes(config.gtPath));
  }
  j["groundTruth"] = std::move(gt);
  j["filterToGroundTruth"] = config.filterToGt;
  nlohmann::ordered_json tok;
  tok["delimiters"] = config.tokenizer.delimiters;
  tok["caseFold"] = config.tokenizer.caseFold;
  tok["minTokenLength"] = config.tokenizer.minTokenLength;
  tok["tokenizeResourceValues"] = config.tokenizer.tokenizeResourceValues;
  j["tokenizer"] = std::move(tok);
  j["rrBasis"] = std::string(to_string(config.rrBasis));
  j["strict"] = config.strict;
  j["seed"] = config.seed;
  j["oracle"] = config.oracle;
  j["oracleThreshold"] = config.oracleThreshold;
  j["sampleSize"] = config.sampleSize;
  return j;
}

void writeFile(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << contents;
}

std::filesystem::path outPath(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.outDir);
  return std::filesystem::path(config.outDir) / name;
}

nlohmann::ordered_json metricsJson(const MetricsReport& report) {
  nlohmann::ordered_json m;
  m["tp"] = report.counts.tp;
  m["fp"] = report.counts.fp;
  m["fn"] = report.counts.fn;
  m["tn"] = report.counts.tn;
  m["recall"] = report.recall;
  m["precision"] = report.precision;
  m["fmeasure"] = report.fmeasure;
  if (report.rr) m["rr"] = *report.rr; else m["rr"] = nullptr;
  m["rrBasis"] = std::string(to_string(report.rrBasis));
  if (report.h3r) m["h3r"] = *report.h3r; else m["h3r"] = nullptr;
  if (!report.h3rNote.empty()) m["h3rNote"] = report.h3rNote;
  m["comparisonsAggregate"] = report.comparisonsAggregate;
  m["comparisonsDistinct"] = report.comparisonsDistinct;
  m["comparisonsWithoutBlocking"] = report.comparisonsWithoutBlocking;
  m["blocks"] = report.blockCount;
  m["comparableBlocks"] = report.comparableBlockCount;
  m["unblocked"] = report.unblockedCount;
  if (report.perEntityCommonTokenMedian) {
    m["perEntityCommonTokenMedian"] = *report.perEntityCommonTokenMedian;
  }
  if (report.clusterCount) m["attributeClusters"] = *report.clusterCount;
  if (report.medianClusterSize) {
    m["medianAttributesPerCluster"] = *report.medianClusterSize;
  }
  return m;
}

std::string histogramCsv(const CommonTokenDistribution& dist) {
  std::ostringstream out;
  out << "bucket,count\n";
  for (const auto& [bucket, count] : dist.histogram) {
    out << bucket << ',' << count << '\n';
  }
  return out.str();
}

}  // namespace

engine::EngineOptions RunConfig::engineOptions() const {
  engine::EngineOptions options;
  options.workers = workers;
  options.memoryCeilingBytes = memoryCeilingMb * (1ull << 20);
  return options;
}

void RunConfig::validate() const {
  if (inputs.empty()) throw ConfigError("no inputs configured");
  if (mode == CollectionMode::clean_clean && inputs.size() != 2) {
    throw ConfigError("clean-clean mode requires exactly 2 inputs, got " +
                      std::to_string(inputs.size()));
  }
  static const std::set<std::string> algorithms{"token", "attr-cluster", "pis",
                                                "iterative"};
  if (!algorithms.count(algorithm)) {
    throw ConfigError("unknown algorithm '" + algorithm + "'");
  }
  if (algorithm == "attr-cluster" && mode != CollectionMode::clean_clean) {
    throw ConfigError("algorithm attr-cluster requires clean-clean mode");
  }
  if (tokenizer.minTokenLength < 1) {
    throw ConfigError("tokenizer.min_token_length must be >= 1");
  }
  if (oracle != "ground-truth" && oracle != "similarity") {
    throw ConfigError("unknown oracle '" + oracle + "'");
  }
  if (algorithm == "iterative" && oracle == "ground-truth" && gtPath.empty()) {
    throw ConfigError("iterative blocking with the ground-truth oracle needs 'gt'");
  }
  std::set<std::string> tags;
  for (const auto& [tag, path] : inputs) {
    if (tag.empty() || path.empty()) {
      throw ConfigError("inputs need both a tag and a path");
    }
    if (!tags.insert(tag).second) {
      throw ConfigError("duplicate input tag '" + tag + "'");
    }
  }
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig config;
  std::string line;
  std::uint64_t lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineNumber) +
                        ": expected 'key = value'");
    }
    applyKey(config, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_run_config(in);
}

void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value) {
  applyKey(config, key, value);
}

RunContext::RunContext(RunConfig runConfig) : config(std::move(runConfig)) {
  config.validate();
}

void RunContext::ingest() {
  if (ingested_) return;
  ingested_ = true;

  const auto options = config.engineOptions();
  const ParsePolicy policy =
      config.strict ? ParsePolicy::strict : ParsePolicy::lenient;

  std::vector<std::vector<EntityDescription>> perInput;
  for (const auto& [tag, path] : config.inputs) {
    ParseStats stats;
    auto triples = parse_ntriples_file(path, policy, &stats, options);
    ingestStats_.triples += stats.triples;
    ingestStats_.malformed += stats.malformed;
    if (stats.triples == 0) {
      warnings.push_back("input '" + path + "' contained no triples");
    }
    if (stats.malformed > 0) {
      warnings.push_back("input '" + path + "': skipped " +
                         std::to_string(stats.malformed) + " malformed lines");
    }
    perInput.push_back(build_descriptions(triples, tag, options));
  }

  std::vector<EntityDescription> descriptions;
  std::vector<std::string> sources;
  for (const auto& [tag, path] : config.inputs) sources.push_back(tag);
  if (config.mode == CollectionMode::dirty && config.inputs.size() > 1) {
    // Concatenation semantics: the same subject across inputs folds into
    // one description tagged by the first input that mentions it.
    std::unordered_map<std::string, std::size_t> at;
    for (auto& batch : perInput) {
      for (auto& d : batch) {
        auto it = at.find(d.id);
        if (it == at.end()) {
          at.emplace(d.id, descriptions.size());
          descriptions.push_back(std::move(d));
        } else {
          auto& into = descriptions[it->second];
          into.pairs.insert(into.pairs.end(), d.pairs.begin(), d.pairs.end());
          into.canonicalize();
        }
      }
    }
  } else {
    for (auto& batch : perInput) {
      descriptions.insert(descriptions.end(),
                          std::make_move_iterator(batch.begin()),
                          std::make_move_iterator(batch.end()));
    }
  }

  auto collection = std::make_shared<EntityCollection>(
      std::move(descriptions), config.mode, std::move(sources));

  GroundTruth gt;
  if (!config.gtPath.empty()) {
    if (config.gtPath.size() > 4 &&
        config.gtPath.compare(config.gtPath.size() - 4, 4, ".tsv") == 0) {
      std::ifstream in(config.gtPath);
      if (!in) throw DataError("cannot open '" + config.gtPath + "'");
      gt = load_ground_truth_tsv(in, config.gtPredicate);
    } else {
      ParseStats stats;
      auto triples = parse_ntriples_file(config.gtPath, policy, &stats, options);
      std::uint64_t zeroMatches = 0;
      gt = load_ground_truth(triples, config.gtPredicate, nullptr, &zeroMatches);
      if (zeroMatches > 0) {
        warnings.push_back("no triples matched ground-truth predicate '" +
                           config.gtPredicate + "'");
      }
    }
    if (config.gtRestrict) gt = gt.restrictedTo(collection->idSet());
    if (gt.size() == 0) {
      warnings.push_back("ground truth is empty after loading");
    }
    if (config.filterToGt) {
      collection = std::make_shared<EntityCollection>(
          filter_to_ground_truth(*collection, gt));
    }
  }

  ingestStats_.descriptions = collection->size();
  std::uint64_t pairCount = 0;
  std::set<std::string> attributes;
  std::set<std::string> types;
  for (const auto& d : collection->descriptions()) {
    pairCount += d.pairs.size();
    for (const auto& p : d.pairs) {
      attributes.insert(p.attribute);
      if (p.attribute == kRdfType) types.insert(p.value.text);
    }
  }
  ingestStats_.avgPairsPerDescription =
      collection->size() == 0
          ? 0.0
          : static_cast<double>(pairCount) / static_cast<double>(collection->size());
  ingestStats_.attributes = attributes.size();
  ingestStats_.entityTypes = types.size();

  collection_ = std::move(collection);
  gt_ = std::move(gt);
}

std::shared_ptr<const EntityCollection> RunContext::collection() {
  ingest();
  return collection_;
}

const GroundTruth& RunContext::groundTruth() {
  ingest();
  return *gt_;
}

const RunContext::IngestStats& RunContext::ingestStats() {
  ingest();
  return ingestStats_;
}

const std::optional<AttributeClustering>& RunContext::clustering() {
  if (!clusteringDone_) {
    clusteringDone_ = true;
    if (config.algorithm == "attr-cluster") {
      clustering_ = attribute_clustering(*collection(), config.engineOptions());
    }
  }
  return clustering_;
}

const BlockingCollection& RunContext::blockingCollection() {
  if (blocks_) return *blocks_;
  const auto options = config.engineOptions();
  if (!config.blocksPath.empty()) {
    std::ifstream in(config.blocksPath);
    if (!in) throw DataError("cannot open '" + config.blocksPath + "'");
    blocks_ = read_blocks_jsonl(in, collection());
  } else if (config.algorithm == "attr-cluster") {
    blocks_ = attribute_clustering_blocking(collection(), config.tokenizer,
                                            options, &*clustering());
  } else if (config.algorithm == "pis") {
    blocks_ = pis_blocking(collection(), config.tokenizer, options);
    if (blocks_->blockCountFor(BlockKeyNamespace::infix) == 0) {
      warnings.push_back("infix blocks empty: no decomposable subject URIs");
    }
  } else {
    // token, and the base collection iterative blocking runs on
    blocks_ = token_blocking(collection(), config.tokenizer, options);
  }
  return *blocks_;
}

namespace {

void flushWarnings(RunContext& context, std::ostream& log) {
  for (const auto& warning : context.warnings) {
    log << "warning: " << warning << '\n';
  }
  context.warnings.clear();
}

}  // namespace

int cmd_ingest(RunContext& context, std::ostream& log) {
  const auto collection = context.collection();
  const auto& stats = context.ingestStats();

  std::ostringstream descriptions;
  write_descriptions_jsonl(descriptions, collection->descriptions());
  writeFile(outPath(context.config, "descriptions.jsonl"), descriptions.str());

  nlohmann::ordered_json summary;
  summary["config"] = resolvedConfigJson(context.config);
  summary["triples"] = stats.triples;
  summary["malformedLines"] = stats.malformed;
  summary["descriptions"] = stats.descriptions;
  summary["avgPairsPerDescription"] = stats.avgPairsPerDescription;
  summary["attributes"] = stats.attributes;
  summary["entityTypes"] = stats.entityTypes;
  writeFile(outPath(context.config, "ingest_summary.json"), summary.dump(2) + "\n");

  flushWarnings(context, log);
  log << "triples: " << stats.triples << '\n'
      << "descriptions: " << stats.descriptions << '\n'
      << "avg attribute-value pairs per description: "
      << stats.avgPairsPerDescription << '\n'
      << "attributes: " << stats.attributes << '\n'
      << "entity types: " << stats.entityTypes << '\n';
  return 0;
}

int cmd_block(RunContext& context, std::ostream& log) {
  const auto& blocks = context.blockingCollection();

  std::ostringstream blockText;
  write_blocks_jsonl(blockText, blocks);
  writeFile(outPath(context.config, "blocks.jsonl"), blockText.str());

  const auto [aggregate, distinct] = comparison_counts(blocks);
  nlohmann::ordered_json summary;
  summary["config"] = resolvedConfigJson(context.config);
  summary["blocks"] = blocks.blockCount();
  summary["comparableBlocks"] = blocks.comparableBlockCount();
  summary["tokenBlocks"] = blocks.blockCountFor(BlockKeyNamespace::token);
  summary["clusteredTokenBlocks"] =
      blocks.blockCountFor(BlockKeyNamespace::clustered_token);
  summary["infixBlocks"] = blocks.blockCountFor(BlockKeyNamespace::infix);
  summary["comparisonsAggregate"] = aggregate;
  summary["comparisonsDistinct"] = distinct;
  summary["unblocked"] = blocks.unblocked().size();

  if (context.config.algorithm == "attr-cluster") {
    const auto& clustering = *context.clustering();
    std::ostringstream tsv;
    write_clustering_tsv(tsv, blocks.universe(), clustering);
    writeFile(outPath(context.config, "clusters.tsv"), tsv.str());
    summary["attributeClusters"] = clustering.clusterCount;
  }

  if (context.config.algorithm == "iterative") {
    MatchOracle oracle =
        context.config.oracle == "similarity"
            ? MatchOracle::valueSimilarity(context.config.oracleThreshold)
            : MatchOracle::groundTruth(context.groundTruth());
    IterativeStats stats;
    const auto partition = iterative_blocking(blocks, oracle,
                                              BlockOrder::sizeDescending,
                                              nullptr, &stats);
    std::ostringstream entities;
    for (const auto& entity : partition) {
      nlohmann::ordered_json record;
      record["id"] = entity.displayId();
      record["members"] = entity.memberIds;
      entities << record.dump() << '\n';
    }
    writeFile(outPath(context.config, "entities.jsonl"), entities.str());

    // Matches resolved by merging: ground-truth pairs inside one entity.
    std::uint64_t resolved = 0;
    std::uint64_t gtInCollection = 0;
    const auto& gt = context.groundTruth();
    std::unordered_map<std::string, std::size_t> entityOf;
    for (std::size_t e = 0; e < partition.size(); ++e) {
      for (const auto& id : partition[e].memberIds) entityOf[id] = e;
    }
    for (const auto& [a, b] : gt.pairs()) {
      const auto ia = entityOf.find(a);
      const auto ib = entityOf.find(b);
      if (ia == entityOf.end() || ib == entityOf.end()) continue;
      ++gtInCollection;
      if (ia->second == ib->second) ++resolved;
    }
    summary["entities"] = partition.size();
    summary["merges"] = stats.merges;
    summary["comparisonsPerformed"] = stats.comparisons;
    summary["passes"] = stats.passes;
    summary["resolvedMatches"] = resolved;
    summary["recallAfterMerging"] =
        gtInCollection == 0
            ? 0.0
            : static_cast<double>(resolved) / static_cast<double>(gtInCollection);
  }

  writeFile(outPath(context.config, "block_summary.json"), summary.dump(2) + "\n");

  flushWarnings(context, log);
  log << "blocks: " << blocks.blockCount() << '\n'
      << "comparisons (aggregate): " << aggregate << '\n'
      << "comparisons (distinct): " << distinct << '\n'
      << "unblocked descriptions: " << blocks.unblocked().size() << '\n';
  return 0;
}

int cmd_eval(RunContext& context, std::ostream& log) {
  if (context.config.gtPath.empty()) {
    throw ConfigError("eval requires a ground truth ('gt')");
  }
  const auto& blocks = context.blockingCollection();
  const auto& gt = context.groundTruth();

  MetricsReport report = score(blocks, gt, context.config.rrBasis);

  if (blocks.universe().mode() == CollectionMode::clean_clean) {
    const auto dist =
        common_token_distribution(blocks.universe(), context.config.tokenizer);
    report.perEntityCommonTokenMedian = dist.median;
    writeFile(outPath(context.config, "common_tokens.csv"), histogramCsv(dist));
    if (context.config.algorithm == "attr-cluster") {
      const auto& clustering = *context.clustering();
      const auto clusteredDist = common_token_distribution(
          blocks.universe(), context.config.tokenizer, &clustering);
      writeFile(outPath(context.config, "common_tokens_clustered.csv"),
                histogramCsv(clusteredDist));
      report.clusterCount = clustering.clusterCount;
      std::vector<std::uint64_t> sizes;
      for (const auto& [cluster, size] : clustering.clusterSizes()) {
        sizes.push_back(size);
      }
      if (!sizes.empty()) {
        std::sort(sizes.begin(), sizes.end());
        const std::size_t mid = sizes.size() / 2;
        report.medianClusterSize =
            sizes.size() % 2 == 1
                ? static_cast<double>(sizes[mid])
                : (static_cast<double>(sizes[mid - 1]) +
                   static_cast<double>(sizes[mid])) /
                      2.0;
      }
    }
  }

  nlohmann::ordered_json doc;
  doc["config"] = resolvedConfigJson(context.config);
  doc["metrics"] = metricsJson(report);
  writeFile(outPath(context.config, "metrics.json"), doc.dump(2) + "\n");

  flushWarnings(context, log);
  log << std::left;
  log << "tp " << report.counts.tp << "  fp " << report.counts.fp << "  fn "
      << report.counts.fn << "  tn " << report.counts.tn << '\n';
  log << "recall " << report.recall << "  precision " << report.precision
      << "  f-measure " << report.fmeasure << '\n';
  log << "rr(" << to_string(report.rrBasis) << ") ";
  if (report.rr) log << *report.rr; else log << "n/a";
  log << "  h3r ";
  if (report.h3r) log << *report.h3r;
  else log << (report.h3rNote.empty() ? "n/a" : report.h3rNote);
  log << '\n';
  log << "comparisons aggregate " << report.comparisonsAggregate
      << "  distinct " << report.comparisonsDistinct << "  without blocking "
      << report.comparisonsWithoutBlocking << '\n';
  return 0;
}

int cmd_analyze(RunContext& context, std::ostream& log) {
  if (context.config.gtPath.empty()) {
    throw ConfigError("analyze requires a ground truth ('gt')");
  }
  const auto& blocks = context.blockingCollection();
  const auto& gt = context.groundTruth();

  // Identified matches default to the true positives of this blocking run.
  const auto candidates = CandidatePairSet::fromBlocks(blocks);
  std::vector<IdPair> identified;
  for (const auto& [a, b] : gt.pairs()) {
    const auto ia = blocks.universe().indexOf(a);
    const auto ib = blocks.universe().indexOf(b);
    if (ia && ib && candidates.contains(*ia, *ib)) {
      identified.push_back({a, b});
    }
  }

  const FnAnalysis fn = fn_analysis(blocks, gt, identified);
  nlohmann::ordered_json fnJson;
  fnJson["config"] = resolvedConfigJson(context.config);
  fnJson["fnPairs"] = fn.fnPairs;
  fnJson["fnDescriptions"] = fn.fnDescriptions;
  auto fraction = [](const std::optional<double>& f) -> nlohmann::ordered_json {
    if (f) return *f;
    return nullptr;
  };
  fnJson["descriptionsWithNeighbors"] = fn.descriptionsWithNeighbors;
  fnJson["fracDescriptionsWithNeighbors"] = fraction(fn.fracDescriptionsWithNeighbors);
  fnJson["descriptionsWithNeighborsInGt"] = fn.descriptionsWithNeighborsInGt;
  fnJson["fracDescriptionsWithNeighborsInGt"] =
      fraction(fn.fracDescriptionsWithNeighborsInGt);
  fnJson["descriptionsWithIdentifiedNeighbors"] =
      fn.descriptionsWithIdentifiedNeighbors;
  fnJson["fracDescriptionsWithIdentifiedNeighbors"] =
      fraction(fn.fracDescriptionsWithIdentifiedNeighbors);
  fnJson["pairsWithMatchingNeighbors"] = fn.pairsWithMatchingNeighbors;
  fnJson["fracPairsWithMatchingNeighbors"] =
      fraction(fn.fracPairsWithMatchingNeighbors);
  fnJson["pairsWithCommonIdentifiedMatch"] = fn.pairsWithCommonIdentifiedMatch;
  fnJson["fracPairsWithCommonIdentifiedMatch"] =
      fraction(fn.fracPairsWithCommonIdentifiedMatch);
  writeFile(outPath(context.config, "fn_analysis.json"), fnJson.dump(2) + "\n");

  const StructuralSample sample = sample_structural_analysis(
      gt, blocks.universe(), context.config.sampleSize, context.config.seed);
  if (sample.clipped) {
    context.warnings.push_back(
        "sample size clipped to the available match/non-match population");
  }
  nlohmann::ordered_json sampleJson;
  sampleJson["config"] = resolvedConfigJson(context.config);
  sampleJson["requestedSampleSize"] = sample.requestedSampleSize;
  sampleJson["sampledMatches"] = sample.sampledMatches;
  sampleJson["sampledNonMatches"] = sample.sampledNonMatches;
  sampleJson["clipped"] = sample.clipped;
  sampleJson["matchesWithNeighbors"] = sample.matchesWithNeighbors;
  sampleJson["nonMatchesWithNeighbors"] = sample.nonMatchesWithNeighbors;
  sampleJson["medianNeighborPairsMatches"] = sample.medianNeighborPairsMatches;
  sampleJson["medianNeighborPairsNonMatches"] =
      sample.medianNeighborPairsNonMatches;
  sampleJson["matchesWithMatchingNeighbors"] =
      sample.matchesWithMatchingNeighbors;
  sampleJson["nonMatchesWithMatchingNeighbors"] =
      sample.nonMatchesWithMatchingNeighbors;
  writeFile(outPath(context.config, "structural_analysis.json"),
            sampleJson.dump(2) + "\n");

  flushWarnings(context, log);
  log << "fn pairs: " << fn.fnPairs << '\n'
      << "sampled matches/non-matches: " << sample.sampledMatches << "/"
      << sample.sampledNonMatches << '\n';
  return 0;
}

int cmd_all(RunContext& context, std::ostream& log) {
  cmd_ingest(context, log);
  cmd_block(context, log);
  cmd_eval(context, log);
  cmd_analyze(context, log);
  return 0;
}

int dispatch_command(const std::string& command, const RunConfig& config,
                     std::ostream& log, std::ostream& err) {
  try {
    RunContext context(config);
    if (command == "ingest") return cmd_ingest(context, log);
    if (command == "block") return cmd_block(context, log);
    if (command == "eval") return cmd_eval(context, log);
    if (command == "analyze") return cmd_analyze(context, log);
    if (command == "all") return cmd_all(context, log);
    throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace erblock
