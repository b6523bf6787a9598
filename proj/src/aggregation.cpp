#include "tca/aggregation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

#include "tca/errors.hpp"

namespace tca {

void AssessmentConfig::validate() const {
  if (!(impact >= 0 && impact <= 100)) {
    throw ContractError("impact must be within 0..100, got " + std::to_string(impact), "config.impact");
  }
  if (!(sim_threshold >= 0 && sim_threshold <= 1)) {
    throw ContractError("sim_threshold must be within 0..1, got " + std::to_string(sim_threshold),
                        "config.sim_threshold");
  }
  if (!(lo_threshold >= 0 && lo_threshold <= 1)) {
    throw ContractError("lo_threshold must be within 0..1, got " + std::to_string(lo_threshold),
                        "config.lo_threshold");
  }
}

const char* to_string(Verdict v) { return v == Verdict::yes ? "yes" : "no"; }

Verdict parse_verdict(std::string_view text) {
  std::string t(text);
  for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "yes") return Verdict::yes;
  if (t == "no") return Verdict::no;
  throw ContractError("verdict must be yes or no, got '" + std::string(text) + "'");
}

const char* to_string(Course::Role role) { return role == Course::Role::sending ? "sending" : "receiving"; }

std::vector<RowMatch> CreditDecision::matched_rows() const {
  std::vector<RowMatch> out;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(out), [](const RowMatch& r) { return r.matched; });
  return out;
}

SimilarityGrid final_grid(const SimilarityGrid& semantic, const SimilarityGrid& taxonomic, double impact) {
  if (!(impact >= 0 && impact <= 100)) throw ContractError("impact must be within 0..100", "config.impact");
  if (semantic.row_ids() != taxonomic.row_ids() || semantic.col_ids() != taxonomic.col_ids()) {
    throw ContractError("semantic and taxonomic grids disagree on LO ids");
  }
  const double tax_weight = impact / 100.0;
  const double sem_weight = 1.0 - tax_weight;
  SimilarityGrid out(GridKind::final, semantic.row_ids(), semantic.col_ids());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      const double v = sem_weight * semantic.at(i, j) + tax_weight * taxonomic.at(i, j);
      out.set(i, j, std::clamp(v, 0.0, 1.0));
    }
  }
  return out;
}

CreditDecision decide(const SimilarityGrid& final, const AssessmentConfig& config) {
  config.validate();
  if (final.kind() != GridKind::final) throw ContractError("decide needs a final grid");
  CreditDecision d;
  for (std::size_t i = 0; i < final.rows(); ++i) {
    RowMatch row;
    row.receiving = final.row_ids()[i];
    std::size_t best = 0;
    for (std::size_t j = 1; j < final.cols(); ++j) {
      if (final.at(i, j) > final.at(i, best)) best = j;
    }
    row.best_sending = final.col_ids()[best];
    row.score = final.at(i, best);
    row.matched = row.score >= config.sim_threshold;
    d.matched_count += row.matched;
    d.rows.push_back(std::move(row));
  }
  const auto m = static_cast<std::int64_t>(final.rows());
  d.match_fraction = static_cast<double>(d.matched_count) / static_cast<double>(m);
  constexpr std::int64_t kScale = 1'000'000;
  const auto needed = std::llround(config.lo_threshold * kScale);
  d.decision = static_cast<std::int64_t>(d.matched_count) * kScale >= needed * m ? Verdict::yes : Verdict::no;
  return d;
}

namespace {

template <typename Fn>
auto in_pass(const char* pass, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PassError&) {
    throw;
  } catch (const Error& e) {
    throw PassError(pass, e, std::current_exception());
  }
}

void check_course(const Course& course, Course::Role expected) {
  if (course.role != expected) {
    throw ContractError("course " + course.course_id + " is labelled " + to_string(course.role) + " but was given as " +
                            to_string(expected),
                        std::string(to_string(expected)) + ".role");
  }
  if (course.learning_outcomes.empty()) {
    throw ContractError("course " + course.course_id + " has no learning outcomes",
                        std::string(to_string(expected)) + ".learning_outcomes");
  }
}

}  // namespace

Assessment assess_pair(const Course& receiving, const Course& sending, const AssessmentConfig& config,
                       const TaxonomicPass& taxonomic, EmbeddingProvider& provider) {
  config.validate();
  check_course(receiving, Course::Role::receiving);
  check_course(sending, Course::Role::sending);

  auto classify_all = [&](const Course& course) {
    std::vector<LearningOutcome> out;
    for (const auto& lo : course.learning_outcomes) out.push_back(taxonomic.classify(lo));
    return out;
  };
  auto rec = in_pass("taxonomic", [&] { return classify_all(receiving); });
  auto snd = in_pass("taxonomic", [&] { return classify_all(sending); });
  auto tax_grid = in_pass("taxonomic", [&] { return taxonomic_grid(rec, snd); });
  auto sem_grid = in_pass("semantic", [&] { return semantic_grid(rec, snd, provider); });
  auto fin_grid = in_pass("aggregation", [&] { return final_grid(sem_grid, tax_grid, config.impact); });
  auto decision = in_pass("aggregation", [&] { return decide(fin_grid, config); });
  return Assessment{config,
                    std::move(rec),
                    std::move(snd),
                    std::move(tax_grid),
                    std::move(sem_grid),
                    std::move(fin_grid),
                    std::move(decision)};
}

Assessment reassess(const Assessment& base, const AssessmentConfig& config) {
  config.validate();
  Assessment out = base;
  out.config = config;
  if (config.impact != base.config.impact) out.final = final_grid(base.semantic, base.taxonomic, config.impact);
  out.decision = decide(out.final, config);
  return out;
}

std::int64_t agreement_hundredths(std::span<const LabeledDecision> decisions,
                                  std::span<const AnnotationRecord> annotations) {
  if (annotations.empty()) throw ContractError("no annotations");
  std::map<std::string, Verdict> human;
  for (const auto& a : annotations) {
    if (!human.emplace(a.course_pair_id, a.human_decision).second) {
      throw ContractError("duplicate annotation for " + a.course_pair_id);
    }
  }
  if (decisions.size() != annotations.size()) {
    throw ContractError("have " + std::to_string(decisions.size()) + " decisions for " +
                        std::to_string(annotations.size()) + " annotations");
  }
  std::int64_t equal = 0;
  std::map<std::string, bool> seen;
  for (const auto& d : decisions) {
    auto it = human.find(d.course_pair_id);
    if (it == human.end()) throw ContractError("no annotation for course pair " + d.course_pair_id);
    if (!seen.emplace(d.course_pair_id, true).second) throw ContractError("duplicate decision for " + d.course_pair_id);
    equal += d.decision == it->second;
  }
  const auto total = static_cast<std::int64_t>(annotations.size());
  // round(10000·equal/total) with halves going up, in integers.
  return (2 * 10000 * equal + total) / (2 * total);
}

double agreement(std::span<const LabeledDecision> decisions, std::span<const AnnotationRecord> annotations) {
  return static_cast<double>(agreement_hundredths(decisions, annotations)) / 100.0;
}

std::string format_percent(std::int64_t hundredths) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(hundredths / 100),
                static_cast<long long>(hundredths % 100));
  return buf;
}

}  // namespace tca
