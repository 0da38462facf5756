#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "propdetect/corpus.hpp"

namespace propdetect {

/// Unigram distribution an article's tokens are drawn from. Marked
/// dialects skew toward a class-specific marker block of the vocabulary;
/// the neutral dialect is uniform over the whole vocabulary.
enum class Dialect { kNeutral, kMainstreamMarked, kPropagandaMarked };

std::string to_string(Dialect dialect);
Dialect dialect_from_string(const std::string& name);

struct SourcePlan {
  std::string name;
  CorpusSide side = CorpusSide::kMainstream;
  Leaning leaning = Leaning::kUnrated;
  Credibility credibility = Credibility::kHigh;
  Dialect dialect = Dialect::kNeutral;
  int articles = 0;
  // Per-source multiplier on the plan's lexical strength, so sources can
  // speak their dialect more or less distinctly.
  double lexical_strength = 1.0;
};

/// Which feature families carry class signal, and how strongly (0 = the
/// class-conditional distributions coincide, 1 = maximally separated).
struct SignalPlan {
  double lexical = 0.0;
  double genre = 0.0;
  double topic = 0.0;
  double persuasion = 0.0;
};

struct SyntheticSpec {
  std::vector<SourcePlan> sources;
  SignalPlan signal;
  int vocab_size = 1200;
  int tokens_per_article = 200;
  int embedding_dim = 300;
  // Fraction of each source's articles that speak the neutral dialect
  // regardless of the source plan (plain wire-copy pieces), so text never
  // separates the classes perfectly.
  double dialect_noise = 0.0;

  void validate() const;
};

/// Deterministic pure function of (spec, seed): same inputs give byte
/// identical JSONL after save_corpus. Articles carry annotations sampled
/// from the plan's class-conditional distributions.
Corpus generate_synthetic_corpus(const SyntheticSpec& spec,
                                 std::uint64_t seed,
                                 const TechniqueRegistry& registry);

/// Word vectors for the synthetic vocabulary in the text word-vector
/// format. Each token's vector depends only on (token, seed).
void write_synthetic_embeddings(const SyntheticSpec& spec, std::uint64_t seed,
                                const std::string& path);

// The class-conditional distributions implied by a plan, exposed so tests
// can check them without re-deriving the generator's arithmetic.
std::vector<double> genre_distribution(const SignalPlan& plan, int label,
                                       int genre_count);
std::vector<double> topic_distribution(const SignalPlan& plan, int label,
                                       int topic_count);
std::vector<double> persuasion_rates(const SignalPlan& plan, int label,
                                     const TechniqueRegistry& registry);
std::vector<double> unigram_distribution(const SyntheticSpec& spec,
                                         Dialect dialect,
                                         double lexical_strength = 1.0);

// Shipped corpus plans.
//
// full_scale_spec: 4223 articles (3219 propaganda / 1004 mainstream)
// across the 14 sources of the default source map, every source speaking
// its class dialect.
//
// robustness_spec: a smaller corpus where lexical signal is confined to
// the high-credibility mainstream sources while persuasion counts carry
// class signal everywhere, so text-only models degrade under credibility
// style splits and hybrid models do not.
//
// mini_spec: a few hundred articles for smoke tests.
SyntheticSpec full_scale_spec();
SyntheticSpec robustness_spec();
SyntheticSpec mini_spec();

SyntheticSpec synthetic_spec_from_json(const std::string& path);
void synthetic_spec_to_json(const SyntheticSpec& spec,
                            const std::string& path);

}  // namespace propdetect
