// Apache License, Version 2.0, refer to LICENSE.txt
#include "reorder/counting.hpp"

#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

namespace reorder {

void CountResult::merge(CountResult&& other) {
  table.merge(std::move(other.table));
  gen.merge(std::move(other.gen));
  sentences += other.sentences;
  events += other.events;
  skipped_missing_parse += other.skipped_missing_parse;
}

void count_sentence(const SentencePair& sp, const CounterConfig& cfg,
                    CountResult& out) {
  ++out.sentences;

  const bool want_gen = cfg.gen_scheme.has_value();
  if (want_gen && (!sp.src_parse || !sp.tgt_parse)) {
    if (cfg.allow_missing_parses) {
      ++out.skipped_missing_parse;
      return;
    }
    throw ConfigError("sentence " + std::to_string(sp.index) +
                      " is missing a dependency parse required for "
                      "generalized counting");
  }

  AlignmentIndex index(sp);
  std::optional<BlockCornerIndex> corners;
  if (cfg.model == ModelKind::Hrm) corners.emplace(index);

  for (const PhrasePair& pp : extract_phrase_pairs(index, cfg.max_len)) {
    std::string key = make_key(sp.src, pp.src, sp.tgt, pp.tgt);

    std::string gen_key;
    if (want_gen) {
      auto gen_src = generalize(sp.src, pp.src, *sp.src_parse, *cfg.gen_scheme);
      auto gen_tgt = generalize(sp.tgt, pp.tgt, *sp.tgt_parse, *cfg.gen_scheme);
      gen_key = make_key(join_tokens(gen_src), join_tokens(gen_tgt));
      out.gen.lex_to_gen[key][gen_key] += 1;
    }

    for (Side side : kSides) {
      Orientation o = cfg.model == ModelKind::Lrm
                          ? lrm_orientation(pp, side, index)
                          : hrm_orientation(pp, side, index, *corners);
      out.table.add_event(key, side, o);
      if (want_gen) out.gen.gen_counts.add_event(gen_key, side, o);
      ++out.events;
    }
    if (cfg.record_alignments)
      out.table.add_alignment(key, local_alignment(sp.links, pp));
  }
}

namespace {

// Bounded batch queue between the reader and the counting workers.
class BatchQueue {
 public:
  explicit BatchQueue(std::size_t capacity) : capacity_(capacity) {}

  // Returns false once the queue has been aborted.
  bool push(std::vector<SentencePair>&& batch) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return queue_.size() < capacity_ || aborted_; });
    if (aborted_) return false;
    queue_.push_back(std::move(batch));
    not_empty_.notify_one();
    return true;
  }

  bool pop(std::vector<SentencePair>& batch) {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return !queue_.empty() || done_ || aborted_; });
    if (aborted_ || queue_.empty()) return false;
    batch = std::move(queue_.front());
    queue_.pop_front();
    not_full_.notify_one();
    return true;
  }

  void close() {
    std::lock_guard lock(mu_);
    done_ = true;
    not_empty_.notify_all();
  }

  void abort() {
    std::lock_guard lock(mu_);
    aborted_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable not_empty_, not_full_;
  std::deque<std::vector<SentencePair>> queue_;
  std::size_t capacity_;
  bool done_ = false;
  bool aborted_ = false;
};

constexpr std::size_t kBatchSize = 64;

}  // namespace

CountResult count_corpus(CorpusReader& reader, const CounterConfig& cfg) {
  if (cfg.workers <= 1) {
    CountResult result;
    while (auto sp = reader.next()) count_sentence(*sp, cfg, result);
    return result;
  }

  const int workers = cfg.workers;
  BatchQueue queue(static_cast<std::size_t>(workers) * 4);
  std::vector<CountResult> results(workers);
  std::vector<std::thread> threads;
  std::mutex error_mu;
  std::exception_ptr error;

  auto record_error = [&] {
    {
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
    }
    queue.abort();
  };

  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        std::vector<SentencePair> batch;
        while (queue.pop(batch))
          for (const SentencePair& sp : batch) count_sentence(sp, cfg, results[w]);
      } catch (...) {
        record_error();
      }
    });
  }

  try {
    std::vector<SentencePair> batch;
    batch.reserve(kBatchSize);
    while (auto sp = reader.next()) {
      batch.push_back(std::move(*sp));
      if (batch.size() >= kBatchSize) {
        bool accepted = queue.push(std::move(batch));
        batch = {};
        if (!accepted) break;
        batch.reserve(kBatchSize);
      }
    }
    if (!batch.empty()) queue.push(std::move(batch));
  } catch (...) {
    record_error();
  }
  queue.close();
  for (auto& t : threads) t.join();

  if (error) std::rethrow_exception(error);

  CountResult merged;
  for (auto& r : results) merged.merge(std::move(r));
  return merged;
}

}  // namespace reorder
