#include <algorithm>
#include <cmath>
#include <numeric>

#include "anxpipe/corpus.hpp"
#include "anxpipe/error.hpp"
#include "anxpipe/rng.hpp"

namespace anxpipe::corpus {

void SplitSpec::validate() const {
  if (!(train_frac > 0 && val_frac > 0 && test_frac > 0))
    throw DataError("split fractions must be positive");
  if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9)
    throw DataError("split fractions must sum to 1");
}

Splits split_dataset(const PostCollection& posts, const SplitSpec& spec) {
  spec.validate();
  for (const auto& p : posts)
    if (!p.label) throw DataError("unlabeled post: " + p.id);

  const std::size_t n = posts.size();
  const auto n_val = static_cast<std::size_t>(std::llround(spec.val_frac * static_cast<double>(n)));
  const auto n_test = static_cast<std::size_t>(std::llround(spec.test_frac * static_cast<double>(n)));
  if (n_val + n_test > n) throw DataError("split sizes exceed collection size");

  // Work on id-sorted indices so assignment does not depend on input order.
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < n; ++i) (*posts[i].label == 1 ? pos : neg).push_back(i);
  auto by_id = [&](std::size_t a, std::size_t b) { return posts[a].id < posts[b].id; };
  std::sort(pos.begin(), pos.end(), by_id);
  std::sort(neg.begin(), neg.end(), by_id);
  Rng rng(spec.seed);
  rng.shuffle(std::span<std::size_t>(pos));
  rng.shuffle(std::span<std::size_t>(neg));

  // Positive quota per split: round(size * global rate), clamped to supply.
  const double rate = n == 0 ? 0.0 : static_cast<double>(pos.size()) / static_cast<double>(n);
  auto quota = [&](std::size_t size, std::size_t available) {
    const auto q = static_cast<std::size_t>(std::llround(rate * static_cast<double>(size)));
    return std::min({q, size, available});
  };
  std::size_t val_pos = quota(n_val, pos.size());
  std::size_t test_pos = quota(n_test, pos.size() - val_pos);
  // Negatives must cover the rest of each held-out split.
  val_pos = std::max(val_pos, n_val > neg.size() ? n_val - neg.size() : 0);
  const std::size_t neg_left = neg.size() - (n_val - val_pos);
  test_pos = std::max(test_pos, n_test > neg_left ? n_test - neg_left : 0);

  // 0 = train, 1 = validation, 2 = test
  std::vector<int> where(n, 0);
  std::size_t pi = 0, ni = 0;
  for (std::size_t k = 0; k < val_pos; ++k) where[pos[pi++]] = 1;
  for (std::size_t k = 0; k < n_val - val_pos; ++k) where[neg[ni++]] = 1;
  for (std::size_t k = 0; k < test_pos; ++k) where[pos[pi++]] = 2;
  for (std::size_t k = 0; k < n_test - test_pos; ++k) where[neg[ni++]] = 2;

  Splits out;
  for (std::size_t i = 0; i < n; ++i) {
    auto& dst = where[i] == 0 ? out.train : where[i] == 1 ? out.validation : out.test;
    dst.push_back(posts[i]);
  }
  return out;
}

}  // namespace anxpipe::corpus
