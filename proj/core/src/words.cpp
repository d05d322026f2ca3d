#include "treesym/words.hpp"

#include <sstream>
#include <stdexcept>

namespace treesym {

std::string word_str(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(w[i]);
  }
  return out;
}

Word word_parse(const std::string& s) {
  Word w;
  std::istringstream in(s);
  int x;
  while (in >> x) {
    if (x == 0) throw std::invalid_argument("word letters are nonzero signed indices");
    w.push_back(x);
  }
  return w;
}

Word word_inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

Word word_concat(const Word& w, const Word& v) {
  Word out = w;
  for (int x : v) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

Aut word_aut(const std::vector<Aut>& gens, const Word& w) {
  if (gens.empty()) throw std::invalid_argument("empty generator tuple");
  Aut g(gens.front().k(), {});
  for (int letter : w) {
    const std::size_t idx = static_cast<std::size_t>(std::abs(letter)) - 1;
    if (idx >= gens.size()) throw std::invalid_argument("word letter out of range");
    g = compose(letter > 0 ? gens[idx] : inverse(gens[idx]), g);
  }
  return g;
}

namespace {

// Letter order +1, -1, +2, -2, ...
int letter_at(int slot) { return (slot % 2 == 0) ? slot / 2 + 1 : -(slot / 2 + 1); }

bool dfs(int n_gens, int remaining, int last_letter, int depth,
         const std::function<WordVisit(int, int)>& push, const std::function<void()>& pop) {
  for (int slot = 0; slot < 2 * n_gens; ++slot) {
    const int letter = letter_at(slot);
    if (letter == -last_letter) continue;  // keep the word reduced
    const WordVisit v = push(letter, depth + 1);
    if (v == WordVisit::Stop) {
      pop();
      return false;
    }
    if (v == WordVisit::Descend && remaining > 1) {
      if (!dfs(n_gens, remaining - 1, letter, depth + 1, push, pop)) {
        pop();
        return false;
      }
    }
    pop();
  }
  return true;
}

}  // namespace

bool enumerate_words_of_length(int n_gens, int length,
                               const std::function<WordVisit(int, int)>& push,
                               const std::function<void()>& pop) {
  if (n_gens < 1 || length < 1) throw std::invalid_argument("need n_gens >= 1 and length >= 1");
  return dfs(n_gens, length, 0, 0, push, pop);
}

void enumerate_words(int n_gens, int max_len, const std::function<WordVisit(int, int)>& push,
                     const std::function<void()>& pop) {
  for (int len = 1; len <= max_len; ++len)
    if (!enumerate_words_of_length(n_gens, len, push, pop)) return;
}

std::uint64_t reduced_word_count(int n_gens, int len) {
  if (len == 0) return 1;
  std::uint64_t c = static_cast<std::uint64_t>(2 * n_gens);
  for (int i = 1; i < len; ++i) c *= static_cast<std::uint64_t>(2 * n_gens - 1);
  return c;
}

}  // namespace treesym
