#pragma once

#include <functional>
#include <string>
#include <vector>

#include "treesym/aut.hpp"

namespace treesym {

// A reduced word in the free group on n generators, stored as signed 1-based
// letters in application order: +i is generator i, -i its inverse, and the
// first letter acts first. Reduced means no letter is followed by its own
// inverse.
using Word = std::vector<int>;

std::string word_str(const Word& w);  // "1 2 -1"
Word word_parse(const std::string& s);
Word word_inverse(const Word& w);
// Concatenation in application order (w then v), with free cancellation at
// the junction.
Word word_concat(const Word& w, const Word& v);

// The group element of a word over the given tuple entries.
Aut word_aut(const std::vector<Aut>& gens, const Word& w);

enum class WordVisit { Descend, Prune, Stop };

// Depth-first enumeration of reduced words of length exactly `length`.
// push(letter, depth) is called as the word grows (depth is the new length);
// pop() on backtrack, balanced with every Descend/Prune outcome of push.
// Returns false if a push requested Stop.
bool enumerate_words_of_length(int n_gens, int length,
                               const std::function<WordVisit(int, int)>& push,
                               const std::function<void()>& pop);

// Radix (length-lexicographic) enumeration: all reduced words of length
// 1..max_len, shorter first, iterative deepening. Letter order within a
// position is +1, -1, +2, -2, ...
void enumerate_words(int n_gens, int max_len, const std::function<WordVisit(int, int)>& push,
                     const std::function<void()>& pop);

// Number of reduced words of length exactly len over n generators.
std::uint64_t reduced_word_count(int n_gens, int len);

}  // namespace treesym
