// Copyright 2026 The faithctl Authors.
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

#include "faithctl/entailment.h"

namespace faithctl::nli {

// Fixed list; changing it changes every heuristic verdict.
const std::set<std::string, std::less<>>& FunctionWords() {
  static const std::set<std::string, std::less<>> kWords = {
      // articles, determiners, quantifiers
      "a", "an", "the", "this", "that", "these", "those", "some", "any",
      "each", "every", "all", "both", "either", "neither", "no", "such",
      "much", "many", "more", "most", "other", "another", "own", "same",
      // pronouns
      "i", "me", "my", "mine", "myself", "we", "us", "our", "ours",
      "ourselves", "you", "your", "yours", "yourself", "he", "him", "his",
      "himself", "she", "her", "hers", "herself", "it", "its", "itself",
      "they", "them", "their", "theirs", "themselves", "what", "which", "who",
      "whom", "whose", "i'm", "i've", "i'll", "i'd", "it's", "that's",
      // auxiliaries and copulas
      "am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
      "had", "having", "do", "does", "did", "doing", "will", "would", "shall",
      "should", "can", "could", "may", "might", "must",
      // prepositions
      "of", "in", "on", "at", "by", "for", "with", "about", "against",
      "between", "into", "through", "during", "before", "after", "above",
      "below", "to", "from", "up", "down", "out", "off", "over", "under",
      "around", "among", "within", "without", "via", "per",
      // conjunctions and particles
      "and", "but", "or", "nor", "so", "yet", "if", "then", "than", "because",
      "as", "until", "while", "although", "though", "whether", "not", "only",
      "also", "just", "too", "very",
      // adverbs with little content
      "here", "there", "when", "where", "why", "how", "again", "further",
      "once", "ever", "even", "still", "really", "quite", "well", "oh", "yes",
      "yeah", "actually",
  };
  return kWords;
}

}  // namespace faithctl::nli
