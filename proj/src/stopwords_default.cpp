// Copyright 2026 The collodp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Built-in copy of data/stopwords.txt. Keep the two in sync; the test suite
// diffs them.

#include "collodp/stopwords_default.hpp"

namespace collodp {

const char* const kDefaultStopwords[] = {
    "a", "about", "above", "across", "after", "afterwards",
    "again", "against", "all", "almost", "alone", "along",
    "already", "also", "although", "always", "am", "amid",
    "amidst", "among", "amongst", "an", "and", "another",
    "any", "anyhow", "anyone", "anything", "anyway", "anywhere",
    "are", "aren't", "around", "as", "at", "atop",
    "be", "became", "because", "become", "becomes", "becoming",
    "been", "before", "beforehand", "behind", "being", "below",
    "beneath", "beside", "besides", "between", "beyond", "both",
    "but", "by", "can", "can't", "cannot", "could",
    "couldn't", "despite", "did", "didn't", "do", "does",
    "doesn't", "doing", "don't", "done", "down", "during",
    "each", "either", "else", "elsewhere", "enough", "etc",
    "even", "ever", "every", "everyone", "everything", "everywhere",
    "except", "few", "for", "former", "formerly", "from",
    "further", "had", "hadn't", "has", "hasn't", "have",
    "haven't", "having", "he", "he'd", "he'll", "he's",
    "hence", "her", "here", "hereafter", "hereby", "herein",
    "hereupon", "hers", "herself", "him", "himself", "his",
    "how", "however", "i", "i'd", "i'll", "i'm",
    "i've", "if", "in", "indeed", "inside", "instead",
    "into", "is", "isn't", "it", "it's", "its",
    "itself", "just", "last", "latter", "latterly", "least",
    "less", "many", "may", "maybe", "me", "meanwhile",
    "might", "mightn't", "mine", "more", "moreover", "most",
    "mostly", "much", "must", "mustn't", "my", "myself",
    "namely", "near", "nearby", "neither", "never", "nevertheless",
    "next", "no", "nobody", "none", "nonetheless", "noone",
    "nor", "not", "nothing", "now", "nowhere", "of",
    "off", "often", "on", "once", "one", "only",
    "onto", "or", "other", "others", "otherwise", "ought",
    "oughtn't", "our", "ours", "ourselves", "out", "outside",
    "over", "own", "per", "perhaps", "please", "quite",
    "rather", "re", "really", "regarding", "same", "seem",
    "seemed", "seeming", "seems", "several", "shall", "shan't",
    "she", "she'd", "she'll", "she's", "should", "shouldn't",
    "since", "so", "some", "somehow", "someone", "something",
    "sometime", "sometimes", "somewhere", "still", "such", "than",
    "that", "that's", "the", "their", "theirs", "them",
    "themselves", "then", "thence", "there", "thereafter", "thereby",
    "therefore", "therein", "thereupon", "these", "they", "they'd",
    "they'll", "they're", "they've", "this", "those", "though",
    "through", "throughout", "thru", "thus", "to", "together",
    "too", "toward", "towards", "under", "underneath", "unless",
    "until", "unto", "up", "upon", "us", "used",
    "using", "various", "versus", "very", "via", "vs",
    "was", "wasn't", "we", "we'd", "we'll", "we're",
    "we've", "well", "were", "weren't", "what", "whatever",
    "when", "whence", "whenever", "where", "whereafter", "whereas",
    "whereby", "wherein", "whereupon", "wherever", "whether", "which",
    "while", "whilst", "whither", "who", "whoever", "whole",
    "whom", "whose", "why", "will", "with", "within",
    "without", "won't", "would", "wouldn't", "yet", "you",
    "you'd", "you'll", "you're", "you've", "your", "yours",
    "yourself", "yourselves",
};

const std::size_t kDefaultStopwordCount = 326;

}  // namespace collodp
