//! Bundled English stopword list, overridable by a user-supplied file
//! (one word per line).

use std::collections::HashSet;
use std::path::Path;

use crate::error::Result;

const ENGLISH: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
    "aren", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
    "but", "by", "can", "cannot", "could", "couldn", "did", "didn", "do", "does", "doesn",
    "doing", "don", "down", "during", "each", "few", "for", "from", "further", "had", "hadn",
    "has", "hasn", "have", "haven", "having", "he", "her", "here", "hers", "herself", "him",
    "himself", "his", "how", "i", "if", "in", "into", "is", "isn", "it", "its", "itself", "just",
    "let", "me", "more", "most", "mustn", "my", "myself", "no", "nor", "not", "now", "of", "off",
    "on", "once", "only", "or", "other", "ought", "our", "ours", "ourselves", "out", "over",
    "own", "same", "shan", "she", "should", "shouldn", "so", "some", "such", "than", "that",
    "the", "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this",
    "those", "through", "to", "too", "under", "until", "up", "very", "was", "wasn", "we", "were",
    "weren", "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with",
    "won", "would", "wouldn", "you", "your", "yours", "yourself", "yourselves", "above", "across",
    "also", "although", "always", "among", "anyone", "anything", "around", "away", "back",
    "even", "ever", "every", "everyone", "everything", "get", "gets", "got", "however", "like",
    "made", "make", "makes", "many", "may", "might", "much", "must", "never", "next", "often",
    "one", "onto", "per", "rather", "really", "said", "say", "says", "see", "seen", "shall",
    "since", "still", "take", "takes", "though", "thus", "upon", "us", "via", "want", "well",
    "went", "yet",
];

pub fn english() -> HashSet<String> {
    ENGLISH.iter().map(|w| w.to_string()).collect()
}

/// Load stopwords from a file, one word per line; blank lines ignored.
pub fn from_file(path: &Path) -> Result<HashSet<String>> {
    let text = std::fs::read_to_string(path)?;
    Ok(text
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect())
}
