//! Deterministic, strongly biased English-like text.
//!
//! Used as plaintext for randomness measurements: words are drawn from a
//! small vocabulary with Zipf-like weights, grouped into capitalized
//! sentences and paragraphs. The byte distribution is dominated by lowercase
//! letters and spaces, like ordinary prose.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[rustfmt::skip]
const WORDS: &[&str] = &[
    "the", "of", "and", "to", "in", "is", "that", "for", "it", "as", "was", "with", "be", "by",
    "on", "not", "he", "this", "are", "or", "his", "from", "at", "which", "but", "have", "an",
    "had", "they", "you", "were", "their", "one", "all", "we", "can", "her", "has", "there",
    "been", "if", "more", "when", "will", "would", "who", "so", "no", "she", "other", "its",
    "may", "these", "what", "them", "than", "some", "him", "time", "into", "only", "do",
    "could", "new", "about", "two", "then", "first", "any", "like", "our", "very", "should",
    "people", "because", "through", "where", "between", "after", "before", "under", "without",
    "government", "information", "development", "security", "communication", "protocol",
    "message", "network", "quantum", "computer", "encryption", "permutation", "channel",
    "session", "random", "number", "standard", "certificate", "algorithm", "performance",
    "transport", "handshake", "server", "client", "public", "private", "secret", "future",
    "attack", "record", "layer", "system", "method", "example", "question", "answer",
    "morning", "evening", "country", "village", "garden", "window", "mountain", "river",
    "history", "science", "language", "library", "student", "teacher", "summer", "winter",
    "beautiful", "important", "different", "possible", "necessary", "small", "large",
    "always", "never", "often", "still", "again", "however", "therefore", "together",
    "structure", "yesterday", "university", "opportunity", "surroundings", "trustworthy",
    "everything", "throughout", "territory", "mysterious", "vocabulary", "your", "worry",
    "story", "pretty", "sorry", "tomorrow", "journey", "world", "volunteer", "struggle",
    "understanding", "responsibility", "technology", "organization", "relationship",
    "environment", "individual", "particularly", "previously", "surprisingly", "structural",
    "constitution", "conversation", "opportunities", "mysteriously", "sufficiently",
    "instructions", "consideration", "neighbourhood", "photography", "temperature",
    "restaurant", "university", "storyteller", "typewriter", "provisionally",
];

/// Generates exactly `len` bytes of text from `seed`.
pub fn english_text(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (1..=WORDS.len()).map(|rank| 1.0 / (rank as f64).powf(0.2)).collect();
    let pick = WeightedIndex::new(&weights).expect("weights are positive");
    let mut out = Vec::with_capacity(len + 32);
    let mut sentence_words = 0;
    let mut sentence_len = rng.gen_range(6..18);
    while out.len() < len {
        let word = WORDS[pick.sample(&mut rng)].as_bytes();
        if sentence_words == 0 {
            out.push(word[0].to_ascii_uppercase());
            out.extend_from_slice(&word[1..]);
        } else {
            out.extend_from_slice(word);
        }
        sentence_words += 1;
        if sentence_words == sentence_len {
            out.push(b'.');
            sentence_words = 0;
            sentence_len = rng.gen_range(6..18);
            out.push(if rng.gen_ratio(1, 10) { b'\n' } else { b' ' });
        } else if rng.gen_ratio(1, 30) {
            out.extend_from_slice(b", ");
        } else {
            out.push(b' ');
        }
    }
    out.truncate(len);
    out
}
