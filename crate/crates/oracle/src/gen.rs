//! Seeded document generators shared by the test suites.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use docdup_core::Threshold;
use rand::seq::SliceRandom;
use rand::Rng;

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

/// Hands out words that were never handed out before.
#[derive(Debug, Default)]
pub struct Words {
    used: BTreeSet<String>,
}

impl Words {
    pub fn new() -> Self {
        Self::default()
    }

    /// A fresh lowercase word of `min..=max` letters. `min` must be at least
    /// 3 or the generator may run out of words.
    pub fn fresh<R: Rng>(&mut self, rng: &mut R, min: usize, max: usize) -> String {
        loop {
            let len = rng.gen_range(min..=max);
            let word: String = (0..len).map(|_| LETTERS[rng.gen_range(0..LETTERS.len())] as char).collect();
            if self.used.insert(word.clone()) {
                return word;
            }
        }
    }

    /// `tokens` fresh words; the count is drawn from the range.
    pub fn phrase<R: Rng>(&mut self, rng: &mut R, tokens: RangeInclusive<usize>, min: usize, max: usize) -> Vec<String> {
        let n = rng.gen_range(tokens);
        (0..n).map(|_| self.fresh(rng, min, max)).collect()
    }
}

/// A document holding `m` variants of one template with `n` fixed parts.
#[derive(Debug, Clone)]
pub struct Template {
    pub text: String,
    /// Fixed parts, tokens joined by single spaces.
    pub parts: Vec<String>,
    /// `fillers[k][j]` is the text between parts `j` and `j + 1` in variant `k`.
    pub fillers: Vec<Vec<String>>,
}

/// Build `m` variants of a template with `n` parts of `part_tokens` tokens
/// each. Every filler is sized so that any run of consecutive parts with its
/// fillers stays within `threshold`. Variants are separated by unrelated
/// sentences, and every filler and separator word is unique.
pub fn template_document<R: Rng>(rng: &mut R, n: usize, m: usize, part_tokens: usize, threshold: Threshold) -> Template {
    let mut words = Words::new();
    let parts: Vec<String> = (0..n).map(|_| words.phrase(rng, part_tokens..=part_tokens, 3, 7).join(" ")).collect();
    let min_len = parts.iter().map(|p| p.chars().count() as u64).min().unwrap_or(0);
    // distance of a filler is its length plus the two separating spaces
    let budget = (threshold.numer() * min_len / threshold.denom()).saturating_sub(2) as usize;
    assert!(budget >= 3, "parts too short for a filler under {threshold}");

    let mut text = String::new();
    let mut fillers = Vec::with_capacity(m);
    for _ in 0..m {
        text.push_str(&noise(rng, &mut words));
        let mut row = Vec::with_capacity(n.saturating_sub(1));
        for (j, part) in parts.iter().enumerate() {
            if j > 0 {
                let filler = filler(rng, &mut words, budget);
                text.push(' ');
                text.push_str(&filler);
                text.push(' ');
                row.push(filler);
            }
            text.push_str(part);
        }
        text.push_str(".\n");
        fillers.push(row);
    }
    text.push_str(&noise(rng, &mut words));
    Template { text, parts, fillers }
}

fn filler<R: Rng>(rng: &mut R, words: &mut Words, budget: usize) -> String {
    if budget >= 7 && rng.gen_bool(0.5) {
        let first = rng.gen_range(3..=budget - 4);
        let second = budget - 1 - first;
        format!("{} {}", words.fresh(rng, 3, first), words.fresh(rng, 3, second.max(3)))
    } else {
        words.fresh(rng, 3, budget.min(9))
    }
}

fn noise<R: Rng>(rng: &mut R, words: &mut Words) -> String {
    let mut s = words.phrase(rng, 4..=8, 3, 9).join(" ");
    s.push_str(".\n");
    s
}

const SEPARATORS: &[&str] = &[" ", " ", " ", ", ", ". ", "\n", " (", ") ", ": "];

fn join_tokens<R: Rng>(rng: &mut R, tokens: &[String]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push_str(SEPARATORS.choose(rng).copied().unwrap_or(" "));
        }
        out.push_str(t);
    }
    out
}

/// A random document of at most `max_tokens` tokens mixing noise over a
/// small alphabet with variants of a few short templates.
pub fn conformance_document<R: Rng>(rng: &mut R, max_tokens: usize) -> String {
    let alphabet: Vec<String> = (0..rng.gen_range(3..=10)).map(|i| format!("t{i}")).collect();
    let mut words = Words::new();
    let templates: Vec<Vec<Vec<String>>> = (0..rng.gen_range(1..=3))
        .map(|_| {
            (0..rng.gen_range(2..=4))
                .map(|_| {
                    (0..rng.gen_range(3..=7))
                        .map(|_| if rng.gen_bool(0.6) { words.fresh(rng, 3, 6) } else { alphabet.choose(rng).unwrap().clone() })
                        .collect()
                })
                .collect()
        })
        .collect();
    let target = rng.gen_range(1..=max_tokens);
    let mut tokens: Vec<String> = Vec::new();
    while tokens.len() < target {
        if rng.gen_bool(0.4) {
            for _ in 0..rng.gen_range(1..=10) {
                tokens.push(alphabet.choose(rng).unwrap().clone());
            }
        } else {
            let template = templates.choose(rng).unwrap();
            for (j, part) in template.iter().enumerate() {
                if j > 0 {
                    for _ in 0..*[0, 1, 1, 1, 2, 3].choose(rng).unwrap() {
                        tokens.push(alphabet.choose(rng).unwrap().clone());
                    }
                }
                tokens.extend(part.iter().cloned());
            }
        }
    }
    tokens.truncate(max_tokens);
    join_tokens(rng, &tokens)
}

/// Up to `max_groups` short phrases, each repeated two or three times, laid
/// out in rows so that phrases of equal count tend to line up, with short
/// fillers in between.
pub fn clustered_document<R: Rng>(rng: &mut R, max_groups: usize) -> String {
    let mut words = Words::new();
    let g = rng.gen_range(1..=max_groups);
    let phrases: Vec<Vec<String>> = (0..g).map(|_| words.phrase(rng, 2..=4, 3, 6)).collect();
    let counts: Vec<usize> = (0..g).map(|_| rng.gen_range(2..=3)).collect();
    let rows = counts.iter().copied().max().unwrap_or(0);
    let shared = ["x", "y", "z"];

    let mut tokens: Vec<String> = Vec::new();
    for k in 0..rows {
        tokens.extend(words.phrase(rng, 1..=4, 3, 8));
        let mut order: Vec<usize> = (0..g).filter(|&i| counts[i] > k).collect();
        if rng.gen_bool(0.15) {
            order.shuffle(rng);
        }
        for (j, &i) in order.iter().enumerate() {
            if j > 0 {
                for _ in 0..*[0, 1, 1, 1, 2, 3].choose(rng).unwrap() {
                    let word = if rng.gen_bool(0.3) { shared.choose(rng).unwrap().to_string() } else { words.fresh(rng, 3, 4) };
                    tokens.push(word);
                }
            }
            tokens.extend(phrases[i].iter().cloned());
        }
    }
    tokens.extend(words.phrase(rng, 1..=4, 3, 8));
    join_tokens(rng, &tokens)
}

/// Prose-like text of at least `bytes` bytes: random sentences over a fixed
/// vocabulary, with boilerplate paragraphs repeated in variants.
pub fn large_document<R: Rng>(rng: &mut R, bytes: usize) -> String {
    let mut words = Words::new();
    let vocabulary: Vec<String> = (0..8000).map(|_| words.fresh(rng, 3, 10)).collect();
    let boilerplate: Vec<Vec<String>> = (0..300)
        .map(|_| {
            (0..rng.gen_range(1..=4))
                .map(|_| (0..rng.gen_range(6..=15)).map(|_| vocabulary.choose(rng).unwrap().clone()).collect::<Vec<_>>().join(" "))
                .collect()
        })
        .collect();

    let mut out = String::with_capacity(bytes + 1024);
    while out.len() < bytes {
        for _ in 0..rng.gen_range(3..=8) {
            if rng.gen_bool(0.08) {
                let parts = boilerplate.choose(rng).unwrap();
                for (j, part) in parts.iter().enumerate() {
                    if j > 0 {
                        out.push(' ');
                        out.push_str(vocabulary.choose(rng).unwrap());
                        out.push(' ');
                    }
                    out.push_str(part);
                }
                out.push_str(". ");
            } else {
                let n = rng.gen_range(8..=20);
                let sentence: Vec<&str> = (0..n).map(|_| vocabulary.choose(rng).unwrap().as_str()).collect();
                out.push_str(&sentence.join(" "));
                out.push_str(". ");
            }
        }
        out.push_str("\n\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn template_fillers_fit_the_budget() {
        let mut rng = StdRng::seed_from_u64(1);
        let t = template_document(&mut rng, 3, 4, 20, Threshold::default());
        assert_eq!(t.parts.len(), 3);
        assert_eq!(t.fillers.len(), 4);
        let min_len = t.parts.iter().map(|p| p.len()).min().unwrap();
        for row in &t.fillers {
            assert_eq!(row.len(), 2);
            for f in row {
                assert!(20 * (f.len() + 2) <= 3 * min_len, "{f:?}");
                assert!(t.text.contains(&format!(" {f} ")));
            }
        }
    }

    #[test]
    fn words_are_unique() {
        let mut rng = StdRng::seed_from_u64(2);
        let mut words = Words::new();
        let all: BTreeSet<String> = (0..500).map(|_| words.fresh(&mut rng, 3, 4)).collect();
        assert_eq!(all.len(), 500);
    }

    #[test]
    fn conformance_document_respects_cap() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let text = conformance_document(&mut rng, 50);
            let count = text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).count();
            assert!(count <= 50);
        }
    }
}
